//! Modal solutions of the axisymmetric elastodynamic equations inside one
//! homogeneous layer, in the Hankel (wavenumber) domain.
//!
//! A field with radial wavenumber `k` is written as
//! `u_r = U_r(z) J1(kr)`, `u_z = U_z(z) J0(kr)`,
//! `σ_zr = S_r(z) J1(kr)`, `σ_zz = S_z(z) J0(kr)`, and the state vector is
//! `[U_r, U_z, S_r, S_z]`.
//!
//! The Helmholtz potentials give compressional modes `e^{∓αz}` and shear
//! modes `e^{∓βz}` with `α² = k² − ω²/v_p²`, `β² = k² − ω²/v_s²`. As ω → 0
//! the two pairs coalesce and the plain potential basis becomes singular. The
//! second mode of each pair is therefore replaced by the divided difference
//! `(S − P)/(β − α)`, whose limit is the `z e^{-kz}` solution of elastostatics.
//! Every ratio below is written so that no cancellation occurs as ω → 0, and
//! all exponentials are referenced to the end of the layer towards which they
//! decay, so their magnitude never exceeds one.

use num_complex::Complex64 as C64;

use crate::materials::Material;

pub type StateVector = [C64; 4];

#[derive(Debug, Clone)]
pub(crate) struct ModalBasis {
    alpha: C64,
    beta: C64,
    /// β − α.
    gap: C64,
    p_down: StateVector,
    s_down: StateVector,
    c_down: StateVector,
    p_up: StateVector,
    s_up: StateVector,
    c_up: StateVector,
}

impl ModalBasis {
    /// `omega` may be complex (regularised frequency); `k > 0`.
    pub(crate) fn new(material: &Material, omega: C64, k: f64) -> Self {
        let lame = material.lame();
        let (lambda, mu) = (lame.lambda, lame.mu);
        let rho = material.density();
        let slowness_p = rho / (lambda + 2.0 * mu);
        let slowness_s = rho / mu;
        let w2 = omega * omega;

        let kc = C64::new(k, 0.0);
        let alpha = (kc * kc - w2 * slowness_p).sqrt();
        let beta = (kc * kc - w2 * slowness_s).sqrt();
        let gap = w2 * (slowness_p - slowness_s) / (alpha + beta);

        // (β − k)/(β − α) and (k − α)/(β − α) with ω² cancelled analytically.
        let spread = slowness_s - slowness_p;
        let c1 = slowness_s * (alpha + beta) / ((beta + kc) * spread);
        let c2 = -slowness_p * (alpha + beta) / ((kc + alpha) * spread);
        let c3 = -mu * ((beta + kc) * c1 + 2.0 * kc * c2);
        let c4 = -2.0 * mu * kc * c1 - (lambda + 2.0 * mu) * (kc + alpha) * c2;

        // λ(k² − α²) − 2μα², with k² − α² = ω²/v_p².
        let szz_p = lambda * w2 * slowness_p - 2.0 * mu * alpha * alpha;
        let shear_sum = mu * (beta * beta + kc * kc);

        Self {
            alpha,
            beta,
            gap,
            p_down: [kc, alpha, -2.0 * mu * kc * alpha, szz_p],
            s_down: [beta, kc, -shear_sum, -2.0 * mu * kc * beta],
            c_down: [c1, c2, c3, c4],
            p_up: [kc, -alpha, 2.0 * mu * kc * alpha, szz_p],
            s_up: [beta, -kc, shear_sum, -2.0 * mu * kc * beta],
            c_up: [c1, -c2, -c3, c4],
        }
    }

    #[cfg(test)]
    fn alpha(&self) -> C64 {
        self.alpha
    }

    #[cfg(test)]
    fn beta(&self) -> C64 {
        self.beta
    }

    /// Compressional mode decaying downwards, `depth ≥ 0` below its reference.
    pub(crate) fn down_primary(&self, depth: f64) -> StateVector {
        scale(&self.p_down, (-self.alpha * depth).exp())
    }

    /// Divided-difference shear mode decaying downwards.
    pub(crate) fn down_shear(&self, depth: f64) -> StateVector {
        let e = divided_exp_down(self.alpha, self.beta, self.gap, depth);
        let a = (-self.alpha * depth).exp();
        combine(&self.s_down, e, &self.c_down, a)
    }

    /// Compressional mode decaying upwards; `offset ≤ 0` above its reference.
    pub(crate) fn up_primary(&self, offset: f64) -> StateVector {
        scale(&self.p_up, (self.alpha * offset).exp())
    }

    /// Divided-difference shear mode decaying upwards.
    pub(crate) fn up_shear(&self, offset: f64) -> StateVector {
        let e = divided_exp_up(self.alpha, self.beta, self.gap, offset);
        let a = (self.alpha * offset).exp();
        combine(&self.s_up, e, &self.c_up, a)
    }
}

fn scale(v: &StateVector, s: C64) -> StateVector {
    [v[0] * s, v[1] * s, v[2] * s, v[3] * s]
}

fn combine(a: &StateVector, sa: C64, b: &StateVector, sb: C64) -> StateVector {
    [
        a[0] * sa + b[0] * sb,
        a[1] * sa + b[1] * sb,
        a[2] * sa + b[2] * sb,
        a[3] * sa + b[3] * sb,
    ]
}

/// `(e^x − 1)/x`, accurate near zero.
fn expm1_ratio(x: C64) -> C64 {
    if x.norm() < 0.5 {
        let mut term = C64::new(1.0, 0.0);
        let mut sum = term;
        for n in 2..30 {
            term *= x / n as f64;
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (x.exp() - 1.0) / x
    }
}

/// `(e^{-βζ} − e^{-αζ})/(β − α)` for ζ ≥ 0.
fn divided_exp_down(alpha: C64, beta: C64, gap: C64, depth: f64) -> C64 {
    let x = -gap * depth;
    if x.norm() < 0.5 {
        -depth * (-alpha * depth).exp() * expm1_ratio(x)
    } else {
        ((-beta * depth).exp() - (-alpha * depth).exp()) / gap
    }
}

/// `(e^{βζ} − e^{αζ})/(β − α)` for ζ ≤ 0.
fn divided_exp_up(alpha: C64, beta: C64, gap: C64, offset: f64) -> C64 {
    let x = gap * offset;
    if x.norm() < 0.5 {
        offset * (alpha * offset).exp() * expm1_ratio(x)
    } else {
        ((beta * offset).exp() - (alpha * offset).exp()) / gap
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn material() -> Material {
        Material::new("m", 120e3, 0.45, 1050.0, 3.0).unwrap()
    }

    /// d/dz of the state vector from the Navier equations in the Hankel domain.
    fn system_derivative(m: &Material, omega: C64, k: f64, w: &StateVector) -> StateVector {
        let l = m.lame();
        let (lam, mu, rho) = (l.lambda, l.mu, m.density());
        let [ur, uz, sr, sz] = *w;
        let w2 = omega * omega;
        let dur = sr / mu + k * uz;
        let duz = (sz - lam * k * ur) / (lam + 2.0 * mu);
        let dsr = -rho * w2 * ur + lam * k * (k * ur + duz) + 2.0 * mu * k * k * ur;
        let dsz = -rho * w2 * uz - k * sr;
        [dur, duz, dsr, dsz]
    }

    fn check_mode(f: impl Fn(f64) -> StateVector, z: f64, m: &Material, omega: C64, k: f64) {
        let h = 1e-7;
        let a = f(z + h);
        let b = f(z - h);
        let w = f(z);
        let expected = system_derivative(m, omega, k, &w);
        for c in 0..4 {
            let fd = (a[c] - b[c]) / (2.0 * h);
            let scale = expected[c].norm().max(fd.norm()).max(1e-30);
            assert!(
                (fd - expected[c]).norm() / scale < 1e-5,
                "component {c}: fd={fd} expected={}",
                expected[c]
            );
        }
    }

    #[test]
    fn modes_satisfy_navier_equations() {
        let m = material();
        for &(f_hz, damp) in &[(0.0, 0.0), (1e-3, 0.0), (125.0, 0.05), (400.0, 0.0)] {
            let omega = C64::new(2.0 * std::f64::consts::PI * f_hz, 0.0) * C64::new(1.0, damp);
            for &k in &[30.0, 400.0, 3000.0] {
                let basis = ModalBasis::new(&m, omega, k);
                for &z in &[0.0005, 0.002] {
                    check_mode(|d| basis.down_primary(d), z, &m, omega, k);
                    check_mode(|d| basis.down_shear(d), z, &m, omega, k);
                    check_mode(|d| basis.up_primary(d - 0.005), z, &m, omega, k);
                    check_mode(|d| basis.up_shear(d - 0.005), z, &m, omega, k);
                }
            }
        }
    }

    #[test]
    fn divided_difference_is_continuous_at_zero_frequency() {
        let m = material();
        let k = 500.0;
        let stat = ModalBasis::new(&m, C64::new(0.0, 0.0), k);
        let near = ModalBasis::new(&m, C64::new(1e-4, 0.0), k);
        for &z in &[0.0, 0.001, 0.004] {
            let a = stat.down_shear(z);
            let b = near.down_shear(z);
            let s = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for c in 0..4 {
                assert!((a[c] - b[c]).norm() / s < 1e-9, "z={z} c={c}");
            }
        }
    }

    #[test]
    fn exponential_branches_are_bounded() {
        let m = material();
        let basis = ModalBasis::new(&m, C64::new(800.0, 40.0), 20.0);
        assert!(basis.alpha().re >= 0.0 && basis.beta().re >= 0.0);
        let deep = basis.down_primary(10.0);
        assert!(deep.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn expm1_ratio_branches_agree() {
        for &x in &[C64::new(0.49, 0.1), C64::new(-0.3, 0.39)] {
            let direct = (x.exp() - 1.0) / x;
            assert!((expm1_ratio(x) - direct).norm() < 1e-14);
        }
        assert_eq!(expm1_ratio(C64::new(0.0, 0.0)), C64::new(1.0, 0.0));
    }
}
