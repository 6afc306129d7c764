//! Inverse Hankel synthesis of surface displacements.
//!
//! `u_z(r) = ∫ U_z(k) J0(kr) k dk` and `u_r(r) = ∫ U_r(k) J1(kr) k dk`,
//! integrated with the trapezoid rule in `ln k`. The interval count doubles
//! (reusing every solved node) until two passes agree to the tolerance.

use num_complex::Complex64 as C64;

use super::profile::AmplitudeProfile;
use super::system::surface_transfer;
use super::{LoadSpec, SkinStack, SolverOptions};
use crate::bessel::{j0, j1};
use crate::elastic::{attenuation_factor, WaveKind};
use crate::error::{Error, Result};
use crate::parallel::{map_indexed, map_slice};

/// Complex surface displacement before the attenuation post-factor.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceResponse {
    pub radii: Vec<f64>,
    pub u_r: Vec<C64>,
    pub u_z: Vec<C64>,
    /// Trapezoid intervals of the accepted pass.
    pub intervals: usize,
    /// Relative change between the last two passes.
    pub relative_change: f64,
}

/// Load-weighted surface spectrum `[U_r, U_z]` at one node.
type NodeValue = [C64; 2];

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::Domain("at least one radius is required".into()));
    }
    if radii.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::Domain("radii must be finite and non-negative".into()));
    }
    Ok(())
}

fn solve_nodes(
    stack: &SkinStack,
    load: &LoadSpec,
    ks: &[f64],
    options: &SolverOptions,
) -> Result<Vec<NodeValue>> {
    let omega = load.omega();
    map_slice(ks, options.execution, |&k| {
        let t = surface_transfer(stack, omega, k, options)?;
        let fz = load.normal_spectrum(k);
        let fr = load.tangential_spectrum(k);
        Ok([
            t.normal[0] * fz + t.tangential[0] * fr,
            t.normal[1] * fz + t.tangential[1] * fr,
        ])
    })
    .into_iter()
    .collect()
}

/// `∫ g(k) k dk = ∫ g(k) k² du` over the nodes, plus the low-wavenumber
/// tail `∫_0^{k_min} g k dk` with `g k ~ k^p` fitted from the first two
/// nodes.
fn integrate(ks: &[f64], h: f64, g: impl Fn(usize) -> C64) -> C64 {
    let n = ks.len();
    let gk = |i: usize| g(i) * ks[i];
    let mut sum = C64::new(0.0, 0.0);
    for (i, &k) in ks.iter().enumerate() {
        let w = if i == 0 || i == n - 1 { 0.5 * h } else { h };
        sum += gk(i) * k * w;
    }
    let (g0, g1) = (gk(0), gk(1));
    let p = if g0.norm() > 0.0 && g1.norm() > 0.0 {
        ((g1.norm() / g0.norm()).ln() / (ks[1] / ks[0]).ln()).clamp(0.0, 3.0)
    } else {
        0.0
    };
    sum + g0 * ks[0] / (p + 1.0)
}

fn synthesize(
    radii: &[f64],
    ks: &[f64],
    h: f64,
    nodes: &[NodeValue],
    options: &SolverOptions,
) -> Vec<NodeValue> {
    map_slice(radii, options.execution, |&r| {
        let ur = integrate(ks, h, |i| nodes[i][0] * j1(ks[i] * r));
        let uz = integrate(ks, h, |i| nodes[i][1] * j0(ks[i] * r));
        [ur, uz]
    })
}

fn relative_change(old: &[NodeValue], new: &[NodeValue]) -> f64 {
    (0..2)
        .map(|c| {
            let scale = new.iter().map(|v| v[c].norm()).fold(0.0, f64::max);
            let diff = old
                .iter()
                .zip(new)
                .map(|(a, b)| (a[c] - b[c]).norm())
                .fold(0.0, f64::max);
            if scale > 0.0 {
                diff / scale
            } else {
                diff
            }
        })
        .fold(0.0, f64::max)
}

/// Complex surface displacements at `radii` (m) under `load`.
pub fn surface_response(
    stack: &SkinStack,
    load: &LoadSpec,
    radii: &[f64],
    options: &SolverOptions,
) -> Result<SurfaceResponse> {
    load.validate()?;
    check_radii(radii)?;
    let zero = C64::new(0.0, 0.0);
    if load.is_zero() {
        return Ok(SurfaceResponse {
            radii: radii.to_vec(),
            u_r: vec![zero; radii.len()],
            u_z: vec![zero; radii.len()],
            intervals: 0,
            relative_change: 0.0,
        });
    }
    let a = load.disk_radius;
    let (u_min, u_max) = ((options.k_min_factor / a).ln(), (options.k_max_factor / a).ln());
    let node_k = |i: usize, n: usize| (u_min + (u_max - u_min) * i as f64 / n as f64).exp();

    let mut n = options.initial_intervals.max(2);
    let mut ks: Vec<f64> = (0..=n).map(|i| node_k(i, n)).collect();
    let mut nodes = solve_nodes(stack, load, &ks, options)?;
    let mut current = synthesize(radii, &ks, (u_max - u_min) / n as f64, &nodes, options);

    let mut change = f64::INFINITY;
    loop {
        let refined = 2 * n;
        if refined > options.max_intervals {
            return Err(Error::Accuracy {
                relative_change: change,
                nodes: n + 1,
                tolerance: options.tolerance,
            });
        }
        let fresh_k: Vec<f64> = (0..n).map(|i| node_k(2 * i + 1, refined)).collect();
        let fresh = solve_nodes(stack, load, &fresh_k, options)?;
        let mut merged_k = Vec::with_capacity(refined + 1);
        let mut merged = Vec::with_capacity(refined + 1);
        for i in 0..=n {
            merged_k.push(ks[i]);
            merged.push(nodes[i]);
            if i < n {
                merged_k.push(fresh_k[i]);
                merged.push(fresh[i]);
            }
        }
        let h = (u_max - u_min) / refined as f64;
        let next = synthesize(radii, &merged_k, h, &merged, options);
        change = relative_change(&current, &next);
        ks = merged_k;
        nodes = merged;
        current = next;
        n = refined;
        if change <= options.tolerance {
            return Ok(SurfaceResponse {
                radii: radii.to_vec(),
                u_r: current.iter().map(|v| v[0]).collect(),
                u_z: current.iter().map(|v| v[1]).collect(),
                intervals: n,
                relative_change: change,
            });
        }
    }
}

/// Displacement magnitudes at `radii`, each multiplied by the top layer's
/// attenuation factor over the distance `r` (Primary speed for `u_r`,
/// Secondary for `u_z`).
pub fn surface_profile(
    stack: &SkinStack,
    load: &LoadSpec,
    radii: &[f64],
    options: &SolverOptions,
) -> Result<AmplitudeProfile> {
    let response = surface_response(stack, load, radii, options)?;
    let omega = load.omega();
    let top = stack.top();
    let factors: Vec<(f64, f64)> = map_indexed(radii.len(), options.execution, |i| {
        let r = radii[i];
        (
            attenuation_factor(top, omega, r, WaveKind::Primary),
            attenuation_factor(top, omega, r, WaveKind::Secondary),
        )
    });
    let u_r = response
        .u_r
        .iter()
        .zip(&factors)
        .map(|(u, f)| u.norm() * f.0)
        .collect();
    let u_z = response
        .u_z
        .iter()
        .zip(&factors)
        .map(|(u, f)| u.norm() * f.1)
        .collect();
    AmplitudeProfile::new(radii.to_vec(), u_r, u_z)
}
