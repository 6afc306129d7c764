//! Per-wavenumber boundary system: assembly, conditioning check, solve and
//! re-substitution residuals.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::modes::{ModalBasis, StateVector};
use super::{LoadSpec, SkinStack, SolverOptions};
use crate::error::{Error, Result};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Modal amplitudes of one solved wavenumber.
///
/// Finite layers carry `[down primary, down shear, up primary, up shear]`;
/// down-going modes are referenced to the layer's top face and up-going
/// modes to its bottom face. The substrate carries only its two decaying
/// modes. "Shear" is the divided-difference mode of [`ModalBasis`], which
/// stays regular at zero frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerCoefficients {
    pub wavenumber: f64,
    pub omega: f64,
    pub layers: Vec<[C64; 4]>,
    pub substrate: [C64; 2],
}

impl LayerCoefficients {
    pub fn iter(&self) -> impl Iterator<Item = &C64> {
        self.layers.iter().flatten().chain(self.substrate.iter())
    }
}

/// Assembled `(4L+2)²` boundary matrix for one wavenumber. Rows: surface
/// shear traction, surface normal traction, then for each interface the
/// continuity of `u_r`, `u_z`, `σ_zr`, `σ_zz`.
#[derive(Debug, Clone)]
pub struct BoundarySystem {
    pub matrix: DMatrix<C64>,
    pub wavenumber: f64,
    pub omega: f64,
}

impl BoundarySystem {
    /// Right-hand side for the given transformed tractions.
    pub fn rhs(&self, normal: C64, tangential: C64) -> DVector<C64> {
        let mut b = DVector::from_element(self.matrix.nrows(), ZERO);
        b[0] = tangential;
        b[1] = normal;
        b
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }
}

struct StackBases {
    bases: Vec<ModalBasis>,
}

impl StackBases {
    fn new(stack: &SkinStack, omega: C64, k: f64) -> Self {
        let bases = stack
            .layers()
            .iter()
            .map(|l| &l.material)
            .chain(std::iter::once(stack.substrate()))
            .map(|m| ModalBasis::new(m, omega, k))
            .collect();
        Self { bases }
    }

    /// Mode vectors of finite layer `i` evaluated at its top face.
    fn top_of(&self, stack: &SkinStack, i: usize) -> [StateVector; 4] {
        let b = &self.bases[i];
        let h = stack.thickness(i);
        [b.down_primary(0.0), b.down_shear(0.0), b.up_primary(-h), b.up_shear(-h)]
    }

    fn bottom_of(&self, stack: &SkinStack, i: usize) -> [StateVector; 4] {
        let b = &self.bases[i];
        let h = stack.thickness(i);
        [b.down_primary(h), b.down_shear(h), b.up_primary(0.0), b.up_shear(0.0)]
    }

    fn substrate_top(&self) -> [StateVector; 2] {
        let b = self.bases.last().expect("substrate basis");
        [b.down_primary(0.0), b.down_shear(0.0)]
    }
}

fn complex_omega(omega: f64, options: &SolverOptions) -> C64 {
    C64::new(omega, omega * options.frequency_damping)
}

/// Builds the boundary matrix for wavenumber `k` (1/m).
pub fn assemble_system(
    stack: &SkinStack,
    omega: f64,
    k: f64,
    options: &SolverOptions,
) -> Result<BoundarySystem> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain(format!("wavenumber must be positive, got {k}")));
    }
    let bases = StackBases::new(stack, complex_omega(omega, options), k);
    let n = stack.unknown_count();
    let layers = stack.layers().len();
    let mut a = DMatrix::from_element(n, n, ZERO);

    let surface = bases.top_of(stack, 0);
    for (col, mode) in surface.iter().enumerate() {
        a[(0, col)] = mode[2];
        a[(1, col)] = mode[3];
    }

    for i in 0..layers {
        let row = 2 + 4 * i;
        let above = bases.bottom_of(stack, i);
        for (j, mode) in above.iter().enumerate() {
            for c in 0..4 {
                a[(row + c, 4 * i + j)] = mode[c];
            }
        }
        let below_col = 4 * (i + 1);
        if i + 1 < layers {
            for (j, mode) in bases.top_of(stack, i + 1).iter().enumerate() {
                for c in 0..4 {
                    a[(row + c, below_col + j)] = -mode[c];
                }
            }
        } else {
            for (j, mode) in bases.substrate_top().iter().enumerate() {
                for c in 0..4 {
                    a[(row + c, below_col + j)] = -mode[c];
                }
            }
        }
    }
    Ok(BoundarySystem {
        matrix: a,
        wavenumber: k,
        omega,
    })
}

/// Solution of a boundary system for several right-hand sides.
struct Solved {
    columns: Vec<DVector<C64>>,
}

/// Row/column equilibration, LU, and a 1-norm condition estimate of the
/// equilibrated matrix.
fn solve_many(
    system: &BoundarySystem,
    rhs: &[DVector<C64>],
    options: &SolverOptions,
) -> Result<Solved> {
    let n = system.size();
    let mut a = system.matrix.clone();
    let row_scale: Vec<f64> = (0..n)
        .map(|i| {
            let m = a.row(i).iter().map(|v| v.norm()).fold(0.0, f64::max);
            if m > 0.0 {
                1.0 / m
            } else {
                1.0
            }
        })
        .collect();
    for i in 0..n {
        a.row_mut(i).scale_mut(row_scale[i]);
    }
    let col_scale: Vec<f64> = (0..n)
        .map(|j| {
            let m = a.column(j).iter().map(|v| v.norm()).fold(0.0, f64::max);
            if m > 0.0 {
                1.0 / m
            } else {
                1.0
            }
        })
        .collect();
    for j in 0..n {
        a.column_mut(j).scale_mut(col_scale[j]);
    }

    let conditioning = |condition: f64| Error::Conditioning {
        k: system.wavenumber,
        omega: system.omega,
        condition,
    };
    let norm1 = |m: &DMatrix<C64>| {
        (0..m.ncols())
            .map(|j| m.column(j).iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let lu = a.clone().lu();
    let inverse = lu.try_inverse().ok_or_else(|| conditioning(f64::INFINITY))?;
    let condition = norm1(&a) * norm1(&inverse);
    if !condition.is_finite() || condition > options.condition_limit {
        return Err(conditioning(condition));
    }

    let columns = rhs
        .iter()
        .map(|b| {
            let scaled = DVector::from_iterator(n, (0..n).map(|i| b[i] * row_scale[i]));
            let y = &inverse * scaled;
            DVector::from_iterator(n, (0..n).map(|j| y[j] * col_scale[j]))
        })
        .collect();
    Ok(Solved { columns })
}

fn unpack(stack: &SkinStack, x: &DVector<C64>, k: f64, omega: f64) -> LayerCoefficients {
    let layers = (0..stack.layers().len())
        .map(|i| [x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3]])
        .collect();
    let base = 4 * stack.layers().len();
    LayerCoefficients {
        wavenumber: k,
        omega,
        layers,
        substrate: [x[base], x[base + 1]],
    }
}

/// Modal amplitudes for the disk load at a single wavenumber.
pub fn solve_layer_coefficients(
    stack: &SkinStack,
    load: &LoadSpec,
    omega: f64,
    k: f64,
    options: &SolverOptions,
) -> Result<LayerCoefficients> {
    let system = assemble_system(stack, omega, k, options)?;
    let b = system.rhs(
        C64::new(load.normal_spectrum(k), 0.0),
        C64::new(load.tangential_spectrum(k), 0.0),
    );
    let solved = solve_many(&system, &[b], options)?;
    Ok(unpack(stack, &solved.columns[0], k, omega))
}

/// Surface displacement per unit transformed traction at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceTransfer {
    pub wavenumber: f64,
    /// `[U_r, U_z]` at z = 0 for unit normal traction.
    pub normal: [C64; 2],
    /// `[U_r, U_z]` at z = 0 for unit tangential traction.
    pub tangential: [C64; 2],
}

/// Solves the unit-normal and unit-tangential problems at once.
pub fn surface_transfer(
    stack: &SkinStack,
    omega: f64,
    k: f64,
    options: &SolverOptions,
) -> Result<SurfaceTransfer> {
    let system = assemble_system(stack, omega, k, options)?;
    let one = C64::new(1.0, 0.0);
    let rhs = [system.rhs(one, ZERO), system.rhs(ZERO, one)];
    let solved = solve_many(&system, &rhs, options)?;
    let surface = |x: &DVector<C64>| {
        let coeffs = unpack(stack, x, k, omega);
        let w = surface_state(stack, &coeffs, options);
        [w[0], w[1]]
    };
    Ok(SurfaceTransfer {
        wavenumber: k,
        normal: surface(&solved.columns[0]),
        tangential: surface(&solved.columns[1]),
    })
}

fn accumulate(modes: &[StateVector], amplitudes: &[C64]) -> StateVector {
    let mut w = [ZERO; 4];
    for (mode, amp) in modes.iter().zip(amplitudes) {
        for c in 0..4 {
            w[c] += mode[c] * amp;
        }
    }
    w
}

/// State vector `[U_r, U_z, S_r, S_z]` at the surface.
fn surface_state(stack: &SkinStack, coeffs: &LayerCoefficients, options: &SolverOptions) -> StateVector {
    let bases = StackBases::new(stack, complex_omega(coeffs.omega, options), coeffs.wavenumber);
    accumulate(&bases.top_of(stack, 0), &coeffs.layers[0])
}

/// Largest boundary-condition violations after re-substituting the modal
/// amplitudes into the layer fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryResidual {
    /// Worst traction mismatch relative to the largest transformed traction.
    pub stress: f64,
    /// Worst displacement mismatch relative to the surface displacement
    /// magnitude.
    pub displacement: f64,
}

impl BoundaryResidual {
    pub fn max(&self) -> f64 {
        self.stress.max(self.displacement)
    }
}

/// Evaluates the boundary conditions directly from the modal fields, without
/// the assembled matrix.
pub fn boundary_residual(
    stack: &SkinStack,
    load: &LoadSpec,
    coeffs: &LayerCoefficients,
    options: &SolverOptions,
) -> BoundaryResidual {
    let k = coeffs.wavenumber;
    let bases = StackBases::new(stack, complex_omega(coeffs.omega, options), k);
    let fz = C64::new(load.normal_spectrum(k), 0.0);
    let fr = C64::new(load.tangential_spectrum(k), 0.0);
    let traction_scale = fz.norm().max(fr.norm());

    let surface = accumulate(&bases.top_of(stack, 0), &coeffs.layers[0]);
    let displacement_scale = surface[0].norm().max(surface[1].norm());

    let mut stress: f64 = (surface[2] - fr).norm().max((surface[3] - fz).norm());
    let mut displacement: f64 = 0.0;
    let layers = stack.layers().len();
    for i in 0..layers {
        let above = accumulate(&bases.bottom_of(stack, i), &coeffs.layers[i]);
        let below = if i + 1 < layers {
            accumulate(&bases.top_of(stack, i + 1), &coeffs.layers[i + 1])
        } else {
            accumulate(&bases.substrate_top(), &coeffs.substrate)
        };
        displacement = displacement
            .max((above[0] - below[0]).norm())
            .max((above[1] - below[1]).norm());
        stress = stress
            .max((above[2] - below[2]).norm())
            .max((above[3] - below[3]).norm());
    }
    let relative = |v: f64, s: f64| if s > 0.0 { v / s } else { v };
    BoundaryResidual {
        stress: relative(stress, traction_scale),
        displacement: relative(displacement, displacement_scale),
    }
}
