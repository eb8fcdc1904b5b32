//! Brute-force boosted spin density matrix.
//!
//! The momentum trace is replaced by a weighted sum over a Gaussian momentum
//! grid, and every particle's spin is rotated by its own Wigner rotation.
//! Perfectly correlated momenta share one grid index. Nothing here uses the
//! moment polynomials, so it checks them independently.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Complex, Matrix2, SMatrix};

use crate::error::{Error, Result};
use crate::fidelity::{
    pure_fidelity_against, rest_density, uhlmann_fidelity, CorrelationMode, DensityMatrix8, FidelityValue,
    Matrix8, SpinStateKind,
};
use crate::kinematics::{wigner_angle_at, wigner_rotation_matrix};
use crate::quadrature::gauss_legendre;

pub use crate::moments::MomentumSupport;
use crate::moments::{WaveletWidth, WignerMoments};

/// Grid half-width in units of γ.
pub const GRID_TRUNCATION_SIGMAS: f64 = 6.5;
pub const MIN_GRID_NODES: usize = 8;
/// Allowed gap between `Tr(ρσ)` and the full Uhlmann fidelity of an oracle state.
pub const UHLMANN_CROSS_CHECK_TOL: f64 = 1e-10;

type Real8 = SMatrix<f64, 8, 8>;

/// Discrete momentum distribution: reduced momenta `u = p/mc` with
/// probabilities summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    support: MomentumSupport,
}

impl MomentumGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn support(&self) -> MomentumSupport {
        self.support
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wᵢ f(uᵢ)`.
    pub fn average<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * f(u)).sum()
    }

    /// Wigner moments of this discrete distribution.
    pub fn moments(&self, eta: f64, theta: f64) -> WignerMoments {
        let mut m = [0.0; 3];
        for (&u, &w) in self.nodes.iter().zip(&self.weights) {
            let c = wigner_angle_at(u, eta, theta).cos_omega();
            m[0] += w * c;
            m[1] += w * c * c;
            m[2] += w * c * c * c;
        }
        WignerMoments { m1: m[0], m2: m[1], m3: m[2] }
    }
}

/// Gauss–Legendre grid for the Gaussian momentum profile of width `gamma`.
///
/// Nodes are spaced in rapidity `ξ` over `[0, asinh(6.5γ)]` (or its mirror
/// image as well for the symmetric line) and mapped to `u = sinh ξ`; the
/// weights carry the `cosh ξ` Jacobian and the factor `exp(−u²/γ²)`, then are
/// renormalized to sum to one. Spacing in `ξ` resolves the `O(1)` structure
/// of the rotation angle near `u = 0` even when `γ` is large.
pub fn build_momentum_grid(gamma: WaveletWidth, n: usize, support: MomentumSupport) -> Result<MomentumGrid> {
    if n < MIN_GRID_NODES {
        return Err(Error::Precondition(format!(
            "momentum grid needs at least {MIN_GRID_NODES} nodes, got {n}"
        )));
    }
    let g = gamma.get();
    let xi_max = (GRID_TRUNCATION_SIGMAS * g).asinh();
    let (x, w) = gauss_legendre(n);
    let (offset, half) = match support {
        MomentumSupport::PositiveAxis => (0.5 * xi_max, 0.5 * xi_max),
        MomentumSupport::SymmetricLine => (0.0, xi_max),
    };

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (&xi_unit, &wi) in x.iter().zip(&w) {
        let xi = offset + half * xi_unit;
        let u = xi.sinh();
        nodes.push(u);
        weights.push(wi * half * xi.cosh() * (-(u / g).powi(2)).exp());
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(MomentumGrid { nodes, weights, support })
}

fn embed(factors: [Matrix2<f64>; 3]) -> Real8 {
    factors[0].kronecker(&factors[1].kronecker(&factors[2]))
}

/// `Σᵢ wᵢ Uᵢ ρ Uᵢᵀ`.
fn average_conjugation<I>(rho: &Real8, ops: I) -> Real8
where
    I: Iterator<Item = (f64, Real8)>,
{
    ops.fold(Real8::zeros(), |acc, (w, u)| acc + (u * rho * u.transpose()) * w)
}

fn check_angles(eta: f64, theta: f64) -> Result<()> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!("boost rapidity {eta} must be finite and >= 0")));
    }
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::InvalidParameter(format!("oracle boost angle {theta} outside [0, pi/2]")));
    }
    Ok(())
}

/// Boosted spin density matrix `ϱᵇ` built by explicit momentum averaging.
pub fn boosted_density_oracle(
    state: SpinStateKind,
    corr: CorrelationMode,
    grid: &MomentumGrid,
    eta: f64,
    theta: f64,
) -> Result<DensityMatrix8> {
    check_angles(eta, theta)?;
    let rest = rest_density(state).matrix().map(|z| z.re);
    let id = Matrix2::identity();
    let rotations: Vec<(f64, Matrix2<f64>)> = grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .map(|(&u, &w)| (w, wigner_rotation_matrix(&wigner_angle_at(u, eta, theta))))
        .collect();
    let on_one = |slot: usize, d: Matrix2<f64>| {
        let mut f = [id; 3];
        f[slot] = d;
        embed(f)
    };

    let boosted = match corr {
        // Independent momenta: the average factorizes into one averaged
        // single-particle map per tensor factor.
        CorrelationMode::Product => (0..3).fold(rest, |rho, slot| {
            average_conjugation(&rho, rotations.iter().map(|&(w, d)| (w, on_one(slot, d))))
        }),
        CorrelationMode::PairCorrelated => {
            let first = average_conjugation(&rest, rotations.iter().map(|&(w, d)| (w, on_one(0, d))));
            average_conjugation(&first, rotations.iter().map(|&(w, d)| (w, embed([id, d, d]))))
        }
        CorrelationMode::TripleCorrelated => {
            average_conjugation(&rest, rotations.iter().map(|&(w, d)| (w, embed([d, d, d]))))
        }
    };

    let complex: Matrix8 = boosted.map(|x| Complex::new(x, 0.0));
    DensityMatrix8::new(complex)
}

/// `Tr(ϱ ϱᵇ)` for the oracle state, verified against the full Uhlmann fidelity.
pub fn oracle_fidelity(
    state: SpinStateKind,
    corr: CorrelationMode,
    grid: &MomentumGrid,
    eta: f64,
    theta: f64,
) -> Result<FidelityValue> {
    let boosted = boosted_density_oracle(state, corr, grid, eta, theta)?;
    let rest = rest_density(state);
    let reduced = pure_fidelity_against(&rest, &boosted)?;
    let full = uhlmann_fidelity(&rest, &boosted)?;
    if (reduced.get() - full.get()).abs() > UHLMANN_CROSS_CHECK_TOL {
        return Err(Error::InvalidState(format!(
            "Uhlmann cross-check failed: Tr(rho sigma) = {}, Uhlmann = {}",
            reduced.get(),
            full.get()
        )));
    }
    Ok(reduced)
}
