//! Three-spin density matrices, the closed-form spin fidelities of GHZ and W
//! packets, and the Uhlmann fidelity of two mixed states.

mod density;

use std::fmt;
use std::str::FromStr;

use nalgebra::Complex;

pub use density::{
    basis_index, Complex64, DensityMatrix8, Matrix8, Vector8, HERMITIAN_TOL, NEGATIVE_EIGENVALUE_TOL,
    TRACE_TOL, ZERO_EIGENVALUE,
};

use crate::error::{Error, Result};
use crate::moments::WignerMoments;

/// Slack above 1 allowed for a computed fidelity.
pub const FIDELITY_SLACK: f64 = 1e-12;
/// Tolerance on the unit eigenvalue of a pure reference state.
pub const PURITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinStateKind {
    /// `(|↑↑↑⟩ + |↓↓↓⟩)/√2`
    Ghz,
    /// `(|↑↓↓⟩ + |↓↑↓⟩ + |↓↓↑⟩)/√3`
    W,
}

impl SpinStateKind {
    pub const ALL: [SpinStateKind; 2] = [SpinStateKind::Ghz, SpinStateKind::W];

    pub fn as_str(self) -> &'static str {
        match self {
            SpinStateKind::Ghz => "ghz",
            SpinStateKind::W => "w",
        }
    }

    /// Basis states in the superposition, all with equal real amplitude.
    fn support(self) -> &'static [usize] {
        match self {
            SpinStateKind::Ghz => &[0, 7],
            SpinStateKind::W => &[3, 5, 6],
        }
    }

    pub fn state_vector(self) -> Vector8 {
        let support = self.support();
        let amp = 1.0 / (support.len() as f64).sqrt();
        let mut psi = Vector8::zeros();
        for &i in support {
            psi[i] = Complex::new(amp, 0.0);
        }
        psi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrelationMode {
    /// Three independent momenta.
    Product,
    /// Momenta of particles 2 and 3 perfectly correlated.
    PairCorrelated,
    /// All three momenta perfectly correlated.
    TripleCorrelated,
}

impl CorrelationMode {
    pub const ALL: [CorrelationMode; 3] = [
        CorrelationMode::Product,
        CorrelationMode::PairCorrelated,
        CorrelationMode::TripleCorrelated,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CorrelationMode::Product => "product",
            CorrelationMode::PairCorrelated => "pair",
            CorrelationMode::TripleCorrelated => "triple",
        }
    }
}

impl fmt::Display for SpinStateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for CorrelationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpinStateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(SpinStateKind::Ghz),
            "w" => Ok(SpinStateKind::W),
            other => Err(Error::InvalidParameter(format!("unknown spin state '{other}' (expected ghz|w)"))),
        }
    }
}

impl FromStr for CorrelationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "product" => Ok(CorrelationMode::Product),
            "pair" => Ok(CorrelationMode::PairCorrelated),
            "triple" => Ok(CorrelationMode::TripleCorrelated),
            other => Err(Error::InvalidParameter(format!(
                "unknown correlation mode '{other}' (expected product|pair|triple)"
            ))),
        }
    }
}

/// A fidelity in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FidelityValue(f64);

impl FidelityValue {
    pub fn new(value: f64) -> Result<Self> {
        if (-FIDELITY_SLACK..=1.0 + FIDELITY_SLACK).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::Inconsistent(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// The pure spin state `|ψ⟩⟨ψ|` of the packet in its rest frame.
pub fn rest_density(state: SpinStateKind) -> DensityMatrix8 {
    let psi = state.state_vector();
    DensityMatrix8::from_raw(psi * psi.adjoint())
}

/// Spin fidelity as a polynomial in the Wigner moments.
pub fn closed_form_fidelity(
    state: SpinStateKind,
    corr: CorrelationMode,
    moments: &WignerMoments,
) -> Result<FidelityValue> {
    let WignerMoments { m1, m2, m3 } = *moments;
    let value = match (state, corr) {
        (SpinStateKind::Ghz, CorrelationMode::Product) => (m1 * m1 * m1 + 3.0 * m1 * m1 + 3.0 * m1 + 1.0) / 8.0,
        (SpinStateKind::Ghz, CorrelationMode::PairCorrelated) => {
            (m1 * m2 + 2.0 * m1 * m1 + m2 + 3.0 * m1 + 1.0) / 8.0
        }
        (SpinStateKind::Ghz, CorrelationMode::TripleCorrelated) => (m3 + 3.0 * m2 + 3.0 * m1 + 1.0) / 8.0,
        (SpinStateKind::W, CorrelationMode::Product) => {
            (7.0 * m1 * m1 * m1 + 5.0 * m1 * m1 + 5.0 * m1 + 7.0) / 24.0
        }
        (SpinStateKind::W, CorrelationMode::PairCorrelated) => {
            (39.0 * m1 * m2 + 7.0 * m2 + 10.0 * m1 * m1 - 3.0 * m1 + 19.0) / 72.0
        }
        (SpinStateKind::W, CorrelationMode::TripleCorrelated) => {
            (75.0 * m3 + 25.0 * m2 - 39.0 * m1 + 11.0) / 72.0
        }
    };
    FidelityValue::new(value)
}

/// `[Tr √(√ρ σ √ρ)]²`, evaluated as the squared trace norm of `√ρ √σ`.
pub fn uhlmann_fidelity(rho: &DensityMatrix8, sigma: &DensityMatrix8) -> Result<FidelityValue> {
    let product = rho.sqrt()? * sigma.sqrt()?;
    let trace_norm: f64 = product.singular_values().iter().sum();
    FidelityValue::new(trace_norm * trace_norm)
}

/// `Tr(ρσ)`, the Uhlmann fidelity when `ρ` is pure.
pub fn pure_fidelity_against(rho_pure: &DensityMatrix8, sigma: &DensityMatrix8) -> Result<FidelityValue> {
    let largest = rho_pure.eigenvalues().last().copied().unwrap_or(0.0);
    if (largest - 1.0).abs() > PURITY_TOL {
        return Err(Error::Precondition(format!(
            "reference state is not pure (largest eigenvalue {largest})"
        )));
    }
    let overlap = (rho_pure.matrix() * sigma.matrix()).trace().re;
    FidelityValue::new(overlap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_vector(rng: &mut StdRng) -> Vector8 {
        Vector8::from_fn(|_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn random_mixed(rng: &mut StdRng) -> DensityMatrix8 {
        let g = Matrix8::from_fn(|_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let m = g * g.adjoint();
        let t = m.trace().re;
        DensityMatrix8::new(m.unscale(t)).unwrap()
    }

    fn random_pure(rng: &mut StdRng) -> DensityMatrix8 {
        DensityMatrix8::from_state_vector(&random_vector(rng)).unwrap()
    }

    #[test]
    fn rest_states_have_expected_elements() {
        let ghz = rest_density(SpinStateKind::Ghz);
        for i in 0..8 {
            for j in 0..8 {
                let expected = if [0, 7].contains(&i) && [0, 7].contains(&j) { 0.5 } else { 0.0 };
                assert!((ghz.element(i, j) - Complex::new(expected, 0.0)).norm() < 1e-15);
            }
        }
        let w = rest_density(SpinStateKind::W);
        for i in 0..8 {
            for j in 0..8 {
                let expected = if [3, 5, 6].contains(&i) && [3, 5, 6].contains(&j) { 1.0 / 3.0 } else { 0.0 };
                assert!((w.element(i, j) - Complex::new(expected, 0.0)).norm() < 1e-15);
            }
        }
        assert_eq!(basis_index(0, 1, 1), 3);
        assert_eq!(basis_index(1, 1, 0), 6);
        for state in SpinStateKind::ALL {
            let rho = rest_density(state);
            assert!((rho.trace() - 1.0).abs() < 1e-12);
            assert!((rho.matrix() * rho.matrix() - rho.matrix()).camax() < 1e-12);
            assert!(DensityMatrix8::new(rho.matrix().clone_owned()).is_ok());
        }
    }

    #[test]
    fn polynomials_are_one_without_boost() {
        for state in SpinStateKind::ALL {
            for corr in CorrelationMode::ALL {
                let f = closed_form_fidelity(state, corr, &WignerMoments::UNBOOSTED).unwrap();
                assert!((f.get() - 1.0).abs() < 1e-15, "{state}/{corr}");
            }
        }
    }

    #[test]
    fn polynomials_at_zero_moments() {
        let zero = WignerMoments::new(0.0, 0.0, 0.0).unwrap();
        let f = |s, c| closed_form_fidelity(s, c, &zero).unwrap().get();
        assert!((f(SpinStateKind::Ghz, CorrelationMode::Product) - 1.0 / 8.0).abs() < 1e-15);
        assert!((f(SpinStateKind::W, CorrelationMode::Product) - 7.0 / 24.0).abs() < 1e-15);
        assert!((f(SpinStateKind::W, CorrelationMode::TripleCorrelated) - 11.0 / 72.0).abs() < 1e-15);
    }

    #[test]
    fn inconsistent_moments_are_flagged() {
        // m1 = 1 with m3 = -1 is not realizable by any distribution.
        let bogus = WignerMoments { m1: 1.0, m2: 1.0, m3: -1.0 };
        assert!(matches!(
            closed_form_fidelity(SpinStateKind::W, CorrelationMode::TripleCorrelated, &bogus),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn density_validation() {
        let mut m = Matrix8::identity().unscale(8.0);
        assert!(DensityMatrix8::new(m).is_ok());
        m[(0, 1)] = Complex::new(0.1, 0.0);
        assert!(DensityMatrix8::new(m).is_err());
        let mut m = Matrix8::identity().unscale(4.0);
        assert!(DensityMatrix8::new(m).is_err());
        m[(0, 0)] = Complex::new(-0.75, 0.0);
        m[(1, 1)] = Complex::new(-0.5, 0.0);
        assert!(matches!(DensityMatrix8::new(m), Err(Error::InvalidState(_))));
    }

    #[test]
    fn uhlmann_against_maximally_mixed() {
        let mixed = DensityMatrix8::new(Matrix8::identity().unscale(8.0)).unwrap();
        let f = uhlmann_fidelity(&rest_density(SpinStateKind::Ghz), &mixed).unwrap();
        assert!((f.get() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn uhlmann_orthogonal_pure_states() {
        let f = uhlmann_fidelity(&rest_density(SpinStateKind::Ghz), &rest_density(SpinStateKind::W)).unwrap();
        assert!(f.get().abs() < 1e-12);
    }

    #[test]
    fn uhlmann_properties_on_random_pairs() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let rho = random_mixed(&mut rng);
            let sigma = random_mixed(&mut rng);
            let ab = uhlmann_fidelity(&rho, &sigma).unwrap().get();
            let ba = uhlmann_fidelity(&sigma, &rho).unwrap().get();
            assert!((ab - ba).abs() < 1e-10);
            assert!((uhlmann_fidelity(&rho, &rho).unwrap().get() - 1.0).abs() < 1e-12);

            let psi = random_pure(&mut rng);
            let reduced = pure_fidelity_against(&psi, &sigma).unwrap().get();
            assert!((uhlmann_fidelity(&psi, &sigma).unwrap().get() - reduced).abs() < 1e-10);
            assert!((uhlmann_fidelity(&psi, &psi).unwrap().get() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_pure_is_squared_overlap() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let a = random_vector(&mut rng).normalize();
            let b = random_vector(&mut rng).normalize();
            let overlap = a.dotc(&b).norm_sqr();
            let f = uhlmann_fidelity(
                &DensityMatrix8::from_state_vector(&a).unwrap(),
                &DensityMatrix8::from_state_vector(&b).unwrap(),
            )
            .unwrap();
            assert!((f.get() - overlap).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_reference_element_sums() {
        let mut rng = StdRng::seed_from_u64(3);
        let sigma = random_mixed(&mut rng);
        let ghz = pure_fidelity_against(&rest_density(SpinStateKind::Ghz), &sigma).unwrap().get();
        let corners = sigma.element(0, 0) + sigma.element(0, 7) + sigma.element(7, 0) + sigma.element(7, 7);
        assert!((ghz - 0.5 * corners.re).abs() < 1e-14);

        let w = pure_fidelity_against(&rest_density(SpinStateKind::W), &sigma).unwrap().get();
        let block: f64 = [3, 5, 6]
            .iter()
            .flat_map(|&i| [3, 5, 6].map(|j| sigma.element(i, j).re))
            .sum();
        assert!((w - block / 3.0).abs() < 1e-14);

        let rho = rest_density(SpinStateKind::W);
        assert!((pure_fidelity_against(&rho, &rho).unwrap().get() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mixed_reference_is_rejected() {
        let mixed = DensityMatrix8::new(Matrix8::identity().unscale(8.0)).unwrap();
        assert!(matches!(
            pure_fidelity_against(&mixed, &rest_density(SpinStateKind::W)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn square_root_squares_back() {
        let mut rng = StdRng::seed_from_u64(5);
        let rho = random_mixed(&mut rng);
        let r = rho.sqrt().unwrap();
        assert!((r * r - rho.matrix()).camax() < 1e-13);
    }

    #[test]
    fn tag_parsing() {
        assert_eq!("GHZ".parse::<SpinStateKind>().unwrap(), SpinStateKind::Ghz);
        assert_eq!("pair".parse::<CorrelationMode>().unwrap(), CorrelationMode::PairCorrelated);
        assert!("bell".parse::<SpinStateKind>().is_err());
        assert!("quad".parse::<CorrelationMode>().is_err());
    }
}
