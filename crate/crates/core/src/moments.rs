//! Gaussian-wave-packet averages of powers of the Wigner-rotation cosine.
//!
//! With `u = p/mc = sinh ξ` the moments are
//!
//! ```text
//! m_k = 2/(γ√π) ∫₀^∞ exp(−u²/γ²) cosᵏΩ(u) du
//! ```
//!
//! The weight is self-normalizing, so `m_k = 1` whenever Ω ≡ 0. Integration
//! runs in the scaled variable `t = u/γ` over `[0, truncation_sigmas]`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kinematics::wigner_angle_at;
use crate::quadrature::{integrate_adaptive, AdaptiveTolerance};

/// Width `γ = α/mc` of the Gaussian momentum profile.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WaveletWidth(f64);

impl WaveletWidth {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 0.0 && gamma.is_finite() {
            Ok(Self(gamma))
        } else {
            Err(Error::InvalidParameter(format!("wave-packet width {gamma} must be finite and > 0")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Which momenta the packet populates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentumSupport {
    /// Momenta along +x only, `u ∈ [0, ∞)`.
    PositiveAxis,
    /// The full Gaussian around `p = 0`, `u ∈ (−∞, ∞)`.
    SymmetricLine,
}

impl MomentumSupport {
    pub const ALL: [MomentumSupport; 2] = [MomentumSupport::PositiveAxis, MomentumSupport::SymmetricLine];

    pub fn as_str(self) -> &'static str {
        match self {
            MomentumSupport::PositiveAxis => "positive",
            MomentumSupport::SymmetricLine => "symmetric",
        }
    }
}

impl fmt::Display for MomentumSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MomentumSupport {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "positive" | "positive-axis" | "half" => Ok(MomentumSupport::PositiveAxis),
            "symmetric" | "symmetric-line" | "full" => Ok(MomentumSupport::SymmetricLine),
            other => Err(Error::InvalidParameter(format!(
                "unknown momentum support '{other}' (expected positive|symmetric)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Upper integration limit in units of γ.
    pub truncation_sigmas: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 200,
            truncation_sigmas: 6.5,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.rel_tol > 0.0) {
            return bad("rel_tol must be > 0");
        }
        if !(self.abs_tol > 0.0) {
            return bad("abs_tol must be > 0");
        }
        if self.max_subdivisions < 1 {
            return bad("max_subdivisions must be >= 1");
        }
        if !(self.truncation_sigmas >= 4.0 && self.truncation_sigmas.is_finite()) {
            return bad("truncation_sigmas must be finite and >= 4");
        }
        Ok(())
    }

    fn tolerance(&self) -> AdaptiveTolerance {
        AdaptiveTolerance {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// `m1 = ⟨cosΩ⟩`, `m2 = ⟨cos²Ω⟩`, `m3 = ⟨cos³Ω⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerMoments {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
}

impl WignerMoments {
    /// Moments seen by an observer at rest relative to the packet.
    pub const UNBOOSTED: WignerMoments = WignerMoments { m1: 1.0, m2: 1.0, m3: 1.0 };

    pub fn new(m1: f64, m2: f64, m3: f64) -> Result<Self> {
        for (k, m) in [(1, m1), (2, m2), (3, m3)] {
            if !(m.abs() <= 1.0 + 1e-12) {
                return Err(Error::InvalidParameter(format!("moment m{k} = {m} outside [-1, 1]")));
            }
        }
        Ok(Self { m1, m2, m3 })
    }

    /// All three moments for one `(γ, η, θ)` point.
    pub fn compute(
        gamma: WaveletWidth,
        eta: f64,
        theta: f64,
        support: MomentumSupport,
        settings: &QuadratureSettings,
    ) -> Result<Self> {
        Ok(Self {
            m1: wigner_moment_on(support, 1, gamma, eta, theta, settings)?,
            m2: wigner_moment_on(support, 2, gamma, eta, theta, settings)?,
            m3: wigner_moment_on(support, 3, gamma, eta, theta, settings)?,
        })
    }

    pub fn get(&self, k: u8) -> f64 {
        match k {
            1 => self.m1,
            2 => self.m2,
            3 => self.m3,
            _ => panic!("moment power {k} outside 1..=3"),
        }
    }
}

fn check_power(k: u8) -> Result<i32> {
    if (1..=3).contains(&k) {
        Ok(k as i32)
    } else {
        Err(Error::InvalidParameter(format!("moment power {k} outside 1..=3")))
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta >= 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("boost rapidity {eta} must be finite and >= 0")))
    }
}

/// `2/√π ∫₀^L exp(−t²) g(t) dt`.
fn gaussian_average<G: Fn(f64) -> f64>(g: G, settings: &QuadratureSettings) -> Result<f64> {
    settings.validate()?;
    let scale = 2.0 / PI.sqrt();
    let integral = integrate_adaptive(
        |t: f64| (-t * t).exp() * g(t),
        0.0,
        settings.truncation_sigmas,
        &settings.tolerance(),
    )
    .map_err(|e| match e {
        Error::Convergence { estimate, error_bound } => Error::Convergence {
            estimate: scale * estimate,
            error_bound: scale * error_bound,
        },
        other => other,
    })?;
    Ok(scale * integral.value)
}

/// `⟨cosᵏΩ⟩` over the half-line `p ≥ 0`.
pub fn wigner_moment(k: u8, gamma: WaveletWidth, eta: f64, theta: f64, settings: &QuadratureSettings) -> Result<f64> {
    wigner_moment_on(MomentumSupport::PositiveAxis, k, gamma, eta, theta, settings)
}

/// `⟨cosᵏΩ⟩` for the given momentum support. On the symmetric line the
/// integrand is the mean of the `+u` and `−u` contributions, which differ
/// only when `θ ≠ 0`.
pub fn wigner_moment_on(
    support: MomentumSupport,
    k: u8,
    gamma: WaveletWidth,
    eta: f64,
    theta: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let power = check_power(k)?;
    check_eta(eta)?;
    let g = gamma.get();
    match support {
        MomentumSupport::PositiveAxis => gaussian_average(
            |t| wigner_angle_at(g * t, eta, theta).cos_omega().powi(power),
            settings,
        ),
        MomentumSupport::SymmetricLine => gaussian_average(
            |t| {
                let plus = wigner_angle_at(g * t, eta, theta).cos_omega().powi(power);
                let minus = wigner_angle_at(-g * t, eta, theta).cos_omega().powi(power);
                0.5 * (plus + minus)
            },
            settings,
        ),
    }
}

/// The `η → ∞`, `θ = 0` limit of [`wigner_moment`], where `cosΩ → 1/cosh ξ`.
pub fn asymptotic_moment(k: u8, gamma: WaveletWidth, settings: &QuadratureSettings) -> Result<f64> {
    let power = check_power(k)?;
    let g = gamma.get();
    gaussian_average(|t| (g * t).hypot(1.0).powi(-power), settings)
}
