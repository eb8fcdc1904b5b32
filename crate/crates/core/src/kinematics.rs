//! Rapidities and the Wigner rotation of a spin-1/2 particle moving along the
//! x-axis, seen by an observer boosted in the xz-plane.
//!
//! The boost direction is `(sin θ, 0, cos θ)`. For a particle along `±x` the
//! rotation axis is `±y`, so every rotation here is a real 2×2 matrix.
//!
//! The cosine of the rotation angle is evaluated from the rational form
//!
//! ```text
//! 1 − cosΩ = cos²θ (coshξ − 1)(coshη − 1) / (1 + coshη coshξ + s sinθ sinhη sinhξ)
//! ```
//!
//! which stays regular at `θ = π/2` and never needs an inverse cotangent.

use nalgebra::Matrix2;

use crate::error::{Error, Result};

/// Converts a speed fraction `V/c` to a rapidity.
pub fn rapidity_from_beta(beta: f64) -> Result<f64> {
    if !beta.is_finite() || beta.abs() >= 1.0 {
        return Err(Error::Superluminal(beta));
    }
    Ok(beta.atanh())
}

pub fn beta_from_rapidity(rapidity: f64) -> f64 {
    rapidity.tanh()
}

/// Direction of a particle's momentum along the x-axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentumSign {
    Plus,
    Minus,
}

impl MomentumSign {
    pub fn of(u: f64) -> Self {
        if u.is_sign_negative() {
            MomentumSign::Minus
        } else {
            MomentumSign::Plus
        }
    }

    pub fn factor(self) -> f64 {
        match self {
            MomentumSign::Plus => 1.0,
            MomentumSign::Minus => -1.0,
        }
    }
}

/// Particle rapidity `xi`, boost rapidity `eta` and boost polar angle `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostGeometry {
    pub xi: f64,
    pub eta: f64,
    pub theta: f64,
}

impl BoostGeometry {
    pub fn new(xi: f64, eta: f64, theta: f64) -> Result<Self> {
        if !xi.is_finite() {
            return Err(Error::InvalidParameter(format!("particle rapidity {xi} is not finite")));
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("boost rapidity {eta} must be finite and >= 0")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!("boost angle {theta} outside [0, pi]")));
        }
        Ok(Self { xi, eta, theta })
    }
}

/// Wigner rotation angle Ω about +y, kept as (cos Ω, sin Ω).
///
/// `versine = 1 − cos Ω` is stored alongside so that half-angle values stay
/// accurate when Ω is tiny.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerAngle {
    cos_omega: f64,
    sin_omega: f64,
    versine: f64,
}

impl WignerAngle {
    pub const IDENTITY: WignerAngle = WignerAngle {
        cos_omega: 1.0,
        sin_omega: 0.0,
        versine: 0.0,
    };

    pub fn from_cos_sin(cos_omega: f64, sin_omega: f64) -> Result<Self> {
        let norm = cos_omega * cos_omega + sin_omega * sin_omega;
        if !((norm - 1.0).abs() <= 1e-12) || cos_omega.abs() > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "({cos_omega}, {sin_omega}) is not a point on the unit circle"
            )));
        }
        Ok(Self {
            cos_omega,
            sin_omega,
            versine: 1.0 - cos_omega,
        })
    }

    pub fn cos_omega(&self) -> f64 {
        self.cos_omega
    }

    pub fn sin_omega(&self) -> f64 {
        self.sin_omega
    }

    /// `(cos Ω/2, sin Ω/2)` with Ω ∈ (−π, π]; the sine half carries the sign of Ω.
    pub fn half_angle(&self) -> (f64, f64) {
        let half_vers = (0.5 * self.versine).clamp(0.0, 1.0);
        let c = (1.0 - half_vers).sqrt();
        let s = half_vers.sqrt();
        if self.sin_omega.is_sign_negative() {
            (c, -s)
        } else {
            (c, s)
        }
    }
}

/// Wigner angle for a particle with signed reduced momentum `u = p/mc`
/// (`u = ±sinh ξ`). This is the hot path used by quadrature and the oracle.
pub fn wigner_angle_at(u: f64, eta: f64, theta: f64) -> WignerAngle {
    let (sin_t, cos_t) = theta.sin_cos();
    let cosh_xi = u.hypot(1.0);
    let cosh_xi_m1 = u * u / (cosh_xi + 1.0);
    let cosh_eta = eta.cosh();
    let sinh_eta = eta.sinh();
    let half_sinh = (0.5 * eta).sinh();
    let cosh_eta_m1 = 2.0 * half_sinh * half_sinh;

    let tilt = sin_t * u * sinh_eta;
    let denom = if tilt >= 0.0 {
        1.0 + cosh_eta * cosh_xi + tilt
    } else {
        // cosh η cosh ξ − sinθ sinh η sinh ξ = cosh(η − ξ) + (1 − sinθ) sinh η sinh ξ,
        // which avoids cancelling two large terms when the boost opposes the momentum.
        let xi = u.abs().asinh();
        1.0 + (eta - xi).cosh() + cos_t * cos_t / (1.0 + sin_t) * u.abs() * sinh_eta
    };
    let versine = cos_t * cos_t * cosh_xi_m1 * cosh_eta_m1 / denom;

    let sum_prod = (cosh_xi + 1.0) * (cosh_eta + 1.0);
    let sin_omega = cos_t * u * sinh_eta * (sum_prod + tilt) / (sum_prod * denom);

    WignerAngle {
        cos_omega: 1.0 - versine,
        sin_omega,
        versine,
    }
}

/// Wigner angle for `geom`, with the particle moving along `sign · x`.
///
/// For `Minus` the projection of the boost on the momentum flips and so does
/// the rotation axis, so at `θ = 0` the angle is exactly negated.
pub fn cos_wigner_angle(geom: &BoostGeometry, sign: MomentumSign) -> WignerAngle {
    let u = sign.factor() * geom.xi.sinh();
    wigner_angle_at(u, geom.eta, geom.theta)
}

/// `[[cos Ω/2, sin Ω/2], [−sin Ω/2, cos Ω/2]]`.
pub fn wigner_rotation_matrix(angle: &WignerAngle) -> Matrix2<f64> {
    let (c, s) = angle.half_angle();
    Matrix2::new(c, s, -s, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// cos Ω from the half-angle cotangent, valid for θ < π/2.
    fn cos_from_cotangent(xi: f64, eta: f64, theta: f64) -> f64 {
        let coth = |x: f64| 1.0 / (0.5 * x).tanh();
        let cot = (coth(xi) * coth(eta) + theta.sin()) / theta.cos();
        let cot2 = cot * cot;
        (cot2 - 1.0) / (cot2 + 1.0)
    }

    fn geom(xi: f64, eta: f64, theta: f64) -> BoostGeometry {
        BoostGeometry::new(xi, eta, theta).unwrap()
    }

    #[test]
    fn rapidity_examples() {
        assert_eq!(rapidity_from_beta(0.0).unwrap(), 0.0);
        assert!((rapidity_from_beta(1f64.tanh()).unwrap() - 1.0).abs() < 1e-15);
        assert!((rapidity_from_beta(0.9).unwrap() - 1.472_219_489_583_220_2).abs() < 1e-14);
        assert!((beta_from_rapidity(rapidity_from_beta(-0.3).unwrap()) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn superluminal_is_rejected() {
        assert_eq!(rapidity_from_beta(1.0), Err(Error::Superluminal(1.0)));
        assert!(rapidity_from_beta(-1.5).is_err());
        assert!(rapidity_from_beta(f64::NAN).is_err());
    }

    #[test]
    fn geometry_validation() {
        assert!(BoostGeometry::new(1.0, -0.1, 0.0).is_err());
        assert!(BoostGeometry::new(1.0, 1.0, 3.5).is_err());
        assert!(BoostGeometry::new(f64::INFINITY, 1.0, 0.0).is_err());
        assert!(BoostGeometry::new(-2.0, 0.0, PI).is_ok());
    }

    #[test]
    fn trivial_angles() {
        let plus = MomentumSign::Plus;
        assert_eq!(cos_wigner_angle(&geom(2.3, 0.0, 0.0), plus).cos_omega(), 1.0);
        assert_eq!(cos_wigner_angle(&geom(0.0, 4.0, 0.7), plus).cos_omega(), 1.0);
        assert_eq!(cos_wigner_angle(&geom(3.0, 5.0, FRAC_PI_2), plus).cos_omega(), 1.0);
    }

    #[test]
    fn unit_rapidities_at_zero_angle() {
        let a = cos_wigner_angle(&geom(1.0, 1.0, 0.0), MomentumSign::Plus);
        // cot(Ω/2) = coth²(1/2)
        assert!((a.cos_omega() - 0.912_768_991_202_008_5).abs() < 1e-14);
        assert!(a.sin_omega() > 0.0);
    }

    #[test]
    fn rotation_matrix_examples() {
        assert_eq!(wigner_rotation_matrix(&WignerAngle::IDENTITY), Matrix2::identity());
        let half_turn = WignerAngle::from_cos_sin(-1.0, 0.0).unwrap();
        let m = wigner_rotation_matrix(&half_turn);
        assert!((m - Matrix2::new(0.0, 1.0, -1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn off_circle_angle_rejected() {
        assert!(WignerAngle::from_cos_sin(0.5, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn rational_form_matches_cotangent(xi in 1e-3..5.0f64, eta in 1e-3..5.0f64, theta in 0.0..1.5f64) {
            let a = cos_wigner_angle(&geom(xi, eta, theta), MomentumSign::Plus);
            prop_assert!((a.cos_omega() - cos_from_cotangent(xi, eta, theta)).abs() < 1e-12);
        }

        #[test]
        fn angle_on_unit_circle(u in -200.0..200.0f64, eta in 0.0..12.0f64, theta in 0.0..PI) {
            let a = wigner_angle_at(u, eta, theta);
            let norm = a.cos_omega().powi(2) + a.sin_omega().powi(2);
            prop_assert!((norm - 1.0).abs() < 1e-12);
            prop_assert!(a.cos_omega().abs() <= 1.0);
        }

        #[test]
        fn rotation_is_orthogonal(u in -200.0..200.0f64, eta in 0.0..12.0f64, theta in 0.0..FRAC_PI_2) {
            let m = wigner_rotation_matrix(&wigner_angle_at(u, eta, theta));
            prop_assert!((m.transpose() * m - Matrix2::identity()).norm() < 1e-12);
            prop_assert!((m.determinant() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn collinear_boost_never_rotates(xi in 0.0..6.0f64, eta in 0.0..10.0f64) {
            let a = cos_wigner_angle(&geom(xi, eta, FRAC_PI_2), MomentumSign::Plus);
            prop_assert_eq!(a.cos_omega(), 1.0);
        }

        #[test]
        fn reversed_momentum_reverses_angle(xi in 0.0..6.0f64, eta in 0.0..10.0f64) {
            let g = geom(xi, eta, 0.0);
            let p = cos_wigner_angle(&g, MomentumSign::Plus);
            let m = cos_wigner_angle(&g, MomentumSign::Minus);
            prop_assert!((p.cos_omega() - m.cos_omega()).abs() < 1e-12);
            prop_assert!((p.sin_omega() + m.sin_omega()).abs() < 1e-12);
        }

        #[test]
        fn large_boost_limit(xi in 0.0..6.0f64) {
            let a = cos_wigner_angle(&geom(xi, 40.0, 0.0), MomentumSign::Plus);
            prop_assert!((a.cos_omega() - 1.0 / xi.cosh()).abs() < 1e-10);
        }

        #[test]
        fn decreasing_in_boost(xi in 0.01..6.0f64, eta in 0.0..15.0f64, step in 0.01..1.0f64) {
            let lo = cos_wigner_angle(&geom(xi, eta, 0.0), MomentumSign::Plus).cos_omega();
            let hi = cos_wigner_angle(&geom(xi, eta + step, 0.0), MomentumSign::Plus).cos_omega();
            prop_assert!(hi < lo);
        }
    }
}
