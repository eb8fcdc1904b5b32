//! Scenario configuration: flat `key = value` files, presets and flag overrides.
//!
//! Layers are merged lowest first: built-in defaults, `--config` file,
//! `--figure` preset, then explicit flags. The three boost forms (`eta`,
//! `beta`, and the `eta_min`/`eta_max`/`steps` range) exclude each other, so
//! a higher layer naming one form discards the other two from below it.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fidelity::{CorrelationMode, SpinStateKind};
use crate::kinematics::rapidity_from_beta;
use crate::moments::{MomentumSupport, QuadratureSettings, WaveletWidth};

pub const DEFAULT_GAMMA: f64 = 20.0;
pub const DEFAULT_ORACLE_NODES: usize = 128;

/// `all` or a single tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection<T> {
    All,
    One(T),
}

impl<T: Copy> Selection<T> {
    pub fn expand(&self, all: &[T]) -> Vec<T> {
        match self {
            Selection::All => all.to_vec(),
            Selection::One(t) => vec![*t],
        }
    }
}

impl<T: FromStr<Err = Error>> FromStr for Selection<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            Ok(Selection::All)
        } else {
            s.parse().map(Selection::One)
        }
    }
}

impl<T: std::fmt::Display> std::fmt::Display for Selection<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Selection::All => f.write_str("all"),
            Selection::One(t) => t.fmt(f),
        }
    }
}

/// How the observer's boost is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoostSpec {
    Rapidity(f64),
    /// Speed fraction `V/c`, converted with `atanh`.
    Speed(f64),
    Range { min: f64, max: f64, steps: usize },
}

impl BoostSpec {
    /// Boost rapidities in ascending order.
    pub fn etas(&self) -> Result<Vec<f64>> {
        match *self {
            BoostSpec::Rapidity(eta) => Ok(vec![eta]),
            BoostSpec::Speed(beta) => Ok(vec![rapidity_from_beta(beta)?]),
            BoostSpec::Range { min, max, steps } => {
                let span = max - min;
                Ok((0..steps)
                    .map(|i| {
                        if i + 1 == steps {
                            max
                        } else {
                            min + span * i as f64 / (steps - 1) as f64
                        }
                    })
                    .collect())
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            BoostSpec::Rapidity(eta) if !(eta >= 0.0 && eta.is_finite()) => Err(Error::InvalidParameter(format!(
                "eta = {eta} must be finite and >= 0"
            ))),
            BoostSpec::Speed(beta) => {
                let eta = rapidity_from_beta(beta)?;
                if eta < 0.0 {
                    return Err(Error::InvalidParameter(format!("beta = {beta} must be >= 0")));
                }
                Ok(())
            }
            BoostSpec::Range { min, max, steps } => {
                if !(min >= 0.0 && min.is_finite()) {
                    return Err(Error::InvalidParameter(format!("eta_min = {min} must be finite and >= 0")));
                }
                if !(max > min && max.is_finite()) {
                    return Err(Error::InvalidParameter(format!("eta_max = {max} must exceed eta_min = {min}")));
                }
                if steps < 2 {
                    return Err(Error::InvalidParameter(format!("steps = {steps} must be >= 2")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// A fully resolved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub states: Selection<SpinStateKind>,
    pub corrs: Selection<CorrelationMode>,
    pub gamma: WaveletWidth,
    pub theta: f64,
    pub support: MomentumSupport,
    pub boost: Option<BoostSpec>,
    pub with_oracle: bool,
    pub oracle_nodes: usize,
    pub quadrature: QuadratureSettings,
}

impl ScenarioConfig {
    pub fn state_list(&self) -> Vec<SpinStateKind> {
        self.states.expand(&SpinStateKind::ALL)
    }

    pub fn corr_list(&self) -> Vec<CorrelationMode> {
        self.corrs.expand(&CorrelationMode::ALL)
    }

    /// Renders the config in the file format accepted by [`ConfigLayer::parse`].
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let q = &self.quadrature;
        let _ = writeln!(out, "state = {}", self.states);
        let _ = writeln!(out, "corr = {}", self.corrs);
        let _ = writeln!(out, "gamma = {}", self.gamma.get());
        let _ = writeln!(out, "theta = {}", self.theta);
        let _ = writeln!(out, "support = {}", self.support);
        match self.boost {
            Some(BoostSpec::Rapidity(eta)) => {
                let _ = writeln!(out, "eta = {eta}");
            }
            Some(BoostSpec::Speed(beta)) => {
                let _ = writeln!(out, "beta = {beta}");
            }
            Some(BoostSpec::Range { min, max, steps }) => {
                let _ = writeln!(out, "eta_min = {min}");
                let _ = writeln!(out, "eta_max = {max}");
                let _ = writeln!(out, "steps = {steps}");
            }
            None => {}
        }
        let _ = writeln!(out, "with_oracle = {}", self.with_oracle);
        let _ = writeln!(out, "oracle_nodes = {}", self.oracle_nodes);
        let _ = writeln!(out, "rel_tol = {}", q.rel_tol);
        let _ = writeln!(out, "abs_tol = {}", q.abs_tol);
        let _ = writeln!(out, "max_subdivisions = {}", q.max_subdivisions);
        let _ = writeln!(out, "truncation_sigmas = {}", q.truncation_sigmas);
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoostLayer {
    pub eta: Option<f64>,
    pub beta: Option<f64>,
    pub eta_min: Option<f64>,
    pub eta_max: Option<f64>,
    pub steps: Option<usize>,
}

impl BoostLayer {
    fn has_range(&self) -> bool {
        self.eta_min.is_some() || self.eta_max.is_some() || self.steps.is_some()
    }

    fn overlaid(mut self, top: &BoostLayer) -> BoostLayer {
        if top.eta.is_some() || top.beta.is_some() || top.has_range() {
            if top.eta.is_none() {
                self.eta = None;
            }
            if top.beta.is_none() {
                self.beta = None;
            }
            if !top.has_range() {
                self.eta_min = None;
                self.eta_max = None;
                self.steps = None;
            }
        }
        BoostLayer {
            eta: top.eta.or(self.eta),
            beta: top.beta.or(self.beta),
            eta_min: top.eta_min.or(self.eta_min),
            eta_max: top.eta_max.or(self.eta_max),
            steps: top.steps.or(self.steps),
        }
    }

    fn resolve(&self) -> Result<Option<BoostSpec>> {
        let range = self.eta_min.is_some() || self.eta_max.is_some() || self.steps.is_some();
        let given = [self.eta.is_some(), self.beta.is_some(), range];
        if given.iter().filter(|&&g| g).count() > 1 {
            return Err(Error::InvalidParameter(
                "set exactly one of eta, beta or an eta range (eta_min/eta_max/steps)".into(),
            ));
        }
        if let Some(eta) = self.eta {
            return Ok(Some(BoostSpec::Rapidity(eta)));
        }
        if let Some(beta) = self.beta {
            return Ok(Some(BoostSpec::Speed(beta)));
        }
        if range {
            return match (self.eta_min, self.eta_max, self.steps) {
                (Some(min), Some(max), Some(steps)) => Ok(Some(BoostSpec::Range { min, max, steps })),
                _ => Err(Error::InvalidParameter("an eta range needs eta_min, eta_max and steps".into())),
            };
        }
        Ok(None)
    }
}

/// One layer of partially specified settings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub states: Option<Selection<SpinStateKind>>,
    pub corrs: Option<Selection<CorrelationMode>>,
    pub gamma: Option<f64>,
    pub theta: Option<f64>,
    pub support: Option<MomentumSupport>,
    pub boost: BoostLayer,
    pub with_oracle: Option<bool>,
    pub oracle_nodes: Option<usize>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub truncation_sigmas: Option<f64>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad value '{value}' for key '{key}'")))
}

impl ConfigLayer {
    /// Parses `key = value` lines; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut layer = ConfigLayer::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("line {}: expected 'key = value', got '{raw}'", lineno + 1))
            })?;
            layer.set(key.trim(), value.trim())?;
        }
        Ok(layer)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "state" => self.states = Some(value.parse()?),
            "corr" => self.corrs = Some(value.parse()?),
            "gamma" => self.gamma = Some(parse_value(key, value)?),
            "theta" => self.theta = Some(parse_value(key, value)?),
            "support" => self.support = Some(value.parse()?),
            "eta" => self.boost.eta = Some(parse_value(key, value)?),
            "beta" => self.boost.beta = Some(parse_value(key, value)?),
            "eta_min" => self.boost.eta_min = Some(parse_value(key, value)?),
            "eta_max" => self.boost.eta_max = Some(parse_value(key, value)?),
            "steps" => self.boost.steps = Some(parse_value(key, value)?),
            "with_oracle" => self.with_oracle = Some(parse_value(key, value)?),
            "oracle_nodes" => self.oracle_nodes = Some(parse_value(key, value)?),
            "rel_tol" => self.rel_tol = Some(parse_value(key, value)?),
            "abs_tol" => self.abs_tol = Some(parse_value(key, value)?),
            "max_subdivisions" => self.max_subdivisions = Some(parse_value(key, value)?),
            "truncation_sigmas" => self.truncation_sigmas = Some(parse_value(key, value)?),
            other => return Err(Error::InvalidParameter(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Figure preset: GHZ (1) or W (2)
    /// curves at γ = 20, θ = 0 over η ∈ [0, 10] with 201 points.
    pub fn figure(number: u8) -> Result<Self> {
        let state = match number {
            1 => SpinStateKind::Ghz,
            2 => SpinStateKind::W,
            other => return Err(Error::InvalidParameter(format!("unknown figure {other} (expected 1 or 2)"))),
        };
        Ok(ConfigLayer {
            states: Some(Selection::One(state)),
            corrs: Some(Selection::All),
            gamma: Some(20.0),
            theta: Some(0.0),
            boost: BoostLayer {
                eta_min: Some(0.0),
                eta_max: Some(10.0),
                steps: Some(201),
                ..BoostLayer::default()
            },
            ..ConfigLayer::default()
        })
    }

    /// Overlays `top` on `self`.
    pub fn merged(mut self, top: &ConfigLayer) -> Result<Self> {
        macro_rules! take {
            ($($field:ident),*) => { $( if top.$field.is_some() { self.$field = top.$field; } )* };
        }
        take!(states, corrs, gamma, theta, support, with_oracle, oracle_nodes, rel_tol, abs_tol, max_subdivisions,
              truncation_sigmas);
        self.boost = self.boost.overlaid(&top.boost);
        Ok(self)
    }

    pub fn resolve(&self) -> Result<ScenarioConfig> {
        let defaults = QuadratureSettings::default();
        let quadrature = QuadratureSettings {
            rel_tol: self.rel_tol.unwrap_or(defaults.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(defaults.abs_tol),
            max_subdivisions: self.max_subdivisions.unwrap_or(defaults.max_subdivisions),
            truncation_sigmas: self.truncation_sigmas.unwrap_or(defaults.truncation_sigmas),
        };
        quadrature.validate()?;
        let theta = self.theta.unwrap_or(0.0);
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParameter(format!("theta = {theta} outside [0, pi/2]")));
        }
        let boost = self.boost.resolve()?;
        if let Some(b) = &boost {
            b.validate()?;
        }
        let oracle_nodes = self.oracle_nodes.unwrap_or(DEFAULT_ORACLE_NODES);
        if oracle_nodes < crate::oracle::MIN_GRID_NODES {
            return Err(Error::InvalidParameter(format!(
                "oracle_nodes = {oracle_nodes} must be >= {}",
                crate::oracle::MIN_GRID_NODES
            )));
        }
        Ok(ScenarioConfig {
            states: self.states.unwrap_or(Selection::All),
            corrs: self.corrs.unwrap_or(Selection::All),
            gamma: WaveletWidth::new(self.gamma.unwrap_or(DEFAULT_GAMMA))?,
            theta,
            support: self.support.unwrap_or(MomentumSupport::SymmetricLine),
            boost,
            with_oracle: self.with_oracle.unwrap_or(false),
            oracle_nodes,
            quadrature,
        })
    }
}
