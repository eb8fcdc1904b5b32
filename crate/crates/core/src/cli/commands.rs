//! The `fidelity`, `sweep` and `verify` commands, each producing a [`Table`].

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use super::config::{BoostSpec, ScenarioConfig};
use super::output::{Cell, Table};
use crate::error::{Error, Result};
use crate::fidelity::{closed_form_fidelity, CorrelationMode, SpinStateKind};
use crate::moments::{MomentumSupport, QuadratureSettings, WaveletWidth, WignerMoments};
use crate::oracle::{build_momentum_grid, oracle_fidelity, MomentumGrid};

/// Closed-form tolerance for the unboosted identity.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Tolerance for the collinear-boost identity.
pub const COLLINEAR_TOL: f64 = 1e-10;
/// Oracle against closed form on adaptive-quadrature moments.
pub const EQUIVALENCE_TOL: f64 = 1e-8;
/// Oracle at `n/2` against `n` nodes.
pub const CONVERGENCE_TOL: f64 = 1e-10;

pub const VERIFY_GAMMAS: [f64; 3] = [1.0, 5.0, 20.0];
pub const VERIFY_ETAS: [f64; 4] = [0.5, 2.0, 5.0, 10.0];
pub const VERIFY_THETAS: [f64; 3] = [0.0, 0.5, 1.0];

fn pairs(cfg: &ScenarioConfig) -> Vec<(SpinStateKind, CorrelationMode)> {
    let corrs = cfg.corr_list();
    cfg.state_list()
        .into_iter()
        .flat_map(|s| corrs.iter().map(move |&c| (s, c)))
        .collect()
}

fn column_tag(state: SpinStateKind, corr: CorrelationMode) -> String {
    format!("{}_{}", state.as_str(), corr.as_str())
}

/// One `(state, corr)` evaluation at a single boost.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityRecord {
    pub state: SpinStateKind,
    pub corr: CorrelationMode,
    pub eta: f64,
    pub moments: WignerMoments,
    pub closed_form: f64,
    pub oracle: Option<f64>,
}

impl FidelityRecord {
    /// `oracle − closed_form`, when the oracle ran.
    pub fn discrepancy(&self) -> Option<f64> {
        self.oracle.map(|o| o - self.closed_form)
    }
}

pub fn fidelity_records(cfg: &ScenarioConfig) -> Result<Vec<FidelityRecord>> {
    let eta = match cfg.boost {
        Some(b @ (BoostSpec::Rapidity(_) | BoostSpec::Speed(_))) => b.etas()?[0],
        Some(BoostSpec::Range { .. }) => {
            return Err(Error::InvalidParameter("fidelity takes a single --eta or --beta, not a range".into()))
        }
        None => return Err(Error::InvalidParameter("fidelity needs --eta or --beta".into())),
    };
    let moments = WignerMoments::compute(cfg.gamma, eta, cfg.theta, cfg.support, &cfg.quadrature)?;
    let grid = if cfg.with_oracle {
        Some(build_momentum_grid(cfg.gamma, cfg.oracle_nodes, cfg.support)?)
    } else {
        None
    };
    pairs(cfg)
        .into_iter()
        .map(|(state, corr)| {
            let closed_form = closed_form_fidelity(state, corr, &moments)?.get();
            let oracle = match &grid {
                Some(g) => Some(oracle_fidelity(state, corr, g, eta, cfg.theta)?.get()),
                None => None,
            };
            Ok(FidelityRecord { state, corr, eta, moments, closed_form, oracle })
        })
        .collect()
}

pub fn cmd_fidelity(cfg: &ScenarioConfig) -> Result<Table> {
    let records = fidelity_records(cfg)?;
    let mut columns: Vec<String> = ["state", "corr", "eta", "m1", "m2", "m3", "closed_form"].map(String::from).to_vec();
    if cfg.with_oracle {
        columns.extend(["oracle", "discrepancy"].map(String::from));
    }
    let mut table = Table::new(columns);
    for r in records {
        let mut row: Vec<Cell> = vec![
            r.state.as_str().into(),
            r.corr.as_str().into(),
            r.eta.into(),
            r.moments.m1.into(),
            r.moments.m2.into(),
            r.moments.m3.into(),
            r.closed_form.into(),
        ];
        if let (Some(o), Some(d)) = (r.oracle, r.discrepancy()) {
            row.extend([o.into(), d.into()]);
        }
        table.push(row);
    }
    Ok(table)
}

/// Closed-form fidelities on an η grid, one column per requested curve.
/// With the oracle enabled, `oracle_<state>_<corr>` columns follow.
pub fn cmd_sweep(cfg: &ScenarioConfig) -> Result<Table> {
    let etas = match cfg.boost {
        Some(b @ BoostSpec::Range { .. }) => b.etas()?,
        _ => {
            return Err(Error::InvalidParameter(
                "sweep needs an eta range (--eta-min, --eta-max, --steps) or --figure".into(),
            ))
        }
    };
    let curves = pairs(cfg);
    let grid = if cfg.with_oracle {
        Some(build_momentum_grid(cfg.gamma, cfg.oracle_nodes, cfg.support)?)
    } else {
        None
    };

    let rows: Vec<Vec<Cell>> = etas
        .par_iter()
        .map(|&eta| -> Result<Vec<Cell>> {
            let moments = WignerMoments::compute(cfg.gamma, eta, cfg.theta, cfg.support, &cfg.quadrature)?;
            let mut row = vec![Cell::Num(eta)];
            for &(s, c) in &curves {
                row.push(closed_form_fidelity(s, c, &moments)?.get().into());
            }
            if let Some(g) = &grid {
                for &(s, c) in &curves {
                    row.push(oracle_fidelity(s, c, g, eta, cfg.theta)?.get().into());
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut columns = vec!["eta".to_string()];
    columns.extend(curves.iter().map(|&(s, c)| format!("F_{}", column_tag(s, c))));
    if grid.is_some() {
        columns.extend(curves.iter().map(|&(s, c)| format!("oracle_{}", column_tag(s, c))));
    }
    let mut table = Table::new(columns);
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Reported for information; never fails the run.
    Info,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Info => "INFO",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Unboosted,
    Collinear,
    Equivalence,
    /// W-state closed form where it omits sine cross-moments.
    Discrepancy,
    GridConvergence,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Unboosted => "unboosted",
            CheckKind::Collinear => "collinear",
            CheckKind::Equivalence => "equivalence",
            CheckKind::Discrepancy => "discrepancy",
            CheckKind::GridConvergence => "grid_convergence",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub kind: CheckKind,
    pub support: MomentumSupport,
    pub state: SpinStateKind,
    pub corr: CorrelationMode,
    pub gamma: f64,
    pub eta: f64,
    pub theta: f64,
    /// Signed difference under test.
    pub difference: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
}

impl Check {
    pub fn name(&self) -> String {
        format!(
            "{}/{}/{}/{}/gamma={}/eta={}/theta={}",
            self.kind.as_str(),
            self.support,
            self.state,
            self.corr,
            self.gamma,
            self.eta,
            self.theta
        )
    }
}

#[derive(Debug, Clone, Copy)]
struct Case {
    support: MomentumSupport,
    state: SpinStateKind,
    corr: CorrelationMode,
    gamma: f64,
    eta: f64,
    theta: f64,
}

impl Case {
    fn check(&self, kind: CheckKind, difference: f64, tolerance: f64, informational: bool) -> Check {
        let status = if informational {
            CheckStatus::Info
        } else if difference.abs() < tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Check {
            kind,
            support: self.support,
            state: self.state,
            corr: self.corr,
            gamma: self.gamma,
            eta: self.eta,
            theta: self.theta,
            difference,
            tolerance,
            status,
        }
    }

    /// The closed forms are exact for GHZ everywhere, and for W only where
    /// the sine cross-moments vanish: symmetric support at θ = 0.
    fn closed_form_exact(&self) -> bool {
        match self.state {
            SpinStateKind::Ghz => true,
            SpinStateKind::W => self.support == MomentumSupport::SymmetricLine && self.theta == 0.0,
        }
    }
}

struct Grids {
    full: MomentumGrid,
    half: MomentumGrid,
}

fn run_case(case: &Case, grids: &Grids, settings: &QuadratureSettings) -> Result<Vec<Check>> {
    let gamma = WaveletWidth::new(case.gamma)?;
    let moments = WignerMoments::compute(gamma, case.eta, case.theta, case.support, settings)?;
    let closed = closed_form_fidelity(case.state, case.corr, &moments)?.get();
    let oracle = oracle_fidelity(case.state, case.corr, &grids.full, case.eta, case.theta)?.get();
    let coarse = oracle_fidelity(case.state, case.corr, &grids.half, case.eta, case.theta)?.get();

    let exact = case.closed_form_exact();
    let kind = if exact { CheckKind::Equivalence } else { CheckKind::Discrepancy };
    let mut checks = vec![
        case.check(kind, oracle - closed, EQUIVALENCE_TOL, !exact),
        case.check(CheckKind::GridConvergence, oracle - coarse, CONVERGENCE_TOL, false),
    ];

    let collinear = Case { theta: FRAC_PI_2, ..*case };
    if case.theta == 0.0 {
        let m = WignerMoments::compute(gamma, case.eta, FRAC_PI_2, case.support, settings)?;
        let cf = closed_form_fidelity(case.state, case.corr, &m)?.get();
        let or = oracle_fidelity(case.state, case.corr, &grids.full, case.eta, FRAC_PI_2)?.get();
        let worst = if (cf - 1.0).abs() >= (or - 1.0).abs() { cf - 1.0 } else { or - 1.0 };
        checks.push(collinear.check(CheckKind::Collinear, worst, COLLINEAR_TOL, false));
    }
    Ok(checks)
}

/// Runs the oracle-against-closed-form matrix over both supports and the
/// sampled `(γ, η, θ)` points, plus the identity checks.
///
/// The state and correlation selections, node count and quadrature settings
/// come from `cfg`; γ, η and θ are fixed by the matrix.
pub fn run_verification(cfg: &ScenarioConfig) -> Result<Vec<Check>> {
    let curves = pairs(cfg);
    let n = cfg.oracle_nodes;
    let half = n / 2;
    if half < crate::oracle::MIN_GRID_NODES {
        return Err(Error::InvalidParameter(format!(
            "verify needs oracle_nodes >= {} for the convergence check",
            2 * crate::oracle::MIN_GRID_NODES
        )));
    }

    let mut checks = Vec::new();
    for &gamma in &VERIFY_GAMMAS {
        let m = WignerMoments::compute(WaveletWidth::new(gamma)?, 0.0, 0.0, cfg.support, &cfg.quadrature)?;
        for &(state, corr) in &curves {
            let case = Case { support: cfg.support, state, corr, gamma, eta: 0.0, theta: 0.0 };
            let f = closed_form_fidelity(state, corr, &m)?.get();
            checks.push(case.check(CheckKind::Unboosted, f - 1.0, IDENTITY_TOL, false));
        }
    }

    let mut grid_sets = Vec::new();
    for support in MomentumSupport::ALL {
        for &gamma in &VERIFY_GAMMAS {
            let w = WaveletWidth::new(gamma)?;
            let grids = Grids {
                full: build_momentum_grid(w, n, support)?,
                half: build_momentum_grid(w, half, support)?,
            };
            grid_sets.push(((support, gamma), grids));
        }
    }

    let mut cases = Vec::new();
    for support in MomentumSupport::ALL {
        for &(state, corr) in &curves {
            for &gamma in &VERIFY_GAMMAS {
                for &eta in &VERIFY_ETAS {
                    for &theta in &VERIFY_THETAS {
                        cases.push(Case { support, state, corr, gamma, eta, theta });
                    }
                }
            }
        }
    }
    let matrix: Vec<Vec<Check>> = cases
        .par_iter()
        .map(|case| {
            let grids = &grid_sets
                .iter()
                .find(|((s, g), _)| *s == case.support && *g == case.gamma)
                .expect("grid for every case")
                .1;
            run_case(case, grids, &cfg.quadrature)
        })
        .collect::<Result<_>>()?;
    checks.extend(matrix.into_iter().flatten());
    Ok(checks)
}

pub fn verification_table(checks: &[Check]) -> Table {
    let columns = ["check", "support", "state", "corr", "gamma", "eta", "theta", "difference", "tolerance", "status"];
    let mut table = Table::new(columns.map(String::from).to_vec());
    for c in checks {
        table.push(vec![
            c.kind.as_str().into(),
            c.support.as_str().into(),
            c.state.as_str().into(),
            c.corr.as_str().into(),
            c.gamma.into(),
            c.eta.into(),
            c.theta.into(),
            c.difference.into(),
            c.tolerance.into(),
            c.status.as_str().into(),
        ]);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::ConfigLayer;

    fn cfg(text: &str) -> ScenarioConfig {
        ConfigLayer::parse(text).unwrap().resolve().unwrap()
    }

    #[test]
    fn fidelity_at_rest_is_one() {
        let records = fidelity_records(&cfg("eta = 0")).unwrap();
        assert_eq!(records.len(), 6);
        for r in records {
            assert!((r.closed_form - 1.0).abs() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn fidelity_needs_single_boost() {
        assert!(matches!(fidelity_records(&cfg("")), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            fidelity_records(&cfg("eta_min = 0\neta_max = 1\nsteps = 2")),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(cmd_sweep(&cfg("eta = 1")), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn oracle_discrepancy_for_ghz_product() {
        let records = fidelity_records(&cfg("state = ghz\ncorr = product\neta = 10\nwith_oracle = true")).unwrap();
        let d = records[0].discrepancy().unwrap();
        assert!(d.abs() < 1e-8, "discrepancy {d:e}");
    }

    #[test]
    fn sweep_columns_in_order() {
        let t = cmd_sweep(&cfg("eta_min = 0\neta_max = 2\nsteps = 3\nstate = w")).unwrap();
        assert_eq!(t.columns, ["eta", "F_w_product", "F_w_pair", "F_w_triple"]);
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[2][0], Cell::Num(2.0));
    }

    #[test]
    fn sweep_with_oracle_adds_columns() {
        let t = cmd_sweep(&cfg("eta_min = 0\neta_max = 2\nsteps = 2\nstate = ghz\ncorr = triple\nwith_oracle = true"))
            .unwrap();
        assert_eq!(t.columns, ["eta", "F_ghz_triple", "oracle_ghz_triple"]);
        let (Cell::Num(f), Cell::Num(o)) = (&t.rows[1][1], &t.rows[1][2]) else { panic!() };
        assert!((f - o).abs() < 1e-8);
    }

    #[test]
    fn w_positive_axis_is_informational() {
        let checks = run_verification(&cfg("state = w\ncorr = product\noracle_nodes = 32")).unwrap();
        let infos: Vec<&Check> = checks
            .iter()
            .filter(|c| c.support == MomentumSupport::PositiveAxis && c.kind == CheckKind::Discrepancy)
            .collect();
        assert_eq!(infos.len(), VERIFY_GAMMAS.len() * VERIFY_ETAS.len() * VERIFY_THETAS.len());
        assert!(infos.iter().all(|c| c.status == CheckStatus::Info));
        assert!(infos.iter().any(|c| c.difference.abs() > 1e-6));
    }
}
