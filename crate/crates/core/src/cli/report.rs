use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::balance::{check_qdb1_sweep, check_qdb2_sweep, QdbSweep, TimeReversal, DEFAULT_QDB2_TAUS};
use crate::dynamics::{KrausChannel, LindbladGenerator, SuperOperator};
use crate::error::{Error, Result};
use crate::fluctuation::{
    classify, classify_channel, exchange_from_transitions, pairwise_from_transitions, qfr_ratio, transition_matrix,
    Classification, ClassifyReport, MapFamily,
};
use crate::states::{gibbs, HamiltonianSpec};

/// Bound on row sums and on the exchange normalization; exceeding it is an
/// internal failure, not a property of the model.
const PROBABILITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExchangeRow {
    pub tau: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub p_plus: f64,
    pub p_minus: f64,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub predicted: f64,
    pub deviation: Option<f64>,
    #[serde(rename = "F_tau")]
    pub f_tau: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SResidual {
    pub s: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QdbVerdict {
    pub applicable: bool,
    pub pass: Option<bool>,
    pub max_residual: Option<f64>,
    pub per_s: Vec<SResidual>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl QdbVerdict {
    fn not_applicable(note: impl Into<String>) -> Self {
        Self { applicable: false, pass: None, max_residual: None, per_s: vec![], note: Some(note.into()) }
    }

    fn from_sweep(s: QdbSweep) -> Self {
        Self {
            applicable: true,
            pass: Some(s.passes),
            max_residual: Some(s.max_residual),
            per_s: s.per_s.into_iter().map(|(s, residual)| SResidual { s, residual }).collect(),
            note: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub classification: String,
    pub beta_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub qdb1: QdbVerdict,
    pub qdb2: QdbVerdict,
    pub qfr_max_deviation: Option<f64>,
    pub qfr_pass: Option<bool>,
    pub pairwise_max_residual: f64,
    pub normalization_max_residual: f64,
    pub cptp_max_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub rows: Vec<ExchangeRow>,
    pub verdict: Verdict,
}

/// What is being evaluated.
pub enum Subject<'a> {
    /// A semigroup with its Lindblad form, which enables the generator check.
    Semigroup(&'a LindbladGenerator),
    /// A general time-indexed family.
    Family { family: &'a dyn MapFamily, correction: Option<&'a dyn Fn(f64) -> f64> },
    /// A single channel.
    Channel(&'a KrausChannel),
}

fn describe(r: std::result::Result<ClassifyReport, Error>) -> Result<(String, Option<f64>, Option<String>)> {
    match r {
        Ok(rep) => {
            let reason = match &rep.classification {
                Classification::NonThermalizing { reason } => Some(reason.clone()),
                _ => None,
            };
            Ok((rep.classification.name().to_string(), rep.classification.beta_f(), reason))
        }
        Err(Error::InconclusiveHorizon(x)) => {
            Ok(("Inconclusive".into(), None, Some(Error::InconclusiveHorizon(x).to_string())))
        }
        Err(e) => Err(e),
    }
}

/// Per-time data: transitions, exchange records and checks.
struct Accumulator {
    rows: Vec<ExchangeRow>,
    pairwise: f64,
    normalization: f64,
    cptp: f64,
}

impl Accumulator {
    fn new() -> Self {
        Self { rows: vec![], pairwise: 0.0, normalization: 0.0, cptp: 0.0 }
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        tau: f64,
        superop: &SuperOperator,
        kraus: Option<&KrausChannel>,
        h: &HamiltonianSpec,
        cfg: &RunConfig,
        beta_f: f64,
        f_tau: Option<f64>,
    ) -> Result<()> {
        self.cptp = self.cptp.max(superop.cptp_report().max_residual());
        let mut tm = match kraus {
            Some(k) => transition_matrix(k, h, tau)?,
            None => transition_matrix(superop, h, tau)?,
        };
        tm.tau = tau;
        let stoch = tm.stochasticity_residual();
        if stoch > PROBABILITY_TOL {
            return Err(Error::InternalCheck(format!("transition matrix rows deviate from 1 by {stoch:.3e} at tau = {tau}")));
        }
        let dist = exchange_from_transitions(&tm, h, cfg.beta_i, beta_f)?;
        let norm = dist.normalization_residual();
        if norm > PROBABILITY_TOL {
            return Err(Error::InternalCheck(format!("exchange distribution normalization off by {norm:.3e} at tau = {tau}")));
        }
        self.normalization = self.normalization.max(norm);
        self.pairwise = self.pairwise.max(pairwise_from_transitions(&tm, h, beta_f)?.max_residual);
        for r in qfr_ratio(&dist) {
            self.rows.push(ExchangeRow {
                tau,
                e: r.e,
                p_plus: r.p_plus,
                p_minus: r.p_minus,
                r: r.r,
                predicted: r.predicted,
                deviation: r.deviation,
                f_tau,
            });
        }
        Ok(())
    }
}

/// Runs classification, both detailed-balance checks and the fluctuation
/// ratio on the configured grids. `beta_hint` fixes the reference inverse
/// temperature; otherwise it is taken from the classification, then from
/// the configuration.
pub fn evaluate(subject: Subject<'_>, h: &HamiltonianSpec, beta_hint: Option<f64>, cfg: &RunConfig) -> Result<Report> {
    let (classification, classified_beta, reason) = match &subject {
        Subject::Semigroup(g) => describe(classify(*g, h, &cfg.tau_grid))?,
        Subject::Family { family, .. } => describe(classify(*family, h, &cfg.tau_grid))?,
        Subject::Channel(k) => describe(classify_channel(&k.superop(), h))?,
    };
    let beta_f = beta_hint.or(classified_beta).unwrap_or(cfg.beta_f);
    log::info!("classified as {classification}; reference beta_f = {beta_f}");

    let mut acc = Accumulator::new();
    match &subject {
        Subject::Semigroup(g) => {
            let l = g.lindblad_superop();
            for &tau in &cfg.tau_grid {
                acc.push(tau, &l.evolve(tau)?, None, h, cfg, beta_f, None)?;
            }
        }
        Subject::Family { family, correction } => {
            for &tau in &cfg.tau_grid {
                let kraus = family.kraus_at(tau);
                acc.push(tau, &family.map_at(tau)?, kraus.as_ref(), h, cfg, beta_f, correction.map(|f| f(tau)))?;
            }
        }
        Subject::Channel(k) => acc.push(1.0, &k.superop(), Some(k), h, cfg, beta_f, None)?,
    }

    let sigma = gibbs(h, beta_f)?;
    let qdb1 = match &subject {
        Subject::Semigroup(g) => qdb_or_note(check_qdb1_sweep(&sigma, g, &cfg.s_grid, cfg.tol.qdb))?,
        _ => QdbVerdict::not_applicable("no Lindblad generator"),
    };
    let heis: Vec<SuperOperator> = match &subject {
        Subject::Semigroup(g) => {
            let d = g.dual_superop();
            DEFAULT_QDB2_TAUS.iter().map(|&t| d.evolve(t)).collect::<Result<_>>()?
        }
        Subject::Family { family, .. } => {
            DEFAULT_QDB2_TAUS.iter().map(|&t| Ok(family.map_at(t)?.dual())).collect::<Result<_>>()?
        }
        Subject::Channel(k) => vec![k.superop().dual()],
    };
    let t = TimeReversal::conjugation_in_basis(h.eigenbasis())?;
    let qdb2 = qdb_or_note(check_qdb2_sweep(&sigma, &heis, &t, &cfg.s_grid, cfg.tol.qdb))?;

    let qfr_max_deviation = acc.rows.iter().filter_map(|r| r.deviation).reduce(f64::max);
    let verdict = Verdict {
        classification,
        beta_f: Some(beta_f),
        reason,
        qdb1,
        qdb2,
        qfr_max_deviation,
        qfr_pass: qfr_max_deviation.map(|d| d < cfg.tol.qfr),
        pairwise_max_residual: acc.pairwise,
        normalization_max_residual: acc.normalization,
        cptp_max_residual: acc.cptp,
    };
    Ok(Report { rows: acc.rows, verdict })
}

/// A singular reference state makes the weighted product undefined; that
/// is reported in the verdict rather than aborting the run.
fn qdb_or_note(r: Result<QdbSweep>) -> Result<QdbVerdict> {
    match r {
        Ok(s) => Ok(QdbVerdict::from_sweep(s)),
        Err(e @ Error::SingularWeight(_)) => Ok(QdbVerdict::not_applicable(e.to_string())),
        Err(e) => Err(e),
    }
}

pub const EXCHANGE_HEADER: &str = "tau,E,p_plus,p_minus,R,predicted,deviation,F_tau";

/// Fixed 17-significant-digit formatting for report floats.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn exchange_csv(rows: &[ExchangeRow]) -> String {
    let mut out = String::from(EXCHANGE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(r.tau),
            fmt_f64(r.e),
            fmt_f64(r.p_plus),
            fmt_f64(r.p_minus),
            fmt_opt(r.r),
            fmt_f64(r.predicted),
            fmt_opt(r.deviation),
            fmt_opt(r.f_tau)
        );
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}
