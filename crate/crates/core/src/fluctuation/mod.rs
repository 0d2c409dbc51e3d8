//! Transition probabilities between energy levels, the energy-exchange
//! distribution `P(±E;τ)` and the fluctuation ratio `R(E;τ)`.

mod classify;

pub use classify::{classify, classify_channel, probe_states, Classification, ClassifyReport, PROBE_HORIZON};

use crate::dynamics::{KrausChannel, LindbladGenerator, QuantumMap, SuperOperator};
use crate::error::{Error, Result};
use crate::states::HamiltonianSpec;

/// Below this absorption probability `R(E;τ)` is reported as undefined.
pub const RATIO_FLOOR: f64 = 1e-13;
/// Agreement required between the superoperator and Kraus routes.
pub const ROUTE_TOL: f64 = 1e-10;

/// A map `G_τ` available at every `τ ≥ 0`.
pub trait MapFamily {
    fn dim(&self) -> usize;
    /// Schrödinger-picture superoperator at time `τ`.
    fn map_at(&self, tau: f64) -> Result<SuperOperator>;
    /// Generator `L` when the family is a semigroup `e^{τL}`.
    fn generator(&self) -> Option<SuperOperator> {
        None
    }
    fn kraus_at(&self, _tau: f64) -> Option<KrausChannel> {
        None
    }
}

impl MapFamily for LindbladGenerator {
    fn dim(&self) -> usize {
        LindbladGenerator::dim(self)
    }

    fn map_at(&self, tau: f64) -> Result<SuperOperator> {
        self.lindblad_superop().evolve(tau)
    }

    fn generator(&self) -> Option<SuperOperator> {
        Some(self.lindblad_superop())
    }
}

/// Semigroup given by a Schrödinger-picture generator superoperator.
#[derive(Clone, Debug)]
pub struct Semigroup(pub SuperOperator);

impl MapFamily for Semigroup {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn map_at(&self, tau: f64) -> Result<SuperOperator> {
        self.0.evolve(tau)
    }

    fn generator(&self) -> Option<SuperOperator> {
        Some(self.0.clone())
    }
}

/// `p[m][n] = p(|m⟩ → |n⟩; τ)` in the energy eigenbasis.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    pub tau: f64,
    p: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.p[m][n]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.p
    }

    /// `max_m |Σ_n p[m][n] − 1|`.
    pub fn stochasticity_residual(&self) -> f64 {
        self.p.iter().map(|row| (row.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.p.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_difference(&self, other: &Self) -> f64 {
        self.p.iter().flatten().zip(other.p.iter().flatten()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// `⟨n|G[|m⟩⟨m|]|n⟩`. When Kraus operators are available the value is
/// cross-checked against `Σ_j |⟨n|G_j|m⟩|²`.
pub fn transition_matrix(map: &impl QuantumMap, h: &HamiltonianSpec, tau: f64) -> Result<TransitionMatrix> {
    let d = h.dim();
    if map.dim() != d {
        return Err(Error::DimensionMismatch(format!("map on dimension {} vs Hamiltonian dim {d}", map.dim())));
    }
    let mut p = vec![vec![0.0; d]; d];
    for (m, row) in p.iter_mut().enumerate() {
        let out = map.act(&h.projector(m))?;
        for (n, x) in row.iter_mut().enumerate() {
            *x = h.element(&out, n, n).re;
        }
    }
    let tm = TransitionMatrix { tau, p };
    if let Some(k) = map.kraus() {
        let diff = tm.max_difference(&transition_matrix_kraus(k, h, tau)?);
        if diff > ROUTE_TOL {
            return Err(Error::InternalCheck(format!("Kraus and superoperator transition routes differ by {diff:.3e}")));
        }
    }
    Ok(tm)
}

/// `p[m][n] = Σ_j |⟨n|G_j|m⟩|²`.
pub fn transition_matrix_kraus(channel: &KrausChannel, h: &HamiltonianSpec, tau: f64) -> Result<TransitionMatrix> {
    let d = h.dim();
    if channel.dim() != d {
        return Err(Error::DimensionMismatch(format!("channel on dimension {} vs Hamiltonian dim {d}", channel.dim())));
    }
    let p = (0..d)
        .map(|m| (0..d).map(|n| channel.ops().iter().map(|g| h.element(g, n, m).norm_sqr()).sum()).collect())
        .collect();
    Ok(TransitionMatrix { tau, p })
}

/// One Bohr frequency `E ≥ 0` with its absorption and release probabilities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapRecord {
    pub e: f64,
    pub p_plus: f64,
    pub p_minus: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyExchangeDistribution {
    pub tau: f64,
    pub beta_i: f64,
    pub beta_f: f64,
    /// Sorted by increasing `E`; the first record is `E = 0`.
    pub gaps: Vec<GapRecord>,
}

impl EnergyExchangeDistribution {
    /// `|Σ_E P(+E) + Σ_{E>0} P(−E) − 1|`.
    pub fn normalization_residual(&self) -> f64 {
        let plus: f64 = self.gaps.iter().map(|g| g.p_plus).sum();
        let minus: f64 = self.gaps.iter().filter(|g| g.e > 0.0).map(|g| g.p_minus).sum();
        (plus + minus - 1.0).abs()
    }

    pub fn gap(&self, e: f64, tol: f64) -> Option<&GapRecord> {
        self.gaps.iter().find(|g| (g.e - e).abs() <= tol)
    }

    pub fn delta_beta(&self) -> f64 {
        self.beta_i - self.beta_f
    }
}

/// Groups `E_n − E_m` by absolute value and accumulates `p_m(β_i)·p(m→n)`
/// into the absorption side when `E_n > E_m` and the release side otherwise.
pub fn exchange_from_transitions(
    tm: &TransitionMatrix,
    h: &HamiltonianSpec,
    beta_i: f64,
    beta_f: f64,
) -> Result<EnergyExchangeDistribution> {
    let d = h.dim();
    if tm.dim() != d {
        return Err(Error::DimensionMismatch(format!("transition matrix dim {} vs Hamiltonian dim {d}", tm.dim())));
    }
    let w = h.boltzmann_weights(beta_i)?;
    let e = h.energies();
    let tol = h.energy_resolution();

    let mut levels: Vec<f64> = (0..d).flat_map(|m| (0..d).map(move |n| (m, n))).map(|(m, n)| (e[n] - e[m]).abs()).collect();
    levels.sort_by(|a, b| a.total_cmp(b));
    let mut gaps: Vec<GapRecord> = vec![GapRecord { e: 0.0, p_plus: 0.0, p_minus: 0.0 }];
    for x in levels {
        if x - gaps.last().unwrap().e > tol {
            gaps.push(GapRecord { e: x, p_plus: 0.0, p_minus: 0.0 });
        }
    }

    for m in 0..d {
        for n in 0..d {
            let delta = e[n] - e[m];
            let k = gaps.iter().position(|g| (g.e - delta.abs()).abs() <= tol).expect("every gap was recorded");
            let weight = w[m] * tm.get(m, n);
            if delta > tol {
                gaps[k].p_plus += weight;
            } else if delta < -tol {
                gaps[k].p_minus += weight;
            } else {
                gaps[k].p_plus += weight;
            }
        }
    }
    // no energy exchanged: absorbing and releasing zero are the same event
    gaps[0].p_minus = gaps[0].p_plus;
    Ok(EnergyExchangeDistribution { tau: tm.tau, beta_i, beta_f, gaps })
}

pub fn exchange_distribution(
    map: &impl QuantumMap,
    h: &HamiltonianSpec,
    beta_i: f64,
    beta_f: f64,
    tau: f64,
) -> Result<EnergyExchangeDistribution> {
    exchange_from_transitions(&transition_matrix(map, h, tau)?, h, beta_i, beta_f)
}

/// `R(E;τ) = P(+E;τ)/P(−E;τ)` against the prediction `e^{Δβ·E}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioEntry {
    pub e: f64,
    pub p_plus: f64,
    pub p_minus: f64,
    /// `None` when `P(−E;τ)` is below [`RATIO_FLOOR`].
    pub r: Option<f64>,
    pub predicted: f64,
    pub deviation: Option<f64>,
}

/// Ratios for every gap `E > 0`.
pub fn qfr_ratio(dist: &EnergyExchangeDistribution) -> Vec<RatioEntry> {
    let db = dist.delta_beta();
    dist.gaps
        .iter()
        .filter(|g| g.e > 0.0)
        .map(|g| {
            let predicted = (db * g.e).exp();
            let r = (g.p_minus > RATIO_FLOOR).then(|| g.p_plus / g.p_minus);
            RatioEntry {
                e: g.e,
                p_plus: g.p_plus,
                p_minus: g.p_minus,
                r,
                predicted,
                deviation: r.map(|r| (r / predicted - 1.0).abs()),
            }
        })
        .collect()
}

/// Largest defined deviation, or `None` if every ratio is undefined.
pub fn max_deviation(entries: &[RatioEntry]) -> Option<f64> {
    entries.iter().filter_map(|r| r.deviation).reduce(f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairwiseReport {
    pub max_residual: f64,
}

/// `max_{m,n} |w_m p(m→n) − w_n p(n→m)|` with `w` the normalized Gibbs
/// weights at `β_f`.
pub fn pairwise_from_transitions(tm: &TransitionMatrix, h: &HamiltonianSpec, beta_f: f64) -> Result<PairwiseReport> {
    let w = h.boltzmann_weights(beta_f)?;
    let d = tm.dim();
    let mut max_residual: f64 = 0.0;
    for m in 0..d {
        for n in m + 1..d {
            max_residual = max_residual.max((w[m] * tm.get(m, n) - w[n] * tm.get(n, m)).abs());
        }
    }
    Ok(PairwiseReport { max_residual })
}

pub fn check_pairwise_condition(map: &impl QuantumMap, h: &HamiltonianSpec, beta_f: f64) -> Result<PairwiseReport> {
    pairwise_from_transitions(&transition_matrix(map, h, f64::NAN)?, h, beta_f)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationarityReport {
    pub max_residual: f64,
}

/// `max_m |Σ_n p_n(β_f)·p(n→m) − p_m(β_f)|`.
pub fn fpt_stationarity_identity(map: &impl QuantumMap, h: &HamiltonianSpec, beta_f: f64) -> Result<StationarityReport> {
    let tm = transition_matrix(map, h, f64::NAN)?;
    let w = h.boltzmann_weights(beta_f)?;
    let d = tm.dim();
    let max_residual = (0..d)
        .map(|m| ((0..d).map(|n| w[n] * tm.get(n, m)).sum::<f64>() - w[m]).abs())
        .fold(0.0, f64::max);
    Ok(StationarityReport { max_residual })
}
