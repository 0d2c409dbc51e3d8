use super::MapFamily;
use crate::dynamics::SuperOperator;
use crate::error::{Error, Result};
use crate::matlin::{eigenvalues, re, ComplexMatrix, C64};
use crate::random;
use crate::states::{gibbs, infer_beta, DensityMatrix, HamiltonianSpec};

/// Horizon used for map families without a generator.
pub const PROBE_HORIZON: f64 = 100.0;
/// Probe states must agree within this trace distance at the horizon.
pub const CONVERGENCE_TOL: f64 = 1e-7;
/// `‖G_τ[ϱ∞] − ϱ∞‖₁` bound for a fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-8;
const SPECTRAL_ZERO: f64 = 1e-9;
const DECAY_MARGIN: f64 = 1e-10;
const PROBE_SEED: u64 = 0x5eed;
const RANDOM_PROBES: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    /// Thermalizing, and the asymptotic Gibbs state is invariant at all times.
    Fpt { beta_f: f64 },
    Thermalizing { beta_f: f64 },
    NonThermalizing { reason: String },
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Fpt { .. } => "FPT",
            Classification::Thermalizing { .. } => "Thermalizing",
            Classification::NonThermalizing { .. } => "NonThermalizing",
        }
    }

    pub fn beta_f(&self) -> Option<f64> {
        match *self {
            Classification::Fpt { beta_f } | Classification::Thermalizing { beta_f } => Some(beta_f),
            Classification::NonThermalizing { .. } => None,
        }
    }

    pub fn is_fpt(&self) -> bool {
        matches!(self, Classification::Fpt { .. })
    }

    pub fn is_thermalizing(&self) -> bool {
        self.beta_f().is_some()
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyReport {
    pub classification: Classification,
    pub asymptotic_state: Option<DensityMatrix>,
    /// Time at which the asymptotic statement is tested.
    pub tau_max: f64,
    /// Largest `‖G_τ[ϱ∞] − ϱ∞‖₁` over the grid.
    pub fixed_point_residual: f64,
}

fn non_thermal(reason: impl Into<String>, tau_max: f64) -> ClassifyReport {
    ClassifyReport {
        classification: Classification::NonThermalizing { reason: reason.into() },
        asymptotic_state: None,
        tau_max,
        fixed_point_residual: f64::NAN,
    }
}

fn trace_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    (a - b).trace_norm_hermitian()
}

/// Null vector of `m` normalized to unit trace.
fn unit_trace_kernel(m: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    let mut a = m.clone();
    for j in 0..d * d {
        a[(0, j)] = C64::default();
    }
    for i in 0..d {
        a[(0, i * d + i)] = re(1.0);
    }
    let mut rhs = ComplexMatrix::zeros(d * d, 1);
    rhs[(0, 0)] = re(1.0);
    let v = a.solve(&rhs)?;
    ComplexMatrix::unvec(v.as_slice(), d, d)
}

/// Accepts a candidate asymptotic state if it is a Gibbs state of `h`.
fn thermal_beta(rho: &ComplexMatrix, h: &HamiltonianSpec) -> std::result::Result<(DensityMatrix, f64), String> {
    let rho = DensityMatrix::new(rho.hermitian_part()).map_err(|e| e.to_string())?;
    let beta = infer_beta(&rho, h).map_err(|e| e.to_string())?;
    if beta < -1e-8 {
        return Err(format!("asymptotic state has negative temperature (β = {beta:.3e})"));
    }
    let beta = beta.max(0.0);
    let g = gibbs(h, beta).map_err(|e| e.to_string())?;
    let dist = trace_norm(rho.matrix(), g.matrix()).map_err(|e| e.to_string())?;
    if dist > CONVERGENCE_TOL {
        return Err(format!("asymptotic state is {dist:.3e} away from the Gibbs state at β = {beta}"));
    }
    Ok((rho, beta))
}

fn fixed_point_residual<F: MapFamily + ?Sized>(family: &F, rho: &DensityMatrix, tau_grid: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &tau in tau_grid {
        let out = family.map_at(tau)?.apply_to(rho.matrix())?;
        worst = worst.max(trace_norm(&out, rho.matrix())?);
    }
    Ok(worst)
}

/// Decides whether a family thermalizes, and whether its asymptotic Gibbs
/// state is a fixed point on `tau_grid`.
///
/// Semigroups are decided from the spectrum of `L`: a single zero mode and
/// all other modes strictly decaying. Other families are probed at
/// [`PROBE_HORIZON`]; if the probes have not merged there the result is
/// [`Error::InconclusiveHorizon`].
pub fn classify<F: MapFamily + ?Sized>(family: &F, h: &HamiltonianSpec, tau_grid: &[f64]) -> Result<ClassifyReport> {
    let d = family.dim();
    if h.dim() != d {
        return Err(Error::DimensionMismatch(format!("family on dimension {d} vs Hamiltonian dim {}", h.dim())));
    }
    match family.generator() {
        Some(l) => classify_semigroup(family, &l, h, tau_grid),
        None => classify_by_probes(family, h, tau_grid),
    }
}

fn classify_semigroup<F: MapFamily + ?Sized>(
    family: &F,
    l: &SuperOperator,
    h: &HamiltonianSpec,
    tau_grid: &[f64],
) -> Result<ClassifyReport> {
    let d = h.dim();
    let spec = eigenvalues(l.matrix())?;
    let scale = l.matrix().frobenius_norm().max(f64::MIN_POSITIVE);
    let zeros = spec.iter().filter(|z| z.norm() <= SPECTRAL_ZERO * scale).count();
    let gap = spec
        .iter()
        .filter(|z| z.norm() > SPECTRAL_ZERO * scale)
        .map(|z| -z.re)
        .fold(f64::INFINITY, f64::min);
    let tau_max = if gap.is_finite() && gap > 0.0 { 50.0 / gap } else { PROBE_HORIZON };
    if zeros != 1 {
        return Ok(non_thermal(format!("{zeros} stationary modes"), tau_max));
    }
    if !(gap > DECAY_MARGIN) {
        return Ok(non_thermal(format!("slowest mode has real part {:.3e}", -gap), tau_max));
    }
    let rho = unit_trace_kernel(l.matrix(), d)?;
    let (rho, beta_f) = match thermal_beta(&rho, h) {
        Ok(x) => x,
        Err(reason) => return Ok(non_thermal(reason, tau_max)),
    };
    let fixed = fixed_point_residual(family, &rho, tau_grid)?;
    let classification = if fixed < FIXED_POINT_TOL {
        Classification::Fpt { beta_f }
    } else {
        Classification::Thermalizing { beta_f }
    };
    Ok(ClassifyReport { classification, asymptotic_state: Some(rho), tau_max, fixed_point_residual: fixed })
}

/// Energy eigenstates, the maximally mixed state and a few seeded random states.
pub fn probe_states(h: &HamiltonianSpec) -> Vec<DensityMatrix> {
    let d = h.dim();
    let mut rng = random::rng(PROBE_SEED);
    let mut probes: Vec<DensityMatrix> = (0..d).map(|m| DensityMatrix::new(h.projector(m)).expect("projector")).collect();
    probes.push(DensityMatrix::maximally_mixed(d));
    probes.extend((0..RANDOM_PROBES).map(|_| DensityMatrix::random(&mut rng, d)));
    probes
}

fn classify_by_probes<F: MapFamily + ?Sized>(family: &F, h: &HamiltonianSpec, tau_grid: &[f64]) -> Result<ClassifyReport> {
    let d = h.dim();
    let g = family.map_at(PROBE_HORIZON)?;
    let reference = g.apply_to(DensityMatrix::maximally_mixed(d).matrix())?;
    let mut spread: f64 = 0.0;
    for p in probe_states(h) {
        spread = spread.max(trace_norm(&g.apply_to(p.matrix())?, &reference)?);
    }
    if spread > CONVERGENCE_TOL {
        return Err(Error::InconclusiveHorizon(spread));
    }
    let (rho, beta_f) = match thermal_beta(&reference, h) {
        Ok(x) => x,
        Err(reason) => return Ok(non_thermal(reason, PROBE_HORIZON)),
    };
    let fixed = fixed_point_residual(family, &rho, tau_grid)?;
    let classification = if fixed < FIXED_POINT_TOL {
        Classification::Fpt { beta_f }
    } else {
        Classification::Thermalizing { beta_f }
    };
    Ok(ClassifyReport { classification, asymptotic_state: Some(rho), tau_max: PROBE_HORIZON, fixed_point_residual: fixed })
}

/// Classifies a single channel iterated in discrete steps: a simple
/// eigenvalue 1 with every other eigenvalue strictly inside the unit disc.
/// A thermalizing channel fixes its asymptotic state, so it is reported FPT.
pub fn classify_channel(map: &SuperOperator, h: &HamiltonianSpec) -> Result<ClassifyReport> {
    let d = map.dim();
    if h.dim() != d {
        return Err(Error::DimensionMismatch(format!("channel on dimension {d} vs Hamiltonian dim {}", h.dim())));
    }
    let spec = eigenvalues(map.matrix())?;
    let ones = spec.iter().filter(|z| (*z - re(1.0)).norm() <= SPECTRAL_ZERO).count();
    let radius = spec
        .iter()
        .filter(|z| (*z - re(1.0)).norm() > SPECTRAL_ZERO)
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let steps = if radius > 0.0 && radius < 1.0 { 50.0 / -radius.ln() } else { PROBE_HORIZON };
    if ones != 1 {
        return Ok(non_thermal(format!("{ones} invariant modes"), steps));
    }
    if radius >= 1.0 - DECAY_MARGIN {
        return Ok(non_thermal(format!("subleading eigenvalue of modulus {radius:.12}"), steps));
    }
    let shifted = map.matrix() - &ComplexMatrix::identity(d * d);
    let rho = unit_trace_kernel(&shifted, d)?;
    let (rho, beta_f) = match thermal_beta(&rho, h) {
        Ok(x) => x,
        Err(reason) => return Ok(non_thermal(reason, steps)),
    };
    let fixed = trace_norm(&map.apply_to(rho.matrix())?, rho.matrix())?;
    Ok(ClassifyReport {
        classification: Classification::Fpt { beta_f },
        asymptotic_state: Some(rho),
        tau_max: steps,
        fixed_point_residual: fixed,
    })
}
