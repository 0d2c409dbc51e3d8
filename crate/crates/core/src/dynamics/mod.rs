//! Kraus channels, Lindblad generators and their superoperator forms.

mod basis;
mod channel;
mod lindblad;
mod superop;

pub use basis::{gell_mann, validate_basis};
pub use channel::{channel_from_superop, KrausChannel, QuantumMap, CHOI_CLAMP_TOL, CHOI_RANK_TOL, KRAUS_TP_TOL};
pub use lindblad::{LindbladGenerator, KOSSAKOWSKI_TOL};
pub use superop::{transpose_permutation, CptpReport, Picture, SuperOperator};

use crate::error::Result;
use crate::states::DensityMatrix;

pub fn lindblad_superop(gen: &LindbladGenerator) -> SuperOperator {
    gen.lindblad_superop()
}

pub fn dual_superop(gen: &LindbladGenerator) -> SuperOperator {
    gen.dual_superop()
}

pub fn evolve(superop: &SuperOperator, tau: f64) -> Result<SuperOperator> {
    superop.evolve(tau)
}

pub fn superop_from_channel(channel: &KrausChannel) -> SuperOperator {
    channel.superop()
}

pub fn apply(map: &impl QuantumMap, rho: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(map.act(rho.matrix())?)
}

pub fn is_cptp(s: &SuperOperator) -> CptpReport {
    s.cptp_report()
}
