//! Eigenvalues of general (non-normal) complex matrices, used for the
//! spectral thermalisation criterion on Liouvillians.

use nalgebra::Schur;

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// All eigenvalues of a square complex matrix, sorted by descending real part
/// (ties broken by imaginary part).
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("eigenvalues of {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let schur = Schur::try_new(m.to_nalgebra(), 1e-15, 10_000)
        .ok_or_else(|| Error::NoConvergence("complex Schur decomposition".into()))?;
    let (_, t) = schur.unpack();
    let mut ev: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    ev.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(ev)
}
