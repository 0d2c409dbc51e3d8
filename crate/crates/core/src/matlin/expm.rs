//! Matrix exponential (scaling and squaring with Padé approximants).

use super::ComplexMatrix;
use crate::error::{Error, Result};

pub(super) fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("expm of {}x{}", m.rows(), m.cols())));
    }
    if m.rows() == 0 {
        return Ok(m.clone());
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let r = ComplexMatrix::from_nalgebra(&m.to_nalgebra().exp());
    if !r.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(r)
}
