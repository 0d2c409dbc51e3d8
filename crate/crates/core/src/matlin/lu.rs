use nalgebra::LU;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// LU factorisation with partial pivoting; pivots below a relative threshold
/// are reported as [`Error::SingularMatrix`].
pub(super) fn solve(m: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("LU of {}x{}", m.rows(), m.cols())));
    }
    if rhs.rows() != m.rows() {
        return Err(Error::DimensionMismatch(format!("solve with {} rows, expected {}", rhs.rows(), m.rows())));
    }
    let lu = LU::new(m.to_nalgebra());
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let floor = 1e-300_f64.max(f64::EPSILON * 1e-4 * scale);
    if lu.u().diagonal().iter().any(|p| p.norm() <= floor) {
        return Err(Error::SingularMatrix);
    }
    let x = lu.solve(&rhs.to_nalgebra()).ok_or(Error::SingularMatrix)?;
    Ok(ComplexMatrix::from_nalgebra(&x))
}
