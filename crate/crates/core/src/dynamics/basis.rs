//! Generalised Gell-Mann operator basis.

use crate::error::{Error, Result};
use crate::matlin::{c, re, ComplexMatrix};

/// Orthonormal basis `{F_k}` of `M_d(ℂ)` with `Tr[F_k† F_l] = δ_kl`.
///
/// Order: symmetric off-diagonal `(E_jk + E_kj)/√2`, antisymmetric
/// `−i(E_jk − E_kj)/√2` (pairs `j < k` lexicographic), diagonal
/// `(Σ_{m<l} E_mm − l·E_ll)/√(l(l+1))`, and last `I/√d`.
pub fn gell_mann(d: usize) -> Vec<ComplexMatrix> {
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = re(h);
        m[(k, j)] = re(h);
        out.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = c(0.0, -h);
        m[(k, j)] = c(0.0, h);
        out.push(m);
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = ComplexMatrix::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = re(norm);
        }
        m[(l, l)] = re(-(l as f64) * norm);
        out.push(m);
    }
    out.push(ComplexMatrix::identity(d).scale_re(1.0 / (d as f64).sqrt()));
    out
}

/// Checks orthonormality, tracelessness of the first `d² − 1` elements and
/// that the last element is `I/√d`.
pub fn validate_basis(basis: &[ComplexMatrix], d: usize) -> Result<()> {
    if basis.len() != d * d {
        return Err(Error::InvalidBasis(format!("{} elements for dimension {d}", basis.len())));
    }
    for (k, f) in basis.iter().enumerate() {
        if f.rows() != d || f.cols() != d {
            return Err(Error::InvalidBasis(format!("element {k} is {}x{}", f.rows(), f.cols())));
        }
    }
    for k in 0..basis.len() {
        for l in 0..basis.len() {
            let g = basis[k].hs_inner(&basis[l]);
            let expect = if k == l { 1.0 } else { 0.0 };
            if (g - re(expect)).norm() > 1e-12 {
                return Err(Error::InvalidBasis(format!("Tr[F_{k}† F_{l}] = {g}")));
            }
        }
    }
    for (k, f) in basis[..d * d - 1].iter().enumerate() {
        if f.trace().norm() > 1e-12 {
            return Err(Error::InvalidBasis(format!("element {k} is not traceless")));
        }
    }
    let id = ComplexMatrix::identity(d).scale_re(1.0 / (d as f64).sqrt());
    if basis[d * d - 1].distance(&id) > 1e-12 {
        return Err(Error::InvalidBasis("last element must be I/√d".into()));
    }
    Ok(())
}
