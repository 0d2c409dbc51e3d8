use crate::error::{Error, Result};
use crate::matlin::{re, ComplexMatrix, C64};
use crate::states::DensityMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Picture {
    Schrodinger,
    Heisenberg,
}

/// Linear map on `d×d` matrices as a `d²×d²` matrix acting on column-stacked
/// operators.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    matrix: ComplexMatrix,
    dim: usize,
    picture: Picture,
}

/// Residuals of the CPTP test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CptpReport {
    /// Most negative Choi eigenvalue, clipped at zero (so `0` means CP).
    pub cp_residual: f64,
    /// `‖Tr_out Choi − I‖_F`.
    pub tp_residual: f64,
    /// `‖Choi − Choi†‖_F`, zero iff the map preserves Hermiticity.
    pub hermiticity_residual: f64,
}

impl CptpReport {
    pub fn max_residual(&self) -> f64 {
        self.cp_residual.max(self.tp_residual).max(self.hermiticity_residual)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() < tol
    }
}

fn isqrt(n: usize) -> Option<usize> {
    let d = (n as f64).sqrt().round() as usize;
    (d * d == n).then_some(d)
}

impl SuperOperator {
    pub fn new(matrix: ComplexMatrix, picture: Picture) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("superoperator must be square".into()));
        }
        let dim = isqrt(matrix.rows())
            .ok_or_else(|| Error::DimensionMismatch(format!("{} is not a square dimension", matrix.rows())))?;
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { matrix, dim, picture })
    }

    pub fn identity(d: usize, picture: Picture) -> Self {
        Self { matrix: ComplexMatrix::identity(d * d), dim: d, picture }
    }

    /// Superoperator of an arbitrary linear map, built column by column from
    /// its action on matrix units.
    pub fn from_map(d: usize, picture: Picture, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let n = d * d;
        let mut m = ComplexMatrix::zeros(n, n);
        for j in 0..d {
            for i in 0..d {
                let col = f(&ComplexMatrix::unit(d, i, j)).vec();
                for (r, v) in col.into_iter().enumerate() {
                    m[(r, j * d + i)] = v;
                }
            }
        }
        Self { matrix: m, dim: d, picture }
    }

    /// `A ↦ [H, A]`, i.e. `I⊗H − Hᵀ⊗I`.
    pub fn commutator(h: &ComplexMatrix, picture: Picture) -> Self {
        let id = ComplexMatrix::identity(h.rows());
        Self { matrix: &id.kron(h) - &h.transpose().kron(&id), dim: h.rows(), picture }
    }

    /// `A ↦ Aᵀ`; positive but not completely positive.
    pub fn transpose_map(d: usize) -> Self {
        Self::from_map(d, Picture::Schrodinger, |a| a.transpose())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn with_matrix(&self, matrix: ComplexMatrix) -> Self {
        assert_eq!(matrix.rows(), self.matrix.rows());
        Self { matrix, dim: self.dim, picture: self.picture }
    }

    pub fn apply_to(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator for a superoperator on dimension {}",
                x.rows(),
                x.cols(),
                self.dim
            )));
        }
        ComplexMatrix::unvec(&self.matrix.mul_vec(&x.vec())?, self.dim, self.dim)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.apply_to(rho.matrix())?)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self { matrix: self.matrix.try_mul(&other.matrix)?, dim: self.dim, picture: self.picture })
    }

    /// `e^{τ·self}`.
    pub fn evolve(&self, tau: f64) -> Result<Self> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::InvalidParameter(format!("evolution time {tau}")));
        }
        Ok(Self { matrix: self.matrix.scale_re(tau).expm()?, dim: self.dim, picture: self.picture })
    }

    /// Dual with respect to the bilinear pairing `Tr[X·Y]`, so that
    /// `Tr[M[σ]·A] = Tr[σ·M♯[A]]`. Flips the picture.
    pub fn dual(&self) -> Self {
        let p = transpose_permutation(self.dim);
        let matrix = &(&p * &self.matrix.transpose()) * &p;
        let picture = match self.picture {
            Picture::Schrodinger => Picture::Heisenberg,
            Picture::Heisenberg => Picture::Schrodinger,
        };
        Self { matrix, dim: self.dim, picture }
    }

    /// `Choi = Σ_ij |i⟩⟨j| ⊗ M[|i⟩⟨j|]`.
    pub fn choi(&self) -> ComplexMatrix {
        let d = self.dim;
        ComplexMatrix::from_fn(d * d, d * d, |r, s| {
            let (i, a) = (r / d, r % d);
            let (j, b) = (s / d, s % d);
            self.matrix[(b * d + a, j * d + i)]
        })
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let ch = self.choi();
        ch.distance(&ch.dagger())
    }

    /// Complete positivity, trace preservation and Hermiticity preservation
    /// residuals. Only meaningful for Schrödinger-picture maps.
    pub fn cptp_report(&self) -> CptpReport {
        let ch = self.choi();
        let hermiticity_residual = ch.distance(&ch.dagger());
        let cp_residual = match ch.hermitian_part().herm_eig() {
            Ok(e) => (-e.values[0]).max(0.0),
            Err(_) => f64::INFINITY,
        };
        let tp_residual = self.partial_trace_residual(&ch);
        CptpReport { cp_residual, tp_residual, hermiticity_residual }
    }

    pub(crate) fn partial_trace_residual(&self, choi: &ComplexMatrix) -> f64 {
        let d = self.dim;
        let reduced = ComplexMatrix::from_fn(d, d, |i, j| (0..d).map(|a| choi[(i * d + a, j * d + a)]).sum());
        reduced.distance(&ComplexMatrix::identity(d))
    }

    /// Row vector `X ↦ Tr[M[X]]` in vec coordinates.
    pub fn trace_functional(&self) -> Vec<C64> {
        let d = self.dim;
        let n = d * d;
        (0..n).map(|col| (0..d).map(|a| self.matrix[(a * d + a, col)]).sum()).collect()
    }

    pub fn is_trace_annihilating(&self, tol: f64) -> bool {
        self.trace_functional().iter().all(|z| z.norm() < tol)
    }

    pub fn identity_residual(&self) -> f64 {
        self.matrix.distance(&ComplexMatrix::identity(self.dim * self.dim))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.with_matrix(self.matrix.scale_re(s))
    }

    /// Row vector of the trace functional `X ↦ Tr[X]` in vec coordinates.
    pub fn unit_trace_row(d: usize) -> Vec<C64> {
        (0..d * d).map(|k| if k % (d + 1) == 0 { re(1.0) } else { re(0.0) }).collect()
    }
}

/// Permutation `P` with `P·vec(X) = vec(Xᵀ)`.
pub fn transpose_permutation(d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut p = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            // vec(X)[j d + i] = X_ij ; vec(Xᵀ)[i d + j] = X_ij
            p[(i * d + j, j * d + i)] = re(1.0);
        }
    }
    p
}
