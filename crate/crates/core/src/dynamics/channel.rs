use log::warn;

use super::superop::{Picture, SuperOperator};
use crate::error::{Error, Result};
use crate::matlin::ComplexMatrix;
use crate::states::DensityMatrix;

/// Trace-preservation tolerance for explicitly supplied Kraus operators.
pub const KRAUS_TP_TOL: f64 = 1e-10;
/// Choi eigenvalues below this are treated as numerical zero.
pub const CHOI_RANK_TOL: f64 = 1e-12;
/// Choi eigenvalues in `(−CHOI_CLAMP_TOL, 0)` are clamped; below that the
/// map is rejected as not completely positive.
pub const CHOI_CLAMP_TOL: f64 = 1e-8;

/// CPTP map `ρ ↦ Σ_j G_j ρ G_j†`.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
    dim: usize,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let ch = Self::unchecked(ops)?;
        let r = ch.tp_residual();
        if r > KRAUS_TP_TOL {
            return Err(Error::NotTracePreserving(r));
        }
        Ok(ch)
    }

    fn unchecked(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::DimensionMismatch("empty Kraus list".into()))?;
        let dim = first.rows();
        for (j, g) in ops.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::DimensionMismatch(format!("Kraus operator {j} is {}x{}", g.rows(), g.cols())));
            }
            if !g.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { ops, dim })
    }

    pub fn identity(d: usize) -> Self {
        Self { ops: vec![ComplexMatrix::identity(d)], dim: d }
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `‖Σ_j G_j† G_j − I‖_F`.
    pub fn tp_residual(&self) -> f64 {
        let mut s = ComplexMatrix::zeros(self.dim, self.dim);
        for g in &self.ops {
            s = &s + &(&g.dagger() * g);
        }
        s.distance(&ComplexMatrix::identity(self.dim))
    }

    pub fn apply_to(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!("{}x{} input for a channel on dimension {}", x.rows(), x.cols(), self.dim)));
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for g in &self.ops {
            out = &out + &(&(g * x) * &g.dagger());
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.apply_to(rho.matrix())?)
    }

    /// `Σ_j conj(G_j) ⊗ G_j`.
    pub fn superop(&self) -> SuperOperator {
        let n = self.dim * self.dim;
        let mut m = ComplexMatrix::zeros(n, n);
        for g in &self.ops {
            m = &m + &g.conj().kron(g);
        }
        SuperOperator::new(m, Picture::Schrodinger).expect("d²×d² by construction")
    }
}

/// Kraus decomposition through the eigendecomposition of the Choi matrix.
pub fn channel_from_superop(s: &SuperOperator) -> Result<KrausChannel> {
    let d = s.dim();
    let choi = s.choi();
    let herm = choi.distance(&choi.dagger());
    if herm > CHOI_CLAMP_TOL {
        return Err(Error::NotHermiticityPreserving(herm));
    }
    let eig = choi.hermitian_part().herm_eig()?;
    let min = eig.values[0];
    if min < -CHOI_CLAMP_TOL {
        return Err(Error::NotCP(min));
    }
    if min < -CHOI_RANK_TOL {
        warn!("clamping Choi eigenvalue {min:.3e} to zero");
    }
    let tp = s.partial_trace_residual(&choi);
    if tp > CHOI_CLAMP_TOL {
        return Err(Error::NotTracePreserving(tp));
    }
    let mut ops = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate().rev() {
        if lambda < CHOI_RANK_TOL {
            continue;
        }
        let v = eig.vector(k);
        let sl = lambda.sqrt();
        // Choi[(i d + a), (j d + b)] = Σ_k K_k[a,i] conj(K_k[b,j])
        ops.push(ComplexMatrix::from_fn(d, d, |a, i| v[i * d + a] * sl));
    }
    if ops.is_empty() {
        return Err(Error::NotTracePreserving(tp));
    }
    KrausChannel::unchecked(ops)
}

/// Common interface for the two channel representations.
pub trait QuantumMap {
    fn dim(&self) -> usize;
    /// Schrödinger-picture action on an operator.
    fn act(&self, x: &ComplexMatrix) -> Result<ComplexMatrix>;
    /// Schrödinger-picture superoperator.
    fn to_superop(&self) -> SuperOperator;
    fn kraus(&self) -> Option<&KrausChannel> {
        None
    }
}

impl QuantumMap for KrausChannel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn act(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.apply_to(x)
    }

    fn to_superop(&self) -> SuperOperator {
        self.superop()
    }

    fn kraus(&self) -> Option<&KrausChannel> {
        Some(self)
    }
}

impl QuantumMap for SuperOperator {
    fn dim(&self) -> usize {
        SuperOperator::dim(self)
    }

    fn act(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self.picture() {
            Picture::Schrodinger => self.apply_to(x),
            Picture::Heisenberg => self.dual().apply_to(x),
        }
    }

    fn to_superop(&self) -> SuperOperator {
        match self.picture() {
            Picture::Schrodinger => self.clone(),
            Picture::Heisenberg => self.dual(),
        }
    }
}
