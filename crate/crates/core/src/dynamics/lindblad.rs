use super::basis::{gell_mann, validate_basis};
use super::superop::{Picture, SuperOperator};
use crate::error::{Error, Result};
use crate::matlin::{c, eigenvalues, re, ComplexMatrix, C64};
use crate::states::HamiltonianSpec;

/// Tolerance on Hermiticity and positivity of the Kossakowski matrix.
pub const KOSSAKOWSKI_TOL: f64 = 1e-10;

/// `L[ρ] = −i[H,ρ] + Σ_kl C_kl (F_k ρ F_l† − ½{F_l† F_k, ρ})`, with the sum over
/// the `d² − 1` traceless basis elements.
#[derive(Clone, Debug)]
pub struct LindbladGenerator {
    hamiltonian: HamiltonianSpec,
    kossakowski: ComplexMatrix,
    basis: Vec<ComplexMatrix>,
}

impl LindbladGenerator {
    pub fn new(hamiltonian: HamiltonianSpec, kossakowski: ComplexMatrix) -> Result<Self> {
        let basis = gell_mann(hamiltonian.dim());
        Self::with_basis(hamiltonian, kossakowski, basis)
    }

    pub fn with_basis(hamiltonian: HamiltonianSpec, kossakowski: ComplexMatrix, basis: Vec<ComplexMatrix>) -> Result<Self> {
        let d = hamiltonian.dim();
        validate_basis(&basis, d)?;
        let n = d * d - 1;
        if kossakowski.rows() != n || kossakowski.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "Kossakowski matrix is {}x{}, expected {n}x{n}",
                kossakowski.rows(),
                kossakowski.cols()
            )));
        }
        if !kossakowski.is_finite() {
            return Err(Error::NonFinite);
        }
        let residual = kossakowski.hermitian_residual();
        if residual > KOSSAKOWSKI_TOL {
            return Err(Error::NotHermitian { residual, tol: KOSSAKOWSKI_TOL });
        }
        let kossakowski = kossakowski.hermitian_part();
        if n > 0 {
            let min = kossakowski.herm_eig()?.values[0];
            if min < -KOSSAKOWSKI_TOL {
                return Err(Error::KossakowskiNotPSD(min));
            }
        }
        Ok(Self { hamiltonian, kossakowski, basis })
    }

    /// Purely Hamiltonian generator (`C = 0`).
    pub fn unitary(hamiltonian: HamiltonianSpec) -> Self {
        let n = hamiltonian.dim() * hamiltonian.dim() - 1;
        Self::new(hamiltonian, ComplexMatrix::zeros(n, n)).expect("zero Kossakowski matrix is valid")
    }

    /// Builds `C` from weighted traceless jump operators, so that the
    /// dissipator reads `Σ_j r_j (L_j ρ L_j† − ½{L_j† L_j, ρ})`.
    pub fn from_jumps(hamiltonian: HamiltonianSpec, jumps: &[(f64, ComplexMatrix)]) -> Result<Self> {
        let d = hamiltonian.dim();
        let basis = gell_mann(d);
        let n = d * d - 1;
        let mut kossakowski = ComplexMatrix::zeros(n, n);
        for (j, (rate, op)) in jumps.iter().enumerate() {
            if !(*rate >= 0.0) || !rate.is_finite() {
                return Err(Error::InvalidParameter(format!("jump {j} has rate {rate}")));
            }
            if op.rows() != d || op.cols() != d {
                return Err(Error::DimensionMismatch(format!("jump {j} is {}x{}", op.rows(), op.cols())));
            }
            if op.trace().norm() > 1e-12 * op.frobenius_norm().max(1.0) {
                return Err(Error::JumpNotTraceless(j));
            }
            let a: Vec<C64> = basis[..n].iter().map(|f| f.hs_inner(op) * rate.sqrt()).collect();
            for k in 0..n {
                for l in 0..n {
                    kossakowski[(k, l)] += a[k] * a[l].conj();
                }
            }
        }
        Self::with_basis(hamiltonian, kossakowski, basis)
    }

    /// Recovers `(H, C)` from a Schrödinger-picture superoperator.
    ///
    /// The coherent part is identified up to a multiple of the identity and
    /// must agree with the traceless part of `hamiltonian`.
    pub fn from_superop(hamiltonian: HamiltonianSpec, superop: &SuperOperator) -> Result<Self> {
        let d = hamiltonian.dim();
        if superop.dim() != d {
            return Err(Error::DimensionMismatch(format!("superoperator on dim {} vs H dim {d}", superop.dim())));
        }
        let basis = gell_mann(d);
        let n2 = d * d;
        let s = superop.matrix();
        // coordinates in the orthonormal basis {conj(F_j) ⊗ F_i}: X ↦ F_i X F_j†
        let mut coef = ComplexMatrix::zeros(n2, n2);
        for i in 0..n2 {
            for j in 0..n2 {
                let e = basis[j].conj().kron(&basis[i]);
                coef[(i, j)] = e.hs_inner(s);
            }
        }
        let last = n2 - 1;
        let sd = (d as f64).sqrt();
        let mut f = ComplexMatrix::identity(d).scale(coef[(last, last)] / (2.0 * d as f64));
        for k in 0..last {
            f = &f + &basis[k].scale(coef[(k, last)] / sd);
        }
        let h_rec = (&f - &f.dagger()).scale(c(0.0, 0.5));
        let traceless = |m: &ComplexMatrix| &m.clone() - &ComplexMatrix::identity(d).scale(m.trace() / d as f64);
        let mismatch = traceless(&h_rec).distance(&traceless(hamiltonian.matrix()));
        let scale = hamiltonian.matrix().frobenius_norm().max(s.frobenius_norm()).max(1.0);
        if mismatch > 1e-9 * scale {
            return Err(Error::HamiltonianMismatch(mismatch));
        }
        let kossakowski = ComplexMatrix::from_fn(last, last, |k, l| coef[(k, l)]);
        let generator = Self::with_basis(hamiltonian, kossakowski, basis)?;
        let rebuilt = generator.lindblad_superop();
        let residual = rebuilt.matrix().distance(s);
        if residual > 1e-9 * scale {
            return Err(Error::NotTracePreserving(residual));
        }
        Ok(generator)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    pub fn kossakowski(&self) -> &ComplexMatrix {
        &self.kossakowski
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Schrödinger-picture superoperator.
    pub fn lindblad_superop(&self) -> SuperOperator {
        let d = self.dim();
        let id = ComplexMatrix::identity(d);
        let h = self.hamiltonian.matrix();
        let mut m = (&id.kron(h) - &h.transpose().kron(&id)).scale(c(0.0, -1.0));
        self.for_each_term(|ckl, fk, fl| {
            let fl_dag = fl.dagger();
            let prod = &fl_dag * fk;
            let term = &(&fl_dag.transpose().kron(fk) - &id.kron(&prod).scale_re(0.5)) - &prod.transpose().kron(&id).scale_re(0.5);
            m = &m + &term.scale(ckl);
        });
        SuperOperator::new(m, Picture::Schrodinger).expect("d²×d² by construction")
    }

    /// Heisenberg-picture superoperator,
    /// `L♯[A] = i[H,A] + Σ_kl C_kl (F_l† A F_k − ½{F_l† F_k, A})`.
    pub fn dual_superop(&self) -> SuperOperator {
        let d = self.dim();
        let id = ComplexMatrix::identity(d);
        let h = self.hamiltonian.matrix();
        let mut m = (&id.kron(h) - &h.transpose().kron(&id)).scale(c(0.0, 1.0));
        self.for_each_term(|ckl, fk, fl| {
            let fl_dag = fl.dagger();
            let prod = &fl_dag * fk;
            let term = &(&fk.transpose().kron(&fl_dag) - &id.kron(&prod).scale_re(0.5)) - &prod.transpose().kron(&id).scale_re(0.5);
            m = &m + &term.scale(ckl);
        });
        SuperOperator::new(m, Picture::Heisenberg).expect("d²×d² by construction")
    }

    fn for_each_term(&self, mut f: impl FnMut(C64, &ComplexMatrix, &ComplexMatrix)) {
        let n = self.kossakowski.rows();
        for k in 0..n {
            for l in 0..n {
                let ckl = self.kossakowski[(k, l)];
                if ckl != re(0.0) {
                    f(ckl, &self.basis[k], &self.basis[l]);
                }
            }
        }
    }

    /// Liouvillian eigenvalues, sorted by descending real part.
    pub fn spectrum(&self) -> Result<Vec<C64>> {
        eigenvalues(self.lindblad_superop().matrix())
    }
}
