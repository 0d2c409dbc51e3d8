use crate::dynamics::{Picture, SuperOperator};
use crate::error::{Error, Result};
use crate::matlin::{c, pauli, ComplexMatrix};

#[derive(Clone, Debug, PartialEq)]
pub enum TimeReversalKind {
    /// Complex conjugation with respect to an orthonormal basis (spinless).
    Conjugation,
    /// `Θ = −iσ_y C` for a spin one-half.
    SpinHalf,
    /// `Θ = U C` for a user-supplied unitary `U`.
    Custom,
}

/// Linear map `T[A] = Θ A† Θ†` induced by an antiunitary `Θ = U C`, where
/// `C` is complex conjugation in the computational basis. Evaluates as
/// `T[A] = U Aᵀ U†`.
#[derive(Clone, Debug)]
pub struct TimeReversal {
    kind: TimeReversalKind,
    u: ComplexMatrix,
}

/// Residuals of the structural properties of `T` on a set of samples.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TimeReversalProperties {
    pub linearity: f64,
    pub norm: f64,
    pub trace: f64,
    pub adjoint: f64,
    pub antimultiplicative: f64,
    pub shape: f64,
    pub involution: f64,
}

impl TimeReversalProperties {
    pub fn max(&self) -> f64 {
        [self.linearity, self.norm, self.trace, self.adjoint, self.antimultiplicative, self.shape, self.involution]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn as_list(&self) -> [(&'static str, f64); 7] {
        [
            ("linearity", self.linearity),
            ("norm", self.norm),
            ("trace", self.trace),
            ("adjoint", self.adjoint),
            ("antimultiplicative", self.antimultiplicative),
            ("shape", self.shape),
            ("involution", self.involution),
        ]
    }
}

impl TimeReversal {
    /// Conjugation in the computational basis: `T[A] = Aᵀ`.
    pub fn conjugation(d: usize) -> Self {
        Self { kind: TimeReversalKind::Conjugation, u: ComplexMatrix::identity(d) }
    }

    /// Conjugation with respect to the orthonormal columns of `basis`.
    pub fn conjugation_in_basis(basis: &ComplexMatrix) -> Result<Self> {
        check_unitary(basis)?;
        Ok(Self { kind: TimeReversalKind::Conjugation, u: basis * &basis.transpose() })
    }

    pub fn spin_half() -> Self {
        Self { kind: TimeReversalKind::SpinHalf, u: pauli::y().scale(c(0.0, -1.0)) }
    }

    /// `Θ = U C`. Requires `U` unitary and `U·conj(U) = ±I` so that `Θ² = ±I`.
    pub fn custom(u: ComplexMatrix) -> Result<Self> {
        check_unitary(&u)?;
        let sq = &u * &u.conj();
        let id = ComplexMatrix::identity(u.rows());
        if sq.distance(&id) > 1e-10 && sq.distance(&-&id) > 1e-10 {
            return Err(Error::InvalidTimeReversal("Θ² must be ±I".into()));
        }
        Ok(Self { kind: TimeReversalKind::Custom, u })
    }

    pub fn kind(&self) -> &TimeReversalKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!("{}x{} operator for T on dimension {}", a.rows(), a.cols(), self.dim())));
        }
        Ok(&(&self.u * &a.transpose()) * &self.u.dagger())
    }

    pub fn superop(&self) -> SuperOperator {
        SuperOperator::from_map(self.dim(), Picture::Heisenberg, |a| self.apply(a).expect("matching dimension"))
    }

    /// Evaluates the structural properties on sample pairs drawn from `samples`.
    pub fn properties(&self, samples: &[ComplexMatrix]) -> Result<TimeReversalProperties> {
        let mut p = TimeReversalProperties::default();
        let (a1, a2) = (c(0.3, -1.2), c(-0.7, 0.4));
        for a in samples {
            let ta = self.apply(a)?;
            let scale = a.frobenius_norm().max(1.0);
            p.norm = p.norm.max((ta.spectral_norm()? - a.spectral_norm()?).abs() / scale);
            p.trace = p.trace.max((ta.trace() - a.trace()).norm() / scale);
            p.adjoint = p.adjoint.max(self.apply(&a.dagger())?.distance(&ta.dagger()) / scale);
            let shape_ok = ta.rows() == a.rows() && ta.cols() == a.cols() && ta.is_finite();
            p.shape = p.shape.max(if shape_ok { 0.0 } else { f64::INFINITY });
            p.involution = p.involution.max(self.apply(&ta)?.distance(a) / scale);
            for b in samples {
                let tb = self.apply(b)?;
                let s2 = scale * b.frobenius_norm().max(1.0);
                let lin = self.apply(&(&a.scale(a1) + &b.scale(a2)))?;
                p.linearity = p.linearity.max(lin.distance(&(&ta.scale(a1) + &tb.scale(a2))) / s2);
                p.antimultiplicative = p.antimultiplicative.max(self.apply(&(a * b))?.distance(&(&tb * &ta)) / s2);
            }
        }
        Ok(p)
    }
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(Error::InvalidTimeReversal("Θ needs a square unitary".into()));
    }
    let r = (&u.dagger() * u).distance(&ComplexMatrix::identity(u.rows()));
    if r > 1e-10 {
        return Err(Error::InvalidTimeReversal(format!("unitarity residual {r:.3e}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn conjugation_on_paulis() {
        let t = TimeReversal::conjugation(2);
        assert!(t.apply(&pauli::x()).unwrap().distance(&pauli::x()) < 1e-15);
        assert!(t.apply(&pauli::y()).unwrap().distance(&-&pauli::y()) < 1e-15);
        assert!(t.apply(&pauli::z()).unwrap().distance(&pauli::z()) < 1e-15);
    }

    #[test]
    fn spin_half_flips_all_paulis() {
        // σ_y σ_iᵀ σ_y = −σ_i
        let t = TimeReversal::spin_half();
        for s in [pauli::x(), pauli::y(), pauli::z()] {
            assert!(t.apply(&s).unwrap().distance(&-&s) < 1e-15);
        }
        let a = random::matrix(&mut random::rng(1), 2, 2);
        let direct = &(&pauli::y() * &a.transpose()) * &pauli::y();
        assert!(t.apply(&a).unwrap().distance(&direct) < 1e-15);
    }

    #[test]
    fn eigenprojectors_are_invariant() {
        let mut rng = random::rng(2);
        let h = random::hamiltonian(&mut rng, 3);
        let t = TimeReversal::conjugation_in_basis(h.eigenbasis()).unwrap();
        for m in 0..3 {
            let p = h.projector(m);
            assert!(t.apply(&p).unwrap().distance(&p) < 1e-12);
        }
        assert!(t.apply(h.matrix()).unwrap().distance(h.matrix()) < 1e-12);
    }

    #[test]
    fn properties_hold_for_all_kinds() {
        let mut rng = random::rng(3);
        let samples: Vec<ComplexMatrix> = (0..6).map(|_| random::matrix(&mut rng, 2, 2)).collect();
        let u = random::unitary(&mut rng, 2);
        let kinds = [
            TimeReversal::conjugation(2),
            TimeReversal::spin_half(),
            TimeReversal::conjugation_in_basis(&u).unwrap(),
            TimeReversal::custom(pauli::x()).unwrap(),
        ];
        for t in kinds {
            let p = t.properties(&samples).unwrap();
            assert!(p.max() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn custom_validation() {
        let not_unitary = ComplexMatrix::diag_real(&[1.0, 2.0]);
        assert!(matches!(TimeReversal::custom(not_unitary), Err(Error::InvalidTimeReversal(_))));
        // Θ² = ±I holds iff U is symmetric or antisymmetric
        assert!(TimeReversal::custom(ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, 1.0)])).is_ok());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let rotation = ComplexMatrix::from_real_rows(&[&[r, -r], &[r, r]]);
        assert!(matches!(TimeReversal::custom(rotation), Err(Error::InvalidTimeReversal(_))));
    }
}
