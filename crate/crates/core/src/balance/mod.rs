//! The `s`-weighted operator Hilbert space, adjoints of superoperators and
//! the two quantum detailed balance conditions.

mod time_reversal;

pub use time_reversal::{TimeReversal, TimeReversalKind, TimeReversalProperties};

use crate::dynamics::{LindbladGenerator, Picture, SuperOperator};
use crate::error::{Error, Result};
use crate::matlin::{c, ComplexMatrix, C64};
use crate::states::{DensityMatrix, HamiltonianSpec};

/// Default pass threshold of both QDB checks.
pub const QDB_TOL: f64 = 1e-9;
/// Reference-state eigenvalues at or below this are rejected.
pub const WEIGHT_FLOOR: f64 = 1e-12;
pub const DEFAULT_S_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
pub const DEFAULT_QDB2_TAUS: [f64; 4] = [0.1, 0.5, 1.0, 5.0];

/// `M_d(ℂ)` with `⟨⟨A,B⟩⟩_s = Tr[Σ^{1−s} A† Σ^s B] = vec(A)† W vec(B)`,
/// `W = (Σ^{1−s})ᵀ ⊗ Σ^s`.
#[derive(Clone, Debug)]
pub struct WeightedSpace {
    sigma: DensityMatrix,
    s: f64,
    sigma_s: ComplexMatrix,
    sigma_1ms: ComplexMatrix,
    weight: ComplexMatrix,
    weight_inv: ComplexMatrix,
}

impl WeightedSpace {
    pub fn new(sigma: DensityMatrix, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidParameter(format!("s = {s} outside [0, 1]")));
        }
        let eig = sigma.matrix().herm_eig()?;
        let min = eig.values[0];
        if min <= WEIGHT_FLOOR {
            return Err(Error::SingularWeight(min));
        }
        let pow = |x: f64| eig.reconstruct_with(|l| l.powf(x));
        let sigma_s = pow(s);
        let sigma_1ms = pow(1.0 - s);
        let weight = sigma_1ms.transpose().kron(&sigma_s);
        let weight_inv = pow(-(1.0 - s)).transpose().kron(&pow(-s));
        Ok(Self { sigma, s, sigma_s, sigma_1ms, weight, weight_inv })
    }

    pub fn sigma(&self) -> &DensityMatrix {
        &self.sigma
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn weight(&self) -> &ComplexMatrix {
        &self.weight
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    fn check(&self, a: &ComplexMatrix) -> Result<()> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!("{}x{} operator in a space of dimension {}", a.rows(), a.cols(), self.dim())));
        }
        Ok(())
    }

    /// `Tr[Σ^{1−s} A† Σ^s B]`.
    pub fn inner(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
        self.check(a)?;
        self.check(b)?;
        Ok((&(&(&self.sigma_1ms * &a.dagger()) * &self.sigma_s) * b).trace())
    }

    /// `vec(A)† W vec(B)`.
    pub fn inner_vec(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
        self.check(a)?;
        self.check(b)?;
        let wb = self.weight.mul_vec(&b.vec())?;
        Ok(a.vec().iter().zip(&wb).map(|(x, y)| x.conj() * y).sum())
    }

    /// `O★ = W⁻¹ O† W`.
    pub fn adjoint(&self, op: &SuperOperator) -> Result<SuperOperator> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!("superoperator on dim {} in a space of dimension {}", op.dim(), self.dim())));
        }
        let m = &(&self.weight_inv * &op.matrix().dagger()) * &self.weight;
        Ok(op.with_matrix(m))
    }

    /// `R_s[X] = Σ^{1−2s} X Σ^{2s−1}` as a superoperator.
    pub fn r_s(&self) -> Result<SuperOperator> {
        let eig = self.sigma.matrix().herm_eig()?;
        let left = eig.reconstruct_with(|l| l.powf(1.0 - 2.0 * self.s));
        let right = eig.reconstruct_with(|l| l.powf(2.0 * self.s - 1.0));
        SuperOperator::new(right.transpose().kron(&left), Picture::Heisenberg)
    }

    /// Largest violation of `⟨⟨A, O[B]⟩⟩ = ⟨⟨O★[A], B⟩⟩` over matrix units.
    pub fn adjoint_residual(&self, op: &SuperOperator, adj: &SuperOperator) -> Result<f64> {
        let d = self.dim();
        let units = matrix_units(d);
        let mut worst: f64 = 0.0;
        for a in &units {
            let oa = adj.apply_to(a)?;
            for b in &units {
                let lhs = self.inner(a, &op.apply_to(b)?)?;
                let rhs = self.inner(&oa, b)?;
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Ok(worst)
    }
}

pub fn matrix_units(d: usize) -> Vec<ComplexMatrix> {
    (0..d).flat_map(|i| (0..d).map(move |j| ComplexMatrix::unit(d, i, j))).collect()
}

pub fn inner(space: &WeightedSpace, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    space.inner(a, b)
}

pub fn adjoint(space: &WeightedSpace, op: &SuperOperator) -> Result<SuperOperator> {
    space.adjoint(op)
}

/// `L♯ = L♯_H + L♯_D` with `L♯_H = ½(L♯ − L♯★)` and `L♯_D = ½(L♯ + L♯★)`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub hamiltonian_part: SuperOperator,
    pub dissipative_part: SuperOperator,
}

pub fn decompose(space: &WeightedSpace, dual_gen: &SuperOperator) -> Result<Decomposition> {
    let adj = space.adjoint(dual_gen)?;
    let h = (dual_gen.matrix() - adj.matrix()).scale_re(0.5);
    let d = (dual_gen.matrix() + adj.matrix()).scale_re(0.5);
    Ok(Decomposition { hamiltonian_part: dual_gen.with_matrix(h), dissipative_part: dual_gen.with_matrix(d) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Qdb1Report {
    pub s: f64,
    pub residual: f64,
    pub passes: bool,
}

/// `‖L♯ − L♯★ − 2i[H,·]‖_F / ‖L♯‖_F`.
pub fn check_qdb1(space: &WeightedSpace, gen: &LindbladGenerator) -> Result<Qdb1Report> {
    check_qdb1_with_tol(space, gen, QDB_TOL)
}

pub fn check_qdb1_with_tol(space: &WeightedSpace, gen: &LindbladGenerator, tol: f64) -> Result<Qdb1Report> {
    let dual = gen.dual_superop();
    let adj = space.adjoint(&dual)?;
    let comm = SuperOperator::commutator(gen.hamiltonian().matrix(), Picture::Heisenberg);
    let diff = &(dual.matrix() - adj.matrix()) - &comm.matrix().scale(c(0.0, 2.0));
    let norm = dual.matrix().frobenius_norm();
    let residual = if norm == 0.0 { 0.0 } else { diff.frobenius_norm() / norm };
    Ok(Qdb1Report { s: space.s(), residual, passes: residual < tol })
}

/// Verdict aggregated over a grid of `s` values: passes only if every `s`
/// passes; the residual is the worst one.
#[derive(Clone, Debug, PartialEq)]
pub struct QdbSweep {
    pub per_s: Vec<(f64, f64)>,
    pub max_residual: f64,
    pub passes: bool,
}

impl QdbSweep {
    fn from_pairs(per_s: Vec<(f64, f64)>, tol: f64) -> Self {
        let max_residual = per_s.iter().map(|p| p.1).fold(0.0, f64::max);
        Self { passes: per_s.iter().all(|p| p.1 < tol), per_s, max_residual }
    }
}

pub fn check_qdb1_sweep(sigma: &DensityMatrix, gen: &LindbladGenerator, s_grid: &[f64], tol: f64) -> Result<QdbSweep> {
    let mut per_s = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let space = WeightedSpace::new(sigma.clone(), s)?;
        per_s.push((s, check_qdb1_with_tol(&space, gen, tol)?.residual));
    }
    Ok(QdbSweep::from_pairs(per_s, tol))
}

/// `‖L[Σ]‖_F`.
pub fn check_qdb1_invariance(space: &WeightedSpace, gen: &LindbladGenerator) -> Result<f64> {
    Ok(gen.lindblad_superop().apply_to(space.sigma().matrix())?.frobenius_norm())
}

pub fn time_reverse(t: &TimeReversal, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    t.apply(a)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Qdb2Report {
    pub s: f64,
    pub max_residual: f64,
    pub passes: bool,
}

/// Compares `⟨⟨A†, G♯[B]⟩⟩_s` with `⟨⟨T[B†], G♯[T[A]]⟩⟩_s` over all pairs of
/// matrix units, which suffices by sesquilinearity.
pub fn check_qdb2(space: &WeightedSpace, map_heis: &SuperOperator, t: &TimeReversal) -> Result<Qdb2Report> {
    check_qdb2_with_tol(space, map_heis, t, QDB_TOL)
}

pub fn check_qdb2_with_tol(space: &WeightedSpace, map_heis: &SuperOperator, t: &TimeReversal, tol: f64) -> Result<Qdb2Report> {
    if map_heis.picture() != Picture::Heisenberg {
        return Err(Error::InvalidParameter("check_qdb2 expects a Heisenberg-picture map".into()));
    }
    if t.dim() != space.dim() {
        return Err(Error::DimensionMismatch("time reversal and reference state differ in dimension".into()));
    }
    let units = matrix_units(space.dim());
    let mut worst: f64 = 0.0;
    for a in &units {
        let ta = t.apply(a)?;
        let g_ta = map_heis.apply_to(&ta)?;
        for b in &units {
            let lhs = space.inner(&a.dagger(), &map_heis.apply_to(b)?)?;
            let rhs = space.inner(&t.apply(&b.dagger())?, &g_ta)?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(Qdb2Report { s: space.s(), max_residual: worst, passes: worst < tol })
}

/// Sweeps [`check_qdb2`] over `s` values and Heisenberg maps (e.g. `G♯_τ` on
/// a time grid); the per-`s` entry is the worst residual over the maps.
pub fn check_qdb2_sweep(sigma: &DensityMatrix, maps: &[SuperOperator], t: &TimeReversal, s_grid: &[f64], tol: f64) -> Result<QdbSweep> {
    let mut per_s = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let space = WeightedSpace::new(sigma.clone(), s)?;
        let mut worst: f64 = 0.0;
        for m in maps {
            worst = worst.max(check_qdb2_with_tol(&space, m, t, tol)?.max_residual);
        }
        per_s.push((s, worst));
    }
    Ok(QdbSweep::from_pairs(per_s, tol))
}

/// Heisenberg maps `e^{τL♯}` on a time grid.
pub fn heisenberg_maps(gen: &LindbladGenerator, taus: &[f64]) -> Result<Vec<SuperOperator>> {
    let dual = gen.dual_superop();
    taus.iter().map(|&t| dual.evolve(t)).collect()
}

/// Largest violation of `G♯_τ ∘ R_s = R_s ∘ G♯_τ` (Frobenius norm).
pub fn check_r_s_commutation(space: &WeightedSpace, map_heis: &SuperOperator) -> Result<f64> {
    let r = space.r_s()?;
    let lhs = map_heis.compose(&r)?;
    let rhs = r.compose(map_heis)?;
    Ok(lhs.matrix().distance(rhs.matrix()))
}

/// Checks that `G♯_τ` keeps `span{|m⟩⟨m|}` and its complement
/// `span{|m⟩⟨n| : m ≠ n}` invariant, with `|m⟩` the energy eigenbasis.
pub fn check_lemma_invariant_subspace(h: &HamiltonianSpec, gen: &LindbladGenerator, taus: &[f64]) -> Result<f64> {
    let d = h.dim();
    let mut worst: f64 = 0.0;
    for g in heisenberg_maps(gen, taus)? {
        for m in 0..d {
            for n in 0..d {
                let out = g.apply_to(&h.transition_operator(m, n))?;
                for k in 0..d {
                    for l in 0..d {
                        // diagonal input must stay diagonal; off-diagonal input must have no diagonal part
                        let forbidden = if m == n { k != l } else { k == l };
                        if forbidden {
                            worst = worst.max(h.element(&out, k, l).norm());
                        }
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// `max |e^{−βE_m}⟨m|K[|n⟩⟨n|]|m⟩ − e^{−βE_n}⟨n|K[|m⟩⟨m|]|n⟩|` with
/// Boltzmann weights normalised to one.
pub fn check_lemma_self_adjoint(h: &HamiltonianSpec, beta: f64, k: &SuperOperator) -> Result<f64> {
    let w = h.boltzmann_weights(beta)?;
    let d = h.dim();
    let mut worst: f64 = 0.0;
    for m in 0..d {
        for n in 0..d {
            let a = h.element(&k.apply_to(&h.projector(n))?, m, m) * w[m];
            let b = h.element(&k.apply_to(&h.projector(m))?, n, n) * w[n];
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlin::{pauli, re};
    use crate::random;
    use crate::states::gibbs;

    /// `−i[H,·] + μe^{βω}D[σ−] + μD[σ+] + ηD[σ_z]` with `H = (ω/2)σ_z`.
    fn qdb_family(mu: f64, eta: f64, beta: f64) -> LindbladGenerator {
        let h = HamiltonianSpec::qubit(1.0);
        LindbladGenerator::from_jumps(
            h,
            &[(mu * beta.exp(), ComplexMatrix::unit(2, 0, 1)), (mu, ComplexMatrix::unit(2, 1, 0)), (eta, pauli::z())],
        )
        .unwrap()
    }

    fn space(beta: f64, s: f64) -> WeightedSpace {
        WeightedSpace::new(gibbs(&HamiltonianSpec::qubit(1.0), beta).unwrap(), s).unwrap()
    }

    #[test]
    fn inner_product_basics() {
        let sp = space(0.8, 0.3);
        let id = ComplexMatrix::identity(2);
        assert!((sp.inner(&id, &id).unwrap() - re(1.0)).norm() < 1e-15);
        let flat = WeightedSpace::new(DensityMatrix::maximally_mixed(3), 1.0).unwrap();
        let mut rng = random::rng(1);
        let a = random::matrix(&mut rng, 3, 3);
        let b = random::matrix(&mut rng, 3, 3);
        assert!((flat.inner(&a, &b).unwrap() - a.hs_inner(&b) / 3.0).norm() < 1e-15);
    }

    #[test]
    fn trace_form_matches_kronecker_form() {
        let mut rng = random::rng(2);
        for s in DEFAULT_S_GRID {
            let sigma = DensityMatrix::random(&mut rng, 3);
            let sp = WeightedSpace::new(sigma, s).unwrap();
            for _ in 0..10 {
                let a = random::matrix(&mut rng, 3, 3);
                let b = random::matrix(&mut rng, 3, 3);
                assert!((sp.inner(&a, &b).unwrap() - sp.inner_vec(&a, &b).unwrap()).norm() < 1e-12);
                assert!(sp.inner(&a, &a).unwrap().re > 0.0);
            }
        }
    }

    #[test]
    fn singular_reference_rejected() {
        let pure = DensityMatrix::basis_state(2, 0);
        assert!(matches!(WeightedSpace::new(pure, 0.5), Err(Error::SingularWeight(_))));
        assert!(matches!(WeightedSpace::new(DensityMatrix::maximally_mixed(2), 1.5), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn adjoint_identities() {
        let sp = space(1.3, 0.25);
        let id = SuperOperator::identity(2, Picture::Heisenberg);
        assert!(sp.adjoint(&id).unwrap().identity_residual() < 1e-12);
        let h = HamiltonianSpec::qubit(1.0);
        let comm = SuperOperator::commutator(h.matrix(), Picture::Heisenberg);
        let o = comm.with_matrix(comm.matrix().scale(c(0.0, 1.0)));
        let adj = sp.adjoint(&o).unwrap();
        assert!(adj.matrix().distance(&o.matrix().scale_re(-1.0)) < 1e-12);
        let mut rng = random::rng(3);
        let sigma = DensityMatrix::random(&mut rng, 3);
        let sp3 = WeightedSpace::new(sigma, 0.6).unwrap();
        let gen = random::generator(&mut rng, 3).dual_superop();
        let adj = sp3.adjoint(&gen).unwrap();
        assert!(sp3.adjoint(&adj).unwrap().matrix().distance(gen.matrix()) < 1e-11);
        assert!(sp3.adjoint_residual(&gen, &adj).unwrap() < 1e-10);
    }

    #[test]
    fn decomposition_of_qdb_generator() {
        let gen = qdb_family(0.4, 0.2, 1.0);
        for s in DEFAULT_S_GRID {
            let sp = space(1.0, s);
            let dec = decompose(&sp, &gen.dual_superop()).unwrap();
            let ih = SuperOperator::commutator(gen.hamiltonian().matrix(), Picture::Heisenberg);
            assert!(dec.hamiltonian_part.matrix().distance(&ih.matrix().scale(c(0.0, 1.0))) < 1e-10);
            let sum = dec.hamiltonian_part.matrix() + dec.dissipative_part.matrix();
            assert!(sum.distance(gen.dual_superop().matrix()) < 1e-14);
            let dh = sp.adjoint(&dec.hamiltonian_part).unwrap();
            assert!(dh.matrix().distance(&dec.hamiltonian_part.matrix().scale_re(-1.0)) < 1e-10);
            let dd = sp.adjoint(&dec.dissipative_part).unwrap();
            assert!(dd.matrix().distance(dec.dissipative_part.matrix()) < 1e-10);
        }
        let unitary = LindbladGenerator::unitary(HamiltonianSpec::qubit(1.0));
        let dec = decompose(&space(1.0, 0.5), &unitary.dual_superop()).unwrap();
        assert!(dec.dissipative_part.matrix().frobenius_norm() < 1e-12);
    }

    #[test]
    fn qdb1_family_passes_and_fixes_reference() {
        let gen = qdb_family(0.7, 0.3, 1.2);
        let sigma = gibbs(gen.hamiltonian(), 1.2).unwrap();
        let sweep = check_qdb1_sweep(&sigma, &gen, &DEFAULT_S_GRID, QDB_TOL).unwrap();
        assert!(sweep.passes && sweep.max_residual < 1e-10, "{sweep:?}");
        let sp = WeightedSpace::new(sigma, 0.5).unwrap();
        assert!(check_qdb1_invariance(&sp, &gen).unwrap() < 1e-10);
        let wrong = WeightedSpace::new(gibbs(gen.hamiltonian(), 0.3).unwrap(), 0.5).unwrap();
        assert!(!check_qdb1(&wrong, &gen).unwrap().passes);
    }

    #[test]
    fn qdb2_identity_and_family() {
        let t = TimeReversal::conjugation(2);
        let sp = space(0.9, 0.5);
        let id = SuperOperator::identity(2, Picture::Heisenberg);
        assert!(check_qdb2(&sp, &id, &t).unwrap().passes);
        let gen = qdb_family(0.5, 0.1, 0.9);
        let sigma = gibbs(gen.hamiltonian(), 0.9).unwrap();
        let maps = heisenberg_maps(&gen, &DEFAULT_QDB2_TAUS).unwrap();
        let sweep = check_qdb2_sweep(&sigma, &maps, &t, &DEFAULT_S_GRID, QDB_TOL).unwrap();
        assert!(sweep.passes, "{sweep:?}");
        let schr = gen.lindblad_superop();
        assert!(matches!(check_qdb2(&sp, &schr, &t), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn lemma_checks_on_family() {
        let beta = 0.7;
        let gen = qdb_family(0.6, 0.2, beta);
        let h = gen.hamiltonian().clone();
        let sigma = gibbs(&h, beta).unwrap();
        assert!(check_lemma_invariant_subspace(&h, &gen, &[0.1, 1.0, 10.0]).unwrap() < 1e-9);
        for s in DEFAULT_S_GRID {
            let sp = WeightedSpace::new(sigma.clone(), s).unwrap();
            for g in heisenberg_maps(&gen, &[0.1, 1.0, 10.0]).unwrap() {
                assert!(check_r_s_commutation(&sp, &g).unwrap() < 1e-10);
            }
            let k = decompose(&sp, &gen.dual_superop()).unwrap().dissipative_part;
            assert!(check_lemma_self_adjoint(&h, beta, &k).unwrap() < 1e-10);
        }
        let dephasing = qdb_family(0.0, 0.5, beta);
        assert!(check_lemma_invariant_subspace(&h, &dephasing, &[1.0]).unwrap() < 1e-12);
    }
}
