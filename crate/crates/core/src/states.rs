//! Hamiltonians, density matrices, Gibbs states and the qubit Bloch
//! parametrisation.
//!
//! Qubit levels follow the convention `σ_z|i⟩ = (−1)^i|i⟩` for `i ∈ {1, 2}`:
//! computational index 0 is the ground level `|1⟩` with `E₁ = −ω/2`, index 1
//! is the excited level `|2⟩` with `E₂ = +ω/2`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matlin::{c, pauli, re, ComplexMatrix, C64};

/// Hermiticity, trace and positivity tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;

/// A time-independent Hamiltonian together with its spectral decomposition
/// `H = Σ E_m |m⟩⟨m|` (energies ascending).
#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    matrix: ComplexMatrix,
    energies: Vec<f64>,
    basis: ComplexMatrix,
}

impl HamiltonianSpec {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let eig = matrix.herm_eig()?;
        let spec = Self { matrix: matrix.hermitian_part(), energies: eig.values, basis: eig.vectors };
        let err = spec.reconstruct().distance(&spec.matrix);
        if err > 1e-11 * spec.matrix.frobenius_norm().max(1.0) {
            return Err(Error::NoConvergence(format!("spectral reconstruction error {err:.3e}")));
        }
        Ok(spec)
    }

    pub fn from_energies(energies: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag_real(energies))
    }

    /// Two-level Hamiltonian `(ω/2)σ_z` in the `σ_z|i⟩ = (−1)^i|i⟩` convention,
    /// i.e. `diag(−ω/2, +ω/2)` in the computational basis.
    pub fn qubit(omega: f64) -> Self {
        Self::from_energies(&[-omega / 2.0, omega / 2.0]).expect("diagonal Hamiltonian")
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Unitary whose columns are the eigenvectors `|m⟩`.
    pub fn eigenbasis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn eigvec(&self, m: usize) -> Vec<C64> {
        self.basis.column(m)
    }

    pub fn projector(&self, m: usize) -> ComplexMatrix {
        let v = self.eigvec(m);
        ComplexMatrix::outer(&v, &v)
    }

    /// `|m⟩⟨n|` in the energy eigenbasis.
    pub fn transition_operator(&self, m: usize, n: usize) -> ComplexMatrix {
        ComplexMatrix::outer(&self.eigvec(m), &self.eigvec(n))
    }

    fn reconstruct(&self) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.dim(), self.dim());
        for (m, &e) in self.energies.iter().enumerate() {
            h = &h + &self.projector(m).scale_re(e);
        }
        h
    }

    /// Resolution below which two energies count as equal.
    pub fn energy_resolution(&self) -> f64 {
        1e-9 * self.energies.iter().map(|e| e.abs()).fold(1.0, f64::max)
    }

    /// Smallest spacing between consecutive levels.
    pub fn min_level_spacing(&self) -> f64 {
        self.energies.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.min_level_spacing() > self.energy_resolution()
    }

    /// `⟨m|A|n⟩` in the energy eigenbasis.
    pub fn element(&self, a: &ComplexMatrix, m: usize, n: usize) -> C64 {
        let vm = self.eigvec(m);
        let vn = self.eigvec(n);
        let an = a.mul_vec(&vn).expect("dimension checked by caller");
        vm.iter().zip(&an).map(|(x, y)| x.conj() * y).sum()
    }

    /// Boltzmann weights `e^{−βE_m}/Z`, computed with shifted energies.
    pub fn boltzmann_weights(&self, beta: f64) -> Result<Vec<f64>> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidParameter(format!("inverse temperature {beta}")));
        }
        let e0 = self.energies[0];
        if beta.is_infinite() {
            let ground = self.energies.iter().filter(|&&e| e - e0 <= self.energy_resolution()).count();
            if ground > 1 {
                return Err(Error::DegenerateGround(ground));
            }
            let mut w = vec![0.0; self.dim()];
            w[0] = 1.0;
            return Ok(w);
        }
        let w: Vec<f64> = self.energies.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
        let z: f64 = w.iter().sum();
        Ok(w.into_iter().map(|x| x / z).collect())
    }
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        let herm = matrix.hermitian_residual();
        if herm > STATE_TOL {
            return Err(Error::NotAState(format!("Hermiticity residual {herm:.3e}")));
        }
        let tr = matrix.trace();
        if (tr - re(1.0)).norm() > STATE_TOL {
            return Err(Error::NotAState(format!("trace {tr}")));
        }
        let matrix = matrix.hermitian_part();
        let min = matrix.herm_eig()?.values[0];
        if min < -STATE_TOL {
            return Err(Error::NotAState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(d).scale_re(1.0 / d as f64) }
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(Error::NotAState("zero vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / n).collect();
        Ok(Self { matrix: ComplexMatrix::outer(&v, &v) })
    }

    /// `|i⟩⟨i|` in the computational basis.
    pub fn basis_state(d: usize, i: usize) -> Self {
        Self { matrix: ComplexMatrix::unit(d, i, i) }
    }

    /// Random full-rank state `GG†/Tr[GG†]` with a complex Ginibre `G`.
    pub fn random(rng: &mut impl Rng, d: usize) -> Self {
        let g = ComplexMatrix::from_fn(d, d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let p = &g * &g.dagger();
        let tr = p.trace().re;
        Self { matrix: p.scale_re(1.0 / tr).hermitian_part() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.herm_eig().map(|e| e.values[0]).unwrap_or(f64::NAN)
    }

    /// Trace distance `‖ρ − σ‖₁` (sum of absolute eigenvalues of the difference).
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        (&self.matrix - &other.matrix).trace_norm_hermitian()
    }
}

/// Gibbs state `e^{−βH}/Tr[e^{−βH}]`; `β = +∞` gives the ground projector.
pub fn gibbs(h: &HamiltonianSpec, beta: f64) -> Result<DensityMatrix> {
    let w = h.boltzmann_weights(beta)?;
    let mut rho = ComplexMatrix::zeros(h.dim(), h.dim());
    for (m, &p) in w.iter().enumerate() {
        if p != 0.0 {
            rho = &rho + &h.projector(m).scale_re(p);
        }
    }
    Ok(DensityMatrix { matrix: rho.hermitian_part() })
}

/// Level populations `p_m = ⟨m|ρ|m⟩` in the energy eigenbasis.
pub fn populations(rho: &DensityMatrix, h: &HamiltonianSpec) -> Result<Vec<f64>> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!("state dim {} vs Hamiltonian dim {}", rho.dim(), h.dim())));
    }
    Ok((0..h.dim()).map(|m| h.element(rho.matrix(), m, m).re).collect())
}

/// Estimates the inverse temperature of a state that is diagonal in the
/// energy eigenbasis. Fails with [`Error::NotThermal`] if the pairwise
/// Boltzmann ratios disagree.
pub fn infer_beta(rho: &DensityMatrix, h: &HamiltonianSpec) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!("state dim {} vs Hamiltonian dim {}", rho.dim(), h.dim())));
    }
    if !h.is_nondegenerate() {
        return Err(Error::DegenerateSpectrum(h.min_level_spacing()));
    }
    let d = h.dim();
    for m in 0..d {
        for n in 0..d {
            if m != n && h.element(rho.matrix(), m, n).norm() > 1e-8 {
                return Err(Error::NotThermal(format!("coherence ⟨{m}|ρ|{n}⟩ in the energy basis")));
            }
        }
    }
    let p = populations(rho, h)?;
    let e = h.energies();
    if d == 1 {
        return Ok(0.0);
    }
    if let Some(k) = p.iter().position(|&x| x < 1e-14) {
        // Only the ground projector is consistent with β = +∞.
        let ground_only = p[0] > 1.0 - 1e-12 && p[1..].iter().all(|&x| x < 1e-14);
        return if ground_only { Ok(f64::INFINITY) } else { Err(Error::ZeroPopulation(k)) };
    }
    let pair_beta = |m: usize, n: usize| (p[m] / p[n]).ln() / (e[n] - e[m]);
    let beta = pair_beta(0, d - 1);
    let tol = 1e-6 * beta.abs().max(1.0);
    for m in 0..d {
        for n in m + 1..d {
            let b = pair_beta(m, n);
            if (b - beta).abs() > tol {
                return Err(Error::NotThermal(format!(
                    "pair ({m},{n}) gives β = {b:.6}, widest gap gives {beta:.6}"
                )));
            }
        }
    }
    Ok(beta)
}

/// Bloch vector of a qubit state, `ϱ = ½(I + r·σ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = Self { x, y, z };
        if r.norm() > 1.0 + STATE_TOL {
            return Err(Error::NotAState(format!("Bloch vector norm {}", r.norm())));
        }
        Ok(r)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn to_density(&self) -> DensityMatrix {
        BlochFrame::standard().to_density(self)
    }

    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        BlochFrame::standard().from_density(rho)
    }
}

/// A triple of traceless Hermitian involutions `(τ_x, τ_y, τ_z)` used as the
/// Bloch axes, plus the linear maps between `(1, r_x, r_y, r_z)` coordinates
/// and column-stacked density matrices.
#[derive(Clone, Debug)]
pub struct BlochFrame {
    axes: [ComplexMatrix; 3],
}

impl BlochFrame {
    /// Standard Pauli matrices in the computational basis.
    pub fn standard() -> Self {
        Self { axes: [pauli::x(), pauli::y(), pauli::z()] }
    }

    /// Pauli axes with `σ_y` reflected, `(σ_x, −σ_y, σ_z)`. This is the image of
    /// the standard frame under complex conjugation in the computational basis.
    pub fn conjugate() -> Self {
        Self { axes: [pauli::x(), -&pauli::y(), pauli::z()] }
    }

    pub fn axes(&self) -> &[ComplexMatrix; 3] {
        &self.axes
    }

    pub fn to_density(&self, r: &BlochVector) -> DensityMatrix {
        let mut m = ComplexMatrix::identity(2);
        for (a, ri) in self.axes.iter().zip(r.as_array()) {
            m = &m + &a.scale_re(ri);
        }
        DensityMatrix { matrix: m.scale_re(0.5) }
    }

    pub fn from_density(&self, rho: &DensityMatrix) -> Result<BlochVector> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch("Bloch vectors need a qubit".into()));
        }
        let comp = |a: &ComplexMatrix| (rho.matrix() * a).trace().re;
        BlochVector::new(comp(&self.axes[0]), comp(&self.axes[1]), comp(&self.axes[2]))
    }

    /// `M` with `vec(ρ) = M · (1, r_x, r_y, r_z)ᵀ`.
    pub fn to_vec_matrix(&self) -> ComplexMatrix {
        let cols: Vec<Vec<C64>> = std::iter::once(ComplexMatrix::identity(2))
            .chain(self.axes.iter().cloned())
            .map(|a| a.scale_re(0.5).vec())
            .collect();
        ComplexMatrix::from_fn(4, 4, |i, j| cols[j][i])
    }

    /// `M⁻¹`, whose rows are `vec(τ_kᵀ)ᵀ` so that each row evaluates `Tr[ρ τ_k]`.
    pub fn from_vec_matrix(&self) -> ComplexMatrix {
        let rows: Vec<Vec<C64>> = std::iter::once(ComplexMatrix::identity(2))
            .chain(self.axes.iter().cloned())
            .map(|a| a.transpose().vec())
            .collect();
        ComplexMatrix::from_fn(4, 4, |i, j| rows[i][j])
    }

    /// Converts a 4×4 real Bloch-space matrix into a superoperator on
    /// column-stacked 2×2 matrices.
    pub fn superop_from_bloch(&self, b: &ComplexMatrix) -> ComplexMatrix {
        &(&self.to_vec_matrix() * b) * &self.from_vec_matrix()
    }

    /// Inverse of [`BlochFrame::superop_from_bloch`].
    pub fn bloch_from_superop(&self, s: &ComplexMatrix) -> ComplexMatrix {
        &(&self.from_vec_matrix() * s) * &self.to_vec_matrix()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubit() -> HamiltonianSpec {
        HamiltonianSpec::qubit(1.0)
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn gibbs_infinite_temperature() {
        let rho = gibbs(&qubit(), 0.0).unwrap();
        assert!(rho.matrix().distance(&ComplexMatrix::diag_real(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn gibbs_ln4_gives_four_to_one() {
        let rho = gibbs(&qubit(), 4f64.ln()).unwrap();
        assert_close(&populations(&rho, &qubit()).unwrap(), &[0.8, 0.2], 1e-15);
    }

    #[test]
    fn gibbs_zero_temperature_is_ground_projector() {
        let rho = gibbs(&qubit(), f64::INFINITY).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::diag_real(&[1.0, 0.0]));
        let degenerate = HamiltonianSpec::from_energies(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(gibbs(&degenerate, f64::INFINITY).unwrap_err(), Error::DegenerateGround(2));
    }

    #[test]
    fn gibbs_rejects_negative_beta() {
        assert!(matches!(gibbs(&qubit(), -1.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn populations_of_mixed_and_bloch_states() {
        let h = HamiltonianSpec::from_energies(&[0.0, 0.3, 1.7]).unwrap();
        assert_close(&populations(&DensityMatrix::maximally_mixed(3), &h).unwrap(), &[1.0 / 3.0; 3], 1e-15);
        // ϱ = ½(I + 0.6σ_z) = diag(0.8, 0.2)
        let rho = BlochVector::new(0.0, 0.0, 0.6).unwrap().to_density();
        assert_close(&populations(&rho, &qubit()).unwrap(), &[0.8, 0.2], 1e-15);
        assert!(matches!(populations(&rho, &h), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn bloch_special_points() {
        let origin = BlochVector::new(0.0, 0.0, 0.0).unwrap().to_density();
        assert_eq!(origin.matrix(), &ComplexMatrix::identity(2).scale_re(0.5));
        let plus = BlochVector::new(1.0, 0.0, 0.0).unwrap().to_density();
        let s = 1.0 / 2f64.sqrt();
        let expected = DensityMatrix::pure(&[re(s), re(s)]).unwrap();
        assert!(plus.matrix().distance(expected.matrix()) < 1e-15);
        assert!(matches!(BlochVector::new(1.0, 1.0, 0.0), Err(Error::NotAState(_))));
    }

    #[test]
    fn bloch_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for frame in [BlochFrame::standard(), BlochFrame::conjugate()] {
            for _ in 0..50 {
                let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1.0);
                let r = BlochVector::new(v[0] / n, v[1] / n, v[2] / n).unwrap();
                let rho = frame.to_density(&r);
                // direct 2×2 algebra: Tr[ϱ τ_i] = r_i
                let back = frame.from_density(&rho).unwrap();
                assert_close(&back.as_array(), &r.as_array(), 1e-13);
                let coords = frame.from_vec_matrix().mul_vec(&rho.matrix().vec()).unwrap();
                assert!((coords[0] - re(1.0)).norm() < 1e-15);
            }
        }
        let m = BlochFrame::standard().to_vec_matrix();
        let p = &m * &BlochFrame::standard().from_vec_matrix();
        assert!(p.distance(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn infer_beta_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h3 = HamiltonianSpec::from_energies(&[0.0, 1.0, 2.0]).unwrap();
        let rho = gibbs(&h3, 1.3).unwrap();
        assert!((infer_beta(&rho, &h3).unwrap() - 1.3).abs() < 1e-9);
        assert_eq!(infer_beta(&DensityMatrix::maximally_mixed(3), &h3).unwrap(), 0.0);
        let not_thermal = DensityMatrix::new(ComplexMatrix::diag_real(&[0.8, 0.1, 0.1])).unwrap();
        assert!(matches!(infer_beta(&not_thermal, &h3), Err(Error::NotThermal(_))));
        let ground = gibbs(&h3, f64::INFINITY).unwrap();
        assert_eq!(infer_beta(&ground, &h3).unwrap(), f64::INFINITY);
        let hole = DensityMatrix::new(ComplexMatrix::diag_real(&[0.5, 0.0, 0.5])).unwrap();
        assert_eq!(infer_beta(&hole, &h3).unwrap_err(), Error::ZeroPopulation(1));
        let random = DensityMatrix::random(&mut rng, 3);
        assert!(infer_beta(&random, &h3).is_err());
        let degenerate = HamiltonianSpec::from_energies(&[0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            infer_beta(&DensityMatrix::maximally_mixed(3), &degenerate),
            Err(Error::DegenerateSpectrum(_))
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::diag_real(&[0.7, 0.7])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag_real(&[1.2, -0.2])).is_err());
        let mut m = ComplexMatrix::diag_real(&[0.5, 0.5]);
        m[(0, 1)] = c(0.0, 0.1);
        assert!(DensityMatrix::new(m).is_err());
    }

    fn random_nondegenerate(rng: &mut ChaCha8Rng, d: usize) -> HamiltonianSpec {
        // Levels in [−0.5, 0.5] with spacing ≥ 0.05, rotated by a random unitary.
        loop {
            let mut e: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.5..0.5)).collect();
            e.sort_by(f64::total_cmp);
            if e.windows(2).any(|w| w[1] - w[0] < 0.05) {
                continue;
            }
            let g = ComplexMatrix::from_fn(d, d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let u = g.hermitian_part().scale(c(0.0, 2.0)).expm().unwrap();
            let h = &(&u * &ComplexMatrix::diag_real(&e)) * &u.dagger();
            return HamiltonianSpec::new(h.hermitian_part()).unwrap();
        }
    }

    #[test]
    fn gibbs_properties_on_random_hamiltonians() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let d = rng.gen_range(2..=4);
            let h = random_nondegenerate(&mut rng, d);
            let beta = rng.gen_range(0.0..10.0);
            let rho = gibbs(&h, beta).unwrap();
            let checked = DensityMatrix::new(rho.matrix().clone()).unwrap();
            assert!(checked.min_eigenvalue() >= -STATE_TOL);
            assert!(rho.matrix().commutator(h.matrix()).frobenius_norm() < 1e-12);
            assert!((infer_beta(&rho, &h).unwrap() - beta).abs() < 1e-8);
        }
        for _ in 0..20 {
            let h = random_nondegenerate(&mut rng, 3);
            let rho = gibbs(&h, rng.gen_range(0.0..50.0)).unwrap();
            assert!(DensityMatrix::new(rho.into_matrix()).is_ok());
        }
    }
}
