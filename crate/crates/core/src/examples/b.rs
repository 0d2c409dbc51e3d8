//! The quantum optical master equation and the qubit family that satisfies
//! the generator form of detailed balance.

use crate::dynamics::{LindbladGenerator, SuperOperator};
use crate::error::{Error, Result};
use crate::fluctuation::MapFamily;
use crate::matlin::{c, pauli, re, ComplexMatrix};
use crate::states::{BlochFrame, DensityMatrix, HamiltonianSpec};

/// `σ₋ = |1⟩⟨2|`, lowering from the excited level `|2⟩` to the ground level.
pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::unit(2, 0, 1)
}

/// `σ₊ = |2⟩⟨1|`.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::unit(2, 1, 0)
}

/// Bosonic occupation `n̄ = 1/(e^{βω} − 1)`.
pub fn occupation(omega: f64, beta: f64) -> f64 {
    1.0 / (beta * omega).exp_m1()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExampleBParams {
    pub omega: f64,
    pub gamma: f64,
    pub beta_f: f64,
}

impl ExampleBParams {
    pub fn new(omega: f64, gamma: f64, beta_f: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("omega = {omega}")));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma = {gamma}")));
        }
        // β = 0 makes the occupation number diverge
        if !(beta_f > 0.0) {
            return Err(Error::InvalidParameter(format!("beta_f = {beta_f} must be positive")));
        }
        Ok(Self { omega, gamma, beta_f })
    }

    pub fn hamiltonian(&self) -> HamiltonianSpec {
        HamiltonianSpec::qubit(self.omega)
    }

    pub fn nbar(&self) -> f64 {
        occupation(self.omega, self.beta_f)
    }

    /// `γ̄ = γ(2n̄ + 1) = γ coth(β_f ω/2)`.
    pub fn gamma_bar(&self) -> f64 {
        self.gamma * (2.0 * self.nbar() + 1.0)
    }

    /// Jumps `√(γn̄)σ₊` and `√(γ(n̄+1))σ₋` with `H = (ω/2)σ_z`.
    pub fn generator(&self) -> LindbladGenerator {
        let n = self.nbar();
        LindbladGenerator::from_jumps(
            self.hamiltonian(),
            &[(self.gamma * n, sigma_plus()), (self.gamma * (n + 1.0), sigma_minus())],
        )
        .expect("valid rates")
    }

    /// Closed-form solution. The Bloch components follow the excited-first
    /// ordering `r_z = ϱ_ee − ϱ_gg`, `r_x − i r_y = 2ϱ_eg`:
    /// `ϱ_ee(τ) = ½[1 + r_z(0)e^{−γ̄τ} + tanh(β_f ω/2)(e^{−γ̄τ} − 1)]`,
    /// `ϱ_eg(τ) = ϱ_eg(0)e^{−(iω + γ̄/2)τ}`.
    pub fn closed_form(&self, rho0: &DensityMatrix, tau: f64) -> ComplexMatrix {
        let m = rho0.matrix();
        let rz = (m[(1, 1)] - m[(0, 0)]).re;
        let decay = (-self.gamma_bar() * tau).exp();
        let th = (self.beta_f * self.omega / 2.0).tanh();
        let pe = 0.5 * (1.0 + rz * decay + th * (decay - 1.0));
        let coh = m[(1, 0)] * c(-self.gamma_bar() * tau / 2.0, -self.omega * tau).exp();
        ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (1, 1) => re(pe),
            (0, 0) => re(1.0 - pe),
            (1, 0) => coh,
            _ => coh.conj(),
        })
    }
}

impl MapFamily for ExampleBParams {
    fn dim(&self) -> usize {
        2
    }

    fn map_at(&self, tau: f64) -> Result<SuperOperator> {
        self.generator().lindblad_superop().evolve(tau)
    }

    fn generator(&self) -> Option<SuperOperator> {
        Some(ExampleBParams::generator(self).lindblad_superop())
    }
}

/// `−i[H,·] + μe^{β_f ω}D[σ₋] + μD[σ₊] + ηD[σ_z]` with `H = (ω/2)σ_z` and
/// `D[L]ρ = LρL† − ½{L†L, ρ}`.
pub fn qdb_family(mu: f64, eta: f64, omega: f64, beta_f: f64) -> Result<LindbladGenerator> {
    if !(mu > 0.0) || !(eta >= 0.0) || !(omega > 0.0) || !(beta_f >= 0.0) || !(mu * (beta_f * omega).exp()).is_finite() {
        return Err(Error::InvalidParameter(format!("mu = {mu}, eta = {eta}, omega = {omega}, beta_f = {beta_f}")));
    }
    LindbladGenerator::from_jumps(
        HamiltonianSpec::qubit(omega),
        &[(mu * (beta_f * omega).exp(), sigma_minus()), (mu, sigma_plus()), (eta, pauli::z())],
    )
}

/// The 4×4 matrix `𝕃` with `∂_τ(1, r) = −2𝕃(1, r)` for [`qdb_family`], in
/// the [`BlochFrame::conjugate`] frame.
pub fn qdb_family_bloch(mu: f64, eta: f64, omega: f64, beta_f: f64) -> ComplexMatrix {
    let e = (beta_f * omega).exp();
    let dot = eta + mu * (1.0 + e) / 4.0;
    let dm = mu * (1.0 - e) / 2.0;
    let dp = mu * (1.0 + e) / 2.0;
    let w = omega / 2.0;
    ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 0.0, 0.0], &[0.0, dot, w, 0.0], &[0.0, -w, dot, 0.0], &[dm, 0.0, 0.0, dp]])
}

/// Bloch frame in which the qubit examples are written.
pub fn example_frame() -> BlochFrame {
    BlochFrame::conjugate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve;
    use crate::random;
    use crate::states::gibbs;

    #[test]
    fn zero_temperature_is_pure_decay() {
        let p = ExampleBParams::new(1.0, 0.5, f64::INFINITY).unwrap();
        assert_eq!(p.nbar(), 0.0);
        assert_eq!(p.gamma_bar(), 0.5);
        let g = evolve(&p.generator().lindblad_superop(), 60.0).unwrap();
        let out = g.apply_to(&ComplexMatrix::unit(2, 1, 1)).unwrap();
        assert!(out.distance(&ComplexMatrix::unit(2, 0, 0)) < 1e-12);
        assert!(ExampleBParams::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn closed_form_matches_evolution() {
        let p = ExampleBParams::new(1.0, 1.0, 1.0).unwrap();
        let l = p.generator().lindblad_superop();
        let mut rng = random::rng(1);
        for tau in [0.0, 0.01, 0.3, 1.0, 5.0, 50.0] {
            let rho = DensityMatrix::random(&mut rng, 2);
            let num = evolve(&l, tau).unwrap().apply_to(rho.matrix()).unwrap();
            assert!(num.distance(&p.closed_form(&rho, tau)) < 1e-9, "tau = {tau}");
        }
    }

    #[test]
    fn asymptotic_bloch_z_is_thermal() {
        let p = ExampleBParams::new(1.0, 1.0, 1.3).unwrap();
        let rho = p.closed_form(&DensityMatrix::maximally_mixed(2), 1e3);
        let rz_wt = (rho[(1, 1)] - rho[(0, 0)]).re;
        assert!((rz_wt + (1.3f64 / 2.0).tanh()).abs() < 1e-15);
    }

    #[test]
    fn coherence_decay_and_phase() {
        let p = ExampleBParams::new(1.0, 1.0, 1.0).unwrap();
        let rho = DensityMatrix::random(&mut random::rng(2), 2);
        let g = evolve(&p.generator().lindblad_superop(), 0.8).unwrap();
        let out = g.apply_to(rho.matrix()).unwrap();
        let expect = rho.matrix()[(1, 0)] * c(-p.gamma_bar() * 0.4, -0.8).exp();
        assert!((out[(1, 0)] - expect).norm() < 1e-10);
    }

    #[test]
    fn family_reduces_to_optical_equation() {
        let p = ExampleBParams::new(1.0, 1.0, 1.0).unwrap();
        let fam = qdb_family(p.gamma * p.nbar(), 0.0, 1.0, 1.0).unwrap();
        let diff = fam.lindblad_superop().matrix().distance(p.generator().lindblad_superop().matrix());
        assert!(diff < 1e-12);
    }

    #[test]
    fn family_fixes_gibbs_state() {
        let fam = qdb_family(0.3, 0.2, 1.0, 0.8).unwrap();
        let rho = gibbs(fam.hamiltonian(), 0.8).unwrap();
        assert!(fam.lindblad_superop().apply_to(rho.matrix()).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn family_bloch_form() {
        let (mu, eta, beta) = (0.35, 0.15, 0.9);
        let fam = qdb_family(mu, eta, 1.0, beta).unwrap();
        let b = example_frame().bloch_from_superop(fam.lindblad_superop().matrix()).scale_re(-0.5);
        assert!(b.distance(&qdb_family_bloch(mu, eta, 1.0, beta)) < 1e-12);
    }
}
