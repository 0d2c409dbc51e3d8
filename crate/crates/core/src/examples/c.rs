//! A fixed-point thermalizing qubit semigroup given directly as a 4×4
//! generator on Bloch coordinates. It satisfies the fluctuation relation
//! but not detailed balance when `ν ≠ α`.

use super::b::example_frame;
use crate::dynamics::{LindbladGenerator, SuperOperator};
use crate::error::{Error, Result};
use crate::fluctuation::MapFamily;
use crate::matlin::{c, re, ComplexMatrix, C64};
use crate::states::HamiltonianSpec;

/// `𝕃_th = [[0,0,0,0],[0,ν,ω/2,0],[0,−ω/2,α,0],[χ,0,0,ζ]]` with
/// `∂_τ(1, r) = −2𝕃_th(1, r)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExampleCParams {
    pub omega: f64,
    pub nu: f64,
    pub alpha: f64,
    pub chi: f64,
    pub zeta: f64,
}

impl ExampleCParams {
    pub fn new(omega: f64, nu: f64, alpha: f64, chi: f64, zeta: f64) -> Result<Self> {
        if [omega, nu, alpha, chi, zeta].iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite Bloch generator entry".into()));
        }
        if !(omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega = {omega}")));
        }
        if !(zeta > 0.0) {
            return Err(Error::InvalidParameter(format!("zeta = {zeta} must be positive")));
        }
        if (chi / zeta).abs() > 1.0 {
            return Err(Error::InvalidParameter(format!("|chi/zeta| = {} exceeds 1", (chi / zeta).abs())));
        }
        Ok(Self { omega, nu, alpha, chi, zeta })
    }

    /// Parameters of the detailed-balance family:
    /// `χ = 2μ(1 − e^{β_f ω})`, `ζ = 2μ(1 + e^{β_f ω})`, `ν = α = η + μ(1 + e^{β_f ω})`.
    pub fn qdb_point(mu: f64, eta: f64, omega: f64, beta_f: f64) -> Result<Self> {
        let e = (beta_f * omega).exp();
        let diag = eta + mu * (1.0 + e);
        Self::new(omega, diag, diag, 2.0 * mu * (1.0 - e), 2.0 * mu * (1.0 + e))
    }

    /// Detailed-balance point at `μ = 1/4`, `η = 0.1`, with `ν` raised by 10%.
    pub fn default_instance(omega: f64, beta_f: f64) -> Result<Self> {
        let p = Self::qdb_point(0.25, 0.1, omega, beta_f)?;
        p.with_nu(1.1 * p.nu)
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        Self::new(self.omega, nu, self.alpha, self.chi, self.zeta)
    }

    pub fn hamiltonian(&self) -> HamiltonianSpec {
        HamiltonianSpec::qubit(self.omega)
    }

    /// `β_f = (2/ω)·artanh(−χ/ζ)`.
    pub fn beta_f(&self) -> f64 {
        2.0 / self.omega * (-self.chi / self.zeta).atanh()
    }

    pub fn bloch_matrix(&self) -> ComplexMatrix {
        let w = self.omega / 2.0;
        ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, self.nu, w, 0.0],
            &[0.0, -w, self.alpha, 0.0],
            &[self.chi, 0.0, 0.0, self.zeta],
        ])
    }

    /// Schrödinger-picture superoperator on column-stacked density matrices.
    pub fn superop(&self) -> SuperOperator {
        let m = example_frame().superop_from_bloch(&self.bloch_matrix().scale_re(-2.0));
        SuperOperator::new(m, crate::dynamics::Picture::Schrodinger).expect("4×4")
    }

    /// Lindblad form of the generator; fails with [`Error::NotCPTP`] when the
    /// Kossakowski matrix is not positive semidefinite.
    pub fn generator(&self) -> Result<LindbladGenerator> {
        LindbladGenerator::from_superop(self.hamiltonian(), &self.superop()).map_err(|e| match e {
            Error::KossakowskiNotPSD(v) => Error::NotCPTP(format!("Kossakowski matrix has eigenvalue {v:.3e}")),
            other => other,
        })
    }

    /// `k_± = −(α + ν) ± i√(ω² − (α − ν)²)`.
    pub fn k_pm(&self) -> (C64, C64) {
        let disc = re(self.omega * self.omega - (self.alpha - self.nu).powi(2)).sqrt();
        let base = re(-(self.alpha + self.nu));
        (base + c(0.0, 1.0) * disc, base - c(0.0, 1.0) * disc)
    }

    /// `true` when `k₊ = k₋`, where the two-exponential form degenerates.
    pub fn is_critical(&self) -> bool {
        let (kp, km) = self.k_pm();
        (kp - km).norm() < 1e-8 * self.omega.max(1.0)
    }

    /// Analytic Bloch vector `(r_x, r_y, r_z)` at time `τ`:
    /// `r_i = u_{i+}e^{τk₊} + u_{i−}e^{τk₋}` and
    /// `r_z = e^{−2ζτ}r_z(0) − (1 − e^{−2ζτ})χ/ζ`.
    pub fn analytic(&self, r0: [f64; 3], tau: f64) -> Result<[f64; 3]> {
        if self.is_critical() {
            return Err(Error::InvalidParameter("critical damping: k₊ = k₋".into()));
        }
        let (kp, km) = self.k_pm();
        let den = km - kp;
        let (x, y) = (r0[0], r0[1]);
        let w = self.omega;
        let ux_p = ((km + 2.0 * self.nu) * x + w * y) / den;
        let ux_m = -((kp + 2.0 * self.nu) * x + w * y) / den;
        let uy_p = ((km + 2.0 * self.alpha) * y - w * x) / den;
        let uy_m = -((kp + 2.0 * self.alpha) * y - w * x) / den;
        let ep = (kp * tau).exp();
        let em = (km * tau).exp();
        let rx = ux_p * ep + ux_m * em;
        let ry = uy_p * ep + uy_m * em;
        let decay = (-2.0 * self.zeta * tau).exp();
        let rz = decay * r0[2] - (1.0 - decay) * self.chi / self.zeta;
        Ok([rx.re, ry.re, rz])
    }

    /// `(0, 0, −χ/ζ)`.
    pub fn asymptotic_bloch(&self) -> [f64; 3] {
        [0.0, 0.0, -self.chi / self.zeta]
    }
}

impl MapFamily for ExampleCParams {
    fn dim(&self) -> usize {
        2
    }

    fn map_at(&self, tau: f64) -> Result<SuperOperator> {
        self.superop().evolve(tau)
    }

    fn generator(&self) -> Option<SuperOperator> {
        Some(self.superop())
    }
}
