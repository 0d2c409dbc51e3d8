//! Generalised amplitude damping with time-dependent parameters: a
//! thermalizing family of qubit maps whose asymptotic Gibbs state is not a
//! fixed point at finite times.

use crate::dynamics::{KrausChannel, SuperOperator};
use crate::error::{Error, Result};
use crate::fluctuation::MapFamily;
use crate::matlin::{re, ComplexMatrix};
use crate::states::{DensityMatrix, HamiltonianSpec};

/// A scalar parameter as a function of time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Schedule {
    Constant(f64),
    /// `end + (start − end)e^{−rate·τ}`.
    RelaxExp { start: f64, end: f64, rate: f64 },
    /// `end·τ/(1 + τ)`.
    Rational { end: f64 },
}

impl Schedule {
    pub fn value(&self, tau: f64) -> f64 {
        match *self {
            Schedule::Constant(v) => v,
            Schedule::RelaxExp { start, end, rate } => end + (start - end) * (-rate * tau).exp(),
            Schedule::Rational { end } => end * tau / (1.0 + tau),
        }
    }

    /// Value as `τ → ∞`.
    pub fn limit(&self) -> f64 {
        match *self {
            Schedule::Constant(v) => v,
            Schedule::RelaxExp { start, end, rate } => {
                if rate > 0.0 {
                    end
                } else if rate == 0.0 {
                    start
                } else {
                    f64::NAN
                }
            }
            Schedule::Rational { end } => end,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExampleAParams {
    pub omega: f64,
    pub beta_f: f64,
    pub q: Schedule,
    pub xi: Schedule,
}

impl ExampleAParams {
    pub fn new(omega: f64, beta_f: f64, q: Schedule, xi: Schedule) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("omega = {omega}")));
        }
        if !(beta_f >= 0.0) || !beta_f.is_finite() {
            return Err(Error::InvalidParameter(format!("beta_f = {beta_f}")));
        }
        let p = Self { omega, beta_f, q, xi };
        if p.xi.value(0.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("xi(0) = {} must vanish", p.xi.value(0.0))));
        }
        if (p.xi.limit() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("xi(∞) = {} must equal 1", p.xi.limit())));
        }
        if (p.q.limit() - p.q_inf()).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("q(∞) = {} must equal {}", p.q.limit(), p.q_inf())));
        }
        Ok(p)
    }

    /// `ξ_τ = 1 − e^{−τ}`, `q_τ = q_∞(1 − e^{−τ})`.
    pub fn with_default_schedules(omega: f64, beta_f: f64) -> Result<Self> {
        let q_inf = asymptotic_q(omega, beta_f);
        Self::new(
            omega,
            beta_f,
            Schedule::RelaxExp { start: 0.0, end: q_inf, rate: 1.0 },
            Schedule::RelaxExp { start: 0.0, end: 1.0, rate: 1.0 },
        )
    }

    /// Constant `q_τ = q_∞`, which makes the family fixed-point thermalizing.
    pub fn with_constant_q(omega: f64, beta_f: f64) -> Result<Self> {
        let q_inf = asymptotic_q(omega, beta_f);
        Self::new(omega, beta_f, Schedule::Constant(q_inf), Schedule::RelaxExp { start: 0.0, end: 1.0, rate: 1.0 })
    }

    pub fn with_xi(&self, xi: Schedule) -> Result<Self> {
        Self::new(self.omega, self.beta_f, self.q, xi)
    }

    pub fn hamiltonian(&self) -> HamiltonianSpec {
        HamiltonianSpec::qubit(self.omega)
    }

    /// `q_∞ = ½[1 − tanh(β_f ω/2)]`.
    pub fn q_inf(&self) -> f64 {
        asymptotic_q(self.omega, self.beta_f)
    }

    fn checked(&self, name: &'static str, s: &Schedule, tau: f64) -> Result<f64> {
        let value = s.value(tau);
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::ScheduleOutOfRange { name, tau, value });
        }
        Ok(value)
    }

    pub fn q_at(&self, tau: f64) -> Result<f64> {
        self.checked("q", &self.q, tau)
    }

    pub fn xi_at(&self, tau: f64) -> Result<f64> {
        self.checked("xi", &self.xi, tau)
    }

    pub fn channel(&self, tau: f64) -> Result<KrausChannel> {
        let q = self.q_at(tau)?;
        let xi = self.xi_at(tau)?;
        let k = (1.0 - xi).sqrt();
        // weights placed so that |1⟩ relaxes towards population 1 − q
        let g1 = ComplexMatrix::diag_real(&[1.0, k]).scale_re((1.0 - q).sqrt());
        let g2 = ComplexMatrix::unit(2, 0, 1).scale_re(((1.0 - q) * xi).sqrt());
        let g3 = ComplexMatrix::diag_real(&[k, 1.0]).scale_re(q.sqrt());
        let g4 = ComplexMatrix::unit(2, 1, 0).scale_re((q * xi).sqrt());
        KrausChannel::new(vec![g1, g2, g3, g4])
    }

    /// Closed-form action: `d(τ) = (1 − ξ)d(0) + (1 − q)ξ`, `k(τ) = √(1 − ξ)k(0)`,
    /// where `d` is the population of `|1⟩` and `k = ⟨1|ϱ|2⟩`.
    pub fn closed_form(&self, rho0: &DensityMatrix, tau: f64) -> Result<ComplexMatrix> {
        let q = self.q_at(tau)?;
        let xi = self.xi_at(tau)?;
        let m = rho0.matrix();
        let d = (1.0 - xi) * m[(0, 0)].re + (1.0 - q) * xi;
        let k = m[(0, 1)] * (1.0 - xi).sqrt();
        Ok(ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => re(d),
            (1, 1) => re(1.0 - d),
            (0, 1) => k,
            _ => k.conj(),
        }))
    }

    /// `f_τ = q_∞ − q_τ`.
    pub fn f(&self, tau: f64) -> f64 {
        self.q_inf() - self.q.value(tau)
    }

    /// `F(τ) = [1 − f_τ/q_∞]/[1 + f_τ/(1 − q_∞)]`.
    pub fn correction(&self, tau: f64) -> f64 {
        let (f, qi) = (self.f(tau), self.q_inf());
        (1.0 - f / qi) / (1.0 + f / (1.0 - qi))
    }

    /// `R(ω;τ) = F(τ)e^{(β_i − β_f)ω}`.
    pub fn ratio_oracle(&self, tau: f64, beta_i: f64) -> f64 {
        self.correction(tau) * ((beta_i - self.beta_f) * self.omega).exp()
    }
}

pub fn asymptotic_q(omega: f64, beta_f: f64) -> f64 {
    0.5 * (1.0 - (beta_f * omega / 2.0).tanh())
}

impl MapFamily for ExampleAParams {
    fn dim(&self) -> usize {
        2
    }

    fn map_at(&self, tau: f64) -> Result<SuperOperator> {
        Ok(self.channel(tau)?.superop())
    }

    fn kraus_at(&self, tau: f64) -> Option<KrausChannel> {
        self.channel(tau).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::apply;
    use crate::random;

    #[test]
    fn schedules_and_limits() {
        let s = Schedule::RelaxExp { start: 0.0, end: 1.0, rate: 1.0 };
        assert_eq!(s.value(0.0), 0.0);
        assert_eq!(s.limit(), 1.0);
        let r = Schedule::Rational { end: 1.0 };
        assert_eq!(r.value(1.0), 0.5);
        assert_eq!(r.limit(), 1.0);
        assert_eq!(Schedule::Constant(0.3).value(7.0), 0.3);
    }

    #[test]
    fn constraints_enforced() {
        let q_inf = asymptotic_q(1.0, 1.0);
        let good_xi = Schedule::RelaxExp { start: 0.0, end: 1.0, rate: 1.0 };
        assert!(ExampleAParams::new(1.0, 1.0, Schedule::Constant(0.1), good_xi).is_err());
        assert!(ExampleAParams::new(1.0, 1.0, Schedule::Constant(q_inf), Schedule::Constant(0.5)).is_err());
        assert!(ExampleAParams::new(1.0, 1.0, Schedule::Constant(q_inf), Schedule::Rational { end: 0.9 }).is_err());
        let p = ExampleAParams::new(1.0, 1.0, Schedule::RelaxExp { start: 1.5, end: q_inf, rate: 1.0 }, good_xi).unwrap();
        assert!(matches!(p.channel(0.1), Err(Error::ScheduleOutOfRange { name: "q", .. })));
    }

    #[test]
    fn initial_time_preserves_populations() {
        let p = ExampleAParams::with_default_schedules(1.0, 1.0).unwrap();
        let rho = DensityMatrix::random(&mut random::rng(1), 2);
        let out = apply(&p.channel(0.0).unwrap(), &rho).unwrap();
        assert!((out.matrix()[(0, 0)] - rho.matrix()[(0, 0)]).norm() < 1e-15);
        assert!(out.matrix().distance(rho.matrix()) < 1e-15);
    }

    #[test]
    fn xi_one_erases_input() {
        let p = ExampleAParams::new(1.0, 1.0, Schedule::Constant(asymptotic_q(1.0, 1.0)), Schedule::Rational { end: 1.0 }).unwrap();
        let q = 0.3;
        let forced = ExampleAParams { q: Schedule::Constant(q), xi: Schedule::Constant(1.0), ..p };
        let mut rng = random::rng(2);
        for _ in 0..5 {
            let rho = DensityMatrix::random(&mut rng, 2);
            let out = forced.channel(5.0).unwrap().apply_to(rho.matrix()).unwrap();
            assert!(out.distance(&ComplexMatrix::diag_real(&[0.7, 0.3])) < 1e-15);
        }
    }

    #[test]
    fn trace_preserving_for_random_parameters() {
        use rand::Rng;
        let mut rng = random::rng(3);
        for _ in 0..50 {
            let q: f64 = rng.gen_range(0.0..=1.0);
            let xi: f64 = rng.gen_range(0.0..=1.0);
            let p = ExampleAParams {
                omega: 1.0,
                beta_f: 1.0,
                q: Schedule::Constant(q),
                xi: Schedule::Constant(xi),
            };
            assert!(p.channel(1.0).unwrap().tp_residual() < 1e-15);
        }
    }

    #[test]
    fn kraus_action_matches_closed_form() {
        let p = ExampleAParams::with_default_schedules(1.3, 0.7).unwrap();
        let mut rng = random::rng(4);
        for tau in [0.0, 0.2, 1.0, 4.0] {
            let rho = DensityMatrix::random(&mut rng, 2);
            let out = p.channel(tau).unwrap().apply_to(rho.matrix()).unwrap();
            assert!(out.distance(&p.closed_form(&rho, tau).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn correction_limits() {
        let fpt = ExampleAParams::with_constant_q(1.0, 1.0).unwrap();
        for tau in [0.1, 1.0, 10.0] {
            assert_eq!(fpt.correction(tau), 1.0);
        }
        let p = ExampleAParams::with_default_schedules(1.0, 1.0).unwrap();
        assert!((p.correction(100.0) - 1.0).abs() < 1e-15);
        assert!(p.correction(0.5) < 1.0);
    }
}
