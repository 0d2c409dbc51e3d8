#![allow(dead_code, clippy::needless_range_loop)]

use qdblab::dynamics::LindbladGenerator;
use qdblab::examples::qdb_family;
use qdblab::matlin::{c, ComplexMatrix};
use qdblab::random;
use qdblab::states::HamiltonianSpec;
use rand::Rng;

/// `count` points log-spaced in `[start, stop]`, computed without the
/// library's grid helper.
pub fn log_points(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let r = (stop / start).powf(1.0 / (count - 1) as f64);
    (0..count).map(|k| start * r.powi(k as i32)).collect()
}

/// Normalized Boltzmann weights from the energies, independent of the
/// library's Gibbs state.
pub fn boltzmann(energies: &[f64], beta: f64) -> Vec<f64> {
    let e0 = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

pub struct QdbDraw {
    pub gen: LindbladGenerator,
    pub mu: f64,
    pub eta: f64,
    pub beta: f64,
}

/// Member of the detailed-balance qubit family at `ω = 1`.
pub fn qdb_draw(rng: &mut impl Rng) -> QdbDraw {
    let mu = 2.0 - rng.gen_range(0.0..2.0);
    let eta = rng.gen_range(0.0..=1.0);
    let beta = rng.gen_range(0.1..=3.0);
    QdbDraw { gen: qdb_family(mu, eta, 1.0, beta).unwrap(), mu, eta, beta }
}

/// Rates `k[m][n]` for `m → n` leaving the weights `w` stationary. Each pair
/// gets a balanced symmetric flux; for three or more levels a cyclic flux
/// around `0 → 1 → … → 0` is added, which breaks pairwise balance.
pub fn global_balance_rates(rng: &mut impl Rng, w: &[f64]) -> Vec<Vec<f64>> {
    let d = w.len();
    let mut k = vec![vec![0.0; d]; d];
    for m in 0..d {
        for n in m + 1..d {
            let a = rng.gen_range(0.05..0.5);
            k[m][n] = a / w[m];
            k[n][m] = a / w[n];
        }
    }
    if d >= 3 {
        let flux = rng.gen_range(0.0..0.3);
        for m in 0..d {
            k[m][(m + 1) % d] += flux / w[m];
        }
    }
    k
}

/// Jumps `|n⟩⟨m|` in the energy eigenbasis at the given rates, plus
/// dephasing along a random operator diagonal in that basis.
pub fn rate_generator(rng: &mut impl Rng, h: HamiltonianSpec, k: &[Vec<f64>]) -> LindbladGenerator {
    let d = h.dim();
    let mut jumps = vec![];
    for m in 0..d {
        for n in 0..d {
            if m != n && k[m][n] > 0.0 {
                jumps.push((k[m][n], h.transition_operator(n, m)));
            }
        }
    }
    let mut deph = ComplexMatrix::zeros(d, d);
    for m in 0..d {
        deph = &deph + &h.projector(m).scale(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    let shift = deph.trace() / d as f64;
    let deph = &deph - &ComplexMatrix::identity(d).scale(shift);
    jumps.push((rng.gen_range(0.0..0.5), deph));
    LindbladGenerator::from_jumps(h, &jumps).unwrap()
}

/// Thermalizing generator on a rotated qubit or qutrit with Gibbs state at
/// `β`.
pub fn thermalizing_generator(rng: &mut impl Rng, d: usize, beta: f64) -> LindbladGenerator {
    let h = random::hamiltonian(rng, d);
    let w = boltzmann(h.energies(), beta);
    let k = global_balance_rates(rng, &w);
    rate_generator(rng, h, &k)
}

/// Qubit generator built to leave `gibbs(β)` invariant.
pub fn fpt_qubit_generator(rng: &mut impl Rng, beta: f64) -> LindbladGenerator {
    thermalizing_generator(rng, 2, beta)
}
