//! Seeded random model generators for property tests and the CLI's
//! randomized checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::LindbladGenerator;
use crate::matlin::{c, ComplexMatrix};
use crate::states::HamiltonianSpec;

/// Environment variable holding the seed for randomized checks.
pub const SEED_ENV: &str = "QDBLAB_SEED";
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in the unit square of the complex plane.
pub fn matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn hermitian(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    matrix(rng, d, d).hermitian_part()
}

/// Haar-ish unitary `exp(iK)` for a random Hermitian `K`.
pub fn unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    hermitian(rng, d).scale(c(0.0, 3.0)).expm().expect("expm of a small matrix")
}

/// Levels in `[−0.5, 0.5]` with consecutive spacing at least `0.05`.
pub fn energies(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let mut e: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.5..0.5)).collect();
        e.sort_by(f64::total_cmp);
        if e.windows(2).all(|w| w[1] - w[0] >= 0.05) {
            return e;
        }
    }
}

/// Nondegenerate Hamiltonian, diagonal in the computational basis.
pub fn diagonal_hamiltonian(rng: &mut impl Rng, d: usize) -> HamiltonianSpec {
    HamiltonianSpec::from_energies(&energies(rng, d)).expect("diagonal Hamiltonian")
}

/// Nondegenerate Hamiltonian in a randomly rotated eigenbasis.
pub fn hamiltonian(rng: &mut impl Rng, d: usize) -> HamiltonianSpec {
    let u = unitary(rng, d);
    let h = &(&u * &ComplexMatrix::diag_real(&energies(rng, d))) * &u.dagger();
    HamiltonianSpec::new(h.hermitian_part()).expect("Hermitian by construction")
}

/// Generator with random `H` and Kossakowski matrix `C = G G†`.
pub fn generator(rng: &mut impl Rng, d: usize) -> LindbladGenerator {
    let h = hamiltonian(rng, d);
    let n = d * d - 1;
    let g = matrix(rng, n, n).scale_re(0.5);
    LindbladGenerator::new(h, (&g * &g.dagger()).hermitian_part()).expect("PSD by construction")
}
