//! Seeded random states, unitaries and projective measurements.
//!
//! All generators take the RNG by mutable reference so callers control
//! seeding; `rng(seed)` gives a portable ChaCha stream.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::measure::{validate_projective, DensityMatrix, ProjectiveMeasurement};
use crate::qmat::{c64, ComplexMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Full-rank mixed state `G G^dagger / tr(G G^dagger)`.
pub fn random_density(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = ginibre(d, d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m / c64(tr, 0.0)).expect("Ginibre state is a valid density matrix")
}

/// Haar-random pure state.
pub fn random_pure(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    let v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
    DensityMatrix::pure(&v).expect("nonzero Gaussian vector")
}

/// Unitary from Gram-Schmidt orthonormalization of a Ginibre matrix.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut q = ginibre(d, d, rng);
    for j in 0..d {
        for _ in 0..2 {
            for k in 0..j {
                let overlap: Complex64 = (0..d).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
                for i in 0..d {
                    let qik = q[(i, k)];
                    q[(i, j)] -= overlap * qik;
                }
            }
        }
        let norm = q.column(j).norm();
        for i in 0..d {
            q[(i, j)] /= norm;
        }
    }
    q
}

/// Random composition of `d` into `parts` positive block sizes.
pub fn random_ranks(d: usize, parts: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut ranks = vec![1usize; parts];
    for _ in parts..d {
        let k = rng.random_range(0..parts);
        ranks[k] += 1;
    }
    ranks
}

/// Projective measurement whose blocks are spans of consecutive columns of `u`.
pub fn block_measurement(u: &ComplexMatrix, ranks: &[usize]) -> ProjectiveMeasurement {
    let d = u.nrows();
    let mut start = 0;
    let projectors = ranks
        .iter()
        .map(|&r| {
            let cols = u.columns(start, r);
            start += r;
            cols * cols.adjoint()
        })
        .collect();
    let p = validate_projective(projectors).expect("blocks of a unitary form a projective measurement");
    debug_assert_eq!(p.dim(), d);
    p
}

/// Random projective measurement on `C^d` with between 2 and `d` outcomes
/// (a single outcome when `d == 1`) in a random basis.
pub fn random_projective(d: usize, rng: &mut impl Rng) -> ProjectiveMeasurement {
    let parts = if d <= 1 { 1 } else { rng.random_range(2..=d) };
    let ranks = random_ranks(d, parts, rng);
    let u = random_unitary(d, rng);
    block_measurement(&u, &ranks)
}
