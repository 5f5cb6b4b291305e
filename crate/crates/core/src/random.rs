//! Seeded instance generators.
//!
//! Every random object is a pure function of a 64-bit seed. Trial seeds are
//! derived from a root seed with [`mix64`], so the order in which trials run
//! never changes their inputs.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::herm::{CMatrix, CVector, DensityOp, HermOp};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer applied to `root + index·φ`, where φ is the 64-bit
/// golden-ratio constant.
pub fn mix64(root: u64, index: u64) -> u64 {
    let mut z = root.wrapping_add(index.wrapping_mul(GOLDEN));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random unit vector.
pub fn haar_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    loop {
        let v = DVector::from_iterator(n, (0..n).map(|_| complex_gaussian(rng)));
        let norm = v.norm();
        if norm > 1e-12 {
            return v.unscale(norm);
        }
    }
}

pub fn haar_pure(rng: &mut ChaCha8Rng, n: usize) -> DensityOp {
    DensityOp::pure(&haar_vector(rng, n))
}

/// Ginibre density `G·G† / tr(G·G†)` with `G` an n×rank complex Gaussian matrix.
pub fn random_density_from(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> Result<DensityOp> {
    if rank == 0 || rank > n {
        return Err(Error::InvalidRank { rank, dim: n });
    }
    let g = CMatrix::from_fn(n, rank, |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let trace: f64 = (0..n).map(|i| m[(i, i)].re).sum();
    let op = HermOp::from_matrix_unchecked(m.unscale(trace));
    Ok(DensityOp::from_op_unchecked(op))
}

/// Deterministic Ginibre density for `seed`.
pub fn random_density(n: usize, rank: usize, seed: u64) -> Result<DensityOp> {
    random_density_from(&mut rng(seed), n, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herm::{is_pure, Tolerances};

    #[test]
    fn mix64_spreads_neighbouring_indices() {
        assert_ne!(mix64(0, 0), mix64(0, 1));
        assert_eq!(mix64(42, 7), mix64(42, 7));
    }

    #[test]
    fn density_examples() {
        let t = Tolerances::default();
        let a = random_density(3, 2, 9).unwrap();
        let b = random_density(3, 2, 9).unwrap();
        assert_eq!(a, b);
        assert!(is_pure(&random_density(3, 1, 4).unwrap(), &t));
        for seed in 0..100 {
            assert!(random_density(3, 3, seed).unwrap().op().min_eigenvalue() > 1e-12);
        }
        assert!(random_density(2, 3, 0).is_err());
    }
}
