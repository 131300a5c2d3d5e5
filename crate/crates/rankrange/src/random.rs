//! Seeded random matrices, isometries, and vectors (ChaCha-based, reproducible).

use crate::hermitian::{HermitianMatrix, Isometry};
use crate::matrix::{vec_norm, vec_scale, C64, ComplexMatrix};
use crate::orth::mgs_orthonormalize;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Mixes a base seed with an index so derived streams decorrelate.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Gaussian Hermitian matrix (G + G*)/2 with iid complex normal G.
pub fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
    let mut rng = rng_for(seed);
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, gaussian_complex(&mut rng));
        }
    }
    HermitianMatrix::symmetrize(g)
}

/// Tuple of m independent Gaussian Hermitian matrices.
pub fn random_tuple(m: usize, n: usize, seed: u64) -> crate::hermitian::HermitianTuple {
    let mats = (0..m)
        .map(|j| random_hermitian(n, derive_seed(seed, j as u64)))
        .collect();
    crate::hermitian::HermitianTuple::new(mats).expect("m >= 1")
}

/// Random n x k isometry: Gaussian draw orthonormalized by double-pass MGS.
pub fn random_isometry(n: usize, k: usize, seed: u64) -> Isometry {
    assert!(k >= 1 && k <= n, "need 1 <= k <= n");
    let mut rng = rng_for(seed);
    loop {
        let cols: Vec<Vec<C64>> = (0..k)
            .map(|_| (0..n).map(|_| gaussian_complex(&mut rng)).collect())
            .collect();
        let basis = mgs_orthonormalize(&cols, 1e-8);
        if basis.len() == k {
            // A second full pass keeps the Gram residual near machine precision.
            let refined = mgs_orthonormalize(&basis, 1e-8);
            if refined.len() == k {
                if let Ok(u) = Isometry::new(ComplexMatrix::from_columns(&refined)) {
                    return u;
                }
            }
        }
        // Degenerate draw (measure zero); redraw from the same stream.
    }
}

/// Random unit vector in C^n.
pub fn random_unit_vector(n: usize, seed: u64) -> Vec<C64> {
    assert!(n >= 1);
    let mut rng = rng_for(seed);
    loop {
        let v: Vec<C64> = (0..n).map(|_| gaussian_complex(&mut rng)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            return vec_scale(&v, C64::new(1.0 / norm, 0.0));
        }
    }
}

/// Random unit direction in R^m.
pub fn random_unit_direction(m: usize, seed: u64) -> Vec<f64> {
    assert!(m >= 1);
    let mut rng = rng_for(seed);
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}
