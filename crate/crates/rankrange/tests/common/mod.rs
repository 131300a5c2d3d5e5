//! Shared helpers for the integration suites.

#![allow(dead_code)]

use rankrange::random::{derive_seed, random_hermitian, random_isometry};
use rankrange::{C64, ComplexMatrix, HermitianMatrix, HermitianTuple, Isometry};

/// Random tuple edited so that `point` is certified exactly by a planted
/// rank-k isometry: each matrix gets a correction supported on the planted
/// subspace that forces the compression to the scalar block point[j] I_k.
pub fn planted_instance(
    m: usize,
    n: usize,
    k: usize,
    point: &[f64],
    seed: u64,
) -> (HermitianTuple, Isometry) {
    assert_eq!(point.len(), m);
    let u = random_isometry(n, k, derive_seed(seed, 901));
    let mats = (0..m)
        .map(|j| {
            let a = random_hermitian(n, derive_seed(seed, j as u64));
            let inner = u.matrix().adjoint_mul(&a.matrix().mul(u.matrix()));
            let want = ComplexMatrix::identity(k).scale_re(point[j]);
            let fix = u.matrix().mul(&want.sub(&inner)).mul(&u.matrix().adjoint());
            HermitianMatrix::symmetrize(a.matrix().add(&fix))
        })
        .collect();
    (HermitianTuple::new(mats).unwrap(), u)
}

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn unit_basis_vector(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[i] = C64::new(1.0, 0.0);
    v
}
