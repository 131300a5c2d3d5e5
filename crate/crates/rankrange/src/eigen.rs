//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::matrix::{C64, ComplexMatrix};

/// Off-diagonal tolerance relative to the largest initial entry magnitude.
pub const EIG_SWEEP_TOL: f64 = 1e-13;
/// Hard cap on full Jacobi sweeps.
pub const EIG_MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

fn max_off_diagonal(m: &ComplexMatrix) -> f64 {
    let n = m.rows;
    let mut off: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            off = off.max(m.get(i, j).norm());
        }
    }
    off
}

/// Applies the plane rotation with block [[c, s], [-s p~, c p~]] (p~ = conj(phase))
/// on columns p, q of `m`.
fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let pc = phase.conj();
    for i in 0..m.rows {
        let a = m.get(i, p);
        let b = m.get(i, q);
        m.set(i, p, a * c - b * pc * s);
        m.set(i, q, a * s + b * pc * c);
    }
}

/// Applies the adjoint rotation on rows p, q of `m`.
fn rotate_rows(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    for j in 0..m.cols {
        let a = m.get(p, j);
        let b = m.get(q, j);
        m.set(p, j, a * c - b * phase * s);
        m.set(q, j, a * s + b * phase * c);
    }
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back ascending; each eigenvector's largest-magnitude
/// component is made real positive (ties broken by lowest index), so the
/// output is deterministic for identical input.
pub fn herm_eig(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.n();
    let mut m = a.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.max_abs().max(1.0);
    let tol = EIG_SWEEP_TOL * scale;
    let skip = tol * 1e-3;

    let mut off = max_off_diagonal(&m);
    let mut sweeps = 0;
    while off > tol {
        if sweeps == EIG_MAX_SWEEPS {
            return Err(Error::NoConvergence { residual: off, iterations: sweeps });
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let b = apq.norm();
                if b <= skip {
                    continue;
                }
                let phase = apq / b;
                let alpha = m.get(p, p).re;
                let gamma = m.get(q, q).re;
                let tau = (gamma - alpha) / (2.0 * b);
                let t = if tau.abs() > 1e150 {
                    0.5 / tau
                } else if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate_columns(&mut m, p, q, c, s, phase);
                rotate_rows(&mut m, p, q, c, s, phase);
                // The 2x2 sub-problem has an exact answer; pin it to kill rounding residue.
                m.set(p, p, C64::new(alpha - t * b, 0.0));
                m.set(q, q, C64::new(gamma + t * b, 0.0));
                m.set(p, q, C64::new(0.0, 0.0));
                m.set(q, p, C64::new(0.0, 0.0));
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        sweeps += 1;
        off = max_off_diagonal(&m);
    }

    let raw: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).unwrap().then(i.cmp(&j)));

    let values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        let mut best = 0;
        let mut best_mag = -1.0;
        for (i, z) in col.iter().enumerate() {
            let mag = z.norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        if best_mag > 0.0 {
            let phase = col[best] / best_mag;
            let fix = phase.conj();
            for z in col.iter_mut() {
                *z *= fix;
            }
            col[best] = C64::new(col[best].re.abs(), 0.0);
        }
        vectors.set_column(dst, &col);
    }

    Ok(EigenDecomposition { values, vectors })
}

/// k-th largest eigenvalue (k = 1 is the top).
pub fn kth_largest_eigenvalue(a: &HermitianMatrix, k: usize) -> Result<f64> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("k = {k} out of range for size {n}")));
    }
    Ok(herm_eig(a)?.values[n - k])
}
