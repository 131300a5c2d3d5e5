//! Modified Gram-Schmidt orthonormalization and orthogonal complements.

use crate::error::{Error, Result};
use crate::matrix::{inner, vec_norm, vec_scale, vec_sub_scaled, C64, ComplexMatrix};

/// Residual-norm ratio below which a candidate counts as dependent.
pub const RANK_DROP_TOL: f64 = 1e-10;
/// Projection-coefficient ratio that triggers a second orthogonalization pass.
const REORTH_TRIGGER: f64 = 0.5;
/// Singular value below which a subspace direction counts as orthogonal to
/// the blocked span.
const NULL_TOL: f64 = 1e-8;

/// One MGS pass of `v` against `basis`; returns the largest |coefficient|.
pub(crate) fn mgs_pass(v: &mut [C64], basis: &[Vec<C64>]) -> f64 {
    let mut max_coef: f64 = 0.0;
    for q in basis {
        let c = inner(q, v);
        max_coef = max_coef.max(c.norm());
        vec_sub_scaled(v, q, c);
    }
    max_coef
}

/// Orthonormalizes `v` against `basis` in place, re-orthogonalizing once when a
/// projection coefficient exceeds half the starting norm. Returns the unit
/// residual, or None when the residual norm drops below `drop_tol` relative to
/// the starting norm.
pub fn orthonormalize_against(
    v: &[C64],
    basis: &[Vec<C64>],
    drop_tol: f64,
) -> Option<Vec<C64>> {
    let norm0 = vec_norm(v);
    if norm0 == 0.0 {
        return None;
    }
    let mut w = v.to_vec();
    let max_coef = mgs_pass(&mut w, basis);
    if max_coef > REORTH_TRIGGER * norm0 {
        mgs_pass(&mut w, basis);
    }
    let norm1 = vec_norm(&w);
    if norm1 < drop_tol * norm0 {
        return None;
    }
    Some(vec_scale(&w, C64::new(1.0 / norm1, 0.0)))
}

/// Orthonormal basis of the span of the given vectors (dependent ones dropped).
pub fn mgs_orthonormalize(cols: &[Vec<C64>], drop_tol: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in cols {
        if let Some(q) = orthonormalize_against(v, &basis, drop_tol) {
            basis.push(q);
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of span(S), intersected with
/// span(within) when supplied. With `take = Some(d)`, exactly d columns are
/// returned (error when fewer exist); with None, every complement direction.
pub fn orth_complement(
    s: &ComplexMatrix,
    within: Option<&ComplexMatrix>,
    take: Option<usize>,
) -> Result<ComplexMatrix> {
    let n = s.rows;
    if let Some(w) = within {
        if w.rows != n {
            return Err(Error::Shape(format!(
                "within has {} rows, expected {}",
                w.rows, n
            )));
        }
    }
    let span = mgs_orthonormalize(&s.columns(), RANK_DROP_TOL);

    let found: Vec<Vec<C64>> = match within {
        Some(w) => subspace_complement(&span, w, take)?,
        None => {
            let mut found: Vec<Vec<C64>> = Vec::new();
            let mut blocked = span;
            for i in 0..n {
                let mut e = vec![C64::new(0.0, 0.0); n];
                e[i] = C64::new(1.0, 0.0);
                if let Some(q) = orthonormalize_against(&e, &blocked, RANK_DROP_TOL) {
                    blocked.push(q.clone());
                    found.push(q);
                    if take.is_some_and(|d| found.len() == d) {
                        break;
                    }
                }
            }
            found
        }
    };
    if let Some(d) = take {
        if found.len() < d {
            return Err(Error::Dimension(format!(
                "complement has only {} direction(s), requested {}",
                found.len(),
                d
            )));
        }
    }
    if found.is_empty() {
        return Ok(ComplexMatrix::zeros(n, 0));
    }
    Ok(ComplexMatrix::from_columns(&found))
}

/// Directions of span(within) orthogonal to the already-orthonormal `span`,
/// found as the near-null singular directions of the overlap matrix. Unlike
/// a projection, the result stays inside span(within).
fn subspace_complement(
    span: &[Vec<C64>],
    within: &ComplexMatrix,
    take: Option<usize>,
) -> Result<Vec<Vec<C64>>> {
    let w = mgs_orthonormalize(&within.columns(), RANK_DROP_TOL);
    if w.is_empty() {
        return Ok(Vec::new());
    }
    if span.is_empty() {
        return Ok(match take {
            Some(d) if d <= w.len() => w[..d].to_vec(),
            _ => w,
        });
    }
    let overlap = ComplexMatrix::from_fn(span.len(), w.len(), |i, l| inner(&span[i], &w[l]));
    let gram = crate::hermitian::HermitianMatrix::new(overlap.adjoint_mul(&overlap))?;
    let eig = crate::eigen::herm_eig(&gram)?;
    let wmat = ComplexMatrix::from_columns(&w);
    let keep = match take {
        Some(d) => d.min(w.len()),
        None => eig.values.iter().filter(|&&v| v <= NULL_TOL * NULL_TOL).count(),
    };
    let mut found = Vec::with_capacity(keep);
    for i in 0..keep {
        if eig.values[i] > NULL_TOL * NULL_TOL {
            break;
        }
        found.push(wmat.matvec(&eig.vectors.column(i)));
    }
    Ok(found)
}
