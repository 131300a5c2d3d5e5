//! Deterministic point construction inside the rank-k joint range.
//!
//! The pipeline builds a chain of orthonormal vectors whose pairwise
//! cross terms against every tuple matrix vanish, partitions their diagonal
//! expectation points so that the convex hulls of the parts share a common
//! point, and recombines each part into one column of an isometry. The
//! compression of the tuple by that isometry is scalar at the shared point,
//! which yields a certificate without any iterative search.

use crate::error::{Error, Result};
use crate::hermitian::{HermitianTuple, Isometry};
use crate::matrix::{inner, vec_add, vec_norm, vec_scale, ComplexMatrix, C64};
use crate::orth::orth_complement;
use crate::range::RangeCertificate;
use crate::simplex::feasible_point;

/// Feasibility tolerance for the partition search.
const PARTITION_LP_TOL: f64 = 1e-9;
/// Residual allowed when auditing a feasible partition against its points.
const PARTITION_AUDIT_TOL: f64 = 1e-8;
/// Largest chain length for which partition enumeration is attempted.
pub const MAX_CHAIN_LEN: usize = 16;

/// Orthonormal vectors x_1, ..., x_q with <A_j x_i, x_r> = 0 for i < r and
/// every j, together with their diagonal expectation points.
#[derive(Debug, Clone)]
pub struct OrthogonalChain {
    pub vectors: Vec<Vec<C64>>,
    pub diag_points: Vec<Vec<f64>>,
}

impl OrthogonalChain {
    /// Largest |<A_j x_i, x_r>| over j and i < r; zero up to roundoff by
    /// construction.
    pub fn max_cross_term(&self, a: &HermitianTuple) -> f64 {
        let mut worst = 0.0f64;
        for r in 1..self.vectors.len() {
            for i in 0..r {
                for mat in a.matrices() {
                    let ax = mat.matrix().matvec(&self.vectors[i]);
                    worst = worst.max(inner(&self.vectors[r], &ax).norm());
                }
            }
        }
        worst
    }
}

/// Builds a length-q chain. Each new vector is drawn orthogonal to every
/// previous vector and to every image A_j x_i, so all cross terms vanish.
/// The first vector is the lowest eigenvector of the first tuple matrix.
pub fn build_chain(a: &HermitianTuple, q: usize) -> Result<OrthogonalChain> {
    if q == 0 {
        return Err(Error::Domain("chain length must be at least 1".into()));
    }
    let n = a.n();
    let eig = crate::eigen::herm_eig(a.get(0))?;
    let mut vectors: Vec<Vec<C64>> = vec![eig.vectors.column(0)];
    // Images below this norm constrain nothing measurable and would only
    // consume complement dimensions, so they are left out of the span.
    let skip: Vec<f64> = a
        .matrices()
        .iter()
        .map(|mat| 1e-13 * mat.matrix().frobenius_norm().max(1.0))
        .collect();
    while vectors.len() < q {
        let mut span: Vec<Vec<C64>> = Vec::with_capacity(vectors.len() * (a.m() + 1));
        for x in &vectors {
            span.push(x.clone());
            for (mat, &floor) in a.matrices().iter().zip(&skip) {
                let ax = mat.matrix().matvec(x);
                if vec_norm(&ax) > floor {
                    span.push(ax);
                }
            }
        }
        let next = orth_complement(&ComplexMatrix::from_columns(&span), None, Some(1))
            .map_err(|_| {
                Error::Dimension(format!(
                    "orthogonality constraints exhausted C^{} at chain step {} of {}",
                    n,
                    vectors.len() + 1,
                    q
                ))
            })?;
        vectors.push(next.column(0));
    }
    let diag_points = vectors.iter().map(|x| a.point_of_vector(x)).collect();
    Ok(OrthogonalChain {
        vectors,
        diag_points,
    })
}

/// Iterator over restricted growth strings of length q using exactly k
/// labels, in lexicographic order. Each string encodes a set partition of
/// {0, ..., q-1} into k nonempty parts, indexed by first appearance.
pub(crate) struct SetPartitions {
    q: usize,
    k: usize,
    state: Option<Vec<usize>>,
}

impl SetPartitions {
    pub(crate) fn new(q: usize, k: usize) -> Self {
        let state = (k >= 1 && k <= q).then(|| {
            // Lexicographically first string with max label k-1:
            // 0, 0, ..., 0, 1, 2, ..., k-1.
            let mut s = vec![0usize; q];
            for (offset, v) in s[q - (k - 1)..].iter_mut().enumerate() {
                *v = offset + 1;
            }
            s
        });
        SetPartitions { q, k, state }
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<Vec<usize>>;

    fn next(&mut self) -> Option<Self::Item> {
        let s = self.state.as_ref()?;
        let mut parts = vec![Vec::new(); self.k];
        for (i, &v) in s.iter().enumerate() {
            parts[v].push(i);
        }

        // Advance to the next valid string: increment the rightmost position
        // that can grow, refill the suffix minimally, then repair the suffix
        // so the label k-1 still appears.
        let mut s = self.state.take().unwrap();
        'advance: loop {
            let mut pos = self.q;
            while pos > 1 {
                pos -= 1;
                let cap = s[..pos].iter().copied().max().unwrap() + 1;
                if s[pos] < cap.min(self.k - 1) {
                    s[pos] += 1;
                    for v in s[pos + 1..].iter_mut() {
                        *v = 0;
                    }
                    // Force the remaining labels into the tail when the
                    // suffix is too short to reach k-1 otherwise.
                    let used = s[..=pos].iter().copied().max().unwrap();
                    let missing = (self.k - 1).saturating_sub(used);
                    if missing > self.q - 1 - pos {
                        continue 'advance;
                    }
                    for t in 0..missing {
                        s[self.q - missing + t] = used + 1 + t;
                    }
                    self.state = Some(s);
                    break 'advance;
                }
            }
            if pos <= 1 {
                break 'advance;
            }
        }
        Some(parts)
    }
}

/// A partition of chain indices into k parts whose convex hulls share
/// `common_point`, with the convex weights realizing it in each part.
#[derive(Debug, Clone)]
pub struct TverbergPartition {
    pub parts: Vec<Vec<usize>>,
    pub weights: Vec<Vec<f64>>,
    pub common_point: Vec<f64>,
}

/// Searches set partitions of the given points into k parts, in a fixed
/// lexicographic order, for one whose part hulls intersect. The first
/// feasible partition is returned, so the result is deterministic.
pub fn tverberg_partition(points: &[Vec<f64>], k: usize) -> Result<TverbergPartition> {
    let q = points.len();
    if k == 0 {
        return Err(Error::Domain("partition needs at least one part".into()));
    }
    if q < k {
        return Err(Error::Dimension(format!(
            "cannot split {} points into {} nonempty parts",
            q, k
        )));
    }
    if q > MAX_CHAIN_LEN {
        return Err(Error::TooLarge(format!(
            "partition search over {} points exceeds the limit of {}",
            q, MAX_CHAIN_LEN
        )));
    }
    let m = points[0].len();
    if points.iter().any(|p| p.len() != m) {
        return Err(Error::Shape("points of mixed dimension".into()));
    }

    for parts in SetPartitions::new(q, k) {
        if let Some(found) = partition_meeting_point(points, &parts, m) {
            let weights: Vec<Vec<f64>> = parts
                .iter()
                .map(|part| part.iter().map(|&i| found[i]).collect())
                .collect();
            let common_point = combine(points, &parts[0], &weights[0]);
            return Ok(TverbergPartition {
                parts,
                weights,
                common_point,
            });
        }
    }
    Err(Error::Degeneracy(
        "no partition of the chain points has intersecting hulls".into(),
    ))
}

/// Convex combination of the selected points with the given weights.
fn combine(points: &[Vec<f64>], part: &[usize], w: &[f64]) -> Vec<f64> {
    let m = points[0].len();
    let mut out = vec![0.0f64; m];
    for (&i, &t) in part.iter().zip(w) {
        for (o, &p) in out.iter_mut().zip(&points[i]) {
            *o += t * p;
        }
    }
    out
}

/// LP feasibility for one candidate partition. The shared point is
/// eliminated by subtracting the first part's combination, leaving equality
/// constraints in the weights alone.
fn partition_meeting_point(
    points: &[Vec<f64>],
    parts: &[Vec<usize>],
    m: usize,
) -> Option<Vec<f64>> {
    let q = points.len();
    let k = parts.len();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity((k - 1) * m + k);
    let mut rhs: Vec<f64> = Vec::with_capacity((k - 1) * m + k);
    for part in &parts[1..] {
        for coord in 0..m {
            let mut row = vec![0.0f64; q];
            for &i in part {
                row[i] = points[i][coord];
            }
            for &i in &parts[0] {
                row[i] = -points[i][coord];
            }
            rows.push(row);
            rhs.push(0.0);
        }
    }
    for part in parts {
        let mut row = vec![0.0f64; q];
        for &i in part {
            row[i] = 1.0;
        }
        rows.push(row);
        rhs.push(1.0);
    }
    let t = feasible_point(&rows, &rhs, PARTITION_LP_TOL)?;

    // Audit: all parts must combine to the same point within tolerance.
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(1.0f64, |acc, &v| acc.max(v.abs()));
    let first = combine(
        points,
        &parts[0],
        &parts[0].iter().map(|&i| t[i]).collect::<Vec<_>>(),
    );
    for part in &parts[1..] {
        let here = combine(points, part, &part.iter().map(|&i| t[i]).collect::<Vec<_>>());
        let gap = first
            .iter()
            .zip(&here)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        if gap > PARTITION_AUDIT_TOL * scale {
            return None;
        }
    }
    Some(t)
}

/// Turns a chain and a hull-intersecting partition into a rank-k witness.
/// Column j is the weighted recombination sqrt(t_i) x_i over part j; the
/// vanishing cross terms make the compression scalar at the common point.
pub fn assemble_witness(
    a: &HermitianTuple,
    chain: &OrthogonalChain,
    partition: &TverbergPartition,
) -> Result<RangeCertificate> {
    let n = a.n();
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(partition.parts.len());
    for (part, weights) in partition.parts.iter().zip(&partition.weights) {
        let mut col = vec![C64::new(0.0, 0.0); n];
        for (&i, &t) in part.iter().zip(weights) {
            let f = C64::new(t.max(0.0).sqrt(), 0.0);
            col = vec_add(&col, &vec_scale(&chain.vectors[i], f));
        }
        // The weights sum to 1 only up to solver precision; renormalizing
        // keeps the columns exactly unit length without moving their span.
        let norm = vec_norm(&col);
        if norm <= 0.0 {
            return Err(Error::Degeneracy("partition part with zero weight".into()));
        }
        columns.push(vec_scale(&col, C64::new(1.0 / norm, 0.0)));
    }
    let u = Isometry::new(ComplexMatrix::from_columns(&columns))?;
    RangeCertificate::evaluate_at(a, u, &partition.common_point)
}

/// Produces a certified point of the rank-k joint range by construction.
///
/// For k > 1 this requires n >= (k-1)(m+1)^2, which guarantees both the
/// chain of length (m+1)(k-1) + 1 and the existence of an intersecting
/// partition of its diagonal points. k = 1 reduces to the lowest
/// eigenvector of the first matrix.
pub fn construct_point(a: &HermitianTuple, k: usize) -> Result<RangeCertificate> {
    if k == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    let m = a.m();
    let n = a.n();
    if k > 1 {
        let need = (k - 1) * (m + 1) * (m + 1);
        if n < need {
            return Err(Error::Dimension(format!(
                "guaranteed construction needs n >= (k-1)(m+1)^2 = {}, got n = {}",
                need, n
            )));
        }
    }
    let q = (m + 1) * (k - 1) + 1;
    if q > MAX_CHAIN_LEN {
        return Err(Error::TooLarge(format!(
            "construction needs a chain of length {}, above the partition limit {}",
            q, MAX_CHAIN_LEN
        )));
    }
    let chain = build_chain(a, q)?;
    let partition = tverberg_partition(&chain.diag_points, k)?;
    assemble_witness(a, &chain, &partition)
}
