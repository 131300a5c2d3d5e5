//! Geometric probes of the rank-k joint range: outer halfspace bounds,
//! segment witnesses toward deep interior points, the exact sphere family,
//! and randomized interior sampling.

use rayon::prelude::*;

use crate::eigen::{herm_eig, kth_largest_eigenvalue};
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, HermitianTuple, Isometry};
use crate::matrix::{inner, vec_add, vec_norm, vec_scale, ComplexMatrix, C64};
use crate::orth::orth_complement;
use crate::random::{derive_seed, random_unit_direction};
use crate::range::{free_refine, RangeCertificate, SolveOptions};

/// Slack below which a point is reported as violating an outer halfspace.
pub const OUTER_CONSISTENCY_TOL: f64 = 1e-8;
/// Witness-to-subspace overlap treated as lying inside the subspace.
const INSIDE_RANGE_TOL: f64 = 1e-8;
/// Relative singular-value cutoff for the rank of the coupling matrix.
const COUPLING_RANK_TOL: f64 = 1e-8;
/// Norm defect allowed for the bisected segment witness.
const SEGMENT_NORM_TOL: f64 = 1e-12;
/// Deviation from unit length allowed for sphere-family inputs.
pub const SPHERE_UNIT_TOL: f64 = 1e-8;

/// One supporting halfspace c . a <= bound of the rank-k range.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub bound: f64,
}

/// A finite intersection of supporting halfspaces containing the rank-k range.
#[derive(Clone, Debug, PartialEq)]
pub struct OuterApproximation {
    pub k: usize,
    pub halfspaces: Vec<Halfspace>,
}

/// Supporting halfspaces of the rank-k range: the signed coordinate axes
/// followed by `extra` seeded random unit directions. For direction c the
/// bound is the k-th largest eigenvalue of c . A, which every compression
/// point obeys.
pub fn outer_halfspaces(
    a: &HermitianTuple,
    k: usize,
    extra: usize,
    seed: u64,
) -> Result<OuterApproximation> {
    let m = a.m();
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("rank k = {k} out of range for n = {n}")));
    }
    let mut directions: Vec<Vec<f64>> = Vec::with_capacity(2 * m + extra);
    for j in 0..m {
        for sign in [1.0, -1.0] {
            let mut c = vec![0.0; m];
            c[j] = sign;
            directions.push(c);
        }
    }
    for i in 0..extra {
        directions.push(random_unit_direction(m, derive_seed(seed, i as u64)));
    }
    let halfspaces = directions
        .into_par_iter()
        .map(|c| {
            let bound = kth_largest_eigenvalue(&a.linear_combination(&c), k)?;
            Ok(Halfspace { normal: c, bound })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OuterApproximation { k, halfspaces })
}

/// How a point sits relative to an outer approximation.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfspaceCheck {
    /// Smallest bound - c . a over the halfspaces (infinite when empty).
    pub min_slack: f64,
    /// Index of the tightest halfspace, when any exist.
    pub worst: Option<usize>,
    /// True when no halfspace is violated beyond the consistency tolerance.
    pub consistent: bool,
}

/// Evaluates every halfspace at the point and reports the worst slack.
pub fn check_against_halfspaces(
    point: &[f64],
    outer: &OuterApproximation,
) -> Result<HalfspaceCheck> {
    let mut min_slack = f64::INFINITY;
    let mut worst = None;
    for (i, h) in outer.halfspaces.iter().enumerate() {
        if h.normal.len() != point.len() {
            return Err(Error::Shape(format!(
                "halfspace normal has {} coordinates, point has {}",
                h.normal.len(),
                point.len()
            )));
        }
        let value: f64 = h.normal.iter().zip(point).map(|(c, a)| c * a).sum();
        let slack = h.bound - value;
        if slack < min_slack {
            min_slack = slack;
            worst = Some(i);
        }
    }
    Ok(HalfspaceCheck {
        min_slack,
        worst,
        consistent: min_slack >= -OUTER_CONSISTENCY_TOL,
    })
}

fn check_segment_inputs(
    a: &HermitianTuple,
    tip: &RangeCertificate,
    center: &RangeCertificate,
    t: f64,
) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("parameter t = {t} must lie in [0, 1]")));
    }
    if tip.witness.n() != a.n() || center.witness.n() != a.n() {
        return Err(Error::Shape(format!(
            "witnesses act on {} and {} dimensions, tuple has {}",
            tip.witness.n(),
            center.witness.n(),
            a.n()
        )));
    }
    Ok(())
}

fn lerp_point(tip: &[f64], center: &[f64], t: f64) -> Vec<f64> {
    tip.iter().zip(center).map(|(x, y)| t * x + (1.0 - t) * y).collect()
}

/// Certifies the point t * tip + (1 - t) * center at rank k, given a center
/// certificate of rank at least (m + 2) k. The witness blends the tip
/// isometry with center directions orthogonal to it and to all its images,
/// so the mixed compression stays scalar.
pub fn star_segment_rank_k(
    a: &HermitianTuple,
    tip: &RangeCertificate,
    center: &RangeCertificate,
    t: f64,
) -> Result<RangeCertificate> {
    check_segment_inputs(a, tip, center, t)?;
    let k = tip.k();
    let need = (a.m() + 2) * k;
    if center.k() < need {
        return Err(Error::Dimension(format!(
            "center rank {} is below (m + 2) k = {}",
            center.k(),
            need
        )));
    }
    let target = lerp_point(&tip.point, &center.point, t);
    if t == 1.0 {
        return RangeCertificate::evaluate_at(a, tip.witness.clone(), &target);
    }
    let x = tip.witness.matrix();
    let mut span_cols = x.columns();
    for aj in a.matrices() {
        span_cols.extend(aj.matrix().mul(x).columns());
    }
    let span = ComplexMatrix::from_columns(&span_cols);
    let y1 = orth_complement(&span, Some(center.witness.matrix()), Some(k))?;
    let w = x.scale_re(t.sqrt()).add(&y1.scale_re((1.0 - t).sqrt()));
    RangeCertificate::evaluate_at(a, Isometry::new(w)?, &target)
}

/// Which construction produced a rank-one segment witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank1Branch {
    /// t = 0 or t = 1; an input witness answers directly.
    Endpoint,
    /// The tip vector already lies in the center subspace.
    InsideRange,
    /// Rank-deficient coupling: perturb along a null direction.
    NullDirection,
    /// Full-rank coupling: cancel diagonal terms with a least-norm solve
    /// and rescale radially.
    LeastNorm,
}

/// Certifies the point t * tip + (1 - t) * center at rank one, given a
/// rank-one tip and a center certificate of rank above (m + 1) / 2. Works
/// coordinate-free in the span of the tip vector and the center subspace.
pub fn star_segment_rank_one(
    a: &HermitianTuple,
    tip: &RangeCertificate,
    center: &RangeCertificate,
    t: f64,
) -> Result<RangeCertificate> {
    rank_one_segment(a, tip, center, t).map(|(cert, _)| cert)
}

/// Same as [`star_segment_rank_one`], also reporting which construction
/// branch produced the witness.
pub fn star_segment_rank_one_traced(
    a: &HermitianTuple,
    tip: &RangeCertificate,
    center: &RangeCertificate,
    t: f64,
) -> Result<(RangeCertificate, Rank1Branch)> {
    rank_one_segment(a, tip, center, t)
}

pub(crate) fn rank_one_segment(
    a: &HermitianTuple,
    tip: &RangeCertificate,
    center: &RangeCertificate,
    t: f64,
) -> Result<(RangeCertificate, Rank1Branch)> {
    check_segment_inputs(a, tip, center, t)?;
    if tip.k() != 1 {
        return Err(Error::Domain(format!("tip certificate has rank {}, need 1", tip.k())));
    }
    let m = a.m();
    let kh = center.k();
    if 2 * kh < m + 2 {
        return Err(Error::Dimension(format!(
            "center rank {} does not exceed (m + 1) / 2 = {}",
            kh,
            (m + 1) as f64 / 2.0
        )));
    }
    let target = lerp_point(&tip.point, &center.point, t);
    if t == 1.0 {
        let cert = RangeCertificate::evaluate_at(a, tip.witness.clone(), &target)?;
        return Ok((cert, Rank1Branch::Endpoint));
    }
    if t == 0.0 {
        let u = Isometry::from_unit_vector(&center.witness.matrix().column(0))?;
        let cert = RangeCertificate::evaluate_at(a, u, &target)?;
        return Ok((cert, Rank1Branch::Endpoint));
    }

    let x = tip.witness.matrix().column(0);
    let y = center.witness.matrix();
    let ycols = y.columns();
    let c: Vec<C64> = ycols.iter().map(|yl| inner(yl, &x)).collect();
    let mut perp = x.clone();
    for (yl, cl) in ycols.iter().zip(&c) {
        crate::matrix::vec_sub_scaled(&mut perp, yl, *cl);
    }
    let b = vec_norm(&perp);
    if b <= INSIDE_RANGE_TOL {
        // The tip sits inside the center subspace, so the whole segment
        // collapses onto the tip point up to the center residual.
        let cert = RangeCertificate::evaluate_at(a, tip.witness.clone(), &target)?;
        return Ok((cert, Rank1Branch::InsideRange));
    }
    let u0 = vec_scale(&perp, C64::new(1.0 / b, 0.0));

    // Shifted tuple B_j = A_j - center_j I: the center block of each B_j is
    // (numerically) zero, which removes it from every expansion below.
    let shifted = a.translate(&center.point)?;
    let mut d = vec![0.0f64; m];
    let mut v: Vec<Vec<C64>> = Vec::with_capacity(m);
    for (j, bj) in shifted.matrices().iter().enumerate() {
        let bu = bj.matrix().matvec(&u0);
        d[j] = inner(&u0, &bu).re;
        let by = bj.matrix().mul(y);
        v.push((0..kh).map(|l| inner(&u0, &by.column(l))).collect());
    }

    // Real coupling matrix of the linear functional w -> 2 Re(v_j . w).
    let mut coupling = vec![vec![0.0f64; 2 * kh]; m];
    for j in 0..m {
        for l in 0..kh {
            coupling[j][2 * l] = 2.0 * v[j][l].re;
            coupling[j][2 * l + 1] = -2.0 * v[j][l].im;
        }
    }
    let mut gram = vec![0.0f64; m * m];
    for i in 0..m {
        for j in 0..m {
            gram[i * m + j] = coupling[i]
                .iter()
                .zip(&coupling[j])
                .map(|(p, q)| p * q)
                .sum();
        }
    }
    let gram_eig = herm_eig(&HermitianMatrix::from_real(m, &gram)?)?;
    let lam_max = gram_eig.values.last().copied().unwrap_or(0.0).max(0.0);
    // Absolute floor against pure-noise couplings, relative floor against
    // ill-conditioned ones; below either, least-norm weights would explode.
    let scale = shifted
        .matrices()
        .iter()
        .fold(1.0f64, |acc, mat| acc.max(mat.matrix().frobenius_norm()));
    let sigma = COUPLING_RANK_TOL * scale;
    let cutoff = (sigma * sigma).max(lam_max * COUPLING_RANK_TOL * COUPLING_RANK_TOL);
    let rank = gram_eig.values.iter().filter(|&&l| l > cutoff).count();

    let z = if rank == m {
        least_norm_segment_vector(&coupling, &gram_eig, cutoff, &d, &c, b, t, kh)?
    } else {
        null_direction_segment_vector(&coupling, &c, &x, &ycols, t, kh)?
    };
    let branch = if rank == m { Rank1Branch::LeastNorm } else { Rank1Branch::NullDirection };

    let w = match &z {
        SegmentVector::Ambient(w) => w.clone(),
        SegmentVector::Split { xi, omega } => {
            let mut w = vec_scale(&u0, C64::new(*xi, 0.0));
            for (yl, ol) in ycols.iter().zip(omega) {
                w = vec_add(&w, &vec_scale(yl, *ol));
            }
            w
        }
    };
    let norm = vec_norm(&w);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::NonFinite("segment witness degenerated".into()));
    }
    let w = vec_scale(&w, C64::new(1.0 / norm, 0.0));
    let cert = RangeCertificate::evaluate_at(a, Isometry::from_unit_vector(&w)?, &target)?;
    Ok((cert, branch))
}

enum SegmentVector {
    /// Fully assembled ambient vector.
    Ambient(Vec<C64>),
    /// Coefficients xi (along u0) and omega (along the center columns).
    Split { xi: f64, omega: Vec<C64> },
}

/// Full-rank case: kappa cancels the u0-diagonal terms for every radius, and
/// bisection picks the radius with unit norm. The expansion of the witness
/// z = xi u0 + Y omega(xi) then hits the target exactly.
#[allow(clippy::too_many_arguments)]
fn least_norm_segment_vector(
    coupling: &[Vec<f64>],
    gram_eig: &crate::eigen::EigenDecomposition,
    cutoff: f64,
    d: &[f64],
    c: &[C64],
    b: f64,
    t: f64,
    kh: usize,
) -> Result<SegmentVector> {
    let m = d.len();
    // Least-norm solution of (coupling) kappa_real = d through the gram
    // pseudo-inverse.
    let mut weights = vec![0.0f64; m];
    for i in 0..m {
        let lam = gram_eig.values[i];
        if lam <= cutoff {
            continue;
        }
        let q: Vec<f64> = gram_eig.vectors.column(i).iter().map(|z| z.re).collect();
        let proj: f64 = q.iter().zip(d).map(|(a, b)| a * b).sum();
        for (w, qi) in weights.iter_mut().zip(&q) {
            *w += proj / lam * qi;
        }
    }
    let mut kappa_real = vec![0.0f64; 2 * kh];
    for (row, &wj) in coupling.iter().zip(&weights) {
        for (kr, &r) in kappa_real.iter_mut().zip(row) {
            *kr += wj * r;
        }
    }
    let kappa: Vec<C64> = (0..kh)
        .map(|l| C64::new(kappa_real[2 * l], kappa_real[2 * l + 1]))
        .collect();

    let omega_at = |xi: f64| -> Vec<C64> {
        let ct = C64::new(t * b / xi, 0.0);
        let kt = C64::new((t * b * b - xi * xi) / xi, 0.0);
        vec_add(&vec_scale(c, ct), &vec_scale(&kappa, kt))
    };
    let height = |xi: f64| -> f64 {
        let o = omega_at(xi);
        xi * xi + o.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0
    };

    // The squared norm is t - 1 <= 0 at xi = b sqrt(t) and grows without
    // bound, so one crossing exists to the right.
    let mut lo = b * t.sqrt();
    if height(lo) > 0.0 {
        return Ok(SegmentVector::Split { xi: lo, omega: omega_at(lo) });
    }
    let mut hi = lo;
    let mut bracketed = false;
    for _ in 0..200 {
        hi *= 2.0;
        if height(hi) > 0.0 {
            bracketed = true;
            break;
        }
    }
    if !bracketed {
        return Err(Error::NoConvergence { residual: height(hi), iterations: 200 });
    }
    let mut xi = 0.5 * (lo + hi);
    for _ in 0..200 {
        xi = 0.5 * (lo + hi);
        let h = height(xi);
        if ((h + 1.0).sqrt() - 1.0).abs() <= SEGMENT_NORM_TOL {
            break;
        }
        if h <= 0.0 {
            lo = xi;
        } else {
            hi = xi;
        }
    }
    Ok(SegmentVector::Split { xi, omega: omega_at(xi) })
}

/// Rank-deficient case: a null direction of the coupling matrix leaves every
/// expansion term unchanged, so scaling along it only restores unit norm.
fn null_direction_segment_vector(
    coupling: &[Vec<f64>],
    c: &[C64],
    x: &[C64],
    ycols: &[Vec<C64>],
    t: f64,
    kh: usize,
) -> Result<SegmentVector> {
    let dim = 2 * kh;
    let mut gram2 = vec![0.0f64; dim * dim];
    for row in coupling {
        for p in 0..dim {
            for q in 0..dim {
                gram2[p * dim + q] += row[p] * row[q];
            }
        }
    }
    let eig = herm_eig(&HermitianMatrix::from_real(dim, &gram2)?)?;
    let eta_real: Vec<f64> = eig.vectors.column(0).iter().map(|z| z.re).collect();
    let eta: Vec<C64> = (0..kh)
        .map(|l| C64::new(eta_real[2 * l], eta_real[2 * l + 1]))
        .collect();
    let eta_sq: f64 = eta.iter().map(|z| z.norm_sqr()).sum();
    if eta_sq <= 0.0 {
        return Err(Error::Degeneracy("coupling null direction vanished".into()));
    }
    let overlap: f64 = c.iter().zip(&eta).map(|(cl, el)| (cl.conj() * el).re).sum();
    // Unit norm of sqrt(t) (x + s Y eta) as a quadratic in s >= 0.
    let qa = t * eta_sq;
    let qb = 2.0 * t * overlap;
    let qc = t - 1.0;
    let s = (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa);
    let mut w = x.to_vec();
    for (yl, el) in ycols.iter().zip(&eta) {
        w = vec_add(&w, &vec_scale(yl, el * C64::new(s, 0.0)));
    }
    Ok(SegmentVector::Ambient(vec_scale(&w, C64::new(t.sqrt(), 0.0))))
}

/// Certifies a segment point with whichever construction applies: the
/// rank-one route needs only center rank above (m + 1) / 2, the general
/// route needs rank (m + 2) k.
pub fn segment_witness(
    a: &HermitianTuple,
    tip: &RangeCertificate,
    center: &RangeCertificate,
    t: f64,
) -> Result<RangeCertificate> {
    if tip.k() == 1 && 2 * center.k() >= a.m() + 2 {
        star_segment_rank_one(a, tip, center, t)
    } else {
        star_segment_rank_k(a, tip, center, t)
    }
}

/// The three anticommuting 2x2 generators blown up to rank k. The rank-k
/// range of this family is exactly the unit sphere in R^3, which makes it a
/// sharp test case: unit points certify in closed form, interior points
/// admit no witness.
#[derive(Clone, Debug)]
pub struct SphereFamily {
    k: usize,
    tuple: HermitianTuple,
}

impl SphereFamily {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tuple(&self) -> &HermitianTuple {
        &self.tuple
    }

    /// Closed-form rank-k witness for a unit vector of R^3.
    pub fn witness(&self, point: &[f64]) -> Result<RangeCertificate> {
        if point.len() != 3 {
            return Err(Error::Shape(format!(
                "sphere points have 3 coordinates, got {}",
                point.len()
            )));
        }
        let norm = point.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > SPHERE_UNIT_TOL {
            return Err(Error::Domain(format!(
                "sphere witnesses exist only for unit points, |a| = {norm}"
            )));
        }
        let (a1, a2, a3) = (point[0], point[1], point[2]);
        let (alpha, beta) = if 1.0 + a1 <= 1e-14 {
            (0.0, C64::new(1.0, 0.0))
        } else {
            let alpha = ((1.0 + a1) / 2.0).sqrt();
            let beta = C64::new(a2, -a3) / (2.0 * (1.0 + a1)).sqrt();
            (alpha, beta)
        };
        let scale = (alpha * alpha + beta.norm_sqr()).sqrt();
        let (alpha, beta) = (alpha / scale, beta / scale);
        let k = self.k;
        let u = ComplexMatrix::from_fn(2 * k, k, |i, j| {
            if i == j {
                C64::new(alpha, 0.0)
            } else if i == j + k {
                beta
            } else {
                C64::new(0.0, 0.0)
            }
        });
        RangeCertificate::evaluate_at(&self.tuple, Isometry::new(u)?, point)
    }
}

/// Builds the rank-k sphere family on C^(2k).
pub fn sphere_family(k: usize) -> Result<SphereFamily> {
    if k == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    let i = C64::new(0.0, 1.0);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let generators = [
        ComplexMatrix::new(2, 2, vec![one, zero, zero, -one])?,
        ComplexMatrix::new(2, 2, vec![zero, one, one, zero])?,
        ComplexMatrix::new(2, 2, vec![zero, i, -i, zero])?,
    ];
    let eye = ComplexMatrix::identity(k);
    let mats = generators
        .iter()
        .map(|g| HermitianMatrix::new(g.kron(&eye)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SphereFamily { k, tuple: HermitianTuple::new(mats)? })
}

/// Free-descent samples of the rank-k range: one seeded start per index,
/// keeping the certificates whose residual clears the solver tolerance.
/// Output order is by start index, independent of the worker count.
pub fn sample_inner(
    a: &HermitianTuple,
    k: usize,
    count: usize,
    opts: &SolveOptions,
) -> Result<Vec<RangeCertificate>> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("rank k = {k} out of range for n = {n}")));
    }
    let certs = (0..count)
        .into_par_iter()
        .map(|i| free_refine(a, k, opts, derive_seed(opts.seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(certs.into_iter().filter(|c| c.accepted(opts.tol)).collect())
}
