//! Rank-k joint numerical range: certificates, verification, membership
//! optimization, the single-matrix interval, and certificate transports.

use crate::eigen::herm_eig;
use crate::error::{Error, Result};
use crate::hermitian::{compress, HermitianMatrix, HermitianTuple, Isometry};
use crate::matrix::{C64, ComplexMatrix};
use crate::orth::{mgs_orthonormalize, orth_complement};
use crate::random::{derive_seed, random_isometry};
use rayon::prelude::*;

/// Default acceptance threshold on certificate residuals.
pub const VERIFY_TOL: f64 = 1e-8;
/// Gradient-norm stopping threshold for the membership optimizer.
pub const GRAD_TOL: f64 = 1e-12;
/// Armijo sufficient-decrease constant.
const ARMIJO_C: f64 = 1e-4;
/// Armijo backtracking shrink factor.
const ARMIJO_SHRINK: f64 = 0.5;
/// Cap on Levenberg-Marquardt polish steps after the descent phase.
const LM_MAX_STEPS: usize = 60;
/// Damping growth factor on a rejected Levenberg-Marquardt step.
const LM_GROW: f64 = 4.0;
/// Damping shrink factor on an accepted Levenberg-Marquardt step.
const LM_SHRINK: f64 = 3.0;
/// Relative damping above which the polish gives up.
const LM_LAMBDA_MAX: f64 = 1e12;
/// Tangent dimension beyond which the polish is skipped; the normal
/// equations would dominate the solve cost there.
const LM_MAX_DIM: usize = 512;

/// A point claimed to lie in the rank-k range, with the isometry that attests
/// it and the residual sqrt(sum_j ||U*A_jU - a_j I||_F^2).
#[derive(Clone, Debug)]
pub struct RangeCertificate {
    pub point: Vec<f64>,
    pub witness: Isometry,
    pub residual: f64,
}

impl RangeCertificate {
    /// Rank k of the certificate.
    pub fn k(&self) -> usize {
        self.witness.k()
    }

    pub fn accepted(&self, tol: f64) -> bool {
        self.residual <= tol
    }

    /// Evaluates the trace-averaged point of U and its scalar-block residual.
    pub fn evaluate(a: &HermitianTuple, witness: Isometry) -> Result<RangeCertificate> {
        let compressed = compressed_blocks(a, &witness)?;
        let k = witness.k() as f64;
        let point: Vec<f64> = compressed.iter().map(|c| c.trace().re / k).collect();
        let residual = scalar_block_residual(&compressed, &point);
        Ok(RangeCertificate { point, witness, residual })
    }

    /// Evaluates the residual of U against a fixed claimed point.
    pub fn evaluate_at(
        a: &HermitianTuple,
        witness: Isometry,
        point: &[f64],
    ) -> Result<RangeCertificate> {
        if point.len() != a.m() {
            return Err(Error::Shape(format!(
                "point has {} coordinates, tuple has {}",
                point.len(),
                a.m()
            )));
        }
        let compressed = compressed_blocks(a, &witness)?;
        let residual = scalar_block_residual(&compressed, point);
        Ok(RangeCertificate { point: point.to_vec(), witness, residual })
    }
}

fn compressed_blocks(a: &HermitianTuple, witness: &Isometry) -> Result<Vec<ComplexMatrix>> {
    if witness.n() != a.n() {
        return Err(Error::Shape(format!(
            "witness lives in C^{}, tuple in C^{}",
            witness.n(),
            a.n()
        )));
    }
    let u = witness.matrix();
    Ok(a.matrices().iter().map(|aj| u.adjoint_mul(&aj.matrix().mul(u))).collect())
}

fn scalar_block_residual(compressed: &[ComplexMatrix], point: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (c, &aj) in compressed.iter().zip(point) {
        let k = c.rows;
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                let mut z = c.get(i, j);
                if i == j {
                    z -= C64::new(aj, 0.0);
                }
                s += z.norm_sqr();
            }
        }
        acc += s;
    }
    acc.sqrt()
}

/// Certificate plus the accept/reject decision at a given tolerance.
#[derive(Clone, Debug)]
pub struct PointCheck {
    pub certificate: RangeCertificate,
    pub accepted: bool,
    pub tol: f64,
}

/// Computes the point certified by U and accepts iff the residual is within tol.
pub fn verify_point(a: &HermitianTuple, witness: &Isometry, tol: f64) -> Result<PointCheck> {
    let certificate = RangeCertificate::evaluate(a, witness.clone())?;
    let accepted = certificate.residual <= tol;
    Ok(PointCheck { certificate, accepted, tol })
}

/// What the membership optimizer aims at.
#[derive(Clone, Debug)]
pub enum Target {
    /// Certify this exact point.
    Fixed(Vec<f64>),
    /// Certify any point, softly pulled toward this one.
    Near(Vec<f64>),
    /// Certify any point at all.
    Free,
}

/// Knobs for the Stiefel-manifold membership search.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub restarts: usize,
    pub max_iters: usize,
    /// Success threshold on the residual.
    pub tol: f64,
    pub grad_tol: f64,
    pub seed: u64,
    /// Weight of the ||a(U) - a0||^2 pull in Near mode.
    pub penalty_weight: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            restarts: 50,
            max_iters: 500,
            tol: VERIFY_TOL,
            grad_tol: GRAD_TOL,
            seed: 0,
            penalty_weight: 10.0,
        }
    }
}

/// Outcome of a membership search. `target_residual` measures the claim the
/// caller asked about (distance to the fixed target, or plain residual in
/// Near/Free mode); the certificate always stores its own trace-averaged point.
#[derive(Clone, Debug)]
pub enum Membership {
    Member { certificate: RangeCertificate, target_residual: f64 },
    Unresolved { best: RangeCertificate, best_target_residual: f64 },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    pub fn certificate(&self) -> &RangeCertificate {
        match self {
            Membership::Member { certificate, .. } => certificate,
            Membership::Unresolved { best, .. } => best,
        }
    }

    pub fn target_residual(&self) -> f64 {
        match self {
            Membership::Member { target_residual, .. } => *target_residual,
            Membership::Unresolved { best_target_residual, .. } => *best_target_residual,
        }
    }
}

struct Objective<'t> {
    a: &'t HermitianTuple,
    target: &'t Target,
    k: usize,
    penalty_weight: f64,
}

impl Objective<'_> {
    /// Objective value, residual-at-point, and the point used.
    fn value(&self, u: &ComplexMatrix) -> (f64, Vec<ComplexMatrix>, Vec<f64>) {
        let blocks: Vec<ComplexMatrix> = self
            .a
            .matrices()
            .iter()
            .map(|aj| u.adjoint_mul(&aj.matrix().mul(u)))
            .collect();
        let kf = self.k as f64;
        let trace_point: Vec<f64> = blocks.iter().map(|b| b.trace().re / kf).collect();
        let point = match self.target {
            Target::Fixed(t) => t.clone(),
            _ => trace_point.clone(),
        };
        let resid_sq: f64 = scalar_block_residual(&blocks, &point).powi(2);
        let mut f = resid_sq;
        if let Target::Near(a0) = self.target {
            let pull: f64 =
                trace_point.iter().zip(a0).map(|(x, y)| (x - y) * (x - y)).sum();
            f += self.penalty_weight * pull;
        }
        (f, blocks, point)
    }

    /// Euclidean gradient G with df = 2 Re tr(dU* G).
    fn gradient(
        &self,
        u: &ComplexMatrix,
        blocks: &[ComplexMatrix],
        point: &[f64],
    ) -> ComplexMatrix {
        let n = u.rows;
        let k = u.cols;
        let mut g = ComplexMatrix::zeros(n, k);
        let kf = k as f64;
        for (j, aj) in self.a.matrices().iter().enumerate() {
            let mut m = blocks[j].clone();
            for i in 0..k {
                let d = m.get(i, i);
                m.set(i, i, d - C64::new(point[j], 0.0));
            }
            let aju = aj.matrix().mul(u);
            g = g.add(&aju.mul(&m).scale_re(2.0));
            if let Target::Near(a0) = self.target {
                let pull = 2.0 * self.penalty_weight * (point[j] - a0[j]) / kf;
                g = g.add(&aju.scale_re(pull));
            }
        }
        g
    }
}

/// Projects a Euclidean gradient onto the tangent space of the Stiefel manifold.
fn tangent_project(u: &ComplexMatrix, g: &ComplexMatrix) -> ComplexMatrix {
    let utg = u.adjoint_mul(g);
    let sym = utg.hermitian_part();
    g.sub(&u.mul(&sym))
}

/// Thin-QR retraction; None when the step collapses the column span.
fn qr_retract(u: &ComplexMatrix, dir: &ComplexMatrix, step: f64) -> Option<ComplexMatrix> {
    let stepped = u.sub(&dir.scale_re(step));
    let basis = mgs_orthonormalize(&stepped.columns(), 1e-12);
    if basis.len() != u.cols {
        return None;
    }
    Some(ComplexMatrix::from_columns(&basis))
}

fn solve_one_start(
    obj: &Objective<'_>,
    u0: ComplexMatrix,
    opts: &SolveOptions,
) -> ComplexMatrix {
    let mut u = u0;
    let (mut f, mut blocks, mut point) = obj.value(&u);
    let stop_f = (opts.tol * 1e-2).powi(2);
    let mut alpha = 1.0f64;
    for _ in 0..opts.max_iters {
        if f <= stop_f {
            break;
        }
        let g = obj.gradient(&u, &blocks, &point);
        let gt = tangent_project(&u, &g);
        let gnorm_sq: f64 = gt.data.iter().map(|z| z.norm_sqr()).sum();
        let gnorm = gnorm_sq.sqrt();
        if gnorm <= opts.grad_tol {
            break;
        }
        let mut step = alpha.clamp(1e-16, 1e3);
        let mut accepted = false;
        for _ in 0..60 {
            if let Some(cand) = qr_retract(&u, &gt, step) {
                let (fc, bc, pc) = obj.value(&cand);
                if fc <= f - ARMIJO_C * step * gnorm_sq {
                    u = cand;
                    f = fc;
                    blocks = bc;
                    point = pc;
                    alpha = step * 2.0;
                    accepted = true;
                    break;
                }
            }
            step *= ARMIJO_SHRINK;
            if step < 1e-18 {
                break;
            }
        }
        if !accepted {
            break;
        }
    }
    lm_polish(obj, u, opts)
}

/// Packs the deviation blocks (and the Near pull, when active) into a real
/// residual vector with ||r||^2 equal to the objective value.
fn lm_residual(obj: &Objective<'_>, blocks: &[ComplexMatrix], point: &[f64]) -> Vec<f64> {
    let k = obj.k;
    let mut r = Vec::with_capacity(blocks.len() * 2 * k * k + blocks.len());
    for (b, &pj) in blocks.iter().zip(point) {
        for i in 0..k {
            for l in 0..k {
                let mut z = b.get(i, l);
                if i == l {
                    z -= C64::new(pj, 0.0);
                }
                r.push(z.re);
                r.push(z.im);
            }
        }
    }
    if let Target::Near(a0) = obj.target {
        let w = obj.penalty_weight.sqrt();
        for (p, t) in point.iter().zip(a0) {
            r.push(w * (p - t));
        }
    }
    r
}

/// Solves the symmetric positive definite system in place by Cholesky;
/// None when a pivot fails.
fn cholesky_solve(mut a: Vec<Vec<f64>>, b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for p in 0..j {
                s -= a[i][p] * a[j][p];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                a[i][i] = s.sqrt();
            } else {
                a[i][j] = s / a[j][j];
            }
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for p in 0..i {
            let t = a[i][p] * y[p];
            y[i] -= t;
        }
        y[i] /= a[i][i];
    }
    for i in (0..n).rev() {
        for p in (i + 1)..n {
            let t = a[p][i] * y[p];
            y[i] -= t;
        }
        y[i] /= a[i][i];
    }
    Some(y)
}

/// Levenberg-Marquardt refinement over the Grassmann tangent directions
/// U <- orth(U + Q Z), Q spanning the orthogonal complement of the witness.
/// First-order descent slows to a crawl when the solution manifold loses
/// transversal curvature (targets near the boundary of the range); the
/// damped least-squares step restores fast local convergence there. Every
/// candidate is re-evaluated through the objective, so the polish never
/// worsens the iterate.
fn lm_polish(obj: &Objective<'_>, u0: ComplexMatrix, opts: &SolveOptions) -> ComplexMatrix {
    let n = u0.rows;
    let k = u0.cols;
    if n == k {
        return u0;
    }
    if 2 * (n - k) * k > LM_MAX_DIM {
        return u0;
    }
    let stop_f = (opts.tol * 1e-2).powi(2);
    let mut u = u0;
    let (mut f, mut blocks, mut point) = obj.value(&u);
    let trace_point = !matches!(obj.target, Target::Fixed(_));
    let mut lambda = 1e-3f64;
    for _ in 0..LM_MAX_STEPS {
        if f <= stop_f {
            break;
        }
        let q = match orth_complement(&u, None, None) {
            Ok(q) if q.cols == n - k => q,
            _ => break,
        };
        let couplings: Vec<ComplexMatrix> = obj
            .a
            .matrices()
            .iter()
            .map(|aj| q.adjoint_mul(&aj.matrix().mul(&u)))
            .collect();
        let r = lm_residual(obj, &blocks, &point);
        let rdim = r.len();
        let d = 2 * (n - k) * k;
        let mut jac = vec![0.0f64; rdim * d];
        for row in 0..n - k {
            for col in 0..k {
                for part in 0..2 {
                    let dir = 2 * (row * k + col) + part;
                    let s = if part == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
                    let mut out = 0usize;
                    let mut pulls = Vec::with_capacity(blocks.len());
                    for cj in &couplings {
                        let mut db = ComplexMatrix::zeros(k, k);
                        for l in 0..k {
                            let v = s.conj() * cj.get(row, l);
                            db.set(col, l, db.get(col, l) + v);
                            db.set(l, col, db.get(l, col) + v.conj());
                        }
                        let dp = if trace_point { db.trace().re / k as f64 } else { 0.0 };
                        pulls.push(dp);
                        for i in 0..k {
                            for l in 0..k {
                                let mut v = db.get(i, l);
                                if i == l {
                                    v -= C64::new(dp, 0.0);
                                }
                                jac[out * d + dir] = v.re;
                                jac[(out + 1) * d + dir] = v.im;
                                out += 2;
                            }
                        }
                    }
                    if let Target::Near(_) = obj.target {
                        let w = obj.penalty_weight.sqrt();
                        for dp in pulls {
                            jac[out * d + dir] = w * dp;
                            out += 1;
                        }
                    }
                }
            }
        }
        let mut gram = vec![vec![0.0f64; d]; d];
        let mut rhs = vec![0.0f64; d];
        for p in 0..rdim {
            let row = &jac[p * d..(p + 1) * d];
            for c1 in 0..d {
                if row[c1] == 0.0 {
                    continue;
                }
                for c2 in 0..=c1 {
                    gram[c1][c2] += row[c1] * row[c2];
                }
                rhs[c1] += row[c1] * r[p];
            }
        }
        for c1 in 0..d {
            for c2 in (c1 + 1)..d {
                gram[c1][c2] = gram[c2][c1];
            }
        }
        let scale = gram.iter().enumerate().map(|(i, row)| row[i]).fold(1e-30, f64::max);
        let mut accepted = false;
        for _ in 0..30 {
            let mut sys = gram.clone();
            for i in 0..d {
                sys[i][i] += lambda * scale;
            }
            if let Some(y) = cholesky_solve(sys, &rhs) {
                let mut z = ComplexMatrix::zeros(n - k, k);
                for row in 0..n - k {
                    for col in 0..k {
                        let base = 2 * (row * k + col);
                        z.set(row, col, C64::new(-y[base], -y[base + 1]));
                    }
                }
                let raw = u.add(&q.mul(&z));
                let basis = mgs_orthonormalize(&raw.columns(), 1e-12);
                if basis.len() == k {
                    let cand = ComplexMatrix::from_columns(&basis);
                    let (fc, bc, pc) = obj.value(&cand);
                    if fc < f {
                        u = cand;
                        f = fc;
                        blocks = bc;
                        point = pc;
                        lambda = (lambda / LM_SHRINK).max(1e-12);
                        accepted = true;
                        break;
                    }
                }
            }
            lambda *= LM_GROW;
            if lambda > LM_LAMBDA_MAX {
                return u;
            }
        }
        if !accepted {
            break;
        }
    }
    u
}

/// Multi-start Stiefel search for a witness. All restarts run to completion
/// and merge by lowest residual (ties to the lowest restart index), so the
/// result is identical for any worker count.
pub fn membership_solve_target(
    a: &HermitianTuple,
    target: Target,
    k: usize,
    opts: &SolveOptions,
) -> Result<Membership> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("rank k = {k} out of range for n = {n}")));
    }
    match &target {
        Target::Fixed(t) | Target::Near(t) => {
            if t.len() != a.m() {
                return Err(Error::Shape(format!(
                    "target has {} coordinates, tuple has {}",
                    t.len(),
                    a.m()
                )));
            }
        }
        Target::Free => {}
    }
    if opts.restarts == 0 {
        return Err(Error::Domain("need at least one restart".into()));
    }
    let obj = Objective { a, target: &target, k, penalty_weight: opts.penalty_weight };

    let runs: Vec<(usize, ComplexMatrix)> = (0..opts.restarts)
        .into_par_iter()
        .map(|i| {
            let u0 = random_isometry(n, k, derive_seed(opts.seed, i as u64));
            (i, solve_one_start(&obj, u0.matrix().clone(), opts))
        })
        .collect();

    let mut best: Option<(f64, usize, ComplexMatrix)> = None;
    for (i, u) in runs {
        let tres = target_residual_of(&obj, &u);
        let better = match &best {
            None => true,
            Some((bres, bi, _)) => tres < *bres || (tres == *bres && i < *bi),
        };
        if better {
            best = Some((tres, i, u));
        }
    }
    let (best_res, _, best_u) = best.expect("at least one restart");
    let witness = Isometry::new(best_u)?;
    let certificate = RangeCertificate::evaluate(a, witness)?;
    if best_res <= opts.tol {
        Ok(Membership::Member { certificate, target_residual: best_res })
    } else {
        Ok(Membership::Unresolved { best: certificate, best_target_residual: best_res })
    }
}

fn target_residual_of(obj: &Objective<'_>, u: &ComplexMatrix) -> f64 {
    let (_, blocks, point) = obj.value(u);
    scalar_block_residual(&blocks, &point)
}

/// Searches for an isometry certifying the exact point `target`.
pub fn membership_solve(
    a: &HermitianTuple,
    target: &[f64],
    k: usize,
    opts: &SolveOptions,
) -> Result<Membership> {
    membership_solve_target(a, Target::Fixed(target.to_vec()), k, opts)
}

/// One free-target refinement from a seeded random start; the certificate
/// lands wherever the descent settles.
pub(crate) fn free_refine(
    a: &HermitianTuple,
    k: usize,
    opts: &SolveOptions,
    seed: u64,
) -> Result<RangeCertificate> {
    let obj = Objective { a, target: &Target::Free, k, penalty_weight: opts.penalty_weight };
    let u0 = random_isometry(a.n(), k, seed);
    let u = solve_one_start(&obj, u0.matrix().clone(), opts);
    RangeCertificate::evaluate(a, Isometry::new(u)?)
}

/// The rank-k range of a single Hermitian matrix with endpoint witnesses.
#[derive(Clone, Debug)]
pub struct SingleMatrixRange {
    /// Eigenvalues ascending.
    pub eigenvalues: Vec<f64>,
    pub interval: Option<IntervalWitness>,
}

/// Closed interval with certificates at both ends and the midpoint.
#[derive(Clone, Debug)]
pub struct IntervalWitness {
    pub lo: f64,
    pub hi: f64,
    pub lo_certificate: RangeCertificate,
    pub mid_certificate: RangeCertificate,
    pub hi_certificate: RangeCertificate,
}

/// Rank-k range of one Hermitian matrix: the interval between the k-th
/// smallest and k-th largest eigenvalues, empty when they cross (n < 2k-1).
pub fn single_matrix_interval(a1: &HermitianMatrix, k: usize) -> Result<SingleMatrixRange> {
    let n = a1.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("rank k = {k} out of range for n = {n}")));
    }
    let d = herm_eig(a1)?;
    let lo = d.values[k - 1];
    let hi = d.values[n - k];
    if lo > hi {
        return Ok(SingleMatrixRange { eigenvalues: d.values, interval: None });
    }
    let tuple = HermitianTuple::new(vec![a1.clone()])?;
    let witness_at = |t: f64| -> Result<RangeCertificate> {
        let cols: Vec<Vec<C64>> = (0..k)
            .map(|j| {
                // Pair eigenvector j with n-k+j; when n = 2k-1 that pairing
                // would reuse index k-1, so fall back to the mirrored pairing
                // j <-> n-1-j, which leaves the middle eigenvector fixed.
                let (il, ih) = if n >= 2 * k { (j, n - k + j) } else { (j, n - 1 - j) };
                let vl = d.vectors.column(il);
                if il == ih {
                    return vl;
                }
                let vh = d.vectors.column(ih);
                let denom = d.values[ih] - d.values[il];
                let s_sq = if denom.abs() <= f64::EPSILON * d.values[ih].abs().max(1.0) {
                    0.0
                } else {
                    ((t - d.values[il]) / denom).clamp(0.0, 1.0)
                };
                let (s, c) = (s_sq.sqrt(), (1.0 - s_sq).sqrt());
                vl.iter().zip(&vh).map(|(x, y)| x * c + y * s).collect()
            })
            .collect();
        let u = Isometry::new(ComplexMatrix::from_columns(&cols))?;
        RangeCertificate::evaluate_at(&tuple, u, &[t])
    };
    let interval = IntervalWitness {
        lo,
        hi,
        lo_certificate: witness_at(lo)?,
        mid_certificate: witness_at(0.5 * (lo + hi))?,
        hi_certificate: witness_at(hi)?,
    };
    Ok(SingleMatrixRange { eigenvalues: d.values, interval: Some(interval) })
}

/// Real affine reparametrization of tuples: B_j = sum_i T_ij A_i - mu_j I.
#[derive(Clone, Debug, PartialEq)]
pub struct RealTransform {
    /// m x p coefficient matrix, row i = coefficients of A_i.
    pub matrix: Vec<Vec<f64>>,
    pub offset: Option<Vec<f64>>,
}

impl RealTransform {
    pub fn linear(matrix: Vec<Vec<f64>>) -> Self {
        RealTransform { matrix, offset: None }
    }

    /// Input arity m.
    pub fn input_len(&self) -> usize {
        self.matrix.len()
    }

    /// Output arity p.
    pub fn output_len(&self) -> usize {
        self.matrix.first().map_or(0, |r| r.len())
    }

    fn check(&self) -> Result<()> {
        let p = self.output_len();
        if self.matrix.is_empty() || p == 0 {
            return Err(Error::Shape("transform matrix must be nonempty".into()));
        }
        if self.matrix.iter().any(|r| r.len() != p) {
            return Err(Error::Shape("transform matrix rows must share one length".into()));
        }
        if let Some(mu) = &self.offset {
            if mu.len() != p {
                return Err(Error::Shape(format!(
                    "offset length {} does not match output arity {}",
                    mu.len(),
                    p
                )));
            }
        }
        Ok(())
    }

    /// Maximum absolute column sum; bounds how residuals stretch in transport.
    pub fn one_norm(&self) -> f64 {
        let p = self.output_len();
        (0..p)
            .map(|j| self.matrix.iter().map(|r| r[j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Image of a point: (aT)_j - mu_j.
    pub fn point_image(&self, a: &[f64]) -> Vec<f64> {
        let p = self.output_len();
        (0..p)
            .map(|j| {
                let lin: f64 = a.iter().zip(&self.matrix).map(|(ai, row)| ai * row[j]).sum();
                lin - self.offset.as_ref().map_or(0.0, |mu| mu[j])
            })
            .collect()
    }
}

/// Applies a real affine transform to a tuple. Any witness for A certifies
/// the image point for the transformed tuple.
pub fn transform_tuple(a: &HermitianTuple, t: &RealTransform) -> Result<HermitianTuple> {
    t.check()?;
    if t.input_len() != a.m() {
        return Err(Error::Shape(format!(
            "transform expects {} inputs, tuple has {}",
            t.input_len(),
            a.m()
        )));
    }
    let p = t.output_len();
    let n = a.n();
    let mut out = Vec::with_capacity(p);
    for j in 0..p {
        let coef: Vec<f64> = t.matrix.iter().map(|row| row[j]).collect();
        let mut b = a.linear_combination(&coef).matrix().clone();
        if let Some(mu) = &t.offset {
            for i in 0..n {
                let d = b.get(i, i);
                b.set(i, i, d - C64::new(mu[j], 0.0));
            }
        }
        out.push(HermitianMatrix::symmetrize(b));
    }
    HermitianTuple::new(out)
}

/// Translates a tuple: A_j - mu_j I; certificates shift by exactly -mu.
pub fn translate_tuple(a: &HermitianTuple, mu: &[f64]) -> Result<HermitianTuple> {
    a.translate(mu)
}

/// Transports a certificate through a transform: same witness, image point,
/// residual recomputed honestly against the transformed tuple.
pub fn transform_certificate(
    cert: &RangeCertificate,
    t: &RealTransform,
    transformed: &HermitianTuple,
) -> Result<RangeCertificate> {
    let point = t.point_image(&cert.point);
    RangeCertificate::evaluate_at(transformed, cert.witness.clone(), &point)
}

/// Drops the last witness column: a rank-(k+1) certificate yields a rank-k
/// certificate at the same point, residual never growing beyond rounding.
pub fn shrink_rank(a: &HermitianTuple, cert: &RangeCertificate) -> Result<RangeCertificate> {
    let shrunk = cert.witness.shrink()?;
    RangeCertificate::evaluate_at(a, shrunk, &cert.point)
}

/// Removes coordinate j from tuple and certificate; the witness is unchanged.
pub fn drop_coordinate(
    a: &HermitianTuple,
    cert: &RangeCertificate,
    j: usize,
) -> Result<(HermitianTuple, RangeCertificate)> {
    if j >= a.m() {
        return Err(Error::Domain(format!("coordinate {} out of range for m = {}", j, a.m())));
    }
    if a.m() == 1 {
        return Err(Error::Domain("cannot drop the only coordinate".into()));
    }
    let kept: Vec<HermitianMatrix> = a
        .matrices()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .map(|(_, m)| m.clone())
        .collect();
    let sub = HermitianTuple::new(kept)?;
    let point: Vec<f64> = cert
        .point
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .map(|(_, x)| *x)
        .collect();
    let sub_cert = RangeCertificate::evaluate_at(&sub, cert.witness.clone(), &point)?;
    Ok((sub, sub_cert))
}

/// Maximal real-linearly-independent subfamily plus the transform that
/// rebuilds the full tuple from it.
#[derive(Clone, Debug)]
pub struct TupleReduction {
    pub independent: HermitianTuple,
    /// Indices of the selected matrices in the original tuple.
    pub selected: Vec<usize>,
    /// p x m transform with A_j = sum_i transform[i][j] * independent_i.
    pub transform: RealTransform,
}

/// Embeds a Hermitian matrix isometrically into R^(n^2) for the real inner
/// product Re tr(X*Y); coordinates ride in the real parts of C64 entries so
/// the complex MGS routine doubles as a real one.
fn embed_hermitian(h: &HermitianMatrix) -> Vec<C64> {
    let n = h.n();
    let m = h.matrix();
    let mut v = Vec::with_capacity(n * n);
    let s = std::f64::consts::SQRT_2;
    for i in 0..n {
        v.push(C64::new(m.get(i, i).re, 0.0));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let z = m.get(i, j);
            v.push(C64::new(s * z.re, 0.0));
            v.push(C64::new(s * z.im, 0.0));
        }
    }
    v
}

/// Greedy selection of a maximal independent subfamily under the real
/// Frobenius inner product; rank decisions at `tol` relative to the largest
/// member norm. The reconstruction satisfies ||A_j - sum t_ij B_i||_F <= tol * ||A||.
pub fn reduce_tuple(a: &HermitianTuple, tol: f64) -> Result<TupleReduction> {
    let m = a.m();
    let embedded: Vec<Vec<C64>> = a.matrices().iter().map(embed_hermitian).collect();
    let scale = a
        .matrices()
        .iter()
        .map(|h| h.matrix().frobenius_norm())
        .fold(0.0, f64::max);

    let mut selected: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<C64>> = Vec::new();
    if scale > 0.0 {
        for (j, v) in embedded.iter().enumerate() {
            let norm0 = crate::matrix::vec_norm(v);
            if norm0 < tol * scale {
                continue;
            }
            let mut w = v.clone();
            let max_coef = crate::orth::mgs_pass(&mut w, &basis);
            if max_coef > 0.5 * norm0 {
                crate::orth::mgs_pass(&mut w, &basis);
            }
            // Keep only if the residual clears the absolute threshold tol*scale.
            let res = crate::matrix::vec_norm(&w);
            if res >= tol * scale {
                basis.push(crate::matrix::vec_scale(&w, C64::new(1.0 / res, 0.0)));
                selected.push(j);
            }
        }
    }
    if selected.is_empty() {
        selected.push(0);
    }

    let p = selected.len();
    // Coefficients of each A_j over the selected subfamily by normal equations.
    let gram = HermitianMatrix::symmetrize(ComplexMatrix::from_fn(p, p, |r, c| {
        C64::new(
            real_frob_inner(a.get(selected[r]), a.get(selected[c])),
            0.0,
        )
    }));
    let gd = herm_eig(&gram)?;
    let gmax = gd.values.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let cutoff = gmax * 1e-13;

    let mut transform = vec![vec![0.0; m]; p];
    for j in 0..m {
        let rhs: Vec<f64> = selected
            .iter()
            .map(|&i| real_frob_inner(a.get(i), a.get(j)))
            .collect();
        // t = V diag(1/lambda) V^T rhs with small eigenvalues dropped.
        let mut t = vec![0.0; p];
        for e in 0..p {
            let lam = gd.values[e];
            if lam.abs() <= cutoff {
                continue;
            }
            let v: Vec<f64> = (0..p).map(|r| gd.vectors.get(r, e).re).collect();
            let proj: f64 = v.iter().zip(&rhs).map(|(x, y)| x * y).sum();
            for r in 0..p {
                t[r] += v[r] * proj / lam;
            }
        }
        for r in 0..p {
            transform[r][j] = t[r];
        }
    }

    let independent =
        HermitianTuple::new(selected.iter().map(|&i| a.get(i).clone()).collect())?;
    Ok(TupleReduction {
        independent,
        selected,
        transform: RealTransform::linear(transform),
    })
}

fn real_frob_inner(x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
    x.matrix()
        .data
        .iter()
        .zip(&y.matrix().data)
        .map(|(a, b)| (a.conj() * b).re)
        .sum()
}

/// Result of pushing a rank-k certificate through a compression X.
#[derive(Clone, Debug)]
pub struct CompressionInclusion {
    pub compressed: HermitianTuple,
    pub certificate: RangeCertificate,
}

/// Principal-angle cosine above which a direction counts as shared.
const INTERSECT_COS: f64 = 1.0 - 1e-10;

/// Given a rank-k certificate for A and an isometry X onto an (n-r)-dim
/// subspace with r < k, produces a rank-(k-r) certificate for the compressed
/// tuple at the same point, built inside X*(range(U) /\ range(X)).
pub fn compression_inclusion_check(
    a: &HermitianTuple,
    cert: &RangeCertificate,
    x: &Isometry,
) -> Result<CompressionInclusion> {
    let n = a.n();
    let k = cert.witness.k();
    if x.n() != n {
        return Err(Error::Shape(format!("X lives in C^{}, tuple in C^{}", x.n(), n)));
    }
    let r = n - x.k();
    if r == 0 {
        return Err(Error::Domain("X must compress to a proper subspace (r >= 1)".into()));
    }
    if r >= k {
        return Err(Error::Domain(format!(
            "removed dimension r = {r} must be smaller than the certificate rank k = {k}"
        )));
    }
    let keep = k - r;
    // Principal directions of range(U) against range(X) via W = X*U.
    let w = x.matrix().adjoint_mul(cert.witness.matrix());
    let gram = HermitianMatrix::symmetrize(w.adjoint_mul(&w));
    let gd = herm_eig(&gram)?;
    let min_cos_sq = INTERSECT_COS * INTERSECT_COS;
    let shared = (0..k).filter(|&e| gd.values[e] >= min_cos_sq).count();
    if shared < keep {
        return Err(Error::Degeneracy(format!(
            "subspace intersection has numerical dimension {shared}, needed {keep}"
        )));
    }
    // Top eigenvectors y give intersection directions; X*(Uy) = Wy.
    let cols: Vec<Vec<C64>> = (0..keep)
        .map(|t| {
            let y = gd.vectors.column(k - 1 - t);
            w.matvec(&y)
        })
        .collect();
    let basis = mgs_orthonormalize(&cols, 1e-6);
    if basis.len() != keep {
        return Err(Error::Degeneracy(format!(
            "intersection directions collapsed to {} of {keep}",
            basis.len()
        )));
    }
    let u0 = Isometry::new(ComplexMatrix::from_columns(&basis))?;
    let compressed = compress(a, x.matrix())?;
    let certificate = RangeCertificate::evaluate_at(&compressed, u0, &cert.point)?;
    Ok(CompressionInclusion { compressed, certificate })
}

/// Plants a rank-k certificate at `point` inside an otherwise random tuple.
#[cfg(test)]
pub(crate) fn planted_tuple(
    m: usize,
    n: usize,
    k: usize,
    point: &[f64],
    seed: u64,
) -> (HermitianTuple, Isometry) {
    use crate::random::random_hermitian;
    let u = random_isometry(n, k, derive_seed(seed, 901));
    let um = u.matrix();
    let mats: Vec<HermitianMatrix> = (0..m)
        .map(|j| {
            let b = random_hermitian(n, derive_seed(seed, j as u64));
            let inner = um.adjoint_mul(&b.matrix().mul(um));
            let mut corr = ComplexMatrix::zeros(k, k);
            for i in 0..k {
                corr.set(i, i, C64::new(point[j], 0.0));
            }
            let fix = um.mul(&corr.sub(&inner)).mul(&um.adjoint());
            HermitianMatrix::symmetrize(b.matrix().add(&fix))
        })
        .collect();
    (HermitianTuple::new(mats).unwrap(), u)
}
