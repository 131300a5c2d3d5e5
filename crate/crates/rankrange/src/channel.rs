//! Kraus channels and their Knill-Laflamme Hermitian tuples.

use crate::error::{Error, Result};
use crate::hermitian::{hermitian_split, HermitianMatrix, HermitianTuple};
use crate::matrix::ComplexMatrix;

/// Max allowed ||sum T_j* T_j - I||_F for a trace-preserving channel.
pub const TRACE_PRESERVING_TOL: f64 = 1e-10;

/// Quantum channel given by Kraus operators T_1, ..., T_r on C^n.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    n: usize,
    kraus: Vec<ComplexMatrix>,
}

/// Outcome of the trace-preservation check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrausValidation {
    pub trace_preserving: bool,
    pub residual: f64,
}

impl KrausChannel {
    /// Validated constructor: square operators of one size, trace preserving.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let ch = Self::new_unchecked(kraus)?;
        let v = validate_kraus(&ch);
        if !v.trace_preserving {
            return Err(Error::Domain(format!(
                "channel is not trace preserving: ||sum T*T - I||_F = {:.3e}",
                v.residual
            )));
        }
        Ok(ch)
    }

    /// Shape-checked constructor that skips the trace-preservation test.
    pub fn new_unchecked(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Shape("channel needs at least one Kraus operator".into()));
        }
        let n = kraus[0].rows;
        for t in &kraus {
            if t.rows != n || t.cols != n {
                return Err(Error::Shape(format!(
                    "Kraus operators must all be {n}x{n}, got {}x{}",
                    t.rows, t.cols
                )));
            }
            t.check_finite()?;
        }
        Ok(KrausChannel { n, kraus })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of Kraus operators r.
    pub fn r(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Drops operators with Frobenius norm at or below `tol`.
    pub fn drop_degenerate(&self, tol: f64) -> Result<KrausChannel> {
        let kept: Vec<ComplexMatrix> = self
            .kraus
            .iter()
            .filter(|t| t.frobenius_norm() > tol)
            .cloned()
            .collect();
        KrausChannel::new_unchecked(kept)
    }
}

/// Measures ||sum_j T_j* T_j - I||_F.
pub fn validate_kraus(ch: &KrausChannel) -> KrausValidation {
    let mut acc = ComplexMatrix::zeros(ch.n, ch.n);
    for t in &ch.kraus {
        acc = acc.add(&t.adjoint_mul(t));
    }
    let residual = acc.sub(&ComplexMatrix::identity(ch.n)).frobenius_norm();
    KrausValidation { trace_preserving: residual <= TRACE_PRESERVING_TOL, residual }
}

/// Applies the channel: X -> sum_j T_j X T_j*.
pub fn apply_channel(ch: &KrausChannel, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.rows != ch.n || x.cols != ch.n {
        return Err(Error::Shape(format!(
            "state must be {0}x{0}, got {1}x{2}",
            ch.n, x.rows, x.cols
        )));
    }
    let mut acc = ComplexMatrix::zeros(ch.n, ch.n);
    for t in &ch.kraus {
        acc = acc.add(&t.mul(x).mul(&t.adjoint()));
    }
    Ok(acc)
}

/// Which Hermitian component of T_i* T_j a tuple member carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductPart {
    Diagonal,
    Herm,
    Skew,
}

/// Label tying one tuple member back to its Kraus product (0-based i <= j).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KlLabel {
    pub i: usize,
    pub j: usize,
    pub part: ProductPart,
}

/// The r^2 Hermitian matrices encoding all products T_i* T_j.
#[derive(Clone, Debug)]
pub struct KlTuple {
    pub tuple: HermitianTuple,
    pub labels: Vec<KlLabel>,
}

/// Splits every product T_i* T_j into Hermitian components: first the r
/// diagonal products T_i* T_i, then for each i < j the Hermitian and skew
/// parts of T_i* T_j. A rank-k code for the channel exists exactly when the
/// joint rank-k range of this tuple is nonempty.
pub fn kl_tuple(ch: &KrausChannel) -> Result<KlTuple> {
    let r = ch.r();
    let mut matrices = Vec::with_capacity(r * r);
    let mut labels = Vec::with_capacity(r * r);
    for i in 0..r {
        let prod = ch.kraus[i].adjoint_mul(&ch.kraus[i]);
        matrices.push(HermitianMatrix::symmetrize(prod));
        labels.push(KlLabel { i, j: i, part: ProductPart::Diagonal });
    }
    for i in 0..r {
        for j in (i + 1)..r {
            let prod = ch.kraus[i].adjoint_mul(&ch.kraus[j]);
            let (h, k) = hermitian_split(&prod)?;
            matrices.push(h);
            labels.push(KlLabel { i, j, part: ProductPart::Herm });
            matrices.push(k);
            labels.push(KlLabel { i, j, part: ProductPart::Skew });
        }
    }
    Ok(KlTuple { tuple: HermitianTuple::new(matrices)?, labels })
}
