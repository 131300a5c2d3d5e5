//! JSON interchange types for matrices, tuples, channels, and certificates.
//!
//! Complex matrices travel as separate real and imaginary row-major float
//! grids under `"re"` and `"im"`, with `"n"` holding the row count. All
//! conversions back into library types run the owning constructors, so a
//! file that parses but violates an invariant (ragged rows, a non-Hermitian
//! tuple entry, a channel that fails trace preservation) is rejected here.

use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, OuterApproximation};
use crate::hermitian::{HermitianMatrix, HermitianTuple, Isometry};
use crate::matrix::{C64, ComplexMatrix};
use crate::qec::CodeCertificate;
use crate::range::RangeCertificate;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    /// Row count; columns are inferred from the grid width.
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(mat: &ComplexMatrix) -> MatrixJson {
        let grid = |pick: fn(C64) -> f64| {
            (0..mat.rows)
                .map(|i| (0..mat.cols).map(|j| pick(mat.get(i, j))).collect())
                .collect()
        };
        MatrixJson { n: mat.rows, re: grid(|v| v.re), im: grid(|v| v.im) }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.n || self.im.len() != self.n {
            return Err(Error::Shape(format!(
                "matrix declares {} rows but carries {} re rows and {} im rows",
                self.n,
                self.re.len(),
                self.im.len()
            )));
        }
        let cols = self.re.first().map_or(0, Vec::len);
        if cols == 0 {
            return Err(Error::Shape("matrix has no columns".into()));
        }
        let mut data = Vec::with_capacity(self.n * cols);
        for (re_row, im_row) in self.re.iter().zip(&self.im) {
            if re_row.len() != cols || im_row.len() != cols {
                return Err(Error::Shape(format!(
                    "ragged matrix rows: expected width {cols}, found {} and {}",
                    re_row.len(),
                    im_row.len()
                )));
            }
            data.extend(re_row.iter().zip(im_row).map(|(&re, &im)| C64::new(re, im)));
        }
        let mat = ComplexMatrix::new(self.n, cols, data)?;
        mat.check_finite()?;
        Ok(mat)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleJson {
    pub matrices: Vec<MatrixJson>,
}

impl TupleJson {
    pub fn from_tuple(a: &HermitianTuple) -> TupleJson {
        TupleJson {
            matrices: a.matrices().iter().map(|h| MatrixJson::from_matrix(h.matrix())).collect(),
        }
    }

    pub fn to_tuple(&self) -> Result<HermitianTuple> {
        let matrices = self
            .matrices
            .iter()
            .map(|m| HermitianMatrix::new(m.to_matrix()?))
            .collect::<Result<Vec<_>>>()?;
        HermitianTuple::new(matrices)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelJson {
    pub n: usize,
    pub kraus: Vec<MatrixJson>,
}

impl ChannelJson {
    pub fn from_channel(ch: &KrausChannel) -> ChannelJson {
        ChannelJson { n: ch.n(), kraus: ch.kraus().iter().map(MatrixJson::from_matrix).collect() }
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        let kraus = self.kraus.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>()?;
        let ch = KrausChannel::new(kraus)?;
        if ch.n() != self.n {
            return Err(Error::Shape(format!(
                "channel declares n = {} but its Kraus operators are {}x{}",
                self.n,
                ch.n(),
                ch.n()
            )));
        }
        Ok(ch)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub point: Vec<f64>,
    pub k: usize,
    pub residual: f64,
    pub isometry: MatrixJson,
}

impl CertificateJson {
    pub fn from_certificate(cert: &RangeCertificate) -> CertificateJson {
        CertificateJson {
            point: cert.point.clone(),
            k: cert.witness.k(),
            residual: cert.residual,
            isometry: MatrixJson::from_matrix(cert.witness.matrix()),
        }
    }

    pub fn to_certificate(&self) -> Result<RangeCertificate> {
        let witness = Isometry::new(self.isometry.to_matrix()?)?;
        if witness.k() != self.k {
            return Err(Error::Shape(format!(
                "certificate declares k = {} but its isometry has {} columns",
                self.k,
                witness.k()
            )));
        }
        Ok(RangeCertificate { point: self.point.clone(), witness, residual: self.residual })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HalfspaceEntryJson {
    pub c: Vec<f64>,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HalfspaceSetJson {
    pub k: usize,
    pub entries: Vec<HalfspaceEntryJson>,
}

impl HalfspaceSetJson {
    pub fn from_outer(outer: &OuterApproximation) -> HalfspaceSetJson {
        HalfspaceSetJson {
            k: outer.k,
            entries: outer
                .halfspaces
                .iter()
                .map(|h| HalfspaceEntryJson { c: h.normal.clone(), bound: h.bound })
                .collect(),
        }
    }

    pub fn to_outer(&self) -> Result<OuterApproximation> {
        if self.entries.is_empty() {
            return Err(Error::Shape("half-space set has no entries".into()));
        }
        let m = self.entries[0].c.len();
        for e in &self.entries {
            if e.c.len() != m {
                return Err(Error::Shape(format!(
                    "half-space directions mix lengths {m} and {}",
                    e.c.len()
                )));
            }
            if !e.c.iter().all(|v| v.is_finite()) || !e.bound.is_finite() {
                return Err(Error::NonFinite("half-space entry".into()));
            }
        }
        Ok(OuterApproximation {
            k: self.k,
            halfspaces: self
                .entries
                .iter()
                .map(|e| Halfspace { normal: e.c.clone(), bound: e.bound })
                .collect(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeCertificateJson {
    pub k: usize,
    pub residual: f64,
    pub gamma: MatrixJson,
    pub basis: MatrixJson,
}

impl CodeCertificateJson {
    pub fn from_certificate(cert: &CodeCertificate) -> CodeCertificateJson {
        CodeCertificateJson {
            k: cert.basis.k(),
            residual: cert.residual,
            gamma: MatrixJson::from_matrix(&cert.gamma),
            basis: MatrixJson::from_matrix(cert.basis.matrix()),
        }
    }

    pub fn to_certificate(&self) -> Result<CodeCertificate> {
        let basis = Isometry::new(self.basis.to_matrix()?)?;
        if basis.k() != self.k {
            return Err(Error::Shape(format!(
                "code certificate declares k = {} but its basis has {} columns",
                self.k,
                basis.k()
            )));
        }
        Ok(CodeCertificate { basis, gamma: self.gamma.to_matrix()?, residual: self.residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qec::builtin_channel;
    use crate::random::{random_isometry, random_tuple};
    use crate::range::verify_point;

    #[test]
    fn matrix_roundtrip_is_exact() {
        let mat = random_isometry(5, 3, 21).matrix().clone();
        let json = serde_json::to_string(&MatrixJson::from_matrix(&mat)).unwrap();
        let back: MatrixJson = serde_json::from_str(&json).unwrap();
        let restored = back.to_matrix().unwrap();
        assert_eq!(restored.rows, 5);
        assert_eq!(restored.cols, 3);
        assert_eq!(restored.sub(&mat).frobenius_norm(), 0.0);
    }

    #[test]
    fn tuple_roundtrip_preserves_verification() {
        let a = random_tuple(3, 6, 4);
        let u = random_isometry(6, 2, 5);
        let json = serde_json::to_string(&TupleJson::from_tuple(&a)).unwrap();
        let back: TupleJson = serde_json::from_str(&json).unwrap();
        let restored = back.to_tuple().unwrap();
        let before = verify_point(&a, &u, 1e-6).unwrap();
        let after = verify_point(&restored, &u, 1e-6).unwrap();
        assert_eq!(before.certificate.residual, after.certificate.residual);
        assert_eq!(before.certificate.point, after.certificate.point);
    }

    #[test]
    fn channel_roundtrip_and_dimension_check() {
        let ch = builtin_channel("bit-flip-3q", 0.25).unwrap();
        let json = serde_json::to_string(&ChannelJson::from_channel(&ch)).unwrap();
        let back: ChannelJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_channel().unwrap().r(), 4);

        let mut wrong = ChannelJson::from_channel(&ch);
        wrong.n = 4;
        assert!(matches!(wrong.to_channel(), Err(Error::Shape(_))));
    }

    #[test]
    fn ragged_and_mislabeled_matrices_are_rejected() {
        let mut j = MatrixJson::from_matrix(&ComplexMatrix::identity(2));
        j.re[1].pop();
        assert!(matches!(j.to_matrix(), Err(Error::Shape(_))));

        let mut j = MatrixJson::from_matrix(&ComplexMatrix::identity(2));
        j.n = 3;
        assert!(matches!(j.to_matrix(), Err(Error::Shape(_))));

        let mut j = MatrixJson::from_matrix(&ComplexMatrix::identity(2));
        j.im[0][0] = f64::NAN;
        assert!(matches!(j.to_matrix(), Err(Error::NonFinite(_))));
    }

    #[test]
    fn non_hermitian_tuple_entries_are_rejected() {
        let mut j = TupleJson::from_tuple(&random_tuple(2, 3, 9));
        j.matrices[0].re[0][1] += 0.5;
        assert!(matches!(j.to_tuple(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = random_tuple(2, 4, 40);
        let one = serde_json::to_string_pretty(&TupleJson::from_tuple(&a)).unwrap();
        let two = serde_json::to_string_pretty(&TupleJson::from_tuple(&a)).unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn certificate_roundtrip_rejects_rank_mismatch() {
        let a = random_tuple(2, 5, 8);
        let u = random_isometry(5, 2, 3);
        let cert = crate::range::RangeCertificate::evaluate(&a, u).unwrap();
        let mut j = CertificateJson::from_certificate(&cert);
        let back = j.to_certificate().unwrap();
        assert_eq!(back.point, cert.point);
        j.k = 3;
        assert!(matches!(j.to_certificate(), Err(Error::Shape(_))));
    }
}
