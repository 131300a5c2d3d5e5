//! Hermitian matrices, tuples of them, isometries, and compressions.

use crate::error::{Error, Result};
use crate::matrix::{inner, C64, ComplexMatrix};

/// Max allowed deviation from Hermitian symmetry at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Max allowed ||U*U - I||_F for a matrix used as an isometry.
pub const ISOMETRY_TOL: f64 = 1e-10;

/// Hermitian matrix; the stored data is exactly (M + M*)/2.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    mat: ComplexMatrix,
}

impl HermitianMatrix {
    /// Accepts a square matrix within `HERMITIAN_TOL` of symmetry and re-symmetrizes it.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.rows != mat.cols {
            return Err(Error::Shape(format!(
                "Hermitian matrix must be square, got {}x{}",
                mat.rows, mat.cols
            )));
        }
        mat.check_finite()?;
        let deviation = mat.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation, tol: HERMITIAN_TOL });
        }
        Ok(HermitianMatrix { mat: mat.hermitian_part() })
    }

    /// Symmetrizes unconditionally; for callers that built (M + M*)/2 themselves.
    pub fn symmetrize(mat: ComplexMatrix) -> Self {
        assert_eq!(mat.rows, mat.cols);
        HermitianMatrix { mat: mat.hermitian_part() }
    }

    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        let data = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(ComplexMatrix::new(n, n, data)?)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        HermitianMatrix {
            mat: ComplexMatrix::from_fn(n, n, |i, j| {
                if i == j { C64::new(values[i], 0.0) } else { C64::new(0.0, 0.0) }
            }),
        }
    }

    pub fn n(&self) -> usize {
        self.mat.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Real quadratic form <x, A x>.
    pub fn quadratic_form(&self, x: &[C64]) -> f64 {
        inner(x, &self.mat.matvec(x)).re
    }
}

/// Finite tuple (A_1, ..., A_m) of Hermitian matrices of common size.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianTuple {
    matrices: Vec<HermitianMatrix>,
}

impl HermitianTuple {
    pub fn new(matrices: Vec<HermitianMatrix>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::Shape("tuple needs at least one matrix".into()));
        }
        let n = matrices[0].n();
        if matrices.iter().any(|a| a.n() != n) {
            return Err(Error::Shape("tuple matrices must share one size".into()));
        }
        Ok(HermitianTuple { matrices })
    }

    /// Number of matrices m.
    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    /// Common matrix size n.
    pub fn n(&self) -> usize {
        self.matrices[0].n()
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    pub fn get(&self, j: usize) -> &HermitianMatrix {
        &self.matrices[j]
    }

    /// Real linear combination sum_j c_j A_j.
    pub fn linear_combination(&self, c: &[f64]) -> HermitianMatrix {
        assert_eq!(c.len(), self.m());
        let mut acc = ComplexMatrix::zeros(self.n(), self.n());
        for (cj, a) in c.iter().zip(&self.matrices) {
            if *cj != 0.0 {
                acc = acc.add(&a.matrix().scale_re(*cj));
            }
        }
        HermitianMatrix { mat: acc.hermitian_part() }
    }

    /// Componentwise translate: A_j - mu_j I.
    pub fn translate(&self, mu: &[f64]) -> Result<HermitianTuple> {
        if mu.len() != self.m() {
            return Err(Error::Shape(format!(
                "offset length {} does not match tuple size {}",
                mu.len(),
                self.m()
            )));
        }
        let n = self.n();
        let matrices = self
            .matrices
            .iter()
            .zip(mu)
            .map(|(a, &s)| {
                let mut m = a.matrix().clone();
                for i in 0..n {
                    let d = m.get(i, i);
                    m.set(i, i, d - C64::new(s, 0.0));
                }
                HermitianMatrix { mat: m }
            })
            .collect();
        Ok(HermitianTuple { matrices })
    }

    /// Point (<x, A_1 x>, ..., <x, A_m x>) traced out by a unit vector.
    pub fn point_of_vector(&self, x: &[C64]) -> Vec<f64> {
        self.matrices.iter().map(|a| a.quadratic_form(x)).collect()
    }
}

/// Residual ||U*U - I||_F measuring how far columns are from orthonormal.
pub fn isometry_residual(u: &ComplexMatrix) -> f64 {
    let gram = u.adjoint_mul(u);
    gram.sub(&ComplexMatrix::identity(u.cols)).frobenius_norm()
}

/// Matrix with orthonormal columns, validated at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    mat: ComplexMatrix,
}

impl Isometry {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.cols == 0 || mat.cols > mat.rows {
            return Err(Error::Shape(format!(
                "isometry needs 1 <= k <= n, got {}x{}",
                mat.rows, mat.cols
            )));
        }
        mat.check_finite()?;
        let residual = isometry_residual(&mat);
        if residual > ISOMETRY_TOL {
            return Err(Error::NotIsometry { residual, tol: ISOMETRY_TOL });
        }
        Ok(Isometry { mat })
    }

    /// Ambient dimension n.
    pub fn n(&self) -> usize {
        self.mat.rows
    }

    /// Number of columns k.
    pub fn k(&self) -> usize {
        self.mat.cols
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Single-column isometry from a unit vector.
    pub fn from_unit_vector(x: &[C64]) -> Result<Self> {
        Isometry::new(ComplexMatrix::from_columns(&[x.to_vec()]))
    }

    /// Drops the trailing column, keeping the leading k-1.
    pub fn shrink(&self) -> Result<Self> {
        if self.k() < 2 {
            return Err(Error::Shape("cannot shrink a single-column isometry".into()));
        }
        Ok(Isometry { mat: self.mat.leading_columns(self.k() - 1) })
    }
}

/// Splits an arbitrary square matrix T into Hermitian H1, H2 with T = H1 + i H2.
pub fn hermitian_split(t: &ComplexMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    if t.rows != t.cols {
        return Err(Error::Shape(format!("need a square matrix, got {}x{}", t.rows, t.cols)));
    }
    t.check_finite()?;
    let h1 = t.hermitian_part();
    // (T - T*) / (2i) = -i/2 (T - T*)
    let h2 = t.sub(&t.adjoint()).scale(C64::new(0.0, -0.5));
    Ok((HermitianMatrix { mat: h1 }, HermitianMatrix { mat: h2.hermitian_part() }))
}

/// Compression (U*A_1 U, ..., U*A_m U), symmetrized exactly.
pub fn compress(a: &HermitianTuple, u: &ComplexMatrix) -> Result<HermitianTuple> {
    if u.rows != a.n() {
        return Err(Error::Shape(format!(
            "compression rows {} do not match tuple size {}",
            u.rows,
            a.n()
        )));
    }
    let residual = isometry_residual(u);
    if residual > ISOMETRY_TOL {
        return Err(Error::NotIsometry { residual, tol: ISOMETRY_TOL });
    }
    let matrices = a
        .matrices()
        .iter()
        .map(|aj| HermitianMatrix::symmetrize(u.adjoint_mul(&aj.matrix().mul(u))))
        .collect();
    HermitianTuple::new(matrices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn split_reconstructs_original() {
        let t = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.25), c(-2.0, 4.0)],
        )
        .unwrap();
        let (h1, h2) = hermitian_split(&t).unwrap();
        assert!(h1.matrix().hermitian_deviation() < 1e-15);
        assert!(h2.matrix().hermitian_deviation() < 1e-15);
        let rebuilt = h1.matrix().add(&h2.matrix().scale(c(0.0, 1.0)));
        assert!(rebuilt.sub(&t).max_abs() < 1e-15);
    }

    #[test]
    fn near_hermitian_accepted_and_symmetrized() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(0.5, 0.5 + 4e-13), c(0.5, -0.5), c(2.0, 0.0)],
        )
        .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert!(h.matrix().hermitian_deviation() == 0.0);
    }

    #[test]
    fn far_from_hermitian_rejected() {
        let m = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)])
            .unwrap();
        match HermitianMatrix::new(m) {
            Err(Error::NotHermitian { deviation, .. }) => assert!((deviation - 1.0).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn compress_rejects_non_isometry() {
        let a = HermitianTuple::new(vec![HermitianMatrix::diagonal(&[1.0, 2.0])]).unwrap();
        let u = ComplexMatrix::new(2, 1, vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(compress(&a, &u), Err(Error::NotIsometry { .. })));
    }

    #[test]
    fn compress_by_eigvector_columns_is_diagonal() {
        let a = HermitianTuple::new(vec![HermitianMatrix::diagonal(&[1.0, 2.0, 3.0])]).unwrap();
        let u = ComplexMatrix::from_columns(&[
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        let b = compress(&a, &u).unwrap();
        assert_eq!(b.n(), 2);
        assert_eq!(b.get(0).matrix().get(0, 0), c(1.0, 0.0));
        assert_eq!(b.get(0).matrix().get(1, 1), c(3.0, 0.0));
    }

    #[test]
    fn translate_shifts_diagonal_points() {
        let a = HermitianTuple::new(vec![
            HermitianMatrix::diagonal(&[1.0, 2.0]),
            HermitianMatrix::diagonal(&[0.0, -1.0]),
        ])
        .unwrap();
        let t = a.translate(&[1.0, -2.0]).unwrap();
        let x = vec![c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(t.point_of_vector(&x), vec![0.0, 2.0]);
    }
}
