//! Python bindings for the rankrange library.
//!
//! Matrices cross the boundary as `(re, im)` pairs of nested float lists.
//! The wrapper classes mirror the Rust types: tuples of Hermitian matrices,
//! isometry witnesses, range certificates, Kraus channels, and code
//! certificates.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rankrange::{
    builtin_channel, builtin_channel_names, herm_eig, kl_tuple, kth_largest_eigenvalue,
    membership_solve, sample_inner, single_matrix_interval, sphere_family, star_segment_rank_k,
    verify_code, verify_point, C64, CodeCertificate, CodeCheck, CodeSearch, ComplexMatrix,
    HermitianMatrix, HermitianTuple, Isometry, Membership, RangeCertificate, SolveOptions,
    SphereFamily,
};

type Parts = (Vec<Vec<f64>>, Vec<Vec<f64>>);

fn err(e: rankrange::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn complex_from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> PyResult<ComplexMatrix> {
    let rows = re.len();
    if rows == 0 || im.len() != rows {
        return Err(PyValueError::new_err("re and im need the same nonzero row count"));
    }
    let cols = re[0].len();
    if cols == 0 || re.iter().any(|r| r.len() != cols) || im.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("re and im must be rectangular with equal shapes"));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| C64::new(re[i][j], im[i][j])))
}

fn parts_from_complex(m: &ComplexMatrix) -> Parts {
    let re = (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).re).collect()).collect();
    let im = (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).im).collect()).collect();
    (re, im)
}

fn solve_options(restarts: usize, max_iters: usize, tol: f64, seed: u64) -> SolveOptions {
    SolveOptions { restarts, max_iters, tol, seed, ..SolveOptions::default() }
}

/// Tuple of same-size Hermitian matrices, the object whose rank-k range
/// everything else certifies.
#[pyclass(name = "HermitianTuple", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyHermitianTuple {
    inner: HermitianTuple,
}

#[pymethods]
impl PyHermitianTuple {
    #[new]
    fn new(matrices: Vec<Parts>) -> PyResult<Self> {
        let mats = matrices
            .iter()
            .map(|(re, im)| {
                HermitianMatrix::new(complex_from_parts(re, im)?).map_err(err)
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: HermitianTuple::new(mats).map_err(err)? })
    }

    /// Builds a tuple of diagonal matrices, one per list of diagonal entries.
    #[staticmethod]
    fn from_diagonals(diagonals: Vec<Vec<f64>>) -> PyResult<Self> {
        let mats: Vec<HermitianMatrix> =
            diagonals.iter().map(|d| HermitianMatrix::diagonal(d)).collect();
        Ok(Self { inner: HermitianTuple::new(mats).map_err(err)? })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// The j-th matrix as an (re, im) pair.
    fn matrix(&self, j: usize) -> PyResult<Parts> {
        if j >= self.inner.m() {
            return Err(PyValueError::new_err(format!("index {j} out of range")));
        }
        Ok(parts_from_complex(self.inner.get(j).matrix()))
    }

    fn __repr__(&self) -> String {
        format!("HermitianTuple(m={}, n={})", self.inner.m(), self.inner.n())
    }
}

/// Matrix with orthonormal columns, the witness format of every certificate.
#[pyclass(name = "Isometry", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyIsometry {
    inner: Isometry,
}

#[pymethods]
impl PyIsometry {
    #[new]
    fn new(re: Vec<Vec<f64>>, im: Vec<Vec<f64>>) -> PyResult<Self> {
        let mat = complex_from_parts(&re, &im)?;
        Ok(Self { inner: Isometry::new(mat).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn matrix(&self) -> Parts {
        parts_from_complex(self.inner.matrix())
    }

    fn __repr__(&self) -> String {
        format!("Isometry(n={}, k={})", self.inner.n(), self.inner.k())
    }
}

/// A point of the rank-k range together with its witness and residual.
#[pyclass(name = "Certificate", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate {
    inner: RangeCertificate,
}

#[pymethods]
impl PyCertificate {
    #[getter]
    fn point(&self) -> Vec<f64> {
        self.inner.point.clone()
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn witness(&self) -> PyIsometry {
        PyIsometry { inner: self.inner.witness.clone() }
    }

    fn accepted(&self, tol: f64) -> bool {
        self.inner.accepted(tol)
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(point={:?}, k={}, residual={:.3e})",
            self.inner.point,
            self.inner.k(),
            self.inner.residual
        )
    }
}

/// Outcome of a membership solve: either a certificate within tolerance or
/// the best attempt found.
#[pyclass(name = "Membership", frozen)]
struct PyMembership {
    member: bool,
    certificate: PyCertificate,
    target_residual: f64,
}

#[pymethods]
impl PyMembership {
    #[getter]
    fn member(&self) -> bool {
        self.member
    }

    #[getter]
    fn certificate(&self) -> PyCertificate {
        self.certificate.clone()
    }

    #[getter]
    fn target_residual(&self) -> f64 {
        self.target_residual
    }

    fn __repr__(&self) -> String {
        format!(
            "Membership(member={}, target_residual={:.3e})",
            self.member, self.target_residual
        )
    }
}

impl PyMembership {
    fn from_membership(m: Membership) -> Self {
        match m {
            Membership::Member { certificate, target_residual } => Self {
                member: true,
                certificate: PyCertificate { inner: certificate },
                target_residual,
            },
            Membership::Unresolved { best, best_target_residual } => Self {
                member: false,
                certificate: PyCertificate { inner: best },
                target_residual: best_target_residual,
            },
        }
    }
}

/// Family of 2k x 2k matrices whose rank-k range is the unit sphere of R^3,
/// with closed-form witnesses on the boundary.
#[pyclass(name = "SphereFamily", frozen)]
struct PySphereFamily {
    inner: SphereFamily,
}

#[pymethods]
impl PySphereFamily {
    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn tuple(&self) -> PyHermitianTuple {
        PyHermitianTuple { inner: self.inner.tuple().clone() }
    }

    fn witness(&self, point: Vec<f64>) -> PyResult<PyCertificate> {
        Ok(PyCertificate { inner: self.inner.witness(&point).map_err(err)? })
    }
}

/// Quantum channel given by Kraus operators.
#[pyclass(name = "KrausChannel", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyKrausChannel {
    inner: rankrange::KrausChannel,
}

#[pymethods]
impl PyKrausChannel {
    #[new]
    fn new(kraus: Vec<Parts>) -> PyResult<Self> {
        let ops = kraus
            .iter()
            .map(|(re, im)| complex_from_parts(re, im))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: rankrange::KrausChannel::new(ops).map_err(err)? })
    }

    /// Named noise model with error probability p.
    #[staticmethod]
    fn builtin(name: &str, p: f64) -> PyResult<Self> {
        Ok(Self { inner: builtin_channel(name, p).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    fn __repr__(&self) -> String {
        format!("KrausChannel(n={}, r={})", self.inner.n(), self.inner.r())
    }
}

/// Code subspace basis with its scalar compression matrix and residual.
#[pyclass(name = "CodeCertificate", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCodeCertificate {
    inner: CodeCertificate,
}

#[pymethods]
impl PyCodeCertificate {
    #[getter]
    fn basis(&self) -> PyIsometry {
        PyIsometry { inner: self.inner.basis.clone() }
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    fn gamma(&self) -> Parts {
        parts_from_complex(&self.inner.gamma)
    }

    fn __repr__(&self) -> String {
        format!(
            "CodeCertificate(n={}, k={}, residual={:.3e})",
            self.inner.basis.n(),
            self.inner.basis.k(),
            self.inner.residual
        )
    }
}

/// Accept/reject decision for a candidate code subspace.
#[pyclass(name = "CodeCheck", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCodeCheck {
    inner: CodeCheck,
}

#[pymethods]
impl PyCodeCheck {
    #[getter]
    fn accepted(&self) -> bool {
        self.inner.accepted
    }

    #[getter]
    fn tol(&self) -> f64 {
        self.inner.tol
    }

    #[getter]
    fn certificate(&self) -> PyCodeCertificate {
        PyCodeCertificate { inner: self.inner.certificate.clone() }
    }
}

/// Outcome of searching a channel for a rank-k code.
#[pyclass(name = "CodeSearch", frozen)]
struct PyCodeSearch {
    inner: CodeSearch,
}

#[pymethods]
impl PyCodeSearch {
    #[getter]
    fn found(&self) -> bool {
        self.inner.check.accepted
    }

    #[getter]
    fn check(&self) -> PyCodeCheck {
        PyCodeCheck { inner: self.inner.check.clone() }
    }

    #[getter]
    fn family_size(&self) -> usize {
        self.inner.family_size
    }

    #[getter]
    fn reduced_size(&self) -> usize {
        self.inner.reduced_size
    }

    #[getter]
    fn via_construction(&self) -> bool {
        self.inner.via_construction
    }

    fn __repr__(&self) -> String {
        format!(
            "CodeSearch(found={}, residual={:.3e})",
            self.inner.check.accepted, self.inner.check.certificate.residual
        )
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
#[pyfunction]
#[pyo3(name = "eigenvalues")]
fn py_eigenvalues(re: Vec<Vec<f64>>, im: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let a = HermitianMatrix::new(complex_from_parts(&re, &im)?).map_err(err)?;
    Ok(herm_eig(&a).map_err(err)?.values)
}

#[pyfunction]
#[pyo3(name = "kth_largest_eigenvalue")]
fn py_kth_largest_eigenvalue(re: Vec<Vec<f64>>, im: Vec<Vec<f64>>, k: usize) -> PyResult<f64> {
    let a = HermitianMatrix::new(complex_from_parts(&re, &im)?).map_err(err)?;
    kth_largest_eigenvalue(&a, k).map_err(err)
}

/// Rank-k range of one Hermitian matrix as (lo, hi), or None when empty.
#[pyfunction]
#[pyo3(name = "single_matrix_interval")]
fn py_single_matrix_interval(
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    k: usize,
) -> PyResult<Option<(f64, f64)>> {
    let a = HermitianMatrix::new(complex_from_parts(&re, &im)?).map_err(err)?;
    let range = single_matrix_interval(&a, k).map_err(err)?;
    Ok(range.interval.map(|w| (w.lo, w.hi)))
}

/// Multi-start search for an isometry certifying the exact point `target`.
#[pyfunction]
#[pyo3(name = "membership_solve")]
#[pyo3(signature = (tuple, target, k, *, restarts = 50, max_iters = 500, tol = 1e-8, seed = 0))]
fn py_membership_solve(
    tuple: &PyHermitianTuple,
    target: Vec<f64>,
    k: usize,
    restarts: usize,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> PyResult<PyMembership> {
    let opts = solve_options(restarts, max_iters, tol, seed);
    let m = membership_solve(&tuple.inner, &target, k, &opts).map_err(err)?;
    Ok(PyMembership::from_membership(m))
}

/// Deterministic interior point when n >= (k - 1)(m + 1)^2.
#[pyfunction]
#[pyo3(name = "construct_point")]
fn py_construct_point(tuple: &PyHermitianTuple, k: usize) -> PyResult<PyCertificate> {
    Ok(PyCertificate { inner: rankrange::construct_point(&tuple.inner, k).map_err(err)? })
}

/// Point certified by the witness plus the accept decision at `tol`.
#[pyfunction]
#[pyo3(name = "verify_point")]
#[pyo3(signature = (tuple, witness, tol = 1e-8))]
fn py_verify_point(
    tuple: &PyHermitianTuple,
    witness: &PyIsometry,
    tol: f64,
) -> PyResult<(bool, PyCertificate)> {
    let check = verify_point(&tuple.inner, &witness.inner, tol).map_err(err)?;
    Ok((check.accepted, PyCertificate { inner: check.certificate }))
}

/// Residual of a witness against a fixed claimed point.
#[pyfunction]
#[pyo3(name = "evaluate_at")]
fn py_evaluate_at(
    tuple: &PyHermitianTuple,
    witness: &PyIsometry,
    point: Vec<f64>,
) -> PyResult<PyCertificate> {
    let cert = RangeCertificate::evaluate_at(&tuple.inner, witness.inner.clone(), &point)
        .map_err(err)?;
    Ok(PyCertificate { inner: cert })
}

/// Eigenvalue half-spaces containing the rank-k range, as (normal, bound)
/// pairs with normal . a <= bound.
#[pyfunction]
#[pyo3(name = "outer_halfspaces")]
#[pyo3(signature = (tuple, k, directions = 0, seed = 0))]
fn py_outer_halfspaces(
    tuple: &PyHermitianTuple,
    k: usize,
    directions: usize,
    seed: u64,
) -> PyResult<Vec<(Vec<f64>, f64)>> {
    let outer = rankrange::outer_halfspaces(&tuple.inner, k, directions, seed).map_err(err)?;
    Ok(outer.halfspaces.into_iter().map(|h| (h.normal, h.bound)).collect())
}

/// Free-descent samples of the rank-k range.
#[pyfunction]
#[pyo3(name = "sample_inner")]
#[pyo3(signature = (tuple, k, count, *, restarts = 50, max_iters = 500, tol = 1e-8, seed = 0))]
fn py_sample_inner(
    tuple: &PyHermitianTuple,
    k: usize,
    count: usize,
    restarts: usize,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> PyResult<Vec<PyCertificate>> {
    let opts = solve_options(restarts, max_iters, tol, seed);
    let certs = sample_inner(&tuple.inner, k, count, &opts).map_err(err)?;
    Ok(certs.into_iter().map(|inner| PyCertificate { inner }).collect())
}

/// Certificate for t * tip + (1 - t) * center given a high-rank center.
#[pyfunction]
#[pyo3(name = "star_segment_rank_k")]
fn py_star_segment_rank_k(
    tuple: &PyHermitianTuple,
    tip: &PyCertificate,
    center: &PyCertificate,
    t: f64,
) -> PyResult<PyCertificate> {
    let cert =
        star_segment_rank_k(&tuple.inner, &tip.inner, &center.inner, t).map_err(err)?;
    Ok(PyCertificate { inner: cert })
}

#[pyfunction]
#[pyo3(name = "sphere_family")]
fn py_sphere_family(k: usize) -> PyResult<PySphereFamily> {
    Ok(PySphereFamily { inner: sphere_family(k).map_err(err)? })
}

/// Hermitian tuple whose rank-k range decides code existence for the channel.
#[pyfunction]
#[pyo3(name = "kl_tuple")]
fn py_kl_tuple(channel: &PyKrausChannel) -> PyResult<PyHermitianTuple> {
    Ok(PyHermitianTuple { inner: kl_tuple(&channel.inner).map_err(err)?.tuple })
}

/// Searches a channel for a rank-k code subspace.
#[pyfunction]
#[pyo3(name = "find_code")]
#[pyo3(signature = (channel, k, *, restarts = 50, max_iters = 500, tol = 1e-8, seed = 0))]
fn py_find_code(
    channel: &PyKrausChannel,
    k: usize,
    restarts: usize,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> PyResult<PyCodeSearch> {
    let opts = solve_options(restarts, max_iters, tol, seed);
    Ok(PyCodeSearch { inner: rankrange::find_code(&channel.inner, k, &opts).map_err(err)? })
}

/// Checks a candidate basis against the channel's product family.
#[pyfunction]
#[pyo3(name = "verify_code")]
#[pyo3(signature = (channel, basis, tol = 1e-8))]
fn py_verify_code(
    channel: &PyKrausChannel,
    basis: &PyIsometry,
    tol: f64,
) -> PyResult<PyCodeCheck> {
    Ok(PyCodeCheck { inner: verify_code(&channel.inner, &basis.inner, tol).map_err(err)? })
}

#[pyfunction]
#[pyo3(name = "builtin_channel_names")]
fn py_builtin_channel_names() -> Vec<String> {
    builtin_channel_names().iter().map(|s| s.to_string()).collect()
}

#[pymodule]
fn rankrange_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHermitianTuple>()?;
    m.add_class::<PyIsometry>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyMembership>()?;
    m.add_class::<PySphereFamily>()?;
    m.add_class::<PyKrausChannel>()?;
    m.add_class::<PyCodeCertificate>()?;
    m.add_class::<PyCodeCheck>()?;
    m.add_class::<PyCodeSearch>()?;
    m.add_function(wrap_pyfunction!(py_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(py_kth_largest_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(py_single_matrix_interval, m)?)?;
    m.add_function(wrap_pyfunction!(py_membership_solve, m)?)?;
    m.add_function(wrap_pyfunction!(py_construct_point, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_point, m)?)?;
    m.add_function(wrap_pyfunction!(py_evaluate_at, m)?)?;
    m.add_function(wrap_pyfunction!(py_outer_halfspaces, m)?)?;
    m.add_function(wrap_pyfunction!(py_sample_inner, m)?)?;
    m.add_function(wrap_pyfunction!(py_star_segment_rank_k, m)?)?;
    m.add_function(wrap_pyfunction!(py_sphere_family, m)?)?;
    m.add_function(wrap_pyfunction!(py_kl_tuple, m)?)?;
    m.add_function(wrap_pyfunction!(py_find_code, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_code, m)?)?;
    m.add_function(wrap_pyfunction!(py_builtin_channel_names, m)?)?;
    Ok(())
}
