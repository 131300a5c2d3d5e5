//! Error-correcting code search and verification for Kraus channels.
//!
//! A rank-k code for a channel with Kraus operators T_1..T_r is an n x k
//! isometry U with every compression U* T_i* T_j U equal to a scalar block
//! gamma_ij I_k. Finding one is a joint rank-k range query on the product
//! family from [`kl_tuple`], which is how [`find_code`] goes about it.

use crate::channel::{kl_tuple, KrausChannel};
use crate::error::{Error, Result};
use crate::hermitian::Isometry;
use crate::matrix::{C64, ComplexMatrix};
use crate::range::{membership_solve_target, reduce_tuple, Membership, SolveOptions, Target};
use crate::tverberg::{construct_point, MAX_CHAIN_LEN};

/// Kraus operators whose Frobenius norm falls below this times the largest
/// one are dropped before the product family is formed.
const KRAUS_DROP_TOL: f64 = 1e-14;
/// Relative cutoff for discarding linearly dependent product matrices.
const REDUCTION_TOL: f64 = 1e-10;

/// Knill-Laflamme data for a candidate code subspace.
#[derive(Clone, Debug)]
pub struct CodeCertificate {
    /// Orthonormal basis of the candidate subspace, one column per codeword.
    pub basis: Isometry,
    /// r x r matrix with U* T_i* T_j U = gamma_ij I_k at an exact code.
    pub gamma: ComplexMatrix,
    /// Largest Frobenius deviation of any compressed product from its
    /// scalar block.
    pub residual: f64,
}

/// Outcome of checking a basis against a channel.
#[derive(Clone, Debug)]
pub struct CodeCheck {
    pub certificate: CodeCertificate,
    pub tol: f64,
    pub accepted: bool,
}

/// Outcome of searching a channel for a rank-k code.
#[derive(Clone, Debug)]
pub struct CodeSearch {
    pub check: CodeCheck,
    /// Product matrices in the full family, r^2 of them.
    pub family_size: usize,
    /// Independent directions kept after dropping dependent products.
    pub reduced_size: usize,
    /// True when the deterministic convex-position construction produced
    /// the basis, false when the descent solver did.
    pub via_construction: bool,
}

/// Compresses every product T_i* T_j to the subspace spanned by `basis` and
/// measures how far each block is from the scalar matrix that matches its
/// trace. The basis is accepted when the worst deviation stays within `tol`.
pub fn verify_code(ch: &KrausChannel, basis: &Isometry, tol: f64) -> Result<CodeCheck> {
    if basis.n() != ch.n() {
        return Err(Error::Shape(format!(
            "basis lives in C^{} but the channel acts on C^{}",
            basis.n(),
            ch.n()
        )));
    }
    let k = basis.k();
    let u = basis.matrix();
    let r = ch.r();
    let scale = C64::new(1.0 / k as f64, 0.0);
    let mut gamma = ComplexMatrix::zeros(r, r);
    let mut residual = 0.0f64;
    for i in 0..r {
        for j in i..r {
            let prod = ch.kraus()[i].adjoint_mul(&ch.kraus()[j]);
            let block = u.adjoint_mul(&prod.mul(u));
            let g = block.trace() * scale;
            gamma.set(i, j, g);
            gamma.set(j, i, g.conj());
            let dev = block.sub(&ComplexMatrix::identity(k).scale(g)).frobenius_norm();
            residual = residual.max(dev);
        }
    }
    let accepted = residual <= tol;
    Ok(CodeCheck { certificate: CodeCertificate { basis: basis.clone(), gamma, residual }, tol, accepted })
}

/// Searches for a rank-k code. Degenerate Kraus operators are dropped, the
/// product family is thinned to independent directions, and the basis comes
/// from the guaranteed construction when the dimension bound allows it and
/// from the multi-start descent solver otherwise. The result is re-verified
/// against the channel either way, so `check.accepted` is an honest answer.
pub fn find_code(ch: &KrausChannel, k: usize, opts: &SolveOptions) -> Result<CodeSearch> {
    let ch = ch.drop_degenerate(KRAUS_DROP_TOL)?;
    let n = ch.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("code rank k = {k} out of range for n = {n}")));
    }
    let kl = kl_tuple(&ch)?;
    let reduction = reduce_tuple(&kl.tuple, REDUCTION_TOL)?;
    let reduced = &reduction.independent;
    let m = reduced.m();
    let chain = (m + 1) * (k - 1) + 1;
    let constructible =
        k == 1 || (n >= (k - 1) * (m + 1) * (m + 1) && chain <= MAX_CHAIN_LEN);
    let mut basis = None;
    let mut via_construction = false;
    if constructible {
        if let Ok(cert) = construct_point(reduced, k) {
            basis = Some(cert.witness);
            via_construction = true;
        }
    }
    let basis = match basis {
        Some(b) => b,
        None => match membership_solve_target(reduced, Target::Free, k, opts)? {
            Membership::Member { certificate, .. } => certificate.witness,
            Membership::Unresolved { best, .. } => best.witness,
        },
    };
    let check = verify_code(&ch, &basis, opts.tol)?;
    Ok(CodeSearch { check, family_size: kl.tuple.m(), reduced_size: m, via_construction })
}

/// Names accepted by [`builtin_channel`].
pub fn builtin_channel_names() -> &'static [&'static str] {
    &["bit-flip-1q", "bit-flip-3q", "phase-flip-3q", "depolarizing-1q", "amplitude-damping-1q"]
}

/// Builds one of the named example channels. `p` is the error probability,
/// or the damping rate for amplitude damping, and must lie in [0, 1]. On the
/// three-qubit channels, qubit 1 is the most significant tensor factor.
pub fn builtin_channel(name: &str, p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("channel parameter must lie in [0, 1], got {p}")));
    }
    let kraus = match name {
        "bit-flip-1q" => vec![
            ComplexMatrix::identity(2).scale_re((1.0 - p).sqrt()),
            pauli_x().scale_re(p.sqrt()),
        ],
        "bit-flip-3q" => single_site_errors(&pauli_x(), p),
        "phase-flip-3q" => single_site_errors(&pauli_z(), p),
        "depolarizing-1q" => {
            let w = (p / 4.0).sqrt();
            vec![
                ComplexMatrix::identity(2).scale_re((1.0 - 0.75 * p).sqrt()),
                pauli_x().scale_re(w),
                pauli_y().scale_re(w),
                pauli_z().scale_re(w),
            ]
        }
        "amplitude-damping-1q" => {
            let c = |re: f64| C64::new(re, 0.0);
            vec![
                ComplexMatrix::new(2, 2, vec![c(1.0), c(0.0), c(0.0), c((1.0 - p).sqrt())])?,
                ComplexMatrix::new(2, 2, vec![c(0.0), c(p.sqrt()), c(0.0), c(0.0)])?,
            ]
        }
        other => {
            return Err(Error::Domain(format!(
                "unknown channel '{other}', expected one of {}",
                builtin_channel_names().join(", ")
            )))
        }
    };
    KrausChannel::new(kraus)
}

/// No error with probability 1 - p, otherwise `e` on exactly one of three
/// qubits, each site equally likely.
fn single_site_errors(e: &ComplexMatrix, p: f64) -> Vec<ComplexMatrix> {
    let id = ComplexMatrix::identity(2);
    let w = (p / 3.0).sqrt();
    vec![
        ComplexMatrix::identity(8).scale_re((1.0 - p).sqrt()),
        e.kron(&id).kron(&id).scale_re(w),
        id.kron(e).kron(&id).scale_re(w),
        id.kron(&id.kron(e)).scale_re(w),
    ]
}

fn pauli_x() -> ComplexMatrix {
    let c = |re: f64, im: f64| C64::new(re, im);
    ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
}

fn pauli_y() -> ComplexMatrix {
    let c = |re: f64, im: f64| C64::new(re, im);
    ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
}

fn pauli_z() -> ComplexMatrix {
    let c = |re: f64, im: f64| C64::new(re, im);
    ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::validate_kraus;
    use crate::random::random_isometry;

    fn basis_vector(n: usize, i: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[i] = C64::new(1.0, 0.0);
        v
    }

    fn quick_opts() -> SolveOptions {
        SolveOptions { restarts: 6, seed: 11, ..SolveOptions::default() }
    }

    #[test]
    fn repetition_code_passes_verification_exactly() {
        let ch = builtin_channel("bit-flip-3q", 0.1).unwrap();
        let u = Isometry::new(ComplexMatrix::from_columns(&[
            basis_vector(8, 0),
            basis_vector(8, 7),
        ]))
        .unwrap();
        let check = verify_code(&ch, &u, 1e-10).unwrap();
        assert!(check.accepted);
        assert!(check.certificate.residual <= 1e-14);
        let gamma = &check.certificate.gamma;
        let expect = [0.9, 0.1 / 3.0, 0.1 / 3.0, 0.1 / 3.0];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { expect[i] } else { 0.0 };
                assert!((gamma.get(i, j) - C64::new(want, 0.0)).norm() <= 1e-14);
            }
        }
        assert!((gamma.trace() - C64::new(1.0, 0.0)).norm() <= 1e-14);
    }

    #[test]
    fn adjacent_basis_states_fail_verification() {
        let ch = builtin_channel("bit-flip-3q", 0.1).unwrap();
        let u = Isometry::new(ComplexMatrix::from_columns(&[
            basis_vector(8, 0),
            basis_vector(8, 1),
        ]))
        .unwrap();
        let check = verify_code(&ch, &u, 1e-8).unwrap();
        assert!(!check.accepted);
        // The identity/flip-on-qubit-3 product swaps the two codewords, so
        // its block is sqrt(0.9 * 0.1 / 3) times a permutation.
        assert!(check.certificate.residual >= 0.2);
    }

    #[test]
    fn finds_the_three_qubit_bit_flip_code() {
        let ch = builtin_channel("bit-flip-3q", 0.1).unwrap();
        let search = find_code(&ch, 2, &quick_opts()).unwrap();
        assert_eq!(search.family_size, 16);
        assert_eq!(search.reduced_size, 7);
        assert!(!search.via_construction);
        assert!(search.check.accepted);
        assert!(search.check.certificate.residual <= 1e-8);
    }

    #[test]
    fn unitary_channel_codes_come_from_the_direct_construction() {
        let u = random_isometry(4, 4, 77);
        let ch = KrausChannel::new(vec![u.matrix().clone()]).unwrap();
        let search = find_code(&ch, 2, &quick_opts()).unwrap();
        assert_eq!(search.reduced_size, 1);
        assert!(search.via_construction);
        assert!(search.check.accepted);
        assert!(search.check.certificate.residual <= 1e-9);
    }

    #[test]
    fn no_two_dimensional_code_for_one_qubit_depolarizing() {
        let ch = builtin_channel("depolarizing-1q", 0.3).unwrap();
        let opts = SolveOptions { restarts: 4, seed: 3, ..SolveOptions::default() };
        let search = find_code(&ch, 2, &opts).unwrap();
        assert!(!search.check.accepted);
        assert!(search.check.certificate.residual >= 1e-2);
    }

    #[test]
    fn every_unit_vector_supports_a_rank_one_code() {
        let ch = builtin_channel("amplitude-damping-1q", 0.3).unwrap();
        let search = find_code(&ch, 1, &quick_opts()).unwrap();
        assert!(search.via_construction);
        assert!(search.check.accepted);
        assert!(search.check.certificate.residual <= 1e-12);
        let gamma = &search.check.certificate.gamma;
        assert!((gamma.trace() - C64::new(1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn builtin_channels_are_trace_preserving() {
        for name in builtin_channel_names() {
            for p in [0.0, 0.17, 0.5, 1.0] {
                let ch = builtin_channel(name, p).unwrap();
                let v = validate_kraus(&ch);
                assert!(v.trace_preserving, "{name} at p = {p}");
                assert!(v.residual <= 1e-12, "{name} at p = {p}");
            }
        }
    }

    #[test]
    fn builtin_channel_rejects_unknown_names_and_bad_parameters() {
        assert!(matches!(builtin_channel("swap-2q", 0.1), Err(Error::Domain(_))));
        assert!(matches!(builtin_channel("bit-flip-1q", 1.5), Err(Error::Domain(_))));
        assert!(matches!(builtin_channel("bit-flip-1q", -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn verification_rejects_mismatched_dimensions() {
        let ch = builtin_channel("bit-flip-1q", 0.2).unwrap();
        let u = Isometry::new(ComplexMatrix::from_columns(&[basis_vector(4, 0)])).unwrap();
        assert!(matches!(verify_code(&ch, &u, 1e-8), Err(Error::Shape(_))));
    }
}
