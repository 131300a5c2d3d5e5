//! Joint rank-k numerical ranges of Hermitian matrix tuples.
//!
//! A point a in R^m lies in the rank-k joint range of (A_1, ..., A_m) when
//! some isometry U with k orthonormal columns compresses every A_j to the
//! scalar block a_j I_k. This crate computes certificates for such points,
//! constructs them outright in high dimension, bounds the set from outside by
//! eigenvalue half-spaces, walks star-shaped segments inside it, and applies
//! the same machinery to quantum error-correcting code search for Kraus
//! channels.

pub mod error;
pub mod matrix;
pub mod hermitian;
pub mod eigen;
pub mod orth;
pub mod random;
pub mod channel;
pub mod range;
pub mod simplex;
pub mod tverberg;
pub mod geometry;
pub mod qec;
pub mod formats;
pub mod cli;

pub use error::{Error, Result};
pub use matrix::{C64, ComplexMatrix};
pub use hermitian::{compress, hermitian_split, HermitianMatrix, HermitianTuple, Isometry};
pub use eigen::{herm_eig, kth_largest_eigenvalue, EigenDecomposition};
pub use orth::{mgs_orthonormalize, orth_complement};
pub use channel::{apply_channel, kl_tuple, validate_kraus, KlTuple, KrausChannel};
pub use range::{
    compression_inclusion_check, drop_coordinate, membership_solve, membership_solve_target,
    reduce_tuple, shrink_rank, single_matrix_interval, transform_certificate, transform_tuple,
    translate_tuple, verify_point, Membership, PointCheck, RangeCertificate, RealTransform,
    SolveOptions, Target,
};
pub use tverberg::{build_chain, construct_point, tverberg_partition, TverbergPartition};
pub use geometry::{
    check_against_halfspaces, outer_halfspaces, sample_inner, segment_witness, sphere_family,
    star_segment_rank_k, star_segment_rank_one, star_segment_rank_one_traced, Halfspace,
    HalfspaceCheck, OuterApproximation, Rank1Branch, SphereFamily,
};
pub use qec::{
    builtin_channel, builtin_channel_names, find_code, verify_code, CodeCertificate, CodeCheck,
    CodeSearch,
};
