//! Exact-arithmetic toolkit for the combinatorics of extended affine Weyl
//! groups and the numerics that sit on top of them.
//!
//! The crate is organized in layers, each usable on its own:
//!
//! * [`rootdatum`] — root data on a cocharacter lattice `Y ≅ Z^rank`:
//!   roots/coroots, the Cartan matrix, the finite Weyl group acting by
//!   integer matrices, dominance.
//! * [`extweyl`] — the extended affine Weyl group `W_ext = W_f ⋉ Y`:
//!   canonical forms, the length function (closed formula and an
//!   independent affine-inversion count), `S_aff`, the length-zero
//!   subgroup Ω, Bruhat and semiinfinite orders, alcoves.
//! * [`kostant`] — the q-Kostant partition function, Kostant's alternating
//!   multiplicity formula with a Freudenthal oracle, Weyl dimensions, and
//!   the stalk/costalk tables built from them.
//! * [`hecke`] — the extended affine Hecke algebra over integer Laurent
//!   polynomials: standard basis, inverses, Bernstein and Wakimoto
//!   elements, braid and commutation identities.
//! * [`stalkcheck`] — orbit-dimension counts and the two-sided
//!   verification of the closed-form periodic Kazhdan–Lusztig family.
//! * [`suites`] — named, reusable verification suites (the same code
//!   backs `siflag verify` and the integration tests).
//! * [`cache`] — optional on-disk persistence for partition-function
//!   memo tables (`SIFLAG_CACHE_DIR`).
//!
//! All arithmetic is exact: `i64`/`i128` lattice arithmetic, arbitrary
//! precision only where dimensions can overflow. No floating point
//! anywhere.

pub mod cache;
pub mod extweyl;
pub mod guide;
pub mod hecke;
pub mod kostant;
pub mod rootdatum;
pub mod stalkcheck;
pub mod suites;

pub use extweyl::ExtAffineElement;
pub use hecke::{HeckeElement, LaurentPolynomial};
pub use kostant::QPolynomial;
pub use rootdatum::{FiniteWeylElement, RootDatum};

/// Crate-wide error type.
///
/// Construction errors (bad Cartan data, non-finite systems) and
/// precondition violations (rank mismatches, non-dominant arguments,
/// formulas applied out of their proven range) are all reported through
/// this enum so callers can match on them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),

    #[error("root system is not of finite type (orbit generation exceeded {0} roots)")]
    NotFiniteType(usize),

    #[error("rank mismatch: expected vector of length {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("operation `{0}` requires a semisimple root datum (simple coroots must span Y up to finite index)")]
    NotSemisimple(&'static str),

    #[error("{0} must be dominant")]
    NotDominant(&'static str),

    #[error("formula out of proven range: {0}")]
    OutOfProvenRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("computation too large: {0}")]
    TooLarge(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("empty search range: {0}")]
    EmptyRange(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
