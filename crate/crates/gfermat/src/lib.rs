//! Exact computer algebra for generalized Fermat curves.
//!
//! A generalized Fermat curve of type `(k, n)` is the complete intersection in
//! projective `n`-space cut out by the `n - 1` degree-`k` forms
//!
//! ```text
//! f_i = lh_i x1^k + x2^k + x_{3+i}^k,        i = 0, ..., n-2,
//! ```
//!
//! where `lh_0 = 1` and `lh_i = lambda_i` for a list of pairwise distinct
//! scalars outside `{0, 1}`. The curve is a regular branched cover of the
//! projective line with deck group `H0 = Z_k^n`, branched over
//! `{inf, 0, 1, lambda_1, ..., lambda_{n-2}}`.
//!
//! Everything here is exact: no floating point anywhere. Supported coefficient
//! fields are `Q`, cyclotomic fields `Q(zeta_k)`, prime fields `GF(p)`, and
//! extensions `GF(p^m)` with deterministic moduli, so every run of every
//! operation is reproducible bit for bit.
//!
//! The crate computes, on concrete instances:
//!
//! * the curve data itself: genus, canonical degree, smoothness certificates,
//!   the deck group and its fixed points, branch values ([`curve`]);
//! * the full group of linear (monomial) automorphisms, by lifting Moebius
//!   symmetries of the branch set ([`aut`]);
//! * hyper-osculation data: truncated local charts, Hermite invariants,
//!   ramification indices of the osculating filtration, and the Pluecker
//!   degree recurrence ([`osc`]);
//! * rational point censuses over finite fields with the deck-orbit structure
//!   ([`points`]).

pub mod arith;
pub mod aut;
pub mod curve;
pub mod field;
pub(crate) mod la;
pub mod moebius;
pub mod osc;
pub mod points;
pub mod report;
pub mod verify;
pub mod series;

/// Crate-wide error type. Variants are grouped by the exit-code class the CLI
/// maps them to: invalid input / unmet precondition, violated mathematical
/// property, or exhausted work budget.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("operands belong to different fields: {0} vs {1}")]
    MixedFields(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is reducible over GF({1})")]
    ReducibleModulus(String, u64),

    #[error("no primitive {k}-th root of unity in {field}")]
    NoUnityRoot { k: u64, field: String },

    #[error("missing {k}-th roots in {field} for: {missing}")]
    MissingRoots {
        k: u64,
        field: String,
        missing: String,
    },

    #[error("characteristic-0 field extension is not constructed here: {0}")]
    CharZeroExtension(String),

    #[error("characteristic {p} too small: {what}")]
    CharTooSmall { p: u64, what: String },

    #[error("degenerate curve type ({k},{n}): genus <= 1, operation refused")]
    DegenerateGenus { k: u64, n: u64 },

    #[error("truncation order {n} too small: {what}")]
    TruncationTooSmall { n: usize, what: String },

    #[error("property violation: {0}")]
    Property(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("work budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    /// Process exit code class used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Property(_) | Error::Internal(_) => 3,
            Error::Budget(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
