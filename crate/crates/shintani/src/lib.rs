//! Exact arithmetic for p-adic L-functions of critical-slope ("evil")
//! Eisenstein series.
//!
//! The pipeline runs entirely in exact arithmetic (arbitrary-precision
//! rationals, cyclotomic numbers, and valuation-tracked p-adic numbers):
//!
//! * test functions on Q² built from lattice-coset indicators ([`testfn`]),
//! * Shintani cone generating series and their moments ([`series`],
//!   [`shintani`]),
//! * Hecke operators acting through the adjugate-inverse action ([`hecke`]),
//! * Mazur–Mellin integration over Z_p^× by Riemann sums with certified
//!   stabilization, Kubota–Leopoldt L-functions, the regularized p-adic
//!   zeta, and the two evaluation routes for the L-function of a
//!   critical-slope Eisenstein series ([`lfunction`]).
//!
//! Every reported p-adic value carries its precision; Riemann-sum values
//! are certified by re-running at the next level and comparing.
//!
//! The `examples/` directory is the guided tour: each example is a runnable
//! walkthrough of one capability (Hecke eigenvector checks, cusp vanishing,
//! Kubota–Leopoldt values, zeta values, cone moments, both factorization
//! cases, and the U_p eigen check). The `shintani` binary exposes the same
//! functionality as a CLI with JSON/CSV output.

pub mod arith;
pub mod cli;
pub mod cyclotomic;
pub mod dirichlet;
pub mod hecke;
pub mod lattice;
pub mod lfunction;
pub mod mat2;
pub mod padic;
pub mod series;
pub mod shintani;
pub mod testfn;

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Errors surfaced by fallible operations. Internal invariant violations
/// panic instead; these variants are the documented failure modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A series or moment was requested beyond the computed truncation.
    InsufficientTruncation { required: u32, available: u32 },
    /// A coset moment on Z_p × Z_p^× was requested at a non-unit residue.
    NonUnitResidue { b: String, p: u64 },
    /// A divisor {r,s} with r = s has no cone.
    EqualCusps,
    /// A character cannot be embedded p-adically (order does not divide p−1).
    Embedding(String),
    /// A hypothesis required by a theorem/operation does not hold.
    Hypothesis(String),
    /// Riemann sums failed to stabilize at the requested precision.
    Unbounded(String),
    /// Malformed input (CLI or constructor argument).
    Usage(String),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::InsufficientTruncation { required, available } => write!(
                f,
                "insufficient truncation: need degree {required}, have {available}"
            ),
            Error::NonUnitResidue { b, p } => {
                write!(f, "residue {b} is not a unit mod {p}")
            }
            Error::EqualCusps => write!(f, "divisor endpoints coincide"),
            Error::Embedding(m) => write!(f, "{m}"),
            Error::Hypothesis(m) => write!(f, "hypothesis violated: {m}"),
            Error::Unbounded(m) => write!(f, "unbounded or under-resolved distribution: {m}"),
            Error::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
