//! Effective irrationality measures for the algebraic numbers
//! `sqrt(|t|) * tan(k*pi/n)`, the real roots of
//! `F_{n,t}(x) = (x - sqrt(t))^n + (x + sqrt(t))^n` with `t < 0`.
//!
//! The construction follows the classical hypergeometric method: from an
//! instance `(n, t, x)` we build a pair of conjugate quadratic values
//! `U, Z`, normalise away common content through a gcd ladder, and read off
//! a measure `|alpha - p/q| > 1 / (c * q^(kappa + 1))` whenever the
//! contraction/expansion quantities satisfy `E > 1`.
//!
//! Crate layout:
//!
//! * [`exact`] — exact integer/rational arithmetic: quadratic-field elements,
//!   surds, factorisation helpers.
//! * [`hyperg`] — hypergeometric polynomials `X_{n,r}`, their denominator and
//!   content invariants, and validation of the `(C, D)` constant pairs.
//! * [`real`] — certified real arithmetic (directed-rounding intervals on
//!   MPFR floats), evaluation of the target numbers, certified continued
//!   fraction expansion, and the on-disk CF cache.
//! * [`pipeline`] — the measure pipeline itself: `U`/`Z`, the gcd ladder,
//!   `E`, `Q`, `kappa`, `c`, and JSON-serialisable certificates.
//! * [`families`] — the two infinite families `sqrt(b) * tan(k*pi/8)` and
//!   `sqrt(b) * tan(2k*pi/5)` with closed-form exponents, cross-checked
//!   against the direct pipeline.
//! * [`refine`] — sharpening a raw measure to a target `(c*, kappa*)` by
//!   finite verification against the continued fraction of alpha.
//! * [`search`] — sweeps for instances that beat the Liouville bound.
//! * [`replay`] — named reproductions of the published numerical claims,
//!   shared by the CLI and the acceptance test-suite.

pub mod config;
pub mod error;
pub mod exact;
pub mod families;
pub mod hyperg;
pub mod pipeline;
pub mod real;
pub mod refine;
pub mod replay;
pub mod search;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
