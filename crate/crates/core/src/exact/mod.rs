//! Exact arithmetic building blocks: big integers/rationals, quadratic-field
//! elements `a + b*sqrt(t)`, pure surds `q*sqrt(d)`, and integer
//! factorisation utilities.

mod factor;
mod quad;
mod surd;

pub use factor::{core_part, factorize, squarefree_split, vp, IntFactorization};
pub use quad::{fnt_eval, fnt_roots_angles, QuadElement};
pub use surd::SurdScalar;

pub use rug::{Integer, Rational};

/// Convenience constructor for `rug::Integer`.
pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

/// Convenience constructor for `rug::Rational`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

/// True iff `r` is an integer.
pub fn is_integer(r: &Rational) -> bool {
    *r.denom() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_helpers() {
        assert!(is_integer(&rat(6, 3)));
        assert!(!is_integer(&rat(1, 3)));
    }
}
