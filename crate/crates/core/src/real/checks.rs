//! Auxiliary analytic checks: the quartic square-root bounds used in the
//! family estimates, and the exact trigonometric identities behind them.

use super::interval::CertifiedReal;
use crate::error::Error;
use crate::exact::{rat, Integer, Rational};
use crate::Result;
use rug::ops::RemRounding;

/// Lower bound polynomial `1 + z/2 - z^2/8 + z^3/16 - z^4/16`.
pub fn sqrt_lower_poly(z: &Rational) -> Rational {
    let z2 = Rational::from(z * z);
    let z3 = Rational::from(&z2 * z);
    let z4 = Rational::from(&z2 * &z2);
    Rational::from(1) + Rational::from(z / Rational::from(2)) - z2 / Rational::from(8)
        + z3 / Rational::from(16)
        - z4 / Rational::from(16)
}

/// Upper bound polynomial `1 + z/2 - z^2/8 + z^3/16`.
pub fn sqrt_upper_poly(z: &Rational) -> Rational {
    let z2 = Rational::from(z * z);
    let z3 = Rational::from(&z2 * z);
    Rational::from(1) + Rational::from(z / Rational::from(2)) - z2 / Rational::from(8)
        + z3 / Rational::from(16)
}

/// Exact defect `lower_poly(z)^2 - (1+z)`; the lower bound holds iff this
/// is <= 0 (or the polynomial itself is negative).
pub fn sqrt_lower_defect(z: &Rational) -> Rational {
    let p = sqrt_lower_poly(z);
    Rational::from(&p * &p) - (Rational::from(1) + z)
}

/// Exact defect `upper_poly(z)^2 - (1+z)`; the upper bound holds iff this
/// is >= 0.
pub fn sqrt_upper_defect(z: &Rational) -> Rational {
    let p = sqrt_upper_poly(z);
    Rational::from(&p * &p) - (Rational::from(1) + z)
}

/// Verify both square-root bounds at `z` by exact rational arithmetic.
/// Returns the pair of defects `(lower, upper)` on success.
pub fn sqrt_bounds_check(z: &Rational) -> Result<(Rational, Rational)> {
    if *z <= rat(-516, 1000) || *z >= rat(1, 1) {
        return Err(Error::invalid(format!(
            "z = {} outside the validity range (-0.516, 1)",
            z
        )));
    }
    let lower = sqrt_lower_defect(z);
    let upper = sqrt_upper_defect(z);
    let lower_ok = sqrt_lower_poly(z) < 0 || lower <= 0;
    if !lower_ok {
        return Err(Error::invalid(format!(
            "lower sqrt bound fails at z = {}: defect {}",
            z, lower
        )));
    }
    if upper < 0 {
        return Err(Error::invalid(format!(
            "upper sqrt bound fails at z = {}: defect {}",
            z, upper
        )));
    }
    Ok((lower, upper))
}

/// Sign of `cos(num*pi/den)` from the exact angle (0 for a zero of cos).
fn cos_sign(num: &Integer, den: &Integer) -> i32 {
    // cos is positive iff the angle mod 2pi lies in (-pi/2, pi/2).
    // Work with the fraction f = num/den mod 2, scaled by 2*den:
    // positive iff 2*num mod 4*den in [0, den) or (3*den, 4*den).
    let four_den = Integer::from(4 * den);
    let r = Integer::from(2 * num).rem_euc(four_den);
    if r == *den || r == Integer::from(3 * den) {
        0
    } else if r < *den || r > Integer::from(3 * den) {
        1
    } else {
        -1
    }
}

/// Residuals of the exact trig identities satisfied by tan(k*pi/8) and
/// tan(2k*pi/5); each returned interval must contain 0.
pub fn trig_identity_residuals(n: u32, k: u32, prec: u32) -> Result<Vec<CertifiedReal>> {
    let one = CertifiedReal::from_i64(1, prec);
    match (n, k) {
        (4, 1) | (4, 3) => {
            let (num, den) = (Integer::from(k), Integer::from(8));
            let tan = CertifiedReal::tan_pi(&num, &den, prec)?;
            let tan2 = tan.powi(2);
            let tan3 = tan2.mul(&tan);
            let sec2 = one.add(&tan2);
            let sec4 = sec2.powi(2);
            let four = CertifiedReal::from_i64(4, prec);
            let three = CertifiedReal::from_i64(3, prec);
            // k=1: sec^4 = 4tan - 4tan^3 and (3tan^2-1)/tan = -sec^2;
            // k=3: both signs flip.
            let sign = if k == 1 { 1 } else { -1 };
            let s = CertifiedReal::from_i64(sign, prec);
            let r1 = sec4.sub(&s.mul(&four.mul(&tan.sub(&tan3))));
            let r2 = three
                .mul(&tan2)
                .sub(&one)
                .div(&tan)?
                .add(&s.mul(&sec2));
            Ok(vec![r1, r2])
        }
        (5, 1) | (5, 2) => {
            let (num, den) = (Integer::from(2 * k), Integer::from(5));
            let tan = CertifiedReal::tan_pi(&num, &den, prec)?;
            let tan2 = tan.powi(2);
            let tan4 = tan2.powi(2);
            let sec2 = one.add(&tan2);
            // sec^5 = sign(cos) * (1 + tan^2)^(5/2)
            let sec5_abs = sec2.pow_rational(&rat(5, 2))?;
            let sec5 = match cos_sign(&num, &den) {
                1 => sec5_abs,
                -1 => sec5_abs.neg(),
                _ => return Err(Error::degenerate("cos vanishes at identity angle")),
            };
            let five = CertifiedReal::from_i64(5, prec);
            let ten = CertifiedReal::from_i64(10, prec);
            let lhs = five.mul(&tan4).sub(&ten.mul(&tan2)).add(&one);
            Ok(vec![lhs.sub(&sec5)])
        }
        _ => Err(Error::invalid(format!(
            "no stored identities for (n, k) = ({}, {})",
            n, k
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma5_defects_at_quoted_points() {
        // z = -1/2: lower defect is exactly -7/65536
        let (lower, upper) = sqrt_bounds_check(&rat(-1, 2)).unwrap();
        assert_eq!(lower, rat(-7, 65536));
        assert!(upper > 0);
        // z = 0: both polynomials equal sqrt(1) exactly
        let (lower, upper) = sqrt_bounds_check(&Rational::new()).unwrap();
        assert_eq!(lower, Rational::new());
        assert_eq!(upper, Rational::new());
        // z = 1 endpoint is outside the open range, but the defect value
        // -7/64 from the proof is reproduced by the raw polynomial.
        assert_eq!(sqrt_lower_defect(&rat(1, 1)), rat(-7, 64));
    }

    #[test]
    fn lemma5_range_enforced() {
        assert!(sqrt_bounds_check(&rat(-52, 100)).is_err());
        assert!(sqrt_bounds_check(&rat(1, 1)).is_err());
        assert!(sqrt_bounds_check(&rat(99, 100)).is_ok());
        assert!(sqrt_bounds_check(&rat(-515, 1000)).is_ok());
    }

    #[test]
    fn cos_sign_cases() {
        assert_eq!(cos_sign(&Integer::from(2), &Integer::from(5)), 1); // 72 deg
        assert_eq!(cos_sign(&Integer::from(4), &Integer::from(5)), -1); // 144 deg
        assert_eq!(cos_sign(&Integer::from(1), &Integer::from(2)), 0); // 90 deg
        assert_eq!(cos_sign(&Integer::from(-2), &Integer::from(5)), 1);
        assert_eq!(cos_sign(&Integer::from(7), &Integer::from(5)), -1); // 252 deg
    }

    #[test]
    fn identities_vanish() {
        for (n, k) in [(4u32, 1u32), (4, 3), (5, 1), (5, 2)] {
            let rs = trig_identity_residuals(n, k, 256).unwrap();
            for r in rs {
                assert!(r.contains_zero(), "({},{}) residual {}", n, k, r);
                assert!(r.is_tight(100), "({},{}) residual too wide: {}", n, k, r);
            }
        }
    }
}
