//! Elements of the quadratic field `Q(sqrt(t))`, stored as exact rational
//! pairs `re + co * sqrt(t)`. For negative `t` these are complex numbers;
//! all arithmetic here stays exact.

use rug::{Integer, Rational};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `re + co * sqrt(t)` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElement {
    pub re: Rational,
    pub co: Rational,
    pub t: Integer,
}

impl QuadElement {
    pub fn new(re: Rational, co: Rational, t: Integer) -> Self {
        QuadElement { re, co, t }
    }

    pub fn from_ints(re: i64, co: i64, t: i64) -> Self {
        QuadElement {
            re: Rational::from(re),
            co: Rational::from(co),
            t: Integer::from(t),
        }
    }

    pub fn rational(re: Rational, t: Integer) -> Self {
        QuadElement {
            re,
            co: Rational::new(),
            t,
        }
    }

    /// Galois conjugate `re - co * sqrt(t)` (complex conjugate when `t < 0`).
    pub fn conj(&self) -> Self {
        QuadElement {
            re: self.re.clone(),
            co: -self.co.clone(),
            t: self.t.clone(),
        }
    }

    /// Field norm `re^2 - t * co^2`. For `t < 0` this is `|self|^2 >= 0`.
    pub fn norm(&self) -> Rational {
        let r2 = Rational::from(&self.re * &self.re);
        let c2 = Rational::from(&self.co * &self.co);
        r2 - c2 * Rational::from(&self.t)
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.co == 0
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(self.t, other.t, "mixed quadratic fields");
    }

    /// Binary exponentiation; `n = 0` gives 1.
    pub fn pow(&self, n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadElement::rational(Rational::from(1), self.t.clone());
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiply by an exact rational scalar.
    pub fn scale(&self, s: &Rational) -> Self {
        QuadElement {
            re: Rational::from(&self.re * s),
            co: Rational::from(&self.co * s),
            t: self.t.clone(),
        }
    }

    /// Division in the field; panics if `other` is zero.
    pub fn div(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let n = other.norm();
        assert!(n != 0, "division by zero quadratic element");
        let prod = self * &other.conj();
        QuadElement {
            re: prod.re / n.clone(),
            co: prod.co / n,
            t: self.t.clone(),
        }
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct QuadDto {
    re: String,
    co: String,
    t: String,
}

impl serde::Serialize for QuadElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadDto {
            re: self.re.to_string(),
            co: self.co.to_string(),
            t: self.t.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for QuadElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        use std::str::FromStr;
        let dto = QuadDto::deserialize(d)?;
        Ok(QuadElement {
            re: Rational::from_str(&dto.re).map_err(D::Error::custom)?,
            co: Rational::from_str(&dto.co).map_err(D::Error::custom)?,
            t: Integer::from_str(&dto.t).map_err(D::Error::custom)?,
        })
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.re, self.co, self.t)
    }
}

impl Add for &QuadElement {
    type Output = QuadElement;
    fn add(self, rhs: &QuadElement) -> QuadElement {
        self.assert_same_field(rhs);
        QuadElement {
            re: Rational::from(&self.re + &rhs.re),
            co: Rational::from(&self.co + &rhs.co),
            t: self.t.clone(),
        }
    }
}

impl Sub for &QuadElement {
    type Output = QuadElement;
    fn sub(self, rhs: &QuadElement) -> QuadElement {
        self.assert_same_field(rhs);
        QuadElement {
            re: Rational::from(&self.re - &rhs.re),
            co: Rational::from(&self.co - &rhs.co),
            t: self.t.clone(),
        }
    }
}

impl Mul for &QuadElement {
    type Output = QuadElement;
    fn mul(self, rhs: &QuadElement) -> QuadElement {
        self.assert_same_field(rhs);
        let tt = Rational::from(&self.t);
        let re = Rational::from(&self.re * &rhs.re) + Rational::from(&self.co * &rhs.co) * tt;
        let co = Rational::from(&self.re * &rhs.co) + Rational::from(&self.co * &rhs.re);
        QuadElement {
            re,
            co,
            t: self.t.clone(),
        }
    }
}

impl Neg for &QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        QuadElement {
            re: -self.re.clone(),
            co: -self.co.clone(),
            t: self.t.clone(),
        }
    }
}

/// Evaluate `F_{n,t}(x) = (x - sqrt(t))^n + (x + sqrt(t))^n` exactly.
/// The surd parts cancel, so the result is an integer for integer `x`.
pub fn fnt_eval(n: u32, t: &Integer, x: &Integer) -> Integer {
    assert!(n >= 2, "F_{{n,t}} needs n >= 2");
    let xr = Rational::from(x);
    let plus = QuadElement::new(xr.clone(), Rational::from(1), t.clone()).pow(n);
    let minus = QuadElement::new(xr, Rational::from(-1), t.clone()).pow(n);
    let sum = &plus + &minus;
    assert!(sum.co == 0, "surd parts must cancel in F_{{n,t}}");
    debug_assert!(*sum.re.denom() == 1);
    sum.re.numer().clone()
}

/// Angles `theta` such that the real roots of `F_{n,t}` (for `t < 0`) are
/// `sqrt(|t|) * tan(theta)`, returned as exact fractions `(num, den)` of pi:
/// odd `n` gives `2k*pi/n` for `k = 0..n-1`; even `n` gives
/// `(2k+1)*pi/(2n)` for `k = 0..n-1`.
pub fn fnt_roots_angles(n: u32) -> Vec<(i64, i64)> {
    assert!(n >= 3);
    if n % 2 == 1 {
        (0..n as i64).map(|k| (2 * k, n as i64)).collect()
    } else {
        (0..n as i64).map(|k| (2 * k + 1, 2 * n as i64)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_norm() {
        // (1 + 2*sqrt(-3)) * (2 - sqrt(-3)) = 2 - sqrt(-3) + 4 sqrt(-3) - 2*(-3) = 8 + 3 sqrt(-3)
        let a = QuadElement::from_ints(1, 2, -3);
        let b = QuadElement::from_ints(2, -1, -3);
        let p = &a * &b;
        assert_eq!(p, QuadElement::from_ints(8, 3, -3));
        assert_eq!(a.norm(), Rational::from(13)); // 1 + 3*4
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let a = QuadElement::from_ints(3, -2, -7);
        let mut acc = QuadElement::from_ints(1, 0, -7);
        for _ in 0..6 {
            acc = &acc * &a;
        }
        assert_eq!(a.pow(6), acc);
    }

    #[test]
    fn division_roundtrip() {
        let a = QuadElement::from_ints(5, 3, -19);
        let b = QuadElement::from_ints(2, -1, -19);
        let q = a.div(&b);
        assert_eq!(&q * &b, a);
    }

    #[test]
    fn fnt_small_values() {
        // (1 - i)^4 + (1 + i)^4 = -8
        assert_eq!(
            fnt_eval(4, &Integer::from(-1), &Integer::from(1)),
            Integer::from(-8)
        );
        // (19 +- sqrt(-19))^7 sums to -2^7 * 19^4
        assert_eq!(
            fnt_eval(7, &Integer::from(-19), &Integer::from(19)),
            Integer::from(-16681088)
        );
    }

    #[test]
    fn root_angles() {
        assert_eq!(fnt_roots_angles(3), vec![(0, 3), (2, 3), (4, 3)]);
        assert_eq!(fnt_roots_angles(4), vec![(1, 8), (3, 8), (5, 8), (7, 8)]);
    }
}
