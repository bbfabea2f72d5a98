//! Pure surds `q * sqrt(d)` with rational `q` and squarefree integer `d`
//! (possibly negative, in which case the value is purely imaginary).
//! These show up as the normalised content `g` of the gcd ladder.

use super::factor::squarefree_split;
use rug::{Integer, Rational};
use std::fmt;

/// Canonical form: `d` squarefree; `q = 0` forces `d = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdScalar {
    pub q: Rational,
    pub d: Integer,
}

impl SurdScalar {
    /// Build `q * sqrt(d0)` for arbitrary nonzero `d0`, extracting the
    /// square part of `d0` into `q`.
    pub fn new(q: Rational, d0: &Integer) -> Self {
        if q == 0 {
            return SurdScalar {
                q,
                d: Integer::from(1),
            };
        }
        let (d, s) = squarefree_split(d0);
        SurdScalar {
            q: q * Rational::from(&s),
            d,
        }
    }

    pub fn rational(q: Rational) -> Self {
        SurdScalar::new(q, &Integer::from(1))
    }

    /// `|q * sqrt(d)| = |q| * sqrt(|d|)` (modulus; also correct for
    /// imaginary surds).
    pub fn abs(&self) -> SurdScalar {
        SurdScalar {
            q: Rational::from(self.q.abs_ref()),
            d: Integer::from(self.d.abs_ref()),
        }
    }

    /// Exact square of the modulus: `q^2 * |d|`.
    pub fn abs_squared(&self) -> Rational {
        Rational::from(&self.q * &self.q) * Rational::from(self.d.abs_ref())
    }

    pub fn is_zero(&self) -> bool {
        self.q == 0
    }

    /// True iff the value is a rational number (d == 1).
    pub fn is_rational(&self) -> bool {
        self.d == 1
    }

    /// Exact product with a rational scalar.
    pub fn scale(&self, s: &Rational) -> SurdScalar {
        if *s == 0 {
            return SurdScalar::rational(Rational::new());
        }
        SurdScalar {
            q: Rational::from(&self.q * s),
            d: self.d.clone(),
        }
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct SurdDto {
    q: String,
    d: String,
}

impl serde::Serialize for SurdScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SurdDto {
            q: self.q.to_string(),
            d: self.d.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for SurdScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        use std::str::FromStr;
        let dto = SurdDto::deserialize(d)?;
        Ok(SurdScalar {
            q: Rational::from_str(&dto.q).map_err(D::Error::custom)?,
            d: Integer::from_str(&dto.d).map_err(D::Error::custom)?,
        })
    }
}

impl fmt::Display for SurdScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            write!(f, "{}", self.q)
        } else {
            write!(f, "{}*sqrt({})", self.q, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalisation() {
        // 3 * sqrt(-44) = 6 * sqrt(-11)
        let s = SurdScalar::new(Rational::from(3), &Integer::from(-44));
        assert_eq!(s.q, Rational::from(6));
        assert_eq!(s.d, Integer::from(-11));
        assert_eq!(s.abs_squared(), Rational::from(396));
    }

    #[test]
    fn zero_and_rational() {
        let z = SurdScalar::new(Rational::new(), &Integer::from(-7));
        assert!(z.is_zero() && z.is_rational());
        let r = SurdScalar::new(Rational::from((3, 2)), &Integer::from(4));
        assert_eq!(r.q, Rational::from(3));
        assert!(r.is_rational());
    }
}
