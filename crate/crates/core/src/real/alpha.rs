//! The target numbers whose irrationality we measure, and their certified
//! evaluation.

use super::interval::CertifiedReal;
use crate::error::Error;
use crate::exact::Integer;
use crate::Result;
use rug::Rational;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A real root of `F_{n,t}` (with `t < 0`), identified by its angle index:
/// odd `n` gives `sqrt(|t|) * tan(2k*pi/n)` for `k = 0..n-1`, even `n`
/// gives `sqrt(|t|) * tan((2k+1)*pi/(2n))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaSpec {
    pub n: u32,
    #[serde(with = "crate::pipeline::serde_int")]
    pub t: Integer,
    pub k: u32,
}

impl AlphaSpec {
    pub fn new(n: u32, t: Integer, k: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("alpha spec needs n >= 3"));
        }
        if t >= 0 {
            return Err(Error::invalid("alpha spec needs t < 0"));
        }
        if k >= n {
            return Err(Error::invalid(format!("root index {} out of 0..{}", k, n)));
        }
        if n % 2 == 1 && k == 0 {
            return Err(Error::invalid("k = 0 gives the trivial root 0"));
        }
        Ok(AlphaSpec { n, t, k })
    }

    /// The tan angle as an exact fraction `(num, den)` of pi.
    pub fn angle(&self) -> (Integer, Integer) {
        if self.n % 2 == 1 {
            (Integer::from(2 * self.k), Integer::from(self.n))
        } else {
            (Integer::from(2 * self.k + 1), Integer::from(2 * self.n))
        }
    }

    /// Certified enclosure of `sqrt(|t|) * tan(angle)`.
    pub fn value(&self, prec: u32) -> Result<CertifiedReal> {
        let (num, den) = self.angle();
        let tan = CertifiedReal::tan_pi(&num, &den, prec)?;
        let abs_t = Integer::from(self.t.abs_ref());
        let rt = CertifiedReal::from_integer(&abs_t, prec).sqrt()?;
        Ok(rt.mul(&tan))
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.angle();
        write!(f, "sqrt({})*tan({}pi/{})", self.t.clone().abs(), num, den)
    }
}

/// Anything we can expand into a continued fraction.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaTarget {
    /// A root of `F_{n,t}`.
    Root(AlphaSpec),
    /// `scale * tan^2(num*pi/den)` (used by the convergent searches).
    TanSquared {
        scale: Integer,
        num: Integer,
        den: Integer,
    },
    /// An explicit quadratic surd `a + b*sqrt(d)` with `d > 0` squarefree.
    Surd {
        a: Rational,
        b: Rational,
        d: Integer,
    },
    /// An exact rational (mostly for tests).
    Rational(Rational),
}

impl AlphaTarget {
    /// Canonical string used to key cache files and label certificates.
    pub fn canonical(&self) -> String {
        match self {
            AlphaTarget::Root(spec) => spec.to_string(),
            AlphaTarget::TanSquared { scale, num, den } => {
                format!("{}*tan^2({}pi/{})", scale, num, den)
            }
            AlphaTarget::Surd { a, b, d } => format!("{}+{}*sqrt({})", a, b, d),
            AlphaTarget::Rational(r) => format!("{}", r),
        }
    }

    /// Certified enclosure at the given working precision.
    pub fn eval(&self, prec: u32) -> Result<CertifiedReal> {
        match self {
            AlphaTarget::Root(spec) => spec.value(prec),
            AlphaTarget::TanSquared { scale, num, den } => {
                let t = CertifiedReal::tan_pi(num, den, prec)?;
                Ok(t.powi(2).mul(&CertifiedReal::from_integer(scale, prec)))
            }
            AlphaTarget::Surd { a, b, d } => {
                if *d <= 0 {
                    return Err(Error::invalid("surd target needs d > 0"));
                }
                let rt = CertifiedReal::from_integer(d, prec).sqrt()?;
                Ok(CertifiedReal::from_rational(a, prec)
                    .add(&rt.mul(&CertifiedReal::from_rational(b, prec))))
            }
            AlphaTarget::Rational(r) => Ok(CertifiedReal::from_rational(r, prec)),
        }
    }

    /// True iff the target is rational (CF terminates).
    pub fn is_rational(&self) -> bool {
        matches!(self, AlphaTarget::Rational(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn alpha_spec_validation() {
        assert!(AlphaSpec::new(7, Integer::from(-19), 5).is_ok());
        assert!(AlphaSpec::new(7, Integer::from(19), 5).is_err());
        assert!(AlphaSpec::new(7, Integer::from(-19), 7).is_err());
        assert!(AlphaSpec::new(7, Integer::from(-19), 0).is_err());
        assert!(AlphaSpec::new(2, Integer::from(-19), 0).is_err());
    }

    #[test]
    fn alpha_value_t19() {
        // sqrt(19)*tan(10pi/7) = 19.0975840829...
        let spec = AlphaSpec::new(7, Integer::from(-19), 5).unwrap();
        let v = spec.value(256).unwrap();
        let lo = Rational::from((190975840829u64, 10000000000u64));
        let hi = Rational::from((190975840830u64, 10000000000u64));
        assert!(v.cmp_rational(&lo) == Some(std::cmp::Ordering::Greater));
        assert!(v.cmp_rational(&hi) == Some(std::cmp::Ordering::Less));
        assert_eq!(spec.to_string(), "sqrt(19)*tan(10pi/7)");
    }

    #[test]
    fn tan_squared_pi12_is_surd() {
        // tan^2(pi/12) = 7 - 4*sqrt(3)
        let t = AlphaTarget::TanSquared {
            scale: Integer::from(1),
            num: Integer::from(1),
            den: Integer::from(12),
        };
        let s = AlphaTarget::Surd {
            a: Rational::from(7),
            b: Rational::from(-4),
            d: Integer::from(3),
        };
        let a = t.eval(192).unwrap();
        let b = s.eval(192).unwrap();
        assert!(!a.certainly_gt(&b) && !a.certainly_lt(&b));
        assert!(a.is_tight(150));
    }
}
