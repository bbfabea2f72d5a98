//! Directed-rounding interval arithmetic on MPFR floats.
//!
//! A [`CertifiedReal`] is a pair `lo <= hi` of finite MPFR floats enclosing
//! the mathematical value. Every operation rounds the lower endpoint down
//! and the upper endpoint up, so enclosures are preserved.

use crate::error::Error;
use crate::Result;
use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};
use std::cmp::Ordering;
use std::fmt;

/// Hard cap for precision escalation (bits).
pub const PREC_CAP: u32 = 1 << 24;

fn fdir<T>(prec: u32, v: T, r: Round) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let mut f = Float::new(prec);
    f.assign_round(v, r);
    f
}

/// An interval `[lo, hi]` certified to contain the exact value.
#[derive(Debug, Clone)]
pub struct CertifiedReal {
    lo: Float,
    hi: Float,
}

impl CertifiedReal {
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(lo.is_finite() && hi.is_finite(), "non-finite interval end");
        assert!(lo <= hi, "inverted interval: [{}, {}]", lo, hi);
        CertifiedReal { lo, hi }
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    /// Exact rational endpoints (MPFR floats are dyadic rationals).
    pub fn lo_rational(&self) -> Rational {
        self.lo.to_rational().expect("finite float")
    }

    pub fn hi_rational(&self) -> Rational {
        self.hi.to_rational().expect("finite float")
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        CertifiedReal::new(fdir(prec, r, Round::Down), fdir(prec, r, Round::Up))
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        CertifiedReal::new(fdir(prec, n, Round::Down), fdir(prec, n, Round::Up))
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_integer(&Integer::from(n), prec)
    }

    /// Enclosure of pi.
    pub fn pi(prec: u32) -> Self {
        use rug::float::Constant;
        CertifiedReal::new(
            fdir(prec, Constant::Pi, Round::Down),
            fdir(prec, Constant::Pi, Round::Up),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        CertifiedReal::new(
            fdir(p, &self.lo + &o.lo, Round::Down),
            fdir(p, &self.hi + &o.hi, Round::Up),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        CertifiedReal::new(
            fdir(p, &self.lo - &o.hi, Round::Down),
            fdir(p, &self.hi - &o.lo, Round::Up),
        )
    }

    pub fn neg(&self) -> Self {
        CertifiedReal {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            // contains zero: [0, max(-lo, hi)]
            let a = -self.lo.clone();
            let hi = if a >= self.hi { a } else { self.hi.clone() };
            CertifiedReal::new(Float::with_val(self.prec(), 0), hi)
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let ends = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in ends {
            let d = fdir(p, a * b, Round::Down);
            let u = fdir(p, a * b, Round::Up);
            lo = Some(match lo {
                None => d,
                Some(x) => {
                    if d < x {
                        d
                    } else {
                        x
                    }
                }
            });
            hi = Some(match hi {
                None => u,
                Some(x) => {
                    if u > x {
                        u
                    } else {
                        x
                    }
                }
            });
        }
        CertifiedReal::new(lo.unwrap(), hi.unwrap())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.contains_zero() {
            return Err(Error::PrecisionExhausted(
                "interval division by interval containing zero".into(),
            ));
        }
        let p = self.prec().max(o.prec());
        let ends = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in ends {
            let d = fdir(p, a / b, Round::Down);
            let u = fdir(p, a / b, Round::Up);
            lo = Some(match lo {
                None => d,
                Some(x) => {
                    if d < x {
                        d
                    } else {
                        x
                    }
                }
            });
            hi = Some(match hi {
                None => u,
                Some(x) => {
                    if u > x {
                        u
                    } else {
                        x
                    }
                }
            });
        }
        Ok(CertifiedReal::new(lo.unwrap(), hi.unwrap()))
    }

    /// Square root; the true value must be >= 0, a slightly negative lower
    /// endpoint is clamped to zero.
    pub fn sqrt(&self) -> Result<Self> {
        if self.hi < 0 {
            return Err(Error::PrecisionExhausted(
                "sqrt of certainly-negative interval".into(),
            ));
        }
        let p = self.prec();
        let lo = if self.lo <= 0 {
            Float::with_val(p, 0)
        } else {
            fdir(p, self.lo.sqrt_ref(), Round::Down)
        };
        let hi = fdir(p, self.hi.sqrt_ref(), Round::Up);
        Ok(CertifiedReal::new(lo, hi))
    }

    pub fn ln(&self) -> Result<Self> {
        if self.lo <= 0 {
            return Err(Error::PrecisionExhausted(
                "log of interval not certainly positive".into(),
            ));
        }
        let p = self.prec();
        Ok(CertifiedReal::new(
            fdir(p, self.lo.ln_ref(), Round::Down),
            fdir(p, self.hi.ln_ref(), Round::Up),
        ))
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        CertifiedReal::new(
            fdir(p, self.lo.exp_ref(), Round::Down),
            fdir(p, self.hi.exp_ref(), Round::Up),
        )
    }

    /// Integer power by binary exponentiation of interval products
    /// (correct for intervals of any sign).
    pub fn powi(&self, n: u32) -> Self {
        let p = self.prec();
        let mut acc = CertifiedReal::from_i64(1, p);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^r` for rational `r`; requires a certainly-positive base unless
    /// `r` is a non-negative integer.
    pub fn pow_rational(&self, r: &Rational) -> Result<Self> {
        if *r.denom() == 1 && *r.numer() >= 0 {
            let e = r.numer().to_u32().ok_or_else(|| {
                Error::PrecisionExhausted("integer exponent out of range".into())
            })?;
            return Ok(self.powi(e));
        }
        let p = self.prec();
        let ex = CertifiedReal::from_rational(r, p);
        Ok(self.ln()?.mul(&ex).exp())
    }

    /// `self^k` with an interval exponent; requires a certainly-positive base.
    pub fn pow_interval(&self, k: &Self) -> Result<Self> {
        Ok(self.ln()?.mul(k).exp())
    }

    /// Enclosure of `tan(num * pi / den)`. Fails if the angle enclosure
    /// straddles a pole of tan (exact poles must be excluded by the caller).
    pub fn tan_pi(num: &Integer, den: &Integer, prec: u32) -> Result<Self> {
        assert!(*den != 0);
        // Exact pole: num/den = 1/2 mod 1.
        let two_num = Integer::from(2 * num);
        if two_num.is_divisible(den) {
            let k = Integer::from(&two_num / den);
            if k.is_odd() {
                return Err(Error::degenerate(format!(
                    "tan({}*pi/{}) is a pole",
                    num, den
                )));
            }
        }
        let angle = CertifiedReal::pi(prec).mul(&CertifiedReal::from_rational(
            &Rational::from((num.clone(), den.clone())),
            prec,
        ));
        let lo = fdir(prec, angle.lo.tan_ref(), Round::Down);
        let hi = fdir(prec, angle.hi.tan_ref(), Round::Up);
        if lo > hi {
            return Err(Error::PrecisionExhausted(format!(
                "tan({}*pi/{}) enclosure straddles a pole at {} bits",
                num, den, prec
            )));
        }
        Ok(CertifiedReal::new(lo, hi))
    }

    /// Enclosure of `atan2(y, x)`; `y` must not contain zero (keeps us off
    /// the branch cut), so corner evaluation bounds the angle.
    pub fn atan2(y: &Self, x: &Self) -> Result<Self> {
        if y.contains_zero() {
            return Err(Error::PrecisionExhausted(
                "atan2 with y-interval containing zero".into(),
            ));
        }
        let p = y.prec().max(x.prec());
        let corners = [
            (&y.lo, &x.lo),
            (&y.lo, &x.hi),
            (&y.hi, &x.lo),
            (&y.hi, &x.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (yy, xx) in corners {
            let d = fdir(p, yy.atan2_ref(xx), Round::Down);
            let u = fdir(p, yy.atan2_ref(xx), Round::Up);
            lo = Some(match lo {
                None => d,
                Some(v) => {
                    if d < v {
                        d
                    } else {
                        v
                    }
                }
            });
            hi = Some(match hi {
                None => u,
                Some(v) => {
                    if u > v {
                        u
                    } else {
                        v
                    }
                }
            });
        }
        Ok(CertifiedReal::new(lo.unwrap(), hi.unwrap()))
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn is_certainly_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn certainly_gt(&self, o: &Self) -> bool {
        self.lo > o.hi
    }

    pub fn certainly_lt(&self, o: &Self) -> bool {
        self.hi < o.lo
    }

    /// Compare against an exact rational; `None` when the interval straddles it.
    pub fn cmp_rational(&self, r: &Rational) -> Option<Ordering> {
        if self.hi < *r {
            Some(Ordering::Less)
        } else if self.lo > *r {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// The unique integer floor of the enclosed value, if certified.
    pub fn unique_floor(&self) -> Option<Integer> {
        let fl = self.lo_rational().floor().numer().clone();
        let fh = self.hi_rational().floor().numer().clone();
        if fl == fh {
            Some(fl)
        } else {
            None
        }
    }

    /// The unique nearest integer, if certified (half-way values are not).
    pub fn unique_round(&self) -> Option<Integer> {
        let half = Rational::from((1, 2));
        let sl = self.lo_rational() + &half;
        let sh = self.hi_rational() + &half;
        // A half-integer endpoint means the nearest integer is not unique.
        if sl.is_integer() || sh.is_integer() {
            return None;
        }
        let rl = sl.floor().numer().clone();
        let rh = sh.floor().numer().clone();
        if rl == rh {
            Some(rl)
        } else {
            None
        }
    }

    /// Upper bound on the interval width.
    pub fn width(&self) -> Float {
        fdir(self.prec(), &self.hi - &self.lo, Round::Up)
    }

    /// True iff `width <= 2^-bits * max(1, |value|)` (roughly `bits`
    /// significant bits of agreement).
    pub fn is_tight(&self, bits: u32) -> bool {
        let p = self.prec();
        let w = self.width();
        let scale = {
            let a = self.abs();
            if a.hi < 1 {
                Float::with_val(p, 1)
            } else {
                a.hi.clone()
            }
        };
        let tol = scale * Float::with_val(p, Float::i_exp(1, -(bits as i32)));
        w <= tol
    }

    pub fn to_f64(&self) -> f64 {
        let p = self.prec();
        let mid = fdir(p, &self.lo + &self.hi, Round::Down) / 2u32;
        mid.to_f64()
    }

    /// Decimal endpoint strings with outward rounding.
    pub fn decimal_bounds(&self, digits: usize) -> (String, String) {
        (
            self.lo.to_string_radix_round(10, Some(digits), Round::Down),
            self.hi.to_string_radix_round(10, Some(digits), Round::Up),
        )
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CertifiedRealDto {
    lo: String,
    hi: String,
    bits: u32,
}

impl serde::Serialize for CertifiedReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let digits = (self.prec() as f64 / 3.3219) as usize + 4;
        let (lo, hi) = self.decimal_bounds(digits);
        CertifiedRealDto {
            lo,
            hi,
            bits: self.prec(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for CertifiedReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let dto = CertifiedRealDto::deserialize(d)?;
        let lo = Float::parse(&dto.lo).map_err(D::Error::custom)?;
        let hi = Float::parse(&dto.hi).map_err(D::Error::custom)?;
        Ok(CertifiedReal::new(
            fdir(dto.bits, lo, Round::Down),
            fdir(dto.bits, hi, Round::Up),
        ))
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.decimal_bounds(20);
        write!(f, "[{}, {}]", lo, hi)
    }
}

/// Run `f` at increasing precision until it produces a value.
/// `f` returns `Ok(None)` to request more precision.
pub fn escalate<T>(floor: u32, mut f: impl FnMut(u32) -> Result<Option<T>>) -> Result<T> {
    let mut p = floor.max(64);
    loop {
        match f(p)? {
            Some(v) => return Ok(v),
            None => {
                if p >= PREC_CAP {
                    return Err(Error::PrecisionExhausted(format!(
                        "no certification below the {} bit cap",
                        PREC_CAP
                    )));
                }
                p = p.saturating_mul(2).min(PREC_CAP);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn arithmetic_encloses() {
        let a = CertifiedReal::from_rational(&rat(1, 3), 64);
        let b = CertifiedReal::from_rational(&rat(1, 7), 64);
        let s = a.add(&b);
        // 1/3 + 1/7 = 10/21
        assert_eq!(s.cmp_rational(&rat(10, 21)), None);
        let p = a.mul(&b);
        assert_eq!(p.cmp_rational(&rat(1, 21)), None);
        assert_eq!(p.cmp_rational(&rat(1, 20)), Some(Ordering::Less));
        assert_eq!(p.cmp_rational(&rat(1, 22)), Some(Ordering::Greater));
    }

    #[test]
    fn signed_multiplication() {
        let a = CertifiedReal::from_rational(&rat(-3, 1), 64);
        let b = CertifiedReal::from_rational(&rat(5, 1), 64);
        let p = a.mul(&b);
        assert_eq!(p.cmp_rational(&rat(-15, 2)), Some(Ordering::Less));
        assert_eq!(p.unique_floor(), Some(Integer::from(-15)));
    }

    #[test]
    fn sqrt_and_pow() {
        let two = CertifiedReal::from_i64(2, 128);
        let r = two.sqrt().unwrap();
        let sq = r.powi(2);
        assert!(sq.cmp_rational(&rat(2, 1)).is_none());
        assert!(sq.is_tight(100));
        // 2^(3/2) = 2*sqrt(2)
        let p = two.pow_rational(&rat(3, 2)).unwrap();
        let expected = two.mul(&r);
        assert!(!p.certainly_gt(&expected) && !p.certainly_lt(&expected));
    }

    #[test]
    fn tan_pi_values() {
        // tan(pi/4) = 1
        let t = CertifiedReal::tan_pi(&Integer::from(1), &Integer::from(4), 128).unwrap();
        assert!(t.cmp_rational(&rat(1, 1)).is_none());
        assert!(t.is_tight(100));
        // tan at a pole is rejected
        assert!(CertifiedReal::tan_pi(&Integer::from(1), &Integer::from(2), 128).is_err());
        assert!(CertifiedReal::tan_pi(&Integer::from(3), &Integer::from(2), 128).is_err());
        // tan(2pi/3) < 0
        let t = CertifiedReal::tan_pi(&Integer::from(2), &Integer::from(3), 128).unwrap();
        assert!(t.hi() < &0);
    }

    #[test]
    fn atan2_quadrants() {
        let one = CertifiedReal::from_i64(1, 128);
        let mone = CertifiedReal::from_i64(-1, 128);
        let q2 = CertifiedReal::atan2(&one, &mone).unwrap(); // 3pi/4
        let pi = CertifiedReal::pi(128);
        let expect = pi.mul(&CertifiedReal::from_rational(&rat(3, 4), 128));
        assert!(!q2.certainly_gt(&expect) && !q2.certainly_lt(&expect));
        assert!(CertifiedReal::atan2(&CertifiedReal::from_i64(0, 64), &one).is_err());
    }

    #[test]
    fn rounding_certification() {
        let x = CertifiedReal::from_rational(&rat(7, 2), 64);
        // exactly half-way: not certifiable as a nearest integer
        assert_eq!(x.unique_round(), None);
        let y = CertifiedReal::from_rational(&rat(699, 200), 64);
        assert_eq!(y.unique_round(), Some(Integer::from(3)));
        assert_eq!(y.unique_floor(), Some(Integer::from(3)));
    }

    #[test]
    fn escalation_runs() {
        let v = escalate(64, |p| {
            if p >= 256 {
                Ok(Some(p))
            } else {
                Ok(None)
            }
        })
        .unwrap();
        assert_eq!(v, 256);
    }
}
