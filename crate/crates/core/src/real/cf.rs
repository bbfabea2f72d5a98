//! Certified continued-fraction expansion.
//!
//! Strategy: evaluate the target once as an interval `[lo, hi]` of exact
//! dyadic rationals, then run the Euclidean algorithm jointly on both
//! endpoints, emitting a partial quotient only while both endpoints agree
//! on the floor. The run is then certified by recomputing at doubled
//! precision and requiring an identical quotient sequence.

use super::alpha::AlphaTarget;
use super::interval::PREC_CAP;
use crate::error::Error;
use crate::exact::{Integer, Rational};
use crate::Result;

/// A certified prefix of a continued-fraction expansion.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CFExpansion {
    /// Canonical description of the expanded number.
    pub target: String,
    /// Working precision (bits) at which the prefix was certified.
    pub precision_bits: u32,
    /// Partial quotients `a_0, a_1, ...` (`a_0` is the floor; the rest are
    /// positive).
    #[serde(serialize_with = "serialize_int_vec")]
    pub quotients: Vec<Integer>,
    /// Convergents `p_i / q_i`, same length as `quotients`.
    #[serde(serialize_with = "serialize_pair_vec")]
    pub convergents: Vec<(Integer, Integer)>,
}

fn serialize_int_vec<S: serde::Serializer>(v: &[Integer], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_string()))
}

fn serialize_pair_vec<S: serde::Serializer>(
    v: &[(Integer, Integer)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(p, q)| [p.to_string(), q.to_string()]))
}

impl CFExpansion {
    pub fn from_quotients(target: String, precision_bits: u32, quotients: Vec<Integer>) -> Self {
        let convergents = convergents_of(&quotients);
        CFExpansion {
            target,
            precision_bits,
            quotients,
            convergents,
        }
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// Largest partial quotient after `a_0`, with its index.
    pub fn max_quotient(&self) -> Option<(usize, &Integer)> {
        self.quotients
            .iter()
            .enumerate()
            .skip(1)
            .max_by(|a, b| a.1.cmp(b.1))
    }

    /// Check the classical invariants on the stored data:
    /// `p_i q_{i-1} - p_{i-1} q_i = (-1)^{i-1}`, positive quotients after
    /// `a_0`, and strictly increasing denominators.
    pub fn check_invariants(&self) -> Result<()> {
        for (i, a) in self.quotients.iter().enumerate().skip(1) {
            if *a < 1 {
                return Err(Error::invalid(format!(
                    "partial quotient a_{} = {} is not positive",
                    i, a
                )));
            }
        }
        let (mut pm1, mut qm1) = (Integer::from(1), Integer::from(0));
        for (i, (p, q)) in self.convergents.iter().enumerate() {
            let det = Integer::from(p * &qm1) - Integer::from(&pm1 * q);
            let expected = if i % 2 == 0 { -1 } else { 1 };
            if det != expected {
                return Err(Error::invalid(format!(
                    "determinant failure at convergent {}: {}",
                    i, det
                )));
            }
            if i >= 2 && self.convergents[i - 1].1 >= *q {
                return Err(Error::invalid(format!(
                    "denominators not increasing at {}",
                    i
                )));
            }
            pm1 = p.clone();
            qm1 = q.clone();
        }
        Ok(())
    }
}

/// Convergent recurrence `p_i = a_i p_{i-1} + p_{i-2}` (and same for q).
pub fn convergents_of(quotients: &[Integer]) -> Vec<(Integer, Integer)> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut pm2, mut qm2) = (Integer::from(0), Integer::from(1));
    let (mut pm1, mut qm1) = (Integer::from(1), Integer::from(0));
    for a in quotients {
        let p = Integer::from(a * &pm1) + &pm2;
        let q = Integer::from(a * &qm1) + &qm2;
        out.push((p.clone(), q.clone()));
        pm2 = pm1;
        qm2 = qm1;
        pm1 = p;
        qm1 = q;
    }
    out
}

/// Expand a target to `count` certified partial quotients.
pub fn cf_expand(target: &AlphaTarget, count: usize, precision_floor: u32) -> Result<CFExpansion> {
    if count == 0 {
        return Ok(CFExpansion::from_quotients(
            target.canonical(),
            precision_floor,
            vec![],
        ));
    }
    if let AlphaTarget::Rational(r) = target {
        // Exact expansion, terminates; no certification pass needed.
        let qs = rational_cf(r, count);
        return Ok(CFExpansion::from_quotients(target.canonical(), 0, qs));
    }
    // Initial estimate: quotient i consumes about 3.5 bits on average
    // (Levy/Khinchin growth), doubled for the certification margin.
    let mut prec = precision_floor
        .max(256)
        .max(((count as f64) * 7.2) as u32 + 128);
    loop {
        let qs = euclid_at(target, prec, count)?;
        if qs.len() >= count {
            let check_prec = prec.saturating_mul(2).min(PREC_CAP);
            let qs2 = euclid_at(target, check_prec, count)?;
            if qs2.len() >= count && qs2[..count] == qs[..count] {
                let exp = CFExpansion::from_quotients(
                    target.canonical(),
                    prec,
                    qs[..count].to_vec(),
                );
                exp.check_invariants()?;
                return Ok(exp);
            }
        }
        if prec >= PREC_CAP {
            return Err(Error::PrecisionExhausted(format!(
                "cf expansion of {} to {} quotients",
                target.canonical(),
                count
            )));
        }
        prec = prec.saturating_mul(2).min(PREC_CAP);
    }
}

/// Expand until some convergent denominator exceeds `bound`.
pub fn cf_expand_past_denominator(
    target: &AlphaTarget,
    bound: &Integer,
    precision_floor: u32,
) -> Result<CFExpansion> {
    // Estimated quotients needed: denominators gain ~1.7 bits per index.
    let mut count = ((bound.significant_bits() as f64) / 1.3) as usize + 32;
    loop {
        let exp = cf_expand(target, count, precision_floor)?;
        if let Some((_, q)) = exp.convergents.last() {
            if q > bound {
                // Trim to the first index past the bound, keeping one
                // extra quotient so a_{i+1} is available for every
                // convergent in range.
                let idx = exp
                    .convergents
                    .iter()
                    .position(|(_, q)| q > bound)
                    .unwrap();
                let keep = (idx + 2).min(exp.len());
                return Ok(CFExpansion::from_quotients(
                    exp.target,
                    exp.precision_bits,
                    exp.quotients[..keep].to_vec(),
                ));
            }
        }
        count = count + count / 2 + 16;
    }
}

fn euclid_at(target: &AlphaTarget, prec: u32, count: usize) -> Result<Vec<Integer>> {
    let enc = target.eval(prec)?;
    let lo = enc.lo_rational();
    let hi = enc.hi_rational();
    Ok(joint_euclid(&lo, &hi, count))
}

fn rational_cf(r: &Rational, max_count: usize) -> Vec<Integer> {
    let mut a = r.numer().clone();
    let mut b = r.denom().clone();
    let mut out = Vec::new();
    while out.len() < max_count && b != 0 {
        let (q, rem) = a.div_rem_floor(b.clone());
        out.push(q);
        a = b;
        b = rem;
    }
    out
}

/// Euclid run jointly on the exact rational endpoints of an enclosure,
/// emitting quotients while both endpoints agree on the floor.
fn joint_euclid(lo: &Rational, hi: &Rational, max_count: usize) -> Vec<Integer> {
    let mut la = lo.numer().clone();
    let mut lb = lo.denom().clone();
    let mut ha = hi.numer().clone();
    let mut hb = hi.denom().clone();
    let mut out = Vec::new();
    while out.len() < max_count {
        let (fl, lr) = la.div_rem_floor(lb.clone());
        let (fh, hr) = ha.div_rem_floor(hb.clone());
        if fl != fh {
            break;
        }
        out.push(fl);
        if lr == 0 || hr == 0 {
            break; // endpoint exhausted
        }
        // new lo = 1/(hi - a) = hb/hr ; new hi = 1/(lo - a) = lb/lr
        la = hb;
        let new_lb = hr;
        ha = lb;
        hb = lr;
        lb = new_lb;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::alpha::AlphaTarget;

    #[test]
    fn rational_expansion() {
        // 649/200 = [3; 4, 12, 4]
        let t = AlphaTarget::Rational(Rational::from((649, 200)));
        let e = cf_expand(&t, 10, 64).unwrap();
        let want: Vec<Integer> = [3, 4, 12, 4].iter().map(|&v| Integer::from(v)).collect();
        assert_eq!(e.quotients, want);
        assert_eq!(e.convergents.last().unwrap().0, 649);
        assert_eq!(e.convergents.last().unwrap().1, 200);
        e.check_invariants().unwrap();
    }

    #[test]
    fn surd_expansion_periodic() {
        // tan^2(pi/12) = 7 - 4*sqrt(3) = [0; 13, 1, 12, 1, 12, ...]
        let t = AlphaTarget::Surd {
            a: Rational::from(7),
            b: Rational::from(-4),
            d: Integer::from(3),
        };
        let e = cf_expand(&t, 9, 64).unwrap();
        let want: Vec<i64> = vec![0, 13, 1, 12, 1, 12, 1, 12, 1];
        let got: Vec<Integer> = want.iter().map(|&v| Integer::from(v)).collect();
        assert_eq!(e.quotients, got);
        e.check_invariants().unwrap();
    }

    #[test]
    fn sqrt2_expansion() {
        let t = AlphaTarget::Surd {
            a: Rational::new(),
            b: Rational::from(1),
            d: Integer::from(2),
        };
        let e = cf_expand(&t, 50, 64).unwrap();
        assert_eq!(e.quotients[0], 1);
        assert!(e.quotients[1..].iter().all(|a| *a == 2));
        e.check_invariants().unwrap();
    }

    #[test]
    fn denominator_bound_expansion() {
        let t = AlphaTarget::Surd {
            a: Rational::new(),
            b: Rational::from(1),
            d: Integer::from(2),
        };
        let bound = Integer::from(10_000_000u64);
        let e = cf_expand_past_denominator(&t, &bound, 64).unwrap();
        let (_, q_last2) = &e.convergents[e.len() - 2];
        assert!(*q_last2 > bound);
    }

    #[test]
    fn negative_alpha() {
        // -sqrt(2) = [-2; 1, 1, 2, 1, 1, 2, ...]... verify a_0 = -2 and invariants
        let t = AlphaTarget::Surd {
            a: Rational::new(),
            b: Rational::from(-1),
            d: Integer::from(2),
        };
        let e = cf_expand(&t, 12, 64).unwrap();
        assert_eq!(e.quotients[0], -2);
        assert!(e.quotients[1..].iter().all(|a| *a >= 1));
        e.check_invariants().unwrap();
    }
}
