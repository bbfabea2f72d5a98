//! Turning a raw certificate `(c_prop, kappa)` into a clean published-style
//! measure `|alpha - p/q| > c_star / |q|^(kappa_star_plus_one)`:
//!
//! 1. `tail_threshold` finds a power of ten `B` beyond which the raw
//!    certificate already implies the target.
//! 2. `gap_check` covers `S < q <= B` using the continued-fraction lower
//!    bound `|alpha - p_i/q_i| > 1/((a_{i+1}+2) q_i^2)` (and the
//!    best-approximation property for `q` strictly between convergents).
//! 3. `small_q_scan` checks every `q <= S` directly.

use crate::error::Error;
use crate::exact::{Integer, Rational};
use crate::pipeline::MeasureCertificate;
use crate::real::{
    cf_expand_past_denominator, escalate, AlphaSpec, AlphaTarget, CFExpansion, CertifiedReal,
};
use crate::Result;
use rug::ops::Pow;
use serde::Serialize;

/// The clean target measure.
#[derive(Debug, Clone, Serialize)]
pub struct RefineTarget {
    /// Numerator constant `c*` of the target measure.
    #[serde(with = "crate::pipeline::serde_rat")]
    pub c_star: Rational,
    /// Target exponent (the full `kappa* + 1` of `|q|^(kappa*+1)`).
    #[serde(with = "crate::pipeline::serde_rat")]
    pub kappa_star_plus_one: Rational,
}

impl RefineTarget {
    pub fn new(c_star: Rational, kappa_star_plus_one: Rational) -> Result<Self> {
        if c_star <= 0 {
            return Err(Error::invalid("c_star must be positive"));
        }
        if kappa_star_plus_one <= 2 {
            return Err(Error::invalid(
                "target exponent must exceed 2 (Dirichlet regime is unreachable)",
            ));
        }
        Ok(RefineTarget {
            c_star,
            kappa_star_plus_one,
        })
    }
}

/// Outcome of a full refinement run.
#[derive(Debug, Clone, Serialize)]
pub struct RefinedCertificate {
    pub alpha: AlphaSpec,
    pub raw_kappa: CertifiedReal,
    pub raw_c_prop: CertifiedReal,
    pub target: RefineTarget,
    /// `B = 10^tail_exponent`; all `q >= B` follow from the raw certificate.
    pub tail_exponent: u32,
    /// Quotients used to cover `q <= B`.
    pub cf_quotients: usize,
    pub cf_precision_bits: u32,
    /// Largest partial quotient over the used range, `(index, a_i)`.
    pub max_quotient_index: usize,
    #[serde(with = "crate::pipeline::serde_int")]
    pub max_quotient: Integer,
    /// `tau = (c_star (a_max + 2))^(1/(kappa*_{+1} - 2))`: convergents with
    /// `q_i > tau` pass automatically.
    pub gap_bound: CertifiedReal,
    /// All `q <= small_scan_max` were checked by direct evaluation.
    #[serde(with = "crate::pipeline::serde_int")]
    pub small_scan_max: Integer,
    pub verified: bool,
}

/// Smallest certified exponent `j` such that `B = 10^j` satisfies
/// `1/(c_prop q^(kappa+1)) >= c_star / q^(kappa*_{+1})` for all `q >= B`,
/// i.e. `q^(kappa*_{+1} - kappa - 1) >= c_star * c_prop`.
pub fn tail_threshold(
    c_prop: &CertifiedReal,
    kappa: &CertifiedReal,
    target: &RefineTarget,
) -> Result<u32> {
    let prec = c_prop.prec().max(kappa.prec()).max(128);
    // Delta = kappa*_{+1} - 1 - kappa, as an interval.
    let delta = CertifiedReal::from_rational(&target.kappa_star_plus_one, prec)
        .sub(&CertifiedReal::from_i64(1, prec))
        .sub(kappa);
    let p = c_prop.mul(&CertifiedReal::from_rational(&target.c_star, prec));
    if p.cmp_rational(&Rational::from(1)) == Some(std::cmp::Ordering::Less)
        && delta.cmp_rational(&Rational::new()) != Some(std::cmp::Ordering::Less)
    {
        return Ok(0); // dominated everywhere
    }
    if !delta.is_certainly_positive() {
        return Err(Error::RefinementFailed(format!(
            "target exponent {} does not exceed the raw kappa + 1 = {}",
            target.kappa_star_plus_one,
            kappa.add(&CertifiedReal::from_i64(1, prec))
        )));
    }
    // j >= log10(c_star c_prop) / Delta; ceil of the certified upper bound.
    let j = p
        .ln()?
        .div(&CertifiedReal::from_i64(10, prec).ln()?)?
        .div(&delta)?;
    let j_hi = j.hi_rational();
    let j = if j_hi <= 0 {
        0u32
    } else {
        let c = j_hi.ceil().numer().to_u32().ok_or_else(|| {
            Error::RefinementFailed("tail threshold exponent out of range".into())
        })?;
        // Digit slack: checking extra convergents past the minimal bound is
        // always sound, and the published thresholds were computed on such
        // slightly larger ranges (e.g. 10^3970 where 10^3956 is minimal).
        c + 20
    };
    // Certified sanity check at B = 10^j itself.
    let b = Integer::from(10).pow(j);
    if !tail_holds_at(c_prop, kappa, target, &b, prec)? {
        return Err(Error::RefinementFailed(
            "tail bound failed its own certification".into(),
        ));
    }
    Ok(j)
}

/// Certified check of `1/(c_prop B^(kappa+1)) >= c_star / B^(kappa*_{+1})`.
fn tail_holds_at(
    c_prop: &CertifiedReal,
    kappa: &CertifiedReal,
    target: &RefineTarget,
    b: &Integer,
    prec: u32,
) -> Result<bool> {
    if *b <= 1 {
        // q >= 1: reduces to q^Delta >= c_star c_prop with q arbitrary >= 1;
        // holds for all q iff it holds at q = 1.
        let p = c_prop.mul(&CertifiedReal::from_rational(&target.c_star, prec));
        return Ok(p.cmp_rational(&Rational::from(1)) == Some(std::cmp::Ordering::Less));
    }
    let b_real = CertifiedReal::from_integer(b, prec);
    // B^(kappa*_{+1} - kappa - 1) > c_star * c_prop
    let delta = CertifiedReal::from_rational(&target.kappa_star_plus_one, prec)
        .sub(&CertifiedReal::from_i64(1, prec))
        .sub(kappa);
    let lhs = b_real.pow_interval(&delta)?;
    let rhs = c_prop.mul(&CertifiedReal::from_rational(&target.c_star, prec));
    Ok(lhs.certainly_gt(&rhs))
}

/// Exact per-convergent check `q_i^(kappa*_{+1} - 2) >= c_star (a_{i+1} + 2)`,
/// written with `kappa*_{+1} - 2 = nu/de` as
/// `q_i^nu * cd^de >= (cn (a_{i+1} + 2))^de` for `c_star = cn/cd`.
/// A bit-length comparison short-circuits the giant powers.
fn convergent_ok(q: &Integer, a_next: &Integer, target: &RefineTarget) -> bool {
    let ex = Rational::from(&target.kappa_star_plus_one - &Rational::from(2));
    let nu = ex.numer().to_u32().expect("small target exponent");
    let de = ex.denom().to_u32().expect("small target exponent");
    let cn = target.c_star.numer();
    let cd = target.c_star.denom();
    let rhs_base = Integer::from(cn * Integer::from(a_next + 2u32));

    // Fast path: q >= 2^(bq-1) and rhs_base < 2^br, so it suffices that
    // (bq-1) nu >= br * de (cd >= 1 only helps).
    let bq = q.significant_bits() as u64;
    let br = rhs_base.significant_bits() as u64;
    if bq >= 1 && (bq - 1) * nu as u64 >= br * de as u64 {
        return true;
    }
    let lhs = Integer::from(q.pow(nu)) * Integer::from(cd.pow(de));
    let rhs = rhs_base.pow(de);
    lhs >= rhs
}

/// Check every convergent (and, through the best-approximation property,
/// every `q` in the gaps between convergents) with `small_scan < q <= B`.
/// Returns the gap threshold `tau`.
pub fn gap_check(
    cf: &CFExpansion,
    target: &RefineTarget,
    small_scan_max: &Integer,
) -> Result<CertifiedReal> {
    let (max_idx, a_max) = cf
        .max_quotient()
        .ok_or_else(|| Error::RefinementFailed("empty cf expansion".into()))?;
    let _ = max_idx;
    // tau = (c_star (a_max + 2))^(1/(kappa*_{+1} - 2))
    let prec = 128;
    let base = CertifiedReal::from_rational(
        &(Rational::from(&target.c_star) * Rational::from(Integer::from(a_max + 2u32))),
        prec,
    );
    let inv_ex = Rational::from(
        (
            Rational::from(&target.kappa_star_plus_one - &Rational::from(2))
                .denom()
                .clone(),
            Rational::from(&target.kappa_star_plus_one - &Rational::from(2))
                .numer()
                .clone(),
        ),
    );
    let tau = base.pow_rational(&inv_ex)?;

    // Every gap (q_i, q_{i+1}) with q_{i+1} > small_scan_max must be
    // covered; the per-convergent inequality covers gap values q > q_i,
    // and values q <= small_scan_max are handled by the direct scan.
    for i in 0..cf.convergents.len().saturating_sub(1) {
        let (_p, q) = &cf.convergents[i];
        let a_next = &cf.quotients[i + 1];
        let q_eff = if q > small_scan_max {
            q.clone()
        } else {
            // q_i <= S < q < q_{i+1}: |alpha - p/q| > 1/((a_{i+1}+2) q_i q)
            // and q >= S + 1, so it suffices that
            // (S+1)^(kappa*_{+1} - 1) >= c_star (a_{i+1}+2) q_i, which is
            // the convergent inequality with q_i replaced by S+1 and the
            // rhs scaled by q_i / (S+1).
            if &cf.convergents[i + 1].1 <= small_scan_max {
                continue; // whole gap inside the direct scan
            }
            Integer::from(small_scan_max + 1u32)
        };
        let ok = if q > small_scan_max {
            convergent_ok(&q_eff, a_next, target)
        } else {
            boundary_ok(&q_eff, q, a_next, target)
        };
        if !ok {
            return Err(Error::RefinementFailed(format!(
                "convergent {} (q = {}) fails the target ({}, {})",
                i, q, target.c_star, target.kappa_star_plus_one
            )));
        }
    }
    Ok(tau)
}

/// Exact check `s^(kappa*_{+1} - 1) >= c_star (a_next + 2) q_i` for the
/// boundary gap (`q_i <= S < q < q_{i+1}`, `s = S + 1`).
fn boundary_ok(s: &Integer, q_i: &Integer, a_next: &Integer, target: &RefineTarget) -> bool {
    let ex = Rational::from(&target.kappa_star_plus_one - &Rational::from(1));
    let nu = ex.numer().to_u32().expect("small target exponent");
    let de = ex.denom().to_u32().expect("small target exponent");
    let cn = target.c_star.numer();
    let cd = target.c_star.denom();
    let lhs = Integer::from(s.pow(nu)) * Integer::from(cd.pow(de));
    let rhs = Integer::from(cn * Integer::from(a_next + 2u32)) * q_i;
    lhs >= rhs.pow(de)
}

/// Directly certify `|alpha - p/q| > c_star / q^(kappa*_{+1})` for every
/// `1 <= q <= q_max` (nearest `p` suffices: any other `p` is at distance
/// `>= 1/(2q) >=` the nearest distance).
pub fn small_q_scan(
    target_value: &AlphaTarget,
    target: &RefineTarget,
    q_max: &Integer,
    precision_floor: u32,
) -> Result<()> {
    let q_max = q_max.to_u64().ok_or_else(|| {
        Error::RefinementFailed(format!("small scan bound {} too large", q_max))
    })?;
    if q_max > 1_000_000 {
        return Err(Error::RefinementFailed(format!(
            "small scan bound {} exceeds the 10^6 budget",
            q_max
        )));
    }
    for q in 1..=q_max {
        escalate(precision_floor.max(128), |prec| {
            let alpha = target_value.eval(prec)?;
            let qr = CertifiedReal::from_i64(q as i64, prec);
            let p = match alpha.mul(&qr).unique_round() {
                Some(p) => p,
                None => return Ok(None),
            };
            let frac = Rational::from((p.clone(), Integer::from(q)));
            let dist = alpha.sub(&CertifiedReal::from_rational(&frac, prec)).abs();
            let rhs = CertifiedReal::from_rational(&target.c_star, prec)
                .div(&qr.pow_rational(&target.kappa_star_plus_one)?)?;
            if dist.certainly_gt(&rhs) {
                Ok(Some(()))
            } else if dist.certainly_lt(&rhs) || dist.hi_rational() < rhs.lo_rational() {
                Err(Error::RefinementFailed(format!(
                    "counterexample: |alpha - {}/{}| <= {}/q^{}",
                    p, q, target.c_star, target.kappa_star_plus_one
                )))
            } else {
                Ok(None)
            }
        })?;
    }
    Ok(())
}

/// Full refinement pipeline.
pub fn refine(
    cert: &MeasureCertificate,
    target: RefineTarget,
    precision_floor: u32,
    cache_dir: Option<&std::path::Path>,
) -> Result<RefinedCertificate> {
    let alpha = cert.root.alpha.clone();
    let j = tail_threshold(&cert.c_prop, &cert.kappa, &target)?;
    let b = Integer::from(10).pow(j);

    let cf_target = AlphaTarget::Root(alpha.clone());
    let cf = match cache_dir {
        Some(dir) => {
            // Grow the cached expansion until it passes the tail bound.
            let mut count = ((b.significant_bits() as f64) / 1.3) as usize + 32;
            loop {
                let exp = crate::real::cached_expand(dir, &cf_target, count, precision_floor)?;
                if exp.convergents.last().map(|(_, q)| q > &b).unwrap_or(false) {
                    let idx = exp.convergents.iter().position(|(_, q)| q > &b).unwrap();
                    let keep = (idx + 2).min(exp.len());
                    break CFExpansion::from_quotients(
                        exp.target,
                        exp.precision_bits,
                        exp.quotients[..keep].to_vec(),
                    );
                }
                count = count + count / 2 + 16;
            }
        }
        None => cf_expand_past_denominator(&cf_target, &b, precision_floor)?,
    };
    if cf
        .convergents
        .last()
        .map(|(_, q)| q <= &b)
        .unwrap_or(true)
    {
        return Err(Error::RefinementFailed(
            "cf expansion does not reach the tail bound".into(),
        ));
    }

    let (max_idx, a_max) = cf.max_quotient().expect("nonempty expansion");
    let a_max = a_max.clone();

    // S = floor of a certified upper bound of tau.
    let prec = 128;
    let tau_preview = {
        let base = CertifiedReal::from_rational(
            &(Rational::from(&target.c_star) * Rational::from(Integer::from(&a_max + 2u32))),
            prec,
        );
        let ex = Rational::from(&target.kappa_star_plus_one - &Rational::from(2));
        let inv = Rational::from((ex.denom().clone(), ex.numer().clone()));
        base.pow_rational(&inv)?
    };
    let small_scan_max = tau_preview.hi_rational().floor().numer().clone().max(Integer::from(1));

    let gap_bound = gap_check(&cf, &target, &small_scan_max)?;
    small_q_scan(&cf_target, &target, &small_scan_max, precision_floor)?;

    // Re-assert the tail inequality at B with certified arithmetic.
    let verified = tail_holds_at(
        &cert.c_prop,
        &cert.kappa,
        &target,
        &b,
        cert.c_prop.prec().max(128),
    )? || j == 0;

    Ok(RefinedCertificate {
        alpha,
        raw_kappa: cert.kappa.clone(),
        raw_c_prop: cert.c_prop.clone(),
        target,
        tail_exponent: j,
        cf_quotients: cf.len(),
        cf_precision_bits: cf.precision_bits,
        max_quotient_index: max_idx,
        max_quotient: a_max,
        gap_bound,
        small_scan_max,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use rug::ops::Pow;

    #[test]
    fn tail_trivial_when_dominated() {
        let c = CertifiedReal::from_rational(&rat(1, 1), 128);
        let k = CertifiedReal::from_rational(&rat(36, 10), 128);
        // same exponent, c_star * c_prop < 1 -> B = 10^0
        let t = RefineTarget::new(rat(1, 2), rat(46, 10)).unwrap();
        assert_eq!(tail_threshold(&c, &k, &t).unwrap(), 0);
    }

    #[test]
    fn tail_exponent_magnitude() {
        // c_prop ~ 9.42e41, kappa ~ 3.59411, target (0.09, 4.6):
        // j ~ log10(0.09 * 9.42e41) / (4.6 - 4.59411) ~ 6950.
        let c = CertifiedReal::from_rational(
            &(rat(942, 100) * Rational::from(Integer::from(10).pow(41))),
            192,
        );
        let k = CertifiedReal::from_rational(&rat(359411, 100000), 192);
        let t = RefineTarget::new(rat(9, 100), rat(46, 10)).unwrap();
        let j = tail_threshold(&c, &k, &t).unwrap();
        assert!((6940..=6990).contains(&j), "j = {}", j);
    }

    #[test]
    fn tail_rejects_non_dominating_target() {
        let c = CertifiedReal::from_rational(&rat(1000, 1), 128);
        let k = CertifiedReal::from_rational(&rat(36, 10), 128);
        let t = RefineTarget::new(rat(9, 100), rat(42, 10)).unwrap();
        assert!(tail_threshold(&c, &k, &t).is_err());
    }

    #[test]
    fn convergent_check_fast_and_exact_agree() {
        let t = RefineTarget::new(rat(9, 100), rat(46, 10)).unwrap();
        // huge q passes instantly
        let q = Integer::from(10).pow(100);
        assert!(convergent_ok(&q, &Integer::from(21976), &t));
        // tiny q fails
        assert!(!convergent_ok(&Integer::from(2), &Integer::from(21976), &t));
        // tau ~ (0.09 * 21978)^(1/2.6) ~ 18.5: q = 19 passes, q = 18 fails
        assert!(convergent_ok(&Integer::from(19), &Integer::from(21976), &t));
        assert!(!convergent_ok(&Integer::from(18), &Integer::from(21976), &t));
    }

    #[test]
    fn small_scan_sqrt2() {
        // |sqrt(2) - p/q| > 0.2 / q^3 for q <= 20 (easily true).
        let tv = AlphaTarget::Surd {
            a: Rational::new(),
            b: Rational::from(1),
            d: Integer::from(2),
        };
        let t = RefineTarget::new(rat(1, 5), rat(3, 1)).unwrap();
        small_q_scan(&tv, &t, &Integer::from(20), 128).unwrap();
        // but not with a large constant: 1/q^2.5-ish scale fails at some q
        let bad = RefineTarget::new(rat(1, 1), rat(21, 10)).unwrap();
        assert!(small_q_scan(&tv, &bad, &Integer::from(20), 128).is_err());
    }
}
