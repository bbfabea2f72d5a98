//! The parametric `n = 4` and `n = 5` families: closed-form measures for
//! `sqrt(a_1 b) tan(angle)` built from one parameter `b`, cross-checked
//! against the direct pipeline.

use crate::error::Error;
use crate::exact::{squarefree_split, Integer, Rational};
use crate::hyperg::{script_nmn, CDConstants, PrimePowerValue};
use crate::pipeline::{certify, InstanceInput, MeasureCertificate};
use crate::real::{cf_expand, escalate, AlphaTarget, CertifiedReal};
use crate::Result;
use rug::ops::Pow;
use serde::Serialize;

/// The four family branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    /// `n = 4`, target `sqrt(a_1 b) tan(pi/8)`.
    N4K1,
    /// `n = 4`, target `sqrt(a_1 b) tan(3 pi/8)`.
    N4K3,
    /// `n = 5`, target `sqrt(a_1 b) tan(2 pi/5)`.
    N5K1,
    /// `n = 5`, target `sqrt(a_1 b) tan(4 pi/5)`.
    N5K2,
}

impl FamilyKind {
    pub fn n(self) -> u32 {
        match self {
            FamilyKind::N4K1 | FamilyKind::N4K3 => 4,
            FamilyKind::N5K1 | FamilyKind::N5K2 => 5,
        }
    }

    pub fn k(self) -> u32 {
        match self {
            FamilyKind::N4K1 | FamilyKind::N5K1 => 1,
            FamilyKind::N4K3 => 3,
            FamilyKind::N5K2 => 2,
        }
    }

    /// The tan angle as a fraction `(num, den)` of pi.
    pub fn angle(self) -> (Integer, Integer) {
        match self {
            FamilyKind::N4K1 => (Integer::from(1), Integer::from(8)),
            FamilyKind::N4K3 => (Integer::from(3), Integer::from(8)),
            FamilyKind::N5K1 => (Integer::from(2), Integer::from(5)),
            FamilyKind::N5K2 => (Integer::from(4), Integer::from(5)),
        }
    }

    /// Smallest admissible `b`.
    pub fn b_floor(self) -> u32 {
        match self.n() {
            4 => 6,
            _ => 13,
        }
    }

    /// The pipeline root index that the family target corresponds to.
    pub fn expected_alpha_k(self) -> u32 {
        match self {
            FamilyKind::N4K1 => 0, // angle (2*0+1)pi/8 = pi/8
            FamilyKind::N4K3 => 1, // angle 3pi/8
            FamilyKind::N5K1 => 1, // angle 2pi/5
            // The 4pi/5 branch targets a negative number; with x = a1 a2 > 0
            // the pipeline converges to its negation, the k = 3 root
            // sqrt(a1 b) tan(6pi/5) = -sqrt(a1 b) tan(4pi/5). The two
            // measures are identical (|alpha - p/q| = |-alpha - (-p)/q|).
            FamilyKind::N5K2 => 3,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "4:1" | "n4k1" => Ok(FamilyKind::N4K1),
            "4:3" | "n4k3" => Ok(FamilyKind::N4K3),
            "5:1" | "n5k1" => Ok(FamilyKind::N5K1),
            "5:2" | "n5k2" => Ok(FamilyKind::N5K2),
            other => Err(Error::invalid(format!(
                "unknown family {:?} (use 4:1, 4:3, 5:1 or 5:2)",
                other
            ))),
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (num, den) = self.angle();
        write!(f, "n={} angle {}pi/{}", self.n(), num, den)
    }
}

/// Does the certified exponent beat the trivial Liouville exponent?
#[derive(Debug, Clone, Serialize)]
pub struct ImprovementVerdict {
    pub kappa_plus_one: CertifiedReal,
    pub liouville_exponent: u32,
    pub improves: bool,
}

pub fn improvement_verdict(kappa: &CertifiedReal, degree: u32) -> ImprovementVerdict {
    let one = Rational::from(1);
    let kp1 = kappa.add(&CertifiedReal::from_rational(&one, kappa.prec()));
    let improves =
        kp1.cmp_rational(&Rational::from(degree)) == Some(std::cmp::Ordering::Less);
    ImprovementVerdict {
        kappa_plus_one: kp1,
        liouville_exponent: degree,
        improves,
    }
}

/// One family member with the theorem-form constants and the direct
/// pipeline cross-check.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyCertificate {
    pub kind: FamilyKind,
    pub n: u32,
    pub k: u32,
    pub b: u32,
    #[serde(with = "crate::pipeline::serde_int")]
    pub a1: Integer,
    #[serde(with = "crate::pipeline::serde_int")]
    pub a2: Integer,
    /// `epsilon = a_1 a_2^2 - b tan^2(angle)`.
    pub eps: CertifiedReal,
    pub script_n: String,
    /// Theorem-form exponent; the measure is `|alpha - p/q| > 1/(c |q|^(kappa+1))`.
    pub kappa_thm: CertifiedReal,
    /// Theorem-statement denominator constant.
    pub c_thm: CertifiedReal,
    /// The sharper per-branch constant from the proofs (equals `c_thm`
    /// where no sharper bound is derived).
    pub c_thm_sharp: CertifiedReal,
    pub hypotheses_ok: bool,
    pub verdict: ImprovementVerdict,
    pub crosscheck: MeasureCertificate,
}

/// `script_n_case`: the explicit prime-power content bound of the theorems.
pub fn script_n_case(
    kind: FamilyKind,
    a1: &Integer,
    a2: &Integer,
    b: &Integer,
) -> PrimePowerValue {
    let a1a2b_even =
        a1.is_even() || a2.is_even() || b.is_even();
    let two = Integer::from(2);
    let mod4_match = {
        let four = Integer::from(4);
        use rug::ops::RemRounding;
        Integer::from(a1.rem_euc(&four)) == Integer::from(b.rem_euc(&four))
    };
    let _ = two;
    match kind.n() {
        4 => {
            let mut v = PrimePowerValue::one();
            if !a1a2b_even {
                // 4 or 8
                let e = if mod4_match { 2 } else { 3 };
                v.insert(Integer::from(2), Rational::from(e));
            }
            v
        }
        _ => {
            let mut v = PrimePowerValue::one();
            // N_1: powers of 5
            if a1.is_divisible(&Integer::from(5)) {
                v.insert(Integer::from(5), Rational::from(1));
            } else if a2.is_divisible(&Integer::from(5)) {
                v.insert(Integer::from(5), Rational::from((5, 4)));
            }
            // N_2: powers of 2 (1, 4*sqrt(2) = 2^(5/2), or 32 = 2^5)
            if !a1a2b_even {
                let e = if mod4_match {
                    Rational::from((5, 2))
                } else {
                    Rational::from(5)
                };
                v.insert(Integer::from(2), e);
            }
            v
        }
    }
}

/// Coefficients of the kappa formula: `kappa = log(qn * b^en / N) /
/// log(N / (qd * b^ed * eps^2))`, with rational `qn, qd` and exponents
/// in halves.
struct KappaCoeffs {
    qn: Rational,
    en: Rational,
    qd: Rational,
    ed: Rational,
}

/// Coefficients of a `c` bound: `c < qf * b^ef / N * (qb * b^3)^kappa`.
struct CCoeffs {
    qf: Rational,
    ef: Rational,
    qb: Rational,
}

fn kappa_coeffs(kind: FamilyKind) -> KappaCoeffs {
    let r = |n: i64, d: i64| Rational::from((n, d));
    match kind {
        FamilyKind::N4K1 => KappaCoeffs {
            qn: r(1476, 100),
            en: r(2, 1),
            qd: r(6439, 100),
            ed: r(0, 1),
        },
        FamilyKind::N4K3 => KappaCoeffs {
            qn: r(4683, 10),
            en: r(2, 1),
            qd: r(1705, 1000),
            ed: r(0, 1),
        },
        FamilyKind::N5K1 => KappaCoeffs {
            qn: r(5690, 1),
            en: r(5, 2),
            qd: r(847, 100),
            ed: r(1, 2),
        },
        FamilyKind::N5K2 => KappaCoeffs {
            qn: r(5127, 100),
            en: r(5, 2),
            qd: r(5775, 100),
            ed: r(1, 2),
        },
    }
}

fn c_coeffs(kind: FamilyKind) -> (CCoeffs, CCoeffs) {
    let r = |n: i64, d: i64| Rational::from((n, d));
    let pow10 = |c: i64, e: u32| Rational::from(c) * Rational::from(Integer::from(10).pow(e));
    let n4_statement = CCoeffs {
        qf: pow10(2, 11),
        ef: r(5, 1),
        qb: pow10(21, 7),
    };
    let n5_statement = CCoeffs {
        qf: pow10(34, 11),
        ef: r(9, 2),
        qb: pow10(23, 8),
    };
    match kind {
        FamilyKind::N4K1 => (
            n4_statement,
            CCoeffs {
                qf: pow10(24, 6),
                ef: r(4, 1),
                qb: pow10(4, 5),
            },
        ),
        FamilyKind::N4K3 => (
            n4_statement,
            CCoeffs {
                qf: pow10(2, 11),
                ef: r(5, 1),
                qb: pow10(208, 6),
            },
        ),
        FamilyKind::N5K1 => (
            CCoeffs {
                qf: pow10(34, 11),
                ef: r(9, 2),
                qb: pow10(23, 8),
            },
            n5_statement,
        ),
        FamilyKind::N5K2 => (
            n5_statement,
            CCoeffs {
                qf: pow10(7, 8),
                ef: r(9, 2),
                qb: pow10(48, 5),
            },
        ),
    }
}

fn eval_c(
    co: &CCoeffs,
    b_real: &CertifiedReal,
    script_n: &CertifiedReal,
    kappa: &CertifiedReal,
    prec: u32,
) -> Result<CertifiedReal> {
    let front = CertifiedReal::from_rational(&co.qf, prec)
        .mul(&b_real.pow_rational(&co.ef)?)
        .div(script_n)?;
    let base = CertifiedReal::from_rational(&co.qb, prec).mul(&b_real.powi(3));
    Ok(front.mul(&base.pow_interval(kappa)?))
}

/// Just the bracketing step: `a = [b tan^2(angle)]` (nearest integer),
/// its squarefree split `a = a_1 a_2^2`, and `eps = a - b tan^2(angle)`.
/// Useful when the theorem itself is inapplicable (e.g. b = 9, where eps
/// is too large for a positive kappa denominator) but eps is still wanted.
pub fn family_bracket(
    kind: FamilyKind,
    b: u32,
    precision_floor: u32,
) -> Result<(Integer, Integer, CertifiedReal)> {
    let (num, den) = kind.angle();
    let b_int = Integer::from(b);
    let a = escalate(precision_floor.max(96), |prec| {
        let t2 = CertifiedReal::tan_pi(&num, &den, prec)?.powi(2);
        let bt = t2.mul(&CertifiedReal::from_integer(&b_int, prec));
        Ok(bt.unique_round())
    })?;
    if a <= 0 {
        return Err(Error::degenerate(format!("bracket b tan^2 = {} <= 0", a)));
    }
    let (a1, a2) = squarefree_split(&a);
    let eps = escalate(precision_floor.max(96), |prec| {
        let t2 = CertifiedReal::tan_pi(&num, &den, prec)?.powi(2);
        let bt = t2.mul(&CertifiedReal::from_integer(&b_int, prec));
        let eps = CertifiedReal::from_integer(&a, prec).sub(&bt);
        Ok(if eps.is_tight(40) { Some(eps) } else { None })
    })?;
    Ok((a1, a2, eps))
}

/// Build the family member for parameter `b`.
///
/// Hypothesis failures (`gcd(a_1 a_2^2, b) != 1`, `|eps| >= 1/2`, or a
/// non-positive kappa log-denominator) come back as `NotApplicable`.
pub fn family_instance(kind: FamilyKind, b: u32, precision_floor: u32) -> Result<FamilyCertificate> {
    if b < kind.b_floor() {
        return Err(Error::invalid(format!(
            "b = {} below the family floor {}",
            b,
            kind.b_floor()
        )));
    }
    let (num, den) = kind.angle();
    let b_int = Integer::from(b);

    // a = nearest integer to b tan^2(angle) (the bracket of the theorem
    // statements; the worked values, e.g. eps = 0.4558 for b = 9, pin the
    // nearest-integer reading rather than the floor).
    let a = escalate(precision_floor.max(96), |prec| {
        let t2 = CertifiedReal::tan_pi(&num, &den, prec)?.powi(2);
        let bt = t2.mul(&CertifiedReal::from_integer(&b_int, prec));
        Ok(bt.unique_round())
    })?;
    if a <= 0 {
        return Err(Error::degenerate(format!("bracket b tan^2 = {} <= 0", a)));
    }
    let (a1, a2) = squarefree_split(&a);
    debug_assert!(a1 > 0);

    if Integer::from(a.gcd_ref(&b_int)) != 1 {
        return Err(Error::not_applicable(format!(
            "gcd(a_1 a_2^2, b) = gcd({}, {}) != 1",
            a, b
        )));
    }

    let script_n = script_n_case(kind, &a1, &a2, &b_int);
    let kc = kappa_coeffs(kind);
    let (c_stmt, c_sharp) = c_coeffs(kind);

    let half = Rational::from((1u32, 2u32));
    let cert = escalate(precision_floor.max(128), |prec| {
        let t2 = CertifiedReal::tan_pi(&num, &den, prec)?.powi(2);
        let b_real = CertifiedReal::from_integer(&b_int, prec);
        let eps = CertifiedReal::from_integer(&a, prec).sub(&t2.mul(&b_real));
        if eps.contains_zero() {
            return Ok(None);
        }
        let abs_eps = eps.abs();
        match abs_eps.cmp_rational(&half) {
            Some(std::cmp::Ordering::Less) => {}
            Some(_) => {
                return Err(Error::not_applicable(format!(
                    "|eps| = {} >= 1/2",
                    abs_eps
                )))
            }
            None => return Ok(None),
        }

        let sn = script_n.value(prec)?;
        let log_num = CertifiedReal::from_rational(&kc.qn, prec)
            .mul(&b_real.pow_rational(&kc.en)?)
            .div(&sn)?
            .ln()?;
        let den_arg = sn.div(
            &CertifiedReal::from_rational(&kc.qd, prec)
                .mul(&b_real.pow_rational(&kc.ed)?)
                .mul(&abs_eps.powi(2)),
        )?;
        match den_arg.cmp_rational(&Rational::from(1)) {
            Some(std::cmp::Ordering::Greater) => {}
            Some(_) => {
                return Err(Error::not_applicable(
                    "theorem inapplicable: kappa log-denominator not positive \
                     (use the direct certificate)",
                ))
            }
            None => return Ok(None),
        }
        let kappa = log_num.div(&den_arg.ln()?)?;
        let c_thm = eval_c(&c_stmt, &b_real, &sn, &kappa, prec)?;
        let c_thm_sharp = eval_c(&c_sharp, &b_real, &sn, &kappa, prec)?;
        if !kappa.is_tight(40) || !c_thm.is_tight(40) {
            return Ok(None);
        }
        Ok(Some((eps, kappa, c_thm, c_thm_sharp)))
    })?;
    let (eps, kappa_thm, c_thm, c_thm_sharp) = cert;

    // Direct pipeline cross-check on the same instance.
    let t = -Integer::from(&a1 * &b_int);
    let x = Integer::from(&a1 * &a2);
    let cd = CDConstants::builtin(kind.n()).expect("builtin constants for n = 4, 5");
    let inst = InstanceInput::standard(kind.n(), t, x, cd)?;
    let crosscheck = certify(&inst, precision_floor)?;
    if crosscheck.root.alpha.k != kind.expected_alpha_k() {
        return Err(Error::degenerate(format!(
            "pipeline identified root index {} but the family targets {}",
            crosscheck.root.alpha.k,
            kind.expected_alpha_k()
        )));
    }

    // Liouville exponent: deg(alpha) = n for even n, n - 1 for odd n.
    let degree = if kind.n() % 2 == 0 {
        kind.n()
    } else {
        kind.n() - 1
    };
    let verdict = improvement_verdict(&kappa_thm, degree);

    Ok(FamilyCertificate {
        kind,
        n: kind.n(),
        k: kind.k(),
        b,
        a1,
        a2,
        eps,
        script_n: script_n.to_string(),
        kappa_thm,
        c_thm,
        c_thm_sharp,
        hypotheses_ok: true,
        verdict,
        crosscheck,
    })
}

/// Lemma-level lower bound on the content: `|g| N_{m,4} >= 2 N a_1^2`
/// (n = 4) or `|g| N_{m,5} >= N a_1^(5/2)` (n = 5), checked exactly on
/// prime-power values.
pub fn lemma4_bound_check(cert: &FamilyCertificate) -> bool {
    let g = &cert.crosscheck.ladder.g;
    let g_abs = PrimePowerValue::from_rational_abs(&g.q)
        .mul(&PrimePowerValue::from_integer_abs(&g.d).pow(&Rational::from((1, 2))));
    let lhs = g_abs.mul(&script_nmn(&cert.crosscheck.ladder.m, cert.n));
    let script_n = script_n_case(cert.kind, &cert.a1, &cert.a2, &Integer::from(cert.b));
    let a1sq = PrimePowerValue::from_integer_abs(&cert.a1);
    let rhs = if cert.n == 4 {
        script_n
            .mul(&PrimePowerValue::from_integer_abs(&Integer::from(2)))
            .mul(&a1sq.pow(&Rational::from(2)))
    } else {
        script_n.mul(&a1sq.pow(&Rational::from((5, 2))))
    };
    lhs.cmp(&rhs) != std::cmp::Ordering::Less
}

/// Theorem-vs-pipeline conservativity: the closed-form constants must be
/// at least as weak as the directly certified ones.
pub fn conservativity_check(cert: &FamilyCertificate) -> bool {
    cert.kappa_thm.certainly_gt(&cert.crosscheck.kappa)
        && cert.c_thm.certainly_gt(&cert.crosscheck.c_prop)
}

/// Family members whose `b` are convergent denominators of `tan^2(angle)`.
pub fn enumerate_from_convergents(
    kind: FamilyKind,
    max_terms: usize,
    precision_floor: u32,
) -> Result<Vec<FamilyCertificate>> {
    let (num, den) = kind.angle();
    let target = AlphaTarget::TanSquared {
        scale: Integer::from(1),
        num,
        den,
    };
    let cf = cf_expand(&target, max_terms, precision_floor)?;
    let mut out = Vec::new();
    for (_p, q) in &cf.convergents {
        let Some(b) = q.to_u32() else { break };
        if b < kind.b_floor() {
            continue;
        }
        match family_instance(kind, b, precision_floor) {
            Ok(c) => out.push(c),
            Err(Error::NotApplicable(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b9_epsilon_pinned() {
        // (4, 1, b = 9): bracket = 2, eps = 0.4558... -- too large for the
        // theorem's kappa denominator, so only the bracket is available.
        let (a1, a2, eps) = family_bracket(FamilyKind::N4K1, 9, 128).unwrap();
        assert_eq!(a1, Integer::from(2));
        assert_eq!(a2, Integer::from(1));
        let lo = Rational::from((4548, 10000));
        let hi = Rational::from((4568, 10000));
        assert_eq!(eps.cmp_rational(&lo), Some(std::cmp::Ordering::Greater));
        assert_eq!(eps.cmp_rational(&hi), Some(std::cmp::Ordering::Less));
        assert!(matches!(
            family_instance(FamilyKind::N4K1, 9, 128),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn b6_bracket_and_sign() {
        // (4, 1, b = 6): bracket = 1, eps = 1 - 6 tan^2(pi/8) = -0.0294...
        let cert = family_instance(FamilyKind::N4K1, 6, 128).unwrap();
        assert_eq!(cert.a1, Integer::from(1));
        assert_eq!(cert.a2, Integer::from(1));
        assert_eq!(
            cert.eps.cmp_rational(&Rational::new()),
            Some(std::cmp::Ordering::Less)
        );
        assert_eq!(
            cert.eps.cmp_rational(&Rational::from((-3, 100))),
            Some(std::cmp::Ordering::Greater)
        );
        assert!(lemma4_bound_check(&cert));
    }

    #[test]
    fn script_n_tables() {
        // n = 4, a1 a2 b even -> 1
        let one = script_n_case(
            FamilyKind::N4K1,
            &Integer::from(2),
            &Integer::from(1),
            &Integer::from(9),
        );
        assert!(one.is_one());
        // n = 4, all odd, a1 = 1, b = 5: 1 mod 4 != 5 mod 4? 5 mod 4 = 1 -> match -> 4
        let four = script_n_case(
            FamilyKind::N4K1,
            &Integer::from(1),
            &Integer::from(1),
            &Integer::from(5),
        );
        assert_eq!(four.as_rational(), Some(Rational::from(4)));
        // n = 4, all odd, mismatch -> 8
        let eight = script_n_case(
            FamilyKind::N4K1,
            &Integer::from(3),
            &Integer::from(1),
            &Integer::from(5),
        );
        assert_eq!(eight.as_rational(), Some(Rational::from(8)));
        // n = 5, 5 | a2 -> 5^(5/4); times N_2 = 1 when even appears
        let n1 = script_n_case(
            FamilyKind::N5K1,
            &Integer::from(1),
            &Integer::from(5),
            &Integer::from(4),
        );
        assert_eq!(n1.as_rational(), None); // irrational 5^(5/4)
        assert_eq!(
            n1.pow(&Rational::from(4)).as_rational(),
            Some(Rational::from(Integer::from(5).pow(5)))
        );
    }

    #[test]
    fn n5_family_member() {
        let cert = family_instance(FamilyKind::N5K1, 13, 128).unwrap();
        // b tan^2(2pi/5) = 13 * 9.472... = 123.14 -> a = 123 = 3 * 41 squarefree
        assert_eq!(cert.a1, Integer::from(123));
        assert_eq!(cert.a2, Integer::from(1));
        assert!(lemma4_bound_check(&cert));
        assert!(conservativity_check(&cert));
    }

    #[test]
    fn conservativity_small_b() {
        for b in 6..=20u32 {
            match family_instance(FamilyKind::N4K3, b, 128) {
                Ok(cert) => {
                    assert!(conservativity_check(&cert), "b = {}", b);
                    assert!(lemma4_bound_check(&cert), "b = {}", b);
                }
                Err(Error::NotApplicable(_)) => {}
                Err(e) => panic!("b = {}: {}", b, e),
            }
        }
    }
}
