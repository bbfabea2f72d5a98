//! The measure pipeline: from an instance `(n, t, x)` (plus the auxiliary
//! algebraic data `gamma_1`, `beta_1` and a validated `(C, D)` pair) to a
//! certified effective irrationality measure
//! `|alpha - p/q| > 1 / (c * |q|^(kappa+1))`.
//!
//! The stages are exact where the mathematics is exact (the `U`/`Z` pair,
//! the gcd ladder, the content `g`, the multiplier `m`) and interval-based
//! with directed rounding where real numbers appear (`E`, `Q`, `kappa`,
//! `c`). Precision escalates automatically until every comparison that
//! gates applicability is certified.

pub mod serde_int {
    //! Big integers serialise as decimal strings (JSON numbers lose
    //! precision past 2^53).
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
        use serde::de::Error as _;
        let text = String::deserialize(d)?;
        Integer::from_str_radix(&text, 10).map_err(D::Error::custom)
    }
}

pub mod serde_rat {
    //! Rationals serialise as `"p/q"` (or `"p"`) strings.
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        use serde::de::Error as _;
        use std::str::FromStr;
        let text = String::deserialize(d)?;
        Rational::from_str(&text).map_err(D::Error::custom)
    }
}

use crate::error::Error;
use crate::exact::{core_part, is_integer, Integer, QuadElement, Rational, SurdScalar};
use crate::hyperg::{script_nmn, CDConstants, PrimePowerValue};
use crate::real::{escalate, AlphaSpec, CertifiedReal};
use crate::Result;
use rug::ops::RemRounding;
use serde::Serialize;

/// One pipeline instance.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceInput {
    pub n: u32,
    #[serde(with = "serde_int")]
    pub t: Integer,
    #[serde(with = "serde_int")]
    pub x: Integer,
    pub gamma1: QuadElement,
    pub beta1: QuadElement,
    pub cd: CDConstants,
}

impl InstanceInput {
    /// The standard setup used throughout: `gamma_1 = 1`, `beta_1 = sqrt(t)`.
    pub fn standard(n: u32, t: Integer, x: Integer, cd: CDConstants) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("pipeline needs n >= 3"));
        }
        if t >= 0 {
            return Err(Error::invalid(
                "this pipeline handles t < 0 (real roots sqrt(|t|) tan)",
            ));
        }
        let gamma1 = QuadElement::new(Rational::from(1), Rational::new(), t.clone());
        let beta1 = QuadElement::new(Rational::new(), Rational::from(1), t.clone());
        Ok(InstanceInput {
            n,
            t,
            x,
            gamma1,
            beta1,
            cd,
        })
    }
}

/// The conjugate pair `U = -gamma_2 (x - beta_2)^n`, `Z = gamma_1 (x - beta_1)^n`
/// and their half-integer coordinates `u_1, u_2`.
#[derive(Debug, Clone)]
pub struct UzPair {
    pub u: QuadElement,
    pub z: QuadElement,
    pub u1: Integer,
    pub u2: Integer,
}

pub fn compute_uz(inst: &InstanceInput) -> Result<UzPair> {
    let beta2 = inst.beta1.conj();
    let gamma2 = inst.gamma1.conj();
    let xq = QuadElement::rational(Rational::from(&inst.x), inst.t.clone());
    let z = &inst.gamma1 * &(&xq - &inst.beta1).pow(inst.n);
    let u = &(-&gamma2) * &(&xq - &beta2).pow(inst.n);
    // U = (u1 + u2 sqrt(t))/2 and Z = (-u1 + u2 sqrt(t))/2 with integer u1, u2.
    let two = Rational::from(2);
    let u1r = Rational::from(&u.re) * &two;
    let u2r = Rational::from(&u.co) * &two;
    if !is_integer(&u1r) || !is_integer(&u2r) {
        return Err(Error::invalid(
            "gamma_1/beta_1 do not give half-integer coordinates; \
             pick algebraic integers",
        ));
    }
    debug_assert_eq!(z.re, -u.re.clone());
    debug_assert_eq!(z.co, u.co);
    let u1 = u1r.numer().clone();
    let u2 = u2r.numer().clone();
    if u1 == 0 {
        return Err(Error::degenerate("u1 = 0: E is unbounded, no measure"));
    }
    if u2 == 0 {
        return Err(Error::degenerate("u2 = 0: Z/U = -1 is excluded"));
    }
    Ok(UzPair { u, z, u1, u2 })
}

/// Exact quotient `Z/U`.
pub fn zu_ratio(uz: &UzPair) -> QuadElement {
    uz.z.div(&uz.u)
}

/// Check the applicability condition on `Z/U`: either a real value in
/// `(0, 1)`, or modulus exactly 1 but not `-1`.
pub fn zu_applicable(ratio: &QuadElement) -> Result<()> {
    if ratio.co == 0 {
        if ratio.re > 0 && ratio.re < 1 {
            Ok(())
        } else {
            Err(Error::not_applicable(format!(
                "real Z/U = {} outside (0, 1)",
                ratio.re
            )))
        }
    } else if ratio.norm() == 1 {
        Ok(())
    } else {
        Err(Error::not_applicable(format!(
            "|Z/U|^2 = {} is neither 1 nor real in (0,1)",
            ratio.norm()
        )))
    }
}

/// The content ladder `g_1, ..., g_4`, the surd `g`, the multiplier `m`,
/// and `script_N(m, n)`.
#[derive(Debug, Clone)]
pub struct GcdLadder {
    pub g1: Integer,
    pub g2: Integer,
    pub g3: Integer,
    pub g4: Integer,
    pub g: SurdScalar,
    pub m: Integer,
    pub script_n: PrimePowerValue,
}

pub fn gcd_ladder(u1: &Integer, u2: &Integer, t: &Integer, n: u32) -> Result<GcdLadder> {
    assert!(*u1 != 0 && *u2 != 0);
    let g1 = Integer::from(u1.gcd_ref(u2));
    let w = Integer::from(u1 / &g1);
    let g2_mag = Integer::from(w.gcd_ref(t));
    let g2 = if *t < 0 { -g2_mag } else { g2_mag };

    let t_mod4 = Integer::from(t.rem_euc(&Integer::from(4)));
    let diff_even = Integer::from(u1 - u2).is_divisible(&Integer::from(&g1 * &Integer::from(2)));
    let g3 = if t_mod4 == 1 && diff_even {
        Integer::from(1)
    } else if t_mod4 == 3 && diff_even {
        Integer::from(2)
    } else {
        Integer::from(4)
    };

    let sn = Integer::from(n) * Integer::from(2u32).gcd(&Integer::from(n));
    let g4 = {
        let right = Integer::from(&sn / &Integer::from(w.gcd_ref(&sn)));
        let left = core_part(&Integer::from(&g2 * &g3)).abs();
        left.gcd(&right)
    };

    // g = g1 sqrt(g2) / sqrt(g3 g4): fold the square part of g2*g3*g4 into
    // the rational factor.
    let g3g4 = Integer::from(&g3 * &g4);
    let radicand = Integer::from(&g2 * &g3g4);
    let g = SurdScalar::new(
        Rational::from((g1.clone(), g3g4.clone())),
        &radicand,
    );

    // m: largest positive integer with u1/(g m) an algebraic integer.
    // u1/g = (u1 / (q d)) * sqrt(d), and a pure surd over a squarefree d is
    // an algebraic integer exactly when its rational factor is an integer.
    let qd = Rational::from(&g.q * Rational::from(&g.d));
    let mr = Rational::from(u1) / qd;
    if !is_integer(&mr) {
        return Err(Error::invalid(format!(
            "u1/g is not an algebraic integer multiple (u1/(qd) = {})",
            mr
        )));
    }
    let m = mr.numer().clone().abs();
    if m == 0 {
        return Err(Error::degenerate("m = 0"));
    }
    let script_n = script_nmn(&m, n);
    Ok(GcdLadder {
        g1,
        g2,
        g3,
        g4,
        g,
        m,
        script_n,
    })
}

/// The real quantities of the measure at a given working precision.
#[derive(Debug, Clone)]
pub struct EqQuantities {
    pub e: CertifiedReal,
    pub q: CertifiedReal,
    pub min_modulus: CertifiedReal,
    pub max_modulus: CertifiedReal,
    /// `|g| * script_N(m, n)` (shared numerator/denominator factor).
    pub g_script_n: CertifiedReal,
}

/// `E` and `Q` from the moduli of `u2 sqrt(t) +- sqrt(u2^2 t - u1^2)`.
/// For `t < 0` both values are purely imaginary with moduli
/// `sqrt(u1^2 + u2^2 |t|) +- |u2| sqrt(|t|)`; the product of the two moduli
/// is exactly `u1^2`, which lets us obtain the small one by division
/// (no catastrophic cancellation).
pub fn eq_quantities(
    inst: &InstanceInput,
    uz: &UzPair,
    ladder: &GcdLadder,
    prec: u32,
) -> Result<EqQuantities> {
    if inst.t >= 0 {
        return Err(Error::invalid("eq_quantities requires t < 0"));
    }
    let at = Integer::from(inst.t.abs_ref());
    let u1_sq = Integer::from(&uz.u1 * &uz.u1);
    let a_sq = Integer::from(&u1_sq) + Integer::from(&uz.u2 * &uz.u2) * &at;
    let a = CertifiedReal::from_integer(&a_sq, prec).sqrt()?;
    let b = CertifiedReal::from_integer(&Integer::from(uz.u2.abs_ref()), prec)
        .mul(&CertifiedReal::from_integer(&at, prec).sqrt()?);
    let max_modulus = a.add(&b);
    let min_modulus = CertifiedReal::from_integer(&u1_sq, prec).div(&max_modulus)?;

    let g_abs = CertifiedReal::from_rational(&ladder.g.abs_squared(), prec).sqrt()?;
    let g_script_n = g_abs.mul(&ladder.script_n.value(prec)?);
    let d_n = inst.cd.d_value(prec);

    let e = g_script_n.div(&d_n.mul(&min_modulus))?;
    let q = d_n.mul(&max_modulus).div(&g_script_n)?;
    Ok(EqQuantities {
        e,
        q,
        min_modulus,
        max_modulus,
        g_script_n,
    })
}

/// Which root of `F_{n,t}` the approximations converge to.
#[derive(Debug, Clone, Serialize)]
pub struct RootId {
    /// The odd branch index `k` in `0 < k < 2n` from the n-th root of unity.
    pub lemma2_k: u32,
    pub alpha: AlphaSpec,
}

/// Identify the root via the branch relation: with
/// `w = (Z/U)^(1/n) = (x - sqrt(t)) e^(k pi i / n) / (x + sqrt(t))`,
/// `k = (arg(Z/U) - n * arg((x-sqrt(t))/(x+sqrt(t)))) / pi  (mod 2n)`.
/// Requires the standard setup (`beta_1 = sqrt(t)`, real `gamma_1`).
pub fn identify_root(inst: &InstanceInput, uz: &UzPair, prec: u32) -> Result<Option<RootId>> {
    if inst.beta1.re != 0 || inst.beta1.co != 1 || inst.gamma1.co != 0 {
        return Err(Error::invalid(
            "root identification implemented for beta_1 = sqrt(t), rational gamma_1",
        ));
    }
    let n = inst.n;
    let ratio = zu_ratio(uz);
    let at = Integer::from(inst.t.abs_ref());
    let rt = CertifiedReal::from_integer(&at, prec).sqrt()?;
    let pi = CertifiedReal::pi(prec);

    // arg(Z/U)
    let phi = if ratio.co == 0 {
        if ratio.re > 0 {
            CertifiedReal::from_i64(0, prec)
        } else {
            pi.clone()
        }
    } else {
        let y = CertifiedReal::from_rational(&ratio.co, prec).mul(&rt);
        let xx = CertifiedReal::from_rational(&ratio.re, prec);
        CertifiedReal::atan2(&y, &xx)?
    };

    // arg((x - sqrt(t))/(x + sqrt(t))) = -2 atan2(sqrt(|t|), x)
    let xi = CertifiedReal::from_integer(&inst.x, prec);
    let psi = CertifiedReal::atan2(&rt, &xi)?
        .mul(&CertifiedReal::from_i64(-2, prec));

    let r = phi
        .sub(&psi.mul(&CertifiedReal::from_i64(n as i64, prec)))
        .div(&pi)?;
    let k_raw = match r.unique_round() {
        Some(k) => k,
        None => return Ok(None), // needs more precision
    };
    // Guard: r must be genuinely close to the integer it rounded to.
    let dev = r.sub(&CertifiedReal::from_integer(&k_raw, prec)).abs();
    if dev.cmp_rational(&Rational::from((2u32, 5u32))) != Some(std::cmp::Ordering::Less) {
        return Ok(None);
    }
    let two_n = Integer::from(2 * n);
    let k = k_raw.rem_euc(&two_n);
    let k = k.to_u32().expect("k < 2n");
    if k % 2 == 0 {
        return Err(Error::degenerate(format!(
            "branch index k = {} is even; Z/U is not a rotated -1",
            k
        )));
    }

    // Lemma-2 angle bookkeeping: A = sqrt(|t|) tan((n-k) pi / (2n)), folded
    // into the canonical root list of F_{n,t}.
    let alpha = if n % 2 == 0 {
        // (n - k) odd; reduce mod 2n to [1, 2n-1], angle (2j+1)pi/(2n).
        let nk = Integer::from(n as i64 - k as i64).rem_euc(&two_n);
        let nk = nk.to_u32().unwrap();
        debug_assert!(nk % 2 == 1);
        AlphaSpec::new(n, inst.t.clone(), (nk - 1) / 2)?
    } else {
        // (n - k) even; use (n-k)/4 when divisible by 4, else (3n-k)/4,
        // giving angle 2j pi / n.
        let nk = n as i64 - k as i64;
        let j = if nk.rem_euclid(4) == 0 {
            nk / 4
        } else {
            (3 * n as i64 - k as i64) / 4
        };
        let j = j.rem_euclid(n as i64) as u32;
        AlphaSpec::new(n, inst.t.clone(), j)?
    };
    Ok(Some(RootId {
        lemma2_k: k,
        alpha,
    }))
}

/// `kappa = log Q / log E` and the Proposition-style constant `c`.
pub fn kappa_c(
    inst: &InstanceInput,
    eq: &EqQuantities,
    alpha_value: &CertifiedReal,
    prec: u32,
) -> Result<(CertifiedReal, CertifiedReal)> {
    let kappa = eq.q.ln()?.div(&eq.e.ln()?)?;

    let at = Integer::from(inst.t.abs_ref());
    let rt = CertifiedReal::from_integer(&at, prec).sqrt()?;
    // |x - beta_1| = |x - beta_2| = sqrt((x - a)^2 + b^2 |t|) for t < 0.
    let xa = Rational::from(&inst.x) - &inst.beta1.re;
    let b2t = Rational::from(&inst.beta1.co * &inst.beta1.co) * Rational::from(&at);
    let dist_sq = Rational::from(&xa * &xa) + &b2t;
    let dist = CertifiedReal::from_rational(&dist_sq, prec).sqrt()?;
    // |A - beta_1| = sqrt((A - a)^2 + b^2 |t|)
    let aa = alpha_value.sub(&CertifiedReal::from_rational(&inst.beta1.re, prec));
    let dist_alpha = aa
        .powi(2)
        .add(&CertifiedReal::from_rational(&b2t, prec))
        .sqrt()?;

    let c_n = inst.cd.c_value(prec);
    let four = CertifiedReal::from_i64(4, prec);
    let three = CertifiedReal::from_i64(3, prec);
    let two = CertifiedReal::from_i64(2, prec);

    let front = four
        .mul(&rt)
        .mul(&two.mul(&dist))
        .mul(&c_n)
        .mul(&eq.q);
    let inner = three.mul(&rt).mul(&dist).mul(&dist_alpha).mul(&c_n);
    // max(1, inner)
    let one = Rational::from(1);
    let clamped = match inner.cmp_rational(&one) {
        Some(std::cmp::Ordering::Greater) => inner,
        Some(std::cmp::Ordering::Less) => CertifiedReal::from_i64(1, prec),
        _ => {
            // straddles 1: [1, hi] is a sound enclosure of max(1, inner)
            CertifiedReal::new(
                CertifiedReal::from_i64(1, prec).lo().clone(),
                inner.hi().clone().max(&rug::Float::with_val(prec, 1)),
            )
        }
    };
    let c = front.mul(&clamped.pow_interval(&kappa)?);
    Ok((kappa, c))
}

/// A complete, serialisable record of one certified measure.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureCertificate {
    pub n: u32,
    #[serde(with = "serde_int")]
    pub t: Integer,
    #[serde(with = "serde_int")]
    pub x: Integer,
    pub gamma1: QuadElement,
    pub beta1: QuadElement,
    #[serde(with = "serde_int")]
    pub u1: Integer,
    #[serde(with = "serde_int")]
    pub u2: Integer,
    /// Exact quotient Z/U.
    pub zu: QuadElement,
    pub ladder: LadderSummary,
    pub root: RootId,
    pub alpha_value: CertifiedReal,
    pub e: CertifiedReal,
    pub q: CertifiedReal,
    pub kappa: CertifiedReal,
    pub c_prop: CertifiedReal,
    /// Convenience upper bounds as floats (certificates keep the intervals).
    pub kappa_upper: f64,
    pub c_prop_upper: f64,
    pub cd: CDConstants,
    pub precision_bits: u32,
}

/// Summary of the gcd ladder for serialisation.
#[derive(Debug, Clone, Serialize)]
pub struct LadderSummary {
    #[serde(with = "serde_int")]
    pub g1: Integer,
    #[serde(with = "serde_int")]
    pub g2: Integer,
    #[serde(with = "serde_int")]
    pub g3: Integer,
    #[serde(with = "serde_int")]
    pub g4: Integer,
    pub g: SurdScalar,
    #[serde(with = "serde_int")]
    pub m: Integer,
    pub script_n: String,
}

impl From<&GcdLadder> for LadderSummary {
    fn from(l: &GcdLadder) -> Self {
        LadderSummary {
            g1: l.g1.clone(),
            g2: l.g2.clone(),
            g3: l.g3.clone(),
            g4: l.g4.clone(),
            g: l.g.clone(),
            m: l.m.clone(),
            script_n: l.script_n.to_string(),
        }
    }
}

impl MeasureCertificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Exact upper bound on kappa as a rational (hi endpoint).
    pub fn kappa_hi_rational(&self) -> Rational {
        self.kappa.hi_rational()
    }

    pub fn c_prop_hi_rational(&self) -> Rational {
        self.c_prop.hi_rational()
    }
}

/// Number of bits of interval tightness demanded of kappa and c.
const TIGHT_BITS: u32 = 44;

/// Run the whole pipeline with automatic precision escalation.
pub fn certify(inst: &InstanceInput, precision_floor: u32) -> Result<MeasureCertificate> {
    let uz = compute_uz(inst)?;
    let ratio = zu_ratio(&uz);
    zu_applicable(&ratio)?;
    let ladder = gcd_ladder(&uz.u1, &uz.u2, &inst.t, inst.n)?;

    escalate(precision_floor.max(128), |prec| {
        let eq = eq_quantities(inst, &uz, &ladder, prec)?;
        // E > 1 must be certified; a certified E <= 1 is a hard failure.
        match eq.e.cmp_rational(&Rational::from(1)) {
            Some(std::cmp::Ordering::Greater) => {}
            Some(_) => {
                return Err(Error::not_applicable(format!(
                    "E = {} is not > 1",
                    eq.e
                )))
            }
            None => return Ok(None),
        }
        let root = match identify_root(inst, &uz, prec)? {
            Some(r) => r,
            None => return Ok(None),
        };
        let alpha_value = root.alpha.value(prec)?;
        let (kappa, c) = kappa_c(inst, &eq, &alpha_value, prec)?;
        if !kappa.is_tight(TIGHT_BITS) || !c.is_tight(TIGHT_BITS) {
            return Ok(None);
        }
        Ok(Some(MeasureCertificate {
            n: inst.n,
            t: inst.t.clone(),
            x: inst.x.clone(),
            gamma1: inst.gamma1.clone(),
            beta1: inst.beta1.clone(),
            u1: uz.u1.clone(),
            u2: uz.u2.clone(),
            zu: ratio.clone(),
            ladder: LadderSummary::from(&ladder),
            root: root.clone(),
            alpha_value,
            kappa_upper: kappa.hi().to_f64(),
            c_prop_upper: c.hi().to_f64(),
            e: eq.e,
            q: eq.q,
            kappa,
            c_prop: c,
            cd: inst.cd.clone(),
            precision_bits: prec,
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use rug::ops::Pow;

    fn t3_instance() -> InstanceInput {
        InstanceInput::standard(
            7,
            Integer::from(-19),
            Integer::from(19),
            CDConstants::builtin(7).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn uz_t19() {
        let uz = compute_uz(&t3_instance()).unwrap();
        // u1 = 2^7 * 19^4, u2 = -2^7 * 19^3 * 559
        assert_eq!(uz.u1, Integer::from(16681088u64));
        assert_eq!(uz.u2, Integer::from(-490775168i64));
        let ratio = zu_ratio(&uz);
        assert_eq!(ratio.re, rat(156231, 156250));
        assert_eq!(ratio.co, rat(-559, 156250));
        assert_eq!(ratio.norm(), rat(1, 1));
        zu_applicable(&ratio).unwrap();
    }

    #[test]
    fn ladder_t19() {
        let uz = compute_uz(&t3_instance()).unwrap();
        let l = gcd_ladder(&uz.u1, &uz.u2, &Integer::from(-19), 7).unwrap();
        assert_eq!(l.g1, Integer::from(877952u64)); // 2^7 * 19^3
        assert_eq!(l.g2, Integer::from(-19));
        assert_eq!(l.g3, Integer::from(1));
        assert_eq!(l.g4, Integer::from(1));
        assert_eq!(l.g.q, rat(877952, 1));
        assert_eq!(l.g.d, Integer::from(-19));
        assert_eq!(l.m, Integer::from(1));
        assert!(l.script_n.is_one());
    }

    #[test]
    fn certify_t19_quantities() {
        let cert = certify(&t3_instance(), 128).unwrap();
        // E = 11.188347..., Q = 5879.998902..., kappa < 3.59411
        assert_eq!(
            cert.e.cmp_rational(&rat(11188347, 1000000)),
            Some(std::cmp::Ordering::Greater)
        );
        assert_eq!(
            cert.e.cmp_rational(&rat(11188348, 1000000)),
            Some(std::cmp::Ordering::Less)
        );
        assert_eq!(
            cert.q.cmp_rational(&rat(5879998902, 1000000)),
            Some(std::cmp::Ordering::Greater)
        );
        assert_eq!(
            cert.q.cmp_rational(&rat(5879998903, 1000000)),
            Some(std::cmp::Ordering::Less)
        );
        assert_eq!(
            cert.kappa.cmp_rational(&rat(359411, 100000)),
            Some(std::cmp::Ordering::Less)
        );
        // root: sqrt(19) tan(10 pi / 7), i.e. k = 5 for n = 7
        assert_eq!(cert.root.alpha.k, 5);
        assert_eq!(cert.root.lemma2_k, 1);
        // c < 9.5e41
        assert_eq!(
            cert.c_prop
                .cmp_rational(&(rat(95, 10) * Rational::from(Integer::from(10).pow(41)))),
            Some(std::cmp::Ordering::Less)
        );
    }

    #[test]
    fn json_serialisation_roundtrip_fields() {
        let cert = certify(&t3_instance(), 128).unwrap();
        let json = cert.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["u1"], "16681088");
        assert_eq!(v["ladder"]["g"]["d"], "-19");
        assert!(v["e"]["lo"].as_str().unwrap().starts_with("11.18834"));
    }

    #[test]
    fn inapplicable_instance_rejected() {
        // x far away from any root: E <= 1
        let inst = InstanceInput::standard(
            7,
            Integer::from(-19),
            Integer::from(1000),
            CDConstants::builtin(7).unwrap(),
        )
        .unwrap();
        match certify(&inst, 128) {
            Err(Error::NotApplicable(_)) | Err(Error::Degenerate(_)) => {}
            other => panic!("expected inapplicable, got {:?}", other.map(|c| c.kappa_upper)),
        }
    }
}
