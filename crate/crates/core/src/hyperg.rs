//! The hypergeometric polynomials `X_{n,r}(x) = 2F1(-r, -r-1/n; 1-1/n; x)`,
//! their denominator/content invariants `D_{n,r}` and `N_{m,n,r}`, the
//! product `script_N(m, n)`, and validation of the `(C, D)` constant pairs
//! that feed the measure pipeline.

use crate::error::Error;
use rug::ops::Pow;
use crate::exact::{factorize, vp, Integer, Rational};
use crate::real::CertifiedReal;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Dense univariate polynomial with exact rational coefficients
/// (ascending order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly(pub Vec<Rational>);

impl RationalPoly {
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `P(a + b*x)` by binomial expansion:
    /// the x^j coefficient gains `c_i * C(i,j) * a^(i-j) * b^j` from each
    /// original term `c_i x^i`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> RationalPoly {
        let deg = self.0.len();
        let mut out = vec![Rational::new(); deg];
        // powers[k] = base^k for k = 0..deg
        let pow_table = |base: &Rational| -> Vec<Rational> {
            let mut v = vec![Rational::from(1)];
            for _ in 1..deg {
                v.push(Rational::from(v.last().unwrap() * base));
            }
            v
        };
        let a_pows = pow_table(a);
        let b_pows = pow_table(b);
        for (i, c) in self.0.iter().enumerate() {
            for j in 0..=i {
                let bin = Integer::from(Integer::binomial_u(i as u32, j as u32));
                let mut term = Rational::from(c);
                term *= Rational::from(bin);
                term *= &a_pows[i - j];
                term *= &b_pows[j];
                out[j] += term;
            }
        }
        RationalPoly(out)
    }
}

/// `X_{n,r}` coefficients: `c_0 = 1`,
/// `c_{j+1} = c_j * (j-r)(j-r-1/n) / ((j+1-1/n)(j+1))`.
pub fn xnr(n: u32, r: u32) -> RationalPoly {
    assert!(n >= 2);
    let inv_n = Rational::from((1u32, n));
    let mut coeffs = vec![Rational::from(1)];
    for j in 0..r {
        let jr = Rational::from(j) - Rational::from(r);
        let num = Rational::from(&jr) * (jr.clone() - &inv_n);
        let den = (Rational::from(j + 1) - &inv_n) * Rational::from(j + 1);
        let next = Rational::from(coeffs.last().unwrap()) * num / den;
        coeffs.push(next);
    }
    RationalPoly(coeffs)
}

/// `D_{n,r}`: least common multiple of the coefficient denominators of
/// `X_{n,r}`.
pub fn dnr(n: u32, r: u32) -> Integer {
    let p = xnr(n, r);
    let mut l = Integer::from(1);
    for c in &p.0 {
        l = l.lcm(c.denom());
    }
    l
}

/// `N_{m,n,r}`: gcd of the numerators of the coefficients of
/// `X_{n,r}(1 - m*x)`.
pub fn nmnr(m: &Integer, n: u32, r: u32) -> Integer {
    let p = xnr(n, r);
    let composed = p.compose_affine(&Rational::from(1), &Rational::from(-m.clone()));
    let mut g = Integer::new();
    for c in &composed.0 {
        g = g.gcd(c.numer());
    }
    g
}

/// The two exact gamma-function ratios appearing in the approximation
/// error: `Gamma(1-1/n) r! / Gamma(r+1-1/n)` and
/// `n Gamma(r+1+1/n) / (r! Gamma(1/n))`, both rational by telescoping.
pub fn gamma_ratios(n: u32, r: u32) -> (Rational, Rational) {
    let inv_n = Rational::from((1u32, n));
    let mut ratio1 = Rational::from(1);
    for j in 1..=r {
        ratio1 *= Rational::from(j) / (Rational::from(j) - &inv_n);
    }
    let mut prod = Rational::from(1);
    for j in 0..=r {
        prod *= Rational::from(j) + &inv_n;
    }
    let mut fact = Rational::from(1);
    for j in 1..=r {
        fact *= Rational::from(j);
    }
    let ratio2 = Rational::from(n) * prod / fact;
    (ratio1, ratio2)
}

/// A positive real of the form `prod p^e` with rational exponents,
/// compared and combined exactly.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrimePowerValue {
    /// prime -> exponent, no zero exponents stored.
    pub exponents: BTreeMap<Integer, Rational>,
}

impl PrimePowerValue {
    pub fn one() -> Self {
        PrimePowerValue::default()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    /// From a positive integer (or |n| of a nonzero integer).
    pub fn from_integer_abs(n: &Integer) -> Self {
        let f = factorize(n);
        let mut exponents = BTreeMap::new();
        for (p, e) in f.factors {
            exponents.insert(p, Rational::from(e));
        }
        PrimePowerValue { exponents }
    }

    /// From a nonzero rational's absolute value.
    pub fn from_rational_abs(r: &Rational) -> Self {
        let num = PrimePowerValue::from_integer_abs(r.numer());
        let den = PrimePowerValue::from_integer_abs(r.denom());
        num.div(&den)
    }

    pub fn insert(&mut self, p: Integer, e: Rational) {
        if e != 0 {
            let entry = self.exponents.entry(p).or_insert_with(Rational::new);
            *entry += e;
            if *entry == 0 {
                // normalise away cancelled primes lazily below
            }
        }
        self.exponents.retain(|_, v| *v != 0);
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in &o.exponents {
            out.insert(p.clone(), e.clone());
        }
        out
    }

    pub fn div(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in &o.exponents {
            out.insert(p.clone(), -e.clone());
        }
        out
    }

    pub fn pow(&self, r: &Rational) -> Self {
        let mut exponents = BTreeMap::new();
        if *r != 0 {
            for (p, e) in &self.exponents {
                exponents.insert(p.clone(), Rational::from(e * r));
            }
        }
        PrimePowerValue { exponents }
    }

    /// Exact comparison with 1 by clearing exponent denominators.
    pub fn cmp_one(&self) -> std::cmp::Ordering {
        let mut l = Integer::from(1);
        for e in self.exponents.values() {
            l = l.lcm(e.denom());
        }
        let mut above = Integer::from(1);
        let mut below = Integer::from(1);
        for (p, e) in &self.exponents {
            let scaled = Rational::from(e * Rational::from(&l));
            debug_assert!(*scaled.denom() == 1);
            let k = scaled.numer().clone();
            let ku = k
                .clone()
                .abs()
                .to_u32()
                .expect("prime-power exponent overflow");
            let pw = Integer::from(p.pow(ku));
            if k > 0 {
                above *= pw;
            } else {
                below *= pw;
            }
        }
        above.cmp(&below)
    }

    /// Exact comparison of two values.
    pub fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.div(o).cmp_one()
    }

    /// Certified enclosure of the value.
    pub fn value(&self, prec: u32) -> Result<CertifiedReal> {
        let mut acc = CertifiedReal::from_i64(1, prec);
        for (p, e) in &self.exponents {
            let base = CertifiedReal::from_integer(p, prec);
            acc = acc.mul(&base.pow_rational(e)?);
        }
        Ok(acc)
    }

    /// The exact rational value, if all exponents are integers.
    pub fn as_rational(&self) -> Option<Rational> {
        let mut acc = Rational::from(1);
        for (p, e) in &self.exponents {
            if *e.denom() != 1 {
                return None;
            }
            let k = e.numer().clone();
            let ku = k.clone().abs().to_u32()?;
            let pw = Rational::from(Integer::from(p.pow(ku)));
            if k > 0 {
                acc *= pw;
            } else {
                acc /= pw;
            }
        }
        Some(acc)
    }
}

impl fmt::Display for PrimePowerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    format!("{}", p)
                } else {
                    format!("{}^({})", p, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `script_N(m, n) = prod_{p | n} p^min(v_p(m), v_p(n) + 1/(p-1))`.
pub fn script_nmn(m: &Integer, n: u32) -> PrimePowerValue {
    assert!(*m != 0);
    let nf = factorize(&Integer::from(n));
    let mut out = PrimePowerValue::one();
    for (p, en) in nf.factors {
        let vm = Rational::from(vp(m, &p));
        let cap = Rational::from(en) + Rational::from((1u32, (p.clone() - 1u32).to_u32().unwrap()));
        let e = if vm < cap { vm } else { cap };
        out.insert(p, e);
    }
    out
}

/// Where a `(C, D)` pair came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CdSource {
    /// One of the four published pairs.
    Builtin,
    /// Supplied on the command line / config.
    User,
    /// The trivial pair `(1, 1)`; yields a lower bound on kappa only.
    LowerBoundDemo,
}

/// The magnitude `D` is frequently of the form `exp(q)`; keep it symbolic
/// so it can be evaluated at any precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DmagValue {
    Plain(#[serde(with = "crate::pipeline::serde_rat")] Rational),
    ExpOf(#[serde(with = "crate::pipeline::serde_rat")] Rational),
}

/// The pair `(C_n, D_n)` controlling the size of the hypergeometric
/// remainders for a given `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CDConstants {
    pub n: u32,
    #[serde(with = "crate::pipeline::serde_rat")]
    pub c: Rational,
    pub d: DmagValue,
    pub source: CdSource,
}

impl CDConstants {
    /// Published values: n = 4, 5, 7, 13.
    pub fn builtin(n: u32) -> Option<CDConstants> {
        let (c, d) = match n {
            4 => (Rational::from(700_000), Rational::from((16, 10))),
            5 => (Rational::from(2_400_000), Rational::from((137, 100))),
            7 => (Rational::from(64_000), Rational::from((166, 100))),
            13 => (Rational::from(390_000), Rational::from((221, 100))),
            _ => return None,
        };
        Some(CDConstants {
            n,
            c,
            d: DmagValue::ExpOf(d),
            source: CdSource::Builtin,
        })
    }

    /// The trivial pair `(1, 1)`. Since kappa is increasing in `D`, running
    /// the pipeline with it yields a certified lower bound on kappa for any
    /// admissible constants.
    pub fn lower_bound_demo(n: u32) -> CDConstants {
        CDConstants {
            n,
            c: Rational::from(1),
            d: DmagValue::Plain(Rational::from(1)),
            source: CdSource::LowerBoundDemo,
        }
    }

    pub fn user(n: u32, c: Rational, d: Rational) -> CDConstants {
        CDConstants {
            n,
            c,
            d: DmagValue::Plain(d),
            source: CdSource::User,
        }
    }

    pub fn c_value(&self, prec: u32) -> CertifiedReal {
        CertifiedReal::from_rational(&self.c, prec)
    }

    pub fn d_value(&self, prec: u32) -> CertifiedReal {
        match &self.d {
            DmagValue::Plain(r) => CertifiedReal::from_rational(r, prec),
            DmagValue::ExpOf(q) => CertifiedReal::from_rational(q, prec).exp(),
        }
    }
}

/// Outcome of a `(C, D)` validation sweep.
#[derive(Debug, Clone)]
pub struct CdReport {
    pub n: u32,
    pub r_max: u32,
    /// Largest observed LHS/RHS ratio (must stay < 1) and the r attaining it.
    pub worst_ratio: f64,
    pub worst_r: u32,
}

/// Certified lower bound on the ratio `rho = D / script_N(m, n)` for any
/// `(C, D)` pair with `C <= c_cap` satisfying the Lemma-3 inequality at
/// witness order `r`: from `D_{n,r} / N_{m,n,r} <= C * rho^r` (the
/// `max(1, ...)` factor only strengthens this) it follows that
/// `rho >= (D_{n,r} / (N_{m,n,r} * c_cap))^(1/r)`.
///
/// Used by the n = 6 demonstration, where no admissible pair is published:
/// kappa is increasing in rho, so kappa evaluated at this bound is a lower
/// bound on the exponent any such constants could deliver.
pub fn rho_lower_bound(
    n: u32,
    m: &Integer,
    r: u32,
    c_cap: &Rational,
    prec: u32,
) -> Result<CertifiedReal> {
    assert!(r >= 1 && *c_cap >= 1);
    let v = Rational::from(dnr(n, r)) / Rational::from(nmnr(m, n, r)) / c_cap.clone();
    CertifiedReal::from_rational(&v, prec).pow_rational(&Rational::from((1u32, r)))
}

/// Check `max(1, ratio1, ratio2) * D_{n,r} / N_{m,n,r} < C * (D/script_N)^r`
/// for `r = 0..=r_max` (strict; ties fail).
pub fn validate_cd(cd: &CDConstants, m: &Integer, r_max: u32) -> Result<CdReport> {
    let n = cd.n;
    let prec = 192;
    let script_n = script_nmn(m, n).value(prec)?;
    let c = cd.c_value(prec);
    let d = cd.d_value(prec);
    let base = d.div(&script_n)?;
    let mut worst_ratio = 0.0f64;
    let mut worst_r = 0u32;
    for r in 0..=r_max {
        let (g1, g2) = gamma_ratios(n, r);
        let mut biggest = Rational::from(1);
        if g1 > biggest {
            biggest = g1;
        }
        if g2 > biggest {
            biggest = g2;
        }
        let lhs = biggest * Rational::from(dnr(n, r)) / Rational::from(nmnr(m, n, r));
        let rhs = c.mul(&base.powi(r));
        match rhs.cmp_rational(&lhs) {
            Some(std::cmp::Ordering::Greater) => {}
            _ => {
                return Err(Error::CdValidation(format!(
                    "n = {}: bound fails (or is not separated) at r = {}: lhs = {}",
                    n, r, lhs
                )));
            }
        }
        let ratio = lhs.to_f64() / rhs.to_f64();
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_r = r;
        }
    }
    Ok(CdReport {
        n,
        r_max,
        worst_ratio,
        worst_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn xnr_small() {
        // X_{4,1}(x) = 1 + (5/3)x
        let p = xnr(4, 1);
        assert_eq!(p.0, vec![rat(1, 1), rat(5, 3)]);
        assert_eq!(dnr(4, 1), Integer::from(3));
        // leading coefficient of X_{5,2} is 11/6
        let p = xnr(5, 2);
        assert_eq!(p.0[2], rat(11, 6));
    }

    #[test]
    fn compose_affine_matches_eval() {
        let p = xnr(7, 3);
        let q = p.compose_affine(&rat(1, 1), &rat(-2, 1));
        for x in [-3i64, -1, 0, 2, 5] {
            let xr = Rational::from(x);
            let direct = p.eval(&(Rational::from(1) - Rational::from(2) * &xr));
            assert_eq!(q.eval(&xr), direct);
        }
    }

    #[test]
    fn gamma_ratio_values() {
        assert_eq!(gamma_ratios(4, 0), (rat(1, 1), rat(1, 1)));
        assert_eq!(gamma_ratios(4, 1), (rat(4, 3), rat(5, 4)));
    }

    #[test]
    fn script_n_values() {
        // script_N(1, n) = 1
        assert!(script_nmn(&Integer::from(1), 7).is_one());
        // v_7(m) = 1, cap = 1 + 1/6: exponent 1
        let v = script_nmn(&Integer::from(7), 7);
        assert_eq!(v.exponents[&Integer::from(7)], rat(1, 1));
        // v_7(m) = 2 exceeds cap 7/6
        let v = script_nmn(&Integer::from(49), 7);
        assert_eq!(v.exponents[&Integer::from(7)], rat(7, 6));
        // n = 4: cap for p = 2 is 2 + 1 = 3
        let v = script_nmn(&Integer::from(32), 4);
        assert_eq!(v.exponents[&Integer::from(2)], rat(3, 1));
    }

    #[test]
    fn prime_power_comparisons() {
        // 2^(3/2) vs e.g. 3: 2^3 = 8 < 9 = 3^2
        let a = PrimePowerValue::from_integer_abs(&Integer::from(2)).pow(&rat(3, 2));
        let b = PrimePowerValue::from_integer_abs(&Integer::from(3));
        assert_eq!(a.cmp(&b), std::cmp::Ordering::Less);
        assert_eq!(a.cmp(&a.clone()), std::cmp::Ordering::Equal);
        let v = a.value(128).unwrap();
        let sq = v.powi(2);
        assert!(sq.cmp_rational(&rat(8, 1)).is_none());
        assert_eq!(
            PrimePowerValue::from_rational_abs(&rat(8, 6))
                .as_rational()
                .unwrap(),
            rat(4, 3)
        );
    }

    #[test]
    fn builtin_cd_pairs_validate() {
        // Full r <= 50 sweeps run in the acceptance suite; keep the unit
        // test quick.
        for n in [4u32, 5, 7, 13] {
            let cd = CDConstants::builtin(n).unwrap();
            let rep = validate_cd(&cd, &Integer::from(1), 12).unwrap();
            assert!(rep.worst_ratio < 1.0);
        }
    }

    #[test]
    fn trivial_cd_fails() {
        let cd = CDConstants::user(4, Rational::from(1), Rational::from(1));
        assert!(validate_cd(&cd, &Integer::from(1), 8).is_err());
    }
}
