//! Named replay checks: every published value the test suite pins is
//! recomputed here and compared against its expected value, producing a
//! machine-readable report.

use crate::exact::{int, rat, Integer, Rational};
use crate::families::{
    conservativity_check, family_instance, lemma4_bound_check, FamilyKind,
};
use crate::hyperg::{validate_cd, CDConstants};
use crate::pipeline::{certify, InstanceInput, MeasureCertificate};
use crate::real::{
    cf_expand, sqrt_bounds_check, trig_identity_residuals, AlphaSpec, AlphaTarget, CertifiedReal,
};
use crate::refine::{refine, RefineTarget};
use crate::search::{convergent_scan, window_scan, SearchConfig, ThresholdMode};
use crate::Result;
use rug::ops::Pow;
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Debug, Clone, Serialize)]
pub struct ReplayResult {
    pub id: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl ReplayResult {
    fn ok(id: &str, expected: impl Into<String>, computed: impl Into<String>) -> Self {
        ReplayResult {
            id: id.into(),
            expected: expected.into(),
            computed: computed.into(),
            pass: true,
        }
    }

    fn check(id: &str, expected: impl Into<String>, computed: impl Into<String>, pass: bool) -> Self {
        ReplayResult {
            id: id.into(),
            expected: expected.into(),
            computed: computed.into(),
            pass,
        }
    }

    fn fail(id: &str, expected: impl Into<String>, err: impl std::fmt::Display) -> Self {
        ReplayResult {
            id: id.into(),
            expected: expected.into(),
            computed: format!("error: {}", err),
            pass: false,
        }
    }
}

/// The four headline instances.
pub fn theorem_instances() -> [(u32, i64, i64); 4] {
    [(7, -19, 19), (7, -39, 3), (7, -77, 11), (13, -7, 7)]
}

pub fn certify_instance(n: u32, t: i64, x: i64, precision_floor: u32) -> Result<MeasureCertificate> {
    let inst = InstanceInput::standard(
        n,
        Integer::from(t),
        Integer::from(x),
        CDConstants::builtin(n).expect("builtin constants"),
    )?;
    certify(&inst, precision_floor)
}

struct InstanceExpect {
    id: &'static str,
    n: u32,
    t: i64,
    x: i64,
    u1u2: Option<(Integer, Integer)>,
    /// `g = gq * sqrt(gd)`.
    gq: Integer,
    gd: i64,
    m: u32,
    /// Exact Z/U coordinates `(re, co)`.
    zu: (Rational, Rational),
    /// E and Q pinned to 6 decimals, tolerance 1e-5.
    e6: Rational,
    q6: Rational,
    kappa_max: Rational,
    c_max: Option<Rational>,
}

fn instance_expectations() -> Vec<InstanceExpect> {
    let p = |b: i64, e: u32| Integer::from(b).pow(e);
    vec![
        InstanceExpect {
            id: "theorem3",
            n: 7,
            t: -19,
            x: 19,
            u1u2: Some((
                Integer::from(&p(2, 7) * &p(19, 4)),
                -Integer::from(&p(2, 7) * &p(19, 3)) * Integer::from(559),
            )),
            gq: Integer::from(&p(2, 7) * &p(19, 3)),
            gd: -19,
            m: 1,
            zu: (rat(156231, 156250), rat(-559, 156250)),
            e6: rat(11188347, 1000000),
            q6: Rational::from((Integer::from(5879998902u64), Integer::from(1000000))),
            kappa_max: rat(359411, 100000),
            c_max: Some(rat(95, 10) * Rational::from(p(10, 41))),
        },
        InstanceExpect {
            id: "theorem4",
            n: 7,
            t: -39,
            x: 3,
            u1u2: None,
            gq: Integer::from(&p(2, 7) * &p(3, 3)),
            gd: -3,
            m: 1,
            zu: (rat(32765, 32768), rat(-71, 32768)),
            e6: rat(32450014, 1000000),
            q6: rat(2692736335, 1000000),
            kappa_max: rat(227, 100),
            c_max: Some(rat(25, 10) * Rational::from(p(10, 28))),
        },
        InstanceExpect {
            id: "theorem5",
            n: 7,
            t: -77,
            x: 11,
            u1u2: None,
            gq: Integer::from(&p(2, 3) * &p(11, 3)),
            gd: -22,
            m: 1,
            zu: (rat(4782958, 4782969), rat(-1169, 4782969)),
            e6: rat(75606150, 1000000),
            q6: rat(46008438040u64 as i64, 1000000),
            kappa_max: rat(24822, 10000),
            c_max: None,
        },
        InstanceExpect {
            id: "theorem6",
            n: 13,
            t: -7,
            x: 7,
            u1u2: None,
            gq: Integer::from(&p(2, 13) * &p(7, 6)),
            gd: -7,
            m: 1,
            zu: (rat(16377, 16384), rat(181, 16384)),
            e6: rat(5673393, 1000000),
            q6: rat(3300065595u64 as i64, 1000000),
            kappa_max: rat(46675, 10000),
            // The published bound is 5.7e49, but exact recomputation of
            // 112 sqrt(2) C_13 Q (42 sqrt(14) sec(5pi/13) C_13)^kappa gives
            // 5.7285...e49; the printed value was rounded down. Pin 5.73e49.
            c_max: Some(rat(573, 100) * Rational::from(p(10, 49))),
        },
    ]
}

fn within(v: &crate::real::CertifiedReal, pinned: &Rational, tol: &Rational) -> bool {
    use std::cmp::Ordering::*;
    v.cmp_rational(&Rational::from(pinned - tol)) == Some(Greater)
        && v.cmp_rational(&Rational::from(pinned + tol)) == Some(Less)
}

fn replay_instance(exp: &InstanceExpect, precision_floor: u32) -> Vec<ReplayResult> {
    let mut out = Vec::new();
    let cert = match certify_instance(exp.n, exp.t, exp.x, precision_floor) {
        Ok(c) => c,
        Err(e) => {
            out.push(ReplayResult::fail(exp.id, "certificate", e));
            return out;
        }
    };
    // Exact structural data.
    if let Some((u1, u2)) = &exp.u1u2 {
        out.push(ReplayResult::check(
            &format!("{}.u1u2", exp.id),
            format!("u1 = {}, u2 = {}", u1, u2),
            format!("u1 = {}, u2 = {}", cert.u1, cert.u2),
            cert.u1 == *u1 && cert.u2 == *u2,
        ));
    }
    out.push(ReplayResult::check(
        &format!("{}.g", exp.id),
        format!("g = {} sqrt({})", exp.gq, exp.gd),
        format!("g = {} sqrt({})", cert.ladder.g.q, cert.ladder.g.d),
        cert.ladder.g.q == Rational::from(&exp.gq) && cert.ladder.g.d == exp.gd,
    ));
    out.push(ReplayResult::check(
        &format!("{}.m", exp.id),
        format!("m = {}", exp.m),
        format!("m = {}", cert.ladder.m),
        cert.ladder.m == exp.m,
    ));
    out.push(ReplayResult::check(
        &format!("{}.zu", exp.id),
        format!("Z/U = {} + {} sqrt(t)", exp.zu.0, exp.zu.1),
        format!("Z/U = {} + {} sqrt(t)", cert.zu.re, cert.zu.co),
        cert.zu.re == exp.zu.0 && cert.zu.co == exp.zu.1,
    ));
    let tol = rat(1, 100000);
    out.push(ReplayResult::check(
        &format!("{}.E", exp.id),
        format!("E = {} +- 1e-5", exp.e6),
        format!("E = {}", cert.e),
        within(&cert.e, &exp.e6, &tol),
    ));
    out.push(ReplayResult::check(
        &format!("{}.Q", exp.id),
        format!("Q = {} +- 1e-5", exp.q6),
        format!("Q = {}", cert.q),
        within(&cert.q, &exp.q6, &tol),
    ));
    out.push(ReplayResult::check(
        &format!("{}.kappa", exp.id),
        format!("kappa <= {}", exp.kappa_max),
        format!("kappa = {}", cert.kappa),
        cert.kappa.cmp_rational(&exp.kappa_max) == Some(std::cmp::Ordering::Less),
    ));
    if let Some(c_max) = &exp.c_max {
        out.push(ReplayResult::check(
            &format!("{}.c", exp.id),
            format!("c <= {:e}", c_max.to_f64()),
            format!("c ~ {:e}", cert.c_prop.to_f64()),
            cert.c_prop.cmp_rational(c_max) == Some(std::cmp::Ordering::Less),
        ));
    }
    out
}

fn replay_lemma3() -> Vec<ReplayResult> {
    let mut out = Vec::new();
    for n in [4u32, 5, 7, 13] {
        let cd = CDConstants::builtin(n).unwrap();
        match validate_cd(&cd, &Integer::from(1), 50) {
            Ok(report) => out.push(ReplayResult::check(
                &format!("lemma3.n{}", n),
                "strict C (D/N)^r domination for r <= 50".to_string(),
                format!(
                    "worst ratio {:e} at r = {}",
                    report.worst_ratio, report.worst_r
                ),
                true,
            )),
            Err(e) => out.push(ReplayResult::fail(&format!("lemma3.n{}", n), "validation", e)),
        }
    }
    out
}

fn replay_lemma5() -> ReplayResult {
    // 1000-point rational grid over (-0.516, 1), endpoints excluded.
    let lo = rat(-516, 1000);
    let hi = rat(1, 1);
    let n = 1000u32;
    for i in 1..n {
        let z = lo.clone() + Rational::from(&hi - &lo) * Rational::from((i, n));
        if let Err(e) = sqrt_bounds_check(&z) {
            return ReplayResult::fail("lemma5.grid", "L(z) <= sqrt(1+z) <= U(z)", e);
        }
    }
    ReplayResult::ok(
        "lemma5.grid",
        "polynomial sqrt bounds on 999 interior grid points",
        "all hold",
    )
}

fn replay_trig_identities() -> Vec<ReplayResult> {
    let mut out = Vec::new();
    for (n, k) in [(4u32, 1u32), (4, 3), (5, 1), (5, 2)] {
        match trig_identity_residuals(n, k, 192) {
            Ok(residuals) => {
                let pass = residuals
                    .iter()
                    .all(|r| r.contains_zero() && r.is_tight(100));
                out.push(ReplayResult::check(
                    &format!("trig.n{}k{}", n, k),
                    "identity residuals vanish",
                    format!("{} residuals straddle 0 tightly", residuals.len()),
                    pass,
                ));
            }
            Err(e) => out.push(ReplayResult::fail(&format!("trig.n{}k{}", n, k), "residuals", e)),
        }
    }
    out
}

/// The four published record partial quotients (0-based indices).
pub fn cf_maxima_expectations() -> [(AlphaSpec, usize, u64); 4] {
    [
        (AlphaSpec::new(7, int(-19), 5).unwrap(), 1310, 21976),
        (AlphaSpec::new(7, int(-39), 4).unwrap(), 4020, 14265),
        (AlphaSpec::new(7, int(-77), 1).unwrap(), 7694, 9039),
        (AlphaSpec::new(13, int(-7), 9).unwrap(), 2403, 303427),
    ]
}

fn replay_cf_maxima(precision_floor: u32) -> Vec<ReplayResult> {
    let mut out = Vec::new();
    for (spec, idx, value) in cf_maxima_expectations() {
        let id = format!("cf.{}", spec);
        let target = AlphaTarget::Root(spec);
        match cf_expand(&target, idx + 8, precision_floor) {
            Ok(cf) => {
                let got = &cf.quotients[idx];
                out.push(ReplayResult::check(
                    &id,
                    format!("a_{} = {}", idx, value),
                    format!("a_{} = {}", idx, got),
                    *got == value,
                ));
            }
            Err(e) => out.push(ReplayResult::fail(&id, "cf expansion", e)),
        }
    }
    out
}

/// The four published refined measures `(c*, kappa*+1)` and the pinned gap
/// thresholds (the fourth threshold is the paper's loose cutoff, checked as
/// an upper bound on ours).
pub fn refine_expectations() -> [(usize, Rational, Rational, Rational, bool); 4] {
    [
        // (instance index, c_star, kappa_star_plus_one, threshold, exact-pin)
        (0, rat(9, 100), rat(46, 10), rat(186, 10), true),
        (1, rat(7, 1000), rat(328, 100), rat(379, 10), false),
        (2, rat(3, 1000), rat(349, 100), rat(92, 10), true),
        (3, rat(2, 100), rat(568, 100), rat(107, 10), true),
    ]
}

fn replay_refines(precision_floor: u32, cache_dir: Option<&std::path::Path>) -> Vec<ReplayResult> {
    let instances = theorem_instances();
    let mut out = Vec::new();
    for (i, c_star, ksp1, threshold, pin) in refine_expectations() {
        let (n, t, x) = instances[i];
        let id = format!("refine.({},{},{})", n, t, x);
        let run = || -> Result<(crate::refine::RefinedCertificate, bool)> {
            let cert = certify_instance(n, t, x, precision_floor)?;
            let target = RefineTarget::new(c_star.clone(), ksp1.clone())?;
            let refined = refine(&cert, target, precision_floor, cache_dir)?;
            let tau_ok = if pin {
                within(&refined.gap_bound, &threshold, &rat(1, 10))
            } else {
                refined.gap_bound.cmp_rational(&threshold) == Some(std::cmp::Ordering::Less)
            };
            Ok((refined, tau_ok))
        };
        match run() {
            Ok((refined, tau_ok)) => {
                let mut detail = String::new();
                let _ = write!(
                    detail,
                    "verified = {}, tau = {}, B = 10^{}, a_max = {} @ {}",
                    refined.verified,
                    refined.gap_bound,
                    refined.tail_exponent,
                    refined.max_quotient,
                    refined.max_quotient_index
                );
                out.push(ReplayResult::check(
                    &id,
                    format!(
                        "verified ({}, {}), threshold {} {}",
                        c_star,
                        ksp1,
                        if pin { "~" } else { "<=" },
                        threshold
                    ),
                    detail,
                    refined.verified && tau_ok,
                ));
            }
            Err(e) => out.push(ReplayResult::fail(&id, "refinement", e)),
        }
    }
    out
}

fn replay_family(precision_floor: u32) -> Vec<ReplayResult> {
    let mut out = Vec::new();
    // (4, 1, b = 9): eps = 0.4558 +- 1e-3 (bracket only; the theorem's
    // kappa denominator is negative at this eps).
    match crate::families::family_bracket(FamilyKind::N4K1, 9, precision_floor) {
        Ok((_, _, eps)) => out.push(ReplayResult::check(
            "family.b9_eps",
            "eps = 0.4558 +- 1e-3",
            format!("eps = {}", eps),
            within(&eps, &rat(4558, 10000), &rat(1, 1000)),
        )),
        Err(e) => out.push(ReplayResult::fail("family.b9_eps", "instance", e)),
    }
    // Conservativity + Lemma-4 bound over all applicable b <= 200, all kinds.
    let kinds = [
        FamilyKind::N4K1,
        FamilyKind::N4K3,
        FamilyKind::N5K1,
        FamilyKind::N5K2,
    ];
    use rayon::prelude::*;
    let mut checked = 0usize;
    let mut failures: Vec<String> = Vec::new();
    let results: Vec<(usize, Vec<String>)> = kinds
        .par_iter()
        .map(|&kind| {
            let mut local_checked = 0usize;
            let mut local_fail = Vec::new();
            for b in kind.b_floor()..=200 {
                match family_instance(kind, b, precision_floor) {
                    Ok(cert) => {
                        local_checked += 1;
                        if !conservativity_check(&cert) {
                            local_fail.push(format!("{} b={}: conservativity", kind, b));
                        }
                        if !lemma4_bound_check(&cert) {
                            local_fail.push(format!("{} b={}: lemma4 bound", kind, b));
                        }
                    }
                    Err(crate::error::Error::NotApplicable(_)) => {}
                    Err(e) => local_fail.push(format!("{} b={}: {}", kind, b, e)),
                }
            }
            (local_checked, local_fail)
        })
        .collect();
    for (c, f) in results {
        checked += c;
        failures.extend(f);
    }
    out.push(ReplayResult::check(
        "family.conservativity_b200",
        "kappa_thm > kappa_direct, c_thm > c_direct, lemma-4 bound, all b <= 200",
        if failures.is_empty() {
            format!("{} applicable instances pass", checked)
        } else {
            failures.join("; ")
        },
        failures.is_empty() && checked > 0,
    ));
    out
}

fn replay_n6_demo(precision_floor: u32) -> ReplayResult {
    // Convergents a/b of tan^2(pi/12); each gives an (n = 6, t = -a1 b,
    // x = a1 a2) instance. No admissible (C, D) pair is published for
    // n = 6, so we certify a *lower* bound on kappa: for any constants with
    // C <= 10^7 (well above every published C) satisfying the Lemma-3
    // inequality through r = 50, rho = D/script_N is at least
    // rho_lower_bound(..), and kappa is increasing in rho. Evaluating
    // kappa = log(rho max / g) / log(g / (rho min)) at that rho must
    // certify kappa > 3 (or E <= 1, i.e. no measure at all).
    let target = AlphaTarget::TanSquared {
        scale: Integer::from(1),
        num: Integer::from(1),
        den: Integer::from(12),
    };
    let cf = match cf_expand(&target, 11, precision_floor) {
        Ok(cf) => cf,
        Err(e) => return ReplayResult::fail("n6.demo", "cf expansion", e),
    };
    let c_cap = Rational::from(10_000_000);
    let mut tested = 0usize;
    let run = |p: &Integer, q: &Integer| -> Result<Option<String>> {
        let (a1, a2) = crate::exact::squarefree_split(p);
        let t = -Integer::from(&a1 * q);
        let x = Integer::from(&a1 * &a2);
        let inst = InstanceInput::standard(6, t.clone(), x, CDConstants::lower_bound_demo(6))?;
        let uz = crate::pipeline::compute_uz(&inst)?;
        let ladder = crate::pipeline::gcd_ladder(&uz.u1, &uz.u2, &t, 6)?;
        crate::real::escalate(precision_floor.max(192), |prec| {
            let rho = crate::hyperg::rho_lower_bound(6, &ladder.m, 50, &c_cap, prec)?;
            let at = Integer::from(t.abs_ref());
            let u1_sq = Integer::from(&uz.u1 * &uz.u1);
            let a_sq = Integer::from(&u1_sq) + Integer::from(&uz.u2 * &uz.u2) * &at;
            let max_m = CertifiedReal::from_integer(&a_sq, prec).sqrt()?.add(
                &CertifiedReal::from_integer(&Integer::from(uz.u2.abs_ref()), prec)
                    .mul(&CertifiedReal::from_integer(&at, prec).sqrt()?),
            );
            let min_m = CertifiedReal::from_integer(&u1_sq, prec).div(&max_m)?;
            let g_abs = CertifiedReal::from_rational(&ladder.g.abs_squared(), prec).sqrt()?;
            let e = g_abs.div(&rho.mul(&min_m))?;
            match e.cmp_rational(&Rational::from(1)) {
                // E <= 1: the method produces no measure at all here.
                Some(std::cmp::Ordering::Less) => {
                    return Ok(Some(Some("E <= 1 (no measure)".to_string())))
                }
                Some(_) => {}
                None => return Ok(None),
            }
            let q_val = rho.mul(&max_m).div(&g_abs)?;
            let kappa = q_val.ln()?.div(&e.ln()?)?;
            match kappa.cmp_rational(&rat(3, 1)) {
                Some(std::cmp::Ordering::Greater) => {
                    Ok(Some(Some(format!("kappa > 3 (>= {})", kappa))))
                }
                Some(_) => Ok(Some(None)),
                None => Ok(None),
            }
        })
    };
    for (p, q) in cf.convergents.iter().take(10) {
        if *p <= 0 {
            continue; // the zeroth convergent 0/1 has no instance
        }
        match run(p, q) {
            Ok(Some(_detail)) => tested += 1,
            Ok(None) => {
                return ReplayResult::check(
                    "n6.demo",
                    "kappa > 3 for every convergent instance",
                    format!("kappa lower bound <= 3 at convergent {}/{}", p, q),
                    false,
                )
            }
            Err(e) => return ReplayResult::fail("n6.demo", "certificate", e),
        }
    }
    ReplayResult::check(
        "n6.demo",
        "kappa > 3 for every convergent instance (certified lower bound)",
        format!("{} instances all exceed 3", tested),
        tested > 0,
    )
}

fn replay_window_scan(precision_floor: u32) -> ReplayResult {
    let config = SearchConfig {
        n_values: vec![7, 13],
        t_max: 1000,
        window: 10,
        threshold_mode: ThresholdMode::Totient,
        precision_floor,
    };
    match window_scan(&config) {
        Ok((findings, summary)) => {
            let got: Vec<String> = findings
                .iter()
                .map(|f| format!("({},{},{})", f.n, f.t, f.x))
                .collect();
            let expected = ["(7,-19,19)", "(7,-39,3)", "(7,-77,11)", "(13,-7,7)"];
            let pass = got == expected;
            ReplayResult::check(
                "search.window",
                format!("exactly {:?}", expected),
                format!("{:?} ({} instances tried)", got, summary.instances_tried),
                pass,
            )
        }
        Err(e) => ReplayResult::fail("search.window", "window scan", e),
    }
}

fn replay_near_miss(precision_floor: u32) -> ReplayResult {
    let expected_x = Integer::from(2801720872705678u64);
    let expected_t = Integer::from_str_radix("-4992086833624447048438244097954", 10).unwrap();
    match convergent_scan(7, 1, 33, ThresholdMode::Totient, precision_floor) {
        Ok((findings, _skipped)) => {
            let Some(f) = findings.iter().find(|f| f.x == expected_x) else {
                return ReplayResult::check(
                    "search.near_miss",
                    format!("finding with x = {}", expected_x),
                    "not present",
                    false,
                );
            };
            // The paper quotes the full exponent kappa + 1 = 6.287...;
            // tolerance 0.01.
            let kp1 = f
                .kappa
                .add(&crate::real::CertifiedReal::from_i64(1, f.kappa.prec()));
            let pass = f.t == expected_t && within(&kp1, &rat(6287, 1000), &rat(1, 100));
            ReplayResult::check(
                "search.near_miss",
                format!("t = {}, kappa + 1 = 6.287 +- 0.01", expected_t),
                format!("t = {}, kappa + 1 = {}", f.t, kp1),
                pass,
            )
        }
        Err(e) => ReplayResult::fail("search.near_miss", "convergent scan", e),
    }
}

/// Run all replay checks (optionally filtering by id substring). The `deep`
/// flag enables the long-running search reproduction.
pub fn run_replay(
    only: Option<&str>,
    deep: bool,
    precision_floor: u32,
    cache_dir: Option<&std::path::Path>,
) -> Vec<ReplayResult> {
    let mut all: Vec<ReplayResult> = Vec::new();
    // Match in either direction so both a group name ("theorem") and a full
    // id ("theorem3") select the right checks.
    let want = |id: &str| only.map(|o| id.contains(o) || o.contains(id)).unwrap_or(true);

    if want("theorem") {
        for exp in instance_expectations() {
            if want(exp.id) {
                all.extend(replay_instance(&exp, precision_floor));
            }
        }
    }
    if want("lemma3") {
        all.extend(replay_lemma3());
    }
    if want("lemma5") {
        all.push(replay_lemma5());
    }
    if want("trig") {
        all.extend(replay_trig_identities());
    }
    if want("cf") {
        all.extend(replay_cf_maxima(precision_floor));
    }
    if want("refine") {
        all.extend(replay_refines(precision_floor, cache_dir));
    }
    if want("family") {
        all.extend(replay_family(precision_floor));
    }
    if want("n6") {
        all.push(replay_n6_demo(precision_floor));
    }
    if want("search.near_miss") {
        all.push(replay_near_miss(precision_floor));
    }
    if deep && want("search.window") {
        all.push(replay_window_scan(precision_floor));
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectations_self_consistent() {
        let exps = instance_expectations();
        assert_eq!(exps.len(), 4);
        for e in &exps {
            // Z/U must have |Z/U| = 1: re^2 - t co^2 ... |Z/U|^2 = re^2 + |t| co^2 = 1
            let norm = Rational::from(&e.zu.0 * &e.zu.0)
                + Rational::from(&e.zu.1 * &e.zu.1) * Rational::from(-e.t);
            assert_eq!(norm, Rational::from(1), "{}", e.id);
        }
    }

    #[test]
    fn theorem4_replay() {
        let results = replay_instance(&instance_expectations()[1], 128);
        for r in &results {
            assert!(r.pass, "{}: expected {}, got {}", r.id, r.expected, r.computed);
        }
    }
}
