//! Randomized invariant checks (property tests) for the exact pipeline,
//! root identification, and continued-fraction machinery.

use proptest::prelude::*;
use rug::{Integer, Rational};
use thue_measures::error::Error;
use thue_measures::exact::{int, squarefree_split};
use thue_measures::hyperg::CDConstants;
use thue_measures::pipeline::{compute_uz, eq_quantities, gcd_ladder, zu_ratio, InstanceInput};
use thue_measures::real::{cf_expand, AlphaSpec, AlphaTarget, CertifiedReal};

const PREC: u32 = 128;

fn cd_for(n: u32) -> CDConstants {
    CDConstants::builtin(n).unwrap_or_else(|| CDConstants::lower_bound_demo(n))
}

/// Random instance: n in [3, 13], squarefree t in [-400, -1], x in [-60, 60].
fn instance_strategy() -> impl Strategy<Value = (u32, Integer, Integer)> {
    (3u32..=13, 1i64..=400, -60i64..=60).prop_map(|(n, tm, x)| {
        // Force t squarefree so the surd d below the ladder is canonical.
        let (core, _) = squarefree_split(&int(tm));
        (n, -core, int(x))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// u2^2 t - u1^2 = -4 |U|^2 exactly, for every non-degenerate instance.
    #[test]
    fn uz_norm_identity((n, t, x) in instance_strategy()) {
        let inst = InstanceInput::standard(n, t.clone(), x, cd_for(n)).unwrap();
        let uz = match compute_uz(&inst) {
            Ok(uz) => uz,
            Err(Error::Degenerate(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let lhs = Rational::from(&uz.u2 * &uz.u2) * Rational::from(t)
            - Rational::from(&uz.u1 * &uz.u1);
        // |U|^2 is the field norm re^2 - t co^2 (t < 0).
        let rhs = uz.u.norm() * Rational::from(-4);
        prop_assert_eq!(lhs, rhs);
    }

    /// min * max = u1^2: the certified interval product must contain the
    /// exact value.
    #[test]
    fn min_max_product((n, t, x) in instance_strategy()) {
        let inst = InstanceInput::standard(n, t.clone(), x, cd_for(n)).unwrap();
        let uz = match compute_uz(&inst) {
            Ok(uz) => uz,
            Err(Error::Degenerate(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let ladder = gcd_ladder(&uz.u1, &uz.u2, &t, n).unwrap();
        let eq = eq_quantities(&inst, &uz, &ladder, PREC).unwrap();
        let u1_sq = Rational::from(Integer::from(&uz.u1 * &uz.u1));
        let prod = eq.min_modulus.mul(&eq.max_modulus);
        prop_assert!(
            prod.cmp_rational(&u1_sq).is_none(),
            "interval {:?} excludes u1^2 = {}", prod.decimal_bounds(20), u1_sq
        );
        prop_assert!(prod.is_tight(40), "product interval too wide");
    }

    /// |Z/U|^2 = 1 exactly for t < 0 (the quotient lies on the unit circle).
    #[test]
    fn zu_on_unit_circle((n, t, x) in instance_strategy()) {
        let inst = InstanceInput::standard(n, t.clone(), x, cd_for(n)).unwrap();
        let uz = match compute_uz(&inst) {
            Ok(uz) => uz,
            Err(Error::Degenerate(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let ratio = zu_ratio(&uz);
        prop_assert_eq!(ratio.norm(), Rational::from(1));
    }

    /// For certified (applicable) instances, the identified root is the one
    /// nearest to x, checked by a 100-digit (333-bit) numeric argmin over
    /// all real roots of F_{n,t}.
    #[test]
    fn root_identification_matches_argmin((n, t, x) in instance_strategy()) {
        let inst = InstanceInput::standard(n, t.clone(), x.clone(), cd_for(n)).unwrap();
        let cert = match thue_measures::pipeline::certify(&inst, PREC) {
            Ok(cert) => cert,
            Err(Error::Degenerate(_)) | Err(Error::NotApplicable(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let xr = CertifiedReal::from_integer(&x, 333);
        let k_lo = if n % 2 == 1 { 1 } else { 0 };
        let mut dists: Vec<(u32, CertifiedReal)> = Vec::new();
        for k in k_lo..n {
            let spec = AlphaSpec::new(n, t.clone(), k).unwrap();
            let dist = spec.value(333).unwrap().sub(&xr).abs();
            dists.push((k, dist));
        }
        let (argmin, best) = dists
            .iter()
            .min_by(|a, b| a.1.to_f64().partial_cmp(&b.1.to_f64()).unwrap())
            .cloned()
            .unwrap();
        // Require a certified separation; skip the (non-occurring) tie case.
        if !dists
            .iter()
            .all(|(k, d)| *k == argmin || best.certainly_lt(d))
        {
            return Ok(());
        }
        prop_assert_eq!(cert.root.alpha.k, argmin, "n={} t={} x={}", n, t, x);
    }

    /// Determinant and interleaving invariants on continued fractions of
    /// random quadratic surds a + b sqrt(d).
    #[test]
    fn cf_invariants(a in -20i64..=20, b in 1i64..=20, d in 2i64..=120, count in 5usize..=60) {
        let (core, _) = squarefree_split(&int(d));
        if core == 1 {
            return Ok(());
        }
        let target = AlphaTarget::Surd {
            a: Rational::from(a),
            b: Rational::from(b),
            d: core,
        };
        let cf = cf_expand(&target, count, PREC).unwrap();
        prop_assert!(cf.len() >= count);
        cf.check_invariants().map_err(|e| TestCaseError::fail(e.to_string()))?;
    }
}

/// validate_cd for the built-in constants, r <= 50 (criterion 8).
#[test]
fn builtin_cd_validates() {
    for n in [4u32, 5, 7, 13] {
        let cd = CDConstants::builtin(n).unwrap();
        let report = thue_measures::hyperg::validate_cd(&cd, &Integer::from(1), 50)
            .unwrap_or_else(|e| panic!("n = {}: {}", n, e));
        assert!(report.worst_ratio < 1.0, "n = {}: {:?}", n, report);
    }
}
