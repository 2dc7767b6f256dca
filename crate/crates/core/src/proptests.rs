//! Property tests spanning several modules.

use proptest::prelude::*;

use crate::gamma::{falling_factorial_exact, stirling2};
use crate::plan::{PlanEntry, VerificationPlan};
use crate::rules::{
    ascending_gen, evaluate, fractional_order, graf_phase, graf_real, multiple_order,
    weighted_sum_s, RuleCase, RuleConfig, RuleId, Verdict,
};
use crate::runner::run_plan;
use crate::series::SummationPolicy;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn one_sided_lhs_coincide(x in 0.2f64..6.0, frac in -0.95f64..0.95) {
        let t = frac * x / 2.0;
        let cfg = RuleConfig::default();
        let a = ascending_gen(0.0, x, t, &cfg).unwrap();
        let m = multiple_order(1, x, t, &cfg).unwrap();
        let f = fractional_order(1, x, t, &cfg).unwrap();
        prop_assert!((a.lhs.re() - m.lhs.re()).abs() <= 1e-12);
        prop_assert!((a.lhs.re() - f.lhs.re()).abs() <= 1e-12);
    }

    #[test]
    fn graf_unit_t_matches_zero_phase(nu in 0.0f64..3.0, y in 0.1f64..2.0, gap in 0.5f64..4.0) {
        let x = y + gap;
        let cfg = RuleConfig::default();
        let a = graf_real(nu, x, y, 1.0, &cfg).unwrap();
        let b = graf_phase(nu, x, y, 0.0, &cfg).unwrap();
        prop_assert!((a.lhs.re() - b.lhs.re()).abs() <= 1e-12);
        prop_assert!((a.rhs.re() - b.rhs.re()).abs() <= 1e-12);
    }

    #[test]
    fn weighted_s_routes_agree(l in 0u32..=2, m in 0u32..=2, y in 0.5f64..2.0, gap in 1.0f64..3.5) {
        let x = y + gap;
        let s = weighted_sum_s(l, m, x, y, &RuleConfig::with_tolerances(1e-6, 1e-6)).unwrap();
        prop_assert!((s.brute.as_complex() - s.deriv.as_complex()).norm() <= 1e-6);
    }

    /// A verdict of VERIFIED is never issued on an unconverged side.
    #[test]
    fn verified_implies_converged(
        x in 0.5f64..5.0,
        frac in -0.9f64..0.9,
        max_terms in 8usize..40,
    ) {
        let cfg = RuleConfig {
            policy: SummationPolicy { max_terms, ..SummationPolicy::default() },
            ..RuleConfig::default()
        };
        let t = frac * x / 2.0;
        for case in [
            RuleCase::new(RuleId::AscendingGen, &[("nu", 1.0), ("x", x), ("t", t)]),
            RuleCase::new(RuleId::MultipleOrder, &[("m", 2.0), ("x", x), ("t", t)]),
            RuleCase::new(RuleId::NeumannExt, &[("x", x), ("y", 1.0), ("t", 0.5)]),
        ] {
            let r = evaluate(&case, &cfg).unwrap();
            if r.verdict == Verdict::Verified {
                prop_assert!(r.lhs_certificate.converged && r.rhs_certificate.converged);
            }
            if !r.lhs_certificate.converged || !r.rhs_certificate.converged {
                prop_assert_eq!(r.verdict, Verdict::Inconclusive);
            }
        }
    }

    #[test]
    fn stirling_operator_identity(m in 0u32..=6, a in 0i64..=6) {
        let s: i128 = (0..=m)
            .map(|k| stirling2(m, k).unwrap() as i128 * falling_factorial_exact(a, k).unwrap())
            .sum();
        prop_assert_eq!(s, (a as i128).pow(m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn run_is_independent_of_thread_count(
        xs in prop::collection::vec(0.5f64..4.0, 1..5),
        threads in 2usize..8,
    ) {
        let ts: Vec<f64> = xs.iter().map(|x| x / 5.0).collect();
        let mut plan = VerificationPlan::new(vec![
            PlanEntry::new(RuleId::AscendingGen, &[("nu", &[0.0, 1.5]), ("x", &[4.5]), ("t", &ts)]),
            PlanEntry::new(RuleId::NeumannExt, &[("x", &xs), ("y", &[1.0]), ("t", &[0.7])]),
        ]);
        plan.parallelism = 1;
        let a = run_plan(&plan).unwrap();
        plan.parallelism = threads;
        let b = run_plan(&plan).unwrap();
        prop_assert_eq!(a.records, b.records);
        prop_assert_eq!(a.summary, b.summary);
    }
}
