//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//! Exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use bessel_sumrules::gamma::{falling_factorial_exact, stirling2};
use bessel_sumrules::plan::default_plan;
use bessel_sumrules::rules::{
    appendix_derivative_check, ascending_gen, bessel_laguerre, descending_gen,
    euler_operator_on_monomial, fractional_order, graf_phase, graf_real, hoppe_derivative,
    laguerre_hermite, multiple_order, neumann_ext, weighted_sum_e, weighted_sum_s, RuleConfig,
    Verdict, VerificationRecord,
};
use bessel_sumrules::series::{central_derivative, default_step};
use bessel_sumrules::{run_plan, Error};

type Criterion = fn() -> (bool, String);

/// Accumulates the checks of one criterion.
struct Check {
    failures: Vec<String>,
    count: usize,
    worst: f64,
}

impl Check {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            count: 0,
            worst: 0.0,
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn err(&mut self, e: f64) {
        self.worst = self.worst.max(e);
    }

    /// Verified under `cfg` and, when given, `rel_err <= rel`.
    fn record(&mut self, r: &VerificationRecord, rel: Option<f64>) {
        self.err(r.rel_err);
        let ok = r.verdict == Verdict::Verified && rel.is_none_or(|b| r.rel_err <= b);
        self.require(ok, || {
            format!(
                "{} {:?}: {} abs {:.2e} rel {:.2e}",
                r.case.rule_id, r.case.params, r.verdict, r.abs_err, r.rel_err
            )
        });
    }

    fn result(self) -> (bool, String) {
        let mut detail = format!("{} checks, worst error {:.2e}", self.count, self.worst);
        if let Some(first) = self.failures.first() {
            detail += &format!("; {} failed, first: {first}", self.failures.len());
        }
        (self.failures.is_empty(), detail)
    }
}

fn criterion_1() -> (bool, String) {
    let cfg = RuleConfig::default();
    let mut c = Check::new();
    for nu in [0.0, 0.5, 1.0, 2.5] {
        for x in [1.0, 2.0, 5.0] {
            let h = x / 2.0;
            for t in [0.0, 0.2 * h, -0.2 * h, 0.45 * h, -0.45 * h] {
                c.record(&ascending_gen(nu, x, t, &cfg).unwrap(), Some(1e-8));
                c.record(&descending_gen(nu, x, t, &cfg).unwrap(), Some(1e-8));
            }
        }
    }
    c.result()
}

fn criterion_2() -> (bool, String) {
    let cfg = RuleConfig::default();
    let mut c = Check::new();
    for m in 1..=3 {
        for x in [0.5, 1.5, 3.0] {
            for t in [-0.5, 0.4, 0.9] {
                let r = multiple_order(m, x, t, &cfg).unwrap();
                c.record(&r, Some(1e-8));
                // The ascending rule is only defined for |2t| < x.
                if m == 1 && (2.0 * t).abs() < x {
                    let a = ascending_gen(0.0, x, t, &cfg).unwrap();
                    let d = (a.lhs.re() - r.lhs.re()).abs();
                    c.require(d <= 1e-12, || {
                        format!("m=1 vs ascending at x={x} t={t}: {d:.2e}")
                    });
                }
            }
        }
    }
    c.result()
}

fn criterion_3() -> (bool, String) {
    let cfg = RuleConfig::with_tolerances(1e-9, 1e-7);
    let mut c = Check::new();
    for m in [2, 3] {
        for x in [0.5, 1.0, 2.0] {
            for t in [-0.4, 0.3] {
                c.record(&fractional_order(m, x, t, &cfg).unwrap(), Some(1e-7));
            }
        }
    }
    c.result()
}

fn criterion_4() -> (bool, String) {
    let cfg = RuleConfig::with_tolerances(1e-7, 1e-7);
    let mut c = Check::new();
    let ts = [-0.25, 0.1, 0.25];
    let check_variant = |c: &mut Check, r: &VerificationRecord| {
        if r.verdict == Verdict::Discrepant {
            c.require(r.extra("sign_variant").is_some(), || {
                format!("{:?}: sign variant missing", r.case.params)
            });
        }
        c.record(r, None);
    };
    for z in [0.5, 1.0, 2.0] {
        for x in [0.0, 0.5, 1.0] {
            for y in [0.5, 1.0] {
                for t in ts {
                    check_variant(&mut c, &bessel_laguerre(z, x, y, t, &cfg).unwrap());
                }
            }
        }
    }
    for x in [0.5, 1.0] {
        for y in [0.5, 1.0] {
            for z in [0.5, 1.0] {
                for w in [-0.5, 0.5] {
                    for t in ts {
                        c.record(&laguerre_hermite(x, y, z, w, t, &cfg).unwrap(), None);
                    }
                }
            }
        }
    }
    c.result()
}

fn criterion_5() -> (bool, String) {
    let real_cfg = RuleConfig::with_tolerances(1e-9, 1e-9);
    let phase_cfg = RuleConfig::with_tolerances(1e-8, 1e-8);
    let mut c = Check::new();
    for nu in [0.0, 1.0, 2.5] {
        for (x, y) in [(5.0, 1.0), (4.0, 2.0)] {
            for t in [1.5, 2.0] {
                match graf_real(nu, x, y, t, &real_cfg) {
                    Ok(r) => c.record(&r, None),
                    // Off the real branch: x > y t fails at (4, 2, 2).
                    Err(Error::InvalidArgument(_)) => {
                        c.require(x <= y * t, || format!("rejected valid point {x},{y},{t}"))
                    }
                    Err(e) => c.require(false, || e.to_string()),
                }
            }
        }
    }
    for nu in [0.0, 1.0, 2.5] {
        for (x, y) in [(3.0, 1.0), (5.0, 2.0)] {
            for theta in [0.0, PI / 5.0, PI / 2.0, PI] {
                let r = graf_phase(nu, x, y, theta, &phase_cfg).unwrap();
                c.record(&r, None);
                let (dr, di) = (
                    (r.lhs.re() - r.rhs.re()).abs(),
                    (r.lhs.im() - r.rhs.im()).abs(),
                );
                c.require(dr <= 1e-8 && di <= 1e-8, || {
                    format!("components {dr:.2e}, {di:.2e}")
                });
            }
            let a = graf_real(nu, x, y, 1.0, &real_cfg).unwrap();
            let b = graf_phase(nu, x, y, 0.0, &phase_cfg).unwrap();
            let d = (a.lhs.re() - b.lhs.re())
                .abs()
                .max((a.rhs.re() - b.rhs.re()).abs());
            c.require(d <= 1e-12, || format!("t=1 vs theta=0 at {x},{y}: {d:.2e}"));
        }
    }
    c.result()
}

fn criterion_6() -> (bool, String) {
    let cfg = RuleConfig::with_tolerances(1e-7, 1e-7);
    let mut c = Check::new();
    let mut alt_worst: f64 = 0.0;
    for x in [0.5, 1.0] {
        for y in [1.0, 1.5] {
            for t in [0.5, 0.8, -0.6] {
                let r = neumann_ext(x, y, t, &cfg).unwrap();
                if let Some(a) = r.extra("rederived_negative_order") {
                    alt_worst = alt_worst.max(a.abs_err);
                }
                c.record(&r, None);
            }
        }
    }
    let (ok, detail) = c.result();
    (
        ok,
        format!("{detail}; re-derived form worst abs error {alt_worst:.2e}"),
    )
}

fn criterion_7() -> (bool, String) {
    let cfg = RuleConfig::with_tolerances(1e-6, 1e-6);
    let mut c = Check::new();
    for (x, y) in [(3.0, 1.0), (5.0, 2.0)] {
        for l in 0..=2 {
            for m in 0..=2 {
                let s = weighted_sum_s(l, m, x, y, &cfg).unwrap();
                let d = (s.brute.as_complex() - s.deriv.as_complex()).norm();
                c.err(d);
                c.require(d <= 1e-6 && s.record.verdict == Verdict::Verified, || {
                    format!("l={l} m={m} x={x} y={y}: {d:.2e}")
                });
                let closed = s.record.extra("closed_form");
                c.require(
                    closed.is_some_and(|e| e.report_only && e.abs_err.is_finite()),
                    || format!("l={l} m={m}: closed form not reported"),
                );
            }
        }
    }
    // The json report archives the closed-form discrepancies.
    let report = run_plan(&default_plan()).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    c.require(json.contains("\"closed_form\""), || {
        "closed_form missing from json".into()
    });
    c.result()
}

fn criterion_8() -> (bool, String) {
    let cfg = RuleConfig::with_tolerances(1e-9, 1e-9);
    let mut c = Check::new();
    for l in 0..=1 {
        for m in 1..=3 {
            for x in [0.5, 1.5, 2.0, 4.0] {
                c.record(&weighted_sum_e(l, m, x, &cfg).unwrap(), None);
            }
        }
    }
    let r = weighted_sum_e(1, 1, 2.0, &cfg).unwrap();
    let d = (r.rhs.re() - 0.5).abs();
    c.require(d <= 1e-12, || format!("forced point rhs off by {d:.2e}"));
    c.result()
}

fn criterion_9() -> (bool, String) {
    let mut c = Check::new();
    for m in 1..=10u32 {
        for k in 1..=m {
            let lhs = stirling2(m, k).unwrap();
            let rhs = k as u128 * stirling2(m - 1, k).unwrap() + stirling2(m - 1, k - 1).unwrap();
            c.require(lhs == rhs, || format!("S2({m},{k}) recurrence"));
        }
    }
    for m in 0..=10u32 {
        for a in 0..=10i64 {
            let direct: i128 = (0..=m)
                .map(|k| stirling2(m, k).unwrap() as i128 * falling_factorial_exact(a, k).unwrap())
                .sum();
            let power = (a as i128).pow(m);
            c.require(direct == power, || {
                format!("m={m} a={a}: {direct} != {power}")
            });
            c.require(euler_operator_on_monomial(m, a).unwrap() == power, || {
                format!("operator m={m} a={a}")
            });
        }
    }
    c.result()
}

fn criterion_10() -> (bool, String) {
    let cfg = RuleConfig::with_tolerances(1e-6, 1e-6);
    let mut c = Check::new();
    for nu in [0.0, 0.5, 1.0, 2.0] {
        for x in [1.0, 2.0] {
            c.record(&appendix_derivative_check(nu, x, &cfg).unwrap(), None);
        }
    }
    c.result()
}

fn criterion_11() -> (bool, String) {
    let mut c = Check::new();
    let compare = |c: &mut Check, label: &str, v: f64, oracle: f64| {
        let d = (v - oracle).abs();
        c.err(d);
        c.require(d <= 1e-6, || format!("{label}: {d:.2e}"));
    };
    let identity = |k: u32, u: f64| match k {
        0 => u,
        1 => 1.0,
        _ => 0.0,
    };
    let f = |t: f64| t.exp() * t.cos();
    let v = hoppe_derivative(&identity, &f, 1, 0.7).unwrap();
    compare(
        &mut c,
        "identity",
        v,
        central_derivative(f, 0.7, 1, default_step(1)).unwrap(),
    );

    let square = |k: u32, u: f64| match k {
        0 => u * u,
        1 => 2.0 * u,
        2 => 2.0,
        _ => 0.0,
    };
    let v = hoppe_derivative(&square, &|t| t, 2, 1.0).unwrap();
    compare(
        &mut c,
        "square",
        v,
        central_derivative(|t| t * t, 1.0, 2, default_step(2)).unwrap(),
    );
    compare(&mut c, "square exact", v, 2.0);

    let exp = |_: u32, u: f64| u.exp();
    let v = hoppe_derivative(&exp, &|t| t * t, 2, 0.5).unwrap();
    compare(
        &mut c,
        "exp",
        v,
        central_derivative(|t| (t * t).exp(), 0.5, 2, default_step(2)).unwrap(),
    );

    let sin = |k: u32, u: f64| match k % 4 {
        0 => u.sin(),
        1 => u.cos(),
        2 => -u.sin(),
        _ => -u.cos(),
    };
    for m in 1..=3 {
        let v = hoppe_derivative(&sin, &|t| t * t + 1.0, m, 0.4).unwrap();
        let oracle = central_derivative(|t| (t * t + 1.0).sin(), 0.4, m, default_step(m)).unwrap();
        compare(&mut c, &format!("sin m={m}"), v, oracle);
    }
    c.result()
}

fn criterion_12() -> (bool, String) {
    let base = default_plan();
    let mut doubled = base.clone();
    doubled.policy.max_terms = Some(2 * base.policy().max_terms);
    let a = run_plan(&base).unwrap();
    let b = run_plan(&doubled).unwrap();
    let mut c = Check::new();
    for (ra, rb) in a.records.iter().zip(&b.records) {
        let (ra, rb) = (&ra.record, &rb.record);
        assert_eq!(ra.case, rb.case);
        if ra.verdict != Verdict::Verified {
            continue;
        }
        let shift = (ra.lhs.as_complex() - rb.lhs.as_complex()).norm();
        let bound = 10.0 * ra.lhs_certificate.last_term_magnitude;
        c.err(shift);
        c.require(shift <= bound, || {
            format!(
                "{} {:?}: lhs moved {shift:.2e} > {bound:.2e}",
                ra.case.rule_id, ra.case.params
            )
        });
    }
    c.result()
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 12] = [
        ("ascending and descending generating functions", criterion_1),
        ("multiple-order rule", criterion_2),
        ("fractional-order rule", criterion_3),
        ("Bessel-Laguerre and Laguerre-Hermite rules", criterion_4),
        ("Graf addition theorem, real and phase forms", criterion_5),
        ("extended Neumann rule", criterion_6),
        ("weighted sums S", criterion_7),
        ("weighted sums E", criterion_8),
        ("combinatorial exactness", criterion_9),
        ("Bessel derivative formula", criterion_10),
        ("Hoppe formula", criterion_11),
        ("engine honesty under a doubled term budget", criterion_12),
    ];
    let start = std::time::Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = run();
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name} ({detail})",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
