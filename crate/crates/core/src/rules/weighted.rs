//! Power-weighted Bessel sums `S_l^(m)` and `E_l^(m)`.

use num_complex::Complex64;

use crate::error::Result;
use crate::gamma::{binomial, inv_factorial, stirling2_row};
use crate::series::{
    default_step, try_central_derivative, try_sum_series, Certificate, SummationPolicy,
};
use crate::special::{bessel_j, tricomi_c};

use super::addition::{graf_phase_closed, graf_series};
use super::generating::InnerCheck;
use super::{precheck, RuleCase, RuleConfig, RuleId, Side, Value, VerificationRecord};

/// Label of the report-only nested closed form on `WEIGHTED_S` records.
pub const WEIGHTED_S_CLOSED: &str = "closed_form";

/// The three evaluations of `S_l^(m)(x, y)`. `record` compares `brute`
/// against `deriv` and carries `closed` as a report-only comparison.
#[derive(Debug, Clone)]
pub struct WeightedS {
    pub record: VerificationRecord,
    pub brute: Value,
    pub deriv: Value,
    pub closed: Value,
}

/// `b^e` with `0^0 = 1`.
fn ipow(b: i64, e: u32) -> f64 {
    (b as f64).powi(e as i32)
}

/// `S_l^(m)(x, y) = sum_{n in Z} n^m J_{n+l}(x) J_n(y)`.
///
/// `deriv` is `(-i)^m d^m/dtheta^m` of the phase-form Graf closed form at
/// `theta = 0`, by central differences; for `m = 0` it is the closed form
/// itself.
pub fn weighted_sum_s(l: u32, m: u32, x: f64, y: f64, cfg: &RuleConfig) -> Result<WeightedS> {
    let case = RuleCase::new(
        RuleId::WeightedS,
        &[("l", l as f64), ("m", m as f64), ("x", x), ("y", y)],
    );
    precheck(&case)?;
    let nu = l as f64;
    let brute = graf_series(|n| ipow(n, m), nu, x, y, cfg)?;

    let deriv = if m == 0 {
        let e = graf_phase_closed(nu, x, y, 0.0, &cfg.policy)?;
        Side::new(e.value, e.certificate())
    } else {
        let mut cert = Certificate::exact();
        let d = try_central_derivative(
            |theta| {
                let e = graf_phase_closed(nu, x, y, theta, &cfg.policy)?;
                cert = cert.merge(e.certificate());
                Ok(e.value)
            },
            0.0,
            m,
            default_step(m),
        )?;
        Side::new(Complex64::new(0.0, -1.0).powu(m) * d, cert)
    };

    let closed = weighted_s_closed_form(l, m, x, y, &cfg.policy)?;
    let closed = Side::new(closed.0, closed.1);

    let mut record = VerificationRecord::build(case, Side::from_eval(brute), deriv, cfg);
    record.compare_extra(WEIGHTED_S_CLOSED, closed, true, cfg);
    Ok(WeightedS {
        brute: record.lhs,
        deriv: record.rhs,
        closed: closed.value,
        record,
    })
}

/// The nested finite closed form of `S_l^(m)(x, y)`:
///
/// `sum_j C(m,j) sum_k C(l,k) (k-l)^j sum_{p<=m-j} R_{k,p} / p!` with
/// `R_{k,p} = sum_q C(p,q) (-1/2)^q sum_r C(q,r) (2r-q)^(m-j)
/// x^(k+p) (-y)^(l-k+p) / (x-y)^(l+p) J_{l+p}(x-y)`.
///
/// The exponent `m - j` inside `R` uses the outer `j`.
pub fn weighted_s_closed_form(
    l: u32,
    m: u32,
    x: f64,
    y: f64,
    policy: &SummationPolicy,
) -> Result<(f64, Certificate)> {
    let d = x - y;
    let mut cert = Certificate::exact();
    let mut bessel = Vec::with_capacity(m as usize + 1);
    for p in 0..=m {
        let e = bessel_j((l + p) as f64, d, policy)?;
        cert = cert.merge(e.certificate());
        bessel.push(e.value);
    }
    let mut total = 0.0;
    for j in 0..=m {
        let mut over_k = 0.0;
        for k in 0..=l {
            let mut over_p = 0.0;
            for p in 0..=(m - j) {
                let mut r = 0.0;
                for q in 0..=p {
                    let inner: f64 = (0..=q)
                        .map(|s| {
                            binomial(q, s).map(|c| c as f64 * ipow(2 * s as i64 - q as i64, m - j))
                        })
                        .sum::<Result<f64>>()?;
                    r += binomial(p, q)? as f64 * (-0.5f64).powi(q as i32) * inner;
                }
                let tail = x.powi((k + p) as i32) * (-y).powi((l - k + p) as i32)
                    / d.powi((l + p) as i32)
                    * bessel[p as usize];
                over_p += inv_factorial(p) * r * tail;
            }
            over_k += binomial(l, k)? as f64 * ipow(k as i64 - l as i64, j) * over_p;
        }
        total += binomial(m, j)? as f64 * over_k;
    }
    Ok((total, cert))
}

/// `E_l^(m)(x) = sum_{n>=0} n^m/n! J_{n+l}(x)` against the Stirling
/// expansion `sum_{k=1}^m S2(m,k) (x/2)^{l+k} C_{l+k}((x^2 - 2x)/4)`.
///
/// The exponent carries the `/4` of the generating function it comes
/// from; the variant without it does not reproduce the series.
pub fn weighted_sum_e(l: u32, m: u32, x: f64, cfg: &RuleConfig) -> Result<VerificationRecord> {
    let case = RuleCase::new(
        RuleId::WeightedE,
        &[("l", l as f64), ("m", m as f64), ("x", x)],
    );
    precheck(&case)?;
    let inner = cfg.inner_policy();
    let mut check = InnerCheck::new();
    let lhs = try_sum_series(
        |n| {
            let w = ipow(n as i64, m) * inv_factorial(n as u32);
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(w * check.j((n as u32 + l) as f64, x, &inner)?)
        },
        &cfg.policy,
    )?;
    let lhs = check.finish(lhs);

    let arg = (x * x - 2.0 * x) / 4.0;
    let s2 = stirling2_row(m);
    let mut cert = Certificate::exact();
    let mut rhs = 0.0;
    for k in 1..=m {
        let c = tricomi_c((l + k) as f64, arg, &cfg.policy)?;
        cert = cert.merge(c.certificate());
        rhs += s2[k as usize] as f64 * (x / 2.0).powi((l + k) as i32) * c.value;
    }
    Ok(VerificationRecord::build(
        case,
        Side::from_eval(lhs),
        Side::new(rhs, cert),
        cfg,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::Verdict;

    fn cfg() -> RuleConfig {
        RuleConfig::default()
    }

    fn j(nu: f64, x: f64) -> f64 {
        bessel_j(nu, x, &SummationPolicy::default()).unwrap().value
    }

    fn brute_s(l: u32, m: u32, x: f64, y: f64) -> f64 {
        (-40i64..=40)
            .map(|n| ipow(n, m) * j(n as f64 + l as f64, x) * j(n as f64, y))
            .sum()
    }

    #[test]
    fn s_zero_weight_is_graf() {
        let s = weighted_sum_s(0, 0, 3.0, 1.0, &cfg()).unwrap();
        assert!((s.brute.re() - j(0.0, 2.0)).abs() <= 1e-13);
        assert!((s.deriv.re() - j(0.0, 2.0)).abs() <= 1e-15);
        assert_eq!(s.record.verdict, Verdict::Verified);
    }

    #[test]
    fn s_brute_matches_window_and_derivative() {
        let tight = RuleConfig::with_tolerances(1e-6, 1e-6);
        for (x, y) in [(3.0, 1.0), (5.0, 2.0)] {
            for l in 0..=2 {
                for m in 0..=2 {
                    let s = weighted_sum_s(l, m, x, y, &tight).unwrap();
                    assert!(
                        (s.brute.re() - brute_s(l, m, x, y)).abs() <= 1e-12,
                        "l={l} m={m}"
                    );
                    assert_eq!(
                        s.record.verdict,
                        Verdict::Verified,
                        "l={l} m={m} err={}",
                        s.record.abs_err
                    );
                    assert!(s.deriv.im().abs() <= 1e-6);
                }
            }
        }
    }

    #[test]
    fn s_closed_form_is_reported_only() {
        let s = weighted_sum_s(1, 1, 3.0, 1.0, &cfg()).unwrap();
        let c = s.record.extra(WEIGHTED_S_CLOSED).unwrap();
        assert!(c.report_only);
        assert_eq!(c.value, s.closed);
        assert!(c.abs_err.is_finite());
    }

    #[test]
    fn s_closed_form_zero_weight() {
        // m = 0, l = 0 collapses to J_0(x - y).
        let (v, _) = weighted_s_closed_form(0, 0, 3.0, 1.0, &SummationPolicy::default()).unwrap();
        assert!((v - j(0.0, 2.0)).abs() <= 1e-15);
    }

    #[test]
    fn s_rejects_large_m() {
        assert!(weighted_sum_s(0, 5, 3.0, 1.0, &cfg()).is_err());
        assert!(weighted_sum_s(0, 1, 1.0, 3.0, &cfg()).is_err());
    }

    #[test]
    fn e_cases() {
        let r = weighted_sum_e(0, 1, 0.0, &cfg()).unwrap();
        assert_eq!(r.lhs.re(), 0.0);
        assert_eq!(r.rhs.re(), 0.0);

        let r = weighted_sum_e(1, 1, 2.0, &cfg()).unwrap();
        assert!((r.rhs.re() - 0.5).abs() <= 1e-12);
        assert!((r.lhs.re() - 0.5).abs() <= 1e-10);

        let r = weighted_sum_e(0, 2, 1.5, &cfg()).unwrap();
        let oracle: f64 = (0..60)
            .map(|n| ipow(n, 2) * inv_factorial(n as u32) * j(n as f64, 1.5))
            .sum();
        assert!((r.lhs.re() - oracle).abs() <= 1e-13);
        assert!(r.abs_err <= 1e-10);
        assert_eq!(r.verdict, Verdict::Verified);
    }

    #[test]
    fn e_grid() {
        for l in 0..=1 {
            for m in 1..=3 {
                for x in [0.5, 1.5, 2.0, 4.0] {
                    let r = weighted_sum_e(l, m, x, &cfg()).unwrap();
                    assert_eq!(r.verdict, Verdict::Verified, "l={l} m={m} x={x}");
                }
            }
        }
        assert!(weighted_sum_e(0, 11, 1.0, &cfg()).is_err());
    }
}
