//! One-sided generating-function rules.

use crate::error::Result;
use crate::gamma;
use crate::hybrid::{h_tricomi, h_wright, l_tricomi};
use crate::series::{try_sum_series, SeriesEval, SummationPolicy};
use crate::special::{bessel_j, HermiteOrder, ScaledHermite, ScaledLaguerre};

use super::{precheck, RuleCase, RuleConfig, RuleId, Side, VerificationRecord};

/// Tracks whether every inner series of an outer sum converged.
#[derive(Default)]
pub(super) struct InnerCheck {
    ok: bool,
    seen: bool,
}

impl InnerCheck {
    pub(super) fn new() -> Self {
        Self {
            ok: true,
            seen: false,
        }
    }

    pub(super) fn take(&mut self, e: SeriesEval<f64>) -> f64 {
        self.ok &= e.converged;
        self.seen = true;
        e.value
    }

    pub(super) fn j(&mut self, nu: f64, x: f64, policy: &SummationPolicy) -> Result<f64> {
        Ok(self.take(bessel_j(nu, x, policy)?))
    }

    /// Fold the inner status into the outer series certificate.
    pub(super) fn finish<S: Copy>(&self, outer: SeriesEval<S>) -> SeriesEval<S> {
        SeriesEval {
            converged: outer.converged && (self.ok || !self.seen),
            ..outer
        }
    }
}

/// `sum_n t^n/n! J_{order(n)}(x)`, shared by the ascending, multiple- and
/// fractional-order rules so their series sides coincide bit for bit.
fn weighted_bessel_series(
    order: impl Fn(usize) -> f64,
    x: f64,
    t: f64,
    cfg: &RuleConfig,
) -> Result<SeriesEval<f64>> {
    let inner = cfg.inner_policy();
    let mut check = InnerCheck::new();
    let mut w = crate::special::ScaledPowers::new(t);
    let outer = try_sum_series(
        |n| {
            let weight = w.get(n);
            if weight == 0.0 {
                return Ok(0.0);
            }
            Ok(weight * check.j(order(n), x, &inner)?)
        },
        &cfg.policy,
    )?;
    Ok(check.finish(outer))
}

fn closed_bessel_side(nu: f64, prefactor: f64, arg: f64, cfg: &RuleConfig) -> Result<Side> {
    let j = bessel_j(nu, arg, &cfg.policy)?;
    Ok(Side::new(prefactor * j.value, j.certificate()))
}

pub fn ascending_gen(nu: f64, x: f64, t: f64, cfg: &RuleConfig) -> Result<VerificationRecord> {
    let case = RuleCase::new(RuleId::AscendingGen, &[("nu", nu), ("x", x), ("t", t)]);
    precheck(&case)?;
    let lhs = weighted_bessel_series(|n| n as f64 + nu, x, t, cfg)?;
    let rhs = closed_bessel_side(
        nu,
        (x / (x - 2.0 * t)).powf(nu / 2.0),
        (x * x - 2.0 * x * t).sqrt(),
        cfg,
    )?;
    Ok(VerificationRecord::build(
        case,
        Side::from_eval(lhs),
        rhs,
        cfg,
    ))
}

pub fn descending_gen(nu: f64, x: f64, t: f64, cfg: &RuleConfig) -> Result<VerificationRecord> {
    let case = RuleCase::new(RuleId::DescendingGen, &[("nu", nu), ("x", x), ("t", t)]);
    precheck(&case)?;
    let lhs = weighted_bessel_series(|n| nu - n as f64, x, -t, cfg)?;
    let rhs = closed_bessel_side(
        nu,
        ((x - 2.0 * t) / x).powf(nu / 2.0),
        (x * x - 2.0 * x * t).sqrt(),
        cfg,
    )?;
    Ok(VerificationRecord::build(
        case,
        Side::from_eval(lhs),
        rhs,
        cfg,
    ))
}

pub fn multiple_order(m: u32, x: f64, t: f64, cfg: &RuleConfig) -> Result<VerificationRecord> {
    let case = RuleCase::new(
        RuleId::MultipleOrder,
        &[("m", m as f64), ("x", x), ("t", t)],
    );
    precheck(&case)?;
    let lhs = weighted_bessel_series(|n| (m as usize * n) as f64, x, t, cfg)?;
    let rhs = h_tricomi(
        0.0,
        HermiteOrder::new(m)?,
        x * x / 4.0,
        (-x / 2.0).powi(m as i32) * t,
        &cfg.policy,
    )?;
    Ok(VerificationRecord::build(
        case,
        Side::from_eval(lhs),
        Side::from_eval(rhs),
        cfg,
    ))
}

pub fn fractional_order(m: u32, x: f64, t: f64, cfg: &RuleConfig) -> Result<VerificationRecord> {
    let case = RuleCase::new(
        RuleId::FractionalOrder,
        &[("m", m as f64), ("x", x), ("t", t)],
    );
    precheck(&case)?;
    let mf = m as f64;
    let lhs = weighted_bessel_series(|n| n as f64 / mf, x, t, cfg)?;
    let rhs = h_wright(
        0.0,
        HermiteOrder::new(m)?,
        1.0 / mf,
        t * (x / 2.0).powf(1.0 / mf),
        -x * x / 4.0,
        &cfg.policy,
    )?;
    Ok(VerificationRecord::build(
        case,
        Side::from_eval(lhs),
        Side::from_eval(rhs),
        cfg,
    ))
}

/// Bessel x Laguerre rule. The first argument of the closed form is
/// `-xtz/2`; when that disagrees with the series
/// side, the opposite-sign variant is evaluated and attached as
/// `sign_variant`.
pub fn bessel_laguerre(
    z: f64,
    x: f64,
    y: f64,
    t: f64,
    cfg: &RuleConfig,
) -> Result<VerificationRecord> {
    let case = RuleCase::new(
        RuleId::BesselLaguerre,
        &[("z", z), ("x", x), ("y", y), ("t", t)],
    );
    precheck(&case)?;
    let inner = cfg.inner_policy();
    let mut check = InnerCheck::new();
    let mut lag = ScaledLaguerre::new(x, y);
    let lhs = try_sum_series(
        |n| {
            let l = lag.get(n) * t.powi(n as i32);
            if l == 0.0 {
                return Ok(0.0);
            }
            Ok(l * check.j(n as f64, z, &inner)?)
        },
        &cfg.policy,
    )?;
    let lhs = check.finish(lhs);
    let v = z * (z - 2.0 * y * t) / 4.0;
    let rhs = l_tricomi(0.0, -x * t * z / 2.0, v, &cfg.policy)?;
    let mut rec = VerificationRecord::build(case, Side::from_eval(lhs), Side::from_eval(rhs), cfg);
    if rec.verdict == super::Verdict::Discrepant {
        let alt = l_tricomi(0.0, x * t * z / 2.0, v, &cfg.policy)?;
        rec.compare_extra("sign_variant", Side::from_eval(alt), false, cfg);
    }
    Ok(rec)
}

pub fn laguerre_hermite(
    x: f64,
    y: f64,
    z: f64,
    w: f64,
    t: f64,
    cfg: &RuleConfig,
) -> Result<VerificationRecord> {
    let case = RuleCase::new(
        RuleId::LaguerreHermite,
        &[("x", x), ("y", y), ("z", z), ("w", w), ("t", t)],
    );
    precheck(&case)?;
    let two = HermiteOrder::new(2)?;
    let mut lag = ScaledLaguerre::new(x, y);
    let mut her = ScaledHermite::new(two, z, w);
    // t^n/n! L_n H_n = n! t^n (L_n/n!) (H_n/n!)
    let lhs = try_sum_series(
        |n| Ok(gamma::factorial(n as u32) * t.powi(n as i32) * lag.get(n) * her.get(n)),
        &cfg.policy,
    )?;
    let c = h_tricomi(
        0.0,
        two,
        x * t * (z + 2.0 * y * w * t),
        x * x * w * t * t,
        &cfg.policy,
    )?;
    let rhs = Side::new((y * t * (z + y * w * t)).exp() * c.value, c.certificate());
    Ok(VerificationRecord::build(
        case,
        Side::from_eval(lhs),
        rhs,
        cfg,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::gamma::factorial;
    use crate::rules::Verdict;

    fn cfg() -> RuleConfig {
        RuleConfig::default()
    }

    fn j(nu: f64, x: f64) -> f64 {
        bessel_j(nu, x, &SummationPolicy::default()).unwrap().value
    }

    /// 60-term fixed truncation of a weighted Bessel series, naive summation.
    fn brute(order: impl Fn(u32) -> f64, x: f64, t: f64) -> f64 {
        (0..60u32)
            .map(|n| t.powi(n as i32) / factorial(n) * j(order(n), x))
            .sum()
    }

    #[test]
    fn ascending() {
        let r = ascending_gen(1.0, 2.0, 0.0, &cfg()).unwrap();
        assert!((r.lhs.re() - j(1.0, 2.0)).abs() <= 1e-14);
        assert!(r.abs_err <= 1e-14);
        let r = ascending_gen(0.5, 3.0, 0.7, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!((r.lhs.re() - brute(|n| n as f64 + 0.5, 3.0, 0.7)).abs() <= 1e-13);
        assert!(r.abs_err <= 1e-10);
        assert!(matches!(
            ascending_gen(2.0, 1.0, 0.6, &cfg()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn descending() {
        let r = descending_gen(1.0, 2.0, 0.0, &cfg()).unwrap();
        assert!((r.lhs.re() - j(1.0, 2.0)).abs() <= 1e-14);
        assert!((r.rhs.re() - j(1.0, 2.0)).abs() <= 1e-14);
        let r = descending_gen(1.5, 4.0, 1.0, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(r.abs_err <= 1e-10);
        assert!((r.lhs.re() - brute(|n| 1.5 - n as f64, 4.0, -1.0)).abs() <= 1e-12);
        let r = descending_gen(0.0, 2.0, 0.5, &cfg()).unwrap();
        assert_eq!(r.rhs.re(), j(0.0, 2f64.sqrt()));
        assert!(r.abs_err <= 1e-12);
    }

    #[test]
    fn multiple() {
        let a = multiple_order(1, 2.0, 0.5, &cfg()).unwrap();
        let b = ascending_gen(0.0, 2.0, 0.5, &cfg()).unwrap();
        assert_eq!(a.lhs, b.lhs);
        let r = multiple_order(2, 1.5, 0.4, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!((r.lhs.re() - brute(|n| 2.0 * n as f64, 1.5, 0.4)).abs() <= 1e-14);
        assert!(r.abs_err <= 1e-10);
        let r = multiple_order(3, 0.0, 0.9, &cfg()).unwrap();
        assert_eq!(r.lhs.re(), 1.0);
        assert_eq!(r.rhs.re(), 1.0);
    }

    #[test]
    fn fractional() {
        let a = fractional_order(1, 2.0, 0.5, &cfg()).unwrap();
        let b = ascending_gen(0.0, 2.0, 0.5, &cfg()).unwrap();
        assert_eq!(a.lhs, b.lhs);
        let r = fractional_order(2, 1.0, 0.3, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(r.abs_err <= 1e-9);
        assert!((r.lhs.re() - brute(|n| n as f64 / 2.0, 1.0, 0.3)).abs() <= 1e-14);
        let r = fractional_order(2, 1.0, 0.0, &cfg()).unwrap();
        assert_eq!(r.lhs.re(), j(0.0, 1.0));
        assert!(r.abs_err <= 1e-14);
        assert!(fractional_order(2, 0.0, 0.3, &cfg()).is_err());
    }

    #[test]
    fn bessel_laguerre_cases() {
        let r = bessel_laguerre(1.0, 0.0, 1.0, 0.5, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        // L_n(0, y) = y^n, so the series is the ascending one at t y: J_0(0) = 1.
        assert!((r.lhs.re() - 1.0).abs() <= 1e-14);

        let r = bessel_laguerre(2.0, 0.5, 1.0, 0.3, &cfg()).unwrap();
        let oracle: f64 = (0..=30u32)
            .map(|n| {
                0.3f64.powi(n as i32) / factorial(n)
                    * j(n as f64, 2.0)
                    * crate::special::laguerre2(n, 0.5, 1.0).unwrap()
            })
            .sum();
        assert!((r.lhs.re() - oracle).abs() <= 1e-14);
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(r.abs_err <= 1e-9);
        assert!(r.extras.is_empty());

        let r = bessel_laguerre(1.7, 0.4, 0.9, 0.0, &cfg()).unwrap();
        assert!((r.lhs.re() - j(0.0, 1.7)).abs() <= 1e-15);
        assert!((r.rhs.re() - j(0.0, 1.7)).abs() <= 1e-14);
    }

    #[test]
    fn bessel_laguerre_variant_reported_on_discrepancy() {
        let cfg = RuleConfig {
            rhs_perturbation: 1e-3,
            ..cfg()
        };
        let r = bessel_laguerre(2.0, 0.5, 1.0, 0.3, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Discrepant);
        let v = r.extra("sign_variant").unwrap();
        assert_eq!(v.verdict, Verdict::Discrepant);
    }

    #[test]
    fn laguerre_hermite_cases() {
        let r = laguerre_hermite(0.3, 0.7, 1.1, -0.4, 0.0, &cfg()).unwrap();
        assert_eq!(r.lhs.re(), 1.0);
        assert_eq!(r.rhs.re(), 1.0);

        let r = laguerre_hermite(0.0, 1.0, 1.0, 0.5, 0.2, &cfg()).unwrap();
        let want = (0.2f64 + 0.5 * 0.04).exp();
        assert!((r.lhs.re() - want).abs() <= 1e-14);
        assert!((r.rhs.re() - want).abs() <= 1e-14);

        let r = laguerre_hermite(0.4, 0.8, 1.0, -0.3, 0.25, &cfg()).unwrap();
        let oracle: f64 = (0..=30u32)
            .map(|n| {
                let two = HermiteOrder::new(2).unwrap();
                0.25f64.powi(n as i32) / factorial(n)
                    * crate::special::laguerre2(n, 0.4, 0.8).unwrap()
                    * crate::special::hermite_m(n, two, 1.0, -0.3).unwrap()
            })
            .sum();
        assert!((r.lhs.re() - oracle).abs() <= 1e-14);
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(r.abs_err <= 1e-8);
        assert!(laguerre_hermite(0.4, 0.8, 1.0, -0.3, 0.3, &cfg()).is_err());
    }
}
