//! Composite families: base series whose power kernel is replaced by a
//! Hermite or Laguerre polynomial, and the hybrid `K` functions built from
//! Hermite-based Tricomi functions of shifted order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::reciprocal_gamma;
use crate::series::{try_sum_series, try_sum_series_from, SeriesEval, SummationPolicy};
use crate::special::{nonpositive_gamma_region, HermiteOrder, ScaledHermite, ScaledLaguerre};

/// Inner sums of nested series are evaluated this much tighter than the outer one.
pub const NESTED_TIGHTENING: f64 = 10.0;

fn pole_warmup(offset: f64) -> usize {
    nonpositive_gamma_region(offset, 1.0) * (offset.fract() == 0.0) as usize
}

/// Hermite-based Tricomi function
/// `_H C_nu^(m)(u, v) = sum_k (-1)^k H_k^(m)(u, v) / (k! Gamma(nu + k + 1))`.
pub fn h_tricomi(
    nu: f64,
    order: HermiteOrder,
    u: f64,
    v: f64,
    policy: &SummationPolicy,
) -> Result<SeriesEval<f64>> {
    let mut h = ScaledHermite::new(order, u, v);
    try_sum_series_from(
        |k| {
            let t = h.get(k) * reciprocal_gamma(nu + k as f64 + 1.0);
            Ok(if k % 2 == 1 { -t } else { t })
        },
        policy,
        pole_warmup(nu + 1.0),
    )
}

/// Laguerre-based Tricomi function
/// `_L C_nu(u, v) = sum_k (-1)^k L_k(u, v) / (k! Gamma(nu + k + 1))`.
pub fn l_tricomi(nu: f64, u: f64, v: f64, policy: &SummationPolicy) -> Result<SeriesEval<f64>> {
    let mut l = ScaledLaguerre::new(u, v);
    try_sum_series_from(
        |k| {
            let t = l.get(k) * reciprocal_gamma(nu + k as f64 + 1.0);
            Ok(if k % 2 == 1 { -t } else { t })
        },
        policy,
        pole_warmup(nu + 1.0),
    )
}

/// Hermite-based Wright function
/// `_H W_nu^(m)(u, v | mu) = sum_k H_k^(m)(u, v) / (k! Gamma(mu k + nu + 1))`.
///
/// The index shift (`nu + 1`) follows this family's own definition and
/// differs from [`crate::special::wright`].
pub fn h_wright(
    nu: f64,
    order: HermiteOrder,
    mu: f64,
    u: f64,
    v: f64,
    policy: &SummationPolicy,
) -> Result<SeriesEval<f64>> {
    if mu <= 0.0 || !mu.is_finite() {
        return Err(Error::domain(format!("h_wright requires mu > 0, got {mu}")));
    }
    let mut h = ScaledHermite::new(order, u, v);
    try_sum_series_from(
        |k| Ok(h.get(k) * reciprocal_gamma(mu * k as f64 + nu + 1.0)),
        policy,
        nonpositive_gamma_region(nu + 1.0, mu).min(policy.max_terms),
    )
}

/// Hybrid function `_H K_mu^(m)(x, y | xi) = sum_k xi^k / k! _H C^(2)_{m k + mu}(x, y)`.
///
/// The inner Tricomi functions carry Hermite order 2 regardless of `m`, and
/// are summed with the policy tightened by [`NESTED_TIGHTENING`]. Any inner
/// non-convergence marks the whole result unconverged.
pub fn hybrid_k(
    mu: f64,
    m: u32,
    x: f64,
    y: f64,
    xi: f64,
    policy: &SummationPolicy,
) -> Result<SeriesEval<f64>> {
    if m == 0 {
        return Err(Error::invalid(
            "hybrid_k index multiplier m must be at least 1",
        ));
    }
    let inner_policy = policy.tightened(NESTED_TIGHTENING);
    let two = HermiteOrder::new(2)?;
    let mut inner_ok = true;
    let mut weight = 1.0;
    let outer = try_sum_series(
        |k| {
            if k > 0 {
                weight *= xi / k as f64;
            }
            if weight == 0.0 {
                return Ok(0.0);
            }
            let c = h_tricomi((m as usize * k) as f64 + mu, two, x, y, &inner_policy)?;
            inner_ok &= c.converged;
            Ok(weight * c.value)
        },
        policy,
    )?;
    Ok(SeriesEval {
        converged: outer.converged && inner_ok,
        ..outer
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HybridFamily {
    HTricomi,
    LTricomi,
    HWright,
    HK,
}

/// A fully parameterised hybrid family, minus its evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridSpec {
    pub family: HybridFamily,
    /// `nu` for the Tricomi and Wright families, `mu` for `K`.
    pub nu_or_mu: f64,
    pub m: u32,
    /// Wright `mu`; only meaningful for [`HybridFamily::HWright`].
    pub extra_mu: f64,
}

impl HybridSpec {
    pub fn new(family: HybridFamily, nu_or_mu: f64, m: u32, extra_mu: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("hybrid family order m must be at least 1"));
        }
        if family == HybridFamily::HWright && (extra_mu.is_nan() || extra_mu <= 0.0) {
            return Err(Error::invalid(format!(
                "H_WRIGHT needs mu > 0, got {extra_mu}"
            )));
        }
        Ok(Self {
            family,
            nu_or_mu,
            m,
            extra_mu,
        })
    }

    /// Evaluate at `(u, v)`; `xi` is the third argument of `K` and ignored otherwise.
    pub fn eval(
        &self,
        u: f64,
        v: f64,
        xi: f64,
        policy: &SummationPolicy,
    ) -> Result<SeriesEval<f64>> {
        let order = HermiteOrder::new(self.m)?;
        match self.family {
            HybridFamily::HTricomi => h_tricomi(self.nu_or_mu, order, u, v, policy),
            HybridFamily::LTricomi => l_tricomi(self.nu_or_mu, u, v, policy),
            HybridFamily::HWright => h_wright(self.nu_or_mu, order, self.extra_mu, u, v, policy),
            HybridFamily::HK => hybrid_k(self.nu_or_mu, self.m, u, v, xi, policy),
        }
    }
}
