//! Base function families, each evaluated from its defining series.
//!
//! | function | series |
//! |----------|--------|
//! | `J_nu(x)` | `sum (-1)^k (x/2)^(2k+nu) / (k! Gamma(nu+k+1))` |
//! | `C_alpha(x)` | `sum (-x)^k / (k! Gamma(alpha+k+1))` |
//! | `L_n(x, y)` | `n! sum_{k<=n} (-x)^k y^(n-k) / ((n-k)! (k!)^2)` |
//! | `H_n^(m)(x, y)` | `n! sum_{k<=n/m} x^(n-mk) y^k / ((n-mk)! k!)` |
//! | `W_nu(x \| mu)` | `sum x^r / (r! Gamma(nu + mu r))` |

use crate::error::{Error, Result};
use crate::gamma::{self, is_gamma_pole, reciprocal_gamma, EXACTNESS_BOUND};
use crate::series::{try_sum_series_from, SeriesEval, SummationPolicy};

/// Superscript order `m >= 1` of the Hermite family `H_n^(m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HermiteOrder(u32);

impl HermiteOrder {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("Hermite order must be at least 1"));
        }
        Ok(Self(m))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Lazily grown table of `z^n / n!`.
#[derive(Debug, Clone)]
pub(crate) struct ScaledPowers {
    z: f64,
    vals: Vec<f64>,
}

impl ScaledPowers {
    pub(crate) fn new(z: f64) -> Self {
        Self { z, vals: vec![1.0] }
    }

    pub(crate) fn get(&mut self, n: usize) -> f64 {
        while self.vals.len() <= n {
            let k = self.vals.len();
            let next = self.vals[k - 1] * self.z / k as f64;
            self.vals.push(next);
        }
        self.vals[n]
    }
}

/// `H_n^(m)(x, y) / n!` for any `n`, built from cached scaled powers.
#[derive(Debug, Clone)]
pub(crate) struct ScaledHermite {
    m: usize,
    xs: ScaledPowers,
    ys: ScaledPowers,
}

impl ScaledHermite {
    pub(crate) fn new(order: HermiteOrder, x: f64, y: f64) -> Self {
        Self {
            m: order.get() as usize,
            xs: ScaledPowers::new(x),
            ys: ScaledPowers::new(y),
        }
    }

    pub(crate) fn get(&mut self, n: usize) -> f64 {
        let mut s = 0.0;
        for k in 0..=n / self.m {
            s += self.xs.get(n - self.m * k) * self.ys.get(k);
        }
        s
    }
}

/// `L_n(x, y) / n!` for any `n`.
#[derive(Debug, Clone)]
pub(crate) struct ScaledLaguerre {
    xs: ScaledPowers,
    ys: ScaledPowers,
}

impl ScaledLaguerre {
    pub(crate) fn new(x: f64, y: f64) -> Self {
        Self {
            xs: ScaledPowers::new(-x),
            ys: ScaledPowers::new(y),
        }
    }

    pub(crate) fn get(&mut self, n: usize) -> f64 {
        let mut s = 0.0;
        for k in 0..=n {
            s += self.xs.get(k) * gamma::inv_factorial(k as u32) * self.ys.get(n - k);
        }
        s
    }
}

fn check_finite(name: &str, vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name}: non-finite argument in {vals:?}"
        )))
    }
}

/// Number of leading terms `k` for which `Gamma(offset + k)` sits on a pole,
/// i.e. the terms that vanish identically.
fn leading_pole_terms(offset: f64) -> usize {
    if is_gamma_pole(offset) {
        (1.0 - offset) as usize
    } else {
        0
    }
}

/// Bessel function of the first kind `J_nu(x)` for real order.
pub fn bessel_j(nu: f64, x: f64, policy: &SummationPolicy) -> Result<SeriesEval<f64>> {
    check_finite("bessel_j", &[nu, x])?;
    let integer_order = nu.fract() == 0.0;
    if !integer_order && x < 0.0 {
        return Err(Error::domain(format!(
            "J_{nu}({x}): negative argument with non-integer order"
        )));
    }
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(SeriesEval::exact(1.0))
        } else if nu > 0.0 || integer_order {
            Ok(SeriesEval::exact(0.0))
        } else {
            Err(Error::domain(format!(
                "J_{nu}(0) diverges for negative non-integer order"
            )))
        };
    }
    let half = 0.5 * x;
    let q = half * half;
    // P_k = (x/2)^(2k+nu) / k!
    let mut p = if integer_order {
        half.powi(nu as i32)
    } else {
        half.powf(nu)
    };
    let warmup = leading_pole_terms(nu + 1.0);
    try_sum_series_from(
        |k| {
            if k > 0 {
                p *= q / k as f64;
            }
            let t = p * reciprocal_gamma(nu + k as f64 + 1.0);
            Ok(if k % 2 == 1 { -t } else { t })
        },
        policy,
        warmup,
    )
}

/// Tricomi-Bessel function `C_alpha(x)`, entire in `x`.
pub fn tricomi_c(alpha: f64, x: f64, policy: &SummationPolicy) -> Result<SeriesEval<f64>> {
    check_finite("tricomi_c", &[alpha, x])?;
    let mut w = ScaledPowers::new(-x);
    try_sum_series_from(
        |k| Ok(w.get(k) * reciprocal_gamma(alpha + k as f64 + 1.0)),
        policy,
        leading_pole_terms(alpha + 1.0),
    )
}

/// Two-variable Laguerre polynomial `L_n(x, y) = y^n L_n(x/y)`.
pub fn laguerre2(n: u32, x: f64, y: f64) -> Result<f64> {
    if n > EXACTNESS_BOUND {
        return Err(Error::invalid(format!(
            "laguerre2 degree {n} exceeds {EXACTNESS_BOUND}"
        )));
    }
    let mut s = 0.0;
    for k in 0..=n {
        let c = gamma::binomial(n, k)? as f64;
        s += c * (-x).powi(k as i32) * y.powi((n - k) as i32) / gamma::factorial(k);
    }
    Ok(s)
}

/// Gould-Hopper polynomial `H_n^(m)(x, y)`, generating function `exp(x t + y t^m)`.
pub fn hermite_m(n: u32, order: HermiteOrder, x: f64, y: f64) -> Result<f64> {
    if n > EXACTNESS_BOUND {
        return Err(Error::invalid(format!(
            "hermite_m degree {n} exceeds {EXACTNESS_BOUND}"
        )));
    }
    let m = order.get();
    let nf = gamma::factorial_exact(n)?;
    let mut s = 0.0;
    for k in 0..=n / m {
        let p = n - m * k;
        let c = nf / (gamma::factorial_exact(p)? * gamma::factorial_exact(k)?);
        s += c as f64 * x.powi(p as i32) * y.powi(k as i32);
    }
    Ok(s)
}

/// Wright function `W_nu(x | mu) = sum x^r / (r! Gamma(nu + mu r))`, `mu > 0`.
pub fn wright(nu: f64, mu: f64, x: f64, policy: &SummationPolicy) -> Result<SeriesEval<f64>> {
    check_finite("wright", &[nu, mu, x])?;
    if mu <= 0.0 {
        return Err(Error::domain(format!("wright requires mu > 0, got {mu}")));
    }
    let mut w = ScaledPowers::new(x);
    try_sum_series_from(
        |r| Ok(w.get(r) * reciprocal_gamma(nu + mu * r as f64)),
        policy,
        nonpositive_gamma_region(nu, mu).min(policy.max_terms),
    )
}

/// Count of indices `r >= 0` with `offset + slope r <= 0`; past these the
/// reciprocal gamma weights stop vanishing at poles.
pub(crate) fn nonpositive_gamma_region(offset: f64, slope: f64) -> usize {
    if offset > 0.0 {
        0
    } else {
        ((-offset / slope).floor() as usize).saturating_add(1)
    }
}
