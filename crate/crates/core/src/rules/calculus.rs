//! Derivative utilities behind the weighted sums, and the Bessel
//! derivative formula.

use crate::error::{Error, Result};
use crate::gamma::{binomial, falling_factorial_exact, inv_factorial, stirling2_row};
use crate::series::{central_derivative, default_step, try_central_derivative, Certificate};
use crate::special::bessel_j;

use super::{precheck, RuleCase, RuleConfig, RuleId, Side, VerificationRecord};

/// `d^m/dt^m g(f(t))` at `t0` by Hoppe's formula,
/// `sum_k g^(k)(f)/k! A_{m,k}(f)` with
/// `A_{m,k} = sum_j C(k,j) (-f)^{k-j} d^m/dt^m [f^j]`.
///
/// `g_derivs(k, u)` is `g^(k)(u)`. The derivatives of `f^j` are taken by
/// central differences with [`default_step`].
pub fn hoppe_derivative(
    g_derivs: &dyn Fn(u32, f64) -> f64,
    f: &dyn Fn(f64) -> f64,
    m: u32,
    t0: f64,
) -> Result<f64> {
    if !(1..=4).contains(&m) {
        return Err(Error::invalid(format!("Hoppe order {m} outside 1..=4")));
    }
    let f0 = f(t0);
    if !f0.is_finite() {
        return Err(Error::domain(format!("f({t0}) is not finite")));
    }
    let h = default_step(m);
    // d^m/dt^m f^j; zero for j = 0.
    let mut power_derivs = vec![0.0; m as usize + 1];
    for (j, d) in power_derivs.iter_mut().enumerate().skip(1) {
        *d = central_derivative(|t| f(t).powi(j as i32), t0, m, h)?;
    }
    let mut total = 0.0;
    for k in 0..=m {
        let mut a = 0.0;
        for j in 0..=k {
            a += binomial(k, j)? as f64 * (-f0).powi((k - j) as i32) * power_derivs[j as usize];
        }
        total += g_derivs(k, f0) * inv_factorial(k) * a;
    }
    Ok(total)
}

/// `(t d/dt)^m t^a` at `t = 1`, as `sum_k S2(m,k) a(a-1)...(a-k+1)`.
/// Equals `a^m`.
pub fn euler_operator_on_monomial(m: u32, a: i64) -> Result<i128> {
    crate::gamma::stirling2(m, 0)?;
    stirling2_row(m)
        .iter()
        .enumerate()
        .map(|(k, &s)| Ok(s as i128 * falling_factorial_exact(a, k as u32)?))
        .sum()
}

/// `(1/x) d/dx [x^nu J_nu(x)]` by central differences against
/// `x^{nu-1} J_{nu-1}(x)`.
pub fn appendix_derivative_check(nu: f64, x: f64, cfg: &RuleConfig) -> Result<VerificationRecord> {
    let case = RuleCase::new(RuleId::AppendixDerivative, &[("nu", nu), ("x", x)]);
    precheck(&case)?;
    let h = default_step(1);
    if x - 2.0 * h <= 0.0 {
        return Err(Error::domain(format!(
            "stencil leaves x > 0 (x={x}, h={h})"
        )));
    }
    let mut cert = Certificate::exact();
    let d = try_central_derivative(
        |s| {
            let e = bessel_j(nu, s, &cfg.policy)?;
            cert = cert.merge(e.certificate());
            Ok(s.powf(nu) * e.value)
        },
        x,
        1,
        h,
    )?;
    let lhs = Side::new(d / x, cert);
    let j = bessel_j(nu - 1.0, x, &cfg.policy)?;
    let rhs = Side::new(x.powf(nu - 1.0) * j.value, j.certificate());
    Ok(VerificationRecord::build(case, lhs, rhs, cfg))
}
