//! Reciprocal gamma and exact integer combinatorics.
//!
//! Every series coefficient in the crate is built from these primitives. The
//! reciprocal gamma function is the moment sequence of the umbral symbol:
//! `c^alpha` acting on the vacuum yields `1 / Gamma(1 + alpha)`, and the
//! vanishing of that value at the gamma poles is what truncates series such
//! as `J_{-n}`. It is therefore returned as an exact `0.0` there, never as a
//! tiny residual.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest argument accepted by the exact integer routines.
pub const EXACTNESS_BOUND: u32 = 30;

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficient set).
const LANCZOS_SHIFT: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// `n!` as `f64` for `n <= 170`; accumulated by exact-as-possible products.
const FACTORIAL_TABLE_LEN: usize = 171;

fn factorial_table() -> &'static [f64; FACTORIAL_TABLE_LEN] {
    static TABLE: std::sync::OnceLock<[f64; FACTORIAL_TABLE_LEN]> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; FACTORIAL_TABLE_LEN];
        for n in 1..FACTORIAL_TABLE_LEN {
            t[n] = t[n - 1] * n as f64;
        }
        t
    })
}

/// `n!` in floating point; `+inf` once it overflows (`n > 170`).
pub fn factorial(n: u32) -> f64 {
    factorial_table()
        .get(n as usize)
        .copied()
        .unwrap_or(f64::INFINITY)
}

/// `1 / n!`, which underflows gracefully to zero for large `n`.
pub fn inv_factorial(n: u32) -> f64 {
    match factorial_table().get(n as usize) {
        Some(f) => 1.0 / f,
        None => reciprocal_gamma(n as f64 + 1.0),
    }
}

fn lanczos_series(a: f64) -> f64 {
    let mut ser = LANCZOS_C0;
    for (j, c) in LANCZOS.iter().enumerate() {
        ser += c / (a + (j + 1) as f64);
    }
    ser
}

/// `1/Gamma(a)` for `a >= 0.5`.
fn reciprocal_gamma_positive(a: f64) -> f64 {
    if a.fract() == 0.0 && a < FACTORIAL_TABLE_LEN as f64 {
        return 1.0 / factorial_table()[a as usize - 1];
    }
    let t = a + LANCZOS_SHIFT;
    let ser = lanczos_series(a);
    if a > 140.0 {
        return a * (t - (a + 0.5) * t.ln()).exp() / (SQRT_TWO_PI * ser);
    }
    // Split the power so t^(a+1/2) never overflows on its own.
    let half = t.powf(0.5 * (a + 0.5));
    a * (t.exp() / half) / half / (SQRT_TWO_PI * ser)
}

/// `Gamma(a)` for `a >= 0.5`.
fn gamma_positive(a: f64) -> f64 {
    if a.fract() == 0.0 && a < FACTORIAL_TABLE_LEN as f64 {
        return factorial_table()[a as usize - 1];
    }
    let t = a + LANCZOS_SHIFT;
    let ser = lanczos_series(a);
    let half = t.powf(0.5 * (a + 0.5));
    SQRT_TWO_PI * ser / a * (half * (-t).exp()) * half
}

/// `sin(pi * a)` with exact argument reduction, so integers give exactly zero.
pub(crate) fn sin_pi(a: f64) -> f64 {
    let mut r = a % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    if r == 0.0 {
        return 0.0;
    }
    if r.abs() <= 0.25 {
        (PI * r).sin()
    } else {
        r.signum() * (PI * (0.5 - r.abs())).cos()
    }
}

/// `1 / Gamma(a)` for real `a`.
///
/// Exactly `0.0` at the poles `a = 0, -1, -2, ...`. Below roughly `-170` the
/// true value exceeds the `f64` range and the result is infinite; NaN input
/// propagates.
pub fn reciprocal_gamma(a: f64) -> f64 {
    if !a.is_finite() {
        return f64::NAN;
    }
    if a >= 0.5 {
        return reciprocal_gamma_positive(a);
    }
    if a.fract() == 0.0 {
        return 0.0;
    }
    sin_pi(a) * gamma_positive(1.0 - a) / PI
}

/// [`reciprocal_gamma`] with the non-finite input reported as an error.
pub fn checked_reciprocal_gamma(a: f64) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::invalid(format!(
            "reciprocal_gamma of non-finite {a}"
        )));
    }
    Ok(reciprocal_gamma(a))
}

/// True when `a` sits on a pole of Gamma (non-positive integer).
pub fn is_gamma_pole(a: f64) -> bool {
    a <= 0.0 && a.fract() == 0.0
}

/// The umbral moment `phi_alpha = 1 / Gamma(1 + alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UmbralMoment {
    pub alpha: f64,
    pub value: f64,
}

pub fn phi(alpha: f64) -> UmbralMoment {
    UmbralMoment {
        alpha,
        value: reciprocal_gamma(1.0 + alpha),
    }
}

fn check_bound(what: &str, n: u32) -> Result<()> {
    if n > EXACTNESS_BOUND {
        return Err(Error::invalid(format!(
            "{what} argument {n} exceeds exactness bound {EXACTNESS_BOUND}"
        )));
    }
    Ok(())
}

/// Exact `n!` for `n <= 30`.
pub fn factorial_exact(n: u32) -> Result<u128> {
    check_bound("factorial", n)?;
    Ok((1..=n as u128).product())
}

/// Exact binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> Result<u128> {
    check_bound("binomial", n)?;
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    // Each partial product C(n, i) is an integer, so the division is exact.
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    Ok(c)
}

/// Stirling number of the second kind `S2(m, k)`, exact.
pub fn stirling2(m: u32, k: u32) -> Result<u128> {
    check_bound("stirling2", m)?;
    check_bound("stirling2", k)?;
    if k > m {
        return Ok(0);
    }
    Ok(stirling2_row(m)[k as usize])
}

/// Row `m` of the Stirling triangle, `S2(m, 0..=m)`. Callers bound `m`.
pub(crate) fn stirling2_row(m: u32) -> Vec<u128> {
    let m = m as usize;
    let mut row = vec![0u128; m + 1];
    row[0] = 1;
    for n in 1..=m {
        for k in (1..=n).rev() {
            row[k] = k as u128 * row[k] + row[k - 1];
        }
        row[0] = 0;
    }
    row
}

/// `a (a-1) ... (a-k+1)`; one for `k = 0`.
pub fn falling_factorial(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a - i as f64))
}

/// Integer falling factorial, exact for the ranges used by the Stirling checks.
pub fn falling_factorial_exact(a: i64, k: u32) -> Result<i128> {
    check_bound("falling_factorial", k)?;
    Ok((0..k as i64).map(|i| (a - i) as i128).product())
}
