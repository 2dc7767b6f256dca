//! Adaptive series summation and finite-difference differentiation.
//!
//! Every infinite sum in the crate goes through [`sum_series`] (one-sided,
//! `n >= 0`) or [`sum_bilateral`] (`n` over all integers). Accumulation is
//! compensated and each result carries a convergence certificate.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field the engine can sum over: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Tolerances and term budget for a series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummationPolicy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Successive negligible terms required before stopping.
    pub consecutive_small: usize,
}

impl Default for SummationPolicy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_terms: 400,
            consecutive_small: 3,
        }
    }
}

impl SummationPolicy {
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        max_terms: usize,
        consecutive_small: usize,
    ) -> Result<Self> {
        let p = Self {
            abs_tol,
            rel_tol,
            max_terms,
            consecutive_small,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |v: f64| v > 0.0 && v < 1.0;
        if !in_unit(self.abs_tol) || !in_unit(self.rel_tol) {
            return Err(Error::invalid(format!(
                "tolerances must lie in (0, 1): abs_tol={}, rel_tol={}",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_terms < 8 {
            return Err(Error::invalid(format!("max_terms {} < 8", self.max_terms)));
        }
        if self.consecutive_small == 0 {
            return Err(Error::invalid("consecutive_small must be at least 1"));
        }
        Ok(())
    }

    /// Same budget with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            ..*self
        }
    }

    /// Negligibility threshold relative to a running sum of magnitude `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale
    }
}

/// Convergence metadata attached to a series value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub terms_used: usize,
    #[serde(with = "crate::nullable")]
    pub last_term_magnitude: f64,
    pub converged: bool,
}

impl Certificate {
    /// Certificate for a value computed exactly (finite sums, closed forms).
    pub fn exact() -> Self {
        Self {
            terms_used: 0,
            last_term_magnitude: 0.0,
            converged: true,
        }
    }

    /// Combine certificates of the pieces that make up one composite value.
    pub fn merge(self, other: Certificate) -> Certificate {
        Certificate {
            terms_used: self.terms_used + other.terms_used,
            last_term_magnitude: self.last_term_magnitude.max(other.last_term_magnitude),
            converged: self.converged && other.converged,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval<S> {
    pub value: S,
    pub terms_used: usize,
    pub last_term_magnitude: f64,
    pub converged: bool,
}

impl<S: Copy> SeriesEval<S> {
    pub fn certificate(&self) -> Certificate {
        Certificate {
            terms_used: self.terms_used,
            last_term_magnitude: self.last_term_magnitude,
            converged: self.converged,
        }
    }

    pub fn exact(value: S) -> Self {
        Self {
            value,
            terms_used: 0,
            last_term_magnitude: 0.0,
            converged: true,
        }
    }

    pub fn map<T>(self, f: impl FnOnce(S) -> T) -> SeriesEval<T> {
        SeriesEval {
            value: f(self.value),
            terms_used: self.terms_used,
            last_term_magnitude: self.last_term_magnitude,
            converged: self.converged,
        }
    }
}

/// Knuth two-sum accumulator. Componentwise for complex values.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<S> {
    sum: S,
    err: S,
}

impl<S: Scalar> Default for CompensatedSum<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> CompensatedSum<S> {
    pub fn new() -> Self {
        Self {
            sum: S::zero(),
            err: S::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: S) {
        let t = self.sum + x;
        let bp = t - self.sum;
        self.err = self.err + ((self.sum - (t - bp)) + (x - bp));
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> S {
        self.sum + self.err
    }
}

impl<S: Scalar> FromIterator<S> for CompensatedSum<S> {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sum `term(0) + term(1) + ...` under `policy`.
pub fn sum_series<S: Scalar>(
    mut term: impl FnMut(usize) -> S,
    policy: &SummationPolicy,
) -> Result<SeriesEval<S>> {
    try_sum_series_from(|k| Ok(term(k)), policy, 0)
}

/// Fallible-term variant of [`sum_series`].
pub fn try_sum_series<S: Scalar>(
    term: impl FnMut(usize) -> Result<S>,
    policy: &SummationPolicy,
) -> Result<SeriesEval<S>> {
    try_sum_series_from(term, policy, 0)
}

/// Like [`try_sum_series`], but the stopping test is suppressed for indices
/// below `warmup`. Used where a known run of exactly-zero leading terms
/// (reciprocal-gamma poles) would otherwise look like convergence.
pub fn try_sum_series_from<S: Scalar>(
    mut term: impl FnMut(usize) -> Result<S>,
    policy: &SummationPolicy,
    warmup: usize,
) -> Result<SeriesEval<S>> {
    let mut acc = CompensatedSum::new();
    let mut small_run = 0;
    let mut last = 0.0;
    for k in 0..policy.max_terms {
        let x = term(k)?;
        if !x.is_finite() {
            return Err(Error::NonFinite { index: k as i64 });
        }
        acc.add(x);
        last = x.magnitude();
        if k < warmup {
            continue;
        }
        if last <= policy.threshold(acc.value().magnitude()) {
            small_run += 1;
            if small_run >= policy.consecutive_small {
                return Ok(SeriesEval {
                    value: acc.value(),
                    terms_used: k + 1,
                    last_term_magnitude: last,
                    converged: true,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Ok(SeriesEval {
        value: acc.value(),
        terms_used: policy.max_terms,
        last_term_magnitude: last,
        converged: false,
    })
}

struct Direction {
    small_run: usize,
    last: f64,
    done: bool,
}

impl Direction {
    fn new() -> Self {
        Self {
            small_run: 0,
            last: 0.0,
            done: false,
        }
    }
}

/// Sum `term(n)` over all integers: `n = 0`, then `+1, -1, +2, -2, ...`.
///
/// Each direction stops on its own run of negligible terms; the result is
/// converged only if both directions stopped before the term budget ran out.
pub fn sum_bilateral<S: Scalar>(
    mut term: impl FnMut(i64) -> S,
    policy: &SummationPolicy,
) -> Result<SeriesEval<S>> {
    try_sum_bilateral(|n| Ok(term(n)), policy)
}

pub fn try_sum_bilateral<S: Scalar>(
    mut term: impl FnMut(i64) -> Result<S>,
    policy: &SummationPolicy,
) -> Result<SeriesEval<S>> {
    let mut acc = CompensatedSum::new();
    let mut eval = |n: i64, acc: &mut CompensatedSum<S>| -> Result<f64> {
        let x = term(n)?;
        if !x.is_finite() {
            return Err(Error::NonFinite { index: n });
        }
        acc.add(x);
        Ok(x.magnitude())
    };

    let mut used = 1;
    let first = eval(0, &mut acc)?;
    let mut dirs = [Direction::new(), Direction::new()];
    let mut k: i64 = 1;
    while used < policy.max_terms && !(dirs[0].done && dirs[1].done) {
        for (dir, n) in dirs.iter_mut().zip([k, -k]) {
            if dir.done || used >= policy.max_terms {
                continue;
            }
            let mag = eval(n, &mut acc)?;
            used += 1;
            dir.last = mag;
            if mag <= policy.threshold(acc.value().magnitude()) {
                dir.small_run += 1;
                dir.done = dir.small_run >= policy.consecutive_small;
            } else {
                dir.small_run = 0;
            }
        }
        k += 1;
    }
    Ok(SeriesEval {
        value: acc.value(),
        terms_used: used,
        last_term_magnitude: if used == 1 {
            first
        } else {
            dirs[0].last.max(dirs[1].last)
        },
        converged: dirs[0].done && dirs[1].done,
    })
}

/// Step size used by the rule checks for a derivative of `order`.
pub fn default_step(order: u32) -> f64 {
    if order <= 2 {
        1e-3
    } else {
        5e-3
    }
}

fn stencil<S: Scalar>(
    f: &mut impl FnMut(f64) -> Result<S>,
    t0: f64,
    order: u32,
    h: f64,
) -> Result<S> {
    let mut at = |offset: f64, index: i64| -> Result<S> {
        let v = f(t0 + offset * h)?;
        if !v.is_finite() {
            return Err(Error::NonFinite { index });
        }
        Ok(v)
    };
    Ok(match order {
        1 => (at(1.0, 1)? - at(-1.0, -1)?) / (2.0 * h),
        2 => (at(1.0, 1)? - at(0.0, 0)? * 2.0 + at(-1.0, -1)?) / (h * h),
        3 => {
            (at(2.0, 2)? - at(1.0, 1)? * 2.0 + at(-1.0, -1)? * 2.0 - at(-2.0, -2)?)
                / (2.0 * h * h * h)
        }
        4 => {
            (at(2.0, 2)? - at(1.0, 1)? * 4.0 + at(0.0, 0)? * 6.0 - at(-1.0, -1)? * 4.0
                + at(-2.0, -2)?)
                / (h * h * h * h)
        }
        _ => unreachable!(),
    })
}

/// Central-difference estimate of the `order`-th derivative at `t0`, with one
/// Richardson step (`h` and `h/2`) lifting the error from O(h^2) to O(h^4).
pub fn central_derivative<S: Scalar>(
    mut f: impl FnMut(f64) -> S,
    t0: f64,
    order: u32,
    h: f64,
) -> Result<S> {
    try_central_derivative(|t| Ok(f(t)), t0, order, h)
}

pub fn try_central_derivative<S: Scalar>(
    mut f: impl FnMut(f64) -> Result<S>,
    t0: f64,
    order: u32,
    h: f64,
) -> Result<S> {
    if !(1..=4).contains(&order) {
        return Err(Error::invalid(format!(
            "derivative order {order} outside 1..=4"
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("step {h} must be positive")));
    }
    let coarse = stencil(&mut f, t0, order, h)?;
    let fine = stencil(&mut f, t0, order, 0.5 * h)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}
