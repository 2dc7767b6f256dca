//! Sum rules: each identity evaluated twice, once by brute-force summation
//! of its series side and once by its closed form, and the two compared.
//!
//! The series side is ground truth. A record is only ever `Verified` when
//! both evaluations carry a converged certificate.

mod addition;
mod calculus;
mod generating;
mod weighted;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Certificate, SeriesEval, SummationPolicy};

pub use addition::{graf_phase, graf_real, neumann_ext};
pub use calculus::{appendix_derivative_check, euler_operator_on_monomial, hoppe_derivative};
pub use generating::{
    ascending_gen, bessel_laguerre, descending_gen, fractional_order, laguerre_hermite,
    multiple_order,
};
pub use weighted::{weighted_s_closed_form, weighted_sum_e, weighted_sum_s, WeightedS};

/// Largest `|t|` accepted for the Laguerre x Hermite rule.
pub const LAGUERRE_HERMITE_MAX_T: f64 = 0.25;
/// Largest weight exponent for the `S` sums (finite-difference stability).
pub const WEIGHTED_S_MAX_M: u32 = 4;
/// Largest weight exponent for the `E` sums.
pub const WEIGHTED_E_MAX_M: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleId {
    AscendingGen,
    DescendingGen,
    MultipleOrder,
    FractionalOrder,
    BesselLaguerre,
    LaguerreHermite,
    GrafReal,
    GrafPhase,
    NeumannExt,
    WeightedS,
    WeightedE,
    /// Auxiliary: the Bessel derivative formula behind the descending rule.
    AppendixDerivative,
}

impl RuleId {
    pub const ALL: [RuleId; 12] = [
        RuleId::AscendingGen,
        RuleId::DescendingGen,
        RuleId::MultipleOrder,
        RuleId::FractionalOrder,
        RuleId::BesselLaguerre,
        RuleId::LaguerreHermite,
        RuleId::GrafReal,
        RuleId::GrafPhase,
        RuleId::NeumannExt,
        RuleId::WeightedS,
        RuleId::WeightedE,
        RuleId::AppendixDerivative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::AscendingGen => "ASCENDING_GEN",
            RuleId::DescendingGen => "DESCENDING_GEN",
            RuleId::MultipleOrder => "MULTIPLE_ORDER",
            RuleId::FractionalOrder => "FRACTIONAL_ORDER",
            RuleId::BesselLaguerre => "BESSEL_LAGUERRE",
            RuleId::LaguerreHermite => "LAGUERRE_HERMITE",
            RuleId::GrafReal => "GRAF_REAL",
            RuleId::GrafPhase => "GRAF_PHASE",
            RuleId::NeumannExt => "NEUMANN_EXT",
            RuleId::WeightedS => "WEIGHTED_S",
            RuleId::WeightedE => "WEIGHTED_E",
            RuleId::AppendixDerivative => "APPENDIX_DERIVATIVE",
        }
    }

    /// Parameter names, in the order they are displayed.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            RuleId::AscendingGen | RuleId::DescendingGen => &["nu", "x", "t"],
            RuleId::MultipleOrder | RuleId::FractionalOrder => &["m", "x", "t"],
            RuleId::BesselLaguerre => &["z", "x", "y", "t"],
            RuleId::LaguerreHermite => &["x", "y", "z", "w", "t"],
            RuleId::GrafReal => &["nu", "x", "y", "t"],
            RuleId::GrafPhase => &["nu", "x", "y", "theta"],
            RuleId::NeumannExt => &["x", "y", "t"],
            RuleId::WeightedS => &["l", "m", "x", "y"],
            RuleId::WeightedE => &["l", "m", "x"],
            RuleId::AppendixDerivative => &["nu", "x"],
        }
    }

    /// The identity, in plain text.
    pub fn formula(self) -> &'static str {
        match self {
            RuleId::AscendingGen => "sum_n t^n/n! J_{n+nu}(x) = (x/(x-2t))^{nu/2} J_nu(sqrt(x^2-2xt)),  |2t| < x",
            RuleId::DescendingGen => "sum_n (-t)^n/n! J_{nu-n}(x) = ((x-2t)/x)^{nu/2} J_nu(sqrt(x^2-2xt)),  |2t| < x",
            RuleId::MultipleOrder => "sum_n t^n/n! J_{mn}(x) = _H C_0^(m)(x^2/4, (-x/2)^m t)",
            RuleId::FractionalOrder => "sum_n t^n/n! J_{n/m}(x) = _H W_0^(m)(t (x/2)^{1/m}, -x^2/4 | 1/m)",
            RuleId::BesselLaguerre => "sum_n t^n/n! J_n(z) L_n(x,y) = _L C_0(-xtz/2, z(z-2yt)/4)",
            RuleId::LaguerreHermite => {
                "sum_n t^n/n! L_n(x,y) H_n^(2)(z,w) = e^{yt(z+ywt)} _H C_0^(2)(xt(z+2ywt), x^2 w t^2)"
            }
            RuleId::GrafReal => {
                "sum_{n in Z} t^n J_{n+nu}(x) J_n(y) = ((x-y/t)/(x-yt))^{nu/2} J_nu(sqrt(x^2+y^2-xy(t+1/t)))"
            }
            RuleId::GrafPhase => {
                "sum_{n in Z} e^{in theta} J_{n+nu}(x) J_n(y) = ((x-y e^{-i theta})/(x-y e^{i theta}))^{nu/2} J_nu(sqrt(x^2+y^2-2xy cos theta))"
            }
            RuleId::NeumannExt => "sum_{n in Z} t^n J_n(x) J_{2n}(y) = _H K_0^(2)(y^2/4, x y^2 t/8 | 2x/(y^2 t))",
            RuleId::WeightedS => "S_l^(m)(x,y) = sum_{n in Z} n^m J_{n+l}(x) J_n(y) = (-i d/dtheta)^m Graf(theta)|_0",
            RuleId::WeightedE => {
                "E_l^(m)(x) = sum_n n^m/n! J_{n+l}(x) = sum_{k=1}^m S2(m,k) (x/2)^{l+k} C_{l+k}((x^2-2x)/4)"
            }
            RuleId::AppendixDerivative => "(1/x) d/dx [x^nu J_nu(x)] = x^{nu-1} J_{nu-1}(x)",
        }
    }

    /// Where the identity comes from, for `list-rules`.
    pub fn anchor(self) -> &'static str {
        match self {
            RuleId::AscendingGen => "ascending Bessel generating function",
            RuleId::DescendingGen => {
                "descending Bessel generating function (operational shift identity)"
            }
            RuleId::MultipleOrder => "multiple-order rule via Hermite-based Tricomi",
            RuleId::FractionalOrder => "fractional-order rule via Hermite-based Wright",
            RuleId::BesselLaguerre => "Bessel x two-variable Laguerre generating function",
            RuleId::LaguerreHermite => {
                "two-variable Laguerre x second-order Hermite generating function"
            }
            RuleId::GrafReal => "Graf addition theorem, real parameter t",
            RuleId::GrafPhase => "Graf addition theorem, phase t = e^{i theta}",
            RuleId::NeumannExt => "extended Neumann addition theorem via hybrid K",
            RuleId::WeightedS => {
                "n^m-weighted Graf sums (finite-difference route and Hoppe-type closed form)"
            }
            RuleId::WeightedE => "n^m/n!-weighted sums via Stirling expansion of (t d/dt)^m",
            RuleId::AppendixDerivative => "(x^-1 d/dx)^n [x^nu J_nu] at n = 1",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One identity instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleCase {
    pub rule_id: RuleId,
    pub params: BTreeMap<String, f64>,
}

impl RuleCase {
    pub fn new(rule_id: RuleId, values: &[(&str, f64)]) -> Self {
        Self {
            rule_id,
            params: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    fn get(&self, name: &str) -> Result<f64> {
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| Error::invalid(format!("{}: missing parameter `{name}`", self.rule_id)))
    }
}

/// A real or complex rule value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Real(#[serde(with = "crate::nullable")] f64),
    Complex {
        #[serde(with = "crate::nullable")]
        re: f64,
        #[serde(with = "crate::nullable")]
        im: f64,
    },
}

impl Value {
    pub fn as_complex(self) -> Complex64 {
        match self {
            Value::Real(v) => Complex64::new(v, 0.0),
            Value::Complex { re, im } => Complex64::new(re, im),
        }
    }

    pub fn magnitude(self) -> f64 {
        self.as_complex().norm()
    }

    pub fn re(self) -> f64 {
        self.as_complex().re
    }

    pub fn im(self) -> f64 {
        self.as_complex().im
    }

    fn shifted(self, delta: f64) -> Value {
        match self {
            Value::Real(v) => Value::Real(v + delta),
            Value::Complex { re, im } => Value::Complex { re: re + delta, im },
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Complex { re: z.re, im: z.im }
    }
}

impl fmt::Display for Value {
    /// 17 significant digits; complex values as `re+imi`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(v) => write!(f, "{v:.16e}"),
            Value::Complex { re, im } => write!(f, "{re:.16e}{im:+.16e}i"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Verified,
    Discrepant,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "VERIFIED",
            Verdict::Discrepant => "DISCREPANT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Agreement thresholds: a pair agrees if either bound holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs: 1e-9,
            rel: 1e-8,
        }
    }
}

/// Everything a rule evaluation needs besides its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleConfig {
    pub policy: SummationPolicy,
    pub tolerances: Tolerances,
    /// Fault-injection hook: added to the closed-form side before comparison.
    pub rhs_perturbation: f64,
}

impl Default for RuleConfig {
    fn default() -> Self {
        Self {
            policy: SummationPolicy::default(),
            tolerances: Tolerances::default(),
            rhs_perturbation: 0.0,
        }
    }
}

impl RuleConfig {
    pub fn with_tolerances(abs: f64, rel: f64) -> Self {
        Self {
            tolerances: Tolerances { abs, rel },
            ..Self::default()
        }
    }

    /// Policy for series nested inside an outer sum.
    pub(crate) fn inner_policy(&self) -> SummationPolicy {
        self.policy.tightened(crate::hybrid::NESTED_TIGHTENING)
    }
}

/// A value together with the certificate of how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Side {
    pub value: Value,
    pub certificate: Certificate,
}

impl Side {
    pub fn new(value: impl Into<Value>, certificate: Certificate) -> Self {
        Self {
            value: value.into(),
            certificate,
        }
    }

    pub(crate) fn from_eval<S: Copy + Into<Value>>(e: SeriesEval<S>) -> Self {
        Self::new(e.value, e.certificate())
    }
}

/// Extra comparison attached to a record (alternative closed forms, variants).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub label: String,
    pub value: Value,
    #[serde(with = "crate::nullable")]
    pub abs_err: f64,
    #[serde(with = "crate::nullable")]
    pub rel_err: f64,
    pub verdict: Verdict,
    /// Report-only comparisons never affect the record verdict or exit status.
    pub report_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub case: RuleCase,
    pub lhs: Value,
    pub rhs: Value,
    #[serde(with = "crate::nullable")]
    pub abs_err: f64,
    #[serde(with = "crate::nullable")]
    pub rel_err: f64,
    pub verdict: Verdict,
    pub lhs_certificate: Certificate,
    pub rhs_certificate: Certificate,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extras: Vec<Comparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// `(abs_err, rel_err)` with the relative error taken against the larger side.
pub fn errors(lhs: Value, rhs: Value) -> (f64, f64) {
    let abs = (lhs.as_complex() - rhs.as_complex()).norm();
    let scale = lhs.magnitude().max(rhs.magnitude());
    let rel = if scale == 0.0 { 0.0 } else { abs / scale };
    (abs, rel)
}

pub fn judge(lhs: &Side, rhs: &Side, tol: &Tolerances) -> (f64, f64, Verdict) {
    let (abs, rel) = errors(lhs.value, rhs.value);
    let verdict = if !(lhs.certificate.converged && rhs.certificate.converged) {
        Verdict::Inconclusive
    } else if abs <= tol.abs || rel <= tol.rel {
        Verdict::Verified
    } else {
        Verdict::Discrepant
    };
    (abs, rel, verdict)
}

impl VerificationRecord {
    pub fn build(case: RuleCase, lhs: Side, rhs: Side, cfg: &RuleConfig) -> Self {
        let rhs = Side {
            value: rhs.value.shifted(cfg.rhs_perturbation),
            ..rhs
        };
        let (abs_err, rel_err, verdict) = judge(&lhs, &rhs, &cfg.tolerances);
        Self {
            case,
            lhs: lhs.value,
            rhs: rhs.value,
            abs_err,
            rel_err,
            verdict,
            lhs_certificate: lhs.certificate,
            rhs_certificate: rhs.certificate,
            extras: Vec::new(),
            diagnostic: None,
        }
    }

    /// Attach a further comparison of `alt` against this record's lhs.
    pub fn compare_extra(&mut self, label: &str, alt: Side, report_only: bool, cfg: &RuleConfig) {
        let lhs = Side::new(self.lhs, self.lhs_certificate);
        let (abs_err, rel_err, verdict) = judge(&lhs, &alt, &cfg.tolerances);
        self.extras.push(Comparison {
            label: label.to_string(),
            value: alt.value,
            abs_err,
            rel_err,
            verdict,
            report_only,
        });
    }

    /// Record for a case whose evaluation failed outright.
    pub fn inconclusive(case: RuleCase, diagnostic: String) -> Self {
        let nan = Value::Real(f64::NAN);
        let cert = Certificate {
            terms_used: 0,
            last_term_magnitude: 0.0,
            converged: false,
        };
        Self {
            case,
            lhs: nan,
            rhs: nan,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            verdict: Verdict::Inconclusive,
            lhs_certificate: cert,
            rhs_certificate: cert,
            extras: Vec::new(),
            diagnostic: Some(diagnostic),
        }
    }

    pub fn extra(&self, label: &str) -> Option<&Comparison> {
        self.extras.iter().find(|c| c.label == label)
    }
}

fn integer_param(case: &RuleCase, name: &str, min: i64, max: Option<i64>) -> Result<u32> {
    let v = case.get(name)?;
    let bad = |msg: String| Err(Error::invalid(format!("{}: `{name}` {msg}", case.rule_id)));
    if v.fract() != 0.0 {
        return bad(format!("must be an integer, got {v}"));
    }
    if (v as i64) < min {
        return bad(format!("must be >= {min}, got {v}"));
    }
    if let Some(max) = max {
        if v as i64 > max {
            return bad(format!("must be <= {max}, got {v}"));
        }
    }
    Ok(v as u32)
}

/// Parameter-schema and domain check for a case, without evaluating anything.
/// Errors name the offending parameter in their message.
pub fn validate_case(case: &RuleCase) -> std::result::Result<(), (String, String)> {
    let expected = case.rule_id.params();
    for name in expected {
        match case.params.get(*name) {
            None => return Err((name.to_string(), "missing".into())),
            Some(v) if !v.is_finite() => {
                return Err((name.to_string(), format!("non-finite value {v}")))
            }
            _ => {}
        }
    }
    if let Some(extra) = case.params.keys().find(|k| !expected.contains(&k.as_str())) {
        return Err((
            extra.clone(),
            format!("not a parameter of {}", case.rule_id),
        ));
    }
    check_domain(case)
}

fn check_domain(case: &RuleCase) -> std::result::Result<(), (String, String)> {
    let p = |n: &str| case.params[n];
    let fail = |param: &str, msg: String| Err((param.to_string(), msg));
    let int = |name: &str, min: i64, max: Option<i64>| {
        integer_param(case, name, min, max)
            .map(|_| ())
            .map_err(|e| (name.to_string(), e.to_string()))
    };
    match case.rule_id {
        RuleId::AscendingGen | RuleId::DescendingGen => {
            if p("x") <= 0.0 {
                return fail("x", format!("x > 0 required, got {}", p("x")));
            }
            if (2.0 * p("t")).abs() >= p("x") {
                return fail(
                    "t",
                    format!("|2t| < x violated (t={}, x={})", p("t"), p("x")),
                );
            }
        }
        RuleId::MultipleOrder => int("m", 1, None)?,
        RuleId::FractionalOrder => {
            int("m", 1, None)?;
            if p("x") <= 0.0 {
                return fail("x", format!("x > 0 required, got {}", p("x")));
            }
        }
        RuleId::BesselLaguerre => {}
        RuleId::LaguerreHermite => {
            if p("t").abs() > LAGUERRE_HERMITE_MAX_T {
                return fail(
                    "t",
                    format!("|t| <= {LAGUERRE_HERMITE_MAX_T} required, got {}", p("t")),
                );
            }
        }
        RuleId::GrafReal => {
            let (x, y, t) = (p("x"), p("y"), p("t"));
            if t <= 0.0 {
                return fail("t", format!("t > 0 required, got {t}"));
            }
            if x <= y / t {
                return fail("x", format!("x > y/t violated (x={x}, y/t={})", y / t));
            }
            if x <= y * t {
                return fail("x", format!("x > y t violated (x={x}, y t={})", y * t));
            }
            if x * x + y * y - x * y * (t + 1.0 / t) <= 0.0 {
                return fail("t", "x^2 + y^2 - xy(t + 1/t) must be positive".into());
            }
        }
        RuleId::GrafPhase => {
            if !(p("x") > p("y") && p("y") > 0.0) {
                return fail(
                    "y",
                    format!("x > y > 0 required (x={}, y={})", p("x"), p("y")),
                );
            }
        }
        RuleId::NeumannExt => {
            if p("t") == 0.0 {
                return fail("t", "t = 0 makes 2x/(y^2 t) singular".into());
            }
            if p("y") == 0.0 {
                return fail("y", "y = 0 makes 2x/(y^2 t) singular".into());
            }
        }
        RuleId::WeightedS => {
            int("l", 0, None)?;
            int("m", 0, Some(WEIGHTED_S_MAX_M as i64))?;
            if !(p("x") > p("y") && p("y") > 0.0) {
                return fail(
                    "y",
                    format!("x > y > 0 required (x={}, y={})", p("x"), p("y")),
                );
            }
        }
        RuleId::WeightedE => {
            int("l", 0, None)?;
            int("m", 1, Some(WEIGHTED_E_MAX_M as i64))?;
        }
        RuleId::AppendixDerivative => {
            if p("x") <= 0.0 {
                return fail("x", format!("x > 0 required, got {}", p("x")));
            }
        }
    }
    Ok(())
}

/// Evaluate any case by dispatching on its rule id.
pub fn evaluate(case: &RuleCase, cfg: &RuleConfig) -> Result<VerificationRecord> {
    validate_case(case)
        .map_err(|(param, msg)| Error::invalid(format!("{}: `{param}`: {msg}", case.rule_id)))?;
    let g = |n: &str| case.params[n];
    match case.rule_id {
        RuleId::AscendingGen => ascending_gen(g("nu"), g("x"), g("t"), cfg),
        RuleId::DescendingGen => descending_gen(g("nu"), g("x"), g("t"), cfg),
        RuleId::MultipleOrder => multiple_order(g("m") as u32, g("x"), g("t"), cfg),
        RuleId::FractionalOrder => fractional_order(g("m") as u32, g("x"), g("t"), cfg),
        RuleId::BesselLaguerre => bessel_laguerre(g("z"), g("x"), g("y"), g("t"), cfg),
        RuleId::LaguerreHermite => laguerre_hermite(g("x"), g("y"), g("z"), g("w"), g("t"), cfg),
        RuleId::GrafReal => graf_real(g("nu"), g("x"), g("y"), g("t"), cfg),
        RuleId::GrafPhase => graf_phase(g("nu"), g("x"), g("y"), g("theta"), cfg),
        RuleId::NeumannExt => neumann_ext(g("x"), g("y"), g("t"), cfg),
        RuleId::WeightedS => {
            weighted_sum_s(g("l") as u32, g("m") as u32, g("x"), g("y"), cfg).map(|w| w.record)
        }
        RuleId::WeightedE => weighted_sum_e(g("l") as u32, g("m") as u32, g("x"), cfg),
        RuleId::AppendixDerivative => appendix_derivative_check(g("nu"), g("x"), cfg),
    }
}

/// Run `check` on `case`, returning an invalid-argument error naming the rule.
pub(crate) fn precheck(case: &RuleCase) -> Result<()> {
    validate_case(case)
        .map_err(|(param, msg)| Error::invalid(format!("{}: `{param}`: {msg}", case.rule_id)))
}
