//! Direct evaluation of a function family by name, for `sumrules eval`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hybrid::{h_tricomi, h_wright, hybrid_k, l_tricomi};
use crate::series::{Certificate, SummationPolicy};
use crate::special::{bessel_j, hermite_m, laguerre2, tricomi_c, wright, HermiteOrder};

/// Family names and their argument lists.
pub const FUNCTIONS: [(&str, &[&str]); 9] = [
    ("bessel_j", &["nu", "x"]),
    ("tricomi_c", &["alpha", "x"]),
    ("laguerre2", &["n", "x", "y"]),
    ("hermite_m", &["n", "m", "x", "y"]),
    ("wright", &["nu", "mu", "x"]),
    ("h_tricomi", &["nu", "m", "x", "y"]),
    ("l_tricomi", &["nu", "x", "y"]),
    ("h_wright", &["nu", "m", "mu", "x", "y"]),
    ("hybrid_k", &["mu", "m", "x", "y", "xi"]),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub certificate: Certificate,
}

/// Accepts the Greek letters as spellings of their names.
pub fn canonical_arg(name: &str) -> &str {
    match name {
        "ν" => "nu",
        "μ" => "mu",
        "ξ" => "xi",
        "α" => "alpha",
        other => other,
    }
}

/// Parse `key=value` words into an argument map.
pub fn parse_args<'a>(words: impl IntoIterator<Item = &'a str>) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("expected key=value, got `{w}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("`{k}`: cannot parse `{v}` as a number")))?;
        if out.insert(canonical_arg(k.trim()).to_string(), v).is_some() {
            return Err(Error::invalid(format!("`{k}` given twice")));
        }
    }
    Ok(out)
}

fn nonneg_int(args: &BTreeMap<String, f64>, name: &str) -> Result<u32> {
    let v = args[name];
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(Error::invalid(format!(
            "`{name}` must be a nonnegative integer, got {v}"
        )));
    }
    Ok(v as u32)
}

pub fn eval_function(
    name: &str,
    args: &BTreeMap<String, f64>,
    policy: &SummationPolicy,
) -> Result<Evaluation> {
    let (_, expected) = FUNCTIONS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let names: Vec<&str> = FUNCTIONS.iter().map(|(n, _)| *n).collect();
        Error::invalid(format!(
            "unknown function `{name}` (one of {})",
            names.join(", ")
        ))
    })?;
    for a in *expected {
        if !args.contains_key(*a) {
            return Err(Error::invalid(format!(
                "{name}: missing argument `{a}` (needs {})",
                expected.join(", ")
            )));
        }
    }
    if let Some(extra) = args.keys().find(|k| !expected.contains(&k.as_str())) {
        return Err(Error::invalid(format!(
            "{name}: unexpected argument `{extra}`"
        )));
    }
    let g = |k: &str| args[k];
    let exact = |value| Evaluation {
        value,
        certificate: Certificate::exact(),
    };
    let series = |e: crate::series::SeriesEval<f64>| Evaluation {
        value: e.value,
        certificate: e.certificate(),
    };
    Ok(match name {
        "bessel_j" => series(bessel_j(g("nu"), g("x"), policy)?),
        "tricomi_c" => series(tricomi_c(g("alpha"), g("x"), policy)?),
        "laguerre2" => exact(laguerre2(nonneg_int(args, "n")?, g("x"), g("y"))?),
        "hermite_m" => {
            let order = HermiteOrder::new(nonneg_int(args, "m")?)?;
            exact(hermite_m(nonneg_int(args, "n")?, order, g("x"), g("y"))?)
        }
        "wright" => series(wright(g("nu"), g("mu"), g("x"), policy)?),
        "h_tricomi" => {
            let order = HermiteOrder::new(nonneg_int(args, "m")?)?;
            series(h_tricomi(g("nu"), order, g("x"), g("y"), policy)?)
        }
        "l_tricomi" => series(l_tricomi(g("nu"), g("x"), g("y"), policy)?),
        "h_wright" => {
            let order = HermiteOrder::new(nonneg_int(args, "m")?)?;
            series(h_wright(g("nu"), order, g("mu"), g("x"), g("y"), policy)?)
        }
        "hybrid_k" => series(hybrid_k(
            g("mu"),
            nonneg_int(args, "m")?,
            g("x"),
            g("y"),
            g("xi"),
            policy,
        )?),
        _ => unreachable!(),
    })
}
