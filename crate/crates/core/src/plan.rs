//! Verification plans: which rules to check, over which parameter grids.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::{validate_case, RuleCase, RuleConfig, RuleId, Tolerances};
use crate::series::SummationPolicy;

/// Largest cartesian grid a single entry may expand to.
pub const MAX_GRID_POINTS: usize = 100_000;

const DEFAULT_PLAN: &str = include_str!("../plans/default.json");

/// Partial override of [`SummationPolicy`]; absent fields keep the default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_terms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consecutive_small: Option<usize>,
}

impl PolicyOverrides {
    pub fn apply(&self, base: SummationPolicy) -> SummationPolicy {
        SummationPolicy {
            abs_tol: self.abs_tol.unwrap_or(base.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(base.rel_tol),
            max_terms: self.max_terms.unwrap_or(base.max_terms),
            consecutive_small: self.consecutive_small.unwrap_or(base.consecutive_small),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanEntry {
    pub rule_id: RuleId,
    /// Values per parameter; the entry covers their cartesian product.
    pub grid: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    /// Records of this entry are reported but never affect the exit status.
    #[serde(default)]
    pub report_only: bool,
    /// Test hook, see [`RuleConfig::rhs_perturbation`].
    #[serde(default)]
    pub rhs_perturbation: f64,
}

impl PlanEntry {
    pub fn new(rule_id: RuleId, grid: &[(&str, &[f64])]) -> Self {
        Self {
            rule_id,
            grid: grid
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_vec()))
                .collect(),
            tolerances: None,
            report_only: false,
            rhs_perturbation: 0.0,
        }
    }

    /// Number of grid points, or `None` on overflow.
    pub fn size(&self) -> Option<usize> {
        self.grid
            .values()
            .try_fold(1usize, |acc, v| acc.checked_mul(v.len()))
    }

    /// Grid points in lexicographic order over the rule's parameter order,
    /// the last parameter varying fastest.
    pub fn cases(&self) -> Vec<RuleCase> {
        let names = self.rule_id.params();
        let axes: Vec<&[f64]> = names
            .iter()
            .map(|n| self.grid.get(*n).map_or(&[][..], |v| v))
            .collect();
        let total = axes.iter().map(|a| a.len()).product::<usize>();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; axes.len()];
        for _ in 0..total {
            let params = names
                .iter()
                .zip(&axes)
                .zip(&idx)
                .map(|((n, a), &i)| (n.to_string(), a[i]))
                .collect();
            out.push(RuleCase {
                rule_id: self.rule_id,
                params,
            });
            for d in (0..axes.len()).rev() {
                idx[d] += 1;
                if idx[d] < axes[d].len() {
                    break;
                }
                idx[d] = 0;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationPlan {
    /// Worker threads; 0 picks one per core.
    #[serde(default)]
    pub parallelism: usize,
    #[serde(default)]
    pub policy: PolicyOverrides,
    /// Plan-wide tolerances; an entry's own take precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    pub entries: Vec<PlanEntry>,
}

impl VerificationPlan {
    pub fn new(entries: Vec<PlanEntry>) -> Self {
        Self {
            parallelism: 0,
            policy: PolicyOverrides::default(),
            tolerances: None,
            entries,
        }
    }

    pub fn policy(&self) -> SummationPolicy {
        self.policy.apply(SummationPolicy::default())
    }

    /// Evaluation settings for entry `i`.
    pub fn config(&self, i: usize) -> RuleConfig {
        let e = &self.entries[i];
        RuleConfig {
            policy: self.policy(),
            tolerances: e.tolerances.or(self.tolerances).unwrap_or_default(),
            rhs_perturbation: e.rhs_perturbation,
        }
    }

    /// Replace every tolerance in the plan, entry-level ones included.
    pub fn override_tolerances(&mut self, tol: Tolerances) {
        self.tolerances = Some(tol);
        for e in &mut self.entries {
            e.tolerances = Some(tol);
        }
    }

    pub fn case_count(&self) -> usize {
        self.entries.iter().filter_map(PlanEntry::size).sum()
    }

    /// Check policy, tolerances, grid shapes and every grid point against
    /// its rule's schema, before anything is evaluated.
    pub fn validate(&self) -> Result<()> {
        self.policy().validate()?;
        if let Some(t) = self.tolerances {
            check_tolerances(&t).map_err(|m| Error::invalid(format!("plan tolerances: {m}")))?;
        }
        for (i, e) in self.entries.iter().enumerate() {
            let fail = |param: &str, message: String| Error::Validation {
                entry: i,
                param: param.to_string(),
                message,
            };
            if let Some(t) = e.tolerances {
                check_tolerances(&t).map_err(|m| fail("tolerances", m))?;
            }
            if !e.rhs_perturbation.is_finite() {
                return Err(fail("rhs_perturbation", "must be finite".into()));
            }
            let names = e.rule_id.params();
            for n in names {
                match e.grid.get(*n) {
                    None => return Err(fail(n, "missing from grid".into())),
                    Some(v) if v.is_empty() => return Err(fail(n, "empty value list".into())),
                    _ => {}
                }
            }
            if let Some(k) = e.grid.keys().find(|k| !names.contains(&k.as_str())) {
                return Err(fail(k, format!("not a parameter of {}", e.rule_id)));
            }
            match e.size() {
                Some(n) if n <= MAX_GRID_POINTS => {}
                _ => return Err(fail("grid", format!("more than {MAX_GRID_POINTS} points"))),
            }
            for case in e.cases() {
                validate_case(&case).map_err(|(p, m)| fail(&p, m))?;
            }
        }
        Ok(())
    }
}

fn check_tolerances(t: &Tolerances) -> std::result::Result<(), String> {
    if t.abs >= 0.0 && t.rel >= 0.0 && t.abs.is_finite() && t.rel.is_finite() {
        Ok(())
    } else {
        Err(format!(
            "tolerances must be finite and nonnegative (abs={}, rel={})",
            t.abs, t.rel
        ))
    }
}

/// Parse and validate a plan from JSON text.
pub fn parse_plan(text: &str) -> Result<VerificationPlan> {
    let plan: VerificationPlan = serde_json::from_str(text)?;
    plan.validate()?;
    Ok(plan)
}

pub fn load_plan(path: &Path) -> Result<VerificationPlan> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_plan(&text)
}

/// The bundled plan covering every rule over the acceptance grids.
pub fn default_plan() -> VerificationPlan {
    parse_plan(DEFAULT_PLAN).expect("bundled plan is valid")
}

/// Raw text of the bundled plan.
pub fn default_plan_text() -> &'static str {
    DEFAULT_PLAN
}
