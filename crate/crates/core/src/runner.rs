//! Running a plan and collecting its verdicts.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plan::VerificationPlan;
use crate::rules::{evaluate, RuleCase, RuleConfig, RuleId, Verdict, VerificationRecord};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// One evaluated grid point with its position in the plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedRecord {
    pub entry: usize,
    /// Lexicographic position within the entry's grid.
    pub index: usize,
    pub report_only: bool,
    pub record: VerificationRecord,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RuleSummary {
    pub verified: usize,
    pub discrepant: usize,
    pub inconclusive: usize,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
}

impl RuleSummary {
    fn add(&mut self, r: &VerificationRecord) {
        match r.verdict {
            Verdict::Verified => self.verified += 1,
            Verdict::Discrepant => self.discrepant += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
        // f64::max ignores NaN.
        self.max_abs_err = self.max_abs_err.max(r.abs_err);
        self.max_rel_err = self.max_rel_err.max(r.rel_err);
    }

    pub fn total(&self) -> usize {
        self.verified + self.discrepant + self.inconclusive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema_version: u32,
    /// Ordered by rule, then plan entry, then grid position.
    pub records: Vec<PlannedRecord>,
    pub summary: BTreeMap<RuleId, RuleSummary>,
    /// Seconds.
    pub wall_time: f64,
}

/// Process exit codes of `sumrules verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    AllVerified,
    Discrepant,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::AllVerified => 0,
            Outcome::Discrepant => 2,
            Outcome::Inconclusive => 3,
        }
    }
}

impl VerdictReport {
    pub fn from_records(mut records: Vec<PlannedRecord>, wall_time: f64) -> Self {
        records.sort_by_key(|r| (r.record.case.rule_id, r.entry, r.index));
        let mut summary: BTreeMap<RuleId, RuleSummary> = BTreeMap::new();
        for r in &records {
            summary
                .entry(r.record.case.rule_id)
                .or_default()
                .add(&r.record);
        }
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            records,
            summary,
            wall_time,
        }
    }

    /// Overall result, ignoring report-only records.
    pub fn outcome(&self) -> Outcome {
        let counted = || self.records.iter().filter(|r| !r.report_only);
        if counted().any(|r| r.record.verdict == Verdict::Discrepant) {
            Outcome::Discrepant
        } else if counted().any(|r| r.record.verdict == Verdict::Inconclusive) {
            Outcome::Inconclusive
        } else {
            Outcome::AllVerified
        }
    }
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic payload".into())
}

/// Evaluate one case; errors and panics become `Inconclusive` records.
pub fn evaluate_contained(case: &RuleCase, cfg: &RuleConfig) -> VerificationRecord {
    match catch_unwind(AssertUnwindSafe(|| evaluate(case, cfg))) {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => VerificationRecord::inconclusive(case.clone(), e.to_string()),
        Err(p) => {
            VerificationRecord::inconclusive(case.clone(), format!("panic: {}", panic_message(&*p)))
        }
    }
}

/// Validate and run every case of `plan`, on `plan.parallelism` threads.
pub fn run_plan(plan: &VerificationPlan) -> Result<VerdictReport> {
    plan.validate()?;
    let start = Instant::now();
    let jobs: Vec<(usize, usize, RuleCase, RuleConfig)> = plan
        .entries
        .iter()
        .enumerate()
        .flat_map(|(i, e)| {
            let cfg = plan.config(i);
            e.cases()
                .into_iter()
                .enumerate()
                .map(move |(k, c)| (i, k, c, cfg))
        })
        .collect();
    let run = |(entry, index, case, cfg): &(usize, usize, RuleCase, RuleConfig)| PlannedRecord {
        entry: *entry,
        index: *index,
        report_only: plan.entries[*entry].report_only,
        record: evaluate_contained(case, cfg),
    };
    let records: Vec<PlannedRecord> = if plan.parallelism == 1 {
        jobs.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(plan.parallelism)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
        pool.install(|| jobs.par_iter().map(run).collect())
    };
    Ok(VerdictReport::from_records(
        records,
        start.elapsed().as_secs_f64(),
    ))
}
