//! Special-function series and closed forms for Bessel-function sum rules,
//! with a harness that checks each identity's series side against its
//! closed form over parameter grids.

// Reference tables in the tests keep their oracle's full digits.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod error;
pub mod eval;
pub mod gamma;
pub mod hybrid;
mod nullable;
pub mod plan;
#[cfg(test)]
mod proptests;
pub mod report;
pub mod rules;
pub mod runner;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use plan::{load_plan, VerificationPlan};
pub use report::{emit_report, Format};
pub use runner::{run_plan, VerdictReport};
pub use series::{Certificate, SeriesEval, SummationPolicy};
