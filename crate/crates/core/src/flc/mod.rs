//! Fixed-point zero-order Takagi-Sugeno inference core.
//!
//! Every input is covered by an ordered partition of trapezoids that
//! overlap at most pairwise, so a sample activates exactly `2^n` rules out
//! of the `m^n` in the table. [`infer`] walks only those; [`infer_full_rulebase`]
//! sweeps the whole table and must agree bit for bit.

mod engine;
pub mod sample;
mod spec;
mod timing;

use thiserror::Error;

use crate::fixedq::{FixedError, FixedWord};

pub use engine::{
    accumulate, accumulate_full, active_pair, antecedent_weight, infer, infer_full_rulebase,
    membership, rule_address, Accumulator, ActivePair, ActiveRuleSet, Firing,
};
pub use spec::{
    validate_spec, AndMethod, FlcSpec, InputPartition, MembershipFunction, Schedule,
    ValidationReport, Violation, MAX_ALPHA_BITS, MAX_CONS_BITS, MAX_INPUTS, MAX_IN_BITS,
};
pub use timing::{cycles_per_sample, estimate_timing, timing_for, TimingReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlcError {
    #[error("invalid fuzzy core specification:\n{0}")]
    Invalid(ValidationReport),
    #[error("expected {expected} inputs, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("input {input} = {value} is outside the input universe")]
    InputRange { input: usize, value: u32 },
    #[error("input {input} has a different number of fuzzy sets")]
    Partition { input: usize },
    #[error("rule table has {found} singletons, expected {expected}")]
    RuleTable { found: usize, expected: usize },
    #[error("code {code} has zero membership in every fuzzy set")]
    Uncovered { code: u32 },
    #[error("input {input}: set index {index} out of range for {m} sets")]
    IndexOutOfRange {
        input: usize,
        index: usize,
        m: usize,
    },
    #[error("all rule weights are zero")]
    DenominatorZero,
    #[error(transparent)]
    Fixed(#[from] FixedError),
}

/// A specification that passed [`validate_spec`].
#[derive(Debug, Clone)]
pub struct Flc {
    spec: FlcSpec,
}

impl Flc {
    pub fn new(spec: FlcSpec) -> Result<Self, FlcError> {
        let report = validate_spec(&spec);
        if report.is_ok() {
            Ok(Self { spec })
        } else {
            Err(FlcError::Invalid(report))
        }
    }

    pub fn spec(&self) -> &FlcSpec {
        &self.spec
    }

    pub fn infer(&self, inputs: &[FixedWord]) -> Result<FixedWord, FlcError> {
        infer(&self.spec, inputs)
    }

    pub fn timing(&self) -> TimingReport {
        estimate_timing(&self.spec)
    }
}
