//! Tri-state continuity and compactness decisions for embeddings between spaces of
//! the supported scales.
//!
//! Every decision goes through the sequence-space conditions on the unit cube. A
//! [`Verdict`] lists the rule identifiers it used and a trace of the quantities that
//! decided it; `unknown` is reported wherever the available results only give a
//! sufficient or only a necessary condition.

mod rules;
mod space;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::indices::Dominance;
use crate::rate::RateTerm;
use crate::tri::Tri;

pub use rules::{
    decide, decide_b, decide_b_sup_target, decide_e, decide_morrey, decide_n, decide_n_classical, decide_special,
    ClassicalParams,
};
pub use space::{Scale, SpaceSpec};

/// Quantities recorded while deciding.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Trace {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_rate: Option<RateTerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_rate: Option<RateTerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_inf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_bar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominance: Option<Dominance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qstar: Option<Exponent>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Outcome of one embedding decision.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub continuous: Tri,
    pub compact: Tri,
    pub rules: Vec<String>,
    pub trace: Trace,
}

impl Verdict {
    /// Builds a verdict, propagating `compact = yes ⇒ continuous = yes` and
    /// `continuous = no ⇒ compact = no`. A compact but discontinuous answer means two
    /// rules disagree and is reported as an invariant violation.
    pub(crate) fn settle(continuous: Tri, compact: Tri, rules: &[&str], trace: Trace) -> Result<Verdict> {
        if compact == Tri::Yes && continuous == Tri::No {
            return Err(Error::Invariant(format!("rules {rules:?} give compact but not continuous")));
        }
        let continuous = if compact == Tri::Yes { Tri::Yes } else { continuous };
        let compact = if continuous == Tri::No { Tri::No } else { compact };
        Ok(Verdict { continuous, compact, rules: rules.iter().map(|r| r.to_string()).collect(), trace })
    }

    pub(crate) fn unknown(rules: &[&str], mut trace: Trace, note: impl Into<String>) -> Verdict {
        trace.notes.push(note.into());
        Verdict {
            continuous: Tri::Unknown,
            compact: Tri::Unknown,
            rules: rules.iter().map(|r| r.to_string()).collect(),
            trace,
        }
    }

    pub fn push_rule(&mut self, rule: &str) {
        if !self.rules.iter().any(|r| r == rule) {
            self.rules.push(rule.to_string());
        }
    }
}
