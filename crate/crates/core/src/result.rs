//! Per-pronoun resolution output shared by both pronoun kinds.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::{EntityId, Mention};
use crate::focus::DischargeOutcome;
use crate::order::StrictPartialOrder;
use crate::resolver::BasePreference;

/// Felicity verdict for one pronoun use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Felicity {
    Ok,
    Ambiguous,
    Infelicitous,
    GardenPath,
}

impl fmt::Display for Felicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Felicity::Ok => "ok",
            Felicity::Ambiguous => "ambiguous",
            Felicity::Infelicitous => "infelicitous",
            Felicity::GardenPath => "garden-path",
        };
        f.write_str(s)
    }
}

/// One step of the preference derivation, named after the rule that fired.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub rule: String,
    pub detail: String,
}

impl TraceEvent {
    pub fn new(rule: impl Into<String>, detail: impl Into<String>) -> Self {
        TraceEvent {
            rule: rule.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

/// Everything the engine concludes about one pronoun occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionResult {
    pub pronoun: Mention,
    /// The candidate set H after the indefeasible filters.
    pub candidates: BTreeSet<EntityId>,
    pub base: BasePreference,
    /// Equal to the base order for an unstressed pronoun; its pairwise
    /// reversal for a stressed one.
    pub final_order: StrictPartialOrder,
    /// Maxima of the final order, restricted by joint disjointness when
    /// the utterance carries several pronouns.
    pub value: BTreeSet<EntityId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discharge: Option<DischargeOutcome>,
    pub felicity: Felicity,
    pub trace: Vec<TraceEvent>,
}

impl ResolutionResult {
    /// The resolved entity when the result is determinate.
    pub fn unique_value(&self) -> Option<&EntityId> {
        if self.value.len() == 1 {
            self.value.iter().next()
        } else {
            None
        }
    }
}
