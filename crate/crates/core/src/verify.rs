use std::fmt;

use serde::{Deserialize, Serialize};

/// Why a certificate was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    TargetNotPrime,
    TargetOccurs,
    /// The certificate's term list is not a prefix of the trusted terms.
    TermsMismatch,
    CandidateMismatch,
    MalformedDiscriminant,
    /// A support prime is not an odd known term.
    SupportNotKnown,
    /// Some candidate has `(d|q) != (-4|q)`.
    CharacterMismatch,
    BadIndex,
    IneligibleTerm,
    CombinationMismatch,
    /// Coefficients and term indices differ in length or repeat.
    MalformedCombination,
    /// A constraint vector could not be recomputed within budget.
    RecomputationFailed,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::TargetNotPrime => "target-not-prime",
            Reason::TargetOccurs => "target-occurs",
            Reason::TermsMismatch => "terms-mismatch",
            Reason::CandidateMismatch => "candidate-mismatch",
            Reason::MalformedDiscriminant => "malformed-discriminant",
            Reason::SupportNotKnown => "support-not-known",
            Reason::CharacterMismatch => "character-mismatch",
            Reason::BadIndex => "bad-index",
            Reason::IneligibleTerm => "ineligible-term",
            Reason::CombinationMismatch => "combination-mismatch",
            Reason::MalformedCombination => "malformed-combination",
            Reason::RecomputationFailed => "recomputation-failed",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Result of an independent certificate check: accepted iff no reasons.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verification {
    reasons: Vec<Reason>,
}

impl Verification {
    pub fn accepted(&self) -> bool {
        self.reasons.is_empty()
    }

    pub fn reasons(&self) -> &[Reason] {
        &self.reasons
    }

    pub fn has(&self, reason: Reason) -> bool {
        self.reasons.contains(&reason)
    }

    pub(crate) fn reject(&mut self, reason: Reason) {
        if !self.reasons.contains(&reason) {
            self.reasons.push(reason);
        }
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.accepted() {
            return f.write_str("accepted");
        }
        f.write_str("rejected:")?;
        for r in &self.reasons {
            write!(f, " {r}")?;
        }
        Ok(())
    }
}
