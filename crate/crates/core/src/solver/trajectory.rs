use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    Completed,
    HyperbolicityLost,
    Nan,
    NormBlowup,
    SupportHitCollar,
}

impl TerminationReason {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Completed => "completed",
            Self::HyperbolicityLost => "hyperbolicity_lost",
            Self::Nan => "nan",
            Self::NormBlowup => "norm_blowup",
            Self::SupportHitCollar => "support_hit_collar",
        }
    }
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Termination {
    pub reason: TerminationReason,
    /// Time of the last accepted state.
    pub t: f64,
    pub detail: Option<String>,
}

impl Termination {
    pub fn completed(t: f64) -> Self {
        Self {
            reason: TerminationReason::Completed,
            t,
            detail: None,
        }
    }

    pub fn with(reason: TerminationReason, t: f64, detail: impl Into<String>) -> Self {
        Self {
            reason,
            t,
            detail: Some(detail.into()),
        }
    }

    pub fn is_completed(&self) -> bool {
        self.reason == TerminationReason::Completed
    }
}

/// Time-ordered snapshots with one diagnostics record per snapshot.
#[derive(Clone, Debug)]
pub struct Trajectory<S, R> {
    pub snapshots: Vec<S>,
    pub records: Vec<R>,
    pub termination: Termination,
    pub steps: usize,
}

impl<S, R> Trajectory<S, R> {
    pub fn last(&self) -> Option<&S> {
        self.snapshots.last()
    }
}
