use serde::{Deserialize, Serialize};

/// Outcome of a single identity check. A failing verdict carries a witness
/// in canonical text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness.into()),
        }
    }

    /// Combines two verdicts, keeping the first witness.
    pub fn and(self, other: Verdict) -> Verdict {
        if self.holds {
            other
        } else {
            self
        }
    }
}
