use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of a single check: a pass flag, a human-readable detail line and
/// a structured counterexample on failure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Verdict {
    pub fn pass(detail: impl Into<String>) -> Verdict {
        Verdict {
            pass: true,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn fail(detail: impl Into<String>, witness: Value) -> Verdict {
        Verdict {
            pass: false,
            detail: detail.into(),
            witness: Some(witness),
        }
    }

    /// Pass iff `cond`; the witness is only kept on failure.
    pub fn check(
        cond: bool,
        detail: impl Into<String>,
        witness: impl FnOnce() -> Value,
    ) -> Verdict {
        if cond {
            Verdict::pass(detail)
        } else {
            Verdict::fail(detail, witness())
        }
    }

    /// The first failure among `parts`, or a pass summarizing them.
    pub fn all(parts: Vec<Verdict>) -> Verdict {
        let n = parts.len();
        for p in parts {
            if !p.pass {
                return p;
            }
        }
        Verdict::pass(format!("{n} checks passed"))
    }
}
