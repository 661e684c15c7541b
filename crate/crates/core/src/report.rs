use serde::{Deserialize, Serialize};

/// Outcome of an exhaustive check: how many objects were examined and every
/// violation found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport<V> {
    pub passed: bool,
    pub checked: u64,
    pub violations: Vec<V>,
}

impl<V> VerificationReport<V> {
    pub fn new(checked: u64, violations: Vec<V>) -> Self {
        VerificationReport {
            passed: violations.is_empty(),
            checked,
            violations,
        }
    }
}
