//! Small pass/fail plumbing shared by the verification entry points.

use std::fmt;

/// A located counterexample: where the identity broke and what was found.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckFail {
    pub location: String,
    pub value: String,
}

impl CheckFail {
    pub fn new(location: impl Into<String>, value: impl Into<String>) -> Self {
        CheckFail {
            location: location.into(),
            value: value.into(),
        }
    }
}

impl fmt::Display for CheckFail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.value)
    }
}

pub type CheckResult = Result<(), CheckFail>;

/// Fail unless `cond`, with a lazily built location string.
pub fn ensure(cond: bool, location: impl FnOnce() -> String, value: impl FnOnce() -> String) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(CheckFail::new(location(), value()))
    }
}
