use serde::{Deserialize, Serialize};

/// Outcome of a verification: how many exact checks ran and the first
/// one that failed, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub counterexample: Option<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            passed: true,
            checks: 0,
            counterexample: None,
        }
    }

    /// Records one check; `describe` is only called for the first failure.
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(describe());
        }
        ok
    }

    /// Records a failure caused by an error instead of a mismatch.
    pub fn fail(&mut self, why: impl std::fmt::Display) {
        self.check(false, || why.to_string());
    }

    /// Folds another report into this one.
    pub fn absorb(&mut self, other: Report) {
        self.checks += other.checks;
        if !other.passed && self.passed {
            self.passed = false;
            self.counterexample = Some(format!("{}: {}", other.name, other.counterexample.unwrap_or_default()));
        }
    }

    pub fn with_result<T, E: std::fmt::Display>(&mut self, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(e);
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_first_counterexample() {
        let mut r = Report::new("t");
        r.check(true, || unreachable!());
        r.check(false, || "first".into());
        r.check(false, || "second".into());
        assert!(!r.passed);
        assert_eq!(r.checks, 3);
        assert_eq!(r.counterexample.as_deref(), Some("first"));
    }

    #[test]
    fn absorb_prefixes_name() {
        let mut outer = Report::new("outer");
        let mut inner = Report::new("inner");
        inner.fail("boom");
        outer.absorb(inner);
        assert_eq!(outer.counterexample.as_deref(), Some("inner: boom"));
    }
}
