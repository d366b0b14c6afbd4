//! Structured verification results. Failures are data, not errors: every
//! check reports the instances it ran and a (capped) list of concrete
//! witnesses for the ones that failed.

use std::fmt;

/// How much of the structure a verification covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckScope {
    /// Every basis tuple was checked.
    Full,
    /// Checks quantified over module elements ran on the distinguished
    /// generator set (used above the brute-force dimension threshold).
    Generators,
}

impl fmt::Display for CheckScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckScope::Full => write!(f, "full"),
            CheckScope::Generators => write!(f, "generators"),
        }
    }
}

/// A concrete failing instance of a law.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Which law failed, e.g. `jacobi-identity`.
    pub law: String,
    /// Basis/generator indices of the failing tuple.
    pub indices: Vec<usize>,
    /// Human-readable residual description.
    pub detail: String,
}

/// Default cap on retained witnesses per report.
pub const DEFAULT_WITNESS_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub scope: CheckScope,
    /// Number of instances checked.
    pub checked: usize,
    pub failures: Vec<Witness>,
    /// Total failure count (may exceed `failures.len()` when capped).
    pub failure_count: usize,
    witness_cap: usize,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, scope: CheckScope) -> Self {
        Self::with_cap(name, scope, DEFAULT_WITNESS_CAP)
    }

    pub fn with_cap(name: impl Into<String>, scope: CheckScope, cap: usize) -> Self {
        VerificationReport {
            name: name.into(),
            scope,
            checked: 0,
            failures: Vec::new(),
            failure_count: 0,
            witness_cap: cap,
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < self.witness_cap {
                self.failures.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn truncated(&self) -> bool {
        self.failure_count > self.failures.len()
    }

    /// Fold another report into this one (used by aggregate verifiers).
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        for w in other.failures {
            if self.failures.len() < self.witness_cap {
                self.failures.push(w);
            }
        }
        if other.scope == CheckScope::Generators {
            self.scope = CheckScope::Generators;
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} checked, scope {})",
            self.name,
            if self.passed() { "pass" } else { "FAIL" },
            self.checked,
            self.scope
        )?;
        for w in &self.failures {
            write!(f, "\n  {} at {:?}: {}", w.law, w.indices, w.detail)?;
        }
        if self.truncated() {
            write!(f, "\n  ... {} more failures", self.failure_count - self.failures.len())?;
        }
        Ok(())
    }
}
