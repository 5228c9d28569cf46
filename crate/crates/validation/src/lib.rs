//! Pass/fail bookkeeping for the acceptance run.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

/// One numbered criterion made of named sub-checks.
#[derive(Debug)]
pub struct Verdict {
    pub id: u32,
    pub title: String,
    pub checks: Vec<(String, bool)>,
    started: Instant,
    pub elapsed: Duration,
}

impl Verdict {
    pub fn new(id: u32, title: &str) -> Self {
        Verdict {
            id,
            title: title.to_owned(),
            checks: Vec::new(),
            started: Instant::now(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn check(&mut self, label: impl Into<String>, ok: bool) -> bool {
        self.checks.push((label.into(), ok));
        ok
    }

    /// Wall-clock budget since `new`.
    pub fn within(&mut self, budget: Duration) -> bool {
        let spent = self.started.elapsed();
        self.check(format!("runtime {:.1} s < {:.0} s", spent.as_secs_f64(), budget.as_secs_f64()), spent < budget)
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|(_, ok)| *ok)
    }

    /// Stops the clock and renders the PASS/FAIL line followed by the sub-checks.
    pub fn finish(&mut self) -> String {
        self.elapsed = self.started.elapsed();
        let mut out = format!(
            "criterion {:>2} {:<44} {} ({:.1} s)\n",
            self.id,
            self.title,
            if self.passed() { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64()
        );
        for (label, ok) in &self.checks {
            let _ = writeln!(out, "    [{}] {label}", if *ok { "ok" } else { "failed" });
        }
        out
    }
}
