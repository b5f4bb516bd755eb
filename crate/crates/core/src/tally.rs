//! Named counters for executable property checks.

use serde::Serialize;

/// Counts for one named property.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    /// Instances that could not be decided inside the window.
    pub skipped: usize,
    pub examples: Vec<String>,
}

impl Tally {
    pub fn new(name: &str) -> Self {
        Tally { name: name.to_string(), ..Default::default() }
    }

    pub fn record(&mut self, ok: bool, example: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < 5 {
                self.examples.push(example());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PropertyReport {
    pub checks: Vec<Tally>,
}

impl PropertyReport {
    pub fn get(&self, name: &str) -> Option<&Tally> {
        self.checks.iter().find(|t| t.name == name)
    }

    pub fn violations(&self) -> usize {
        self.checks.iter().map(|t| t.violations).sum()
    }

    /// Violations outside the named checks.
    pub fn violations_except(&self, names: &[&str]) -> usize {
        self.checks.iter().filter(|t| !names.contains(&t.name.as_str())).map(|t| t.violations).sum()
    }
}

impl PropertyReport {
    /// Adds the counts of `other` into the checks of the same name.
    pub fn absorb(&mut self, other: PropertyReport) {
        for t in other.checks {
            match self.checks.iter_mut().find(|s| s.name == t.name) {
                Some(s) => {
                    s.checked += t.checked;
                    s.violations += t.violations;
                    s.skipped += t.skipped;
                    let room = 5usize.saturating_sub(s.examples.len());
                    s.examples.extend(t.examples.into_iter().take(room));
                }
                None => self.checks.push(t),
            }
        }
    }
}
