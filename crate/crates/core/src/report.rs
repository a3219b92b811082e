use serde::Serialize;
use std::fmt;

/// A single failed check with the tuple that exposes it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub witness: Vec<usize>,
}

impl Violation {
    pub fn new(check: impl Into<String>, witness: Vec<usize>) -> Self {
        Violation {
            check: check.into(),
            witness,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?}", self.check, self.witness)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub checked: usize,
    pub witness: Option<Vec<usize>>,
}

/// Per-diagram verdicts. A diagram passes when no witness was found.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub outcomes: Vec<CheckOutcome>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn ok(&self) -> bool {
        self.outcomes.iter().all(|o| o.witness.is_none())
    }

    pub fn record(&mut self, name: &str, checked: usize, witness: Option<Vec<usize>>) {
        self.outcomes.push(CheckOutcome {
            name: name.to_string(),
            checked,
            witness,
        });
    }

    /// Appends `other` with names `prefix: name`.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for mut o in other.outcomes {
            if !prefix.is_empty() {
                o.name = format!("{prefix}: {}", o.name);
            }
            self.outcomes.push(o);
        }
    }

    pub fn first_violation(&self) -> Option<Violation> {
        self.outcomes.iter().find_map(|o| {
            o.witness
                .as_ref()
                .map(|w| Violation::new(o.name.clone(), w.clone()))
        })
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}
