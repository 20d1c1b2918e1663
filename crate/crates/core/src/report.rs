use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub row: u64,
    pub expected: String,
    pub found: String,
}

/// Outcome of one table or lemma check. `status` is `Pass` exactly when
/// `mismatches` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    subject: String,
    status: Status,
    expected_count: u64,
    found_count: u64,
    mismatches: Vec<Mismatch>,
    notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>, expected_count: u64) -> Self {
        VerificationReport {
            subject: subject.into(),
            status: Status::Pass,
            expected_count,
            found_count: 0,
            mismatches: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn set_found(&mut self, found: u64) {
        self.found_count = found;
    }

    pub fn mismatch(&mut self, row: u64, expected: impl Into<String>, found: impl Into<String>) {
        self.mismatches.push(Mismatch {
            row,
            expected: expected.into(),
            found: found.into(),
        });
        self.status = Status::Fail;
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn subject(&self) -> &str {
        &self.subject
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn expected_count(&self) -> u64 {
        self.expected_count
    }

    pub fn found_count(&self) -> u64 {
        self.found_count
    }

    pub fn mismatches(&self) -> &[Mismatch] {
        &self.mismatches
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} ({}/{})",
            self.subject, self.status, self.found_count, self.expected_count
        )?;
        for m in &self.mismatches {
            writeln!(
                f,
                "  mismatch at {}: expected {}, found {}",
                m.row, m.expected, m.found
            )?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
