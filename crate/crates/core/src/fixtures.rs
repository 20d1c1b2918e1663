//! Golden reference data: the published table of weight-≤1 primitive types,
//! the 35 age-1 types with their proof notes, and the 35-term coefficient
//! polynomial. Embedded at compile time; a file with the same JSON schema can
//! be loaded instead for fault-injection runs.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::cli::parse::parse_type;
use crate::error::{Error, Result};
use crate::series::Monomial;
use crate::types::{AutType, Weight};

const EMBEDDED: &str = include_str!("../fixtures/golden.json");

/// Proof note attached to a row of the age-1 table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableNote {
    Kummer,
    Cube,
    SmallFactor,
    KleinSeven,
    Fifteen,
    MultOne,
    /// `g^k` reduces to the type of row `target`.
    Power {
        k: u64,
        target: usize,
    },
}

impl FromStr for TableNote {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "prop-kummer" => TableNote::Kummer,
            "prop-cube" => TableNote::Cube,
            "small-factor" => TableNote::SmallFactor,
            "cor-seven" => TableNote::KleinSeven,
            "cor-fifteen" => TableNote::Fifteen,
            "cor-mult-one" => TableNote::MultOne,
            _ => {
                let bad = || Error::Fixture(format!("unknown note {s:?}"));
                let rest = s.strip_prefix("power").ok_or_else(bad)?;
                let (k, target) = rest.split_once("->").ok_or_else(bad)?;
                TableNote::Power {
                    k: k.trim().parse().map_err(|_| bad())?,
                    target: target.trim().parse().map_err(|_| bad())?,
                }
            }
        })
    }
}

impl TableNote {
    /// Machine tag, as stored in the fixture file.
    pub fn tag(&self) -> String {
        match self {
            TableNote::Kummer => "prop-kummer".into(),
            TableNote::Cube => "prop-cube".into(),
            TableNote::SmallFactor => "small-factor".into(),
            TableNote::KleinSeven => "cor-seven".into(),
            TableNote::Fifteen => "cor-fifteen".into(),
            TableNote::MultOne => "cor-mult-one".into(),
            TableNote::Power { k, target } => format!("power {k} -> {target}"),
        }
    }

    pub fn latex(&self) -> String {
        match self {
            TableNote::Kummer => r"Prop.~\ref{kummer}".into(),
            TableNote::Cube => r"Prop.~\ref{cube}".into(),
            TableNote::SmallFactor => r"Th.~\ref{small-factor}".into(),
            TableNote::KleinSeven => r"Cor.~\ref{seven}".into(),
            TableNote::Fifteen => r"Cor.~\ref{fifteen}".into(),
            TableNote::MultOne => r"Cor.~\ref{mult-one}".into(),
            TableNote::Power { k, target } => format!(r"$g^{{{k}}}\to\#{target}$"),
        }
    }
}

impl fmt::Display for TableNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableNote::Kummer => f.write_str("Prop. kummer"),
            TableNote::Cube => f.write_str("Prop. cube"),
            TableNote::SmallFactor => f.write_str("Th. small-factor"),
            TableNote::KleinSeven => f.write_str("Cor. seven"),
            TableNote::Fifteen => f.write_str("Cor. fifteen"),
            TableNote::MultOne => f.write_str("Cor. mult-one"),
            TableNote::Power { k, target } => write!(f, "g^{k} -> #{target}"),
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawTable1Row {
    index: usize,
    n: u64,
    types: String,
    weight: String,
}

#[derive(Debug, Deserialize)]
struct RawTable2Row {
    index: usize,
    n: u64,
    types: String,
    canonical: String,
    note: String,
}

#[derive(Debug, Deserialize)]
struct RawFixtures {
    table1: Vec<RawTable1Row>,
    table2: Vec<RawTable2Row>,
    polynomial: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Row {
    pub index: usize,
    pub n: u64,
    pub display: String,
    pub primitive: AutType,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Row {
    pub index: usize,
    pub n: u64,
    /// Entries as printed, possibly unreduced (`4/12`).
    pub display: String,
    /// Canonical form as stored alongside the display string.
    pub canonical: AutType,
    pub note: TableNote,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixtures {
    pub table1: Vec<Table1Row>,
    pub table2: Vec<Table2Row>,
    pub polynomial: Vec<Monomial>,
}

fn fixture_type(s: &str, what: &str) -> Result<AutType> {
    parse_type(s).map_err(|e| Error::Fixture(format!("{what}: {e}")))
}

impl Fixtures {
    pub fn embedded() -> Result<Self> {
        Self::from_json(EMBEDDED)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawFixtures =
            serde_json::from_str(text).map_err(|e| Error::Fixture(e.to_string()))?;

        let table1 = raw
            .table1
            .into_iter()
            .map(|r| {
                let what = format!("table1 row {}", r.index);
                Ok(Table1Row {
                    index: r.index,
                    n: r.n,
                    primitive: fixture_type(&r.types, &what)?,
                    weight: r
                        .weight
                        .parse()
                        .map_err(|e| Error::Fixture(format!("{what}: {e}")))?,
                    display: r.types,
                })
            })
            .collect::<Result<_>>()?;

        let table2 = raw
            .table2
            .into_iter()
            .map(|r| {
                let what = format!("table2 row {}", r.index);
                Ok(Table2Row {
                    index: r.index,
                    n: r.n,
                    canonical: fixture_type(&r.canonical, &what)?,
                    note: r.note.parse()?,
                    display: r.types,
                })
            })
            .collect::<Result<_>>()?;

        let polynomial = raw
            .polynomial
            .iter()
            .map(|m| m.parse())
            .collect::<Result<_>>()?;

        Ok(Fixtures {
            table1,
            table2,
            polynomial,
        })
    }

    pub fn table2_row(&self, index: usize) -> Option<&Table2Row> {
        self.table2.iter().find(|r| r.index == index)
    }
}
