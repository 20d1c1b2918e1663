//! Age-1 types: enumeration from the weight-1 slice, decomposition into
//! primitive types, and the case analysis that attaches a proof route to each.
//!
//! The base cases are `{1/2, 1/2}`, `{1/3, 1/3, 1/3}` and `{1/3, 2/3}`. Every
//! other age-1 type either reduces to one of them after taking a power (dropping
//! zeros), or satisfies the hypothesis of one of the curve-spectrum or
//! small-factor rules.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::enumeration::{catalogue, CatalogueRow};
use crate::error::{Error, Result};
use crate::fixtures::{Fixtures, TableNote};
use crate::par::Exec;
use crate::qz::FracQZ;
use crate::report::VerificationReport;
use crate::series::{
    compare_routes, knapsack_slice, minimal_scale, monomial_to_type, series_slice, GradedSlice,
    Monomial, SCALE,
};
use crate::types::{AutType, Weight};

/// Rows of the age-1 table that power reductions may land on.
pub const BASE_ROWS: [usize; 3] = [1, 2, 3];

fn fr(a: i64, n: i64) -> FracQZ {
    FracQZ::new(a, n).expect("positive denominator")
}

fn type_of(entries: &[(i64, i64)]) -> AutType {
    AutType::new(entries.iter().map(|&(a, n)| fr(a, n))).expect("hard-coded type is stable")
}

/// The type of base row 1, 2 or 3.
pub fn base_type(row: usize) -> Option<AutType> {
    match row {
        1 => Some(type_of(&[(1, 2), (1, 2)])),
        2 => Some(type_of(&[(1, 3), (1, 3), (1, 3)])),
        3 => Some(type_of(&[(1, 3), (2, 3)])),
        _ => None,
    }
}

/// `{1/n, …, m/n}` with `m = ⌈n/2⌉ − 1`: the spectrum of `y² = xⁿ − 1`.
pub fn hyperelliptic_spectrum(n: u64) -> AutType {
    let m = n.div_ceil(2) - 1;
    AutType::new((1..=m).map(|a| fr(a as i64, n as i64)))
        .expect("{1/n, ..., m/n} with m < n/2 is stable")
}

/// Spectrum of the genus-6 curve `y^15 = x²(x − 1)`.
pub fn fifteen_spectrum() -> AutType {
    type_of(&[(1, 15), (2, 15), (3, 15), (4, 15), (8, 15), (9, 15)])
}

pub fn klein_type() -> AutType {
    type_of(&[(1, 7), (2, 7), (4, 7)])
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    Kummer,
    CubeBase,
    /// `{1/3, 1/3, 1/3}`; handled by the small-factor rule.
    ThirdsBase,
    PowerReduction {
        k: u64,
        target: usize,
    },
    MultOne {
        n: u64,
        m: u64,
    },
    Fifteen,
    KleinSeven,
    SmallFactor {
        witness: Monomial,
    },
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Kummer => f.write_str("Kummer"),
            Strategy::CubeBase => f.write_str("CubeBase"),
            Strategy::ThirdsBase => f.write_str("ThirdsBase"),
            Strategy::PowerReduction { k, target } => {
                write!(f, "PowerReduction(k={k}, target=#{target})")
            }
            Strategy::MultOne { n, m } => write!(f, "MultOne(n={n}, m={m})"),
            Strategy::Fifteen => f.write_str("Fifteen"),
            Strategy::KleinSeven => f.write_str("KleinSeven"),
            Strategy::SmallFactor { witness } => write!(f, "SmallFactor(witness={witness})"),
        }
    }
}

impl Serialize for Strategy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl Strategy {
    /// Whether this strategy is the route named by a table note.
    pub fn realizes(&self, note: &TableNote) -> bool {
        matches!(
            (self, note),
            (Strategy::Kummer, TableNote::Kummer)
                | (Strategy::CubeBase, TableNote::Cube)
                | (Strategy::SmallFactor { .. }, TableNote::SmallFactor)
                | (Strategy::KleinSeven, TableNote::KleinSeven)
                | (Strategy::Fifteen, TableNote::Fifteen)
                | (Strategy::MultOne { .. }, TableNote::MultOne)
        ) || matches!(
            (self, note),
            (Strategy::PowerReduction { k, target }, TableNote::Power { k: k2, target: t2 })
                if k == k2 && target == t2
        )
    }
}

/// All ways to write the same-order multiset `group` as a sum of `primitives`,
/// as multisets of catalogue indices.
fn decompose_group(group: &BTreeMap<FracQZ, u32>, primitives: &[&CatalogueRow]) -> Vec<Vec<usize>> {
    fn dfs(
        remaining: &mut BTreeMap<FracQZ, u32>,
        left: u32,
        primitives: &[&CatalogueRow],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if left == 0 {
            out.push(chosen.clone());
            return;
        }
        for (pos, row) in primitives.iter().enumerate() {
            let entries = row.primitive.base().entries();
            if !entries
                .iter()
                .all(|x| remaining.get(x).is_some_and(|&m| m > 0))
            {
                continue;
            }
            for x in entries {
                *remaining.get_mut(x).unwrap() -= 1;
            }
            chosen.push(row.index);
            // only rows at or after `pos`, so each multiset appears once
            dfs(
                remaining,
                left - entries.len() as u32,
                &primitives[pos..],
                chosen,
                out,
            );
            chosen.pop();
            for x in entries {
                *remaining.get_mut(x).unwrap() += 1;
            }
        }
    }

    let mut remaining = group.clone();
    let total = group.values().sum();
    let mut out = Vec::new();
    dfs(&mut remaining, total, primitives, &mut Vec::new(), &mut out);
    out
}

/// Every multiset of weight-≤1 catalogue primitives whose sum is `t`.
///
/// Primitive types have a single entry order, so entries are split by order
/// and each group is decomposed on its own.
pub fn decompose(t: &AutType) -> Result<Vec<Monomial>> {
    if !t.is_reduced() {
        return Err(Error::InvalidInput(format!(
            "decompose expects a reduced type, got {t}"
        )));
    }
    let cat = catalogue();
    let mut groups: BTreeMap<u64, BTreeMap<FracQZ, u32>> = BTreeMap::new();
    for (x, m) in t.multiplicities() {
        groups.entry(x.order()).or_default().insert(x, m);
    }

    let mut partial = vec![Monomial::unit()];
    for (order, group) in groups {
        let primitives: Vec<&CatalogueRow> = cat.iter().filter(|r| r.n == order).collect();
        let options = decompose_group(&group, &primitives);
        partial = partial
            .iter()
            .flat_map(|m| {
                options
                    .iter()
                    .map(move |idx| m.mul(&Monomial::from_exponents(idx.iter().map(|&i| (i, 1)))))
            })
            .collect();
        if partial.is_empty() {
            break;
        }
    }
    partial.sort();
    Ok(partial)
}

fn small_factor_witness(t: &AutType) -> Result<Option<Monomial>> {
    if !t.is_disjoint(&t.inverse()) {
        return Ok(None);
    }
    let cat = catalogue();
    for m in decompose(t)? {
        let has_light_factor = m
            .exponents()
            .keys()
            .any(|i| cat.get(*i).is_some_and(|row| row.weight < Weight::one()));
        if has_light_factor {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Every strategy whose hypothesis holds for `t` (reduced first).
///
/// Fails with [`Error::OutOfScope`] unless the weight is exactly 1, and with
/// [`Error::ClassificationFailure`] if nothing applies.
pub fn classify(t: &AutType) -> Result<Vec<Strategy>> {
    let t = t.reduce();
    let w = t.weight()?;
    if w != Weight::one() {
        return Err(Error::OutOfScope(format!(
            "classification covers age-1 types; {t} has weight {w}"
        )));
    }

    let mut out = Vec::new();
    let [kummer, thirds, cube] = BASE_ROWS.map(|r| base_type(r).expect("base row"));
    if t == kummer {
        out.push(Strategy::Kummer);
    }
    if t == cube {
        out.push(Strategy::CubeBase);
    }
    if t == thirds {
        out.push(Strategy::ThirdsBase);
    }

    let n = t.denominator();
    for target in BASE_ROWS {
        let base = base_type(target).expect("base row");
        // a power that maps a base type to itself is not a reduction
        if base == t {
            continue;
        }
        for k in 2..=n {
            if t.power(k)?.reduce() == base {
                out.push(Strategy::PowerReduction { k, target });
                break;
            }
        }
    }

    if n >= 3 && t.is_contained_in(&hyperelliptic_spectrum(n)) {
        out.push(Strategy::MultOne {
            n,
            m: n.div_ceil(2) - 1,
        });
    }
    if t.is_contained_in(&fifteen_spectrum()) {
        out.push(Strategy::Fifteen);
    }
    if t == klein_type() {
        out.push(Strategy::KleinSeven);
    }
    if let Some(witness) = small_factor_witness(&t)? {
        out.push(Strategy::SmallFactor { witness });
    }

    if out.is_empty() {
        return Err(Error::ClassificationFailure(t.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgeOneRow {
    /// Position in the catalogue, 1-based.
    pub index: usize,
    /// Matching row of the reference table, if any.
    pub table_row: Option<usize>,
    pub n: u64,
    #[serde(rename = "entries")]
    pub ty: AutType,
    pub weight: Weight,
    /// Monomials of the weight-1 slice that map to this type.
    pub monomials: Vec<Monomial>,
    pub table_note: Option<String>,
    #[serde(skip)]
    pub note: Option<TableNote>,
    pub applicable: Vec<Strategy>,
    pub classify_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgeOneCatalogue {
    pub rows: Vec<AgeOneRow>,
    /// Types hit by more than one monomial of the weight-1 slice.
    pub collisions: Vec<(AutType, Vec<Monomial>)>,
}

impl AgeOneCatalogue {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row by its reference-table number.
    pub fn table_row(&self, index: usize) -> Option<&AgeOneRow> {
        self.rows.iter().find(|r| r.table_row == Some(index))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SliceMethod {
    #[default]
    Series,
    Knapsack,
}

pub fn enumerate_age_one(fixtures: &Fixtures) -> Result<AgeOneCatalogue> {
    let slice = series_slice(SCALE)?;
    age_one_from_slice(&slice, fixtures)
}

pub fn enumerate_age_one_with(fixtures: &Fixtures, method: SliceMethod) -> Result<AgeOneCatalogue> {
    let slice = match method {
        SliceMethod::Series => series_slice(SCALE)?,
        SliceMethod::Knapsack => knapsack_slice(SCALE)?,
    };
    age_one_from_slice(&slice, fixtures)
}

/// Group the monomials of a weight-1 slice by the type they produce, then
/// label and classify each type.
pub fn age_one_from_slice(slice: &GradedSlice, fixtures: &Fixtures) -> Result<AgeOneCatalogue> {
    let mut by_type: BTreeMap<(u64, AutType), Vec<Monomial>> = BTreeMap::new();
    for m in slice.monomials() {
        let t = monomial_to_type(m)?;
        by_type
            .entry((t.denominator(), t))
            .or_default()
            .push(m.clone());
    }

    let collisions = by_type
        .iter()
        .filter(|(_, ms)| ms.len() > 1)
        .map(|((_, t), ms)| (t.clone(), ms.clone()))
        .collect();

    let types: Vec<((u64, AutType), Vec<Monomial>)> = by_type.into_iter().collect();
    let classified = Exec::default().map(&types, |((_, t), _)| classify(t));

    let mut rows = Vec::with_capacity(types.len());
    for (((n, t), monomials), applicable) in types.into_iter().zip(classified) {
        let fixture_row = fixtures.table2.iter().find(|r| r.canonical == t);
        let (applicable, classify_error) = match applicable {
            Ok(s) => (s, None),
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
        rows.push(AgeOneRow {
            index: 0,
            table_row: fixture_row.map(|r| r.index),
            n,
            weight: t.weight()?,
            ty: t,
            monomials,
            table_note: fixture_row.map(|r| r.note.to_string()),
            note: fixture_row.map(|r| r.note),
            applicable,
            classify_error,
        });
    }
    // reference order first, unmatched types after
    rows.sort_by(|a, b| {
        (a.table_row.is_none(), a.table_row, a.n, &a.ty).cmp(&(
            b.table_row.is_none(),
            b.table_row,
            b.n,
            &b.ty,
        ))
    });
    for (i, row) in rows.iter_mut().enumerate() {
        row.index = i + 1;
    }
    Ok(AgeOneCatalogue { rows, collisions })
}

fn join_types(ms: &[Monomial]) -> String {
    ms.iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Generated weight-≤1 primitive catalogue against the reference table.
pub fn verify_table1(fixtures: &Fixtures) -> VerificationReport {
    let cat = catalogue();
    let mut report = VerificationReport::new("table1", fixtures.table1.len() as u64);
    report.set_found(cat.len() as u64);

    for expected in &fixtures.table1 {
        let Some(found) = cat.get(expected.index) else {
            report.mismatch(expected.index as u64, expected.display.clone(), "missing");
            continue;
        };
        let same = found.n == expected.n
            && found.primitive.base() == &expected.primitive
            && found.weight == expected.weight;
        if !same {
            report.mismatch(
                expected.index as u64,
                format!(
                    "n={} [{}] weight {}",
                    expected.n, expected.primitive, expected.weight
                ),
                format!(
                    "n={} [{}] weight {}",
                    found.n,
                    found.primitive.base(),
                    found.weight
                ),
            );
        }
    }
    for row in cat.iter() {
        if !fixtures.table1.iter().any(|r| r.index == row.index) {
            report.mismatch(row.index as u64, "absent", row.primitive.base().to_string());
        }
    }
    report
}

/// Generated age-1 catalogue against the reference table, matched on canonical forms.
pub fn verify_table2(fixtures: &Fixtures) -> Result<VerificationReport> {
    let generated = enumerate_age_one(fixtures)?;
    Ok(verify_table2_against(&generated, fixtures))
}

pub fn verify_table2_against(
    generated: &AgeOneCatalogue,
    fixtures: &Fixtures,
) -> VerificationReport {
    let mut report = VerificationReport::new("table2", fixtures.table2.len() as u64);
    report.set_found(generated.len() as u64);

    for expected in &fixtures.table2 {
        let Some(found) = generated.rows.iter().find(|r| r.ty == expected.canonical) else {
            report.mismatch(
                expected.index as u64,
                expected.canonical.to_string(),
                "missing",
            );
            continue;
        };
        if found.n != expected.n {
            report.mismatch(
                expected.index as u64,
                format!("n = {}", expected.n),
                format!("n = {}", found.n),
            );
        }
        match crate::cli::parse::parse_type(&expected.display) {
            Ok(t) if t == expected.canonical => {}
            other => report.mismatch(
                expected.index as u64,
                format!("display {:?} = [{}]", expected.display, expected.canonical),
                format!("{other:?}"),
            ),
        }
    }
    for row in &generated.rows {
        if row.table_row.is_none() {
            report.mismatch(0, "absent from table", row.ty.to_string());
        }
    }
    for (t, ms) in &generated.collisions {
        report.mismatch(0, format!("one monomial for [{t}]"), join_types(ms));
    }
    report
}

/// Rows whose note says `g^k → #target`, and the number of them the text asserts.
const POWER_NOTE_COUNTS: [(usize, usize); 3] = [(1, 20), (2, 1), (3, 1)];

/// Checks each note of the age-1 table: power notes with the stated exponent,
/// the rest by membership in [`classify`]'s output.
pub fn verify_notes(fixtures: &Fixtures) -> VerificationReport {
    let mut report = VerificationReport::new("notes", fixtures.table2.len() as u64);
    let mut verified = 0;
    let mut per_target: BTreeMap<usize, Vec<usize>> = BTreeMap::new();

    for row in &fixtures.table2 {
        let t = &row.canonical;
        let row_ok = match row.note {
            TableNote::Power { k, target } => {
                per_target.entry(target).or_default().push(row.index);
                let Some(target_row) = fixtures.table2_row(target) else {
                    report.mismatch(row.index as u64, format!("row #{target}"), "no such row");
                    continue;
                };
                match t.power(k) {
                    Ok(p) if p.reduce() == target_row.canonical => true,
                    Ok(p) => {
                        report.mismatch(
                            row.index as u64,
                            format!("reduce(g^{k}) = [{}]", target_row.canonical),
                            format!("[{}]", p.reduce()),
                        );
                        false
                    }
                    Err(e) => {
                        report.mismatch(row.index as u64, format!("g^{k}"), e.to_string());
                        false
                    }
                }
            }
            ref note => match classify(t) {
                Ok(strategies) if strategies.iter().any(|s| s.realizes(note)) => true,
                Ok(strategies) => {
                    report.mismatch(
                        row.index as u64,
                        note.to_string(),
                        strategies
                            .iter()
                            .map(|s| s.to_string())
                            .collect::<Vec<_>>()
                            .join("; "),
                    );
                    false
                }
                Err(e) => {
                    report.mismatch(row.index as u64, note.to_string(), e.to_string());
                    false
                }
            },
        };
        if row_ok {
            verified += 1;
        }
    }

    for (target, count) in POWER_NOTE_COUNTS {
        let rows = per_target.get(&target).map_or(&[][..], |v| v.as_slice());
        if rows.len() != count {
            report.mismatch(
                target as u64,
                format!("{count} power notes -> #{target}"),
                format!("{} ({rows:?})", rows.len()),
            );
        }
    }
    report.note(format!(
        "power notes by target: {}",
        per_target
            .iter()
            .map(|(t, rows)| format!("#{t}: {rows:?}"))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    report.set_found(verified);
    report
}

/// Series product against the knapsack oracle at every grade up to `SCALE`,
/// and the weight-1 slice against the reference polynomial.
pub fn verify_series(fixtures: &Fixtures) -> Result<VerificationReport> {
    verify_series_with(fixtures, Exec::default())
}

pub fn verify_series_with(fixtures: &Fixtures, exec: Exec) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("series", fixtures.polynomial.len() as u64);

    for (grade, series, knapsack) in compare_routes(SCALE, exec)? {
        report.mismatch(
            grade,
            format!(
                "knapsack: {}",
                join_types(&knapsack.monomials().cloned().collect::<Vec<_>>())
            ),
            format!(
                "series: {}",
                join_types(&series.monomials().cloned().collect::<Vec<_>>())
            ),
        );
    }

    let slice = series_slice(SCALE)?;
    report.set_found(slice.len() as u64);
    for (m, &c) in &slice.terms {
        if c != 1 {
            report.mismatch(SCALE, format!("coefficient 1 for {m}"), c.to_string());
        }
        if !fixtures.polynomial.contains(m) {
            report.mismatch(SCALE, "absent from reference polynomial", m.to_string());
        }
        let t = monomial_to_type(m)?;
        if t.weight()? != Weight::one() {
            report.mismatch(SCALE, format!("weight 1 for {m}"), t.weight()?.to_string());
        }
    }
    for m in &fixtures.polynomial {
        if !slice.terms.contains_key(m) {
            report.mismatch(SCALE, m.to_string(), "missing from computed slice");
        }
    }

    let mut seen = BTreeMap::new();
    for m in slice.monomials() {
        if let Some(prev) = seen.insert(monomial_to_type(m)?, m.clone()) {
            report.mismatch(
                SCALE,
                format!("distinct types for {prev} and {m}"),
                "same type",
            );
        }
    }

    let minimal = minimal_scale(catalogue());
    report.note(format!(
        "grade unit 1/{SCALE}; least common multiple of the weight denominators is {minimal}"
    ));
    if !SCALE.is_multiple_of(minimal) {
        report.mismatch(
            SCALE,
            format!("{minimal} divides {SCALE}"),
            "does not divide",
        );
    }
    Ok(report)
}
