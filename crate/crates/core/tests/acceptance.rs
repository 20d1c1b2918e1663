//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails. Timing limits are measured on whatever profile the test
//! binary was built with.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use abvar_types::classification::{base_type, verify_notes, verify_table1, verify_table2_against};
use abvar_types::cli;
use abvar_types::enumeration::verify_lemma_2_1;
use abvar_types::qz::max_n_with_phi_le;
use abvar_types::series::{compare_routes, knapsack_slice, monomial_to_type, series_slice};
use abvar_types::types::is_primitive;
use abvar_types::{
    catalogue, classify, decompose, enumerate_age_one, AutType, Exec, Fixtures, Monomial,
    TableNote, Weight, SCALE,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use serde_json::Value;

const PROPERTY_CASES: u32 = 256;
const LEMMA_N_MAX: u64 = 10_000;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn check(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    match limit {
        Some(limit) => {
            out.detail = format!(
                "{}; {:.2} s (limit {} s)",
                out.detail,
                elapsed.as_secs_f64(),
                limit.as_secs()
            );
            if elapsed >= limit {
                out.passed = false;
            }
        }
        None => out.detail = format!("{}; {:.2} s", out.detail, elapsed.as_secs_f64()),
    }
    out
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("abvar-types").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json_entries(v: &Value) -> Vec<String> {
    v["entries"]
        .as_array()
        .map(|a| {
            a.iter()
                .filter_map(|x| x.as_str().map(String::from))
                .collect()
        })
        .unwrap_or_default()
}

fn entry_strings(t: &AutType) -> Vec<String> {
    t.entries()
        .iter()
        .map(|x| format!("{}/{}", x.num(), x.den()))
        .collect()
}

fn criterion_1(f: &Fixtures) -> Outcome {
    let (code, out, err) = run_cli(&["primitives", "--max-weight", "1", "--format", "json"]);
    if code != 0 {
        return Outcome::check(false, format!("exit {code}: {err}"));
    }
    let parsed: Value = serde_json::from_str(&out).unwrap();
    let rows = parsed["rows"].as_array().cloned().unwrap_or_default();
    let mut bad = Vec::new();
    for (i, expected) in f.table1.iter().enumerate() {
        let ok = rows.get(i).is_some_and(|r| {
            r["index"] == expected.index
                && r["n"] == expected.n
                && json_entries(r) == entry_strings(&expected.primitive)
                && r["weight"].as_str() == Some(expected.weight.to_string().as_str())
        });
        if !ok {
            bad.push(expected.index);
        }
    }
    let report = verify_table1(f);
    Outcome::check(
        rows.len() == 28 && f.table1.len() == 28 && bad.is_empty() && report.passed(),
        format!(
            "{} rows, {} row mismatches, table report {}",
            rows.len(),
            bad.len(),
            report.status()
        ),
    )
}

fn criterion_2(f: &Fixtures) -> Outcome {
    let (code, out, err) = run_cli(&["age-one", "--method", "both", "--format", "json"]);
    if code != 0 {
        return Outcome::check(false, format!("exit {code}: {}", err.trim()));
    }
    let parsed: Value = serde_json::from_str(&out).unwrap();
    let rows = parsed["rows"].as_array().cloned().unwrap_or_default();
    let mut bad = Vec::new();
    for expected in &f.table2 {
        let found = rows.iter().find(|r| r["table_row"] == expected.index);
        if found.is_none_or(|r| json_entries(r) != entry_strings(&expected.canonical)) {
            bad.push(expected.index);
        }
    }
    let disagreements = compare_routes(SCALE, Exec::default()).map(|d| d.len());
    let generated = enumerate_age_one(f).unwrap();
    let report = verify_table2_against(&generated, f);
    Outcome::check(
        rows.len() == 35 && bad.is_empty() && disagreements == Ok(0) && report.passed(),
        format!(
            "{} types, {} unmatched rows, {:?} grades where series and knapsack differ (0..={SCALE})",
            rows.len(),
            bad.len(),
            disagreements
        ),
    )
}

fn criterion_3(f: &Fixtures) -> Outcome {
    let series = series_slice(SCALE).unwrap();
    let knapsack = knapsack_slice(SCALE).unwrap();
    let computed: BTreeSet<&Monomial> = series.monomials().collect();
    let reference: BTreeSet<&Monomial> = f.polynomial.iter().collect();
    let all_one = series.terms.values().all(|&c| c == 1);
    Outcome::check(
        computed == reference && reference.len() == 35 && all_one && series == knapsack,
        format!(
            "{} computed monomials, {} reference, all coefficients 1: {all_one}",
            computed.len(),
            reference.len()
        ),
    )
}

fn criterion_4(f: &Fixtures) -> Outcome {
    let half = base_type(1).unwrap();
    let mut power_to = [0usize; 4];
    let mut failures = Vec::new();
    let mut non_power = 0;
    for row in &f.table2 {
        match row.note {
            TableNote::Power { k, target } => {
                let expected = base_type(target).unwrap();
                match row.canonical.power(k) {
                    Ok(p) if p.reduce() == expected => power_to[target] += 1,
                    _ => failures.push(row.index),
                }
                let pinned = match row.index {
                    9 => target == 2,
                    23 => target == 3,
                    _ => target == 1 && expected == half,
                };
                if !pinned {
                    failures.push(row.index);
                }
            }
            ref note => {
                non_power += 1;
                let ok = classify(&row.canonical).is_ok_and(|s| s.iter().any(|s| s.realizes(note)));
                if !ok {
                    failures.push(row.index);
                }
            }
        }
    }
    let report = verify_notes(f);
    Outcome::check(
        power_to[1..] == [20, 1, 1] && non_power == 13 && failures.is_empty() && report.passed(),
        format!(
            "power notes -> #1/#2/#3: {}/{}/{}, non-power notes {non_power}, failing rows {failures:?}",
            power_to[1], power_to[2], power_to[3]
        ),
    )
}

fn criterion_5() -> Outcome {
    let limit = max_n_with_phi_le(24).unwrap();
    let report = verify_lemma_2_1(LEMMA_N_MAX).unwrap();
    let counterexamples = report.mismatches().iter().filter(|m| m.row > 0).count();
    Outcome::check(
        limit == 90 && report.passed() && report.found_count() == LEMMA_N_MAX - 1,
        format!(
            "max n with phi <= 24: {limit}; {counterexamples} counterexamples to the min-sum bound \
             or the closed square sum for 2 <= n <= {LEMMA_N_MAX}; {}",
            report.notes().join("; ")
        ),
    )
}

fn criterion_6(f: &Fixtures) -> Outcome {
    let empty: Vec<usize> = f
        .table2
        .iter()
        .filter(|r| classify(&r.canonical).map_or(true, |s| s.is_empty()))
        .map(|r| r.index)
        .collect();
    Outcome::check(
        f.table2.len() == 35 && empty.is_empty(),
        format!("{} types, without strategy: {empty:?}", f.table2.len()),
    )
}

fn property(
    name: &str,
    strategy: impl Strategy<Value = AutType>,
    test: impl Fn(&AutType) -> Result<(), TestCaseError>,
    failures: &mut Vec<String>,
) {
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        max_global_rejects: 64 * PROPERTY_CASES,
        ..Config::default()
    });
    if let Err(e) = runner.run(&strategy, |t| test(&t)) {
        failures.push(format!("{name}: {e}"));
    }
}

fn sum_of_monomial(m: &Monomial) -> AutType {
    monomial_to_type(m).unwrap()
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();

    property(
        "weight plus inverse weight",
        common::mixed_type(),
        |t| {
            let nonzero = t.entries().iter().filter(|x| !x.is_zero()).count() as i64;
            let total = t
                .weight()
                .unwrap()
                .checked_add(&t.inverse().weight().unwrap())
                .unwrap();
            prop_assert_eq!(total, Weight::new(nonzero, 1));
            Ok(())
        },
        &mut failures,
    );

    property(
        "power by denominator",
        common::mixed_type(),
        |t| {
            prop_assert!(t.power(t.denominator()).unwrap().reduce().is_empty());
            Ok(())
        },
        &mut failures,
    );

    property(
        "closure",
        (common::mixed_type(), common::mixed_type(), 1u64..=60).prop_map(|(a, b, k)| {
            let s = a.sum(&b).expect("sum of types is a type");
            let p = a.power(k).expect("power of a type is a type");
            let i = AutType::new(a.inverse().entries().to_vec()).expect("inverse is a type");
            AutType::new(
                s.entries()
                    .iter()
                    .chain(p.entries())
                    .chain(i.entries())
                    .copied(),
            )
            .expect("concatenation of types is a type")
        }),
        |t| {
            prop_assert!(AutType::new(t.entries().to_vec()).is_ok());
            Ok(())
        },
        &mut failures,
    );

    let rows = catalogue().rows();
    let not_primitive: Vec<usize> = rows
        .iter()
        .filter(|r| !is_primitive(r.primitive.base()))
        .map(|r| r.index)
        .collect();
    if rows.len() != 28 || !not_primitive.is_empty() {
        failures.push(format!(
            "primitivity: {} rows, failing {not_primitive:?}",
            rows.len()
        ));
    }
    property(
        "sums of two non-zero types are not primitive",
        (common::random_type_below(12), common::random_type_below(12))
            .prop_filter("non-empty summands", |(a, b)| {
                !a.reduce().is_empty() && !b.reduce().is_empty()
            })
            .prop_map(|(a, b)| a.reduce().sum(&b.reduce()).unwrap())
            .prop_filter("small search space", |t| {
                common::sub_multisets(t) <= 1 << 16
            }),
        |t| {
            prop_assert!(!is_primitive(t));
            Ok(())
        },
        &mut failures,
    );

    let monomials = prop::collection::vec(1usize..=28, 1..=4)
        .prop_map(|ix| Monomial::from_exponents(ix.into_iter().map(|i| (i, 1))));
    property(
        "decompose round-trip",
        monomials.prop_map(|m| sum_of_monomial(&m)),
        |t| {
            let parts = decompose(t).unwrap();
            prop_assert!(!parts.is_empty());
            for m in &parts {
                prop_assert_eq!(&sum_of_monomial(m), t);
            }
            Ok(())
        },
        &mut failures,
    );
    property(
        "decompose on arbitrary reduced types",
        common::mixed_type().prop_map(|t| t.reduce()),
        |t| {
            for m in &decompose(t).unwrap() {
                prop_assert_eq!(&sum_of_monomial(m), t);
            }
            Ok(())
        },
        &mut failures,
    );

    Outcome::check(
        failures.is_empty(),
        format!(
            "6 generated properties, {PROPERTY_CASES} cases each, plus {} catalogue rows checked for primitivity{}",
            rows.len(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

type Criterion<'a> = Box<dyn FnOnce() -> Outcome + 'a>;

fn main() -> ExitCode {
    let fixtures = Fixtures::embedded().expect("embedded fixtures load");
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "weight <= 1 primitive types",
            Box::new(|| timed(Some(Duration::from_secs(1)), || criterion_1(&fixtures))),
        ),
        (
            "weight-1 types, both slice routes",
            Box::new(|| timed(Some(Duration::from_secs(5)), || criterion_2(&fixtures))),
        ),
        (
            "grade-5040 slice against reference polynomial",
            Box::new(|| timed(None, || criterion_3(&fixtures))),
        ),
        (
            "proof notes",
            Box::new(|| timed(None, || criterion_4(&fixtures))),
        ),
        (
            "totient bound sweep",
            Box::new(|| timed(Some(Duration::from_secs(10)), criterion_5)),
        ),
        (
            "classification coverage",
            Box::new(|| timed(None, || criterion_6(&fixtures))),
        ),
        ("property suites", Box::new(|| timed(None, criterion_7))),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let outcome = run();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {name}: {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.passed);
    }
    println!("[SKIP] criterion 8: geometric statements are out of scope; criteria 1-7 certify their hypotheses");

    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
