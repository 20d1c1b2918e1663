#![allow(dead_code)]

use abvar_types::qz::{units, FracQZ};
use abvar_types::types::AutType;
use abvar_types::Fixtures;
use proptest::prelude::*;

pub const MAX_DEN: u64 = 48;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Build a type from a denominator and a stream of small choices. Each order
/// class d | n gets a constant c in 0..=2 and every pair {x, -x} splits c
/// between its two members, so the result is stable by construction.
pub fn type_from_choices(n: u64, choices: &[u8]) -> AutType {
    let mut it = choices.iter().copied().cycle();
    let mut entries = Vec::new();
    for d in divisors(n) {
        let c = it.next().unwrap() % 3;
        if d <= 2 {
            for _ in 0..c {
                entries.push(FracQZ::new(if d == 1 { 0 } else { 1 }, d as i64).unwrap());
            }
            continue;
        }
        for a in units(d).unwrap().iter().filter(|&a| 2 * a < d) {
            let left = it.next().unwrap() % (c + 1);
            for _ in 0..left {
                entries.push(FracQZ::new(a as i64, d as i64).unwrap());
            }
            for _ in 0..c - left {
                entries.push(FracQZ::new((d - a) as i64, d as i64).unwrap());
            }
        }
    }
    AutType::new(entries).expect("generator builds stable types")
}

pub fn random_type() -> impl Strategy<Value = AutType> {
    random_type_below(MAX_DEN)
}

pub fn random_type_below(max_den: u64) -> impl Strategy<Value = AutType> {
    (1..=max_den, prop::collection::vec(any::<u8>(), 1..64))
        .prop_map(|(n, choices)| type_from_choices(n, &choices))
}

/// Number of sub-multisets an exhaustive search over `t` visits.
pub fn sub_multisets(t: &AutType) -> u64 {
    t.multiplicities()
        .values()
        .map(|&m| u64::from(m) + 1)
        .product()
}

/// Every canonical type appearing in the reference tables.
pub fn fixture_types() -> Vec<AutType> {
    let f = Fixtures::embedded().unwrap();
    f.table1
        .iter()
        .map(|r| r.primitive.clone())
        .chain(f.table2.iter().map(|r| r.canonical.clone()))
        .collect()
}

/// Half fixture types, half random ones.
pub fn mixed_type() -> impl Strategy<Value = AutType> {
    let fixed = fixture_types();
    prop_oneof![prop::sample::select(fixed), random_type()]
}
