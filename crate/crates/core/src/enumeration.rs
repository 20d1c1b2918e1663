//! Exhaustive enumeration of primitive types and the denominator bound that
//! makes the weight-≤1 search finite.
//!
//! For `φ(n) > 24` every primitive type of denominator `n` weighs more than 1,
//! because its weight is at least `Σ_{x∈S_n} min(x, n−x) / 2n` and that sum
//! exceeds `2n`. The largest `n` with `φ(n) ≤ 24` is 90, so the weight-≤1
//! catalogue only needs denominators `2..=90`. [`verify_lemma_2_1`] checks both
//! facts numerically instead of taking them on trust.

use std::sync::OnceLock;

use num::rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::qz::{
    max_n_with_phi_le, sum_min_units, sum_squares_units, totient, units, FracQZ, SumMethod,
};
use crate::report::VerificationReport;
use crate::types::{AutType, PrimitiveType, Weight};

/// Totient threshold above which primitive types weigh more than 1.
pub const PHI_THRESHOLD: u64 = 24;

/// Choice enumeration refuses denominators with more than this many `{a, n − a}` pairs.
const MAX_PAIRS: usize = 24;

/// Representatives `a < n/2` of the pairs `{a/n, (n − a)/n}`, ascending.
fn unit_pairs(n: u64) -> Result<Vec<u64>> {
    Ok(units(n)?.iter().filter(|&a| 2 * a < n).collect())
}

fn frac(a: u64, n: u64) -> FracQZ {
    FracQZ::new(a as i64, n as i64).expect("positive denominator")
}

fn primitive_from(entries: Vec<FracQZ>) -> Result<PrimitiveType> {
    PrimitiveType::new(AutType::new(entries)?)
}

/// Every primitive type of denominator `n`, in canonical order.
///
/// For `n ≥ 3` these are the `2^(φ(n)/2)` ways of picking one element from each
/// pair `{a/n, (n − a)/n}`.
pub fn primitives_for_n(n: u64) -> Result<Vec<PrimitiveType>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "primitive types need denominator >= 2, got {n}"
        )));
    }
    if n == 2 {
        return Ok(vec![primitive_from(vec![FracQZ::HALF])?]);
    }
    let pairs = unit_pairs(n)?;
    if pairs.len() > MAX_PAIRS {
        return Err(Error::UnsupportedRange(format!(
            "n = {n} has 2^{} primitive types",
            pairs.len()
        )));
    }
    let mut out = (0u32..1 << pairs.len())
        .map(|mask| {
            let entries = pairs
                .iter()
                .enumerate()
                .map(|(bit, &a)| {
                    if mask >> bit & 1 == 1 {
                        frac(n - a, n)
                    } else {
                        frac(a, n)
                    }
                })
                .collect();
            primitive_from(entries)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|x, y| x.base().cmp(y.base()));
    Ok(out)
}

/// Primitive types of denominator `n` with weight at most 1, using the pruning
/// rule: if `(n − a)/n` is chosen for some `a < n/2` then `a` is the largest such
/// unit, since otherwise a larger pair would push the weight past 1. That leaves
/// at most two candidates per `n`.
pub fn primitives_for_n_pruned(n: u64) -> Result<Vec<PrimitiveType>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "primitive types need denominator >= 2, got {n}"
        )));
    }
    if n == 2 {
        return Ok(vec![primitive_from(vec![FracQZ::HALF])?]);
    }
    let pairs = unit_pairs(n)?;
    let small: Vec<FracQZ> = pairs.iter().map(|&a| frac(a, n)).collect();
    let mut swapped = small.clone();
    if let (Some(last), Some(&a)) = (swapped.last_mut(), pairs.last()) {
        *last = frac(n - a, n);
    }
    let mut out = Vec::new();
    for entries in [small, swapped] {
        let p = primitive_from(entries)?;
        if p.weight()? <= Weight::one() {
            out.push(p);
        }
    }
    out.sort_by(|x, y| x.base().cmp(y.base()));
    Ok(out)
}

/// Lower bound `Σ_{x∈S_n} min(x, n−x) / 2n` on the weight of any primitive type of denominator `n`.
pub fn lower_bound_weight(n: u64) -> Result<Weight> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "lower_bound_weight needs n >= 3, got {n}"
        )));
    }
    let s = i64::try_from(sum_min_units(n)?).map_err(|_| Error::Overflow("lower_bound_weight"))?;
    let d = i64::try_from(2 * n).map_err(|_| Error::Overflow("lower_bound_weight"))?;
    Ok(Weight::from(Ratio::new(s, d)))
}

/// Largest denominator that can carry a primitive type of weight ≤ 1.
pub fn search_limit() -> u64 {
    max_n_with_phi_le(PHI_THRESHOLD).expect("bound is positive")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMethod {
    /// Full `2^(φ(n)/2)` choice enumeration, filtered by weight.
    #[default]
    Exhaustive,
    /// At most two candidates per denominator.
    Pruned,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogueRow {
    pub index: usize,
    pub n: u64,
    pub primitive: PrimitiveType,
    pub weight: Weight,
}

/// Primitive types of weight ≤ 1 in table order: by denominator, then weight.
///
/// Indices are positions in the full weight-≤1 list and stay fixed when the
/// catalogue is filtered to a smaller maximum weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimitiveCatalogue {
    rows: Vec<CatalogueRow>,
}

impl PrimitiveCatalogue {
    pub fn rows(&self) -> &[CatalogueRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row by its 1-based catalogue index.
    pub fn get(&self, index: usize) -> Option<&CatalogueRow> {
        self.rows.iter().find(|r| r.index == index)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CatalogueRow> {
        self.rows.iter()
    }
}

fn build_catalogue(exec: Exec, method: SearchMethod) -> Result<PrimitiveCatalogue> {
    let per_n = exec.map_range(
        2..=search_limit(),
        |n| -> Result<Vec<(PrimitiveType, Weight)>> {
            let candidates = match method {
                // the bound rules out every choice set at once
                SearchMethod::Exhaustive if n >= 3 && lower_bound_weight(n)? > Weight::one() => {
                    Vec::new()
                }
                SearchMethod::Exhaustive => primitives_for_n(n)?,
                SearchMethod::Pruned => primitives_for_n_pruned(n)?,
            };
            let mut kept = Vec::new();
            for p in candidates {
                let w = p.weight()?;
                if w <= Weight::one() {
                    kept.push((p, w));
                }
            }
            Ok(kept)
        },
    );

    let mut all = Vec::new();
    for found in per_n {
        all.extend(found?);
    }
    all.sort_by(|(p, w), (q, v)| (p.n(), w, p.base()).cmp(&(q.n(), v, q.base())));
    let rows = all
        .into_iter()
        .enumerate()
        .map(|(i, (p, weight))| CatalogueRow {
            index: i + 1,
            n: p.n(),
            primitive: p.with_index(i + 1),
            weight,
        })
        .collect();
    Ok(PrimitiveCatalogue { rows })
}

/// The weight-≤1 catalogue, built once with the exhaustive search.
pub fn catalogue() -> &'static PrimitiveCatalogue {
    static CATALOGUE: OnceLock<PrimitiveCatalogue> = OnceLock::new();
    CATALOGUE.get_or_init(|| {
        build_catalogue(Exec::default(), SearchMethod::Exhaustive)
            .expect("catalogue enumeration over n <= 90 cannot fail")
    })
}

pub fn primitives_up_to_weight(wmax: Weight) -> Result<PrimitiveCatalogue> {
    primitives_up_to_weight_with(wmax, Exec::default(), SearchMethod::Exhaustive)
}

pub fn primitives_up_to_weight_with(
    wmax: Weight,
    exec: Exec,
    method: SearchMethod,
) -> Result<PrimitiveCatalogue> {
    if wmax > Weight::one() {
        return Err(Error::UnsupportedRange(format!(
            "max weight {wmax} > 1: the denominator bound only covers weight <= 1"
        )));
    }
    if wmax <= Weight::zero() {
        return Err(Error::InvalidInput(format!(
            "max weight must be positive, got {wmax}"
        )));
    }
    let full = build_catalogue(exec, method)?;
    Ok(PrimitiveCatalogue {
        rows: full.rows.into_iter().filter(|r| r.weight <= wmax).collect(),
    })
}

enum LemmaFailure {
    Inequality {
        sum: u64,
    },
    SquareSums {
        brute: Result<u64>,
        closed: Result<u64>,
    },
}

pub fn verify_lemma_2_1(n_max: u64) -> Result<VerificationReport> {
    verify_lemma_2_1_with(n_max, Exec::default())
}

/// Sweep `2..=n_max`: the min-sum inequality where `φ(n) > 24`, the closed
/// form for `Σ x²` everywhere, and the claim that 90 is the largest `n` with `φ(n) ≤ 24`.
pub fn verify_lemma_2_1_with(n_max: u64, exec: Exec) -> Result<VerificationReport> {
    if n_max < 91 {
        return Err(Error::InvalidInput(format!(
            "n_max = {n_max} cannot confirm the n = 90 bound; need n_max >= 91"
        )));
    }
    let mut report = VerificationReport::new("lemmas", n_max - 1);

    let outcomes = exec.map_range(2..=n_max, |n| -> Result<(bool, Vec<LemmaFailure>)> {
        let mut failures = Vec::new();
        let large = totient(n)? > PHI_THRESHOLD;
        if large {
            let s = sum_min_units(n)?;
            if s <= 2 * n {
                failures.push(LemmaFailure::Inequality { sum: s });
            }
        }
        let brute = sum_squares_units(n, SumMethod::Brute);
        let closed = sum_squares_units(n, SumMethod::Closed);
        if brute.is_err() || brute != closed {
            failures.push(LemmaFailure::SquareSums { brute, closed });
        }
        Ok((large, failures))
    });

    let (mut passing, mut large_count) = (0u64, 0u64);
    for (n, outcome) in (2..=n_max).zip(outcomes) {
        let (large, failures) = outcome?;
        large_count += u64::from(large);
        if failures.is_empty() {
            passing += 1;
        }
        for f in failures {
            match f {
                LemmaFailure::Inequality { sum } => {
                    report.mismatch(n, format!("sum min(x, n-x) > {}", 2 * n), sum.to_string())
                }
                LemmaFailure::SquareSums { brute, closed } => report.mismatch(
                    n,
                    format!("sum x^2 = {brute:?} (direct)"),
                    format!("{closed:?} (closed form)"),
                ),
            }
        }
    }

    let limit = max_n_with_phi_le(PHI_THRESHOLD)?;
    if limit != 90 {
        report.mismatch(0, "largest n with phi(n) <= 24 is 90", limit.to_string());
    }
    report.set_found(passing);
    report.note(format!(
        "min-sum inequality checked for {large_count} values of n with phi(n) > {PHI_THRESHOLD}"
    ));
    report.note(format!("largest n with phi(n) <= {PHI_THRESHOLD}: {limit}"));
    Ok(report)
}
