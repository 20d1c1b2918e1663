//! Types of finite-order automorphisms: Galois-stable multisets in ℚ/ℤ.
//!
//! A multiset `{x₁, …, xₙ}` is a type when `F(x) = mult(x) + mult(−x)` is
//! constant on every order class that meets its support. [`AutType`] holds
//! such a multiset as an ascending list of canonical fractions, so two types
//! are equal exactly when their lists are.

use std::collections::BTreeMap;
use std::fmt;

use num::integer::lcm;
use num::rational::Ratio;
use num::{CheckedAdd, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qz::{units, FracQZ};

/// Largest denominator accepted by [`validate_type`]; the stability check is linear in it.
pub const MAX_DENOMINATOR: u64 = 1_000_000;

/// Exact sum of the entries of a type (the age of the automorphism).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Ratio<i64>);

impl Weight {
    pub fn new(numer: i64, denom: i64) -> Self {
        Weight(Ratio::new(numer, denom))
    }

    pub fn zero() -> Self {
        Weight(Ratio::zero())
    }

    pub fn one() -> Self {
        Weight::new(1, 1)
    }

    pub fn value(&self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn checked_add(&self, other: &Weight) -> Result<Weight> {
        self.0
            .checked_add(&other.0)
            .map(Weight)
            .ok_or(Error::Overflow("weight"))
    }
}

impl From<Ratio<i64>> for Weight {
    fn from(r: Ratio<i64>) -> Self {
        Weight(r)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::str::FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: i64 = n
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad weight {s:?}")))?;
        let d: i64 = d
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad weight {s:?}")))?;
        if d <= 0 {
            return Err(Error::InvalidInput(format!("bad weight {s:?}")));
        }
        Ok(Weight::new(n, d))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// A validated type: Galois-stable multiset of canonical fractions, sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct AutType {
    entries: Vec<FracQZ>,
}

fn multiplicities(entries: &[FracQZ]) -> BTreeMap<FracQZ, u32> {
    let mut m = BTreeMap::new();
    for &x in entries {
        *m.entry(x).or_insert(0) += 1;
    }
    m
}

/// Check `F`-constancy on every order class meeting the support.
fn check_stable(counts: &BTreeMap<FracQZ, u32>) -> Result<()> {
    let mut orders: Vec<u64> = counts.keys().map(|x| x.order()).collect();
    orders.sort_unstable();
    orders.dedup();

    for d in orders {
        // classes of order 1 and 2 are singletons
        if d <= 2 {
            continue;
        }
        if d > MAX_DENOMINATOR {
            return Err(Error::InvalidInput(format!(
                "denominator {d} exceeds the supported maximum {MAX_DENOMINATOR}"
            )));
        }
        let mult = |a: u64| {
            let x = FracQZ::new(a as i64, d as i64).expect("positive denominator");
            counts.get(&x).copied().unwrap_or(0)
        };
        let class = units(d)?;
        let values: Vec<(FracQZ, u32)> = class
            .iter()
            .filter(|&a| 2 * a < d)
            .map(|a| {
                let x = FracQZ::new(a as i64, d as i64).expect("positive denominator");
                (x, mult(a) + mult(d - a))
            })
            .collect();
        if values.windows(2).any(|w| w[0].1 != w[1].1) {
            return Err(Error::Unstable { order: d, values });
        }
    }
    Ok(())
}

/// Validate and canonicalize a multiset of fractions as a type.
pub fn validate_type(entries: impl IntoIterator<Item = FracQZ>) -> Result<AutType> {
    let mut entries: Vec<FracQZ> = entries.into_iter().collect();
    entries.sort();
    check_stable(&multiplicities(&entries))?;
    Ok(AutType { entries })
}

impl AutType {
    pub fn new(entries: impl IntoIterator<Item = FracQZ>) -> Result<Self> {
        validate_type(entries)
    }

    pub fn empty() -> Self {
        AutType::default()
    }

    // Closure operations re-validate; a failure there is a bug, not bad input.
    fn revalidated(entries: Vec<FracQZ>, op: &str) -> Result<Self> {
        validate_type(entries).map_err(|e| match e {
            Error::Unstable { .. } => Error::Consistency(format!("{op} broke stability: {e}")),
            other => other,
        })
    }

    pub fn entries(&self) -> &[FracQZ] {
        &self.entries
    }

    pub fn multiplicities(&self) -> BTreeMap<FracQZ, u32> {
        multiplicities(&self.entries)
    }

    pub fn multiplicity(&self, x: FracQZ) -> usize {
        self.entries.iter().filter(|&&y| y == x).count()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of eigenvalues.
    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    /// lcm of the entry orders; 1 for the empty type.
    pub fn denominator(&self) -> u64 {
        self.entries.iter().fold(1, |acc, x| lcm(acc, x.order()))
    }

    pub fn weight(&self) -> Result<Weight> {
        self.entries.iter().try_fold(Weight::zero(), |acc, x| {
            acc.checked_add(&Weight(x.to_ratio()))
        })
    }

    pub fn inverse(&self) -> AutType {
        let mut entries: Vec<FracQZ> = self.entries.iter().map(|x| x.neg()).collect();
        entries.sort();
        debug_assert!(check_stable(&multiplicities(&entries)).is_ok());
        AutType { entries }
    }

    /// Type of `g^k` given the type of `g`.
    pub fn power(&self, k: u64) -> Result<AutType> {
        if k == 0 {
            return Err(Error::InvalidInput("power exponent must be >= 1".into()));
        }
        let k = i64::try_from(k).map_err(|_| Error::Overflow("power"))?;
        let entries = self
            .entries
            .iter()
            .map(|x| x.scale(k))
            .collect::<Result<Vec<_>>>()?;
        Self::revalidated(entries, "power")
    }

    /// Drop every zero entry.
    pub fn reduce(&self) -> AutType {
        AutType {
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|x| !x.is_zero())
                .collect(),
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.entries.iter().all(|x| !x.is_zero())
    }

    /// Multiset union.
    pub fn sum(&self, other: &AutType) -> Result<AutType> {
        let entries = self.entries.iter().chain(&other.entries).copied().collect();
        Self::revalidated(entries, "sum")
    }

    pub fn is_disjoint(&self, other: &AutType) -> bool {
        // both sorted: linear merge
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            match self.entries[i].cmp(&other.entries[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Multiset containment of `self` in `other`, multiplicities respected.
    pub fn is_contained_in(&self, other: &AutType) -> bool {
        let outer = other.multiplicities();
        self.multiplicities()
            .iter()
            .all(|(x, m)| outer.get(x).is_some_and(|n| n >= m))
    }
}

impl fmt::Display for AutType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

pub fn weight(t: &AutType) -> Result<Weight> {
    t.weight()
}

pub fn inverse(t: &AutType) -> AutType {
    t.inverse()
}

pub fn power(t: &AutType, k: u64) -> Result<AutType> {
    t.power(k)
}

pub fn reduce(t: &AutType) -> AutType {
    t.reduce()
}

pub fn sum(t1: &AutType, t2: &AutType) -> Result<AutType> {
    t1.sum(t2)
}

pub fn is_disjoint(t1: &AutType, t2: &AutType) -> bool {
    t1.is_disjoint(t2)
}

pub fn is_contained(t1: &AutType, t2: &AutType) -> bool {
    t1.is_contained_in(t2)
}

/// Exhaustive primitivity test: no proper non-empty sub-multiset is itself a type.
///
/// If a sub-multiset `Y` of a type `X` is stable then so is `X − Y`, since `F`
/// is additive and constant on every class of `X`, so one check per split suffices.
pub fn is_primitive(t: &AutType) -> bool {
    if t.is_empty() {
        return false;
    }
    let counts: Vec<(FracQZ, u32)> = t.multiplicities().into_iter().collect();
    let mut chosen = vec![0u32; counts.len()];
    loop {
        // odometer over 0..=m_i for each distinct entry
        let mut pos = 0;
        loop {
            if pos == counts.len() {
                return true;
            }
            if chosen[pos] < counts[pos].1 {
                chosen[pos] += 1;
                break;
            }
            chosen[pos] = 0;
            pos += 1;
        }
        let size: u32 = chosen.iter().sum();
        if size as usize == t.dimension() {
            continue;
        }
        let sub: BTreeMap<FracQZ, u32> = counts
            .iter()
            .zip(&chosen)
            .filter(|(_, &c)| c > 0)
            .map(|(&(x, _), &c)| (x, c))
            .collect();
        if check_stable(&sub).is_ok() {
            return false;
        }
    }
}

/// A primitive type: every entry has multiplicity one and the same order `n`,
/// and for `n ≥ 3` exactly one of `a/n`, `(n − a)/n` occurs for each unit `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimitiveType {
    base: AutType,
    n: u64,
    index: Option<usize>,
}

impl PrimitiveType {
    pub fn new(base: AutType) -> Result<Self> {
        let n = match base.entries.first() {
            Some(x) => x.order(),
            None => {
                return Err(Error::InvalidInput(
                    "the empty type is not primitive".into(),
                ))
            }
        };
        if base.entries.iter().any(|x| x.order() != n) {
            return Err(Error::InvalidInput(format!(
                "entries of {base} do not share one order"
            )));
        }
        if base.entries.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("{base} has a repeated entry")));
        }
        if n >= 3 {
            let expected = units(n)?.len() / 2;
            // multiplicity one plus stability already gives at most one per pair
            if base.dimension() != expected {
                return Err(Error::InvalidInput(format!(
                    "{base} does not pick one element from each of the {expected} pairs of order {n}"
                )));
            }
        } else if base.dimension() != 1 {
            return Err(Error::InvalidInput(format!("{base} is not primitive")));
        }
        Ok(PrimitiveType {
            base,
            n,
            index: None,
        })
    }

    pub fn with_index(mut self, index: usize) -> Self {
        self.index = Some(index);
        self
    }

    pub fn base(&self) -> &AutType {
        &self.base
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn index(&self) -> Option<usize> {
        self.index
    }

    pub fn weight(&self) -> Result<Weight> {
        self.base.weight()
    }
}
