//! Graded expansion of `Π_i (1 − a_i y^{s_i})⁻¹` over the weight-≤1 catalogue.
//!
//! Each catalogue row `i` contributes a formal variable `a_i` with grade
//! `s_i = w_i · SCALE`. The coefficient of `y^SCALE` lists every way of writing
//! a weight-1 type as a sum of primitive types. Two independent routes produce
//! the same slices: [`series_expand`] multiplies truncated series, and
//! [`knapsack_slice`] enumerates exponent vectors depth first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::integer::lcm;
use serde::{Serialize, Serializer};

use crate::enumeration::{catalogue, PrimitiveCatalogue};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::types::AutType;

/// Grade unit: a weight `w` sits at grade `w · SCALE`.
pub const SCALE: u64 = 5040;

/// A product `Π a_i^{m_i}` keyed by 1-based catalogue index. Zero exponents are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exponents: BTreeMap<usize, u32>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial::default()
    }

    pub fn var(index: usize) -> Self {
        Monomial::from_exponents([(index, 1)])
    }

    pub fn from_exponents(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut exponents = BTreeMap::new();
        for (i, m) in pairs {
            if m > 0 {
                *exponents.entry(i).or_insert(0) += m;
            }
        }
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &BTreeMap<usize, u32> {
        &self.exponents
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.exponents.get(&index).copied().unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exponents = self.exponents.clone();
        for (&i, &m) in &other.exponents {
            *exponents.entry(i).or_insert(0) += m;
        }
        Monomial { exponents }
    }

    fn push(&mut self, index: usize) {
        *self.exponents.entry(index).or_insert(0) += 1;
    }

    fn pop(&mut self, index: usize) {
        match self.exponents.get_mut(&index) {
            Some(m) if *m > 1 => *m -= 1,
            Some(_) => {
                self.exponents.remove(&index);
            }
            None => unreachable!("pop of absent variable a{index}"),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("1");
        }
        for (k, (i, m)) in self.exponents.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *m == 1 {
                write!(f, "a{i}")?;
            } else {
                write!(f, "a{i}^{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Parses `1`, `a3`, `a8^4*a2` and similar.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::unit());
        }
        let bad = || Error::InvalidInput(format!("bad monomial {s:?}"));
        let mut pairs = Vec::new();
        for factor in s.split('*') {
            let factor = factor.trim().strip_prefix('a').ok_or_else(bad)?;
            let (i, m) = factor.split_once('^').unwrap_or((factor, "1"));
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let m: u32 = m.trim().parse().map_err(|_| bad())?;
            if i == 0 || m == 0 {
                return Err(bad());
            }
            pairs.push((i, m));
        }
        Ok(Monomial::from_exponents(pairs))
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// All terms of one grade, with their coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GradedSlice {
    pub grade: u64,
    pub terms: BTreeMap<Monomial, u64>,
}

impl GradedSlice {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }
}

/// `s_i = w_i · SCALE` for each catalogue row, keyed by index.
pub fn grade_steps(cat: &PrimitiveCatalogue) -> Result<BTreeMap<usize, u64>> {
    cat.iter()
        .map(|row| {
            let w = row.weight.value();
            let scaled = w * num::rational::Ratio::from_integer(SCALE as i64);
            if !scaled.is_integer() || scaled <= num::rational::Ratio::from_integer(0) {
                return Err(Error::Consistency(format!(
                    "weight {w} of row {} is not a positive multiple of 1/{SCALE}",
                    row.index
                )));
            }
            Ok((row.index, scaled.to_integer() as u64))
        })
        .collect()
}

/// Least common multiple of the catalogue weight denominators: the smallest usable scale.
pub fn minimal_scale(cat: &PrimitiveCatalogue) -> u64 {
    cat.iter()
        .fold(1, |acc, row| lcm(acc, row.weight.denom() as u64))
}

pub fn grade_of(m: &Monomial) -> Result<u64> {
    grade_of_in(m, catalogue())
}

pub fn grade_of_in(m: &Monomial, cat: &PrimitiveCatalogue) -> Result<u64> {
    let steps = grade_steps(cat)?;
    m.exponents.iter().try_fold(0u64, |acc, (i, &e)| {
        let s = steps
            .get(i)
            .ok_or_else(|| Error::InvalidInput(format!("no catalogue row a{i}")))?;
        s.checked_mul(e as u64)
            .and_then(|v| acc.checked_add(v))
            .ok_or(Error::Overflow("grade_of"))
    })
}

/// Multiset sum of the catalogue primitives named by `m`.
pub fn monomial_to_type(m: &Monomial) -> Result<AutType> {
    monomial_to_type_in(m, catalogue())
}

pub fn monomial_to_type_in(m: &Monomial, cat: &PrimitiveCatalogue) -> Result<AutType> {
    let mut entries = Vec::new();
    for (&i, &e) in &m.exponents {
        let row = cat
            .get(i)
            .ok_or_else(|| Error::InvalidInput(format!("no catalogue row a{i}")))?;
        for _ in 0..e {
            entries.extend_from_slice(row.primitive.base().entries());
        }
    }
    AutType::new(entries)
}

/// A power series in `y` with monomial coefficients, truncated above `max_grade`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    max_grade: u64,
    terms: BTreeMap<u64, BTreeMap<Monomial, u64>>,
}

impl TruncatedSeries {
    pub fn one(max_grade: u64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, BTreeMap::from([(Monomial::unit(), 1)]));
        TruncatedSeries { max_grade, terms }
    }

    /// `(1 − a_index y^step)⁻¹ = Σ_m a_index^m y^{m·step}`, truncated.
    pub fn geometric(index: usize, step: u64, max_grade: u64) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidInput(
                "geometric series needs a positive step".into(),
            ));
        }
        let terms = (0..=max_grade / step)
            .map(|m| {
                let mono = Monomial::from_exponents([(index, m as u32)]);
                (m * step, BTreeMap::from([(mono, 1)]))
            })
            .collect();
        Ok(TruncatedSeries { max_grade, terms })
    }

    pub fn max_grade(&self) -> u64 {
        self.max_grade
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        let max_grade = self.max_grade.min(other.max_grade);
        let mut terms: BTreeMap<u64, BTreeMap<Monomial, u64>> = BTreeMap::new();
        for (&g, left) in &self.terms {
            for (&h, right) in other.terms.range(..=max_grade.saturating_sub(g)) {
                if g + h > max_grade {
                    break;
                }
                let slot = terms.entry(g + h).or_default();
                for (m, c) in left {
                    for (n, d) in right {
                        let prod = c.checked_mul(*d).ok_or(Error::Overflow("series product"))?;
                        let coeff = slot.entry(m.mul(n)).or_insert(0);
                        *coeff = coeff
                            .checked_add(prod)
                            .ok_or(Error::Overflow("series product"))?;
                    }
                }
            }
        }
        Ok(TruncatedSeries { max_grade, terms })
    }

    pub fn slice(&self, grade: u64) -> GradedSlice {
        GradedSlice {
            grade,
            terms: self.terms.get(&grade).cloned().unwrap_or_default(),
        }
    }

    /// Grades carrying at least one term.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }
}

/// The product over the whole catalogue, truncated at `max_grade`.
pub fn series_expand(max_grade: u64, exec: Exec) -> Result<TruncatedSeries> {
    series_expand_in(max_grade, catalogue(), exec)
}

pub fn series_expand_in(
    max_grade: u64,
    cat: &PrimitiveCatalogue,
    exec: Exec,
) -> Result<TruncatedSeries> {
    let steps: Vec<(usize, u64)> = grade_steps(cat)?.into_iter().collect();
    let factors = exec.map(&steps, |&(i, s)| {
        TruncatedSeries::geometric(i, s, max_grade)
    });
    exec.reduce(factors, |a, b| a.and_then(|a| b.and_then(|b| a.mul(&b))))
        .unwrap_or_else(|| Ok(TruncatedSeries::one(max_grade)))
}

pub fn series_slice(target_grade: u64) -> Result<GradedSlice> {
    Ok(series_expand(target_grade, Exec::default())?.slice(target_grade))
}

/// Same contract as [`series_slice`], by depth-first search over exponent
/// vectors with non-increasing catalogue index.
pub fn knapsack_slice(target_grade: u64) -> Result<GradedSlice> {
    knapsack_slice_in(target_grade, catalogue())
}

pub fn knapsack_slice_in(target_grade: u64, cat: &PrimitiveCatalogue) -> Result<GradedSlice> {
    let steps: Vec<(usize, u64)> = grade_steps(cat)?.into_iter().collect();
    knapsack_with_steps(target_grade, &steps)
}

fn knapsack_with_steps(target_grade: u64, steps: &[(usize, u64)]) -> Result<GradedSlice> {
    fn dfs(
        steps: &[(usize, u64)],
        remaining: u64,
        current: &mut Monomial,
        out: &mut BTreeMap<Monomial, u64>,
    ) {
        if remaining == 0 {
            *out.entry(current.clone()).or_insert(0) += 1;
            return;
        }
        // positions strictly after `pos` are never revisited below it
        for (pos, &(index, step)) in steps.iter().enumerate().rev() {
            if step <= remaining {
                current.push(index);
                dfs(&steps[..=pos], remaining - step, current, out);
                current.pop(index);
            }
        }
    }

    let mut terms = BTreeMap::new();
    dfs(steps, target_grade, &mut Monomial::unit(), &mut terms);
    Ok(GradedSlice {
        grade: target_grade,
        terms,
    })
}

/// Knapsack slices at every grade `0..=max_grade`.
pub fn knapsack_all(max_grade: u64, exec: Exec) -> Result<Vec<GradedSlice>> {
    let steps: Vec<(usize, u64)> = grade_steps(catalogue())?.into_iter().collect();
    exec.map_range(0..=max_grade, |g| knapsack_with_steps(g, &steps))
        .into_iter()
        .collect()
}

/// Grades at which the two routes disagree, up to `max_grade`.
pub fn compare_routes(max_grade: u64, exec: Exec) -> Result<Vec<(u64, GradedSlice, GradedSlice)>> {
    let series = series_expand(max_grade, exec)?;
    let knapsack = knapsack_all(max_grade, exec)?;
    Ok(knapsack
        .into_iter()
        .filter_map(|k| {
            let s = series.slice(k.grade);
            (s != k).then_some((k.grade, s, k))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn monomial_text() {
        assert_eq!(mono("a8^4*a2").to_string(), "a2*a8^4");
        assert_eq!(mono("1"), Monomial::unit());
        assert_eq!(mono("a1*a1"), mono("a1^2"));
        assert!("a0".parse::<Monomial>().is_err());
        assert!("b3".parse::<Monomial>().is_err());
        assert!("a3^0".parse::<Monomial>().is_err());
    }

    #[test]
    fn grades() {
        assert_eq!(grade_of(&mono("a1^2")).unwrap(), 5040);
        assert_eq!(grade_of(&Monomial::unit()).unwrap(), 0);
        assert_eq!(grade_of(&mono("a28")).unwrap(), 5040);
        assert_eq!(grade_of(&mono("a8")).unwrap(), 840);
        assert!(grade_of(&mono("a29")).is_err());
    }

    #[test]
    fn minimal_scale_divides_scale() {
        let m = minimal_scale(catalogue());
        assert_eq!(m, 1260);
        assert_eq!(SCALE % m, 0);
    }

    #[test]
    fn low_grade_slices() {
        let zero = series_slice(0).unwrap();
        assert_eq!(zero.terms, BTreeMap::from([(Monomial::unit(), 1)]));
        assert!(knapsack_slice(1).unwrap().is_empty());
        assert!(series_slice(1).unwrap().is_empty());
        assert_eq!(
            knapsack_slice(840).unwrap().terms,
            BTreeMap::from([(mono("a8"), 1)])
        );
    }

    #[test]
    fn half_weight_slice() {
        let expected: BTreeMap<Monomial, u64> = ["a1", "a12", "a18", "a4^2", "a2*a8", "a8^3"]
            .iter()
            .map(|s| (mono(s), 1))
            .collect();
        assert_eq!(knapsack_slice(2520).unwrap().terms, expected);
        assert_eq!(series_slice(2520).unwrap().terms, expected);
    }

    #[test]
    fn weight_one_slice_has_35_unit_terms() {
        let s = series_slice(SCALE).unwrap();
        assert_eq!(s.len(), 35);
        assert!(s.terms.values().all(|&c| c == 1));
        assert_eq!(s, knapsack_slice(SCALE).unwrap());
    }

    #[test]
    fn monomials_to_types() {
        assert_eq!(
            monomial_to_type(&mono("a1^2")).unwrap().to_string(),
            "1/2, 1/2"
        );
        assert_eq!(
            monomial_to_type(&mono("a8^4*a2")).unwrap().to_string(),
            "1/6, 1/6, 1/6, 1/6, 1/3"
        );
        assert_eq!(
            monomial_to_type(&mono("a2*a3")).unwrap().to_string(),
            "1/3, 2/3"
        );
        assert!(monomial_to_type(&Monomial::unit()).unwrap().is_empty());
    }

    #[test]
    fn geometric_series_product() {
        let a = TruncatedSeries::geometric(1, 2, 6).unwrap();
        let b = TruncatedSeries::geometric(2, 3, 6).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.support().collect::<Vec<_>>(), vec![0, 2, 3, 4, 5, 6]);
        let six = p.slice(6);
        assert_eq!(six.len(), 2);
        assert_eq!(six.terms[&mono("a1^3")], 1);
        assert_eq!(six.terms[&mono("a2^2")], 1);
        // (1 - a y)^-1 squared by itself doubles the coefficient of a y
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.slice(2).terms[&mono("a1")], 2);
    }
}
