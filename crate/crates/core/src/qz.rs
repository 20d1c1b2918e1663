//! Exact arithmetic in ℚ/ℤ and the elementary arithmetic functions behind the
//! denominator bound for primitive types.
//!
//! Every value is carried in 64-bit integers. Intermediate products that could
//! leave that range go through checked operations and surface as
//! [`Error::Overflow`] instead of wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::integer::{gcd, lcm};
use num::rational::Ratio;
use num::{CheckedAdd, CheckedMul, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of ℚ/ℤ stored as its canonical representative `num/den` in `[0, 1)`.
///
/// `gcd(num, den) == 1` and `num < den` always hold; zero is `0/1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FracQZ {
    num: u64,
    den: u64,
}

impl FracQZ {
    pub const ZERO: FracQZ = FracQZ { num: 0, den: 1 };
    pub const HALF: FracQZ = FracQZ { num: 1, den: 2 };

    /// Canonical representative of `num/den` modulo 1.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidInput(format!(
                "denominator must be positive, got {den}"
            )));
        }
        let r = num.rem_euclid(den) as u64;
        Ok(Self::from_reduced_parts(r, den as u64))
    }

    // `num < den` is assumed; only the gcd is divided out.
    fn from_reduced_parts(num: u64, den: u64) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let g = gcd(num, den);
        FracQZ {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Order of the element in ℚ/ℤ, i.e. the canonical denominator.
    pub fn order(self) -> u64 {
        self.den
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        if self.num == 0 {
            self
        } else {
            FracQZ {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Result<Self> {
        let l = lcm(self.den, other.den);
        let a = self
            .num
            .checked_mul(l / self.den)
            .ok_or(Error::Overflow("frac_add"))?;
        let b = other
            .num
            .checked_mul(l / other.den)
            .ok_or(Error::Overflow("frac_add"))?;
        // a, b < l so a + b < 2l fits whenever l does
        let s = a.checked_add(b).ok_or(Error::Overflow("frac_add"))?;
        Ok(Self::from_reduced_parts(s % l, l))
    }

    /// Canonical form of `k * self`.
    pub fn scale(self, k: i64) -> Result<Self> {
        let k = k.rem_euclid(self.den as i64) as u64;
        let p = self
            .num
            .checked_mul(k)
            .ok_or(Error::Overflow("frac_scale"))?;
        Ok(Self::from_reduced_parts(p % self.den, self.den))
    }

    /// The value as an exact rational in `[0, 1)`.
    pub fn to_ratio(self) -> Ratio<i64> {
        Ratio::new_raw(self.num as i64, self.den as i64)
    }
}

/// Free-function spelling of [`FracQZ::new`].
pub fn frac_canon(num: i64, den: i64) -> Result<FracQZ> {
    FracQZ::new(num, den)
}

pub fn frac_neg(x: FracQZ) -> FracQZ {
    x.neg()
}

pub fn frac_add(x: FracQZ, y: FracQZ) -> Result<FracQZ> {
    x.add(y)
}

pub fn frac_scale(x: FracQZ, k: i64) -> Result<FracQZ> {
    x.scale(k)
}

pub fn order(x: FracQZ) -> u64 {
    x.order()
}

impl Ord for FracQZ {
    fn cmp(&self, other: &Self) -> Ordering {
        // num/den compared by cross-multiplication; den < 2^63 in practice, use u128 anyway
        let l = self.num as u128 * other.den as u128;
        let r = other.num as u128 * self.den as u128;
        l.cmp(&r).then(self.den.cmp(&other.den))
    }
}

impl PartialOrd for FracQZ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FracQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for FracQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FracQZ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i64 = n
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad numerator {n:?}")))?;
        let den: i64 = d
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad denominator {d:?}")))?;
        FracQZ::new(num, den)
    }
}

impl Serialize for FracQZ {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", self.num, self.den))
    }
}

impl<'de> Deserialize<'de> for FracQZ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `S_n`: the residues in `(0, n)` prime to `n`. Empty for `n = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitsSet {
    n: u64,
    elements: Vec<u64>,
}

impl UnitsSet {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.iter().copied()
    }
}

fn require_positive(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidInput(format!("{what} requires n >= 1")))
    } else {
        Ok(())
    }
}

/// Prime factorization by trial division, ascending primes with exponents.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn totient(n: u64) -> Result<u64> {
    require_positive(n, "totient")?;
    Ok(factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1)))
}

/// Largest squarefree divisor of `n`.
pub fn radical(n: u64) -> Result<u64> {
    require_positive(n, "radical")?;
    Ok(factorize(n).into_iter().map(|(p, _)| p).product())
}

/// Number of distinct prime divisors of `n`.
pub fn omega(n: u64) -> Result<u32> {
    require_positive(n, "omega")?;
    Ok(factorize(n).len() as u32)
}

pub fn units(n: u64) -> Result<UnitsSet> {
    require_positive(n, "units")?;
    let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
    let elements = (1..n)
        .filter(|x| primes.iter().all(|p| x % p != 0))
        .collect();
    Ok(UnitsSet { n, elements })
}

fn require_at_least_two(n: u64, what: &str) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidInput(format!(
            "{what} requires n >= 2, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// `Σ_{x ∈ S_n} min(x, n − x)`.
pub fn sum_min_units(n: u64) -> Result<u64> {
    require_at_least_two(n, "sum_min_units")?;
    units(n)?.iter().try_fold(0u64, |acc, x| {
        acc.checked_add(x.min(n - x))
            .ok_or(Error::Overflow("sum_min_units"))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMethod {
    Brute,
    Closed,
}

/// `Σ_{x ∈ S_n} x²`, either summed directly or from the Möbius closed form
/// `φ(n)n²/3 + (−1)^ω(n) φ(rad n) n/6`.
pub fn sum_squares_units(n: u64, method: SumMethod) -> Result<u64> {
    require_at_least_two(n, "sum_squares_units")?;
    match method {
        SumMethod::Brute => units(n)?.iter().try_fold(0u64, |acc, x| {
            x.checked_mul(x)
                .and_then(|sq| acc.checked_add(sq))
                .ok_or(Error::Overflow("sum_squares_units"))
        }),
        SumMethod::Closed => sum_squares_closed(n),
    }
}

fn sum_squares_closed(n: u64) -> Result<u64> {
    let overflow = || Error::Overflow("sum_squares_units");
    let phi = Ratio::from_integer(totient(n)? as i128);
    let phi_rad = Ratio::from_integer(totient(radical(n)?)? as i128);
    let n_r = Ratio::from_integer(n as i128);
    let sign = if omega(n)? % 2 == 0 { 1 } else { -1 };

    let main = phi
        .checked_mul(&n_r)
        .and_then(|v| v.checked_mul(&n_r))
        .and_then(|v| v.checked_mul(&Ratio::new(1, 3)))
        .ok_or_else(overflow)?;
    let correction = phi_rad
        .checked_mul(&n_r)
        .and_then(|v| v.checked_mul(&Ratio::new(sign, 6)))
        .ok_or_else(overflow)?;
    let total = main.checked_add(&correction).ok_or_else(overflow)?;

    if !total.is_integer() {
        return Err(Error::Consistency(format!(
            "closed-form sum of squares for n = {n} is {total}, not an integer"
        )));
    }
    total
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Consistency(format!("negative sum of squares for n = {n}")))
}

/// Largest `n` with `φ(n) ≤ bound`.
///
/// If `φ(n) ≤ bound` then every prime power `p^e ∥ n` has `p^(e−1)(p − 1) ≤ bound`,
/// so the search runs over products of such prime powers only.
pub fn max_n_with_phi_le(bound: u64) -> Result<u64> {
    if bound == 0 {
        return Err(Error::InvalidInput("bound must be >= 1".into()));
    }
    let prime_powers: Vec<Vec<(u64, u64)>> = (2..=bound + 1)
        .filter(|&p| factorize(p).len() == 1 && factorize(p)[0].1 == 1)
        .map(|p| {
            // (p^e, φ(p^e)) for every admissible e ≥ 1
            let mut powers = Vec::new();
            let (mut pe, mut phi) = (p, p - 1);
            while phi <= bound {
                powers.push((pe, phi));
                match (pe.checked_mul(p), phi.checked_mul(p)) {
                    (Some(a), Some(b)) => (pe, phi) = (a, b),
                    _ => break,
                }
            }
            powers
        })
        .collect();

    fn search(
        primes: &[Vec<(u64, u64)>],
        n: u64,
        phi: u64,
        bound: u64,
        best: &mut u64,
    ) -> Result<()> {
        let Some((head, rest)) = primes.split_first() else {
            *best = (*best).max(n);
            return Ok(());
        };
        search(rest, n, phi, bound, best)?;
        for &(pe, phi_pe) in head {
            let next_phi = phi
                .checked_mul(phi_pe)
                .ok_or(Error::Overflow("max_n_with_phi_le"))?;
            if next_phi > bound {
                break;
            }
            let next_n = n
                .checked_mul(pe)
                .ok_or(Error::Overflow("max_n_with_phi_le"))?;
            search(rest, next_n, next_phi, bound, best)?;
        }
        Ok(())
    }

    let mut best = 1;
    search(&prime_powers, 1, 1, bound, &mut best)?;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64, d: i64) -> FracQZ {
        FracQZ::new(n, d).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(f(5, 15), f(1, 3));
        assert_eq!((f(5, 15).num(), f(5, 15).den()), (1, 3));
        assert_eq!(f(9, 2), f(1, 2));
        assert_eq!(f(-1, 3), f(2, 3));
        assert_eq!(f(4, 4), FracQZ::ZERO);
        assert_eq!(f(0, 7).den(), 1);
    }

    #[test]
    fn zero_or_negative_denominator() {
        assert!(matches!(FracQZ::new(1, 0), Err(Error::InvalidInput(_))));
        assert!(matches!(FracQZ::new(1, -3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn group_operations() {
        assert_eq!(frac_neg(f(1, 3)), f(2, 3));
        assert_eq!(frac_neg(FracQZ::ZERO), FracQZ::ZERO);
        assert_eq!(frac_scale(f(5, 6), 3).unwrap(), f(1, 2));
        assert_eq!(frac_scale(f(1, 7), 2).unwrap(), f(2, 7));
        assert_eq!(frac_scale(f(1, 7), -1).unwrap(), f(6, 7));
        assert_eq!(frac_add(f(1, 3), f(1, 6)).unwrap(), f(1, 2));
        assert_eq!(frac_add(f(2, 3), f(1, 3)).unwrap(), FracQZ::ZERO);
    }

    #[test]
    fn orders() {
        assert_eq!(order(FracQZ::ZERO), 1);
        assert_eq!(order(f(1, 2)), 2);
        assert_eq!(order(f(7, 12)), 12);
    }

    #[test]
    fn scale_overflow_is_reported() {
        let big = f(i64::MAX - 1, i64::MAX);
        assert_eq!(big.scale(i64::MAX - 2), Err(Error::Overflow("frac_scale")));
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(totient(90).unwrap(), 24);
        assert_eq!(totient(1).unwrap(), 1);
        assert_eq!(radical(12).unwrap(), 6);
        assert_eq!(omega(12).unwrap(), 2);
        assert_eq!(radical(1).unwrap(), 1);
        assert_eq!(omega(1).unwrap(), 0);
        assert_eq!(units(7).unwrap().elements(), &[1, 2, 3, 4, 5, 6]);
        assert!(units(1).unwrap().is_empty());
        assert!(totient(0).is_err());
        assert!(radical(0).is_err());
        assert!(units(0).is_err());
    }

    #[test]
    fn units_cardinality_is_totient() {
        for n in 2..500 {
            assert_eq!(
                units(n).unwrap().len() as u64,
                totient(n).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn min_sums() {
        // S_7 = {1..6}: 1+2+3+3+2+1
        assert_eq!(sum_min_units(7).unwrap(), 12);
        assert_eq!(sum_min_units(2).unwrap(), 1);
        assert!(sum_min_units(1).is_err());
    }

    #[test]
    fn square_sums() {
        assert_eq!(sum_squares_units(12, SumMethod::Brute).unwrap(), 196);
        assert_eq!(sum_squares_units(12, SumMethod::Closed).unwrap(), 196);
        assert_eq!(sum_squares_units(2, SumMethod::Brute).unwrap(), 1);
        assert_eq!(sum_squares_units(2, SumMethod::Closed).unwrap(), 1);
        for n in 2..2000 {
            assert_eq!(
                sum_squares_units(n, SumMethod::Brute).unwrap(),
                sum_squares_units(n, SumMethod::Closed).unwrap(),
                "n = {n}"
            );
        }
    }

    fn max_n_brute(bound: u64, limit: u64) -> u64 {
        (1..=limit)
            .filter(|&n| totient(n).unwrap() <= bound)
            .max()
            .unwrap()
    }

    #[test]
    fn max_n_matches_brute_force() {
        assert_eq!(max_n_with_phi_le(24).unwrap(), 90);
        assert_eq!(max_n_with_phi_le(1).unwrap(), 2);
        assert_eq!(max_n_with_phi_le(2).unwrap(), 6);
        // φ(n) ≥ sqrt(n/2), so n ≤ 2·bound² bounds the brute search
        for bound in 1..=40 {
            assert_eq!(
                max_n_with_phi_le(bound).unwrap(),
                max_n_brute(bound, 2 * bound * bound + 2),
                "bound = {bound}"
            );
        }
        assert!(max_n_with_phi_le(0).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("4/12".parse::<FracQZ>().unwrap(), f(1, 3));
        assert_eq!(" -1 / 3 ".parse::<FracQZ>().unwrap(), f(2, 3));
        assert_eq!("0".parse::<FracQZ>().unwrap(), FracQZ::ZERO);
        assert_eq!(f(3, 8).to_string(), "3/8");
        assert_eq!(FracQZ::ZERO.to_string(), "0");
        assert!("1/0".parse::<FracQZ>().is_err());
    }

    #[test]
    fn ordering_is_by_value() {
        let mut v = vec![f(1, 2), f(1, 12), f(1, 3), FracQZ::ZERO, f(5, 12)];
        v.sort();
        assert_eq!(v, vec![FracQZ::ZERO, f(1, 12), f(1, 3), f(5, 12), f(1, 2)]);
    }
}
