//! Truncated power series over exact rationals, and Betti numbers of
//! symmetric products.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A power series known through `z^order`. Arithmetic results carry the
/// smaller order of their operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coefficients: Vec<Rational>,
}

impl TruncatedSeries {
    /// Builds a series from its leading coefficients, padding with zeros or
    /// dropping terms beyond `order`.
    pub fn new(mut coefficients: Vec<Rational>, order: usize) -> Self {
        coefficients.resize(order + 1, Rational::zero());
        TruncatedSeries { coefficients }
    }

    pub fn from_integers(coefficients: &[i64], order: usize) -> Self {
        Self::new(coefficients.iter().map(|&c| rational::int(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![Rational::one()], order)
    }

    /// `1 + c·z^k`.
    pub fn binomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::one(order);
        if k <= order {
            s.coefficients[k] += c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Coefficient of `z^i`; `None` beyond the known order.
    pub fn coefficient(&self, i: usize) -> Option<&Rational> {
        self.coefficients.get(i)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::new(
            (0..=order).map(|i| &self.coefficients[i] + &other.coefficients[i]).collect(),
            order,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::new(
            (0..=order).map(|i| &self.coefficients[i] - &other.coefficients[i]).collect(),
            order,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coefficients.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coefficients: out }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coefficients[0];
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = a0.recip();
        let order = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for k in 1..=order {
            let s: Rational = (1..=k).map(|j| &self.coefficients[j] * &out[k - j]).sum();
            out.push(-s * &inv0);
        }
        Ok(TruncatedSeries { coefficients: out })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "order": self.order(),
            "coefficients": self.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] + O(z^{})", parts.join(", "), self.order() + 1)
    }
}

/// Betti numbers `B_0, ..., B_m` of a connected space, with `B_0 = 1` and
/// `B_m` the top nonzero entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BettiProfile {
    betti: Vec<u64>,
}

impl BettiProfile {
    pub fn new(mut betti: Vec<u64>) -> Result<Self> {
        while betti.len() > 1 && betti.last() == Some(&0) {
            betti.pop();
        }
        match betti.first() {
            Some(1) => Ok(BettiProfile { betti }),
            Some(b) => Err(Error::InvalidBetti(format!(
                "B_0 must be 1 for a connected space, got {b}"
            ))),
            None => Err(Error::InvalidBetti("empty Betti profile".into())),
        }
    }

    /// Parses a comma-separated list such as `1,0,1`.
    pub fn parse(text: &str) -> Result<Self> {
        let betti = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidBetti(format!("not a Betti number: {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(betti)
    }

    pub fn betti(&self) -> &[u64] {
        &self.betti
    }

    /// `B_j`, zero above the top degree.
    pub fn get(&self, j: usize) -> u64 {
        self.betti.get(j).copied().unwrap_or(0)
    }

    /// Top nonzero degree `m`.
    pub fn top_degree(&self) -> usize {
        self.betti.len() - 1
    }

    /// `C = max_j B_j`.
    pub fn max_betti(&self) -> u64 {
        self.betti.iter().copied().max().unwrap_or(0)
    }

    pub fn has_odd_betti(&self) -> bool {
        self.betti.iter().skip(1).step_by(2).any(|&b| b > 0)
    }
}

impl fmt::Display for BettiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.betti.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut v = BigUint::one();
    for i in 0..k {
        v = v * (n - i) / (i + 1);
    }
    v
}

/// `dim` of the degree-`a` graded-symmetric power of a `b`-dimensional space
/// concentrated in degree `j`.
fn graded_sym_dim(b: u64, j: usize, a: u64) -> BigUint {
    if j % 2 == 1 {
        binomial(b, a)
    } else if a == 0 {
        BigUint::one()
    } else {
        binomial(b + a - 1, a)
    }
}

/// `b_i(Sym^n X)` for `X` with Betti profile `B`.
///
/// Sums `Π_j dim Sym^{a_j}(H^j X)` over `(a_1, ..., a_m)` with
/// `Σ j·a_j = i` and `Σ a_j ≤ n`, symmetric powers being graded.
pub fn sym_betti(b: &BettiProfile, i: u32, n: u32) -> BigUint {
    fn go(b: &BettiProfile, j: usize, remaining_degree: u64, remaining_points: u64) -> BigUint {
        if remaining_degree == 0 {
            return BigUint::one();
        }
        if j > b.top_degree() {
            return BigUint::zero();
        }
        let mut total = BigUint::zero();
        let mut a = 0u64;
        while a * j as u64 <= remaining_degree && a <= remaining_points {
            let dim = graded_sym_dim(b.get(j), j, a);
            if !dim.is_zero() {
                total += dim * go(b, j + 1, remaining_degree - a * j as u64, remaining_points - a);
            }
            a += 1;
        }
        total
    }
    go(b, 1, i as u64, n as u64)
}

/// `Σ_i b_i(Sym^i X) z^i` through `z^order`, as the product
/// `Π_{j odd} (1+z^j)^{B_j} / Π_{j even} (1-z^j)^{B_j}`.
pub fn diag_series(b: &BettiProfile, order: usize) -> TruncatedSeries {
    let mut numerator = TruncatedSeries::one(order);
    let mut denominator = TruncatedSeries::one(order);
    for j in 1..=b.top_degree() {
        let bj = b.get(j) as u32;
        if bj == 0 {
            continue;
        }
        if j % 2 == 1 {
            numerator = numerator.mul(&TruncatedSeries::binomial(Rational::one(), j, order).pow(bj));
        } else {
            denominator =
                denominator.mul(&TruncatedSeries::binomial(-Rational::one(), j, order).pow(bj));
        }
    }
    let series = numerator.mul(&denominator.inverse().expect("constant term is 1"));
    debug_assert!(series.coefficients().iter().all(|c| c.is_integer()));
    series
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coefficients()
            .iter()
            .map(|c| i64::try_from(c.to_integer()).unwrap())
            .collect()
    }

    #[test]
    fn arithmetic() {
        let one_minus_z = TruncatedSeries::from_integers(&[1, -1], 4);
        assert_eq!(ints(&one_minus_z.inverse().unwrap()), vec![1, 1, 1, 1, 1]);
        let one_plus_z = TruncatedSeries::from_integers(&[1, 1], 2);
        assert_eq!(ints(&one_plus_z.pow(2)), vec![1, 2, 1]);
        let a = TruncatedSeries::from_integers(&[1, 0, -1], 3).inverse().unwrap();
        let b = TruncatedSeries::from_integers(&[1, 1], 3);
        assert_eq!(ints(&a.mul(&b)), vec![1, 1, 1, 1]);
        assert_eq!(
            TruncatedSeries::from_integers(&[0, 1], 3).inverse(),
            Err(Error::NotInvertible)
        );
    }

    #[test]
    fn order_is_minimum() {
        let a = TruncatedSeries::from_integers(&[1, 1, 1], 5);
        let b = TruncatedSeries::from_integers(&[1, 1], 2);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!(a.add(&b).order(), 2);
        assert_eq!(a.add(&b).coefficient(3), None);
    }

    #[test]
    fn inverse_roundtrip() {
        let s = TruncatedSeries::new(vec![int(2), int(3), rational::ratio(1, 2), int(-7)], 6);
        let prod = s.mul(&s.inverse().unwrap());
        assert_eq!(prod, TruncatedSeries::one(6));
    }

    #[test]
    fn betti_profile_validation() {
        assert!(BettiProfile::new(vec![2, 1]).is_err());
        assert!(BettiProfile::new(vec![]).is_err());
        assert_eq!(BettiProfile::new(vec![1, 0, 1, 0, 0]).unwrap().top_degree(), 2);
        assert_eq!(BettiProfile::parse("1, 0, 1").unwrap().betti(), &[1, 0, 1]);
        assert!(BettiProfile::parse("1,x").is_err());
        assert!(BettiProfile::parse("1,2").unwrap().has_odd_betti());
        assert!(!BettiProfile::parse("1,0,3").unwrap().has_odd_betti());
    }

    #[test]
    fn sym_betti_examples() {
        let p1 = BettiProfile::parse("1,0,1").unwrap();
        assert_eq!(sym_betti(&p1, 4, 3), BigUint::from(1u32));
        assert_eq!(sym_betti(&p1, 8, 3), BigUint::zero());
        assert_eq!(sym_betti(&p1, 3, 3), BigUint::zero());
        let b = BettiProfile::parse("1,2").unwrap();
        assert_eq!(sym_betti(&b, 1, 2), BigUint::from(2u32));
        assert_eq!(sym_betti(&b, 0, 5), BigUint::one());
        // Sym^2 of a wedge of two circles: Λ^2 of a rank-2 space in degree 2
        assert_eq!(sym_betti(&b, 2, 2), BigUint::one());
    }

    #[test]
    fn diag_examples() {
        let p1 = BettiProfile::parse("1,0,1").unwrap();
        assert_eq!(ints(&diag_series(&p1, 6)), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(ints(&diag_series(&BettiProfile::parse("1").unwrap(), 3)), vec![1, 0, 0, 0]);
        assert_eq!(ints(&diag_series(&BettiProfile::parse("1,1").unwrap(), 3)), vec![1, 1, 0, 0]);
    }

    #[test]
    fn json_shape() {
        let s = TruncatedSeries::from_integers(&[1, 2], 2);
        assert_eq!(
            s.to_json(),
            serde_json::json!({"order": 2, "coefficients": ["1", "2", "0"]})
        );
    }
}
