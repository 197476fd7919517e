//! Partitions, conjugacy classes and irreducible characters of `S_n`.
//!
//! A [`Partition`] of `n` plays three roles: an irreducible representation
//! (via the Murnaghan–Nakayama rule), a conjugacy class (cycle type), and the
//! vector of cycle counts `X_j(σ)` read off that class.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// An integer partition, stored with parts weakly decreasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", try_from = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from parts in any order; zero parts are dropped.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The identity class `(1^n)`.
    pub fn ones(n: u32) -> Self {
        Partition(vec![1; n as usize])
    }

    /// The cycle type of a permutation of `{0, .., len-1}` given in one-line
    /// notation.
    pub fn cycle_type(perm: &[usize]) -> Self {
        let mut seen = vec![false; perm.len()];
        let mut parts = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            parts.push(len);
        }
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of parts equal to `j`; as a cycle type, the value `X_j(σ)`.
    pub fn multiplicity(&self, j: u32) -> u32 {
        self.0.iter().filter(|&&p| p == j).count() as u32
    }

    /// `z_λ = Π_j j^{a_j} a_j!`, the order of the centralizer.
    pub fn z(&self) -> BigUint {
        let mut z = BigUint::one();
        let mut i = 0;
        while i < self.0.len() {
            let part = self.0[i];
            let mut count = 0u32;
            while i < self.0.len() && self.0[i] == part {
                count += 1;
                z *= part;
                z *= count;
                i += 1;
            }
        }
        z
    }

    /// Multiset union of parts.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::new(parts)
    }

    /// Every part multiplied by `factor`.
    pub fn scaled(&self, factor: u32) -> Partition {
        Partition(self.0.iter().map(|p| p * factor).collect())
    }

    /// A permutation of `{0, .., n-1}` of this cycle type, with cycles on
    /// consecutive blocks in part order.
    pub fn representative(&self) -> Vec<usize> {
        let mut perm = Vec::with_capacity(self.size() as usize);
        let mut base = 0usize;
        for &part in &self.0 {
            let part = part as usize;
            for k in 0..part {
                perm.push(base + (k + 1) % part);
            }
            base += part;
        }
        perm
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "partition {parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition(parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// All partitions of `n` in reverse-lexicographic order: `(n)` first,
/// `(1^n)` last.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn go(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            go(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Size of the conjugacy class `λ`: `n!/z_λ`.
pub fn class_size(lambda: &Partition) -> BigUint {
    factorial(lambda.size()) / lambda.z()
}

/// `p(0), .., p(upto)` by Euler's pentagonal-number recurrence.
pub fn partition_counts(upto: u32) -> Vec<BigUint> {
    let upto = upto as usize;
    let mut p: Vec<BigInt> = Vec::with_capacity(upto + 1);
    p.push(BigInt::one());
    for n in 1..=upto {
        let mut total = BigInt::zero();
        for k in 1.. {
            let k = k as usize;
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = p[n - g1].clone();
            if g2 <= n {
                term += &p[n - g2];
            }
            if k % 2 == 1 {
                total += term;
            } else {
                total -= term;
            }
        }
        p.push(total);
    }
    p.into_iter()
        .map(|v| v.to_biguint().expect("partition counts are positive"))
        .collect()
}

/// The number of partitions `p(i)`.
pub fn partition_count(i: u32) -> BigUint {
    partition_counts(i).pop().expect("nonempty")
}

thread_local! {
    static MN_MEMO: RefCell<HashMap<(Partition, Partition), i64>> = RefCell::new(HashMap::new());
}

/// Value of the irreducible character `χ^λ` on the class `μ`.
pub fn irreducible_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!(
            "|λ| = {} but |μ| = {}",
            lambda.size(),
            mu.size()
        )));
    }
    Ok(murnaghan_nakayama(lambda, mu))
}

// Rim hooks are removed through beta-numbers: a hook of length k is a bead
// moved from position b to the free position b - k, with sign given by the
// parity of the beads jumped over. μ is consumed from its largest part.
fn murnaghan_nakayama(lambda: &Partition, mu: &Partition) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (lambda.clone(), mu.clone());
    if let Some(v) = MN_MEMO.with(|m| m.borrow().get(&key).copied()) {
        return v;
    }

    let hook = mu.0[0];
    let rest = Partition(mu.0[1..].to_vec());
    let len = lambda.len() as u32;
    let beta: Vec<u32> = lambda
        .0
        .iter()
        .enumerate()
        .map(|(i, &part)| part + len - 1 - i as u32)
        .collect();

    let mut total = 0i64;
    for (i, &b) in beta.iter().enumerate() {
        if b < hook {
            continue;
        }
        let target = b - hook;
        if beta.contains(&target) {
            continue;
        }
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<u32> = next
            .iter()
            .enumerate()
            .map(|(k, &x)| x - (len - 1 - k as u32))
            .collect();
        let value = murnaghan_nakayama(&Partition::new(parts), &rest);
        if jumped % 2 == 0 {
            total += value;
        } else {
            total -= value;
        }
    }

    MN_MEMO.with(|m| m.borrow_mut().insert(key, total));
    total
}

/// A rational-valued class function on `S_n`, stored on every partition of
/// `n` in the canonical reverse-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    n: u32,
    classes: Vec<Partition>,
    values: Vec<Rational>,
}

impl ClassFunction {
    pub fn from_fn(n: u32, mut f: impl FnMut(&Partition) -> Rational) -> Self {
        let classes = partitions_of(n);
        let values = classes.iter().map(&mut f).collect();
        Self { n, classes, values }
    }

    /// Fallible variant of [`ClassFunction::from_fn`].
    pub fn try_from_fn(n: u32, mut f: impl FnMut(&Partition) -> Result<Rational>) -> Result<Self> {
        let classes = partitions_of(n);
        let values = classes.iter().map(&mut f).collect::<Result<_>>()?;
        Ok(Self { n, classes, values })
    }

    pub fn constant(n: u32, value: Rational) -> Self {
        Self::from_fn(n, |_| value.clone())
    }

    /// The irreducible character `χ^λ` as a class function.
    pub fn irreducible(lambda: &Partition) -> Self {
        Self::from_fn(lambda.size(), |mu| rational::int(murnaghan_nakayama(lambda, mu)))
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn get(&self, mu: &Partition) -> Option<&Rational> {
        // classes are sorted in descending order
        self.classes
            .binary_search_by(|c| mu.cmp(c))
            .ok()
            .map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.classes.iter().zip(self.values.iter())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Pointwise product (the character of a tensor product).
    pub fn pointwise_mul(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_level(other)?;
        Ok(Self {
            n: self.n,
            classes: self.classes.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    fn check_level(&self, other: &ClassFunction) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LevelMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// JSON object keyed by the partition text, e.g. `{"[2,1]": "0"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map = self
            .iter()
            .map(|(mu, v)| (mu.to_string(), serde_json::Value::String(v.to_string())))
            .collect::<serde_json::Map<_, _>>();
        serde_json::Value::Object(map)
    }
}

/// `⟨f, g⟩ = Σ_{μ ⊢ n} f(μ) g(μ) / z_μ`.
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Result<Rational> {
    f.check_level(g)?;
    Ok(f.iter()
        .zip(g.values())
        .map(|((mu, a), b)| a * b / rational::from_biguint(&mu.z()))
        .sum())
}

/// Average of `f` over the Young subgroup `S_{n-a} × 1` fixing the last `a`
/// points: `Σ_{ν ⊢ n-a} f(ν ∪ 1^a) / z_ν`.
pub fn restricted_average(f: &ClassFunction, a: u32) -> Result<Rational> {
    let n = f.level();
    if a > n {
        return Err(Error::InvalidArgument(format!("a = {a} exceeds n = {n}")));
    }
    let fixed = Partition::ones(a);
    Ok(partitions_of(n - a)
        .iter()
        .map(|nu| {
            let value = f.get(&nu.union(&fixed)).expect("total class function");
            value / rational::from_biguint(&nu.z())
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for perm in all_perms(n - 1) {
            for pos in 0..n {
                let mut next: Vec<usize> = perm.clone();
                next.insert(pos, n - 1);
                out.push(next);
            }
        }
        out
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(5).len(), 7);
        assert_eq!(
            partitions_of(4),
            vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]
        );
    }

    // brute force: count weakly decreasing sequences directly
    fn count_partitions_brute(n: u32, max: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=n.min(max)).map(|k| count_partitions_brute(n - k, k)).sum()
    }

    #[test]
    fn pentagonal_recurrence_matches_enumeration() {
        let counts = partition_counts(40);
        for i in 0..=40 {
            assert_eq!(counts[i as usize], BigUint::from(count_partitions_brute(i, i)));
            if i <= 25 {
                assert_eq!(partitions_of(i).len() as u64, count_partitions_brute(i, i));
            }
        }
        assert_eq!(partition_count(0), BigUint::from(1u32));
        assert_eq!(partition_count(5), BigUint::from(7u32));
        assert_eq!(partition_count(100), BigUint::from(190_569_292u64));
    }

    #[test]
    fn class_sizes() {
        assert_eq!(class_size(&Partition::ones(5)), BigUint::from(1u32));
        assert_eq!(class_size(&p(&[2, 1])), BigUint::from(3u32));
        for n in 1..=12 {
            let total: BigUint = partitions_of(n).iter().map(class_size).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn class_sizes_match_permutation_counts() {
        for n in 1..=7usize {
            let mut counts: HashMap<Partition, u64> = HashMap::new();
            for perm in all_perms(n) {
                *counts.entry(Partition::cycle_type(&perm)).or_default() += 1;
            }
            for (mu, count) in counts {
                assert_eq!(class_size(&mu), BigUint::from(count), "class {mu}");
            }
            // n-cycles: (n-1)!
            assert_eq!(class_size(&p(&[n as u32])), factorial(n as u32 - 1));
        }
    }

    #[test]
    fn character_values_of_s3() {
        let std = p(&[2, 1]);
        let classes = [p(&[1, 1, 1]), p(&[2, 1]), p(&[3])];
        let values: Vec<i64> = classes
            .iter()
            .map(|mu| irreducible_character(&std, mu).unwrap())
            .collect();
        assert_eq!(values, vec![2, 0, -1]);
        assert_eq!(irreducible_character(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap(), -1);
        for mu in partitions_of(6) {
            assert_eq!(irreducible_character(&p(&[6]), &mu).unwrap(), 1);
        }
        assert!(irreducible_character(&p(&[2]), &p(&[1, 1, 1])).is_err());
    }

    // Standard representation of S_3 from permutation matrices: the
    // permutation character minus the trivial one.
    #[test]
    fn standard_character_from_permutation_matrices() {
        for perm in all_perms(3) {
            let fixed = perm.iter().enumerate().filter(|(i, &x)| *i == x).count() as i64;
            let mu = Partition::cycle_type(&perm);
            assert_eq!(irreducible_character(&p(&[2, 1]), &mu).unwrap(), fixed - 1);
        }
    }

    fn hook_length_dimension(lambda: &Partition) -> BigUint {
        let parts = lambda.parts();
        let mut hooks = BigUint::one();
        for (i, &row) in parts.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row as usize - j - 1;
                let leg = parts[i + 1..].iter().filter(|&&r| r as usize > j).count();
                hooks *= arm + leg + 1;
            }
        }
        factorial(lambda.size()) / hooks
    }

    #[test]
    fn column_orthogonality_and_dimensions() {
        for n in 1..=7 {
            let parts = partitions_of(n);
            for mu in &parts {
                let sum: i64 = parts
                    .iter()
                    .map(|lambda| irreducible_character(lambda, mu).unwrap().pow(2))
                    .sum();
                assert_eq!(BigUint::from(sum as u64), mu.z(), "n={n} μ={mu}");
            }
            for lambda in &parts {
                let dim = irreducible_character(lambda, &Partition::ones(n)).unwrap();
                assert_eq!(BigUint::from(dim as u64), hook_length_dimension(lambda));
            }
        }
    }

    #[test]
    fn inner_products() {
        for n in 1..=6 {
            for lambda in partitions_of(n) {
                let chi = ClassFunction::irreducible(&lambda);
                assert_eq!(inner_product(&chi, &chi).unwrap(), int(1));
            }
        }
        let a = ClassFunction::irreducible(&p(&[2, 1]));
        let b = ClassFunction::irreducible(&p(&[3]));
        assert_eq!(inner_product(&a, &b).unwrap(), int(0));

        // X1 at n = 4, against a sum over all 24 permutations
        let x1 = ClassFunction::from_fn(4, |mu| int(mu.multiplicity(1)));
        let brute: i64 = all_perms(4)
            .iter()
            .map(|perm| {
                let f = perm.iter().enumerate().filter(|(i, &x)| *i == x).count() as i64;
                f * f
            })
            .sum();
        assert_eq!(inner_product(&x1, &x1).unwrap(), ratio(brute, 24));
        assert_eq!(inner_product(&x1, &x1).unwrap(), int(2));

        let other = ClassFunction::constant(3, int(1));
        assert_eq!(
            inner_product(&x1, &other),
            Err(Error::LevelMismatch { left: 4, right: 3 })
        );
    }

    #[test]
    fn representatives_have_their_cycle_type() {
        for n in 0..=8 {
            for mu in partitions_of(n) {
                assert_eq!(Partition::cycle_type(&mu.representative()), mu);
            }
        }
    }

    #[test]
    fn serde_as_array() {
        let mu = p(&[2, 1]);
        assert_eq!(serde_json::to_string(&mu).unwrap(), "[2,1]");
        let back: Partition = serde_json::from_str("[3,1,1]").unwrap();
        assert_eq!(back, p(&[3, 1, 1]));
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
        assert_eq!(mu.to_string(), "[2,1]");
    }

    #[test]
    fn restricted_average_counts_invariants() {
        // permutation character of S_3 on points, restricted to S_2: 2 orbits
        let perm = ClassFunction::from_fn(3, |mu| int(mu.multiplicity(1)));
        assert_eq!(restricted_average(&perm, 1).unwrap(), int(2));
        assert_eq!(restricted_average(&perm, 0).unwrap(), int(1));
        assert_eq!(restricted_average(&perm, 3).unwrap(), int(3));
    }
}
