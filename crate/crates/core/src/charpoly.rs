//! Character polynomials: elements of `Q[X1, X2, ...]`, where `X_j` counts the
//! `j`-cycles of a permutation. Graded by `deg X_j = j`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::symmetric::{partitions_of, ClassFunction, Partition};

/// Exponent vector: entry `j-1` is the exponent of `X_j`. Never has trailing
/// zeros, so the constant monomial is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Weighted degree `Σ j·e_j`.
    pub fn weighted_degree(&self) -> u32 {
        self.0.iter().enumerate().map(|(i, e)| (i as u32 + 1) * e).sum()
    }

    /// Ordinary degree `Σ e_j`.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        Monomial(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    fn evaluate(&self, counts: &[u32]) -> Rational {
        let mut value = Rational::one();
        for (i, &e) in self.0.iter().enumerate() {
            let x = counts.get(i).copied().unwrap_or(0);
            value *= rational::int(num_traits::pow(num_bigint::BigInt::from(x), e as usize));
        }
        value
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "X{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A polynomial in the cycle-count variables with exact rational
/// coefficients. No zero coefficient is ever stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CharacterPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl CharacterPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_terms([(Monomial::default(), c)])
    }

    /// The variable `X_j` (`j ≥ 1`).
    pub fn var(j: u32) -> Self {
        assert!(j >= 1, "cycle-count variables start at X1");
        let mut e = vec![0; j as usize];
        e[j as usize - 1] = 1;
        Self::from_terms([(Monomial::new(e), Rational::one())])
    }

    /// The binomial `C(X_j, k) = X_j(X_j - 1)...(X_j - k + 1) / k!`.
    pub fn binomial(j: u32, k: u32) -> Self {
        let mut p = Self::one();
        let x = Self::var(j);
        for i in 0..k {
            p = &p * &(&x - &Self::constant(rational::int(i)));
            p = p.scale(&rational::ratio(1, i as i64 + 1));
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            // re-lookup to remove; the entry borrow has ended
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .expect("zero entry present");
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Weighted degree, `deg X_j = j`.
    pub fn degree(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(Monomial::weighted_degree)
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    /// The polynomial with every coefficient replaced by its absolute value.
    pub fn abs_coefficients(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.abs())))
    }

    /// Substitutes `X_j ↦ multiplicity of j in μ`.
    pub fn evaluate(&self, mu: &Partition) -> Rational {
        let top = self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0);
        let counts: Vec<u32> = (1..=top as u32).map(|j| mu.multiplicity(j)).collect();
        self.evaluate_counts(&counts)
    }

    /// Evaluates at an explicit cycle-count vector (`counts[j-1] = X_j`).
    pub fn evaluate_counts(&self, counts: &[u32]) -> Rational {
        self.terms.iter().map(|(m, c)| c * m.evaluate(counts)).sum()
    }

    /// The class function on `S_n` defined by this polynomial.
    pub fn class_function(&self, n: u32) -> ClassFunction {
        ClassFunction::from_fn(n, |mu| self.evaluate(mu))
    }
}

impl fmt::Display for CharacterPolynomial {
    /// Canonical text: terms by descending total degree, then descending
    /// lexicographic exponent order; for example `1/2*X1^2 - 1/2*X1 + X2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            b.total_degree().cmp(&a.total_degree()).then_with(|| b.cmp(a))
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let constant = m.0.is_empty();
            let magnitude = if i == 0 { c.clone() } else { c.abs() };
            if i > 0 {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            if constant {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{magnitude}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &CharacterPolynomial {
    type Output = CharacterPolynomial;

    fn add(self, rhs: &CharacterPolynomial) -> CharacterPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &CharacterPolynomial {
    type Output = CharacterPolynomial;

    fn sub(self, rhs: &CharacterPolynomial) -> CharacterPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &CharacterPolynomial {
    type Output = CharacterPolynomial;

    fn neg(self) -> CharacterPolynomial {
        CharacterPolynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), -c)))
    }
}

impl Mul for &CharacterPolynomial {
    type Output = CharacterPolynomial;

    fn mul(self, rhs: &CharacterPolynomial) -> CharacterPolynomial {
        let mut out = CharacterPolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for CharacterPolynomial {
            type Output = CharacterPolynomial;

            fn $method(self, rhs: CharacterPolynomial) -> CharacterPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// `⟨P_n, Q_n⟩ = Σ_{μ ⊢ n} P(μ) Q(μ) / z_μ`.
pub fn inner_product_at(p: &CharacterPolynomial, q: &CharacterPolynomial, n: u32) -> Rational {
    partitions_of(n)
        .iter()
        .map(|mu| p.evaluate(mu) * q.evaluate(mu) / rational::from_biguint(&mu.z()))
        .sum()
}

/// The stable value of `⟨P_n, Q_n⟩`, reached once `n ≥ deg P + deg Q`.
///
/// Panics if the values at the three levels starting there disagree; that
/// can only be a bug in this crate.
pub fn stable_inner_product(p: &CharacterPolynomial, q: &CharacterPolynomial) -> Result<Rational> {
    let n = p.degree()? + q.degree()?;
    let value = inner_product_at(p, q, n);
    for extra in 1..=2 {
        assert_eq!(
            value,
            inner_product_at(p, q, n + extra),
            "inner product of {p} and {q} not stable at n = {}",
            n + extra
        );
    }
    Ok(value)
}

/// `X1 (X1 - 1) ... (X1 - a + 1)`, the character of `S_n` acting on ordered
/// `a`-tuples of distinct points.
pub fn falling_factorial_char(a: u32) -> CharacterPolynomial {
    let x = CharacterPolynomial::var(1);
    (0..a).fold(CharacterPolynomial::one(), |acc, i| {
        &acc * &(&x - &CharacterPolynomial::constant(rational::int(i)))
    })
}

/// One observation of a character value: level `n`, class `μ ⊢ n`, value.
pub type Sample = (u32, Partition, Rational);

/// A basis element `Π_j C(X_j, m_j)`, indexed by the partition with `m_j`
/// parts equal to `j`.
fn binomial_basis_element(nu: &Partition) -> CharacterPolynomial {
    let mut p = CharacterPolynomial::one();
    let mut j = 1;
    while j <= nu.size() {
        let m = nu.multiplicity(j);
        if m > 0 {
            p = &p * &CharacterPolynomial::binomial(j, m);
        }
        j += 1;
    }
    p
}

fn binomial_basis_name(nu: &Partition) -> String {
    if nu.is_empty() {
        return "1".to_string();
    }
    let mut factors = Vec::new();
    let mut parts: Vec<u32> = nu.parts().to_vec();
    parts.dedup();
    parts.reverse();
    for j in parts {
        factors.push(format!("C(X{j},{})", nu.multiplicity(j)));
    }
    factors.join("*")
}

fn binomial_value(x: u32, k: u32) -> Rational {
    let mut v = Rational::one();
    for i in 0..k {
        v *= rational::ratio(x as i64 - i as i64, i as i64 + 1);
    }
    v
}

/// Finds the unique character polynomial of weighted degree at most
/// `max_degree` agreeing with every sample.
///
/// The system is solved exactly in the basis `Π_j C(X_j, m_j)`; the answer is
/// returned in expanded form. Inconsistent samples give [`Error::NoFit`]; a
/// rank-deficient system gives [`Error::InsufficientSamples`] naming the
/// basis elements left free, rather than picking one solution.
pub fn fit_character_polynomial(samples: &[Sample], max_degree: u32) -> Result<CharacterPolynomial> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples to fit".into()));
    }
    for (n, mu, _) in samples {
        if mu.size() != *n {
            return Err(Error::SizeMismatch(format!("sample class {mu} is not a partition of {n}")));
        }
    }

    let basis: Vec<Partition> = (0..=max_degree).flat_map(partitions_of).collect();
    let cols = basis.len();

    // augmented rows [A | b]
    let mut rows: Vec<Vec<Rational>> = samples
        .iter()
        .map(|(_, mu, value)| {
            let mut row: Vec<Rational> = basis
                .iter()
                .map(|nu| {
                    let mut v = Rational::one();
                    let mut parts: Vec<u32> = nu.parts().to_vec();
                    parts.dedup();
                    for j in parts {
                        v *= binomial_value(mu.multiplicity(j), nu.multiplicity(j));
                    }
                    v
                })
                .collect();
            row.push(value.clone());
            row
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        pivots.push(col);
        rank += 1;
    }

    if rows[rank..].iter().any(|row| !row[cols].is_zero()) {
        return Err(Error::NoFit { degree: max_degree });
    }
    if rank < cols {
        let free = (0..cols)
            .filter(|c| !pivots.contains(c))
            .map(|c| binomial_basis_name(&basis[c]))
            .collect();
        return Err(Error::InsufficientSamples(free));
    }

    let mut result = CharacterPolynomial::zero();
    for (r, &col) in pivots.iter().enumerate() {
        let coefficient = &rows[r][cols];
        if !coefficient.is_zero() {
            result = &result + &binomial_basis_element(&basis[col]).scale(coefficient);
        }
    }
    Ok(result)
}
