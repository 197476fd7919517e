//! Finite fields, closed points of `A^r` and `P^1`, effective zero-cycles and
//! the averaged statistic `P(y)` on their points.
//!
//! Field elements are `u32` codes: the base-`p` digits of a code are the
//! coefficients (constant term first) of a polynomial reduced modulo the
//! field's defining polynomial. Codes `0` and `1` are zero and one.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::json;

use crate::charpoly::CharacterPolynomial;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rational::{self, Rational};
use crate::symmetric::{class_size, factorial, partitions_of, Partition};

/// Largest field (`p^d`) for which multiplication tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// `q = p^e` with `p` prime, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|k| q % k == 0)?;
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            while n % k == 0 {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Description of `F_{p^d}`: the characteristic, the degree and the monic
/// defining polynomial over `F_p` (coefficients constant term first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub d: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.d)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {}", self.p, self.d, poly_string(&self.modulus))
    }
}

/// Coefficient string, constant term first: `x^2 + 1` is `1,0,1`.
pub fn poly_string(coefficients: &[u32]) -> String {
    coefficients.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// The field `F_{p^d}` defined by the smallest monic irreducible polynomial
/// of degree `d` over `F_p`, ordering polynomials by `Σ c_i p^i`. For `d = 1`
/// the modulus is `x`.
pub fn build_field(p: u32, d: u32) -> Result<FieldSpec> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("field degree must be at least 1".into()));
    }
    if d == 1 {
        return Ok(FieldSpec { p, d, modulus: vec![0, 1] });
    }
    let prime = GaloisField::new(FieldSpec { p, d: 1, modulus: vec![0, 1] })?;
    let table = irreducible_table(&prime, d, &Limits::default())?;
    let modulus = table[d as usize].first().cloned().expect("irreducibles exist in every degree");
    Ok(FieldSpec { p, d, modulus })
}

/// Arithmetic in `F_{p^d}` through discrete log tables.
#[derive(Clone, Debug)]
pub struct GaloisField {
    spec: FieldSpec,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl GaloisField {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let q64 = spec.order();
        if q64 > MAX_FIELD_SIZE {
            return Err(Error::Resource(format!(
                "field of order {q64} exceeds the table limit {MAX_FIELD_SIZE}"
            )));
        }
        let q = q64 as u32;
        let slow = |a: u32, b: u32| slow_mul(&spec, a, b);
        let slow_pow = |mut base: u32, mut e: u64| {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow(acc, base);
                }
                base = slow(base, base);
                e >>= 1;
            }
            acc
        };
        let factors = prime_factors(q64 - 1);
        let generator = (1..q)
            .find(|&g| g != 0 && factors.iter().all(|&l| slow_pow(g, (q64 - 1) / l) != 1))
            .expect("the multiplicative group is cyclic");
        let mut exp = vec![0u32; q as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for k in 0..(q - 1) {
            exp[k as usize] = x;
            log[x as usize] = k;
            x = slow(x, generator);
        }
        Ok(GaloisField { spec, q, exp, log })
    }

    /// `F_q` for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        Self::new(build_field(p, e)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.spec.p;
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[k as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u128 * e as u128) % (self.q as u128 - 1);
        self.exp[k as usize]
    }
}

/// Multiplication straight from the definition, used to build the tables.
fn slow_mul(spec: &FieldSpec, a: u32, b: u32) -> u32 {
    let p = spec.p;
    let d = spec.d as usize;
    let digits = |mut x: u32| {
        let mut v = vec![0u32; d];
        for slot in v.iter_mut() {
            *slot = x % p;
            x /= p;
        }
        v
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u32; 2 * d];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // reduce by the monic modulus from the top
    for k in (d..2 * d).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (i, &m) in spec.modulus.iter().enumerate().take(d) {
            let idx = k - d + i;
            prod[idx] = (prod[idx] + (p - c) * m % p) % p;
        }
        prod[k] = 0;
    }
    prod[..d].iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_mul(field: &GaloisField, f: &[u32], g: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(a, b));
        }
    }
    out
}

/// Code `Σ_{i<D} c_i q^i` of a monic polynomial of degree `D`.
fn monic_code(f: &[u32], q: u64) -> u64 {
    f[..f.len() - 1].iter().rev().fold(0, |acc, &c| acc * q + c as u64)
}

fn monic_from_code(mut code: u64, degree: u32, q: u64) -> Vec<u32> {
    let mut f = Vec::with_capacity(degree as usize + 1);
    for _ in 0..degree {
        f.push((code % q) as u32);
        code /= q;
    }
    f.push(1);
    f
}

/// Monic irreducible polynomials over `field` of every degree `1..=max_degree`,
/// by sieving out products. Entry `d` lists the degree-`d` ones in
/// increasing code order; entry 0 is empty.
pub fn irreducible_table(field: &GaloisField, max_degree: u32, limits: &Limits) -> Result<Vec<Vec<Vec<u32>>>> {
    let q = field.order() as u64;
    let work: u128 = (1..=max_degree).map(|d| (q as u128).pow(d)).sum();
    if work > limits.max_work as u128 {
        return Err(Error::Resource(format!(
            "sieving degrees up to {max_degree} over F_{q} needs {work} slots (limit {})",
            limits.max_work
        )));
    }
    let mut table: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for degree in 1..=max_degree {
        let size = q.pow(degree) as usize;
        let mut reducible = vec![false; size];
        for i in 1..=degree / 2 {
            let cofactor_count = q.pow(degree - i);
            for f in &table[i as usize] {
                for code in 0..cofactor_count {
                    let g = monic_from_code(code, degree - i, q);
                    reducible[monic_code(&poly_mul(field, f, &g), q) as usize] = true;
                }
            }
        }
        table.push(
            (0..size as u64)
                .filter(|&c| !reducible[c as usize])
                .map(|c| monic_from_code(c, degree, q))
                .collect(),
        );
    }
    Ok(table)
}

/// Monic irreducibles over `F_q`, indexed by degree.
pub fn irreducible_polys(q: u64, max_degree: u32, limits: &Limits) -> Result<Vec<Vec<Vec<u32>>>> {
    irreducible_table(&GaloisField::of_order(q)?, max_degree, limits)
}

/// The model spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// Affine space `A^r`, `r ≥ 1`.
    Affine(u32),
    ProjectiveLine,
}

impl Space {
    pub fn dimension(&self) -> u32 {
        match self {
            Space::Affine(r) => *r,
            Space::ProjectiveLine => 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if *self == Space::Affine(0) {
            return Err(Error::InvalidArgument("A^0 is not supported".into()));
        }
        Ok(())
    }

    /// Number of `F_q`-points, as an upper bound for work estimates.
    fn point_count(&self, q: u64) -> u128 {
        match self {
            Space::Affine(r) => (q as u128).pow(*r),
            Space::ProjectiveLine => q as u128 + 1,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Affine(r) => write!(f, "A^{r}"),
            Space::ProjectiveLine => write!(f, "P^1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointData {
    /// A monic irreducible polynomial over `F_q`, constant term first.
    Polynomial(Vec<u32>),
    /// The point at infinity of `P^1`.
    Infinity,
    /// The lexicographically smallest point of a Frobenius orbit in
    /// `A^r(F_{q^d})`, in the codes of `F_{q^d}` as built by
    /// [`build_field`].
    Orbit(Vec<u32>),
}

/// A Frobenius orbit of geometric points, of size `degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedPoint {
    pub degree: u32,
    pub data: PointData,
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.data {
            PointData::Polynomial(c) => write!(f, "{}", poly_string(c)),
            PointData::Infinity => write!(f, "inf"),
            PointData::Orbit(c) => write!(f, "({}) deg {}", poly_string(c), self.degree),
        }
    }
}

fn check_work(what: &str, work: u128, limits: &Limits) -> Result<()> {
    if work > limits.max_work as u128 {
        return Err(Error::Resource(format!(
            "{what} needs about {work} candidates (limit {})",
            limits.max_work
        )));
    }
    Ok(())
}

/// Closed points of `space` over `F_q` of degree at most `max_degree`, in
/// increasing degree.
pub fn closed_points(space: Space, q: u64, max_degree: u32, limits: &Limits) -> Result<Vec<ClosedPoint>> {
    space.validate()?;
    let (p, e) =
        prime_power(q).ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
    let mut points = Vec::new();
    match space {
        Space::Affine(1) | Space::ProjectiveLine => {
            let table = irreducible_polys(q, max_degree, limits)?;
            for (degree, polys) in table.into_iter().enumerate() {
                points.extend(polys.into_iter().map(|f| ClosedPoint {
                    degree: degree as u32,
                    data: PointData::Polynomial(f),
                }));
                if degree == 1 && space == Space::ProjectiveLine {
                    points.push(ClosedPoint { degree: 1, data: PointData::Infinity });
                }
            }
        }
        Space::Affine(r) => {
            let work: u128 = (1..=max_degree).map(|d| (q as u128).pow(r * d)).sum();
            check_work(&format!("closed points of {space} up to degree {max_degree}"), work, limits)?;
            for d in 1..=max_degree {
                points.extend(orbit_points(p, e, d, r)?);
            }
        }
    }
    Ok(points)
}

/// Degree-`d` closed points of `A^r` over `F_{p^e}`: orbits of size exactly
/// `d` of `x ↦ x^q` acting on `A^r(F_{q^d})`.
fn orbit_points(p: u32, e: u32, d: u32, r: u32) -> Result<Vec<ClosedPoint>> {
    let field = GaloisField::new(build_field(p, e * d)?)?;
    let big_q = field.order() as u64;
    let q = (p as u64).pow(e);
    let total = big_q.pow(r);
    let decode = |mut code: u64| {
        let mut coords = vec![0u32; r as usize];
        for slot in coords.iter_mut().rev() {
            *slot = (code % big_q) as u32;
            code /= big_q;
        }
        coords
    };
    let encode = |coords: &[u32]| coords.iter().fold(0u64, |acc, &c| acc * big_q + c as u64);
    let mut out = Vec::new();
    'tuples: for code in 0..total {
        let start = decode(code);
        let mut x = start.clone();
        for step in 1..=d {
            for c in x.iter_mut() {
                *c = field.pow(*c, q);
            }
            if x == start {
                if step < d {
                    continue 'tuples;
                }
                break;
            }
            if encode(&x) < code {
                continue 'tuples;
            }
        }
        out.push(ClosedPoint { degree: d, data: PointData::Orbit(start) });
    }
    Ok(out)
}

/// Which points of `Sym^n` to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Multiplicity-free cycles: points of `UConf_n`.
    Uconf,
    /// All effective cycles: points of `Sym^n`.
    Sym,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Uconf => write!(f, "uconf"),
            Kind::Sym => write!(f, "sym"),
        }
    }
}

/// An effective zero-cycle: distinct closed points with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectiveCycle<'a> {
    pub points: Vec<(&'a ClosedPoint, u32)>,
}

impl EffectiveCycle<'_> {
    pub fn degree(&self) -> u32 {
        self.points.iter().map(|(pt, m)| pt.degree * m).sum()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.points.iter().all(|&(_, m)| m == 1)
    }

    /// Sorted `(degree, multiplicity)` pairs; `P(y)` depends only on this.
    pub fn profile(&self) -> Vec<(u32, u32)> {
        let mut profile: Vec<(u32, u32)> = self.points.iter().map(|(pt, m)| (pt.degree, *m)).collect();
        profile.sort_unstable();
        profile
    }
}

impl fmt::Display for EffectiveCycle<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|(pt, m)| if *m == 1 { format!("[{pt}]") } else { format!("{m}[{pt}]") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Every degree-`n` effective cycle on a list of closed points sorted by
/// degree, each exactly once.
///
/// Cycles are produced depth first: points in list order, and for `Sym`
/// increasing multiplicity of a point before moving to the next one.
pub struct CycleIter<'a> {
    points: &'a [ClosedPoint],
    kind: Kind,
    stack: Vec<(usize, u32)>,
    remaining: u32,
    descending: bool,
}

impl<'a> CycleIter<'a> {
    pub fn new(points: &'a [ClosedPoint], n: u32, kind: Kind) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].degree <= w[1].degree));
        CycleIter { points, kind, stack: Vec::new(), remaining: n, descending: true }
    }

    fn fits(&self, idx: usize) -> bool {
        idx < self.points.len() && self.points[idx].degree <= self.remaining
    }

    fn push(&mut self, idx: usize, m: u32) {
        self.remaining -= self.points[idx].degree * m;
        self.stack.push((idx, m));
    }
}

impl<'a> Iterator for CycleIter<'a> {
    type Item = EffectiveCycle<'a>;

    fn next(&mut self) -> Option<EffectiveCycle<'a>> {
        loop {
            if self.descending {
                if self.remaining == 0 {
                    self.descending = false;
                    let points = self.points;
                    return Some(EffectiveCycle {
                        points: self.stack.iter().map(|&(i, m)| (&points[i], m)).collect(),
                    });
                }
                let child = self.stack.last().map_or(0, |&(i, _)| i + 1);
                if self.fits(child) {
                    self.push(child, 1);
                } else {
                    self.descending = false;
                }
            } else {
                let (idx, m) = self.stack.pop()?;
                self.remaining += self.points[idx].degree * m;
                if self.kind == Kind::Sym && (m + 1) * self.points[idx].degree <= self.remaining {
                    self.push(idx, m + 1);
                    self.descending = true;
                } else if self.fits(idx + 1) {
                    self.push(idx + 1, 1);
                    self.descending = true;
                }
            }
        }
    }
}

fn work_estimate(space: Space, n: u32, q: u64) -> u128 {
    space.point_count(q).saturating_pow(n)
}

/// Closed points of degree at most `n`, after checking the enumeration of
/// degree-`n` cycles stays within the work limit.
pub fn cycle_points(space: Space, n: u32, q: u64, limits: &Limits) -> Result<Vec<ClosedPoint>> {
    space.validate()?;
    check_work(
        &format!("enumerating degree-{n} cycles on {space} over F_{q}"),
        work_estimate(space, n, q),
        limits,
    )?;
    closed_points(space, q, n, limits)
}

/// The cycle type of Frobenius on a multiplicity-free cycle: the degrees of
/// its closed points.
pub fn frobenius_cycle_type(y: &EffectiveCycle) -> Result<Partition> {
    if !y.is_multiplicity_free() {
        return Err(Error::InvalidArgument(
            "cycle has repeated points; its statistic is an average (use pvalue)".into(),
        ));
    }
    Ok(Partition::new(y.points.iter().map(|(pt, _)| pt.degree).collect()))
}

/// `P(y)` from a `(degree, multiplicity)` profile.
///
/// A closed point of degree `d` taken `m` times contributes `d·ν` to the
/// cycle type, where `ν` is the cycle type of a uniformly random element of
/// `S_m`; the blocks are independent.
pub fn profile_value(poly: &CharacterPolynomial, profile: &[(u32, u32)]) -> Rational {
    fn go(poly: &CharacterPolynomial, profile: &[(u32, u32)], parts: &mut Vec<u32>, weight: Rational) -> Rational {
        let Some((&(d, m), rest)) = profile.split_first() else {
            return weight * poly.evaluate(&Partition::new(parts.clone()));
        };
        if m == 1 {
            parts.push(d);
            let v = go(poly, rest, parts, weight);
            parts.pop();
            return v;
        }
        let m_fact = rational::from_biguint(&factorial(m));
        let mut total = Rational::zero();
        for nu in partitions_of(m) {
            let w = &weight * rational::from_biguint(&class_size(&nu)) / &m_fact;
            let before = parts.len();
            parts.extend(nu.parts().iter().map(|c| c * d));
            total += go(poly, rest, parts, w);
            parts.truncate(before);
        }
        total
    }
    go(poly, profile, &mut Vec::new(), Rational::one())
}

/// The averaged statistic `P(y) = |H|^{-1} Σ_{h ∈ H} P(σ_y h)`.
pub fn pvalue(poly: &CharacterPolynomial, y: &EffectiveCycle) -> Rational {
    profile_value(poly, &y.profile())
}

/// `Σ_y P(y)` over all degree-`n` cycles of the given kind.
pub fn statistic_sum(space: Space, n: u32, q: u64, kind: Kind, poly: &CharacterPolynomial, limits: &Limits) -> Result<Rational> {
    let points = cycle_points(space, n, q, limits)?;
    let mut profiles: HashMap<Vec<(u32, u32)>, u64> = HashMap::new();
    for y in CycleIter::new(&points, n, kind) {
        *profiles.entry(y.profile()).or_insert(0) += 1;
    }
    Ok(profiles
        .iter()
        .map(|(profile, &count)| rational::int(count) * profile_value(poly, profile))
        .sum())
}

/// Number of degree-`n` cycles of the given kind.
pub fn count_cycles(space: Space, n: u32, q: u64, kind: Kind, limits: &Limits) -> Result<BigUint> {
    let points = cycle_points(space, n, q, limits)?;
    Ok(BigUint::from(CycleIter::new(&points, n, kind).count()))
}

/// JSON summary of a closed-point table.
pub fn closed_points_json(points: &[ClosedPoint]) -> serde_json::Value {
    json!(points
        .iter()
        .map(|pt| json!({"degree": pt.degree, "point": pt.to_string()}))
        .collect::<Vec<_>>())
}

/// `(1/d) Σ_{e | d} μ(e) q^{d/e}`, the number of monic irreducibles of
/// degree `d` over `F_q`.
pub fn necklace_count(q: u64, d: u32) -> BigUint {
    fn mobius(mut n: u32) -> i32 {
        let mut result = 1;
        let mut k = 2;
        while k * k <= n {
            if n % k == 0 {
                n /= k;
                if n % k == 0 {
                    return 0;
                }
                result = -result;
            }
            k += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let mut total = num_bigint::BigInt::zero();
    for e in (1..=d).filter(|e| d % e == 0) {
        total += mobius(e) * num_bigint::BigInt::from(q).pow(d / e);
    }
    (total / d).to_biguint().expect("positive count")
}

/// Number of closed points of degree `d` as a machine integer.
pub fn count_of_degree(points: &[ClosedPoint], d: u32) -> u64 {
    points.iter().filter(|pt| pt.degree == d).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn l() -> Limits {
        Limits::default()
    }

    #[test]
    fn primes_and_prime_powers() {
        assert!(is_prime(2) && is_prime(97) && !is_prime(1) && !is_prime(91));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn field_moduli() {
        assert_eq!(build_field(2, 1).unwrap().modulus, vec![0, 1]);
        assert_eq!(build_field(2, 2).unwrap().modulus, vec![1, 1, 1]);
        assert_eq!(build_field(3, 2).unwrap().modulus, vec![1, 0, 1]);
        assert_eq!(build_field(2, 3).unwrap().modulus, vec![1, 1, 0, 1]);
        assert!(build_field(4, 1).is_err());
    }

    #[test]
    fn field_axioms() {
        for (p, d) in [(2, 1), (3, 1), (2, 3), (3, 2), (5, 2)] {
            let f = GaloisField::new(build_field(p, d).unwrap()).unwrap();
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.pow(a, q as u64 - 1), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), slow_mul(f.spec(), a, b));
                    for c in 0..q.min(5) {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn irreducible_counts() {
        let t = irreducible_polys(2, 3, &l()).unwrap();
        assert_eq!(t[2], vec![vec![1, 1, 1]]);
        assert_eq!(t[3].len(), 2);
        for q in [2u64, 3, 4, 5] {
            let max_d = if q == 2 { 6 } else { 4 };
            let t = irreducible_polys(q, max_d, &l()).unwrap();
            assert_eq!(t[1].len() as u64, q);
            for d in 1..=max_d {
                assert_eq!(BigUint::from(t[d as usize].len()), necklace_count(q, d), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn closed_point_tables() {
        let p1 = closed_points(Space::ProjectiveLine, 2, 1, &l()).unwrap();
        assert_eq!(p1.len(), 3);
        assert_eq!(closed_points(Space::Affine(1), 3, 1, &l()).unwrap().len(), 3);
        for (q, r, top) in [(2u64, 2u32, 4u32), (3, 2, 3), (2, 3, 3), (4, 2, 2)] {
            let pts = closed_points(Space::Affine(r), q, top, &l()).unwrap();
            for big_d in 1..=top {
                let mass: u64 = (1..=big_d)
                    .filter(|d| big_d % d == 0)
                    .map(|d| d as u64 * count_of_degree(&pts, d))
                    .sum();
                assert_eq!(mass, q.pow(r * big_d), "q={q} r={r} D={big_d}");
            }
        }
        assert!(closed_points(Space::Affine(2), 2, 20, &l()).is_err());
    }

    #[test]
    fn cycle_counts() {
        assert_eq!(count_cycles(Space::Affine(1), 2, 3, Kind::Uconf, &l()).unwrap(), BigUint::from(6u32));
        assert_eq!(count_cycles(Space::Affine(1), 3, 2, Kind::Sym, &l()).unwrap(), BigUint::from(8u32));
        assert_eq!(count_cycles(Space::ProjectiveLine, 2, 2, Kind::Uconf, &l()).unwrap(), BigUint::from(4u32));
        for q in [2u64, 3] {
            for n in 1..=5 {
                assert_eq!(
                    count_cycles(Space::Affine(1), n, q, Kind::Sym, &l()).unwrap(),
                    BigUint::from(q.pow(n))
                );
            }
        }
    }

    #[test]
    fn cycles_are_distinct_and_of_degree_n() {
        let pts = closed_points(Space::ProjectiveLine, 3, 4, &l()).unwrap();
        let cycles: Vec<_> = CycleIter::new(&pts, 4, Kind::Sym).collect();
        assert!(cycles.iter().all(|y| y.degree() == 4));
        let keys: std::collections::HashSet<String> = cycles.iter().map(|y| y.to_string()).collect();
        assert_eq!(keys.len(), cycles.len());
    }

    #[test]
    fn frobenius_types() {
        let pts = closed_points(Space::Affine(1), 2, 3, &l()).unwrap();
        let cubic = pts.iter().find(|pt| pt.data == PointData::Polynomial(vec![1, 1, 0, 1])).unwrap();
        let y = EffectiveCycle { points: vec![(cubic, 1)] };
        assert_eq!(frobenius_cycle_type(&y).unwrap(), Partition::new(vec![3]));
        let y = EffectiveCycle { points: vec![(&pts[0], 1), (&pts[2], 1)] };
        assert_eq!(frobenius_cycle_type(&y).unwrap(), Partition::new(vec![2, 1]));
        let y = EffectiveCycle { points: vec![(&pts[0], 2)] };
        assert!(frobenius_cycle_type(&y).is_err());
    }

    #[test]
    fn pvalues() {
        let x1 = CharacterPolynomial::var(1);
        let x2 = CharacterPolynomial::var(2);
        assert_eq!(profile_value(&x1, &[(1, 1), (2, 1)]), int(1));
        assert_eq!(profile_value(&x2, &[(1, 2)]), ratio(1, 2));
        assert_eq!(profile_value(&x1, &[(1, 2)]), int(1));
    }

    #[test]
    fn statistic_sums() {
        let x1 = CharacterPolynomial::var(1);
        let x2 = CharacterPolynomial::var(2);
        assert_eq!(statistic_sum(Space::Affine(1), 2, 3, Kind::Uconf, &x1, &l()).unwrap(), int(6));
        assert_eq!(statistic_sum(Space::Affine(1), 2, 2, Kind::Sym, &x2, &l()).unwrap(), int(2));
        assert_eq!(
            statistic_sum(Space::Affine(1), 4, 3, Kind::Sym, &CharacterPolynomial::one(), &l()).unwrap(),
            int(81)
        );
    }

    #[test]
    fn resource_guard() {
        let tight = Limits::with_max_work(100);
        assert!(matches!(
            count_cycles(Space::Affine(1), 7, 2, Kind::Sym, &tight),
            Err(Error::Resource(_))
        ));
        assert!(closed_points(Space::Affine(0), 2, 1, &l()).is_err());
    }
}
