//! The Arnol'd (Orlik–Solomon) algebra of the braid arrangement and the
//! `S_n`-characters of `H^*(PConf_n(A^r))`.
//!
//! Generators `G_ab = G_ba` (`a ≠ b`) anticommute and satisfy
//! `G_ab G_bc + G_bc G_ca + G_ca G_ab = 0`. A product of generators is in
//! basis form when the larger endpoints of its edges are strictly increasing
//! along the product. The degree-`p` basis has `c(n, n-p)` elements.
//!
//! Internally a monomial is a `u128` bit mask over edge indices, standing for
//! the product of its edges in increasing index order. The index of `(a, b)`
//! with `a < b` is `(b-1)(b-2)/2 + (a-1)`, so index order sorts edges by
//! larger endpoint first; this caps `n` at 16.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rational::{self, Rational};
use crate::series::BettiProfile;
use crate::symmetric::{inner_product, partitions_of, restricted_average, ClassFunction, Partition};

/// Largest `n` the mask representation supports.
pub const MAX_N: u32 = 16;

type Mask = u128;

fn edge_index(a: u32, b: u32) -> u32 {
    debug_assert!(1 <= a && a < b);
    (b - 1) * (b - 2) / 2 + (a - 1)
}

fn edge_from_index(index: u32) -> (u32, u32) {
    let mut b = 2;
    while edge_index(1, b + 1) <= index {
        b += 1;
    }
    (index - edge_index(1, b) + 1, b)
}

fn mask_edges(mask: Mask) -> impl Iterator<Item = u32> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros();
        m &= m - 1;
        Some(i)
    })
}

/// Sorts a product of edges into index order: `Π seq = sign · Π sorted`.
/// Returns `None` when an edge repeats (the product vanishes).
fn canonicalize(seq: &[u32]) -> Option<(i64, Mask)> {
    let mut mask: Mask = 0;
    let mut inversions = 0u32;
    for &e in seq {
        let bit = 1u128 << e;
        if mask & bit != 0 {
            return None;
        }
        // earlier edges with a larger index each give one transposition
        inversions += (mask >> e).count_ones();
        mask |= bit;
    }
    Some((if inversions % 2 == 0 { 1 } else { -1 }, mask))
}

/// Finds two edges `(a, b)`, `(c, b)` with `a < c` sharing a larger endpoint.
fn find_violation(mask: Mask) -> Option<(u32, u32)> {
    let mut last: Option<(u32, u32)> = None;
    for e in mask_edges(mask) {
        let (_, b) = edge_from_index(e);
        if let Some((prev, prev_b)) = last {
            if prev_b == b {
                return Some((prev, e));
            }
        }
        last = Some((e, b));
    }
    None
}

thread_local! {
    static NORMAL_FORMS: RefCell<HashMap<Mask, Arc<Vec<(Mask, i64)>>>> =
        RefCell::new(HashMap::new());
}

/// Expansion of the index-ordered product `mask` in the basis, sorted by
/// mask.
///
/// A violating pair `G_ab G_cb` (`a < c < b`) is rewritten as
/// `G_ac G_cb - G_ac G_ab`. Both new terms have a smaller sum of larger
/// endpoints, so the recursion terminates.
fn normal_form(mask: Mask) -> Arc<Vec<(Mask, i64)>> {
    if let Some(hit) = NORMAL_FORMS.with(|m| m.borrow().get(&mask).cloned()) {
        return hit;
    }
    let result = match find_violation(mask) {
        None => vec![(mask, 1)],
        Some((e1, e2)) => {
            let (a, _) = edge_from_index(e1);
            let (c, _) = edge_from_index(e2);
            let rest: Vec<u32> = mask_edges(mask & !(1u128 << e1) & !(1u128 << e2)).collect();
            // mask = s · G_ab G_cb · rest
            let mut front = vec![e1, e2];
            front.extend(&rest);
            let (s, _) = canonicalize(&front).expect("distinct edges");
            let ac = edge_index(a, c);
            let mut acc: HashMap<Mask, i64> = HashMap::new();
            for (first, second, coeff) in [(ac, e2, s), (ac, e1, -s)] {
                let mut seq = vec![first, second];
                seq.extend(&rest);
                if let Some((t, m)) = canonicalize(&seq) {
                    for &(basis, c) in normal_form(m).iter() {
                        *acc.entry(basis).or_insert(0) += coeff * t * c;
                    }
                }
            }
            let mut terms: Vec<(Mask, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
            terms.sort_unstable();
            terms
        }
    };
    let result = Arc::new(result);
    NORMAL_FORMS.with(|m| m.borrow_mut().insert(mask, result.clone()));
    result
}

/// A signed product of generators `± G_{a1 b1} ... G_{ap bp}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OsMonomial {
    pub edges: Vec<(u32, u32)>,
    pub sign: i32,
}

impl OsMonomial {
    pub fn new(edges: Vec<(u32, u32)>) -> Self {
        OsMonomial { edges, sign: 1 }
    }

    pub fn degree(&self) -> usize {
        self.edges.len()
    }

    /// Basis form: every edge written `a < b`, larger endpoints strictly
    /// increasing.
    pub fn is_basis(&self) -> bool {
        self.edges.iter().all(|&(a, b)| a < b)
            && self.edges.windows(2).all(|w| w[0].1 < w[1].1)
    }

    fn from_mask(mask: Mask) -> Self {
        OsMonomial::new(mask_edges(mask).map(edge_from_index).collect())
    }

    fn indices(&self, n: u32) -> Result<Vec<u32>> {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let (lo, hi) = (a.min(b), a.max(b));
                if lo == hi || lo < 1 || hi > n {
                    return Err(Error::InvalidArgument(format!(
                        "G{a},{b} is not a generator for n = {n}"
                    )));
                }
                Ok(edge_index(lo, hi))
            })
            .collect()
    }
}

impl fmt::Display for OsMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.edges.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.edges.iter().map(|(a, b)| format!("G{a}{b}")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n > MAX_N {
        return Err(Error::Resource(format!("n = {n} exceeds the hard limit {MAX_N}")));
    }
    Ok(())
}

fn basis_masks(n: u32, p: u32) -> Vec<Mask> {
    // for each larger endpoint b = 2..n choose no edge or one edge (a, b)
    fn go(b: u32, n: u32, left: u32, mask: Mask, out: &mut Vec<Mask>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        if b > n || n - b + 1 < left {
            return;
        }
        go(b + 1, n, left, mask, out);
        for a in 1..b {
            go(b + 1, n, left - 1, mask | (1u128 << edge_index(a, b)), out);
        }
    }
    let mut out = Vec::new();
    go(2, n, p, 0, &mut out);
    out.sort_unstable();
    out
}

/// The degree-`p` basis monomials on `n` points.
pub fn os_basis(n: u32, p: u32) -> Result<Vec<OsMonomial>> {
    check_n(n)?;
    Ok(basis_masks(n, p).into_iter().map(OsMonomial::from_mask).collect())
}

/// Expresses an arbitrary signed product of generators in the basis.
/// Terms are sorted by edge index and carry their coefficient in `sign`
/// times the returned integer.
pub fn straighten(m: &OsMonomial, n: u32) -> Result<Vec<(OsMonomial, i64)>> {
    check_n(n)?;
    let indices = m.indices(n)?;
    let Some((s, mask)) = canonicalize(&indices) else {
        return Ok(Vec::new());
    };
    let s = s * m.sign as i64;
    Ok(normal_form(mask)
        .iter()
        .map(|&(basis, c)| (OsMonomial::from_mask(basis), s * c))
        .collect())
}

/// Trace of the permutation `perm` of `{0, .., n-1}` on the degree-`p`
/// part, acting by `σ·G_ab = G_σ(a)σ(b)`.
pub fn trace_of(perm: &[usize], p: u32) -> Result<i64> {
    let n = perm.len() as u32;
    check_n(n)?;
    let image = |e: u32| {
        let (a, b) = edge_from_index(e);
        let (x, y) = (perm[a as usize - 1] as u32 + 1, perm[b as usize - 1] as u32 + 1);
        edge_index(x.min(y), x.max(y))
    };
    let mut total = 0i64;
    let mut seq = Vec::with_capacity(p as usize);
    for mask in basis_masks(n, p) {
        seq.clear();
        seq.extend(mask_edges(mask).map(image));
        let (s, moved) = canonicalize(&seq).expect("a permutation maps distinct edges to distinct edges");
        if moved == mask {
            total += s;
            continue;
        }
        let nf = normal_form(moved);
        if let Ok(pos) = nf.binary_search_by(|(m, _)| m.cmp(&mask)) {
            total += s * nf[pos].1;
        }
    }
    Ok(total)
}

type CharacterCache = Mutex<HashMap<(u32, u32), Arc<ClassFunction>>>;

fn character_cache() -> &'static CharacterCache {
    static CACHE: OnceLock<CharacterCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The character of `S_n` on `H^{(2r-1)p}(PConf_n(A^r))`, the same
/// representation for every `r ≥ 1`.
pub fn pconf_character(n: u32, p: u32, limits: &Limits) -> Result<ClassFunction> {
    check_n(n)?;
    if n > limits.max_pconf_n {
        return Err(Error::Resource(format!(
            "pconf characters are limited to n <= {} (requested n = {n})",
            limits.max_pconf_n
        )));
    }
    if let Some(hit) = character_cache().lock().expect("cache poisoned").get(&(n, p)) {
        return Ok((**hit).clone());
    }
    let classes = partitions_of(n);
    let values: Vec<i64> = if p == 0 {
        vec![1; classes.len()]
    } else if p >= n {
        vec![0; classes.len()]
    } else {
        classes
            .par_iter()
            .map(|mu| trace_of(&mu.representative(), p))
            .collect::<Result<_>>()?
    };
    let mut values = values.into_iter();
    let chi = ClassFunction::from_fn(n, |_| rational::int(values.next().expect("one value per class")));
    character_cache()
        .lock()
        .expect("cache poisoned")
        .insert((n, p), Arc::new(chi.clone()));
    Ok(chi)
}

fn rational_to_integer(value: Rational, what: &str) -> BigInt {
    assert!(value.is_integer(), "{what} is not an integer: {value}");
    value.to_integer()
}

/// `dim H^{(2r-1)p}(UConf_n(A^r)) = ⟨1, χ_p⟩`.
pub fn uconf_betti(n: u32, p: u32, limits: &Limits) -> Result<BigInt> {
    invariant_dim(n, p, 0, limits)
}

/// Dimension of the `S_{n-a}`-invariants of the degree-`p` part.
pub fn invariant_dim(n: u32, p: u32, a: u32, limits: &Limits) -> Result<BigInt> {
    let chi = pconf_character(n, p, limits)?;
    Ok(rational_to_integer(restricted_average(&chi, a)?, "invariant dimension"))
}

/// Multiplicity of the irreducible `V(λ)_n`, indexed by the padded
/// partition `(n - |λ|, λ)`.
pub fn irreducible_multiplicity(n: u32, p: u32, lambda: &Partition, limits: &Limits) -> Result<BigInt> {
    let padded = pad(lambda, n)?;
    let chi = pconf_character(n, p, limits)?;
    let m = inner_product(&chi, &ClassFunction::irreducible(&padded))?;
    Ok(rational_to_integer(m, "multiplicity"))
}

/// `(n - |λ|, λ)`, defined when `n - |λ| ≥ λ_1`.
pub fn pad(lambda: &Partition, n: u32) -> Result<Partition> {
    let first = lambda.parts().first().copied().unwrap_or(0);
    if lambda.size() + first > n {
        return Err(Error::InvalidArgument(format!(
            "cannot pad {lambda} to a partition of {n}"
        )));
    }
    let mut parts = vec![n - lambda.size()];
    parts.extend_from_slice(lambda.parts());
    Ok(Partition::new(parts))
}

/// Character of `S_n` on `H^i(X^n)` for `X` with only even Betti numbers:
/// on cycle type `μ`, the coefficient of `t^i` in `Π_{c ∈ μ} P_X(t^c)`.
pub fn product_character(b: &BettiProfile, n: u32, i: u32) -> Result<ClassFunction> {
    if b.has_odd_betti() {
        return Err(Error::Unsupported(
            "product characters need a space with no odd Betti numbers".into(),
        ));
    }
    let poincare: Vec<u64> = b.betti().to_vec();
    Ok(ClassFunction::from_fn(n, |mu| {
        let mut poly: Vec<BigUint> = vec![BigUint::one()];
        for &c in mu.parts() {
            let c = c as usize;
            let mut next = vec![BigUint::zero(); poly.len() + (poincare.len() - 1) * c];
            for (x, px) in poly.iter().enumerate() {
                for (y, &by) in poincare.iter().enumerate() {
                    if by != 0 {
                        next[x + y * c] += px * by;
                    }
                }
            }
            poly = next;
        }
        rational::from_biguint(&poly.get(i as usize).cloned().unwrap_or_default())
    }))
}

/// Unsigned Stirling number of the first kind `c(n, k)`.
pub fn stirling_first(n: u32, k: u32) -> BigUint {
    let mut row = vec![BigUint::one()];
    for m in 0..n {
        let mut next = vec![BigUint::zero(); row.len() + 1];
        for (j, v) in row.iter().enumerate() {
            next[j + 1] += v;
            next[j] += v * m;
        }
        row = next;
    }
    row.get(k as usize).cloned().unwrap_or_default()
}

/// All degrees of `H^*(PConf_n(A^r))` with their Frobenius weights: the
/// degree-`p` generator products sit in cohomological degree `(2r-1)p`, where
/// Frobenius acts by `q^{rp}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCharacter {
    pub n: u32,
    pub r: u32,
    pub degrees: Vec<(u32, ClassFunction)>,
}

impl GradedCharacter {
    pub fn compute(n: u32, r: u32, limits: &Limits) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        let degrees = (0..n)
            .map(|p| Ok((p, pconf_character(n, p, limits)?)))
            .collect::<Result<_>>()?;
        Ok(GradedCharacter { n, r, degrees })
    }

    pub fn weight_exponent(&self, p: u32) -> u32 {
        self.r * p
    }

    pub fn cohomological_degree(&self, p: u32) -> u32 {
        (2 * self.r - 1) * p
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "degrees": self.degrees.iter().map(|(p, chi)| json!({
                "p": p,
                "weight": self.weight_exponent(*p),
                "values": chi.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `Π_{k=1}^{n-1} (1 + k t)` as coefficients; used as a dimension check.
pub fn poincare_polynomial(n: u32) -> Vec<BigUint> {
    (1..n).fold(vec![BigUint::one()], |poly, k| {
        let mut next = vec![BigUint::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j] += c;
            next[j + 1] += c * k;
        }
        next
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn edge_indexing() {
        let mut expected = 0;
        for b in 2..=MAX_N {
            for a in 1..b {
                assert_eq!(edge_index(a, b), expected);
                assert_eq!(edge_from_index(expected), (a, b));
                expected += 1;
            }
        }
        assert!(expected <= 128);
    }

    #[test]
    fn basis_counts() {
        assert_eq!(os_basis(3, 0).unwrap(), vec![OsMonomial::new(vec![])]);
        assert_eq!(os_basis(3, 1).unwrap().len(), 3);
        assert_eq!(os_basis(4, 3).unwrap().len(), 6);
        for n in 1..=8 {
            for p in 0..n {
                assert_eq!(
                    BigUint::from(os_basis(n, p).unwrap().len()),
                    stirling_first(n, n - p)
                );
            }
            assert!(os_basis(n, n).unwrap().is_empty());
        }
        assert!(os_basis(4, 2).unwrap().iter().all(OsMonomial::is_basis));
    }

    #[test]
    fn straightening_examples() {
        let g = |edges: &[(u32, u32)]| OsMonomial::new(edges.to_vec());
        assert!(straighten(&g(&[(1, 2), (1, 2)]), 3).unwrap().is_empty());
        assert_eq!(straighten(&g(&[(2, 1)]), 3).unwrap(), vec![(g(&[(1, 2)]), 1)]);
        let mut got = straighten(&g(&[(1, 3), (2, 3)]), 3).unwrap();
        got.sort_by(|a, b| a.0.edges.cmp(&b.0.edges));
        assert_eq!(got, vec![(g(&[(1, 2), (1, 3)]), -1), (g(&[(1, 2), (2, 3)]), 1)]);
        // anticommutation
        assert_eq!(
            straighten(&g(&[(1, 3), (1, 2)]), 3).unwrap(),
            vec![(g(&[(1, 2), (1, 3)]), -1)]
        );
        assert!(straighten(&g(&[(1, 1)]), 3).is_err());
        assert!(straighten(&g(&[(1, 4)]), 3).is_err());
    }

    #[test]
    fn arnold_relation_holds() {
        // G_ab G_bc + G_bc G_ca + G_ca G_ab = 0 for every triple, any order
        for (a, b, c) in [(1, 2, 3), (3, 1, 2), (2, 4, 1), (4, 3, 2)] {
            let mut acc: HashMap<Vec<(u32, u32)>, i64> = HashMap::new();
            for edges in [[(a, b), (b, c)], [(b, c), (c, a)], [(c, a), (a, b)]] {
                for (m, coeff) in straighten(&OsMonomial::new(edges.to_vec()), 4).unwrap() {
                    *acc.entry(m.edges).or_insert(0) += coeff;
                }
            }
            assert!(acc.values().all(|&v| v == 0), "{a}{b}{c}: {acc:?}");
        }
    }

    #[test]
    fn s3_characters() {
        let chi1 = pconf_character(3, 1, &limits()).unwrap();
        assert_eq!(chi1.get(&Partition::new(vec![3])), Some(&int(0)));
        let chi2 = pconf_character(3, 2, &limits()).unwrap();
        assert_eq!(chi2.values(), &[int(-1), int(0), int(2)]);
        assert_eq!(pconf_character(5, 0, &limits()).unwrap(), ClassFunction::constant(5, int(1)));
    }

    #[test]
    fn betti_and_invariants() {
        let l = limits();
        for n in 1..=6 {
            assert_eq!(uconf_betti(n, 0, &l).unwrap(), BigInt::one());
        }
        for n in 2..=6 {
            assert_eq!(uconf_betti(n, 1, &l).unwrap(), BigInt::one());
        }
        assert_eq!(uconf_betti(3, 2, &l).unwrap(), BigInt::zero());
        assert_eq!(invariant_dim(4, 1, 0, &l).unwrap(), BigInt::one());
        assert_eq!(invariant_dim(3, 2, 1, &l).unwrap(), BigInt::one());
        for n in 1..=6 {
            for p in 0..n {
                assert_eq!(
                    invariant_dim(n, p, n, &l).unwrap(),
                    BigInt::from(stirling_first(n, n - p))
                );
            }
        }
    }

    #[test]
    fn multiplicities() {
        let l = limits();
        assert_eq!(irreducible_multiplicity(4, 0, &Partition::empty(), &l).unwrap(), BigInt::one());
        assert_eq!(irreducible_multiplicity(5, 1, &Partition::empty(), &l).unwrap(), BigInt::one());
        assert_eq!(
            irreducible_multiplicity(3, 2, &Partition::new(vec![1]), &l).unwrap(),
            BigInt::one()
        );
        assert!(irreducible_multiplicity(3, 1, &Partition::new(vec![2]), &l).is_err());
    }

    #[test]
    fn product_characters() {
        let point = BettiProfile::parse("1").unwrap();
        assert_eq!(product_character(&point, 3, 0).unwrap(), ClassFunction::constant(3, int(1)));
        assert_eq!(product_character(&point, 3, 2).unwrap(), ClassFunction::constant(3, int(0)));
        let p1 = BettiProfile::parse("1,0,1").unwrap();
        assert_eq!(product_character(&p1, 2, 2).unwrap().values(), &[int(0), int(2)]);
        assert_eq!(product_character(&p1, 2, 4).unwrap(), ClassFunction::constant(2, int(1)));
        assert!(product_character(&BettiProfile::parse("1,1").unwrap(), 2, 1).is_err());
    }

    #[test]
    fn resource_bound() {
        assert!(matches!(pconf_character(9, 1, &limits()), Err(Error::Resource(_))));
        assert!(matches!(pconf_character(17, 1, &Limits { max_pconf_n: 20, ..limits() }), Err(Error::Resource(_))));
        assert!(pconf_character(0, 0, &limits()).is_err());
    }

    #[test]
    fn stirling_and_poincare() {
        assert_eq!(stirling_first(4, 1), BigUint::from(6u32));
        assert_eq!(stirling_first(8, 3), BigUint::from(13132u32));
        assert_eq!(stirling_first(0, 0), BigUint::one());
        let poly = poincare_polynomial(4);
        assert_eq!(poly, [1u32, 6, 11, 6].map(BigUint::from).to_vec());
    }

    #[test]
    fn graded_json() {
        let g = GradedCharacter::compute(2, 1, &limits()).unwrap();
        assert_eq!(
            g.to_json(),
            json!({"n": 2, "degrees": [
                {"p": 0, "weight": 0, "values": {"[2]": "1", "[1,1]": "1"}},
                {"p": 1, "weight": 1, "values": {"[2]": "1", "[1,1]": "1"}},
            ]})
        );
        assert_eq!(GradedCharacter::compute(3, 2, &limits()).unwrap().cohomological_degree(2), 6);
    }
}
