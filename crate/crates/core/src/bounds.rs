//! Explicit majorants: partition counts, coefficient dominance for
//! symmetric-product Betti numbers, double coset counts, multiplicity bounds
//! for configuration-space cohomology, and a finite-range growth diagnostic.
//!
//! Floating point is used only to produce upward-rounded transcendental
//! values, which are then compared exactly, and in [`growth_diagnostic`].

use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::charpoly::CharacterPolynomial;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rational::{self, Rational};
use crate::series::{diag_series, BettiProfile};
use crate::symmetric::{class_size, factorial, partition_count, partitions_of};

/// Relative slack added to every upward-rounded floating-point value.
const UPWARD_SLACK: f64 = 1e-14;

/// The constant `π √(2/3)` of the Hardy–Ramanujan bound `p(i) < e^{c √i}`.
pub fn hr_constant() -> f64 {
    std::f64::consts::PI * (2.0f64 / 3.0).sqrt()
}

/// An upper bound for `e^x`, safe against rounding in `x` and in `exp`.
pub fn exp_up(x: f64) -> f64 {
    let x_up = x + x.abs() * UPWARD_SLACK + f64::MIN_POSITIVE;
    x_up.exp() * (1.0 + UPWARD_SLACK)
}

/// `⌈e^{π √(2i/3)}⌉`, rounded so that it is never below the true value.
pub fn hr_majorant(i: u32) -> Result<BigUint> {
    let value = exp_up(std::f64::consts::PI * (2.0 * i as f64 / 3.0).sqrt());
    if !value.is_finite() {
        return Err(Error::Resource(format!("e^(pi sqrt(2i/3)) overflows for i = {i}")));
    }
    Ok(BigUint::from_f64(value.ceil()).expect("finite and positive"))
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, j| acc * (n - j) / (j + 1))
}

/// One row of a dominance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceRow {
    pub i: u32,
    pub coefficient: BigInt,
    pub bound: BigUint,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceReport {
    /// `D = C·m` with `C = max B_j` and `m` the top degree.
    pub d: u64,
    pub rows: Vec<DominanceRow>,
}

impl DominanceReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "D": self.d,
            "passed": self.passed(),
            "rows": self.rows.iter().map(|r| json!({
                "i": r.i,
                "coefficient": r.coefficient.to_string(),
                "bound": r.bound.to_string(),
                "holds": r.holds,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks `[z^i] Σ_k b_k(Sym^k X) z^k ≤ C(i+D-1, D-1)` for `i ≤ i_max`, the
/// coefficients of `(1 - z)^{-D}`.
pub fn dominance_check(b: &BettiProfile, i_max: u32) -> DominanceReport {
    let d = b.max_betti() * b.top_degree() as u64;
    let series = diag_series(b, i_max as usize);
    let rows = (0..=i_max)
        .map(|i| {
            let coefficient = series.coefficient(i as usize).expect("within order").to_integer();
            let bound = if d == 0 {
                if i == 0 { BigUint::one() } else { BigUint::zero() }
            } else {
                binomial(i as u64 + d - 1, d - 1)
            };
            let holds = coefficient <= BigInt::from(bound.clone());
            DominanceRow { i, coefficient, bound, holds }
        })
        .collect();
    DominanceReport { d, rows }
}

fn check_double_coset_args(n: u32, a: u32, i: u32) -> Result<()> {
    if n < a || n < 2 * i {
        return Err(Error::InvalidArgument(format!(
            "double cosets need n >= max(a, 2i); got n = {n}, a = {a}, i = {i}"
        )));
    }
    Ok(())
}

/// Orbits of `S_{n-a}` (permuting `1..=n-a`, fixing the rest) on pairs of
/// injective `2i`-tuples from `{1..n}`, counted by canonical forms.
///
/// The canonical form renames the movable letters in order of first
/// appearance and keeps the fixed ones.
pub fn double_coset_count(n: u32, a: u32, i: u32, limits: &Limits) -> Result<BigUint> {
    check_double_coset_args(n, a, i)?;
    let k = 2 * i as usize;
    let tuples: u128 = ((n as u128 - k as u128 + 1)..=n as u128).product();
    let work = tuples.saturating_mul(tuples);
    if work > limits.max_work as u128 {
        return Err(Error::Resource(format!(
            "double coset enumeration needs {work} pairs (limit {})",
            limits.max_work
        )));
    }
    let movable = n - a;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut first = vec![0u32; k];
    let mut second = vec![0u32; k];
    for_each_injective(n, k, &mut first, 0, 0, &mut |t1| {
        for_each_injective(n, k, &mut second, 0, 0, &mut |t2| {
            let mut rename = vec![0u32; movable as usize + 1];
            let mut next = 0;
            let form: Vec<u32> = t1
                .iter()
                .chain(t2.iter())
                .map(|&x| {
                    if x > movable {
                        x
                    } else {
                        if rename[x as usize] == 0 {
                            next += 1;
                            rename[x as usize] = next;
                        }
                        rename[x as usize]
                    }
                })
                .collect();
            seen.insert(form);
        });
    });
    Ok(BigUint::from(seen.len()))
}

fn for_each_injective(n: u32, k: usize, buf: &mut [u32], pos: usize, used: u64, f: &mut dyn FnMut(&[u32])) {
    if pos == k {
        f(buf);
        return;
    }
    for x in 1..=n {
        if used & (1 << x) == 0 {
            buf[pos] = x;
            for_each_injective(n, k, buf, pos + 1, used | (1 << x), f);
        }
    }
}

/// The same orbit count by Burnside's lemma: a permutation fixes a pair of
/// tuples exactly when every entry is a fixed letter.
pub fn double_coset_burnside(n: u32, a: u32, i: u32) -> Result<BigUint> {
    check_double_coset_args(n, a, i)?;
    let k = 2 * i;
    let falling = |f: u32| -> BigUint {
        if f < k {
            BigUint::zero()
        } else {
            ((f - k + 1)..=f).fold(BigUint::one(), |acc, x| acc * x)
        }
    };
    let total: BigUint = partitions_of(n - a)
        .iter()
        .map(|mu| {
            let t = falling(mu.multiplicity(1) + a);
            class_size(mu) * &t * &t
        })
        .sum();
    Ok(total / factorial(n - a))
}

/// `Σ_k C(2i,k)^2 k!`: the number of partial matchings between two sets of
/// `2i` positions, which is the `a = 0` count once `n ≥ 4i`.
pub fn double_coset_stable_count(i: u32) -> BigUint {
    let k_max = 2 * i as u64;
    (0..=k_max)
        .map(|k| {
            let c = binomial(k_max, k);
            &c * &c * factorial(k as u32)
        })
        .sum()
}

fn stirling_second_row(k: u32) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..k {
        let mut next = vec![BigUint::zero(); row.len() + 1];
        for (j, v) in row.iter().enumerate() {
            next[j + 1] += v;
            next[j] += v * j;
        }
        row = next;
    }
    row
}

/// `E[Y^k]` for `Y ~ Poisson(λ)`: the Touchard polynomial `Σ_j S(k,j) λ^j`.
fn poisson_moment(k: u32, lambda: &Rational) -> Rational {
    stirling_second_row(k)
        .iter()
        .enumerate()
        .map(|(j, s)| rational::from_biguint(s) * rational::pow(lambda, j as i64))
        .sum()
}

/// `E[(b + Y)^e]` for `Y ~ Poisson(λ)`.
fn shifted_poisson_moment(b: &Rational, e: u32, lambda: &Rational) -> Rational {
    (0..=e)
        .map(|k| {
            rational::from_biguint(&binomial(e as u64, k as u64))
                * rational::pow(b, (e - k) as i64)
                * poisson_moment(k, lambda)
        })
        .sum()
}

/// `E[|P|(shift_1 + Y_1, shift_2 + Y_2, ...)]` with independent
/// `Y_j ~ Poisson(1/j)`, where `|P|` has the absolute values of the
/// coefficients of `P`.
fn abs_poisson_expectation(poly: &CharacterPolynomial, shift: impl Fn(u32) -> Rational) -> Rational {
    poly.abs_coefficients()
        .terms()
        .map(|(m, c)| {
            m.exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(c.clone(), |acc, (idx, &e)| {
                    let j = idx as u32 + 1;
                    acc * shifted_poisson_moment(&shift(j), e, &rational::ratio(1, j as i64))
                })
        })
        .sum()
}

/// A bound `|⟨P, H^p(PConf_n)⟩| ≤ M_P(p)` valid for every `n`:
/// `M_P(p) = p(p) · E[|P|(⌊2p/j⌋ + Y_j)]`, `Y_j ~ Poisson(1/j)` independent.
///
/// `H^p` is a sum of at most `p(p)` representations induced from
/// one-dimensional characters of centralizers `Z` of permutations moving at
/// most `2p` points, so each summand contributes at most the average of `|P|`
/// over `Z`. On the moved points a permutation has at most `⌊2p/j⌋`
/// `j`-cycles; on the fixed points `Z` acts through a full symmetric group,
/// whose cycle-count moments are dominated by the Poisson ones.
pub fn isotypic_majorant(poly: &CharacterPolynomial, p: u32) -> Rational {
    let count = rational::from_biguint(&partition_count(p));
    count * abs_poisson_expectation(poly, |j| rational::int((2 * p) / j))
}

/// `E[|P|(2p/j + Y_j)]` without the floors: a polynomial in `p` with
/// nonnegative coefficients that dominates the expectation in
/// [`isotypic_majorant`].
pub(crate) fn smooth_expectation(poly: &CharacterPolynomial, p: u32) -> Rational {
    abs_poisson_expectation(poly, |j| rational::ratio(2 * p as i64, j as i64))
}

/// Finite-range growth estimate for a nonnegative sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthEstimate {
    pub samples: Vec<(u32, Rational)>,
    /// `(i, slope)`: slope of `ln f` over the window ending at `i`.
    pub slopes: Vec<(u32, f64)>,
    /// The last windowed slope, an approximation of `ln f(i) / i`'s limit.
    pub fitted_rate: f64,
    /// Slopes in the tail never increase and end strictly below where they
    /// started (or at or below zero). A finite-sample proxy only.
    pub subexponential_consistent: bool,
    /// Fewer than `4w` samples: the verdict says little.
    pub range_limited: bool,
}

impl GrowthEstimate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "fitted_rate_approx": self.fitted_rate,
            "subexponential_consistent": self.subexponential_consistent,
            "range_limited": self.range_limited,
            "note": "finite-range diagnostic; slopes are floating-point approximations",
            "slopes_approx": self.slopes.iter().map(|(i, s)| json!([i, s])).collect::<Vec<_>>(),
        })
    }

    /// CSV with columns `i,value,log_slope`; the slope is empty where no
    /// window ends.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,value,log_slope\n");
        for (i, v) in &self.samples {
            let slope = self
                .slopes
                .iter()
                .find(|(j, _)| j == i)
                .map(|(_, s)| format!("{s:e}"))
                .unwrap_or_default();
            let _ = writeln!(out, "{i},{v},{slope}");
        }
        out
    }
}

fn ln_positive(x: &Rational) -> f64 {
    fn ln_int(n: &BigInt) -> f64 {
        let bits = n.bits();
        if bits < 1000 {
            return n.to_f64().expect("finite").ln();
        }
        let shift = bits - 64;
        (n >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_int(x.numer()) - ln_int(x.denom())
}

/// Windowed slopes of `ln f(i)` against `i`, over the samples with
/// `f(i) > 0`.
pub fn growth_diagnostic(samples: &[(u32, Rational)], window: usize) -> Result<GrowthEstimate> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    if samples.iter().any(|(_, v)| v.is_negative()) {
        return Err(Error::InvalidArgument("growth diagnostics need nonnegative values".into()));
    }
    let positive: Vec<(u32, f64)> = samples
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (*i, ln_positive(v)))
        .collect();
    if positive.len() < 2 * window {
        return Err(Error::InvalidArgument(format!(
            "need at least {} positive samples for window {window}, got {}",
            2 * window,
            positive.len()
        )));
    }
    let slopes: Vec<(u32, f64)> = (window..positive.len())
        .map(|k| {
            let (i1, l1) = positive[k];
            let (i0, l0) = positive[k - window];
            (i1, (l1 - l0) / (i1 as f64 - i0 as f64))
        })
        .collect();
    let tail = &slopes[slopes.len() / 2..];
    let nonincreasing = tail
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 + 1e-9 * w[0].1.abs().max(1.0));
    let first = tail[0].1;
    let last = tail[tail.len() - 1].1;
    let decaying = last <= 0.0 || last < first - 1e-6 * first.abs();
    Ok(GrowthEstimate {
        samples: samples.to_vec(),
        slopes,
        fitted_rate: last,
        subexponential_consistent: nonincreasing && decaying,
        range_limited: samples.len() < 4 * window,
    })
}
