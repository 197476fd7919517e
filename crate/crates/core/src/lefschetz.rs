//! Both sides of the twisted trace formula for configuration spaces and
//! symmetric products of `A^r`, stable limits, convergence reports, tail
//! bounds and the zeta-function counting oracle.
//!
//! For `A^r`, `H^{(2r-1)p}(PConf_n)` is pure of Frobenius eigenvalue
//! `q^{rp}`, so at every `n`
//!
//! ```text
//! Σ_{y ∈ UConf_n(A^r)(F_q)} P(y) = q^{nr} Σ_p (-1)^{(2r-1)p} q^{-rp} ⟨P, H^{(2r-1)p}⟩
//! ```
//!
//! holds exactly, and `Σ_{y ∈ Sym^n(A^r)(F_q)} P(y) = q^{nr} ⟨P, 1⟩`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::bounds::{exp_up, hr_constant, hr_majorant, isotypic_majorant, smooth_expectation};
use crate::charpoly::{inner_product_at, stable_inner_product, CharacterPolynomial};
use crate::error::{Error, Result};
use crate::fq::{statistic_sum, Kind, Space};
use crate::limits::Limits;
use crate::orlik_solomon::pconf_character;
use crate::rational::{self, Rational};
use crate::series::TruncatedSeries;
use crate::symmetric::inner_product;

fn q_rational(q: u64) -> Rational {
    rational::int(q)
}

/// One degree's contribution to the spectral side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictionTerm {
    pub p: u32,
    /// `(-1)^{(2r-1)p}`.
    pub sign: i32,
    /// Frobenius acts on this degree by `q^weight`.
    pub weight: u32,
    pub multiplicity: Rational,
}

/// The spectral side of the trace formula at one level `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePrediction {
    pub n: u32,
    pub r: u32,
    pub q: u64,
    pub terms: Vec<PredictionTerm>,
    pub total: Rational,
}

impl TracePrediction {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "r": self.r,
            "q": self.q,
            "terms": self.terms.iter().map(|t| json!({
                "p": t.p,
                "sign": t.sign,
                "weight": t.weight,
                "multiplicity": t.multiplicity.to_string(),
            })).collect::<Vec<_>>(),
            "total": self.total.to_string(),
        })
    }
}

fn check_space_args(r: u32, q: u64) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q = {q} is not a field size")));
    }
    Ok(())
}

/// `q^{nr} Σ_p (-1)^{(2r-1)p} q^{-rp} ⟨P, H^{(2r-1)p}(PConf_n(A^r))⟩`.
pub fn gl_rhs_affine(r: u32, n: u32, q: u64, poly: &CharacterPolynomial, limits: &Limits) -> Result<TracePrediction> {
    check_space_args(r, q)?;
    let chi_p = poly.class_function(n);
    let mut terms = Vec::new();
    let mut total = Rational::zero();
    for p in 0..n {
        let multiplicity = inner_product(&chi_p, &pconf_character(n, p, limits)?)?;
        let sign = if ((2 * r - 1) * p) % 2 == 0 { 1 } else { -1 };
        let weight = r * p;
        total += rational::int(sign) * rational::pow(&q_rational(q), -(weight as i64)) * &multiplicity;
        terms.push(PredictionTerm { p, sign, weight, multiplicity });
    }
    total *= rational::pow(&q_rational(q), (n * r) as i64);
    Ok(TracePrediction { n, r, q, terms, total })
}

/// `q^{nr} ⟨P, 1⟩`: only `H^0` of `(A^r)^n` survives.
pub fn gl_rhs_sym_affine(r: u32, n: u32, q: u64, poly: &CharacterPolynomial) -> Result<Rational> {
    check_space_args(r, q)?;
    Ok(rational::pow(&q_rational(q), (n * r) as i64)
        * inner_product_at(poly, &CharacterPolynomial::one(), n))
}

/// Which identity to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlSpace {
    /// `UConf_n(A^r)`.
    Affine(u32),
    /// `Sym^n(A^r)`.
    SymAffine(u32),
}

/// Point-count side, spectral side, and whether they agree exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlReport {
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

impl GlReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({"lhs": self.lhs.to_string(), "rhs": self.rhs.to_string(), "equal": self.equal})
    }
}

/// Computes both sides. A disagreement is reported, not raised: it would
/// falsify the model.
pub fn gl_check(space: GlSpace, n: u32, q: u64, poly: &CharacterPolynomial, limits: &Limits) -> Result<GlReport> {
    let (lhs, rhs) = match space {
        GlSpace::Affine(r) => (
            statistic_sum(Space::Affine(r), n, q, Kind::Uconf, poly, limits)?,
            gl_rhs_affine(r, n, q, poly, limits)?.total,
        ),
        GlSpace::SymAffine(r) => (
            statistic_sum(Space::Affine(r), n, q, Kind::Sym, poly, limits)?,
            gl_rhs_sym_affine(r, n, q, poly)?,
        ),
    };
    let equal = lhs == rhs;
    Ok(GlReport { lhs, rhs, equal })
}

fn poly_degree_or_zero(poly: &CharacterPolynomial) -> u32 {
    poly.degree().unwrap_or(0)
}

/// The stable range used for degree `p`: `4p + deg P`, at least 1.
pub fn stable_level(poly: &CharacterPolynomial, p: u32) -> u32 {
    (4 * p + poly_degree_or_zero(poly)).max(1)
}

/// Truncation of the limit of the normalized sums over `UConf_n(A^r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableLimit {
    pub i_max: u32,
    /// `(p, level used, stable multiplicity)`.
    pub multiplicities: Vec<(u32, u32, Rational)>,
    pub value: Rational,
}

/// `Σ_{p ≤ i_max} (-1)^{(2r-1)p} q^{-rp} ⟨P, H^{(2r-1)p}⟩_stable`, each
/// multiplicity taken at level `4p + deg P` and re-checked one level up
/// when that is within the character bound.
pub fn stable_limit_affine(r: u32, poly: &CharacterPolynomial, q: u64, i_max: u32, limits: &Limits) -> Result<StableLimit> {
    check_space_args(r, q)?;
    let bound = limits.max_pconf_n;
    if stable_level(poly, i_max) > bound {
        let degree = poly_degree_or_zero(poly);
        let hint = if degree <= bound {
            format!("the largest feasible i_max is {}", (bound - degree) / 4)
        } else {
            "no i_max is feasible".to_string()
        };
        return Err(Error::Resource(format!(
            "degree {i_max} stabilizes at n = {} beyond the character bound {bound}; {hint}",
            stable_level(poly, i_max)
        )));
    }
    let mut value = Rational::zero();
    let mut multiplicities = Vec::new();
    for p in 0..=i_max {
        let n = stable_level(poly, p);
        let m = multiplicity_at(poly, n, p, limits)?;
        if n < bound {
            let again = multiplicity_at(poly, n + 1, p, limits)?;
            assert_eq!(m, again, "multiplicity of H^{p} against {poly} not stable at n = {n}");
        }
        let sign = if ((2 * r - 1) * p) % 2 == 0 { 1 } else { -1 };
        value += rational::int(sign) * rational::pow(&q_rational(q), -((r * p) as i64)) * &m;
        multiplicities.push((p, n, m));
    }
    Ok(StableLimit { i_max, multiplicities, value })
}

fn multiplicity_at(poly: &CharacterPolynomial, n: u32, p: u32, limits: &Limits) -> Result<Rational> {
    inner_product(&poly.class_function(n), &pconf_character(n, p, limits)?)
}

/// The largest `i_max` whose stable level fits under the character bound.
pub fn max_feasible_i_max(poly: &CharacterPolynomial, limits: &Limits) -> Option<u32> {
    let degree = poly_degree_or_zero(poly);
    (degree <= limits.max_pconf_n).then(|| (limits.max_pconf_n - degree) / 4)
}

/// `N(n, P) = ⌊(n - deg P) / 4⌋`, the last degree known to be stable at `n`.
pub fn stability_slope(n: u32, poly: &CharacterPolynomial) -> u32 {
    n.saturating_sub(poly_degree_or_zero(poly)) / 4
}

fn check_tail_args(q: u64, r: u32) -> Result<()> {
    if q < 2 || r == 0 {
        return Err(Error::InvalidArgument(format!(
            "the tail envelope diverges unless q^r > 1 (q = {q}, r = {r})"
        )));
    }
    Ok(())
}

fn tail_term(poly: &CharacterPolynomial, q: u64, r: u32, p: u32) -> Rational {
    isotypic_majorant(poly, p) * rational::pow(&q_rational(q), -((r * p) as i64))
}

/// Number of degrees summed exactly before the geometric envelope.
const EXACT_TAIL_TERMS: u32 = 64;

/// An exact rational upper bound for `Σ_{p ≥ from} q^{-rp} M_P(p)`, with
/// `M_P` the multiplicity majorant of [`isotypic_majorant`].
///
/// The first terms are summed exactly. Beyond some `p0`, `M_P(p)` is at most
/// `e^{c√p} E(p)` with `c = π√(2/3)` and `E` a polynomial of degree `e` with
/// nonnegative coefficients, so consecutive terms have ratio at most
/// `ρ = q^{-r} e^{c/(2√p0)} ((p0+1)/p0)^e`, and the rest is at most the
/// first envelope term over `1 - ρ`.
pub fn tail_bound(poly: &CharacterPolynomial, q: u64, r: u32, from: u32) -> Result<Rational> {
    check_tail_args(q, r)?;
    let q_r = rational::pow(&q_rational(q), r as i64);
    let target = (Rational::one() + q_r.recip()) / rational::int(2);
    let e = poly
        .abs_coefficients()
        .terms()
        .map(|(m, _)| m.total_degree())
        .max()
        .unwrap_or(0) as i64;
    let mut p0 = from.max(1) + EXACT_TAIL_TERMS;
    let rho = loop {
        let growth = Rational::from_float(exp_up(hr_constant() / (2.0 * (p0 as f64).sqrt())))
            .expect("finite");
        let poly_ratio = rational::pow(&rational::ratio(p0 as i64 + 1, p0 as i64), e);
        let rho = growth * poly_ratio / &q_r;
        if rho <= target {
            break rho;
        }
        p0 *= 2;
    };
    let mut total: Rational = (from..p0).map(|p| tail_term(poly, q, r, p)).sum();
    let envelope = rational::from_biguint(&hr_majorant(p0)?)
        * smooth_expectation(poly, p0)
        * rational::pow(&q_rational(q), -((r * p0) as i64));
    total += envelope / (Rational::one() - rho);
    Ok(total)
}

/// `Σ_{from ≤ p < n} q^{-rp} M_P(p)`: the same majorant restricted to the
/// degrees present at level `n`. Zero when `from ≥ n`.
pub fn finite_tail_bound(poly: &CharacterPolynomial, q: u64, r: u32, from: u32, n: u32) -> Result<Rational> {
    check_tail_args(q, r)?;
    Ok((from..n).map(|p| tail_term(poly, q, r, p)).sum())
}

/// `Σ_n c_n t^n = Z(t) / Z(t^2)`, the generating function of multiplicity-free
/// effective cycles (squarefree divisors), through `t^{n_max}`.
pub fn zeta_squarefree_counts(space: Space, q: u64, n_max: u32) -> Result<Vec<BigInt>> {
    let order = n_max as usize;
    let q = q_rational(q);
    let line = |c: Rational, k| TruncatedSeries::binomial(c, k, order);
    let ratio = match space {
        Space::Affine(1) => line(-q.clone(), 2).mul(&line(-q, 1).inverse()?),
        Space::ProjectiveLine => line(-q.clone(), 2)
            .mul(&line(-Rational::one(), 2))
            .mul(&line(-q, 1).mul(&line(-Rational::one(), 1)).inverse()?),
        other => {
            return Err(Error::Unsupported(format!("no zeta oracle for {other}")));
        }
    };
    Ok(ratio.coefficients().iter().map(|c| c.to_integer()).collect())
}

/// `lim q^{-n} c_n`, the numerator of `Z(t) / Z(t^2)` over `1 - qt` at
/// `t = 1/q`.
pub fn zeta_limit(space: Space, q: u64) -> Result<Rational> {
    let t = q_rational(q).recip();
    match space {
        Space::Affine(1) => Ok(Rational::one() - &t),
        Space::ProjectiveLine => Ok((Rational::one() + &t) * (Rational::one() - &t)),
        other => Err(Error::Unsupported(format!("no zeta oracle for {other}"))),
    }
}

/// One level of a convergence report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub n: u32,
    /// `dim Y_n`, the normalizing exponent.
    pub dimension: u32,
    pub raw_sum: Rational,
    pub normalized: Rational,
    pub delta: Rational,
    /// `|delta|` against the tail majorant, where one applies.
    pub within_tail_bound: Option<bool>,
}

/// Normalized statistic sums against their limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub space: Space,
    pub kind: Kind,
    pub q: u64,
    pub poly: CharacterPolynomial,
    /// Truncation degree of the stable limit, for `UConf_n(A^r)`.
    pub i_max: Option<u32>,
    pub limit: Rational,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// `|delta|` never increases along the rows.
    pub fn deltas_nonincreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].delta.abs() <= w[0].delta.abs())
    }

    /// `|normalized_{n+1} - normalized_n|` never increases along the rows.
    pub fn steps_nonincreasing(&self) -> bool {
        let steps: Vec<Rational> = self
            .rows
            .windows(2)
            .map(|w| (&w[1].normalized - &w[0].normalized).abs())
            .collect();
        steps.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "space": self.space.to_string(),
            "kind": self.kind.to_string(),
            "q": self.q,
            "P": self.poly.to_string(),
            "i_max": self.i_max,
            "stable_limit": self.limit.to_string(),
            "deltas_nonincreasing": self.deltas_nonincreasing(),
            "steps_nonincreasing": self.steps_nonincreasing(),
            "rows": self.rows.iter().map(|row| json!({
                "n": row.n,
                "dim": row.dimension,
                "raw_sum": row.raw_sum.to_string(),
                "normalized": row.normalized.to_string(),
                "delta": row.delta.to_string(),
                "within_tail_bound": row.within_tail_bound,
            })).collect::<Vec<_>>(),
        })
    }

    /// CSV with columns `n,raw_sum,normalized,delta,within_tail_bound`; the
    /// last column is `n/a` where no bound applies.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,raw_sum,normalized,delta,within_tail_bound\n");
        for row in &self.rows {
            let within = row.within_tail_bound.map_or("n/a".to_string(), |b| b.to_string());
            let _ = writeln!(out, "{},{},{},{},{}", row.n, row.raw_sum, row.normalized, row.delta, within);
        }
        out
    }
}

/// A bound on `|normalized_n - limit|` for `UConf_n(A^r)` against the limit
/// truncated at `i_max`.
///
/// Degrees `p ≤ N(n, P)` are stable at `n` and cancel. Degrees in
/// `(N, i_max]` differ by at most `2 M_P(p) q^{-rp}`; degrees above `i_max`
/// are missing from the truncation and contribute at most the tail from
/// `i_max + 1`, cut off at the top degree `n - 1`.
pub fn convergence_bound(poly: &CharacterPolynomial, q: u64, r: u32, n: u32, i_max: u32) -> Result<Rational> {
    let slope = stability_slope(n, poly);
    let middle: Rational = ((slope + 1)..=i_max)
        .map(|p| rational::int(2) * tail_term(poly, q, r, p))
        .sum();
    Ok(middle + finite_tail_bound(poly, q, r, i_max + 1, n)?)
}

/// Normalized sums `q^{-n·dim} Σ_y P(y)` for each `n` in the range, with
/// their distance to the limit.
///
/// The limit is the truncated stable limit for `UConf_n(A^r)`, `⟨P, 1⟩` for
/// `Sym^n(A^r)`, and for `P^1` (only `P = 1`) the zeta-function limit.
pub fn convergence_report(
    space: Space,
    kind: Kind,
    poly: &CharacterPolynomial,
    q: u64,
    n_range: std::ops::RangeInclusive<u32>,
    i_max: Option<u32>,
    limits: &Limits,
) -> Result<ConvergenceReport> {
    let dim = space.dimension();
    let is_constant_one = *poly == CharacterPolynomial::one();
    let (limit, i_max) = match (space, kind) {
        (Space::Affine(r), Kind::Uconf) => {
            let i_max = match i_max {
                Some(i) => i,
                None => max_feasible_i_max(poly, limits).ok_or_else(|| {
                    Error::Resource(format!("{poly} has degree above the character bound"))
                })?,
            };
            (stable_limit_affine(r, poly, q, i_max, limits)?.value, Some(i_max))
        }
        (Space::Affine(_), Kind::Sym) => (stable_inner_product(poly, &CharacterPolynomial::one())?, None),
        (Space::ProjectiveLine, _) if !is_constant_one => {
            return Err(Error::Unsupported(
                "only P = 1 has a known limit on the projective line".into(),
            ));
        }
        (Space::ProjectiveLine, Kind::Uconf) => (zeta_limit(space, q)?, None),
        (Space::ProjectiveLine, Kind::Sym) => (q_rational(q) / q_rational(q - 1), None),
    };
    let mut rows = Vec::new();
    for n in n_range {
        let raw_sum = statistic_sum(space, n, q, kind, poly, limits)?;
        let normalized = &raw_sum * rational::pow(&q_rational(q), -((n * dim) as i64));
        let delta = &normalized - &limit;
        let within_tail_bound = match (space, kind, i_max) {
            (Space::Affine(r), Kind::Uconf, Some(i)) => {
                Some(delta.abs() <= convergence_bound(poly, q, r, n, i)?)
            }
            _ => None,
        };
        rows.push(ConvergenceRow { n, dimension: n * dim, raw_sum, normalized, delta, within_tail_bound });
    }
    Ok(ConvergenceReport { space, kind, q, poly: poly.clone(), i_max, limit, rows })
}
