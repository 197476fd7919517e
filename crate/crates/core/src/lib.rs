//! Exact symmetric-group characters of configuration spaces and symmetric
//! products, point counts over finite fields, and the twisted trace-formula
//! identities relating the two.
//!
//! Everything here is exact: integers are arbitrary precision and rationals
//! are kept in lowest terms. Floating point appears only in
//! [`bounds::growth_diagnostic`] and in the upward-rounded transcendental
//! majorants of [`bounds`].
//!
//! Module map:
//!
//! - [`symmetric`]: partitions, class sizes, irreducible characters, class
//!   functions and their inner products.
//! - [`charpoly`]: character polynomials in the cycle counts `X1, X2, ...`.
//! - [`series`]: truncated power series and Betti numbers of symmetric
//!   products.
//! - [`orlik_solomon`]: the Arnol'd algebra with its straightening rule and
//!   the resulting `S_n`-characters of `H^*(PConf_n(A^r))`.
//! - [`fq`]: finite fields, closed points, effective zero-cycles and the
//!   averaged statistic `P(y)`.
//! - [`lefschetz`]: both sides of the twisted trace formula, stable limits
//!   and convergence reports.
//! - [`bounds`]: partition-count majorants, coefficient dominance, double
//!   coset counts and growth diagnostics.

pub mod bounds;
pub mod charpoly;
pub mod error;
pub mod fq;
pub mod lefschetz;
pub mod limits;
pub mod orlik_solomon;
pub mod rational;
pub mod series;
pub mod symmetric;

pub use charpoly::CharacterPolynomial;
pub use error::{Error, Result};
pub use limits::Limits;
pub use rational::Rational;
pub use series::{BettiProfile, TruncatedSeries};
pub use symmetric::{ClassFunction, Partition};
