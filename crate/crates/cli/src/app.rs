//! Argument parsing, dispatch and exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use confstat::bounds::{
    dominance_check, double_coset_burnside, double_coset_count, double_coset_stable_count, growth_diagnostic,
    hr_majorant,
};
use confstat::charpoly::{fit_character_polynomial, inner_product_at, stable_inner_product, Sample};
use confstat::fq::{closed_points, closed_points_json, count_cycles, statistic_sum, Kind, Space};
use confstat::lefschetz::{convergence_report, gl_check, gl_rhs_affine, max_feasible_i_max, stable_limit_affine, GlSpace};
use confstat::orlik_solomon::{
    invariant_dim, irreducible_multiplicity, pconf_character, stirling_first, uconf_betti, GradedCharacter,
};
use confstat::series::{diag_series, sym_betti};
use confstat::symmetric::{class_size, irreducible_character, partition_counts, partitions_of};
use confstat::{rational, BettiProfile, CharacterPolynomial, Limits, Partition, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cache::{Cache, CacheKey};
use crate::expr::parse_polynomial;
use crate::render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_FALSIFIED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "confstat", version, about = "Exact cohomology characters, F_q point counts and trace-formula checks")]
pub struct Cli {
    /// Emit a JSON envelope with command, params, result, exact and version.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV with a header row.
    #[arg(long, global = true)]
    csv: bool,
    /// Cache directory; CONFSTAT_CACHE_DIR takes precedence.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Recompute on every cache hit and compare byte for byte.
    #[arg(long, global = true)]
    verify_cache: bool,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on enumerated candidates.
    #[arg(long, global = true)]
    max_work: Option<u64>,
    /// Largest n for which PConf_n characters are computed.
    #[arg(long, global = true)]
    max_pconf_n: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partitions of n with z_mu and class sizes.
    Partitions {
        #[arg(long)]
        n: u32,
        /// Include the irreducible character table.
        #[arg(long)]
        table: bool,
    },
    #[command(subcommand)]
    Charpoly(CharpolyCmd),
    #[command(subcommand)]
    Betti(BettiCmd),
    #[command(subcommand)]
    Pconf(PconfCmd),
    /// Number of F_q-points of UConf_n or Sym^n.
    Count {
        #[command(flatten)]
        target: Target,
        /// List the closed points of degree at most n instead.
        #[arg(long)]
        points: bool,
    },
    /// Sum of P(y) over the F_q-points.
    Stats {
        #[command(flatten)]
        target: Target,
        #[arg(long = "P", alias = "poly", default_value = "1")]
        poly: String,
    },
    /// Both sides of the twisted trace formula.
    Glcheck {
        #[arg(long, value_enum)]
        space: GlSpaceArg,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u64,
        #[arg(long = "P", alias = "poly", default_value = "1")]
        poly: String,
        /// Include the per-degree terms of the spectral side.
        #[arg(long)]
        terms: bool,
    },
    /// Stable limit of the normalized sums over UConf_n(A^r), truncated at i_max.
    Limit {
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        q: u64,
        #[arg(long = "P", alias = "poly", default_value = "1")]
        poly: String,
        #[arg(long)]
        i_max: Option<u32>,
    },
    /// Normalized sums against their limit over a range of n.
    Converge {
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, value_enum, default_value_t = KindArg::Uconf)]
        kind: KindArg,
        #[arg(long)]
        q: u64,
        #[arg(long = "P", alias = "poly", default_value = "1")]
        poly: String,
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        i_max: Option<u32>,
    },
    #[command(subcommand)]
    Bounds(BoundsCmd),
}

#[derive(Args, Debug)]
struct Target {
    #[arg(long, value_enum)]
    space: SpaceArg,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, value_enum, default_value_t = KindArg::Uconf)]
    kind: KindArg,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    q: u64,
}

#[derive(Subcommand, Debug)]
enum CharpolyCmd {
    /// Values of P on the classes of S_n.
    Eval {
        #[arg(long = "P", alias = "poly")]
        poly: String,
        #[arg(long)]
        n: u32,
        /// A single cycle type, e.g. 2,1.
        #[arg(long)]
        class: Option<String>,
    },
    /// <P, Q> at level n, or the stable value when n is omitted.
    Inner {
        #[arg(long = "P", alias = "poly")]
        poly: String,
        #[arg(long = "Q")]
        other: String,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Fit a character polynomial to H^p(PConf_n) characters or to samples.
    Fit {
        /// Cohomological degree p of the PConf_n characters to fit.
        #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
        degree: Option<u32>,
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        #[arg(long, default_value_t = 7)]
        n_max: u32,
        /// JSON array of {"n", "class", "value"} samples.
        #[arg(long)]
        samples: Option<PathBuf>,
        /// Degree cap; defaults to 2p for PConf characters.
        #[arg(long)]
        max_degree: Option<u32>,
        /// Level at which to compare the fit with the actual character.
        #[arg(long)]
        predict: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum BettiCmd {
    /// Betti numbers of Sym^n X.
    Sym {
        #[arg(long)]
        betti: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: Option<u32>,
    },
    /// Diagonal series sum_n b_n(Sym^n X) z^n.
    Diag {
        #[arg(long)]
        betti: String,
        #[arg(long, default_value_t = 32)]
        order: usize,
    },
}

#[derive(Subcommand, Debug)]
enum PconfCmd {
    /// Character of H^p(PConf_n(A^r)), or of every degree when p is omitted.
    Char {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Betti numbers of PConf_n(A^1) and UConf_n(A^1).
    Betti {
        #[arg(long)]
        n: u32,
    },
    /// dim H^p(PConf_n)^{S_{n-a}}.
    Invariants {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        a: u32,
    },
    /// Multiplicity of the padded irreducible lambda[n] in H^p(PConf_n).
    Multiplicity {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
        /// Parts of lambda, e.g. 1,1; empty for the trivial padding.
        #[arg(long, default_value = "")]
        lambda: String,
    },
}

#[derive(Subcommand, Debug)]
enum BoundsCmd {
    /// p(i) against the Hardy-Ramanujan majorant.
    Hr {
        #[arg(long, default_value_t = 200)]
        i_max: u32,
    },
    /// Coefficient dominance by (1-z)^{-D}.
    Dominance {
        #[arg(long, required_unless_present = "random")]
        betti: Option<String>,
        /// Check this many random profiles drawn with --seed.
        #[arg(long, conflicts_with = "betti")]
        random: Option<usize>,
        #[arg(long, default_value_t = 20)]
        i_max: u32,
    },
    /// Number of (S_{n-a}, S_{n-2i}) double cosets in S_n.
    Dcoset {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        i: u32,
        #[arg(long, value_enum, default_value_t = DcosetMethod::Canonical)]
        method: DcosetMethod,
    },
    /// Finite-range growth diagnostic.
    Growth {
        #[arg(long, value_enum)]
        sequence: Sequence,
        #[arg(long, default_value_t = 60)]
        i_max: u32,
        #[arg(long, default_value_t = 5)]
        window: usize,
        /// Level for the invariants sequence.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 0)]
        a: u32,
        /// Comma-separated values for the values sequence, indexed from 0.
        #[arg(long)]
        values: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceArg {
    Affine,
    ProjLine,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Uconf,
    Sym,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GlSpaceArg {
    Affine,
    SymAffine,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DcosetMethod {
    Canonical,
    Burnside,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sequence {
    Partitions,
    Dcoset,
    Invariants,
    Values,
}

impl SpaceArg {
    fn space(self, r: u32) -> Space {
        match self {
            SpaceArg::Affine => Space::Affine(r),
            SpaceArg::ProjLine => Space::ProjectiveLine,
        }
    }
}

impl KindArg {
    fn kind(self) -> Kind {
        match self {
            KindArg::Uconf => Kind::Uconf,
            KindArg::Sym => Kind::Sym,
        }
    }
}

fn enum_name(v: impl ValueEnum) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

type Compute = Box<dyn FnOnce() -> Result<Value>>;

/// A resolved command: what to cache under, and how to compute it.
struct Job {
    command: &'static str,
    params: Value,
    exact: bool,
    compute: Compute,
}

fn poly_arg(text: &str, flag: &str) -> Result<CharacterPolynomial> {
    parse_polynomial(text).map_err(|e| anyhow!("{flag} {text:?}: {e}"))
}

fn partition_arg(text: &str) -> Result<Partition> {
    let text = text.trim().trim_start_matches('[').trim_end_matches(']');
    let parts = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().with_context(|| format!("bad part {s:?}")))
        .collect::<Result<Vec<u32>>>()?;
    Ok(Partition::try_from(parts)?)
}

fn str_value(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

#[derive(Deserialize)]
struct SampleRecord {
    n: u32,
    class: Vec<u32>,
    value: String,
}

fn random_profile(rng: &mut ChaCha8Rng) -> BettiProfile {
    let top = rng.gen_range(1..=5usize);
    let mut b: Vec<u64> = (0..=top).map(|_| rng.gen_range(0..=3)).collect();
    b[0] = 1;
    b[top] = rng.gen_range(1..=3);
    BettiProfile::new(b).expect("valid profile")
}

fn class_function_rows(values: &Value) -> Vec<Value> {
    values
        .as_object()
        .map(|m| m.iter().map(|(k, v)| json!({"class": k, "value": v})).collect())
        .unwrap_or_default()
}

fn resolve(cmd: Command, limits: Limits, seed: u64) -> Result<Job> {
    let job = |command, params, compute: Compute| Job { command, params, exact: true, compute };
    Ok(match cmd {
        Command::Partitions { n, table } => job(
            "partitions",
            json!({"n": n, "table": table}),
            Box::new(move || {
                let classes = partitions_of(n);
                let mut rows = Vec::new();
                for lambda in &classes {
                    let mut row = serde_json::Map::new();
                    row.insert("partition".into(), str_value(lambda));
                    row.insert("z".into(), str_value(lambda.z()));
                    row.insert("class_size".into(), str_value(class_size(lambda)));
                    if table {
                        for mu in &classes {
                            row.insert(mu.to_string(), str_value(irreducible_character(lambda, mu)?));
                        }
                    }
                    rows.push(Value::Object(row));
                }
                Ok(json!({"n": n, "count": classes.len(), "rows": rows}))
            }),
        ),
        Command::Charpoly(CharpolyCmd::Eval { poly, n, class }) => {
            let p = poly_arg(&poly, "--P")?;
            let class = class.as_deref().map(partition_arg).transpose()?;
            if let Some(mu) = &class {
                if mu.size() != n {
                    bail!("class {mu} is not a partition of {n}");
                }
            }
            job(
                "charpoly eval",
                json!({"P": p.to_string(), "n": n, "class": class.as_ref().map(ToString::to_string)}),
                Box::new(move || {
                    Ok(match class {
                        Some(mu) => str_value(p.evaluate(&mu)),
                        None => json!({"P": p.to_string(), "n": n, "values": p.class_function(n).to_json()}),
                    })
                }),
            )
        }
        Command::Charpoly(CharpolyCmd::Inner { poly, other, n }) => {
            let p = poly_arg(&poly, "--P")?;
            let q = poly_arg(&other, "--Q")?;
            job(
                "charpoly inner",
                json!({"P": p.to_string(), "Q": q.to_string(), "n": n}),
                Box::new(move || {
                    Ok(match n {
                        Some(n) => str_value(inner_product_at(&p, &q, n)),
                        None => {
                            let from = p.degree()? + q.degree()?;
                            json!({"value": stable_inner_product(&p, &q)?.to_string(), "stable_from": from})
                        }
                    })
                }),
            )
        }
        Command::Charpoly(CharpolyCmd::Fit { degree, n_min, n_max, samples, max_degree, predict }) => {
            if let Some(p) = degree {
                let max_degree = max_degree.unwrap_or(2 * p);
                if n_min > n_max {
                    bail!("--n-min {n_min} exceeds --n-max {n_max}");
                }
                job(
                    "charpoly fit",
                    json!({"degree": p, "n_min": n_min, "n_max": n_max, "max_degree": max_degree, "predict": predict}),
                    Box::new(move || {
                        let mut data: Vec<Sample> = Vec::new();
                        for n in n_min..=n_max {
                            let chi = pconf_character(n, p, &limits)?;
                            data.extend(chi.iter().map(|(mu, v)| (n, mu.clone(), v.clone())));
                        }
                        let fit = fit_character_polynomial(&data, max_degree)?;
                        let mut out = json!({
                            "polynomial": fit.to_string(),
                            "degree": fit.degree().ok(),
                            "samples": data.len(),
                        });
                        if let Some(m) = predict {
                            let actual = pconf_character(m, p, &limits)?;
                            out["prediction"] = json!({"n": m, "matches": fit.class_function(m) == actual});
                        }
                        Ok(out)
                    }),
                )
            } else {
                let path = samples.expect("clap requires --degree or --samples");
                let max_degree = max_degree.context("--max-degree is required with --samples")?;
                let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let records: Vec<SampleRecord> =
                    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                let data = records
                    .into_iter()
                    .map(|r| {
                        let mu = Partition::try_from(r.class)?;
                        if mu.size() != r.n {
                            bail!("class {mu} is not a partition of {}", r.n);
                        }
                        Ok((r.n, mu, rational::parse(&r.value)?))
                    })
                    .collect::<Result<Vec<Sample>>>()?;
                let canonical: Vec<Value> =
                    data.iter().map(|(n, mu, v)| json!([n, mu.to_string(), v.to_string()])).collect();
                job(
                    "charpoly fit",
                    json!({"samples": canonical, "max_degree": max_degree}),
                    Box::new(move || {
                        let fit = fit_character_polynomial(&data, max_degree)?;
                        Ok(json!({"polynomial": fit.to_string(), "degree": fit.degree().ok(), "samples": data.len()}))
                    }),
                )
            }
        }
        Command::Betti(BettiCmd::Sym { betti, n, i }) => {
            let b = BettiProfile::parse(&betti)?;
            job(
                "betti sym",
                json!({"betti": b.to_string(), "n": n, "i": i}),
                Box::new(move || {
                    Ok(match i {
                        Some(i) => str_value(sym_betti(&b, i, n)),
                        None => {
                            let top = n * b.top_degree() as u32;
                            let rows: Vec<Value> =
                                (0..=top).map(|i| json!({"i": i, "betti": sym_betti(&b, i, n).to_string()})).collect();
                            json!({"rows": rows})
                        }
                    })
                }),
            )
        }
        Command::Betti(BettiCmd::Diag { betti, order }) => {
            let b = BettiProfile::parse(&betti)?;
            job(
                "betti diag",
                json!({"betti": b.to_string(), "order": order}),
                Box::new(move || {
                    let s = diag_series(&b, order);
                    let rows: Vec<Value> = s
                        .coefficients()
                        .iter()
                        .enumerate()
                        .map(|(k, c)| json!({"n": k, "coefficient": c.to_string()}))
                        .collect();
                    Ok(json!({"order": order, "rows": rows}))
                }),
            )
        }
        Command::Pconf(PconfCmd::Char { n, p, r }) => job(
            "pconf char",
            json!({"n": n, "p": p, "r": r}),
            Box::new(move || {
                Ok(match p {
                    Some(p) => {
                        let chi = pconf_character(n, p, &limits)?;
                        let values = chi.to_json();
                        json!({"n": n, "p": p, "values": values})
                    }
                    None => {
                        let g = GradedCharacter::compute(n, r, &limits)?;
                        let mut out = g.to_json();
                        let rows: Vec<Value> = out["degrees"]
                            .as_array()
                            .expect("degrees")
                            .iter()
                            .flat_map(|d| {
                                class_function_rows(&d["values"]).into_iter().map(move |mut row| {
                                    row["p"] = d["p"].clone();
                                    row["weight"] = d["weight"].clone();
                                    row
                                })
                            })
                            .collect();
                        out["rows"] = Value::Array(rows);
                        out
                    }
                })
            }),
        ),
        Command::Pconf(PconfCmd::Betti { n }) => job(
            "pconf betti",
            json!({"n": n}),
            Box::new(move || {
                let rows = (0..n.max(1))
                    .map(|p| {
                        Ok(json!({
                            "p": p,
                            "ordered": stirling_first(n, n - p).to_string(),
                            "unordered": uconf_betti(n, p, &limits)?.to_string(),
                        }))
                    })
                    .collect::<Result<Vec<Value>>>()?;
                Ok(json!({"n": n, "rows": rows}))
            }),
        ),
        Command::Pconf(PconfCmd::Invariants { n, p, a }) => job(
            "pconf invariants",
            json!({"n": n, "p": p, "a": a}),
            Box::new(move || Ok(str_value(invariant_dim(n, p, a, &limits)?))),
        ),
        Command::Pconf(PconfCmd::Multiplicity { n, p, lambda }) => {
            let lambda = partition_arg(&lambda)?;
            job(
                "pconf multiplicity",
                json!({"n": n, "p": p, "lambda": lambda.to_string()}),
                Box::new(move || Ok(str_value(irreducible_multiplicity(n, p, &lambda, &limits)?))),
            )
        }
        Command::Count { target, points } => {
            let space = target.space.space(target.r);
            let kind = target.kind.kind();
            let (n, q) = (target.n, target.q);
            job(
                "count",
                json!({"space": space.to_string(), "kind": kind.to_string(), "n": n, "q": q, "points": points}),
                Box::new(move || {
                    Ok(if points {
                        json!({"rows": closed_points_json(&closed_points(space, q, n, &limits)?)})
                    } else {
                        str_value(count_cycles(space, n, q, kind, &limits)?)
                    })
                }),
            )
        }
        Command::Stats { target, poly } => {
            let p = poly_arg(&poly, "--P")?;
            let space = target.space.space(target.r);
            let kind = target.kind.kind();
            let (n, q) = (target.n, target.q);
            job(
                "stats",
                json!({"space": space.to_string(), "kind": kind.to_string(), "n": n, "q": q, "P": p.to_string()}),
                Box::new(move || Ok(str_value(statistic_sum(space, n, q, kind, &p, &limits)?))),
            )
        }
        Command::Glcheck { space, r, n, q, poly, terms } => {
            let p = poly_arg(&poly, "--P")?;
            let gl_space = match space {
                GlSpaceArg::Affine => GlSpace::Affine(r),
                GlSpaceArg::SymAffine => GlSpace::SymAffine(r),
            };
            job(
                "glcheck",
                json!({"space": enum_name(space), "r": r, "n": n, "q": q, "P": p.to_string(), "terms": terms}),
                Box::new(move || {
                    let mut out = gl_check(gl_space, n, q, &p, &limits)?.to_json();
                    if terms {
                        if let GlSpace::Affine(r) = gl_space {
                            out["terms"] = gl_rhs_affine(r, n, q, &p, &limits)?.to_json();
                        }
                    }
                    Ok(out)
                }),
            )
        }
        Command::Limit { r, q, poly, i_max } => {
            let p = poly_arg(&poly, "--P")?;
            let i_max = match i_max {
                Some(i) => i,
                None => max_feasible_i_max(&p, &limits)
                    .ok_or_else(|| confstat::Error::Resource(format!("{p} has degree above the character bound")))?,
            };
            job(
                "limit",
                json!({"r": r, "q": q, "P": p.to_string(), "i_max": i_max}),
                Box::new(move || {
                    let lim = stable_limit_affine(r, &p, q, i_max, &limits)?;
                    let rows: Vec<Value> = lim
                        .multiplicities
                        .iter()
                        .map(|(p, level, m)| json!({"p": p, "level": level, "multiplicity": m.to_string()}))
                        .collect();
                    Ok(json!({"i_max": lim.i_max, "value": lim.value.to_string(), "rows": rows}))
                }),
            )
        }
        Command::Converge { space, r, kind, q, poly, n_min, n_max, i_max } => {
            let p = poly_arg(&poly, "--P")?;
            let space = space.space(r);
            let kind = kind.kind();
            if n_min > n_max {
                bail!("--n-min {n_min} exceeds --n-max {n_max}");
            }
            job(
                "converge",
                json!({
                    "space": space.to_string(), "kind": kind.to_string(), "q": q, "P": p.to_string(),
                    "n_min": n_min, "n_max": n_max, "i_max": i_max,
                }),
                Box::new(move || Ok(convergence_report(space, kind, &p, q, n_min..=n_max, i_max, &limits)?.to_json())),
            )
        }
        Command::Bounds(BoundsCmd::Hr { i_max }) => job(
            "bounds hr",
            json!({"i_max": i_max}),
            Box::new(move || {
                let counts = partition_counts(i_max);
                let rows = (0..=i_max)
                    .map(|i| {
                        let m = hr_majorant(i)?;
                        let p = &counts[i as usize];
                        Ok(json!({"i": i, "partitions": p.to_string(), "majorant": m.to_string(), "holds": *p <= m}))
                    })
                    .collect::<Result<Vec<Value>>>()?;
                let passed = rows.iter().all(|r| r["holds"] == true);
                Ok(json!({"passed": passed, "rows": rows}))
            }),
        ),
        Command::Bounds(BoundsCmd::Dominance { betti, random, i_max }) => match (betti, random) {
            (Some(betti), _) => {
                let b = BettiProfile::parse(&betti)?;
                job(
                    "bounds dominance",
                    json!({"betti": b.to_string(), "i_max": i_max}),
                    Box::new(move || Ok(dominance_check(&b, i_max).to_json())),
                )
            }
            (None, Some(count)) => job(
                "bounds dominance",
                json!({"random": count, "seed": seed, "i_max": i_max}),
                Box::new(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let rows: Vec<Value> = (0..count)
                        .map(|_| {
                            let b = random_profile(&mut rng);
                            let report = dominance_check(&b, i_max);
                            json!({"betti": b.to_string(), "D": report.d, "passed": report.passed()})
                        })
                        .collect();
                    let passed = rows.iter().all(|r| r["passed"] == true);
                    Ok(json!({"passed": passed, "seed": seed, "rows": rows}))
                }),
            ),
            (None, None) => bail!("either --betti or --random is required"),
        },
        Command::Bounds(BoundsCmd::Dcoset { n, a, i, method }) => job(
            "bounds dcoset",
            json!({"n": n, "a": a, "i": i, "method": enum_name(method)}),
            Box::new(move || {
                Ok(str_value(match method {
                    DcosetMethod::Canonical => double_coset_count(n, a, i, &limits)?,
                    DcosetMethod::Burnside => double_coset_burnside(n, a, i)?,
                }))
            }),
        ),
        Command::Bounds(BoundsCmd::Growth { sequence, i_max, window, n, a, values }) => {
            let given: Option<Vec<Rational>> = values
                .as_deref()
                .map(|v| v.split(',').map(|s| rational::parse(s).map_err(Into::into)).collect::<Result<_>>())
                .transpose()?;
            if matches!(sequence, Sequence::Values) && given.is_none() {
                bail!("--values is required for --sequence values");
            }
            if matches!(sequence, Sequence::Invariants) && n.is_none() {
                bail!("--n is required for --sequence invariants");
            }
            let mut params = json!({"sequence": enum_name(sequence), "window": window});
            match sequence {
                Sequence::Partitions | Sequence::Dcoset => params["i_max"] = json!(i_max),
                Sequence::Invariants => {
                    params["n"] = json!(n);
                    params["a"] = json!(a);
                }
                Sequence::Values => {
                    params["values"] =
                        json!(given.as_ref().map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>()))
                }
            }
            let mut j = job(
                "bounds growth",
                params,
                Box::new(move || {
                    let samples: Vec<(u32, Rational)> = match sequence {
                        Sequence::Partitions => {
                            partition_counts(i_max).iter().enumerate().map(|(i, c)| (i as u32, rational::from_biguint(c))).collect()
                        }
                        Sequence::Dcoset => {
                            (0..=i_max).map(|i| (i, rational::from_biguint(&double_coset_stable_count(i)))).collect()
                        }
                        Sequence::Invariants => {
                            let n = n.expect("checked");
                            (0..n)
                                .map(|p| Ok((p, Rational::from(invariant_dim(n, p, a, &limits)?))))
                                .collect::<Result<_>>()?
                        }
                        Sequence::Values => given.expect("checked").into_iter().enumerate().map(|(i, v)| (i as u32, v)).collect(),
                    };
                    let est = growth_diagnostic(&samples, window)?;
                    let mut out = est.to_json();
                    let obj = out.as_object_mut().expect("object");
                    obj.remove("slopes_approx");
                    let rows: Vec<Value> = samples
                        .iter()
                        .map(|(i, v)| {
                            let slope = est.slopes.iter().find(|(j, _)| j == i).map(|(_, s)| *s);
                            json!({"i": i, "value": v.to_string(), "log_slope_approx": slope})
                        })
                        .collect();
                    obj.insert("rows".into(), Value::Array(rows));
                    Ok(out)
                }),
            );
            j.exact = false;
            j
        }
    })
}

/// A result that contradicts a checked identity or bound.
fn falsified(result: &Value) -> bool {
    result.get("equal") == Some(&Value::Bool(false)) || result.get("passed") == Some(&Value::Bool(false))
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<confstat::Error>() {
        Some(confstat::Error::Resource(_)) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut limits = Limits::default();
    if let Some(w) = cli.max_work {
        limits.max_work = w;
    }
    if let Some(n) = cli.max_pconf_n {
        limits.max_pconf_n = n;
    }
    let job = resolve(cli.command, limits, cli.seed)?;
    let key = CacheKey::new(job.command, &job.params);
    let cache = if cli.no_cache { None } else { Cache::resolve(cli.cache_dir.as_deref()) };
    let cached = cache.as_ref().and_then(|c| c.get(&key)).map(|e| e.value);
    let result = match cached {
        Some(hit) if !cli.verify_cache => hit,
        hit => {
            let fresh = (job.compute)()?;
            if let Some(hit) = hit {
                if serde_json::to_string(&hit)? != serde_json::to_string(&fresh)? {
                    writeln!(err, "warning: cache entry for {} differs from recomputation; replacing it", job.command)?;
                }
            }
            if let Some(c) = &cache {
                if let Err(e) = c.put(&key, &fresh) {
                    writeln!(err, "warning: cache write failed: {e:#}")?;
                }
            }
            fresh
        }
    };
    let text = if cli.json {
        render::envelope(job.command, &job.params, &result, job.exact)
    } else if cli.csv {
        render::csv(&result)?
    } else {
        render::plain(&result)
    };
    write!(out, "{text}")?;
    if !text.ends_with('\n') {
        writeln!(out)?;
    }
    Ok(if falsified(&result) { EXIT_FALSIFIED } else { EXIT_OK })
}

/// Runs one command line, writing the payload to `out` and diagnostics to
/// `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code_for(&e)
        }
    }
}
