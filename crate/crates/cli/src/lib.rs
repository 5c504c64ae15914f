//! Argument handling and JSON rendering for the `tvb` binary.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tvb_core::bundle::{build_pair, nonnegative_form, BundlePair, Variant, WeightVec};
use tvb_core::coxring::{cox_ideal, verify_flag_relations, verify_phi_generators};
use tvb_core::exactmath::Rat;
use tvb_core::matroid::facet_initial;
use tvb_core::nokbody::{flag_matrix, global_body, nok_divisor_body};
use tvb_core::positivity::{bpf_monoid, effective_monoid, fujita_certify, split_bpf, Verdict};
use tvb_core::tropic::{enumerate_trees, trop_point_from_tree, wellpoised_check};
use tvb_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "tvb",
    version,
    about = "Irreducible toric vector bundles on projective space"
)]
pub struct Cli {
    /// Also write the document to this file
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classifying pair (L, D)
    Pair {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Shift D to its non-negative form
        #[arg(long)]
        nonnegative: bool,
    },
    /// Cox ring presentation
    Cox {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Match Plücker generators with the dual generators
        #[arg(long)]
        check_phi: bool,
    },
    /// Initial ideals of L at the facet weights
    Initial {
        #[command(flatten)]
        bundle: BundleArgs,
        /// A single facet; all facets when omitted
        #[arg(long)]
        facet: Option<usize>,
    },
    /// Check the flag-bundle relations vanish under the flag map
    VerifyFlag {
        #[arg(long)]
        a: String,
    },
    /// Degree-bounded comparison of tree initial ideals with S_T(a)
    Wellpoised {
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// Newton–Okounkov body of a divisor class along a flag
    Nok {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Flats separated by ';', elements by ','
        #[arg(long)]
        flag: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long, allow_hyphen_values = true)]
        beta: i64,
        /// Include the H-representation of the global body
        #[arg(long)]
        hrep: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Basepoint-free monoid as an intersection of corner monoids
    Bpf {
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// Fujita freeness certificate
    Fujita {
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// Trivalent trees with labelled leaves
    Trees {
        #[arg(long)]
        leaves: usize,
        /// Weights for tropical points at unit internal edge lengths; needs
        /// one fewer entry than leaves
        #[arg(long)]
        a: Option<String>,
    },
}

#[derive(clap::Args, Debug)]
pub struct BundleArgs {
    /// Comma-separated positive weights a_0,...,a_n
    #[arg(long)]
    pub a: String,
    #[arg(long, value_enum, default_value_t = VariantArg::Dual)]
    pub variant: VariantArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum VariantArg {
    Primal,
    Dual,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Primal => Variant::Primal,
            VariantArg::Dual => Variant::Dual,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Result of one invocation: exit status and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn failed_check(stdout: String, what: &str) -> Self {
        Outcome {
            code: 2,
            stdout,
            stderr: format!("check failed: {what}\n"),
        }
    }

    fn error(e: &Error) -> Self {
        let code = if matches!(e, Error::VerificationFailed(_)) {
            2
        } else {
            1
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let out = match dispatch(&cli.command) {
        Ok(out) => out,
        Err(e) => return Outcome::error(&e),
    };
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &out.stdout) {
            return Outcome {
                code: 1,
                stdout: out.stdout,
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            };
        }
    }
    out
}

fn weights(s: &str) -> Result<WeightVec, Error> {
    s.parse()
}

fn bundle(args: &BundleArgs) -> Result<(WeightVec, BundlePair), Error> {
    let a = weights(&args.a)?;
    let p = build_pair(&a, args.variant.into())?;
    Ok((a, p))
}

/// Numbers become strings so that exact values survive any JSON reader.
fn stringify(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(xs) => Value::Array(xs.into_iter().map(stringify).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, stringify(v))).collect()),
        other => other,
    }
}

fn render<T: Serialize>(doc: &T) -> Result<String, Error> {
    let v = serde_json::to_value(doc).map_err(|e| Error::Parse(e.to_string()))?;
    let mut s =
        serde_json::to_string_pretty(&stringify(v)).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses `"z01;z01,z12"` or `"0;0,1"` into index spans over the pair's
/// variables.
pub fn parse_flag(p: &BundlePair, s: &str) -> Result<Vec<Vec<usize>>, Error> {
    s.split(';')
        .map(|flat| {
            flat.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| match t.parse::<usize>() {
                    Ok(i) if i < p.vars.len() => Ok(i),
                    Ok(i) => Err(Error::IndexOutOfRange {
                        index: i,
                        len: p.vars.len(),
                    }),
                    Err(_) => p
                        .vars
                        .iter()
                        .position(|v| v.eq_ignore_ascii_case(t))
                        .ok_or_else(|| Error::UnknownVariable(t.to_string())),
                })
                .collect()
        })
        .collect()
}

fn vertices_csv(header: &[String], rows: &[Vec<Rat>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(Rat::to_string).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn dispatch(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Pair {
            bundle: b,
            nonnegative,
        } => {
            let (a, mut p) = bundle(b)?;
            if *nonnegative {
                p = nonnegative_form(&p);
            }
            let doc = json!({ "a": a, "pair": p, "column_degrees": p.column_degrees() });
            Ok(Outcome::ok(render(&doc)?))
        }
        Command::Cox {
            bundle: b,
            check_phi,
        } => {
            let (a, _) = bundle(b)?;
            let cox = cox_ideal(&a, b.variant.into())?;
            let mut doc = json!({ "a": a, "cox": cox });
            if *check_phi {
                doc["phi"] = serde_json::to_value(verify_phi_generators(&a)?)
                    .map_err(|e| Error::Parse(e.to_string()))?;
            }
            Ok(Outcome::ok(render(&doc)?))
        }
        Command::Initial { bundle: b, facet } => {
            let (a, p) = bundle(b)?;
            let facets: Vec<usize> = match facet {
                Some(i) if *i >= p.rays() => {
                    return Err(Error::IndexOutOfRange {
                        index: *i,
                        len: p.rays(),
                    })
                }
                Some(i) => vec![*i],
                None => (0..p.rays()).collect(),
            };
            let mut rows = Vec::new();
            for i in facets {
                let l = facet_initial(&p, i)?;
                rows.push(json!({
                    "facet": i,
                    "monomial": l.is_monomial(),
                    "generators": l.to_polys(),
                }));
            }
            let doc = json!({ "a": a, "variant": p.variant, "initial_ideals": rows });
            Ok(Outcome::ok(render(&doc)?))
        }
        Command::VerifyFlag { a } => {
            let report = verify_flag_relations(&weights(a)?)?;
            let text = render(&report)?;
            if report.all_vanish {
                Ok(Outcome::ok(text))
            } else {
                Ok(Outcome::failed_check(text, "a relation has non-zero image"))
            }
        }
        Command::Wellpoised { a, degree } => {
            let a = weights(a)?;
            let reports = wellpoised_check(&a, *degree)?;
            let pass = reports.iter().all(|r| r.passed());
            let doc = json!({
                "a": a,
                "degree": degree,
                "scope": format!("initial ideals agree with the toric ideal of S_T(a) up to degree {degree}; primeness is not proved"),
                "trees": reports,
                "verdict": if pass { "PASS" } else { "FAIL" },
            });
            let text = render(&doc)?;
            if pass {
                Ok(Outcome::ok(text))
            } else {
                Ok(Outcome::failed_check(
                    text,
                    "a tree failed the oracle comparison",
                ))
            }
        }
        Command::Nok {
            bundle: b,
            flag,
            alpha,
            beta,
            hrep,
            format,
        } => {
            let (a, p) = bundle(b)?;
            let p = nonnegative_form(&p);
            let e = flag_matrix(&p, &parse_flag(&p, flag)?)?;
            let body = nok_divisor_body(&p, &e, *alpha, *beta)?;
            if *format == Format::Csv {
                let header: Vec<String> =
                    (0..body.matrix.m.rows()).map(|i| format!("v{i}")).collect();
                return Ok(Outcome::ok(vertices_csv(&header, &body.vertices)));
            }
            let mut doc = json!({ "a": a, "alpha": alpha, "beta": beta, "body": body });
            if *hrep {
                doc["global_body"] = serde_json::to_value(global_body(&body.matrix.m, true)?)
                    .map_err(|e| Error::Parse(e.to_string()))?;
            }
            Ok(Outcome::ok(render(&doc)?))
        }
        Command::Bpf { bundle: b } => {
            let (a, p) = bundle(b)?;
            let p = nonnegative_form(&p);
            let doc = json!({
                "a": a,
                "variant": p.variant,
                "bpf": bpf_monoid(&p)?,
                "split_bpf": split_bpf(&p)?,
                "effective": effective_monoid(&p)?,
            });
            Ok(Outcome::ok(render(&doc)?))
        }
        Command::Fujita { bundle: b } => {
            let a: Vec<i64> = weights(&b.a)?.as_slice().to_vec();
            let cert = fujita_certify(&a, b.variant.into())?;
            let text = render(&json!({ "a": a, "certificate": cert }))?;
            if cert.verdict == Verdict::Pass {
                Ok(Outcome::ok(text))
            } else {
                Ok(Outcome::failed_check(
                    text,
                    "Fujita certificate did not pass",
                ))
            }
        }
        Command::Trees { leaves, a } => {
            let a = a.as_deref().map(weights).transpose()?;
            if let Some(w) = &a {
                if w.len() + 1 != *leaves {
                    return Err(Error::Precondition(format!(
                        "{} weights need {} leaves, got {leaves}",
                        w.len(),
                        w.len() + 1
                    )));
                }
            }
            let trees = enumerate_trees(*leaves)?;
            let mut rows = Vec::new();
            for (id, t) in trees.iter().enumerate() {
                let mut row = json!({ "id": id, "newick": t.newick(), "splits": t.splits() });
                if let Some(w) = &a {
                    let mut t = t.clone();
                    for e in t.internal_edges() {
                        t.set_weight(e, Rat::one());
                    }
                    row["point"] = serde_json::to_value(trop_point_from_tree(&t, Some(w))?)
                        .map_err(|e| Error::Parse(e.to_string()))?;
                }
                rows.push(row);
            }
            let doc = json!({ "leaves": leaves, "count": trees.len(), "trees": rows });
            Ok(Outcome::ok(render(&doc)?))
        }
    }
}
