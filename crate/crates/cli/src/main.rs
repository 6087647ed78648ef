//! `bohm`: normalize terms, separate normal forms, and build discriminators,
//! left inverses and third points from the command line.

use std::fs;
use std::process::ExitCode;

use bohm_core::combinators::{church, cstar, i, k, s, theta, zero};
use bohm_core::{
    alpha_eq, conv_eq, discriminate_with, left_inverse, normalize, parse, print,
    random_distinct_pair, separate_traced, third_point, verify_transformation, BohmError, Budget,
    ConvVerdict, GenConfig, Name, ParseError, ReductionOutcome, Term,
};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "bohm",
    version,
    about = "Separation of normal forms in the untyped lambda calculus"
)]
struct Cli {
    /// Maximum number of reduction steps per normalization.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: usize,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// Terms are given in the syntax `\x. M`, `λx. M`, `M N`, `(M)`. A whole
/// argument may also be one of `S`, `K`, `I`, `Cstar`, `theta` or a numeral
/// (Church numeral; `0` is `\x.\y. y`), or `@path` to read one term per line.
#[derive(Subcommand)]
enum Command {
    /// Normalize a term under leftmost-outermost βη reduction.
    Normalize { terms: Vec<String> },
    /// Build and verify a context sending the first normal form to v1 and the second to v2.
    Separate { terms: Vec<String> },
    /// Build a closed Δ with Δ C1 = X1 and Δ C2 = X2.
    Discriminate {
        terms: Vec<String>,
        #[arg(long, default_value = "K")]
        x1: String,
        #[arg(long, default_value = "0")]
        x2: String,
    },
    /// Build Δ and ∇ with Δ ∘ F ∘ ∇ = I.
    Invert { terms: Vec<String> },
    /// Given X, C1, C2, build C with X C distinct from X C1 and X C2.
    Third { terms: Vec<String> },
    /// Run the engine on seeded random inputs and check every result.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Engine(#[from] BohmError),
    #[error("no normal form within {0} steps")]
    Budget(usize),
    #[error("verification failed: {0}")]
    Unverified(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Budget(_) => 3,
            CliError::Unverified(_) => 10,
            CliError::Engine(e) => match e {
                BohmError::Exhausted { .. } => 3,
                BohmError::NotSeparable => 4,
                BohmError::NotNormal { .. } => 5,
                BohmError::NotClosed(_) => 6,
                BohmError::ConstantFunction => 7,
                BohmError::HypothesisFailed(_) => 8,
                _ => 10,
            },
        }
    }
}

#[derive(Serialize)]
struct SubstitutionEntry {
    variable: String,
    nabla: String,
}

#[derive(Serialize)]
struct TransformationReport {
    substitutions: Vec<SubstitutionEntry>,
    args: Vec<String>,
    v1: String,
    v2: String,
    verified: bool,
    steps_used: usize,
}

#[derive(Serialize)]
struct DiscriminatorReport {
    delta: String,
    args: Vec<String>,
    verified: bool,
}

#[derive(Serialize)]
struct InverseReport {
    delta: String,
    nabla: String,
    g: usize,
    args: Vec<String>,
    verified: bool,
}

#[derive(Serialize)]
struct ThirdReport {
    c: String,
    b: String,
    delta: String,
    delta_on_first: String,
    delta_on_second: String,
    fixed_point: bool,
    probe_first: String,
    probe_second: String,
}

#[derive(Serialize)]
struct SelftestReport {
    seed: u64,
    cases: usize,
    separate_failures: Vec<String>,
    discriminate_failures: Vec<String>,
    invert_failures: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let budget = Budget::new(cli.budget)
        .ok_or_else(|| CliError::Usage("--budget must be positive".into()))?;
    match &cli.command {
        Command::Normalize { terms } => {
            let [t] = read_terms::<1>(terms)?;
            match normalize(&t, budget) {
                ReductionOutcome::Normal { term, steps } => {
                    emit(
                        cli.json,
                        &serde_json::json!({ "normal_form": print(&term), "steps": steps }),
                        || println!("{}", print(&term)),
                    );
                    Ok(())
                }
                ReductionOutcome::Exhausted { .. } => Err(CliError::Budget(budget.max_steps())),
            }
        }
        Command::Separate { terms } => {
            let [n1, n2] = read_terms::<2>(terms)?;
            let s = separate_traced(&n1, &n2, budget)?;
            let bt = &s.transformation;
            if !verify_transformation(&n1, &n2, bt, budget.scaled(10)) {
                return Err(CliError::Unverified(
                    "the context does not send the terms to v1 / v2".into(),
                ));
            }
            let report = TransformationReport {
                substitutions: bt
                    .substitutions
                    .iter()
                    .map(|(y, nabla)| SubstitutionEntry {
                        variable: y.to_string(),
                        nabla: print(nabla),
                    })
                    .collect(),
                args: bt.applied_args.iter().map(print).collect(),
                v1: bt.out_var_1.to_string(),
                v2: bt.out_var_2.to_string(),
                verified: true,
                steps_used: s.steps_used,
            };
            emit(cli.json, &report, || {
                for e in &report.substitutions {
                    println!("{} := ({}) {}", e.variable, e.nabla, e.variable);
                }
                for a in &report.args {
                    println!("arg {a}");
                }
                println!("first -> {}, second -> {}", report.v1, report.v2);
                println!("verified in {} steps", report.steps_used);
            });
            Ok(())
        }
        Command::Discriminate { terms, x1, x2 } => {
            let [c1, c2] = read_terms::<2>(terms)?;
            let (x1, x2) = (read_term(x1)?, read_term(x2)?);
            let d = discriminate_with(&c1, &c2, &x1, &x2, budget)?;
            for (c, x) in [(&c1, &x1), (&c2, &x2)] {
                let verdict = conv_eq(&Term::app(d.delta.clone(), c.clone()), x, budget.scaled(10));
                if verdict != ConvVerdict::Equal {
                    return Err(CliError::Unverified(format!(
                        "Δ {} vs {}: {verdict}",
                        print(c),
                        print(x)
                    )));
                }
            }
            let report = DiscriminatorReport {
                delta: print(&d.delta),
                args: d.args.iter().map(print).collect(),
                verified: true,
            };
            emit(cli.json, &report, || {
                println!("delta {}", report.delta);
                for (n, g) in report.args.iter().enumerate() {
                    println!("G{} {g}", n + 1);
                }
                println!("verified");
            });
            Ok(())
        }
        Command::Invert { terms } => {
            let [f] = read_terms::<1>(terms)?;
            let li = left_inverse(&f)?;
            let z = Term::var("z");
            let probe = Term::app(
                li.delta.clone(),
                Term::app(f.clone(), Term::app(li.nabla.clone(), z.clone())),
            );
            match normalize(&probe, budget.scaled(10)).normal() {
                Some(t) if alpha_eq(&t, &z) => {}
                _ => {
                    return Err(CliError::Unverified(
                        "(Δ ∘ F ∘ ∇) z does not reduce to z".into(),
                    ))
                }
            }
            let report = InverseReport {
                delta: print(&li.delta),
                nabla: print(&li.nabla),
                g: li.g,
                args: li.args.iter().map(print).collect(),
                verified: true,
            };
            emit(cli.json, &report, || {
                println!("delta {}", report.delta);
                println!("nabla {}", report.nabla);
                println!("g {}", report.g);
                println!("verified: (delta . F . nabla) z ->> z");
            });
            Ok(())
        }
        Command::Third { terms } => {
            let [x, c1, c2] = read_terms::<3>(terms)?;
            let tp = third_point(&x, &c1, &c2, budget)?;
            let cert = &tp.certificate;
            if !cert.holds() {
                return Err(CliError::Unverified(format!(
                    "certificate: (a) {}, (b) {}, (c) {}",
                    cert.delta_on_first, cert.delta_on_second, cert.fixed_point
                )));
            }
            let report = ThirdReport {
                c: print(&tp.c),
                b: print(&tp.b),
                delta: print(&tp.delta),
                delta_on_first: cert.delta_on_first.to_string(),
                delta_on_second: cert.delta_on_second.to_string(),
                fixed_point: cert.fixed_point,
                probe_first: tp.probe_first.to_string(),
                probe_second: tp.probe_second.to_string(),
            };
            emit(cli.json, &report, || {
                println!("c {}", report.c);
                println!("(a) delta (X c1) = c2: {}", report.delta_on_first);
                println!("(b) delta (X c2) = c1: {}", report.delta_on_second);
                println!("(c) b joins X (delta b): {}", report.fixed_point);
                println!("X c vs X c1: {}", report.probe_first);
                println!("X c vs X c2: {}", report.probe_second);
            });
            Ok(())
        }
        Command::Selftest { seed, cases } => selftest(cli.json, *seed, *cases, budget),
    }
}

fn emit<T: Serialize>(json: bool, report: &T, text: impl FnOnce()) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        );
    } else {
        text();
    }
}

fn read_term(arg: &str) -> Result<Term, CliError> {
    let t = match arg.trim() {
        "S" => s(),
        "K" => k(),
        "I" => i(),
        "Cstar" => cstar(),
        "theta" => theta(),
        n if !n.is_empty() && n.chars().all(|c| c.is_ascii_digit()) => {
            let n: usize = n
                .parse()
                .map_err(|_| CliError::Usage(format!("numeral {n} is too large")))?;
            if n == 0 {
                zero()
            } else {
                church(n)
            }
        }
        text => parse(text)?,
    };
    Ok(t)
}

// Expands `@file` arguments and demands exactly `N` terms.
fn read_terms<const N: usize>(args: &[String]) -> Result<[Term; N], CliError> {
    let mut out = Vec::new();
    for a in args {
        match a.strip_prefix('@') {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.to_string(),
                    source,
                })?;
                for line in text
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                {
                    out.push(read_term(line)?);
                }
            }
            None => out.push(read_term(a)?),
        }
    }
    let got = out.len();
    out.try_into()
        .map_err(|_| CliError::Usage(format!("expected {N} term(s), got {got}")))
}

fn selftest(json: bool, seed: u64, cases: usize, budget: Budget) -> Result<(), CliError> {
    let pool: Vec<Name> = ["y1", "y2", "y3"].into_iter().map(Name::from).collect();
    let separate_failures: Vec<String> = (0..cases as u64)
        .into_par_iter()
        .filter_map(|n| {
            let cfg = GenConfig {
                seed: seed.wrapping_add(n),
                max_size: 40,
                max_order: 3,
                free_pool: pool.clone(),
            };
            let (a, b) = random_distinct_pair(&cfg).ok()?;
            match separate_traced(&a, &b, budget) {
                Ok(s) if verify_transformation(&a, &b, &s.transformation, budget.scaled(10)) => {
                    None
                }
                Ok(_) => Some(format!("{a} / {b}: unverified")),
                Err(e) => Some(format!("{a} / {b}: {e}")),
            }
        })
        .collect();
    let discriminate_failures: Vec<String> = (0..cases as u64)
        .into_par_iter()
        .filter_map(|n| {
            let (c1, c2) =
                random_distinct_pair(&GenConfig::closed(seed.wrapping_add(n), 30, 3)).ok()?;
            match discriminate_with(&c1, &c2, &k(), &zero(), budget) {
                Ok(_) => None,
                Err(e) => Some(format!("{c1} / {c2}: {e}")),
            }
        })
        .collect();
    let invert_failures: Vec<String> = (0..cases as u64)
        .into_par_iter()
        .filter_map(|n| {
            let (f, _) =
                random_distinct_pair(&GenConfig::closed(seed.wrapping_add(n), 30, 3)).ok()?;
            match left_inverse(&f) {
                Ok(_) | Err(BohmError::ConstantFunction) => None,
                Err(e) => Some(format!("{f}: {e}")),
            }
        })
        .collect();
    let report = SelftestReport {
        seed,
        cases,
        separate_failures,
        discriminate_failures,
        invert_failures,
    };
    let failed = report.separate_failures.len()
        + report.discriminate_failures.len()
        + report.invert_failures.len();
    emit(json, &report, || {
        for (what, fails) in [
            ("separate", &report.separate_failures),
            ("discriminate", &report.discriminate_failures),
            ("invert", &report.invert_failures),
        ] {
            println!("{what}: {}/{} ok", cases - fails.len(), cases);
            for f in fails {
                println!("  {f}");
            }
        }
    });
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Unverified(format!(
            "{failed} selftest case(s) failed"
        )))
    }
}
