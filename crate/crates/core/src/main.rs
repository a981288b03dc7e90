use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use discrepancy::disc::{
    hereditary_disc, hereditary_weighted_disc, optimal_disc, weighted_disc, weighted_disc_sup,
};
use discrepancy::gen::{Family, InstanceSpec};
use discrepancy::io::{read_matrix, write_matrix};
use discrepancy::matrix::{format_rational, parse_rational, DiscrepancyResult, Witness};
use discrepancy::rounding::{transfer_even, transfer_round};
use discrepancy::verify::{run_suite, Corpus, SuiteOptions};
use discrepancy::{Budget, CaryValue, Error, Oracle, OracleConfig, OracleKind, Result, WeightedWitness};

#[derive(Parser)]
#[command(name = "discrepancy", version, about = "Exact discrepancy computations and rounding certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Cap on colorings enumerated by one minimization.
    #[arg(long, default_value_t = 10_000_000)]
    max_colorings: u128,
    /// Cap on total work of a hereditary quantity.
    #[arg(long, default_value_t = 100_000_000)]
    max_hereditary: u128,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget {
            colorings: self.max_colorings,
            hereditary: self.max_hereditary,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Optimal c-color discrepancy.
    Disc {
        matrix: PathBuf,
        #[arg(long, short = 'c')]
        colors: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Hereditary c-color discrepancy over column subsets.
    Herdisc {
        matrix: PathBuf,
        #[arg(long, short = 'c')]
        colors: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Weighted discrepancy at one z, or its supremum over z.
    Wdisc {
        matrix: PathBuf,
        #[arg(long, conflicts_with = "sup", required_unless_present = "sup")]
        z: Option<String>,
        #[arg(long)]
        sup: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Hereditary weighted discrepancy.
    Herwdisc {
        matrix: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Round the constant coloring z to {0,1} using a c-color oracle.
    Round {
        matrix: PathBuf,
        #[arg(long)]
        z: String,
        #[arg(long, short = 'c')]
        colors: usize,
        /// exact, greedy or random:SEED.
        #[arg(long, default_value = "exact")]
        oracle: String,
        /// Approximate z by the nearest value with at most this many base-c digits.
        #[arg(long)]
        ell: Option<usize>,
        /// Write the full trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Generate an instance.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 3)]
        max_num: i64,
        #[arg(long, default_value_t = 3)]
        max_den: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short = 'o')]
        output: PathBuf,
    },
    /// Certify the inequalities over a corpus.
    Verify {
        /// default, smoke, empty, or a file with one matrix path per line.
        #[arg(long, default_value = "default")]
        corpus: String,
        /// Print the full report as JSON instead of failures only.
        #[arg(long)]
        json: bool,
        /// Write the full JSON report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        fail_fast: bool,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Multiply every right-hand side (harness self-test).
        #[arg(long, hide = true)]
        rhs_scale: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Complete,
    BalancedPair,
    Random01,
    RandomRational,
}

fn disc_json(r: &DiscrepancyResult) -> Value {
    let mut out = json!({
        "value": format_rational(&r.value),
        "row": r.witness_row.map(|i| i + 1),
        "color": r.witness_color.map(|d| d + 1),
        "budget_used": r.budget_used.to_string(),
    });
    if let Witness::Coloring(p) = &r.witness {
        out["coloring"] = json!(p.to_external());
    }
    if let Some(s) = &r.witness_subset {
        out["subset"] = json!(s.to_external());
    }
    out
}

fn weighted_json(w: &WeightedWitness) -> Value {
    json!({
        "value": format_rational(&w.value),
        "z": format_rational(&w.z),
        "q": w.q.as_bits().map(|b| b.iter().map(|&x| u8::from(x)).collect::<Vec<_>>()),
        "row": if w.q.is_empty() { None } else { Some(w.row + 1) },
        "budget_used": w.budget_used.to_string(),
    })
}

fn corpus_from_arg(arg: &str) -> Result<Corpus> {
    if let Ok(c) = Corpus::by_name(arg) {
        return Ok(c);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Corpus::by_name(arg);
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let mut corpus = Corpus::default_desk();
    corpus.tight.clear();
    corpus.instances = fs::read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| InstanceSpec::new(Family::File { path: base.join(l) }))
        .collect();
    Ok(corpus)
}

fn run(cmd: Command) -> Result<(Value, bool)> {
    match cmd {
        Command::Disc { matrix, colors, budget } => {
            let a = read_matrix(&matrix)?;
            Ok((disc_json(&optimal_disc(&a, colors, &budget.budget())?), true))
        }
        Command::Herdisc { matrix, colors, budget } => {
            let a = read_matrix(&matrix)?;
            Ok((disc_json(&hereditary_disc(&a, colors, &budget.budget())?), true))
        }
        Command::Wdisc { matrix, z, sup, budget } => {
            let a = read_matrix(&matrix)?;
            let w = if sup {
                weighted_disc_sup(&a, &budget.budget())?
            } else {
                let z = parse_rational(z.as_deref().unwrap_or_default())?;
                weighted_disc(&a, &z, &budget.budget())?
            };
            Ok((weighted_json(&w), true))
        }
        Command::Herwdisc { matrix, budget } => {
            let a = read_matrix(&matrix)?;
            let (w, s) = hereditary_weighted_disc(&a, &budget.budget())?;
            let mut out = weighted_json(&w);
            out["subset"] = json!(s.to_external());
            Ok((out, true))
        }
        Command::Round { matrix, z, colors, oracle, ell, trace } => {
            let a = read_matrix(&matrix)?;
            let z = parse_rational(&z)?;
            let kind: OracleKind = oracle.parse()?;
            let oracle = Oracle::new(OracleConfig::new(kind));
            if colors % 2 == 0 {
                let t = transfer_even(&a, &z, colors, &oracle)?;
                let out = json!({
                    "z": format_rational(&z),
                    "colors": colors,
                    "coloring": t.coloring.iter().map(|&b| u8::from(b)).collect::<Vec<_>>(),
                    "oracle_coloring": t.oracle_coloring.to_external(),
                    "oracle_disc": format_rational(&t.oracle_disc),
                    "merged_coloring": t.merged.to_external(),
                    "total_error": format_rational(&t.merged_disc),
                    "guarantee": format_rational(&t.bound),
                    "certified": t.certified,
                });
                if let Some(path) = trace {
                    fs::write(path, serde_json::to_string_pretty(&out)? + "\n")?;
                }
                return Ok((out, true));
            }
            let c = u32::try_from(colors).map_err(|_| Error::Input("too many colors".into()))?;
            let target = match (CaryValue::from_rational(&z, c)?, ell) {
                (Some(v), Some(l)) if v.len() > l => CaryValue::nearest(&z, c, l)?,
                (Some(v), _) => v,
                (None, Some(l)) => CaryValue::nearest(&z, c, l)?,
                (None, None) => {
                    return Err(Error::Input(format!(
                        "z = {z} has no finite base-{c} expansion; pass --ell to approximate it"
                    )))
                }
            };
            let (_, t) = transfer_round(&a, &target, &oracle, None)?;
            let mut out = t.to_json();
            if target.value() != z {
                out["requested_z"] = json!(format_rational(&z));
            }
            if let Some(path) = trace {
                fs::write(&path, serde_json::to_string_pretty(&out)? + "\n")?;
                let summary = json!({
                    "z": out["z"],
                    "final_coloring": out["final_coloring"],
                    "total_error": out["total_error"],
                    "guarantee": out["guarantee"],
                    "certified": out["certified"],
                    "trace": path.display().to_string(),
                });
                return Ok((summary, true));
            }
            Ok((out, true))
        }
        Command::Gen { family, n, m, density, max_num, max_den, seed, output } => {
            let family = match family {
                FamilyArg::Complete => Family::Complete { n },
                FamilyArg::BalancedPair => Family::BalancedPair { n },
                FamilyArg::Random01 => Family::Random01 { m, n, density, seed },
                FamilyArg::RandomRational => Family::RandomRational { m, n, max_num, max_den, seed },
            };
            let spec = InstanceSpec::new(family);
            let a = spec.build()?;
            let meta: BTreeMap<String, String> = spec.meta();
            write_matrix(&output, &a, Some(&meta))?;
            Ok((json!({"written": output.display().to_string(), "m": a.rows(), "n": a.cols()}), true))
        }
        Command::Verify { corpus, json, report, fail_fast, jobs, rhs_scale, budget } => {
            if let Some(j) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(j.max(1))
                    .build_global()
                    .map_err(|e| Error::Input(e.to_string()))?;
            }
            let opts = SuiteOptions {
                budget: budget.budget(),
                fail_fast,
                rhs_scale: rhs_scale.as_deref().map(parse_rational).transpose()?,
            };
            let r = run_suite(&corpus_from_arg(&corpus)?, &opts)?;
            if let Some(path) = report {
                fs::write(path, r.to_json_string())?;
            }
            let pass = r.all_pass();
            let out = if json {
                r.to_json()
            } else {
                json!({
                    "checks": r.checks.len(),
                    "failed": r.failures().count(),
                    "failures": r.failures().map(|c| c.to_json()).collect::<Vec<_>>(),
                })
            };
            Ok((out, pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, pass)) => {
            println!("{}", serde_json::to_string_pretty(&out).expect("output serializes"));
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
