use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use propaudit::baselines::{
    kmeans_cost, kmeans_lloyd_snapped, kmedian_cost, kmedian_exhaustive, kmedian_local_search,
    KmeansOptions,
};
use propaudit::bench::{run_experiment, ExperimentConfig};
use propaudit::embedding::embed_approval;
use propaudit::gen::{
    fixture_incomparability, fixture_objective_failure, gen_gaussian_instance, GaussianConfig,
};
use propaudit::io::{
    instance_to_json, parse_approval, parse_instance, parse_selection, parse_selection_json,
};
use propaudit::sear::run_sear;
use propaudit::verdict::LabeledWitness;
use propaudit::verify::{audit, dc_violations, verify_dc_mpjr_plus, verify_mpjr_plus_smallk};
use propaudit::{AuditReport, Axiom, Error, Instance, Limits, Selection, Verdict};

#[derive(Parser)]
#[command(
    name = "propaudit",
    version,
    about = "Audit proportional representation of clustering center selections"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Gaussian,
    #[value(name = "prop3-1")]
    Prop31,
    #[value(name = "prop3-2")]
    Prop32,
    Fig2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Objective {
    Kmedian,
    Kmeans,
}

#[derive(Subcommand)]
enum Command {
    /// Audit a selection; exits 0 when satisfied, 1 when violated.
    Audit {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated candidate indices or labels, or a JSON file.
        #[arg(long)]
        selection: String,
        #[arg(long, default_value = "dc-mpjr+")]
        axiom: Axiom,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Level for the fixed-level axiom.
        #[arg(long)]
        ell: Option<usize>,
        /// List every violating (center, level) pair of the default-coalition axiom.
        #[arg(long)]
        all_witnesses: bool,
    },
    /// Run the expanding approval rule.
    Sear {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Write a generated instance.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        g: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0.04)]
        sigma: f64,
    },
    /// Run the synthetic satisfaction-rate experiment and print CSV.
    Experiment {
        #[arg(long, value_delimiter = ',', default_values_t = [20, 50, 80, 100])]
        n_values: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 6])]
        g_values: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        instances: usize,
        #[arg(long, default_value_t = 1000)]
        selections: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0.04)]
        sigma: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, value_delimiter = ',', default_values = ["mpjr+", "dc-mpjr+"])]
        axioms: Vec<Axiom>,
        /// Fill the mean_ms column (makes the output run-dependent).
        #[arg(long)]
        timing: bool,
        /// Emit tab-separated per-cell rates instead of CSV.
        #[arg(long)]
        plot_data: bool,
    },
    /// Select centers with a clustering objective and audit them.
    Baseline {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Objective::Kmedian)]
        objective: Objective,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        /// Enumerate all subsets (k-median, at most 12 candidates).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Embed an approval profile as an explicit metric instance.
    Embed {
        #[arg(long)]
        approval: PathBuf,
    },
    /// Check that an instance file parses and its distances form a metric.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        /// Skip the cubic triangle-inequality scan.
        #[arg(long)]
        no_triangle: bool,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_instance(path: &Path) -> Result<Instance, Error> {
    parse_instance(&read(path)?)
}

fn load_selection(inst: &Instance, arg: &str) -> Result<Selection, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        parse_selection_json(inst, &read(path)?)
    } else {
        parse_selection(inst, arg)
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), Error> {
    match &cli.out {
        Some(path) => std::fs::write(path, format!("{body}\n"))?,
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{body}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("outputs serialize")
}

#[derive(Serialize)]
struct AllWitnesses {
    axiom: Axiom,
    gamma: f64,
    satisfied: bool,
    witnesses: Vec<LabeledWitness>,
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct BaselineOutput {
    objective: &'static str,
    selection: Vec<usize>,
    labels: Vec<String>,
    cost: f64,
    audits: Vec<AuditReport>,
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Audit {
            instance,
            selection,
            axiom,
            gamma,
            ell,
            all_witnesses,
        } => {
            let inst = load_instance(instance)?;
            let x = load_selection(&inst, selection)?;
            let start = Instant::now();
            if *all_witnesses {
                if *axiom != Axiom::DcMpjrPlus {
                    return Err(Error::Input(
                        "--all-witnesses needs --axiom dc-mpjr+".into(),
                    ));
                }
                let found = dc_violations(&inst, &x, *gamma)?;
                let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
                let body = match cli.format {
                    Format::Json => json(&AllWitnesses {
                        axiom: *axiom,
                        gamma: *gamma,
                        satisfied: found.is_empty(),
                        witnesses: found
                            .iter()
                            .map(|w| LabeledWitness::new(w, &inst))
                            .collect(),
                        elapsed_ms,
                    }),
                    Format::Text => {
                        let reports: Vec<String> = found
                            .iter()
                            .map(|w| {
                                let v = Verdict::Violated(w.clone());
                                AuditReport::new(*axiom, *gamma, &v, &inst, elapsed_ms)
                                    .to_text(&inst)
                            })
                            .collect();
                        if reports.is_empty() {
                            AuditReport::new(*axiom, *gamma, &Verdict::Satisfied, &inst, elapsed_ms)
                                .to_text(&inst)
                        } else {
                            reports.join("\n")
                        }
                    }
                };
                emit(cli, &body)?;
                return Ok(if found.is_empty() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                });
            }
            let verdict = audit(&inst, &x, *axiom, *gamma, *ell, &Limits::default())?;
            let report = AuditReport::new(
                *axiom,
                *gamma,
                &verdict,
                &inst,
                start.elapsed().as_secs_f64() * 1e3,
            );
            let body = match cli.format {
                Format::Json => json(&report),
                Format::Text => report.to_text(&inst),
            };
            emit(cli, &body)?;
            Ok(if verdict.is_satisfied() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Sear { instance } => {
            let inst = load_instance(instance)?;
            let outcome = run_sear(&inst)?;
            let body = match cli.format {
                Format::Json => json(&outcome),
                Format::Text => {
                    let mut lines = Vec::new();
                    for step in &outcome.trace {
                        lines.push(format!(
                            "select {} at radius {} charging {} agents",
                            inst.candidate_labels()[step.candidate],
                            step.radius,
                            step.charges.len()
                        ));
                    }
                    let names: Vec<&str> = outcome
                        .selection
                        .iter()
                        .map(|&c| inst.candidate_labels()[c].as_str())
                        .collect();
                    lines.push(format!("selection: {}", names.join(",")));
                    lines.join("\n")
                }
            };
            emit(cli, &body)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate {
            kind,
            n,
            g,
            k,
            sigma,
        } => {
            let inst = match kind {
                Kind::Gaussian => gen_gaussian_instance(&GaussianConfig {
                    n: *n,
                    g: *g,
                    sigma: *sigma,
                    seed: cli.seed,
                    k: *k,
                })?,
                Kind::Prop31 => fixture_incomparability(1)?.0,
                Kind::Prop32 => fixture_incomparability(2)?.0,
                Kind::Fig2 => fixture_objective_failure()?,
            };
            emit(cli, &instance_to_json(&inst))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment {
            n_values,
            g_values,
            instances,
            selections,
            k,
            sigma,
            gamma,
            axioms,
            timing,
            plot_data,
        } => {
            let cfg = ExperimentConfig {
                n_values: n_values.clone(),
                g_values: g_values.clone(),
                instances_per_cell: *instances,
                selections_per_instance: *selections,
                k: *k,
                sigma: *sigma,
                master_seed: cli.seed,
                axioms: axioms.clone(),
                gamma: *gamma,
            };
            let report = run_experiment(&cfg)?;
            let body = if *plot_data {
                report.plot_data()
            } else {
                report.to_csv(*timing)
            };
            emit(cli, body.trim_end())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Baseline {
            instance,
            objective,
            restarts,
            exhaustive,
        } => {
            let inst = load_instance(instance)?;
            let (name, x, cost) = match objective {
                Objective::Kmedian => {
                    let x = if *exhaustive {
                        kmedian_exhaustive(&inst)?
                    } else {
                        (0..(*restarts).max(1) as u64)
                            .map(|r| {
                                kmedian_local_search(&inst, propaudit::gen::split_seed(cli.seed, r))
                            })
                            .collect::<Result<Vec<_>, _>>()?
                            .into_iter()
                            .min_by(|a, b| {
                                kmedian_cost(&inst, a.centers())
                                    .total_cmp(&kmedian_cost(&inst, b.centers()))
                            })
                            .expect("at least one restart")
                    };
                    let cost = kmedian_cost(&inst, x.centers());
                    ("kmedian", x, cost)
                }
                Objective::Kmeans => {
                    let opts = KmeansOptions {
                        restarts: (*restarts).max(1),
                        ..KmeansOptions::default()
                    };
                    let x = kmeans_lloyd_snapped(&inst, cli.seed, opts)?;
                    let cost = kmeans_cost(&inst, x.centers());
                    ("kmeans", x, cost)
                }
            };
            let limits = Limits::default();
            let mut audits = Vec::new();
            let start = Instant::now();
            let dc = verify_dc_mpjr_plus(&inst, &x, 1.0)?;
            audits.push(AuditReport::new(
                Axiom::DcMpjrPlus,
                1.0,
                &dc,
                &inst,
                start.elapsed().as_secs_f64() * 1e3,
            ));
            if inst.k() <= limits.max_sweep_k {
                let start = Instant::now();
                let plus = verify_mpjr_plus_smallk(&inst, &x, 1.0, &limits)?;
                audits.push(AuditReport::new(
                    Axiom::MpjrPlus,
                    1.0,
                    &plus,
                    &inst,
                    start.elapsed().as_secs_f64() * 1e3,
                ));
            }
            let out = BaselineOutput {
                objective: name,
                selection: x.centers().to_vec(),
                labels: x
                    .centers()
                    .iter()
                    .map(|&c| inst.candidate_labels()[c].clone())
                    .collect(),
                cost,
                audits,
            };
            let body = match cli.format {
                Format::Json => json(&out),
                Format::Text => {
                    let mut text = format!(
                        "{} selection: {} (cost {})",
                        out.objective,
                        out.labels.join(","),
                        out.cost
                    );
                    for a in &out.audits {
                        text.push('\n');
                        text.push_str(&a.to_text(&inst));
                    }
                    text
                }
            };
            emit(cli, &body)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Embed { approval } => {
            let profile = parse_approval(&read(approval)?)?;
            emit(cli, &instance_to_json(&embed_approval(&profile)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            instance,
            no_triangle,
        } => {
            let inst = load_instance(instance)?;
            match inst.validate_metric(!no_triangle) {
                Ok(()) => {
                    let body = match cli.format {
                        Format::Json => json(
                            &serde_json::json!({"valid": true, "n": inst.n(), "m": inst.m(), "k": inst.k()}),
                        ),
                        Format::Text => format!(
                            "valid: n = {}, m = {}, k = {}",
                            inst.n(),
                            inst.m(),
                            inst.k()
                        ),
                    };
                    emit(cli, &body)?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(v) => {
                    let body = match cli.format {
                        Format::Json => {
                            json(&serde_json::json!({"valid": false, "violation": v.to_string()}))
                        }
                        Format::Text => format!("invalid: {v}"),
                    };
                    emit(cli, &body)?;
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(threads) = std::env::var("PROPAUDIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
