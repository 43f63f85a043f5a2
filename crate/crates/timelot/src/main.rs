//! Command-line front end: parse model/lottery files, run audits, solves,
//! demos, and scans, and emit machine-readable reports.
//!
//! Exit codes: 0 — completed with every gated check holding; 1 — completed
//! with at least one violated verdict (or a failed demo hypothesis); 2 —
//! input or usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use timelot::axioms::{audit, AuditReport};
use timelot::experiments::{
    broken_transform, default_pi_grid, demo_local_rstl, glbu_tradeoff_demo, invariance_suite,
    ranking_agreement, scan_example_region, RegionScanConfig,
};
use timelot::files::{
    audit_report_to_csv, parse_lottery_file, parse_model_file, region_map_to_csv, trace_to_csv,
    tradeoff_to_csv,
};
use timelot::models::Model;
use timelot::solvers::{find_indifferent_prize, time_certainty_equivalent, SolveSettings};
use timelot::verdict::{Tolerances, DEFAULT_GRID_N, DEFAULT_SAMPLE_N, DEFAULT_SEED};
use timelot::{Domain, ValueSpec};

#[derive(Parser)]
#[command(
    name = "timelot",
    version,
    about = "Evaluate and numerically audit models of intertemporal choice under risk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// RNG seed for sampled checks (falls back to TIMELOT_SEED, then 42).
    #[arg(long, global = true, env = "TIMELOT_SEED")]
    seed: Option<u64>,

    /// Grid points per axis.
    #[arg(long, global = true)]
    grid_n: Option<usize>,

    /// Sample count for sampled checks.
    #[arg(long, global = true)]
    sample_n: Option<usize>,

    /// Indifference tolerance override (utility units).
    #[arg(long, global = true)]
    eq_tol: Option<f64>,

    /// Strictness margin override (utility units).
    #[arg(long, global = true)]
    strict_margin: Option<f64>,

    /// Finite-difference step as a fraction of axis length.
    #[arg(long, global = true)]
    fd_step_frac: Option<f64>,

    /// Bisection tolerance override (axis units).
    #[arg(long, global = true)]
    bisect_tol: Option<f64>,

    /// Worker threads for parallel scans (default: machine parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print V(p) for a model and a lottery file.
    Eval(ModelLottery),
    /// Run the full axiom audit and emit the report.
    Audit(ModelOnly),
    /// Solve for the prize y with δ_(y, t−τ) indifferent to δ_(x, t).
    Indiff(IndiffArgs),
    /// Time certainty equivalent of a time lottery, with the risk-premium sign.
    Ce(ModelLottery),
    /// Local weak-RSTL chain demonstration at an interior (x, t).
    DemoIncompat(DemoArgs),
    /// Audit strict SI / strict RATL over an (a, b) parameter rectangle.
    ScanExample(ScanArgs),
    /// Sweep the bilinear weight π(½) and report the SI / weak-RATL trade-off.
    GlbuDemo(GlbuDemoArgs),
    /// Check that a representation transform leaves pairwise rankings intact.
    Invariance(InvarianceArgs),
}

#[derive(Args)]
struct ModelOnly {
    /// Model file (JSON).
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args)]
struct ModelLottery {
    #[arg(long)]
    model: PathBuf,
    /// Lottery file (JSON), atoms over the model's domain.
    #[arg(long)]
    lottery: PathBuf,
}

#[derive(Args)]
struct IndiffArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    x: f64,
    #[arg(long)]
    t: f64,
    #[arg(long)]
    tau: f64,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    x: f64,
    #[arg(long)]
    t: f64,
    /// Number of τ values inside the local radius.
    #[arg(long, default_value_t = 20)]
    ntau: usize,
}

#[derive(Args)]
struct ScanArgs {
    /// Exponent range as LO:HI.
    #[arg(long, value_parser = parse_range)]
    a_range: (f64, f64),
    /// Curvature range as LO:HI.
    #[arg(long, value_parser = parse_range)]
    b_range: (f64, f64),
    #[arg(long)]
    d: f64,
    /// Cells per axis.
    #[arg(long, default_value_t = 50)]
    cells: usize,
    /// Bounded-ratio scale of the prize evaluation v(x) = c·x/(1+x).
    #[arg(long, default_value_t = 1.0)]
    value_c: f64,
    /// Prize window as LO:HI.
    #[arg(long, value_parser = parse_range, default_value = "0.1:10.0")]
    x_range: (f64, f64),
    /// Time window as LO:HI.
    #[arg(long, value_parser = parse_range, default_value = "0.1:5.0")]
    t_range: (f64, f64),
    /// Per-cell audit grid.
    #[arg(long, default_value_t = 21)]
    scan_grid_n: usize,
}

#[derive(Args)]
struct GlbuDemoArgs {
    /// A glbu model file supplying the base (D, v) and domain.
    #[arg(long)]
    model: PathBuf,
    /// Comma-separated π values; default 0.05,0.10,…,0.95.
    /// (Spelled std::vec::Vec so clap takes the whole list from one parser
    /// call instead of treating the arg as multi-occurrence.)
    #[arg(long, value_parser = parse_list)]
    pi_grid: Option<std::vec::Vec<f64>>,
}

#[derive(Args)]
struct InvarianceArgs {
    #[arg(long)]
    model: PathBuf,
    /// Positive scale of the log-components.
    #[arg(long)]
    a: f64,
    /// Shift of ln D.
    #[arg(long, allow_negative_numbers = true)]
    b1: f64,
    /// Shift of ln v.
    #[arg(long, allow_negative_numbers = true)]
    b2: f64,
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
    /// Negative control: transform D and v but leave φ unadjusted.
    #[arg(long, default_value_t = false)]
    broken_phi: bool,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    Ok((lo, hi))
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad value `{v}`: {e}"))
        })
        .collect()
}

#[derive(Serialize)]
struct Envelope {
    /// Volatile fields live here; everything below it is byte-deterministic
    /// for a fixed config and seed.
    meta: Meta,
    config: serde_json::Value,
    result: serde_json::Value,
}

#[derive(Serialize)]
struct Meta {
    tool: &'static str,
    version: &'static str,
    unix_time_secs: u64,
}

impl Meta {
    fn now() -> Self {
        Meta {
            tool: "timelot",
            version: env!("CARGO_PKG_VERSION"),
            unix_time_secs: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);

    match &cli.command {
        Command::Eval(args) => {
            let model = parse_model_file(&args.model).context("reading model file")?;
            let lottery = parse_lottery_file(&args.lottery, model.domain())
                .context("reading lottery file")?;
            let value = model.eval_lottery(&lottery)?;
            let mut config = base_config(&cli, "eval", seed, Some(&args.model));
            config["lottery_path"] = json!(args.lottery.display().to_string());
            let result = json!({ "value": value, "model_id": model.id_string() });
            emit(&cli, config, result, &[("value", value.to_string())])?;
            Ok(0)
        }
        Command::Audit(args) => {
            let model = parse_model_file(&args.model).context("reading model file")?;
            let tol = resolve_tolerances(&cli, &model, seed)?;
            let report = audit(&model, &tol);
            let code = if report.all_gates_hold() { 0 } else { 1 };
            let config = config_with_tol(&cli, "audit", seed, Some(&args.model), &tol)?;
            emit_audit(&cli, config, &report)?;
            Ok(code)
        }
        Command::Indiff(args) => {
            let model = parse_model_file(&args.model).context("reading model file")?;
            let tol = resolve_tolerances(&cli, &model, seed)?;
            let solve = SolveSettings::from_tolerances(&tol);
            let y = find_indifferent_prize(&model, args.x, args.t, args.tau, &solve)?;
            let residual = match y {
                Some(y) => Some(
                    (model.eval_at(y, args.t - args.tau)? - model.eval_at(args.x, args.t)?).abs(),
                ),
                None => None,
            };
            let mut config = config_with_tol(&cli, "indiff", seed, Some(&args.model), &tol)?;
            config["args"] = json!({ "x": args.x, "t": args.t, "tau": args.tau });
            let result = json!({
                "x": args.x, "t": args.t, "tau": args.tau,
                "y": y,
                "indifference_residual": residual,
                "no_solution": y.is_none(),
            });
            let y_text = y.map_or("no_solution".to_string(), |y| y.to_string());
            emit(&cli, config, result, &[("y", y_text)])?;
            Ok(0)
        }
        Command::Ce(args) => {
            let model = parse_model_file(&args.model).context("reading model file")?;
            let lottery = parse_lottery_file(&args.lottery, model.domain())
                .context("reading lottery file")?;
            let tol = resolve_tolerances(&cli, &model, seed)?;
            let solve = SolveSettings::from_tolerances(&tol);
            let t_star = time_certainty_equivalent(&model, &lottery, &solve)?;
            let t_bar = lottery.expected_time()?;
            let premium = t_star - t_bar;
            let classification = if premium > tol.bisect_tol {
                "risk_averse"
            } else if premium < -tol.bisect_tol {
                "risk_seeking"
            } else {
                "neutral"
            };
            let mut config = config_with_tol(&cli, "ce", seed, Some(&args.model), &tol)?;
            config["lottery_path"] = json!(args.lottery.display().to_string());
            let result = json!({
                "t_star": t_star,
                "expected_time": t_bar,
                "risk_premium": premium,
                "classification": classification,
            });
            emit(
                &cli,
                config,
                result,
                &[
                    ("t_star", t_star.to_string()),
                    ("expected_time", t_bar.to_string()),
                    ("classification", classification.to_string()),
                ],
            )?;
            Ok(0)
        }
        Command::DemoIncompat(args) => {
            let model = parse_model_file(&args.model).context("reading model file")?;
            let tol = resolve_tolerances(&cli, &model, seed)?;
            let mut config = config_with_tol(&cli, "demo-incompat", seed, Some(&args.model), &tol)?;
            config["args"] = json!({ "x": args.x, "t": args.t, "ntau": args.ntau });
            match demo_local_rstl(&model, args.x, args.t, args.ntau, &tol) {
                Ok(trace) => {
                    let code = if trace.all_rows_hold() { 0 } else { 1 };
                    if cli.format == Format::Csv {
                        write_output(&cli, trace_to_csv(&trace))?;
                    } else {
                        write_envelope(&cli, config, serde_json::to_value(&trace)?)?;
                    }
                    Ok(code)
                }
                Err(timelot::Error::HypothesisFailed { axiom }) => {
                    if cli.format == Format::Csv {
                        write_output(&cli, format!("hypothesis_failed,{axiom}\n"))?;
                    } else {
                        write_envelope(&cli, config, json!({ "hypothesis_failed": axiom }))?;
                    }
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::ScanExample(args) => {
            let scan = RegionScanConfig {
                a_range: args.a_range,
                b_range: args.b_range,
                d: args.d,
                value: ValueSpec::BoundedRatio { c: args.value_c },
                domain: Domain::new(
                    args.x_range.0,
                    args.x_range.1,
                    args.t_range.0,
                    args.t_range.1,
                )?,
                cells: args.cells,
                grid_n: args.scan_grid_n,
            };
            let map = scan_example_region(&scan)?;
            let code = if map.guarantee_respected() { 0 } else { 1 };
            let mut config = base_config(&cli, "scan-example", seed, None);
            config["args"] = json!({
                "a_range": [args.a_range.0, args.a_range.1],
                "b_range": [args.b_range.0, args.b_range.1],
                "d": args.d,
                "cells": args.cells,
                "value_c": args.value_c,
                "x_range": [args.x_range.0, args.x_range.1],
                "t_range": [args.t_range.0, args.t_range.1],
                "scan_grid_n": args.scan_grid_n,
            });
            if cli.format == Format::Csv {
                write_output(&cli, region_map_to_csv(&map))?;
            } else {
                write_envelope(&cli, config, serde_json::to_value(&map)?)?;
            }
            Ok(code)
        }
        Command::GlbuDemo(args) => {
            let model = parse_model_file(&args.model).context("reading model file")?;
            let Model::Glbu(glbu) = &model else {
                anyhow::bail!("glbu-demo needs a model file with family `glbu`");
            };
            let pi_grid = args.pi_grid.clone().unwrap_or_else(default_pi_grid);
            let grid_n = cli.grid_n.unwrap_or(DEFAULT_GRID_N);
            let rows = glbu_tradeoff_demo(
                &pi_grid,
                glbu.discount(),
                glbu.value(),
                *model.domain(),
                grid_n,
                seed,
            )?;
            let code = if rows.iter().any(|r| r.exhibits_conflict()) {
                1
            } else {
                0
            };
            let mut config = base_config(&cli, "glbu-demo", seed, Some(&args.model));
            config["args"] = json!({ "pi_grid": pi_grid, "grid_n": grid_n });
            if cli.format == Format::Csv {
                write_output(&cli, tradeoff_to_csv(&rows))?;
            } else {
                write_envelope(&cli, config, serde_json::to_value(&rows)?)?;
            }
            Ok(code)
        }
        Command::Invariance(args) => {
            let model = parse_model_file(&args.model).context("reading model file")?;
            let Some(eu) = model.as_multiplicative_eu() else {
                anyhow::bail!("invariance needs a multiplicative_eu model");
            };
            let report = if args.broken_phi {
                let broken = broken_transform(eu, args.a, args.b1, args.b2)?;
                ranking_agreement(&model, &Model::MultiplicativeEu(broken), args.pairs, seed)
            } else {
                invariance_suite(eu, args.a, args.b1, args.b2, args.pairs, seed)?
            };
            let code = if report.agreed { 0 } else { 1 };
            let mut config = base_config(&cli, "invariance", seed, Some(&args.model));
            config["args"] = json!({
                "a": args.a, "b1": args.b1, "b2": args.b2,
                "pairs": args.pairs, "broken_phi": args.broken_phi,
            });
            emit(
                &cli,
                config,
                serde_json::to_value(&report)?,
                &[
                    ("agreed", report.agreed.to_string()),
                    ("disagreements", report.disagreements.to_string()),
                ],
            )?;
            Ok(code)
        }
    }
}

/// Scale-aware defaults resolved against the model, with explicit flag
/// overrides applied on top and re-validated.
fn resolve_tolerances(cli: &Cli, model: &Model, seed: u64) -> Result<Tolerances> {
    let base = model.default_tolerances_with(
        cli.grid_n.unwrap_or(DEFAULT_GRID_N),
        cli.sample_n.unwrap_or(DEFAULT_SAMPLE_N),
        seed,
    );
    let tol = Tolerances::new(
        cli.eq_tol.unwrap_or(base.eq_tol),
        cli.strict_margin.unwrap_or(base.strict_margin),
        cli.fd_step_frac.unwrap_or(base.fd_step_frac),
        cli.bisect_tol.unwrap_or(base.bisect_tol),
        base.grid_n,
        base.sample_n,
        seed,
    )?;
    Ok(tol)
}

fn base_config(cli: &Cli, command: &str, seed: u64, model: Option<&PathBuf>) -> serde_json::Value {
    json!({
        "command": command,
        "model_path": model.map(|p| p.display().to_string()),
        "seed": seed,
        "format": if cli.format == Format::Csv { "csv" } else { "json" },
        "threads": cli.threads,
    })
}

fn config_with_tol(
    cli: &Cli,
    command: &str,
    seed: u64,
    model: Option<&PathBuf>,
    tol: &Tolerances,
) -> Result<serde_json::Value> {
    let mut config = base_config(cli, command, seed, model);
    config["tolerances"] = serde_json::to_value(tol)?;
    Ok(config)
}

fn emit(
    cli: &Cli,
    config: serde_json::Value,
    result: serde_json::Value,
    csv_rows: &[(&str, String)],
) -> Result<()> {
    if cli.format == Format::Csv {
        let mut out = String::from("key,value\n");
        for (k, v) in csv_rows {
            out.push_str(&format!("{k},{v}\n"));
        }
        write_output(cli, out)
    } else {
        write_envelope(cli, config, result)
    }
}

fn emit_audit(cli: &Cli, config: serde_json::Value, report: &AuditReport) -> Result<()> {
    if cli.format == Format::Csv {
        write_output(cli, audit_report_to_csv(report))
    } else {
        write_envelope(cli, config, serde_json::to_value(report)?)
    }
}

fn write_envelope(cli: &Cli, config: serde_json::Value, result: serde_json::Value) -> Result<()> {
    let envelope = Envelope {
        meta: Meta::now(),
        config,
        result,
    };
    let mut text = serde_json::to_string_pretty(&envelope)?;
    text.push('\n');
    write_output(cli, text)
}

fn write_output(cli: &Cli, text: String) -> Result<()> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}
