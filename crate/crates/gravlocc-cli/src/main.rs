//! Batch front-end: `bound`, `sensitivity`, `check` and `benchmarks`
//! subcommands over a TOML run configuration.
//!
//! Exit codes: 0 success (and, for `check`, every entry passing); 1 any
//! marginal or failing check; 2 configuration or missing-parameter errors;
//! 3 numerical failures (the message names the failing operation).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use gravlocc::experiment::{self, CheckReport, CheckStatus, ExperimentParams};
use gravlocc::finite_dim::{
    swap_bound, teleportation_threshold_bound, FiniteEnsembleSpec, RadialWeight,
};
use gravlocc::geometry::{g_norm_universal_bound, g_operator_norm};
use gravlocc::locc::{bound_passive, heterodyne_lower_bound, GaussianEnsemble};
use gravlocc::short_time::{remainder_budget, sensitivity, zeta_line};
use gravlocc::Tolerances;
use gravlocc_cli::config::RunConfig;
use gravlocc_cli::output::{fmt_sig, Cell, CsvWriter, Table};

#[derive(Parser)]
#[command(name = "gravlocc", about = "LOCC-inequality bounds for gravitationally coupled oscillator arrays", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides the config's `output.path`.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed override for randomised subset policies.
    #[arg(long)]
    seed: Option<u64>,
    /// Margin override operationalising "much less than" in checks.
    #[arg(long)]
    margin: Option<f64>,
    /// Subset policy override: exhaustive | alternating | random:<k>.
    #[arg(long, value_name = "POLICY")]
    subset_policy: Option<String>,
}

#[derive(Args, Clone)]
struct BenchArgs {
    /// Optional output file for the benchmark table.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed (accepted for interface uniformity; benchmarks are
    /// deterministic).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the LOCC inequality over the configured time grid.
    Bound(CommonArgs),
    /// Sensitivity eta, its maximiser and the line-geometry asymptotics.
    Sensitivity(CommonArgs),
    /// Feasibility checks: assumptions, noise budget, pendulum criteria.
    Check(CommonArgs),
    /// Finite-dimensional benchmarks (swap bound, teleportation thresholds).
    Benchmarks(BenchArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound(args) => cmd_bound(&args),
        Command::Sensitivity(args) => cmd_sensitivity(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Benchmarks(args) => cmd_benchmarks(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e))
        }
    }
}

fn classify(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(ge) = cause.downcast_ref::<gravlocc::Error>() {
            return match ge {
                gravlocc::Error::MissingParameter(_) => 2,
                _ => 3,
            };
        }
    }
    2
}

fn load_config(args: &CommonArgs) -> anyhow::Result<RunConfig> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading config {}", args.config.display()))?;
    let mut cfg = RunConfig::parse(&text).context("parsing config")?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(margin) = args.margin {
        cfg.subsets.margin = margin;
    }
    if let Some(policy) = &args.subset_policy {
        match policy.as_str() {
            "exhaustive" | "alternating" => {
                cfg.subsets.policy = policy.clone();
                cfg.subsets.count = None;
            }
            other => {
                let Some(count) = other.strip_prefix("random:").and_then(|k| k.parse().ok())
                else {
                    anyhow::bail!("unknown subset policy `{other}`");
                };
                cfg.subsets.policy = "random".to_string();
                cfg.subsets.count = Some(count);
            }
        }
        cfg.validate().context("validating overridden config")?;
    }
    if let Some(path) = &args.output {
        cfg.output.path = Some(path.display().to_string());
    }
    Ok(cfg)
}

fn deliver(cfg: &RunConfig, content: &str) -> anyhow::Result<()> {
    match &cfg.output.path {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing output {path}"))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_bound(args: &CommonArgs) -> anyhow::Result<u8> {
    let cfg = load_config(args)?;
    let tol = Tolerances::default();
    let geo = cfg.resolve_geometry(&tol)?;
    let policy = cfg.subset_policy();
    let lambda = cfg.ensemble.lambda;
    let ens = GaussianEnsemble::new(geo.n, lambda).context("building ensemble")?;
    let gamma = geo.coupling.gamma_scale();
    let g_norm = g_operator_norm(&geo.coupling);
    let eta = sensitivity(&geo.coupling, &policy, &tol)
        .context("sensitivity")?
        .eta;

    let mut csv = CsvWriter::new(cfg.output.precision);
    csv.comment(&format!("seed = {}", cfg.seed));
    csv.comment(&format!(
        "subset policy = {}{}",
        cfg.subsets.policy,
        if cfg.subsets.policy == "random" {
            format!(":{}", cfg.subsets.count.unwrap_or(0))
        } else {
            String::new()
        }
    ));
    csv.header(&[
        "t_seconds",
        "gamma_t",
        "lambda",
        "bound_value",
        "min_subset",
        "heterodyne_lb",
        "linear_expansion",
        "delta_budget",
    ]);
    for t in cfg.time_grid() {
        let b = bound_passive(&geo.coupling, t, &ens, &policy, &tol).context("bound_passive")?;
        if b.value > 1.0 + 1e-12 {
            return Err(gravlocc::Error::CrossCheck(format!(
                "bound_passive produced {} > 1 at t = {t}",
                b.value
            ))
            .into());
        }
        // the inequality is at most 1; shave the sub-1e-12 excess the
        // lambda floor can introduce at t = 0
        let value = b.value.min(1.0);
        let het = heterodyne_lower_bound(&ens);
        let linear = 1.0 - eta * t;
        let delta = remainder_budget(geo.n, lambda, t, g_norm, gamma)
            .context("remainder_budget")?
            .delta_exact_g;
        csv.row(&[
            Cell::Num(t),
            Cell::Num(gamma * t),
            Cell::Num(lambda),
            Cell::Num(value),
            Cell::Text(b.subset_bitstring(geo.n)),
            Cell::Num(het),
            Cell::Num(linear),
            Cell::Num(delta),
        ]);
    }
    deliver(&cfg, &csv.finish())?;
    Ok(0)
}

fn cmd_sensitivity(args: &CommonArgs) -> anyhow::Result<u8> {
    let cfg = load_config(args)?;
    let tol = Tolerances::default();
    let geo = cfg.resolve_geometry(&tol)?;
    let policy = cfg.subset_policy();
    let s = sensitivity(&geo.coupling, &policy, &tol).context("sensitivity")?;
    let gamma = geo.coupling.gamma_scale();
    let universal = match s.universal_norm_bound {
        Some(u) => u,
        None => g_norm_universal_bound(geo.n, gamma).context("universal norm bound")?,
    };
    let ratio = s.eta / (geo.n as f64 * gamma);
    let zeta_ref = if geo.is_line { Some(zeta_line(&tol)) } else { None };

    let mut csv = CsvWriter::new(cfg.output.precision);
    csv.comment(&format!("seed = {}", cfg.seed));
    csv.header(&[
        "n",
        "gamma_scale",
        "eta",
        "eta_over_n_gamma",
        "zeta_line_reference",
        "universal_norm_bound",
        "max_subset",
        "singular_values",
    ]);
    let mask: String = (0..geo.n)
        .map(|j| if s.maximizing_subset.contains(&j) { '1' } else { '0' })
        .collect();
    let sv = s
        .singular_values
        .iter()
        .map(|&x| fmt_sig(x, cfg.output.precision))
        .collect::<Vec<_>>()
        .join(";");
    csv.row(&[
        Cell::Int(geo.n as i64),
        Cell::Num(gamma),
        Cell::Num(s.eta),
        Cell::Num(ratio),
        match zeta_ref {
            Some(z) => Cell::Num(z),
            None => Cell::Text(String::new()),
        },
        Cell::Num(universal),
        Cell::Text(mask),
        Cell::Text(sv),
    ]);
    deliver(&cfg, &csv.finish())?;
    Ok(0)
}

fn status_text(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Marginal => "marginal",
        CheckStatus::Fail => "fail",
    }
}

fn report_rows(report: &CheckReport, table: &mut Table, csv: &mut CsvWriter, sig: usize) {
    for e in &report.entries {
        let unit = e.lhs.dim.to_string();
        table.row(vec![
            e.name.clone(),
            fmt_sig(e.lhs.value, 6),
            fmt_sig(e.rhs.value, 6),
            unit.clone(),
            fmt_sig(e.ratio, 6),
            status_text(e.status).to_string(),
            e.note.clone().unwrap_or_default(),
        ]);
        csv.row(&[
            Cell::Text(e.name.clone()),
            Cell::Num(e.lhs.value),
            Cell::Num(e.rhs.value),
            Cell::Text(unit),
            Cell::Num(e.ratio),
            Cell::Text(status_text(e.status).to_string()),
        ]);
        let _ = sig;
    }
    for (name, missing) in &report.skipped {
        table.row(vec![
            name.clone(),
            "-".into(),
            "-".into(),
            "-".into(),
            "-".into(),
            "skipped".into(),
            format!("missing parameter `{missing}`"),
        ]);
        csv.row(&[
            Cell::Text(name.clone()),
            Cell::Text(String::new()),
            Cell::Text(String::new()),
            Cell::Text(String::new()),
            Cell::Text(String::new()),
            Cell::Text("skipped".to_string()),
        ]);
    }
}

fn missing_assumption_params(p: &ExperimentParams) -> Vec<&'static str> {
    [
        ("mass", p.mass),
        ("separation", p.separation),
        ("radius", p.radius),
        ("omega", p.omega),
        ("delta_omega", p.delta_omega),
        ("lambda", p.lambda),
        ("run_time", p.run_time),
        ("dielectric", p.dielectric),
    ]
    .iter()
    .filter(|(_, v)| v.is_none())
    .map(|(n, _)| *n)
    .collect()
}

fn cmd_check(args: &CommonArgs) -> anyhow::Result<u8> {
    let cfg = load_config(args)?;
    let margin = cfg.subsets.margin;
    let Some(exp) = &cfg.experiment else {
        anyhow::bail!("`check` needs an [experiment] section in the config");
    };
    let params = exp.to_params();

    let mut table = Table::new(&["check", "lhs", "rhs", "unit", "ratio", "status", "note"]);
    let mut csv = CsvWriter::new(cfg.output.precision);
    csv.comment(&format!("seed = {}", cfg.seed));
    csv.comment(&format!("margin = {margin}"));
    csv.header(&["check", "lhs", "rhs", "unit", "ratio", "status"]);

    let pendulum_mode = params.pendulum_omega.is_some();
    let mut any_bad = false;

    if pendulum_mode {
        let report = experiment::pendulum_feasibility(&params, margin)
            .context("pendulum_feasibility")?;
        any_bad |= !report.all_pass();
        report_rows(&report, &mut table, &mut csv, cfg.output.precision);
    } else {
        let missing = missing_assumption_params(&params);
        if !missing.is_empty() {
            anyhow::bail!(
                "missing experiment parameters: {}",
                missing.join(", ")
            );
        }
        let report =
            experiment::check_assumptions(&params, margin).context("check_assumptions")?;
        any_bad |= !report.all_pass();
        report_rows(&report, &mut table, &mut csv, cfg.output.precision);

        let runtime = experiment::runtime_estimate(&params, 0.9).context("runtime_estimate")?;
        table.row(vec![
            "runtime_estimate_f90".into(),
            fmt_sig(runtime, 6),
            "-".into(),
            "s".into(),
            "-".into(),
            "info".into(),
            "single-repetition time to reach bound 0.9".into(),
        ]);
        csv.row(&[
            Cell::Text("runtime_estimate_f90".to_string()),
            Cell::Num(runtime),
            Cell::Text(String::new()),
            Cell::Text("s".to_string()),
            Cell::Text(String::new()),
            Cell::Text("info".to_string()),
        ]);

        let noise = experiment::noise_budget(&params, margin).context("noise_budget")?;
        any_bad |= !noise.all_pass();
        report_rows(&noise, &mut table, &mut csv, cfg.output.precision);
    }

    // table to the terminal, CSV to the output path when one is set
    println!("{}", table.render());
    if cfg.output.path.is_some() {
        deliver(&cfg, &csv.finish())?;
    }
    Ok(if any_bad { 1 } else { 0 })
}

fn cmd_benchmarks(args: &BenchArgs) -> anyhow::Result<u8> {
    let tol = Tolerances::default();
    let mut table = Table::new(&["benchmark", "parameter", "value", "closed_form"]);

    for d in 2..=8usize {
        let value = swap_bound(d).context("swap_bound")?;
        let closed = 4.0 / ((d as f64 + 1.0) * (d as f64 + 1.0));
        table.row(vec![
            "swap_bound".into(),
            format!("d = {d}"),
            fmt_sig(value, 12),
            fmt_sig(closed, 12),
        ]);
    }

    for lambda in [0.25, 0.5, 1.0, 2.0, 1e3] {
        let spec = FiniteEnsembleSpec::PhaseInvariantCoherent {
            weight: RadialWeight::Gaussian { lambda },
            n_max: 20,
        };
        let value = teleportation_threshold_bound(&spec, &tol)
            .context("teleportation_threshold_bound")?;
        let closed = (1.0 + lambda) / (2.0 + lambda);
        if (value - closed).abs() > 1e-9 {
            return Err(gravlocc::Error::CrossCheck(format!(
                "teleportation threshold at lambda = {lambda}: {value} vs {closed}"
            ))
            .into());
        }
        table.row(vec![
            "teleportation_threshold".into(),
            format!("lambda = {lambda}"),
            fmt_sig(value, 12),
            fmt_sig(closed, 12),
        ]);
    }

    let rendered = table.render();
    match &args.output {
        Some(path) => std::fs::write(path, &rendered)
            .with_context(|| format!("writing output {}", path.display()))?,
        None => print!("{rendered}"),
    }
    let _ = args.seed;
    Ok(0)
}
