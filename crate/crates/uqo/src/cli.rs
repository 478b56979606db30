//! Command-line surface for the `uqo` binary.
//!
//! Subcommands: `response`, `popchange`, `cycle`, `sweep`, `validate`,
//! `limits`. A plain key=value config file supplies defaults; flags
//! override it. Exit codes: 0 success, 2 invalid input, 3 validation
//! failure, 4 numerical non-convergence.

use crate::error::{Error, Result};
use crate::oracle::QuadratureSpec;
use crate::otto::{population_change, run_cycle, CycleParams};
use crate::response::{
    response_closed, response_difference, response_longtime_estimate, response_longtime_rate,
    Coupling, ResponsePoint,
};
use crate::sweep::{
    emit, preset, AxisSpec, OutputFormat, SweepSpec, SweepTarget, PRESETS,
};
use crate::validate::run_validation;
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "uqo",
    version,
    about = "Unruh quantum Otto engine: detector response functions and cycle thermodynamics"
)]
pub struct Cli {
    /// key=value file with default parameter values (flags override it)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct CommonOpts {
    /// detector coupling: linear|quadratic|fermionic
    #[arg(long)]
    pub coupling: Option<String>,
    /// turnaround speed v in (0,1); sets y = 2 arctanh(v)
    #[arg(long)]
    pub v: Option<f64>,
    /// gap ratio r = Omega2/Omega1 (> 1)
    #[arg(long)]
    pub gap_ratio: Option<f64>,
    /// squared dimensionless coupling (lambda * Omega1^Delta)^2
    #[arg(long)]
    pub lambda2: Option<f64>,
    /// hot-contact reduced acceleration alpha_H/Omega2
    #[arg(long)]
    pub a_hot: Option<f64>,
    /// cold-contact reduced acceleration alpha_C/Omega1
    #[arg(long)]
    pub a_cold: Option<f64>,
    /// output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// output format: csv|json|svg
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate the closed-form response F̂(x, y) for one coupling
    Response {
        #[command(flatten)]
        common: CommonOpts,
        /// dimensionless gap x = Omega/alpha (give either x or a)
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        /// dimensionless duration y = alpha T (defaults to 2 arctanh v)
        #[arg(long)]
        y: Option<f64>,
        /// reduced acceleration a = 1/x
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Population change of a single vacuum contact
    Popchange {
        #[command(flatten)]
        common: CommonOpts,
        /// reduced acceleration of the contact
        #[arg(long)]
        a: Option<f64>,
        /// initial excited population
        #[arg(long)]
        p: Option<f64>,
        /// gap during the contact in units of Omega1
        #[arg(long)]
        gap: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Close the full Otto cycle and print the work/heat ledger
    Cycle {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        json: bool,
    },
    /// Grid sweeps; `--preset figN` reproduces a figure dataset
    Sweep {
        #[command(flatten)]
        common: CommonOpts,
        /// figure preset name (fig2, fig3a..fig8b); overrides target/axes
        #[arg(long)]
        preset: Option<String>,
        /// sweep target (response_curve, popchange_curve, p0_surface,
        /// work_surface, classical_otto_surface, longtime_check)
        #[arg(long)]
        target: Option<String>,
        /// axis spec name=min:max:steps (repeat for surfaces)
        #[arg(long)]
        axis: Vec<String>,
        /// initial excited population
        #[arg(long)]
        p: Option<f64>,
        /// fixed dimensionless gap for response/longtime targets
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        /// emit the T-normalized population change
        #[arg(long)]
        t_normalized: bool,
        /// list available presets and exit
        #[arg(long)]
        list_presets: bool,
    },
    /// Run the oracle validation suite and emit a JSON report
    Validate {
        #[command(flatten)]
        common: CommonOpts,
        /// smaller grid (seconds instead of a minute)
        #[arg(long)]
        quick: bool,
    },
    /// Long-time limits: finite-y rate estimates vs the thermal rates
    Limits {
        #[command(flatten)]
        common: CommonOpts,
        /// dimensionless gap x = Omega/alpha
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        /// comma-separated y values
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

// ---------------------------------------------------------------------------
// config file
// ---------------------------------------------------------------------------

#[derive(Default)]
struct Config(BTreeMap<String, String>);

impl Config {
    fn load(path: Option<&PathBuf>) -> Result<Config> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)?;
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::InvalidSpec(format!(
                    "config line {} is not key=value: '{line}'",
                    lineno + 1
                )));
            };
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config(map))
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidSpec(format!("config {key}={s} is not a number"))),
        }
    }

    fn string(&self, key: &str) -> Option<String> {
        self.0.get(key).cloned()
    }
}

fn resolve(cli: Option<f64>, cfg: &Config, key: &str) -> Result<Option<f64>> {
    Ok(match cli {
        Some(v) => Some(v),
        None => cfg.f64(key)?,
    })
}

fn resolve_or(cli: Option<f64>, cfg: &Config, key: &str, default: f64) -> Result<f64> {
    Ok(resolve(cli, cfg, key)?.unwrap_or(default))
}

fn coupling_of(common: &CommonOpts, cfg: &Config) -> Result<Coupling> {
    let name = common
        .coupling
        .clone()
        .or_else(|| cfg.string("coupling"))
        .unwrap_or_else(|| "linear".into());
    Coupling::from_str(&name)
}

fn parse_axis(text: &str) -> Result<AxisSpec> {
    let bad = || Error::InvalidSpec(format!("axis '{text}' is not name=min:max:steps"));
    let (name, rest) = text.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(AxisSpec {
        name: name.trim().to_string(),
        min: parts[0].parse().map_err(|_| bad())?,
        max: parts[1].parse().map_err(|_| bad())?,
        steps: parts[2].parse().map_err(|_| bad())?,
    })
}

// ---------------------------------------------------------------------------
// command execution
// ---------------------------------------------------------------------------

fn y_from(v: f64) -> f64 {
    2.0 * v.atanh()
}

fn cmd_response(
    common: &CommonOpts,
    cfg: &Config,
    x: Option<f64>,
    y: Option<f64>,
    a: Option<f64>,
    json: bool,
) -> Result<()> {
    let coupling = coupling_of(common, cfg)?;
    let x = match (resolve(x, cfg, "x")?, resolve(a, cfg, "a")?) {
        (Some(x), _) => x,
        (None, Some(a)) => 1.0 / a,
        (None, None) => return Err(Error::InvalidSpec("response needs --x or --a".into())),
    };
    let y = match resolve(y, cfg, "y")? {
        Some(y) => y,
        None => y_from(resolve_or(common.v, cfg, "v", 0.8)?),
    };
    let p = ResponsePoint::new(x, y);
    let value = response_closed(coupling, p)?;
    let diff = if x > 0.0 {
        Some(response_difference(coupling, p)?)
    } else {
        None
    };
    let inertial = crate::response::inertial_term(p);
    if json {
        let js = serde_json::json!({
            "coupling": coupling.label(),
            "x": x, "y": y,
            "fhat": value.fhat,
            "difference": diff,
            "inertial": inertial,
            "reduced_accuracy": value.reduced_accuracy,
        });
        println!("{}", serde_json::to_string_pretty(&js).map_err(|e| Error::Io(e.to_string()))?);
    } else {
        println!("coupling   {}", coupling.label());
        println!("x          {x}");
        println!("y          {y}");
        println!("fhat       {}", value.fhat);
        if let Some(d) = diff {
            println!("dfhat      {d}");
        }
        println!("inertial   {inertial}");
        if value.reduced_accuracy {
            println!("note       x = 0 evaluated at the 1e-8 proxy (reduced accuracy)");
        }
    }
    Ok(())
}

fn cmd_popchange(
    common: &CommonOpts,
    cfg: &Config,
    a: Option<f64>,
    p: Option<f64>,
    gap: Option<f64>,
    json: bool,
) -> Result<()> {
    let coupling = coupling_of(common, cfg)?;
    let a = resolve(a, cfg, "a")?
        .ok_or_else(|| Error::InvalidSpec("popchange needs --a".into()))?;
    let p = resolve_or(p, cfg, "p", 0.0)?;
    let v = resolve_or(common.v, cfg, "v", 0.8)?;
    let lambda2 = resolve_or(common.lambda2, cfg, "lambda2", 1e-2)?;
    let gap = resolve_or(gap, cfg, "gap", 1.0)?;
    let change = population_change(coupling, a, p, v, lambda2, gap)?;
    let margin = crate::otto::perturbative_margin(
        coupling,
        a,
        v,
        lambda2 * gap.powi(2 * coupling.delta() as i32),
    );
    if json {
        let js = serde_json::json!({
            "coupling": coupling.label(),
            "a": a, "p": p, "v": v, "lambda2": lambda2, "gap": gap,
            "dp": change.dp,
            "perturbative_breach": change.perturbative_breach,
            "margin": margin,
        });
        println!("{}", serde_json::to_string_pretty(&js).map_err(|e| Error::Io(e.to_string()))?);
    } else {
        println!("dp         {}", change.dp);
        println!("margin     {margin}");
        if change.perturbative_breach {
            println!("warning    perturbative expansion breached (|dp| > 0.1 or p+dp outside [0,1])");
        }
    }
    Ok(())
}

fn cmd_cycle(common: &CommonOpts, cfg: &Config, json: bool) -> Result<()> {
    let params = CycleParams {
        coupling: coupling_of(common, cfg)?,
        a_hot: resolve(common.a_hot, cfg, "a-hot")?
            .ok_or_else(|| Error::InvalidSpec("cycle needs --a-hot".into()))?,
        a_cold: resolve(common.a_cold, cfg, "a-cold")?
            .ok_or_else(|| Error::InvalidSpec("cycle needs --a-cold".into()))?,
        v: resolve_or(common.v, cfg, "v", 0.8)?,
        gap_ratio: resolve_or(common.gap_ratio, cfg, "gap-ratio", 2.0)?,
        lambda2: resolve_or(common.lambda2, cfg, "lambda2", 1e-2)?,
    };
    let report = run_cycle(&params)?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?
        );
    } else {
        println!("p0              {}", report.p0);
        println!("dp_hot          {}", report.dp_hot);
        println!("dp_cold         {}", report.dp_cold);
        println!("W1 (expand)     {}", report.w1);
        println!("Q2 (hot)        {}", report.q2);
        println!("W3 (contract)   {}", report.w3);
        println!("Q4 (cold)       {}", report.q4);
        println!("W_total         {}", report.w_total);
        println!("Q_total         {}", report.q_total);
        println!("W_ext           {}", report.w_ext);
        println!("efficiency      {}", report.efficiency);
        println!("positive work   {}", report.positive_work);
        println!("margin hot      {}", report.perturbative_margin_hot);
        println!("margin cold     {}", report.perturbative_margin_cold);
        for w in &report.warnings {
            println!("warning         {w}");
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    common: &CommonOpts,
    cfg: &Config,
    preset_name: Option<String>,
    target: Option<String>,
    axes: &[String],
    p: Option<f64>,
    x: Option<f64>,
    t_normalized: bool,
    list_presets: bool,
) -> Result<()> {
    if list_presets {
        for name in PRESETS {
            println!("{name}");
        }
        return Ok(());
    }
    let preset_name = preset_name.or_else(|| cfg.string("preset"));
    let mut spec = match &preset_name {
        Some(name) => preset(name)?,
        None => {
            let target_name = target
                .or_else(|| cfg.string("target"))
                .ok_or_else(|| Error::InvalidSpec("sweep needs --preset or --target".into()))?;
            let mut s = SweepSpec {
                target: SweepTarget::from_str(&target_name)?,
                coupling: coupling_of(common, cfg)?,
                ..SweepSpec::default()
            };
            if !axes.is_empty() {
                s.axes = axes.iter().map(|a| parse_axis(a)).collect::<Result<_>>()?;
            }
            s
        }
    };
    // flags refine even a preset (e.g. coarser grids for smoke tests)
    if preset_name.is_none() || common.coupling.is_some() {
        if common.coupling.is_some() {
            spec.coupling = coupling_of(common, cfg)?;
        }
    }
    if let Some(v) = resolve(common.v, cfg, "v")? {
        spec.v = v;
    }
    if let Some(r) = resolve(common.gap_ratio, cfg, "gap-ratio")? {
        spec.gap_ratio = r;
    }
    if let Some(l2) = resolve(common.lambda2, cfg, "lambda2")? {
        spec.lambda2 = l2;
    }
    if let Some(p) = resolve(p, cfg, "p")? {
        spec.p = p;
        spec.p_list = Vec::new();
    }
    if let Some(x) = resolve(x, cfg, "x")? {
        spec.x = x;
    }
    if t_normalized {
        spec.t_normalized = true;
    }
    if let Some(fmt) = common.format.clone().or_else(|| cfg.string("format")) {
        spec.format = OutputFormat::from_str(&fmt)?;
    }
    spec.out = common.out.clone().or_else(|| cfg.string("out").map(PathBuf::from));
    emit(&spec)?;
    Ok(())
}

fn cmd_validate(common: &CommonOpts, quick: bool) -> Result<()> {
    let report = run_validation(&QuadratureSpec::default(), quick)?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
    match &common.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    for check in &report.checks {
        eprintln!(
            "{} {}: observed {:e} ({} {:e})",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.observed,
            if check.larger_is_better { ">=" } else { "<=" },
            check.threshold,
        );
    }
    if !report.passed {
        return Err(Error::ValidationFailed(
            "one or more checks exceeded tolerance".into(),
        ));
    }
    Ok(())
}

fn cmd_limits(
    common: &CommonOpts,
    cfg: &Config,
    x: Option<f64>,
    y: Option<String>,
    json: bool,
) -> Result<()> {
    let coupling = coupling_of(common, cfg)?;
    let x = resolve_or(x, cfg, "x", 1.0)?;
    let ys: Vec<f64> = match y.or_else(|| cfg.string("y")) {
        Some(list) => list
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("bad y value '{t}'")))
            })
            .collect::<Result<_>>()?,
        None => vec![50.0, 100.0, 200.0],
    };
    let limit = response_longtime_rate(coupling, x, 1.0);
    let mut rows = Vec::new();
    for &yv in &ys {
        let est = response_longtime_estimate(coupling, x, 1.0, yv)?;
        let up = response_closed(coupling, ResponsePoint::new(x, yv))?.fhat;
        let down = response_closed(coupling, ResponsePoint::new(-x, yv))?.fhat;
        rows.push((yv, est, (est - limit).abs(), up / down));
    }
    let boltzmann = (-2.0 * std::f64::consts::PI * x).exp();
    if json {
        let js = serde_json::json!({
            "coupling": coupling.label(),
            "x": x,
            "rate_limit": limit,
            "boltzmann_expected": boltzmann,
            "rows": rows.iter().map(|(y, est, err, ratio)| serde_json::json!({
                "y": y, "rate_estimate": est, "rate_abs_error": err, "boltzmann_ratio": ratio,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&js).map_err(|e| Error::Io(e.to_string()))?);
    } else {
        println!("rate limit          {limit}");
        println!("boltzmann expected  {boltzmann}");
        println!("{:>10} {:>24} {:>14} {:>18}", "y", "rate_estimate", "abs_error", "boltzmann_ratio");
        for (y, est, err, ratio) in rows {
            println!("{y:>10} {est:>24} {err:>14.3e} {ratio:>18.12}");
        }
    }
    Ok(())
}

/// Maps errors onto the documented exit codes.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_)
        | Error::InvalidSpec(_)
        | Error::InvalidDuration { .. }
        | Error::UnsupportedDimension { .. }
        | Error::Io(_) => 2,
        Error::ValidationFailed(_) => 3,
        Error::SingularShift { .. }
        | Error::NonConvergent { .. }
        | Error::AsymptoticAccuracy { .. }
        | Error::NearSingularity { .. }
        | Error::Resonance { .. }
        | Error::DegenerateCycle
        | Error::QuadratureNonConvergent(_)
        | Error::ExtrapolationUnstable { .. } => 4,
    }
}

/// Parses argv and runs a subcommand; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let cfg = match Config::load(cli.config.as_ref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let result = match &cli.command {
        Command::Response { common, x, y, a, json } => {
            cmd_response(common, &cfg, *x, *y, *a, *json)
        }
        Command::Popchange { common, a, p, gap, json } => {
            cmd_popchange(common, &cfg, *a, *p, *gap, *json)
        }
        Command::Cycle { common, json } => cmd_cycle(common, &cfg, *json),
        Command::Sweep {
            common,
            preset,
            target,
            axis,
            p,
            x,
            t_normalized,
            list_presets,
        } => cmd_sweep(
            common,
            &cfg,
            preset.clone(),
            target.clone(),
            axis,
            *p,
            *x,
            *t_normalized,
            *list_presets,
        ),
        Command::Validate { common, quick } => cmd_validate(common, *quick),
        Command::Limits { common, x, y, json } => cmd_limits(common, &cfg, *x, y.clone(), *json),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
