//! Parameter sweeps reproducing every figure's dataset, with CSV/JSON/SVG
//! emission.
//!
//! Output is deterministic: fixed row ordering, shortest-round-trip decimal
//! serialization for numbers, no timestamps. The CSV header's first line
//! carries the crate version and a hash of the generating spec.

use crate::error::{Error, Result};
use crate::otto::{
    classical_otto_dp, margin_class, perturbative_margin, population_change, run_cycle,
    CycleParams, MarginClass,
};
use crate::response::{
    response_closed, response_difference, response_longtime_estimate, response_longtime_rate,
    Coupling, ResponsePoint,
};
use crate::svg;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

/// What a sweep evaluates on its grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepTarget {
    ResponseCurve,
    PopchangeCurve,
    P0Surface,
    WorkSurface,
    ClassicalOttoSurface,
    LongtimeCheck,
}

impl SweepTarget {
    pub fn label(self) -> &'static str {
        match self {
            SweepTarget::ResponseCurve => "response_curve",
            SweepTarget::PopchangeCurve => "popchange_curve",
            SweepTarget::P0Surface => "p0_surface",
            SweepTarget::WorkSurface => "work_surface",
            SweepTarget::ClassicalOttoSurface => "classical_otto_surface",
            SweepTarget::LongtimeCheck => "longtime_check",
        }
    }
}

impl FromStr for SweepTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "response_curve" => SweepTarget::ResponseCurve,
            "popchange_curve" => SweepTarget::PopchangeCurve,
            "p0_surface" => SweepTarget::P0Surface,
            "work_surface" => SweepTarget::WorkSurface,
            "classical_otto_surface" => SweepTarget::ClassicalOttoSurface,
            "longtime_check" => SweepTarget::LongtimeCheck,
            other => {
                return Err(Error::InvalidSpec(format!("unknown sweep target '{other}'")))
            }
        })
    }
}

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            "svg" => OutputFormat::Svg,
            other => return Err(Error::InvalidSpec(format!("unknown format '{other}'"))),
        })
    }
}

/// One grid axis: `steps` evenly spaced values on [min, max].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxisSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

const AXIS_NAMES: [&str; 7] = ["a", "a_hot", "a_cold", "x", "y", "p", "v"];

/// Full sweep description; figure presets are canned values of this.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub target: SweepTarget,
    pub coupling: Coupling,
    pub axes: Vec<AxisSpec>,
    /// Turnaround speed (sets y = 2 arctanh v) unless `v_list` is used.
    pub v: f64,
    pub gap_ratio: f64,
    pub lambda2: f64,
    /// Initial excited population unless `p_list` is used.
    pub p: f64,
    /// Outer loop over initial populations (multi-curve figures).
    pub p_list: Vec<f64>,
    /// Outer loop over velocities (multi-curve figures).
    pub v_list: Vec<f64>,
    /// Fixed dimensionless gap for response/longtime targets.
    pub x: f64,
    /// Emit the T-normalized population change (1-2p)F̂ - pΔF̂ instead of δp.
    pub t_normalized: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            target: SweepTarget::PopchangeCurve,
            coupling: Coupling::Linear,
            axes: vec![AxisSpec {
                name: "a".into(),
                min: 0.1,
                max: 10.0,
                steps: 200,
            }],
            v: 0.8,
            gap_ratio: 2.0,
            lambda2: 1e-2,
            p: 0.0,
            p_list: Vec::new(),
            v_list: Vec::new(),
            x: 1.0,
            t_normalized: false,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let expected_axes = match self.target {
            SweepTarget::P0Surface
            | SweepTarget::WorkSurface
            | SweepTarget::ClassicalOttoSurface => 2,
            _ => 1,
        };
        if self.axes.len() != expected_axes {
            return Err(Error::InvalidSpec(format!(
                "target {} needs {} axis(es), got {}",
                self.target.label(),
                expected_axes,
                self.axes.len()
            )));
        }
        for ax in &self.axes {
            if !AXIS_NAMES.contains(&ax.name.as_str()) {
                return Err(Error::InvalidSpec(format!(
                    "axis name '{}' not one of {AXIS_NAMES:?}",
                    ax.name
                )));
            }
            if ax.steps < 2 {
                return Err(Error::InvalidSpec(format!(
                    "axis '{}' needs at least 2 steps",
                    ax.name
                )));
            }
            if !(ax.min < ax.max) {
                return Err(Error::InvalidSpec(format!(
                    "axis '{}' needs min < max, got [{}, {}]",
                    ax.name, ax.min, ax.max
                )));
            }
        }
        let vs: Vec<f64> = if self.v_list.is_empty() {
            vec![self.v]
        } else {
            self.v_list.clone()
        };
        for &v in &vs {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidSpec(format!("v must lie in (0, 1), got {v}")));
            }
        }
        let ps: Vec<f64> = if self.p_list.is_empty() {
            vec![self.p]
        } else {
            self.p_list.clone()
        };
        for &p in &ps {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidSpec(format!("p must lie in [0, 1], got {p}")));
            }
        }
        if !(self.gap_ratio > 1.0) {
            return Err(Error::InvalidSpec(format!(
                "gap_ratio must exceed 1, got {}",
                self.gap_ratio
            )));
        }
        if !(self.lambda2 > 0.0) {
            return Err(Error::InvalidSpec("lambda2 must be positive".into()));
        }
        Ok(())
    }

    /// FNV-1a hash of the science-relevant fields (out path and format do
    /// not change the data).
    pub fn spec_hash(&self) -> String {
        let canonical = format!(
            "{:?}|{:?}|{:?}|{}|{}|{}|{}|{:?}|{:?}|{}|{}",
            self.target,
            self.coupling,
            self.axes,
            self.v,
            self.gap_ratio,
            self.lambda2,
            self.p,
            self.p_list,
            self.v_list,
            self.x,
            self.t_normalized
        );
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in canonical.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // shortest round-trip decimals: parsing the text reproduces the
            // exact f64 bits
            Cell::Num(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl From<Cell> for serde_json::Value {
    fn from(c: Cell) -> Self {
        match c {
            Cell::Num(v) => serde_json::json!(v),
            Cell::Text(s) => serde_json::Value::String(s),
            Cell::Bool(b) => serde_json::Value::Bool(b),
        }
    }
}

/// How to draw the dataset.
#[derive(Debug, Clone)]
pub enum ChartKind {
    /// x column, y column, optional series-label column.
    Line {
        x_col: usize,
        y_col: usize,
        series_col: Option<usize>,
    },
    /// x column, y column, value column; zero-centered palettes are used
    /// for signed surfaces (positive work red, negative blue).
    Heatmap {
        x_col: usize,
        y_col: usize,
        value_col: usize,
        zero_centered: bool,
    },
}

/// A computed sweep: column names, rows, and presentation metadata.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub spec_hash: String,
    pub chart: ChartKind,
}

fn margin_label(class: MarginClass) -> &'static str {
    match class {
        MarginClass::Valid => "valid",
        MarginClass::Marginal => "marginal",
        MarginClass::Invalid => "invalid",
    }
}

/// Evaluates the sweep grid. Every row carries its validity flag; nothing
/// inside a perturbativity-breached region is silently reported.
pub fn run_sweep(spec: &SweepSpec) -> Result<Dataset> {
    spec.validate()?;
    let c = spec.coupling;
    let hash = spec.spec_hash();
    match spec.target {
        SweepTarget::ResponseCurve => {
            let ax = &spec.axes[0];
            let columns = vec!["x".into(), "y".into(), "fhat".into()];
            let mut rows = Vec::new();
            let y_fixed = 2.0 * spec.v.atanh();
            for t in ax.values() {
                let (x, y) = match ax.name.as_str() {
                    "x" => (t, y_fixed),
                    "a" => (1.0 / t, y_fixed),
                    "y" => (spec.x, t),
                    other => {
                        return Err(Error::InvalidSpec(format!(
                            "response_curve cannot sweep '{other}'"
                        )))
                    }
                };
                let fhat = response_closed(c, ResponsePoint::new(x, y))?.fhat;
                rows.push(vec![Cell::Num(x), Cell::Num(y), Cell::Num(fhat)]);
            }
            Ok(Dataset {
                title: format!("{} response", c),
                columns,
                rows,
                spec_hash: hash,
                chart: ChartKind::Line {
                    x_col: if ax.name == "y" { 1 } else { 0 },
                    y_col: 2,
                    series_col: None,
                },
            })
        }
        SweepTarget::PopchangeCurve => {
            if spec.axes[0].name != "a" {
                return Err(Error::InvalidSpec(
                    "popchange_curve sweeps the reduced acceleration 'a'".into(),
                ));
            }
            let vs = if spec.v_list.is_empty() {
                vec![spec.v]
            } else {
                spec.v_list.clone()
            };
            let ps = if spec.p_list.is_empty() {
                vec![spec.p]
            } else {
                spec.p_list.clone()
            };
            let dp_col = if spec.t_normalized { "dp_t_scaled" } else { "dp" };
            let columns: Vec<String> = ["v", "p", "a", dp_col, "margin", "margin_class", "flagged"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let mut rows = Vec::new();
            for &v in &vs {
                for &p in &ps {
                    for a in spec.axes[0].values() {
                        let y = 2.0 * v.atanh();
                        let dp_val = if spec.t_normalized {
                            let pt = ResponsePoint::new(1.0 / a, y);
                            (1.0 - 2.0 * p) * response_closed(c, pt)?.fhat
                                - p * response_difference(c, pt)?
                        } else {
                            population_change(c, a, p, v, spec.lambda2, 1.0)?.dp
                        };
                        let breach =
                            population_change(c, a, p, v, spec.lambda2, 1.0)?.perturbative_breach;
                        let margin = perturbative_margin(c, a, v, spec.lambda2);
                        let class = margin_class(margin);
                        let flagged = breach || class == MarginClass::Invalid;
                        rows.push(vec![
                            Cell::Num(v),
                            Cell::Num(p),
                            Cell::Num(a),
                            Cell::Num(dp_val),
                            Cell::Num(margin),
                            Cell::Text(margin_label(class).into()),
                            Cell::Bool(flagged),
                        ]);
                    }
                }
            }
            Ok(Dataset {
                title: format!("{} population change", c),
                columns,
                rows,
                spec_hash: hash,
                chart: ChartKind::Line {
                    x_col: 2,
                    y_col: 3,
                    series_col: Some(if vs.len() > 1 { 0 } else { 1 }),
                },
            })
        }
        SweepTarget::P0Surface | SweepTarget::WorkSurface => {
            let (ah_ax, ac_ax) = surface_axes(spec)?;
            let work = spec.target == SweepTarget::WorkSurface;
            let mut columns: Vec<String> = vec!["a_hot".into(), "a_cold".into(), "p0".into()];
            if work {
                columns.extend(["dp_hot".into(), "w_ext".into(), "positive".into()]);
            } else {
                columns.extend(["margin_hot".into(), "margin_cold".into()]);
            }
            columns.push("flagged".into());
            let mut rows = Vec::new();
            for a_hot in ah_ax.values() {
                for a_cold in ac_ax.values() {
                    let params = CycleParams {
                        coupling: c,
                        a_hot,
                        a_cold,
                        v: spec.v,
                        gap_ratio: spec.gap_ratio,
                        lambda2: spec.lambda2,
                    };
                    let rep = run_cycle(&params)?;
                    let flagged = margin_class(rep.perturbative_margin_hot)
                        == MarginClass::Invalid
                        || margin_class(rep.perturbative_margin_cold) == MarginClass::Invalid
                        || rep.dp_hot.abs() > 0.1;
                    let mut row = vec![
                        Cell::Num(a_hot),
                        Cell::Num(a_cold),
                        Cell::Num(rep.p0),
                    ];
                    if work {
                        row.push(Cell::Num(rep.dp_hot));
                        row.push(Cell::Num(rep.w_ext));
                        row.push(Cell::Bool(rep.positive_work));
                    } else {
                        row.push(Cell::Num(rep.perturbative_margin_hot));
                        row.push(Cell::Num(rep.perturbative_margin_cold));
                    }
                    row.push(Cell::Bool(flagged));
                    rows.push(row);
                }
            }
            Ok(Dataset {
                title: if work {
                    format!("{} work output", c)
                } else {
                    format!("{} critical probability", c)
                },
                columns,
                rows,
                spec_hash: hash,
                chart: ChartKind::Heatmap {
                    x_col: 0,
                    y_col: 1,
                    value_col: if work { 3 } else { 2 },
                    zero_centered: work,
                },
            })
        }
        SweepTarget::ClassicalOttoSurface => {
            let (ah_ax, ac_ax) = surface_axes(spec)?;
            // reduced temperatures: a_hot = T_H/Ω₂, a_cold = T_C/Ω₁
            let columns: Vec<String> =
                vec!["a_hot".into(), "a_cold".into(), "dp_qo".into()];
            let r = spec.gap_ratio;
            let mut rows = Vec::new();
            for a_hot in ah_ax.values() {
                for a_cold in ac_ax.values() {
                    let dp = classical_otto_dp(a_hot * r, a_cold, 1.0, r);
                    rows.push(vec![Cell::Num(a_hot), Cell::Num(a_cold), Cell::Num(dp)]);
                }
            }
            Ok(Dataset {
                title: "quantum Otto population change (thermal baths)".into(),
                columns,
                rows,
                spec_hash: hash,
                chart: ChartKind::Heatmap {
                    x_col: 0,
                    y_col: 1,
                    value_col: 2,
                    zero_centered: true,
                },
            })
        }
        SweepTarget::LongtimeCheck => {
            let ax = &spec.axes[0];
            if ax.name != "y" {
                return Err(Error::InvalidSpec("longtime_check sweeps 'y'".into()));
            }
            let columns: Vec<String> = [
                "x",
                "y",
                "rate_estimate",
                "rate_limit",
                "rate_abs_error",
                "boltzmann_ratio",
                "boltzmann_expected",
                "boltzmann_rel_error",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let x = spec.x;
            let limit = response_longtime_rate(c, x, 1.0);
            let expected = (-2.0 * PI * x).exp();
            let mut rows = Vec::new();
            for y in ax.values() {
                let est = response_longtime_estimate(c, x, 1.0, y)?;
                let up = response_closed(c, ResponsePoint::new(x, y))?.fhat;
                let down = response_closed(c, ResponsePoint::new(-x, y))?.fhat;
                let ratio = up / down;
                rows.push(vec![
                    Cell::Num(x),
                    Cell::Num(y),
                    Cell::Num(est),
                    Cell::Num(limit),
                    Cell::Num((est - limit).abs()),
                    Cell::Num(ratio),
                    Cell::Num(expected),
                    Cell::Num((ratio / expected - 1.0).abs()),
                ]);
            }
            Ok(Dataset {
                title: format!("{} long-time limit", c),
                columns,
                rows,
                spec_hash: hash,
                chart: ChartKind::Line {
                    x_col: 1,
                    y_col: 4,
                    series_col: None,
                },
            })
        }
    }
}

fn surface_axes(spec: &SweepSpec) -> Result<(&AxisSpec, &AxisSpec)> {
    let ah = spec
        .axes
        .iter()
        .find(|a| a.name == "a_hot")
        .ok_or_else(|| Error::InvalidSpec("surface needs an 'a_hot' axis".into()))?;
    let ac = spec
        .axes
        .iter()
        .find(|a| a.name == "a_cold")
        .ok_or_else(|| Error::InvalidSpec("surface needs an 'a_cold' axis".into()))?;
    Ok((ah, ac))
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

pub fn write_csv<W: Write>(ds: &Dataset, w: &mut W) -> Result<()> {
    writeln!(w, "# uqo {} spec-hash={}", env!("CARGO_PKG_VERSION"), ds.spec_hash)?;
    writeln!(w, "{}", ds.columns.join(","))?;
    for row in &ds.rows {
        let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn to_json(ds: &Dataset) -> serde_json::Value {
    serde_json::json!({
        "meta": {
            "tool": "uqo",
            "version": env!("CARGO_PKG_VERSION"),
            "spec_hash": ds.spec_hash,
            "title": ds.title,
        },
        "columns": ds.columns,
        "rows": ds.rows.iter().map(|row| {
            row.iter().cloned().map(serde_json::Value::from).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

fn cell_num(c: &Cell) -> f64 {
    match c {
        Cell::Num(v) => *v,
        Cell::Bool(b) => {
            if *b {
                1.0
            } else {
                0.0
            }
        }
        Cell::Text(_) => f64::NAN,
    }
}

pub fn to_svg(ds: &Dataset) -> String {
    match &ds.chart {
        ChartKind::Line {
            x_col,
            y_col,
            series_col,
        } => {
            let mut series: Vec<svg::Series> = Vec::new();
            for row in &ds.rows {
                let key = match series_col {
                    Some(sc) => format!("{}={}", ds.columns[*sc], row[*sc]),
                    None => String::new(),
                };
                if series.last().map(|s: &svg::Series| &s.label) != Some(&key) {
                    series.push(svg::Series {
                        label: key,
                        points: Vec::new(),
                    });
                }
                series
                    .last_mut()
                    .unwrap()
                    .points
                    .push((cell_num(&row[*x_col]), cell_num(&row[*y_col])));
            }
            svg::line_chart(
                &ds.title,
                &ds.columns[*x_col],
                &ds.columns[*y_col],
                &series,
            )
        }
        ChartKind::Heatmap {
            x_col,
            y_col,
            value_col,
            zero_centered,
        } => {
            let mut xs: Vec<f64> = Vec::new();
            let mut ys: Vec<f64> = Vec::new();
            for row in &ds.rows {
                let x = cell_num(&row[*x_col]);
                let y = cell_num(&row[*y_col]);
                if xs.last() != Some(&x) && !xs.contains(&x) {
                    xs.push(x);
                }
                if !ys.contains(&y) {
                    ys.push(y);
                }
            }
            let mut values = vec![f64::NAN; xs.len() * ys.len()];
            for row in &ds.rows {
                let x = cell_num(&row[*x_col]);
                let y = cell_num(&row[*y_col]);
                let ix = xs.iter().position(|&v| v == x).unwrap();
                let iy = ys.iter().position(|&v| v == y).unwrap();
                values[iy * xs.len() + ix] = cell_num(&row[*value_col]);
            }
            svg::heatmap(
                &ds.title,
                &ds.columns[*x_col],
                &ds.columns[*y_col],
                &xs,
                &ys,
                &values,
                *zero_centered,
            )
        }
    }
}

/// Serializes the dataset in the requested format.
pub fn render(ds: &Dataset, format: OutputFormat) -> Result<Vec<u8>> {
    Ok(match format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_csv(ds, &mut buf)?;
            buf
        }
        OutputFormat::Json => {
            let mut buf = serde_json::to_vec_pretty(&to_json(ds))
                .map_err(|e| Error::Io(e.to_string()))?;
            buf.push(b'\n');
            buf
        }
        OutputFormat::Svg => to_svg(ds).into_bytes(),
    })
}

/// Runs the sweep and writes it to `spec.out` (or stdout).
pub fn emit(spec: &SweepSpec) -> Result<Dataset> {
    let ds = run_sweep(spec)?;
    let bytes = render(&ds, spec.format)?;
    match &spec.out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            std::fs::write(path, bytes)?;
        }
        None => {
            std::io::stdout().write_all(&bytes)?;
        }
    }
    Ok(ds)
}

// ---------------------------------------------------------------------------
// Figure presets
// ---------------------------------------------------------------------------

pub const PRESETS: [&str; 15] = [
    "fig2", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig5a", "fig5b", "fig6a",
    "fig6b", "fig7a", "fig7b", "fig8a", "fig8b",
];

fn axis(name: &str, min: f64, max: f64, steps: usize) -> AxisSpec {
    AxisSpec {
        name: name.into(),
        min,
        max,
        steps,
    }
}

fn surface_axes_spec(max: f64, steps: usize) -> Vec<AxisSpec> {
    vec![axis("a_hot", 0.1, max, steps), axis("a_cold", 0.1, max, steps)]
}

/// Figure-named presets. Axis ranges and sample counts are visually
/// matched reconstructions (the originals are not published), with the
/// stated parameter choices: v = 0.8, gap ratio 2, couplings at their
/// perturbative bounds (λ̃² = 1e-2 linear/quadratic, 1e-6 fermionic).
pub fn preset(name: &str) -> Result<SweepSpec> {
    let base = SweepSpec::default();
    let popchange = |coupling: Coupling, lambda2: f64, t_normalized: bool| SweepSpec {
        target: SweepTarget::PopchangeCurve,
        coupling,
        axes: vec![axis("a", 0.1, 10.0, 200)],
        p_list: vec![0.0, 0.25, 0.5, 0.75],
        lambda2,
        t_normalized,
        ..base.clone()
    };
    match name {
        "fig2" => Ok(SweepSpec {
            target: SweepTarget::ClassicalOttoSurface,
            axes: surface_axes_spec(3.0, 120),
            ..base
        }),
        "fig3a" | "fig3b" | "fig3c" => Ok(SweepSpec {
            target: SweepTarget::PopchangeCurve,
            coupling: Coupling::Linear,
            axes: vec![axis("a", 0.1, 10.0, 200)],
            v_list: vec![0.4, 0.6, 0.8],
            p: match name {
                "fig3a" => 0.0,
                "fig3b" => 0.25,
                _ => 0.75,
            },
            ..base
        }),
        "fig3d" => Ok(popchange(Coupling::Linear, 1e-2, false)),
        "fig4a" => Ok(popchange(Coupling::Quadratic, 1e-2, true)),
        "fig4b" => Ok(popchange(Coupling::Quadratic, 1e-2, false)),
        "fig5a" => Ok(popchange(Coupling::Fermionic, 1e-6, true)),
        "fig5b" => Ok(popchange(Coupling::Fermionic, 1e-6, false)),
        "fig6a" | "fig6b" => Ok(SweepSpec {
            target: if name == "fig6a" {
                SweepTarget::P0Surface
            } else {
                SweepTarget::WorkSurface
            },
            coupling: Coupling::Linear,
            axes: surface_axes_spec(20.0, 100),
            ..base
        }),
        "fig7a" | "fig7b" => Ok(SweepSpec {
            target: if name == "fig7a" {
                SweepTarget::P0Surface
            } else {
                SweepTarget::WorkSurface
            },
            coupling: Coupling::Quadratic,
            axes: surface_axes_spec(10.0, 100),
            ..base
        }),
        "fig8a" | "fig8b" => Ok(SweepSpec {
            target: if name == "fig8a" {
                SweepTarget::P0Surface
            } else {
                SweepTarget::WorkSurface
            },
            coupling: Coupling::Fermionic,
            axes: surface_axes_spec(10.0, 100),
            lambda2: 1e-6,
            ..base
        }),
        other => Err(Error::InvalidSpec(format!(
            "unknown preset '{other}' (known: {PRESETS:?})"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values_inclusive() {
        let ax = axis("a", 1.0, 2.0, 3);
        assert_eq!(ax.values(), vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn spec_validation_names_offending_field() {
        let mut spec = SweepSpec::default();
        spec.axes[0].name = "banana".into();
        let err = spec.validate().unwrap_err();
        assert!(err.to_string().contains("banana"));

        let mut spec = SweepSpec::default();
        spec.axes[0].steps = 1;
        assert!(spec.validate().is_err());

        let mut spec = SweepSpec::default();
        spec.axes[0].min = 5.0;
        spec.axes[0].max = 1.0;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn csv_round_trip_bit_exact() {
        let spec = SweepSpec {
            axes: vec![axis("a", 0.1, 3.0, 17)],
            ..SweepSpec::default()
        };
        let ds = run_sweep(&spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("# uqo "));
        assert!(header.contains("spec-hash="));
        let cols: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(cols, ds.columns.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        for (line, row) in lines.zip(&ds.rows) {
            for (txt, cell) in line.split(',').zip(row) {
                if let Cell::Num(v) = cell {
                    let parsed: f64 = txt.parse().unwrap();
                    assert_eq!(parsed.to_bits(), v.to_bits(), "round-trip broke on {txt}");
                }
            }
        }
    }

    #[test]
    fn determinism_byte_identical() {
        for name in ["fig3a", "fig6b"] {
            let spec = preset(name).unwrap();
            let a = render(&run_sweep(&spec).unwrap(), OutputFormat::Csv).unwrap();
            let b = render(&run_sweep(&spec).unwrap(), OutputFormat::Csv).unwrap();
            assert_eq!(a, b, "{name} not deterministic");
        }
    }

    #[test]
    fn all_presets_build_and_validate() {
        for name in PRESETS {
            let spec = preset(name).unwrap();
            spec.validate().unwrap();
        }
    }

    #[test]
    fn popchange_curves_ordered_by_velocity_at_large_a() {
        // larger v (longer interaction) gives larger δp at p = 0 in the
        // large-a regime where the curves approach their velocity-set
        // asymptotes; at small a the e^{-|x|y} suppression reverses this
        let spec = SweepSpec {
            v_list: vec![0.4, 0.6, 0.8],
            axes: vec![axis("a", 8.0, 30.0, 20)],
            ..SweepSpec::default()
        };
        let ds = run_sweep(&spec).unwrap();
        let n = 20;
        for i in 0..n {
            let dp4 = cell_num(&ds.rows[i][3]);
            let dp6 = cell_num(&ds.rows[n + i][3]);
            let dp8 = cell_num(&ds.rows[2 * n + i][3]);
            assert!(dp4 < dp6 && dp6 < dp8, "ordering broke at row {i}");
        }
    }

    #[test]
    fn work_surface_sign_pattern() {
        let spec = SweepSpec {
            target: SweepTarget::WorkSurface,
            axes: vec![axis("a_hot", 0.5, 5.0, 10), axis("a_cold", 0.5, 5.0, 10)],
            ..SweepSpec::default()
        };
        let ds = run_sweep(&spec).unwrap();
        for row in &ds.rows {
            let (ah, ac) = (cell_num(&row[0]), cell_num(&row[1]));
            let w_ext = cell_num(&row[4]);
            if (ah - ac).abs() < 1e-12 {
                assert!(w_ext.abs() < 1e-12);
            } else {
                assert_eq!(w_ext > 0.0, ah > ac, "({ah}, {ac}) -> {w_ext}");
            }
        }
    }

    #[test]
    fn classical_surface_zero_on_diagonal() {
        let spec = preset("fig2").unwrap();
        let ds = run_sweep(&spec).unwrap();
        for row in &ds.rows {
            if cell_num(&row[0]) == cell_num(&row[1]) {
                assert!(cell_num(&row[2]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn json_and_svg_render() {
        let spec = SweepSpec {
            axes: vec![axis("a", 0.5, 3.0, 5)],
            ..SweepSpec::default()
        };
        let ds = run_sweep(&spec).unwrap();
        let js = to_json(&ds);
        assert_eq!(js["columns"].as_array().unwrap().len(), ds.columns.len());
        let svg_text = to_svg(&ds);
        assert!(svg_text.starts_with("<svg"));
        assert!(svg_text.ends_with("</svg>\n"));
    }
}
