//! Validation harness: pits every closed form against its independent
//! oracle and emits a machine-readable report. Exercised by the
//! `uqo validate` subcommand; exit status is nonzero when any check
//! exceeds its tolerance.

use crate::correlators::{kms_residual, WorldlineParams};
use crate::error::Result;
use crate::oracle::{
    pole_sum_scalar, response_quadrature, switching_autocorrelation,
    switching_autocorrelation_quadrature, QuadratureSpec,
};
use crate::response::{
    response_closed, response_longtime_estimate, response_longtime_rate, Coupling, ResponsePoint,
};
use crate::specfun::{lerch_phi, lerch_phi_asymptotic_auto, LerchArgs};
use serde::Serialize;
use std::f64::consts::PI;

/// Outcome of one check: `observed` must stay at or below `threshold`
/// unless `larger_is_better` (slopes), where it must reach it.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationCheck {
    pub name: String,
    pub observed: f64,
    pub threshold: f64,
    pub larger_is_better: bool,
    pub pass: bool,
    pub detail: String,
}

impl ValidationCheck {
    fn upper(name: &str, observed: f64, threshold: f64, detail: String) -> Self {
        ValidationCheck {
            name: name.into(),
            observed,
            threshold,
            larger_is_better: false,
            pass: observed <= threshold,
            detail,
        }
    }
    fn lower(name: &str, observed: f64, threshold: f64, detail: String) -> Self {
        ValidationCheck {
            name: name.into(),
            observed,
            threshold,
            larger_is_better: true,
            pass: observed >= threshold,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub checks: Vec<ValidationCheck>,
}

/// Standard validation grid: x ∈ {±0.5, ±1, ±2}, y ∈ {1, 2, 5, 8}.
pub fn validation_grid() -> Vec<ResponsePoint> {
    let mut grid = Vec::new();
    for &x in &[-2.0, -1.0, -0.5, 0.5, 1.0, 2.0] {
        for &y in &[1.0, 2.0, 5.0, 8.0] {
            grid.push(ResponsePoint::new(x, y));
        }
    }
    grid
}

fn slope_loglog(points: &[(f64, f64)]) -> f64 {
    // least-squares slope of ln(res) vs ln(eps)
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(e, r) in points {
        let (x, y) = (e.ln(), r.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Runs all validation checks; `quick` shrinks the oracle grid.
pub fn run_validation(spec: &QuadratureSpec, quick: bool) -> Result<ValidationReport> {
    let mut checks = Vec::new();

    // 1. closed form vs quadrature oracle
    let grid: Vec<ResponsePoint> = if quick {
        vec![
            ResponsePoint::new(1.0, 2.0),
            ResponsePoint::new(-1.0, 2.0),
            ResponsePoint::new(0.5, 5.0),
            ResponsePoint::new(-2.0, 1.0),
        ]
    } else {
        validation_grid()
    };
    for c in Coupling::ALL {
        let mut worst = 0.0f64;
        let mut worst_at = String::new();
        for &p in &grid {
            let oracle = response_quadrature(c, p, spec)?;
            let closed = response_closed(c, p)?.fhat;
            let rel = (oracle.value - closed).abs() / closed.abs().max(1e-300);
            if rel > worst {
                worst = rel;
                worst_at = format!("x={} y={}", p.x, p.y);
            }
        }
        checks.push(ValidationCheck::upper(
            &format!("oracle_equivalence_{c}"),
            worst,
            1e-6,
            format!("max relative error at {worst_at}"),
        ));
    }

    // 2. pole sum vs Lerch closed form (linear)
    let mut worst = 0.0f64;
    for &p in &grid {
        let sum = pole_sum_scalar(&p, 200)?;
        let closed = response_closed(Coupling::Linear, p)?.fhat;
        worst = worst.max((sum - closed).abs() / closed.abs());
    }
    checks.push(ValidationCheck::upper(
        "pole_sum_equivalence_linear",
        worst,
        1e-10,
        "K = 200 truncation vs closed form".into(),
    ));

    // 3. KMS residual decay slopes
    let params = WorldlineParams::new(1.0)?;
    for c in Coupling::ALL {
        let pts: Vec<(f64, f64)> = (2..=8)
            .map(|k| {
                let eps = 10f64.powi(-k);
                kms_residual(c, 0.7, &params, eps).map(|r| (eps, r))
            })
            .collect::<Result<_>>()?;
        let slope = slope_loglog(&pts);
        checks.push(ValidationCheck::lower(
            &format!("kms_decay_slope_{c}"),
            slope,
            0.9,
            "log-log slope of |W(s+iβ) - W(-s)| over ε ∈ [1e-8, 1e-2]".into(),
        ));
    }

    // 4. long-time Boltzmann ratio and rate convergence
    for c in Coupling::ALL {
        let mut worst = 0.0f64;
        for &x in &[0.5, 1.0] {
            let up = response_closed(c, ResponsePoint::new(x, 200.0))?.fhat;
            let down = response_closed(c, ResponsePoint::new(-x, 200.0))?.fhat;
            let rel = (up / down / (-2.0 * PI * x).exp() - 1.0).abs();
            worst = worst.max(rel);
        }
        checks.push(ValidationCheck::upper(
            &format!("boltzmann_ratio_{c}"),
            worst,
            0.05,
            "F̂(x,200)/F̂(-x,200) vs e^{-2πx}, x ∈ {0.5, 1}".into(),
        ));

        let limit = response_longtime_rate(c, 1.0, 1.0);
        let errs: Vec<f64> = [50.0, 100.0, 200.0]
            .iter()
            .map(|&y| response_longtime_estimate(c, 1.0, 1.0, y).map(|r| (r - limit).abs()))
            .collect::<Result<_>>()?;
        let monotone = errs[0] > errs[1] && errs[1] > errs[2];
        checks.push(ValidationCheck::upper(
            &format!("longtime_rate_convergence_{c}"),
            if monotone { 0.0 } else { 1.0 },
            0.0,
            format!("rate errors over y ∈ {{50, 100, 200}}: {errs:?}"),
        ));
    }

    // 5. switching autocorrelation identity
    let mut worst = 0.0f64;
    for &(s, t) in &[(0.0, 2.0), (1.0, 1.0), (2.3, 0.7), (-1.4, 3.1)] {
        let closed = switching_autocorrelation(s, t);
        let quad = switching_autocorrelation_quadrature(s, t)?;
        worst = worst.max((closed - quad).abs() / closed);
    }
    checks.push(ValidationCheck::upper(
        "switching_autocorrelation",
        worst,
        1e-10,
        "closed form vs adaptive quadrature of the u-integral".into(),
    ));

    // 6. Lerch cross-agreement and index-shift identity
    let mut worst = 0.0f64;
    for &(z, n, a) in &[
        (0.25, 1u32, 30.0),
        (0.25, 4, 30.0),
        (0.1, 2, 15.0),
        (0.1, 6, 20.0),
        (0.5, 3, 60.0),
        (0.05, 5, 12.0),
    ] {
        let direct = lerch_phi(&LerchArgs::new(z, n, a))?.value;
        let asym = lerch_phi_asymptotic_auto(&LerchArgs::new(z, n, a))?.value;
        worst = worst.max((asym - direct).abs() / direct.abs());
    }
    checks.push(ValidationCheck::upper(
        "lerch_direct_vs_asymptotic",
        worst,
        1e-8,
        "a ≥ 10 grid within the expansion's z^a error floor".into(),
    ));

    let mut worst = 0.0f64;
    for &(z, n, a) in &[(0.3, 2u32, 0.7), (0.8, 1, 4.2), (0.6, 5, 11.0), (0.9, 3, 0.2)] {
        let lhs = lerch_phi(&LerchArgs::new(z, n, a))?.value
            - z * lerch_phi(&LerchArgs::new(z, n, a + 1.0))?.value;
        let rhs = (a as f64).powi(-(n as i32));
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
    }
    checks.push(ValidationCheck::upper(
        "lerch_index_shift_identity",
        worst,
        1e-13,
        "Φ(z,n,a) - z Φ(z,n,a+1) = a^{-n}".into(),
    ));

    let passed = checks.iter().all(|c| c.pass);
    Ok(ValidationReport { passed, checks })
}
