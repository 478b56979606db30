//! The thermodynamic engine: contact times, population changes,
//! perturbative-validity margins, cyclic closure (critical probability),
//! the per-step work/heat ledger, efficiency, and the classical
//! quantum-Otto comparator.
//!
//! Everything internal is expressed in Ω₁ = 1 units. The reduced
//! accelerations are normalized by the gap active during that contact:
//! a_hot = α_H/Ω₂ and a_cold = α_C/Ω₁, which is the convention that
//! reproduces the positive-work condition α_H/Ω₂ > α_C/Ω₁. Both contacts
//! share the same dimensionless duration y = αT = 2 arctanh(v).
//!
//! Heat follows the step Hamiltonians: Q₂ = Ω₂ δp_H (gap Ω₂ during the hot
//! contact) and Q₄ = Ω₁ δp_C.

use crate::error::{Error, Result};
use crate::response::{response_closed, response_difference, Coupling, ResponsePoint};
use serde::{Deserialize, Serialize};

/// Margin thresholds turning the perturbative-validity ratio into a policy.
pub const MARGIN_VALID: f64 = 100.0;
pub const MARGIN_MARGINAL: f64 = 10.0;

/// Engine parameters in reduced (dimensionless) variables.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CycleParams {
    pub coupling: Coupling,
    /// α_H/Ω₂, reduced acceleration of the hot contact.
    pub a_hot: f64,
    /// α_C/Ω₁, reduced acceleration of the cold contact.
    pub a_cold: f64,
    /// Turnaround speed v ∈ (0, 1).
    pub v: f64,
    /// r = Ω₂/Ω₁ > 1.
    pub gap_ratio: f64,
    /// Dimensionless squared coupling (λ_F Ω₁^{Δ_F})².
    pub lambda2: f64,
}

impl CycleParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a_hot > 0.0 && self.a_cold > 0.0) {
            return Err(Error::Domain("reduced accelerations must be positive".into()));
        }
        if !(self.v > 0.0 && self.v < 1.0) {
            return Err(Error::Domain(format!("v must lie in (0, 1), got {}", self.v)));
        }
        if !(self.gap_ratio > 1.0) {
            return Err(Error::Domain(format!(
                "gap ratio must exceed 1, got {}",
                self.gap_ratio
            )));
        }
        if !(self.lambda2 > 0.0) {
            return Err(Error::Domain("lambda2 must be positive".into()));
        }
        Ok(())
    }
}

/// Diagonal qubit state; p is the excited-state population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorState {
    pub p: f64,
}

impl DetectorState {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("population must lie in [0, 1], got {p}")));
        }
        Ok(DetectorState { p })
    }
}

/// Result of one vacuum contact.
#[derive(Debug, Clone, Copy)]
pub struct PopulationChange {
    pub dp: f64,
    /// |δp| > 0.1 or p + δp outside [0, 1]: second-order perturbation
    /// theory can no longer be trusted (shaded-region behaviour).
    pub perturbative_breach: bool,
}

/// Per-step ledger of a closed cycle, in units of Ω₁.
#[derive(Debug, Clone, Serialize)]
pub struct CycleReport {
    pub p0: f64,
    pub dp_hot: f64,
    pub dp_cold: f64,
    pub w1: f64,
    pub q2: f64,
    pub w3: f64,
    pub q4: f64,
    pub w_total: f64,
    pub q_total: f64,
    pub w_ext: f64,
    pub efficiency: f64,
    pub positive_work: bool,
    pub perturbative_margin_hot: f64,
    pub perturbative_margin_cold: f64,
    pub warnings: Vec<String>,
}

/// Contact duration T = 2 arctanh(v)/α needed to swing the velocity from
/// -v to +v at proper acceleration α.
pub fn contact_times(v: f64, alpha: f64) -> Result<f64> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!("v must lie in (0, 1), got {v}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    Ok(2.0 * v.atanh() / alpha)
}

/// Population change of one contact:
/// δp = λ² T^{-2Δ} [(1 - 2p) F̂(1/a, y) - p ΔF̂(1/a, y)], y = 2 arctanh v,
/// with the dimensional prefactor λ² (a·Ω_gap/y)^{2Δ} carried in Ω₁ units
/// through `gap_in_omega1`.
pub fn population_change(
    coupling: Coupling,
    a: f64,
    p: f64,
    v: f64,
    lambda2: f64,
    gap_in_omega1: f64,
) -> Result<PopulationChange> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("reduced acceleration must be positive, got {a}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("population must lie in [0, 1], got {p}")));
    }
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!("v must lie in (0, 1), got {v}")));
    }
    if !(lambda2 > 0.0) || !(gap_in_omega1 > 0.0) {
        return Err(Error::Domain("lambda2 and gap must be positive".into()));
    }
    let y = 2.0 * v.atanh();
    let point = ResponsePoint::new(1.0 / a, y);
    let fhat = response_closed(coupling, point)?.fhat;
    let dfhat = response_difference(coupling, point)?;
    let prefactor = lambda2 * (a * gap_in_omega1 / y).powi(2 * coupling.delta() as i32);
    let dp = prefactor * ((1.0 - 2.0 * p) * fhat - p * dfhat);
    let after = p + dp;
    Ok(PopulationChange {
        dp,
        perturbative_breach: dp.abs() > 0.1 || !(0.0..=1.0).contains(&after),
    })
}

/// Ratio of the two sides of the perturbative-validity condition
/// (a/arctanh v)^{1-2Δ} ≫ λ² Ω^{2Δ}; `lambda2` is the dimensionless
/// coupling for the gap active during the contact. Margins above
/// [`MARGIN_VALID`] are comfortably perturbative, below
/// [`MARGIN_MARGINAL`] the expansion is not trusted.
pub fn perturbative_margin(coupling: Coupling, a: f64, v: f64, lambda2: f64) -> f64 {
    assert!(a > 0.0 && v > 0.0 && v < 1.0 && lambda2 > 0.0);
    let exponent = 1 - 2 * coupling.delta() as i32;
    (a / v.atanh()).powi(exponent) / lambda2
}

/// Margin policy classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MarginClass {
    Valid,
    Marginal,
    Invalid,
}

pub fn margin_class(margin: f64) -> MarginClass {
    if margin >= MARGIN_VALID {
        MarginClass::Valid
    } else if margin >= MARGIN_MARGINAL {
        MarginClass::Marginal
    } else {
        MarginClass::Invalid
    }
}

/// Weighted response sums entering the cyclic-closure condition; the
/// weights (α/y)^{2Δ} are the T^{-2Δ} prefactors of the two contacts in
/// Ω₁ units.
fn closure_sums(params: &CycleParams) -> Result<(f64, f64)> {
    let y = 2.0 * params.v.atanh();
    let delta = params.coupling.delta() as i32;
    let w_hot = (params.a_hot * params.gap_ratio / y).powi(2 * delta);
    let w_cold = (params.a_cold / y).powi(2 * delta);
    let p_hot = ResponsePoint::new(1.0 / params.a_hot, y);
    let p_cold = ResponsePoint::new(1.0 / params.a_cold, y);
    let sum_f = w_hot * response_closed(params.coupling, p_hot)?.fhat
        + w_cold * response_closed(params.coupling, p_cold)?.fhat;
    let sum_df = w_hot * response_difference(params.coupling, p_hot)?
        + w_cold * response_difference(params.coupling, p_cold)?;
    Ok((sum_f, sum_df))
}

/// Critical initial population p₀ = P/(1 + 2P) with
/// P = (F_H + F_C)/(ΔF_H + ΔF_C) closing the cycle.
pub fn critical_probability(params: &CycleParams) -> Result<f64> {
    params.validate()?;
    let (sum_f, sum_df) = closure_sums(params)?;
    if !(sum_df > 0.0) {
        return Err(Error::DegenerateCycle);
    }
    let big_p = sum_f / sum_df;
    Ok(big_p / (1.0 + 2.0 * big_p))
}

/// Runs the four-stroke cycle at the critical population and assembles the
/// work/heat ledger (units of Ω₁).
pub fn run_cycle(params: &CycleParams) -> Result<CycleReport> {
    let p0 = critical_probability(params)?;
    let r = params.gap_ratio;
    let hot = population_change(
        params.coupling,
        params.a_hot,
        p0,
        params.v,
        params.lambda2,
        r,
    )?;
    let cold = population_change(
        params.coupling,
        params.a_cold,
        p0,
        params.v,
        params.lambda2,
        1.0,
    )?;
    let dp_hot = hot.dp;
    let dp_cold = cold.dp;

    let mut warnings = Vec::new();
    let closure = dp_hot + dp_cold;
    if closure.abs() > 1e-10 * (dp_hot.abs() + dp_cold.abs()).max(1e-30) {
        warnings.push(format!("cyclic closure residual {closure:e}"));
    }
    if hot.perturbative_breach {
        warnings.push("hot contact outside the perturbative regime".into());
    }
    if cold.perturbative_breach {
        warnings.push("cold contact outside the perturbative regime".into());
    }

    let delta = params.coupling.delta();
    let lambda2_hot = params.lambda2 * r.powi(2 * delta as i32);
    let margin_hot = perturbative_margin(params.coupling, params.a_hot, params.v, lambda2_hot);
    let margin_cold =
        perturbative_margin(params.coupling, params.a_cold, params.v, params.lambda2);
    if margin_class(margin_hot) == MarginClass::Invalid {
        warnings.push(format!("hot-contact margin {margin_hot:.3} below {MARGIN_MARGINAL}"));
    }
    if margin_class(margin_cold) == MarginClass::Invalid {
        warnings.push(format!("cold-contact margin {margin_cold:.3} below {MARGIN_MARGINAL}"));
    }

    let w_total = -(r - 1.0) * dp_hot;
    let q_total = (r - 1.0) * dp_hot;
    let w_ext = -w_total;
    Ok(CycleReport {
        p0,
        dp_hot,
        dp_cold,
        w1: (r - 1.0) * p0,
        q2: r * dp_hot,
        w3: -(r - 1.0) * (p0 + dp_hot),
        q4: dp_cold,
        w_total,
        q_total,
        w_ext,
        efficiency: 1.0 - 1.0 / r,
        positive_work: w_ext > 0.0,
        perturbative_margin_hot: margin_hot,
        perturbative_margin_cold: margin_cold,
        warnings,
    })
}

/// Population change of the textbook quantum Otto cycle with genuinely
/// thermal baths: δp = 1/(1+e^{Ω₂/T_H}) - 1/(1+e^{Ω₁/T_C}).
pub fn classical_otto_dp(t_hot: f64, t_cold: f64, omega1: f64, omega2: f64) -> f64 {
    assert!(
        t_hot > 0.0 && t_cold > 0.0 && omega1 > 0.0 && omega2 > 0.0,
        "temperatures and gaps must be positive"
    );
    1.0 / (1.0 + (omega2 / t_hot).exp()) - 1.0 / (1.0 + (omega1 / t_cold).exp())
}
