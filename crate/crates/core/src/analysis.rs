//! Best-response dynamics, comparative statics in the information cost, and
//! the efficiency diagnostics (single crossing, first-order stochastic
//! dominance) used to compare allocations across mechanisms.

use serde::Serialize;

use crate::equilibrium::{solve_interior, Equilibrium};
use crate::info::{best_response_da, SignalStrategy, QUAD_TOL};
use crate::model::{Capacities, MarketParams, Mechanism};
use crate::numeric::{bisect, integrate, Bracket};
use crate::{Error, Result};

/// One synchronous step of the tatonnement dynamics: the population believes
/// a fraction `r` reports `sab` under DA and best-responds with mean
/// `response_mean`, which becomes the next belief.
#[derive(Debug, Clone)]
pub struct TatonnementStep {
    pub k: usize,
    /// Believed `sab` fraction entering the step.
    pub r: f64,
    /// Mean of the interior best response `m̄^H(r, μ)`.
    pub response_mean: f64,
    /// Welfare of the step allocation `g^H(θ; r, μ) = m^H(θ) λ_s / m̄^H`.
    pub welfare: f64,
    /// The best-response strategy itself, for rebuilding `g^H`.
    pub strategy: SignalStrategy,
}

/// Trace of synchronous best-response dynamics `r_{k+1} = m̄^H(r_k, μ)`.
#[derive(Debug, Clone)]
pub struct TatonnementTrace {
    pub steps: Vec<TatonnementStep>,
    pub converged: bool,
    /// Final belief (the last response mean).
    pub limit: f64,
    /// Set when a corner best response truncated the dynamics.
    pub corner: bool,
}

/// Run undamped tatonnement under the DA mechanism from belief `r0`,
/// stopping when successive beliefs differ by less than `tol` or after
/// `max_iter` steps. A corner best response truncates the trace.
pub fn tatonnement(
    params: &MarketParams,
    r0: f64,
    max_iter: usize,
    tol: f64,
) -> Result<TatonnementTrace> {
    let mut r = r0;
    let mut steps = Vec::new();
    let mut converged = false;
    let mut corner = false;
    for k in 0..max_iter {
        let br = best_response_da(r, params)?;
        if !br.interior {
            corner = true;
            break;
        }
        let welfare = integrate(|t| t * br.strategy.evaluate(t), 0.0, 1.0, QUAD_TOL) / br.mean;
        let mean = br.mean;
        steps.push(TatonnementStep { k, r, response_mean: mean, welfare, strategy: br.strategy });
        if (mean - r).abs() < tol {
            converged = true;
            r = mean;
            break;
        }
        r = mean;
    }
    Ok(TatonnementTrace { steps, converged, limit: r, corner })
}

/// One row of a comparative-statics sweep over the information cost.
/// Nonexistent equilibria are recorded as absent values, never skipped.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MuSweepRow {
    pub mu: f64,
    pub r_b: Option<f64>,
    pub r_d: Option<f64>,
    pub w_b: Option<f64>,
    pub w_d: Option<f64>,
    /// `W^B - W^D` when both equilibria exist.
    pub eff_loss: Option<f64>,
}

fn solve_optional(mech: Mechanism, params: &MarketParams) -> Result<Option<Equilibrium>> {
    match solve_interior(mech, params) {
        Ok(eq) => Ok(Some(eq)),
        Err(Error::NoInteriorEquilibrium { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Solve both mechanisms on a μ grid, recording fractions, welfares, and the
/// efficiency loss `W^B - W^D`.
pub fn sweep_mu(v: f64, caps: &Capacities, mu_grid: &[f64]) -> Result<Vec<MuSweepRow>> {
    if mu_grid.is_empty() {
        return Err(Error::InvalidParameter("empty mu grid".into()));
    }
    let mut rows = Vec::with_capacity(mu_grid.len());
    for &mu in mu_grid {
        let params = MarketParams::new(v, mu, *caps)?;
        let boston = solve_optional(Mechanism::Boston, &params)?;
        let da = solve_optional(Mechanism::Da, &params)?;
        let eff_loss = match (&boston, &da) {
            (Some(b), Some(d)) => Some(b.welfare - d.welfare),
            _ => None,
        };
        rows.push(MuSweepRow {
            mu,
            r_b: boston.as_ref().map(|e| e.r),
            r_d: da.as_ref().map(|e| e.r),
            w_b: boston.as_ref().map(|e| e.welfare),
            w_d: da.as_ref().map(|e| e.welfare),
            eff_loss,
        });
    }
    Ok(rows)
}

/// Sign changes of `f - g` on (0,1).
#[derive(Debug, Clone, Serialize)]
pub struct CrossingReport {
    /// Bisection-refined crossing locations, left to right.
    pub crossings: Vec<f64>,
    /// True when the first sign change goes from `f < g` to `f > g`.
    pub from_below: bool,
}

impl CrossingReport {
    /// Exactly one crossing, upward.
    pub fn is_single_from_below(&self) -> bool {
        self.crossings.len() == 1 && self.from_below
    }
}

/// Scan `f - g` on `grid_size` interior nodes of (0,1) and report every sign
/// change, refined by bisection to 1e-8. Nodes where the difference is exactly
/// zero are not counted unless the sign actually flips across them.
pub fn single_crossing_scan<F, G>(f: F, g: G, grid_size: usize) -> CrossingReport
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    assert!(grid_size >= 2);
    let d = |t: f64| f(t) - g(t);
    let mut crossings = Vec::new();
    let mut from_below = false;
    let mut last: Option<(f64, f64)> = None; // (theta, sign) of last nonzero node
    for i in 1..=grid_size {
        let theta = i as f64 / (grid_size + 1) as f64;
        let val = d(theta);
        if val == 0.0 {
            continue;
        }
        if let Some((prev_theta, prev_sign)) = last {
            if prev_sign != val.signum() {
                let loc = bisect(&d, Bracket { lo: prev_theta, hi: theta }, 1e-8);
                if crossings.is_empty() {
                    from_below = val.signum() > 0.0;
                }
                crossings.push(loc);
            }
        }
        last = Some((theta, val.signum()));
    }
    CrossingReport { crossings, from_below }
}

/// First-order stochastic dominance of allocation `f` over `g` (both carrying
/// the same mass, checked to 1e-8): true iff `∫_0^θ̄ f ≤ ∫_0^θ̄ g` at every
/// interior grid node with at least one strict gap above 1e-10.
pub fn fosd_check<F, G>(f: F, g: G, grid_size: usize) -> Result<bool>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    assert!(grid_size >= 2);
    let mass_f = integrate(&f, 0.0, 1.0, 1e-11);
    let mass_g = integrate(&g, 0.0, 1.0, 1e-11);
    if (mass_f - mass_g).abs() > 1e-8 {
        return Err(Error::MassMismatch(mass_f, mass_g));
    }
    let mut cum_f = 0.0;
    let mut cum_g = 0.0;
    let mut prev = 0.0;
    let mut strict = false;
    for i in 1..=grid_size {
        let theta = i as f64 / (grid_size + 1) as f64;
        cum_f += integrate(&f, prev, theta, 1e-12);
        cum_g += integrate(&g, prev, theta, 1e-12);
        prev = theta;
        if cum_f > cum_g {
            return Ok(false);
        }
        if cum_g - cum_f > 1e-10 {
            strict = true;
        }
    }
    Ok(strict)
}

/// Effect of raising the information cost on the DA best response at a fixed
/// believed fraction: the response mean rises and the allocation becomes
/// less efficient.
#[derive(Debug, Clone, Serialize)]
pub struct IntensifyingLoopReport {
    /// `m̄^H(r, μ1)` at the lower cost.
    pub mean_low: f64,
    /// `m̄^H(r, μ2)` at the higher cost.
    pub mean_high: f64,
    /// `m̄^H(r, μ1) < m̄^H(r, μ2)` (equality allowed when μ1 = μ2).
    pub means_ordered: bool,
    /// Sign changes of `g^H(·; μ1) - g^H(·; μ2)`.
    pub crossing: CrossingReport,
}

/// Verify the intensifying-loop comparative static: for `μ1 < μ2`, both below
/// `λ_s (1 - v)`, the best-response mean at belief `r` increases in the cost
/// and the cheap-information allocation single-crosses the expensive one from
/// below.
pub fn intensifying_loop_check(
    v: f64,
    caps: &Capacities,
    mu1: f64,
    mu2: f64,
    r: f64,
) -> Result<IntensifyingLoopReport> {
    if mu1 > mu2 {
        return Err(Error::InvalidParameter(format!("need mu1 <= mu2, got {mu1} > {mu2}")));
    }
    let cap = caps.lambda_s() * (1.0 - v);
    if mu2 >= cap {
        return Err(Error::InvalidParameter(format!(
            "interior best responses need mu < lambda_s (1 - v) = {cap}, got mu2 = {mu2}"
        )));
    }
    let p1 = MarketParams::new(v, mu1, *caps)?;
    let p2 = MarketParams::new(v, mu2, *caps)?;
    let br1 = best_response_da(r, &p1)?;
    let br2 = best_response_da(r, &p2)?;
    if !(br1.interior && br2.interior) {
        return Err(Error::CornerSolution(format!(
            "corner best response below the cost cap at r={r} (mu1={mu1}, mu2={mu2})"
        )));
    }
    let ls = caps.lambda_s();
    let g1 = |t: f64| br1.strategy.evaluate(t) * ls / br1.mean;
    let g2 = |t: f64| br2.strategy.evaluate(t) * ls / br2.mean;
    let crossing = single_crossing_scan(g1, g2, 999);
    let means_ordered = if mu1 == mu2 { br1.mean == br2.mean } else { br1.mean < br2.mean };
    Ok(IntensifyingLoopReport { mean_low: br1.mean, mean_high: br2.mean, means_ordered, crossing })
}
