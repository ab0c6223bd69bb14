//! Equilibrium solvers: the complete-information thresholds, the interior
//! fixed point with costly information, existence bounds on `v` for the DA
//! mechanism, allocation densities over the preference shock, and welfare.
//!
//! With costly information, an interior symmetric equilibrium fraction
//! `r ∈ (r̂, 1)` is characterized by
//! `exp(λ_s/μ) = 1 + (exp(λ_s/(rμ)) - 1) / (((1-r)/r) e^{-Δ(0;r)/μ} + 1)`.
//! For small `μ` both sides overflow, so the solver compares logs throughout.

use serde::Serialize;

use crate::info::{logit_strategy, mutual_information, SignalStrategy, QUAD_TOL};
use crate::model::{delta, Capacities, MarketParams, Mechanism};
use crate::numeric::{bisect, integrate, ln_expm1, log1pexp, scan_brackets};
use crate::{Error, Result};

/// Boundary guard keeping conditional probabilities finite near r ∈ {r̂, 1}.
const EDGE: f64 = 1e-9;
/// Nodes in the sign-change scan over (r̂, 1).
const SCAN_NODES: usize = 512;

/// Existence bounds for an interior DA equilibrium: one exists iff
/// `v ∈ (v_lower, v_upper)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VBounds {
    pub v_lower: f64,
    pub v_upper: f64,
}

/// The bounds on `v` between which the DA mechanism has a (unique) interior
/// equilibrium. With `z = λ_s/μ` and `w = λ_a/μ`:
/// `v_upper = (1/z) ln((e^z - 1)/z)` and
/// `v_lower = (1/(z+w)) ln((w/(1 - e^{-w})) (e^z - 1)/z)`, both evaluated in
/// log space so μ sweeps can go far below 0.01.
pub fn v_bounds_da(mu: f64, caps: &Capacities) -> Result<VBounds> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::ZeroInformationCost(mu));
    }
    let z = caps.lambda_s() / mu;
    let w = caps.lambda_a() / mu;
    let ln_ez1_over_z = ln_expm1(z) - z.ln(); // ln((e^z - 1)/z)
    let v_upper = ln_ez1_over_z / z;
    // ln(w / (1 - e^{-w})) = ln w - ln(1 - e^{-w})
    let v_lower = (w.ln() - (-(-w).exp()).ln_1p() + ln_ez1_over_z) / (z + w);
    debug_assert!(v_lower < v_upper);
    Ok(VBounds { v_lower, v_upper })
}

/// The information cost above which no interior DA equilibrium exists for
/// this `v`: the unique `μ̄` with `v_upper(μ̄) = v`. Requires `v ∈ (1/2, 1)`.
pub fn mu_upper_bound(v: f64, caps: &Capacities) -> Result<f64> {
    if !(v > 0.5 && v < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "the upper cost bound is defined for v in (1/2, 1), got {v}"
        )));
    }
    // v_upper is strictly increasing in z from 1/2 (z -> 0) to 1 (z -> inf)
    let phi = |ln_z: f64| {
        let z = ln_z.exp();
        (ln_expm1(z) - z.ln()) / z - v
    };
    let brackets = scan_brackets(phi, (1e-8f64).ln(), (1e8f64).ln(), 128);
    let bracket = brackets
        .first()
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("no cost bound found for v={v}")))?;
    let z_bar = bisect(phi, bracket, 1e-14).exp();
    Ok(caps.lambda_s() / z_bar)
}

/// A solved equilibrium of one mechanism: either the complete-information
/// threshold form (`threshold_theta` set, no strategy) or the costly-
/// information logit form (`strategy` set).
#[derive(Debug, Clone, Serialize)]
pub struct Equilibrium {
    pub mechanism: Mechanism,
    /// Equilibrium fraction of students reporting `sab`.
    pub r: f64,
    /// Complete-information cutoff type θ^Γ, if applicable.
    pub threshold_theta: Option<f64>,
    strategy: Option<SignalStrategy>,
    /// Average preference shock among students matched with school `s`,
    /// normalized by λ_s.
    pub welfare: f64,
    /// Information expenditure μ·I(m) per student.
    pub info_cost: f64,
    /// Log-space residual of the fixed-point condition at `r`.
    pub residual: f64,
    params: MarketParams,
}

impl Equilibrium {
    /// The equilibrium signal strategy (costly-information case).
    pub fn strategy(&self) -> Option<&SignalStrategy> {
        self.strategy.as_ref()
    }

    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    /// Equilibrium probability that a type-`theta` student reports `sab`.
    /// The measure-zero threshold type of the complete-information case is
    /// assigned `m = 1`.
    pub fn m(&self, theta: f64) -> f64 {
        match (&self.strategy, self.threshold_theta) {
            (Some(s), _) => s.evaluate(theta),
            (None, Some(t)) => {
                if theta >= t {
                    1.0
                } else {
                    0.0
                }
            }
            (None, None) => unreachable!("equilibrium carries a strategy or a threshold"),
        }
    }

    /// Equilibrium allocation density of school `s`:
    /// `g(θ) = m(θ) λ_s / r`, integrating to λ_s.
    pub fn g(&self, theta: f64) -> f64 {
        self.m(theta) * self.params.caps().lambda_s() / self.r
    }
}

/// Complete-information equilibrium threshold θ^Γ and fraction r^Γ = 1 - θ^Γ.
///
/// DA is strategyproof, so θ^D = 1 - v exactly. The Boston threshold makes
/// the marginal type indifferent: either `θ ≤ λ_a` with
/// `λ_s (v + θ) = 1 - λ_a`, or `λ_a ≤ θ ≤ 1 - λ_s` with
/// `λ_s (v + θ) θ = λ_a (1 - θ)` solved by the positive quadratic root. The
/// case condition is verified ex post; if neither case applies the parameters
/// are outside the regime this characterization covers.
pub fn complete_info_threshold(mech: Mechanism, params: &MarketParams) -> Result<(f64, f64)> {
    let caps = params.caps();
    let (ls, la) = (caps.lambda_s(), caps.lambda_a());
    let v = params.v();
    if v <= caps.r_hat() {
        return Err(Error::Regime(format!(
            "complete-information thresholds need v > r_hat = {}, got v = {v}",
            caps.r_hat()
        )));
    }
    let theta = match mech {
        Mechanism::Da => 1.0 - v,
        Mechanism::Boston => {
            // Case 1: every asb student matches a; sab pays (1-λ_a)/r.
            let t1 = (1.0 - la) / ls - v;
            // Case 2: both top choices fill in round 1.
            let x = la + ls * v;
            let t2 = (-x + (x * x + 4.0 * ls * la).sqrt()) / (2.0 * ls);
            if (0.0..=la).contains(&t1) {
                if (la..=1.0 - ls).contains(&t2) {
                    // both case conditions hold only at the shared boundary
                    debug_assert!((t1 - t2).abs() < 1e-9);
                }
                t1
            } else if (la..=1.0 - ls).contains(&t2) {
                t2
            } else {
                return Err(Error::Regime(format!(
                    "no Boston indifference case applies at v={v} (candidates {t1}, {t2})"
                )));
            }
        }
    };
    let r = 1.0 - theta;
    if r <= caps.r_hat() {
        return Err(Error::Regime(format!(
            "complete-information fraction r={r} does not exceed r_hat={}",
            caps.r_hat()
        )));
    }
    Ok((theta, r))
}

/// Full complete-information equilibrium object (μ treated as 0).
pub fn complete_info_equilibrium(mech: Mechanism, params: &MarketParams) -> Result<Equilibrium> {
    let (theta, r) = complete_info_threshold(mech, params)?;
    Ok(Equilibrium {
        mechanism: mech,
        r,
        threshold_theta: Some(theta),
        strategy: None,
        // uniform mass on (θ^Γ, 1]
        welfare: 0.5 * (1.0 + theta),
        info_cost: 0.0,
        residual: 0.0,
        params: *params,
    })
}

/// Log-space residual of the interior fixed-point condition at fraction `r`:
/// `ln(RHS(r)) - λ_s/μ` where
/// `RHS(r) = 1 + (e^{λ_s/(rμ)} - 1) / (((1-r)/r) e^{-Δ(0;r)/μ} + 1)`.
/// Zero exactly at an interior equilibrium; also tends to zero as `r -> 1`.
pub fn eq_residual(mech: Mechanism, r: f64, params: &MarketParams) -> Result<f64> {
    if params.mu() <= 0.0 {
        return Err(Error::ZeroInformationCost(params.mu()));
    }
    let r_hat = params.caps().r_hat();
    if !(r > r_hat && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "fixed-point residual needs r in (r_hat, 1) = ({r_hat}, 1), got {r}"
        )));
    }
    let z = params.caps().lambda_s() / params.mu();
    let shift = -delta(mech, 0.0, r, params)? / params.mu();
    let ln_delta = ((1.0 - r) / r).ln() + shift; // ln(((1-r)/r) e^{-Δ(0;r)/μ})
    let ln_rhs_m1 = ln_expm1(z / r) - log1pexp(ln_delta); // ln(RHS - 1)
    Ok(log1pexp(ln_rhs_m1) - z)
}

/// Solve for the interior equilibrium of a mechanism by scanning the residual
/// on a 512-node grid over (r̂ + ε, 1 - ε) and bisecting the (unique) sign
/// change. More than one sign change would contradict uniqueness and is
/// reported as a hard error; none means no interior equilibrium exists.
pub fn solve_interior(mech: Mechanism, params: &MarketParams) -> Result<Equilibrium> {
    if params.mu() <= 0.0 {
        return Err(Error::ZeroInformationCost(params.mu()));
    }
    let caps = params.caps();
    let lo = caps.r_hat() + EDGE;
    let hi = 1.0 - EDGE;
    let f = |r: f64| eq_residual(mech, r, params).expect("r inside scan range");
    let brackets = scan_brackets(f, lo, hi, SCAN_NODES);
    match brackets.len() {
        0 => Err(Error::NoInteriorEquilibrium {
            mechanism: mech,
            v: params.v(),
            mu: params.mu(),
            bounds: v_bounds_da(params.mu(), caps)?,
        }),
        1 => {
            let r = bisect(f, brackets[0], 1e-13);
            let strategy = logit_strategy(mech, r, params)?;
            let residual = eq_residual(mech, r, params)?;
            let welfare =
                integrate(|t| t * strategy.evaluate(t), 0.0, 1.0, QUAD_TOL) / r;
            let info_cost = params.mu() * mutual_information(&strategy);
            debug_assert!((strategy.mean() - r).abs() < 1e-9, "fixed point self-consistency");
            Ok(Equilibrium {
                mechanism: mech,
                r,
                threshold_theta: None,
                strategy: Some(strategy),
                welfare,
                info_cost,
                residual,
                params: *params,
            })
        }
        _ => Err(Error::MultipleEquilibria { mechanism: mech, v: params.v(), mu: params.mu() }),
    }
}

/// The allocation density of school `s` induced by reporting rule `m` at
/// fraction `r`: `g(θ) = m(θ) λ_s / r`.
#[derive(Debug, Clone)]
pub struct AllocationDensity {
    strategy: SignalStrategy,
    scale: f64,
}

impl AllocationDensity {
    pub fn eval(&self, theta: f64) -> f64 {
        self.strategy.evaluate(theta) * self.scale
    }

    /// Total mass `∫_0^1 g dθ` (equals λ_s when `r` matches the mean of `m`).
    pub fn mass(&self) -> f64 {
        self.strategy.mean() * self.scale
    }
}

/// Build the allocation density `g(θ) = m(θ) λ_s / r`.
pub fn allocation_density(
    strategy: &SignalStrategy,
    r: f64,
    caps: &Capacities,
) -> Result<AllocationDensity> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::DegenerateFraction(r));
    }
    Ok(AllocationDensity { strategy: strategy.clone(), scale: caps.lambda_s() / r })
}

/// Average efficiency `W = ∫_0^1 θ g(θ) dθ / λ_s` of an allocation density
/// carrying mass λ_s.
pub fn welfare<G: Fn(f64) -> f64>(g: G, caps: &Capacities) -> Result<f64> {
    let ls = caps.lambda_s();
    let mass = integrate(&g, 0.0, 1.0, QUAD_TOL);
    if (mass - ls).abs() > 1e-6 {
        return Err(Error::MassMismatch(mass, ls));
    }
    Ok(integrate(|t| t * g(t), 0.0, 1.0, QUAD_TOL) / ls)
}
