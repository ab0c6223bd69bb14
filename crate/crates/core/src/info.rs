//! Signal strategies and the rational-inattention machinery: the
//! mutual-information cost of a strategy, the logit form of optimal
//! strategies, the consistency equation that pins down the average report
//! probability, and the best response to a believed `sab` fraction under DA.
//!
//! A signal strategy is a map `m: [0,1] -> [0,1]` giving the probability that
//! a student with preference shock `θ` is recommended (and reports) `sab`.

use serde::Serialize;

use crate::model::{delta, delta_affine, MarketParams, Mechanism};
use crate::numeric::{
    binary_entropy, binary_entropy_integral, bisect, integrate, ln_expm1, log1pexp, logistic,
    scan_brackets,
};
use crate::{Error, Result};

/// Absolute tolerance used for every quadrature on [0,1] in this module.
pub(crate) const QUAD_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Serialize)]
enum Repr {
    /// `m(θ) = L e^{α(θ+β)} / (L e^{α(θ+β)} + 1)` with slope `α > 0`.
    Logit { alpha: f64, beta: f64, likelihood: f64 },
    /// Piecewise-linear interpolation through `(nodes[k], values[k])`,
    /// spanning [0,1].
    Grid { nodes: Vec<f64>, values: Vec<f64> },
}

/// A conditional reporting rule `m(θ)` with its cached mean `∫ m dθ`.
#[derive(Debug, Clone, Serialize)]
pub struct SignalStrategy {
    repr: Repr,
    mean: f64,
}

/// Mean of the logit form via the log primitive
/// `∫ (1 + δ e^{-αθ})^{-1} dθ = (1/α) ln((δ + e^α)/(δ + 1))`,
/// evaluated in log space.
fn logit_mean(alpha: f64, beta: f64, likelihood: f64) -> f64 {
    let ln_l = likelihood.ln();
    (log1pexp(ln_l + alpha * (1.0 + beta)) - log1pexp(ln_l + alpha * beta)) / alpha
}

impl SignalStrategy {
    /// Logit strategy with slope `alpha > 0`, shift `beta`, and likelihood
    /// ratio `likelihood > 0`.
    pub fn logit(alpha: f64, beta: f64, likelihood: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("logit slope must be positive, got {alpha}")));
        }
        if !(likelihood > 0.0) || !likelihood.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "likelihood ratio must be positive, got {likelihood}"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("logit shift must be finite, got {beta}")));
        }
        let mean = logit_mean(alpha, beta, likelihood);
        Ok(Self { repr: Repr::Logit { alpha, beta, likelihood }, mean })
    }

    /// Piecewise-linear strategy through `(nodes[k], values[k])`. Nodes must
    /// be strictly increasing and span [0,1]; values must lie in [0,1].
    pub fn grid(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::InvalidParameter(
                "grid strategy needs matching node/value lists with at least two entries".into(),
            ));
        }
        if nodes[0] != 0.0 || *nodes.last().unwrap() != 1.0 {
            return Err(Error::InvalidParameter("grid nodes must span [0,1]".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("grid nodes must be strictly increasing".into()));
        }
        if values.iter().any(|v| !(-1e-12..=1.0 + 1e-12).contains(v)) {
            return Err(Error::InvalidParameter("grid values must lie in [0,1]".into()));
        }
        let values: Vec<f64> = values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        // exact trapezoid integral of the interpolant
        let mean = nodes
            .windows(2)
            .zip(values.windows(2))
            .map(|(n, v)| (n[1] - n[0]) * 0.5 * (v[0] + v[1]))
            .sum();
        Ok(Self { repr: Repr::Grid { nodes, values }, mean })
    }

    /// The constant strategy `m ≡ c` (a signal carrying no information).
    pub fn constant(c: f64) -> Result<Self> {
        Self::grid(vec![0.0, 1.0], vec![c, c])
    }

    /// A unit-step strategy `m = 1{θ > threshold}`, realized as a grid with a
    /// 2e-12-wide ramp. The complete-information equilibria have this shape.
    pub fn step(threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::InvalidParameter(format!(
                "step threshold must lie in [0,1], got {threshold}"
            )));
        }
        let d = 1e-12f64.min(threshold * 0.5).min((1.0 - threshold) * 0.5);
        if d == 0.0 {
            // threshold at an endpoint degenerates to a constant
            return Self::constant(if threshold == 0.0 { 1.0 } else { 0.0 });
        }
        Self::grid(
            vec![0.0, threshold - d, threshold + d, 1.0],
            vec![0.0, 0.0, 1.0, 1.0],
        )
    }

    /// Probability of reporting `sab` at preference shock `theta`.
    pub fn evaluate(&self, theta: f64) -> f64 {
        match &self.repr {
            Repr::Logit { alpha, beta, likelihood } => {
                logistic(likelihood.ln() + alpha * (theta + beta))
            }
            Repr::Grid { nodes, values } => {
                if theta <= nodes[0] {
                    return values[0];
                }
                if theta >= *nodes.last().unwrap() {
                    return *values.last().unwrap();
                }
                let k = nodes.partition_point(|&n| n <= theta) - 1;
                let t = (theta - nodes[k]) / (nodes[k + 1] - nodes[k]);
                values[k] + t * (values[k + 1] - values[k])
            }
        }
    }

    /// `dm/dθ`; closed form `α m (1-m)` for the logit, segment slope for grids.
    pub fn derivative(&self, theta: f64) -> f64 {
        match &self.repr {
            Repr::Logit { alpha, .. } => {
                let m = self.evaluate(theta);
                alpha * m * (1.0 - m)
            }
            Repr::Grid { nodes, values } => {
                let k = nodes
                    .partition_point(|&n| n <= theta)
                    .clamp(1, nodes.len() - 1)
                    - 1;
                (values[k + 1] - values[k]) / (nodes[k + 1] - nodes[k])
            }
        }
    }

    /// Cached average `∫_0^1 m(θ) dθ` (closed form for logit, exact trapezoid
    /// for grids).
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Logit parameters `(alpha, beta, likelihood)` when applicable.
    pub fn logit_params(&self) -> Option<(f64, f64, f64)> {
        match self.repr {
            Repr::Logit { alpha, beta, likelihood } => Some((alpha, beta, likelihood)),
            Repr::Grid { .. } => None,
        }
    }

    /// Log-odds `ln(m/(1-m))` at `theta`, exact for the logit form even where
    /// `m` underflows.
    fn log_odds(&self, theta: f64) -> f64 {
        match &self.repr {
            Repr::Logit { alpha, beta, likelihood } => likelihood.ln() + alpha * (theta + beta),
            Repr::Grid { .. } => {
                let m = self.evaluate(theta).clamp(1e-300, 1.0 - 1e-16);
                (m / (1.0 - m)).ln()
            }
        }
    }

    /// `∫_0^1 H(m(θ)) dθ` where `H` is the binary entropy.
    fn entropy_integral(&self) -> f64 {
        match &self.repr {
            Repr::Logit { .. } => integrate(|t| binary_entropy(self.evaluate(t)), 0.0, 1.0, QUAD_TOL),
            Repr::Grid { nodes, values } => nodes
                .windows(2)
                .zip(values.windows(2))
                .map(|(n, v)| (n[1] - n[0]) * binary_entropy_integral(v[0], v[1]))
                .sum(),
        }
    }
}

/// Mutual information (in nats) between the preference shock and the binary
/// recommendation generated by `m`:
/// `I(m) = H(m̄) - ∫_0^1 H(m(θ)) dθ` with `0 ln 0 = 0`. Lies in [0, ln 2].
pub fn mutual_information(m: &SignalStrategy) -> f64 {
    (binary_entropy(m.mean()) - m.entropy_integral()).max(0.0)
}

/// The equilibrium-shaped logit strategy for a mechanism at fraction `r`:
/// `m(θ) = (1 + ((1-r)/r) e^{-Δ(θ; r)/μ})^{-1}`.
///
/// Wherever `Δ(θ; r) = 0` the strategy evaluates exactly to `r`.
pub fn logit_strategy(mech: Mechanism, r: f64, params: &MarketParams) -> Result<SignalStrategy> {
    if params.mu() <= 0.0 {
        return Err(Error::ZeroInformationCost(params.mu()));
    }
    let (intercept, slope) = delta_affine(mech, r, params)?;
    let alpha = slope / params.mu();
    let beta = intercept / slope;
    SignalStrategy::logit(alpha, beta, r / (1.0 - r))
}

/// Residual of the consistency condition
/// `∫_0^1 (e^{-α(θ+β)} + L)^{-1} dθ = 1/(L+1)`
/// written as `mean(L) - L/(L+1)`; strictly decreasing through any root.
fn consistency_residual(alpha: f64, beta: f64, likelihood: f64) -> f64 {
    logit_mean(alpha, beta, likelihood) - likelihood / (1.0 + likelihood)
}

/// Solve the consistency condition for the likelihood ratio `L > 0` given a
/// payoff gain of the form `α(θ + β)`. Uses the closed-form log primitive for
/// the integral, a sign-change scan over a 64-node log-spaced grid on
/// (1e-12, 1e12), and bisection; the returned root has residual ≤ 1e-12.
pub fn consistency_solve(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("consistency slope must be positive, got {alpha}")));
    }
    // The residual is single-crossing (strictly decreasing through any root),
    // so an interior root exists iff it is positive as L -> 0 and negative as
    // L -> inf. Both tail signs have exact log-space forms; checking them
    // first keeps float noise in the far tails from faking a sign change.
    let ln_ratio = ln_expm1(alpha) - alpha.ln(); // ln((e^α - 1)/α)
    let head_sign = alpha * beta + ln_ratio; // sign of residual near L = 0
    let tail_sign = -alpha * beta + (-(-alpha).exp()).ln_1p() - alpha.ln();
    let corner = |detail: &str| {
        Error::CornerSolution(format!(
            "consistency condition has no interior likelihood for alpha={alpha}, beta={beta} ({detail})"
        ))
    };
    if head_sign <= 0.0 || tail_sign <= 0.0 {
        return Err(corner("tail signs do not bracket a root"));
    }
    let (ln_lo, ln_hi) = ((1e-12f64).ln(), (1e12f64).ln());
    let phi = |ln_l: f64| consistency_residual(alpha, beta, ln_l.exp());
    // keep the most significant bracket: residual values at the root have a
    // healthy slope, while noise-level flips in the tails do not
    let bracket = scan_brackets(phi, ln_lo, ln_hi, 64)
        .into_iter()
        .max_by(|a, b| {
            let score = |br: &crate::numeric::Bracket| phi(br.lo).abs().max(phi(br.hi).abs());
            score(a).total_cmp(&score(b))
        })
        .ok_or_else(|| corner("no sign change on the scan grid"))?;
    let ln_l = bisect(phi, bracket, 1e-14);
    let likelihood = ln_l.exp();
    debug_assert!(consistency_residual(alpha, beta, likelihood).abs() <= 1e-12);
    Ok(likelihood)
}

/// An optimal information-acquisition response to a believed `sab` fraction.
#[derive(Debug, Clone)]
pub struct BestResponse {
    pub strategy: SignalStrategy,
    /// Average `sab` probability `m̄` of the response.
    pub mean: f64,
    /// Whether the first-order condition has an interior solution; corner
    /// responses are constant strategies acquiring no information.
    pub interior: bool,
    /// Gross expected gain minus the information cost.
    pub net_value: f64,
}

/// Interior best response under the DA mechanism when a fraction `r_belief`
/// of other students is believed to report `sab`.
///
/// Solves the consistency condition for the mean `m̄` (equivalently the
/// likelihood `L = m̄/(1-m̄)`) with slope `α = λ_s/(r_belief μ)` and shift
/// `v - 1`, then assembles the logit strategy. When no interior solution
/// exists the corner (constant) response is returned with `interior = false`.
pub fn best_response_da(r_belief: f64, params: &MarketParams) -> Result<BestResponse> {
    if params.mu() <= 0.0 {
        return Err(Error::ZeroInformationCost(params.mu()));
    }
    let r_hat = params.caps().r_hat();
    if !(r_belief > r_hat && r_belief < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "belief fraction must lie in (r_hat, 1) = ({r_hat}, 1), got {r_belief}"
        )));
    }
    let (intercept, slope) = delta_affine(Mechanism::Da, r_belief, params)?;
    let alpha = slope / params.mu();
    let beta = intercept / slope; // v - 1 in the focal regime

    match consistency_solve(alpha, beta) {
        Ok(likelihood) => {
            let strategy = SignalStrategy::logit(alpha, beta, likelihood)?;
            let mean = strategy.mean();
            let net_value = net_payoff(&strategy, Mechanism::Da, r_belief, params)?;
            Ok(BestResponse { strategy, mean, interior: true, net_value })
        }
        Err(Error::CornerSolution(_)) => {
            let gross = intercept + 0.5 * slope; // ∫ Δ dθ
            let c = if gross > 0.0 { 1.0 } else { 0.0 };
            let strategy = SignalStrategy::constant(c)?;
            Ok(BestResponse { strategy, mean: c, interior: false, net_value: gross.max(0.0) })
        }
        Err(e) => Err(e),
    }
}

/// Expected net payoff `∫_0^1 m(θ) Δ(θ; r) dθ - μ I(m)` of playing strategy
/// `m` against a population fraction `r` in the given mechanism.
pub fn net_payoff(
    m: &SignalStrategy,
    mech: Mechanism,
    r: f64,
    params: &MarketParams,
) -> Result<f64> {
    let (intercept, slope) = delta_affine(mech, r, params)?;
    let gross = match &m.repr {
        // m linear per segment and Δ affine: the product is quadratic, which
        // Simpson integrates exactly.
        Repr::Grid { nodes, values } => nodes
            .windows(2)
            .zip(values.windows(2))
            .map(|(n, v)| {
                let f = |theta: f64, mval: f64| mval * (intercept + slope * theta);
                let mid_m = 0.5 * (v[0] + v[1]);
                let mid_t = 0.5 * (n[0] + n[1]);
                (n[1] - n[0]) / 6.0
                    * (f(n[0], v[0]) + 4.0 * f(mid_t, mid_m) + f(n[1], v[1]))
            })
            .sum(),
        Repr::Logit { .. } => integrate(
            |t| m.evaluate(t) * (intercept + slope * t),
            0.0,
            1.0,
            QUAD_TOL,
        ),
    };
    Ok(gross - params.mu() * mutual_information(m))
}

/// Largest absolute residual of the first-order condition
/// `Δ(θ; r) = μ [ln(m/(1-m)) - ln(m̄/(1-m̄))]`
/// over `n_grid` evenly spaced values of `θ`.
pub fn foc_max_residual(
    m: &SignalStrategy,
    mech: Mechanism,
    r: f64,
    params: &MarketParams,
    n_grid: usize,
) -> Result<f64> {
    let mean = m.mean();
    let mean_odds = (mean / (1.0 - mean)).ln();
    let mut worst = 0.0f64;
    for i in 0..n_grid {
        let theta = i as f64 / (n_grid - 1) as f64;
        let lhs = delta(mech, theta, r, params)?;
        let rhs = params.mu() * (m.log_odds(theta) - mean_odds);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Capacities;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (diff {:.3e})", (a - b).abs());
    }

    fn params(v: f64, mu: f64) -> MarketParams {
        MarketParams::new(v, mu, Capacities::equal()).unwrap()
    }

    #[test]
    fn constant_strategy_carries_no_information() {
        let m = SignalStrategy::constant(0.37).unwrap();
        close(mutual_information(&m), 0.0, 1e-14);
        close(m.mean(), 0.37, 1e-15);
    }

    #[test]
    fn step_strategy_information_is_binary_entropy_of_mean() {
        let m = SignalStrategy::step(0.5).unwrap();
        close(m.mean(), 0.5, 1e-11);
        close(mutual_information(&m), std::f64::consts::LN_2, 1e-9);

        let m = SignalStrategy::step(0.4).unwrap();
        close(m.mean(), 0.6, 1e-11);
        let expected = -0.6 * 0.6f64.ln() - 0.4 * 0.4f64.ln(); // 0.673012...
        close(mutual_information(&m), expected, 1e-9);
        close(expected, 0.673_011_667_009_256_5, 1e-12);

        // independent quadrature oracle for the same quantity
        let quad_i = binary_entropy(m.mean())
            - integrate(|t| binary_entropy(m.evaluate(t)), 0.0, 1.0, 1e-11);
        close(mutual_information(&m), quad_i, 1e-8);
    }

    #[test]
    fn logit_mean_matches_quadrature_on_random_strategies() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..100 {
            let alpha = rng.gen_range(0.05..60.0);
            let beta = rng.gen_range(-1.5..0.5);
            let likelihood = rng.gen_range(0.01..100.0);
            let m = SignalStrategy::logit(alpha, beta, likelihood).unwrap();
            let quad_mean = integrate(|t| m.evaluate(t), 0.0, 1.0, 1e-12);
            close(m.mean(), quad_mean, 1e-9);
        }
    }

    #[test]
    fn equilibrium_logit_passes_through_r_at_indifference() {
        let p = params(0.6, 0.05);
        for &r in &[0.55, 0.6, 0.7, 0.9] {
            let m = logit_strategy(Mechanism::Da, r, &p).unwrap();
            // Δ^D(1-v; r) = 0
            close(m.evaluate(1.0 - p.v()), r, 1e-12);
            assert!(m.evaluate(0.0) < r && r < m.evaluate(1.0));
            let mut prev = m.evaluate(0.0);
            for i in 1..=50 {
                let val = m.evaluate(i as f64 / 50.0);
                assert!(val > prev);
                prev = val;
            }
        }
    }

    #[test]
    fn tiny_cost_makes_the_signal_nearly_fully_revealing() {
        let p = params(0.6, 0.005);
        let m = logit_strategy(Mechanism::Da, 0.6, &p).unwrap();
        assert!(m.evaluate(1.0 - p.v() - 0.05) < 0.01);
        assert!(m.evaluate(1.0 - p.v() + 0.05) > 0.99);
    }

    #[test]
    fn zero_cost_is_rejected() {
        let p = params(0.6, 0.0);
        assert!(matches!(
            logit_strategy(Mechanism::Da, 0.6, &p),
            Err(Error::ZeroInformationCost(_))
        ));
    }

    #[test]
    fn consistency_symmetric_case_gives_unit_likelihood() {
        for &alpha in &[0.5, 3.0, 20.0, 80.0] {
            let l = consistency_solve(alpha, -0.5).unwrap();
            close(l, 1.0, 1e-9);
        }
    }

    #[test]
    fn consistency_likelihood_increases_in_shift() {
        let alpha = 8.0;
        let mut prev = consistency_solve(alpha, -0.65).unwrap();
        for i in 1..=6 {
            let beta = -0.65 + i as f64 * 0.05;
            let l = consistency_solve(alpha, beta).unwrap();
            assert!(l > prev, "L({beta}) = {l} <= {prev}");
            prev = l;
        }
    }

    #[test]
    fn consistency_is_corner_for_extreme_shifts() {
        assert!(matches!(consistency_solve(8.0, -0.9), Err(Error::CornerSolution(_))));
        assert!(matches!(consistency_solve(8.0, 0.1), Err(Error::CornerSolution(_))));
    }

    #[test]
    fn best_response_satisfies_foc_and_the_mean_equation() {
        let p = params(0.6, 0.05);
        let br = best_response_da(0.6, &p).unwrap();
        assert!(br.interior);
        assert!(br.mean > 0.0 && br.mean < 1.0);
        assert!(foc_max_residual(&br.strategy, Mechanism::Da, 0.6, &p, 101).unwrap() <= 1e-8);

        // independent check against the mean fixed-point equation
        // m̄ (e^{-α(m̄-v)} - e^{-α(1-v)}) + (1-m̄)(e^{-α m̄} - 1) = 0
        let alpha = p.caps().lambda_s() / (0.6 * p.mu());
        let mb = br.mean;
        let v = p.v();
        let f = mb * ((-alpha * (mb - v)).exp() - (-alpha * (1.0 - v)).exp())
            + (1.0 - mb) * ((-alpha * mb).exp_m1());
        close(f, 0.0, 1e-9);
    }

    #[test]
    fn best_response_rejects_beliefs_outside_the_focal_range() {
        let p = params(0.6, 0.05);
        assert!(best_response_da(0.4, &p).is_err());
        assert!(best_response_da(1.0, &p).is_err());
    }

    #[test]
    fn huge_cost_yields_a_corner_response() {
        // with mu enormous no interior solution exists; E[u_s] > u_a pushes
        // everyone to report sab without learning
        let p = params(0.6, 50.0);
        let br = best_response_da(0.7, &p).unwrap();
        assert!(!br.interior);
        close(br.mean, 1.0, 0.0);
        close(mutual_information(&br.strategy), 0.0, 1e-14);
    }

    #[test]
    fn net_payoff_of_never_reporting_is_zero() {
        let p = params(0.6, 0.05);
        let m = SignalStrategy::constant(0.0).unwrap();
        close(net_payoff(&m, Mechanism::Da, 0.6, &p).unwrap(), 0.0, 1e-14);
    }

    #[test]
    fn best_response_beats_random_perturbed_strategies() {
        let p = params(0.6, 0.05);
        let r = 0.62;
        let br = best_response_da(r, &p).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let n = 21;
        let nodes: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        for _ in 0..200 {
            let scale = rng.gen_range(0.01..0.35);
            let values: Vec<f64> = nodes
                .iter()
                .map(|&t| {
                    (br.strategy.evaluate(t) + rng.gen_range(-scale..scale)).clamp(0.0, 1.0)
                })
                .collect();
            let cand = SignalStrategy::grid(nodes.clone(), values).unwrap();
            let val = net_payoff(&cand, Mechanism::Da, r, &p).unwrap();
            assert!(
                val <= br.net_value + 1e-9,
                "perturbed strategy beats the best response: {val} > {}",
                br.net_value
            );
        }
    }

    #[test]
    fn equilibrium_logit_beats_uninformative_strategy_with_same_mean() {
        let p = params(0.6, 0.05);
        for &r in &[0.55, 0.65, 0.8] {
            for mech in [Mechanism::Boston, Mechanism::Da] {
                let m = logit_strategy(mech, r, &p).unwrap();
                let flat = SignalStrategy::constant(r).unwrap();
                let vm = net_payoff(&m, mech, r, &p).unwrap();
                let vflat = net_payoff(&flat, mech, r, &p).unwrap();
                assert!(vm >= vflat - 1e-12, "{mech} r={r}: {vm} < {vflat}");
            }
        }
    }

    #[test]
    fn information_decreases_in_cost_along_the_logit_family() {
        // holds when the revealing cutoff -β lies inside [0,1]; Boston at
        // r = 0.65, v = 0.6 pushes the cutoff above 1 and the pattern inverts
        let cases = [
            (Mechanism::Da, 0.55),
            (Mechanism::Da, 0.65),
            (Mechanism::Da, 0.8),
            (Mechanism::Boston, 0.55),
        ];
        for (mech, r) in cases {
            let mut prev = f64::INFINITY;
            for i in 1..=20 {
                let p = params(0.6, 0.01 * i as f64);
                let m = logit_strategy(mech, r, &p).unwrap();
                let (_, beta, _) = m.logit_params().unwrap();
                assert!((-1.0..=0.0).contains(&beta), "cutoff must be interior");
                let info = mutual_information(&m);
                assert!(info <= prev + 1e-12, "{mech} r={r}: I rose from {prev} to {info}");
                prev = info;
            }
        }
    }

    #[test]
    fn mutual_information_bounds() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..50 {
            let alpha = rng.gen_range(0.1..200.0);
            let beta = rng.gen_range(-1.2..0.2);
            let likelihood = rng.gen_range(0.05..20.0);
            let m = SignalStrategy::logit(alpha, beta, likelihood).unwrap();
            let info = mutual_information(&m);
            assert!((0.0..=std::f64::consts::LN_2 + 1e-12).contains(&info));
        }
    }
}
