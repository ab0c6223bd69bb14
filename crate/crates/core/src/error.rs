use crate::equilibrium::VBounds;
use crate::model::Mechanism;

/// Errors surfaced by the solvers and the simulator.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A primitive failed its construction invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Per-student conditional assignment probabilities are undefined when one
    /// report group is empty.
    #[error("report fraction r={0} is degenerate; conditional probabilities need r in (0,1)")]
    DegenerateFraction(f64),

    /// The requested operation only makes sense for a positive marginal
    /// information cost.
    #[error("marginal information cost must be positive, got {0}")]
    ZeroInformationCost(f64),

    /// The complete-information indifference condition has no solution in the
    /// parameter regime the threshold characterization covers.
    #[error("no complete-information threshold: {0}")]
    Regime(String),

    /// No interior fixed point exists on (r_hat, 1).
    #[error("no interior equilibrium for {mechanism} at v={v}, mu={mu} (DA existence bounds: [{}, {}])", bounds.v_lower, bounds.v_upper)]
    NoInteriorEquilibrium {
        mechanism: Mechanism,
        v: f64,
        mu: f64,
        /// Existence bounds for the DA mechanism at this `mu`, reported as a
        /// diagnostic for both mechanisms.
        bounds: VBounds,
    },

    /// The residual scan found more than one sign change on (r_hat, 1). The
    /// fixed point is unique in this model, so this indicates a bug and is a
    /// hard error rather than a warning.
    #[error("multiple interior equilibria detected for {mechanism} at v={v}, mu={mu}")]
    MultipleEquilibria {
        mechanism: Mechanism,
        v: f64,
        mu: f64,
    },

    /// The consistency equation has no interior solution; the best response is
    /// a corner (a constant strategy acquiring no information).
    #[error("no interior solution: {0}")]
    CornerSolution(String),

    /// Two allocation densities that should carry the same mass do not.
    #[error("density mass mismatch: {0} vs {1}")]
    MassMismatch(f64, f64),
}
