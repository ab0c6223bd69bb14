//! Numerical laboratory for comparing the Boston and deferred-acceptance (DA)
//! school-choice mechanisms when students acquire costly, flexible information
//! about their preferences.
//!
//! The crate is organized around six pieces:
//!
//! * [`model`] — economy primitives: capacities, market parameters, the
//!   population-level assignment tables of both mechanisms, market-clearing
//!   priority cutoffs, and the report payoff gain `Δ`.
//! * [`info`] — signal strategies, the mutual-information cost, the logit form
//!   of optimal strategies, and the rational-inattention best response.
//! * [`equilibrium`] — complete-information thresholds, the interior
//!   fixed-point solver, existence bounds on `v`, allocation densities, and
//!   welfare.
//! * [`analysis`] — tatonnement best-response dynamics, comparative statics in
//!   the information cost, and single-crossing / stochastic-dominance
//!   diagnostics.
//! * [`simulate`] — a finite-agent Monte Carlo oracle that executes Boston,
//!   DA, and top-trading-cycles round by round to validate every
//!   population-level formula.
//! * [`numeric`] — adaptive quadrature, bracketing root finders, and
//!   overflow-safe log-space helpers shared by the modules above.
//!
//! All computations are pure functions of their arguments; values are
//! immutable after construction and safe to share across threads.

pub mod analysis;
pub mod equilibrium;
mod error;
pub mod info;
pub mod model;
pub mod numeric;
pub mod simulate;

pub use error::Error;
pub use model::{AllocationTable, Capacities, Cutoffs, MarketParams, Mechanism, Report, School};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
