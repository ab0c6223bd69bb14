//! Shared numerical machinery: overflow-safe log-space helpers, adaptive
//! Gauss–Kronrod quadrature, and bracketing root finders.

pub mod quad;
pub mod roots;
pub mod stable;

pub use quad::integrate;
pub use roots::{bisect, scan_brackets, Bracket};
pub use stable::{binary_entropy, binary_entropy_integral, ln_expm1, log1pexp, logistic};
