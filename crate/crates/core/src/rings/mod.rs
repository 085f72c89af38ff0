//! Exact arithmetic: rationals, truncated polynomials in `t_p`, and Laurent
//! polynomials in the Novikov variables with `TpPoly` coefficients.

mod laurent;
mod rational;
mod tppoly;

pub use laurent::{LaurentPoly, Monomial, Vars};
pub use rational::{factorial, parse_rational, q, qi, rational_to_f64, rational_to_string, Q};
pub use tppoly::TpPoly;

/// Default truncation order for powers of `t_p`.
pub const DEFAULT_TP_ORDER: u32 = 12;
