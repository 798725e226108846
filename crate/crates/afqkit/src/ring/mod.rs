//! Exact scalar and series arithmetic underlying all other modules.
//!
//! - [`QScalar`]: canonical rational functions in the deformation parameter q,
//! - [`RatFunc`]: unreduced rational functions in (q, z, w) with equality by
//!   cross-multiplication,
//! - [`PuiseuxSeries`]: truncated series with a rational exponent offset,
//! - q-product constructors and the scalar formal delta rule.

pub mod delta;
pub mod mpoly;
pub mod poly;
pub mod qprod;
pub mod qscalar;
pub mod ratfunc;
pub mod series;

pub use delta::{delta_apply, DeltaTerm};
pub use mpoly::{MPoly, Var};
pub use poly::IntPoly;
pub use qprod::{
    poch_num, poch_qscalar, poch_qseries, pochhammer, pochhammer_euler, pochhammer_euler_inv,
    theta, theta_at, theta_num,
};
pub use qscalar::QScalar;
pub use ratfunc::RatFunc;
pub use series::PuiseuxSeries;
