//! Exact computer algebra for spectral R-matrices, RLL algebras with Gauss
//! decomposition into currents, fermionic and bosonic Fock constructions with
//! the boson-fermion correspondence, and q-series correlation identities.
//!
//! Everything is exact: rational-function identities are decided by
//! cross-multiplication, series are truncated with explicit windows, and the
//! probe-evaluation checks run over arbitrary-precision rationals with pinned
//! tolerance bounds. See the `examples/` directory for one runnable entry
//! point per capability and the `verify` module for machine-readable reports.

pub mod check;
pub mod error;
pub mod ring;
pub mod rmat;

pub use error::{AlgebraError, RingError};
