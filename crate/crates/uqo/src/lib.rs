//! Unruh quantum Otto engine toolkit.
//!
//! A uniformly accelerated Unruh–DeWitt detector sees the Minkowski vacuum
//! as a thermal bath at temperature α/2π. This crate implements, for the
//! linear scalar, quadratic scalar, and fermionic detector couplings in
//! d = 4 with Lorentzian switching:
//!
//! * closed-form detector response functions built on the Lerch–Hurwitz
//!   transcendent ([`response`], [`specfun`]);
//! * regularized vacuum correlators along inertial and accelerated
//!   worldlines, with a KMS thermality tester ([`correlators`]);
//! * independent numerical oracles — regularized contour quadrature of the
//!   defining integral with ε-extrapolation and a residue (pole-sum)
//!   evaluator ([`oracle`]);
//! * the full quantum Otto cycle driven by the Unruh effect: cyclic
//!   closure, work/heat ledger, efficiency, and perturbative-validity
//!   margins ([`otto`]);
//! * reproducible parameter sweeps with CSV/JSON/SVG emission and a
//!   validation harness ([`sweep`], [`svg`], [`validate`]).
//!
//! The `examples/` directory has one runnable example per capability; the
//! thin `uqo` binary exposes the same functionality as subcommands.

pub mod cli;
pub mod correlators;
pub mod error;
pub mod oracle;
pub mod otto;
pub mod response;
pub mod specfun;
pub mod svg;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
pub use response::{Coupling, ResponsePoint, ResponseValue};
