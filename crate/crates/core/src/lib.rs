//! Numerical toolkit for multilinear Hausdorff-type averaging operators on
//! two-weighted Morrey, Herz and Morrey-Herz spaces.
//!
//! The crate provides:
//!
//! * power-law and sampled weight functions with ball masses, Muckenhoupt
//!   `A_xi` characteristics, reverse Holder constants and critical indices
//!   ([`weights`]);
//! * the four norm functionals (weighted Lebesgue, two-weighted central
//!   Morrey, Herz, Morrey-Herz) evaluated by dyadic-annulus decomposition on
//!   symbolic and opaque test functions ([`spaces`]);
//! * the multilinear Hausdorff operator family, its matrix-family machinery
//!   and all classical special cases (Hardy, Hardy-Cesaro, weighted
//!   Hardy-Littlewood averages) ([`operators`]);
//! * every boundedness constant attached to the operator family on those
//!   spaces, in closed form where possible and by quadrature otherwise
//!   ([`constants`]);
//! * empirical operator-norm ratios built from the extremal inputs that
//!   realize the constants, with sharpness sweeps and two-sided checks
//!   ([`verify`]).
//!
//! The crate is `no_std` (with `alloc`); all float math goes through `libm`
//! and all sampling is deterministic given a seed, so results are
//! reproducible bit-for-bit across platforms.

#![no_std]
// `!(x > 0.0)` guards reject NaN along with the out-of-range values; the
// partial_cmp rewrite clippy suggests would lose that
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::too_many_arguments)]
#![allow(clippy::type_complexity)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod constants;
pub mod error;
pub mod math;
pub mod operators;
pub mod quad;
pub mod radial;
pub mod rng;
pub mod spaces;
pub mod verify;
pub mod weights;

pub use error::{Error, Result, Violation};
pub use quad::{Estimate, QuadratureSpec};
pub use radial::IntegralOutcome;
