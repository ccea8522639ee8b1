//! Transition densities of distorted Brownian motion on a space made of a
//! 3D component and a half-line glued at the origin, plus Monte Carlo and
//! semigroup checks that validate them.
//!
//! ```
//! use vdkernel::{kernel, CaseTag, EPoint, KernelParams, QuadConfig};
//!
//! let p = KernelParams::new(1.0).unwrap();
//! let o = EPoint::origin();
//! let v = kernel(1.0, &o, &o, &p, &QuadConfig::default()).unwrap();
//! assert_eq!(v.case, CaseTag::Origin);
//! assert!((v.value - 0.541_657_735_293_843).abs() < 1e-10);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference values are kept at the precision they were computed to.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod error;
pub mod geometry;
pub mod kernel3d;
pub mod kernels1d;
pub mod kernelvd;
pub mod quadrature;
pub mod simulate;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Component, EPoint, KernelParams, MeasureTag};
pub use kernels1d::Kernel1DValue;
pub use kernelvd::{kernel, origin_kernel, CaseTag, KernelVdValue};
pub use quadrature::{QuadConfig, QuadResult};
pub use simulate::{simulate, PathSample, Record, Scheme, SimPlan, SimPoint};
pub use verify::{run_suite, CheckReport, Suite};
