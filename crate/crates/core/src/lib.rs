//! Partition functions of the elliptic SOS model and the six-vertex model with
//! domain-wall boundary conditions.
//!
//! Each partition function is available through several independent routes:
//!
//! * configuration sums over height fields ([`enumerate`]),
//! * column transfer matrices ([`enumerate::column_transfer_z`]),
//! * permutation-sum closed forms and the Izergin determinant ([`closedform`]).
//!
//! The [`verify`] module turns the analytic properties (symmetry, recursion,
//! quasi-periodicity, Yang–Baxter relations, trigonometric limits) into
//! residual checks.
//!
//! ```
//! use dwbc::{closedform, enumerate, EllipticParams, ThetaContext};
//! use num_complex::Complex64 as C;
//!
//! let ctx = ThetaContext::new(C::new(0.0, 1.0))?;
//! let p = EllipticParams::new(
//!     vec![C::new(0.4, 0.0), C::new(0.7, 0.01)],
//!     vec![C::new(0.1, 0.0), C::new(0.25, -0.02)],
//!     C::new(0.31, 0.0),
//!     C::new(0.17, 0.0),
//! )?;
//! let by_sum = closedform::z_sos_elliptic(&ctx, &p)?;
//! let by_configurations = enumerate::enumerate_sos(&ctx, &p)?;
//! assert!((by_sum - by_configurations).norm() < 1e-12 * by_sum.norm());
//! # Ok::<(), dwbc::Error>(())
//! ```

pub mod closedform;
pub mod ellpoly;
pub mod enumerate;
pub mod error;
pub mod params;
pub mod perm;
pub mod rmatrix;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
pub use params::{EllipticParams, TrigParams};
pub use perm::Execution;
pub use rmatrix::{RMatrix4, Sign};
pub use theta::ThetaContext;

// Book chapters are compiled as doctests so their snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/theta.md")]
    mod theta {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/elliptic-polynomials.md")]
    mod elliptic_polynomials {}
    #[doc = include_str!("../../../book/src/degenerations.md")]
    mod degenerations {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
