//! Classical and positive fractional derivatives of uniformly sampled
//! signals.
//!
//! * [`classical`]: Riemann-Liouville integral, Riemann-Liouville and
//!   Caputo derivatives by product-trapezoidal quadrature.
//! * [`positive`]: the zero-phase positive derivative with symbol
//!   `|ω|^σ`, in causal time-domain and spectral forms.
//! * [`spectral`]: DFT with the `e^{+iωt}` convention and Fourier
//!   multipliers.
//! * [`verify`]: symbol checks and convergence studies.
//! * [`model`]: an oscillator with fractional damping.
//! * [`cli`]: the `fracdiff` command-line front-end.
//!
//! ```
//! use fracdiff::classical::rl_integral;
//! use fracdiff::signal::{Builder, Grid};
//! use fracdiff::special::Order;
//!
//! let grid = Grid::spanning(0.0, 1.0, 101)?;
//! let one = Builder::Constant { c: 1.0 }.sample(grid)?;
//! let j = rl_integral(&one, Order::new(0.5)?)?;
//! // J^0.5 1 = 2 sqrt(t / π)
//! assert!((j.values()[100] - 1.1283791671).abs() < 1e-9);
//! # Ok::<(), fracdiff::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::approx_constant))]

pub mod classical;
pub mod cli;
pub mod error;
pub mod model;
pub mod ops;
pub mod positive;
pub mod signal;
pub mod special;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/signals.md")]
    mod signals {}
    #[doc = include_str!("../../../book/src/classical.md")]
    mod classical {}
    #[doc = include_str!("../../../book/src/positive.md")]
    mod positive {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/oscillator.md")]
    mod oscillator {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
