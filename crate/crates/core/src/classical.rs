//! Riemann-Liouville fractional integral and the Riemann-Liouville and
//! Caputo fractional derivatives of sampled signals.
//!
//! All three share one quadrature: the product-trapezoidal rule, which
//! replaces the data by its piecewise-linear interpolant and integrates the
//! kernel `(t − τ)^(q−1)` exactly on every cell. The singular endpoint is
//! therefore handled analytically and the rule is second order for smooth
//! data.
//!
//! For `m − 1 < λ < m`:
//!
//! ```text
//! integral      J^q u(t)   = 1/Γ(q) ∫_a^t u(τ) (t − τ)^(q−1) dτ
//! rl_derivative D_*^λ u    = D^m [ J^(m−λ) u ]
//! caputo        D^λ u      = J^(m−λ) [ D^m u ]
//! ```
//!
//! The two derivatives differ by the start-up term
//! `Σ_j u^(j)(a) (t − a)^(j−λ) / Γ(j + 1 − λ)`; for `0 < λ < 1` this is
//! `u(a) / (Γ(1−λ) (t − a)^λ)`.

use crate::error::{Error, Result};
use crate::signal::{direct_derivative, Degraded, Signal};
use crate::special::{gamma, Order};

/// Quadrature rules available for the weakly singular kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// Piecewise-linear data, exact kernel moments.
    ProductTrapezoidal,
}

impl QuadratureScheme {
    pub fn name(&self) -> &'static str {
        match self {
            QuadratureScheme::ProductTrapezoidal => "product-trapezoidal",
        }
    }

    /// Nominal convergence order for smooth data.
    pub fn order(&self) -> u32 {
        match self {
            QuadratureScheme::ProductTrapezoidal => 2,
        }
    }
}

/// Product-trapezoidal weights for `J^q` on `n` uniformly spaced samples.
///
/// ```text
/// J^q u(t_i) ≈ h^q / Γ(q+2) · ( start_i u_0 + Σ_{j=1..i} conv_{i−j} u_j )
/// conv_0 = 1,  conv_k = (k+1)^(q+1) − 2 k^(q+1) + (k−1)^(q+1)
/// start_i = (i−1)^(q+1) − (i − 1 − q) i^q
/// ```
#[derive(Debug, Clone)]
pub struct ProductTrapezoid {
    scale: f64,
    conv: Vec<f64>,
    start: Vec<f64>,
}

impl ProductTrapezoid {
    pub fn new(q: f64, h: f64, n: usize) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidOrder {
                order: q,
                reason: "integration order must be positive",
            });
        }
        let p = q + 1.0;
        let scale = h.powf(q) / gamma(q + 2.0)?;
        let mut conv = Vec::with_capacity(n);
        let mut start = Vec::with_capacity(n);
        for k in 0..n {
            let kf = k as f64;
            conv.push(match k {
                0 => 1.0,
                1 => 2f64.powf(p) - 2.0,
                // k^p [ (1 + 1/k)^p − 2 + (1 − 1/k)^p ] without the cancellation
                _ => {
                    let x = 1.0 / kf;
                    kf.powf(p) * ((p * x.ln_1p()).exp_m1() + (p * (-x).ln_1p()).exp_m1())
                }
            });
            start.push(match k {
                0 => 0.0,
                1 => q,
                // k^p [ (1 − 1/k)^p − 1 + p/k ]
                _ => {
                    let x = 1.0 / kf;
                    kf.powf(p) * ((p * (-x).ln_1p()).exp_m1() + p * x)
                }
            });
        }
        Ok(Self { scale, conv, start })
    }

    pub fn len(&self) -> usize {
        self.conv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conv.is_empty()
    }

    /// `J^q` at every sample of `values`; sample 0 is 0.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(values.len(), self.len(), "weight table length");
        let mut out = vec![0.0; values.len()];
        for (i, slot) in out.iter_mut().enumerate().skip(1) {
            let history: f64 = values[1..=i]
                .iter()
                .zip(self.conv[..i].iter().rev())
                .fold(self.start[i] * values[0], |acc, (v, c)| acc + c * v);
            *slot = self.scale * history;
        }
        out
    }
}

/// Riemann-Liouville fractional integral `J^q u` with lower limit `grid.a`.
pub fn rl_integral(u: &Signal, q: Order) -> Result<Signal> {
    if q.value() <= 0.0 {
        return Err(Error::InvalidOrder {
            order: q.value(),
            reason: "integration order must be positive",
        });
    }
    integral_of_order(u, q.value())
}

pub(crate) fn integral_of_order(u: &Signal, q: f64) -> Result<Signal> {
    let weights = ProductTrapezoid::new(q, u.grid().dt(), u.len())?;
    u.with_values(weights.apply(u.values()))
}

fn check_fractional(lam: Order) -> Result<()> {
    if lam.value() <= 0.0 {
        return Err(Error::InvalidOrder {
            order: lam.value(),
            reason: "derivative order must be positive",
        });
    }
    if lam.is_integer() {
        return Err(Error::InvalidOrder {
            order: lam.value(),
            reason: "integer order; use plain differentiation",
        });
    }
    Ok(())
}

/// Riemann-Liouville derivative `D^m [J^(m−λ) u]`.
///
/// The first and last `m` samples are flagged as degraded: the inner
/// integral behaves like `(t − a)^(m−λ)` at the start, and the outer
/// difference stencil is one-sided at both ends.
pub fn rl_derivative(u: &Signal, lam: Order) -> Result<Signal> {
    check_fractional(lam)?;
    let m = lam.m();
    let inner = integral_of_order(u, m as f64 - lam.value())?;
    let out = direct_derivative(&inner, m)?;
    Ok(out.with_degraded(Degraded {
        head: m as usize,
        tail: m as usize,
    }))
}

/// Caputo derivative `J^(m−λ) [D^m u]`.
///
/// Constants map to exactly zero. Sample 0 is 0 by construction and is
/// flagged as degraded.
pub fn caputo_derivative(u: &Signal, lam: Order) -> Result<Signal> {
    check_fractional(lam)?;
    let m = lam.m();
    let inner = direct_derivative(u, m)?;
    let out = integral_of_order(&inner, m as f64 - lam.value())?;
    Ok(out.with_degraded(Degraded { head: 1, tail: 0 }))
}
