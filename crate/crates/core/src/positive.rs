//! The positive fractional derivative: an operator whose Fourier symbol is
//! the real, non-negative `|ω|^σ` rather than the complex `(−iω)^σ` of the
//! Riemann-Liouville and Caputo derivatives.
//!
//! Three realizations are provided:
//!
//! * [`positive_spectral`] multiplies the DFT by `|ω|^σ`. It accepts every
//!   order, including odd and even integers.
//! * [`positive_caputo`] is the causal Caputo-style integral. With `k` the
//!   branch index (`2k < σ`) and `α = σ − 2k`:
//!
//!   ```text
//!   2k < σ < 2k+1:    1/(α q(σ))          ∫_0^t D^{2k+1}u(τ) (t−τ)^{−α}     dτ
//!   2k+1 < σ < 2k+2:  1/(α (α−1) q(σ))    ∫_0^t D^{2k+2}u(τ) (t−τ)^{−(α−1)} dτ
//!   ```
//!
//! * [`positive_rl`] adds the start-up term `u(0) t^{−η} / (η q(η))` to the
//!   Caputo form, mirroring the classical Riemann-Liouville/Caputo pair.
//!
//! The causal integrals only see the past of the signal, while `|ω|^σ` is
//! the symbol of a two-sided convolution with `s(t) = 1/(q|t|^{σ+1})`. The
//! two realizations therefore share their normalization but not their
//! spectra; see [`crate::verify`] for the measured discrepancy.
//!
//! Written literally, the Riemann-Liouville form is a hypersingular
//! integral `(1/q) ∫_0^t u(τ) (t−τ)^{−(η+1)} dτ`. Its naive Hadamard
//! finite part, [`naive_finite_part`], comes out as the negative of
//! [`positive_rl`]; it is kept as a diagnostic and is not used by any
//! operator.

use crate::classical::integral_of_order;
use crate::error::{Error, Result};
use crate::signal::{differentiate, direct_derivative, Degraded, Signal};
use crate::spectral::{filter, spectral_derivative, Multiplier};
use crate::special::{gamma, q_coefficient, Order};

/// Which half of the branch `2k < σ < 2k+2` an order falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `2k < σ < 2k+1`: kernel exponent `σ − 2k`, inner derivative `D^{2k+1}`.
    Lower,
    /// `2k+1 < σ < 2k+2`: kernel exponent `σ − 2k − 1`, inner derivative `D^{2k+2}`.
    Upper,
}

/// An order accepted by the time-domain positive derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveOrder {
    sigma: Order,
    q: f64,
    branch: Branch,
}

impl PositiveOrder {
    pub fn new(sigma: Order) -> Result<Self> {
        let v = sigma.value();
        if v <= 0.0 {
            return Err(Error::InvalidOrder {
                order: v,
                reason: "positive derivative order must be positive",
            });
        }
        if sigma.is_near_even() {
            return Err(Error::NearEvenOrder(v));
        }
        if sigma.is_odd_integer() {
            return Err(Error::OddIntegerOrder(v));
        }
        let q = q_coefficient(sigma)?;
        let k = sigma.k() as f64;
        let branch = if v < 2.0 * k + 1.0 { Branch::Lower } else { Branch::Upper };
        Ok(Self { sigma, q, branch })
    }

    pub fn from_value(value: f64) -> Result<Self> {
        Self::new(Order::new(value)?)
    }

    pub fn sigma(&self) -> Order {
        self.sigma
    }

    pub fn value(&self) -> f64 {
        self.sigma.value()
    }

    pub fn k(&self) -> u32 {
        self.sigma.k()
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Exponent of the weakly singular kernel `(t−τ)^{−β}`, in `(0, 1)`.
    pub fn kernel_exponent(&self) -> f64 {
        let base = 2.0 * self.k() as f64;
        match self.branch {
            Branch::Lower => self.value() - base,
            Branch::Upper => self.value() - base - 1.0,
        }
    }

    /// Order of the integer derivative taken inside the integral.
    pub fn inner_derivative(&self) -> u32 {
        match self.branch {
            Branch::Lower => 2 * self.k() + 1,
            Branch::Upper => 2 * self.k() + 2,
        }
    }

    /// Prefactor in front of the integral.
    fn prefactor(&self) -> f64 {
        let alpha = self.value() - 2.0 * self.k() as f64;
        match self.branch {
            Branch::Lower => 1.0 / (alpha * self.q),
            Branch::Upper => 1.0 / (alpha * (alpha - 1.0) * self.q),
        }
    }
}

/// Causal Caputo-style positive derivative. The grid start plays the role of
/// `t = 0`.
///
/// The inner `D^{2k+1}` / `D^{2k+2}` is taken by finite differences, so
/// accuracy drops for `k ≥ 1`.
pub fn positive_caputo(u: &Signal, sigma: &PositiveOrder) -> Result<Signal> {
    let beta = sigma.kernel_exponent();
    let inner = direct_derivative(u, sigma.inner_derivative())?;
    // ∫_0^t f(τ)(t−τ)^{−β} dτ = Γ(1−β) J^{1−β} f
    let integral = integral_of_order(&inner, 1.0 - beta)?;
    let out = integral.scale(sigma.prefactor() * gamma(1.0 - beta)?)?;
    Ok(out.with_degraded(Degraded { head: 1, tail: 0 }))
}

fn check_first_branch(eta: &PositiveOrder) -> Result<()> {
    if eta.value() >= 1.0 {
        return Err(Error::UnsupportedBranch(eta.value()));
    }
    Ok(())
}

/// Riemann-Liouville-style positive derivative for `0 < η < 1`:
/// `positive_caputo(u, η) + u(0) t^{−η} / (η q(η))`.
///
/// The start-up term is infinite at `t = 0`; sample 0 keeps the Caputo value
/// and is flagged as degraded.
pub fn positive_rl(u: &Signal, eta: &PositiveOrder) -> Result<Signal> {
    check_first_branch(eta)?;
    let base = positive_caputo(u, eta)?;
    let u0 = u.values()[0];
    if u0 == 0.0 {
        return Ok(base);
    }
    let grid = *u.grid();
    let coeff = u0 / (eta.value() * eta.q());
    let values = base
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| if i == 0 { v } else { v + coeff * (grid.t(i) - grid.a()).powf(-eta.value()) })
        .collect();
    Ok(base.with_values(values)?.with_degraded(Degraded { head: 1, tail: 0 }))
}

/// Positive derivative by spectral multiplication with `|ω|^σ`, treating `u`
/// as one period of a periodic signal. Any `σ ≥ 0` is accepted; the mean is
/// removed for `σ > 0`.
pub fn positive_spectral(u: &Signal, sigma: Order) -> Result<Signal> {
    filter(u, &Multiplier::Positive { sigma: sigma.value() })
}

/// Order of application for the composition with an integer derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionStyle {
    /// `D^{|η|+l} u = D^{|η|} (D^l u)`, with the Caputo-style positive operator.
    CaputoFirst,
    /// `D_*^{|η|+l} u = D^l (D_*^{|η|} u)`, with the RL-style positive operator.
    RlOuter,
}

impl std::str::FromStr for CompositionStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "caputo-first" => Ok(CompositionStyle::CaputoFirst),
            "rl-outer" => Ok(CompositionStyle::RlOuter),
            other => Err(Error::InvalidParams(format!(
                "unknown composition style `{other}` (expected caputo-first or rl-outer)"
            ))),
        }
    }
}

fn check_l(l: u32) -> Result<()> {
    if l == 0 {
        return Err(Error::InvalidOrder {
            order: 0.0,
            reason: "integer composition order must be at least 1",
        });
    }
    Ok(())
}

/// Positive derivative of order `η` composed with the `l`-th integer
/// derivative, in the time domain.
pub fn compose_integer(
    u: &Signal,
    eta: &PositiveOrder,
    l: u32,
    style: CompositionStyle,
) -> Result<Signal> {
    check_l(l)?;
    match style {
        CompositionStyle::CaputoFirst => positive_caputo(&differentiate(u, l)?, eta),
        CompositionStyle::RlOuter => {
            let inner = positive_rl(u, eta)?;
            let d = inner.degraded();
            let out = differentiate(&inner, l)?;
            Ok(out.with_degraded(Degraded {
                head: d.head + l as usize,
                tail: l as usize,
            }))
        }
    }
}

/// Spectral counterpart of [`compose_integer`]: both steps are evaluated as
/// Fourier multipliers. Both styles then reduce to `(−iω)^l |ω|^η`.
pub fn compose_integer_spectral(
    u: &Signal,
    eta: Order,
    l: u32,
    style: CompositionStyle,
) -> Result<Signal> {
    check_l(l)?;
    match style {
        CompositionStyle::CaputoFirst => positive_spectral(&spectral_derivative(u, l)?, eta),
        CompositionStyle::RlOuter => spectral_derivative(&positive_spectral(u, eta)?, l),
    }
}

/// Naive Hadamard finite part of `(1/q) ∫_0^t u(τ) (t−τ)^{−(η+1)} dτ`.
///
/// The data are interpolated piecewise-linearly and each cell is integrated
/// exactly, dropping the divergent `(t−τ)^{−η}` boundary contribution at
/// `τ = t`. The result equals `−positive_rl(u, η)`: taking the finite part
/// flips the sign relative to the Caputo-style form.
pub fn naive_finite_part(u: &Signal, eta: &PositiveOrder) -> Result<Signal> {
    check_first_branch(eta)?;
    let e = eta.value();
    let h = u.grid().dt();
    let f = u.values();
    // antiderivatives in x = t − τ, with the divergent term at x = 0 dropped
    let f0 = |x: f64| if x == 0.0 { 0.0 } else { -x.powf(-e) / e };
    let f1 = |x: f64| x.powf(1.0 - e) / (1.0 - e);
    let mut out = vec![0.0; f.len()];
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        for j in 0..n {
            // cell [t_j, t_{j+1}] maps to x ∈ [A, B]
            let lo = (n - j - 1) as f64 * h;
            let hi = (n - j) as f64 * h;
            let m0 = f0(hi) - f0(lo);
            let m1 = f1(hi) - f1(lo);
            // u = u_{j+1} + (u_j − u_{j+1})(x − A)/h
            acc += f[j + 1] * m0 + (f[j] - f[j + 1]) / h * (m1 - lo * m0);
        }
        *slot = acc / eta.q();
    }
    Ok(u.with_values(out)?.with_degraded(Degraded { head: 1, tail: 0 }))
}
