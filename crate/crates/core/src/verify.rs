//! Verification harnesses: Fourier-symbol checks of the time-domain
//! operators and grid-refinement convergence studies against closed forms.
//!
//! The Fourier check transforms the operator output and compares it with
//! the catalogued symbol applied to the input spectrum. Two effects limit
//! what a causal time-domain operator can reach here:
//!
//! * its output decays only algebraically after the pulse, so the part of
//!   the response beyond the record end is lost; this mostly shows up in
//!   the `ω = 0` bin, where every symbol vanishes;
//! * the positive Caputo-style form is a one-sided convolution. Its symbol
//!   is `Γ(1−η)/(η q(η)) · (−iω)^η`, not `|ω|^η`; for `η = 0.5` that is
//!   `−(1 − i sgn ω)|ω|^η / 2`, a relative distance of `√10/2 ≈ 1.58`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::{OpId, Operator};
use crate::positive::{Branch, PositiveOrder};
use crate::signal::{Builder, Grid, Signal};
use crate::spectral::{check_localized, compare_to_symbol, dft_forward, BandError};
use crate::special::{gamma, q_coefficient, rgamma, Order};

/// Centered Gaussian on the periodic grid `t_j = j·T/n`, `j < n`.
pub fn gaussian_test_signal(n: usize, t_end: f64, center: f64, width: f64) -> Result<Signal> {
    if !(t_end > 0.0) {
        return Err(Error::InvalidParams(format!("record length {t_end} must be positive")));
    }
    let grid = Grid::new(0.0, t_end / n as f64, n)?;
    Builder::Gaussian { c: center, s: width }.sample(grid)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FtReport {
    pub op: String,
    pub order: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    pub n: usize,
    pub dt: f64,
    pub overall_rel_error: f64,
    pub band_threshold: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub bins: usize,
    pub bands: Vec<BandError>,
}

/// Run `op` on `u` in the time domain and compare the spectrum of the result
/// with the operator's symbol applied to the spectrum of `u`.
pub fn verify_ft_relation(
    op: &Operator,
    u: &Signal,
    band_threshold: f64,
    tolerance: f64,
) -> Result<FtReport> {
    let symbol = op.multiplier().ok_or_else(|| {
        Error::InvalidParams(format!("`{}` has no Fourier symbol to verify", op.id()))
    })?;
    check_localized(u)?;
    let reference = dft_forward(u);
    let computed = dft_forward(&op.apply(u)?);
    let cmp = compare_to_symbol(&reference, &computed, &symbol, band_threshold);
    Ok(FtReport {
        op: op.id().to_string(),
        order: op.order(),
        l: op.composition().map(|c| c.l),
        n: u.len(),
        dt: u.grid().dt(),
        overall_rel_error: cmp.overall_rel_error,
        band_threshold,
        tolerance,
        pass: cmp.overall_rel_error < tolerance,
        bins: cmp.bins,
        bands: cmp.bands,
    })
}

/// Exact value of `op` applied to `(t − a)^p` at distance `x = t − a`.
///
/// Built from `D^j x^p = Γ(p+1)/Γ(p+1−j) x^{p−j}` and
/// `J^r x^s = Γ(s+1)/Γ(s+1+r) x^{s+r}`. Returns `None` for operators without
/// a closed form on an interval (the spectral ones, compositions) or for
/// `p ≤ 0` where the start-up terms dominate.
pub fn power_closed_form(op: &Operator, p: f64, x: f64) -> Option<f64> {
    if p <= 0.0 || op.composition().is_some() {
        return None;
    }
    let order = op.order();
    // value of J^r D^j x^p
    let chain = |j: u32, r: f64| -> Option<f64> {
        if p.fract() == 0.0 && (p as u32) < j {
            return Some(0.0);
        }
        let v = gamma(p + 1.0).ok()? * rgamma(p + 1.0 - j as f64 + r) * x.powf(p - j as f64 + r);
        v.is_finite().then_some(v)
    };
    match op.id() {
        OpId::Integral => chain(0, order),
        OpId::Caputo => {
            let m = Order::new(order).ok()?.m();
            chain(m, m as f64 - order)
        }
        OpId::Rl => {
            // D^m J^{m−λ} x^p = Γ(p+1)/Γ(p+1−λ) x^{p−λ}
            Some(gamma(p + 1.0).ok()? * rgamma(p + 1.0 - order) * x.powf(p - order))
        }
        OpId::PositiveCaputo | OpId::PositiveRl => {
            let sigma = PositiveOrder::from_value(order).ok()?;
            let beta = sigma.kernel_exponent();
            let alpha = order - 2.0 * sigma.k() as f64;
            let q = q_coefficient(sigma.sigma()).ok()?;
            let prefactor = match sigma.branch() {
                Branch::Lower => 1.0 / (alpha * q),
                Branch::Upper => 1.0 / (alpha * (alpha - 1.0) * q),
            };
            let scale = prefactor * gamma(1.0 - beta).ok()?;
            Some(scale * chain(sigma.inner_derivative(), 1.0 - beta)?)
        }
        OpId::PositiveSpectral => None,
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConvergenceLevel {
    pub n: usize,
    pub dt: f64,
    pub max_error: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConvergenceReport {
    pub op: String,
    pub order: f64,
    pub power: f64,
    pub levels: Vec<ConvergenceLevel>,
    /// `log2(e_i / e_{i+1})` for consecutive levels.
    pub observed_orders: Vec<f64>,
    pub min_observed_order: f64,
    pub min_order: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceConfig {
    pub levels: usize,
    /// Number of cells on `[0, 1]` at the coarsest level.
    pub base_cells: usize,
    /// Exponent of the `t^p` test signal; `None` picks
    /// [`default_power`] for the operator.
    pub power: Option<f64>,
    /// Required observed order.
    pub min_order: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            levels: 4,
            base_cells: 64,
            power: None,
            min_order: 1.5,
        }
    }
}

/// Smallest integer power on which the discretization of `op` is not exact:
/// two above the integer derivative taken inside the operator, at least 3.
pub fn default_power(op: &Operator) -> f64 {
    let order = op.order();
    let inner = match op.id() {
        OpId::Integral | OpId::PositiveSpectral => 0,
        OpId::Rl | OpId::Caputo => Order::new(order).map_or(0, |o| o.m()),
        OpId::PositiveCaputo | OpId::PositiveRl => {
            PositiveOrder::from_value(order).map_or(0, |p| p.inner_derivative())
        }
    };
    f64::from(inner + 2).max(3.0)
}

fn level_error(op: &Operator, power: f64, cells: usize) -> Result<ConvergenceLevel> {
    let grid = Grid::spanning(0.0, 1.0, cells + 1)?;
    let u = Builder::Power { p: power }.sample(grid)?;
    let out = op.apply(&u)?;
    let d = out.degraded();
    let first = d.head.max(1);
    let last = grid.n() - d.tail;
    let mut max_error = 0.0f64;
    for i in first..last {
        let exact = power_closed_form(op, power, grid.t(i) - grid.a())
            .ok_or_else(|| Error::InvalidParams(format!("no closed form for `{}`", op.id())))?;
        max_error = max_error.max((out.values()[i] - exact).abs());
    }
    Ok(ConvergenceLevel {
        n: grid.n(),
        dt: grid.dt(),
        max_error,
    })
}

/// Refine the grid `levels` times by halving the step and report the
/// observed order of the max-norm error against the `t^p` closed form.
/// Levels are evaluated concurrently.
pub fn convergence_study(op: &Operator, cfg: &ConvergenceConfig) -> Result<ConvergenceReport> {
    if cfg.levels < 2 {
        return Err(Error::InvalidParams("a convergence study needs at least 2 levels".into()));
    }
    if cfg.base_cells < 4 {
        return Err(Error::InvalidParams("base grid needs at least 4 cells".into()));
    }
    let power = cfg.power.unwrap_or_else(|| default_power(op));
    if power_closed_form(op, power, 0.5).is_none() {
        return Err(Error::InvalidParams(format!(
            "no closed-form oracle for `{}` with power {power}",
            op.id()
        )));
    }
    let levels: Vec<ConvergenceLevel> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..cfg.levels)
            .map(|i| {
                let cells = cfg.base_cells << i;
                scope.spawn(move || level_error(op, power, cells))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("refinement level panicked"))
            .collect::<Result<_>>()
    })?;
    let observed_orders: Vec<f64> = levels
        .windows(2)
        .map(|w| (w[0].max_error / w[1].max_error).log2())
        .collect();
    let min_observed_order = observed_orders.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ConvergenceReport {
        op: op.id().to_string(),
        order: op.order(),
        power,
        levels,
        pass: min_observed_order >= cfg.min_order,
        observed_orders,
        min_observed_order,
        min_order: cfg.min_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(id: OpId, order: f64) -> Operator {
        Operator::new(id, order, None, None).unwrap()
    }

    #[test]
    fn closed_forms_reproduce_known_values() {
        let cases = [
            // J^0.5 t at t = 1 is Γ(2)/Γ(2.5)
            (OpId::Integral, 0.5, 1.0, 0.7522528),
            (OpId::Caputo, 0.5, 1.0, 1.1283792),
            (OpId::Rl, 0.5, 1.0, 1.1283792),
            (OpId::Caputo, 1.5, 2.0, 2.2567583),
            (OpId::PositiveCaputo, 0.5, 1.0, -0.7978846),
            (OpId::PositiveCaputo, 1.5, 2.0, -1.5957691),
        ];
        for (id, order, p, expected) in cases {
            let v = power_closed_form(&op(id, order), p, 1.0).unwrap();
            assert!((v - expected).abs() < 1e-7, "{id} {order} p={p}: {v}");
        }
        // integer power below the derivative order is annihilated
        assert_eq!(power_closed_form(&op(OpId::Caputo, 1.5), 1.0, 0.7), Some(0.0));
        assert!(power_closed_form(&op(OpId::PositiveSpectral, 0.5), 2.0, 0.5).is_none());
    }

    #[test]
    fn spectral_operator_matches_its_symbol() {
        let u = gaussian_test_signal(2048, 40.0, 20.0, 2.0).unwrap();
        let r = verify_ft_relation(&op(OpId::PositiveSpectral, 0.5), &u, 1e-6, 0.05).unwrap();
        assert!(r.overall_rel_error < 1e-12, "{r:?}");
        assert!(r.pass);
        assert_eq!((r.n, r.op.as_str()), (2048, "positive-spectral"));
    }

    #[test]
    fn unlocalized_signal_is_rejected() {
        let u = gaussian_test_signal(512, 40.0, 3.0, 2.0).unwrap();
        assert!(matches!(
            verify_ft_relation(&op(OpId::Caputo, 0.5), &u, 1e-6, 0.05),
            Err(Error::SignalNotLocalized { .. })
        ));
    }

    #[test]
    fn integral_has_no_symbol() {
        let u = gaussian_test_signal(256, 40.0, 20.0, 2.0).unwrap();
        assert!(verify_ft_relation(&op(OpId::Integral, 0.5), &u, 1e-6, 0.05).is_err());
    }

    #[test]
    fn convergence_of_integral() {
        let r = convergence_study(&op(OpId::Integral, 0.5), &ConvergenceConfig::default()).unwrap();
        assert_eq!(r.levels.len(), 4);
        assert_eq!(r.observed_orders.len(), 3);
        assert!(r.pass, "{r:?}");
        assert!(r.levels.windows(2).all(|w| w[1].dt < w[0].dt));
    }

    #[test]
    fn default_power_avoids_exact_cases() {
        assert_eq!(default_power(&op(OpId::Integral, 0.5)), 3.0);
        assert_eq!(default_power(&op(OpId::Caputo, 0.5)), 3.0);
        assert_eq!(default_power(&op(OpId::Caputo, 1.5)), 4.0);
        assert_eq!(default_power(&op(OpId::PositiveCaputo, 1.5)), 4.0);
        assert_eq!(default_power(&op(OpId::PositiveCaputo, 2.5)), 5.0);
        let r = convergence_study(&op(OpId::Caputo, 1.5), &ConvergenceConfig::default()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn convergence_rejects_bad_config() {
        let o = op(OpId::Caputo, 0.5);
        let cfg = ConvergenceConfig { levels: 1, ..Default::default() };
        assert!(convergence_study(&o, &cfg).is_err());
        let cfg = ConvergenceConfig { power: Some(-1.0), ..Default::default() };
        assert!(convergence_study(&o, &cfg).is_err());
        assert!(convergence_study(&op(OpId::PositiveSpectral, 0.5), &Default::default()).is_err());
    }
}
