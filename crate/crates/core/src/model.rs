//! Fractionally damped nonlinear oscillator
//!
//! ```text
//! u'' + γ D^{1+η} u + ω₀² u + β u³ = 0,   0 < η < 1
//! ```
//!
//! with `D^{1+η}` in the Caputo sense. Writing `v = u'`, the damping term is
//! the Caputo derivative of order `η` of the velocity, so the system becomes
//!
//! ```text
//! u' = v
//! v' = −γ D^η v − ω₀² u − β u³
//! ```
//!
//! `D^η v(t_n)` is evaluated from the stored velocity history by product
//! integration with piecewise-linear `v` (exact kernel moments):
//!
//! ```text
//! D^η v(t_n) ≈ Δt^{−η} / Γ(2−η) · Σ_{j<n} b_{n−1−j} (v_{j+1} − v_j),
//! b_k = (k+1)^{1−η} − k^{1−η}
//! ```
//!
//! Each step is a Heun predictor-corrector: forward-Euler predictor, one
//! trapezoidal corrector pass. The history sum makes a run `O(N²)` in the
//! number of steps.

use crate::error::{Error, Result};
use crate::signal::{Grid, Signal};
use crate::special::gamma;

/// Displacement or velocity magnitude treated as a blow-up.
const BLOW_UP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    /// Thermoviscous damping coefficient, `≥ 0`.
    pub gamma: f64,
    /// Fractional part of the damping order, in `(0, 1)`.
    pub eta: f64,
    /// Linear stiffness frequency, `> 0`.
    pub omega0: f64,
    /// Cubic stiffness coefficient.
    pub beta: f64,
    pub u0: f64,
    pub v0: f64,
    pub dt: f64,
    pub t_end: f64,
}

impl OscillatorParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.gamma, self.eta, self.omega0, self.beta, self.u0, self.v0, self.dt, self.t_end,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParams(format!("gamma = {} must be non-negative", self.gamma)));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::InvalidParams(format!("eta = {} must lie in (0, 1)", self.eta)));
        }
        if !(self.omega0 > 0.0) {
            return Err(Error::InvalidParams(format!("omega0 = {} must be positive", self.omega0)));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParams(format!("dt = {} must be positive", self.dt)));
        }
        if self.t_end < 10.0 * self.dt {
            return Err(Error::InvalidParams(format!(
                "t_end = {} must cover at least 10 steps of {}",
                self.t_end, self.dt
            )));
        }
        Ok(())
    }

    /// Mechanical energy `½(v² + ω₀²u² + ½βu⁴)`.
    pub fn energy(&self, u: f64, v: f64) -> f64 {
        0.5 * (v * v + self.omega0 * self.omega0 * u * u + 0.5 * self.beta * u.powi(4))
    }

    fn restoring(&self, u: f64) -> f64 {
        self.omega0 * self.omega0 * u + self.beta * u * u * u
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: Grid,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub e: Vec<f64>,
}

/// Caputo `D^η` of the velocity history, one value per appended sample.
struct VelocityHistory {
    weights: Vec<f64>,
    increments: Vec<f64>,
    scale: f64,
}

impl VelocityHistory {
    fn new(eta: f64, dt: f64, steps: usize) -> Result<Self> {
        let p = 1.0 - eta;
        let weights = (0..steps)
            .map(|k| {
                if k == 0 {
                    1.0
                } else {
                    let kf = k as f64;
                    kf.powf(p) * (p * (1.0 / kf).ln_1p()).exp_m1()
                }
            })
            .collect();
        Ok(Self {
            weights,
            increments: Vec::with_capacity(steps),
            scale: dt.powf(-eta) / gamma(2.0 - eta)?,
        })
    }

    /// Contribution of the stored increments to `D^η v` at the next sample.
    fn lagged_sum(&self) -> f64 {
        let n = self.increments.len();
        self.increments
            .iter()
            .enumerate()
            .map(|(j, dv)| self.weights[n - j] * dv)
            .sum()
    }

    /// `D^η v` at the next sample if the last increment is `dv`, given
    /// `lagged = self.lagged_sum()`.
    fn derivative(&self, lagged: f64, dv: f64) -> f64 {
        self.scale * (lagged + self.weights[0] * dv)
    }

    fn push(&mut self, dv: f64) {
        self.increments.push(dv);
    }
}

pub fn simulate_oscillator(p: &OscillatorParams) -> Result<Trajectory> {
    p.validate()?;
    let steps = (p.t_end / p.dt).round() as usize;
    let grid = Grid::new(0.0, p.dt, steps + 1)?;
    let dt = p.dt;
    let damped = p.gamma > 0.0;
    let mut history = VelocityHistory::new(p.eta, dt, if damped { steps } else { 1 })?;

    let mut u = Vec::with_capacity(steps + 1);
    let mut v = Vec::with_capacity(steps + 1);
    u.push(p.u0);
    v.push(p.v0);
    // D^η v(0) = 0 for a Caputo derivative of a smooth start
    let mut acc = -p.restoring(p.u0);

    for n in 0..steps {
        let (un, vn) = (u[n], v[n]);
        let lagged = if damped { history.lagged_sum() } else { 0.0 };
        let rhs = |u: f64, v: f64| {
            let damping = if damped { p.gamma * history.derivative(lagged, v - vn) } else { 0.0 };
            -damping - p.restoring(u)
        };

        let u_pred = un + dt * vn;
        let v_pred = vn + dt * acc;
        let acc_pred = rhs(u_pred, v_pred);

        let u_next = un + 0.5 * dt * (vn + v_pred);
        let v_next = vn + 0.5 * dt * (acc + acc_pred);
        if !(u_next.abs() < BLOW_UP && v_next.abs() < BLOW_UP) {
            return Err(Error::Instability { t: grid.t(n + 1) });
        }
        acc = rhs(u_next, v_next);
        if damped {
            history.push(v_next - vn);
        }
        u.push(u_next);
        v.push(v_next);
    }

    let e = u.iter().zip(&v).map(|(&u, &v)| p.energy(u, v)).collect();
    Ok(Trajectory { grid, u, v, e })
}

pub fn energy_series(tr: &Trajectory) -> Result<Signal> {
    Signal::new(tr.grid, tr.e.clone())
}

/// Maximum of the energy over each sliding window of `window` time units,
/// one value per window start that fits inside the trajectory.
pub fn window_max_energy(tr: &Trajectory, window: f64) -> Vec<f64> {
    let width = ((window / tr.grid.dt()).round() as usize).max(1);
    if tr.e.len() <= width {
        return vec![tr.e.iter().copied().fold(f64::NEG_INFINITY, f64::max)];
    }
    // monotone deque sliding maximum
    let mut out = Vec::with_capacity(tr.e.len() - width);
    let mut deque = std::collections::VecDeque::new();
    for (i, &x) in tr.e.iter().enumerate() {
        while deque.back().is_some_and(|&j: &usize| tr.e[j] <= x) {
            deque.pop_back();
        }
        deque.push_back(i);
        if deque.front().is_some_and(|&j| j + width < i) {
            deque.pop_front();
        }
        if i >= width {
            out.push(tr.e[*deque.front().expect("non-empty window")]);
        }
    }
    out
}
