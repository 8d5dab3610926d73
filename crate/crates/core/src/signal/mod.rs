//! Uniform time grids, sampled signals and integer-order differentiation.

mod builders;
mod csv;

pub use builders::{build_signal, Builder};
pub use csv::{format_g17, read_csv, read_csv_from, write_csv, write_csv_to, write_table};
pub(crate) use csv::{atomic_write, write_rows};

use crate::error::{Error, Result};

/// Uniform time axis `t_i = a + i·dt`, `i = 0..n`.
///
/// `a` doubles as the lower limit of every causal integral in this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    dt: f64,
    n: usize,
}

impl Grid {
    pub fn new(a: f64, dt: f64, n: usize) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidGrid(format!("start {a} is not finite")));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidGrid(format!("step {dt} must be positive")));
        }
        if n < 2 {
            return Err(Error::TooFewSamples { needed: 2, got: n });
        }
        if !(n as f64 * dt).is_finite() || !(a + n as f64 * dt).is_finite() {
            return Err(Error::InvalidGrid("grid extent overflows".into()));
        }
        Ok(Self { a, dt, n })
    }

    /// Grid with `n` samples covering `[a, b]` inclusive.
    pub fn spanning(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewSamples { needed: 2, got: n });
        }
        Self::new(a, (b - a) / (n - 1) as f64, n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self, i: usize) -> f64 {
        self.a + i as f64 * self.dt
    }

    pub fn end(&self) -> f64 {
        self.t(self.n - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.t(i))
    }
}

/// Number of samples at each end whose value is less accurate than the
/// interior (stencil or kernel start-up).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Degraded {
    pub head: usize,
    pub tail: usize,
}

/// Real samples on a [`Grid`]. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: Grid,
    values: Vec<f64>,
    degraded: Degraded,
}

impl Signal {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            grid,
            values,
            degraded: Degraded::default(),
        })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.n()],
            degraded: Degraded::default(),
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.times().map(f).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn degraded(&self) -> Degraded {
        self.degraded
    }

    pub fn with_degraded(mut self, degraded: Degraded) -> Self {
        self.degraded = degraded;
        self
    }

    /// Pointwise `α·self + β·other`.
    pub fn lin_comb(&self, alpha: f64, other: &Signal, beta: f64) -> Result<Signal> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| alpha * x + beta * y)
            .collect();
        Signal::new(self.grid, values)
    }

    pub fn scale(&self, factor: f64) -> Result<Signal> {
        Signal::new(self.grid, self.values.iter().map(|v| v * factor).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Result<Signal> {
        Signal::new(self.grid, values)
    }
}

/// `m`-th derivative by repeated second-order finite differences: central in
/// the interior, one-sided three-point stencils at both ends.
///
/// Stencils are written in difference form so constant data differentiates
/// to exactly zero.
pub fn differentiate(u: &Signal, m: u32) -> Result<Signal> {
    let n = u.len();
    let needed = 2 * m as usize + 1;
    if n < needed.max(3) {
        return Err(Error::TooFewSamples {
            needed: needed.max(3),
            got: n,
        });
    }
    let h = u.grid().dt();
    let mut values = u.values().to_vec();
    let mut next = vec![0.0; n];
    for _ in 0..m {
        first_difference(&values, h, &mut next);
        std::mem::swap(&mut values, &mut next);
    }
    u.with_values(values)
}

/// `m`-th derivative from a single second-order stencil per sample:
/// centered where it fits, shifted `m + 2`-point windows near the ends.
///
/// Unlike [`differentiate`], the boundary error stays `O(dt²)` for every
/// `m`, so a fractional integral of the result keeps second order. Same
/// sample requirement and difference-form evaluation as [`differentiate`].
pub fn direct_derivative(u: &Signal, m: u32) -> Result<Signal> {
    let n = u.len();
    let needed = (2 * m as usize + 1).max(3);
    if n < needed {
        return Err(Error::TooFewSamples { needed, got: n });
    }
    if m == 0 {
        return Ok(u.clone());
    }
    let m = m as usize;
    let f = u.values();
    let scale = u.grid().dt().powi(-(m as i32));
    let half = m.div_ceil(2);
    let centered = fd_weights(&(0..=2 * half).map(|j| j as f64 - half as f64).collect::<Vec<_>>(), m);
    let edge = m + 2;
    let apply = |start: usize, w: &[f64]| {
        let base = f[start];
        w.iter().enumerate().skip(1).map(|(j, wj)| wj * (f[start + j] - base)).sum::<f64>() * scale
    };
    let values = (0..n)
        .map(|i| {
            if i >= half && i + half < n {
                apply(i - half, &centered)
            } else {
                let start = if i < half { 0 } else { n - edge };
                let nodes: Vec<f64> = (0..edge).map(|j| (start + j) as f64 - i as f64).collect();
                apply(start, &fd_weights(&nodes, m))
            }
        })
        .collect();
    u.with_values(values)
}

/// Finite-difference weights for the `m`-th derivative at 0 on `nodes`
/// (Fornberg's recursion).
fn fd_weights(nodes: &[f64], m: usize) -> Vec<f64> {
    let p = nodes.len();
    let mut c = vec![vec![0.0; m + 1]; p];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    for i in 1..p {
        let mut c2 = 1.0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            for k in (0..=m.min(i)).rev() {
                let prev_ij = c[j][k];
                let lower_i = if k > 0 { c[i - 1][k - 1] } else { 0.0 };
                if j == i - 1 {
                    c[i][k] = c1 * (k as f64 * lower_i - nodes[i - 1] * c[i - 1][k]) / c2;
                }
                let lower_j = if k > 0 { c[j][k - 1] } else { 0.0 };
                c[j][k] = (nodes[i] * prev_ij - k as f64 * lower_j) / c3;
            }
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

fn first_difference(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    let inv = 1.0 / (2.0 * h);
    out[0] = (4.0 * (f[1] - f[0]) - (f[2] - f[0])) * inv;
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) * inv;
    }
    out[n - 1] = (4.0 * (f[n - 1] - f[n - 2]) - (f[n - 1] - f[n - 3])) * inv;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_weights() {
        let w = fd_weights(&[-1.0, 0.0, 1.0], 2);
        assert_eq!(w, vec![1.0, -2.0, 1.0]);
        let w = fd_weights(&[0.0, 1.0, 2.0, 3.0], 2);
        for (a, b) in w.iter().zip([2.0, -5.0, 4.0, -1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn direct_derivative_is_exact_on_low_degree() {
        let grid = Grid::spanning(0.0, 1.0, 41).unwrap();
        for m in 1..=4u32 {
            let p = m + 1;
            let u = Builder::Power { p: p as f64 }.sample(grid).unwrap();
            let d = direct_derivative(&u, m).unwrap();
            let fact: f64 = (2..=p).map(f64::from).product();
            for (i, v) in d.values().iter().enumerate() {
                let exact = fact * grid.t(i);
                assert!((v - exact).abs() < 1e-6 * fact, "m={m} i={i}: {v} vs {exact}");
            }
            let c = Builder::Constant { c: 1.7 }.sample(grid).unwrap();
            assert!(direct_derivative(&c, m).unwrap().values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn direct_derivative_converges_at_second_order_to_the_ends() {
        let err = |n: usize| {
            let grid = Grid::spanning(0.0, 1.0, n).unwrap();
            let u = Builder::Sine { w: 2.0 }.sample(grid).unwrap();
            let d = direct_derivative(&u, 2).unwrap();
            (0..n).map(|i| (d.values()[i] + 4.0 * (2.0 * grid.t(i)).sin()).abs()).fold(0.0, f64::max)
        };
        let ratio = err(101) / err(201);
        assert!(ratio > 3.5, "ratio {ratio}");
    }

    fn unit_grid(n: usize) -> Grid {
        Grid::spanning(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 0.0, 10).is_err());
        assert!(Grid::new(0.0, -1.0, 10).is_err());
        assert!(matches!(
            Grid::new(0.0, 0.1, 1),
            Err(Error::TooFewSamples { .. })
        ));
        let g = Grid::new(1.0, 0.25, 5).unwrap();
        assert_eq!(g.end(), 2.0);
        assert_eq!(g.times().collect::<Vec<_>>(), vec![1.0, 1.25, 1.5, 1.75, 2.0]);
    }

    #[test]
    fn signal_rejects_bad_values() {
        let g = unit_grid(3);
        assert!(matches!(
            Signal::new(g, vec![0.0, 1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            Signal::new(g, vec![0.0, f64::NAN, 1.0]),
            Err(Error::NonFinite(1))
        ));
    }

    #[test]
    fn derivative_of_constant_is_exactly_zero() {
        let u = Signal::from_fn(unit_grid(11), |_| 0.1).unwrap();
        for m in 1..=3 {
            assert!(differentiate(&u, m).unwrap().values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn derivative_of_linear_and_quadratic() {
        let g = unit_grid(101);
        let lin = Signal::from_fn(g, |t| t).unwrap();
        let d = differentiate(&lin, 1).unwrap();
        assert!(d.values().iter().all(|v| (v - 1.0).abs() < 1e-10));
        let quad = Signal::from_fn(g, |t| t * t).unwrap();
        let d2 = differentiate(&quad, 2).unwrap();
        assert!(d2.values().iter().all(|v| (v - 2.0).abs() < 1e-8));
    }

    #[test]
    fn too_few_samples() {
        let u = Signal::from_fn(unit_grid(4), |t| t).unwrap();
        assert!(matches!(
            differentiate(&u, 2),
            Err(Error::TooFewSamples { needed: 5, got: 4 })
        ));
    }

    #[test]
    fn derivative_converges_at_second_order() {
        for p in [2.0f64, 3.0] {
            let err = |n: usize| {
                let g = unit_grid(n);
                let u = Signal::from_fn(g, |t| t.powf(p)).unwrap();
                let d = differentiate(&u, 1).unwrap();
                (n / 4..3 * n / 4)
                    .map(|i| (d.values()[i] - p * g.t(i).powf(p - 1.0)).abs())
                    .fold(0.0, f64::max)
            };
            let (e1, e2) = (err(41), err(81));
            if e1 < 1e-12 {
                // exact for quadratics in the interior
                assert!(e2 < 1e-12);
                continue;
            }
            let order = (e1 / e2).log2();
            assert!(order >= 1.9, "p = {p}: observed order {order}");
        }
    }

    #[test]
    fn lin_comb_requires_same_grid() {
        let a = Signal::zeros(unit_grid(5));
        let b = Signal::zeros(unit_grid(6));
        assert!(matches!(a.lin_comb(1.0, &b, 1.0), Err(Error::GridMismatch)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn differentiate_is_linear(
                xs in proptest::collection::vec(-10.0f64..10.0, 12),
                ys in proptest::collection::vec(-10.0f64..10.0, 12),
                alpha in -3.0f64..3.0,
                beta in -3.0f64..3.0,
                m in 1u32..4,
            ) {
                let g = Grid::new(0.0, 0.5, 12).unwrap();
                let u = Signal::new(g, xs).unwrap();
                let v = Signal::new(g, ys).unwrap();
                let lhs = differentiate(&u.lin_comb(alpha, &v, beta).unwrap(), m).unwrap();
                let rhs = differentiate(&u, m).unwrap()
                    .lin_comb(alpha, &differentiate(&v, m).unwrap(), beta).unwrap();
                let scale = 1.0 + rhs.max_abs();
                for (a, b) in lhs.values().iter().zip(rhs.values()) {
                    prop_assert!((a - b).abs() <= 1e-12 * scale);
                }
            }
        }
    }
}
