use std::collections::BTreeMap;

use super::{Grid, Signal};
use crate::error::{Error, Result};

/// Closed-form test signals.
///
/// `Power` is measured from the grid start `a`; every other kind uses the
/// absolute time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builder {
    /// `c`
    Constant { c: f64 },
    /// `(t − a)^p`
    Power { p: f64 },
    /// `sin(w t)`
    Sine { w: f64 },
    /// `cos(w t)`
    Cosine { w: f64 },
    /// `exp(−(t − c)² / (2 s²))`
    Gaussian { c: f64, s: f64 },
    /// `sin(w0 t + rate t² / 2)`
    Chirp { w0: f64, rate: f64 },
}

impl Builder {
    pub fn from_params(kind: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |param: &'static str| {
            params.get(param).copied().ok_or_else(|| Error::MissingParam {
                kind: kind.to_string(),
                param,
            })
        };
        Ok(match kind {
            "constant" => Builder::Constant { c: get("c")? },
            "power" => Builder::Power { p: get("p")? },
            "sine" => Builder::Sine { w: get("w")? },
            "cosine" => Builder::Cosine { w: get("w")? },
            "gaussian" => {
                let s = get("s")?;
                if !(s > 0.0) {
                    return Err(Error::InvalidParams(format!("gaussian width {s} must be positive")));
                }
                Builder::Gaussian { c: get("c")?, s }
            }
            "chirp" => Builder::Chirp {
                w0: get("w0")?,
                rate: get("rate")?,
            },
            other => return Err(Error::UnknownKind(other.to_string())),
        })
    }

    pub fn eval(&self, t: f64, a: f64) -> f64 {
        match *self {
            Builder::Constant { c } => c,
            Builder::Power { p } => (t - a).powf(p),
            Builder::Sine { w } => (w * t).sin(),
            Builder::Cosine { w } => (w * t).cos(),
            Builder::Gaussian { c, s } => {
                let z = (t - c) / s;
                (-0.5 * z * z).exp()
            }
            Builder::Chirp { w0, rate } => (w0 * t + 0.5 * rate * t * t).sin(),
        }
    }

    /// Exact `m`-th derivative at `t`, where a closed form is available.
    pub fn exact_derivative(&self, t: f64, a: f64, m: u32) -> Option<f64> {
        if m == 0 {
            return Some(self.eval(t, a));
        }
        match *self {
            Builder::Constant { .. } => Some(0.0),
            Builder::Power { p } => {
                let mut coeff = 1.0;
                for j in 0..m {
                    coeff *= p - j as f64;
                }
                if coeff == 0.0 {
                    Some(0.0)
                } else {
                    Some(coeff * (t - a).powf(p - m as f64))
                }
            }
            Builder::Sine { w } => Some(w.powi(m as i32) * (w * t + m as f64 * std::f64::consts::FRAC_PI_2).sin()),
            Builder::Cosine { w } => Some(w.powi(m as i32) * (w * t + m as f64 * std::f64::consts::FRAC_PI_2).cos()),
            Builder::Gaussian { c, s } => {
                // d^m/dt^m e^{-z²/2} = (−1/s)^m He_m(z) e^{-z²/2}
                let z = (t - c) / s;
                let (mut prev, mut cur) = (1.0, z);
                for j in 1..m {
                    let next = z * cur - j as f64 * prev;
                    prev = cur;
                    cur = next;
                }
                Some((-1.0 / s).powi(m as i32) * cur * (-0.5 * z * z).exp())
            }
            Builder::Chirp { w0, rate } if m == 1 => {
                Some((w0 + rate * t) * (w0 * t + 0.5 * rate * t * t).cos())
            }
            Builder::Chirp { .. } => None,
        }
    }

    pub fn sample(&self, grid: Grid) -> Result<Signal> {
        let a = grid.a();
        Signal::from_fn(grid, |t| self.eval(t, a))
    }
}

/// Sample the named closed-form kind on `grid`.
pub fn build_signal(kind: &str, params: &BTreeMap<String, f64>, grid: Grid) -> Result<Signal> {
    Builder::from_params(kind, params)?.sample(grid)
}
