//! Discrete Fourier transforms, Fourier multipliers and the harness that
//! checks time-domain operators against their Fourier symbols.
//!
//! # Sign convention
//!
//! The forward transform uses the kernel `e^{+iωt}`:
//!
//! ```text
//! U(ω_k) = Δt Σ_j u_j e^{+iω_k t_j},   u_j = 1/(nΔt) Σ_k U(ω_k) e^{−iω_k t_j}
//! ```
//!
//! so that `d/dt` corresponds to multiplication by `−iω` and a causal
//! derivative of order `η` to `(−iω)^η`. With the opposite sign every
//! classical symbol would be conjugated.
//!
//! Frequencies are angular, `ω_k = 2πk/(nΔt)`, stored in ascending order
//! with `k` running over `−⌊n/2⌋ ..= ⌈n/2⌉ − 1`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal::{Grid, Signal};

/// Complex amplitudes over a symmetric angular-frequency axis.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: Grid,
    omega: Vec<f64>,
    amps: Vec<Complex64>,
}

impl Spectrum {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Frequency spacing `2π/(nΔt)`.
    pub fn d_omega(&self) -> f64 {
        2.0 * PI / (self.grid.n() as f64 * self.grid.dt())
    }

    /// `Σ|U_k|² Δω / 2π`, equal to `Σ u_j² Δt` by Parseval.
    pub fn energy(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.d_omega() / (2.0 * PI)
    }

    fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Spectrum {
        Spectrum {
            grid: self.grid,
            omega: self.omega.clone(),
            amps: self.omega.iter().zip(&self.amps).map(|(&w, &a)| f(w, a)).collect(),
        }
    }
}

/// Index in FFT order of the `i`-th entry of the ascending frequency axis.
fn fft_index(i: usize, n: usize) -> usize {
    (i + n - n / 2) % n
}

fn frequency_axis(grid: &Grid) -> Vec<f64> {
    let n = grid.n();
    let dw = 2.0 * PI / (n as f64 * grid.dt());
    (0..n).map(|i| (i as f64 - (n / 2) as f64) * dw).collect()
}

pub fn dft_forward(u: &Signal) -> Spectrum {
    let grid = *u.grid();
    let n = grid.n();
    let mut buf: Vec<Complex64> = u.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    // rustfft's inverse direction is the e^{+2πi jk/n} kernel.
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let omega = frequency_axis(&grid);
    let amps = omega
        .iter()
        .enumerate()
        .map(|(i, &w)| buf[fft_index(i, n)] * Complex64::from_polar(grid.dt(), w * grid.a()))
        .collect();
    Spectrum { grid, omega, amps }
}

/// Inverse transform, keeping the imaginary part.
pub fn dft_inverse_complex(s: &Spectrum) -> Vec<Complex64> {
    let grid = s.grid;
    let n = grid.n();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, (&w, &a)) in s.omega.iter().zip(&s.amps).enumerate() {
        buf[fft_index(i, n)] = a * Complex64::from_polar(1.0, -w * grid.a());
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let norm = 1.0 / (n as f64 * grid.dt());
    buf.into_iter().map(|c| c * norm).collect()
}

/// Inverse transform to a real signal; the imaginary part is discarded.
pub fn dft_inverse(s: &Spectrum) -> Result<Signal> {
    Signal::new(s.grid, dft_inverse_complex(s).into_iter().map(|c| c.re).collect())
}

/// Fourier symbols of the operators in this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    /// `(−iω)^η`, principal branch: `|ω|^η e^{−i sgn(ω) πη/2}`.
    Classical { eta: f64 },
    /// `|ω|^σ`.
    Positive { sigma: f64 },
    /// `(−iω)^l |ω|^η`.
    Composed { eta: f64, l: u32 },
}

impl Multiplier {
    pub fn value(&self, omega: f64) -> Complex64 {
        match *self {
            Multiplier::Classical { eta } => {
                if omega == 0.0 {
                    return if eta == 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                }
                Complex64::from_polar(omega.abs().powf(eta), -omega.signum() * PI * eta / 2.0)
            }
            Multiplier::Positive { sigma } => {
                if omega == 0.0 && sigma != 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(omega.abs().powf(sigma), 0.0)
                }
            }
            Multiplier::Composed { eta, l } => {
                Multiplier::Classical { eta: l as f64 }.value(omega)
                    * Multiplier::Positive { sigma: eta }.value(omega)
            }
        }
    }
}

pub fn apply_multiplier(s: &Spectrum, m: &Multiplier) -> Spectrum {
    s.map(|w, a| a * m.value(w))
}

/// Apply a multiplier to a real signal and return the real part of the
/// result. The Nyquist bin of an even-length grid loses its imaginary
/// component, which only matters for odd classical orders.
pub fn filter(u: &Signal, m: &Multiplier) -> Result<Signal> {
    dft_inverse(&apply_multiplier(&dft_forward(u), m))
}

/// `l`-th derivative computed spectrally, `(−iω)^l`.
pub fn spectral_derivative(u: &Signal, l: u32) -> Result<Signal> {
    filter(u, &Multiplier::Classical { eta: l as f64 })
}

/// Relative error of one frequency band.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BandError {
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub bins: usize,
    /// `None` when the reference has no energy in the band.
    pub rel_error: Option<f64>,
}

/// Outcome of comparing a computed spectrum against a multiplier.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SymbolComparison {
    pub overall_rel_error: f64,
    pub bins: usize,
    pub bands: Vec<BandError>,
}

const BAND_COUNT: usize = 4;

/// Compare `computed` against `m·reference` over the bins with
/// `|reference| > band_threshold · max|reference|`.
pub fn compare_to_symbol(
    reference: &Spectrum,
    computed: &Spectrum,
    m: &Multiplier,
    band_threshold: f64,
) -> SymbolComparison {
    let peak = reference.amps.iter().fold(0.0f64, |p, a| p.max(a.norm()));
    let cutoff = band_threshold * peak;
    let selected: Vec<(f64, f64, f64)> = reference
        .omega
        .iter()
        .zip(&reference.amps)
        .zip(&computed.amps)
        .filter(|((_, u), _)| u.norm() > cutoff)
        .map(|((&w, &u), &c)| {
            let expected = m.value(w) * u;
            (w, (c - expected).norm_sqr(), expected.norm_sqr())
        })
        .collect();
    let ratio = |err: f64, reference: f64| {
        if reference > 0.0 {
            Some((err / reference).sqrt())
        } else if err == 0.0 {
            Some(0.0)
        } else {
            None
        }
    };
    let (err, norm) = selected.iter().fold((0.0, 0.0), |(e, r), x| (e + x.1, r + x.2));
    let overall = ratio(err, norm).unwrap_or(f64::INFINITY);

    let w_max = selected.iter().fold(0.0f64, |m, x| m.max(x.0.abs()));
    let width = if w_max > 0.0 { w_max / BAND_COUNT as f64 } else { 1.0 };
    let bands = (0..BAND_COUNT)
        .map(|b| {
            let lo = b as f64 * width;
            let hi = (b + 1) as f64 * width;
            let in_band: Vec<_> = selected
                .iter()
                .filter(|x| {
                    let a = x.0.abs();
                    a >= lo && (a < hi || (b == BAND_COUNT - 1 && a <= hi))
                })
                .collect();
            let (e, r) = in_band.iter().fold((0.0, 0.0), |(e, r), x| (e + x.1, r + x.2));
            BandError {
                omega_lo: lo,
                omega_hi: hi,
                bins: in_band.len(),
                rel_error: ratio(e, r),
            }
        })
        .collect();
    SymbolComparison {
        overall_rel_error: overall,
        bins: selected.len(),
        bands,
    }
}

/// Fraction of the record at each end that must be negligible.
const EDGE_FRACTION: f64 = 0.01;
/// "Negligible" relative to the peak magnitude.
const EDGE_LEVEL: f64 = 1e-8;

/// Fail with [`Error::SignalNotLocalized`] unless `|u|` stays below
/// `1e-8·max|u|` over the first and last 1% of the samples.
pub fn check_localized(u: &Signal) -> Result<()> {
    let n = u.len();
    let edge = ((n as f64 * EDGE_FRACTION).ceil() as usize).max(1);
    let peak = u.max_abs();
    let v = u.values();
    let edge_max = v[..edge]
        .iter()
        .chain(&v[n - edge..])
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let ratio = if peak > 0.0 { edge_max / peak } else { 0.0 };
    if peak == 0.0 || ratio >= EDGE_LEVEL {
        return Err(Error::SignalNotLocalized { ratio });
    }
    Ok(())
}
