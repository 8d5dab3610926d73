//! Scalar special functions and the normalization of the positive derivative.
//!
//! The positive fractional derivative of order `η` is normalized by
//!
//! ```text
//! q(η) = π / (Γ(η+1) · cos[(η+1)π/2])
//! ```
//!
//! and its whole-line kernel is `s(t) = 1 / (q(η) |t|^(η+1))`, the inverse
//! Fourier transform of `|ω|^η`. `q` diverges at even integer orders, so
//! those are rejected with [`Error::NearEvenOrder`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerance used to classify an order as an integer.
pub const INTEGER_GUARD: f64 = 1e-9;

/// `|cos[(η+1)π/2]|` below this value is treated as an even order.
pub const EVEN_GUARD: f64 = 1e-6;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const FACTORIAL: [f64; 21] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
];

/// Gamma function Γ(x) for real `x`.
///
/// Lanczos approximation (g = 7, nine terms) for `x ≥ 0.5`, the reflection
/// formula below that, and an exact factorial table for small positive
/// integers.
///
/// ```
/// use fracdiff::special::gamma;
///
/// assert_eq!(gamma(4.0).unwrap(), 6.0);
/// assert!((gamma(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
/// assert!(gamma(-2.0).is_err());
/// ```
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidParams(format!("gamma of non-finite {x}")));
    }
    if x.round() <= 0.0 && (x - x.round()).abs() < 1e-12 {
        return Err(Error::Pole(x));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x == x.trunc() && (1.0..=21.0).contains(&x) {
        return FACTORIAL[x as usize - 1];
    }
    if x < 0.5 {
        // Γ(x) Γ(1−x) = π / sin(πx)
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * series
}

/// Reciprocal gamma 1/Γ(x), which is entire: zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// A non-negative differentiation (or integration) order with its integer
/// classification.
///
/// `m` is the smallest integer with `m − 1 < value ≤ m`; `k` is the branch
/// index, the largest integer with `2k < value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order {
    value: f64,
    m: u32,
    k: u32,
}

impl Order {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidOrder {
                order: value,
                reason: "order must be finite",
            });
        }
        if value < 0.0 {
            return Err(Error::InvalidOrder {
                order: value,
                reason: "order must be non-negative",
            });
        }
        let nearest = value.round();
        let m = if (value - nearest).abs() < INTEGER_GUARD {
            nearest
        } else {
            value.ceil()
        };
        let half = value / 2.0;
        let k = if value == 0.0 {
            0.0
        } else if (half - half.round()).abs() < INTEGER_GUARD / 2.0 {
            half.round() - 1.0
        } else {
            half.ceil() - 1.0
        };
        Ok(Self {
            value,
            m: m as u32,
            k: k as u32,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Integer ceiling `m` with `m − 1 < value ≤ m`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Branch index `k`: largest integer with `2k < value` (0 for value 0).
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_integer(&self) -> bool {
        (self.value - self.value.round()).abs() < INTEGER_GUARD
    }

    pub fn is_odd_integer(&self) -> bool {
        self.is_integer() && (self.value.round() as i64) % 2 == 1
    }

    /// True when `cos[(η+1)π/2]` is within [`EVEN_GUARD`] of zero, i.e. the
    /// order sits on (or numerically next to) an even integer.
    pub fn is_near_even(&self) -> bool {
        even_cosine(self.value).abs() < EVEN_GUARD
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Order::new(value)
    }
}

fn even_cosine(eta: f64) -> f64 {
    ((eta + 1.0) * PI / 2.0).cos()
}

/// Normalization `q(η) = π / (Γ(η+1) cos[(η+1)π/2])`.
///
/// ```
/// use fracdiff::special::{q_coefficient, Order};
///
/// let q = q_coefficient(Order::new(1.0).unwrap()).unwrap();
/// assert!((q + std::f64::consts::PI).abs() < 1e-12);
/// assert!(q_coefficient(Order::new(2.0).unwrap()).is_err());
/// ```
pub fn q_coefficient(eta: Order) -> Result<f64> {
    if eta.value() <= 0.0 {
        return Err(Error::InvalidOrder {
            order: eta.value(),
            reason: "q is defined for positive orders",
        });
    }
    let c = even_cosine(eta.value());
    if c.abs() < EVEN_GUARD {
        return Err(Error::NearEvenOrder(eta.value()));
    }
    Ok(PI / (gamma(eta.value() + 1.0)? * c))
}

/// Whole-line kernel `s(t) = Γ(η+1) cos[(η+1)π/2] / (π |t|^(η+1))`, even in t.
pub fn kernel_s(t: f64, eta: Order) -> Result<f64> {
    if t.abs() < 1e-300 {
        return Err(Error::SingularAtZero);
    }
    let q = q_coefficient(eta)?;
    Ok(1.0 / (q * t.abs().powf(eta.value() + 1.0)))
}
