//! Validated operator selection shared by the command line and the
//! verification harness.

use std::fmt;
use std::str::FromStr;

use crate::classical::{caputo_derivative, rl_derivative, rl_integral};
use crate::error::{Error, Result};
use crate::positive::{
    compose_integer, compose_integer_spectral, positive_caputo, positive_rl, positive_spectral,
    CompositionStyle, PositiveOrder,
};
use crate::signal::Signal;
use crate::spectral::Multiplier;
use crate::special::Order;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpId {
    Integral,
    Rl,
    Caputo,
    PositiveCaputo,
    PositiveRl,
    PositiveSpectral,
}

impl OpId {
    pub const ALL: [OpId; 6] = [
        OpId::Integral,
        OpId::Rl,
        OpId::Caputo,
        OpId::PositiveCaputo,
        OpId::PositiveRl,
        OpId::PositiveSpectral,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OpId::Integral => "integral",
            OpId::Rl => "rl",
            OpId::Caputo => "caputo",
            OpId::PositiveCaputo => "positive-caputo",
            OpId::PositiveRl => "positive-rl",
            OpId::PositiveSpectral => "positive-spectral",
        }
    }

    fn is_positive(&self) -> bool {
        matches!(self, OpId::PositiveCaputo | OpId::PositiveRl | OpId::PositiveSpectral)
    }
}

impl fmt::Display for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OpId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OpId::ALL
            .into_iter()
            .find(|op| op.as_str() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown operator `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Composition {
    pub l: u32,
    pub style: CompositionStyle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Prepared {
    Classical(Order),
    Positive(PositiveOrder),
    Spectral(Order),
}

/// An operator with its order checked up front, so that applying it can
/// only fail on the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator {
    id: OpId,
    prepared: Prepared,
    compose: Option<Composition>,
}

impl Operator {
    /// `style = None` picks the style matching the operator
    /// (`caputo-first` for positive-caputo, `rl-outer` for positive-rl).
    pub fn new(id: OpId, order: f64, l: Option<u32>, style: Option<CompositionStyle>) -> Result<Self> {
        let order_v = Order::new(order)?;
        let prepared = match id {
            OpId::Integral => {
                if order <= 0.0 {
                    return Err(Error::InvalidOrder {
                        order,
                        reason: "integration order must be positive",
                    });
                }
                Prepared::Classical(order_v)
            }
            OpId::Rl | OpId::Caputo => {
                if order <= 0.0 || order_v.is_integer() {
                    return Err(Error::InvalidOrder {
                        order,
                        reason: "fractional derivatives need a positive non-integer order",
                    });
                }
                Prepared::Classical(order_v)
            }
            OpId::PositiveCaputo => Prepared::Positive(PositiveOrder::new(order_v)?),
            OpId::PositiveRl => {
                let p = PositiveOrder::new(order_v)?;
                if order >= 1.0 {
                    return Err(Error::UnsupportedBranch(order));
                }
                Prepared::Positive(p)
            }
            OpId::PositiveSpectral => Prepared::Spectral(order_v),
        };
        let compose = match (l, style) {
            (None, None) => None,
            (None, Some(_)) => {
                return Err(Error::InvalidParams("--style requires --compose-l".into()));
            }
            (Some(l), style) => {
                if !id.is_positive() {
                    return Err(Error::InvalidParams(format!(
                        "integer composition applies to the positive operators, not `{id}`"
                    )));
                }
                if l == 0 {
                    return Err(Error::InvalidOrder {
                        order: 0.0,
                        reason: "integer composition order must be at least 1",
                    });
                }
                let natural = match id {
                    OpId::PositiveRl => CompositionStyle::RlOuter,
                    _ => CompositionStyle::CaputoFirst,
                };
                let style = style.unwrap_or(natural);
                if id != OpId::PositiveSpectral && style != natural {
                    return Err(Error::InvalidParams(format!(
                        "`{id}` composes as {}; use the matching operator for the other style",
                        style_name(natural)
                    )));
                }
                Some(Composition { l, style })
            }
        };
        Ok(Self { id, prepared, compose })
    }

    pub fn id(&self) -> OpId {
        self.id
    }

    pub fn order(&self) -> f64 {
        match self.prepared {
            Prepared::Classical(o) | Prepared::Spectral(o) => o.value(),
            Prepared::Positive(p) => p.value(),
        }
    }

    pub fn composition(&self) -> Option<Composition> {
        self.compose
    }

    pub fn apply(&self, u: &Signal) -> Result<Signal> {
        match (self.id, self.prepared, self.compose) {
            (OpId::Integral, Prepared::Classical(o), _) => rl_integral(u, o),
            (OpId::Rl, Prepared::Classical(o), _) => rl_derivative(u, o),
            (OpId::Caputo, Prepared::Classical(o), _) => caputo_derivative(u, o),
            (OpId::PositiveCaputo, Prepared::Positive(p), None) => positive_caputo(u, &p),
            (OpId::PositiveRl, Prepared::Positive(p), None) => positive_rl(u, &p),
            (_, Prepared::Positive(p), Some(c)) => compose_integer(u, &p, c.l, c.style),
            (_, Prepared::Spectral(o), None) => positive_spectral(u, o),
            (_, Prepared::Spectral(o), Some(c)) => compose_integer_spectral(u, o, c.l, c.style),
            _ => unreachable!("operator prepared inconsistently"),
        }
    }

    /// The Fourier symbol this operator is expected to realize, if it has one.
    pub fn multiplier(&self) -> Option<Multiplier> {
        let order = self.order();
        match (self.id, self.compose) {
            (OpId::Integral, _) => None,
            (OpId::Rl | OpId::Caputo, _) => Some(Multiplier::Classical { eta: order }),
            (_, None) => Some(Multiplier::Positive { sigma: order }),
            (_, Some(c)) => Some(Multiplier::Composed { eta: order, l: c.l }),
        }
    }
}

pub(crate) fn style_name(style: CompositionStyle) -> &'static str {
    match style {
        CompositionStyle::CaputoFirst => "caputo-first",
        CompositionStyle::RlOuter => "rl-outer",
    }
}
