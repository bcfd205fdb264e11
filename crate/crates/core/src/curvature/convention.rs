use std::fmt;

/// How the second index of `R^A_{BCD}` is moved to produce the stored component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexPlacement {
    /// `R^{AB}_{CD} = η_B R^A_{BCD}`.
    RaiseSecond,
    /// `R_{AB CD} = η_A R^A_{BCD}`, read off with both frame indices down.
    LowerFirst,
}

/// The three sign choices that fix a curvature formula family.
///
/// `extraction` multiplies the wedge coefficient of the curvature two-form,
/// `connection_product` is the sign in front of `ω ∧ ω` in the second
/// structure equation, and `placement` says which index is moved by η.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignConvention {
    pub extraction: i8,
    pub connection_product: i8,
    pub placement: IndexPlacement,
}

impl SignConvention {
    /// The convention selected by calibration against the Christoffel computation.
    pub const RESOLVED: SignConvention =
        SignConvention { extraction: 1, connection_product: 1, placement: IndexPlacement::RaiseSecond };

    /// Every candidate, in a fixed order.
    pub fn all() -> Vec<SignConvention> {
        let mut out = Vec::with_capacity(8);
        for placement in [IndexPlacement::RaiseSecond, IndexPlacement::LowerFirst] {
            for extraction in [1, -1] {
                for connection_product in [1, -1] {
                    out.push(SignConvention { extraction, connection_product, placement });
                }
            }
        }
        out
    }

    /// The η factor applied when moving an index of `R^A_{B..}`.
    pub fn placement_eta(&self, eta_a: i8, eta_b: i8) -> i8 {
        match self.placement {
            IndexPlacement::RaiseSecond => eta_b,
            IndexPlacement::LowerFirst => eta_a,
        }
    }
}

impl Default for SignConvention {
    fn default() -> Self {
        Self::RESOLVED
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |x: i8| if x > 0 { '+' } else { '-' };
        let placement = match self.placement {
            IndexPlacement::RaiseSecond => "raise-second",
            IndexPlacement::LowerFirst => "lower-first",
        };
        write!(f, "extraction {}, connection product {}, {placement}", s(self.extraction), s(self.connection_product))
    }
}
