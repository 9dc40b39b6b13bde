use serde::{Deserialize, Serialize};

/// An interval of the extended real line on which a distribution lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Support {
    pub const REAL_LINE: Support = Support {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
        lower_closed: false,
        upper_closed: false,
    };

    pub fn half_line(lower: f64, lower_closed: bool) -> Self {
        Support { lower, upper: f64::INFINITY, lower_closed, upper_closed: false }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lower_closed { x >= self.lower } else { x > self.lower };
        let below = if self.upper_closed { x <= self.upper } else { x < self.upper };
        above && below
    }

    /// Image under `x -> scale * x + offset` with `scale > 0`.
    pub fn affine_image(&self, scale: f64, offset: f64) -> Self {
        Support {
            lower: scale * self.lower + offset,
            upper: scale * self.upper + offset,
            ..*self
        }
    }

    /// True when the whole interval lies in `(0, +inf)` (or `[0, +inf)` with 0 open-ended).
    pub fn is_positive(&self) -> bool {
        self.lower >= 0.0
    }
}
