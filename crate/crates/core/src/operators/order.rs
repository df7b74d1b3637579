use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interior order of accuracy of an SBP operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub enum InteriorOrder {
    Second,
    Fourth,
    Sixth,
}

impl InteriorOrder {
    pub fn as_usize(self) -> usize {
        match self {
            InteriorOrder::Second => 2,
            InteriorOrder::Fourth => 4,
            InteriorOrder::Sixth => 6,
        }
    }

    /// Boundary order of accuracy `p` of the closure (`order / 2`).
    pub fn boundary_order(self) -> usize {
        self.as_usize() / 2
    }

    /// Number of rows at each end that differ from the interior stencil.
    pub fn closure_rows(self) -> usize {
        match self {
            InteriorOrder::Second => 1,
            InteriorOrder::Fourth => 4,
            InteriorOrder::Sixth => 6,
        }
    }

    /// Smallest `n` for which the two boundary closures do not overlap.
    pub fn min_intervals(self) -> usize {
        match self {
            InteriorOrder::Second => 3,
            InteriorOrder::Fourth => 7,
            InteriorOrder::Sixth => 11,
        }
    }

    pub(crate) fn check_grid(self, n: usize) -> Result<()> {
        if n < self.min_intervals() {
            return Err(Error::GridTooSmall {
                n,
                order: self.as_usize(),
                min: self.min_intervals(),
            });
        }
        Ok(())
    }
}

impl TryFrom<usize> for InteriorOrder {
    type Error = Error;

    fn try_from(v: usize) -> Result<Self> {
        match v {
            2 => Ok(InteriorOrder::Second),
            4 => Ok(InteriorOrder::Fourth),
            6 => Ok(InteriorOrder::Sixth),
            other => Err(Error::UnsupportedOrder(other)),
        }
    }
}

impl From<InteriorOrder> for usize {
    fn from(o: InteriorOrder) -> usize {
        o.as_usize()
    }
}

impl FromStr for InteriorOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: usize = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("order must be 2, 4 or 6, got {s:?}")))?;
        InteriorOrder::try_from(v)
    }
}

impl fmt::Display for InteriorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_usize())
    }
}
