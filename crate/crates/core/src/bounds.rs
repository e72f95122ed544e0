//! Closed-form bounds on the maximum walk length `M(P_m x P_n)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grid::GridDims;

/// `2·copies·⌊range/2⌋·⌈range/2⌉ − [range even]`: the claimed maximum of
/// `Σ|x_{i+1} − x_i|` over arrangements of `copies` copies of `1..=range`.
///
/// The formula overshoots the true maximum by one when `copies == 1` and
/// `range` is odd and at least 3; it is exact everywhere else. It remains a
/// valid upper bound in all cases.
pub fn axis_term(copies: u64, range: u64) -> u64 {
    let lo = range / 2;
    let hi = range.div_ceil(2);
    2 * copies * lo * hi - u64::from(range % 2 == 0)
}

/// Sum of the two per-axis terms. Symmetric in the two sides.
pub fn upper_bound(dims: GridDims) -> u64 {
    let (m, n) = (dims.rows() as u64, dims.cols() as u64);
    axis_term(n, m) + axis_term(m, n)
}

/// Length achieved by the explicit constructions.
///
/// Dispatch orients the grid first: the short side decides the 1-row and
/// 2-row families, and for mixed parity the odd side plays the role of `m`.
pub fn lower_target(dims: GridDims) -> u64 {
    let c = dims.canonical();
    let (short, long) = (c.rows() as u64, c.cols() as u64);
    match short {
        1 if long == 1 => 0,
        1 => long * long / 2 - 1,
        2 => (long + 1) * (long + 1) - 4,
        _ => {
            let (m, n) = (short, long);
            let half_perimeter_mass = m * n * (m + n) / 2;
            match (m % 2 == 0, n % 2 == 0) {
                (true, true) => half_perimeter_mass - 3,
                (false, false) => half_perimeter_mass - (m + n) / 2 - 1,
                (false, true) => half_perimeter_mass - n / 2 - 1,
                (true, false) => half_perimeter_mass - m / 2 - 1,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exactness {
    Exact,
    TwoPointInterval,
}

/// What the closed forms pin down about `M(P_m x P_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremStatus {
    pub dims: GridDims,
    pub lower_target: u64,
    pub upper: u64,
    pub exactness: Exactness,
}

impl TheoremStatus {
    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }
}

impl fmt::Display for TheoremStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exactness {
            Exactness::Exact => write!(f, "exact M={}", self.lower_target),
            Exactness::TwoPointInterval => {
                write!(f, "r={} upper={} interval", self.lower_target, self.upper)
            }
        }
    }
}

pub fn theorem_status(dims: GridDims) -> TheoremStatus {
    let lower = lower_target(dims);
    let upper = upper_bound(dims);
    debug_assert!(lower <= upper && upper - lower <= 1);
    TheoremStatus {
        dims,
        lower_target: lower,
        upper,
        exactness: if lower == upper {
            Exactness::Exact
        } else {
            Exactness::TwoPointInterval
        },
    }
}

/// Conjectured `M(P_n x P_n)`: `n³ − 3` for even `n`, `n³ − n − 1` for odd.
/// `None` for `n < 2`.
pub fn mcneil(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let cube = n * n * n;
    Some(if n % 2 == 0 { cube - 3 } else { cube - n - 1 })
}
