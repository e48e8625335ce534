//! Exact truncated power series in one and two commuting variables.
//!
//! Every series carries a precision `trunc`: coefficients of (total) degree
//! ≤ trunc are exact, everything above is unknown. The sentinel [`EXACT`]
//! marks a polynomial, whose coefficients are known in every degree. Each
//! operation documents how it moves the precision, and comparisons only look
//! at the window both operands know.

mod one;
mod two;

pub use one::Series1;
pub use two::Series2;

use serde::Serialize;

use crate::coeff::Cq;

/// Precision of an exact polynomial.
pub const EXACT: i64 = i64::MAX;

pub(crate) fn add_prec(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a + b
    }
}

pub(crate) fn sub_prec(a: i64, b: i64) -> i64 {
    if a == EXACT {
        EXACT
    } else {
        a - b
    }
}

/// Outcome of comparing two series on their common window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Agreement {
    /// Largest degree on which both operands are known (−1: nothing known).
    pub window: i64,
    /// First degree (or index pair) where they differ, if any.
    pub mismatch: Option<(usize, usize)>,
    /// Largest |difference| over the window, as a float summary.
    pub defect: f64,
}

impl Agreement {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }

    pub(crate) fn record(&mut self, at: (usize, usize), diff: &Cq) {
        if !diff.is_zero() {
            if self.mismatch.is_none() {
                self.mismatch = Some(at);
            }
            self.defect = self.defect.max(diff.magnitude());
        }
    }

    /// Merge two agreements: the window shrinks, failures accumulate.
    pub fn and(mut self, o: Agreement) -> Agreement {
        self.window = self.window.min(o.window);
        if self.mismatch.is_none() {
            self.mismatch = o.mismatch;
        }
        self.defect = self.defect.max(o.defect);
        self
    }

    pub fn trivial() -> Agreement {
        Agreement { window: EXACT, mismatch: None, defect: 0.0 }
    }
}
