use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// Relative tolerance used to classify two float costs as equal.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// A tour or edge cost. Exact instances carry integers, everything else floats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cost {
    Exact(i64),
    Float(f64),
}

impl Cost {
    pub fn to_f64(self) -> f64 {
        match self {
            Cost::Exact(v) => v as f64,
            Cost::Float(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Cost::Exact(_))
    }

    /// Total order; exact values compare as integers, mixed modes fall back to f64.
    pub fn total_cmp(&self, other: &Cost) -> Ordering {
        match (*self, *other) {
            (Cost::Exact(a), Cost::Exact(b)) => a.cmp(&b),
            (a, b) => a.to_f64().total_cmp(&b.to_f64()),
        }
    }

    /// Equality classification: exact for integers, relative tolerance for floats.
    pub fn same(self, other: Cost) -> bool {
        match (self, other) {
            (Cost::Exact(a), Cost::Exact(b)) => a == b,
            (a, b) => f64::same(a.to_f64(), b.to_f64()),
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Exact(v) => write!(f, "{v}"),
            Cost::Float(v) => write!(f, "{v:?}"),
        }
    }
}

/// Numeric type an exhaustive search can accumulate edge costs in.
pub trait Weight:
    Copy + PartialOrd + Add<Output = Self> + Send + Sync + fmt::Debug + 'static
{
    const ZERO: Self;

    fn into_cost(self) -> Cost;

    fn to_f64(self) -> f64;

    /// Whether two accumulated costs are considered equal.
    fn same(a: Self, b: Self) -> bool;

    /// `self` is tied with the minimum `min` (self >= min assumed).
    fn ties(self, min: Self) -> bool;

    /// `self` strictly exceeds `other` beyond the equality tolerance.
    fn exceeds(self, other: Self) -> bool;

    fn total_cmp(&self, other: &Self) -> Ordering;
}

impl Weight for i64 {
    const ZERO: Self = 0;

    fn into_cost(self) -> Cost {
        Cost::Exact(self)
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn same(a: Self, b: Self) -> bool {
        a == b
    }

    fn ties(self, min: Self) -> bool {
        self == min
    }

    fn exceeds(self, other: Self) -> bool {
        self > other
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Weight for f64 {
    const ZERO: Self = 0.0;

    fn into_cost(self) -> Cost {
        Cost::Float(self)
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn same(a: Self, b: Self) -> bool {
        (a - b).abs() <= FLOAT_REL_TOL * a.abs().max(b.abs())
    }

    fn ties(self, min: Self) -> bool {
        self <= min + FLOAT_REL_TOL * min.abs()
    }

    fn exceeds(self, other: Self) -> bool {
        self > other + FLOAT_REL_TOL * other.abs().max(self.abs())
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_ties_absorb_rounding() {
        let a = 0.1 + 0.2;
        assert!(f64::same(a, 0.3));
        assert!(a.ties(0.3));
        assert!(!0.31.ties(0.3));
        assert!(!f64::exceeds(0.3, a));
    }

    #[test]
    fn exact_comparisons_are_strict() {
        assert!(!i64::same(5, 6));
        assert!(6.exceeds(5));
        assert!(!5.ties(4));
        assert_eq!(Cost::Exact(3).total_cmp(&Cost::Exact(7)), Ordering::Less);
    }

    #[test]
    fn display_keeps_float_marker() {
        assert_eq!(Cost::Exact(16).to_string(), "16");
        assert_eq!(Cost::Float(4.0).to_string(), "4.0");
    }
}
