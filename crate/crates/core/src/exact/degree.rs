use std::fmt;
use std::ops::Add;

/// Filtration degree of an element: an integer, or `Infinite` for zero,
/// which lies in every filtration level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FiltDegree {
    Finite(i64),
    Infinite,
}

impl FiltDegree {
    pub fn finite(self) -> Option<i64> {
        match self {
            FiltDegree::Finite(d) => Some(d),
            FiltDegree::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == FiltDegree::Infinite
    }

    /// Membership in the `i`-th filtration level.
    pub fn at_least(self, i: i64) -> bool {
        self >= FiltDegree::Finite(i)
    }

    pub fn shift(self, k: i64) -> FiltDegree {
        match self {
            FiltDegree::Finite(d) => FiltDegree::Finite(d + k),
            FiltDegree::Infinite => FiltDegree::Infinite,
        }
    }
}

impl From<i64> for FiltDegree {
    fn from(d: i64) -> Self {
        FiltDegree::Finite(d)
    }
}

impl Add for FiltDegree {
    type Output = FiltDegree;
    fn add(self, rhs: FiltDegree) -> FiltDegree {
        match (self, rhs) {
            (FiltDegree::Finite(a), FiltDegree::Finite(b)) => FiltDegree::Finite(a + b),
            _ => FiltDegree::Infinite,
        }
    }
}

impl fmt::Display for FiltDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltDegree::Finite(d) => write!(f, "{d}"),
            FiltDegree::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_maximal() {
        assert!(FiltDegree::Infinite > FiltDegree::Finite(i64::MAX));
        assert!(FiltDegree::Finite(-3) < FiltDegree::Finite(2));
        assert!(FiltDegree::Infinite.at_least(1_000_000));
        assert_eq!(FiltDegree::Finite(2) + FiltDegree::Infinite, FiltDegree::Infinite);
        assert_eq!(
            FiltDegree::Finite(2) + FiltDegree::Finite(-5),
            FiltDegree::Finite(-3)
        );
    }
}
