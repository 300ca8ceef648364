use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

/// A local or total score: a finite `f64` or the absorbing `NEG_INFINITY`.
///
/// NaN and `+inf` are unrepresentable, which makes the order total.
#[derive(Clone, Copy, PartialEq)]
pub struct Score(f64);

impl Score {
    pub const ZERO: Score = Score(0.0);
    pub const NEG_INFINITY: Score = Score(f64::NEG_INFINITY);

    /// Wraps a finite value or `-inf`; rejects NaN and `+inf`.
    pub fn new(value: f64) -> Option<Score> {
        if value.is_nan() || value == f64::INFINITY {
            None
        } else {
            Some(Score(value))
        }
    }

    /// # Panics
    /// If `value` is not finite.
    pub fn finite(value: f64) -> Score {
        assert!(value.is_finite(), "score {value} is not finite");
        Score(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_neg_infinity(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl Eq for Score {}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Score {
    type Output = Score;

    fn add(self, rhs: Score) -> Score {
        if self.is_neg_infinity() || rhs.is_neg_infinity() {
            Score::NEG_INFINITY
        } else {
            Score(self.0 + rhs.0)
        }
    }
}

impl Sum for Score {
    fn sum<I: Iterator<Item = Score>>(iter: I) -> Score {
        iter.fold(Score::ZERO, Add::add)
    }
}

impl From<i32> for Score {
    fn from(v: i32) -> Score {
        Score(v as f64)
    }
}

impl fmt::Debug for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `-inf` for the sentinel, otherwise the shortest decimal that round-trips.
impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_neg_infinity() {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neg_infinity_absorbs() {
        let x = Score::finite(1e300);
        assert!((x + Score::NEG_INFINITY).is_neg_infinity());
        assert!((Score::NEG_INFINITY + Score::NEG_INFINITY).is_neg_infinity());
        assert!(Score::NEG_INFINITY < Score::finite(-1e308));
        assert_eq!(
            [Score::from(2), Score::NEG_INFINITY].into_iter().sum::<Score>(),
            Score::NEG_INFINITY
        );
    }

    #[test]
    fn rejects_nan_and_positive_infinity() {
        assert!(Score::new(f64::NAN).is_none());
        assert!(Score::new(f64::INFINITY).is_none());
        assert!(Score::new(f64::NEG_INFINITY).unwrap().is_neg_infinity());
    }

    #[test]
    fn display() {
        assert_eq!(Score::finite(4.5).to_string(), "4.5");
        assert_eq!(Score::finite(9007199254740992.0).to_string(), "9007199254740992");
        assert_eq!(Score::NEG_INFINITY.to_string(), "-inf");
    }
}
