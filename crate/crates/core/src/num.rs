//! Scalar abstraction for per-document word counts.
//!
//! Every count, sum and threshold in the crate is an integer; fractions are
//! exact ratios of that same integer type. Nothing on the decision path goes
//! through floating point.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{NumCast, PrimInt};

/// Integer type usable as a word count.
///
/// Blanket-implemented for every primitive integer. Signed types are allowed
/// so that manifests with negative counts can be represented and reported by
/// validation; the division procedures reject them.
pub trait WordCount:
    PrimInt + Integer + Hash + FromStr + Display + Debug + Default + Send + Sync + 'static
{
    /// Converts a document-level token count, failing on overflow.
    fn from_usize(n: usize) -> Option<Self> {
        <Self as NumCast>::from(n)
    }
}

impl<T> WordCount for T where
    T: PrimInt + Integer + Hash + FromStr + Display + Debug + Default + Send + Sync + 'static
{
}

/// Exact fraction over the word-count type.
pub type Fraction<W> = Ratio<W>;

/// Sums counts with overflow detection.
pub fn checked_sum<W: WordCount>(counts: impl IntoIterator<Item = W>) -> Option<W> {
    counts
        .into_iter()
        .try_fold(W::zero(), |acc, w| acc.checked_add(&w))
}

/// `part > fraction * total`, evaluated by cross-multiplication.
///
/// Returns `None` when an intermediate product overflows `W`.
pub fn exceeds<W: WordCount>(part: W, fraction: &Fraction<W>, total: W) -> Option<bool> {
    let lhs = part.checked_mul(fraction.denom())?;
    let rhs = fraction.numer().checked_mul(&total)?;
    Some(lhs > rhs)
}
