use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::pwl::{AffineFunc, MaxTerm};
use crate::rational::{format_rational, is_integer, Rational};

/// `x ↦ Σ coeffᵢ · maxᵢ(x)` over ℝⁿ.
///
/// A freshly built combination may hold repeated terms or zero
/// coefficients; [`LinComb::canonicalize`] produces the canonical form
/// (sorted by term, merged, zero-free) that all algorithms return.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinComb {
    n: usize,
    terms: Vec<(Rational, MaxTerm)>,
}

impl LinComb {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (Rational, MaxTerm)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let terms: Vec<(Rational, MaxTerm)> = terms.into_iter().collect();
        for (_, t) in &terms {
            if t.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t.dim(),
                });
            }
        }
        Ok(LinComb { n, terms })
    }

    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        LinComb { n, terms: Vec::new() }
    }

    /// `1 · max(term)`.
    pub fn from_term(term: MaxTerm) -> Self {
        LinComb {
            n: term.dim(),
            terms: vec![(Rational::one(), term)],
        }
    }

    pub fn from_affine(f: AffineFunc) -> Self {
        Self::from_term(MaxTerm::singleton(f))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Rational, MaxTerm)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        let mut total = Rational::zero();
        for (c, t) in &self.terms {
            total += c * t.eval(x)?;
        }
        Ok(total)
    }

    /// Merges equal terms, drops zero coefficients and sorts by term.
    pub fn canonicalize(&self) -> LinComb {
        let mut merged: BTreeMap<&MaxTerm, Rational> = BTreeMap::new();
        for (c, t) in &self.terms {
            *merged.entry(t).or_insert_with(Rational::zero) += c;
        }
        LinComb {
            n: self.n,
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t, c)| (c, t.clone()))
                .collect(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.iter().all(|(c, _)| !c.is_zero()) && self.terms.windows(2).all(|w| w[0].1 < w[1].1)
    }

    /// Height of this representation: largest constituent count minus one.
    /// This bounds the height of the function from above; an empty
    /// combination has height 0.
    pub fn height(&self) -> usize {
        self.terms.iter().map(|(_, t)| t.len()).max().map_or(0, |k| k - 1)
    }

    pub fn scale(&self, factor: &Rational) -> LinComb {
        LinComb {
            n: self.n,
            terms: self.terms.iter().map(|(c, t)| (c * factor, t.clone())).collect(),
        }
    }

    /// Concatenates terms and canonicalizes.
    pub fn add(&self, other: &LinComb) -> Result<LinComb> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Ok(LinComb { n: self.n, terms }.canonicalize())
    }

    pub fn sub(&self, other: &LinComb) -> Result<LinComb> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.iter().all(|(c, _)| is_integer(c))
    }

    /// Every affine function appearing in some term.
    pub fn constituents(&self) -> BTreeSet<AffineFunc> {
        self.terms
            .iter()
            .flat_map(|(_, t)| t.constituents().iter().cloned())
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.iter().all(|(_, t)| t.is_homogeneous())
    }

    /// Number of terms whose constituent count is at least `k`.
    pub fn count_terms_with_at_least(&self, k: usize) -> usize {
        self.terms.iter().filter(|(_, t)| t.len() >= k).count()
    }
}

/// `max(...) - 2*max(...) + 1/2*max(...)`; the empty combination prints `0`.
impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, t)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            match (i == 0, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if !magnitude.is_one() {
                write!(f, "{}*", format_rational(&magnitude))?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn aff(g: &[i64], c: i64) -> AffineFunc {
        AffineFunc::from_ints(g, c).unwrap()
    }

    fn three_relus() -> LinComb {
        let t = |g: &[i64], c: i64| MaxTerm::new([aff(g, c), aff(&[0, 0], 0)]).unwrap();
        LinComb::new(
            2,
            [
                (int(4), t(&[-1, 3], 2)),
                (int(-5), t(&[2, 0], -3)),
                (int(6), t(&[0, 5], 1)),
                (int(8), MaxTerm::singleton(aff(&[0, 0], 1))),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluates_three_relu_combination_at_origin() {
        assert_eq!(three_relus().eval(&[int(0), int(0)]).unwrap(), int(22));
    }

    #[test]
    fn empty_combination_is_zero() {
        assert_eq!(LinComb::zero(3).eval(&[int(1), int(2), int(3)]).unwrap(), int(0));
        assert_eq!(LinComb::zero(3).height(), 0);
        assert_eq!(LinComb::zero(2).to_string(), "0");
    }

    #[test]
    fn canonicalize_merges_and_cancels() {
        let m = MaxTerm::new([aff(&[1, 0], 0), aff(&[0, 1], 0)]).unwrap();
        let merged = LinComb::new(2, [(int(1), m.clone()), (int(2), m.clone())]).unwrap();
        assert_eq!(merged.canonicalize().terms(), &[(int(3), m.clone())]);

        let cancelled = LinComb::new(2, [(int(1), m.clone()), (int(-1), m)]).unwrap();
        assert!(cancelled.canonicalize().is_empty());
    }

    #[test]
    fn canonicalize_keeps_distinct_singletons() {
        let a = MaxTerm::singleton(aff(&[0, 1], 0));
        let b = MaxTerm::singleton(aff(&[1, 0], 0));
        let c = LinComb::new(2, [(int(1), b.clone()), (int(1), a.clone())]).unwrap();
        assert_eq!(c.canonicalize().terms(), &[(int(1), a), (int(1), b)]);
    }

    #[test]
    fn height_counts_constituents() {
        assert_eq!(LinComb::from_affine(aff(&[1, 1], 0)).height(), 0);
        let four = MaxTerm::new((0..4).map(|i| aff(&[i, -i], i))).unwrap();
        assert_eq!(LinComb::from_term(four).height(), 3);
    }

    #[test]
    fn display_signs() {
        let c = three_relus().canonicalize();
        let text = c.to_string();
        assert!(text.contains("- 5*max(0, 2*x1 - 3)"), "{text}");
        let half = LinComb::new(1, [(rat(-1, 2), MaxTerm::singleton(aff(&[1], 0)))]).unwrap();
        assert_eq!(half.to_string(), "-1/2*max(x1)");
    }
}
