use std::fmt;

use crate::error::{Error, Result};
use crate::pwl::AffineFunc;
use crate::rational::Rational;

/// The pointwise maximum of a non-empty finite set of affine functions.
///
/// Constituents are kept sorted in canonical order without duplicates, so
/// two terms denoting the same set compare equal regardless of how they
/// were built.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaxTerm {
    constituents: Vec<AffineFunc>,
}

impl MaxTerm {
    pub fn new(constituents: impl IntoIterator<Item = AffineFunc>) -> Result<Self> {
        let mut constituents: Vec<AffineFunc> = constituents.into_iter().collect();
        let n = constituents.first().ok_or(Error::EmptyMaxTerm)?.dim();
        for g in &constituents {
            g.check_dim(n)?;
        }
        constituents.sort();
        constituents.dedup();
        Ok(MaxTerm { constituents })
    }

    /// Builds from constituents already known to share a dimension.
    pub(crate) fn from_sorted_unchecked(constituents: Vec<AffineFunc>) -> Self {
        debug_assert!(!constituents.is_empty());
        debug_assert!(constituents.windows(2).all(|w| w[0] < w[1]));
        MaxTerm { constituents }
    }

    pub fn singleton(f: AffineFunc) -> Self {
        MaxTerm { constituents: vec![f] }
    }

    pub fn constituents(&self) -> &[AffineFunc] {
        &self.constituents
    }

    pub fn len(&self) -> usize {
        self.constituents.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.constituents[0].dim()
    }

    pub fn is_affine(&self) -> bool {
        self.constituents.len() == 1
    }

    /// True when every constituent is linear (positively homogeneous term).
    pub fn is_homogeneous(&self) -> bool {
        self.constituents.iter().all(AffineFunc::is_linear)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        let mut best: Option<Rational> = None;
        for g in &self.constituents {
            let v = g.eval(x)?;
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
        Ok(best.expect("max-term is never empty"))
    }

    /// Among constituents sharing a gradient keeps only the largest
    /// constant. Pointwise equal to `self`.
    pub fn prune_dominated(&self) -> MaxTerm {
        // Sorted order groups equal gradients with constants ascending, so
        // the last member of each run dominates the rest.
        let mut kept: Vec<AffineFunc> = Vec::with_capacity(self.constituents.len());
        for g in &self.constituents {
            if let Some(last) = kept.last_mut() {
                if last.gradient() == g.gradient() {
                    *last = g.clone();
                    continue;
                }
            }
            kept.push(g.clone());
        }
        MaxTerm { constituents: kept }
    }

    /// `max(A) + max(B) = max{a + b}`: the term of all pairwise sums.
    pub fn pairwise_sum(&self, other: &MaxTerm) -> Result<MaxTerm> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        MaxTerm::new(
            self.constituents
                .iter()
                .flat_map(|a| other.constituents.iter().map(move |b| a + b)),
        )
    }

    /// Scales every constituent by a positive factor (`c·max(A) = max(c·A)` for `c > 0`).
    pub fn scale_positive(&self, factor: &Rational) -> MaxTerm {
        assert!(*factor > num_traits::Zero::zero(), "factor must be positive");
        MaxTerm::from_sorted_unchecked(self.constituents.iter().map(|g| g.scale(factor)).collect())
    }

    /// Sub-term on the given constituent positions.
    pub fn select(&self, indices: &[usize]) -> MaxTerm {
        let mut picked: Vec<AffineFunc> = indices.iter().map(|&i| self.constituents[i].clone()).collect();
        picked.sort();
        picked.dedup();
        MaxTerm::from_sorted_unchecked(picked)
    }
}

impl fmt::Display for MaxTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "max(")?;
        for (i, g) in self.constituents.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn aff(g: &[i64], c: i64) -> AffineFunc {
        AffineFunc::from_ints(g, c).unwrap()
    }

    #[test]
    fn evaluates_pointwise_max() {
        let t = MaxTerm::new([aff(&[1, 0], 0), aff(&[1, 1], 0)]).unwrap();
        assert_eq!(t.eval(&[int(2), int(3)]).unwrap(), int(5));
    }

    #[test]
    fn rejects_empty_and_mixed_dimensions() {
        assert_eq!(MaxTerm::new(Vec::new()), Err(Error::EmptyMaxTerm));
        assert!(MaxTerm::new([aff(&[1], 0), aff(&[1, 2], 0)]).is_err());
    }

    #[test]
    fn pruning_keeps_largest_constant() {
        let g = aff(&[2, -1], 0);
        let t = MaxTerm::new((0..4).map(|i| g.shift(&int(i)))).unwrap();
        assert_eq!(t.prune_dominated(), MaxTerm::singleton(g.shift(&int(3))));

        let distinct = MaxTerm::new([aff(&[1, 0], 0), aff(&[0, 1], 0)]).unwrap();
        assert_eq!(distinct.prune_dominated(), distinct);

        let dup = MaxTerm::new([aff(&[1, 0], 1), aff(&[1, 0], 1)]).unwrap();
        assert_eq!(dup.len(), 1);
        assert_eq!(dup.prune_dominated(), dup);
    }

    #[test]
    fn order_independent_construction() {
        let a = aff(&[1, 0], 0);
        let b = aff(&[0, 1], 2);
        let c = aff(&[-1, 3], -1);
        let t1 = MaxTerm::new([a.clone(), b.clone(), c.clone()]).unwrap();
        let t2 = MaxTerm::new([c, a, b]).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn pairwise_sum_matches_sum_of_values() {
        let s = MaxTerm::new([aff(&[1, -1], 0), aff(&[3, 1], 0)]).unwrap();
        let t = MaxTerm::new([aff(&[0, 0], 0), aff(&[-1, -1], 0)]).unwrap();
        let st = s.pairwise_sum(&t).unwrap();
        let x = [int(-2), int(5)];
        assert_eq!(st.eval(&x).unwrap(), s.eval(&x).unwrap() + t.eval(&x).unwrap());
    }
}
