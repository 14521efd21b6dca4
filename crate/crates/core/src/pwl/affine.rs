use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// An affine map `x ↦ ⟨gradient, x⟩ + constant` on ℝⁿ.
///
/// The derived ordering is lexicographic on `(gradient, constant)` and is
/// the canonical order used for constituents everywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineFunc {
    gradient: Vec<Rational>,
    constant: Rational,
}

impl AffineFunc {
    pub fn new(gradient: Vec<Rational>, constant: Rational) -> Result<Self> {
        if gradient.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(AffineFunc { gradient, constant })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(gradient: &[i64], constant: i64) -> Result<Self> {
        Self::new(
            gradient.iter().map(|&g| crate::rational::int(g)).collect(),
            crate::rational::int(constant),
        )
    }

    pub fn zero(n: usize) -> Self {
        Self::constant_fn(n, Rational::zero())
    }

    pub fn constant_fn(n: usize, constant: Rational) -> Self {
        assert!(n > 0, "dimension must be positive");
        AffineFunc {
            gradient: vec![Rational::zero(); n],
            constant,
        }
    }

    /// The coordinate function `x_{index+1}` (zero based `index`).
    pub fn variable(n: usize, index: usize) -> Self {
        let mut f = Self::zero(n);
        f.gradient[index] = Rational::one();
        f
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn gradient(&self) -> &[Rational] {
        &self.gradient
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn is_linear(&self) -> bool {
        self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.gradient.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self
            .gradient
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (g, xi)| acc + g * xi))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        AffineFunc {
            gradient: self.gradient.iter().map(|g| g * factor).collect(),
            constant: &self.constant * factor,
        }
    }

    pub fn shift(&self, delta: &Rational) -> Self {
        AffineFunc {
            gradient: self.gradient.clone(),
            constant: &self.constant + delta,
        }
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                found: self.dim(),
            })
        }
    }
}

impl Add for &AffineFunc {
    type Output = AffineFunc;

    fn add(self, rhs: &AffineFunc) -> AffineFunc {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in affine sum");
        AffineFunc {
            gradient: self.gradient.iter().zip(&rhs.gradient).map(|(a, b)| a + b).collect(),
            constant: &self.constant + &rhs.constant,
        }
    }
}

impl Sub for &AffineFunc {
    type Output = AffineFunc;

    fn sub(self, rhs: &AffineFunc) -> AffineFunc {
        self + &(-rhs)
    }
}

impl Neg for &AffineFunc {
    type Output = AffineFunc;

    fn neg(self) -> AffineFunc {
        AffineFunc {
            gradient: self.gradient.iter().map(|g| -g).collect(),
            constant: -&self.constant,
        }
    }
}

/// Writes `c*x_i` style terms joined with `+`/`-`; a lone zero prints as `0`.
impl fmt::Display for AffineFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut write_term = |f: &mut fmt::Formatter<'_>, coeff: &Rational, var: Option<usize>| -> fmt::Result {
            let magnitude = coeff.abs();
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match var {
                Some(i) if magnitude.is_one() => write!(f, "x{}", i + 1),
                Some(i) => write!(f, "{}*x{}", format_rational(&magnitude), i + 1),
                None => write!(f, "{}", format_rational(&magnitude)),
            }
        };
        for (i, g) in self.gradient.iter().enumerate() {
            if !g.is_zero() {
                write_term(f, g, Some(i))?;
            }
        }
        if !self.constant.is_zero() {
            write_term(f, &self.constant, None)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn g1() -> AffineFunc {
        AffineFunc::from_ints(&[3, -4], 1).unwrap()
    }

    #[test]
    fn evaluates_exactly() {
        assert_eq!(g1().eval(&[int(1), int(1)]).unwrap(), int(0));
        assert_eq!(AffineFunc::zero(3).eval(&[rat(1, 3), int(9), int(-2)]).unwrap(), int(0));
        let c = AffineFunc::constant_fn(2, rat(7, 5));
        assert_eq!(c.eval(&[int(100), rat(-3, 4)]).unwrap(), rat(7, 5));
    }

    #[test]
    fn rejects_wrong_point_length() {
        assert_eq!(
            g1().eval(&[int(1)]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn displays_canonically() {
        assert_eq!(g1().to_string(), "3*x1 - 4*x2 + 1");
        assert_eq!(AffineFunc::zero(2).to_string(), "0");
        assert_eq!(AffineFunc::from_ints(&[-1, 0], -9).unwrap().to_string(), "-x1 - 9");
        let half = AffineFunc::new(vec![rat(1, 2), int(0)], int(0)).unwrap();
        assert_eq!(half.to_string(), "1/2*x1");
    }

    #[test]
    fn order_is_gradient_first() {
        let a = AffineFunc::from_ints(&[0, 1], 5).unwrap();
        let b = AffineFunc::from_ints(&[1, 0], -5).unwrap();
        assert!(a < b);
        assert!(b < b.shift(&int(1)));
    }
}
