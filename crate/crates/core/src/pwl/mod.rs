//! Exact domain types: affine functions, max-terms and linear
//! combinations of maxima.

mod affine;
mod json;
mod lin_comb;
mod max_term;

pub use affine::AffineFunc;
pub use lin_comb::LinComb;
pub use max_term::MaxTerm;

use crate::error::Result;
use crate::rational::Rational;

/// Anything that evaluates exactly to a rational on ℝⁿ.
pub trait Pwl {
    fn dim(&self) -> usize;
    fn eval_at(&self, x: &[Rational]) -> Result<Rational>;
}

impl Pwl for AffineFunc {
    fn dim(&self) -> usize {
        AffineFunc::dim(self)
    }
    fn eval_at(&self, x: &[Rational]) -> Result<Rational> {
        self.eval(x)
    }
}

impl Pwl for MaxTerm {
    fn dim(&self) -> usize {
        MaxTerm::dim(self)
    }
    fn eval_at(&self, x: &[Rational]) -> Result<Rational> {
        self.eval(x)
    }
}

impl Pwl for LinComb {
    fn dim(&self) -> usize {
        LinComb::dim(self)
    }
    fn eval_at(&self, x: &[Rational]) -> Result<Rational> {
        self.eval(x)
    }
}
