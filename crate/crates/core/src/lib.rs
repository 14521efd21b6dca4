//! Exact toolkit for piecewise linear functions written as linear
//! combinations of maxima of affine functions.
//!
//! The pipeline is
//!
//! 1. [`parser::parse`] a nested `max`/`min` expression,
//! 2. [`expand::expand`] it into a combination of maxima,
//! 3. [`reduce::reduce_lincomb`] every maximum down to at most `n + 1`
//!    affinely independent constituents,
//! 4. check the result with [`verify`] and compile it with [`relu::emit`].
//!
//! All arithmetic is exact on [`Rational`]s.
//!
//! ```
//! use pwlmax::{expand::expand, linalg::KernelStrategy, parser::parse, reduce::reduce_lincomb};
//!
//! let e = parse("max(x1, x2, x1 + x2, 0)", 2)?;
//! let reduced = reduce_lincomb(&expand(&e), &KernelStrategy::First)?;
//! assert!(reduced.height() <= 2);
//! # Ok::<(), pwlmax::Error>(())
//! ```

pub mod error;
pub mod expand;
pub mod linalg;
pub mod parser;
pub mod polytope;
pub mod pwl;
pub mod rational;
pub mod reduce;
pub mod relu;
pub mod verify;

pub use error::{Error, Result};
pub use pwl::{AffineFunc, LinComb, MaxTerm, Pwl};
pub use rational::Rational;

/// Guide chapters, compiled as doc-tests so the examples stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    mod expressions {}
    #[doc = include_str!("../../../book/src/expansion.md")]
    mod expansion {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/polytopes.md")]
    mod polytopes {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/relu.md")]
    mod relu {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
