use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::pwl::{AffineFunc, LinComb, MaxTerm, Pwl};
use crate::rational::{format_rational, Rational};

/// Nested min/max/sum/scale expression over affine leaves.
///
/// Build through [`ExprNode::sum`], [`ExprNode::scale`], [`ExprNode::max`]
/// and [`ExprNode::min`]: they fold affine subtrees into single leaves the
/// same way the parser does, which is what makes printing and reparsing
/// an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprNode {
    Affine(AffineFunc),
    Max(Vec<ExprNode>),
    Min(Vec<ExprNode>),
    Sum(Vec<ExprNode>),
    Scale(Rational, Box<ExprNode>),
}

impl ExprNode {
    pub fn affine(f: AffineFunc) -> ExprNode {
        ExprNode::Affine(f)
    }

    pub fn max(args: Vec<ExprNode>) -> Result<ExprNode> {
        check_args(&args, "max")?;
        Ok(ExprNode::Max(args))
    }

    pub fn min(args: Vec<ExprNode>) -> Result<ExprNode> {
        check_args(&args, "min")?;
        Ok(ExprNode::Min(args))
    }

    /// Flattens nested sums and merges all affine summands into one leading
    /// leaf (dropped when zero and other summands remain).
    pub fn sum(args: Vec<ExprNode>) -> Result<ExprNode> {
        check_args(&args, "sum")?;
        let n = args[0].dim();
        let mut affine = AffineFunc::zero(n);
        let mut rest = Vec::new();
        let mut pending = args;
        pending.reverse();
        while let Some(arg) = pending.pop() {
            if arg.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: arg.dim(),
                });
            }
            match arg {
                ExprNode::Affine(f) => affine = &affine + &f,
                ExprNode::Sum(inner) => pending.extend(inner.into_iter().rev()),
                other => rest.push(other),
            }
        }
        if rest.is_empty() {
            return Ok(ExprNode::Affine(affine));
        }
        if !(affine.is_constant() && affine.constant().is_zero()) {
            rest.insert(0, ExprNode::Affine(affine));
        }
        Ok(if rest.len() == 1 {
            rest.pop().unwrap()
        } else {
            ExprNode::Sum(rest)
        })
    }

    pub fn scale(factor: Rational, child: ExprNode) -> ExprNode {
        if factor.is_one() {
            return child;
        }
        if factor.is_zero() {
            return ExprNode::Affine(AffineFunc::zero(child.dim()));
        }
        match child {
            ExprNode::Affine(f) => ExprNode::Affine(f.scale(&factor)),
            ExprNode::Scale(inner, grandchild) => ExprNode::scale(factor * inner, *grandchild),
            other => ExprNode::Scale(factor, Box::new(other)),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ExprNode::Affine(f) => f.dim(),
            ExprNode::Max(args) | ExprNode::Min(args) | ExprNode::Sum(args) => args[0].dim(),
            ExprNode::Scale(_, child) => child.dim(),
        }
    }

    /// Direct recursive evaluation; the reference semantics every
    /// transformation is checked against.
    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        match self {
            ExprNode::Affine(f) => f.eval(x),
            ExprNode::Max(args) => fold_values(args, x, |a, b| if b > a { b } else { a }),
            ExprNode::Min(args) => fold_values(args, x, |a, b| if b < a { b } else { a }),
            ExprNode::Sum(args) => fold_values(args, x, |a, b| a + b),
            ExprNode::Scale(c, child) => Ok(c * child.eval(x)?),
        }
    }

    /// Rebuilds the tree through the folding constructors.
    pub fn canonical(&self) -> ExprNode {
        match self {
            ExprNode::Affine(f) => ExprNode::Affine(f.clone()),
            ExprNode::Max(args) => ExprNode::Max(args.iter().map(ExprNode::canonical).collect()),
            ExprNode::Min(args) => ExprNode::Min(args.iter().map(ExprNode::canonical).collect()),
            ExprNode::Sum(args) => ExprNode::sum(args.iter().map(ExprNode::canonical).collect())
                .expect("sum nodes are non-empty and dimension-consistent"),
            ExprNode::Scale(c, child) => ExprNode::scale(c.clone(), child.canonical()),
        }
    }

    /// Every affine leaf, left to right.
    pub fn leaves(&self) -> Vec<&AffineFunc> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                ExprNode::Affine(f) => out.push(f),
                ExprNode::Max(args) | ExprNode::Min(args) | ExprNode::Sum(args) => stack.extend(args.iter().rev()),
                ExprNode::Scale(_, child) => stack.push(child),
            }
        }
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            ExprNode::Affine(_) => 0,
            ExprNode::Max(args) | ExprNode::Min(args) | ExprNode::Sum(args) => {
                1 + args.iter().map(ExprNode::depth).max().unwrap_or(0)
            }
            ExprNode::Scale(_, child) => 1 + child.depth(),
        }
    }

    /// Reads the expression as a linear combination of maxima when it
    /// already has that shape (sums and scalings of `max` of affine
    /// leaves, or affine leaves).
    pub fn as_lincomb(&self) -> Result<LinComb> {
        let n = self.dim();
        Ok(match self {
            ExprNode::Affine(f) => LinComb::from_affine(f.clone()),
            ExprNode::Max(args) | ExprNode::Min(args) if args.len() == 1 => args[0].as_lincomb()?,
            ExprNode::Max(args) => {
                let leaves = args
                    .iter()
                    .map(|a| match a {
                        ExprNode::Affine(f) => Ok(f.clone()),
                        _ => Err(Error::NotALinComb),
                    })
                    .collect::<Result<Vec<_>>>()?;
                LinComb::from_term(MaxTerm::new(leaves)?)
            }
            ExprNode::Min(_) => return Err(Error::NotALinComb),
            ExprNode::Sum(args) => {
                let mut total = LinComb::zero(n);
                for a in args {
                    total = total.add(&a.as_lincomb()?)?;
                }
                total
            }
            ExprNode::Scale(c, child) => child.as_lincomb()?.scale(c),
        }
        .canonicalize())
    }

    /// `Σ cᵢ · max(Aᵢ)` as an expression tree.
    pub fn from_lincomb(c: &LinComb) -> ExprNode {
        let terms: Vec<ExprNode> = c
            .terms()
            .iter()
            .map(|(coeff, t)| {
                let max = ExprNode::Max(t.constituents().iter().cloned().map(ExprNode::Affine).collect());
                ExprNode::scale(coeff.clone(), max)
            })
            .collect();
        if terms.is_empty() {
            ExprNode::Affine(AffineFunc::zero(c.dim()))
        } else {
            ExprNode::sum(terms).expect("non-empty and dimension-consistent")
        }
    }
}

fn check_args(args: &[ExprNode], func: &'static str) -> Result<()> {
    let first = args.first().ok_or(Error::Arity { func, pos: 0 })?;
    let n = first.dim();
    for a in args {
        if a.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.dim(),
            });
        }
    }
    Ok(())
}

fn fold_values(
    args: &[ExprNode],
    x: &[Rational],
    combine: impl Fn(Rational, Rational) -> Rational,
) -> Result<Rational> {
    let mut iter = args.iter();
    let mut acc = iter.next().expect("non-empty argument list").eval(x)?;
    for a in iter {
        acc = combine(acc, a.eval(x)?);
    }
    Ok(acc)
}

impl Pwl for ExprNode {
    fn dim(&self) -> usize {
        ExprNode::dim(self)
    }
    fn eval_at(&self, x: &[Rational]) -> Result<Rational> {
        self.eval(x)
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprNode::Affine(a) => write!(f, "{a}"),
            ExprNode::Max(args) => write_call(f, "max", args),
            ExprNode::Min(args) => write_call(f, "min", args),
            ExprNode::Sum(args) => {
                for (i, a) in args.iter().enumerate() {
                    match a {
                        ExprNode::Scale(c, child) if c.is_negative() => {
                            write!(f, "{}", if i == 0 { "-" } else { " - " })?;
                            write_scaled(f, &c.abs(), child)?;
                        }
                        _ if i == 0 => write!(f, "{a}")?,
                        // Only reachable for non-canonical trees.
                        ExprNode::Affine(_) => write!(f, " + ({a})")?,
                        _ => write!(f, " + {a}")?,
                    }
                }
                Ok(())
            }
            ExprNode::Scale(c, child) => {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                write_scaled(f, &c.abs(), child)
            }
        }
    }
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, args: &[ExprNode]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, ")")
}

fn write_scaled(f: &mut fmt::Formatter<'_>, magnitude: &Rational, child: &ExprNode) -> fmt::Result {
    if !magnitude.is_one() {
        write!(f, "{}*", format_rational(magnitude))?;
    }
    match child {
        ExprNode::Max(_) | ExprNode::Min(_) => write!(f, "{child}"),
        _ => write!(f, "({child})"),
    }
}
