//! From nested expressions to linear combinations of maxima.
//!
//! [`to_maxmin`] brings an expression into max-of-min normal form by
//! structural rules (distributivity of `min` over `max`, of `+` over both,
//! and `-max = min(-·)`). [`to_lincomb`] then removes the inner minima with
//! the inclusion–exclusion identity
//! `max(X, min(u, B')) = max(X, u) + max(X, min B') - max(X, u, min B')`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::parser::ExprNode;
use crate::pwl::{AffineFunc, LinComb, MaxTerm};
use crate::rational::Rational;

type Block = BTreeSet<AffineFunc>;

/// `max` over blocks of `min` over each block.
///
/// Blocks are kept sorted and absorption-reduced: no block contains
/// another (a superset block has the smaller minimum and never wins).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaxMinForm {
    n: usize,
    blocks: Vec<Block>,
}

impl MaxMinForm {
    pub fn new(n: usize, blocks: impl IntoIterator<Item = Block>) -> MaxMinForm {
        let mut blocks: Vec<Block> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        assert!(!blocks.is_empty(), "max-min form needs a block");
        blocks.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        blocks.dedup();
        let mut kept: Vec<Block> = Vec::with_capacity(blocks.len());
        // Sorted by size, so any absorbing subset comes first.
        for b in blocks {
            if !kept.iter().any(|k| k.is_subset(&b)) {
                kept.push(b);
            }
        }
        kept.sort();
        MaxMinForm { n, blocks: kept }
    }

    pub fn affine(f: AffineFunc) -> MaxMinForm {
        MaxMinForm {
            n: f.dim(),
            blocks: vec![BTreeSet::from([f])],
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: &[Rational]) -> crate::Result<Rational> {
        let mut best: Option<Rational> = None;
        for b in &self.blocks {
            let mut low: Option<Rational> = None;
            for g in b {
                let v = g.eval(x)?;
                if low.as_ref().is_none_or(|l| v < *l) {
                    low = Some(v);
                }
            }
            let low = low.expect("blocks are non-empty");
            if best.as_ref().is_none_or(|b| low > *b) {
                best = Some(low);
            }
        }
        Ok(best.expect("forms are non-empty"))
    }

    /// Σ(|block| - 1); zero exactly when the form is a single max-term.
    fn measure(&self) -> usize {
        self.blocks.iter().map(|b| b.len() - 1).sum()
    }

    fn concat(forms: impl IntoIterator<Item = MaxMinForm>) -> MaxMinForm {
        let forms: Vec<MaxMinForm> = forms.into_iter().collect();
        let n = forms[0].n;
        MaxMinForm::new(n, forms.into_iter().flat_map(|f| f.blocks))
    }

    /// `min` of forms: one block from each, united.
    fn meet(self, other: MaxMinForm) -> MaxMinForm {
        let n = self.n;
        let mut out = Vec::with_capacity(self.blocks.len() * other.blocks.len());
        for a in &self.blocks {
            for b in &other.blocks {
                out.push(a.union(b).cloned().collect());
            }
        }
        MaxMinForm::new(n, out)
    }

    /// Sum of forms: pairwise sums of constituents for each pair of blocks.
    fn plus(self, other: MaxMinForm) -> MaxMinForm {
        let n = self.n;
        let mut out = Vec::with_capacity(self.blocks.len() * other.blocks.len());
        for a in &self.blocks {
            for b in &other.blocks {
                out.push(a.iter().flat_map(|u| b.iter().map(move |v| u + v)).collect());
            }
        }
        MaxMinForm::new(n, out)
    }

    fn scale(self, c: &Rational) -> MaxMinForm {
        let n = self.n;
        if c.is_zero() {
            return MaxMinForm::affine(AffineFunc::zero(n));
        }
        if c.is_positive() {
            return MaxMinForm::new(n, self.blocks.iter().map(|b| b.iter().map(|g| g.scale(c)).collect()));
        }
        // c < 0 turns max-of-min into min-of-max; redistribute over all
        // choice functions picking one constituent from every block.
        let mut choices: Vec<Block> = vec![Block::new()];
        for b in &self.blocks {
            let mut next = Vec::with_capacity(choices.len() * b.len());
            for partial in &choices {
                for g in b {
                    let mut grown = partial.clone();
                    grown.insert(g.scale(c));
                    next.push(grown);
                }
            }
            // Absorption keeps the intermediate product small.
            choices = MaxMinForm::new(n, next).blocks;
        }
        MaxMinForm::new(n, choices)
    }
}

/// Max-of-min normal form of an expression.
pub fn to_maxmin(e: &ExprNode) -> MaxMinForm {
    match e {
        ExprNode::Affine(f) => MaxMinForm::affine(f.clone()),
        ExprNode::Max(args) => MaxMinForm::concat(args.iter().map(to_maxmin)),
        ExprNode::Min(args) => args
            .iter()
            .map(to_maxmin)
            .reduce(MaxMinForm::meet)
            .expect("min has arguments"),
        ExprNode::Sum(args) => args
            .iter()
            .map(to_maxmin)
            .reduce(MaxMinForm::plus)
            .expect("sum has arguments"),
        ExprNode::Scale(c, child) => to_maxmin(child).scale(c),
    }
}

/// Removes every inner minimum by inclusion–exclusion.
///
/// The first non-singleton block (canonical order) loses its smallest
/// constituent `u` at each step. Forms are processed in decreasing
/// `Σ(|block| - 1)` so that each intermediate form is rewritten exactly once
/// with its accumulated coefficient.
pub fn to_lincomb(m: &MaxMinForm) -> LinComb {
    let mut pending: BTreeMap<(usize, MaxMinForm), Rational> = BTreeMap::new();
    pending.insert((m.measure(), m.clone()), Rational::one());
    let mut terms: Vec<(Rational, MaxTerm)> = Vec::new();
    while let Some(((measure, form), coeff)) = pending.pop_last() {
        if coeff.is_zero() {
            continue;
        }
        if measure == 0 {
            let constituents = form.blocks.into_iter().flatten().collect::<Vec<_>>();
            terms.push((coeff, MaxTerm::new(constituents).expect("non-empty form")));
            continue;
        }
        let (idx, block) = form
            .blocks
            .iter()
            .enumerate()
            .find(|(_, b)| b.len() > 1)
            .expect("positive measure has a non-singleton block");
        let mut rest_of_block = block.clone();
        let u = rest_of_block.pop_first().expect("non-empty");
        let others: Vec<Block> = form
            .blocks
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, b)| b.clone())
            .collect();
        let singleton = Block::from([u]);
        let rewrites = [
            (Rational::one(), vec![singleton.clone()]),
            (Rational::one(), vec![rest_of_block.clone()]),
            (-Rational::one(), vec![singleton, rest_of_block]),
        ];
        for (sign, extra) in rewrites {
            let next = MaxMinForm::new(form.n, others.iter().cloned().chain(extra));
            *pending.entry((next.measure(), next)).or_insert_with(Rational::zero) += &coeff * sign;
        }
    }
    LinComb::new(m.n, terms).expect("consistent dimension").canonicalize()
}

/// `to_lincomb(to_maxmin(e))`, canonicalized.
pub fn expand(e: &ExprNode) -> LinComb {
    to_lincomb(&to_maxmin(e))
}

/// Linear-aware lowering: sums and scalings become sums and scalings of
/// combinations, and only `max`/`min` subtrees go through [`expand`].
///
/// Agrees with [`expand`] on expressions whose root is `max` or `min`,
/// and avoids the distributive blow-up when the input is already a
/// combination like `max(..) - 2*max(..)`.
pub fn lower(e: &ExprNode) -> LinComb {
    match e {
        ExprNode::Affine(f) => LinComb::from_affine(f.clone()),
        ExprNode::Sum(args) => args
            .iter()
            .map(lower)
            .reduce(|a, b| a.add(&b).expect("consistent dimension"))
            .expect("sum has arguments"),
        ExprNode::Scale(c, child) => lower(child).scale(c).canonicalize(),
        ExprNode::Max(_) | ExprNode::Min(_) => expand(e),
    }
}

/// Summand statistics reported by `expand`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ExpansionStats {
    pub summands: usize,
    pub height: usize,
    /// `histogram[k]` = number of terms with exactly `k` constituents.
    pub constituent_histogram: BTreeMap<usize, usize>,
}

impl ExpansionStats {
    pub fn of(c: &LinComb) -> ExpansionStats {
        let mut constituent_histogram = BTreeMap::new();
        for (_, t) in c.terms() {
            *constituent_histogram.entry(t.len()).or_insert(0) += 1;
        }
        ExpansionStats {
            summands: c.len(),
            height: c.height(),
            constituent_histogram,
        }
    }

    pub fn at_least(&self, k: usize) -> usize {
        self.constituent_histogram.range(k..).map(|(_, v)| v).sum()
    }
}
