//! Height reduction: rewrite every maximum as an integral combination of
//! maxima over affinely independent constituent subsets.
//!
//! For a split `R = S ⊎ T` the alternating sum
//! `Σ_{M ⊆ S} (-1)^{|M|} max(M ∪ T)` vanishes identically, so
//!
//! ```text
//! max(R) = (-1)^{|S|+1} · [ max(T) + Σ_{∅ ≠ M ⊊ S} (-1)^{|M|} max(M ∪ T) ]
//! ```
//!
//! and every maximum on the right has fewer constituents. Recursing until
//! no split exists leaves only terms whose lifted gradients are linearly
//! independent, hence at most `n + 1` constituents each.

mod probe;
mod split;
mod trace;

use std::collections::HashMap;
use std::rc::Rc;

pub use probe::{conjecture_probe, conjecture_probe_lincomb, ProbeReport};
pub use split::{lifted_gradient_matrix, split, InjectedAlpha, KernelChooser, SplitResult};
pub use trace::TraceNode;

use crate::error::Result;
use crate::pwl::{LinComb, MaxTerm};
use crate::rational::Rational;

/// Reduces one max-term. See the module docs for the recursion.
pub fn reduce_max(t: &MaxTerm, chooser: &dyn KernelChooser) -> Result<LinComb> {
    Reducer::new(chooser).reduce(t)
}

/// Like [`reduce_max`], also returning the recursion tree. The tree is
/// not shared between recurring subsets, so its size can grow
/// exponentially with the number of constituents.
pub fn reduce_max_traced(t: &MaxTerm, chooser: &dyn KernelChooser) -> Result<(LinComb, TraceNode)> {
    Reducer::traced(chooser).reduce_traced(t)
}

/// Reduces every term of `c` and recombines; integral inputs stay integral.
pub fn reduce_lincomb(c: &LinComb, chooser: &dyn KernelChooser) -> Result<LinComb> {
    let mut reducer = Reducer::new(chooser);
    let mut terms: Vec<(Rational, MaxTerm)> = Vec::new();
    for (coeff, t) in c.terms() {
        let part = reducer.reduce(t)?;
        terms.extend(part.terms().iter().map(|(k, m)| (k * coeff, m.clone())));
    }
    LinComb::new(c.dim(), terms).map(|c| c.canonicalize())
}

/// Like [`reduce_lincomb`], also returning one trace tree per input term.
pub fn reduce_lincomb_traced(c: &LinComb, chooser: &dyn KernelChooser) -> Result<(LinComb, Vec<TraceNode>)> {
    let mut reducer = Reducer::traced(chooser);
    let mut terms: Vec<(Rational, MaxTerm)> = Vec::new();
    let mut traces = Vec::with_capacity(c.len());
    for (coeff, t) in c.terms() {
        let (part, trace) = reducer.reduce_traced(t)?;
        terms.extend(part.terms().iter().map(|(k, m)| (k * coeff, m.clone())));
        traces.push(trace);
    }
    Ok((LinComb::new(c.dim(), terms)?.canonicalize(), traces))
}

/// Memoizing driver; identical constituent sets recur across the subset
/// expansion and are reduced once.
pub struct Reducer<'a> {
    chooser: &'a dyn KernelChooser,
    memo: HashMap<MaxTerm, Rc<LinComb>>,
    traces: Option<HashMap<MaxTerm, TraceNode>>,
    max_depth: usize,
}

impl<'a> Reducer<'a> {
    pub fn new(chooser: &'a dyn KernelChooser) -> Self {
        Reducer {
            chooser,
            memo: HashMap::new(),
            traces: None,
            max_depth: 0,
        }
    }

    /// A reducer that also records recursion trees.
    pub fn traced(chooser: &'a dyn KernelChooser) -> Self {
        Reducer {
            traces: Some(HashMap::new()),
            ..Reducer::new(chooser)
        }
    }

    /// Deepest recursion level reached so far (the root call is level 1).
    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn reduce(&mut self, t: &MaxTerm) -> Result<LinComb> {
        let pruned = t.prune_dominated();
        Ok(self.step(&pruned, 1)?.as_ref().clone())
    }

    /// Panics if the reducer was built with [`Reducer::new`].
    pub fn reduce_traced(&mut self, t: &MaxTerm) -> Result<(LinComb, TraceNode)> {
        assert!(self.traces.is_some(), "reducer does not record traces");
        let pruned = t.prune_dominated();
        let comb = self.step(&pruned, 1)?.as_ref().clone();
        let trace = self
            .traces
            .as_ref()
            .and_then(|m| m.get(&pruned))
            .cloned()
            .expect("trace recorded");
        Ok((comb, trace))
    }

    /// Reduces an already pruned term.
    fn step(&mut self, pruned: &MaxTerm, depth: usize) -> Result<Rc<LinComb>> {
        self.max_depth = self.max_depth.max(depth);
        if let Some(hit) = self.memo.get(pruned) {
            return Ok(hit.clone());
        }
        let parts = split(pruned.constituents(), self.chooser)?;
        if parts.is_trivial() {
            let leaf = Rc::new(LinComb::from_term(pruned.clone()));
            self.memo.insert(pruned.clone(), leaf.clone());
            if let Some(traces) = &mut self.traces {
                traces.insert(pruned.clone(), TraceNode::leaf(pruned.clone()));
            }
            return Ok(leaf);
        }

        let outer_sign: i8 = if parts.s.len() % 2 == 1 { 1 } else { -1 };
        let mut terms: Vec<(Rational, MaxTerm)> = Vec::new();
        let mut children = Vec::new();

        let mut subsets: Vec<u64> = (0..(1u64 << parts.s.len()) - 1).collect();
        subsets.sort_by_key(|m| m.count_ones());
        for mask in subsets {
            let sign = if mask.count_ones() % 2 == 0 {
                outer_sign
            } else {
                -outer_sign
            };
            let members = parts.t.iter().cloned().chain(
                parts
                    .s
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, g)| g.clone()),
            );
            let sub = MaxTerm::new(members)?.prune_dominated();
            let part = self.step(&sub, depth + 1)?;
            let factor = Rational::from_integer(sign.into());
            terms.extend(part.terms().iter().map(|(k, m)| (k * &factor, m.clone())));
            if let Some(traces) = &self.traces {
                let mut node = traces[&sub].clone();
                node.sign = sign;
                children.push(node);
            }
        }

        let comb = Rc::new(LinComb::new(pruned.dim(), terms)?.canonicalize());
        self.memo.insert(pruned.clone(), comb.clone());
        if let Some(traces) = &mut self.traces {
            let node = TraceNode {
                term: pruned.clone(),
                alpha: parts.alpha,
                sign: 1,
                children,
            };
            traces.insert(pruned.clone(), node);
        }
        Ok(comb)
    }
}

/// True when no term of `c` admits a further split.
pub fn is_reduced(c: &LinComb) -> bool {
    c.terms().iter().all(|(_, t)| {
        let pruned = t.prune_dominated();
        pruned.len() == t.len() && lifted_gradient_matrix(t.constituents()).kernel_basis().is_empty()
    })
}

#[cfg(test)]
mod tests;
