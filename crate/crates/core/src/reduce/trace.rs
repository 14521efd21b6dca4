use std::fmt::Write as _;

use serde::Serialize;

use crate::linalg::KernelVector;
use crate::pwl::{AffineFunc, MaxTerm};

/// One call of the reduction recursion.
///
/// `sign` is the coefficient (±1) with which this node's result enters its
/// parent's expansion; roots carry `+1`. A node is a leaf exactly when no
/// split vector was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceNode {
    pub term: MaxTerm,
    pub alpha: Option<KernelVector>,
    pub sign: i8,
    pub children: Vec<TraceNode>,
}

impl TraceNode {
    pub fn leaf(term: MaxTerm) -> TraceNode {
        TraceNode {
            term,
            alpha: None,
            sign: 1,
            children: Vec::new(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.alpha.is_none()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(TraceNode::depth).max().unwrap_or(0)
    }

    /// Leaves with their accumulated sign (product of signs on the path).
    pub fn signed_leaves(&self) -> Vec<(i8, &MaxTerm)> {
        let mut out = Vec::new();
        self.collect_leaves(self.sign, &mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, sign: i8, out: &mut Vec<(i8, &'a MaxTerm)>) {
        if self.is_leaf() {
            out.push((sign, &self.term));
        }
        for c in &self.children {
            c.collect_leaves(sign * c.sign, out);
        }
    }

    /// Constituent positions of `term` sorted by their index in `names`
    /// (unknown constituents last).
    fn name_order(&self, names: &[AffineFunc]) -> Vec<(Option<usize>, usize)> {
        let mut order: Vec<(Option<usize>, usize)> = self
            .term
            .constituents()
            .iter()
            .enumerate()
            .map(|(pos, g)| (names.iter().position(|h| h == g), pos))
            .collect();
        order.sort_by_key(|(name, pos)| (name.unwrap_or(usize::MAX), *pos));
        order
    }

    /// `m_{ij…}` with 1-based positions in `names`. Constituents missing
    /// from `names` print as `?`.
    pub fn label(&self, names: &[AffineFunc]) -> String {
        let sep = if names.len() >= 10 { "," } else { "" };
        let idx: Vec<String> = self
            .name_order(names)
            .iter()
            .map(|(name, _)| name.map_or("?".to_string(), |i| (i + 1).to_string()))
            .collect();
        format!("m_{}", idx.join(sep))
    }

    /// α listed in the same order as [`TraceNode::label`]'s indices.
    pub fn alpha_in_name_order(&self, names: &[AffineFunc]) -> Option<Vec<String>> {
        let alpha = self.alpha.as_ref()?;
        Some(
            self.name_order(names)
                .iter()
                .map(|(_, pos)| alpha.entries()[*pos].to_string())
                .collect(),
        )
    }

    /// Graphviz rendering of one or more trees. Constituents are numbered
    /// by their position in `names` (defaults to each root's own
    /// canonical order).
    pub fn to_dot(roots: &[TraceNode], names: Option<&[AffineFunc]>) -> String {
        let mut out = String::from("digraph reduce_max {\n  node [shape=box, fontname=\"monospace\"];\n");
        let mut next_id = 0usize;
        for (r, root) in roots.iter().enumerate() {
            let own = root.term.constituents().to_vec();
            let names = names.unwrap_or(&own);
            for (i, g) in names.iter().enumerate() {
                let _ = writeln!(out, "  // tree {r}: g{} = {g}", i + 1);
            }
            root.write_dot(&mut out, names, &mut next_id, None);
        }
        out.push_str("}\n");
        out
    }

    fn write_dot(&self, out: &mut String, names: &[AffineFunc], next_id: &mut usize, parent: Option<usize>) {
        let id = *next_id;
        *next_id += 1;
        let prefix = if self.sign < 0 { "-" } else { "" };
        let mut label = format!("{prefix}{}", self.label(names));
        if let Some(alpha) = self.alpha_in_name_order(names) {
            let _ = write!(label, "\\nα=({})", alpha.join(","));
        }
        let _ = writeln!(out, "  n{id} [label=\"{label}\"];");
        if let Some(p) = parent {
            let edge = if self.sign < 0 { "-" } else { "+" };
            let _ = writeln!(out, "  n{p} -> n{id} [label=\"{edge}\"];");
        }
        for c in &self.children {
            c.write_dot(out, names, next_id, Some(id));
        }
    }

    pub fn to_json(&self, names: Option<&[AffineFunc]>) -> serde_json::Value {
        let own = self.term.constituents().to_vec();
        let names = names.unwrap_or(&own);
        serde_json::to_value(self.wire(names)).expect("trace serializes")
    }

    fn wire(&self, names: &[AffineFunc]) -> TraceWire {
        TraceWire {
            label: self.label(names),
            term: self.term.to_string(),
            alpha: self.alpha_in_name_order(names),
            sign: self.sign,
            children: self.children.iter().map(|c| c.wire(names)).collect(),
        }
    }
}

#[derive(Serialize)]
struct TraceWire {
    label: String,
    term: String,
    alpha: Option<Vec<String>>,
    sign: i8,
    children: Vec<TraceWire>,
}
