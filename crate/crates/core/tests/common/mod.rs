//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use pwlmax::expand::to_maxmin;
use pwlmax::parser::ExprNode;
use pwlmax::rational::{int, rat};
use pwlmax::{AffineFunc, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE_G: &str = "max(x1, x1 + x2, x2 + max(x1 + x2 - 7, x1 + 6*x2 + 4) + 3*min(4*x2, x1 - 9, x1 - x2))";

pub const EXAMPLE_G_HAT: &str = "max(x1, x1 + 19*x2 + 4) \
    - max(x1 + x2, 4*x1 + 4*x2 + 4, 4*x1 + 7*x2 - 23) \
    - max(x1 + 19*x2 + 4, 4*x1 + 4*x2 + 4) \
    + max(x1, x1 + x2, 4*x1 + 7*x2 - 23) \
    - max(x1, x1 + 19*x2 + 4, 4*x1 + 7*x2 - 23) \
    + max(x1 + x2, 4*x1 + 4*x2 + 4) \
    + max(x1 + 19*x2 + 4, 4*x1 + 4*x2 + 4, 4*x1 + 7*x2 - 23)";

pub const EXAMPLE_F: &str = "max(6*x1 + 5*x2 - 3, 8*x2 - 2, -3*x1 - 5*x2 - 4, \
    max(12*x1 - 4*x2 + 1, -7*x1 + 8*x2 + 12) + 3*x1 - 10, \
    min(-3*x1 + 4*x2 - 5, 8*x1 + 2))";

pub const EXAMPLE_F_HAT: &str = "-max(-4*x1 + 8*x2 + 2, 15*x1 - 4*x2 - 9) \
    + max(8*x2 - 2, -4*x1 + 8*x2 + 2, 6*x1 + 5*x2 - 3) \
    + max(-4*x1 + 8*x2 + 2, -3*x1 - 5*x2 - 4, 15*x1 - 4*x2 - 9) \
    + max(-4*x1 + 8*x2 + 2, 6*x1 + 5*x2 - 3, 15*x1 - 4*x2 - 9) \
    - max(-4*x1 + 8*x2 + 2, 6*x1 + 5*x2 - 3)";

pub const FIVE_PIECES: &str = "max(3*x1 - 4*x2 + 1, -3*x1 - x2 - 2, 2*x1 + x2 - 1, 3*x1 + 2*x2 + 2, -2*x1 + 4*x2 + 3)";

pub const THREE_RELUS: &str = "4*max(-x1 + 3*x2 + 2, 0) - 5*max(2*x1 - 3, 0) + 6*max(5*x2 + 1, 0) + 8";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn five_pieces() -> Vec<AffineFunc> {
    [([3, -4], 1), ([-3, -1], -2), ([2, 1], -1), ([3, 2], 2), ([-2, 4], 3)]
        .iter()
        .map(|(g, c)| AffineFunc::from_ints(g, *c).unwrap())
        .collect()
}

pub fn random_affine(rng: &mut impl Rng, n: usize, bound: i64) -> AffineFunc {
    let grad: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
    AffineFunc::from_ints(&grad, rng.gen_range(-bound..=bound)).unwrap()
}

pub fn random_linear(rng: &mut impl Rng, n: usize, bound: i64) -> AffineFunc {
    loop {
        let grad: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        if grad.iter().any(|&g| g != 0) {
            return AffineFunc::from_ints(&grad, 0).unwrap();
        }
    }
}

/// `k` distinct affine functions with integer data in `[-bound, bound]`.
pub fn random_constituents(rng: &mut impl Rng, n: usize, k: usize, bound: i64) -> Vec<AffineFunc> {
    let mut out: Vec<AffineFunc> = Vec::with_capacity(k);
    while out.len() < k {
        let g = random_affine(rng, n, bound);
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Nested expression with integer coefficients in `[-9, 9]`. Arity and
/// branching shrink with depth so the expansion stays small.
pub fn random_expr(rng: &mut impl Rng, n: usize, depth: usize) -> ExprNode {
    if depth == 0 || rng.gen_bool(0.25) {
        return ExprNode::affine(random_affine(rng, n, 9));
    }
    let arity = if depth >= 3 { 2 } else { rng.gen_range(2..=3) };
    let children = |rng: &mut _, k: usize| (0..k).map(|_| random_expr(rng, n, depth - 1)).collect::<Vec<_>>();
    match rng.gen_range(0..5) {
        0 | 1 => ExprNode::max(children(rng, arity)).unwrap(),
        2 => ExprNode::min(children(rng, arity)).unwrap(),
        3 => {
            let leaf = ExprNode::affine(random_affine(rng, n, 9));
            ExprNode::sum(vec![random_expr(rng, n, depth - 1), leaf]).unwrap()
        }
        _ => {
            let c = *[-3, -2, -1, 2, 3].choose(rng).unwrap();
            ExprNode::scale(int(c), random_expr(rng, n, depth - 1))
        }
    }
}

/// [`random_expr`] redrawn until the max-min normal form has a block-size
/// product of at most `limit`, which bounds the size of the expansion.
pub fn random_expr_bounded(rng: &mut impl Rng, n: usize, depth: usize, limit: usize) -> ExprNode {
    loop {
        let e = random_expr(rng, n, depth);
        let blocks = to_maxmin(&e);
        let product = blocks
            .blocks()
            .iter()
            .try_fold(1usize, |acc, b| acc.checked_mul(b.len()).filter(|&p| p <= limit));
        if product.is_some() {
            return e;
        }
    }
}

/// Exact rational point with coordinates `m/7`, `|m| ≤ 70`.
pub fn random_point(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rat(rng.gen_range(-70..=70), 7)).collect()
}
