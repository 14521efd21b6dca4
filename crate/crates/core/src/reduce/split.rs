use std::collections::BTreeMap;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::linalg::{pick_kernel_vector, KernelStrategy, KernelVector, RatMatrix};
use crate::pwl::AffineFunc;
use crate::rational::Rational;

/// Chooses the split vector α from a kernel basis of the lifted gradient
/// matrix of `constituents` (columns in canonical order).
pub trait KernelChooser {
    fn choose(&self, constituents: &[AffineFunc], basis: &[KernelVector]) -> Option<KernelVector>;
}

impl KernelChooser for KernelStrategy {
    fn choose(&self, _constituents: &[AffineFunc], basis: &[KernelVector]) -> Option<KernelVector> {
        pick_kernel_vector(basis, *self)
    }
}

/// Fixed α vectors for given constituent sets; other sets fall back to a
/// strategy. Used to replay recorded executions.
#[derive(Debug, Clone)]
pub struct InjectedAlpha {
    overrides: BTreeMap<Vec<AffineFunc>, Vec<Rational>>,
    fallback: KernelStrategy,
}

impl InjectedAlpha {
    pub fn new(fallback: KernelStrategy) -> Self {
        InjectedAlpha {
            overrides: BTreeMap::new(),
            fallback,
        }
    }

    /// `alpha[i]` belongs to `constituents[i]`; any order is accepted.
    pub fn with(mut self, constituents: &[AffineFunc], alpha: &[i64]) -> Self {
        assert_eq!(constituents.len(), alpha.len(), "one α entry per constituent");
        let mut pairs: Vec<(AffineFunc, Rational)> = constituents
            .iter()
            .cloned()
            .zip(alpha.iter().map(|&a| crate::rational::int(a)))
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (key, values) = pairs.into_iter().unzip();
        self.overrides.insert(key, values);
        self
    }
}

impl KernelChooser for InjectedAlpha {
    fn choose(&self, constituents: &[AffineFunc], basis: &[KernelVector]) -> Option<KernelVector> {
        match self.overrides.get(constituents) {
            Some(alpha) => KernelVector::normalize(alpha),
            None => pick_kernel_vector(basis, self.fallback),
        }
    }
}

/// Outcome of splitting a constituent set `R = S ⊎ T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub s: Vec<AffineFunc>,
    pub t: Vec<AffineFunc>,
    pub alpha: Option<KernelVector>,
    /// `Σ αᵢ · constantᵢ`, present together with `alpha`.
    pub c: Option<Rational>,
}

impl SplitResult {
    pub fn is_trivial(&self) -> bool {
        self.s.is_empty()
    }
}

/// Gradients stacked over a row of ones: `(n+1) × |R|`, one column per
/// constituent.
pub fn lifted_gradient_matrix(constituents: &[AffineFunc]) -> RatMatrix {
    let n = constituents[0].dim();
    let k = constituents.len();
    let mut entries = Vec::with_capacity((n + 1) * k);
    for row in 0..n {
        entries.extend(constituents.iter().map(|g| g.gradient()[row].clone()));
    }
    entries.extend(std::iter::repeat_n(Rational::one(), k));
    RatMatrix::new(n + 1, k, entries).expect("shape is consistent")
}

/// Splits `r` so that `max over T ≥ min over S` everywhere.
///
/// With `α` a non-zero kernel vector of the lifted gradient matrix and
/// `c = Σ αᵢ·constantᵢ`: for `c ≥ 0`, `T = {α > 0}`; for `c < 0`,
/// `T = {α < 0}`. Zero entries always go to `S`. When the kernel is
/// trivial, `S` is empty and `T = r`.
pub fn split(r: &[AffineFunc], chooser: &dyn KernelChooser) -> Result<SplitResult> {
    let n = r.first().ok_or(Error::EmptyMaxTerm)?.dim();
    for g in r {
        g.check_dim(n)?;
    }
    let mut constituents = r.to_vec();
    constituents.sort();
    constituents.dedup();

    let w = lifted_gradient_matrix(&constituents);
    let basis = w.kernel_basis();
    if basis.is_empty() {
        return Ok(SplitResult {
            s: Vec::new(),
            t: constituents,
            alpha: None,
            c: None,
        });
    }
    let alpha = chooser
        .choose(&constituents, &basis)
        .ok_or_else(|| Error::InvalidKernelVector("chooser returned no vector for a non-trivial kernel".into()))?;
    if alpha.len() != constituents.len() || !alpha.annihilated_by(&w) {
        return Err(Error::InvalidKernelVector(format!(
            "{alpha} is not in the kernel of the lifted gradient matrix"
        )));
    }
    let c: Rational = alpha
        .as_rationals()
        .iter()
        .zip(&constituents)
        .map(|(a, g)| a * g.constant())
        .sum();
    let t_role = |a: &num_bigint::BigInt| {
        if c.is_negative() {
            a.is_negative()
        } else {
            a.is_positive()
        }
    };
    let (mut s, mut t) = (Vec::new(), Vec::new());
    for (a, g) in alpha.entries().iter().zip(constituents) {
        if t_role(a) {
            t.push(g);
        } else {
            s.push(g);
        }
    }
    debug_assert!(!s.is_empty() && !t.is_empty());
    Ok(SplitResult {
        s,
        t,
        alpha: Some(alpha),
        c: Some(c),
    })
}
