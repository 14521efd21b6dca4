//! Equivalence checks between piecewise linear representations.
//!
//! * [`equiv_sample`]: exact evaluation on seeded random rational points;
//!   never claims more than `probably-equal`.
//! * [`equiv_1d`]: exact decision for `n = 1` from the breakpoints.
//! * [`equiv_homogeneous`]: exact decision for homogeneous combinations in
//!   `n ≤ 2`, through Minkowski sums of the dual polytopes.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::{distinguishing_direction, minkowski, polytope_equal, tau, VPolytope};
use crate::pwl::{LinComb, Pwl};
use crate::rational::{serde_str, Rational};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Grid denominator for sampled coordinates.
const GRID: i64 = 97;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    NotEqual,
    ProbablyEqual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Sampling,
    #[serde(rename = "breakpoints-1d")]
    Breakpoints1d,
    PolytopeHomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(with = "serde_str::vec")]
    pub point: Vec<Rational>,
    #[serde(with = "serde_str")]
    pub left: Rational,
    #[serde(with = "serde_str")]
    pub right: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub method: Method,
    /// Points evaluated (directions compared, for the polytope method).
    pub samples: usize,
    pub seed: u64,
}

impl EquivReport {
    /// `equal` or `probably-equal`.
    pub fn holds(&self) -> bool {
        self.verdict != Verdict::NotEqual
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: a, found: b })
    }
}

/// Seeded points on the grid `(1/97)ℤⁿ`, cycling through the boxes
/// `[-2^k, 2^k]ⁿ` for `k = 1..=10`.
pub fn sample_points(n: usize, samples: usize, seed: u64) -> impl Iterator<Item = Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(move |i| {
        let bound = GRID << ((i % 10) + 1);
        (0..n)
            .map(|_| Rational::new(rng.gen_range(-bound..=bound).into(), GRID.into()))
            .collect()
    })
}

pub fn equiv_sample<A, B>(a: &A, b: &B, samples: usize, seed: u64) -> Result<EquivReport>
where
    A: Pwl + ?Sized,
    B: Pwl + ?Sized,
{
    check_dims(a.dim(), b.dim())?;
    for x in sample_points(a.dim(), samples, seed) {
        let left = a.eval_at(&x)?;
        let right = b.eval_at(&x)?;
        if left != right {
            return Ok(EquivReport {
                verdict: Verdict::NotEqual,
                witness: Some(Witness { point: x, left, right }),
                method: Method::Sampling,
                samples,
                seed,
            });
        }
    }
    Ok(EquivReport {
        verdict: Verdict::ProbablyEqual,
        witness: None,
        method: Method::Sampling,
        samples,
        seed,
    })
}

/// Exact equality on ℝ. Both sides are linear between consecutive
/// breakpoints of any constituent pair, so agreement at the breakpoints,
/// their midpoints and one point beyond each end decides equality.
pub fn equiv_1d(a: &LinComb, b: &LinComb) -> Result<EquivReport> {
    for n in [a.dim(), b.dim()] {
        if n != 1 {
            return Err(Error::UnsupportedDimension { required: 1, found: n });
        }
    }
    let constituents: Vec<_> = a.constituents().into_iter().chain(b.constituents()).collect();
    let mut breaks: Vec<Rational> = Vec::new();
    for (i, g) in constituents.iter().enumerate() {
        for h in &constituents[i + 1..] {
            let slope = &g.gradient()[0] - &h.gradient()[0];
            if !slope.is_zero() {
                breaks.push((h.constant() - g.constant()) / slope);
            }
        }
    }
    breaks.sort();
    breaks.dedup();
    let mut probes: Vec<Rational> = Vec::new();
    if breaks.is_empty() {
        probes.push(Rational::zero());
        probes.push(Rational::one());
    } else {
        probes.push(&breaks[0] - Rational::one());
        for (i, x) in breaks.iter().enumerate() {
            probes.push(x.clone());
            if let Some(next) = breaks.get(i + 1) {
                probes.push((x + next) / Rational::from_integer(2.into()));
            }
        }
        probes.push(breaks.last().expect("non-empty") + Rational::one());
    }
    let samples = probes.len();
    for x in probes {
        let point = vec![x];
        let left = a.eval(&point)?;
        let right = b.eval(&point)?;
        if left != right {
            return Ok(EquivReport {
                verdict: Verdict::NotEqual,
                witness: Some(Witness { point, left, right }),
                method: Method::Breakpoints1d,
                samples,
                seed: 0,
            });
        }
    }
    Ok(EquivReport {
        verdict: Verdict::Equal,
        witness: None,
        method: Method::Breakpoints1d,
        samples,
        seed: 0,
    })
}

/// Splits `c` into `(P⁺, P⁻)` with `c = h(P⁺) - h(P⁻)`, `h` the support
/// function: positive coefficients scale and Minkowski-add the term
/// polytopes into `P⁺`, negative ones into `P⁻`.
pub fn polytope_parts(c: &LinComb) -> Result<(VPolytope, VPolytope)> {
    let mut pos = VPolytope::origin(c.dim());
    let mut neg = VPolytope::origin(c.dim());
    for (coeff, t) in c.terms() {
        let p = tau(t)?.scale(&coeff.abs());
        if coeff.is_positive() {
            pos = minkowski(&pos, &p)?;
        } else {
            neg = minkowski(&neg, &p)?;
        }
    }
    Ok((pos, neg))
}

/// `a = b` iff `A⁺ + B⁻ = B⁺ + A⁻` as polytopes (cancellation of
/// Minkowski addition). Exact for `n ≤ 2`; for larger `n` the polytope
/// comparison is sampled and the verdict is at best `probably-equal`.
pub fn equiv_homogeneous(a: &LinComb, b: &LinComb) -> Result<EquivReport> {
    check_dims(a.dim(), b.dim())?;
    let (a_pos, a_neg) = polytope_parts(&a.canonicalize())?;
    let (b_pos, b_neg) = polytope_parts(&b.canonicalize())?;
    let left = minkowski(&a_pos, &b_neg)?;
    let right = minkowski(&b_pos, &a_neg)?;
    let exact = a.dim() <= 2;
    let directions = if exact {
        left.points().len() + right.points().len()
    } else {
        crate::polytope::comparison_directions(a.dim()).len()
    };
    if polytope_equal(&left, &right)? {
        return Ok(EquivReport {
            verdict: if exact { Verdict::Equal } else { Verdict::ProbablyEqual },
            witness: None,
            method: Method::PolytopeHomogeneous,
            samples: directions,
            seed: 0,
        });
    }
    let d = distinguishing_direction(&left, &right)?.expect("distinct polygons differ along an edge normal or axis");
    let point = d.as_slice().to_vec();
    Ok(EquivReport {
        verdict: Verdict::NotEqual,
        witness: Some(Witness {
            left: a.eval(&point)?,
            right: b.eval(&point)?,
            point,
        }),
        method: Method::PolytopeHomogeneous,
        samples: directions,
        seed: 0,
    })
}

/// Breakpoints for `n = 1`, the polytope oracle for homogeneous `n = 2`,
/// sampling otherwise.
pub fn equiv_auto(a: &LinComb, b: &LinComb, samples: usize, seed: u64) -> Result<EquivReport> {
    check_dims(a.dim(), b.dim())?;
    if a.dim() == 1 {
        equiv_1d(a, b)
    } else if a.dim() == 2 && a.is_homogeneous() && b.is_homogeneous() {
        equiv_homogeneous(a, b)
    } else {
        equiv_sample(a, b, samples, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse, parse_lincomb};
    use crate::rational::int;

    fn lc(text: &str, n: usize) -> LinComb {
        parse_lincomb(text, n).unwrap()
    }

    #[test]
    fn sampling_agrees_on_reordered_max() {
        let r = equiv_sample(&lc("max(x1, x2)", 2), &lc("max(x2, x1)", 2), 1000, DEFAULT_SEED).unwrap();
        assert_eq!(r.verdict, Verdict::ProbablyEqual);
        assert_eq!(r.seed, 42);
    }

    #[test]
    fn sampling_finds_a_witness() {
        let a = lc("max(0, x1)", 1);
        let b = lc("max(0, 2*x1)", 1);
        let r = equiv_sample(&a, &b, 100, DEFAULT_SEED).unwrap();
        assert_eq!(r.verdict, Verdict::NotEqual);
        let w = r.witness.unwrap();
        assert_eq!(a.eval(&w.point).unwrap(), w.left);
        assert_eq!(b.eval(&w.point).unwrap(), w.right);
        assert_ne!(w.left, w.right);
        // The hand-picked witness x1 = 1 gives 1 vs 2.
        assert_eq!(
            (a.eval(&[int(1)]).unwrap(), b.eval(&[int(1)]).unwrap()),
            (int(1), int(2))
        );
    }

    #[test]
    fn sampling_compares_against_trees() {
        let e = parse("min(x1, x2)", 2).unwrap();
        let c = lc("x1 + x2 - max(x1, x2)", 2);
        assert!(equiv_sample(&e, &c, 500, 3).unwrap().holds());
    }

    #[test]
    fn breakpoint_oracle() {
        let r = equiv_1d(&lc("max(0, x1)", 1), &lc("x1 + max(-x1, 0)", 1)).unwrap();
        assert_eq!(r.verdict, Verdict::Equal);
        let r = equiv_1d(&lc("max(0, x1)", 1), &lc("max(0, x1, 1)", 1)).unwrap();
        assert_eq!(r.verdict, Verdict::NotEqual);
        let r = equiv_1d(&lc("2*x1", 1), &lc("x1 + x1", 1)).unwrap();
        assert_eq!(r.verdict, Verdict::Equal);
        assert!(matches!(
            equiv_1d(&lc("x1", 2), &lc("x1", 2)),
            Err(Error::UnsupportedDimension { required: 1, found: 2 })
        ));
    }

    #[test]
    fn breakpoint_oracle_catches_slope_change_beyond_last_break() {
        // Equal at 0 and between, differ only for x > 5.
        let a = lc("max(0, x1) - max(0, x1 - 5)", 1);
        let b = lc("max(0, x1) - max(0, 2*x1 - 10)", 1);
        assert_eq!(equiv_1d(&a, &b).unwrap().verdict, Verdict::NotEqual);
    }

    #[test]
    fn triangle_plus_segment_identity() {
        let f_plus_g = lc("max(x1 - x2, 3*x1 + x2, -x1 + 2*x2) + max(0, -x1 - x2)", 2);
        let h = lc("max(-2*x2, -2*x1 + x2, 3*x1 + x2, -x1 + 2*x2)", 2);
        assert_eq!(equiv_homogeneous(&f_plus_g, &h).unwrap().verdict, Verdict::Equal);
    }

    #[test]
    fn homogeneous_absorbed_constituent() {
        let r = equiv_homogeneous(&lc("max(x1, x2)", 2), &lc("max(x1, x2, 1/2*x1 + 1/2*x2)", 2)).unwrap();
        assert_eq!(r.verdict, Verdict::Equal);
    }

    #[test]
    fn homogeneous_not_equal_has_witness() {
        let a = lc("max(x1, x2)", 2);
        let b = lc("max(x1, -x2)", 2);
        let r = equiv_homogeneous(&a, &b).unwrap();
        assert_eq!(r.verdict, Verdict::NotEqual);
        let w = r.witness.unwrap();
        assert_ne!(w.left, w.right);
        assert_eq!(a.eval(&w.point).unwrap(), w.left);
    }

    #[test]
    fn homogeneous_rejects_constants() {
        assert!(matches!(
            equiv_homogeneous(&lc("max(x1, 1)", 2), &lc("max(x1, 1)", 2)),
            Err(Error::NonHomogeneous(_))
        ));
    }

    #[test]
    fn report_json_uses_kebab_case() {
        let r = equiv_sample(&lc("x1", 1), &lc("x1", 1), 10, 7).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["verdict"], "probably-equal");
        assert_eq!(v["method"], "sampling");
        let r = equiv_1d(&lc("x1", 1), &lc("x1", 1)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["method"], "breakpoints-1d");
    }
}
