//! Convex polytopes in V-representation and their duality with positively
//! homogeneous convex maxima.
//!
//! `tau` sends `max(⟨a₁,x⟩, …, ⟨a_k,x⟩)` to `conv{a₁, …, a_k}`; the support
//! function of the polytope is the original maximum. Sums of maxima go to
//! Minkowski sums, which makes polytope equality an exact oracle for
//! homogeneous combinations.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pwl::{AffineFunc, MaxTerm};
use crate::rational::{serde_str, Rational};

type Point = Vec<Rational>;

/// Convex hull of finitely many rational points.
///
/// For `n = 2` the generators are exactly the hull vertices in
/// counter-clockwise order starting at the lexicographic minimum, and for
/// `n = 1` they are the interval endpoints. Higher dimensions keep the
/// sorted, de-duplicated generators as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    n: usize,
    points: Vec<Point>,
}

/// A non-zero vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Direction(Vec<Rational>);

impl Direction {
    pub fn new(d: Vec<Rational>) -> Result<Direction> {
        if d.is_empty() || d.iter().all(Zero::is_zero) {
            return Err(Error::ZeroDirection);
        }
        Ok(Direction(d))
    }

    pub fn from_ints(d: &[i64]) -> Result<Direction> {
        Self::new(d.iter().map(|&v| crate::rational::int(v)).collect())
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// z-component of `(a - o) × (b - o)`.
fn cross(o: &[Rational], a: &[Rational], b: &[Rational]) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Monotone-chain hull, collinear points dropped.
fn hull_2d(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl VPolytope {
    pub fn new(n: usize, points: Vec<Point>) -> Result<VPolytope> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if points.is_empty() {
            return Err(Error::EmptyMaxTerm);
        }
        for p in &points {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
        }
        let points = match n {
            1 => {
                let lo = points.iter().min().cloned().expect("non-empty");
                let hi = points.iter().max().cloned().expect("non-empty");
                if lo == hi {
                    vec![lo]
                } else {
                    vec![lo, hi]
                }
            }
            2 => hull_2d(points),
            _ => {
                let mut pts = points;
                pts.sort();
                pts.dedup();
                pts
            }
        };
        Ok(VPolytope { n, points })
    }

    pub fn from_ints(points: &[&[i64]]) -> Result<VPolytope> {
        let n = points.first().map_or(0, |p| p.len());
        Self::new(
            n,
            points
                .iter()
                .map(|p| p.iter().map(|&v| crate::rational::int(v)).collect())
                .collect(),
        )
    }

    /// The single point `{0}`, neutral for Minkowski addition.
    pub fn origin(n: usize) -> VPolytope {
        VPolytope {
            n,
            points: vec![vec![Rational::zero(); n]],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Whether the stored generators are exactly the vertices.
    pub fn is_hull_reduced(&self) -> bool {
        self.n <= 2
    }

    pub fn scale(&self, factor: &Rational) -> VPolytope {
        assert!(factor.is_positive(), "only positive scaling keeps the orientation");
        VPolytope {
            n: self.n,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|v| v * factor).collect())
                .collect(),
        }
    }

    fn check_same_dim(&self, n: usize) -> Result<()> {
        if self.n == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: n,
            })
        }
    }
}

/// `conv{∇g : g ∈ t}` for a term of linear constituents.
pub fn tau(t: &MaxTerm) -> Result<VPolytope> {
    if let Some(bad) = t.constituents().iter().find(|g| !g.is_linear()) {
        return Err(Error::NonHomogeneous(bad.to_string()));
    }
    VPolytope::new(
        t.dim(),
        t.constituents().iter().map(|g| g.gradient().to_vec()).collect(),
    )
}

/// Inverse of [`tau`]: the maximum of `⟨v, x⟩` over the generators.
pub fn support_function(p: &VPolytope) -> MaxTerm {
    MaxTerm::new(
        p.points
            .iter()
            .map(|v| AffineFunc::new(v.clone(), Rational::zero()).expect("positive dimension")),
    )
    .expect("non-empty")
}

/// `max over generators of ⟨v, d⟩`.
pub fn support(p: &VPolytope, d: &Direction) -> Result<Rational> {
    p.check_same_dim(d.dim())?;
    Ok(p.points.iter().map(|v| dot(v, d.as_slice())).max().expect("non-empty"))
}

/// `P + Q` from all pairwise generator sums.
pub fn minkowski(p: &VPolytope, q: &VPolytope) -> Result<VPolytope> {
    p.check_same_dim(q.n)?;
    let sums = p
        .points
        .iter()
        .flat_map(|a| {
            q.points
                .iter()
                .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
        })
        .collect();
    VPolytope::new(p.n, sums)
}

/// Generators attaining the support in direction `d`.
pub fn face(p: &VPolytope, d: &Direction) -> Result<VPolytope> {
    let h = support(p, d)?;
    let on_face = p.points.iter().filter(|v| dot(v, d.as_slice()) == h).cloned().collect();
    VPolytope::new(p.n, on_face)
}

/// Directions used to compare polytopes in `n ≥ 3`: every non-zero vector
/// in `{-1, 0, 1}ⁿ` followed by 500 seeded random integer directions.
pub fn comparison_directions(n: usize) -> Vec<Direction> {
    let mut dirs = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let digit = (c % 3) as i64 - 1;
                c /= 3;
                digit
            })
            .collect();
        if let Ok(d) = Direction::from_ints(&v) {
            dirs.push(d);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d1e5);
    while dirs.len() < total - 1 + 500 {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-50..=50)).collect();
        if let Ok(d) = Direction::from_ints(&v) {
            dirs.push(d);
        }
    }
    dirs
}

/// Exact for `n ≤ 2` (vertex lists compared). For `n ≥ 3` this compares
/// support values on [`comparison_directions`], a strong necessary check
/// rather than a decision procedure.
pub fn polytope_equal(p: &VPolytope, q: &VPolytope) -> Result<bool> {
    p.check_same_dim(q.n)?;
    if p.n <= 2 {
        return Ok(p.points == q.points);
    }
    if p.points == q.points {
        return Ok(true);
    }
    for d in comparison_directions(p.n) {
        if support(p, &d)? != support(q, &d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A direction where the support functions differ, if one exists among
/// edge normals, edge directions and axis directions of both polygons
/// (complete for `n ≤ 2`) or among [`comparison_directions`].
pub fn distinguishing_direction(p: &VPolytope, q: &VPolytope) -> Result<Option<Direction>> {
    p.check_same_dim(q.n)?;
    let mut candidates: Vec<Direction> = Vec::new();
    if p.n == 2 {
        for poly in [p, q] {
            let k = poly.points.len();
            for i in 0..k {
                let a = &poly.points[i];
                let b = &poly.points[(i + 1) % k];
                let e = [&b[0] - &a[0], &b[1] - &a[1]];
                let variants = [
                    vec![e[1].clone(), -e[0].clone()],
                    vec![-e[1].clone(), e[0].clone()],
                    vec![e[0].clone(), e[1].clone()],
                    vec![-e[0].clone(), -e[1].clone()],
                ];
                candidates.extend(variants.into_iter().filter_map(|v| Direction::new(v).ok()));
            }
        }
    }
    if p.n <= 2 {
        for axis in 0..p.n {
            for sign in [1, -1] {
                let mut v = vec![0; p.n];
                v[axis] = sign;
                candidates.push(Direction::from_ints(&v)?);
            }
        }
    }
    candidates.extend(comparison_directions(p.n));
    for d in candidates {
        if support(p, &d)? != support(q, &d)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

impl fmt::Display for VPolytope {
    /// Vertex cycle `(a, b) -> (c, d) -> …` for `n = 2`; generator list otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_point = |p: &Point| format!("({})", p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "));
        let parts: Vec<String> = self.points.iter().map(fmt_point).collect();
        if self.n == 2 && parts.len() > 2 {
            write!(f, "{} -> {}", parts.join(" -> "), parts[0])
        } else if self.n <= 2 {
            write!(f, "{}", parts.join(" -- "))
        } else {
            write!(f, "conv{{{}}}", parts.join(", "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeWire {
    n: usize,
    points: Vec<PointWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct PointWire(#[serde(with = "serde_str::vec")] Vec<Rational>);

impl Serialize for VPolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeWire {
            n: self.n,
            points: self.points.iter().cloned().map(PointWire).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VPolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PolytopeWire::deserialize(d)?;
        VPolytope::new(w.n, w.points.into_iter().map(|p| p.0).collect()).map_err(serde::de::Error::custom)
    }
}

impl VPolytope {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polytope serializes")
    }

    pub fn from_json(text: &str) -> Result<VPolytope> {
        Ok(serde_json::from_str(text)?)
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Direction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}
