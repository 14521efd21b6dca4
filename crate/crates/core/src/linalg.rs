//! Exact rational linear algebra: reduced row echelon form and kernels.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational};

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n_rows = rows.len();
        let mut entries = Vec::with_capacity(n_rows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(RatMatrix {
            rows: n_rows,
            cols,
            entries,
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| crate::rational::int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Reduced row echelon form and the pivot columns, pivoting on the first
    /// non-zero entry of each column.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m: Vec<Vec<Rational>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(lead, p);
            let inv = m[lead][col].recip();
            for v in m[lead].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = m[lead].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == lead || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
            }
            pivots.push(col);
            lead += 1;
        }
        let entries = m.into_iter().flatten().collect();
        (
            RatMatrix {
                rows: self.rows,
                cols: self.cols,
                entries,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the null space, one vector per free column of the rref,
    /// in free-column order. Each vector is normalized.
    pub fn kernel_basis(&self) -> Vec<KernelVector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::from_integer(1.into());
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                KernelVector::normalize(&v).expect("free column gives a non-zero vector")
            })
            .collect()
    }
}

/// A non-zero null-space vector with integer entries, gcd 1 and a positive
/// first non-zero entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelVector {
    entries: Vec<BigInt>,
}

impl KernelVector {
    /// Clears denominators, divides by the gcd and fixes the sign. Returns
    /// `None` for the zero vector.
    pub fn normalize(values: &[Rational]) -> Option<KernelVector> {
        let first = values.iter().find(|v| !v.is_zero())?;
        let scale = common_denominator(values);
        let mut ints: Vec<BigInt> = values
            .iter()
            .map(|v| (v * Rational::from_integer(scale.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let negate = first.is_negative();
        for v in ints.iter_mut() {
            *v = &*v / &g;
            if negate {
                *v = -&*v;
            }
        }
        Some(KernelVector { entries: ints })
    }

    pub fn from_ints(values: &[i64]) -> Option<KernelVector> {
        let r: Vec<Rational> = values.iter().map(|&v| crate::rational::int(v)).collect();
        Self::normalize(&r)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.entries.iter().cloned().map(Rational::from_integer).collect()
    }

    /// True when `m · self = 0`.
    pub fn annihilated_by(&self, m: &RatMatrix) -> bool {
        m.mul_vec(&self.as_rationals())
            .is_ok_and(|prod| prod.iter().all(Zero::is_zero))
    }
}

impl fmt::Display for KernelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// How to pick one vector out of a kernel basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelStrategy {
    /// The basis vector of the first free column.
    First,
    /// The basis vector of the last free column.
    Last,
    /// A seeded random non-zero integer combination of the basis.
    SeededRandom(u64),
}

impl fmt::Display for KernelStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelStrategy::First => write!(f, "first"),
            KernelStrategy::Last => write!(f, "last"),
            KernelStrategy::SeededRandom(seed) => write!(f, "random({seed})"),
        }
    }
}

/// Picks a kernel vector, `None` iff the basis is empty.
///
/// The random strategy is a pure function of the seed and the basis, so a
/// given constituent set always receives the same vector.
pub fn pick_kernel_vector(basis: &[KernelVector], strategy: KernelStrategy) -> Option<KernelVector> {
    match strategy {
        KernelStrategy::First => basis.first().cloned(),
        KernelStrategy::Last => basis.last().cloned(),
        KernelStrategy::SeededRandom(seed) => {
            let first = basis.first()?;
            let mut mix = seed ^ 0xcbf2_9ce4_8422_2325;
            for byte in basis
                .iter()
                .flat_map(|v| v.entries())
                .flat_map(|e| e.to_signed_bytes_le())
            {
                mix = (mix ^ u64::from(byte)).wrapping_mul(0x100_0000_01b3);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(mix);
            let mut combo = vec![Rational::zero(); first.len()];
            for v in basis {
                // Non-zero weights keep the combination non-zero because
                // the basis is independent.
                let mut w: i64 = rng.gen_range(1..=4);
                if rng.gen_bool(0.5) {
                    w = -w;
                }
                let w = Rational::from_integer(w.into());
                for (c, e) in combo.iter_mut().zip(v.entries()) {
                    *c += &w * Rational::from_integer(e.clone());
                }
            }
            KernelVector::normalize(&combo)
        }
    }
}
