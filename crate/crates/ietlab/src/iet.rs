//! Interval exchange transformations with exact rational arithmetic.
//!
//! An IET is the pair `(α, τ)`: interval `i` (1-based) has length `α_i` and
//! is translated onto the `τ(i)`-th slot of the rearranged partition,
//! `T(x) = x − β_{i−1} + β^τ_{τ(i)−1}`. All intervals are half-open
//! `[β_{i−1}, β_i)`, so a boundary point belongs to the interval on its
//! right. No floating point is used anywhere in this module.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;

/// A permutation of `{1, …, n}` stored as its bottom row in two-line
/// notation: `images[i-1] = τ(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n < 2 {
            return Err(Error::NotBijective { n });
        }
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v < 1 || v > n || seen[v] {
                return Err(Error::NotBijective { n });
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `τ(i)` for 1-based `i`.
    pub fn tau(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let n = self.n();
        let mut inv = vec![0; n];
        for i in 1..=n {
            inv[self.tau(i) - 1] = i;
        }
        Permutation { images: inv }
    }

    /// Irreducible: no proper prefix `{1..k}` maps onto `{1..k}`.
    pub fn is_irreducible(&self) -> bool {
        let mut max = 0;
        for k in 1..self.n() {
            max = max.max(self.tau(k));
            if max == k {
                return false;
            }
        }
        true
    }

    pub fn check_irreducible(&self) -> Result<()> {
        let mut max = 0;
        for k in 1..self.n() {
            max = max.max(self.tau(k));
            if max == k {
                return Err(Error::Reducible { prefix: k });
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

/// Exact positive interval lengths; the total need not be 1.
#[derive(Clone, PartialEq, Eq)]
pub struct LengthVector {
    entries: Vec<BigRational>,
}

impl LengthVector {
    pub fn new(entries: Vec<BigRational>) -> Result<Self> {
        for (idx, e) in entries.iter().enumerate() {
            if !e.is_positive() {
                return Err(Error::NonPositiveLength { index: idx + 1 });
            }
        }
        Ok(LengthVector { entries })
    }

    pub fn from_integers<I: Into<BigInt> + Clone>(ints: &[I]) -> Result<Self> {
        Self::new(
            ints.iter()
                .map(|v| BigRational::from_integer(v.clone().into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn total(&self) -> BigRational {
        self.entries.iter().sum()
    }

    /// The same proportions scaled to total exactly 1.
    pub fn normalized(&self) -> LengthVector {
        let t = self.total();
        LengthVector {
            entries: self.entries.iter().map(|e| e / &t).collect(),
        }
    }
}

/// An interval exchange transformation with exact breakpoints.
#[derive(Clone, PartialEq, Eq)]
pub struct Iet {
    perm: Permutation,
    lengths: LengthVector,
    /// β_0 = 0 < β_1 < … < β_n = total
    breakpoints: Vec<BigRational>,
    /// β^τ built from α^τ = (α_{τ^{-1}(1)}, …, α_{τ^{-1}(n)})
    breakpoints_tau: Vec<BigRational>,
}

impl Iet {
    pub fn new(perm: Permutation, lengths: LengthVector) -> Result<Self> {
        if perm.n() != lengths.len() {
            return Err(Error::DimensionMismatch {
                perm: perm.n(),
                lengths: lengths.len(),
            });
        }
        let n = perm.n();
        let mut breakpoints = Vec::with_capacity(n + 1);
        breakpoints.push(BigRational::zero());
        for e in lengths.entries() {
            let next = breakpoints.last().unwrap() + e;
            breakpoints.push(next);
        }
        let inv = perm.inverse();
        let mut breakpoints_tau = Vec::with_capacity(n + 1);
        breakpoints_tau.push(BigRational::zero());
        for j in 1..=n {
            let next = breakpoints_tau.last().unwrap() + &lengths.entries()[inv.tau(j) - 1];
            breakpoints_tau.push(next);
        }
        Ok(Iet {
            perm,
            lengths,
            breakpoints,
            breakpoints_tau,
        })
    }

    pub fn n(&self) -> usize {
        self.perm.n()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn lengths(&self) -> &LengthVector {
        &self.lengths
    }

    pub fn total(&self) -> &BigRational {
        &self.breakpoints[self.n()]
    }

    /// β_i for 0 ≤ i ≤ n.
    pub fn breakpoint(&self, i: usize) -> &BigRational {
        &self.breakpoints[i]
    }

    /// β^τ_i for 0 ≤ i ≤ n.
    pub fn breakpoint_tau(&self, i: usize) -> &BigRational {
        &self.breakpoints_tau[i]
    }

    /// 1-based index of the interval containing `x` (binary search over the
    /// breakpoints; half-open convention).
    pub fn locate(&self, x: &BigRational) -> Result<usize> {
        if x.is_negative() || x >= self.total() {
            return Err(Error::OutOfDomain);
        }
        // partition_point over β_1..β_{n-1}: count how many are <= x
        let inner = &self.breakpoints[1..self.n()];
        let idx = inner.partition_point(|b| b <= x);
        Ok(idx + 1)
    }

    /// `T(x) = x − β_{i−1} + β^τ_{τ(i)−1}` where `x ∈ X_i`.
    pub fn evaluate(&self, x: &BigRational) -> Result<BigRational> {
        let i = self.locate(x)?;
        Ok(x - &self.breakpoints[i - 1] + &self.breakpoints_tau[self.perm.tau(i) - 1])
    }

    /// Visit counts of the first `iterations` points of the forward orbit:
    /// `count[i-1] = #{0 ≤ t < iterations : T^t(x) ∈ X_i}`.
    pub fn orbit_counts(&self, x: &BigRational, iterations: u64) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; self.n()];
        let mut point = x.clone();
        for _ in 0..iterations {
            let i = self.locate(&point)?;
            counts[i - 1] += 1;
            point = &point - &self.breakpoints[i - 1] + &self.breakpoints_tau[self.perm.tau(i) - 1];
        }
        Ok(counts)
    }

    /// Finite-prefix Keane check: true iff no forward image `T^t(β_i)`,
    /// `1 ≤ t ≤ steps`, `1 ≤ i ≤ n−1`, coincides exactly with some β_j, j ≥ 1.
    pub fn keane_prefix_check(&self, steps: u64) -> bool {
        let n = self.n();
        let interior = &self.breakpoints[1..n];
        for i in 1..n {
            let mut point = self.breakpoints[i].clone();
            for _ in 0..steps {
                point = match self.evaluate(&point) {
                    Ok(p) => p,
                    Err(_) => return false,
                };
                if interior.binary_search_by(|b| b.cmp(&point)).is_ok() {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for Iet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Iet(perm={:?}, lengths={:?})",
            self.perm.images(),
            self.lengths
                .entries()
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
        )
    }
}

impl fmt::Debug for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.entries.iter().map(|e| e.to_string()))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn iet(images: Vec<usize>, lengths: Vec<(i64, i64)>) -> Iet {
        Iet::new(
            Permutation::from_images(images).unwrap(),
            LengthVector::new(lengths.into_iter().map(|(n, d)| rat(n, d)).collect()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn breakpoints_identity_and_rotation() {
        let t = iet(vec![1, 2], vec![(1, 3), (2, 3)]);
        assert_eq!(t.breakpoint(1), &rat(1, 3));
        assert_eq!(t.breakpoint(2), &rat(1, 1));

        let r = iet(vec![2, 1], vec![(1, 3), (2, 3)]);
        assert_eq!(r.breakpoint_tau(1), &rat(2, 3));
        assert_eq!(r.breakpoint_tau(2), &rat(1, 1));
    }

    #[test]
    fn three_interval_example() {
        // bottom row (3,1,2): β = (0, 1/10, 6/10, 1), α^τ = (5/10, 4/10, 1/10)
        let t = iet(vec![3, 1, 2], vec![(1, 10), (5, 10), (4, 10)]);
        assert_eq!(t.breakpoint(1), &rat(1, 10));
        assert_eq!(t.breakpoint(2), &rat(6, 10));
        assert_eq!(t.breakpoint_tau(1), &rat(5, 10));
        assert_eq!(t.breakpoint_tau(2), &rat(9, 10));
        // T(1/20) = 1/20 + β^τ_2 = 19/20
        assert_eq!(t.evaluate(&rat(1, 20)).unwrap(), rat(19, 20));
        // locate: boundary belongs to the right interval
        assert_eq!(t.locate(&rat(0, 1)).unwrap(), 1);
        assert_eq!(t.locate(&rat(1, 10)).unwrap(), 2);
        assert_eq!(t.locate(&rat(7, 10)).unwrap(), 3);
    }

    #[test]
    fn evaluate_identity_and_rotation() {
        let id = iet(vec![1, 2], vec![(1, 3), (2, 3)]);
        assert_eq!(id.evaluate(&rat(1, 7)).unwrap(), rat(1, 7));
        let r = iet(vec![2, 1], vec![(1, 3), (2, 3)]);
        assert_eq!(r.evaluate(&rat(0, 1)).unwrap(), rat(2, 3));
    }

    #[test]
    fn orbit_counts_period_two() {
        let r = iet(vec![2, 1], vec![(1, 2), (1, 2)]);
        let counts = r.orbit_counts(&rat(1, 4), 4).unwrap();
        assert_eq!(counts, vec![2, 2]);
        let id = iet(vec![1, 2, 3], vec![(1, 3), (1, 3), (1, 3)]);
        assert_eq!(id.orbit_counts(&rat(1, 2), 5).unwrap(), vec![0, 5, 0]);
    }

    #[test]
    fn keane_examples() {
        let r = iet(vec![2, 1], vec![(1, 2), (1, 2)]);
        assert!(!r.keane_prefix_check(2));
        // golden-ratio approximation with a large denominator
        let fib = iet(vec![2, 1], vec![(832040, 1346269), (514229, 1346269)]);
        assert!(fib.keane_prefix_check(10));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_images(vec![1, 1, 3]).is_err());
        assert!(LengthVector::new(vec![rat(0, 1)]).is_err());
        let p = Permutation::from_images(vec![2, 1]).unwrap();
        let l = LengthVector::new(vec![rat(1, 2)]).unwrap();
        assert_eq!(
            Iet::new(p, l).unwrap_err(),
            Error::DimensionMismatch { perm: 2, lengths: 1 }
        );
    }

    #[test]
    fn irreducibility() {
        assert!(Permutation::from_images(vec![6, 3, 2, 5, 4, 1])
            .unwrap()
            .is_irreducible());
        assert!(!Permutation::from_images(vec![2, 1, 3])
            .unwrap()
            .is_irreducible());
    }
}
