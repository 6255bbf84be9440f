//! Dense square matrices of arbitrary-precision nonnegative integers.
//!
//! Transition matrices along Rauzy paths are products of elementary
//! unipotent factors `I + E_{w,l}`, so entries stay nonnegative and the
//! determinant is 1. Row/column arguments are 0-based positions; the
//! interval they refer to is the 1-based label `position + 1`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::Mul;

#[derive(Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    n: usize,
    // row-major
    data: Vec<BigUint>,
}

impl TransitionMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigUint::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigUint::one();
        }
        TransitionMatrix { n, data }
    }

    pub fn zero(n: usize) -> Self {
        TransitionMatrix {
            n,
            data: vec![BigUint::zero(); n * n],
        }
    }

    /// `I + E_{winner,loser}` for 1-based interval labels.
    pub fn elementary(n: usize, winner: usize, loser: usize) -> Self {
        debug_assert!(winner != loser && 1 <= winner && winner <= n && 1 <= loser && loser <= n);
        let mut m = Self::identity(n);
        *m.entry_mut(winner - 1, loser - 1) += 1u32;
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigUint {
        &self.data[row * self.n + col]
    }

    pub fn entry_mut(&mut self, row: usize, col: usize) -> &mut BigUint {
        &mut self.data[row * self.n + col]
    }

    pub fn column(&self, col: usize) -> Vec<BigUint> {
        (0..self.n).map(|r| self.entry(r, col).clone()).collect()
    }

    pub fn column_sum(&self, col: usize) -> BigUint {
        (0..self.n).map(|r| self.entry(r, col)).sum()
    }

    pub fn column_sums(&self) -> Vec<BigUint> {
        (0..self.n).map(|c| self.column_sum(c)).collect()
    }

    pub fn mul_vec(&self, v: &[BigUint]) -> Vec<BigUint> {
        debug_assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.entry(r, c) * &v[c]).sum())
            .collect()
    }

    /// Row vector times matrix; used for return-time accumulation.
    pub fn vec_mul(&self, v: &[BigUint]) -> Vec<BigUint> {
        debug_assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|c| (0..self.n).map(|r| &v[r] * self.entry(r, c)).sum())
            .collect()
    }

    /// Adds `q * other` to `self` entrywise (for the unipotent closed form
    /// `(I + N)^q = I + qN` with `N^2 = 0`).
    pub fn add_scaled(&self, other: &TransitionMatrix, q: &BigUint) -> TransitionMatrix {
        debug_assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b * q)
            .collect();
        TransitionMatrix { n: self.n, data }
    }

    /// Exact determinant via fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|r| (0..n).map(|c| BigInt::from(self.entry(r, c).clone())).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }
}

impl Mul for &TransitionMatrix {
    type Output = TransitionMatrix;

    fn mul(self, rhs: &TransitionMatrix) -> TransitionMatrix {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = TransitionMatrix::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.entry(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.entry(k, c);
                    if !b.is_zero() {
                        *out.entry_mut(r, c) += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.entry(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
