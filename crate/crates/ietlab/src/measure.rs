//! Truncated invariant-measure data for a parameter schedule.
//!
//! For a schedule `{a_i, c_i}` of length `m`, the lab materializes the
//! verified matrices `Θ_1 … Θ_m`, every suffix column
//! `t_k = Θ_{k+1} ⋯ Θ_m e_j` (the unnormalized level-`k` measure vector of
//! seed `j`), the prefix products `P_k = Θ_1 ⋯ Θ_k`, and the return times
//! `b_{k,i} = |P_k e_i|₁`. Everything stays in integers; rationals appear
//! only at query time, so all identities can be checked exactly.
//!
//! Seed and interval arguments are 1-based throughout, matching the
//! measures `λ_j` and intervals `I_i^{(k)}`.

use crate::error::{Error, Result};
use crate::family::{base_permutation, verified_theta, ParameterSchedule};
use crate::iet::{Iet, LengthVector};
use crate::matrix::TransitionMatrix;
use crate::rauzy::induce_letters;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(
        BigInt::from(num.clone()),
        BigInt::from(den.clone()),
    )
}

/// Suffix columns of one seed: `tails[k] = Θ_{k+1} ⋯ Θ_m e_j` for `0 ≤ k ≤ K`.
#[derive(Clone, Debug)]
pub struct ProductColumn {
    pub seed: usize,
    pub tails: Vec<Vec<BigUint>>,
}

impl ProductColumn {
    /// The full product `v = Θ_1 ⋯ Θ_m e_j`.
    pub fn full(&self) -> &[BigUint] {
        &self.tails[0]
    }

    pub fn total(&self) -> BigUint {
        self.full().iter().sum()
    }
}

/// Return times `b_{k,i}` for all levels `k ≤ m`.
#[derive(Clone, Debug)]
pub struct ReturnTimes {
    rows: Vec<Vec<BigUint>>,
}

impl ReturnTimes {
    /// `b_{k,i}` for 1-based interval `i`.
    pub fn at(&self, k: usize, i: usize) -> &BigUint {
        &self.rows[k][i - 1]
    }

    pub fn row(&self, k: usize) -> &[BigUint] {
        &self.rows[k]
    }
}

pub struct MeasureLab {
    schedule: ParameterSchedule,
    thetas: Vec<TransitionMatrix>,
    prefixes: Vec<TransitionMatrix>,
    /// tails[j-1][k][i-1] = (Θ_{k+1} ⋯ Θ_m e_j)_i
    tails: Vec<Vec<Vec<BigUint>>>,
    /// suffix products applied to the all-ones vector; level-`k` lengths
    ones_tails: Vec<Vec<BigUint>>,
    b: Vec<Vec<BigUint>>,
}

impl MeasureLab {
    /// Builds all cached data. Every `Θ_i` is the closed form cross-checked
    /// against the path product of its cycle word.
    pub fn new(schedule: ParameterSchedule) -> Result<Self> {
        let n = schedule.n();
        let m = schedule.m();
        let mut thetas = Vec::with_capacity(m);
        for i in 1..=m {
            thetas.push(verified_theta(schedule.a(i), schedule.c(i), n)?);
        }
        let mut prefixes = Vec::with_capacity(m + 1);
        prefixes.push(TransitionMatrix::identity(n));
        for th in &thetas {
            let last = prefixes.last().unwrap();
            prefixes.push(last * th);
        }
        let seed = |j: usize| -> Vec<BigUint> {
            (0..n)
                .map(|i| if i + 1 == j { BigUint::one() } else { BigUint::zero() })
                .collect()
        };
        let mut tails = Vec::with_capacity(n);
        for j in 1..=n {
            let mut per_level = vec![Vec::new(); m + 1];
            per_level[m] = seed(j);
            for k in (0..m).rev() {
                per_level[k] = thetas[k].mul_vec(&per_level[k + 1]);
            }
            tails.push(per_level);
        }
        let mut ones_tails = vec![Vec::new(); m + 1];
        ones_tails[m] = vec![BigUint::one(); n];
        for k in (0..m).rev() {
            ones_tails[k] = thetas[k].mul_vec(&ones_tails[k + 1]);
        }
        let b = prefixes.iter().map(|p| p.column_sums()).collect();
        Ok(MeasureLab {
            schedule,
            thetas,
            prefixes,
            tails,
            ones_tails,
            b,
        })
    }

    pub fn n(&self) -> usize {
        self.schedule.n()
    }

    pub fn m(&self) -> usize {
        self.schedule.m()
    }

    pub fn schedule(&self) -> &ParameterSchedule {
        &self.schedule
    }

    /// `Θ_i` for 1-based `i ≤ m`.
    pub fn theta(&self, i: usize) -> &TransitionMatrix {
        &self.thetas[i - 1]
    }

    /// `P_k = Θ_1 ⋯ Θ_k` (`P_0 = I`).
    pub fn prefix(&self, k: usize) -> &TransitionMatrix {
        &self.prefixes[k]
    }

    /// Unnormalized level-`k` column of seed `j`.
    pub fn tail(&self, j: usize, k: usize) -> &[BigUint] {
        &self.tails[j - 1][k]
    }

    /// `|v_j| = |Θ_1 ⋯ Θ_m e_j|₁`, the normalization constant of seed `j`.
    pub fn column_total(&self, j: usize) -> BigUint {
        self.tails[j - 1][0].iter().sum()
    }

    /// Suffix columns of seed `j` truncated at level `K`.
    pub fn product_column(&self, j: usize, levels: usize) -> Result<ProductColumn> {
        if j < 1 || j > self.n() || levels > self.m() {
            return Err(Error::IndexOutOfRange {
                what: format!("product column j={j}, K={levels}"),
            });
        }
        Ok(ProductColumn {
            seed: j,
            tails: self.tails[j - 1][..=levels].to_vec(),
        })
    }

    /// `λ_j(I_i^{(k)}) = t_k[i] / |v_j|`, exact.
    pub fn measure_of_interval(&self, j: usize, k: usize, i: usize) -> BigRational {
        ratio(&self.tails[j - 1][k][i - 1], &self.column_total(j))
    }

    /// `λ_j(I^{(k)}) = |t_k| / |v_j|`.
    pub fn level_total(&self, j: usize, k: usize) -> BigRational {
        let num: BigUint = self.tails[j - 1][k].iter().sum();
        ratio(&num, &self.column_total(j))
    }

    /// Middle mass `δ^j(k) = Σ_{i=2..n−1, i≠j} λ_j(I_i^{(k)})`. For `j = 1`
    /// (and `j = n`) this sums every interior interval, matching the
    /// boundary-measure estimate; for interior `j` the interval `I_j` is
    /// excluded, matching the concentration estimate.
    pub fn middle_mass(&self, j: usize, k: usize) -> BigRational {
        let n = self.n();
        let num: BigUint = (2..n)
            .filter(|&i| i != j)
            .map(|i| self.tails[j - 1][k][i - 1].clone())
            .sum();
        ratio(&num, &self.column_total(j))
    }

    /// Normalized full column `v_j / |v_j|`, the truncation-`m` limit.
    pub fn normalized_limit(&self, j: usize) -> Vec<BigRational> {
        let total = self.column_total(j);
        self.tails[j - 1][0]
            .iter()
            .map(|x| ratio(x, &total))
            .collect()
    }

    /// Normalized column of the prefix product `P_t e_j`; the truncation-`t`
    /// limit for `t ≤ m`, sharing the already-verified matrices.
    pub fn normalized_limit_at(&self, j: usize, t: usize) -> Vec<BigRational> {
        let col = self.prefixes[t].column(j - 1);
        let total: BigUint = col.iter().sum();
        col.iter().map(|x| ratio(x, &total)).collect()
    }

    /// L1 distance of the normalized limits of seeds `j1`, `j2`.
    pub fn pairwise_l1(&self, j1: usize, j2: usize) -> BigRational {
        let (u, v) = (self.normalized_limit(j1), self.normalized_limit(j2));
        u.iter()
            .zip(&v)
            .map(|(a, b)| {
                let d = a - b;
                if d < BigRational::zero() {
                    -d
                } else {
                    d
                }
            })
            .sum()
    }

    /// Truncation-convergence indicator: the L1 distance between the
    /// normalized limits of seed `j` at truncations `m−1` and `m`. No
    /// hidden tolerance anywhere; the caller sees the exact gap.
    pub fn limit_convergence(&self, j: usize) -> Option<BigRational> {
        if self.m() == 0 {
            return None;
        }
        Some(self.pairwise_l1_between(j, self.m() - 1, self.m()))
    }

    /// L1 distance between the normalized limits of one seed at two
    /// truncations.
    fn pairwise_l1_between(&self, j: usize, t1: usize, t2: usize) -> BigRational {
        let (u, v) = (self.normalized_limit_at(j, t1), self.normalized_limit_at(j, t2));
        u.iter()
            .zip(&v)
            .map(|(a, b)| {
                let d = a - b;
                if d < BigRational::zero() {
                    -d
                } else {
                    d
                }
            })
            .sum()
    }

    /// L1 distance of normalized limits at truncation `t ≤ m`.
    pub fn pairwise_l1_at(&self, j1: usize, j2: usize, t: usize) -> BigRational {
        let (u, v) = (self.normalized_limit_at(j1, t), self.normalized_limit_at(j2, t));
        u.iter()
            .zip(&v)
            .map(|(a, b)| {
                let d = a - b;
                if d < BigRational::zero() {
                    -d
                } else {
                    d
                }
            })
            .sum()
    }

    pub fn return_times(&self) -> ReturnTimes {
        ReturnTimes {
            rows: self.b.clone(),
        }
    }

    /// `b_{k,i} = |Θ_1 ⋯ Θ_k e_i|₁`.
    pub fn return_time(&self, k: usize, i: usize) -> &BigUint {
        &self.b[k][i - 1]
    }

    /// Mass of the orbit tower: `b_{k,i} · λ_j(I_i^{(k)})`.
    pub fn orbit_mass(&self, j: usize, k: usize, i: usize) -> BigRational {
        ratio(&self.b[k][i - 1], &BigUint::one()) * self.measure_of_interval(j, k, i)
    }

    /// Exact telescoping `t_{k-1} = Θ_k t_k` for every seed and level.
    /// Holds by construction; re-checked entrywise as a guard against any
    /// cache corruption.
    pub fn check_telescoping(&self) -> bool {
        for j in 1..=self.n() {
            for k in 1..=self.m() {
                let lhs = &self.tails[j - 1][k - 1];
                let rhs = self.thetas[k - 1].mul_vec(&self.tails[j - 1][k]);
                if *lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Partition of unity: `Σ_t b_{k,t} · λ_j(I_t^{(k)}) = 1` exactly.
    pub fn partition_of_unity(&self, j: usize, k: usize) -> bool {
        let n = self.n();
        let lhs: BigUint = (0..n)
            .map(|t| &self.b[k][t] * &self.tails[j - 1][k][t])
            .sum();
        lhs == self.column_total(j)
    }

    /// Level-`k` integer lengths `Θ_{k+1} ⋯ Θ_m 𝟙` of the all-ones
    /// truncation.
    pub fn level_lengths(&self, k: usize) -> &[BigUint] {
        &self.ones_tails[k]
    }

    /// The truncation IET: base permutation with lengths `Θ_1 ⋯ Θ_m 𝟙`
    /// (integer scale; the induction path and visit counts are
    /// scale-invariant).
    pub fn truncation_iet(&self) -> Result<Iet> {
        let perm = base_permutation(self.n())?;
        let lengths = LengthVector::new(
            self.ones_tails[0]
                .iter()
                .map(|x| BigRational::from_integer(BigInt::from(x.clone())))
                .collect(),
        )?;
        Iet::new(perm, lengths)
    }

    /// Dynamical oracle: iterate the truncation IET from the midpoint of
    /// `I_i^{(k)}` for `b_{k,i}` steps and count visits to each `X_t`.
    /// The level-`k` subinterval comes from `k` rounds of accelerated
    /// induction, cross-checked against the matrix suffix. The result must
    /// equal column `i` of `Θ_1 ⋯ Θ_k`.
    pub fn visit_count_column(&self, k: usize, i: usize, budget: u64) -> Result<Vec<u64>> {
        let n = self.n();
        if k > self.m() || i < 1 || i > n {
            return Err(Error::IndexOutOfRange {
                what: format!("visit count k={k}, i={i}"),
            });
        }
        let iet = self.truncation_iet()?;
        let mut target = BigUint::zero();
        for cyc in 1..=k {
            let word = crate::family::cycle_word(
                self.schedule.a(cyc),
                self.schedule.c(cyc),
                n,
            )?;
            target += word.letter_count();
        }
        let induced = induce_letters(iet.perm(), self.ones_tails[0].clone(), &target, budget)?;
        for (idx, want) in self.ones_tails[k].iter().enumerate() {
            if &induced[idx] != want {
                return Err(Error::LevelMismatch {
                    level: k,
                    interval: idx + 1,
                });
            }
        }
        let mut left = BigRational::zero();
        for len in &induced[..i - 1] {
            left += BigRational::from_integer(BigInt::from(len.clone()));
        }
        let width = BigRational::from_integer(BigInt::from(induced[i - 1].clone()));
        let midpoint = &left + &width / BigRational::from_integer(2.into());
        let steps = self.b[k][i - 1].to_u64().ok_or(Error::BudgetExceeded {
            needed: self.b[k][i - 1].to_string(),
            budget,
        })?;
        if steps > budget {
            return Err(Error::BudgetExceeded {
                needed: steps.to_string(),
                budget,
            });
        }
        iet.orbit_counts(&midpoint, steps)
    }
}
