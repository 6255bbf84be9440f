//! The Rauzy-cycle family: base permutation, loop and cycle words, the
//! closed-form transition matrix, and the parameter schedule that makes the
//! limit measures distinct.
//!
//! Even `n` uses the pairwise-inversion permutation with bottom row
//! `(n, 3, 2, 5, 4, …, n−1, n−2, 1)` and the cycle word
//! `0 · γ̇_{n−2,a} γ̇_{n−4,a} ⋯ γ̇_{2,a} · 1^{c(n−1)}` over every other loop
//! word (subscripts step by 2 — consecutive subscripts do not close the
//! loop). Odd `n` fixes the element `n−1`, giving bottom row
//! `(n, 3, 2, …, n−4, n−3, n−1, 1)`, and inserts the hook `10` after the
//! leading `0`; the closed form then carries column `n−1 = Θe_n + e_{n−1}`.
//! Both variants are validated against the path product before use.

use crate::error::{Error, Result};
use crate::iet::Permutation;
use crate::matrix::TransitionMatrix;
use crate::rauzy::{word_transition, MoveType, RauzyState, RunWord};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Base permutation of the family, as the bottom row in function notation.
/// It is an involution, so the function row and the two-row label display
/// coincide.
pub fn base_permutation(n: usize) -> Result<Permutation> {
    if n < 4 {
        return Err(Error::FamilyTooSmall { n });
    }
    let mut row = Vec::with_capacity(n);
    row.push(n);
    if n % 2 == 0 {
        for k in 1..=(n - 2) / 2 {
            row.push(2 * k + 1);
            row.push(2 * k);
        }
    } else {
        for k in 1..=(n - 3) / 2 {
            row.push(2 * k + 1);
            row.push(2 * k);
        }
        row.push(n - 1);
    }
    row.push(1);
    let perm = Permutation::from_images(row)?;
    debug_assert!(perm.is_irreducible());
    Ok(perm)
}

/// Loop word `γ̇_{k,a} = 1^{n−1−k} 0^a 1 0^2`.
pub fn loop_word(k: usize, a: &BigUint, n: usize) -> Result<RunWord> {
    if n < 4 {
        return Err(Error::FamilyTooSmall { n });
    }
    if k < 2 || k > n - 2 {
        return Err(Error::LoopIndexOutOfRange { k, max: n - 2 });
    }
    if a.is_zero() {
        return Err(Error::InvalidSchedule {
            constraint: "a >= 1 violated: a = 0".into(),
        });
    }
    let mut w = RunWord::empty();
    w.push_run(MoveType::One, BigUint::from(n - 1 - k));
    w.push_run(MoveType::Zero, a.clone());
    w.push_run(MoveType::One, BigUint::one());
    w.push_run(MoveType::Zero, BigUint::from(2u32));
    Ok(w)
}

/// Cycle word `γ_{a,c}`, a closed path at the base permutation.
pub fn cycle_word(a: &BigUint, c: &BigUint, n: usize) -> Result<RunWord> {
    if n < 4 {
        return Err(Error::FamilyTooSmall { n });
    }
    if a.is_zero() || c.is_zero() {
        return Err(Error::InvalidSchedule {
            constraint: "a, c >= 1 violated".into(),
        });
    }
    let mut w = RunWord::empty();
    w.push_run(MoveType::Zero, BigUint::one());
    let first_k = if n % 2 == 0 { n - 2 } else { n - 3 };
    if n % 2 == 1 {
        w.push_run(MoveType::One, BigUint::one());
        w.push_run(MoveType::Zero, BigUint::one());
    }
    let mut k = first_k;
    while k >= 2 {
        w.concat(&loop_word(k, a, n)?);
        k -= 2;
    }
    w.push_run(MoveType::One, c * BigUint::from(n - 1));
    Ok(w)
}

/// The explicit transition matrix of the cycle word.
///
/// Column 1 is `(1, 0, …, 0, 1)ᵀ`. An interior even column `k` carries `c`
/// in row 1, `2` on the diagonal, `a` just below, `1` in the other even
/// rows, `c+1` in row `n`. An interior odd column `k` carries `2` above the
/// diagonal and `a+1` on it. Column `n` has `1` in every even row. For odd
/// `n`, column `n−1` is `Θe_n + e_{n−1}` instead of a band column.
pub fn theta_closed_form(a: &BigUint, c: &BigUint, n: usize) -> Result<TransitionMatrix> {
    if n < 4 {
        return Err(Error::FamilyTooSmall { n });
    }
    let odd = n % 2 == 1;
    let mut m = TransitionMatrix::zero(n);
    *m.entry_mut(0, 0) = BigUint::one();
    *m.entry_mut(n - 1, 0) = BigUint::one();
    for col in 2..=n {
        *m.entry_mut(0, col - 1) = c.clone();
        *m.entry_mut(n - 1, col - 1) = c + 1u32;
        for row in 2..n {
            *m.entry_mut(row - 1, col - 1) = if row % 2 == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        if col == n || (odd && col == n - 1) {
            continue;
        }
        if col % 2 == 0 {
            *m.entry_mut(col - 1, col - 1) = BigUint::from(2u32);
            *m.entry_mut(col, col - 1) = a.clone();
        } else {
            *m.entry_mut(col - 2, col - 1) = BigUint::from(2u32);
            *m.entry_mut(col - 1, col - 1) = a + 1u32;
        }
    }
    if odd {
        // column n−1 = Θe_n + e_{n−1}
        *m.entry_mut(n - 2, n - 2) += 1u32;
    }
    Ok(m)
}

/// Outcome of binding the closed form to the path product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub n: usize,
    pub closed_loop: bool,
    pub matrices_equal: bool,
    /// First differing entry (row, col, closed, path), if any.
    pub first_mismatch: Option<(usize, usize, String, String)>,
}

impl FamilyReport {
    pub fn is_ok(&self) -> bool {
        self.closed_loop && self.matrices_equal
    }
}

/// Asserts that the closed form equals the transition matrix of the cycle
/// word and that the word closes at π. The word product is computed with
/// run-length arithmetic, so large `a`, `c` are fine.
pub fn validate_family(n: usize, a: &BigUint, c: &BigUint) -> Result<FamilyReport> {
    let pi = base_permutation(n)?;
    let start = RauzyState::from_permutation(&pi)?;
    let word = cycle_word(a, c, n)?;
    let (end, path) = word_transition(&start, &word);
    let closed = theta_closed_form(a, c, n)?;
    let closed_loop = end == start;
    let mut first_mismatch = None;
    'scan: for r in 0..n {
        for col in 0..n {
            if closed.entry(r, col) != path.entry(r, col) {
                first_mismatch = Some((
                    r + 1,
                    col + 1,
                    closed.entry(r, col).to_string(),
                    path.entry(r, col).to_string(),
                ));
                break 'scan;
            }
        }
    }
    Ok(FamilyReport {
        n,
        closed_loop,
        matrices_equal: first_mismatch.is_none(),
        first_mismatch,
    })
}

/// Closed-form matrix cross-checked against the path product; downstream
/// code never trusts the band pattern unverified.
pub fn verified_theta(a: &BigUint, c: &BigUint, n: usize) -> Result<TransitionMatrix> {
    let report = validate_family(n, a, c)?;
    if !report.closed_loop {
        return Err(Error::NotClosed);
    }
    if let Some((row, col, closed, path)) = report.first_mismatch {
        return Err(Error::OracleMismatch {
            row,
            col,
            closed,
            path,
        });
    }
    theta_closed_form(a, c, n)
}

/// The sequences `{a_i, c_i}` with `a_i = p·c_i` and `c_{i+1} = p·a_i = p²·c_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterSchedule {
    n: usize,
    p: BigUint,
    m: usize,
    cs: Vec<BigUint>,
    as_: Vec<BigUint>,
}

impl ParameterSchedule {
    pub fn new(n: usize, p: &BigUint, c1: &BigUint, m: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::FamilyTooSmall { n });
        }
        if *p < BigUint::from(n + 1) {
            return Err(Error::InvalidSchedule {
                constraint: format!("p >= n+1 violated: p = {p}, n = {n}"),
            });
        }
        if c1 <= p {
            return Err(Error::InvalidSchedule {
                constraint: format!("c1 > p violated: c1 = {c1}, p = {p}"),
            });
        }
        let mut cs = Vec::with_capacity(m);
        let mut as_ = Vec::with_capacity(m);
        let mut c = c1.clone();
        for _ in 0..m {
            let a = p * &c;
            cs.push(c.clone());
            as_.push(a.clone());
            c = p * &a;
        }
        Ok(ParameterSchedule {
            n,
            p: p.clone(),
            m,
            cs,
            as_,
        })
    }

    /// Default origin `c_1 = p²`.
    pub fn with_default_origin(n: usize, p: &BigUint, m: usize) -> Result<Self> {
        Self::new(n, p, &(p * p), m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `c_i` for 1-based `i ≤ m`.
    pub fn c(&self, i: usize) -> &BigUint {
        &self.cs[i - 1]
    }

    /// `a_i` for 1-based `i ≤ m`.
    pub fn a(&self, i: usize) -> &BigUint {
        &self.as_[i - 1]
    }

    pub fn cs(&self) -> &[BigUint] {
        &self.cs
    }

    pub fn r#as(&self) -> &[BigUint] {
        &self.as_
    }

    /// `c_i` extended past `m` by the recurrence; used for level-`k` bounds
    /// that reference the next cycle's parameter.
    pub fn c_extended(&self, i: usize) -> BigUint {
        if i <= self.m {
            return self.cs[i - 1].clone();
        }
        let mut c = self.cs[self.m - 1].clone();
        for _ in self.m..i {
            c = &self.p * &self.p * &c;
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rauzy::symbolic_step;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn base_permutation_rows() {
        assert_eq!(base_permutation(4).unwrap().images(), &[4, 3, 2, 1]);
        assert_eq!(base_permutation(6).unwrap().images(), &[6, 3, 2, 5, 4, 1]);
        assert_eq!(
            base_permutation(8).unwrap().images(),
            &[8, 3, 2, 5, 4, 7, 6, 1]
        );
        assert_eq!(base_permutation(5).unwrap().images(), &[5, 3, 2, 4, 1]);
        assert_eq!(
            base_permutation(7).unwrap().images(),
            &[7, 3, 2, 5, 4, 6, 1]
        );
        assert!(base_permutation(3).is_err());
    }

    #[test]
    fn first_step_matches_graph() {
        // π(6) --0--> second vertex with bottom row (6,1,3,2,5,4)
        let pi = base_permutation(6).unwrap();
        let s = RauzyState::from_permutation(&pi).unwrap();
        let (next, mv, _) = symbolic_step(&s, MoveType::Zero);
        assert_eq!(next.bottom(), &[6, 1, 3, 2, 5, 4]);
        assert_eq!((mv.winner, mv.loser), (6, 1));
    }

    #[test]
    fn loop_word_shape() {
        // k = n−2: 1^1 0^a 1 0^2
        let w = loop_word(4, &b(3), 6).unwrap();
        assert_eq!(w.to_string(), "1 0^3 1 0^2");
        // letter count (n−1−k) + a + 3
        let w2 = loop_word(2, &b(3), 6).unwrap();
        assert_eq!(w2.to_string(), "1^3 0^3 1 0^2");
        assert_eq!(w2.letter_count(), b(9));
        assert!(loop_word(1, &b(1), 6).is_err());
        assert!(loop_word(5, &b(1), 6).is_err());
    }

    #[test]
    fn cycle_word_structure() {
        // n=4, a=2, c=1: 0 γ̇_2 1^{3c} = 0 1 0^2 1 0^2 1^3 (10 letters)
        let w = cycle_word(&b(2), &b(1), 4).unwrap();
        assert_eq!(w.to_string(), "0 1 0^2 1 0^2 1^3");
        assert_eq!(w.letter_count(), b(10));
        // n=6 uses loop words k = 4, 2 only
        let w6 = cycle_word(&b(1), &b(1), 6).unwrap();
        assert_eq!(w6.to_string(), "0 1 0 1 0^2 1^3 0 1 0^2 1^5");
        // odd n: leading 0 then the 10 hook
        let w5 = cycle_word(&b(2), &b(1), 5).unwrap();
        assert_eq!(w5.to_string(), "0 1 0 1^2 0^2 1 0^2 1^4");
    }

    #[test]
    fn closed_form_columns() {
        let th = theta_closed_form(&b(2), &b(1), 6).unwrap();
        // column 1 = (1,0,...,0,1)^T
        assert_eq!(
            th.column(0),
            vec![b(1), b(0), b(0), b(0), b(0), b(1)]
        );
        // odd interior column k: c, …, 2 at k−1, a+1 at k, …, c+1
        assert_eq!(
            th.column(2),
            vec![b(1), b(2), b(3), b(1), b(0), b(2)]
        );
        // column sums (2, 2c+a+4, 2c+a+5, 2c+a+4, 2c+a+5, 2c+3)
        let sums = th.column_sums();
        assert_eq!(sums, vec![b(2), b(8), b(9), b(8), b(9), b(5)]);
    }

    #[test]
    fn column_sums_at_schedule_values() {
        // (a,c) = (56,8): sums (2, 76, 77, 76, 77, 19)
        let th = theta_closed_form(&b(56), &b(8), 6).unwrap();
        assert_eq!(
            th.column_sums(),
            vec![b(2), b(76), b(77), b(76), b(77), b(19)]
        );
    }

    #[test]
    fn column_identities() {
        // Θe_{2i+1} = Θe_{2i} + e_{2i+1} for interior odd columns
        for n in [4usize, 5, 6, 7, 8, 9] {
            let th = theta_closed_form(&b(3), &b(7), n).unwrap();
            let pairs_end = if n % 2 == 0 { n - 2 } else { n - 3 };
            for even_col in (2..=pairs_end).step_by(2) {
                for row in 0..n {
                    let mut want = th.entry(row, even_col - 1).clone();
                    if row == even_col {
                        want += 1u32;
                    }
                    assert_eq!(th.entry(row, even_col), &want, "n={n} col={even_col}");
                }
            }
        }
    }

    #[test]
    fn odd_n_last_column_rule() {
        let th = theta_closed_form(&b(2), &b(2), 5).unwrap();
        for row in 0..5 {
            let mut want = th.entry(row, 4).clone();
            if row == 3 {
                want += 1u32;
            }
            assert_eq!(th.entry(row, 3), &want);
        }
    }

    #[test]
    fn oracle_small_grid() {
        for n in [4usize, 5, 6] {
            for (a, c) in [(1u64, 1u64), (2, 1), (3, 2)] {
                let rep = validate_family(n, &b(a), &b(c)).unwrap();
                assert!(rep.is_ok(), "n={n} a={a} c={c}: {rep:?}");
            }
        }
    }

    #[test]
    fn schedule_values() {
        let s = ParameterSchedule::new(6, &b(7), &b(8), 3).unwrap();
        assert_eq!(s.cs(), &[b(8), b(392), b(19208)]);
        assert_eq!(s.r#as(), &[b(56), b(2744), b(134456)]);
        assert_eq!(s.c_extended(4), b(941192));
    }

    #[test]
    fn schedule_constraints() {
        assert!(matches!(
            ParameterSchedule::new(6, &b(6), &b(49), 2),
            Err(Error::InvalidSchedule { .. })
        ));
        assert!(matches!(
            ParameterSchedule::new(6, &b(7), &b(7), 2),
            Err(Error::InvalidSchedule { .. })
        ));
    }
}
