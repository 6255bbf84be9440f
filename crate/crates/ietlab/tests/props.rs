//! Property tests for the exact invariants that should survive any input,
//! not just the family's.

use ietlab::rauzy::word_transition;
use ietlab::{
    realize_word, realized_step, validate_family, Iet, LengthVector, MoveType, Permutation,
    RauzyState, RunWord,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn rat(n: u32, d: u32) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shuffled images of 1..=n, filtered to irreducible permutations.
fn irreducible_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_filter_map("irreducible", |images| {
            Permutation::from_images(images)
                .ok()
                .filter(|p| p.is_irreducible())
        })
}

fn arb_iet(n: usize) -> impl Strategy<Value = Iet> {
    (
        irreducible_perm(n),
        proptest::collection::vec((1u32..60, 1u32..60), n),
    )
        .prop_map(|(perm, nums)| {
            let lengths =
                LengthVector::new(nums.into_iter().map(|(a, b)| rat(a, b)).collect()).unwrap();
            Iet::new(perm, lengths).unwrap()
        })
}

fn arb_word(max_runs: usize) -> impl Strategy<Value = RunWord> {
    proptest::collection::vec((proptest::bool::ANY, 1u64..40), 0..max_runs).prop_map(|runs| {
        RunWord::from_runs(runs.into_iter().map(|(one, q)| {
            (
                if one { MoveType::One } else { MoveType::Zero },
                BigUint::from(q),
            )
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluate_lands_in_the_permuted_slot(iet in (3usize..7).prop_flat_map(arb_iet), num in 0u64..1000) {
        // x sweeps the domain; T(x) must land in X^τ_{τ(i)} for x ∈ X_i
        let x = BigRational::new(BigInt::from(num), BigInt::from(1000u32)) * iet.total();
        let i = iet.locate(&x).unwrap();
        let y = iet.evaluate(&x).unwrap();
        let slot = iet.perm().tau(i);
        prop_assert!(iet.breakpoint_tau(slot - 1) <= &y && &y < iet.breakpoint_tau(slot));
    }

    #[test]
    fn translation_constant_on_each_interval(iet in (3usize..7).prop_flat_map(arb_iet)) {
        for i in 1..=iet.n() {
            let a = iet.breakpoint(i - 1).clone();
            let b = iet.breakpoint(i).clone();
            let width = &b - &a;
            let three = BigRational::from_integer(3.into());
            let points = [
                a.clone(),
                &a + &width / &three,
                &a + &width * rat(5, 6),
            ];
            let offsets: Vec<BigRational> =
                points.iter().map(|x| iet.evaluate(x).unwrap() - x).collect();
            prop_assert!(offsets.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn lebesgue_preserved_exactly(iet in (3usize..7).prop_flat_map(arb_iet)) {
        // the image slot of X_i has exactly the length of X_i
        for i in 1..=iet.n() {
            let slot = iet.perm().tau(i);
            let image_len = iet.breakpoint_tau(slot) - iet.breakpoint_tau(slot - 1);
            let len = iet.breakpoint(i) - iet.breakpoint(i - 1);
            prop_assert_eq!(image_len, len);
        }
    }

    #[test]
    fn orbit_counts_sum_to_iterations(iet in (3usize..6).prop_flat_map(arb_iet), num in 0u64..997, iters in 1u64..200) {
        let x = BigRational::new(BigInt::from(num), BigInt::from(997u32)) * iet.total();
        let counts = iet.orbit_counts(&x, iters).unwrap();
        prop_assert_eq!(counts.iter().sum::<u64>(), iters);
    }

    #[test]
    fn runword_text_round_trip(word in arb_word(12)) {
        let text = word.to_string();
        let parsed: RunWord = text.parse().unwrap();
        prop_assert_eq!(parsed, word);
    }

    #[test]
    fn word_transition_is_unimodular(perm in (3usize..6).prop_flat_map(irreducible_perm), word in arb_word(6)) {
        let state = RauzyState::from_permutation(&perm).unwrap();
        let (_, theta) = word_transition(&state, &word);
        prop_assert_eq!(theta.determinant(), BigInt::one());
        for c in 0..perm.n() {
            prop_assert!(theta.column_sum(c) >= BigUint::one());
        }
    }

    #[test]
    fn realized_runs_transfer_lengths_exactly(perm in (2usize..6).prop_flat_map(irreducible_perm), nums in proptest::collection::vec(1u64..400, 8)) {
        let n = perm.n();
        let ints: Vec<BigUint> = nums[..n].iter().map(|&v| BigUint::from(v)).collect();
        let lengths = LengthVector::new(
            ints.iter()
                .map(|v| BigRational::from_integer(BigInt::from(v.clone())))
                .collect(),
        )
        .unwrap();
        let iet = Iet::new(perm.clone(), lengths).unwrap();
        let (word, _) = realize_word(&iet, 5).unwrap();
        // transport the post-induction lengths back through the word matrix
        let state = RauzyState::from_permutation(&perm).unwrap();
        let (_, theta) = word_transition(&state, &word);
        let mut after = ints.clone();
        let mut cur = state;
        'outer: for (t, q) in word.runs() {
            let mut left = q.clone();
            while !left.is_zero() {
                let (w, l) = cur.winner_loser(*t);
                if after[w - 1] <= after[l - 1] {
                    break 'outer;
                }
                let dl = after[l - 1].clone();
                after[w - 1] -= dl;
                let (next, _, _) = ietlab::symbolic_step(&cur, *t);
                cur = next;
                left -= 1u32;
            }
        }
        prop_assert_eq!(theta.mul_vec(&after), ints);
    }

    #[test]
    fn realized_step_decreases_total(iet in (2usize..6).prop_flat_map(arb_iet)) {
        match realized_step(&iet) {
            Ok((next, _, q)) => {
                prop_assert!(next.total() < iet.total());
                prop_assert!(q >= BigUint::one());
            }
            Err(ietlab::Error::RauzyTie { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn family_oracle_random_small(n in 4usize..8, a in 1u64..6, c in 1u64..6) {
        let rep = validate_family(n, &BigUint::from(a), &BigUint::from(c)).unwrap();
        prop_assert!(rep.is_ok(), "{:?}", rep);
    }
}

#[test]
fn realize_word_budget_is_respected() {
    let iet = Iet::new(
        Permutation::from_images(vec![2, 1]).unwrap(),
        LengthVector::new(vec![rat(987, 1), rat(610, 1)]).unwrap(),
    )
    .unwrap();
    let (word, reason) = realize_word(&iet, 3).unwrap();
    assert!(word.run_count() <= 3);
    assert_eq!(reason, ietlab::StopReason::MaxRuns);
    let full = realize_word(&iet, 1000).unwrap().0;
    assert!(word.is_prefix_of(&full));
    assert!(full.letter_count().to_u64().unwrap() >= 10);
}
