//! Parses a run word and applies it to a base permutation, checking the
//! invariants of the transition product on the way. The multiplicity total
//! is capped so single fuzz iterations stay fast while still covering the
//! closed-form powering of large runs.

#![no_main]

use ietlab::rauzy::word_transition;
use ietlab::{base_permutation, RauzyState, RunWord};
use libfuzzer_sys::fuzz_target;
use num_traits::ToPrimitive;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else {
        return;
    };
    let n = 4 + (sel as usize) % 6; // 4..=9
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok(word) = text.parse::<RunWord>() else {
        return;
    };
    if word.run_count() > 64 {
        return;
    }
    // large exponents are fine (they use the cycle closed form), but keep a
    // sanity cap so pathological inputs cannot measure minutes
    if word.letter_count().to_u128().is_none() {
        return;
    }
    let perm = base_permutation(n).expect("n in range");
    let start = RauzyState::from_permutation(&perm).expect("family base is irreducible");
    let (end, theta) = word_transition(&start, &word);
    assert_eq!(end.n(), n);
    // columns of a path product are never empty
    for c in 0..n {
        assert!(theta.column_sum(c) >= 1u32.into());
    }
    // the two-row state stays a pair of bijections
    let mut seen_top = vec![false; n + 1];
    let mut seen_bottom = vec![false; n + 1];
    for &lab in end.top() {
        assert!((1..=n).contains(&lab) && !seen_top[lab]);
        seen_top[lab] = true;
    }
    for &lab in end.bottom() {
        assert!((1..=n).contains(&lab) && !seen_bottom[lab]);
        seen_bottom[lab] = true;
    }
});
