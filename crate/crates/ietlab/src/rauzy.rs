//! Rauzy induction: symbolic moves on two-row states, run-length encoded
//! words, transition-matrix accumulation, and Zorich-accelerated induction
//! realized by exact lengths.
//!
//! A state is kept in classical two-line notation: `top` lists
//! interval labels in domain order, `bottom` lists the same labels in range
//! order. A type-0 move compares the rightmost intervals of domain and
//! range; the longer one wins. Labels are permanent, so the elementary
//! length-transfer matrix `I + E_{winner,loser}` lives in a fixed label
//! space and `lengths-before = Θ · lengths-after` holds along any path.

use crate::error::{Error, Result};
use crate::iet::{Iet, LengthVector, Permutation};
use crate::matrix::TransitionMatrix;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

/// Rauzy move type: `Zero` when the top-last (domain) interval wins and the
/// bottom-last loses, `One` when the bottom-last (range) interval wins.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum MoveType {
    Zero,
    One,
}

impl MoveType {
    pub fn as_char(self) -> char {
        match self {
            MoveType::Zero => '0',
            MoveType::One => '1',
        }
    }
}

/// A performed move: type plus the winner/loser labels it compared.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RauzyMove {
    pub move_type: MoveType,
    pub winner: usize,
    pub loser: usize,
}

/// Two-row state of labeled Rauzy induction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RauzyState {
    top: Vec<usize>,
    bottom: Vec<usize>,
}

impl RauzyState {
    /// State with identity top row and the given bottom row of labels.
    pub fn from_bottom_row(bottom: Vec<usize>) -> Result<Self> {
        let n = bottom.len();
        let perm = Permutation::from_images(bottom.clone())?;
        perm.check_irreducible()?;
        Ok(RauzyState {
            top: (1..=n).collect(),
            bottom,
        })
    }

    /// State of a plain permutation: identity top, bottom row listing the
    /// labels in range order (`bottom[τ(i)-1] = i`).
    pub fn from_permutation(perm: &Permutation) -> Result<Self> {
        perm.check_irreducible()?;
        let n = perm.n();
        let mut bottom = vec![0; n];
        for i in 1..=n {
            bottom[perm.tau(i) - 1] = i;
        }
        Ok(RauzyState {
            top: (1..=n).collect(),
            bottom,
        })
    }

    pub fn n(&self) -> usize {
        self.top.len()
    }

    pub fn top(&self) -> &[usize] {
        &self.top
    }

    pub fn bottom(&self) -> &[usize] {
        &self.bottom
    }

    /// Reduced single-permutation form of this state: interval at domain position
    /// `k` goes to the range position of its label.
    pub fn to_permutation(&self) -> Permutation {
        let n = self.n();
        let mut pos = vec![0; n + 1];
        for (j, &lab) in self.bottom.iter().enumerate() {
            pos[lab] = j + 1;
        }
        Permutation::from_images(self.top.iter().map(|&lab| pos[lab]).collect())
            .expect("rows are bijections")
    }

    pub fn winner_loser(&self, t: MoveType) -> (usize, usize) {
        let n = self.n();
        match t {
            MoveType::Zero => (self.top[n - 1], self.bottom[n - 1]),
            MoveType::One => (self.bottom[n - 1], self.top[n - 1]),
        }
    }

    /// Whether one step of type `t` leaves the state unchanged.
    pub fn is_self_loop(&self, t: MoveType) -> bool {
        let n = self.n();
        let (w, _) = self.winner_loser(t);
        let row = match t {
            MoveType::Zero => &self.bottom,
            MoveType::One => &self.top,
        };
        row[n - 2] == w
    }

    fn step_in_place(&mut self, t: MoveType) -> RauzyMove {
        let (winner, loser) = self.winner_loser(t);
        debug_assert_ne!(winner, loser, "irreducibility guarantees distinct ends");
        let row = match t {
            MoveType::Zero => &mut self.bottom,
            MoveType::One => &mut self.top,
        };
        row.pop();
        let k = row.iter().position(|&x| x == winner).expect("winner present");
        row.insert(k + 1, loser);
        RauzyMove {
            move_type: t,
            winner,
            loser,
        }
    }
}

impl fmt::Debug for RauzyState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{:?} / {:?}}}", self.top, self.bottom)
    }
}

/// One symbolic Rauzy step: updated state, the move performed, and the
/// elementary transfer matrix `E = I + E_{winner,loser}` with
/// `lengths-before = E · lengths-after`.
pub fn symbolic_step(state: &RauzyState, t: MoveType) -> (RauzyState, RauzyMove, TransitionMatrix) {
    let mut next = state.clone();
    let mv = next.step_in_place(t);
    let e = TransitionMatrix::elementary(state.n(), mv.winner, mv.loser);
    (next, mv, e)
}

/// Run-length encoded word over the alphabet {0, 1}. Canonical form merges
/// adjacent runs of equal type; multiplicities are arbitrary-precision, so
/// the letter count may far exceed machine range.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RunWord {
    runs: Vec<(MoveType, BigUint)>,
}

impl RunWord {
    pub fn empty() -> Self {
        RunWord { runs: Vec::new() }
    }

    pub fn from_runs<I: IntoIterator<Item = (MoveType, BigUint)>>(runs: I) -> Self {
        let mut w = RunWord::empty();
        for (t, q) in runs {
            w.push_run(t, q);
        }
        w
    }

    /// Convenience for small literal words.
    pub fn from_letters(letters: &[u8]) -> Self {
        Self::from_runs(letters.iter().map(|&b| {
            let t = if b == 0 { MoveType::Zero } else { MoveType::One };
            (t, BigUint::one())
        }))
    }

    pub fn push_run(&mut self, t: MoveType, q: BigUint) {
        if q.is_zero() {
            return;
        }
        match self.runs.last_mut() {
            Some((lt, lq)) if *lt == t => *lq += q,
            _ => self.runs.push((t, q)),
        }
    }

    pub fn concat(&mut self, other: &RunWord) {
        for (t, q) in &other.runs {
            self.push_run(*t, q.clone());
        }
    }

    pub fn runs(&self) -> &[(MoveType, BigUint)] {
        &self.runs
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    pub fn letter_count(&self) -> BigUint {
        self.runs.iter().map(|(_, q)| q).sum()
    }

    pub fn is_prefix_of(&self, other: &RunWord) -> bool {
        if self.runs.len() > other.runs.len() {
            return false;
        }
        for (i, (t, q)) in self.runs.iter().enumerate() {
            let (ot, oq) = &other.runs[i];
            if t != ot {
                return false;
            }
            if i + 1 == self.runs.len() {
                if q > oq {
                    return false;
                }
            } else if q != oq {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for RunWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, q) in &self.runs {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if q.is_one() {
                write!(f, "{}", t.as_char())?;
            } else {
                write!(f, "{}^{}", t.as_char(), q)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RunWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RunWord({})", self)
    }
}

impl FromStr for RunWord {
    type Err = Error;

    /// Parses the text form "0 1^3 0^12 1 0^2". Whitespace separates runs;
    /// adjacent runs of the same letter are merged into canonical form.
    fn from_str(s: &str) -> Result<Self> {
        let mut word = RunWord::empty();
        for tok in s.split_whitespace() {
            let mut chars = tok.chars();
            let t = match chars.next() {
                Some('0') => MoveType::Zero,
                Some('1') => MoveType::One,
                other => {
                    return Err(Error::ParseWord(format!(
                        "run must start with '0' or '1', got {other:?}"
                    )))
                }
            };
            let rest = chars.as_str();
            let q = if rest.is_empty() {
                BigUint::one()
            } else {
                let exp = rest.strip_prefix('^').ok_or_else(|| {
                    Error::ParseWord(format!("expected '^' after letter in {tok:?}"))
                })?;
                if exp.is_empty() || !exp.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::ParseWord(format!("bad exponent in {tok:?}")));
                }
                let q = BigUint::parse_bytes(exp.as_bytes(), 10)
                    .ok_or_else(|| Error::ParseWord(format!("bad exponent in {tok:?}")))?;
                if q.is_zero() {
                    return Err(Error::ParseWord(format!("zero multiplicity in {tok:?}")));
                }
                q
            };
            word.push_run(t, q);
        }
        Ok(word)
    }
}

/// Applies a whole run of one letter starting at `state`, returning the new
/// state and the accumulated transfer matrix.
///
/// Within a single-letter run the winner label is fixed (its own row never
/// changes), so the factors `I + E_{w,l}` commute pairwise products into
/// `I + Σ E_{w,l_r}` with a square-zero nilpotent part. The letter map is a
/// bijection on states and the orbit of `state` is a pure cycle; one
/// traversal is multiplied out literally and whole extra traversals are
/// collapsed with the closed form `(I + N)^q = I + qN`.
fn apply_run(state: &RauzyState, t: MoveType, q: &BigUint) -> (RauzyState, TransitionMatrix) {
    let n = state.n();
    let id = TransitionMatrix::identity(n);
    let mut cur = state.clone();
    let mut nil = TransitionMatrix::zero(n); // N over the traversal so far
    let mut done = BigUint::zero();
    while &done < q {
        let mv = cur.step_in_place(t);
        *nil.entry_mut(mv.winner - 1, mv.loser - 1) += 1u32;
        done += 1u32;
        if cur == *state {
            // completed one full cycle of period `done`
            let (cycles, rem) = (q - &done).div_rem(&done);
            let mut acc = id.add_scaled(&nil, &(cycles + 1u32));
            let mut r = rem;
            while !r.is_zero() {
                let mv = cur.step_in_place(t);
                let e = TransitionMatrix::elementary(n, mv.winner, mv.loser);
                acc = &acc * &e;
                r -= 1u32;
            }
            return (cur, acc);
        }
    }
    (cur, id.add_scaled(&nil, &BigUint::one()))
}

/// Left-to-right composition of symbolic steps along a run word:
/// returns the final state and `Θ` with `lengths-before = Θ · lengths-after`.
pub fn word_transition(state: &RauzyState, word: &RunWord) -> (RauzyState, TransitionMatrix) {
    let mut cur = state.clone();
    let mut theta = TransitionMatrix::identity(state.n());
    for (t, q) in word.runs() {
        let (next, m) = apply_run(&cur, *t, q);
        theta = &theta * &m;
        cur = next;
    }
    (cur, theta)
}

/// Why `realize_word` stopped.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StopReason {
    /// Hit the requested run budget.
    MaxRuns,
    /// The two rightmost lengths tied at the given letter index; induction
    /// is undefined past here.
    Tie { step: u64 },
}

/// Mutable induction state over exact integer lengths, indexed by label.
struct Engine {
    state: RauzyState,
    lengths: Vec<BigUint>,
    steps: u64,
}

impl Engine {
    fn new(state: RauzyState, lengths: Vec<BigUint>) -> Self {
        Engine {
            state,
            lengths,
            steps: 0,
        }
    }

    fn length(&self, label: usize) -> &BigUint {
        &self.lengths[label - 1]
    }

    fn move_type(&self) -> Result<MoveType> {
        let n = self.state.n();
        let top_last = self.state.top()[n - 1];
        let bottom_last = self.state.bottom()[n - 1];
        match self.length(top_last).cmp(self.length(bottom_last)) {
            std::cmp::Ordering::Greater => Ok(MoveType::Zero),
            std::cmp::Ordering::Less => Ok(MoveType::One),
            std::cmp::Ordering::Equal => Err(Error::RauzyTie { step: self.steps }),
        }
    }

    /// One maximal accelerated run at a self-loop vertex, or a single step
    /// elsewhere. Returns the move and the number of letters consumed.
    fn accelerated_step(&mut self) -> Result<(RauzyMove, BigUint)> {
        let t = self.move_type()?;
        let (winner, loser) = self.state.winner_loser(t);
        if self.state.is_self_loop(t) {
            let lw = self.length(winner).clone();
            let ll = self.length(loser);
            let (mut q, rem) = lw.div_rem(ll);
            if rem.is_zero() {
                // one more step would zero the winner; stop just before the tie
                q -= 1u32;
            }
            self.lengths[winner - 1] = &lw - &(ll * &q);
            self.steps = self.steps.saturating_add(q.to_u64().unwrap_or(u64::MAX));
            Ok((
                RauzyMove {
                    move_type: t,
                    winner,
                    loser,
                },
                q,
            ))
        } else {
            let mv = self.state.step_in_place(t);
            let ll = self.lengths[loser - 1].clone();
            self.lengths[winner - 1] -= ll;
            self.steps = self.steps.saturating_add(1);
            Ok((mv, BigUint::one()))
        }
    }

    /// Consumes one maximal same-type run of the realized path, collapsing
    /// full cycles of the one-letter orbit in closed form. Returns `None`
    /// at a tie (Keane violation).
    fn consume_run(&mut self) -> Result<Option<(MoveType, BigUint)>> {
        let t = match self.move_type() {
            Ok(t) => t,
            Err(Error::RauzyTie { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let run_start = self.state.clone();
        let (winner, _) = self.state.winner_loser(t);
        let mut letters = BigUint::zero();
        let mut losers_sum = BigUint::zero();
        loop {
            match self.move_type() {
                Ok(cur_t) if cur_t == t => {}
                _ => break,
            }
            let (mv, q) = self.accelerated_step()?;
            debug_assert_eq!(mv.winner, winner);
            letters += &q;
            losers_sum += self.length(mv.loser) * &q;
            if self.state == run_start && !self.state.is_self_loop(t) {
                // The letter map is a bijection, so the run's orbit is a
                // pure cycle: we are back at its base after exactly
                // `letters` single steps, the winner having lost
                // `losers_sum`. Another full traversal is possible iff
                // λ_winner > losers_sum, so jump the largest j with
                // λ_winner > j · losers_sum. Any partial remainder is
                // single-stepped on the next pass; `push_run` merges it
                // into the same canonical run.
                let lw = self.length(winner).clone();
                if lw > losers_sum {
                    let extra = (&lw - 1u32) / &losers_sum;
                    if !extra.is_zero() {
                        self.lengths[winner - 1] = &lw - &(&losers_sum * &extra);
                        let per_cycle = letters.clone();
                        let jumped = &extra * &per_cycle;
                        self.steps = self
                            .steps
                            .saturating_add(jumped.to_u64().unwrap_or(u64::MAX));
                        letters += jumped;
                    }
                }
                // the run is not over: at most one partial traversal
                // remains and is consumed by the surrounding loop
            }
        }
        Ok(Some((t, letters)))
    }

    fn realize_into(&mut self, word: &mut RunWord, max_runs: usize) -> Result<StopReason> {
        loop {
            if word.run_count() >= max_runs {
                return Ok(StopReason::MaxRuns);
            }
            match self.consume_run()? {
                None => return Ok(StopReason::Tie { step: self.steps }),
                Some((t, letters)) => word.push_run(t, letters),
            }
        }
    }
}

/// Runs accelerated induction on integer lengths until exactly
/// `target_letters` single Rauzy steps have been consumed, and checks that
/// the two-row state is back at the starting vertex there. The realized
/// maximal runs must tile the target exactly (the path's type flips at
/// cycle-word boundaries), so a straddling run or a wrong final vertex
/// reports divergence. Returns the induced integer lengths (by label).
pub(crate) fn induce_letters(
    perm: &Permutation,
    lengths: Vec<BigUint>,
    target_letters: &BigUint,
    max_steps: u64,
) -> Result<Vec<BigUint>> {
    let base = RauzyState::from_permutation(perm)?;
    let mut engine = Engine::new(base.clone(), lengths);
    let mut consumed = BigUint::zero();
    while &consumed < target_letters {
        match engine.consume_run()? {
            None => return Err(Error::RauzyTie { step: engine.steps }),
            Some((_, letters)) => consumed += letters,
        }
        if engine.steps > max_steps {
            return Err(Error::BudgetExceeded {
                needed: format!("more than {}", engine.steps),
                budget: max_steps,
            });
        }
    }
    if consumed != *target_letters || engine.state != base {
        return Err(Error::PathDivergence {
            letters: consumed.to_string(),
        });
    }
    Ok(engine.lengths)
}

/// Clears denominators: the induction path only depends on length ratios.
fn integer_lengths(iet: &Iet) -> Vec<BigUint> {
    let entries = iet.lengths().entries();
    let mut denom_lcm = BigInt::one();
    for e in entries {
        denom_lcm = denom_lcm.lcm(e.denom());
    }
    entries
        .iter()
        .map(|e| {
            let scaled = e * BigRational::from_integer(denom_lcm.clone());
            scaled
                .to_integer()
                .to_biguint()
                .expect("positive lengths stay positive")
        })
        .collect()
}

/// One Zorich-accelerated induction step on an exact IET.
///
/// At a self-loop vertex this performs `q = ⌊λ_winner / λ_loser⌋` same-type
/// steps at once (one fewer when the division is exact, which would zero the
/// winner); elsewhere it performs a single step. Returns the induced IET,
/// the move, and the multiplicity.
pub fn realized_step(iet: &Iet) -> Result<(Iet, RauzyMove, BigUint)> {
    let state = RauzyState::from_permutation(iet.perm())?;
    let scale = {
        let ints = integer_lengths(iet);
        let total_int: BigUint = ints.iter().sum();
        let total_rat = iet.total().clone();
        (ints, total_rat / BigRational::from_integer(total_int.into()))
    };
    let (ints, unit) = scale;
    let mut engine = Engine::new(state, ints);
    let (mv, q) = engine.accelerated_step()?;
    let induced = engine_to_iet(&engine, &unit)?;
    Ok((induced, mv, q))
}

fn engine_to_iet(engine: &Engine, unit: &BigRational) -> Result<Iet> {
    let perm = engine.state.to_permutation();
    let lengths = LengthVector::new(
        engine
            .state
            .top()
            .iter()
            .map(|&lab| BigRational::from_integer(BigInt::from(engine.length(lab).clone())) * unit)
            .collect(),
    )?;
    Iet::new(perm, lengths)
}

/// Iterates accelerated induction, emitting the canonical run word the
/// lengths realize. Stops after `max_runs` canonical runs or at a tie
/// (Keane violation); the word accumulated so far is returned either way.
pub fn realize_word(iet: &Iet, max_runs: usize) -> Result<(RunWord, StopReason)> {
    let state = RauzyState::from_permutation(iet.perm())?;
    let mut engine = Engine::new(state, integer_lengths(iet));
    let mut word = RunWord::empty();
    let reason = engine.realize_into(&mut word, max_runs)?;
    Ok((word, reason))
}
