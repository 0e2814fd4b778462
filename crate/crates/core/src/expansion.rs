//! Quasi-greedy β-expansions over `Ω_m` and the lexicographic uniqueness
//! test for expansions.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rat, RatInterval};
use crate::sequence::{beta_series_eval, Alphabet, Digit, EpSequence};

/// Default comparison depth for lexicographic tests.
pub const DEFAULT_DEPTH_CAP: usize = 4096;

/// Outcome of a semi-decidable test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
    /// Some comparison was still tied at this depth.
    Undetermined(usize),
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    /// `None` when undetermined.
    pub fn decided(self) -> Option<bool> {
        match self {
            Verdict::Yes => Some(true),
            Verdict::No => Some(false),
            Verdict::Undetermined(_) => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes => f.write_str("yes"),
            Verdict::No => f.write_str("no"),
            Verdict::Undetermined(_) => f.write_str("undetermined"),
        }
    }
}

/// An infinite digit stream that lexicographic tests can compare against.
pub trait DigitSource: Sync {
    /// Zero-based digit access.
    fn digit(&self, i: usize) -> Digit;

    /// The stream as an eventually periodic sequence, if that is known.
    fn exact_form(&self) -> Option<EpSequence> {
        None
    }
}

impl DigitSource for EpSequence {
    fn digit(&self, i: usize) -> Digit {
        EpSequence::digit(self, i)
    }

    fn exact_form(&self) -> Option<EpSequence> {
        Some(self.clone())
    }
}

fn check_base(beta: &Rat, m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParams(format!("alphabet size m = {m} must be at least 2")));
    }
    let lower = Rat::new(1.into(), (m as i64).into());
    if *beta <= lower || *beta >= Rat::one() {
        return Err(Error::InvalidParams(format!("base {beta} must lie in (1/{m}, 1)")));
    }
    Ok(())
}

/// Largest `(m-1)β/(1-β)` reachable with digits in `Ω_m`.
pub fn x_max(beta: &Rat, m: u32) -> Rat {
    int(m as i64 - 1) * beta / (Rat::one() - beta)
}

/// One quasi-greedy step on the scaled remainder `y`: returns the digit and
/// the next remainder.
fn qg_step(y: &Rat, beta: &Rat, m: u32) -> (Digit, Rat) {
    let ratio = y / beta;
    let candidate = ratio.ceil().to_integer() - 1;
    let top = num_bigint::BigInt::from(m - 1);
    let d = if candidate > top { top } else { candidate };
    let d: Digit = d.try_into().expect("quasi-greedy digit fits in i32");
    (d, ratio - int(d as i64))
}

/// First `len` digits of the quasi-greedy expansion of `x` in base `beta`
/// with digit set `Ω_m`.
pub fn quasi_greedy(x: &Rat, beta: &Rat, m: u32, len: usize) -> Result<Vec<Digit>> {
    check_base(beta, m)?;
    if *x <= Rat::zero() || *x > x_max(beta, m) {
        return Err(Error::Domain(format!("x = {x} must lie in (0, {}]", x_max(beta, m))));
    }
    let mut y = x.clone();
    let mut digits = Vec::with_capacity(len);
    for _ in 0..len {
        let (d, next) = qg_step(&y, beta, m);
        digits.push(d);
        y = next;
    }
    Ok(digits)
}

struct DeltaState {
    digits: Vec<Digit>,
    remainder: Rat,
    seen: HashMap<Rat, usize>,
    /// `(preperiod length, period length)` once a remainder repeats.
    cycle: Option<(usize, usize)>,
}

/// Memoized quasi-greedy expansion of 1, `δ(β)`, over `Ω_m`.
///
/// The stream records every remainder it visits. A repeated remainder
/// proves that `δ(β)` is eventually periodic, and [`DigitSource::exact_form`]
/// then returns it exactly.
pub struct DeltaStream {
    beta: Rat,
    m: u32,
    state: Mutex<DeltaState>,
}

impl DeltaStream {
    pub fn new(beta: Rat, m: u32) -> Result<Self> {
        check_base(&beta, m)?;
        Ok(DeltaStream {
            beta,
            m,
            state: Mutex::new(DeltaState {
                digits: Vec::new(),
                remainder: Rat::one(),
                seen: HashMap::new(),
                cycle: None,
            }),
        })
    }

    pub fn beta(&self) -> &Rat {
        &self.beta
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn extend_to(&self, state: &mut DeltaState, len: usize) {
        while state.digits.len() < len {
            if let Some((pre, per)) = state.cycle {
                let i = state.digits.len();
                let d = state.digits[pre + (i - pre) % per];
                state.digits.push(d);
                continue;
            }
            let index = state.digits.len();
            if let Some(&first) = state.seen.get(&state.remainder) {
                state.cycle = Some((first, index - first));
                continue;
            }
            state.seen.insert(state.remainder.clone(), index);
            let (d, next) = qg_step(&state.remainder, &self.beta, self.m);
            state.digits.push(d);
            state.remainder = next;
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<Digit> {
        let mut state = self.state.lock().unwrap();
        self.extend_to(&mut state, len);
        state.digits[..len].to_vec()
    }
}

impl DigitSource for DeltaStream {
    fn digit(&self, i: usize) -> Digit {
        let mut state = self.state.lock().unwrap();
        self.extend_to(&mut state, i + 1);
        state.digits[i]
    }

    fn exact_form(&self) -> Option<EpSequence> {
        let state = self.state.lock().unwrap();
        let (pre, per) = state.cycle?;
        EpSequence::new(
            Alphabet::Unsigned(self.m),
            state.digits[..pre].to_vec(),
            state.digits[pre..pre + per].to_vec(),
        )
        .ok()
    }
}

type DeltaCache = Mutex<HashMap<(Rat, u32), Arc<DeltaStream>>>;

/// Shared, memoized `δ(β)` stream for `(beta, m)`.
pub fn delta_of_beta(beta: &Rat, m: u32) -> Result<Arc<DeltaStream>> {
    static CACHE: OnceLock<DeltaCache> = OnceLock::new();
    check_base(beta, m)?;
    let cache = CACHE.get_or_init(Default::default);
    let mut map = cache.lock().unwrap();
    let stream = map
        .entry((beta.clone(), m))
        .or_insert_with(|| Arc::new(DeltaStream::new(beta.clone(), m).expect("base checked")));
    Ok(Arc::clone(stream))
}

/// First `len` digits of `δ(β)`.
pub fn delta_prefix(beta: &Rat, m: u32, len: usize) -> Result<Vec<Digit>> {
    Ok(delta_of_beta(beta, m)?.prefix(len))
}

/// How the base of an expansion of 1 is known.
#[derive(Clone, Debug)]
pub enum Base {
    Exact(Rat),
    /// An enclosure of an (irrational) base; the sequence must change the
    /// sign of `Σ γ_ℓ β^ℓ - 1` across it.
    Enclosed(RatInterval),
}

/// `σ^k(γ) <= γ` for every `k >= 1`.
pub fn satisfies_quasi_greedy_order(gamma: &EpSequence) -> bool {
    (1..=gamma.distinct_shifts()).all(|k| gamma.shift(k).lex_cmp(gamma) != Ordering::Greater)
}

/// Decide whether `gamma` is the quasi-greedy expansion of 1 in the given
/// base. Fails with [`Error::NotAnExpansionOfOne`] when `gamma` is not an
/// infinite expansion of 1 at all.
pub fn is_quasi_greedy_valid(gamma: &EpSequence, base: &Base, m: u32) -> Result<bool> {
    if gamma.alphabet() != Alphabet::Unsigned(m) {
        return Err(Error::AlphabetMismatch(gamma.alphabet().to_string(), Alphabet::Unsigned(m).to_string()));
    }
    if !gamma.is_infinite_expansion() {
        return Err(Error::NotAnExpansionOfOne("finitely many nonzero digits".into()));
    }
    match base {
        Base::Exact(beta) => {
            check_base(beta, m)?;
            let value = beta_series_eval(gamma, beta);
            if value != Rat::one() {
                return Err(Error::NotAnExpansionOfOne(format!("series value is {value}")));
            }
        }
        Base::Enclosed(interval) => {
            let at_lo = beta_series_eval(gamma, &interval.lo) - Rat::one();
            let at_hi = beta_series_eval(gamma, &interval.hi) - Rat::one();
            if at_lo > Rat::zero() || at_hi < Rat::zero() {
                return Err(Error::NotAnExpansionOfOne("no root of Σγβ^ℓ = 1 in the enclosure".into()));
            }
        }
    }
    Ok(satisfies_quasi_greedy_order(gamma))
}

/// Result of comparing an eventually periodic sequence with a stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamOrder {
    Less,
    Greater,
    /// Proven equal through the stream's exact form.
    Equal,
    /// Equal on the first `depth` digits, nothing more known.
    Tied(usize),
}

/// Compare `seq` against `source` digit by digit up to `cap` positions.
pub fn compare_to_source(seq: &EpSequence, source: &dyn DigitSource, cap: usize) -> StreamOrder {
    for i in 0..cap {
        match seq.digit(i).cmp(&source.digit(i)) {
            Ordering::Less => return StreamOrder::Less,
            Ordering::Greater => return StreamOrder::Greater,
            Ordering::Equal => {}
        }
    }
    match source.exact_form() {
        Some(exact) => match seq.lex_cmp(&exact) {
            Ordering::Less => StreamOrder::Less,
            Ordering::Greater => StreamOrder::Greater,
            Ordering::Equal => StreamOrder::Equal,
        },
        None => StreamOrder::Tied(cap),
    }
}

/// Lexicographic uniqueness test for the β-expansion `eps` over `Ω_m`:
/// for every `k >= 1`, `σ^k(ε) < δ` when `ε_k < m-1`, and
/// `reflect(σ^k(ε)) < δ` when `ε_k > 0`. `delta` supplies `δ(β)`.
pub fn unique_expansion_test(eps: &EpSequence, delta: &dyn DigitSource, depth_cap: usize) -> Result<Verdict> {
    let m = match eps.alphabet() {
        Alphabet::Unsigned(m) => m,
        other => return Err(Error::AlphabetMismatch(other.to_string(), "Ω_m".into())),
    };
    let top = m as Digit - 1;
    let mut undetermined = false;
    for k in 1..=eps.distinct_shifts() {
        let digit = eps.digit(k - 1);
        let tail = eps.shift(k);
        let mut checks = Vec::with_capacity(2);
        if digit < top {
            checks.push(tail.clone());
        }
        if digit > 0 {
            checks.push(tail.reflect()?);
        }
        for seq in checks {
            match compare_to_source(&seq, delta, depth_cap) {
                StreamOrder::Less => {}
                StreamOrder::Greater | StreamOrder::Equal => return Ok(Verdict::No),
                StreamOrder::Tied(_) => undetermined = true,
            }
        }
    }
    Ok(if undetermined {
        Verdict::Undetermined(depth_cap)
    } else {
        Verdict::Yes
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{pow, rat};

    #[test]
    fn quasi_greedy_of_x_max_is_all_top_digits() {
        let beta = rat(2, 5);
        let digits = quasi_greedy(&x_max(&beta, 3), &beta, 3, 12).unwrap();
        assert_eq!(digits, vec![2; 12]);
    }

    #[test]
    fn quasi_greedy_steps_are_maximal() {
        let beta = rat(2, 5);
        let digits = quasi_greedy(&Rat::one(), &beta, 3, 8).unwrap();
        // Independent check: at every step the chosen digit keeps the partial
        // sum strictly below 1 and the next digit up would not.
        let mut partial = Rat::zero();
        for (i, &d) in digits.iter().enumerate() {
            let weight = pow(&beta, i + 1);
            for candidate in 0..3 {
                let sum = &partial + int(candidate) * &weight;
                assert_eq!(sum < Rat::one(), candidate <= d as i64, "step {i}");
            }
            partial += int(d as i64) * &weight;
        }
        assert_eq!(digits, vec![2, 1, 0, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn quasi_greedy_rejects_out_of_range() {
        let beta = rat(2, 5);
        assert!(quasi_greedy(&Rat::zero(), &beta, 3, 4).is_err());
        assert!(quasi_greedy(&int(2), &beta, 3, 4).is_err());
        assert!(quasi_greedy(&Rat::one(), &rat(1, 4), 3, 4).is_err());
    }

    #[test]
    fn delta_first_digit_near_lower_end() {
        // β just above 1/m: δ_1 is the largest s with sβ < 1.
        let beta = rat(1, 3) + rat(1, 1000);
        let delta = delta_prefix(&beta, 3, 4).unwrap();
        assert_eq!(delta[0], 2);
        let beta = rat(3, 5);
        assert_eq!(delta_prefix(&beta, 3, 1).unwrap()[0], 1);
    }

    #[test]
    fn delta_at_one_over_n_is_n_minus_one_repeated() {
        for n in 2..6i64 {
            let m = (2 * n - 1) as u32;
            let stream = DeltaStream::new(rat(1, n), m).unwrap();
            assert_eq!(stream.prefix(16), vec![(n - 1) as Digit; 16]);
            assert_eq!(stream.exact_form(), Some(EpSequence::constant(Alphabet::Unsigned(m), (n - 1) as Digit).unwrap()));
        }
    }

    #[test]
    fn quasi_greedy_validity() {
        let m = 3;
        let gamma = EpSequence::constant(Alphabet::Unsigned(m), 1).unwrap();
        assert!(is_quasi_greedy_valid(&gamma, &Base::Exact(rat(1, 2)), m).unwrap());
        // γ_2 > γ_1 fails the order condition regardless of base.
        let bad = EpSequence::new(Alphabet::Unsigned(m), vec![0, 2], vec![1]).unwrap();
        assert!(!satisfies_quasi_greedy_order(&bad));
        // Not an expansion of 1 at all.
        assert!(matches!(
            is_quasi_greedy_valid(&gamma, &Base::Exact(rat(2, 5)), m),
            Err(Error::NotAnExpansionOfOne(_))
        ));
        let finite = EpSequence::new(Alphabet::Unsigned(m), vec![2], vec![0]).unwrap();
        assert!(matches!(
            is_quasi_greedy_valid(&finite, &Base::Exact(rat(1, 2)), m),
            Err(Error::NotAnExpansionOfOne(_))
        ));
    }

    #[test]
    fn uniqueness_of_constant_sequences() {
        let beta = rat(2, 5);
        let delta = delta_of_beta(&beta, 3).unwrap();
        for d in [0, 2] {
            let eps = EpSequence::constant(Alphabet::Unsigned(3), d).unwrap();
            assert_eq!(unique_expansion_test(&eps, delta.as_ref(), 256).unwrap(), Verdict::Yes);
        }
    }

    #[test]
    fn tail_of_centre_digits_is_unique_above_critical_base() {
        // N = 2, β in (β_c, 1/2): δ(β) > 1^∞ strictly.
        let beta = rat(45, 100);
        let delta = delta_of_beta(&beta, 3).unwrap();
        let eps = EpSequence::new(Alphabet::Unsigned(3), vec![2], vec![1]).unwrap();
        assert_eq!(unique_expansion_test(&eps, delta.as_ref(), 512).unwrap(), Verdict::Yes);
        assert_eq!(unique_expansion_test(&eps.reflect().unwrap(), delta.as_ref(), 512).unwrap(), Verdict::Yes);
    }

    #[test]
    fn recurrent_delta_proves_equality() {
        // δ(1/2) over Ω_3 is 1^∞; a tail equal to it violates strictness.
        let delta = DeltaStream::new(rat(1, 2), 3).unwrap();
        let eps = EpSequence::new(Alphabet::Unsigned(3), vec![0], vec![1]).unwrap();
        assert_eq!(unique_expansion_test(&eps, &delta, 64).unwrap(), Verdict::No);
    }
}
