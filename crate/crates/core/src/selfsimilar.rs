//! Self-similarity of `Γ ∩ (Γ + t)`: strong periodicity, the generating
//! IFS, dimensions, and the `Ψ` / forbidden-block tools used in shifted
//! coordinates.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::Verdict;
use crate::rational::{int, ln_enclosure, pow, Rat, RatInterval};
use crate::sequence::{pi_eval, shift_code_m_to_pm, Alphabet, Digit, EpSequence, Params, Word};
use crate::uniqueness::{unique_exact, unique_lex, TranslationCode};

/// `s = I J^∞` with `|I| = |J| = q` and `I ≼ J` digitwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongPeriodicityWitness {
    pub q: usize,
    pub i: Word,
    pub j: Word,
}

impl StrongPeriodicityWitness {
    /// `τ = J - I`.
    pub fn tau(&self) -> Vec<Digit> {
        self.j.digits().iter().zip(self.i.digits()).map(|(j, i)| j - i).collect()
    }

    /// The sequence `I J^∞`.
    pub fn sequence(&self) -> EpSequence {
        EpSequence::new(self.i.alphabet(), self.i.digits().to_vec(), self.j.digits().to_vec()).expect("witness digits are in range")
    }
}

/// `s_{ℓ+q} >= s_ℓ` for every `ℓ >= 1`. Positions past
/// `|pre| + lcm(q, |per|) + q` repeat earlier comparisons.
pub fn block_criterion(s: &EpSequence, q: usize) -> bool {
    assert!(q >= 1);
    let horizon = s.preperiod().len() + q.lcm(&s.period().len()) + q;
    (0..horizon).all(|l| s.digit(l + q) >= s.digit(l))
}

/// Search bound for the period in [`is_strongly_periodic`].
pub fn search_bound(s: &EpSequence) -> usize {
    s.preperiod().len() + 2 * s.period().len() + 2
}

/// Decide whether `s` (over `Ω_N`) is strongly periodic.
///
/// If the criterion holds for some `q`, the cyclic inequalities on the
/// periodic part force `|per|` to divide `q`, and they then also hold for
/// the smallest multiple `q*` of `|per|` with `q* >= max(|pre|, 1)`. The
/// witness is built at `q*`, where `s = s|q* (s_{q*+1}…s_{2q*})^∞`.
pub fn is_strongly_periodic(s: &EpSequence) -> Option<StrongPeriodicityWitness> {
    (1..=search_bound(s)).find(|&q| block_criterion(s, q))?;
    let p = s.period().len();
    let q = s.preperiod().len().max(1).div_ceil(p) * p;
    let digits = s.prefix(2 * q);
    let alphabet = s.alphabet();
    let i = Word::new(alphabet, digits[..q].to_vec()).ok()?;
    let j = Word::new(alphabet, digits[q..].to_vec()).ok()?;
    debug_assert!(i.digits().iter().zip(j.digits()).all(|(a, b)| a <= b));
    Some(StrongPeriodicityWitness { q, i, j })
}

/// `(N - 1 - |t_ℓ|)` over `Ω_N`: the digit bounds of `Γ_t`.
pub fn derived_sequence(tc: &TranslationCode) -> EpSequence {
    let n = tc.params().n();
    tc.code().map(Alphabet::Unsigned(n), |t| n as Digit - 1 - t.abs())
}

fn require_unique(tc: &TranslationCode) -> Result<()> {
    if unique_exact(tc) {
        Ok(())
    } else {
        Err(Error::NotUnique)
    }
}

/// Membership of `t` in `𝒮`: `Some(witness)` iff the intersection is
/// self-similar.
pub fn in_s(tc: &TranslationCode) -> Result<Option<StrongPeriodicityWitness>> {
    require_unique(tc)?;
    Ok(is_strongly_periodic(&derived_sequence(tc)))
}

/// Maps `x ↦ ratio·(x + s)`, one per offset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IfsSpec {
    pub ratio: Rat,
    pub offsets: Vec<Rat>,
}

impl IfsSpec {
    pub fn apply(&self, offset: &Rat, x: &Rat) -> Rat {
        &self.ratio * (x + offset)
    }
}

/// The IFS `{x ↦ β^q (x + s)}` with
/// `s = β^{-q} Σ_{ℓ≤2q} j_ℓ β^{ℓ-1} (1-β)/(N-1)` over all `j ≼ στ`.
pub fn build_ifs(w: &StrongPeriodicityWitness, p: &Params) -> IfsSpec {
    let beta = p.beta();
    let c = p.spacing();
    let mut bounds: Vec<Digit> = w.i.digits().to_vec();
    bounds.extend(w.tau());
    let ratio = pow(beta, w.q);
    let weights: Vec<Rat> = (0..bounds.len()).map(|l| pow(beta, l) * &c / &ratio).collect();
    let mut offsets = vec![Rat::zero()];
    for (bound, weight) in bounds.iter().zip(&weights) {
        offsets = offsets
            .iter()
            .flat_map(|s| (0..=*bound).map(move |d| s + weight * int(d as i64)))
            .collect();
    }
    offsets.sort();
    offsets.dedup();
    IfsSpec { ratio, offsets }
}

/// Outcome of [`verify_ifs`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IfsCheck {
    Verified,
    /// First endpoint at which the two interval unions differ.
    Mismatch { point: Rat },
}

type Intervals = Vec<(Rat, Rat)>;

fn merge(mut intervals: Intervals) -> Intervals {
    intervals.sort();
    let mut out: Intervals = Vec::with_capacity(intervals.len());
    for (lo, hi) in intervals {
        match out.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Level-`k` cover of `π(∏ {0..a_ℓ})`: one hull per admissible prefix.
pub fn product_cover(a: &EpSequence, p: &Params, k: usize) -> Intervals {
    let beta = p.beta();
    let c = p.spacing();
    let tail = pow(beta, k) * pi_eval(&a.shift(k), p);
    let mut lefts = vec![Rat::zero()];
    let mut weight = c;
    for l in 0..k {
        let bound = a.digit(l);
        lefts = lefts
            .iter()
            .flat_map(|x| (0..=bound).map(|d| x + &weight * int(d as i64)).collect::<Vec<_>>())
            .collect();
        weight *= beta;
    }
    merge(lefts.into_iter().map(|x| (x.clone(), x + &tail)).collect())
}

/// Compare `∪ f_s(C_k)` with `C_{k+q}`, where `C_k` is the level-`k` cover
/// of `π(∏{0..a_ℓ})` and `a` is the upper digit sequence. Both are finite
/// unions of closed rational intervals, and they coincide exactly when the
/// IFS generates the product set (`k` is raised to at least `q`).
pub fn verify_ifs_for_product(spec: &IfsSpec, a: &EpSequence, p: &Params, q: usize, depth: usize) -> IfsCheck {
    let k = depth.max(q);
    let base = product_cover(a, p, k);
    let image = merge(
        spec.offsets
            .iter()
            .flat_map(|s| base.iter().map(move |(lo, hi)| (spec.apply(s, lo), spec.apply(s, hi))))
            .collect(),
    );
    let target = product_cover(a, p, k + q);
    let flat = |v: &Intervals| v.iter().flat_map(|(l, h)| [l.clone(), h.clone()]).collect::<Vec<_>>();
    let (x, y) = (flat(&image), flat(&target));
    for (u, v) in x.iter().zip(&y) {
        if u != v {
            return IfsCheck::Mismatch {
                point: if u < v { u.clone() } else { v.clone() },
            };
        }
    }
    match x.len().cmp(&y.len()) {
        std::cmp::Ordering::Equal => IfsCheck::Verified,
        std::cmp::Ordering::Less => IfsCheck::Mismatch { point: y[x.len()].clone() },
        std::cmp::Ordering::Greater => IfsCheck::Mismatch { point: x[y.len()].clone() },
    }
}

/// [`verify_ifs_for_product`] for `Γ_t` of a translation code. The
/// exponent `q` is recovered from `ratio = β^q`.
pub fn verify_ifs(spec: &IfsSpec, tc: &TranslationCode, depth: usize) -> Result<IfsCheck> {
    let p = tc.params();
    let mut q = 0;
    let mut r = Rat::one();
    while r > spec.ratio {
        r *= p.beta();
        q += 1;
    }
    if r != spec.ratio || q == 0 {
        return Err(Error::Domain("IFS ratio is not a positive power of β".into()));
    }
    Ok(verify_ifs_for_product(spec, &derived_sequence(tc), p, q, depth))
}

/// Hausdorff and packing dimension of `Γ ∩ (Γ + t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub dim_h: RatInterval,
    pub dim_p: RatInterval,
}

/// Precision (bits) of the logarithm enclosures in [`dims`].
pub const DIM_BITS: u32 = 80;

/// `Σ_{per} ln(N - |t_ℓ|) / (|per| · (-ln β))`. The preperiod does not
/// affect the limit, and both dimensions coincide for eventually periodic
/// codes.
pub fn dims(tc: &TranslationCode) -> Result<DimensionReport> {
    require_unique(tc)?;
    let n = tc.params().n() as Digit;
    let period = tc.code().period();
    let product: i64 = period.iter().map(|t| (n - t.abs()) as i64).product();
    let dim = if product == 1 {
        RatInterval::point(Rat::zero())
    } else {
        let num = ln_enclosure(&int(product), DIM_BITS)?;
        let den = ln_enclosure(tc.params().beta(), DIM_BITS)?.scale(&-int(period.len() as i64));
        num.div(&den)?
    };
    Ok(DimensionReport {
        dim_h: dim.clone(),
        dim_p: dim,
    })
}

/// `Ψ(ε) = N - 1 - |ε - N + 1|`.
pub fn psi(n: u32, e: Digit) -> Digit {
    let top = n as Digit - 1;
    top - (e - top).abs()
}

fn check_centred(alphabet: Alphabet) -> Result<u32> {
    match alphabet {
        Alphabet::Unsigned(m) if m % 2 == 1 && m >= 3 => Ok(m.div_ceil(2)),
        other => Err(Error::AlphabetMismatch(other.to_string(), "Ω_{2N-1}".into())),
    }
}

/// Digitwise `Ψ` on a word over `Ω_{2N-1}`.
pub fn psi_word(w: &Word) -> Result<Word> {
    let n = check_centred(w.alphabet())?;
    Word::new(Alphabet::Unsigned(n), w.digits().iter().map(|&e| psi(n, e)).collect())
}

/// `Ψ_∞` on an eventually periodic sequence over `Ω_{2N-1}`.
pub fn psi_seq(s: &EpSequence) -> Result<EpSequence> {
    let n = check_centred(s.alphabet())?;
    Ok(s.map(Alphabet::Unsigned(n), |e| psi(n, e)))
}

/// An occurrence of a forbidden block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenBlock {
    /// Zero-based start position.
    pub position: usize,
    pub block: Vec<Digit>,
}

/// Match `τ c (N-1)^k c` at `start`, with `τ` in `heads`. Returns the block
/// length.
fn match_block(digit: impl Fn(usize) -> Option<Digit>, start: usize, heads: [Digit; 2], c: Digit, filler: Digit, max_run: usize) -> Option<usize> {
    let first = digit(start)?;
    if !heads.contains(&first) || digit(start + 1)? != c {
        return None;
    }
    let mut i = start + 2;
    while i - start - 2 <= max_run {
        let d = digit(i)?;
        if d == c {
            return Some(i - start + 1);
        }
        if d != filler {
            return None;
        }
        i += 1;
    }
    None
}

fn scan(n: u32, len: usize, max_run: usize, digit: impl Fn(usize) -> Option<Digit> + Copy) -> Vec<ForbiddenBlock> {
    let n = n as Digit;
    let mut found = Vec::new();
    for start in 0..len {
        let up = match_block(digit, start, [n - 2, n - 1], n, n - 1, max_run);
        let down = match_block(digit, start, [n, n - 1], n - 2, n - 1, max_run);
        for block_len in [up, down].into_iter().flatten() {
            found.push(ForbiddenBlock {
                position: start,
                block: (start..start + block_len).map(|i| digit(i).unwrap()).collect(),
            });
        }
    }
    found
}

/// Forbidden blocks `τ N (N-1)^k N` and `τ̄ (N-2) (N-1)^k (N-2)`
/// (`τ ∈ {N-2, N-1}`) in a finite word over `Ω_{2N-1}`.
pub fn forbidden_blocks_in(digits: &[Digit], n: u32) -> Vec<ForbiddenBlock> {
    scan(n, digits.len(), digits.len(), |i| digits.get(i).copied())
}

/// Forbidden blocks starting within the first `|pre| + |per|` positions of
/// an eventually periodic sequence; later starts repeat these.
pub fn forbidden_block_check(s: &EpSequence, n: u32) -> Result<Vec<ForbiddenBlock>> {
    if s.alphabet() != Alphabet::Unsigned(2 * n - 1) {
        return Err(Error::AlphabetMismatch(s.alphabet().to_string(), Alphabet::Unsigned(2 * n - 1).to_string()));
    }
    // A run of N-1 longer than |pre| + |per| never ends.
    let max_run = s.distinct_shifts() + 1;
    Ok(scan(n, s.distinct_shifts(), max_run, |i| Some(s.digit(i))))
}

/// Membership in `𝒮 + 1` for an expansion over `Ω_{2N-1}`: unique by the
/// lexicographic test and `Ψ_∞(ε)` strongly periodic.
pub fn s_membership_shifted(eps: &EpSequence, p: &Params, depth_cap: usize) -> Result<Verdict> {
    if eps.alphabet() != Alphabet::Unsigned(p.m()) {
        return Err(Error::AlphabetMismatch(eps.alphabet().to_string(), Alphabet::Unsigned(p.m()).to_string()));
    }
    let tc = TranslationCode::new(shift_code_m_to_pm(eps)?, p.clone())?;
    let periodic = is_strongly_periodic(&psi_seq(eps)?).is_some();
    Ok(match unique_lex(&tc, depth_cap)? {
        Verdict::Yes => Verdict::from_bool(periodic),
        other => other,
    })
}
