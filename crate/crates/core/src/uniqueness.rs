//! Translations `t` whose `Ω_±N`-code is unique: three independent
//! deciders (exact tail sums, lexicographic comparison with `δ(β)`,
//! remainder enumeration), the geometric neighborhood oracle, and the
//! subshift lower bound for the dimension of `𝒰`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::admissible::{xi_eta, LambdaSource};
use crate::critical::beta_n;
use crate::error::{Error, Result};
use crate::expansion::{delta_of_beta, unique_expansion_test, Verdict};
use crate::rational::{int, ln_enclosure, rat, Rat, RatInterval};
use crate::sequence::{
    beta_series_eval, pi_eval, shift_code_pm_to_m, Alphabet, Digit, EpSequence, Params, Word,
};

/// An eventually periodic `Ω_±N`-code together with the base and the
/// translation `t = π(code)` it encodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationCode {
    code: EpSequence,
    params: Params,
    t: Rat,
}

impl TranslationCode {
    pub fn new(code: EpSequence, params: Params) -> Result<Self> {
        let expected = Alphabet::Signed(params.n());
        if code.alphabet() != expected {
            return Err(Error::AlphabetMismatch(code.alphabet().to_string(), expected.to_string()));
        }
        let t = pi_eval(&code, &params);
        Ok(TranslationCode { code, params, t })
    }

    pub fn code(&self) -> &EpSequence {
        &self.code
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }
}

/// Exact decision: for every `k >= 1` the tail `Σ t_{k+ℓ} β^ℓ` must stay
/// strictly below `(1-Nβ)/(1-β)` when `t_k < N-1` and strictly above its
/// negative when `t_k > 1-N`.
pub fn unique_exact(tc: &TranslationCode) -> bool {
    let beta = tc.params.beta();
    let theta = tc.params.tail_threshold();
    let top = tc.params.n() as Digit - 1;
    let code = &tc.code;
    (1..=code.distinct_shifts()).all(|k| {
        let d = code.digit(k - 1);
        let tail = beta_series_eval(&code.shift(k), beta);
        (d >= top || tail < theta) && (d <= -top || tail > -&theta)
    })
}

/// Lexicographic decision: shift the code to `Ω_{2N-1}` and compare every
/// tail against the quasi-greedy expansion `δ(β)`.
pub fn unique_lex(tc: &TranslationCode, depth_cap: usize) -> Result<Verdict> {
    let eps = shift_code_pm_to_m(&tc.code)?;
    let delta = delta_of_beta(tc.params.beta(), tc.params.m())?;
    unique_expansion_test(&eps, delta.as_ref(), depth_cap)
}

/// Lexicographic test of an `Ω_{2N-1}` sequence at the critical base,
/// where `δ(β_c) = λ` is known symbolically.
pub fn unique_lex_critical(eps: &EpSequence, depth_cap: usize) -> Result<Verdict> {
    let m = match eps.alphabet() {
        Alphabet::Unsigned(m) if m % 2 == 1 && m >= 3 => m,
        other => return Err(Error::AlphabetMismatch(other.to_string(), "Ω_{2N-1}".into())),
    };
    unique_expansion_test(eps, &LambdaSource { m }, depth_cap)
}

/// One prefix `t_1 … t_depth` in the code tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixNode {
    pub depth: usize,
    pub digit: Digit,
    pub parent: Option<usize>,
}

/// Code prefixes of `t` found by remainder enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeEnumeration {
    /// `counts[k-1]` is the number of extendable prefixes of length `k`.
    pub counts: Vec<u128>,
    /// Counting stopped before `depth` at [`ENUM_STATE_CAP`] distinct
    /// remainders; the code had branched long before.
    pub counts_truncated: bool,
    /// Materialized prefixes, level by level, up to the node cap.
    pub nodes: Vec<PrefixNode>,
    /// The node cap stopped the tree before the requested depth.
    pub tree_truncated: bool,
}

impl CodeEnumeration {
    /// Largest `d` such that every depth `<= d` has exactly one prefix.
    pub fn unique_through_depth(&self) -> usize {
        self.counts.iter().take_while(|&&c| c == 1).count()
    }

    /// First depth with more than one prefix.
    pub fn branch_depth(&self) -> Option<usize> {
        self.counts.iter().position(|&c| c > 1).map(|i| i + 1)
    }

    /// Digits of the path from the root to `node`.
    pub fn path(&self, mut node: usize) -> Vec<Digit> {
        let mut digits = Vec::new();
        loop {
            digits.push(self.nodes[node].digit);
            match self.nodes[node].parent {
                Some(p) => node = p,
                None => break,
            }
        }
        digits.reverse();
        digits
    }
}

fn check_t(t: &Rat) -> Result<()> {
    if t.abs() > Rat::one() {
        return Err(Error::Domain(format!("t = {t} lies outside [-1, 1]")));
    }
    Ok(())
}

/// Bound on distinct remainders per level in [`enum_codes`].
pub const ENUM_STATE_CAP: usize = 1 << 12;

/// Number of extendable prefixes per depth, on integer-scaled remainders.
/// Stops early once a level holds more than `state_cap` distinct remainders.
///
/// With `β = a/b`, `c = C/D` and `t = P/Q`, the remainder `r_k` after `k`
/// digits satisfies `X_k = Q·D·a^k·r_k ∈ ℤ`, `X_k = b·X_{k-1} - d·b·Q·C·a^{k-1}`,
/// and `|r_k| <= 1` becomes `|X_k| <= Q·D·a^k`.
fn remainder_counts(t: &Rat, p: &Params, depth: usize, state_cap: usize) -> Vec<u128> {
    let n = p.n() as Digit;
    let (a, b) = (p.beta().numer().clone(), p.beta().denom().clone());
    let c = p.spacing();
    let (cn, cd) = (c.numer().clone(), c.denom().clone());
    let (tn, td) = (t.numer().clone(), t.denom().clone());
    let mut step = &b * &td * &cn; // b·Q·C·a^{k-1}
    let mut bound = &td * &cd; // Q·D·a^k
    let mut level: HashMap<BigInt, u128> = HashMap::from([(&tn * &cd, 1)]);
    let mut counts = Vec::with_capacity(depth);
    for _ in 0..depth {
        bound *= &a;
        let mut next: HashMap<BigInt, u128> = HashMap::with_capacity(level.len() * 2);
        for (x, mult) in &level {
            let base = x * &b;
            for d in 1 - n..n {
                let child = &base - &step * BigInt::from(d);
                if child.abs() <= bound {
                    let slot = next.entry(child).or_insert(0);
                    *slot = slot.saturating_add(*mult);
                }
            }
        }
        counts.push(next.values().fold(0u128, |acc, &m| acc.saturating_add(m)));
        if next.len() > state_cap {
            break;
        }
        step *= &a;
        level = next;
    }
    counts
}

/// Enumerate prefixes of `Ω_±N`-codes of `t` through `depth`. A prefix is
/// kept when its remainder `(t - Σ t_ℓ β^{ℓ-1}(1-β)/(N-1)) / β^k` lies in
/// `[-1, 1]`, which is exactly extendability since the attractor of the
/// signed system is `[-1, 1]`.
///
/// Counts are computed on remainders with multiplicity, so they stay cheap
/// even when the tree itself is capped at `node_cap` nodes.
pub fn enum_codes(t: &Rat, p: &Params, depth: usize, node_cap: usize) -> Result<CodeEnumeration> {
    check_t(t)?;
    let n = p.n() as Digit;
    let c = p.spacing();
    let beta = p.beta();
    let step = |r: &Rat, d: Digit| (r - &c * int(d as i64)) / beta;
    let admissible = |r: &Rat| r.abs() <= Rat::one();

    let counts = remainder_counts(t, p, depth, ENUM_STATE_CAP);
    let counts_truncated = counts.len() < depth;

    let mut nodes = Vec::new();
    let mut tree_truncated = false;
    let mut frontier: Vec<(Option<usize>, Rat)> = vec![(None, t.clone())];
    'levels: for k in 1..=depth {
        let mut next = Vec::new();
        for (parent, r) in &frontier {
            for d in 1 - n..n {
                let child = step(r, d);
                if admissible(&child) {
                    if nodes.len() >= node_cap {
                        tree_truncated = true;
                        break 'levels;
                    }
                    nodes.push(PrefixNode {
                        depth: k,
                        digit: d,
                        parent: *parent,
                    });
                    next.push((Some(nodes.len() - 1), child));
                }
            }
        }
        frontier = next;
    }
    Ok(CodeEnumeration {
        counts,
        counts_truncated,
        nodes,
        tree_truncated,
    })
}

/// Counts of words `w_1 … w_k` over `Ω_{2N-1}` (`k = 1..=len`) whose finite
/// windows satisfy the lexicographic uniqueness conditions non-strictly:
/// `w_{i+1} … w_k <= δ_1 … δ_{k-i}` when `w_i < 2N-2`, and the same for
/// the reflected window when `w_i > 0`. Every prefix of a unique expansion
/// is counted, so the counts bound the number of length-`k` blocks in
/// `π^{-1}(𝒰)` from above.
pub fn count_unique_prefixes(p: &Params, len: usize) -> Result<Vec<u128>> {
    let m = p.m();
    let top = m as Digit - 1;
    let delta = delta_of_beta(p.beta(), m)?.prefix(len);
    let mut counts = vec![0u128; len];
    let mut word: Vec<Digit> = Vec::with_capacity(len);
    fn ok(word: &[Digit], delta: &[Digit], top: Digit) -> bool {
        let k = word.len();
        (0..k).all(|i| {
            let window = &word[i + 1..];
            let bound = &delta[..k - i - 1];
            let up = word[i] == top || window <= bound;
            let down = word[i] == 0 || window.iter().map(|d| top - d).le(bound.iter().copied());
            up && down
        })
    }
    fn walk(word: &mut Vec<Digit>, delta: &[Digit], top: Digit, counts: &mut [u128]) {
        if word.len() == counts.len() {
            return;
        }
        for d in 0..=top {
            word.push(d);
            if ok(word, delta, top) {
                counts[word.len() - 1] += 1;
                walk(word, delta, top, counts);
            }
            word.pop();
        }
    }
    walk(&mut word, &delta, top, &mut counts);
    Ok(counts)
}

/// Per-level summary of the neighborhood oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodLevel {
    pub level: usize,
    /// Number of `J` whose component meets some component of `Γ + t`.
    pub survivors: u128,
    /// `max_J |𝒩_t(J)|`.
    pub max_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighborhoods {
    pub levels: Vec<NeighborhoodLevel>,
    /// Set when the state cap stopped the computation early.
    pub truncated: bool,
}

impl Neighborhoods {
    /// `max |𝒩_t(J)| <= 1` on every computed level.
    pub fn all_singletons(&self) -> bool {
        self.levels.iter().all(|l| l.max_size <= 1)
    }
}

/// Default bound on distinct neighborhood states per level.
pub const NEIGHBORHOOD_STATE_CAP: usize = 1 << 16;

/// Sizes of the neighborhoods `𝒩_t(J)`: the level-`k` components
/// `ψ_I([t, 1+t])` meeting `φ_J([0, 1])` (closed intervals).
///
/// A `J` is described by the offsets `(a_I + t - a_J)/β^k` of its
/// neighbors, which lie in `[-1, 1]`; children follow
/// `o ↦ (o + (e - d)(1-β)/(N-1)) / β`. Identical states are merged with
/// multiplicity. Stops after the first level with a neighborhood of size
/// two or more.
pub fn neighborhoods(t: &Rat, p: &Params, depth: usize, state_cap: usize) -> Result<Neighborhoods> {
    check_t(t)?;
    let n = p.n() as Digit;
    let c = p.spacing();
    let beta = p.beta();
    let mut states: BTreeMap<Vec<Rat>, u128> = BTreeMap::from([(vec![t.clone()], 1)]);
    let mut levels = Vec::new();
    for level in 1..=depth {
        let mut next: BTreeMap<Vec<Rat>, u128> = BTreeMap::new();
        for (offsets, mult) in &states {
            for d in 0..n {
                let mut child: Vec<Rat> = Vec::new();
                for o in offsets {
                    for e in 0..n {
                        let moved = (o + &c * int((e - d) as i64)) / beta;
                        if moved.abs() <= Rat::one() {
                            child.push(moved);
                        }
                    }
                }
                if child.is_empty() {
                    continue;
                }
                child.sort();
                child.dedup();
                let slot = next.entry(child).or_insert(0);
                *slot = slot.saturating_add(*mult);
            }
        }
        let max_size = next.keys().map(Vec::len).max().unwrap_or(0);
        let survivors = next.values().fold(0u128, |a, &b| a.saturating_add(b));
        levels.push(NeighborhoodLevel {
            level,
            survivors,
            max_size,
        });
        if max_size >= 2 {
            break;
        }
        if next.len() > state_cap {
            return Ok(Neighborhoods { levels, truncated: true });
        }
        states = next;
    }
    Ok(Neighborhoods {
        levels,
        truncated: false,
    })
}

/// A word `J` paired with the words `I` whose pieces meet it.
pub type Neighborhood = (Vec<Digit>, Vec<Vec<Digit>>);

/// Explicit neighborhoods at a small level: for each `J ∈ Ω_N^level`
/// (lexicographic), the words `I` with `ψ_I([t,1+t])` meeting `φ_J([0,1])`.
pub fn explicit_neighborhoods(t: &Rat, p: &Params, level: usize) -> Result<Vec<Neighborhood>> {
    check_t(t)?;
    if level > 8 {
        return Err(Error::InvalidParams("explicit neighborhoods are limited to level 8".into()));
    }
    let n = p.n() as usize;
    let c = p.spacing();
    let beta = p.beta();
    let words: Vec<Vec<Digit>> = (0..n.pow(level as u32))
        .map(|mut idx| {
            let mut w = vec![0; level];
            for slot in w.iter_mut().rev() {
                *slot = (idx % n) as Digit;
                idx /= n;
            }
            w
        })
        .collect();
    let left = |w: &[Digit]| {
        let mut acc = Rat::zero();
        let mut scale = c.clone();
        for &d in w {
            acc += &scale * int(d as i64);
            scale *= beta;
        }
        acc
    };
    let width = crate::rational::pow(beta, level);
    let lefts: Vec<Rat> = words.iter().map(|w| left(w)).collect();
    Ok(words
        .iter()
        .zip(&lefts)
        .map(|(j, aj)| {
            let hits = words
                .iter()
                .zip(&lefts)
                .filter(|(_, ai)| (*ai + t - aj).abs() <= width)
                .map(|(i, _)| i.clone())
                .collect();
            (j.clone(), hits)
        })
        .collect())
}

/// `D = Ω_N ∩ (Ω_N + t_ℓ)` as the inclusive range `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitRange {
    pub lo: Digit,
    pub hi: Digit,
}

impl DigitRange {
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn digits(&self) -> impl Iterator<Item = Digit> {
        self.lo..=self.hi
    }
}

/// The product `∏ D_ℓ`, eventually periodic like the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSets {
    pub pre: Vec<DigitRange>,
    pub per: Vec<DigitRange>,
}

impl ProductSets {
    pub fn at(&self, i: usize) -> DigitRange {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }
}

fn digit_range(n: Digit, t: Digit) -> DigitRange {
    DigitRange {
        lo: t.max(0),
        hi: (n - 1).min(n - 1 + t),
    }
}

/// `D_ℓ = Ω_N ∩ (Ω_N + t_ℓ)` for a code with a unique expansion.
pub fn consecutive_products(tc: &TranslationCode) -> Result<ProductSets> {
    if !unique_exact(tc) {
        return Err(Error::NotUnique);
    }
    let n = tc.params.n() as Digit;
    Ok(ProductSets {
        pre: tc.code.preperiod().iter().map(|&t| digit_range(n, t)).collect(),
        per: tc.code.period().iter().map(|&t| digit_range(n, t)).collect(),
    })
}

/// Block alphabet `{ξ_n, η_n, ξ̄_n, η̄_n}` and its transition matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubshiftSpec {
    pub n_parts: u32,
    pub index: u32,
    /// `[ξ, η, ξ̄, η̄]`.
    pub blocks: [Word; 4],
}

/// Transition matrix on `[ξ, η, ξ̄, η̄]`.
pub const ADJACENCY: [[i64; 4]; 4] = [[0, 1, 1, 0], [0, 0, 1, 0], [1, 0, 0, 1], [1, 0, 0, 0]];

impl SubshiftSpec {
    pub fn new(n_parts: u32, index: u32) -> Result<Self> {
        let (xi, eta) = xi_eta(n_parts, index)?;
        let xi_bar = xi.reflect()?;
        let eta_bar = eta.reflect()?;
        Ok(SubshiftSpec {
            n_parts,
            index,
            blocks: [xi, eta, xi_bar, eta_bar],
        })
    }

    pub fn adjacency(&self) -> [[i64; 4]; 4] {
        ADJACENCY
    }

    /// Concatenate a block path into an `Ω_{2N-1}` sequence continued by
    /// `(ξ̄ ξ)^∞`. The path must be admissible and end in `ξ`.
    pub fn sequence_for(&self, path: &[usize]) -> Result<EpSequence> {
        for w in path.windows(2) {
            if ADJACENCY[w[0]][w[1]] == 0 {
                return Err(Error::Domain(format!("transition {} -> {} is not allowed", w[0], w[1])));
            }
        }
        if path.last().is_some_and(|&s| s != 0) {
            return Err(Error::Domain("block path must end in ξ".into()));
        }
        let mut pre = Vec::new();
        for &s in path {
            pre.extend_from_slice(self.blocks[s].digits());
        }
        let mut per = self.blocks[2].digits().to_vec();
        per.extend_from_slice(self.blocks[0].digits());
        EpSequence::new(Alphabet::Unsigned(2 * self.n_parts - 1), pre, per)
    }

    /// A random admissible path of `len` blocks, extended by the shortest
    /// route back to `ξ`.
    pub fn random_path(&self, len: usize, rng: &mut impl Rng) -> Vec<usize> {
        let mut path = Vec::with_capacity(len + 2);
        if len > 0 {
            let mut state = rng.gen_range(0..4);
            path.push(state);
            for _ in 1..len {
                let options: Vec<usize> = (0..4).filter(|&j| ADJACENCY[state][j] == 1).collect();
                state = options[rng.gen_range(0..options.len())];
                path.push(state);
            }
        }
        match path.last() {
            Some(1) => path.extend([2, 0]),
            Some(2) | Some(3) => path.push(0),
            _ => {}
        }
        path
    }

    /// A random element of `X_A` built from [`Self::random_path`].
    pub fn random_element(&self, len: usize, rng: &mut impl Rng) -> EpSequence {
        let path = self.random_path(len, rng);
        self.sequence_for(&path).expect("random paths are admissible")
    }
}

/// Characteristic polynomial `det(xI - A)`, coefficients from `x^0` up.
pub fn characteristic_polynomial<const D: usize>(a: &[[i64; D]; D]) -> Vec<i64> {
    // Faddeev–LeVerrier.
    let mut coeffs = vec![0i64; D + 1];
    coeffs[D] = 1;
    let mut m = [[0i64; D]; D];
    for k in 1..=D {
        let mut next = [[0i64; D]; D];
        for i in 0..D {
            for j in 0..D {
                next[i][j] = (0..D).map(|l| a[i][l] * m[l][j]).sum::<i64>();
            }
            next[i][i] += coeffs[D - k + 1];
        }
        m = next;
        let trace: i64 = (0..D).map(|i| (0..D).map(|l| a[i][l] * m[l][i]).sum::<i64>()).sum();
        coeffs[D - k] = -trace / k as i64;
    }
    coeffs
}

fn poly_value(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn sturm_chain(p: &[Rat]) -> Vec<Vec<Rat>> {
    let derivative: Vec<Rat> = p.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect();
    let mut chain = vec![p.to_vec(), derivative];
    while chain.last().is_some_and(|q| q.len() > 1) {
        let k = chain.len();
        let r: Vec<Rat> = poly_rem(&chain[k - 2], &chain[k - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_changes(values: impl Iterator<Item = Rat>) -> usize {
    let signs: Vec<bool> = values.filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Certified enclosure of the largest real root of an integer polynomial
/// (coefficients from `x^0` up), of width at most `tol`.
pub fn largest_real_root(coeffs: &[i64], tol: &Rat) -> Result<RatInterval> {
    let p: Vec<Rat> = coeffs.iter().map(|&c| int(c)).collect();
    if p.last().is_none_or(|c| c.is_zero()) || p.len() < 2 {
        return Err(Error::Domain("polynomial must have positive degree".into()));
    }
    let chain = sturm_chain(&p);
    let at_infinity = sign_changes(chain.iter().map(|q| q.last().unwrap().clone()));
    let roots_above = |x: &Rat| sign_changes(chain.iter().map(|q| poly_value(q, x))) - at_infinity;
    let lead = p.last().unwrap().abs();
    let bound = Rat::one() + p.iter().map(|c| c.abs() / &lead).fold(Rat::zero(), |a, b| if b > a { b } else { a });
    let mut lo = -&bound;
    let mut hi = bound;
    if roots_above(&lo) == 0 {
        return Err(Error::Domain("polynomial has no real root".into()));
    }
    // Invariant: a root lies in (lo, hi] and none lies above hi.
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / int(2);
        if roots_above(&mid) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RatInterval::new(lo, hi))
}

/// Spectral radius of [`ADJACENCY`], which is the golden ratio.
pub fn spectral_radius(tol: &Rat) -> Result<RatInterval> {
    largest_real_root(&characteristic_polynomial(&ADJACENCY), tol)
}

/// Lower bound `ln r(A) / (-2^n ln β)` for `dim_H 𝒰`, valid for
/// `β < β_n` (odd `n >= 3`).
pub fn subshift_dim_bound(p: &Params, n: u32) -> Result<RatInterval> {
    let beta = p.beta();
    let mut tol = rat(1, 1 << 20);
    loop {
        let enc = beta_n(p.n(), n, &tol)?;
        if *beta < enc.interval.lo {
            break;
        }
        if *beta >= enc.interval.hi {
            return Err(Error::Domain(format!("β = {beta} is not below β_{n}")));
        }
        tol *= rat(1, 1 << 20);
    }
    let bits = 64;
    let radius = spectral_radius(&rat(1, 1 << 62))?;
    let ln_r = RatInterval::new(ln_enclosure(&radius.lo, bits)?.lo, ln_enclosure(&radius.hi, bits)?.hi);
    let ln_beta = ln_enclosure(beta, bits)?;
    let denominator = ln_beta.scale(&-int(1i64 << n));
    ln_r.div(&denominator)
}

/// `Ω_{2N-1}` sequence to `Ω_±N` code.
pub fn code_from_expansion(eps: &EpSequence) -> Result<EpSequence> {
    crate::sequence::shift_code_m_to_pm(eps)
}
