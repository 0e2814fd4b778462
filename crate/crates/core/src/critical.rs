//! Critical bases: `β_c` (root of `Σ λ_ℓ β^ℓ = 1`), the quadratic surd
//! `α_c`, the approximating bases `β_n` and `α_n`, and the regime
//! classifier for rational `β`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::admissible::{c_seq, lambda, v_block};
use crate::error::{Error, Result};
use crate::rational::{int, pow, rat, sqrt_enclosure, Rat, RatInterval};
use crate::sequence::{beta_series_eval, poly_eval, Alphabet, EpSequence, Params};

/// Maximum number of bisection steps.
pub const ITERATION_CAP: usize = 1_000_000;

const MAX_TRUNCATION: usize = 1 << 16;

/// Which expansion of 1 defines a root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootDescriptor {
    /// `λ` itself: the root is `β_c`.
    Lambda,
    /// `C_n^∞`: the root is `β_n`.
    C(u32),
    /// `(N (N-1)^{n-1})^∞`: the root is `α_n`.
    V(u32),
}

/// Certified enclosure of a root of `Σ s_ℓ β^ℓ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEnclosure {
    pub n_parts: u32,
    pub interval: RatInterval,
    /// Upper bound on `|Σ s_ℓ β^ℓ - 1|` at both endpoints.
    pub residual_bound: Rat,
    pub descriptor: RootDescriptor,
    /// Whether the enclosure lies strictly inside `(1/(2N-1), 1/N)`.
    pub in_domain: bool,
}

fn domain(n: u32) -> (Rat, Rat) {
    (rat(1, 2 * n as i64 - 1), rat(1, n as i64))
}

fn in_domain(n: u32, interval: &RatInterval) -> bool {
    let (lo, hi) = domain(n);
    lo < interval.lo && interval.hi < hi
}

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("N must be at least 2, got {n}")));
    }
    Ok(())
}

fn check_tol(tol: &Rat) -> Result<()> {
    if *tol <= Rat::zero() {
        return Err(Error::InvalidParams("tolerance must be positive".into()));
    }
    Ok(())
}

/// Sign of `Σ λ_ℓ β^ℓ - 1` with truncation error accounted for.
/// Returns the sign and a bound on `|f(β)|` from the side that was decided.
struct LambdaSeries {
    digits: Vec<crate::sequence::Digit>,
    top: Rat,
}

impl LambdaSeries {
    fn new(n: u32) -> Self {
        let m = 2 * n - 1;
        let mut digits = vec![0];
        digits.extend(lambda(m, MAX_TRUNCATION));
        LambdaSeries {
            digits,
            top: int(m as i64 - 1),
        }
    }

    /// `(sign, residual)` where `residual >= |f(β)|`, or `None` if the
    /// sign could not be decided with the longest truncation.
    fn sign(&self, beta: &Rat) -> Option<(Ordering, Rat)> {
        let one = Rat::one();
        let mut len = 64;
        loop {
            let partial = poly_eval(&self.digits[..=len], beta);
            let tail = &self.top * pow(beta, len + 1) / (&one - beta);
            let upper = &partial + &tail;
            if partial > one {
                return Some((Ordering::Greater, upper - &one));
            }
            if upper < one {
                return Some((Ordering::Less, &one - partial));
            }
            if partial == one && tail.is_zero() {
                return Some((Ordering::Equal, Rat::zero()));
            }
            if len * 2 > MAX_TRUNCATION {
                return None;
            }
            len *= 2;
        }
    }
}

/// Bisect an increasing function given by a sign oracle. `lo` must have
/// negative sign and `hi` positive sign.
fn bisect(
    mut lo: Rat,
    mut hi: Rat,
    tol: &Rat,
    mut sign: impl FnMut(&Rat) -> Result<(Ordering, Rat)>,
) -> Result<(RatInterval, Rat)> {
    let (s_lo, mut r_lo) = sign(&lo)?;
    let (s_hi, mut r_hi) = sign(&hi)?;
    if s_lo == Ordering::Equal {
        return Ok((RatInterval::point(lo), Rat::zero()));
    }
    if s_hi == Ordering::Equal {
        return Ok((RatInterval::point(hi), Rat::zero()));
    }
    if s_lo != Ordering::Less || s_hi != Ordering::Greater {
        return Err(Error::Domain("initial bracket does not change sign".into()));
    }
    for _ in 0..ITERATION_CAP {
        if &hi - &lo <= *tol {
            let residual = if r_lo > r_hi { r_lo } else { r_hi };
            return Ok((RatInterval::new(lo, hi), residual));
        }
        let mid = (&lo + &hi) / int(2);
        match sign(&mid)? {
            (Ordering::Less, r) => {
                lo = mid;
                r_lo = r;
            }
            (Ordering::Greater, r) => {
                hi = mid;
                r_hi = r;
            }
            (Ordering::Equal, _) => return Ok((RatInterval::point(mid), Rat::zero())),
        }
    }
    Err(Error::Tolerance {
        iterations: ITERATION_CAP,
    })
}

type BetaCache = Mutex<HashMap<u32, RootEnclosure>>;

fn beta_c_cache() -> &'static BetaCache {
    static CACHE: OnceLock<BetaCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Certified enclosure of `β_c(N)` of width at most `tol`.
pub fn beta_c(n: u32, tol: &Rat) -> Result<RootEnclosure> {
    check_n(n)?;
    check_tol(tol)?;
    let cached = beta_c_cache().lock().unwrap().get(&n).cloned();
    let (lo, hi) = match &cached {
        Some(enc) if enc.interval.width() <= *tol => return Ok(enc.clone()),
        Some(enc) => (enc.interval.lo.clone(), enc.interval.hi.clone()),
        None => domain(n),
    };
    let series = LambdaSeries::new(n);
    let (interval, residual_bound) = bisect(lo, hi, tol, |beta| {
        series.sign(beta).ok_or(Error::Tolerance {
            iterations: MAX_TRUNCATION,
        })
    })?;
    let enclosure = RootEnclosure {
        n_parts: n,
        in_domain: in_domain(n, &interval),
        interval,
        residual_bound,
        descriptor: RootDescriptor::Lambda,
    };
    beta_c_cache().lock().unwrap().insert(n, enclosure.clone());
    Ok(enclosure)
}

/// Root of `beta_series_eval(seq, β) = 1` on `(0, 1)`. `seq` must have
/// nonnegative digits and infinitely many nonzero ones.
pub fn expansion_root(seq: &EpSequence, tol: &Rat) -> Result<(RatInterval, Rat)> {
    expansion_root_near(seq, tol, None)
}

/// As [`expansion_root`], trying `bracket` first when it brackets the root.
/// Roots that land exactly on a bracket endpoint are then returned exactly.
fn expansion_root_near(seq: &EpSequence, tol: &Rat, bracket: Option<(Rat, Rat)>) -> Result<(RatInterval, Rat)> {
    check_tol(tol)?;
    if !seq.is_infinite_expansion() || seq.alphabet().min_digit() < 0 {
        return Err(Error::Domain("sequence must be a nonnegative infinite expansion".into()));
    }
    let one = Rat::one();
    let sign = |beta: &Rat| {
        let f = beta_series_eval(seq, beta) - &one;
        let sign = f.cmp(&Rat::zero());
        let residual = if f < Rat::zero() { -f } else { f };
        Ok((sign, residual))
    };
    if let Some((lo, hi)) = bracket {
        let brackets = sign(&lo)?.0 != Ordering::Greater && sign(&hi)?.0 != Ordering::Less;
        if brackets {
            return bisect(lo, hi, tol, sign);
        }
    }
    let mut hi = rat(1, 2);
    while beta_series_eval(seq, &hi) <= one {
        hi = (&one + &hi) / int(2);
    }
    bisect(Rat::zero(), hi, tol, sign)
}

fn enclosure_for(n: u32, seq: &EpSequence, tol: &Rat, descriptor: RootDescriptor) -> Result<RootEnclosure> {
    let (interval, residual_bound) = expansion_root_near(seq, tol, Some(domain(n)))?;
    Ok(RootEnclosure {
        n_parts: n,
        in_domain: in_domain(n, &interval),
        interval,
        residual_bound,
        descriptor,
    })
}

/// `β_n`: the base whose quasi-greedy expansion of 1 is `C_n^∞` (odd `n >= 3`).
pub fn beta_n(n_parts: u32, n: u32, tol: &Rat) -> Result<RootEnclosure> {
    check_n(n_parts)?;
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("β_n needs odd n >= 3, got {n}")));
    }
    let seq = c_seq(n_parts, n)?;
    enclosure_for(n_parts, &seq, tol, RootDescriptor::C(n))
}

/// `α_n`: the base whose quasi-greedy expansion of 1 is `(N(N-1)^{n-1})^∞`.
/// For small `n` the root can fall on or below `1/(2N-1)`; the result then
/// carries `in_domain = false`.
pub fn alpha_n(n_parts: u32, n: u32, tol: &Rat) -> Result<RootEnclosure> {
    check_n(n_parts)?;
    let v = v_block(n_parts, n)?;
    let seq = EpSequence::periodic(Alphabet::Unsigned(2 * n_parts - 1), v.into_digits())?;
    enclosure_for(n_parts, &seq, tol, RootDescriptor::V(n))
}

/// `α_c(N) = (N + 1 - sqrt((N-1)(N+3))) / 2`, the smaller root of
/// `x^2 - (N+1)x + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaC {
    pub n_parts: u32,
}

impl AlphaC {
    pub fn new(n_parts: u32) -> Result<Self> {
        check_n(n_parts)?;
        Ok(AlphaC { n_parts })
    }

    /// The radicand `(N-1)(N+3)`.
    pub fn radicand(&self) -> i64 {
        let n = self.n_parts as i64;
        (n - 1) * (n + 3)
    }

    /// `x^2 - (N+1)x + 1`.
    pub fn defining_polynomial(&self, x: &Rat) -> Rat {
        x * x - int(self.n_parts as i64 + 1) * x + Rat::one()
    }

    /// Exact comparison of a rational with `α_c`.
    pub fn cmp_rational(&self, x: &Rat) -> Ordering {
        let vertex = Rat::new(BigInt::from(self.n_parts + 1), BigInt::from(2));
        if *x >= vertex {
            return Ordering::Greater;
        }
        // p is decreasing left of the vertex and vanishes at α_c.
        match self.defining_polynomial(x).cmp(&Rat::zero()) {
            Ordering::Greater => Ordering::Less,
            Ordering::Equal => Ordering::Equal,
            Ordering::Less => Ordering::Greater,
        }
    }

    /// Certified enclosure of width at most `tol`.
    pub fn enclosure(&self, tol: &Rat) -> Result<RatInterval> {
        check_tol(tol)?;
        let mut bits = 8;
        loop {
            let root = sqrt_enclosure(&int(self.radicand()), bits)?;
            let top = int(self.n_parts as i64 + 1);
            let half = rat(1, 2);
            let interval = RatInterval::new((&top - &root.hi) * &half, (&top - &root.lo) * &half);
            if interval.width() <= *tol {
                return Ok(interval);
            }
            bits += 8;
        }
    }

    /// `N (N-1)^∞`, the quasi-greedy expansion of 1 at `α_c`.
    pub fn expansion(&self) -> EpSequence {
        let n = self.n_parts as i32;
        EpSequence::new(Alphabet::Unsigned(2 * self.n_parts - 1), vec![n], vec![n - 1]).expect("digits in range")
    }
}

impl fmt::Display for AlphaC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} - sqrt({}))/2", self.n_parts + 1, self.radicand())
    }
}

/// Size class of `𝒰` or `𝒮` at a given base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeVerdict {
    PositiveDimension,
    /// Exactly at the critical base (unreachable for rational `β`).
    Critical,
    Countable,
}

impl fmt::Display for RegimeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegimeVerdict::PositiveDimension => "positive-dimension",
            RegimeVerdict::Critical => "critical",
            RegimeVerdict::Countable => "countable",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetKind {
    /// Translations with a unique code.
    U,
    /// Translations with a unique code and a self-similar intersection.
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub set: SetKind,
    pub verdict: RegimeVerdict,
}

/// Regimes of `𝒰` and `𝒮` at the base of `params`.
pub fn classify(params: &Params) -> Result<(Regime, Regime)> {
    let n = params.n();
    let beta = params.beta();
    let s_verdict = match AlphaC::new(n)?.cmp_rational(beta) {
        Ordering::Less => RegimeVerdict::PositiveDimension,
        _ => RegimeVerdict::Countable,
    };
    // β_c is transcendental, so refinement separates it from rational β.
    let mut tol = rat(1, 1 << 20);
    let u_verdict = loop {
        let enc = beta_c(n, &tol)?;
        match enc.interval.compare_to(beta) {
            Ordering::Greater => break RegimeVerdict::PositiveDimension,
            Ordering::Less => break RegimeVerdict::Countable,
            Ordering::Equal if enc.interval.width().is_zero() => break RegimeVerdict::Critical,
            Ordering::Equal => {
                if tol < Rat::new(BigInt::one(), BigInt::one() << 2048) {
                    return Err(Error::Tolerance {
                        iterations: ITERATION_CAP,
                    });
                }
                tol *= rat(1, 1 << 20);
            }
        }
    };
    Ok((
        Regime {
            set: SetKind::U,
            verdict: u_verdict,
        },
        Regime {
            set: SetKind::S,
            verdict: s_verdict,
        },
    ))
}

/// One row of the critical-point table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalRow {
    pub n_parts: u32,
    pub beta_c: RootEnclosure,
    pub alpha_c: RatInterval,
}

/// `β_c` and `α_c` for every `N` in `range`, computed in parallel.
pub fn critical_table(range: std::ops::RangeInclusive<u32>, tol: &Rat) -> Result<Vec<CriticalRow>> {
    let ns: Vec<u32> = range.collect();
    let rows: Vec<Result<CriticalRow>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| {
                scope.spawn(move || -> Result<CriticalRow> {
                    Ok(CriticalRow {
                        n_parts: n,
                        beta_c: beta_c(n, tol)?,
                        alpha_c: AlphaC::new(n)?.enclosure(tol)?,
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("table worker panicked")).collect()
    });
    rows.into_iter().collect()
}
