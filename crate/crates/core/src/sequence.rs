//! Digit alphabets, words and eventually periodic sequences.
//!
//! An [`EpSequence`] is a preperiod word followed by a period word repeated
//! forever. Sequences are stored in canonical form (shortest preperiod,
//! primitive period), so two values represent the same infinite sequence
//! exactly when they compare equal structurally.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, pow, Rat};

pub type Digit = i32;

/// A finite digit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `{0, 1, ..., m-1}`.
    Unsigned(u32),
    /// `{-(n-1), ..., -1, 0, 1, ..., n-1}`.
    Signed(u32),
}

impl Alphabet {
    pub fn min_digit(self) -> Digit {
        match self {
            Alphabet::Unsigned(_) => 0,
            Alphabet::Signed(n) => 1 - n as Digit,
        }
    }

    pub fn max_digit(self) -> Digit {
        match self {
            Alphabet::Unsigned(m) => m as Digit - 1,
            Alphabet::Signed(n) => n as Digit - 1,
        }
    }

    pub fn contains(self, d: Digit) -> bool {
        self.min_digit() <= d && d <= self.max_digit()
    }

    pub fn digits(self) -> impl Iterator<Item = Digit> {
        self.min_digit()..=self.max_digit()
    }

    fn check(self, digits: &[Digit]) -> Result<()> {
        match digits.iter().find(|&&d| !self.contains(d)) {
            Some(&digit) => Err(Error::DigitOutOfRange {
                digit,
                alphabet: self.to_string(),
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Unsigned(m) => write!(f, "Ω_{m}"),
            Alphabet::Signed(n) => write!(f, "Ω_±{n}"),
        }
    }
}

/// A finite string over an alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    digits: Vec<Digit>,
}

impl Word {
    pub fn new(alphabet: Alphabet, digits: Vec<Digit>) -> Result<Self> {
        alphabet.check(&digits)?;
        Ok(Word { alphabet, digits })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn into_digits(self) -> Vec<Digit> {
        self.digits
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        same_alphabet(self.alphabet, other.alphabet)?;
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Ok(Word { alphabet: self.alphabet, digits })
    }

    /// Digitwise reflection `d -> m-1-d` over `Ω_m`.
    pub fn reflect(&self) -> Result<Word> {
        let m = unsigned_size(self.alphabet)?;
        Ok(Word {
            alphabet: self.alphabet,
            digits: reflect_digits(&self.digits, m),
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.digits))
    }
}

/// `d -> m-1-d` on a digit slice.
pub fn reflect_digits(digits: &[Digit], m: u32) -> Vec<Digit> {
    digits.iter().map(|&d| m as Digit - 1 - d).collect()
}

fn unsigned_size(alphabet: Alphabet) -> Result<u32> {
    match alphabet {
        Alphabet::Unsigned(m) => Ok(m),
        other => Err(Error::AlphabetMismatch(other.to_string(), "Ω_m".into())),
    }
}

fn same_alphabet(a: Alphabet, b: Alphabet) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(a.to_string(), b.to_string()))
    }
}

fn join(digits: &[Digit]) -> String {
    digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

/// Eventually periodic infinite sequence `pre per per per ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpSequence {
    alphabet: Alphabet,
    pre: Vec<Digit>,
    per: Vec<Digit>,
}

/// Smallest `d` dividing `len` with `per` equal to its own rotation by `d`.
fn primitive_period(per: &[Digit]) -> usize {
    let len = per.len();
    (1..=len)
        .filter(|d| len.is_multiple_of(*d))
        .find(|&d| (0..len).all(|i| per[i] == per[i % d]))
        .unwrap_or(len)
}

impl EpSequence {
    pub fn new(alphabet: Alphabet, pre: Vec<Digit>, per: Vec<Digit>) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        alphabet.check(&pre)?;
        alphabet.check(&per)?;
        Ok(Self::canonical(alphabet, pre, per))
    }

    /// Purely periodic sequence `per^∞`.
    pub fn periodic(alphabet: Alphabet, per: Vec<Digit>) -> Result<Self> {
        Self::new(alphabet, Vec::new(), per)
    }

    /// The constant sequence `d^∞`.
    pub fn constant(alphabet: Alphabet, d: Digit) -> Result<Self> {
        Self::new(alphabet, Vec::new(), vec![d])
    }

    fn canonical(alphabet: Alphabet, mut pre: Vec<Digit>, mut per: Vec<Digit>) -> Self {
        let p = primitive_period(&per);
        per.truncate(p);
        // Absorb preperiod digits that continue the period backwards.
        while let Some(&last) = pre.last() {
            if last != *per.last().unwrap() {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        EpSequence { alphabet, pre, per }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn preperiod(&self) -> &[Digit] {
        &self.pre
    }

    pub fn period(&self) -> &[Digit] {
        &self.per
    }

    /// Number of distinct shifts `σ^k` for `k >= 0`.
    pub fn distinct_shifts(&self) -> usize {
        self.pre.len() + self.per.len()
    }

    /// Digit at zero-based position `i`.
    pub fn digit(&self, i: usize) -> Digit {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<Digit> {
        (0..len).map(|i| self.digit(i)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Digit> + '_ {
        (0..).map(move |i| self.digit(i))
    }

    /// Lexicographic comparison; exact for eventually periodic inputs.
    pub fn lex_cmp(&self, other: &EpSequence) -> Ordering {
        let bound = self.pre.len().max(other.pre.len()) + self.per.len().lcm(&other.per.len());
        for i in 0..bound {
            match self.digit(i).cmp(&other.digit(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Left shift by `k` positions.
    pub fn shift(&self, k: usize) -> EpSequence {
        if k <= self.pre.len() {
            Self::canonical(self.alphabet, self.pre[k..].to_vec(), self.per.clone())
        } else {
            let mut per = self.per.clone();
            per.rotate_left((k - self.pre.len()) % self.per.len());
            Self::canonical(self.alphabet, Vec::new(), per)
        }
    }

    /// Digitwise reflection `d -> m-1-d`; requires an `Ω_m` alphabet.
    pub fn reflect(&self) -> Result<EpSequence> {
        let m = unsigned_size(self.alphabet)?;
        Ok(Self::canonical(
            self.alphabet,
            reflect_digits(&self.pre, m),
            reflect_digits(&self.per, m),
        ))
    }

    /// Digitwise negation; requires a signed alphabet.
    pub fn negate(&self) -> Result<EpSequence> {
        match self.alphabet {
            Alphabet::Signed(_) => Ok(self.map(self.alphabet, |d| -d)),
            other => Err(Error::AlphabetMismatch(other.to_string(), "Ω_±N".into())),
        }
    }

    /// Apply `f` digitwise. `f` must map into `alphabet`.
    pub fn map(&self, alphabet: Alphabet, f: impl Fn(Digit) -> Digit) -> EpSequence {
        let pre: Vec<_> = self.pre.iter().map(|&d| f(d)).collect();
        let per: Vec<_> = self.per.iter().map(|&d| f(d)).collect();
        debug_assert!(alphabet.check(&pre).is_ok() && alphabet.check(&per).is_ok());
        Self::canonical(alphabet, pre, per)
    }

    pub fn is_zero(&self) -> bool {
        self.per.iter().all(|&d| d == 0) && self.pre.iter().all(|&d| d == 0)
    }

    /// True when infinitely many digits are nonzero.
    pub fn is_infinite_expansion(&self) -> bool {
        self.per.iter().any(|&d| d != 0)
    }

    /// Parse the `"pre|per"` literal (comma-separated digits on each side).
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let bad = |position: usize, message: &str| Error::Parse {
            input: text.to_string(),
            position,
            message: message.to_string(),
        };
        let bar = text.find('|').ok_or_else(|| bad(0, "missing '|' between preperiod and period"))?;
        let parse_part = |part: &str, offset: usize| -> Result<Vec<Digit>> {
            if part.trim().is_empty() {
                return Ok(Vec::new());
            }
            let mut digits = Vec::new();
            let mut pos = offset;
            for item in part.split(',') {
                let d: Digit = item.trim().parse().map_err(|_| bad(pos, "expected an integer digit"))?;
                if !alphabet.contains(d) {
                    return Err(bad(pos, &format!("digit {d} is outside {alphabet}")));
                }
                digits.push(d);
                pos += item.len() + 1;
            }
            Ok(digits)
        };
        let pre = parse_part(&text[..bar], 0)?;
        let per = parse_part(&text[bar + 1..], bar + 1)?;
        if per.is_empty() {
            return Err(bad(bar + 1, "period must be nonempty"));
        }
        Self::new(alphabet, pre, per)
    }
}

impl fmt::Display for EpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", join(&self.pre), join(&self.per))
    }
}

/// Lexicographic order of two sequences over the same alphabet.
pub fn lex_compare(a: &EpSequence, b: &EpSequence) -> Result<Ordering> {
    same_alphabet(a.alphabet, b.alphabet)?;
    Ok(a.lex_cmp(b))
}

/// The pair `(N, β)` with `1/(2N-1) < β < 1/N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    n: u32,
    beta: Rat,
}

impl Params {
    pub fn new(n: u32, beta: Rat) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("N must be at least 2, got {n}")));
        }
        if n >= 1 << 30 {
            return Err(Error::InvalidParams("N too large".into()));
        }
        let lower = Rat::new(1.into(), (2 * n as i64 - 1).into());
        let upper = Rat::new(1.into(), (n as i64).into());
        if beta <= lower || beta >= upper {
            return Err(Error::InvalidParams(format!(
                "beta = {beta} must lie strictly between 1/{} and 1/{n}",
                2 * n - 1
            )));
        }
        Ok(Params { n, beta })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn beta(&self) -> &Rat {
        &self.beta
    }

    /// Size of the shifted alphabet `Ω_{2N-1}`.
    pub fn m(&self) -> u32 {
        2 * self.n - 1
    }

    /// Digit spacing `(1-β)/(N-1)` of the first-level maps.
    pub fn spacing(&self) -> Rat {
        (Rat::one() - &self.beta) / int(self.n as i64 - 1)
    }

    /// Tail threshold `(1-Nβ)/(1-β)` of the uniqueness inequalities.
    pub fn tail_threshold(&self) -> Rat {
        (Rat::one() - int(self.n as i64) * &self.beta) / (Rat::one() - &self.beta)
    }
}

/// `Σ_i digits[i] x^i` by Horner's rule.
pub(crate) fn poly_eval(digits: &[Digit], x: &Rat) -> Rat {
    digits
        .iter()
        .rev()
        .fold(Rat::zero(), |acc, &d| acc * x + int(d as i64))
}

/// `Σ_{ℓ≥1} s_ℓ x^{ℓ-1}` in closed form.
fn unit_series(s: &EpSequence, x: &Rat) -> Rat {
    let head = poly_eval(&s.pre, x);
    let cycle = poly_eval(&s.per, x) / (Rat::one() - pow(x, s.per.len()));
    head + pow(x, s.pre.len()) * cycle
}

/// Exact value of `π(code) = Σ_{ℓ≥1} j_ℓ β^{ℓ-1} (1-β)/(N-1)`.
pub fn pi_eval(code: &EpSequence, params: &Params) -> Rat {
    unit_series(code, params.beta()) * params.spacing()
}

/// Exact value of `Σ_{ℓ≥1} s_ℓ β^ℓ` for `0 <= β < 1`.
pub fn beta_series_eval(s: &EpSequence, beta: &Rat) -> Rat {
    unit_series(s, beta) * beta
}

/// Shift an `Ω_{±N}` code to `Ω_{2N-1}` by adding `N-1` to every digit.
pub fn shift_code_pm_to_m(code: &EpSequence) -> Result<EpSequence> {
    match code.alphabet {
        Alphabet::Signed(n) => {
            let offset = n as Digit - 1;
            Ok(code.map(Alphabet::Unsigned(2 * n - 1), |d| d + offset))
        }
        other => Err(Error::AlphabetMismatch(other.to_string(), "Ω_±N".into())),
    }
}

/// Inverse of [`shift_code_pm_to_m`].
pub fn shift_code_m_to_pm(code: &EpSequence) -> Result<EpSequence> {
    match code.alphabet {
        Alphabet::Unsigned(m) if m % 2 == 1 && m >= 3 => {
            let n = m.div_ceil(2);
            let offset = n as Digit - 1;
            Ok(code.map(Alphabet::Signed(n), |d| d - offset))
        }
        other => Err(Error::AlphabetMismatch(other.to_string(), "Ω_{2N-1}".into())),
    }
}
