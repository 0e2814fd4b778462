//! The Thue–Morse sequence, the smallest admissible sequence `λ` and the
//! block families built from it.
//!
//! `λ` over `Ω_m` is generated from the closed form
//! `λ_ℓ = q-1+τ_ℓ` (`m = 2q`) or `λ_ℓ = q+τ_ℓ-τ_{ℓ-1}` (`m = 2q+1`), with
//! `τ` the Thue–Morse sequence. [`lambda_recursive`] is the doubling
//! construction for `m = 2N-1` and is only used as a cross-check.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::expansion::DigitSource;
use crate::sequence::{reflect_digits, Alphabet, Digit, EpSequence, Word};

/// Largest block index materialized (`2^16` digits).
pub const MAX_BLOCK_INDEX: u32 = 16;

/// `τ_ℓ`: parity of the number of ones in the binary expansion of `ℓ`.
pub fn thue_morse(l: u64) -> u8 {
    (l.count_ones() & 1) as u8
}

/// `λ_ℓ(m)` for `ℓ >= 1`.
pub fn lambda_digit(m: u32, l: u64) -> Digit {
    debug_assert!(l >= 1);
    let tau = |i: u64| thue_morse(i) as Digit;
    let q = (m / 2) as Digit;
    if m.is_multiple_of(2) {
        q - 1 + tau(l)
    } else {
        q + tau(l) - tau(l - 1)
    }
}

/// First `len` digits `λ_1 … λ_len` over `Ω_m`.
pub fn lambda(m: u32, len: usize) -> Vec<Digit> {
    assert!(m >= 2, "alphabet size must be at least 2");
    (1..=len as u64).map(|l| lambda_digit(m, l)).collect()
}

/// `λ` over `Ω_{2N-1}` from `λ_1 = N`, `λ_{2^{n+1}} = 2N-1-λ_{2^n}` and
/// `λ_{2^n+ℓ} = 2N-2-λ_ℓ` for `1 <= ℓ < 2^n`.
pub fn lambda_recursive(n: u32, len: usize) -> Vec<Digit> {
    let n = n as Digit;
    // 1-based storage; index 0 unused.
    let mut seq: Vec<Digit> = vec![0, n];
    let mut block = 1usize;
    while seq.len() <= len {
        for l in 1..block {
            let d = 2 * n - 2 - seq[l];
            seq.push(d);
        }
        let d = 2 * n - 1 - seq[block];
        seq.push(d);
        block *= 2;
    }
    seq.truncate(len + 1);
    seq.remove(0);
    seq
}

/// `λ(m)` as an infinite digit stream (never eventually periodic).
#[derive(Clone, Copy, Debug)]
pub struct LambdaSource {
    pub m: u32,
}

impl DigitSource for LambdaSource {
    fn digit(&self, i: usize) -> Digit {
        lambda_digit(self.m, i as u64 + 1)
    }
}

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("N must be at least 2, got {n}")));
    }
    Ok(())
}

fn check_index(index: u32) -> Result<()> {
    if index > MAX_BLOCK_INDEX {
        return Err(Error::BlockCap(index));
    }
    Ok(())
}

fn alphabet(n: u32) -> Alphabet {
    Alphabet::Unsigned(2 * n - 1)
}

type LambdaCache = Mutex<HashMap<u32, std::sync::Arc<Vec<Digit>>>>;

/// `λ_1 … λ_{2^(MAX_BLOCK_INDEX+1)}` for `Ω_{2N-1}`, cached per `N`.
fn lambda_table(n: u32) -> std::sync::Arc<Vec<Digit>> {
    static CACHE: OnceLock<LambdaCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut map = cache.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| std::sync::Arc::new(lambda(2 * n - 1, 1 << (MAX_BLOCK_INDEX + 1))))
        .clone()
}

/// `w_k = λ_1 … λ_{2^k}`.
pub fn w_block(n: u32, k: u32) -> Result<Word> {
    check_n(n)?;
    check_index(k)?;
    let table = lambda_table(n);
    Word::new(alphabet(n), table[..1 << k].to_vec())
}

/// `C_k^∞ = λ_1 … λ_{2^k} (λ_{2^k+1} … λ_{2^{k+1}})^∞`.
pub fn c_seq(n: u32, k: u32) -> Result<EpSequence> {
    check_n(n)?;
    check_index(k)?;
    let table = lambda_table(n);
    let half = 1usize << k;
    EpSequence::new(alphabet(n), table[..half].to_vec(), table[half..2 * half].to_vec())
}

/// `(ξ_k, η_k) = ((N-1)λ_1…λ_{2^k-1}, (N-2)λ_1…λ_{2^k-1})`.
pub fn xi_eta(n: u32, k: u32) -> Result<(Word, Word)> {
    check_n(n)?;
    check_index(k)?;
    let table = lambda_table(n);
    let body = &table[..(1 << k) - 1];
    let with_head = |head: Digit| {
        let mut digits = Vec::with_capacity(body.len() + 1);
        digits.push(head);
        digits.extend_from_slice(body);
        Word::new(alphabet(n), digits)
    };
    let n = n as Digit;
    Ok((with_head(n - 1)?, with_head(n - 2)?))
}

/// `v_k = N (N-1)^{k-1}`.
pub fn v_block(n: u32, k: u32) -> Result<Word> {
    check_n(n)?;
    if k == 0 {
        return Err(Error::InvalidParams("v_k needs k >= 1".into()));
    }
    let mut digits = vec![n as Digit];
    digits.extend(std::iter::repeat_n(n as Digit - 1, k as usize - 1));
    Word::new(alphabet(n), digits)
}

/// `w_k w̄_k`, the period block of the countable-regime sequences.
pub fn w_wbar(n: u32, k: u32) -> Result<Word> {
    let w = w_block(n, k)?;
    let mut digits = w.digits().to_vec();
    digits.extend(reflect_digits(w.digits(), 2 * n - 1));
    Word::new(alphabet(n), digits)
}
