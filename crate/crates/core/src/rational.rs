//! Exact rationals and outward-rounded rational intervals.
//!
//! Everything in this crate that certifies an inequality goes through
//! [`Rat`]. Transcendental quantities (logarithms, square roots) are only
//! ever produced as [`RatInterval`] enclosures whose endpoints are dyadic
//! rationals rounded away from the true value.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// `num / den` as a [`Rat`]. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rat, exp: usize) -> Rat {
    num_traits::pow(base.clone(), exp)
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 gives up on huge numerators/denominators; scale down.
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n.max(d) - 900).max(0) as usize;
        let num = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let den = (r.denom() >> shift).to_f64().unwrap_or(1.0);
        num / den
    })
}

/// Parse a rational literal: `p/q`, an integer, or a decimal with optional
/// exponent (`0.28`, `1e-6`, `-2.5E3`).
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let bad = |pos: usize, why: &str| Error::Parse {
        input: text.to_string(),
        position: pos,
        message: why.to_string(),
    };
    if s.is_empty() {
        return Err(bad(0, "empty rational literal"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad(0, "invalid numerator"))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad(num.len() + 1, "invalid denominator"))?;
        if d.is_zero() {
            return Err(bad(num.len() + 1, "zero denominator"));
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad(i + 1, "invalid exponent"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad(0, "missing digits"));
    }
    for (i, c) in whole.chars().chain(frac.chars()).enumerate() {
        if !c.is_ascii_digit() {
            return Err(bad(i, "unexpected character"));
        }
    }
    let digits = format!("{whole}{frac}");
    let mut value = Rat::from_integer(BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).unwrap());
    let scale = exponent - frac.len() as i64;
    let ten = int(10);
    if scale >= 0 {
        value *= pow(&ten, scale as usize);
    } else {
        value /= pow(&ten, (-scale) as usize);
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Rounding direction used when rendering a rational in decimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
    /// Round half away from zero.
    Nearest,
}

fn round_to_integer(r: &Rat, mode: Rounding) -> BigInt {
    match mode {
        Rounding::Floor => r.floor().to_integer(),
        Rounding::Ceil => r.ceil().to_integer(),
        Rounding::Nearest => r.round().to_integer(),
    }
}

/// Render `r` with exactly `digits` decimals.
pub fn to_decimal(r: &Rat, digits: usize, mode: Rounding) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = round_to_integer(&(r * Rat::from_integer(scale.clone())), mode);
    let negative = scaled.sign() == Sign::Minus;
    let (whole, frac) = scaled.abs().div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// `p/q` rendering (integers render without the slash).
pub fn to_fraction(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn dyadic(num: BigInt, bits: u32) -> Rat {
    Rat::new(num, BigInt::one() << bits as usize)
}

/// Largest dyadic `k/2^bits` that is `<= r`.
pub fn dyadic_floor(r: &Rat, bits: u32) -> Rat {
    let scaled = r * Rat::from_integer(BigInt::one() << bits as usize);
    dyadic(scaled.floor().to_integer(), bits)
}

/// Smallest dyadic `k/2^bits` that is `>= r`.
pub fn dyadic_ceil(r: &Rat, bits: u32) -> Rat {
    let scaled = r * Rat::from_integer(BigInt::one() << bits as usize);
    dyadic(scaled.ceil().to_integer(), bits)
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `Less` if the whole interval is below `x`, `Greater` if above,
    /// `Equal` when `x` lies inside (undecided).
    pub fn compare_to(&self, x: &Rat) -> Ordering {
        if &self.hi < x {
            Ordering::Less
        } else if &self.lo > x {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }

    pub fn scale(&self, k: &Rat) -> RatInterval {
        self.mul(&RatInterval::point(k.clone()))
    }

    /// Division; the divisor must not contain zero.
    pub fn div(&self, other: &RatInterval) -> Result<RatInterval> {
        if other.contains(&Rat::zero()) {
            return Err(Error::Domain("interval division by an interval containing zero".into()));
        }
        let recip = RatInterval::new(other.hi.recip(), other.lo.recip());
        Ok(self.mul(&recip))
    }

    /// Replace endpoints by dyadic rationals with `bits` fractional bits,
    /// rounding outward. Keeps endpoint sizes bounded in long computations.
    pub fn round_outward(&self, bits: u32) -> RatInterval {
        RatInterval::new(dyadic_floor(&self.lo, bits), dyadic_ceil(&self.hi, bits))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.lo), to_f64(&self.hi))
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            to_decimal(&self.lo, 12, Rounding::Floor),
            to_decimal(&self.hi, 12, Rounding::Ceil)
        )
    }
}

/// Enclosure of `sqrt(x)` for `x >= 0` with dyadic endpoints of `bits`
/// fractional bits.
pub fn sqrt_enclosure(x: &Rat, bits: u32) -> Result<RatInterval> {
    if x.is_negative() {
        return Err(Error::Domain("square root of a negative rational".into()));
    }
    let four_pow = Rat::from_integer(BigInt::one() << (2 * bits as usize));
    let scaled = x * four_pow;
    let lo_root = scaled.floor().to_integer().sqrt();
    let mut hi_root = scaled.ceil().to_integer().sqrt();
    if Rat::from_integer(&hi_root * &hi_root) < scaled {
        hi_root += 1;
    }
    Ok(RatInterval::new(dyadic(lo_root, bits), dyadic(hi_root, bits)))
}

/// `2 * atanh(z)` for rational `0 <= z < 1`, enclosed to about `bits` bits.
fn two_atanh(z: &Rat, bits: u32) -> RatInterval {
    if z.is_zero() {
        return RatInterval::point(Rat::zero());
    }
    let z2 = z * z;
    let one = Rat::one();
    let eps = Rat::new(BigInt::one(), BigInt::one() << (bits as usize + 4));
    let mut power = z.clone();
    let mut sum = Rat::zero();
    let mut k: i64 = 0;
    loop {
        let denom = int(2 * k + 1);
        sum += int(2) * &power / &denom;
        power *= &z2;
        k += 1;
        // Remainder of the alternating-free series is bounded by the next
        // term divided by (1 - z^2).
        let tail = int(2) * &power / (int(2 * k + 1) * (&one - &z2));
        if tail < eps {
            let lower = dyadic_floor(&sum, bits + 4);
            let upper = dyadic_ceil(&(&sum + &tail), bits + 4);
            return RatInterval::new(lower, upper);
        }
    }
}

/// Enclosure of `ln(2)`.
pub fn ln2_enclosure(bits: u32) -> RatInterval {
    two_atanh(&rat(1, 3), bits)
}

/// Certified enclosure of `ln(x)` for rational `x > 0`, width about `2^-bits`.
pub fn ln_enclosure(x: &Rat, bits: u32) -> Result<RatInterval> {
    if !x.is_positive() {
        return Err(Error::Domain("logarithm of a non-positive rational".into()));
    }
    // x = 2^e * y with y in [1, 2).
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = int(2);
    let scaled = |e: i64| -> Rat {
        if e >= 0 {
            x / pow(&two, e as usize)
        } else {
            x * pow(&two, (-e) as usize)
        }
    };
    let mut y = scaled(e);
    while y < Rat::one() {
        e -= 1;
        y = scaled(e);
    }
    while y >= two {
        e += 1;
        y = scaled(e);
    }
    // ln is increasing, so dyadic bounds on y give bounds on ln(y).
    let y_lo = dyadic_floor(&y, bits + 8).max(Rat::one());
    let y_hi = dyadic_ceil(&y, bits + 8);
    let z_of = |v: &Rat| (v - Rat::one()) / (v + Rat::one());
    let lo = two_atanh(&z_of(&y_lo), bits).lo;
    let hi = two_atanh(&z_of(&y_hi), bits).hi;
    let ln_y = RatInterval::new(lo, hi);
    let ln2 = ln2_enclosure(bits + 8);
    Ok(ln_y.add(&ln2.scale(&int(e))).round_outward(bits + 4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_literals() {
        assert_eq!(parse_rat("39/100").unwrap(), rat(39, 100));
        assert_eq!(parse_rat("0.28").unwrap(), rat(7, 25));
        assert_eq!(parse_rat("1e-6").unwrap(), rat(1, 1_000_000));
        assert_eq!(parse_rat("-2").unwrap(), int(-2));
        assert_eq!(parse_rat("-1.5E1").unwrap(), int(-15));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn decimal_rendering_respects_rounding() {
        let x = rat(2, 3);
        assert_eq!(to_decimal(&x, 3, Rounding::Floor), "0.666");
        assert_eq!(to_decimal(&x, 3, Rounding::Ceil), "0.667");
        assert_eq!(to_decimal(&x, 3, Rounding::Nearest), "0.667");
        assert_eq!(to_decimal(&-x, 2, Rounding::Nearest), "-0.67");
        assert_eq!(to_decimal(&rat(1, 20), 1, Rounding::Nearest), "0.1");
        assert_eq!(to_fraction(&rat(6, 4)), "3/2");
        assert_eq!(to_fraction(&int(5)), "5");
    }

    #[test]
    fn ln_enclosure_brackets_float_value() {
        for (n, d) in [(1, 1), (2, 1), (28, 100), (100, 28), (7, 3), (1, 1000), (5, 4)] {
            let x = rat(n, d);
            let enc = ln_enclosure(&x, 60).unwrap();
            let f = (n as f64 / d as f64).ln();
            let (lo, hi) = enc.to_f64();
            assert!(lo <= f + 1e-15 && f - 1e-15 <= hi, "ln({n}/{d}) = {f} not in {enc}");
            assert!(hi - lo < 1e-15);
        }
        assert!(ln_enclosure(&int(0), 10).is_err());
    }

    #[test]
    fn sqrt_enclosure_brackets() {
        let enc = sqrt_enclosure(&int(5), 64).unwrap();
        assert!(&enc.lo * &enc.lo <= int(5));
        assert!(&enc.hi * &enc.hi >= int(5));
        let exact = sqrt_enclosure(&int(16), 8).unwrap();
        assert_eq!(exact, RatInterval::point(int(4)));
    }

    #[test]
    fn interval_arithmetic_is_conservative() {
        let a = RatInterval::new(rat(-1, 2), rat(1, 3));
        let b = RatInterval::new(rat(2, 1), rat(3, 1));
        let p = a.mul(&b);
        assert_eq!(p, RatInterval::new(rat(-3, 2), int(1)));
        assert!(b.div(&a).is_err());
        assert_eq!(a.sub(&a).lo, rat(-5, 6));
    }
}
