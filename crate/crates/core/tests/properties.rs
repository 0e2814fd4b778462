use std::cmp::Ordering;

use cantorlab_core::admissible::{lambda, lambda_digit, lambda_recursive, thue_morse};
use cantorlab_core::critical::{alpha_n, beta_c, AlphaC};
use cantorlab_core::expansion::{delta_of_beta, delta_prefix, quasi_greedy, unique_expansion_test, x_max};
use cantorlab_core::rational::{int, pow, rat};
use cantorlab_core::sequence::{beta_series_eval, pi_eval};
use cantorlab_core::uniqueness::{consecutive_products, enum_codes, unique_exact, TranslationCode};
use cantorlab_core::{Alphabet, Digit, EpSequence, Params, Rat};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn digits(lo: Digit, hi: Digit, max_len: usize, min_len: usize) -> impl Strategy<Value = Vec<Digit>> {
    prop::collection::vec(lo..=hi, min_len..=max_len)
}

/// `(N, β)` with `β` on a fine rational grid inside `(1/(2N-1), 1/N)`.
fn params() -> impl Strategy<Value = Params> {
    (2u32..=4).prop_flat_map(|n| {
        let (n64, den) = (n as i64, 997 * n as i64 * (2 * n as i64 - 1));
        (997 * n64 + 1..997 * (2 * n64 - 1)).prop_map(move |num| Params::new(n, rat(num, den)).unwrap())
    })
}

fn signed_code(n: u32) -> impl Strategy<Value = EpSequence> {
    let d = n as Digit - 1;
    (digits(-d, d, 4, 0), digits(-d, d, 5, 1))
        .prop_map(move |(pre, per)| EpSequence::new(Alphabet::Signed(n), pre, per).unwrap())
}

fn params_and_code() -> impl Strategy<Value = (Params, EpSequence)> {
    params().prop_flat_map(|p| {
        let n = p.n();
        (Just(p), signed_code(n))
    })
}

fn unsigned(m: u32) -> impl Strategy<Value = EpSequence> {
    (digits(0, m as Digit - 1, 4, 0), digits(0, m as Digit - 1, 4, 1))
        .prop_map(move |(pre, per)| EpSequence::new(Alphabet::Unsigned(m), pre, per).unwrap())
}

fn partial_sum(code: &EpSequence, p: &Params, k: usize) -> Rat {
    let mut acc = Rat::zero();
    let mut w = p.spacing();
    for d in code.prefix(k) {
        acc += &w * int(d as i64);
        w *= p.beta();
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pi_is_odd((p, code) in params_and_code()) {
        let neg = code.negate().unwrap();
        prop_assert!((pi_eval(&code, &p) + pi_eval(&neg, &p)).is_zero());
    }

    #[test]
    fn pi_lies_in_range((p, code) in params_and_code()) {
        prop_assert!(pi_eval(&code, &p).abs() <= Rat::one());
        let n = p.n();
        let folded = code.map(Alphabet::Unsigned(n), |d| d.abs());
        let v = pi_eval(&folded, &p);
        prop_assert!(v >= Rat::zero() && v <= Rat::one());
    }

    #[test]
    fn partial_sums_converge((p, code) in params_and_code(), k in 0usize..12) {
        let gap = (pi_eval(&code, &p) - partial_sum(&code, &p, k)).abs();
        prop_assert!(gap <= pow(p.beta(), k));
    }

    #[test]
    fn reflected_series_sum_to_maximum(m in 2u32..=7, num in 1i64..100, s in unsigned(7)) {
        let s = s.map(Alphabet::Unsigned(m), |d| d % m as Digit);
        let beta = rat(num, 101);
        let total = beta_series_eval(&s, &beta) + beta_series_eval(&s.reflect().unwrap(), &beta);
        prop_assert_eq!(total, int(m as i64 - 1) * &beta / (Rat::one() - &beta));
    }

    #[test]
    fn lex_order_is_total(a in unsigned(3), b in unsigned(3), c in unsigned(3)) {
        prop_assert_eq!(a.lex_cmp(&b), b.lex_cmp(&a).reverse());
        prop_assert_eq!(a.lex_cmp(&b) == Ordering::Equal, a == b);
        if a.lex_cmp(&b) != Ordering::Greater && b.lex_cmp(&c) != Ordering::Greater {
            prop_assert!(a.lex_cmp(&c) != Ordering::Greater);
        }
        // agrees with prefix comparison far enough out
        let horizon = 2 * (8 + 4 * 4);
        prop_assert_eq!(a.lex_cmp(&b), a.prefix(horizon).cmp(&b.prefix(horizon)));
    }

    #[test]
    fn reflection_is_an_involution(a in unsigned(5)) {
        prop_assert_eq!(a.reflect().unwrap().reflect().unwrap(), a);
    }

    #[test]
    fn quasi_greedy_is_strict_and_reconstructs(m in 2u32..=5, num in 1i64..1000, x_num in 1i64..=1000) {
        // β in (1/m, 1)
        let beta = rat(1, m as i64) + (Rat::one() - rat(1, m as i64)) * rat(num, 1001);
        let x = x_max(&beta, m) * rat(x_num, 1000);
        let s = quasi_greedy(&x, &beta, m, 40).unwrap();
        let mut acc = Rat::zero();
        let mut w = beta.clone();
        for &d in &s {
            acc += &w * int(d as i64);
            prop_assert!(acc < x);
            // the next digit up would reach the target
            if (d as u32) < m - 1 {
                prop_assert!(&acc + &w >= x);
            }
            w *= &beta;
        }
        prop_assert!(&x - &acc <= x_max(&beta, m) * pow(&beta, 40));
    }


    #[test]
    fn unique_test_is_reflection_invariant(p in params(), s in unsigned(7)) {
        let m = p.m();
        let eps = s.map(Alphabet::Unsigned(m), |d| d % m as Digit);
        let delta = delta_of_beta(p.beta(), m).unwrap();
        let a = unique_expansion_test(&eps, delta.as_ref(), 2048).unwrap();
        let b = unique_expansion_test(&eps.reflect().unwrap(), delta.as_ref(), 2048).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn exact_uniqueness_is_reflection_invariant((p, code) in params_and_code()) {
        let a = unique_exact(&TranslationCode::new(code.clone(), p.clone()).unwrap());
        let b = unique_exact(&TranslationCode::new(code.negate().unwrap(), p).unwrap());
        prop_assert_eq!(a, b);
    }

    /// Centres of the level-`k` pieces of `Γ ∩ (Γ + t)` are symmetric about
    /// `(1 + t)/2`, and distinct digit strings give distinct pieces.
    #[test]
    fn intersection_is_centrally_symmetric((p, code) in params_and_code(), k in 1usize..=5) {
        let tc = TranslationCode::new(code.clone(), p.clone()).unwrap();
        prop_assume!(unique_exact(&tc));
        let sets = consecutive_products(&tc).unwrap();
        let tail = pow(p.beta(), k) * (Rat::one() + pi_eval(&code.shift(k), &p)) / int(2);
        let mut centres = vec![Rat::zero()];
        let mut w = p.spacing();
        for l in 0..k {
            let r = sets.at(l);
            centres = centres.iter().flat_map(|x| r.digits().map(|d| x + &w * int(d as i64)).collect::<Vec<_>>()).collect();
            w *= p.beta();
        }
        let count = centres.len();
        let mut points: Vec<Rat> = centres.into_iter().map(|x| x + &tail).collect();
        points.sort();
        points.dedup();
        prop_assert_eq!(points.len(), count);
        let twice_centre = Rat::one() + tc.t();
        let mut mirrored: Vec<Rat> = points.iter().map(|x| &twice_centre - x).collect();
        mirrored.sort();
        prop_assert_eq!(mirrored, points);
    }

    #[test]
    fn interval_enclosures_contain_exact_values(n in 2u32..=6, bits in 20u32..40) {
        let tol = Rat::new(1.into(), num_bigint::BigInt::one() << bits);
        let a = AlphaC::new(n).unwrap();
        let e = a.enclosure(&tol).unwrap();
        prop_assert!(e.width() <= tol);
        prop_assert!(a.cmp_rational(&e.lo) != Ordering::Greater);
        prop_assert!(a.cmp_rational(&e.hi) != Ordering::Less);
    }
}

proptest! {
    // exact δ digits get expensive quickly; a few bases suffice
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_has_no_long_zero_runs(p in params()) {
        let d = delta_prefix(p.beta(), p.m(), 160).unwrap();
        prop_assert!(d.windows(64).all(|w| w.iter().any(|&x| x != 0)));
    }
}

#[test]
fn thue_morse_recursion() {
    assert_eq!(thue_morse(0), 0);
    for l in 0..5000u64 {
        assert_eq!(thue_morse(2 * l), thue_morse(l));
        assert_eq!(thue_morse(2 * l + 1), 1 - thue_morse(l));
    }
}

#[test]
fn lambda_matches_parity_formulas() {
    for m in 2..=11u32 {
        let q = (m / 2) as Digit;
        for l in 1..2000u64 {
            let tau = |i: u64| thue_morse(i) as Digit;
            let want = if m % 2 == 0 { q - 1 + tau(l) } else { q + tau(l) - tau(l - 1) };
            assert_eq!(lambda_digit(m, l), want, "m={m} l={l}");
        }
    }
}

#[test]
fn lambda_is_smallest_admissible_on_a_window() {
    for n in 2..=4u32 {
        let m = 2 * n - 1;
        let window = 1 << 12;
        let l = lambda(m, 2 * window + 64);
        for k in 1..=window {
            let shifted = &l[k..k + window];
            let reflected: Vec<Digit> = shifted.iter().map(|d| m as Digit - 1 - d).collect();
            assert!(shifted < &l[..window], "N={n} k={k}");
            assert!(reflected.as_slice() < &l[..window], "reflected N={n} k={k}");
        }
        assert_eq!(l[..4096], lambda_recursive(n, 4096)[..]);
    }
}

#[test]
fn delta_brackets_lambda_at_beta_c() {
    for n in 2..=5u32 {
        let m = 2 * n - 1;
        let enc = beta_c(n, &rat(1, 1 << 40)).unwrap().interval;
        let len = 24;
        let lam = lambda(m, len);
        // δ is decreasing in β: δ(lo) >= λ >= δ(hi)
        assert!(delta_prefix(&enc.lo, m, len).unwrap() >= lam, "N={n}");
        assert!(delta_prefix(&enc.hi, m, len).unwrap() <= lam, "N={n}");
    }
}

#[test]
fn ordering_chain_at_tight_tolerance() {
    for n in 2..=5u32 {
        let bc = beta_c(n, &rat(1, 1_000_000_000_000)).unwrap().interval;
        let a = AlphaC::new(n).unwrap();
        assert!(rat(1, 2 * n as i64 - 1) < bc.lo && bc.hi < rat(1, n as i64));
        assert_eq!(a.cmp_rational(&bc.lo), Ordering::Greater);
        assert_eq!(a.cmp_rational(&rat(1, 2 * n as i64 - 1)), Ordering::Less);
    }
}

#[test]
fn alpha_n_increases_towards_alpha_c() {
    let n = 3;
    let a = AlphaC::new(n).unwrap();
    let tol = rat(1, 1 << 40);
    let roots: Vec<_> = (2..=6).map(|k| alpha_n(n, k, &tol).unwrap().interval).collect();
    for pair in roots.windows(2) {
        assert!(pair[0].hi <= pair[1].lo);
    }
    assert_eq!(a.cmp_rational(&roots.last().unwrap().hi), Ordering::Less);
}

#[test]
fn endpoints_have_forced_codes() {
    for n in 2..=4u32 {
        let beta = rat(3 * n as i64 - 1, 2 * n as i64 * (2 * n as i64 - 1));
        let p = Params::new(n, beta).unwrap();
        for t in [Rat::one(), -Rat::one()] {
            let e = enum_codes(&t, &p, 30, 0).unwrap();
            assert!(e.counts.iter().all(|&c| c == 1));
        }
    }
}
