//! Parser and printer: canonical forms, round trips and fuzzing.

use hahn::checks::{gen_random, Domain, GeneratorSpec};
use hahn::coeff::CoeffMode;
use hahn::error::Error;
use hahn::exponent::{Bound, Exponent};
use hahn::parse::{parse_expr, parse_series};
use hahn::series::{Context, Series};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn canonical_examples() {
    let ctx = Context::rational(1);
    let s = parse_series("3/4*t^(-1/2) + 2", ctx).unwrap();
    assert_eq!(s.terms().len(), 2);
    assert_eq!(s.coefficient(&Exponent::scalar(q(-1, 2))).unwrap(), ctx.coeff(&q(3, 4)));
    assert_eq!(s.coefficient(&Exponent::scalar(q(0, 1))).unwrap(), ctx.coeff(&q(2, 1)));
    assert_eq!(*s.cutoff(), Bound::Infinity);
    assert_eq!(s.to_string(), "3/4*t^(-1/2) + 2");

    let ctx2 = Context::rational(2);
    let s = parse_series("t^[0,1] + O(t^[1,0])", ctx2).unwrap();
    assert_eq!(s.terms().len(), 1);
    assert_eq!(*s.cutoff(), Bound::Finite(Exponent::from_ints(&[1, 0])));
    assert_eq!(s.to_string(), "t^[0,1] + O(t^[1,0])");

    assert_eq!(parse_series("1 - t", ctx).unwrap().to_string(), "1 - t");
    assert_eq!(Series::zero(ctx).to_string(), "0");
    assert_eq!(parse_series("3*t^(1/2) + O(t^2)", ctx).unwrap().to_string(), "3*t^(1/2) + O(t^2)");
    assert_eq!(parse_series("  2*t^3+t^3 ", ctx).unwrap().to_string(), "3*t^3");
}

#[test]
fn syntax_errors_are_located() {
    let ctx = Context::rational(1);
    match parse_series("t^^2", ctx) {
        Err(Error::Syntax { offset, line, column, .. }) => {
            assert_eq!(offset, 2);
            assert_eq!((line, column), (1, 3));
        }
        other => panic!("expected a syntax error, got {other:?}"),
    }
    match parse_series("1 +\n  t^", ctx) {
        Err(Error::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected a syntax error, got {other:?}"),
    }
    assert!(matches!(
        parse_series("t^[1,2]", ctx),
        Err(Error::DimensionMismatch { expected: 1, found: 2 })
    ));
}

fn roundtrip(ctx: Context, n: u64) {
    let mut cut = vec![0i64; ctx.dim];
    cut[0] = 12;
    for (k, domain) in [Domain::Field, Domain::RingO, Domain::IdealM, Domain::PosUnits].into_iter().enumerate() {
        for cutoff in [Bound::Finite(Exponent::from_ints(&cut)), Bound::Infinity] {
            let spec = GeneratorSpec::new(domain, ctx.dim, cutoff);
            for i in 0..n / 8 {
                let s = gen_random(&spec, 2024 + k as u64, i, ctx);
                let text = s.to_string();
                let back = parse_series(&text, ctx).unwrap_or_else(|e| panic!("`{text}`: {e}"));
                assert_eq!(back, s, "`{text}`");
                assert_eq!(back.to_string(), text);
            }
        }
    }
}

#[test]
fn roundtrip_rational_d1() {
    roundtrip(Context::rational(1), 1000);
}

#[test]
fn roundtrip_rational_d2() {
    roundtrip(Context::rational(2), 1000);
}

#[test]
fn roundtrip_real_d1() {
    roundtrip(Context::new(1, CoeffMode::Real(50)), 1000);
}

#[test]
fn roundtrip_real_d2() {
    roundtrip(Context::new(2, CoeffMode::Real(20)), 1000);
}

const ALPHABET: &[&str] = &[
    "t", "t", "^", "(", ")", "[", "]", ",", "+", "-", "*", "/", "O", "1", "2", "3/4", "0", "-1/2", "1.5", "2.5e-3~", " ",
    "exp", "log", "root", "trunc", "e", "sin", "x", "\n", ".", "~", "e9", "99999999999999999999", "_", "é", "\t",
];

/// Inputs biased towards near-valid syntax, plus raw random bytes.
fn fuzz_input(rng: &mut ChaCha8Rng) -> String {
    if rng.gen_bool(0.5) {
        let len = rng.gen_range(0..24);
        (0..len).map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())]).collect()
    } else {
        let len = rng.gen_range(0..32);
        let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        String::from_utf8_lossy(&bytes).into_owned()
    }
}

#[test]
fn fuzz_never_crashes() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let contexts = [
        Context::rational(1),
        Context::rational(2),
        Context::new(1, CoeffMode::Real(20)),
    ];
    let mut parsed = 0;
    for i in 0..100_000 {
        let input = fuzz_input(&mut rng);
        let ctx = contexts[i % contexts.len()];
        for result in [parse_series(&input, ctx).map(|_| ()), parse_expr(&input, ctx).map(|_| ())] {
            match result {
                Ok(()) => parsed += 1,
                Err(Error::Syntax { line, column, offset, .. }) => {
                    assert!(line >= 1 && column >= 1, "{input:?}");
                    assert!(offset <= input.len(), "{input:?}");
                }
                Err(Error::DimensionMismatch { .. }) => {}
                Err(e) => panic!("unexpected error {e:?} for {input:?}"),
            }
        }
    }
    assert!(parsed > 0);
}

#[test]
fn deep_nesting_is_rejected_not_overflowed() {
    let ctx = Context::rational(1);
    let deep = format!("{}t{}", "(".repeat(100_000), ")".repeat(100_000));
    assert!(matches!(parse_expr(&deep, ctx), Err(Error::Syntax { .. })));
    let minus = format!("{}t", "-".repeat(100_000));
    assert!(matches!(parse_expr(&minus, ctx), Err(Error::Syntax { .. })));
}
