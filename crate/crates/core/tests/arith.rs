use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use siegel_core::arith::padic::{angle, PadicInt};
use siegel_core::arith::rational::int;
use siegel_core::arith::*;

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

// Bernoulli numbers from the exponential generating function x/(e^x − 1),
// computed by inverting the series (e^x − 1)/x with rational arithmetic.
fn bernoulli_egf_oracle(k: usize) -> Rational {
    let mut fact = vec![Rational::one()];
    for i in 1..=k + 1 {
        let f = fact[i - 1].clone() * int(i as i64);
        fact.push(f);
    }
    // a_i = 1/(i+1)!
    let a: Vec<Rational> = (0..=k).map(|i| fact[i + 1].recip()).collect();
    let mut c = vec![Rational::one()];
    for m in 1..=k {
        let mut s = Rational::zero();
        for j in 1..=m {
            s += &a[j] * &c[m - j];
        }
        c.push(-s);
    }
    &c[k] * &fact[k]
}

#[test]
fn bernoulli_examples() {
    assert_eq!(bernoulli(0), int(1));
    assert_eq!(bernoulli(1), q("-1/2"));
    assert_eq!(bernoulli(2), q("1/6"));
    assert_eq!(bernoulli(12), q("-691/2730"));
    for k in 0..30 {
        assert_eq!(bernoulli(k), bernoulli_egf_oracle(k), "k = {k}");
    }
}

#[test]
fn zeta_values() {
    let z = |k| dirichlet_l_neg(k, &CharacterSpec::Trivial, None, 10).unwrap().as_rational().unwrap().clone();
    assert_eq!(z(2), q("-1/12"));
    assert_eq!(z(4), q("1/120"));
    assert_eq!(z(6), q("-1/252"));
    for k in 1..20usize {
        assert_eq!(z(k), -bernoulli(k) / int(k as i64) * if k == 1 { int(-1) } else { int(1) });
    }
    let z5 = dirichlet_l_neg(4, &CharacterSpec::Trivial, Some(5), 10).unwrap();
    assert_eq!(z5.as_rational().unwrap(), &q("-31/30"));
}

// Generalized Bernoulli number straight from the definition with the Bernoulli polynomial.
fn gen_bernoulli_oracle(k: usize, d: i64) -> Rational {
    let f = d.unsigned_abs() as i64;
    let bk = bernoulli_poly(k);
    let mut s = Rational::zero();
    for a in 1..=f {
        let c = siegel_core::arith::symbols::kronecker_i64(d, a).unwrap();
        s += int(c as i64) * bk.eval(&Rational::new(b(a), b(f)));
    }
    s * int(f).pow(k as i32 - 1)
}

#[test]
fn generalized_bernoulli_examples() {
    let chi = CharacterSpec::kronecker(-3).unwrap();
    let g = |k, c: &CharacterSpec| generalized_bernoulli(k, c, 10).unwrap().as_rational().unwrap().clone();
    assert_eq!(g(3, &chi), q("2/3"));
    assert_eq!(g(2, &CharacterSpec::Trivial), q("1/6"));
    assert_eq!(g(2, &chi), int(0));
    assert_eq!(g(1, &CharacterSpec::Trivial), q("1/2"));
    for d in [-3i64, -4, 5, -7, 8, 12, -20] {
        let c = CharacterSpec::kronecker(d).unwrap();
        for k in 1..9 {
            assert_eq!(g(k, &c), gen_bernoulli_oracle(k, d), "d={d} k={k}");
        }
    }
    let l = dirichlet_l_neg(3, &chi, None, 10).unwrap();
    assert_eq!(l.as_rational().unwrap(), &q("-2/9"));
    assert!(generalized_bernoulli(0, &chi, 10).is_err());
}

#[test]
fn teichmuller_twisted_bernoulli_matches_definition() {
    // B_{k, ω^b} from the definition, evaluated in Z/p^W through ω
    let p = 5u64;
    let w = 14u32;
    for bexp in [1i64, 3] {
        let chi = CharacterSpec::teichmuller_power(p, bexp).unwrap();
        for k in [1usize, 3, 5] {
            let got = match generalized_bernoulli(k, &chi, 8).unwrap() {
                Coefficient::Padic(x) => x,
                _ => panic!("expected p-adic"),
            };
            let bk = bernoulli_poly(k);
            let f = p as i64;
            let mut acc = PadicNumber::exact_zero(p);
            for a in 1..f {
                let om = teichmuller(&b(a), p, w).unwrap().pow(bexp as u64);
                let term = PadicNumber::from_padic_int(&om)
                    .mul(&PadicNumber::from_rational(&(bk.eval(&Rational::new(b(a), b(f))) * int(f).pow(k as i32 - 1)), p, w as i64));
                acc = acc.add(&term);
            }
            assert!(got.agreement_with(&acc) >= 8, "b={bexp} k={k}");
        }
        // parity mismatch vanishes exactly
        assert!(matches!(generalized_bernoulli(2, &chi, 8).unwrap(), Coefficient::Padic(ref x) if x.is_zero));
    }
}

#[test]
fn kronecker_examples() {
    assert_eq!(kronecker_symbol(&b(1), &b(5)).unwrap(), 1);
    assert_eq!(kronecker_symbol(&b(-4), &b(3)).unwrap(), -1);
    assert_eq!(kronecker_symbol(&b(12), &b(6)).unwrap(), 0);
    assert!(kronecker_symbol(&b(3), &b(5)).is_err());
    // χ_{−4} table
    for m in 1..40i64 {
        let want = match m % 4 {
            1 => 1,
            3 => -1,
            _ => 0,
        };
        assert_eq!(kronecker_symbol(&b(-4), &b(m)).unwrap(), want);
    }
}

#[test]
fn hilbert_examples() {
    for l in [2u64, 3, 5, 7] {
        for x in [q("2"), q("-3"), q("5/7"), q("12")] {
            assert_eq!(hilbert_symbol(&int(1), &x, l).unwrap(), 1);
        }
    }
    assert_eq!(hilbert_symbol(&int(2), &int(3), 3).unwrap(), -1);
    assert_eq!(hilbert_symbol(&int(5), &int(5), 5).unwrap(), 1);
    assert_eq!(hilbert_symbol(&int(-1), &int(-1), 2).unwrap(), -1);
    assert!(hilbert_symbol(&int(0), &int(3), 3).is_err());
}

#[test]
fn discriminant_decomposition() {
    let dec = |n: i64| fundamental_discriminant_decompose(&b(n)).unwrap();
    assert_eq!(dec(12), (b(12), b(1)));
    assert_eq!(dec(9), (b(1), b(3)));
    assert_eq!(dec(-4), (b(-4), b(1)));
    assert_eq!(dec(-48), (b(-3), b(4)));
    assert!(fundamental_discriminant_decompose(&b(7)).is_err());
}

#[test]
fn factor_examples() {
    assert_eq!(factor(1).unwrap(), vec![]);
    assert_eq!(factor(60480).unwrap(), vec![(2, 6), (3, 3), (5, 1), (7, 1)]);
    assert_eq!(factor(97).unwrap(), vec![(97, 1)]);
    assert!(factor_with_bound(&b(1_000_003 * 1_000_033), 1000).is_err());
}

#[test]
fn teichmuller_examples() {
    assert_eq!(teichmuller(&b(2), 5, 2).unwrap().value, b(7));
    assert_eq!(teichmuller(&b(1), 7, 6).unwrap().value, b(1));
    assert_eq!(teichmuller(&b(-1), 7, 6).unwrap().value, BigInt::from(7).pow(6) - 1);
    assert!(teichmuller(&b(10), 5, 3).is_err());
}

#[test]
fn log_and_s() {
    let p = 5;
    assert!(padic_log(&PadicInt::one(p, 6), 6).unwrap().is_zero());
    let v = padic_log(&PadicInt::new(p, 6, 3), 3).unwrap();
    assert_eq!(&v.value % b(25), b(5));
    let e = padic_exp(&v, 3).unwrap();
    assert_eq!(e.value, b(6));
    assert_eq!(s_of(&PadicInt::new(p, 6, 8)).unwrap().value, b(1));
    assert!(s_of(&PadicInt::one(p, 8)).unwrap().is_zero());
    assert_eq!(s_of(&PadicInt::new(p, 36, 8)).unwrap().value, b(2));
    assert!(padic_log(&PadicInt::new(p, 2, 4), 4).is_err());
}

#[test]
fn rational_wire_format() {
    assert_eq!(rational_to_string(&q("-6/4")), "-3/2");
    assert_eq!(rational_to_string(&q("8/4")), "2");
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn character_normalization() {
    // (5/·) at p = 5 is ω^2
    let c = CharacterSpec::product(5, 5, 0).unwrap();
    assert_eq!(c, CharacterSpec::TeichmullerPower { p: 5, b: 2 });
    assert_eq!(c.rational_discriminant(), Some(5));
    assert_eq!(CharacterSpec::product(1, 7, 6).unwrap(), CharacterSpec::Trivial);
    assert_eq!(CharacterSpec::kronecker(-3).unwrap().parity(), -1);
    assert_eq!(CharacterSpec::teichmuller_power(5, 1).unwrap().conductor(), 5);
}

proptest! {
    #[test]
    fn kronecker_multiplicative(di in 0usize..6, m1 in 1i64..300, m2 in 1i64..300) {
        let d = [-3i64, -4, 5, 8, -7, 12][di];
        let k = |m: i64| kronecker_symbol(&b(d), &b(m)).unwrap();
        prop_assert_eq!(k(m1 * m2), k(m1) * k(m2));
    }

    #[test]
    fn hilbert_product_formula(a in -60i64..60, bb in -60i64..60, c in 1i64..9, dd in 1i64..9) {
        prop_assume!(a != 0 && bb != 0);
        let x = Rational::new(b(a), b(c));
        let y = Rational::new(b(bb), b(dd));
        let mut prod = hilbert_symbol_real(&x, &y).unwrap() as i64;
        for l in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
            prod *= hilbert_symbol(&x, &y, l).unwrap() as i64;
        }
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_bimultiplicative(a in 1i64..50, a2 in 1i64..50, c in -50i64..50, li in 0usize..4) {
        prop_assume!(c != 0);
        let l = [2u64, 3, 5, 7][li];
        let h = |x: i64, y: i64| hilbert_symbol(&int(x), &int(y), l).unwrap();
        prop_assert_eq!(h(a * a2, c), h(a, c) * h(a2, c));
        prop_assert_eq!(h(a, c), h(c, a));
    }

    #[test]
    fn teichmuller_is_root_of_unity(x in 1i64..10_000, pi in 0usize..3) {
        let p = [3u64, 5, 7][pi];
        prop_assume!(x % p as i64 != 0);
        let w = teichmuller(&b(x), p, 10).unwrap();
        prop_assert!(w.pow(p - 1).value == BigInt::one());
        prop_assert_eq!(&(&w.value - b(x)) % b(p as i64), BigInt::zero());
    }

    #[test]
    fn log_is_additive(u in 0i64..1000, v in 0i64..1000, pi in 0usize..3) {
        let p = [3u64, 5, 7][pi];
        let m = 8;
        let x = PadicInt::new(p, 1 + p as i64 * u, m);
        let y = PadicInt::new(p, 1 + p as i64 * v, m);
        let lhs = padic_log(&x.mul(&y), m).unwrap();
        let rhs = padic_log(&x, m).unwrap().add(&padic_log(&y, m).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_inverts_log(u in 0i64..1000) {
        let p = 5u64;
        let x = PadicInt::new(p, 1 + 5 * u, 7);
        let l = padic_log(&x, 7).unwrap();
        prop_assert_eq!(padic_exp(&l, 7).unwrap(), x);
    }

    #[test]
    fn angle_is_one_mod_p(x in 1i64..5000) {
        prop_assume!(x % 7 != 0);
        let a = angle(&b(x), 7, 6).unwrap();
        prop_assert_eq!(&a.value % b(7), BigInt::one());
    }
}
