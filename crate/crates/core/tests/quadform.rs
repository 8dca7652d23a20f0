use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use siegel_core::arith::rational::int;
use siegel_core::arith::*;
use siegel_core::quadform::fpoly::{expected_degree, functional_equation_check_with};
use siegel_core::quadform::*;
use siegel_core::Error;

fn m(s: &str) -> HalfIntegralMatrix {
    HalfIntegralMatrix::parse(s).unwrap()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn matrix_basics() {
    assert!(HalfIntegralMatrix::parse("1,0;0,2").is_err());
    assert!(HalfIntegralMatrix::parse("2,1;0,2").is_err());
    assert!(HalfIntegralMatrix::parse("2,1;1").is_err());
    let a2 = m("2,1;1,2");
    assert_eq!(a2.det_t(), rat(3, 4));
    assert_eq!(a2.disc(), BigInt::from(3));
    assert_eq!(m("2").disc(), BigInt::from(1));
    assert_eq!(m("2,0,0;0,2,0;0,0,2").disc(), BigInt::from(4));
    let j = serde_json::to_string(&a2).unwrap();
    assert_eq!(j, "[[2,1],[1,2]]");
    assert_eq!(serde_json::from_str::<HalfIntegralMatrix>(&j).unwrap(), a2);
    assert!(serde_json::from_str::<HalfIntegralMatrix>("[[1,1],[1,2]]").is_err());
}

#[test]
fn block_decompose_examples() {
    let (u, t) = block_decompose(&m("4,0;0,0")).unwrap();
    assert_eq!(u, vec![vec![1, 0], vec![0, 1]]);
    assert_eq!(t, m("4"));
    let one = m("2,2;2,2");
    let (u, t) = block_decompose(&one).unwrap();
    assert_eq!(t, m("2"));
    let full = one.transform(&u);
    assert_eq!(full, m("2,0;0,0"));
    let (_, t0) = block_decompose(&m("0,0;0,0")).unwrap();
    assert_eq!(t0.degree(), 0);
    assert!(matches!(block_decompose(&m("2,3;3,2")), Err(Error::Indefinite)));
}

#[test]
fn enumeration_examples() {
    assert_eq!(enumerate_psd_with(2, 2, 1).unwrap().len(), 8);
    let one = enumerate_psd(1, 3).unwrap();
    assert_eq!(one, vec![m("0"), m("2"), m("4"), m("6")]);
    // brute force over b² ≤ 4ac with a + c ≤ 3
    let mut count = 0;
    for a in 0..=3i64 {
        for c in 0..=3 - a {
            for b in -6i64..=6 {
                if b * b <= 4 * a * c {
                    count += 1;
                }
            }
        }
    }
    let two = enumerate_psd(2, 3).unwrap();
    assert_eq!(two.len(), count);
    assert!(two.iter().all(|t| t.is_psd()));
    assert!(enumerate_psd(5, 1).is_err());
}

#[test]
fn invariants_examples() {
    let inv = invariants_of(&m("2"), 5).unwrap();
    assert_eq!(inv.hasse_strict, 1);
    assert_eq!(chi_local(&int(2), 5), -1);
    assert_eq!(chi_local(&int(5), 5), 0);
    assert_eq!(chi_local(&int(4), 5), 1);
    let a2 = invariants_of(&m("2,1;1,2"), 3).unwrap();
    assert_eq!(a2.fund, Some((-3, 1)));
    assert_eq!(a2.chi, Some(0));
    assert!(invariants_of(&m("2,2;2,2"), 3).is_err());
    for t in ["2,1;1,2", "2,0;0,6", "2,1,0;1,2,0;0,0,4", "6"] {
        for l in [2u64, 3, 5, 7] {
            let inv = invariants_of(&m(t), l).unwrap();
            assert_eq!(inv.eta * inv.eta, 1);
            if let Some((d, f)) = inv.fund {
                let sd = if inv.degree % 4 == 2 { -inv.disc.clone() } else { inv.disc.clone() };
                assert_eq!(BigInt::from(d) * f * f, sd);
            }
        }
    }
}

#[test]
fn closed_form_examples() {
    assert_eq!(f_poly_closed(&m("2"), 3).unwrap().coeffs, ints(&[1]));
    for p in [2u64, 3, 5] {
        let t = HalfIntegralMatrix::diag(&[p as i64]);
        assert_eq!(f_poly_closed(&t, p).unwrap().coeffs, ints(&[1, p as i64]));
        let t2 = HalfIntegralMatrix::diag(&[(p * p) as i64]);
        let want = ints(&[1, p as i64, (p * p) as i64]);
        assert_eq!(f_poly_closed(&t2, p).unwrap().coeffs, want);
        assert_eq!(f_poly_oracle(&t2, p).unwrap().coeffs, want);
    }
    assert_eq!(f_poly_closed(&m("2,1;1,2"), 3).unwrap().coeffs, ints(&[1]));
    assert_eq!(f_poly_oracle(&m("2"), 2).unwrap().coeffs, ints(&[1]));
    assert!(f_poly_closed(&m("2,0,0;0,2,0;0,0,2"), 3).is_err());
}

#[test]
fn rank_two_closed_form_runs_to_the_content_exponent() {
    // T = [[2,1/2],[1/2,5]] at 3: 𝔦 = 2 but the content exponent is 0
    let t = m("4,2;2,10");
    let want = ints(&[1, 3, 27]);
    assert_eq!(f_poly_oracle(&t, 3).unwrap().coeffs, want);
    assert_eq!(f_poly_closed(&t, 3).unwrap().coeffs, want);
    let inv = invariants_of(&t, 3).unwrap();
    assert_eq!((inv.iota, inv.content), (2, 0));
}

#[test]
fn rank_two_at_two_is_oracle_verified() {
    let f = f_poly(&m("2,1;1,4"), 2).unwrap();
    assert_eq!(f.method, Method::ClosedOracleVerified);
    assert_eq!(f_poly(&m("2,1;1,4"), 3).unwrap().method, Method::Closed);
}

// Oracle vs closed form, degree law and functional equation over the reduced
// binary forms with entries ≤ 6 (the full ≤ 12 sweep lives in the acceptance suite).
#[test]
fn oracle_matches_closed_form_small_sweep() {
    let mut checked = 0;
    for a in 1..=6i64 {
        for c in a..=6 {
            for b in -a..=a {
                let t = HalfIntegralMatrix::new(vec![vec![2 * a, b], vec![b, 2 * c]]).unwrap();
                if !t.is_nondegenerate() {
                    continue;
                }
                for l in [2u64, 3, 5] {
                    if invariants_of(&t, l).unwrap().v_disc > 3 {
                        continue;
                    }
                    let cl = f_poly_closed(&t, l).unwrap();
                    let or = f_poly_oracle(&t, l).unwrap();
                    assert_eq!(cl.coeffs, or.coeffs, "{t} at {l}");
                    assert_eq!(cl.coeffs.len() - 1, expected_degree(&t, l).unwrap());
                    assert!(functional_equation_check(&t, l).unwrap().holds, "{t} at {l}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 150);
}

#[test]
fn rank_one_sweep() {
    for t in 1..=40i64 {
        for l in [2u64, 3, 5] {
            let tm = HalfIntegralMatrix::diag(&[t]);
            let v = valuation(&BigInt::from(t), l);
            let want: Vec<BigInt> = (0..=v).map(|i| BigInt::from(l).pow(i)).collect();
            assert_eq!(f_poly_closed(&tm, l).unwrap().coeffs, want);
            if v <= 3 {
                assert_eq!(f_poly_oracle(&tm, l).unwrap().coeffs, want, "({t}) at {l}");
            }
            assert!(functional_equation_check(&tm, l).unwrap().holds);
        }
    }
}

#[test]
fn hasse_convention_matters_for_odd_rank() {
    // the strict i<j product breaks the odd-rank functional equation; i≤j restores it
    let t = m("6");
    let f = f_poly(&t, 2).unwrap();
    assert!(functional_equation_check_with(&t, 2, &f, HasseConvention::Kitaoka).unwrap().holds);
    assert!(!functional_equation_check_with(&t, 2, &f, HasseConvention::Strict).unwrap().holds);
}

#[test]
fn rank_three_routes_agree() {
    for (g, p) in [("2,1,0;1,2,0;0,0,2", 3u64), ("2,0,0;0,2,0;0,0,2", 3), ("2,1,1;1,2,1;1,1,2", 5), ("2,0,0;0,2,0;0,0,6", 3)] {
        let t = m(g);
        let d = fpoly::f_poly_density_checked(&t, p).unwrap();
        let o = f_poly_oracle(&t, p).unwrap();
        assert_eq!(d.coeffs, o.coeffs, "{t} at {p}");
        assert_eq!(d.coeffs.len() - 1, expected_degree(&t, p).unwrap());
        assert!(functional_equation_check(&t, p).unwrap().holds);
    }
}

#[test]
fn proof_identity_examples() {
    for t in [1i64, 3, 5, 25, 15] {
        for p in [3u64, 5] {
            let tm = HalfIntegralMatrix::diag(&[t]);
            assert_eq!(s_poly_sum(&tm, p).unwrap(), QPoly::one());
            assert_eq!(s_poly_closed(&tm, p).unwrap(), QPoly::one());
        }
    }
    let a2 = m("2,1;1,2");
    assert_eq!(s_poly_sum(&a2, 5).unwrap(), QPoly::from_ints([1, 5]));
    assert_eq!(s_poly_closed(&a2, 5).unwrap(), QPoly::from_ints([1, 5]));
    assert_eq!(s_poly_sum(&HalfIntegralMatrix::zero(0), 3).unwrap(), QPoly::one());
    let c3 = s_poly_closed(&m("2,0,0;0,2,0;0,0,2"), 3).unwrap();
    assert!(c3.degree().unwrap() > 0);
    for (g, p) in [("2,1,0;1,2,0;0,0,2", 3u64), ("2,0,0;0,2,0;0,0,2", 3), ("2,1,1;1,2,1;1,1,2", 5), ("2,0,0;0,2,0;0,0,6", 5), ("2,1,0;1,2,0;0,0,6", 5)] {
        let t = m(g);
        assert_eq!(s_poly_sum(&t, p).unwrap(), s_poly_closed(&t, p).unwrap(), "{t} at {p}");
    }
}

#[test]
fn recursion_examples() {
    let a2 = m("2,1;1,2");
    for p in [3u64, 5] {
        let r = katsurada_recursion_check(&a2, &m("2"), p).unwrap();
        assert!(r.holds, "{}", r.diagnostic);
        assert_eq!(r.r, 3);
    }
    let r = katsurada_recursion_check(&a2, &a2, 3).unwrap();
    assert!(r.holds && r.r == 4, "{}", r.diagnostic);
    assert!(katsurada_recursion_check(&m("2,2;2,2"), &m("2"), 3).is_err());
}

#[test]
fn oracle_bounds_are_explicit() {
    let big = HalfIntegralMatrix::diag(&[3i64.pow(5)]);
    assert!(matches!(f_poly_oracle(&big, 3), Err(Error::BoundExceeded(_))));
    assert!(matches!(f_poly_oracle(&m("2,0;0,0"), 3), Err(Error::Singular)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn unit_scaling(a in 1i64..6, b in -5i64..6, c in 1i64..6, u in prop::sample::select(vec![1i64, 2, 4, 7, 8, 11, 13])) {
        let t = HalfIntegralMatrix::new(vec![vec![2 * a, b], vec![b, 2 * c]]).unwrap();
        prop_assume!(t.is_psd() && t.is_nondegenerate());
        for l in [3u64, 5] {
            prop_assume!(u % l as i64 != 0);
            prop_assert_eq!(f_poly(&t, l).unwrap().coeffs, f_poly(&t.scale(u), l).unwrap().coeffs);
        }
    }

    #[test]
    fn unimodular_invariance(a in 1i64..6, b in -5i64..6, c in 1i64..6, x in -2i64..3, l in prop::sample::select(vec![2u64, 3, 5])) {
        let t = HalfIntegralMatrix::new(vec![vec![2 * a, b], vec![b, 2 * c]]).unwrap();
        prop_assume!(t.is_psd() && t.is_nondegenerate());
        let t2 = t.transform(&[vec![1, x], vec![0, 1]]).transform(&[vec![0, 1], vec![1, 0]]);
        prop_assert_eq!(f_poly(&t, l).unwrap().coeffs, f_poly(&t2, l).unwrap().coeffs);
        prop_assert_eq!(invariants_of(&t, l).unwrap().eta, invariants_of(&t2, l).unwrap().eta);
    }

    #[test]
    fn degree_law_and_normalization(a in 1i64..9, b in -8i64..9, c in 1i64..9, l in prop::sample::select(vec![3u64, 5, 7])) {
        let t = HalfIntegralMatrix::new(vec![vec![2 * a, b], vec![b, 2 * c]]).unwrap();
        prop_assume!(t.is_psd() && t.is_nondegenerate());
        let f = f_poly(&t, l).unwrap();
        prop_assert_eq!(f.coeffs[0].clone(), BigInt::one());
        prop_assert_eq!(f.coeffs.len() - 1, expected_degree(&t, l).unwrap());
        prop_assert!(functional_equation_check(&t, l).unwrap().holds);
    }

    #[test]
    fn block_decompose_is_unimodular(idx in 0usize..200) {
        let ts = enumerate_psd(3, 3).unwrap();
        let t = &ts[idx % ts.len()];
        let (u, tr) = block_decompose(t).unwrap();
        let ub: Vec<Vec<BigInt>> = u.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let d = matrix::det(&ub);
        prop_assert!(d == BigInt::one() || d == -BigInt::one());
        prop_assert_eq!(tr.degree(), t.rank());
        prop_assert!(tr.degree() == 0 || tr.is_nondegenerate());
    }
}
