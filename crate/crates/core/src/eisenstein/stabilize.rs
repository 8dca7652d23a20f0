//! The stabilization polynomials `𝓟, 𝓡, 𝓡̃` and the semi-ordinary p-stabilization.

use serde::{Deserialize, Serialize};

use crate::arith::poly::{BiPoly, QPoly};
use crate::arith::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationPolys {
    pub n: usize,
    pub p: u64,
    pub p_poly: BiPoly,
    pub r_poly: BiPoly,
    pub r_tilde: BiPoly,
}

fn pp(p: u64, e: usize) -> Rational {
    int(p as i64).pow(e as i32)
}

/// `p^{j(2n−j+1)/2}`: the exponents attached to `X^j` in `𝓡`.
pub fn r_exponent(n: usize, j: usize) -> usize {
    j * (2 * n - j + 1) / 2
}

pub fn stabilization_polys(n: usize, p: u64) -> StabilizationPolys {
    let mut pr = BiPoly::one_minus(pp(p, n), 1);
    for i in 1..=n / 2 {
        pr = pr.mul(&BiPoly::one_minus(pp(p, 2 * n - 2 * i + 1), 2));
    }
    let mut rr = BiPoly::one();
    for j in 1..=n {
        rr = rr.mul(&BiPoly::one_minus(pp(p, r_exponent(n, j)), j));
    }
    let rt = rr.reflect(n);
    StabilizationPolys { n, p, p_poly: pr, r_poly: rr, r_tilde: rt }
}

/// Elementary symmetric polynomials `s_0 … s_m` of a list of polynomials.
pub fn elementary_symmetric(xs: &[QPoly]) -> Vec<QPoly> {
    let mut e = vec![QPoly::one()];
    for x in xs {
        let mut next = e.clone();
        next.push(QPoly::zero());
        for m in 1..next.len() {
            next[m] = next[m].add(&x.mul(&e[m - 1]));
        }
        e = next;
    }
    e
}

/// `{p^{j(2n−j+1)/2} X^j | 1 ≤ j ≤ n}`.
pub fn r_roots(n: usize, p: u64) -> Vec<QPoly> {
    (1..=n).map(|j| QPoly::monomial(pp(p, r_exponent(n, j)), j)).collect()
}
