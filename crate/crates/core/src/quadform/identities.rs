//! Identities relating `F_p(p^m T; X)` across `m`.

use serde::{Deserialize, Serialize};

use super::fpoly::f_poly;
use super::invariants::invariants_of;
use super::matrix::HalfIntegralMatrix;
use crate::arith::poly::QPoly;
use crate::arith::rational::{int, Rational};
use crate::eisenstein::stabilize::{elementary_symmetric, r_roots, stabilization_polys};
use crate::error::{Error, Result};

/// `Σ_{m=0}^{r} (−1)^m s_m({p^{j(2r−j+1)/2}X^j}) F_p(p^{r−m}T; X)`.
pub fn s_poly_sum(t: &HalfIntegralMatrix, p: u64) -> Result<QPoly> {
    let r = t.degree();
    if !t.is_nondegenerate() {
        return Err(Error::Singular);
    }
    let s = elementary_symmetric(&r_roots(r, p));
    let mut acc = QPoly::zero();
    for (m, sm) in s.iter().enumerate() {
        let f = f_poly(&t.scale((p as i64).pow((r - m) as u32)), p)?.poly();
        let term = sm.mul(&f);
        acc = if m % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    Ok(acc)
}

/// `1 − χ_p((−1)^{r/2} det T) p^{r/2} X` (even r) or 1.
pub fn chi_factor(t: &HalfIntegralMatrix, p: u64) -> Result<QPoly> {
    let r = t.degree();
    if r % 2 == 1 || r == 0 {
        return Ok(QPoly::one());
    }
    let chi = invariants_of(t, p)?.chi.unwrap();
    Ok(QPoly::new(vec![int(1), -int(chi as i64) * int(p as i64).pow(r as i32 / 2)]))
}

/// `(𝓡^{(r)}(X,1)/𝓟^{(r)}(X,1))·(χ-factor)`, with exact division.
pub fn s_poly_closed(t: &HalfIntegralMatrix, p: u64) -> Result<QPoly> {
    let r = t.degree();
    let sp = stabilization_polys(r, p);
    let one = Rational::from_integer(1.into());
    let q = sp.r_poly.at_y(&one).div_exact(&sp.p_poly.at_y(&one))?;
    Ok(q.mul(&chi_factor(t, p)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KatsuradaReport {
    pub holds: bool,
    pub r: usize,
    pub diagnostic: String,
}

/// Check the recursion between `S_p(T; X, 1)` and `S_p(T_2; p²X, 1)` for
/// `T = blockdiag(T_1, T_2)`, cross-multiplied to stay in `Z[X]`.
pub fn katsurada_recursion_check(t1: &HalfIntegralMatrix, t2: &HalfIntegralMatrix, p: u64) -> Result<KatsuradaReport> {
    if t1.degree() != 2 || !t1.is_nondegenerate() || !t2.is_nondegenerate() {
        return Err(Error::InvalidInput("recursion needs nondegenerate T1 of degree 2 and nondegenerate T2".into()));
    }
    let t = t1.block_diag(t2);
    let r = t.degree();
    if r > 4 {
        return Err(Error::BoundExceeded(format!("recursion check supports r ≤ 4, got {r}")));
    }
    let pi = int(p as i64);
    let pw = |e: usize| pi.pow(e as i32);
    let s_t = s_poly_sum(&t, p)?;
    let s_t2 = s_poly_sum(t2, p)?.scale_var(&pw(2));
    let one = QPoly::one();
    let cof_num = QPoly::one()
        .sub(&QPoly::monomial(pw((r - 1) * (r + 2) / 2), r - 1))
        .mul(&one.sub(&QPoly::monomial(pw(r * (r + 1) / 2), r)));
    let (lhs, rhs) = if r % 2 == 0 {
        let chi = chi_factor(&t, p)?;
        // 1 − χ_p((−1)^{r/2−1} det T2) p^{r/2+1} X
        let chi2 = chi_factor(t2, p)?.scale_var(&pw(2));
        let chi2 = if t2.degree() == 0 { one.clone() } else { chi2 };
        let den = one.sub(&QPoly::monomial(pw(r + 1), 2));
        (s_t.mul(&chi2).mul(&den), chi.mul(&s_t2).mul(&cof_num))
    } else {
        let den = one.sub(&QPoly::monomial(pw(r + 2), 2));
        (s_t.mul(&den), s_t2.mul(&cof_num))
    };
    let holds = lhs == rhs;
    Ok(KatsuradaReport {
        holds,
        r,
        diagnostic: if holds { String::new() } else { format!("S(T) = {s_t}; lhs {lhs} vs rhs {rhs}") },
    })
}
