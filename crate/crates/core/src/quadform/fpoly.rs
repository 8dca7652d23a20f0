//! The polynomials `F_l(T; X)`: closed forms, the coset oracle, the density
//! engine, and the functional equation.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::density::f_poly_density;
use super::invariants::{eta, invariants_of, HasseConvention};
use super::matrix::HalfIntegralMatrix;
use super::oracle::b_coeffs;
use crate::arith::poly::QPoly;
use crate::arith::rational::{int, int_pow, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Closed,
    /// Closed form cross-checked against the coset oracle.
    ClosedOracleVerified,
    Oracle,
    Density,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPolynomial {
    pub l: u64,
    #[serde(with = "crate::arith::rational::serde_bigint_vec")]
    pub coeffs: Vec<BigInt>,
    pub degree_bound: usize,
    pub method: Method,
}

impl LocalPolynomial {
    pub fn poly(&self) -> QPoly {
        QPoly::from_bigints(&self.coeffs)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.poly().eval(x)
    }
}

/// `deg F_l(T; X)`: `2 v_l(𝔣)` for even rank, `v_l(𝔇)` for odd rank.
pub fn expected_degree(t: &HalfIntegralMatrix, l: u64) -> Result<usize> {
    let inv = invariants_of(t, l)?;
    Ok(match inv.v_f {
        Some(f) => 2 * f as usize,
        None => inv.v_disc as usize,
    })
}

/// Numerator and denominator of the rational cofactor with `b_l = F_l · cofactor`.
pub fn cofactor(t: &HalfIntegralMatrix, l: u64) -> Result<(QPoly, QPoly)> {
    let r = t.degree();
    let mut num = QPoly::from_ints([1, -1]);
    for i in 1..=(r / 2) {
        let c = -int(l as i64).pow(2 * i as i32);
        num = num.mul(&QPoly::new(vec![int(1), int(0), c]));
    }
    let den = if r % 2 == 0 {
        let chi = invariants_of(t, l)?.chi.unwrap_or(1);
        QPoly::new(vec![int(1), -int(chi as i64) * int(l as i64).pow(r as i32 / 2)])
    } else {
        QPoly::one()
    };
    Ok((num, den))
}

/// Rank 0, 1, 2 closed forms.
///
/// In rank 2 the outer sum runs up to the content exponent of `T` (its
/// smallest Jordan exponent), not up to `𝔦(T)`: the larger bound adds spurious
/// middle terms, e.g. for `T = [[1,1/2],[1/2,5]]` at 3.
pub fn f_poly_closed(t: &HalfIntegralMatrix, l: u64) -> Result<LocalPolynomial> {
    let r = t.degree();
    if r > 2 {
        return Err(Error::OutOfScope(format!("closed form needs rank ≤ 2, got {r}")));
    }
    if !t.is_nondegenerate() {
        return Err(Error::Singular);
    }
    let lq = int(l as i64);
    let poly = match r {
        0 => QPoly::one(),
        1 => {
            let v = crate::arith::symbols::valuation(&BigInt::from(t.g(0, 0) / 2), l) as usize;
            let mut c = vec![Rational::one()];
            for i in 1..=v {
                c.push(lq.pow(i as i32));
            }
            QPoly::new(c)
        }
        _ => {
            let inv = invariants_of(t, l)?;
            let f = inv.v_f.unwrap() as i64;
            let chi = int(inv.chi.unwrap() as i64);
            let a = QPoly::monomial(lq.pow(2), 1);
            let b = QPoly::monomial(lq.pow(3), 2);
            let geo = |m: i64| -> QPoly {
                let mut s = QPoly::zero();
                let mut term = QPoly::one();
                for _ in 0..=m.max(-1) {
                    if m < 0 {
                        break;
                    }
                    s = s.add(&term);
                    term = term.mul(&b);
                }
                s
            };
            let lx = QPoly::monomial(&chi * &lq, 1);
            let mut acc = QPoly::zero();
            let mut ai = QPoly::one();
            for i in 0..=(inv.content as i64) {
                let inner = geo(f - i).sub(&lx.mul(&geo(f - i - 1)));
                acc = acc.add(&ai.mul(&inner));
                ai = ai.mul(&a);
            }
            acc
        }
    };
    let deg = expected_degree(t, l)?;
    let mut out = LocalPolynomial { l, coeffs: poly.to_integers()?, degree_bound: deg, method: Method::Closed };
    if r == 2 && l == 2 {
        if let Ok(o) = f_poly_oracle(t, l) {
            if o.coeffs != out.coeffs {
                return Err(Error::Invariant(format!(
                    "rank-2 closed form at l = 2 disagrees with the oracle for {t}: {:?} vs {:?}",
                    out.coeffs, o.coeffs
                )));
            }
            out.method = Method::ClosedOracleVerified;
        }
    }
    Ok(out)
}

/// Enumeration depth used by the oracle.
pub fn oracle_depth(r: usize, degree: usize) -> u32 {
    if r <= 2 {
        degree as u32 + 1
    } else {
        (degree as u32).max(1)
    }
}

/// `F_l` from the coset-sum definition of `b_l`.
pub fn f_poly_oracle(t: &HalfIntegralMatrix, l: u64) -> Result<LocalPolynomial> {
    let r = t.degree();
    if !t.is_nondegenerate() {
        return Err(Error::Singular);
    }
    let inv = invariants_of(t, l)?;
    if r > 3 || inv.v_disc > 4 {
        return Err(Error::BoundExceeded(format!("oracle caps are r ≤ 3 and v_l(𝔇) ≤ 4 (r = {r}, v = {})", inv.v_disc)));
    }
    let deg = expected_degree(t, l)?;
    let dmax = oracle_depth(r, deg);
    let b = b_coeffs(t, l, dmax)?;
    let (num, den) = cofactor(t, l)?;
    // F = b · den / num as power series up to X^dmax
    let bden = QPoly::from_bigints(&b).mul(&den);
    let mut inv_num = vec![Rational::zero(); dmax as usize + 1];
    inv_num[0] = Rational::one();
    for m in 1..=dmax as usize {
        let mut s = Rational::zero();
        for j in 1..=m {
            s -= num.coeff(j) * &inv_num[m - j];
        }
        inv_num[m] = s;
    }
    let mut f = vec![Rational::zero(); dmax as usize + 1];
    for (m, fm) in f.iter_mut().enumerate() {
        for j in 0..=m {
            *fm += bden.coeff(j) * &inv_num[m - j];
        }
    }
    let f = QPoly::new(f);
    if f.degree().unwrap_or(0) > deg || f.coeff(0) != Rational::one() {
        return Err(Error::Invariant(format!("oracle polynomial {f} for {t} at {l} violates the degree law")));
    }
    Ok(LocalPolynomial { l, coeffs: f.to_integers()?, degree_bound: deg, method: Method::Oracle })
}

fn memo() -> &'static Mutex<HashMap<(HalfIntegralMatrix, u64), LocalPolynomial>> {
    static M: OnceLock<Mutex<HashMap<(HalfIntegralMatrix, u64), LocalPolynomial>>> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `F_l(T; X)` by the best available route.
pub fn f_poly(t: &HalfIntegralMatrix, l: u64) -> Result<LocalPolynomial> {
    let key = (t.clone(), l);
    if let Some(v) = memo().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(v.clone());
    }
    let r = t.degree();
    let out = if r <= 2 {
        f_poly_closed(t, l)?
    } else if l != 2 {
        f_poly_density_checked(t, l)?
    } else {
        f_poly_oracle(t, l).map_err(|e| match e {
            Error::BoundExceeded(m) => Error::LocalPolynomialOutOfRange(format!("{t} at l = 2: {m}")),
            e => e,
        })?
    };
    memo().lock().unwrap_or_else(|e| e.into_inner()).insert(key, out.clone());
    Ok(out)
}

/// Density-engine `F_p` (odd `p`) with degree and normalization checks.
pub fn f_poly_density_checked(t: &HalfIntegralMatrix, p: u64) -> Result<LocalPolynomial> {
    let deg = expected_degree(t, p)?;
    let f = f_poly_density(t, p, deg, &cofactor(t, p)?)?;
    if f.coeff(0) != Rational::one() || !f.is_integral() {
        return Err(Error::Invariant(format!("density polynomial {f} for {t} at {p} is not normalized")));
    }
    Ok(LocalPolynomial { l: p, coeffs: f.to_integers()?, degree_bound: deg, method: Method::Density })
}

/// Outcome of the functional-equation test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalEquationReport {
    pub holds: bool,
    pub diagnostic: String,
}

pub fn functional_equation_check(t: &HalfIntegralMatrix, l: u64) -> Result<FunctionalEquationReport> {
    functional_equation_check_with(t, l, &f_poly(t, l)?, HasseConvention::Kitaoka)
}

/// Compare `F(l^{−r−1}X^{−1})` with the right-hand side as Laurent polynomials.
pub fn functional_equation_check_with(
    t: &HalfIntegralMatrix,
    l: u64,
    f: &LocalPolynomial,
    conv: HasseConvention,
) -> Result<FunctionalEquationReport> {
    let r = t.degree() as i64;
    let inv = invariants_of(t, l)?;
    let li = l as i64;
    let mut lhs: BTreeMap<i64, Rational> = BTreeMap::new();
    let mut rhs: BTreeMap<i64, Rational> = BTreeMap::new();
    for (i, a) in f.coeffs.iter().enumerate() {
        let i = i as i64;
        *lhs.entry(-i).or_insert_with(Rational::zero) += int(a.clone()) * int_pow(li, -(r + 1) * i);
    }
    if r % 2 == 0 {
        let v = inv.v_f.unwrap() as i64;
        for (i, a) in f.coeffs.iter().enumerate() {
            *rhs.entry(i as i64 - 2 * v).or_insert_with(Rational::zero) +=
                int(a.clone()) * int_pow(li, -(r + 1) * v);
        }
    } else {
        let v = inv.v_disc as i64;
        let e = eta(t, l, conv)? as i64;
        // (l^{(r+1)/2} X)^{−v}
        let scale = int_pow(li, -((r + 1) / 2) * v) * int(e);
        for (i, a) in f.coeffs.iter().enumerate() {
            *rhs.entry(i as i64 - v).or_insert_with(Rational::zero) += int(a.clone()) * &scale;
        }
    }
    lhs.retain(|_, v| !v.is_zero());
    rhs.retain(|_, v| !v.is_zero());
    let holds = lhs == rhs;
    let diagnostic = if holds {
        String::new()
    } else {
        format!("F = {:?}; lhs {:?} vs rhs {:?}", f.coeffs, lhs, rhs)
    };
    Ok(FunctionalEquationReport { holds, diagnostic })
}

pub fn is_one(p: &LocalPolynomial) -> bool {
    p.coeffs.len() == 1 && p.coeffs[0].is_one()
}
