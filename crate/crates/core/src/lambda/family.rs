//! The Λ-adic Fourier coefficients `A_T(ω^a; X)`, the clearing polynomial
//! `B^{(n)}(X)` and the specialization maps.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::branch::{branch, LambdaConfig};
use super::element::{one_plus_x_pow, LambdaElement};
use crate::arith::padic::{angle, s_of, teichmuller, PadicInt, PadicNumber};
use crate::arith::poly::QPoly;
use crate::arith::rational::{int, Rational};
use crate::eisenstein::coeff::shape;
use crate::eisenstein::qexp::{serde_wire, ExpansionSpec, QExpansion};
use crate::error::{Error, Result};
use crate::quadform::fpoly::f_poly;
use crate::quadform::matrix::{enumerate_psd, HalfIntegralMatrix};

serde_wire!(LambdaElement, FracLambda);

/// `(1+p)^{−c}(1+X)^e − 1` as an exact polynomial.
fn shifted(p: u64, c: i64, e: u32) -> QPoly {
    let lin = QPoly::from_ints([1, 1]).pow(e);
    lin.scale(&int(1 + p as i64).pow(-c as i32)).sub(&QPoly::one())
}

/// `B^{(n)}(X)` with its factor list: the `i`-factors
/// `(1+p)^{−2i}(1+X)²−1` for `1 ≤ i ≤ ⌊n/2⌋`, then the `j`-factors
/// `(1+p)^{−j}(1+X)−1` for `0 ≤ j ≤ ⌊n/2⌋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPoly {
    pub n: usize,
    pub p: u64,
    pub factors: Vec<QPoly>,
    pub product: QPoly,
}

impl BPoly {
    pub fn i_factor(&self, i: usize) -> usize {
        i - 1
    }

    pub fn j_factor(&self, j: usize) -> usize {
        self.n / 2 + j
    }

    pub fn element(&self, cfg: LambdaConfig) -> Result<LambdaElement> {
        LambdaElement::from_poly(&self.product, self.p, cfg.m, cfg.n)
    }
}

pub fn b_factors(n: usize, p: u64) -> Vec<QPoly> {
    let h = n / 2;
    let mut f: Vec<QPoly> = (1..=h).map(|i| shifted(p, 2 * i as i64, 2)).collect();
    f.extend((0..=h).map(|j| shifted(p, j as i64, 1)));
    f
}

/// The second displayed shape `X Π_i {(1+p)^{−i}(1+X)−1}² {(1+p)^{−i}(1+X)+1}`.
pub fn b_poly_factored(n: usize, p: u64) -> QPoly {
    let mut acc = QPoly::x();
    for i in 1..=n / 2 {
        let minus = shifted(p, i as i64, 1);
        let plus = minus.add(&QPoly::constant(int(2)));
        acc = acc.mul(&minus).mul(&minus).mul(&plus);
    }
    acc
}

pub fn b_poly(n: usize, p: u64) -> Result<BPoly> {
    let factors = b_factors(n, p);
    let product = factors.iter().fold(QPoly::one(), |a, f| a.mul(f));
    if product != b_poly_factored(n, p) {
        return Err(Error::Invariant(format!("the two shapes of B^({n}) disagree at p = {p}")));
    }
    if !product.coeffs.iter().all(|c| c == &int(0) || crate::arith::symbols::valuation_rat(c, p) >= 0) {
        return Err(Error::Invariant("B has a non-integral coefficient".into()));
    }
    Ok(BPoly { n, p, factors, product })
}

/// `numerator / Π_{a ∈ den_atoms} B-factor_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FracLambda {
    pub numerator: LambdaElement,
    pub den_atoms: Vec<usize>,
}

impl FracLambda {
    /// `B·self` as a genuine Λ-element; fails if an atom is not a `B`-factor.
    pub fn clear(&self, b: &BPoly, cfg: LambdaConfig) -> Result<LambdaElement> {
        let mut remaining: Vec<Option<&QPoly>> = b.factors.iter().map(Some).collect();
        for &a in &self.den_atoms {
            match remaining.get_mut(a) {
                Some(slot @ Some(_)) => *slot = None,
                _ => {
                    return Err(Error::DenominatorNotCleared(format!(
                        "atom {a} exceeds the factor multiset of B^({})",
                        b.n
                    )))
                }
            }
        }
        let mut acc = self.numerator.clone();
        for f in remaining.into_iter().flatten() {
            acc = acc.mul(&LambdaElement::from_poly(f, b.p, cfg.m, cfg.n)?);
        }
        Ok(acc)
    }

    /// Value at `X = (1+p)^κ − 1`.
    pub fn specialize(&self, kappa: i64, b: &BPoly) -> Result<PadicNumber> {
        let p = self.numerator.p;
        let xr = int(1 + p as i64).pow(kappa as i32) - int(1);
        let x = PadicInt::from_rational(&xr, p, self.numerator.m + 4)?;
        let mut v = self.numerator.eval(&x)?;
        for &a in &self.den_atoms {
            let d = b.factors[a].eval(&xr);
            if d == int(0) {
                return Err(Error::PadicDomain(format!("pole at weight {kappa}")));
            }
            v = v.mul_rational(&d.recip());
        }
        Ok(v)
    }
}

/// Wild points `ε(1+p)(1+p)^κ − 1` with `ε` of exact order `p^m`, `m ≥ 1`.
pub fn specialize_wild(_f: &FracLambda, _kappa: i64, epsilon_order_exp: u32) -> Result<PadicNumber> {
    if epsilon_order_exp == 0 {
        return Err(Error::InvalidInput("ε of order 1 is the tame point; use specialize".into()));
    }
    Err(Error::OutOfScope(format!(
        "specialization at ε of order p^{epsilon_order_exp} needs the ramified extension Q_p(μ_(p^{epsilon_order_exp}))"
    )))
}

fn check_inputs(n: usize, a: u64, p: u64) -> Result<()> {
    if p == 2 || !crate::arith::factor::is_prime(p) {
        return Err(Error::OutOfScope(format!("Λ-adic family needs an odd prime, got {p}")));
    }
    if a >= p - 1 {
        return Err(Error::InvalidInput(format!("branch a = {a} must lie in [0, p−1)")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("genus must be at least 1".into()));
    }
    Ok(())
}

/// `F_l(T'; c·(1+X)^s)` with `c = ω^a(l) l^{−r−1}` and `s = s(⟨l⟩)`.
fn local_factor(t: &HalfIntegralMatrix, l: u64, a: u64, r: usize, p: u64, cfg: LambdaConfig) -> Result<LambdaElement> {
    let guard: u32 = (1..cfg.n as u64).map(|k| crate::arith::symbols::valuation(&BigInt::from(k), p)).sum();
    let w = cfg.m + guard + 2;
    let lb = BigInt::from(l);
    let s = s_of(&angle(&lb, p, w + 1)?)?;
    let y = one_plus_x_pow(&s, cfg.m, cfg.n)?;
    let c = teichmuller(&lb, p, cfg.m)?.pow(a).mul(&PadicInt::new(p, lb, cfg.m).inv()?.pow(r as u64 + 1));
    let y = y.scale(&c);
    let f = f_poly(t, l)?;
    let mut acc = LambdaElement::zero(p, cfg.m, cfg.n);
    for coef in f.coeffs.iter().rev() {
        acc = acc.mul(&y).add(&LambdaElement::constant(&PadicInt::new(p, coef.clone(), cfg.m), cfg.m, cfg.n));
    }
    Ok(acc)
}

/// `A_T(ω^a; X)`.
pub fn a_t_lambda(n: usize, a: u64, t: &HalfIntegralMatrix, p: u64, cfg: LambdaConfig) -> Result<FracLambda> {
    check_inputs(n, a, p)?;
    let sh = shape(n, t)?;
    let bp = b_poly(n, p)?;
    let r = sh.r;
    let (m, nx) = (cfg.m, cfg.n);
    let two = PadicInt::from_rational(&int(2).pow(sh.two_exp as i32), p, m)?;
    let mut num = LambdaElement::constant(&two, m, nx);
    let mut atoms = Vec::new();
    for i in sh.zeta_range.clone() {
        let br = branch(1, 2 * a as i64 - 2 * i as i64, p, cfg)?;
        let u = LambdaElement::from_poly(&bp.factors[bp.i_factor(i)], p, m, nx)?;
        num = num.mul(&br.phi.compose(&u)?);
        if br.trivial_branch {
            atoms.push(bp.i_factor(i));
        }
    }
    if let Some(d) = sh.fund_disc {
        let j = r / 2;
        let br = branch(d, a as i64 - j as i64, p, cfg)?;
        let u = LambdaElement::from_poly(&bp.factors[bp.j_factor(j)], p, m, nx)?;
        num = num.mul(&br.phi.compose(&u)?);
        if br.trivial_branch {
            atoms.push(bp.j_factor(j));
        }
    }
    for &l in &sh.local_primes {
        if l == p {
            continue;
        }
        num = num.mul(&local_factor(&sh.t_red, l, a, r, p, cfg)?);
    }
    atoms.sort_unstable();
    let out = FracLambda { numerator: num, den_atoms: atoms };
    out.clear(&bp, cfg)?;
    Ok(out)
}

fn lambda_spec(n: usize, a: u64, p: u64, kind: &str) -> ExpansionSpec {
    let mut s = ExpansionSpec::new(n, kind).prime(p);
    s.a = Some(a);
    s
}

/// `T ↦ A_T(ω^a; X)` over `tr T ≤ trace_bound`.
pub fn lambda_coefficients(n: usize, a: u64, p: u64, trace_bound: u64, cfg: LambdaConfig) -> Result<QExpansion<FracLambda>> {
    let mut out = QExpansion::new(lambda_spec(n, a, p, "lambda coefficients"), Some(trace_bound));
    for t in enumerate_psd(n, trace_bound as i64)? {
        let c = a_t_lambda(n, a, &t, p, cfg)?;
        out.insert(t, c);
    }
    Ok(out)
}

/// `B^{(n)}(X)·A_T(ω^a; X)`: every coefficient a genuine element of Λ.
pub fn lambda_eisenstein(n: usize, a: u64, p: u64, trace_bound: u64, cfg: LambdaConfig) -> Result<QExpansion<LambdaElement>> {
    let bp = b_poly(n, p)?;
    let coeffs = lambda_coefficients(n, a, p, trace_bound, cfg)?;
    let mut out = coeffs.map(|_, f| f.clear(&bp, cfg))?;
    out.spec.kind = "lambda eisenstein (B-cleared)".into();
    Ok(out)
}

/// Exact `B^{(n)}((1+p)^κ − 1)`.
pub fn b_at_weight(bp: &BPoly, kappa: i64) -> Rational {
    bp.product.eval(&(int(1 + bp.p as i64).pow(kappa as i32) - int(1)))
}
