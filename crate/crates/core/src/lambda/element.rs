//! Truncated elements of the Iwasawa algebra `Λ = Z_p[[X]]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::padic::{inv_mod, ppow, PadicInt, PadicNumber};
use crate::arith::poly::QPoly;
use crate::arith::rational::Rational;
use crate::arith::symbols::valuation;
use crate::error::{Error, Result};

/// `Σ_{j<N} c_j X^j` with `c_j ∈ Z/p^M`.
///
/// The certificate `m_eff` asserts that the true series differs from the stored
/// one by an element of `𝔪^{m_eff}`, `𝔪 = (p, X)`. Storage modulo `p^M` and
/// truncation modulo `X^N` both lie in such powers, so `m_eff ≤ min(M, N)`.
/// Substituting `X ↦ u` with `u ∈ 𝔪` maps `𝔪^k` into itself, and evaluation at
/// `x ∈ pZ_p` turns an `𝔪^k` error into a `p^k` error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaElement {
    pub p: u64,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M_eff")]
    pub m_eff: u32,
    pub coeffs: Vec<PadicInt>,
}

impl LambdaElement {
    fn from_values(p: u64, m: u32, n: usize, m_eff: u32, vals: Vec<BigInt>) -> Self {
        let modulus = ppow(p, m);
        let mut coeffs: Vec<PadicInt> =
            vals.into_iter().take(n).map(|v| PadicInt { p, value: v.mod_floor(&modulus), precision: m }).collect();
        coeffs.resize(n, PadicInt::zero(p, m));
        LambdaElement { p, m, n, m_eff: m_eff.min(m).min(n as u32), coeffs }
    }

    fn full(m: u32, n: usize) -> u32 {
        m.min(n as u32)
    }

    pub fn zero(p: u64, m: u32, n: usize) -> Self {
        Self::from_values(p, m, n, Self::full(m, n), vec![])
    }

    pub fn one(p: u64, m: u32, n: usize) -> Self {
        Self::from_values(p, m, n, Self::full(m, n), vec![BigInt::one()])
    }

    pub fn constant(c: &PadicInt, m: u32, n: usize) -> Self {
        Self::from_values(c.p, m, n, Self::full(m, n).min(c.precision), vec![c.value.clone()])
    }

    pub fn x(p: u64, m: u32, n: usize) -> Self {
        Self::from_values(p, m, n, Self::full(m, n), vec![BigInt::zero(), BigInt::one()])
    }

    /// Embed a polynomial with p-integral rational coefficients.
    pub fn from_poly(f: &QPoly, p: u64, m: u32, n: usize) -> Result<Self> {
        let modulus = ppow(p, m);
        let mut vals = Vec::with_capacity(n);
        for (j, c) in f.coeffs.iter().enumerate().take(n) {
            let inv = inv_mod(c.denom(), &modulus).ok_or_else(|| {
                Error::DenominatorNotCleared(format!("coefficient {c} of X^{j} is not {p}-integral"))
            })?;
            vals.push(c.numer() * inv);
        }
        Ok(Self::from_values(p, m, n, Self::full(m, n), vals))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PadicInt::is_zero)
    }

    fn check(&self, o: &Self) {
        assert!(self.p == o.p && self.m == o.m && self.n == o.n, "mismatched Λ truncations");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let v = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| &a.value + &b.value).collect();
        Self::from_values(self.p, self.m, self.n, self.m_eff.min(o.m_eff), v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        let v = self.coeffs.iter().map(|a| -&a.value).collect();
        Self::from_values(self.p, self.m, self.n, self.m_eff, v)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let n = self.n;
        let mut v = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                v[i + j] += &a.value * &b.value;
            }
        }
        Self::from_values(self.p, self.m, n, self.m_eff.min(o.m_eff), v)
    }

    pub fn scale(&self, c: &PadicInt) -> Self {
        let v = self.coeffs.iter().map(|a| &a.value * &c.value).collect();
        Self::from_values(self.p, self.m, self.n, self.m_eff.min(c.precision), v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.p, self.m, self.n);
        acc.m_eff = self.m_eff;
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate at `x ∈ pZ_p`; the value is known modulo `p^{min(M_eff, N·v(x))}`.
    pub fn eval(&self, x: &PadicInt) -> Result<PadicNumber> {
        let p = self.p;
        let vx = if x.is_zero() { x.precision } else { valuation(&x.value, p) };
        if vx == 0 {
            return Err(Error::PadicDomain("Λ-elements are evaluated only on pZ_p".into()));
        }
        let prec = (self.m_eff as u64).min(self.n as u64 * vx as u64).min(x.precision as u64) as u32;
        let modulus = ppow(p, prec);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * &x.value + &c.value).mod_floor(&modulus);
        }
        Ok(PadicNumber::from_padic_int(&PadicInt::new(p, acc, prec)))
    }

    /// `self ∘ u` for `u ∈ 𝔪`, i.e. `u(0) ∈ pZ_p`.
    pub fn compose(&self, u: &Self) -> Result<Self> {
        self.check(u);
        if u.coeffs[0].is_unit() {
            return Err(Error::PadicDomain("substitution needs u(0) ∈ pZ_p".into()));
        }
        let mut acc = Self::zero(self.p, self.m, self.n);
        acc.m_eff = self.m_eff.min(u.m_eff);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(u).add(&Self::constant(c, self.m, self.n));
        }
        acc.m_eff = acc.m_eff.min(self.m_eff).min(u.m_eff);
        Ok(acc)
    }

    /// Lower the certificate.
    pub fn with_certificate(mut self, m_eff: u32) -> Self {
        self.m_eff = self.m_eff.min(m_eff);
        self
    }

    /// Least p-adic valuation among the coefficients (capped at `M`).
    pub fn min_valuation(&self) -> u32 {
        self.coeffs.iter().map(PadicInt::valuation).min().unwrap_or(self.m)
    }

    /// Agreement of two elements in the `𝔪`-adic sense: the largest `k ≤`
    /// both certificates with `self − o ∈ 𝔪^k` on the stored truncation.
    pub fn m_adic_agreement(&self, o: &Self) -> u32 {
        let d = self.sub(o);
        let mut k = d.m_eff;
        for (j, c) in d.coeffs.iter().enumerate() {
            if !c.is_zero() {
                k = k.min(j as u32 + c.valuation());
            }
        }
        k
    }
}

/// `(1+X)^s = Σ_{k<N} C(s,k) X^k` for `s ∈ Z_p`.
pub fn one_plus_x_pow(s: &PadicInt, m: u32, n: usize) -> Result<LambdaElement> {
    let p = s.p;
    let guard: u32 = (1..n as u64).map(|k| valuation(&BigInt::from(k), p)).sum();
    if s.precision < m + guard {
        return Err(Error::PadicDomain(format!(
            "exponent known to {} digits, binomial series needs {}",
            s.precision,
            m + guard
        )));
    }
    let w = m + guard;
    let mw = ppow(p, w);
    let mut vals = Vec::with_capacity(n);
    let mut num = BigInt::one();
    let mut fact_unit = BigInt::one();
    let mut fact_v = 0u32;
    for k in 0..n as u64 {
        if k > 0 {
            num = (num * (&s.value - BigInt::from(k - 1))).mod_floor(&mw);
            let vk = valuation(&BigInt::from(k), p);
            fact_v += vk;
            fact_unit = (fact_unit * (BigInt::from(k) / ppow(p, vk))).mod_floor(&mw);
        }
        let pv = ppow(p, fact_v);
        if !(&num % &pv).is_zero() {
            return Err(Error::Invariant("binomial coefficient of a p-adic integer is not integral".into()));
        }
        let c = (&num / pv) * inv_mod(&fact_unit, &mw).expect("unit");
        vals.push(c);
    }
    Ok(LambdaElement::from_values(p, m, n, LambdaElement::full(m, n), vals))
}

/// Exact rational value of a polynomial at an integer point, embedded p-adically.
pub fn eval_exact(f: &QPoly, x: &Rational, p: u64, abs_prec: i64) -> PadicNumber {
    PadicNumber::from_rational(&f.eval(x), p, abs_prec)
}
