//! Fixed-precision p-adic integers and numbers, Teichmüller lifts, log and exp.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use super::symbols::valuation;
use crate::error::{Error, Result};

pub fn ppow(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// Modular inverse of `a` modulo `m` (`a` must be invertible).
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// An element of `Z/p^M` viewed as a truncated p-adic integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicInt {
    pub p: u64,
    #[serde(with = "super::rational::serde_bigint")]
    pub value: BigInt,
    pub precision: u32,
}

impl PadicInt {
    pub fn new(p: u64, value: impl Into<BigInt>, precision: u32) -> Self {
        let m = ppow(p, precision);
        PadicInt { p, value: value.into().mod_floor(&m), precision }
    }

    pub fn zero(p: u64, precision: u32) -> Self {
        Self::new(p, 0, precision)
    }

    pub fn one(p: u64, precision: u32) -> Self {
        Self::new(p, 1, precision)
    }

    pub fn modulus(&self) -> BigInt {
        ppow(self.p, self.precision)
    }

    /// Embed a rational whose denominator is prime to `p`.
    pub fn from_rational(q: &Rational, p: u64, precision: u32) -> Result<Self> {
        let m = ppow(p, precision);
        let d = inv_mod(q.denom(), &m)
            .ok_or_else(|| Error::PadicDomain(format!("{q} has p = {p} in its denominator")))?;
        Ok(Self::new(p, q.numer() * d, precision))
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        let precision = precision.min(self.precision);
        Self::new(self.p, self.value.clone(), precision)
    }

    fn meet(&self, other: &Self) -> u32 {
        assert_eq!(self.p, other.p, "mixed primes");
        self.precision.min(other.precision)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.p, &self.value + &o.value, self.meet(o))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.p, &self.value - &o.value, self.meet(o))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.p, &self.value * &o.value, self.meet(o))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.p, -&self.value, self.precision)
    }

    pub fn pow(&self, e: u64) -> Self {
        let m = self.modulus();
        PadicInt { p: self.p, value: self.value.modpow(&BigInt::from(e), &m), precision: self.precision }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.value % BigInt::from(self.p)).is_zero()
    }

    /// Valuation, capped at the precision.
    pub fn valuation(&self) -> u32 {
        if self.value.is_zero() {
            self.precision
        } else {
            valuation(&self.value, self.p).min(self.precision)
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let m = self.modulus();
        let v = inv_mod(&self.value, &m)
            .ok_or_else(|| Error::PadicDomain("inverse of a non-unit".into()))?;
        Ok(PadicInt { p: self.p, value: v, precision: self.precision })
    }

    /// Exact division by `p^e`; the quotient loses `e` digits.
    pub fn div_p_pow(&self, e: u32) -> Result<Self> {
        if e > self.precision {
            return Err(Error::PadicDomain("division exhausts precision".into()));
        }
        let q = ppow(self.p, e);
        if !(&self.value % &q).is_zero() {
            return Err(Error::PadicDomain(format!("not divisible by {}^{e}", self.p)));
        }
        Ok(Self::new(self.p, &self.value / q, self.precision - e))
    }

    /// Symmetric representative in `(-p^M/2, p^M/2]`.
    pub fn centered(&self) -> BigInt {
        let m = self.modulus();
        if &self.value * 2 > m {
            &self.value - m
        } else {
            self.value.clone()
        }
    }
}

/// `p^valuation · unit` with `unit` a p-adic unit; zero is flagged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicNumber {
    pub unit: PadicInt,
    pub valuation: i64,
    pub is_zero: bool,
}

/// Absolute precision recorded for an exactly-known zero.
pub const EXACT: i64 = i64::MAX / 4;

impl PadicNumber {
    pub fn p(&self) -> u64 {
        self.unit.p
    }

    /// Zero known modulo `p^abs_prec`.
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        PadicNumber { unit: PadicInt::zero(p, 0), valuation: abs_prec, is_zero: true }
    }

    pub fn exact_zero(p: u64) -> Self {
        Self::zero(p, EXACT)
    }

    /// Absolute precision: the value is known modulo `p^abs_prec`.
    pub fn abs_prec(&self) -> i64 {
        if self.is_zero {
            self.valuation
        } else {
            self.valuation + self.unit.precision as i64
        }
    }

    /// Build from `p^v · x` where `x` is an integer known mod `p^prec`.
    fn normalize(p: u64, x: BigInt, v: i64, prec: u32) -> Self {
        let x = x.mod_floor(&ppow(p, prec));
        if x.is_zero() {
            return Self::zero(p, v + prec as i64);
        }
        let w = valuation(&x, p);
        let u = x / ppow(p, w);
        PadicNumber { unit: PadicInt::new(p, u, prec - w), valuation: v + w as i64, is_zero: false }
    }

    /// Embed a rational, keeping `abs_prec` digits after the point.
    pub fn from_rational(q: &Rational, p: u64, abs_prec: i64) -> Self {
        if q.is_zero() {
            return Self::exact_zero(p);
        }
        let v = valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64;
        let rel = (abs_prec - v).max(0) as u32;
        let n = q.numer() / ppow(p, valuation(q.numer(), p));
        let d = q.denom() / ppow(p, valuation(q.denom(), p));
        let m = ppow(p, rel);
        let u = (n * inv_mod(&d, &m).unwrap_or_else(BigInt::zero)).mod_floor(&m);
        if rel == 0 {
            return Self::zero(p, abs_prec.min(v));
        }
        PadicNumber { unit: PadicInt { p, value: u, precision: rel }, valuation: v, is_zero: false }
    }

    pub fn from_padic_int(x: &PadicInt) -> Self {
        Self::normalize(x.p, x.value.clone(), 0, x.precision)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero {
            return self.clone();
        }
        PadicNumber { unit: self.unit.neg(), valuation: self.valuation, is_zero: false }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.p();
        if self.is_zero {
            return o.truncate_abs(self.abs_prec());
        }
        if o.is_zero {
            return self.truncate_abs(o.abs_prec());
        }
        let abs = self.abs_prec().min(o.abs_prec());
        let v = self.valuation.min(o.valuation);
        if abs <= v {
            return Self::zero(p, abs);
        }
        let prec = (abs - v) as u32;
        let a = &self.unit.value * ppow(p, (self.valuation - v) as u32);
        let b = &o.unit.value * ppow(p, (o.valuation - v) as u32);
        Self::normalize(p, a + b, v, prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p();
        if self.is_zero || o.is_zero {
            let abs = match (self.is_zero, o.is_zero) {
                (true, true) => self.valuation.saturating_add(o.valuation),
                (true, false) => self.valuation.saturating_add(o.valuation),
                (false, true) => o.valuation.saturating_add(self.valuation),
                _ => unreachable!(),
            };
            return Self::zero(p, abs.min(EXACT));
        }
        let prec = self.unit.precision.min(o.unit.precision);
        PadicNumber {
            unit: self.unit.mul(&o.unit).with_precision(prec),
            valuation: self.valuation + o.valuation,
            is_zero: false,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero {
            return Err(Error::PadicDomain("inverse of zero".into()));
        }
        Ok(PadicNumber { unit: self.unit.inv()?, valuation: -self.valuation, is_zero: false })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let prec = if self.is_zero { 0 } else { self.unit.precision as i64 };
        let qv = if q.is_zero() { 0 } else { super::symbols::valuation_rat(q, self.p()) };
        self.mul(&Self::from_rational(q, self.p(), qv + prec.max(1)))
    }

    fn truncate_abs(&self, abs: i64) -> Self {
        if abs >= self.abs_prec() {
            return self.clone();
        }
        if self.is_zero || abs <= self.valuation {
            return Self::zero(self.p(), abs.min(self.abs_prec()));
        }
        let rel = (abs - self.valuation) as u32;
        PadicNumber { unit: self.unit.with_precision(rel), valuation: self.valuation, is_zero: false }
    }

    /// Valuation of `self − q`, capped at the known precision.
    pub fn agreement(&self, q: &Rational) -> i64 {
        let d = self.sub(&Self::from_rational(q, self.p(), self.abs_prec().max(0).min(EXACT)));
        if d.is_zero {
            d.abs_prec()
        } else {
            d.valuation
        }
    }

    /// Valuation of `self − other`, capped at the joint precision.
    pub fn agreement_with(&self, o: &Self) -> i64 {
        let d = self.sub(o);
        if d.is_zero {
            d.abs_prec()
        } else {
            d.valuation
        }
    }

    /// Reduce to a `PadicInt` modulo `p^prec` (requires valuation ≥ 0).
    pub fn to_padic_int(&self, prec: u32) -> Result<PadicInt> {
        let p = self.p();
        if self.is_zero {
            let pr = (self.abs_prec().max(0) as u64).min(prec as u64) as u32;
            return Ok(PadicInt::zero(p, pr));
        }
        if self.valuation < 0 {
            return Err(Error::PadicDomain("negative valuation".into()));
        }
        let pr = (self.abs_prec() as u64).min(prec as u64) as u32;
        Ok(PadicInt::new(p, &self.unit.value * ppow(p, self.valuation as u32), pr))
    }
}

/// The Teichmüller lift `ω(x)`: the (p−1)-th root of unity congruent to `x`.
pub fn teichmuller(x: &BigInt, p: u64, precision: u32) -> Result<PadicInt> {
    if p == 2 {
        return Err(Error::OutOfScope("Teichmüller character needs odd p".into()));
    }
    if (x % BigInt::from(p)).is_zero() {
        return Err(Error::PadicDomain(format!("{p} divides {x}")));
    }
    let m = ppow(p, precision);
    let mut y = x.mod_floor(&m);
    let bp = BigInt::from(p);
    for _ in 0..precision {
        y = y.modpow(&bp, &m);
    }
    Ok(PadicInt { p, value: y, precision })
}

/// `⟨x⟩ = x / ω(x) ∈ 1 + pZ_p`.
pub fn angle(x: &BigInt, p: u64, precision: u32) -> Result<PadicInt> {
    let w = teichmuller(x, p, precision)?;
    Ok(PadicInt::new(p, x.clone(), precision).mul(&w.inv()?))
}

fn ceil_log(p: u64, m: u32) -> u32 {
    let mut e = 0;
    let mut t = 1u64;
    while t < m as u64 {
        t = t.saturating_mul(p);
        e += 1;
    }
    e
}

/// Internal precision with guard digits for log/exp.
pub fn guarded(p: u64, m: u32) -> u32 {
    m + ceil_log(p, m.max(1)) + 2
}

/// Iwasawa logarithm on `1 + pZ_p`, via the Mercator series.
pub fn padic_log(u: &PadicInt, precision: u32) -> Result<PadicInt> {
    let p = u.p;
    if p == 2 {
        return Err(Error::OutOfScope("p-adic log needs odd p".into()));
    }
    let z: BigInt = &u.value - 1;
    if !(&z % BigInt::from(p)).is_zero() {
        return Err(Error::PadicDomain("log argument not ≡ 1 mod p".into()));
    }
    let precision = precision.min(u.precision);
    let w = guarded(p, precision);
    if z.is_zero() {
        return Ok(PadicInt::zero(p, precision));
    }
    let vz = valuation(&z, p).min(w) as i64;
    let mut acc = BigInt::zero();
    let mut k: u64 = 1;
    loop {
        let vk = valuation(&BigInt::from(k), p);
        if (k as i64) * vz - vk as i64 >= w as i64 {
            // terms only grow in valuation from here on
            break;
        }
        let m = ppow(p, w + vk);
        let zk = z.modpow(&BigInt::from(k), &m);
        let unit = BigInt::from(k) / ppow(p, vk);
        let term = (zk / ppow(p, vk)) * inv_mod(&unit, &ppow(p, w)).unwrap();
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
        k += 1;
    }
    Ok(PadicInt::new(p, acc, precision))
}

/// The exponential on `pZ_p` (odd `p`).
pub fn padic_exp(x: &PadicInt, precision: u32) -> Result<PadicInt> {
    let p = x.p;
    if p == 2 || x.is_unit() {
        return Err(Error::PadicDomain("exp needs odd p and p | x".into()));
    }
    let precision = precision.min(x.precision);
    let w = guarded(p, precision) + precision;
    let mw = ppow(p, w);
    let mut acc = BigInt::one();
    let mut num = BigInt::one();
    let mut fact_unit = BigInt::one();
    let mut fact_v: u32 = 0;
    let mut k: u64 = 1;
    loop {
        num = (num * &x.value).mod_floor(&mw);
        let vk = valuation(&BigInt::from(k), p);
        fact_v += vk;
        fact_unit = (fact_unit * (BigInt::from(k) / ppow(p, vk))).mod_floor(&mw);
        let vnum = if num.is_zero() { w } else { valuation(&num, p) };
        if vnum >= w && k > 1 {
            break;
        }
        let lower = (k as i64) - (fact_v as i64);
        if lower >= (precision + 2) as i64 && k > precision as u64 * 2 {
            break;
        }
        if vnum < fact_v {
            return Err(Error::PadicDomain("exp series diverges".into()));
        }
        let t = (&num / ppow(p, fact_v)) * inv_mod(&fact_unit, &mw).unwrap();
        acc += t;
        k += 1;
    }
    Ok(PadicInt::new(p, acc, precision))
}

/// `s(x) = log x / log(1+p)`; one digit of precision is consumed.
pub fn s_of(x: &PadicInt) -> Result<PadicInt> {
    let p = x.p;
    let m = x.precision;
    if m == 0 {
        return Err(Error::PadicDomain("no precision left".into()));
    }
    let lx = padic_log(x, m)?;
    let l1 = padic_log(&PadicInt::new(p, 1 + p, m + 1), m + 1)?;
    let unit = l1.div_p_pow(1)?.with_precision(m - 1);
    let num = lx.div_p_pow(1)?.with_precision(m - 1);
    Ok(num.mul(&unit.inv()?))
}

pub fn to_u64(x: &BigInt) -> Option<u64> {
    if x.is_negative() {
        None
    } else {
        x.to_u64()
    }
}
