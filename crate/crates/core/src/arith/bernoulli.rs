//! Bernoulli numbers, generalized Bernoulli numbers and L-values at negative integers.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::character::CharacterSpec;
use super::padic::{ppow, teichmuller, PadicNumber};
use super::poly::QPoly;
use super::rational::{int, Rational};
use super::symbols::{kronecker_i64, valuation};
use crate::error::{Error, Result};

/// A value that is either an exact rational or a p-adic number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coefficient {
    Rational(#[serde(with = "super::rational::serde_rational")] Rational),
    Padic(PadicNumber),
}

impl Coefficient {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Coefficient::Rational(q) => Some(q),
            Coefficient::Padic(_) => None,
        }
    }

    pub fn to_padic(&self, p: u64, abs_prec: i64) -> PadicNumber {
        match self {
            Coefficient::Rational(q) => PadicNumber::from_rational(q, p, abs_prec),
            Coefficient::Padic(x) => x.clone(),
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        match self {
            Coefficient::Rational(a) => Coefficient::Rational(a * q),
            Coefficient::Padic(x) => Coefficient::Padic(x.mul_rational(q)),
        }
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn cache() -> &'static Mutex<Vec<Rational>> {
    static C: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// `B_k` with `B_1 = −1/2`.
pub fn bernoulli(k: usize) -> Rational {
    let mut c = cache().lock().unwrap_or_else(|e| e.into_inner());
    while c.len() <= k {
        let m = c.len();
        let mut s = Rational::zero();
        for (j, b) in c.iter().enumerate() {
            s += b * int(binomial(m as u64 + 1, j as u64));
        }
        c.push(-s / int(m as i64 + 1));
    }
    c[k].clone()
}

/// The Bernoulli polynomial `B_k(x) = Σ C(k,j) B_j x^{k−j}`.
pub fn bernoulli_poly(k: usize) -> QPoly {
    let mut v = vec![Rational::zero(); k + 1];
    for j in 0..=k {
        v[k - j] = bernoulli(j) * int(binomial(k as u64, j as u64));
    }
    QPoly::new(v)
}

/// `Σ_j C(k,j) B_j f^{j−1} S_{k−j}`: the generalized Bernoulli sum for power sums `S`.
fn bernoulli_from_power_sums(k: usize, f: u64, s: &[BigInt]) -> Rational {
    let f = int(f as i64);
    let mut acc = Rational::zero();
    let mut fp = f.recip();
    for j in 0..=k {
        acc += bernoulli(j) * int(binomial(k as u64, j as u64)) * &fp * int(s[k - j].clone());
        fp *= &f;
    }
    acc
}

fn parity_vanishes(k: usize, chi: &CharacterSpec) -> bool {
    let want: i8 = if k % 2 == 0 { 1 } else { -1 };
    chi.parity() != want && !(k == 1 && chi.is_trivial())
}

/// `B_{k,χ} = f^{k−1} Σ_{a=1}^{f} χ(a) B_k(a/f)`.
///
/// Rational for ±1-valued characters; p-adic (absolute precision at least
/// `precision`) when χ involves a genuine Teichmüller power.
pub fn generalized_bernoulli(k: usize, chi: &CharacterSpec, precision: u32) -> Result<Coefficient> {
    if k == 0 {
        return Err(Error::InvalidInput("generalized Bernoulli number needs k ≥ 1".into()));
    }
    if let Some(d) = chi.rational_discriminant() {
        if parity_vanishes(k, chi) {
            return Ok(Coefficient::Rational(Rational::zero()));
        }
        if d == 1 {
            return Ok(Coefficient::Rational(if k == 1 { Rational::new(1.into(), 2.into()) } else { bernoulli(k) }));
        }
        let f = d.unsigned_abs();
        let mut s = vec![BigInt::zero(); k + 1];
        for a in 1..=f {
            let c = kronecker_i64(d, a as i64)?;
            if c == 0 {
                continue;
            }
            let mut pw = BigInt::one();
            for sm in s.iter_mut() {
                if c > 0 {
                    *sm += &pw;
                } else {
                    *sm -= &pw;
                }
                pw *= a;
            }
        }
        return Ok(Coefficient::Rational(bernoulli_from_power_sums(k, f, &s)));
    }
    let (p, b) = chi.teich().expect("non-rational character has a Teichmüller part");
    if parity_vanishes(k, chi) {
        return Ok(Coefficient::Padic(PadicNumber::exact_zero(p)));
    }
    let d = chi.quadratic_part();
    let f = d.unsigned_abs() * p;
    // group a by its residue t mod p: B = Σ_t ω(t)^b Q_t with Q_t rational
    let mut q_t: Vec<Rational> = Vec::with_capacity(p as usize - 1);
    for t in 1..p {
        let mut s = vec![BigInt::zero(); k + 1];
        let mut a = t;
        while a <= f {
            let c = kronecker_i64(d, a as i64)?;
            if c != 0 {
                let mut pw = BigInt::one();
                for sm in s.iter_mut() {
                    if c > 0 {
                        *sm += &pw;
                    } else {
                        *sm -= &pw;
                    }
                    pw *= a;
                }
            }
            a += p;
        }
        q_t.push(bernoulli_from_power_sums(k, f, &s));
    }
    let den = q_t.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let e = valuation(&den, p);
    let den_unit = &den / ppow(p, e);
    let w = precision + e + 2 * valuation(&BigInt::from(k as u64), p) + 4;
    let m = ppow(p, w);
    let mut acc = BigInt::zero();
    for (i, q) in q_t.iter().enumerate() {
        let n = q.numer() * (&den / q.denom());
        let om = teichmuller(&BigInt::from(i as u64 + 1), p, w)?.pow(b);
        acc += n * om.value;
    }
    let inv = super::padic::inv_mod(&den_unit, &m).expect("unit");
    let unit_part = (acc * inv).mod_floor(&m);
    let x = PadicNumber::from_padic_int(&super::padic::PadicInt::new(p, unit_part, w));
    let shifted = if x.is_zero {
        PadicNumber::zero(p, x.valuation - e as i64)
    } else {
        PadicNumber { valuation: x.valuation - e as i64, ..x }
    };
    Ok(Coefficient::Padic(shifted))
}

/// `L(1−k, χ) = −B_{k,χ}/k`, optionally with the Euler factor at `remove_p` removed.
pub fn dirichlet_l_neg(k: usize, chi: &CharacterSpec, remove_p: Option<u64>, precision: u32) -> Result<Coefficient> {
    let b = generalized_bernoulli(k, chi, precision)?;
    let minus_inv_k = -int(k as i64).recip();
    let l = b.mul_rational(&minus_inv_k);
    let Some(p) = remove_p else { return Ok(l) };
    match (&l, chi.teich()) {
        (_, Some((tp, _))) if tp == p => Ok(l),
        (Coefficient::Rational(q), None) | (Coefficient::Rational(q), Some(_)) => {
            let c = chi.value_rational(p as i64).expect("rational-valued");
            let pk = int(BigInt::from(p).pow(k as u32 - 1));
            Ok(Coefficient::Rational(q * (Rational::one() - int(c as i64) * pk)))
        }
        (Coefficient::Padic(x), _) => {
            let pp = x.p();
            let prec = x.abs_prec().clamp(1, (precision as i64) + 8) as u32 + 4;
            let cp = chi.value_padic(&BigInt::from(p), pp, prec)?;
            let pk = super::padic::PadicInt::new(pp, BigInt::from(p).pow(k as u32 - 1), prec);
            let f = super::padic::PadicInt::one(pp, prec).sub(&cp.mul(&pk));
            Ok(Coefficient::Padic(x.mul(&PadicNumber::from_padic_int(&f))))
        }
    }
}
