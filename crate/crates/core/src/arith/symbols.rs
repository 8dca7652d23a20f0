//! Kronecker, Legendre and Hilbert symbols; square classes in `Q_l`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::factor_with_bound;
use super::factor::DEFAULT_FACTOR_BOUND;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `v_l(x)` for nonzero `x`.
pub fn valuation(x: &BigInt, l: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let l = BigInt::from(l);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&l);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

pub fn valuation_rat(x: &Rational, l: u64) -> i64 {
    valuation(x.numer(), l) as i64 - valuation(x.denom(), l) as i64
}

/// Jacobi symbol for odd positive `b`.
fn jacobi(a: &BigInt, b: &BigInt) -> i8 {
    let mut a = a.mod_floor(b);
    let mut b = b.clone();
    let mut k = 1i8;
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        let mut t = 0u32;
        while a.is_even() {
            a >>= 1;
            t += 1;
        }
        if t % 2 == 1 {
            let r = b.mod_floor(&eight).to_u8().unwrap();
            if r == 3 || r == 5 {
                k = -k;
            }
        }
        if a.mod_floor(&four) == BigInt::from(3) && b.mod_floor(&four) == BigInt::from(3) {
            k = -k;
        }
        std::mem::swap(&mut a, &mut b);
        a = a.mod_floor(&b);
    }
    if b.is_one() {
        k
    } else {
        0
    }
}

/// Kronecker symbol `(a/b)` for arbitrary integers.
fn kronecker_raw(a: &BigInt, b: &BigInt) -> i8 {
    if b.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut k = 1i8;
    let mut b = b.clone();
    if b.is_negative() {
        b = -b;
        if a.is_negative() {
            k = -k;
        }
    }
    let mut v = 0u32;
    while b.is_even() {
        b >>= 1;
        v += 1;
    }
    if v > 0 {
        if a.is_even() {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.mod_floor(&BigInt::from(8)).to_u8().unwrap();
            if r == 3 || r == 5 {
                k = -k;
            }
        }
    }
    k * jacobi(a, &b)
}

/// The character `χ_d(m)` attached to a discriminant `d`.
pub fn kronecker_symbol(d: &BigInt, m: &BigInt) -> Result<i8> {
    let r = d.mod_floor(&BigInt::from(4));
    if !(r.is_zero() || r.is_one()) {
        return Err(Error::NotDiscriminant(d.to_string()));
    }
    Ok(kronecker_raw(d, m))
}

pub fn kronecker_i64(d: i64, m: i64) -> Result<i8> {
    kronecker_symbol(&BigInt::from(d), &BigInt::from(m))
}

/// Legendre symbol `(a|p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    jacobi(a, &BigInt::from(p))
}

/// Split a nonzero integer as `l^v · u` with `l ∤ u`.
fn split(x: &BigInt, l: u64) -> (u32, BigInt) {
    let v = valuation(x, l);
    (v, x / BigInt::from(l).pow(v))
}

/// An integer in the same square class as the nonzero rational `x`.
fn square_class_int(x: &Rational) -> BigInt {
    x.numer() * x.denom()
}

/// Hilbert symbol `(a, b)_l` at a finite prime `l`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, l: u64) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let (al, u) = split(&square_class_int(a), l);
    let (be, v) = split(&square_class_int(b), l);
    if l == 2 {
        let eight = BigInt::from(8);
        let eps = |x: &BigInt| -> u32 { ((x.mod_floor(&BigInt::from(4)).to_u32().unwrap()) - 1) / 2 };
        let omega = |x: &BigInt| -> u32 {
            let r = x.mod_floor(&eight).to_u32().unwrap();
            if r == 3 || r == 5 {
                1
            } else {
                0
            }
        };
        let e = eps(&u) * eps(&v) + al * omega(&v) + be * omega(&u);
        Ok(if e % 2 == 0 { 1 } else { -1 })
    } else {
        let eps_l = ((l - 1) / 2) as u32;
        let mut s: i8 = if (al * be * eps_l) % 2 == 0 { 1 } else { -1 };
        if be % 2 == 1 {
            s *= legendre(&u, l);
        }
        if al % 2 == 1 {
            s *= legendre(&v, l);
        }
        Ok(s)
    }
}

/// Hilbert symbol at the real place.
pub fn hilbert_symbol_real(a: &Rational, b: &Rational) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 })
}

/// `χ_l(x)`: 1 if `x` is a square in `Q_l`, −1 if `Q_l(√x)` is unramified, 0 if ramified.
pub fn chi_local(x: &Rational, l: u64) -> i8 {
    assert!(!x.is_zero(), "chi_local of zero");
    let (v, u) = split(&square_class_int(x), l);
    if v % 2 == 1 {
        return 0;
    }
    if l == 2 {
        match u.mod_floor(&BigInt::from(8)).to_u8().unwrap() {
            1 => 1,
            5 => -1,
            _ => 0,
        }
    } else if legendre(&u, l) == 1 {
        1
    } else {
        -1
    }
}

/// `D = d·f²` with `d` a fundamental discriminant (1 allowed) and `f > 0`.
pub fn fundamental_discriminant_decompose(dd: &BigInt) -> Result<(BigInt, BigInt)> {
    if dd.is_zero() {
        return Err(Error::InvalidInput("zero discriminant".into()));
    }
    let r = dd.mod_floor(&BigInt::from(4));
    if !(r.is_zero() || r.is_one()) {
        return Err(Error::NotDiscriminant(dd.to_string()));
    }
    let mut s = if dd.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut g = BigInt::one();
    for (q, e) in factor_with_bound(&dd.abs(), DEFAULT_FACTOR_BOUND)? {
        let q = BigInt::from(q);
        g *= q.pow(e / 2);
        if e % 2 == 1 {
            s *= q;
        }
    }
    if s.mod_floor(&BigInt::from(4)).is_one() {
        Ok((s, g))
    } else {
        Ok((s * 4, g / 2))
    }
}
