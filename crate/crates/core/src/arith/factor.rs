//! Trial-division factoring with an explicit search bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_FACTOR_BOUND: u64 = 10_000_000;

pub fn factor(m: u64) -> Result<Vec<(u64, u32)>> {
    factor_with_bound(&BigInt::from(m), DEFAULT_FACTOR_BOUND)
}

/// Factor `|m|` by trial division up to `bound`; fails if a cofactor with
/// no prime factor below `bound` is still composite-sized.
pub fn factor_with_bound(m: &BigInt, bound: u64) -> Result<Vec<(u64, u32)>> {
    if m.is_zero() {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut n = m.abs();
    let mut out = Vec::new();
    if let Some(small) = n.to_u64() {
        return factor_u64(small, bound, m);
    }
    let mut d: u64 = 2;
    while &(BigInt::from(d) * d) <= &n {
        if d > bound {
            return Err(Error::FactorBoundExceeded { n: m.to_string(), bound });
        }
        let bd = BigInt::from(d);
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&bd);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
            if let Some(small) = n.to_u64() {
                let mut rest = factor_u64(small, bound, m)?;
                out.append(&mut rest);
                return Ok(out);
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let p = n.to_u64().ok_or_else(|| Error::FactorBoundExceeded { n: m.to_string(), bound })?;
        out.push((p, 1));
    }
    Ok(out)
}

fn factor_u64(mut n: u64, bound: u64, orig: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    let mut d: u64 = 2;
    while (d as u128) * (d as u128) <= n as u128 {
        if d > bound {
            return Err(Error::FactorBoundExceeded { n: orig.to_string(), bound });
        }
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Distinct prime divisors of a nonzero integer.
pub fn prime_divisors(m: &BigInt) -> Result<Vec<u64>> {
    Ok(factor_with_bound(m, DEFAULT_FACTOR_BOUND)?.into_iter().map(|(p, _)| p).collect())
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d: &u64| d * d <= n).all(|d| n % d != 0)
}
