//! Local invariants: discriminant data, χ_l, Hasse invariant, η_l and 𝔦(T).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::HalfIntegralMatrix;
use crate::arith::rational::{int, Rational};
use crate::arith::symbols::{chi_local, fundamental_discriminant_decompose, hilbert_symbol, valuation, valuation_rat};
use crate::error::{Error, Result};

/// Which pairs enter the Hasse invariant `Π (a_i, a_j)_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HasseConvention {
    /// `i < j`
    Strict,
    /// `i ≤ j` (Kitaoka)
    Kitaoka,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalInvariants {
    pub degree: usize,
    pub l: u64,
    #[serde(with = "crate::arith::rational::serde_rational")]
    pub det_t: Rational,
    #[serde(with = "crate::arith::rational::serde_bigint")]
    pub disc: BigInt,
    /// Fundamental discriminant and conductor of `(−1)^{r/2}𝔇` (even rank only).
    pub fund: Option<(i64, i64)>,
    /// `χ_l((−1)^{r/2} det T)` for even rank.
    pub chi: Option<i8>,
    pub hasse_strict: i8,
    pub hasse_kitaoka: i8,
    pub eta: i8,
    pub iota: u32,
    /// Largest `m` with `l^{−m} T` half-integral over `Z_l` (the smallest Jordan exponent).
    pub content: u32,
    pub v_disc: u32,
    pub v_f: Option<u32>,
}

pub fn hasse(diag: &[Rational], l: u64, conv: HasseConvention) -> Result<i8> {
    let mut h = 1i8;
    for i in 0..diag.len() {
        let start = if conv == HasseConvention::Kitaoka { i } else { i + 1 };
        for j in start..diag.len() {
            h *= hilbert_symbol(&diag[i], &diag[j], l)?;
        }
    }
    Ok(h)
}

/// `η_l = h_l·(det T, (−1)^{(r−1)/2} det T)_l·(−1,−1)_l^{(r²−1)/8}` for odd `r`.
pub fn eta(t: &HalfIntegralMatrix, l: u64, conv: HasseConvention) -> Result<i8> {
    let r = t.degree();
    let d = t.det_t();
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let h = hasse(&t.diagonalize(), l, conv)?;
    let sign = if ((r as i64 - 1) / 2) % 2 == 0 { int(1) } else { int(-1) };
    let mut e = h * hilbert_symbol(&d, &(&sign * &d), l)?;
    if r % 2 == 1 && ((r * r - 1) / 8) % 2 == 1 {
        e *= hilbert_symbol(&int(-1), &int(-1), l)?;
    }
    Ok(e)
}

/// Least `m ≥ 0` with `l^m T^{-1}` half-integral over `Z_l`.
pub fn iota(t: &HalfIntegralMatrix, l: u64) -> Result<u32> {
    let inv = t.inverse_t()?;
    let mut m: i64 = 0;
    for (i, row) in inv.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let v = valuation_rat(x, l);
            let need = if l == 2 && i != j { -1 - v } else { -v };
            m = m.max(need);
        }
    }
    Ok(m as u32)
}

/// Largest `m` with `l^{−m} T ∈ Sym^*(Z_l)`.
pub fn content(t: &HalfIntegralMatrix, l: u64) -> u32 {
    let n = t.degree();
    let mut m = u32::MAX;
    for i in 0..n {
        for j in 0..n {
            let x = t.g(i, j);
            if x == 0 {
                continue;
            }
            let v = valuation(&BigInt::from(x), l);
            // diagonal entries of G carry an extra factor 2
            let v = if i == j && l == 2 { v - 1 } else { v };
            m = m.min(v);
        }
    }
    if m == u32::MAX {
        0
    } else {
        m
    }
}

/// `(−1)^{r/2} 𝔇` for even `r`.
pub fn signed_disc(t: &HalfIntegralMatrix) -> BigInt {
    let d = t.disc();
    if (t.degree() / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

pub fn invariants_of(t: &HalfIntegralMatrix, l: u64) -> Result<LocalInvariants> {
    let r = t.degree();
    if !t.is_nondegenerate() {
        return Err(Error::Singular);
    }
    let det_t = t.det_t();
    let disc = t.disc();
    let diag = t.diagonalize();
    let (fund, chi, v_f) = if r % 2 == 0 {
        let sd = signed_disc(t);
        let (fd, ff) = if r == 0 { (BigInt::one(), BigInt::one()) } else { fundamental_discriminant_decompose(&sd)? };
        let to64 = |x: &BigInt| -> Result<i64> {
            x.try_into().map_err(|_| Error::BoundExceeded("discriminant exceeds 64 bits".into()))
        };
        let chi = if r == 0 { 1 } else { chi_local(&Rational::from_integer(sd.clone()), l) };
        (Some((to64(&fd)?, to64(&ff)?)), Some(chi), Some(valuation(&ff, l)))
    } else {
        (None, None, None)
    };
    let hs = hasse(&diag, l, HasseConvention::Strict)?;
    let hk = hasse(&diag, l, HasseConvention::Kitaoka)?;
    let e = if r % 2 == 1 { eta(t, l, HasseConvention::Kitaoka)? } else { 1 };
    Ok(LocalInvariants {
        degree: r,
        l,
        det_t,
        v_disc: if r == 0 { 0 } else { valuation(&disc.abs(), l) },
        disc,
        fund,
        chi,
        hasse_strict: hs,
        hasse_kitaoka: hk,
        eta: e,
        iota: if r == 0 { 0 } else { iota(t, l)? },
        content: content(t, l),
        v_f,
    })
}
