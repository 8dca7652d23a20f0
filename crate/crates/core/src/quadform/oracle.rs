//! Brute-force evaluation of the local Siegel series by summing characters
//! over coset representatives `R ∈ Sym_r(Q_l)/Sym_r(Z_l)`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::matrix::HalfIntegralMatrix;
use crate::error::{Error, Result};

/// Leaves allowed in the enumeration (`l^{D·r(r+1)/2}`).
pub const ORACLE_WORK_CAP: u128 = 60_000_000;

fn val(mut x: i64, l: i64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % l == 0 && v < cap {
        x /= l;
        v += 1;
    }
    v
}

fn inv_mod(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (a.rem_euclid(m), m, 1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m)
}

/// `v_l(μ)` for the lattice `Z^r + (rows of N)/l^D`, `N` given modulo `q = l^D`.
fn mu_val(rows: &mut [[i64; 4]], nrows: usize, r: usize, l: i64, d: u32, q: i64) -> u32 {
    let mut used_row = [false; 4];
    let mut used_col = [false; 4];
    let mut total = 0;
    loop {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in 0..nrows {
            if used_row[i] {
                continue;
            }
            for j in 0..r {
                if used_col[j] {
                    continue;
                }
                let v = val(rows[i][j], l, d);
                if v < d && best.is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, pv)) = best else { break };
        total += d - pv;
        used_row[pi] = true;
        used_col[pj] = true;
        let lp = l.pow(pv);
        let unit_inv = inv_mod(rows[pi][pj] / lp, q);
        for i in 0..nrows {
            if used_row[i] || rows[i][pj] == 0 {
                continue;
            }
            let f = ((rows[i][pj] / lp) % q * unit_inv).rem_euclid(q);
            for j in 0..r {
                rows[i][j] = (rows[i][j] - f * rows[pi][j]).rem_euclid(q);
            }
        }
    }
    total
}

/// Coefficients `b_0 … b_D` of `b_l(T; X)`.
pub fn b_coeffs(t: &HalfIntegralMatrix, l: u64, dmax: u32) -> Result<Vec<BigInt>> {
    let r = t.degree();
    if r > 3 {
        return Err(Error::BoundExceeded(format!("oracle supports rank ≤ 3, got {r}")));
    }
    let li = l as i64;
    let q = li.pow(dmax);
    let entries = r * (r + 1) / 2;
    let work = (q as u128).checked_pow(entries as u32).unwrap_or(u128::MAX);
    if work > ORACLE_WORK_CAP {
        return Err(Error::BoundExceeded(format!("oracle enumeration of {work} cosets")));
    }
    let g = t.gram2();
    // counts[m][a]: cosets with v(μ) = m and l^D·tr(TR) ≡ a
    let mut counts = vec![vec![0u64; q as usize]; dmax as usize + 1];
    let mut n = [[0i64; 4]; 4];
    let dd = dmax;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        row: usize,
        col: usize,
        r: usize,
        n: &mut [[i64; 4]; 4],
        g: &[Vec<i64>],
        l: i64,
        d: u32,
        q: i64,
        counts: &mut [Vec<u64>],
    ) {
        if row == r {
            let mut work = *n;
            let m = mu_val(&mut work, r, r, l, d, q);
            if m as usize >= counts.len() {
                return;
            }
            let mut tr = 0i64;
            for i in 0..r {
                tr += (g[i][i] / 2) * n[i][i];
                for j in i + 1..r {
                    tr += g[i][j] * n[i][j];
                }
            }
            counts[m as usize][tr.rem_euclid(q) as usize] += 1;
            return;
        }
        if col == r {
            // prune on the partial lattice
            let mut work = *n;
            if mu_val(&mut work, row + 1, r, l, d, q) > d {
                return;
            }
            rec(row + 1, row + 1, r, n, g, l, d, q, counts);
            return;
        }
        for x in 0..q {
            n[row][col] = x;
            n[col][row] = x;
            rec(row, col + 1, r, n, g, l, d, q, counts);
        }
        n[row][col] = 0;
        n[col][row] = 0;
    }

    if r == 0 {
        let mut v = vec![BigInt::zero(); dd as usize + 1];
        v[0] = BigInt::from(1);
        return Ok(v);
    }
    rec(0, 0, r, &mut n, g, li, dd, q, &mut counts);
    counts
        .iter()
        .enumerate()
        .map(|(m, c)| cyclotomic_integer(c, li, dmax).ok_or(Error::NonIntegerCharacterSum { degree: m }))
        .collect()
}

/// `Σ_a c_a ζ^a` for a primitive `l^D`-th root ζ, if it is a rational integer.
fn cyclotomic_integer(c: &[u64], l: i64, d: u32) -> Option<BigInt> {
    let q = l.pow(d) as usize;
    let step = q / l as usize;
    let phi = q - step;
    let mut v: Vec<i128> = c.iter().map(|&x| x as i128).collect();
    for a in (phi..q).rev() {
        let x = v[a];
        if x == 0 {
            continue;
        }
        v[a] = 0;
        for i in 0..(l as usize - 1) {
            v[a - phi + i * step] -= x;
        }
    }
    if v[1..].iter().any(|&x| x != 0) {
        return None;
    }
    Some(BigInt::from(v[0]))
}
