//! Local densities `α_p(H_k, T)` at odd `p` via the sum over integral
//! overlattices, giving `b_p(T; p^{-k})` and hence `F_p(T; X)` by interpolation.
//!
//! `α_p(H_k, T) = Σ_{M ⊇ Z_p^r, T|_M integral} [M : Z_p^r]^{r+1−2k} α_pr(H_k, T|_M)`
//! and for unimodular `H_k` the primitive density only sees `T|_M mod p`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::HalfIntegralMatrix;
use crate::arith::poly::{interpolate, QPoly};
use crate::arith::rational::{int, int_pow, Rational};
use crate::error::{Error, Result};

/// Guard against runaway enumeration.
pub const MAX_LATTICES: usize = 2_000_000;

/// Overlattice census: `(log_p index, rank of T|_M mod p, Legendre class of its
/// nondegenerate part) → count`.
#[derive(Clone, Debug)]
pub struct Census {
    pub r: usize,
    pub p: u64,
    pub classes: Vec<((u32, usize, i8), u64)>,
    pub lattices: usize,
}

fn legendre_i(a: i128, p: i128) -> i8 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut r: i128 = 1;
    let mut b = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn inv_mod(a: i128, p: i128) -> i128 {
    let (mut r0, mut r1, mut s0, mut s1) = (a.rem_euclid(p), p, 1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p)
}

/// Row HNF of the lattice spanned by `gens` together with `m·Z^r`.
fn hnf(gens: &[Vec<i128>], r: usize, m: i128) -> Vec<Vec<i128>> {
    let mut rows: Vec<Vec<i128>> = gens.iter().map(|v| v.iter().map(|x| x.rem_euclid(m)).collect()).collect();
    for i in 0..r {
        let mut e = vec![0i128; r];
        e[i] = m;
        rows.push(e);
    }
    let mut out: Vec<Vec<i128>> = Vec::with_capacity(r);
    for c in 0..r {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            let pr = rows[piv].clone();
            for &i in &nz {
                if i != piv {
                    let f = rows[i][c].div_euclid(pr[c]);
                    for k in 0..r {
                        rows[i][k] -= f * pr[k];
                    }
                }
            }
        }
        let idx = (0..rows.len()).find(|&i| rows[i][c] != 0).expect("full rank lattice");
        let mut pr = rows.swap_remove(idx);
        if pr[c] < 0 {
            pr.iter_mut().for_each(|x| *x = -*x);
        }
        out.push(pr);
    }
    // reduce above-diagonal entries
    for c in 0..r {
        for i in 0..c {
            let f = out[i][c].div_euclid(out[c][c]);
            if f != 0 {
                let pc = out[c].clone();
                for k in 0..r {
                    out[i][k] -= f * pc[k];
                }
            }
        }
    }
    out
}

/// Kernel basis of a square matrix over `F_p`.
fn kernel_mod_p(a: &[Vec<i128>], p: i128) -> Vec<Vec<i128>> {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let mut pivots = vec![];
    let mut row = 0;
    for c in 0..n {
        let Some(pi) = (row..n).find(|&i| m[i][c] != 0) else { continue };
        m.swap(row, pi);
        let inv = inv_mod(m[row][c], p);
        for k in 0..n {
            m[row][k] = m[row][k] * inv % p;
        }
        for i in 0..n {
            if i != row && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..n {
                    m[i][k] = (m[i][k] - f * m[row][k]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0i128; n];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (-m[i][f]).rem_euclid(p);
            }
            v
        })
        .collect()
}

/// Rank and Legendre class of the nondegenerate part of a symmetric matrix mod p.
fn type_mod_p(t: &[Vec<i128>], p: i128) -> (usize, i8) {
    let n = t.len();
    let mut m: Vec<Vec<i128>> = t.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let mut disc: i128 = 1;
    let mut rank = 0;
    let mut k = 0;
    while k < n {
        if m[k][k] == 0 {
            if let Some(j) = (k + 1..n).find(|&j| m[j][j] != 0) {
                m.swap(k, j);
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| m[k][j] != 0) {
                for c in 0..n {
                    m[k][c] = (m[k][c] + m[j][c]) % p;
                }
                for row in m.iter_mut() {
                    row[k] = (row[k] + row[j]) % p;
                }
            }
        }
        let piv = m[k][k];
        if piv != 0 {
            rank += 1;
            disc = disc * piv % p;
            let inv = inv_mod(piv, p);
            for i in k + 1..n {
                let f = m[i][k] * inv % p;
                if f == 0 {
                    continue;
                }
                for c in 0..n {
                    m[i][c] = (m[i][c] - f * m[k][c]).rem_euclid(p);
                }
                for row in m.iter_mut() {
                    row[i] = (row[i] - f * row[k]).rem_euclid(p);
                }
            }
        }
        k += 1;
    }
    (rank, legendre_i(disc, p))
}

pub fn census(t: &HalfIntegralMatrix, p: u64) -> Result<Census> {
    let r = t.degree();
    if p == 2 {
        return Err(Error::OutOfScope("the density engine needs odd p".into()));
    }
    if !t.is_nondegenerate() {
        return Err(Error::Singular);
    }
    let pi = p as i128;
    let g: Vec<Vec<i128>> = t.gram2().iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    // every integral overlattice lies in the dual, whose denominators divide p^e
    let e = crate::arith::symbols::valuation(&t.det_g(), p);
    let pe = pi.pow(e);
    let pe2 = pe * pe;
    let start: Vec<Vec<i128>> = (0..r).map(|i| (0..r).map(|j| if i == j { pe } else { 0 }).collect()).collect();
    let inv2 = inv_mod(2, pi);
    let mut seen: HashSet<Vec<Vec<i128>>> = HashSet::new();
    let mut queue: VecDeque<(Vec<Vec<i128>>, u32)> = VecDeque::new();
    let mut classes: HashMap<(u32, usize, i8), u64> = HashMap::new();
    seen.insert(start.clone());
    queue.push_back((start, 0));
    while let Some((basis, lvl)) = queue.pop_front() {
        // A = V G Vᵀ / p^{2e}
        let mut a = vec![vec![0i128; r]; r];
        for x in 0..r {
            for y in 0..r {
                let mut s = 0i128;
                for i in 0..r {
                    if basis[x][i] == 0 {
                        continue;
                    }
                    for j in 0..r {
                        s += basis[x][i] * g[i][j] * basis[y][j];
                    }
                }
                if s % pe2 != 0 {
                    return Err(Error::Invariant("overlattice Gram matrix is not integral".into()));
                }
                a[x][y] = s / pe2;
            }
        }
        let half: Vec<Vec<i128>> = a.iter().map(|row| row.iter().map(|x| x.rem_euclid(pi) * inv2 % pi).collect()).collect();
        let (w0, dw) = type_mod_p(&half, pi);
        *classes.entry((lvl, w0, if w0 == 0 { 1 } else { dw })).or_default() += 1;
        let ker = kernel_mod_p(&a, pi);
        if ker.is_empty() {
            continue;
        }
        // lines in the kernel: combinations with leading coefficient 1
        let kd = ker.len();
        let total = pi.pow(kd as u32);
        for code in 0..total {
            let mut coef = vec![0i128; kd];
            let mut c = code;
            for x in coef.iter_mut() {
                *x = c % pi;
                c /= pi;
            }
            match coef.iter().rev().find(|&&x| x != 0) {
                Some(&1) => {}
                _ => continue,
            }
            let mut cv = vec![0i128; r];
            for (k, &w) in coef.iter().enumerate() {
                for i in 0..r {
                    cv[i] = (cv[i] + w * ker[k][i]) % pi;
                }
            }
            let mut q = 0i128;
            for x in 0..r {
                for y in 0..r {
                    q += cv[x] * a[x][y] * cv[y];
                }
            }
            if q % (pi * pi) != 0 {
                continue;
            }
            let mut w = vec![0i128; r];
            for x in 0..r {
                for i in 0..r {
                    w[i] += cv[x] * basis[x][i];
                }
            }
            if w.iter().any(|v| v % pi != 0) {
                return Err(Error::Invariant("overlattice escapes the dual lattice".into()));
            }
            let w: Vec<i128> = w.iter().map(|v| v / pi).collect();
            let mut gens = basis.clone();
            gens.push(w);
            let h = hnf(&gens, r, pe);
            if seen.insert(h.clone()) {
                if seen.len() > MAX_LATTICES {
                    return Err(Error::BoundExceeded("overlattice enumeration".into()));
                }
                queue.push_back((h, lvl + 1));
            }
        }
    }
    let mut cl: Vec<_> = classes.into_iter().collect();
    cl.sort();
    Ok(Census { r, p, classes: cl, lattices: seen.len() })
}

fn ppow(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// `#{v : Q(v) = c}` in a nondegenerate quadratic space over `F_p` of
/// dimension `d` whose discriminant has Legendre class `delta`.
fn count_value(p: u64, d: usize, delta: i8, c_zero: bool, c_class: i8) -> BigInt {
    if d == 0 {
        return if c_zero { BigInt::one() } else { BigInt::zero() };
    }
    let d32 = d as u32;
    let m1 = if p % 4 == 3 { -1i8 } else { 1 };
    let sgn = |k: usize| if k % 2 == 0 { 1i8 } else { m1 };
    if d % 2 == 0 {
        let eps = sgn(d / 2) * delta;
        let top = ppow(p, d32 - 1);
        if c_zero {
            top + BigInt::from(eps) * (ppow(p, d32 / 2) - ppow(p, d32 / 2 - 1))
        } else {
            top - BigInt::from(eps) * ppow(p, d32 / 2 - 1)
        }
    } else if c_zero {
        ppow(p, d32 - 1)
    } else {
        let s = sgn((d - 1) / 2) * c_class * delta;
        ppow(p, d32 - 1) + BigInt::from(s) * ppow(p, (d32 - 1) / 2)
    }
}

/// Primitive solutions mod p of `H_k[X] = T̄` for `T̄` of type `(r, w0, δ_W)`.
fn primitive_count(p: u64, k: usize, r: usize, w0: usize, dw: i8) -> BigInt {
    let m1 = if p % 4 == 3 { -1i8 } else { 1 };
    let dv: i8 = if k % 2 == 1 { m1 } else { 1 };
    // after diagonalizing T̄ = diag(t_1..t_{w0}, 0..), only the running product
    // of the t_i matters; take t_1 = … = t_{w0-1} = 1 and t_{w0} of class dw
    let mut acc = BigInt::one();
    let mut cls: i8 = 1;
    for i in 0..w0 {
        let ti: i8 = if i + 1 == w0 { dw } else { 1 };
        acc *= count_value(p, 2 * k - i, dv * cls, false, ti);
        cls *= ti;
    }
    let rho = r - w0;
    let du = dv * cls;
    let dim_u = 2 * k - w0;
    for i in 0..rho {
        let di = dim_u - 2 * i;
        let dui = if i % 2 == 1 { du * m1 } else { du };
        acc *= ppow(p, i as u32) * (count_value(p, di, dui, true, 0) - 1);
    }
    acc
}

/// `α_p(H_k, T)` from a census.
pub fn alpha(c: &Census, k: usize) -> Rational {
    let r = c.r as i64;
    let p = c.p as i64;
    let mut s = Rational::zero();
    for &((g, w0, dw), n) in &c.classes {
        let e = primitive_count(c.p, k, c.r, w0, dw);
        let w = int_pow(p, (r + 1 - 2 * k as i64) * g as i64 + r * (r + 1) / 2 - 2 * k as i64 * r);
        s += int(e) * w * int(n as i64);
    }
    s
}

/// `F_p(T; X)` for odd `p`, given the degree and the rational cofactor.
pub fn f_poly_density(t: &HalfIntegralMatrix, p: u64, degree: usize, cofactor: &(QPoly, QPoly)) -> Result<QPoly> {
    let c = census(t, p)?;
    let r = t.degree();
    let npts = degree + 3;
    let mut xs = Vec::with_capacity(npts);
    let mut ys = Vec::with_capacity(npts);
    for j in 0..npts {
        let k = r + 1 + j;
        let x = int_pow(p as i64, -(k as i64));
        let cof = cofactor.0.eval(&x) / cofactor.1.eval(&x);
        ys.push(alpha(&c, k) / cof);
        xs.push(x);
    }
    let f = interpolate(&xs, &ys);
    if f.degree().unwrap_or(0) > degree {
        return Err(Error::Invariant(format!("density interpolation for {t} at {p} has degree above {degree}: {f}")));
    }
    Ok(f)
}
