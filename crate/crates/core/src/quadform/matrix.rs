//! Half-integral symmetric matrices stored as `G = 2T`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{int, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct HalfIntegralMatrix {
    g: Vec<Vec<i64>>,
}

impl TryFrom<Vec<Vec<i64>>> for HalfIntegralMatrix {
    type Error = Error;
    fn try_from(g: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(g)
    }
}

impl From<HalfIntegralMatrix> for Vec<Vec<i64>> {
    fn from(m: HalfIntegralMatrix) -> Self {
        m.g
    }
}

impl HalfIntegralMatrix {
    /// From `G = 2T`: symmetric with even diagonal.
    pub fn new(g: Vec<Vec<i64>>) -> Result<Self> {
        let n = g.len();
        for (i, row) in g.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput("matrix is not square".into()));
            }
            if row[i] % 2 != 0 {
                return Err(Error::InvalidInput(format!("diagonal entry {} of 2T is odd", row[i])));
            }
            for j in 0..n {
                if g[j][i] != row[j] {
                    return Err(Error::InvalidInput("matrix is not symmetric".into()));
                }
            }
        }
        Ok(HalfIntegralMatrix { g })
    }

    /// Parse `"r1;r2;..."` with comma-separated entries of `2T`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Self::new(vec![]);
        }
        let rows: Result<Vec<Vec<i64>>> = s
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad matrix entry {x:?}"))))
                    .collect()
            })
            .collect();
        Self::new(rows?)
    }

    pub fn zero(n: usize) -> Self {
        HalfIntegralMatrix { g: vec![vec![0; n]; n] }
    }

    /// `diag(t_1, …, t_n)`.
    pub fn diag(t: &[i64]) -> Self {
        let n = t.len();
        let mut g = vec![vec![0; n]; n];
        for i in 0..n {
            g[i][i] = 2 * t[i];
        }
        HalfIntegralMatrix { g }
    }

    pub fn degree(&self) -> usize {
        self.g.len()
    }

    pub fn gram2(&self) -> &Vec<Vec<i64>> {
        &self.g
    }

    pub fn g(&self, i: usize, j: usize) -> i64 {
        self.g[i][j]
    }

    /// Entry of `T`.
    pub fn t(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.g[i][j].into(), 2.into())
    }

    pub fn trace(&self) -> i64 {
        (0..self.degree()).map(|i| self.g[i][i] / 2).sum()
    }

    pub fn scale(&self, c: i64) -> Self {
        HalfIntegralMatrix { g: self.g.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() }
    }

    /// `Uᵀ T U`.
    pub fn transform(&self, u: &[Vec<i64>]) -> Self {
        let n = self.degree();
        let m = if n == 0 { 0 } else { u[0].len() };
        let mut out = vec![vec![0i64; m]; m];
        for a in 0..m {
            for b in 0..m {
                let mut s = 0i64;
                for i in 0..n {
                    for j in 0..n {
                        s += u[i][a] * self.g[i][j] * u[j][b];
                    }
                }
                out[a][b] = s;
            }
        }
        HalfIntegralMatrix { g: out }
    }

    pub fn block_diag(&self, o: &Self) -> Self {
        let (a, b) = (self.degree(), o.degree());
        let mut g = vec![vec![0; a + b]; a + b];
        for i in 0..a {
            g[i][..a].copy_from_slice(&self.g[i]);
        }
        for i in 0..b {
            g[a + i][a..].copy_from_slice(&o.g[i]);
        }
        HalfIntegralMatrix { g }
    }

    pub fn det_g(&self) -> BigInt {
        det(&self.g.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>())
    }

    /// `det T = det G / 2^n`.
    pub fn det_t(&self) -> Rational {
        Rational::new(self.det_g(), BigInt::from(2).pow(self.degree() as u32))
    }

    /// `𝔇 = 2^{2⌊r/2⌋} det T`.
    pub fn disc(&self) -> BigInt {
        let r = self.degree();
        let v = self.det_g();
        if r % 2 == 0 {
            v
        } else {
            v / 2
        }
    }

    pub fn rank(&self) -> usize {
        let m: Vec<Vec<Rational>> = self.g.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        rank_q(m)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.degree() == 0 || !self.det_g().is_zero()
    }

    /// All principal minors nonnegative.
    pub fn is_psd(&self) -> bool {
        let n = self.degree();
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let sub: Vec<Vec<BigInt>> =
                idx.iter().map(|&i| idx.iter().map(|&j| BigInt::from(self.g[i][j])).collect()).collect();
            if det(&sub).is_negative() {
                return false;
            }
        }
        true
    }

    /// `2·G^{-1} = T^{-1}` as a rational matrix.
    pub fn inverse_t(&self) -> Result<Vec<Vec<Rational>>> {
        let n = self.degree();
        let d = self.det_g();
        if d.is_zero() {
            return Err(Error::Singular);
        }
        let gi: Vec<Vec<BigInt>> = self.g.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut out = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<BigInt>> = (0..n)
                    .filter(|&a| a != j)
                    .map(|a| (0..n).filter(|&b| b != i).map(|b| gi[a][b].clone()).collect())
                    .collect();
                let c = det(&minor) * if (i + j) % 2 == 0 { 1 } else { -1 };
                out[i][j] = Rational::new(c * 2, d.clone());
            }
        }
        Ok(out)
    }

    /// A rational diagonalization `(a_i)` of `T` (congruent over `Q`).
    pub fn diagonalize(&self) -> Vec<Rational> {
        let n = self.degree();
        let mut m: Vec<Vec<Rational>> =
            self.g.iter().map(|r| r.iter().map(|&x| Rational::new(x.into(), 2.into())).collect()).collect();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            if m[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                    m.swap(k, j);
                    for row in m.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                    // e_k ← e_k + e_j makes the pivot 2·m[k][j]
                    for c in 0..n {
                        let v = m[j][c].clone();
                        m[k][c] += v;
                    }
                    for row in m.iter_mut() {
                        let v = row[j].clone();
                        row[k] += v;
                    }
                }
            }
            let piv = m[k][k].clone();
            out.push(piv.clone());
            if piv.is_zero() {
                continue;
            }
            for i in k + 1..n {
                let f = &m[i][k] / &piv;
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = &f * &m[k][c];
                    m[i][c] -= v;
                }
                for row in m.iter_mut() {
                    let v = &f * &row[k];
                    row[i] -= v;
                }
            }
        }
        out
    }
}

impl fmt::Display for HalfIntegralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.g.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Bareiss determinant.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn rank_q(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let v = &f * &m[r][k];
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// `Uᵀ T U = blockdiag(T', 0)` with `U` unimodular and `T'` positive definite.
pub fn block_decompose(t: &HalfIntegralMatrix) -> Result<(Vec<Vec<i64>>, HalfIntegralMatrix)> {
    if !t.is_psd() {
        return Err(Error::Indefinite);
    }
    let n = t.degree();
    let mut h: Vec<Vec<i64>> = t.g.clone();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    // column operations on G, mirrored on U, bring G to column echelon form
    let col_op = |m: &mut Vec<Vec<i64>>, dst: usize, src: usize, f: i64| {
        for row in m.iter_mut() {
            row[dst] -= f * row[src];
        }
    };
    let swap = |m: &mut Vec<Vec<i64>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    };
    let mut piv = 0;
    for row in 0..n {
        if piv == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (piv..n).filter(|&c| h[row][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let m = *nz.iter().min_by_key(|&&c| h[row][c].abs()).unwrap();
            swap(&mut h, piv, m);
            swap(&mut u, piv, m);
            let mut done = true;
            for c in piv + 1..n {
                if h[row][c] != 0 {
                    let f = h[row][c].div_euclid(h[row][piv]);
                    col_op(&mut h, c, piv, f);
                    col_op(&mut u, c, piv, f);
                    if h[row][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                piv += 1;
                break;
            }
        }
    }
    let r = piv;
    let full = t.transform(&u);
    let tp = HalfIntegralMatrix { g: (0..r).map(|i| full.g[i][..r].to_vec()).collect() };
    for i in 0..n {
        for j in 0..n {
            if (i >= r || j >= r) && full.g[i][j] != 0 {
                return Err(Error::Invariant("block decomposition left a nonzero off-block entry".into()));
            }
        }
    }
    Ok((u, tp))
}

/// All positive semidefinite `T` of degree `n` with `tr T ≤ trace_bound`.
pub fn enumerate_psd(n: usize, trace_bound: i64) -> Result<Vec<HalfIntegralMatrix>> {
    enumerate_psd_with(n, trace_bound, trace_bound)
}

/// As [`enumerate_psd`], additionally bounding every diagonal entry of `T`.
pub fn enumerate_psd_with(n: usize, trace_bound: i64, diag_bound: i64) -> Result<Vec<HalfIntegralMatrix>> {
    let cap = [i64::MAX, 100_000, 60, 30, 16];
    if n > 4 || trace_bound > cap[n] {
        return Err(Error::BoundExceeded(format!("enumeration of degree {n} up to trace {trace_bound}")));
    }
    let mut diags: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        let mut next = vec![];
        for d in &diags {
            let used: i64 = d.iter().sum();
            for t in 0..=diag_bound.min(trace_bound - used) {
                let mut e = d.clone();
                e.push(t);
                next.push(e);
            }
        }
        diags = next;
    }
    diags.sort_by_key(|d| (d.iter().sum::<i64>(), d.clone()));
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = vec![];
    for d in diags {
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = 2 * d[i];
        }
        let ranges: Vec<i64> = pairs.iter().map(|&(i, j)| ((4 * d[i] * d[j]) as f64).sqrt().floor() as i64).collect();
        let mut idx: Vec<i64> = ranges.iter().map(|r| -r).collect();
        loop {
            let ok = pairs.iter().zip(&idx).all(|(&(i, j), &b)| b * b <= 4 * d[i] * d[j]);
            if ok {
                for (&(i, j), &b) in pairs.iter().zip(&idx) {
                    g[i][j] = b;
                    g[j][i] = b;
                }
                let m = HalfIntegralMatrix { g: g.clone() };
                if m.is_psd() {
                    out.push(m);
                }
            }
            // odometer over off-diagonal entries
            let mut k = 0;
            while k < idx.len() {
                if idx[k] < ranges[k] {
                    idx[k] += 1;
                    break;
                }
                idx[k] = -ranges[k];
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    Ok(out)
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn gcd_all(m: &HalfIntegralMatrix) -> i64 {
    m.g.iter().flatten().fold(0i64, |a, &b| a.gcd(&b))
}
