//! Dense univariate polynomials over Q, ascending coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{int, rational_to_string, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPoly {
    #[serde(with = "super::rational::serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `c·X^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(v: I) -> Self {
        Self::new(v.into_iter().map(int).collect())
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        Self::new(v.iter().cloned().map(int).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `f(cX)`.
    pub fn scale_var(&self, c: &Rational) -> Self {
        let mut pw = Rational::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &pw);
            pw *= c;
        }
        Self::new(v)
    }

    /// `f(g(X))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Euclidean division by a nonzero polynomial.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or_else(|| Error::InexactDivision("division by zero polynomial".into()))?;
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * b;
                }
            }
            q[k] = c;
        }
        Ok((Self::new(q), Self::new(r)))
    }

    /// Quotient, failing unless the division is exact.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!("({self}) / ({d}) leaves remainder {r}")));
        }
        Ok(q)
    }

    /// `X^deg · f(1/X)` for a given `deg ≥ degree`.
    pub fn reverse(&self, deg: usize) -> Self {
        let mut v = vec![Rational::zero(); deg + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            assert!(k <= deg, "reverse degree below polynomial degree");
            v[deg - k] = c.clone();
        }
        Self::new(v)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_integers(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::Invariant(format!("non-integer coefficient {c}")))
                }
            })
            .collect()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", rational_to_string(c))?,
                1 => write!(f, "{}*X", rational_to_string(c))?,
                _ => write!(f, "{}*X^{k}", rational_to_string(c))?,
            }
        }
        Ok(())
    }
}

/// Newton divided differences `c_0 … c_{m−1}` for nodes `xs`, values `ys`.
pub fn divided_differences(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let m = xs.len();
    let mut c = ys.to_vec();
    for j in 1..m {
        for i in (j..m).rev() {
            c[i] = (&c[i] - &c[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    c
}

/// Expand the Newton form `Σ c_j Π_{i<j}(X − x_i)` into monomials.
pub fn newton_to_monomial(xs: &[Rational], c: &[Rational]) -> QPoly {
    let mut acc = QPoly::zero();
    for j in (0..c.len()).rev() {
        acc = acc.mul(&QPoly::new(vec![-xs[j].clone(), Rational::one()])).add(&QPoly::constant(c[j].clone()));
    }
    acc
}

/// The interpolating polynomial of degree `< xs.len()`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> QPoly {
    let c = divided_differences(xs, ys);
    newton_to_monomial(xs, &c)
}

/// Polynomial in `X, Y` stored as coefficients of `Y^j` in `Q[X]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiPoly {
    pub by_y: Vec<QPoly>,
}

impl BiPoly {
    pub fn new(mut by_y: Vec<QPoly>) -> Self {
        while by_y.last().is_some_and(|c| c.is_zero()) {
            by_y.pop();
        }
        BiPoly { by_y }
    }

    pub fn one() -> Self {
        BiPoly { by_y: vec![QPoly::one()] }
    }

    /// `1 − c·X^i·Y`.
    pub fn one_minus(c: Rational, i: usize) -> Self {
        Self::new(vec![QPoly::one(), QPoly::monomial(-c, i)])
    }

    pub fn y_degree(&self) -> usize {
        self.by_y.len().saturating_sub(1)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.by_y.is_empty() || o.by_y.is_empty() {
            return BiPoly { by_y: vec![] };
        }
        let mut v = vec![QPoly::zero(); self.by_y.len() + o.by_y.len() - 1];
        for (i, a) in self.by_y.iter().enumerate() {
            for (j, b) in o.by_y.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v)
    }

    /// Specialize `Y = y`, leaving a polynomial in `X`.
    pub fn at_y(&self, y: &Rational) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.by_y.iter().rev() {
            acc = acc.scale(y).add(c);
        }
        acc
    }

    /// Specialize `X = x`, leaving a polynomial in `Y`.
    pub fn at_x(&self, x: &Rational) -> QPoly {
        QPoly::new(self.by_y.iter().map(|c| c.eval(x)).collect())
    }

    /// `Y^n · f(X, 1/Y)`.
    pub fn reflect(&self, n: usize) -> Self {
        assert!(n >= self.y_degree(), "reflection degree below Y-degree");
        let mut v = vec![QPoly::zero(); n + 1];
        for (j, c) in self.by_y.iter().enumerate() {
            v[n - j] = c.clone();
        }
        Self::new(v)
    }
}
