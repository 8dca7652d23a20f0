//! Satake parameters of `E_κ^{(n)}` and its spinor Hecke polynomial.

use serde::{Deserialize, Serialize};

use crate::arith::factor::is_prime;
use crate::arith::poly::QPoly;
use crate::arith::rational::{int, Rational};
use crate::eisenstein::stabilize::stabilization_polys;
use crate::error::{Error, Result};

/// `ψ_{l,i} = l^{psi[i]}`; exponents are stored, values derived on demand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatakeParams {
    pub n: usize,
    pub kappa: i64,
    pub l: u64,
    pub psi: Vec<i64>,
}

impl SatakeParams {
    pub fn values(&self) -> Vec<Rational> {
        self.psi.iter().map(|&e| int(self.l as i64).pow(e as i32)).collect()
    }

    /// `ψ_0² Π ψ_i = l^{nκ − n(n+1)/2}`.
    pub fn similitude_holds(&self) -> bool {
        let n = self.n as i64;
        let lhs = 2 * self.psi[0] + self.psi[1..].iter().sum::<i64>();
        let vals = self.values();
        let by_value = vals[0].clone() * &vals[0] * vals[1..].iter().product::<Rational>();
        let target = n * self.kappa - n * (n + 1) / 2;
        lhs == target && by_value == int(self.l as i64).pow(target as i32)
    }
}

fn check(n: usize, kappa: i64, l: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("genus must be at least 1".into()));
    }
    if kappa <= n as i64 + 1 {
        return Err(Error::InvalidInput(format!("weight {kappa} must exceed n + 1 = {}", n + 1)));
    }
    if !is_prime(l) {
        return Err(Error::InvalidInput(format!("{l} is not prime")));
    }
    Ok(())
}

fn exponents(n: usize, kappa: i64) -> Vec<i64> {
    if n == 1 {
        return vec![0, kappa - 1];
    }
    if n % 2 == 1 {
        let mut e = exponents(n - 1, kappa);
        e.push(kappa - n as i64);
        return e;
    }
    let h = (n / 2) as i64;
    let n = n as i64;
    let mut e = vec![h * (kappa - h) - h * (h + 1) / 2];
    e.extend((1..=h).map(|i| -kappa + h + i));
    e.extend((h + 1..=n).map(|i| kappa - n + i - 1));
    e
}

pub fn satake_params(n: usize, kappa: i64, l: u64) -> Result<SatakeParams> {
    check(n, kappa, l)?;
    Ok(SatakeParams { n, kappa, l, psi: exponents(n, kappa) })
}

/// A polynomial `Π (1 − l^{e} Y)` kept both expanded and factored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckePolynomial {
    pub l: u64,
    /// The exponents `e`, sorted.
    pub root_exponents: Vec<i64>,
    #[serde(with = "crate::arith::rational::serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl HeckePolynomial {
    fn from_exponents(l: u64, mut es: Vec<i64>) -> Self {
        es.sort_unstable();
        let poly = es.iter().fold(QPoly::one(), |acc, &e| acc.mul(&one_minus(l, e)));
        HeckePolynomial { l, root_exponents: es, coeffs: poly.coeffs }
    }

    pub fn poly(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

fn one_minus(l: u64, e: i64) -> QPoly {
    QPoly::new(vec![Rational::from_integer(1.into()), -int(l as i64).pow(e as i32)])
}

/// `(1 − ψ_0 Y) Π_{∅ ≠ S ⊆ {1..n}} (1 − ψ_0 Π_{i∈S} ψ_i Y)`.
pub fn hecke_polynomial(params: &SatakeParams) -> HeckePolynomial {
    let n = params.n;
    let es = (0u32..1 << n)
        .map(|mask| params.psi[0] + (0..n).filter(|i| mask >> i & 1 == 1).map(|i| params.psi[i + 1]).sum::<i64>())
        .collect();
    HeckePolynomial::from_exponents(params.l, es)
}

/// The exponent `h(κ−h) − h(h+1)/2`, `h = ⌊n/2⌋`, of the second removed factor.
fn removed_exponent(n: usize, kappa: i64) -> i64 {
    let h = (n / 2) as i64;
    h * (kappa - h) - h * (h + 1) / 2
}

/// `Q_p` with the factor `1 − Y` removed (and for `n > 1` also `1 − p^{e} Y`).
pub fn q_star(n: usize, kappa: i64, p: u64) -> Result<HeckePolynomial> {
    let q = hecke_polynomial(&satake_params(n, kappa, p)?);
    let mut divisor = one_minus(p, 0);
    let mut removed = vec![0];
    if n > 1 {
        let e = removed_exponent(n, kappa);
        divisor = divisor.mul(&one_minus(p, e));
        removed.push(e);
    }
    let quotient = q.poly().div_exact(&divisor).map_err(|_| {
        Error::InexactDivision(format!("Q_p for n = {n}, κ = {kappa}, p = {p} is not divisible by {divisor}"))
    })?;
    let mut es = q.root_exponents.clone();
    for e in removed {
        let pos = es.iter().position(|&x| x == e).ok_or_else(|| Error::Invariant(format!("no factor 1 − p^{e} Y")))?;
        es.remove(pos);
    }
    let out = HeckePolynomial::from_exponents(p, es);
    if out.poly() != quotient {
        return Err(Error::Invariant("factored and expanded quotients disagree".into()));
    }
    Ok(out)
}

/// `𝓡_p^{(n)}(p^{κ−n−1}, Y)`.
pub fn r_at_weight(n: usize, kappa: i64, p: u64) -> QPoly {
    let x = int(p as i64).pow((kappa - n as i64 - 1) as i32);
    stabilization_polys(n, p).r_poly.at_x(&x)
}

/// Quotient of `Q_p^*` by `𝓡_p^{(n)}(p^{κ−n−1}, Y)`, if exact.
pub fn divisibility_quotient(n: usize, kappa: i64, p: u64) -> Result<Option<QPoly>> {
    check(n, kappa, p)?;
    let (q, r) = q_star(n, kappa, p)?.poly().divrem(&r_at_weight(n, kappa, p))?;
    Ok(r.is_zero().then_some(q))
}

pub fn divisibility_check(n: usize, kappa: i64, p: u64) -> Result<bool> {
    Ok(divisibility_quotient(n, kappa, p)?.is_some())
}

/// For odd `n`: `Q^{(n)}(Y) = Q^{(n−1)}(Y)·Q^{(n−1)}(l^{κ−n} Y)` with both sides at weight `κ`.
pub fn zharkovskaya_check(n: usize, kappa: i64, l: u64) -> Result<bool> {
    check(n, kappa, l)?;
    if n % 2 == 0 {
        return Err(Error::InvalidInput("the factor identity concerns odd genus".into()));
    }
    let full = hecke_polynomial(&satake_params(n, kappa, l)?).poly();
    let lower = if n == 1 {
        one_minus(l, 0)
    } else {
        hecke_polynomial(&SatakeParams { n: n - 1, kappa, l, psi: exponents(n - 1, kappa) }).poly()
    };
    let shifted = lower.scale_var(&int(l as i64).pow((kappa - n as i64) as i32));
    Ok(full == lower.mul(&shifted))
}

/// Peels factors `1 − l^e Y` (`0 ≤ e ≤ max_e`) off `f` by exact division; true if
/// nothing but a constant 1 remains.
pub fn splits_over_powers(f: &QPoly, l: u64, max_e: i64) -> bool {
    let mut rest = f.clone();
    'outer: while rest.degree().unwrap_or(0) > 0 {
        for e in 0..=max_e {
            if let Ok(q) = rest.div_exact(&one_minus(l, e)) {
                rest = q;
                continue 'outer;
            }
        }
        return false;
    }
    rest == QPoly::one()
}
