//! Closed formulas for the Fourier coefficients of `E_κ^{(n)}`, its semi-ordinary
//! p-stabilization and its Nebentypus twists.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::bernoulli::{dirichlet_l_neg, Coefficient};
use crate::arith::character::CharacterSpec;
use crate::arith::factor::prime_divisors;
use crate::arith::padic::PadicNumber;
use crate::arith::rational::{int, Rational};
use crate::arith::symbols::fundamental_discriminant_decompose;
use crate::error::{Error, Result};
use crate::quadform::fpoly::f_poly;
use crate::quadform::invariants::signed_disc;
use crate::quadform::matrix::{block_decompose, HalfIntegralMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EisensteinSpec {
    pub n: usize,
    pub kappa: i64,
    pub character: CharacterSpec,
}

impl EisensteinSpec {
    pub fn new(n: usize, kappa: i64, character: CharacterSpec) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("genus must be at least 1".into()));
        }
        if kappa <= n as i64 + 1 {
            return Err(Error::InvalidInput(format!("weight {kappa} must exceed n + 1 = {}", n + 1)));
        }
        match character {
            CharacterSpec::Trivial | CharacterSpec::TeichmullerPower { .. } => {}
            _ => {
                return Err(Error::OutOfScope(format!(
                    "Nebentypus must be trivial or a Teichmüller power, got {character:?}"
                )))
            }
        }
        let want = if kappa % 2 == 0 { 1 } else { -1 };
        if character.parity() != want {
            return Err(Error::InvalidInput(format!("χ(−1) = {} but (−1)^κ = {want}", character.parity())));
        }
        Ok(EisensteinSpec { n, kappa, character })
    }

    pub fn level_one(n: usize, kappa: i64) -> Result<Self> {
        Self::new(n, kappa, CharacterSpec::Trivial)
    }

    pub fn level(&self) -> u64 {
        self.character.conductor()
    }
}

/// Everything about `T` that the coefficient formulas need, independent of the
/// weight and the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffShape {
    pub n: usize,
    pub r: usize,
    pub t_red: HalfIntegralMatrix,
    /// `⌊(r+1)/2⌋ − ⌊(n+1)/2⌋`
    pub two_exp: i64,
    /// The indices `i` of the `ζ(1−2κ+2i)` factors.
    pub zeta_range: std::ops::RangeInclusive<usize>,
    /// `𝔡_{T'}` for even rank, `None` for odd rank.
    pub fund_disc: Option<i64>,
    /// Primes dividing `𝔣_{T'}` (even rank) or `𝔇_{T'}` (odd rank).
    pub local_primes: Vec<u64>,
}

pub fn shape(n: usize, t: &HalfIntegralMatrix) -> Result<CoeffShape> {
    if t.degree() != n {
        return Err(Error::InvalidInput(format!("matrix of degree {} for genus {n}", t.degree())));
    }
    let (_, t_red) = block_decompose(t)?;
    let r = t_red.degree();
    let two_exp = ((r + 1) / 2) as i64 - ((n + 1) / 2) as i64;
    let (fund_disc, local_primes) = if r == 0 {
        (Some(1), vec![])
    } else if r % 2 == 0 {
        let (d, f) = fundamental_discriminant_decompose(&signed_disc(&t_red))?;
        let d: i64 = (&d).try_into().map_err(|_| Error::BoundExceeded("discriminant exceeds 64 bits".into()))?;
        (Some(d), prime_divisors(&f)?)
    } else {
        (None, prime_divisors(&t_red.disc())?)
    };
    Ok(CoeffShape { n, r, t_red, two_exp, zeta_range: r / 2 + 1..=n / 2, fund_disc, local_primes })
}

fn two_pow(e: i64) -> Rational {
    int(2).pow(e as i32)
}

fn rational(c: Coefficient) -> Rational {
    c.as_rational().cloned().expect("rational-valued L-value")
}

/// Rational-coefficient engine shared by the level-one formula and its p-stabilized form.
fn rational_coeff(kappa: i64, sh: &CoeffShape, remove_p: Option<u64>) -> Result<Rational> {
    let mut acc = two_pow(sh.two_exp);
    for i in sh.zeta_range.clone() {
        let k = (2 * kappa - 2 * i as i64) as usize;
        acc *= rational(dirichlet_l_neg(k, &CharacterSpec::Trivial, remove_p, 0)?);
    }
    if let Some(d) = sh.fund_disc {
        let k = (kappa - sh.r as i64 / 2) as usize;
        acc *= rational(dirichlet_l_neg(k, &CharacterSpec::kronecker(d)?, remove_p, 0)?);
    }
    if acc.is_zero() {
        return Ok(acc);
    }
    let e = kappa - sh.r as i64 - 1;
    for &l in &sh.local_primes {
        if Some(l) == remove_p {
            continue;
        }
        let x = int(l as i64).pow(e as i32);
        acc *= f_poly(&sh.t_red, l)?.eval(&x);
    }
    Ok(acc)
}

/// `2^{−⌊(n+1)/2⌋} L(1−κ, χ) Π_{i=1}^{⌊n/2⌋} L(1−2κ+2i, χ²)`.
pub fn constant_term(spec: &EisensteinSpec, precision: u32) -> Result<Coefficient> {
    let n = spec.n;
    let chi = &spec.character;
    let mut acc = dirichlet_l_neg(spec.kappa as usize, chi, None, precision + 4)?;
    acc = acc.mul_rational(&two_pow(-(((n + 1) / 2) as i64)));
    let chi2 = chi.square();
    for i in 1..=n / 2 {
        let k = (2 * spec.kappa - 2 * i as i64) as usize;
        acc = mul_coeff(&acc, &dirichlet_l_neg(k, &chi2, None, precision + 4)?);
    }
    Ok(acc)
}

fn mul_coeff(a: &Coefficient, b: &Coefficient) -> Coefficient {
    match (a, b) {
        (Coefficient::Rational(x), Coefficient::Rational(y)) => Coefficient::Rational(x * y),
        (Coefficient::Padic(x), Coefficient::Rational(y)) | (Coefficient::Rational(y), Coefficient::Padic(x)) => {
            Coefficient::Padic(x.mul_rational(y))
        }
        (Coefficient::Padic(x), Coefficient::Padic(y)) => Coefficient::Padic(x.mul(y)),
    }
}

/// `A_T(E_κ^{(n)})` at level one.
pub fn fourier_coeff(spec: &EisensteinSpec, t: &HalfIntegralMatrix) -> Result<Rational> {
    if !spec.character.is_trivial() {
        return Err(Error::InvalidInput("fourier_coeff is the level-one formula; use fourier_coeff_chi".into()));
    }
    rational_coeff(spec.kappa, &shape(spec.n, t)?, None)
}

fn check_stabilization_input(n: usize, kappa: i64, p: u64) -> Result<()> {
    if p == 2 || !crate::arith::factor::is_prime(p) {
        return Err(Error::OutOfScope(format!("p-stabilization needs an odd prime, got {p}")));
    }
    if kappa % 2 != 0 || kappa <= n as i64 + 1 {
        return Err(Error::InvalidInput(format!("weight {kappa} must be even and exceed {}", n + 1)));
    }
    Ok(())
}

/// `A_T((E_κ^{(n)})^*)`: the level-one formula with every Euler factor and local polynomial at `p` removed.
pub fn stabilized_coeff(n: usize, kappa: i64, p: u64, t: &HalfIntegralMatrix) -> Result<Rational> {
    check_stabilization_input(n, kappa, p)?;
    rational_coeff(kappa, &shape(n, t)?, Some(p))
}

/// Horner evaluation of an integer polynomial at a p-adic point.
pub fn eval_padic(coeffs: &[BigInt], x: &PadicNumber, abs_prec: i64) -> PadicNumber {
    let p = x.p();
    let mut acc = PadicNumber::exact_zero(p);
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(&PadicNumber::from_rational(&Rational::from_integer(c.clone()), p, abs_prec));
    }
    acc
}

/// `A_T(E_κ^{(n)}(χ))` for `χ = ω^b` of conductor `p`, known modulo `p^precision`.
pub fn fourier_coeff_chi(spec: &EisensteinSpec, t: &HalfIntegralMatrix, precision: u32) -> Result<PadicNumber> {
    let chi = &spec.character;
    let Some((p, _)) = chi.teich() else {
        return Err(Error::InvalidInput("fourier_coeff_chi needs a Teichmüller-power character".into()));
    };
    let chi2 = chi.square();
    if chi2.is_trivial() {
        return Err(Error::ExcludedCharacter("χ² is trivial".into()));
    }
    let sh = shape(spec.n, t)?;
    let kappa = spec.kappa;
    let w = precision + 8;
    let abs = w as i64;
    let lift = |c: Coefficient| c.to_padic(p, abs);
    let mut acc = PadicNumber::from_rational(&two_pow(sh.two_exp), p, abs);
    for i in sh.zeta_range.clone() {
        let k = (2 * kappa - 2 * i as i64) as usize;
        acc = acc.mul(&lift(dirichlet_l_neg(k, &chi2, Some(p), w)?));
    }
    if let Some(d) = sh.fund_disc {
        let k = (kappa - sh.r as i64 / 2) as usize;
        acc = acc.mul(&lift(dirichlet_l_neg(k, &chi.twist(d)?, Some(p), w)?));
    }
    let e = (kappa - sh.r as i64 - 1) as u32;
    for &l in &sh.local_primes {
        if l == p {
            continue;
        }
        let chil = chi.value_padic(&BigInt::from(l), p, w)?;
        let x = PadicNumber::from_padic_int(&chil).mul_rational(&int(BigInt::from(l).pow(e)));
        acc = acc.mul(&eval_padic(&f_poly(&sh.t_red, l)?.coeffs, &x, abs));
    }
    if acc.abs_prec() < precision as i64 {
        return Err(Error::PadicDomain(format!(
            "coefficient known only modulo p^{} (asked for {precision})",
            acc.abs_prec()
        )));
    }
    Ok(acc)
}
