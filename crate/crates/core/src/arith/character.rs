//! Quadratic characters twisted by powers of the Teichmüller character.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::padic::{teichmuller, PadicInt};
use super::symbols::kronecker_i64;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CharacterSpec {
    Trivial,
    Kronecker { d: i64 },
    TeichmullerPower { p: u64, b: u64 },
    Product { d: i64, p: u64, b: u64 },
}

/// `p* = (−1)^{(p−1)/2} p`, the fundamental discriminant of `Q(√±p)`.
pub fn p_star(p: u64) -> i64 {
    if p % 4 == 1 {
        p as i64
    } else {
        -(p as i64)
    }
}

fn is_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    matches!(
        super::symbols::fundamental_discriminant_decompose(&BigInt::from(d)),
        Ok((ref dd, ref f)) if *dd == BigInt::from(d) && *f == BigInt::from(1)
    )
}

impl CharacterSpec {
    pub fn kronecker(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            return Err(Error::NotDiscriminant(format!("{d} (not fundamental)")));
        }
        Ok(if d == 1 { CharacterSpec::Trivial } else { CharacterSpec::Kronecker { d } })
    }

    pub fn teichmuller_power(p: u64, b: i64) -> Result<Self> {
        Self::product(1, p, b)
    }

    /// `(d/·)·ω^b`, normalized so that `d` is prime to `p`: a factor `p*` of
    /// `d` is moved into the Teichmüller exponent.
    pub fn product(d: i64, p: u64, b: i64) -> Result<Self> {
        if p < 3 || !super::factor::is_prime(p) {
            return Err(Error::OutOfScope(format!("Teichmüller twist needs an odd prime, got {p}")));
        }
        if !is_fundamental(d) {
            return Err(Error::NotDiscriminant(format!("{d} (not fundamental)")));
        }
        let m = (p - 1) as i64;
        let mut b = b.mod_floor(&m) as u64;
        let mut d = d;
        if d % p as i64 == 0 {
            d /= p_star(p);
            b = (b + (p - 1) / 2) % (p - 1);
        }
        Ok(match (d, b) {
            (1, 0) => CharacterSpec::Trivial,
            (d, 0) => CharacterSpec::Kronecker { d },
            (1, b) => CharacterSpec::TeichmullerPower { p, b },
            (d, b) => CharacterSpec::Product { d, p, b },
        })
    }

    /// Quadratic part `d` (1 when absent).
    pub fn quadratic_part(&self) -> i64 {
        match *self {
            CharacterSpec::Kronecker { d } | CharacterSpec::Product { d, .. } => d,
            _ => 1,
        }
    }

    /// Teichmüller data `(p, b)` if present.
    pub fn teich(&self) -> Option<(u64, u64)> {
        match *self {
            CharacterSpec::TeichmullerPower { p, b } | CharacterSpec::Product { p, b, .. } => Some((p, b)),
            _ => None,
        }
    }

    pub fn conductor(&self) -> u64 {
        let d = self.quadratic_part().unsigned_abs();
        match self.teich() {
            Some((p, _)) => d * p,
            None => d,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, CharacterSpec::Trivial)
    }

    /// Value at −1.
    pub fn parity(&self) -> i8 {
        let q = if self.quadratic_part() < 0 { -1 } else { 1 };
        match self.teich() {
            Some((_, b)) if b % 2 == 1 => -q,
            _ => q,
        }
    }

    /// If the character is ±1-valued, the fundamental discriminant it comes from.
    pub fn rational_discriminant(&self) -> Option<i64> {
        let d = self.quadratic_part();
        match self.teich() {
            None => Some(d),
            Some((p, b)) if b == (p - 1) / 2 => Some(d * p_star(p)),
            Some(_) => None,
        }
    }

    /// Value at `n` for a rational-valued character.
    pub fn value_rational(&self, n: i64) -> Option<i8> {
        self.rational_discriminant().map(|d| kronecker_i64(d, n).expect("fundamental discriminant"))
    }

    /// Value at `n` embedded in `Z/p^M` through ω.
    pub fn value_padic(&self, n: &BigInt, p: u64, precision: u32) -> Result<PadicInt> {
        let ni: i64 = n.try_into().map_err(|_| Error::BoundExceeded(format!("character argument {n}")))?;
        let q = kronecker_i64(self.quadratic_part(), ni)?;
        let mut v = PadicInt::new(p, q, precision);
        if let Some((pp, b)) = self.teich() {
            if pp != p {
                return Err(Error::InvalidInput(format!("character lives at {pp}, not {p}")));
            }
            if (n % BigInt::from(p)) == BigInt::from(0) {
                return Ok(PadicInt::zero(p, precision));
            }
            v = v.mul(&teichmuller(n, p, precision)?.pow(b));
        }
        Ok(v)
    }

    /// The primitive character attached to `χ²`.
    pub fn square(&self) -> Self {
        match self.teich() {
            Some((p, b)) => Self::product(1, p, 2 * b as i64).expect("valid prime"),
            None => CharacterSpec::Trivial,
        }
    }

    /// Multiply by a quadratic character `(d/·)`, keeping the result primitive.
    pub fn twist(&self, d: i64) -> Result<Self> {
        let d0 = self.quadratic_part();
        let prod = primitive_product(d0, d)?;
        match self.teich() {
            Some((p, b)) => Self::product(prod, p, b as i64),
            None => Self::kronecker(prod),
        }
    }
}

/// The fundamental discriminant of the primitive character `(d1/·)(d2/·)`.
pub fn primitive_product(d1: i64, d2: i64) -> Result<i64> {
    let (d, _) = super::symbols::fundamental_discriminant_decompose(&(BigInt::from(d1) * d2))?;
    d.try_into().map_err(|_| Error::BoundExceeded("discriminant overflow".into()))
}
