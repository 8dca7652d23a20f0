//! Kubota–Leopoldt branch series reconstructed by exact interpolation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::element::LambdaElement;
use crate::arith::bernoulli::dirichlet_l_neg;
use crate::arith::character::CharacterSpec;
use crate::arith::padic::PadicInt;
use crate::arith::poly::{divided_differences, newton_to_monomial};
use crate::arith::rational::{int, Rational};
use crate::error::{Error, Result};

/// Tunables for branch construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LambdaConfig {
    /// p-adic storage precision `M`.
    pub m: u32,
    /// X-adic precision `N`.
    pub n: usize,
    /// Extra interpolation nodes beyond `N`.
    pub guard: usize,
    /// Held-out weights used for certification.
    pub held_out: usize,
}

impl Default for LambdaConfig {
    fn default() -> Self {
        LambdaConfig { m: 12, n: 8, guard: 4, held_out: 2 }
    }
}

impl LambdaConfig {
    pub fn new(m: u32, n: usize) -> Self {
        LambdaConfig { m, n, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeldOutCheck {
    pub k: i64,
    /// Valuation of (series value − exact value), capped at the certificate.
    pub agreement: i64,
}

/// `Φ(ξω^b; X)` with `Ψ = Φ/X` on the trivial branch and `Ψ = Φ` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSeries {
    /// Fundamental discriminant of `ξ`, prime to `p`.
    pub xi: i64,
    pub b: u64,
    pub p: u64,
    pub phi: LambdaElement,
    pub trivial_branch: bool,
    /// Odd `ξω^b`: every interpolated value vanishes.
    pub vanishing: bool,
    pub nodes: Vec<i64>,
    pub held_out: Vec<HeldOutCheck>,
}

/// Rewrite `(ξ, b)` so that `ξ` is prime to `p` (a factor `p*` becomes `ω^{(p−1)/2}`).
pub fn normalize_branch(xi: i64, b: i64, p: u64) -> Result<(i64, u64)> {
    let c = CharacterSpec::product(xi, p, b)?;
    Ok((c.quadratic_part(), c.teich().map_or(0, |(_, b)| b)))
}

/// Smallest `k ≥ 2` with `k ≡ b (mod p−1)`.
pub fn first_node(b: u64, p: u64) -> i64 {
    let mut k = b as i64;
    while k < 2 {
        k += p as i64 - 1;
    }
    k
}

/// `L^{p}(1−k, ξω^{b−k})` for `k ≡ b (mod p−1)`, where the character is just `ξ`.
pub fn exact_value(xi: i64, p: u64, k: i64) -> Result<Rational> {
    let chi = CharacterSpec::kronecker(xi)?;
    let v = dirichlet_l_neg(k as usize, &chi, Some(p), 0)?;
    Ok(v.as_rational().cloned().expect("quadratic characters give rational L-values"))
}

fn node_point(p: u64, k: i64) -> Rational {
    int(1 + p as i64).pow(k as i32) - int(1)
}

/// `Φ((1+p)^k − 1)` from the exact L-value.
pub fn phi_target(xi: i64, p: u64, k: i64, trivial: bool) -> Result<Rational> {
    let v = exact_value(xi, p, k)?;
    Ok(if trivial { v * node_point(p, k) } else { v })
}

pub fn build_branch(xi: i64, b: i64, p: u64, cfg: LambdaConfig) -> Result<BranchSeries> {
    if p == 2 || !crate::arith::factor::is_prime(p) {
        return Err(Error::OutOfScope(format!("Λ-adic branches need an odd prime, got {p}")));
    }
    let (xi, b) = normalize_branch(xi, b, p)?;
    let parity = if xi < 0 { -1 } else { 1 } * if b % 2 == 1 { -1 } else { 1 };
    let trivial = xi == 1 && b == 0;
    let k0 = first_node(b, p);
    let step = p as i64 - 1;
    let total = cfg.n + cfg.guard;
    let nodes: Vec<i64> = (0..total as i64).map(|j| k0 + step * j).collect();
    if parity == -1 {
        return Ok(BranchSeries {
            xi,
            b,
            p,
            phi: LambdaElement::zero(p, cfg.m, cfg.n),
            trivial_branch: false,
            vanishing: true,
            nodes,
            held_out: vec![],
        });
    }
    let xs: Vec<Rational> = nodes.iter().map(|&k| node_point(p, k)).collect();
    let ys: Vec<Rational> = nodes.iter().map(|&k| phi_target(xi, p, k, trivial)).collect::<Result<_>>()?;
    let poly = newton_to_monomial(&xs, &divided_differences(&xs, &ys));
    let phi = LambdaElement::from_poly(&poly, p, cfg.m, cfg.n).map_err(|e| match e {
        Error::DenominatorNotCleared(m) => Error::PDividesDenominator(m),
        e => e,
    })?;
    let mut held_out = Vec::new();
    for j in 0..cfg.held_out.max(2) {
        let k = k0 + step * (total + j) as i64;
        let x = PadicInt::from_rational(&node_point(p, k), p, cfg.m + 4)?;
        let got = phi.eval(&x)?;
        let agreement = got.agreement(&phi_target(xi, p, k, trivial)?);
        if agreement < phi.m_eff as i64 {
            return Err(Error::CertificationFailed(format!(
                "branch (ξ = {xi}, b = {b}, p = {p}) misses the held-out weight {k}: agreement {agreement} < {}",
                phi.m_eff
            )));
        }
        held_out.push(HeldOutCheck { k, agreement });
    }
    Ok(BranchSeries { xi, b, p, phi, trivial_branch: trivial, vanishing: false, nodes, held_out })
}

type BranchKey = (i64, u64, u64, LambdaConfig);

fn cache() -> &'static Mutex<HashMap<BranchKey, Arc<BranchSeries>>> {
    static C: OnceLock<Mutex<HashMap<BranchKey, Arc<BranchSeries>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared, certified branch.
pub fn branch(xi: i64, b: i64, p: u64, cfg: LambdaConfig) -> Result<Arc<BranchSeries>> {
    let (nxi, nb) = normalize_branch(xi, b, p)?;
    let key = (nxi, nb, p, cfg);
    if let Some(s) = cache().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(s.clone());
    }
    let s = Arc::new(build_branch(nxi, nb as i64, p, cfg)?);
    cache().lock().unwrap_or_else(|e| e.into_inner()).insert(key, s.clone());
    Ok(s)
}

impl BranchSeries {
    /// `Ψ((1+p)^k − 1)` by evaluating the series; for the trivial branch the
    /// division by `X` costs `v((1+p)^k − 1)` digits.
    pub fn psi_at(&self, k: i64, prec: u32) -> Result<crate::arith::padic::PadicNumber> {
        let xr = node_point(self.p, k);
        let x = PadicInt::from_rational(&xr, self.p, prec)?;
        let v = self.phi.eval(&x)?;
        if self.trivial_branch {
            Ok(v.mul_rational(&xr.recip()))
        } else {
            Ok(v)
        }
    }

    /// `L^{p}(1−k, ξω^{b−k})` computed independently of the series (p-adic
    /// generalized Bernoulli numbers), for any `k ≥ 2`.
    pub fn direct_value(&self, k: i64, prec: u32) -> Result<crate::arith::padic::PadicNumber> {
        let chi = CharacterSpec::product(self.xi, self.p, self.b as i64 - k)?;
        Ok(dirichlet_l_neg(k as usize, &chi, Some(self.p), prec + 4)?.to_padic(self.p, prec as i64 + 4))
    }
}
