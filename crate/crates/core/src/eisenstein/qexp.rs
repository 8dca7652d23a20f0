//! Formal q-expansions keyed by half-integral matrices, the operator `U_{p,n}`
//! and the two operator routes to the semi-ordinary p-stabilization.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::coeff::{fourier_coeff, stabilized_coeff, EisensteinSpec};
use super::stabilize::stabilization_polys;
use crate::arith::character::CharacterSpec;
use crate::arith::padic::PadicNumber;
use crate::arith::poly::QPoly;
use crate::arith::rational::{int, parse_rational, rational_to_string, Rational};
use crate::error::{Error, Result};
use crate::hecke::q_star;
use crate::quadform::matrix::{enumerate_psd, HalfIntegralMatrix};

/// Descriptor of what an expansion represents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionSpec {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    pub kind: String,
}

impl ExpansionSpec {
    pub fn new(n: usize, kind: &str) -> Self {
        ExpansionSpec { n, kappa: None, p: None, character: None, a: None, kind: kind.into() }
    }

    pub fn weight(mut self, kappa: i64) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn prime(mut self, p: u64) -> Self {
        self.p = Some(p);
        self
    }
}

/// Coefficient types that can travel through the JSON document.
pub trait WireValue: Sized {
    fn to_wire(&self) -> Value;
    fn from_wire(v: &Value) -> Result<Self>;
}

impl WireValue for Rational {
    fn to_wire(&self) -> Value {
        Value::String(rational_to_string(self))
    }
    fn from_wire(v: &Value) -> Result<Self> {
        v.as_str().ok_or_else(|| Error::InvalidInput(format!("expected \"num/den\", got {v}"))).and_then(parse_rational)
    }
}

/// Derives the wire format from serde for structured coefficient types.
macro_rules! serde_wire {
    ($($t:ty),*) => {$(
        impl $crate::eisenstein::qexp::WireValue for $t {
            fn to_wire(&self) -> serde_json::Value {
                serde_json::to_value(self).expect("serializable")
            }
            fn from_wire(v: &serde_json::Value) -> $crate::error::Result<Self> {
                serde_json::from_value(v.clone()).map_err(|e| $crate::error::Error::InvalidInput(e.to_string()))
            }
        }
    )*};
}
pub(crate) use serde_wire;

serde_wire!(PadicNumber);

#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion<C> {
    pub spec: ExpansionSpec,
    /// `Some(b)`: every positive semidefinite `T` with `tr T ≤ b` is present.
    /// `None`: a sparse expansion holding only the listed matrices.
    pub bound: Option<u64>,
    entries: Vec<(HalfIntegralMatrix, C)>,
    index: HashMap<HalfIntegralMatrix, usize>,
}

impl<C> QExpansion<C> {
    pub fn new(spec: ExpansionSpec, bound: Option<u64>) -> Self {
        QExpansion { spec, bound, entries: vec![], index: HashMap::new() }
    }

    pub fn insert(&mut self, t: HalfIntegralMatrix, c: C) {
        match self.index.get(&t) {
            Some(&i) => self.entries[i].1 = c,
            None => {
                self.index.insert(t.clone(), self.entries.len());
                self.entries.push((t, c));
            }
        }
    }

    pub fn get(&self, t: &HalfIntegralMatrix) -> Option<&C> {
        self.index.get(t).map(|&i| &self.entries[i].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HalfIntegralMatrix, &C)> {
        self.entries.iter().map(|(t, c)| (t, c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &HalfIntegralMatrix> {
        self.entries.iter().map(|(t, _)| t)
    }

    pub fn map<D>(&self, mut f: impl FnMut(&HalfIntegralMatrix, &C) -> Result<D>) -> Result<QExpansion<D>> {
        let mut out = QExpansion::new(self.spec.clone(), self.bound);
        for (t, c) in &self.entries {
            out.insert(t.clone(), f(t, c)?);
        }
        Ok(out)
    }

    /// Assemble from precomputed values (the reduce step after a parallel map).
    pub fn from_entries(spec: ExpansionSpec, bound: Option<u64>, entries: Vec<(HalfIntegralMatrix, C)>) -> Self {
        let mut out = QExpansion::new(spec, bound);
        for (t, c) in entries {
            out.insert(t, c);
        }
        out
    }
}

impl<C: WireValue> QExpansion<C> {
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(t, c)| serde_json::json!({"G": t.gram2(), "value": c.to_wire()}))
            .collect();
        serde_json::json!({"spec": self.spec, "bound": self.bound, "entries": entries})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(format!("q-expansion document: {m}"));
        let spec: ExpansionSpec =
            serde_json::from_value(v.get("spec").cloned().ok_or_else(|| bad("missing spec"))?).map_err(|e| bad(&e.to_string()))?;
        let bound = match v.get("bound") {
            None | Some(Value::Null) => None,
            Some(b) => Some(b.as_u64().ok_or_else(|| bad("bound"))?),
        };
        let mut out = QExpansion::new(spec, bound);
        for e in v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing entries"))? {
            let g: Vec<Vec<i64>> =
                serde_json::from_value(e.get("G").cloned().ok_or_else(|| bad("entry without G"))?).map_err(|e| bad(&e.to_string()))?;
            let c = C::from_wire(e.get("value").ok_or_else(|| bad("entry without value"))?)?;
            out.insert(HalfIntegralMatrix::new(g)?, c);
        }
        Ok(out)
    }
}

fn complete_keys(n: usize, trace_bound: u64) -> Result<Vec<HalfIntegralMatrix>> {
    enumerate_psd(n, trace_bound as i64)
}

/// `E_κ^{(n)}` on every `T` with `tr T ≤ trace_bound`.
pub fn eisenstein_expansion(n: usize, kappa: i64, trace_bound: u64) -> Result<QExpansion<Rational>> {
    let spec = EisensteinSpec::level_one(n, kappa)?;
    let mut out = QExpansion::new(ExpansionSpec::new(n, "eisenstein").weight(kappa), Some(trace_bound));
    for t in complete_keys(n, trace_bound)? {
        let c = fourier_coeff(&spec, &t)?;
        out.insert(t, c);
    }
    Ok(out)
}

/// `E_κ^{(n)}` on an explicit list of matrices.
pub fn eisenstein_expansion_at(n: usize, kappa: i64, keys: &[HalfIntegralMatrix]) -> Result<QExpansion<Rational>> {
    let spec = EisensteinSpec::level_one(n, kappa)?;
    let mut out = QExpansion::new(ExpansionSpec::new(n, "eisenstein").weight(kappa), None);
    for t in keys {
        out.insert(t.clone(), fourier_coeff(&spec, t)?);
    }
    Ok(out)
}

/// `(E_κ^{(n)})^*` from the closed formula.
pub fn stabilized_expansion(n: usize, kappa: i64, p: u64, trace_bound: u64) -> Result<QExpansion<Rational>> {
    let mut out = QExpansion::new(ExpansionSpec::new(n, "stabilized").weight(kappa).prime(p), Some(trace_bound));
    for t in complete_keys(n, trace_bound)? {
        let c = stabilized_coeff(n, kappa, p, &t)?;
        out.insert(t, c);
    }
    Ok(out)
}

/// The source keys `p^j T`, `0 ≤ j ≤ depth`, needed to stabilize at `targets`.
pub fn operator_source_keys(targets: &[HalfIntegralMatrix], p: u64, depth: usize) -> Vec<HalfIntegralMatrix> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for t in targets {
        let mut m = t.clone();
        for _ in 0..=depth {
            if seen.insert(m.clone()) {
                out.push(m.clone());
            }
            m = m.scale(p as i64);
        }
    }
    out
}

/// `A_T ↦ A_{pT}`.
pub fn u_pn_apply<C: Clone>(f: &QExpansion<C>, p: u64) -> Result<QExpansion<C>> {
    let mut spec = f.spec.clone();
    spec.kind = format!("{}|U_{p}", spec.kind);
    match f.bound {
        Some(b) => {
            let nb = b / p;
            let mut out = QExpansion::new(spec, Some(nb));
            for t in f.keys().filter(|t| t.trace() as u64 <= nb) {
                let pt = t.scale(p as i64);
                let c = f.get(&pt).ok_or_else(|| {
                    Error::InsufficientIndexBound(format!("{pt} missing from an expansion claiming bound {b}"))
                })?;
                out.insert(t.clone(), c.clone());
            }
            Ok(out)
        }
        None => {
            let mut out = QExpansion::new(spec, None);
            for t in f.keys() {
                if let Some(c) = f.get(&t.scale(p as i64)) {
                    out.insert(t.clone(), c.clone());
                }
            }
            Ok(out)
        }
    }
}

/// `Σ_j c_j U^j f` restricted to the keys surviving `U^{deg}`.
fn apply_polynomial(f: &QExpansion<Rational>, p: u64, poly: &QPoly, scale: &Rational, kind: &str) -> Result<QExpansion<Rational>> {
    let deg = poly.degree().unwrap_or(0);
    let mut powers = vec![f.clone()];
    for _ in 0..deg {
        let next = u_pn_apply(powers.last().expect("nonempty"), p)?;
        powers.push(next);
    }
    let top = &powers[deg];
    let mut spec = f.spec.clone();
    spec.kind = kind.into();
    spec.p = Some(p);
    let mut out = QExpansion::new(spec, top.bound);
    for t in top.keys() {
        let mut acc = Rational::from_integer(0.into());
        for (j, fj) in powers.iter().enumerate() {
            let c = poly.coeff(j);
            if c != Rational::from_integer(0.into()) {
                let v = fj.get(t).ok_or_else(|| Error::InsufficientIndexBound(format!("U^{j} at {t}")))?;
                acc += c * v;
            }
        }
        out.insert(t.clone(), acc * scale);
    }
    Ok(out)
}

fn stabilization_input(f: &QExpansion<Rational>, n: usize, kappa: i64, p: u64) -> Result<()> {
    if f.spec.n != n || f.spec.kappa.is_some_and(|k| k != kappa) {
        return Err(Error::InvalidInput("source expansion does not match (n, κ)".into()));
    }
    if p == 2 {
        return Err(Error::OutOfScope("p-stabilization needs an odd prime".into()));
    }
    Ok(())
}

/// `𝓟(x,1)/𝓡(x,1) · 𝓡̃(x, U_{p,n})` at `x = p^{κ−n−1}`.
pub fn stabilize_via_operator(n: usize, kappa: i64, p: u64, f: &QExpansion<Rational>) -> Result<QExpansion<Rational>> {
    stabilization_input(f, n, kappa, p)?;
    let polys = stabilization_polys(n, p);
    let x = int(p as i64).pow((kappa - n as i64 - 1) as i32);
    let one = Rational::from_integer(1.into());
    let scale = polys.p_poly.at_x(&x).eval(&one) / polys.r_poly.at_x(&x).eval(&one);
    apply_polynomial(f, p, &polys.r_tilde.at_x(&x), &scale, "stabilized (R-operator)")
}

/// `𝓟(x,1)/Q^*(1) · Q̃^*(U_{p,n})` with `Q̃^*(Y) = Y^{2^n−2+δ_{n,1}} Q^*(1/Y)`.
pub fn stabilize_via_q_star(n: usize, kappa: i64, p: u64, f: &QExpansion<Rational>) -> Result<QExpansion<Rational>> {
    stabilization_input(f, n, kappa, p)?;
    let qs = q_star(n, kappa, p)?.poly();
    let deg = (1usize << n) - 2 + usize::from(n == 1);
    let tilde = qs.reverse(deg);
    let x = int(p as i64).pow((kappa - n as i64 - 1) as i32);
    let one = Rational::from_integer(1.into());
    let scale = stabilization_polys(n, p).p_poly.at_x(&x).eval(&one) / qs.eval(&one);
    apply_polynomial(f, p, &tilde, &scale, "stabilized (Q*-operator)")
}

/// Degree of `Q̃^*`, i.e. how many times the `Q^*` route applies `U_{p,n}`.
pub fn q_star_depth(n: usize) -> usize {
    (1usize << n) - 2 + usize::from(n == 1)
}
