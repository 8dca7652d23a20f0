//! Verification suites behind `siegel verify`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use siegel_core::arith::character::CharacterSpec;
use siegel_core::arith::padic::{PadicInt, PadicNumber};
use siegel_core::arith::rational::int;
use siegel_core::eisenstein::{fourier_coeff_chi, stabilized_coeff, EisensteinSpec};
use siegel_core::hecke::{divisibility_check, hecke_polynomial, satake_params, splits_over_powers, zharkovskaya_check};
use siegel_core::lambda::family::b_at_weight;
use siegel_core::lambda::{a_t_lambda, b_poly, branch, lambda_eisenstein, LambdaConfig};
use siegel_core::quadform::fpoly::expected_degree;
use siegel_core::quadform::{
    enumerate_psd, f_poly_closed, f_poly_oracle, functional_equation_check, invariants_of, katsurada_recursion_check,
    s_poly_closed, s_poly_sum, HalfIntegralMatrix,
};

use crate::commands::{lambda_config, pretty, Outcome, Res};
use crate::render::table;
use crate::{Common, Failure, Format, Suite};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Checks = Vec<Check>;

fn check(suite: &'static str, name: impl Into<String>, result: siegel_core::Result<(bool, String)>) -> Check {
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { suite, name: name.into(), passed, detail }
}

/// Runs `f` on every case in parallel; the detail names the first failure.
fn sweep<T: Sync + std::fmt::Display>(
    cases: &[T],
    f: impl Fn(&T) -> siegel_core::Result<bool> + Sync,
) -> siegel_core::Result<(bool, String)> {
    let results: Vec<siegel_core::Result<bool>> = cases.par_iter().map(&f).collect();
    for (c, r) in cases.iter().zip(&results) {
        match r {
            Ok(true) => {}
            Ok(false) => return Ok((false, format!("fails at {c}"))),
            Err(e) => return Ok((false, format!("error at {c}: {e}"))),
        }
    }
    Ok((true, format!("{} cases", cases.len())))
}

struct Case<T>(T, String);

impl<T> std::fmt::Display for Case<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

fn m(s: &str) -> HalfIntegralMatrix {
    HalfIntegralMatrix::parse(s).expect("literal matrix")
}

fn binary_forms(max: i64) -> Vec<HalfIntegralMatrix> {
    let mut out = Vec::new();
    for a in 1..=max {
        for c in a..=max {
            for b in -a..=a {
                let t = HalfIntegralMatrix::new(vec![vec![2 * a, b], vec![b, 2 * c]]).expect("symmetric");
                if t.is_nondegenerate() {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn local() -> Checks {
    const S: &str = "local";
    let mut out = Vec::new();
    let mut cases = Vec::new();
    for t in binary_forms(6).into_iter().chain((1..=40).map(|x| HalfIntegralMatrix::diag(&[x]))) {
        for l in [2u64, 3, 5] {
            if invariants_of(&t, l).map(|i| i.v_disc <= 3).unwrap_or(false) {
                cases.push(Case((t.clone(), l), format!("{t} at l = {l}")));
            }
        }
    }
    out.push(check(S, "oracle equals closed form (rank ≤ 2, v_l(𝔇) ≤ 3)", sweep(&cases, |c| {
        let (t, l) = &c.0;
        Ok(f_poly_closed(t, *l)?.coeffs == f_poly_oracle(t, *l)?.coeffs)
    })));
    out.push(check(S, "functional equation", sweep(&cases, |c| Ok(functional_equation_check(&c.0 .0, c.0 .1)?.holds))));
    out.push(check(S, "degree law", sweep(&cases, |c| {
        let (t, l) = &c.0;
        Ok(f_poly_closed(t, *l)?.coeffs.len() - 1 == expected_degree(t, *l)?)
    })));
    let ids: Vec<Case<(HalfIntegralMatrix, u64)>> = [
        ("2,1;1,2", 5u64),
        ("2,1;1,4", 3),
        ("2,1,0;1,2,0;0,0,2", 3),
        ("2,0,0;0,2,0;0,0,2", 3),
        ("2,1,1;1,2,1;1,1,2", 5),
        ("2,0,0;0,2,0;0,0,6", 5),
        ("2,1,0;1,2,0;0,0,6", 5),
    ]
    .iter()
    .map(|(g, p)| Case((m(g), *p), format!("{g} at p = {p}")))
    .collect();
    out.push(check(S, "sum identity equals closed form", sweep(&ids, |c| {
        Ok(s_poly_sum(&c.0 .0, c.0 .1)? == s_poly_closed(&c.0 .0, c.0 .1)?)
    })));
    let rec: Vec<Case<(&str, &str, u64)>> = [("2,1;1,2", "2", 3u64), ("2,1;1,2", "2", 5), ("2,1;1,2", "2,1;1,2", 3)]
        .into_iter()
        .map(|c| Case(c, format!("{} ⊕ {} at p = {}", c.0, c.1, c.2)))
        .collect();
    out.push(check(S, "Katsurada recursion (r = 3, 4)", sweep(&rec, |c| {
        Ok(katsurada_recursion_check(&m(c.0 .0), &m(c.0 .1), c.0 .2)?.holds)
    })));
    out
}

fn stab() -> Checks {
    const S: &str = "stab";
    let mut cases = Vec::new();
    for n in [1usize, 2] {
        for p in [5u64, 7] {
            for kappa in [6i64, 8] {
                cases.push(Case((n, p, kappa), format!("n = {n}, p = {p}, κ = {kappa}")));
            }
        }
    }
    let runs: Vec<_> = cases
        .iter()
        .map(|c| {
            let (n, p, kappa) = c.0;
            enumerate_psd(n, 3)
                .map_err(Failure::from)
                .and_then(|ts| crate::commands::stabilization(n, kappa, p, &ts, Some(3)))
        })
        .collect();
    let summarize = |pick: &dyn Fn(&crate::commands::Stabilization) -> bool| {
        for (c, r) in cases.iter().zip(&runs) {
            match r {
                Ok(s) if pick(s) => {}
                Ok(_) => return (false, format!("fails at {c}")),
                Err(e) => return (false, format!("error at {c}: {e:?}")),
            }
        }
        (true, format!("{} configurations, trace ≤ 3", cases.len()))
    };
    vec![
        check(S, "operator route equals closed formula (and Q̃* route)", Ok(summarize(&|s| s.agreement))),
        check(S, "semi-ordinarity A_pT = A_T", Ok(summarize(&|s| s.semi_ordinary))),
    ]
}

fn satake() -> Checks {
    const S: &str = "satake";
    let mut all = Vec::new();
    for n in 1..=4usize {
        for kappa in (n as i64 + 2)..=12 {
            for l in [2u64, 3, 5, 7] {
                all.push(Case((n, kappa, l), format!("n = {n}, κ = {kappa}, l = {l}")));
            }
        }
    }
    let even: Vec<_> = all.iter().filter(|c| c.0 .1 % 2 == 0).map(|c| Case(c.0, c.1.clone())).collect();
    let odd: Vec<_> = all.iter().filter(|c| c.0 .0 % 2 == 1).map(|c| Case(c.0, c.1.clone())).collect();
    vec![
        check(S, "similitude normalization", sweep(&all, |c| Ok(satake_params(c.0 .0, c.0 .1, c.0 .2)?.similitude_holds()))),
        check(S, "Hecke polynomial splits into 1 − l^e Y", sweep(&all, |c| {
            let (n, kappa, l) = c.0;
            Ok(splits_over_powers(&hecke_polynomial(&satake_params(n, kappa, l)?).poly(), l, n as i64 * kappa))
        })),
        check(S, "Zharkovskaya factor identity (odd n)", sweep(&odd, |c| zharkovskaya_check(c.0 .0, c.0 .1, c.0 .2))),
        check(S, "R divides Q* (even κ)", sweep(&even, |c| divisibility_check(c.0 .0, c.0 .1, c.0 .2))),
    ]
}

/// The first two even weights `κ > n + 1` with `κ ≡ a (mod p − 1)`.
fn weights_on_branch(n: usize, a: u64, p: u64) -> Vec<i64> {
    (0..).map(|j| a as i64 + j * (p as i64 - 1)).filter(|&k| k > n as i64 + 1 && k % 2 == 0).take(2).collect()
}

/// The first two odd weights `κ > n + 1` off the branch with `ω^{2a−2κ}` nontrivial.
fn weights_off_branch(n: usize, a: u64, p: u64) -> Vec<i64> {
    let pm1 = p as i64 - 1;
    ((n as i64 + 2)..60)
        .filter(|&k| k % 2 == 1 && (2 * (a as i64 - k)).rem_euclid(pm1) != 0)
        .take(2)
        .collect()
}

fn lambda(c: &Common) -> Checks {
    const S: &str = "lambda";
    let p = c.p.unwrap_or(5);
    let a_list: Vec<u64> = c.a.map_or(vec![0, 2], |a| vec![a]);
    let cfg = lambda_config(c);
    let mut out = Vec::new();
    let branches: Vec<Case<(i64, i64)>> = [1i64, -3, -4, 5, 8, -7]
        .into_iter()
        .flat_map(|xi| (0..p as i64 - 1).map(move |b| Case((xi, b), format!("ξ = {xi}, b = {b}"))))
        .collect();
    out.push(check(S, format!("branch held-out certification (p = {p})"), sweep(&branches, |b| {
        let br = branch(b.0 .0, b.0 .1, p, cfg)?;
        Ok(br.vanishing || br.held_out.len() >= 2 && br.held_out.iter().all(|h| h.agreement >= br.phi.m_eff as i64))
    })));
    for a in a_list {
        for n in [1usize, 2] {
            let ts = match enumerate_psd(n, 2) {
                Ok(ts) => ts,
                Err(e) => {
                    out.push(check(S, format!("n = {n}, a = {a}: index set"), Err(e)));
                    continue;
                }
            };
            let tag = format!("n = {n}, a = {a}, p = {p}");
            out.push(check(S, format!("{tag}: specialization equals stabilized coefficient"), specialize_all(n, a, p, cfg, &ts, true)));
            out.push(check(S, format!("{tag}: cross-branch specialization"), specialize_all(n, a, p, cfg, &ts, false)));
            out.push(check(S, format!("{tag}: B-cleared expansion integral and consistent"), cleared(n, a, p, cfg)));
        }
    }
    out
}

fn specialize_all(
    n: usize,
    a: u64,
    p: u64,
    cfg: LambdaConfig,
    ts: &[HalfIntegralMatrix],
    on_branch: bool,
) -> siegel_core::Result<(bool, String)> {
    let ks = if on_branch { weights_on_branch(n, a, p) } else { weights_off_branch(n, a, p) };
    if a % 2 == 1 || ks.is_empty() {
        return Ok((true, "no classical weight in range (skipped)".into()));
    }
    let bp = b_poly(n, p)?;
    let pm1 = p as i64 - 1;
    let cases: Vec<Case<(HalfIntegralMatrix, i64)>> = ts
        .iter()
        .flat_map(|t| ks.iter().map(move |&k| Case((t.clone(), k), format!("T = {t}, κ = {k}"))))
        .collect();
    let (ok, _) = sweep(&cases, |c| {
        let (t, kappa) = (&c.0 .0, c.0 .1);
        let f = a_t_lambda(n, a, t, p, cfg)?;
        let got = f.specialize(kappa, &bp)?;
        let b = (a as i64 - kappa).rem_euclid(pm1);
        let want = if b == 0 {
            PadicNumber::from_rational(&stabilized_coeff(n, kappa, p, t)?, p, cfg.m as i64 + 8)
        } else {
            let spec = EisensteinSpec::new(n, kappa, CharacterSpec::teichmuller_power(p, b)?)?;
            fourier_coeff_chi(&spec, t, cfg.m + 4)?
        };
        Ok(got.agreement_with(&want) >= f.numerator.m_eff as i64 - 2)
    })?;
    let weights = ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", ");
    Ok((ok, format!("{} matrices at κ ∈ {{{weights}}}, tolerance M_eff − 2", ts.len())))
}

fn cleared(n: usize, a: u64, p: u64, cfg: LambdaConfig) -> siegel_core::Result<(bool, String)> {
    let e = lambda_eisenstein(n, a, p, 2, cfg)?;
    let bp = b_poly(n, p)?;
    let mut ok = true;
    if a % 2 == 0 {
        for kappa in weights_on_branch(n, a, p) {
            let x = PadicInt::from_rational(&(int(1 + p as i64).pow(kappa as i32) - int(1)), p, cfg.m + 4)?;
            for (t, c) in e.iter() {
                let want = b_at_weight(&bp, kappa) * stabilized_coeff(n, kappa, p, t)?;
                ok &= c.eval(&x)?.agreement(&want) >= c.m_eff as i64 - 2;
            }
        }
    }
    Ok((ok, format!("{} coefficients, trace ≤ 2", e.len())))
}

pub fn run(suite: Suite, c: &Common) -> Res<Outcome> {
    let checks: Checks = match suite {
        Suite::Local => local(),
        Suite::Stab => stab(),
        Suite::Satake => satake(),
        Suite::Lambda => lambda(c),
        Suite::All => [local(), stab(), satake(), lambda(c)].concat(),
    };
    let passed = checks.iter().all(|c| c.passed);
    let name = format!("{suite:?}").to_lowercase();
    let text = match c.format {
        Format::Json => pretty(&json!({ "command": "verify", "suite": name, "passed": passed, "checks": checks })),
        Format::Table => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|k| vec![k.suite.into(), k.name.clone(), if k.passed { "pass" } else { "FAIL" }.into(), k.detail.clone()])
                .collect();
            table(&["suite", "check", "status", "detail"], &rows)
        }
    };
    Ok(Outcome { text, ok: passed })
}
