use rayon::prelude::*;
use serde_json::{json, Value};
use siegel_core::arith::poly::QPoly;
use siegel_core::arith::rational::{rational_to_string, Rational};
use siegel_core::eisenstein::qexp::{
    operator_source_keys, q_star_depth, stabilize_via_operator, stabilize_via_q_star, ExpansionSpec, QExpansion,
};
use siegel_core::eisenstein::{constant_term, fourier_coeff, stabilized_coeff, EisensteinSpec};
use siegel_core::hecke::{
    divisibility_quotient, hecke_polynomial, q_star, r_at_weight, satake_params, zharkovskaya_check,
};
use siegel_core::lambda::{a_t_lambda, b_poly, FracLambda, LambdaConfig, LambdaElement};
use siegel_core::quadform::{enumerate_psd, HalfIntegralMatrix};

use crate::render::{self, table};
use crate::{Command, Common, Failure, Format};

/// Rendered document plus whether every reported check held.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

pub type Res<T> = std::result::Result<T, Failure>;

pub fn run(cmd: &Command) -> Res<Outcome> {
    match cmd {
        Command::Coeff(c) => coeff(c),
        Command::Stabilize(c) => stabilize(c),
        Command::Satake(c) => satake(c),
        Command::Lambda(c) => lambda(c),
        Command::Verify(v) => crate::verify::run(v.suite, &v.common),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, cmd: &str) -> Res<T> {
    v.ok_or_else(|| Failure::Usage(format!("`{cmd}` requires --{flag}")))
}

fn reject(present: bool, flag: &str, cmd: &str) -> Res<()> {
    if present {
        return Err(Failure::Usage(format!("--{flag} is not used by `{cmd}`")));
    }
    Ok(())
}

/// The index set: `--matrix` or every `T` with `tr T ≤ --trace-bound`.
fn keys(c: &Common, n: usize, cmd: &str) -> Res<(Vec<HalfIntegralMatrix>, Option<u64>)> {
    match (&c.matrix, c.trace_bound) {
        (Some(_), Some(_)) => Err(Failure::Usage("give either --matrix or --trace-bound, not both".into())),
        (None, None) => Err(Failure::Usage(format!("`{cmd}` needs --matrix or --trace-bound"))),
        (Some(s), None) => {
            let t = HalfIntegralMatrix::parse(s).map_err(|e| Failure::Usage(e.to_string()))?;
            if t.degree() != n {
                return Err(Failure::Usage(format!("matrix {t} has size {}, genus is {n}", t.degree())));
            }
            if !t.is_psd() {
                return Err(Failure::Usage(format!("matrix {t} is not positive semidefinite")));
            }
            Ok((vec![t], None))
        }
        (None, Some(b)) => Ok((enumerate_psd(n, b as i64)?, Some(b))),
    }
}

fn par_map<C: Send>(
    ts: &[HalfIntegralMatrix],
    f: impl Fn(&HalfIntegralMatrix) -> siegel_core::Result<C> + Sync,
) -> Res<Vec<(HalfIntegralMatrix, C)>> {
    let vals: Vec<C> = ts.par_iter().map(&f).collect::<siegel_core::Result<_>>()?;
    Ok(ts.iter().cloned().zip(vals).collect())
}

fn genus(c: &Common, cmd: &str) -> Res<usize> {
    let n = need(c.genus, "genus", cmd)?;
    if n == 0 {
        return Err(Failure::Usage("genus must be at least 1".into()));
    }
    Ok(n)
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn coeff(c: &Common) -> Res<Outcome> {
    let cmd = "coeff";
    let n = genus(c, cmd)?;
    let kappa = need(c.weight, "weight", cmd)?;
    for (present, flag) in [(c.p.is_some(), "p"), (c.a.is_some(), "a"), (c.pprec.is_some(), "pprec"), (c.xprec.is_some(), "xprec")] {
        reject(present, flag, cmd)?;
    }
    let spec = EisensteinSpec::level_one(n, kappa)?;
    let (ts, bound) = keys(c, n, cmd)?;
    let entries = par_map(&ts, |t| fourier_coeff(&spec, t))?;
    let constant = constant_term(&spec, 0)?.as_rational().cloned().expect("level one is rational");
    let exp = QExpansion::from_entries(ExpansionSpec::new(n, "eisenstein").weight(kappa), bound, entries);
    let text = match c.format {
        Format::Json => pretty(&json!({
            "command": cmd,
            "genus": n,
            "weight": kappa,
            "constant_term": rational_to_string(&constant),
            "expansion": exp.to_json(),
        })),
        Format::Table => {
            let rows: Vec<Vec<String>> = exp.iter().map(|(t, v)| vec![t.to_string(), rational_to_string(v)]).collect();
            table(&["2T", "A_T"], &rows)
        }
    };
    Ok(Outcome { text, ok: true })
}

/// Closed formula, operator route and `Q̃*` route on the same index set.
pub struct Stabilization {
    pub closed: QExpansion<Rational>,
    pub operator: QExpansion<Rational>,
    pub q_star: QExpansion<Rational>,
    pub agreement: bool,
    pub semi_ordinary: bool,
}

pub fn stabilization(n: usize, kappa: i64, p: u64, ts: &[HalfIntegralMatrix], bound: Option<u64>) -> Res<Stabilization> {
    let spec = ExpansionSpec::new(n, "stabilized").weight(kappa).prime(p);
    let closed = QExpansion::from_entries(spec.clone(), bound, par_map(ts, |t| stabilized_coeff(n, kappa, p, t))?);
    let level_one = EisensteinSpec::level_one(n, kappa)?;
    let src_keys = operator_source_keys(ts, p, n.max(q_star_depth(n)));
    let src = QExpansion::from_entries(
        ExpansionSpec::new(n, "eisenstein").weight(kappa),
        None,
        par_map(&src_keys, |t| fourier_coeff(&level_one, t))?,
    );
    let restrict = |e: QExpansion<Rational>, kind: &str| {
        let mut s = spec.clone();
        s.kind = kind.into();
        QExpansion::from_entries(s, bound, ts.iter().map(|t| (t.clone(), e.get(t).cloned().expect("target present"))).collect())
    };
    let operator = restrict(stabilize_via_operator(n, kappa, p, &src)?, "stabilized (operator)");
    let q_star = restrict(stabilize_via_q_star(n, kappa, p, &src)?, "stabilized (Q* route)");
    let agreement = ts.iter().all(|t| closed.get(t) == operator.get(t) && closed.get(t) == q_star.get(t));
    let up = par_map(ts, |t| stabilized_coeff(n, kappa, p, &t.scale(p as i64)))?;
    let semi_ordinary = up.iter().all(|(t, v)| closed.get(t) == Some(v));
    Ok(Stabilization { closed, operator, q_star, agreement, semi_ordinary })
}

fn stabilize(c: &Common) -> Res<Outcome> {
    let cmd = "stabilize";
    let n = genus(c, cmd)?;
    let kappa = need(c.weight, "weight", cmd)?;
    let p = need(c.p, "p", cmd)?;
    for (present, flag) in [(c.a.is_some(), "a"), (c.pprec.is_some(), "pprec"), (c.xprec.is_some(), "xprec")] {
        reject(present, flag, cmd)?;
    }
    let (ts, bound) = keys(c, n, cmd)?;
    let s = stabilization(n, kappa, p, &ts, bound)?;
    let ok = s.agreement && s.semi_ordinary;
    let text = match c.format {
        Format::Json => pretty(&json!({
            "command": cmd,
            "genus": n,
            "weight": kappa,
            "p": p,
            "agreement": s.agreement,
            "semi_ordinary": s.semi_ordinary,
            "expansion": s.closed.to_json(),
            "operator": s.operator.to_json(),
            "q_star_route": s.q_star.to_json(),
        })),
        Format::Table => {
            let rows: Vec<Vec<String>> = s
                .closed
                .iter()
                .map(|(t, v)| {
                    let op = s.operator.get(t).map(rational_to_string).unwrap_or_default();
                    vec![t.to_string(), rational_to_string(v), op]
                })
                .collect();
            format!(
                "{}\nagreement: {}\nsemi-ordinary: {}",
                table(&["2T", "closed", "operator"], &rows),
                s.agreement,
                s.semi_ordinary
            )
        }
    };
    Ok(Outcome { text, ok })
}

fn poly_json(f: &QPoly) -> Value {
    Value::Array(f.coeffs.iter().map(|c| Value::String(rational_to_string(c))).collect())
}

fn satake(c: &Common) -> Res<Outcome> {
    let cmd = "satake";
    let n = genus(c, cmd)?;
    let kappa = need(c.weight, "weight", cmd)?;
    let l = need(c.p, "p", cmd)?;
    for (present, flag) in [
        (c.a.is_some(), "a"),
        (c.pprec.is_some(), "pprec"),
        (c.xprec.is_some(), "xprec"),
        (c.matrix.is_some(), "matrix"),
        (c.trace_bound.is_some(), "trace-bound"),
    ] {
        reject(present, flag, cmd)?;
    }
    let params = satake_params(n, kappa, l)?;
    let hecke = hecke_polynomial(&params);
    let qs = q_star(n, kappa, l)?;
    let r = r_at_weight(n, kappa, l);
    let quotient = divisibility_quotient(n, kappa, l)?;
    let zhark = if n % 2 == 1 { Some(zharkovskaya_check(n, kappa, l)?) } else { None };
    let similitude = params.similitude_holds();
    let ok = similitude && quotient.is_some() && zhark != Some(false);
    let text = match c.format {
        Format::Json => pretty(&json!({
            "command": cmd,
            "satake": params,
            "similitude": similitude,
            "hecke_polynomial": hecke,
            "q_star": qs,
            "r_at_weight": poly_json(&r),
            "divisible": quotient.is_some(),
            "quotient": quotient.as_ref().map(poly_json),
            "zharkovskaya": zhark,
        })),
        Format::Table => {
            let exps = |v: &[i64]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ");
            let rows = vec![
                vec!["ψ exponents".into(), exps(&params.psi)],
                vec!["similitude".into(), similitude.to_string()],
                vec!["Q roots l^e".into(), exps(&hecke.root_exponents)],
                vec!["Q* roots l^e".into(), exps(&qs.root_exponents)],
                vec!["R(p^(κ−n−1), Y)".into(), render::poly(&r, "Y")],
                vec!["divisible".into(), quotient.is_some().to_string()],
                vec!["zharkovskaya".into(), zhark.map_or("n/a".into(), |b| b.to_string())],
            ];
            table(&["quantity", "value"], &rows)
        }
    };
    Ok(Outcome { text, ok })
}

pub fn lambda_config(c: &Common) -> LambdaConfig {
    let d = LambdaConfig::default();
    LambdaConfig::new(c.pprec.unwrap_or(d.m), c.xprec.unwrap_or(d.n))
}

fn lambda(c: &Common) -> Res<Outcome> {
    let cmd = "lambda";
    let n = genus(c, cmd)?;
    let p = need(c.p, "p", cmd)?;
    let a = need(c.a, "a", cmd)?;
    let cfg = lambda_config(c);
    if cfg.m == 0 || cfg.n == 0 {
        return Err(Failure::Usage("--pprec and --xprec must be positive".into()));
    }
    let (ts, bound) = keys(c, n, cmd)?;
    let bp = b_poly(n, p)?;
    let entries: Vec<(HalfIntegralMatrix, FracLambda)> = par_map(&ts, |t| a_t_lambda(n, a, t, p, cfg))?;
    let mut spec = ExpansionSpec::new(n, "lambda coefficients").prime(p);
    spec.a = Some(a);
    let cleared: Vec<(HalfIntegralMatrix, LambdaElement)> =
        entries.iter().map(|(t, f)| Ok((t.clone(), f.clear(&bp, cfg)?))).collect::<siegel_core::Result<_>>()?;
    let coeffs = QExpansion::from_entries(spec.clone(), bound, entries);
    spec.kind = "lambda eisenstein (B-cleared)".into();
    let cleared = QExpansion::from_entries(spec, bound, cleared);
    let specialization = match c.weight {
        Some(kappa) => Some(coeffs.map(|_, f| f.specialize(kappa, &bp))?),
        None => None,
    };
    let text = match c.format {
        Format::Json => pretty(&json!({
            "command": cmd,
            "genus": n,
            "p": p,
            "a": a,
            "config": cfg,
            "b_poly": {
                "factors": bp.factors.iter().map(poly_json).collect::<Vec<_>>(),
                "product": poly_json(&bp.product),
            },
            "coefficients": coeffs.to_json(),
            "cleared": cleared.to_json(),
            "specialization": specialization.as_ref().map(|s| json!({"weight": c.weight, "expansion": s.to_json()})),
        })),
        Format::Table => {
            let rows: Vec<Vec<String>> = coeffs
                .iter()
                .map(|(t, f)| {
                    let mut row = vec![t.to_string(), format!("{:?}", f.den_atoms), render::lambda(&f.numerator, 3)];
                    if let Some(s) = &specialization {
                        row.push(s.get(t).map(render::padic).unwrap_or_default());
                    }
                    row
                })
                .collect();
            let mut header = vec!["2T", "poles", "numerator"];
            if specialization.is_some() {
                header.push("specialization");
            }
            table(&header, &rows)
        }
    };
    Ok(Outcome { text, ok: true })
}
