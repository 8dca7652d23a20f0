//! Aligned plain-text tables.

use num_traits::Zero;
use siegel_core::arith::padic::{PadicInt, PadicNumber};
use siegel_core::arith::poly::QPoly;
use siegel_core::arith::rational::rational_to_string;
use siegel_core::lambda::LambdaElement;

pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| -> String {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header.iter().map(|s| s.to_string()).collect())];
    out.push(line(widths.iter().map(|w| "-".repeat(*w)).collect()));
    out.extend(rows.iter().map(|r| line(r.clone())));
    out.join("\n")
}

pub fn padic_int(x: &PadicInt) -> String {
    format!("{} mod {}^{}", x.value, x.p, x.precision)
}

pub fn padic(x: &PadicNumber) -> String {
    if x.is_zero {
        return format!("O({}^{})", x.p(), x.valuation);
    }
    let p = x.p();
    let unit = padic_int(&x.unit);
    match x.valuation {
        0 => unit,
        v => format!("{p}^{v}·({unit})"),
    }
}

/// The first few coefficients of a Λ-element, centred representatives.
pub fn lambda(e: &LambdaElement, shown: usize) -> String {
    let terms: Vec<String> = e
        .coeffs
        .iter()
        .take(shown)
        .enumerate()
        .map(|(j, c)| match j {
            0 => c.centered().to_string(),
            1 => format!("{}·X", c.centered()),
            _ => format!("{}·X^{j}", c.centered()),
        })
        .collect();
    let more = if e.n > shown { " + …" } else { "" };
    format!("{}{more} (mod {}^{}, X^{})", terms.join(" + ").replace("+ -", "− "), e.p, e.m_eff, e.n)
}

/// `c_0 + c_1·Y + …` in the named variable.
pub fn poly(f: &QPoly, var: &str) -> String {
    let terms: Vec<String> = f
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| {
            let c = rational_to_string(c);
            match j {
                0 => c,
                1 => format!("{c}·{var}"),
                _ => format!("{c}·{var}^{j}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "− ")
    }
}
