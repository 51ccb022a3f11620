//! Matrix and family output in the three formats.

use cg_rotor_core::{AnyFamily, CgFamily, Complex, Matrix, Ring};
use serde_json::{json, Map, Value};

use crate::latex;
use crate::scalar::{complex_json, complex_latex, complex_text, Backend};

pub fn matrix_json<T: Ring>(m: &Matrix<T>, entry: impl Fn(&T) -> Value) -> Value {
    let entries: Vec<Value> = (0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(&entry).collect())).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub fn matrix_text<T: Ring>(m: &Matrix<T>, entry: impl Fn(&T) -> String) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|r| m.row(r).iter().map(&entry).collect()).collect();
    let width = (0..m.cols()).map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(0)).collect::<Vec<_>>();
    cells
        .iter()
        .map(|row| {
            let padded: Vec<String> = row.iter().zip(&width).map(|(s, w)| format!("{s:>w$}")).collect();
            format!("  {}", padded.join("  ").trim_end())
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn index_label(n: i64) -> String {
    if n > 0 {
        format!("+{n}")
    } else {
        n.to_string()
    }
}

struct Entry<T> {
    json: fn(&T) -> Value,
    text: fn(&T) -> String,
    latex: fn(&T) -> String,
}

fn real_entry<B: Backend>() -> Entry<B> {
    Entry { json: B::to_json, text: B::to_text, latex: B::to_latex }
}

fn complex_entry<B: Backend>() -> Entry<Complex<B>> {
    Entry { json: complex_json::<B>, text: complex_text::<B>, latex: complex_latex::<B> }
}

fn family_json_with<T: Ring>(fam: &CgFamily<T>, e: &Entry<T>, basis: &str) -> Value {
    let k = fam.key();
    let matrices: Map<String, Value> = fam.iter().map(|(n, m)| (index_label(n), matrix_json(m, e.json))).collect();
    json!({
        "family": { "N1": k.n1, "N2": k.n2, "N": k.n, "basis": basis },
        "matrices": matrices,
    })
}

fn symbol(basis: &str) -> &'static str {
    if basis == "e" {
        "C"
    } else {
        "G"
    }
}

fn family_text_with<T: Ring>(fam: &CgFamily<T>, e: &Entry<T>, basis: &str) -> String {
    let k = fam.key();
    fam.iter()
        .map(|(n, m)| format!("{}^{}_{}[{},{}]\n{}", symbol(basis), index_label(n), k.n, k.n1, k.n2, matrix_text(m, e.text)))
        .collect::<Vec<_>>()
        .join("\n\n")
}

fn family_latex_with<T: Ring>(fam: &CgFamily<T>, e: &Entry<T>, basis: &str) -> String {
    let k = fam.key();
    fam.iter()
        .map(|(n, m)| format!("{}^{{{}}}_{{{}[{},{}]}} = {}", symbol(basis), n, k.n, k.n1, k.n2, latex::matrix(m, e.latex)))
        .collect::<Vec<_>>()
        .join("\n\n")
}

pub fn family_json<B: Backend>(fam: &AnyFamily<B>) -> Value {
    match fam {
        AnyFamily::H(f) => family_json_with(f, &real_entry(), "h"),
        AnyFamily::E(f) => family_json_with(f, &complex_entry(), "e"),
    }
}

pub fn family_text<B: Backend>(fam: &AnyFamily<B>) -> String {
    match fam {
        AnyFamily::H(f) => family_text_with(f, &real_entry(), "h"),
        AnyFamily::E(f) => family_text_with(f, &complex_entry(), "e"),
    }
}

pub fn family_latex<B: Backend>(fam: &AnyFamily<B>) -> String {
    match fam {
        AnyFamily::H(f) => family_latex_with(f, &real_entry(), "h"),
        AnyFamily::E(f) => family_latex_with(f, &complex_entry(), "e"),
    }
}

/// Canonical JSON text: compact, keys in sorted order.
pub fn to_json_string(v: &Value) -> String {
    serde_json::to_string(v).expect("values built here always serialize")
}
