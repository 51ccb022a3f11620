#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;

use cg_rotor_core::{FamilyKey, Matrix, RadicalScalar};

pub type Reference = BTreeMap<(u32, u32, u32), BTreeMap<i64, Matrix<RadicalScalar>>>;

const REFERENCE: &str = include_str!("../data/reference_families.txt");

/// Tabulated h-basis families keyed by `(N₁, N₂, N)`.
pub fn reference_families() -> Reference {
    let mut out: Reference = BTreeMap::new();
    let mut key = None;
    let mut index = None;
    let mut rows: Vec<Vec<RadicalScalar>> = Vec::new();
    let flush = |key: Option<(u32, u32, u32)>, index: Option<i64>, rows: &mut Vec<Vec<RadicalScalar>>, out: &mut Reference| {
        if let (Some(k), Some(n)) = (key, index) {
            if !rows.is_empty() {
                out.entry(k).or_default().insert(n, Matrix::from_rows(std::mem::take(rows)));
            }
        }
    };
    for line in REFERENCE.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        if let Some(rest) = line.strip_prefix("family ") {
            flush(key, index, &mut rows, &mut out);
            let w: Vec<u32> = rest.split_whitespace().map(|t| t.parse().unwrap()).collect();
            key = Some((w[0], w[1], w[2]));
            index = None;
        } else if let Some(rest) = line.strip_prefix("index ") {
            flush(key, index, &mut rows, &mut out);
            index = Some(rest.parse().unwrap());
        } else {
            rows.push(line.split(',').map(|e| e.trim().parse().unwrap()).collect());
        }
    }
    flush(key, index, &mut rows, &mut out);
    out
}

pub fn key(n1: u32, n2: u32, n: u32) -> FamilyKey {
    FamilyKey::new(n1, n2, n).unwrap()
}

pub fn q(n: i64, d: i64) -> RadicalScalar {
    RadicalScalar::ratio(n, d)
}

pub fn max_abs_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.entries().iter().zip(b.entries()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
