use std::thread;

use cg_rotor_core::cg::{admissible, keys_up_to};
use cg_rotor_core::elasticity::{
    hyperbolicity_check, isotropic_coefficients, plane_wave_speeds, DeltaConstants, HyperbolicModel, Hyperbolicity, Witness,
};
use cg_rotor_core::invariants::{
    crystal_reduce, crystal_reduce_system, deviator_decompose, quadratic_invariants, CrystalReduction, CrystalSystem, FixedBlock,
    MaterialCoefficients, WeightedVector,
};
use cg_rotor_core::irreps::{axis_rotation, rep_matrix};
use cg_rotor_core::oracle::{compare, oracle_family_h, OracleReport, OracleStatus};
use cg_rotor_core::{Axis, BasisKind, CgEngine, FamilyKey, Matrix, Weight};
use serde_json::{json, Value};

use crate::angle::Angle;
use crate::error::{CliError, CliResult};
use crate::input::{coefficients_from_json, generators_from_json, parse_list, parse_tensor, read_json};
use crate::render::{family_json, family_latex, family_text, matrix_json, matrix_text, to_json_string};
use crate::scalar::{normalize, Backend};
use crate::{latex, Format};

/// Rendered output and whether a verification found a mismatch.
pub struct Report {
    pub body: String,
    pub mismatch: bool,
}

impl From<String> for Report {
    fn from(body: String) -> Self {
        Report { body, mismatch: false }
    }
}

fn check_cap(weight: Weight, cap: Weight, what: &str) -> CliResult<()> {
    if weight > cap {
        Err(CliError::Domain(format!("{what} {weight} exceeds the weight cap {cap} (raise it with --weight-cap)")))
    } else {
        Ok(())
    }
}

fn no_latex(cmd: &str) -> CliError {
    CliError::Usage(format!("{cmd} has no LaTeX output; use --format json or text"))
}

fn vector_json<B: Backend>(v: &[B]) -> Value {
    Value::Array(v.iter().map(B::to_json).collect())
}

pub fn cg<B: Backend>(n1: Weight, n2: Weight, n: Option<Weight>, basis: BasisKind, format: Format, cap: Weight) -> CliResult<Report> {
    check_cap(n1.max(n2), cap, "weight")?;
    let keys: Vec<FamilyKey> = match n {
        Some(n) => vec![FamilyKey::new(n1, n2, n)?],
        None => admissible(n1, n2).collect(),
    };
    for k in &keys {
        check_cap(k.n, cap, "weight")?;
    }
    let mut engine = CgEngine::<B>::new();
    let fams = keys.iter().map(|k| engine.compute_family(*k, basis)).collect::<Result<Vec<_>, _>>()?;
    let body = match format {
        Format::Json if n.is_some() => to_json_string(&family_json(&fams[0])),
        Format::Json => to_json_string(&Value::Array(fams.iter().map(family_json).collect())),
        Format::Text => fams.iter().map(family_text).collect::<Vec<_>>().join("\n\n"),
        Format::Latex => fams.iter().map(family_latex).collect::<Vec<_>>().join("\n\n"),
    };
    Ok(body.into())
}

pub fn rep<B: Backend>(weight: Weight, axis: &str, angle: &str, format: Format, cap: Weight) -> CliResult<Report> {
    check_cap(weight, cap, "weight")?;
    let axis = Axis::parse(axis).ok_or_else(|| CliError::Usage(format!("unknown axis {axis:?}; expected m1, 0 or p1")))?;
    let parsed = Angle::parse(angle).map_err(CliError::Usage)?;
    let (c, s) = B::cos_sin(&parsed, angle).map_err(CliError::Domain)?;
    let mut engine = CgEngine::<B>::new();
    let m = rep_matrix(&mut engine, weight, &axis_rotation(axis, c, s))?;
    let body = match format {
        Format::Json => to_json_string(&matrix_json(&m, B::to_json)),
        Format::Text => matrix_text(&m, B::to_text),
        Format::Latex => latex::matrix(&m, B::to_latex),
    };
    Ok(body.into())
}

fn verify_worker<B: Backend>(keys: &[FamilyKey], worker: usize, workers: usize) -> CliResult<Vec<(usize, OracleReport)>> {
    let mut engine = CgEngine::<B>::new();
    let mut out = Vec::new();
    for (i, k) in keys.iter().enumerate().skip(worker).step_by(workers) {
        let main = engine.family(*k)?;
        out.push((i, compare(&main, &oracle_family_h(*k)?)?));
    }
    Ok(out)
}

pub fn verify<B: Backend>(max_weight: Weight, jobs: Option<usize>, format: Format, cap: Weight) -> CliResult<Report> {
    check_cap(max_weight, cap, "max weight")?;
    let keys = &keys_up_to(max_weight)[..];
    let workers = jobs
        .unwrap_or_else(|| thread::available_parallelism().map(usize::from).unwrap_or(1))
        .clamp(1, keys.len().max(1));
    let mut reports: Vec<(usize, OracleReport)> = Vec::with_capacity(keys.len());
    thread::scope(|scope| -> CliResult<()> {
        let handles: Vec<_> = (0..workers).map(|w| scope.spawn(move || verify_worker::<B>(keys, w, workers))).collect();
        for h in handles {
            reports.extend(h.join().map_err(|_| CliError::Domain("a verification worker panicked".into()))??);
        }
        Ok(())
    })?;
    reports.sort_by_key(|(i, _)| *i);
    let mismatches = reports.iter().filter(|(_, r)| r.status == OracleStatus::Mismatch).count();
    let body = match format {
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|(_, r)| {
                    json!({
                        "N1": r.key.n1, "N2": r.key.n2, "N": r.key.n,
                        "global_sign": r.global_sign,
                        "max_discrepancy": r.max_discrepancy,
                        "status": if r.status == OracleStatus::Match { "match" } else { "mismatch" },
                        "first_mismatch": r.first_mismatch.map(|e| json!({ "n": e.n, "n1": e.n1, "n2": e.n2 })),
                    })
                })
                .collect();
            to_json_string(&json!({ "max_weight": max_weight, "families": rows, "mismatches": mismatches }))
        }
        Format::Text => {
            let mut lines = vec![format!("{:>3} {:>3} {:>3} {:>5} {:>16}  status", "N1", "N2", "N", "sign", "max_discrepancy")];
            for (_, r) in &reports {
                let status = match r.first_mismatch {
                    None => "match".to_string(),
                    Some(e) => format!("mismatch at n={} ({}, {})", e.n, e.n1, e.n2),
                };
                lines.push(format!("{:>3} {:>3} {:>3} {:>+5} {:>16.3e}  {status}", r.key.n1, r.key.n2, r.key.n, r.global_sign, r.max_discrepancy));
            }
            lines.push(format!("{} families, {mismatches} mismatches", reports.len()));
            lines.join("\n")
        }
        Format::Latex => return Err(no_latex("verify")),
    };
    Ok(Report { body, mismatch: mismatches > 0 })
}

fn block_json<B: Backend>(b: &FixedBlock<B>) -> Value {
    json!({
        "weight": b.weight,
        "dim": b.dim(),
        "indices": b.indices,
        "basis": b.basis.iter().map(|v| vector_json(v.components())).collect::<Vec<_>>(),
    })
}

fn block_text<B: Backend>(name: &str, b: &FixedBlock<B>) -> String {
    let head = format!("{name} (weight {}, dim {})", b.weight, b.dim());
    match &b.indices {
        Some(ix) => format!("{head}: indices {}", ix.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")),
        None => {
            let rows: Vec<String> =
                b.basis.iter().map(|v| format!("  [{}]", v.components().iter().map(B::to_text).collect::<Vec<_>>().join(", "))).collect();
            format!("{head}: basis\n{}", rows.join("\n"))
        }
    }
}

fn reduction<B: Backend>(engine: &mut CgEngine<B>, system: Option<&str>, generators: Option<&std::path::Path>) -> CliResult<CrystalReduction<B>> {
    match (system, generators) {
        (Some(name), None) => {
            let sys = CrystalSystem::parse(name).ok_or_else(|| {
                let all: Vec<&str> = CrystalSystem::ALL.iter().map(|s| s.name()).collect();
                CliError::Usage(format!("unknown crystal system {name:?}; expected one of {}", all.join(", ")))
            })?;
            Ok(crystal_reduce_system(engine, sys)?)
        }
        (None, Some(path)) => {
            let (name, gens) = generators_from_json::<B>(&read_json(path)?)?;
            Ok(crystal_reduce(engine, &name, gens)?)
        }
        _ => Err(CliError::Usage("give exactly one of --system or --generators".into())),
    }
}

pub fn crystal<B: Backend>(system: Option<&str>, generators: Option<&std::path::Path>, format: Format) -> CliResult<Report> {
    let mut engine = CgEngine::<B>::new();
    let red = reduction(&mut engine, system, generators)?;
    let body = match format {
        Format::Json => to_json_string(&json!({
            "system": red.system,
            "count": red.count,
            "blocks": { "a": block_json(&red.a), "b": block_json(&red.b), "d": block_json(&red.d) },
        })),
        Format::Text => [
            format!("system {}", red.system),
            format!("count {}", red.count),
            block_text("a", &red.a),
            block_text("b", &red.b),
            block_text("d", &red.d),
        ]
        .join("\n"),
        Format::Latex => return Err(no_latex("crystal")),
    };
    Ok(body.into())
}

/// Material options shared by the elasticity subcommands.
pub struct MaterialInput<'a> {
    pub lambda: &'a str,
    pub mu: &'a str,
    pub system: Option<&'a str>,
    pub coeffs: Option<&'a std::path::Path>,
}

/// Whether `ρ(U)ᵀv = v` for every generator.
fn fixed_by<B: Backend>(engine: &mut CgEngine<B>, gens: &[Matrix<B>], v: &WeightedVector<B>) -> CliResult<bool> {
    for u in gens {
        let r = rep_matrix(engine, v.weight(), u)?;
        if v.transform(&r.transpose()) != *v {
            return Ok(false);
        }
    }
    Ok(true)
}

fn material<B: Backend>(engine: &mut CgEngine<B>, input: &MaterialInput) -> CliResult<MaterialCoefficients<B>> {
    let lambda = B::parse_str(input.lambda).map_err(CliError::Usage)?;
    let mu = B::parse_str(input.mu).map_err(CliError::Usage)?;
    let mut m = isotropic_coefficients(&lambda, &mu).map_err(|e| CliError::Domain(format!("Lamé coefficients: {e}")))?;
    if let Some(path) = input.coeffs {
        m = coefficients_from_json(&read_json(path)?, m)?;
    }
    if let Some(name) = input.system {
        let red = reduction(engine, Some(name), None)?;
        for (block, v) in [("a", &m.a), ("b", &m.b), ("d", &m.d)] {
            if !fixed_by(engine, &red.generators, v)? {
                let fixed = if block == "d" { &red.d } else { &red.a };
                let allowed = match &fixed.indices {
                    Some(ix) => format!(" (allowed indices: {ix:?})"),
                    None => String::new(),
                };
                return Err(CliError::Domain(format!("coefficients {block} are not invariant under the {name} symmetry{allowed}")));
            }
        }
    }
    Ok(m)
}

fn constants_json<B: Backend>(c: &DeltaConstants<B>) -> Value {
    json!({
        "lower_1": c.lower_1.to_json(),
        "raise_0": c.raise_0.to_json(),
        "lower_2": c.lower_2.to_json(),
        "raise_1": c.raise_1.to_json(),
    })
}

fn hyperbolicity_json(h: Hyperbolicity) -> Value {
    match h {
        Hyperbolicity::Hyperbolic => json!({ "hyperbolic": true, "witness": null }),
        Hyperbolicity::NotHyperbolic(Witness::NonPositiveDensity) => json!({ "hyperbolic": false, "witness": "non_positive_density" }),
        Hyperbolicity::NotHyperbolic(Witness::LeadingMinor(k)) => json!({ "hyperbolic": false, "witness": { "leading_minor": k } }),
    }
}

const STATE_ORDER: [&str; 9] = ["v-1", "v0", "v1", "p", "s-2", "s-1", "s0", "s1", "s2"];

pub fn elasticity_assemble<B: Backend>(input: &MaterialInput, density: &str, format: Format) -> CliResult<Report> {
    let mut engine = CgEngine::<B>::new();
    let m = material(&mut engine, input)?;
    let density = B::parse_str(density).map_err(CliError::Usage)?;
    let model = HyperbolicModel::new(&mut engine, m, density)?;
    let hyp = hyperbolicity_check(&model);
    let body = match format {
        Format::Json => {
            let mat = &model.material;
            to_json_string(&json!({
                "state_order": STATE_ORDER,
                "density": model.density.to_json(),
                "material": {
                    "c1": mat.c1.to_json(),
                    "c2": mat.c2.to_json(),
                    "a": vector_json(mat.a.components()),
                    "b": vector_json(mat.b.components()),
                    "d": vector_json(mat.d.components()),
                },
                "constants": constants_json(&model.constants),
                "a_hat": matrix_json(&model.a_hat, B::to_json),
                "hyperbolicity": hyperbolicity_json(hyp),
            }))
        }
        Format::Text => {
            let c = &model.constants;
            format!(
                "density {}\nconstants c-(1) = {}, c+(0) = {}, c-(2) = {}, c+(1) = {}\nA_hat\n{}\n{}",
                model.density.to_text(),
                c.lower_1.to_text(),
                c.raise_0.to_text(),
                c.lower_2.to_text(),
                c.raise_1.to_text(),
                matrix_text(&model.a_hat, B::to_text),
                match hyp {
                    Hyperbolicity::Hyperbolic => "hyperbolic".to_string(),
                    Hyperbolicity::NotHyperbolic(w) => format!("not hyperbolic: {w:?}"),
                }
            )
        }
        Format::Latex => format!("\\hat{{A}} = {}", latex::matrix(&model.a_hat, B::to_latex)),
    };
    Ok(body.into())
}

pub fn elasticity_speeds<B: Backend>(input: &MaterialInput, density: &str, direction: &str, format: Format) -> CliResult<Report> {
    let mut engine = CgEngine::<B>::new();
    let m = material(&mut engine, input)?;
    let density = B::parse_str(density).map_err(CliError::Usage)?;
    let raw: [B; 3] = parse_list::<B>(direction, 3, "--direction")?.try_into().expect("length checked");
    let k = normalize(raw).map_err(CliError::Domain)?;
    let model = HyperbolicModel::new(&mut engine, m, density)?;
    let speeds = plane_wave_speeds(&mut engine, &model, &k)?;
    let body = match format {
        Format::Json => to_json_string(&json!({
            "direction": k.iter().map(|x| x.approx()).collect::<Vec<_>>(),
            "speeds": speeds,
        })),
        Format::Text => speeds.iter().map(f64::to_string).collect::<Vec<_>>().join("\n"),
        Format::Latex => return Err(no_latex("elasticity speeds")),
    };
    Ok(body.into())
}

/// Either a tensor or `(p, s)`, and the five quadratic invariants.
pub struct InvariantInput<'a> {
    pub tensor: Option<&'a str>,
    pub p: Option<&'a str>,
    pub s: Option<&'a str>,
    pub c1: &'a str,
    pub c2: &'a str,
    pub coeffs: Option<&'a std::path::Path>,
}

pub fn invariants<B: Backend>(input: &InvariantInput, format: Format) -> CliResult<Report> {
    let (p, s) = match (input.tensor, input.p, input.s) {
        (Some(t), None, None) => deviator_decompose(&parse_tensor::<B>(t)?)?,
        (None, Some(p), Some(s)) => (B::parse_str(p).map_err(CliError::Usage)?, WeightedVector::new(2, parse_list(s, 5, "--s")?)?),
        _ => return Err(CliError::Usage("give either --tensor or both --p and --s".into())),
    };
    let base = MaterialCoefficients::isotropic(B::parse_str(input.c1).map_err(CliError::Usage)?, B::parse_str(input.c2).map_err(CliError::Usage)?);
    let m = match input.coeffs {
        Some(path) => coefficients_from_json(&read_json(path)?, base)?,
        None => base,
    };
    let mut engine = CgEngine::<B>::new();
    let q = quadratic_invariants(&mut engine, &p, &s, &m)?;
    let total = q.total();
    let named = [("J0", &q.j0), ("J1", &q.j1), ("I0", &q.i0), ("I1", &q.i1), ("I2", &q.i2), ("total", &total)];
    let body = match format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("p".into(), p.to_json());
            obj.insert("s".into(), vector_json(s.components()));
            for (k, v) in named {
                obj.insert(k.into(), v.to_json());
            }
            to_json_string(&Value::Object(obj))
        }
        Format::Text => {
            let mut lines = vec![format!("p = {}", p.to_text())];
            lines.push(format!("s = [{}]", s.components().iter().map(B::to_text).collect::<Vec<_>>().join(", ")));
            lines.extend(named.iter().map(|(k, v)| format!("{k} = {}", v.to_text())));
            lines.join("\n")
        }
        Format::Latex => return Err(no_latex("invariants")),
    };
    Ok(body.into())
}
