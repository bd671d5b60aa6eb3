//! JSON encoding of curves and computation reports.
//!
//! Every report object carries `"schema": "gfermat/1"` and the content hash
//! of the curve it describes. The hash is the SHA-256 of the compact JSON
//! encoding of the curve; `serde_json` maps keep keys sorted, so that
//! encoding is canonical and the hash is stable across runs and platforms.
//!
//! Field elements are encoded as coefficient arrays in the power basis of
//! the field, constant term first: plain integers over finite fields,
//! `"num/den"` strings over the characteristic zero fields. A bare integer
//! or string is accepted on input as shorthand for a constant.

use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::aut::{AutReport, QFormCertificate};
use crate::curve::{CurveSpec, ProjectivePoint};
use crate::field::{Field, FieldKind, FieldElement};
use crate::moebius::{MoebiusMap, P1Value};
use crate::osc::{OscPoint, PlueckerReport, SurveyReport};
use crate::points::{OrbitReport, PointCensus};
use crate::{Error, Result};

/// Schema tag stamped on every report object.
pub const SCHEMA: &str = "gfermat/1";

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

/// Field descriptor: `{"kind": ...}` plus the kind-specific parameters.
pub fn field_json(f: &Field) -> Value {
    match f.kind() {
        FieldKind::Rationals => json!({ "kind": "rationals" }),
        FieldKind::Cyclotomic => json!({ "kind": "cyclotomic", "k": f.zeta_order() }),
        FieldKind::Prime => json!({ "kind": "prime", "p": f.characteristic() }),
        FieldKind::Extension => json!({
            "kind": "extension",
            "p": f.characteristic(),
            "modulus": f.modulus_fp().expect("extension field stores a modulus"),
        }),
    }
}

/// Parses a field descriptor. Extensions may be requested either by an
/// explicit `modulus` (coefficients low to high, monic) or by `degree`, in
/// which case a Conway-style modulus is chosen deterministically.
pub fn parse_field(v: &Value) -> Result<Field> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid("field descriptor must be a JSON object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| invalid("field descriptor needs a string \"kind\""))?;
    let get_u64 = |key: &str| -> Result<u64> {
        obj.get(key)
            .and_then(Value::as_u64)
            .ok_or_else(|| invalid(format!("field descriptor needs a positive integer \"{key}\"")))
    };
    match kind {
        "rationals" => Ok(Field::rationals()),
        "cyclotomic" => Field::cyclotomic(get_u64("k")?),
        "prime" => Field::prime(get_u64("p")?),
        "extension" => {
            let p = get_u64("p")?;
            if let Some(m) = obj.get("modulus") {
                let coeffs = m
                    .as_array()
                    .ok_or_else(|| invalid("\"modulus\" must be an array of integers"))?
                    .iter()
                    .map(|c| {
                        c.as_i64()
                            .ok_or_else(|| invalid("\"modulus\" entries must be integers"))
                    })
                    .collect::<Result<Vec<i64>>>()?;
                Field::extension_with_modulus(p, coeffs)
            } else if let Some(d) = obj.get("degree") {
                let m = d
                    .as_u64()
                    .ok_or_else(|| invalid("\"degree\" must be a positive integer"))?;
                Field::extension(p, m as usize)
            } else {
                Err(invalid("extension field needs \"modulus\" or \"degree\""))
            }
        }
        other => Err(invalid(format!("unknown field kind \"{other}\""))),
    }
}

fn rational_string(r: &BigRational) -> String {
    r.to_string()
}

/// Element as a coefficient array, constant term first.
pub fn element_json(x: &FieldElement) -> Value {
    if let Some(res) = x.residues() {
        Value::Array(res.iter().map(|&v| Value::from(v)).collect())
    } else {
        let rats = x.rationals().expect("element stores residues or rationals");
        Value::Array(
            rats.iter()
                .map(|r| Value::String(rational_string(r)))
                .collect(),
        )
    }
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| invalid("rational coefficients must be integers or strings"))?;
            Ok(BigRational::from_integer(i.into()))
        }
        Value::String(s) => BigRational::from_str(s)
            .map_err(|_| invalid(format!("cannot parse \"{s}\" as a rational number"))),
        _ => Err(invalid("rational coefficients must be integers or strings")),
    }
}

/// Parses one field element: a coefficient array, or a bare integer or
/// string as a constant.
pub fn parse_element(f: &Field, v: &Value) -> Result<FieldElement> {
    let coeffs: Vec<Value> = match v {
        Value::Array(a) => a.clone(),
        Value::Number(_) | Value::String(_) => vec![v.clone()],
        _ => return Err(invalid("field element must be a coefficient array or a constant")),
    };
    if coeffs.is_empty() {
        return Ok(f.zero());
    }
    if coeffs.len() > f.degree() {
        return Err(invalid(format!(
            "element has {} coefficients but the field has degree {}",
            coeffs.len(),
            f.degree()
        )));
    }
    if f.characteristic() > 0 {
        let residues = coeffs
            .iter()
            .map(|c| {
                c.as_i64()
                    .ok_or_else(|| invalid("finite field coefficients must be integers"))
            })
            .collect::<Result<Vec<i64>>>()?;
        f.from_residues(&residues)
    } else {
        let rats = coeffs.iter().map(parse_rational).collect::<Result<Vec<_>>>()?;
        f.from_rationals(&rats)
    }
}

/// Point as an array of element encodings, coordinates `x_1 ... x_{n+1}`.
pub fn point_json(p: &ProjectivePoint) -> Value {
    Value::Array(p.coords().iter().map(element_json).collect())
}

/// Canonical curve object: `{"field", "k", "lambdas", "n"}`.
pub fn curve_json(c: &CurveSpec) -> Value {
    json!({
        "field": field_json(c.field()),
        "k": c.k(),
        "lambdas": Value::Array(c.lambdas().iter().map(element_json).collect()),
        "n": c.n(),
    })
}

/// Parses a curve object produced by [`curve_json`] or written by hand.
pub fn parse_curve(v: &Value) -> Result<CurveSpec> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid("curve must be a JSON object"))?;
    let field = parse_field(
        obj.get("field")
            .ok_or_else(|| invalid("curve needs a \"field\" descriptor"))?,
    )?;
    let k = obj
        .get("k")
        .and_then(Value::as_u64)
        .ok_or_else(|| invalid("curve needs a positive integer \"k\""))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| invalid("curve needs a positive integer \"n\""))? as usize;
    let lambdas = obj
        .get("lambdas")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("curve needs a \"lambdas\" array"))?
        .iter()
        .map(|l| parse_element(&field, l))
        .collect::<Result<Vec<_>>>()?;
    if lambdas.len() + 2 != n {
        return Err(invalid(format!(
            "dimension n = {} needs {} lambda values, got {}",
            n,
            n.saturating_sub(2),
            lambdas.len()
        )));
    }
    CurveSpec::new(k, n, lambdas, &field)
}

/// Parses a curve from JSON text.
pub fn parse_curve_str(s: &str) -> Result<CurveSpec> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| invalid(format!("curve is not valid JSON: {e}")))?;
    parse_curve(&v)
}

/// SHA-256 of the compact canonical curve encoding, as lowercase hex.
pub fn curve_hash(c: &CurveSpec) -> String {
    let text = serde_json::to_string(&curve_json(c)).expect("curve JSON serializes");
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Derives a 64-bit seed from a curve hash and a purpose-specific salt, so
/// different report kinds over the same curve draw independent streams.
pub fn derive_seed(hash: &str, salt: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(hash.as_bytes());
    hasher.update(b"/");
    hasher.update(salt.as_bytes());
    let digest = hasher.finalize();
    u64::from_be_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Error object for CLI output: `{"error": {"code", "message", "context"}}`.
pub fn error_json(e: &Error, context: &str) -> Value {
    json!({
        "error": {
            "code": e.exit_code(),
            "message": e.to_string(),
            "context": context,
        }
    })
}

/// Parses a square matrix of field elements, one JSON array per row.
pub fn parse_matrix(f: &Field, v: &Value) -> Result<Vec<Vec<FieldElement>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| invalid("matrix must be a JSON array of rows"))?;
    let parsed: Vec<Vec<FieldElement>> = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| invalid("matrix rows must be JSON arrays"))?
                .iter()
                .map(|e| parse_element(f, e))
                .collect()
        })
        .collect::<Result<_>>()?;
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != parsed.len()) {
        return Err(invalid("matrix must be square and nonempty"));
    }
    Ok(parsed)
}

fn report_base(c: &CurveSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(SCHEMA));
    m.insert("curve".into(), Value::from(curve_hash(c)));
    m
}

/// Genus report, exact over any coefficient field.
pub fn genus_json(c: &CurveSpec) -> Result<Value> {
    let mut m = report_base(c);
    m.insert("k".into(), Value::from(c.k()));
    m.insert("n".into(), Value::from(c.n()));
    m.insert("genus".into(), Value::from(c.genus()?));
    m.insert("canonical_degree".into(), Value::from(c.canonical_degree()?));
    m.insert("covering_degree".into(), Value::from(c.covering_degree()?));
    m.insert("fiber_size".into(), Value::from(c.fiber_size()?));
    Ok(Value::Object(m))
}

/// Human-oriented description: forms, branch values, genus.
pub fn describe_json(c: &CurveSpec) -> Result<Value> {
    let mut m = report_base(c);
    m.insert("field".into(), field_json(c.field()));
    m.insert("field_name".into(), Value::from(c.field().name()));
    m.insert("k".into(), Value::from(c.k()));
    m.insert("n".into(), Value::from(c.n()));
    m.insert(
        "lambdas".into(),
        Value::Array(c.lambdas().iter().map(element_json).collect()),
    );
    m.insert(
        "forms".into(),
        Value::Array(c.form_strings().into_iter().map(Value::from).collect()),
    );
    m.insert(
        "branch_values".into(),
        Value::Array(
            c.branch_values()
                .iter()
                .map(|b| Value::from(b.to_string()))
                .collect(),
        ),
    );
    m.insert("genus".into(), Value::from(c.genus()?));
    m.insert("degenerate".into(), Value::from(c.is_degenerate()));
    Ok(Value::Object(m))
}

/// Jacobian rank check at every coordinate-hyperplane point.
pub fn smooth_json(c: &CurveSpec) -> Result<Value> {
    c.ensure_nondegenerate()?;
    let mut requirements = c.all_fixed_root_requirements()?;
    requirements.push((c.field().one(), c.k()));
    let (_, emb) = crate::field::roots::extend_for_roots(c.field(), &requirements)?;
    let cw = c.embed(&emb)?;
    let expected = cw.n() - 1;
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for j in 1..=cw.n() + 1 {
        for p in cw.fixed_points(j)? {
            let rank = cw.jacobian_rank_at(&p)?;
            checked += 1;
            if rank != expected {
                failures.push(json!({ "point": point_json(&p), "rank": rank }));
            }
        }
    }
    let mut m = report_base(c);
    m.insert("working_field".into(), field_json(cw.field()));
    m.insert("expected_rank".into(), Value::from(expected));
    m.insert("points_checked".into(), Value::from(checked));
    m.insert("smooth".into(), Value::from(failures.is_empty()));
    m.insert("failures".into(), Value::Array(failures));
    Ok(Value::Object(m))
}

fn perm_one_based(perm: &[usize]) -> Value {
    Value::Array(perm.iter().map(|&j| Value::from(j as u64 + 1)).collect())
}

fn matrix_json(rows: &[Vec<FieldElement>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| Value::Array(row.iter().map(element_json).collect()))
            .collect(),
    )
}

fn moebius_json(t: &MoebiusMap) -> Value {
    let e = t.entries();
    json!([
        [element_json(&e[0]), element_json(&e[1])],
        [element_json(&e[2]), element_json(&e[3])],
    ])
}

/// Full automorphism group report.
pub fn aut_report_json(r: &AutReport) -> Value {
    let g0: Vec<Value> = r
        .g0
        .iter()
        .zip(&r.lifts)
        .map(|(t, lift)| {
            json!({
                "matrix": moebius_json(t),
                "branch_permutation": perm_one_based(&lift.branch_perm),
            })
        })
        .collect();
    let lifts: Vec<Value> = r
        .lifts
        .iter()
        .map(|lift| {
            json!({
                "perm": perm_one_based(lift.aut.perm()),
                "scalars": Value::Array(lift.aut.scalars().iter().map(element_json).collect()),
                "certificate": matrix_json(&lift.certificate),
            })
        })
        .collect();
    let mut m = report_base(&r.base_curve);
    m.insert("field".into(), field_json(r.base_curve.field()));
    m.insert("working_field".into(), field_json(r.curve.field()));
    m.insert("g0".into(), Value::Array(g0));
    m.insert("g0_order".into(), Value::from(r.g0_order));
    m.insert("lifts".into(), Value::Array(lifts));
    m.insert("L_order".into(), Value::from(r.l_order));
    m.insert("h0_normal".into(), Value::from(r.h0_normal));
    m.insert("qform_applicable".into(), Value::from(r.qform_applicable));
    m.insert("k_n1_coprime".into(), Value::from(r.k_n1_coprime));
    Value::Object(m)
}

/// Matrix-form automorphism certificate for `k - 1 = p^h`.
pub fn qform_json(c: &CurveSpec, cert: &QFormCertificate) -> Value {
    let mut m = report_base(c);
    m.insert("q".into(), Value::from(cert.q));
    m.insert("h".into(), Value::from(cert.h));
    m.insert("pass".into(), Value::from(cert.pass));
    m.insert(
        "first_violation".into(),
        match cert.first_violation {
            Some((i, nu, mu)) => json!([i, nu, mu]),
            None => Value::Null,
        },
    );
    m.insert(
        "b".into(),
        match &cert.b {
            Some(b) => matrix_json(b),
            None => Value::Null,
        },
    );
    Value::Object(m)
}

/// One osculation record: point, Hermite invariants, ramification indices.
pub fn osc_point_json(op: &OscPoint) -> Value {
    json!({
        "point": point_json(&op.point),
        "h": op.data.h,
        "b": op.data.b,
        "l": op.data.l,
        "hyperosculating": op.data.hyperosculating,
    })
}

/// Hyper-osculation survey over all fixed points plus random samples.
pub fn survey_json(base: &CurveSpec, r: &SurveyReport) -> Value {
    let mut m = report_base(base);
    m.insert("working_field".into(), field_json(r.curve.field()));
    m.insert("truncation".into(), Value::from(r.truncation));
    m.insert(
        "fixed".into(),
        Value::Array(r.fixed.iter().map(osc_point_json).collect()),
    );
    m.insert(
        "samples".into(),
        Value::Array(r.samples.iter().map(osc_point_json).collect()),
    );
    m.insert(
        "all_fixed_hyperosculating".into(),
        Value::from(r.all_fixed_hyperosculating),
    );
    m.insert(
        "all_samples_classical".into(),
        Value::from(r.all_samples_classical),
    );
    m.insert(
        "counterexamples".into(),
        Value::Array(r.counterexamples.iter().cloned().map(Value::from).collect()),
    );
    Value::Object(m)
}

fn i128_value(v: i128) -> Value {
    Value::from(i64::try_from(v).expect("report quantity fits in 64 bits"))
}

/// Ramification totals and the closed osculating-degree recurrence.
pub fn pluecker_json(c: &CurveSpec, r: &PlueckerReport) -> Value {
    let mut m = report_base(c);
    m.insert(
        "b_totals".into(),
        Value::Array(r.b_totals.iter().map(|&v| i128_value(v)).collect()),
    );
    m.insert(
        "b_targets".into(),
        Value::Array(r.b_targets.iter().map(|&v| i128_value(v)).collect()),
    );
    m.insert("targets_match".into(), Value::from(r.targets_match));
    m.insert(
        "d".into(),
        Value::Array(r.d.iter().map(|&v| i128_value(v)).collect()),
    );
    m.insert("closure".into(), Value::from(r.closure));
    m.insert(
        "totals".into(),
        json!({
            "lhs": i128_value(r.totals_lhs),
            "rhs": i128_value(r.totals_rhs),
            "match": r.totals_match,
        }),
    );
    Value::Object(m)
}

fn base_key(b: &P1Value) -> String {
    b.to_string()
}

/// Rational point census, with the orbit decomposition when available.
pub fn census_json(c: &CurveSpec, census: &PointCensus, orbits: Option<&OrbitReport>) -> Value {
    let mut fibers = Map::new();
    for (base, size) in &census.fiber_sizes {
        fibers.insert(base_key(base), Value::from(*size as u64));
    }
    let mut m = report_base(c);
    m.insert("q".into(), Value::from(census.q));
    m.insert("count".into(), Value::from(census.count() as u64));
    m.insert("fiber_histogram".into(), Value::Object(fibers));
    m.insert(
        "weil".into(),
        json!({
            "lhs": i128_value(census.weil_lhs),
            "rhs": i128_value(census.weil_rhs),
            "ok": census.weil_ok,
        }),
    );
    if let Some(rep) = orbits {
        let mut sizes = Map::new();
        for (size, mult) in &rep.orbit_sizes {
            sizes.insert(size.to_string(), Value::from(*mult as u64));
        }
        let orbit_list: Vec<Value> = rep
            .orbits
            .iter()
            .map(|o| {
                json!({
                    "representative": point_json(&o.representative),
                    "size": o.size,
                    "stabilizer_order": o.stabilizer_order,
                    "base": base_key(&o.base),
                })
            })
            .collect();
        m.insert("orbit_sizes".into(), Value::Object(sizes));
        m.insert("orbits".into(), Value::Array(orbit_list));
        m.insert(
            "orbit_checks".into(),
            json!({
                "sizes_divide_group": rep.sizes_divide_group,
                "orbit_stabilizer_consistent": rep.orbit_stabilizer_consistent,
                "stabilizers_single_fiber": rep.stabilizers_single_fiber,
                "fixed_points_in_small_orbits": rep.fixed_points_in_small_orbits,
                "fibers_single_orbits": rep.fibers_single_orbits,
                "base_constant_on_orbits": rep.base_constant_on_orbits,
            }),
        );
    }
    Value::Object(m)
}
