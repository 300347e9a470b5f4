//! Canonical JSON forms for the core types, used by scenario and report
//! files. Rationals travel as "p/q" strings and maps are emitted in sorted
//! order, so serialize-parse-serialize is byte stable.

use num::bigint::BigInt;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::CoreError;
use crate::filter::{FilterFunctional, TailFamily};
use crate::ground::{GroundKind, GroundSpace};
use crate::kernel::{CombinedKernel, Kernel, KernelRule, RuleValue};
use crate::measure::Measure;
use crate::rat::{parse_q, Q};
use crate::set::{Interval, SetExpr};

/// Filter definitions keyed by id, as declared by a scenario.
pub type FilterRegistry = BTreeMap<String, FilterFunctional>;

fn bad(path: &str, message: impl Into<String>) -> CoreError {
    CoreError::Invalid(format!("at {path}: {}", message.into()))
}

fn as_object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CoreError> {
    value
        .as_object()
        .ok_or_else(|| bad(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, CoreError> {
    obj.get(key)
        .ok_or_else(|| bad(path, format!("missing field {key:?}")))
}

fn str_field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a str, CoreError> {
    field(obj, key, path)?
        .as_str()
        .ok_or_else(|| bad(&format!("{path}.{key}"), "expected a string"))
}

fn q_field(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Q, CoreError> {
    parse_q(str_field(obj, key, path)?).map_err(|e| bad(&format!("{path}.{key}"), e.to_string()))
}

fn bigint_field(obj: &Map<String, Value>, key: &str, path: &str) -> Result<BigInt, CoreError> {
    let text = str_field(obj, key, path)?;
    BigInt::from_str(text).map_err(|e| bad(&format!("{path}.{key}"), e.to_string()))
}

pub fn ground_to_json(ground: &GroundSpace) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(ground.kind().name()));
    obj.insert("label".into(), json!(ground.label()));
    if ground.is_finite() {
        obj.insert("points".into(), json!(ground.enumerated()));
    }
    Value::Object(obj)
}

pub fn ground_from_json(value: &Value, path: &str) -> Result<GroundSpace, CoreError> {
    let obj = as_object(value, path)?;
    let kind = GroundKind::parse(str_field(obj, "kind", path)?)?;
    let label = str_field(obj, "label", path)?.to_string();
    match kind {
        GroundKind::UnitIntervalRationals => Ok(GroundSpace::unit_interval(label)),
        GroundKind::Integers => Ok(GroundSpace::integers(label)),
        GroundKind::FiniteLabeled => {
            let points = field(obj, "points", path)?
                .as_array()
                .ok_or_else(|| bad(&format!("{path}.points"), "expected an array"))?
                .iter()
                .map(|p| {
                    p.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| bad(&format!("{path}.points"), "expected strings"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            GroundSpace::finite_labeled(label, points)
        }
    }
}

pub fn set_to_json(expr: &SetExpr) -> Value {
    match expr {
        SetExpr::Empty => json!({"op": "empty"}),
        SetExpr::Full => json!({"op": "full"}),
        SetExpr::Interval(iv) => json!({
            "op": "interval",
            "lo": iv.lo.as_ref().map(|v| v.to_string()),
            "lo_closed": iv.lo_closed,
            "hi": iv.hi.as_ref().map(|v| v.to_string()),
            "hi_closed": iv.hi_closed,
        }),
        SetExpr::Points(ps) => json!({
            "op": "points",
            "members": ps.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        }),
        SetExpr::Residue { modulus, residue } => json!({
            "op": "residue",
            "modulus": modulus.to_string(),
            "residue": residue.to_string(),
        }),
        SetExpr::Union(a, b) => json!({"op": "union", "args": [set_to_json(a), set_to_json(b)]}),
        SetExpr::Intersection(a, b) => {
            json!({"op": "intersection", "args": [set_to_json(a), set_to_json(b)]})
        }
        SetExpr::Difference(a, b) => {
            json!({"op": "difference", "args": [set_to_json(a), set_to_json(b)]})
        }
        SetExpr::Complement(a) => json!({"op": "complement", "args": [set_to_json(a)]}),
    }
}

pub fn set_from_json(
    value: &Value,
    ground: &GroundSpace,
    path: &str,
) -> Result<SetExpr, CoreError> {
    let obj = as_object(value, path)?;
    let op = str_field(obj, "op", path)?;
    let expr = match op {
        "empty" => SetExpr::Empty,
        "full" => SetExpr::Full,
        "interval" => {
            let bound = |key: &str| -> Result<Option<Q>, CoreError> {
                match obj.get(key) {
                    None | Some(Value::Null) => Ok(None),
                    Some(Value::String(s)) => parse_q(s)
                        .map(Some)
                        .map_err(|e| bad(&format!("{path}.{key}"), e.to_string())),
                    Some(_) => Err(bad(&format!("{path}.{key}"), "expected a rational string")),
                }
            };
            let lo = bound("lo")?;
            let hi = bound("hi")?;
            let lo_closed = obj
                .get("lo_closed")
                .map(|v| {
                    v.as_bool()
                        .ok_or_else(|| bad(path, "lo_closed must be a boolean"))
                })
                .transpose()?
                .unwrap_or(false);
            let hi_closed = obj
                .get("hi_closed")
                .map(|v| {
                    v.as_bool()
                        .ok_or_else(|| bad(path, "hi_closed must be a boolean"))
                })
                .transpose()?
                .unwrap_or(false);
            SetExpr::Interval(Interval::new(lo, lo_closed, hi, hi_closed))
        }
        "points" => {
            let members = field(obj, "members", path)?
                .as_array()
                .ok_or_else(|| bad(&format!("{path}.members"), "expected an array"))?;
            let mut points = Vec::with_capacity(members.len());
            for (i, m) in members.iter().enumerate() {
                let text = m
                    .as_str()
                    .ok_or_else(|| bad(&format!("{path}.members[{i}]"), "expected a string"))?;
                points.push(ground.parse_point(text)?);
            }
            SetExpr::points(points)
        }
        "residue" => SetExpr::Residue {
            modulus: bigint_field(obj, "modulus", path)?,
            residue: bigint_field(obj, "residue", path)?,
        },
        "union" | "intersection" | "difference" | "complement" => {
            let args = field(obj, "args", path)?
                .as_array()
                .ok_or_else(|| bad(&format!("{path}.args"), "expected an array"))?;
            let mut parsed: Vec<SetExpr> = Vec::with_capacity(args.len());
            for (i, a) in args.iter().enumerate() {
                parsed.push(set_from_json(a, ground, &format!("{path}.args[{i}]"))?);
            }
            match op {
                "complement" => {
                    if parsed.len() != 1 {
                        return Err(bad(path, "complement takes exactly one argument"));
                    }
                    parsed.remove(0).complement()
                }
                "difference" => {
                    if parsed.len() != 2 {
                        return Err(bad(path, "difference takes exactly two arguments"));
                    }
                    let b = parsed.pop().expect("len 2");
                    let a = parsed.pop().expect("len 2");
                    a.difference(b)
                }
                _ => {
                    if parsed.len() < 2 {
                        return Err(bad(path, format!("{op} takes at least two arguments")));
                    }
                    let mut iter = parsed.into_iter();
                    let first = iter.next().expect("len >= 2");
                    iter.fold(first, |acc, next| match op {
                        "union" => acc.union(next),
                        _ => acc.intersection(next),
                    })
                }
            }
        }
        other => return Err(bad(path, format!("unknown set op {other:?}"))),
    };
    crate::set::validate_for_ground(ground, &expr)?;
    Ok(expr)
}

pub fn filter_to_json(filter: &FilterFunctional) -> Value {
    let tails = match filter.family() {
        TailFamily::LeftOfPoint { point } => {
            json!({"family": "left-of-point", "point": point.to_string()})
        }
        TailFamily::RightOfPoint { point } => {
            json!({"family": "right-of-point", "point": point.to_string()})
        }
        TailFamily::GeqThreshold => json!({"family": "geq-threshold"}),
        TailFamily::LeqThreshold => json!({"family": "leq-threshold"}),
    };
    json!({"id": filter.id(), "tails": tails})
}

pub fn filter_from_json(
    value: &Value,
    ground: &GroundSpace,
    path: &str,
) -> Result<FilterFunctional, CoreError> {
    let obj = as_object(value, path)?;
    let id = str_field(obj, "id", path)?;
    let tails_path = format!("{path}.tails");
    let tails = as_object(field(obj, "tails", path)?, &tails_path)?;
    let family = match str_field(tails, "family", &tails_path)? {
        "left-of-point" => TailFamily::LeftOfPoint {
            point: q_field(tails, "point", &tails_path)?,
        },
        "right-of-point" => TailFamily::RightOfPoint {
            point: q_field(tails, "point", &tails_path)?,
        },
        "geq-threshold" => TailFamily::GeqThreshold,
        "leq-threshold" => TailFamily::LeqThreshold,
        other => return Err(bad(&tails_path, format!("unknown tail family {other:?}"))),
    };
    FilterFunctional::new(id, family, ground)
}

pub fn measure_to_json(measure: &Measure) -> Value {
    let atoms: Vec<Value> = measure
        .atomic()
        .weights()
        .iter()
        .map(|(p, w)| json!([p.to_string(), w.to_string()]))
        .collect();
    let pfa: Vec<Value> = measure
        .pfa()
        .terms()
        .iter()
        .map(|(f, c)| json!([f.id(), c.to_string()]))
        .collect();
    json!({"atoms": atoms, "pfa": pfa})
}

pub fn measure_from_json(
    value: &Value,
    ground: &GroundSpace,
    filters: &FilterRegistry,
    path: &str,
) -> Result<Measure, CoreError> {
    let obj = as_object(value, path)?;
    let mut atoms = Vec::new();
    if let Some(list) = obj.get("atoms") {
        let list = list
            .as_array()
            .ok_or_else(|| bad(&format!("{path}.atoms"), "expected an array"))?;
        for (i, entry) in list.iter().enumerate() {
            let entry_path = format!("{path}.atoms[{i}]");
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| bad(&entry_path, "expected a [point, weight] pair"))?;
            let point_text = pair[0]
                .as_str()
                .ok_or_else(|| bad(&entry_path, "point must be a string"))?;
            let weight_text = pair[1]
                .as_str()
                .ok_or_else(|| bad(&entry_path, "weight must be a string"))?;
            atoms.push((ground.parse_point(point_text)?, parse_q(weight_text)?));
        }
    }
    let mut terms = Vec::new();
    if let Some(list) = obj.get("pfa") {
        let list = list
            .as_array()
            .ok_or_else(|| bad(&format!("{path}.pfa"), "expected an array"))?;
        for (i, entry) in list.iter().enumerate() {
            let entry_path = format!("{path}.pfa[{i}]");
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| bad(&entry_path, "expected a [filter-id, coef] pair"))?;
            let id = pair[0]
                .as_str()
                .ok_or_else(|| bad(&entry_path, "filter id must be a string"))?;
            let coef_text = pair[1]
                .as_str()
                .ok_or_else(|| bad(&entry_path, "coefficient must be a string"))?;
            let filter = filters
                .get(id)
                .ok_or_else(|| bad(&entry_path, format!("undeclared filter id {id:?}")))?;
            terms.push((filter.clone(), parse_q(coef_text)?));
        }
    }
    Measure::from_parts(ground.clone(), atoms, terms)
}

fn rule_value_to_json(value: &RuleValue) -> Value {
    match value {
        RuleValue::Constant(m) => json!({"kind": "constant", "measure": measure_to_json(m)}),
        RuleValue::Diagonal { coef } => json!({"kind": "diagonal", "coef": coef.to_string()}),
        RuleValue::PointTarget { target, coef } => json!({
            "kind": "point",
            "target": target.to_string(),
            "coef": coef.to_string(),
        }),
        RuleValue::Shift { offset, coef } => json!({
            "kind": "shift",
            "offset": offset.to_string(),
            "coef": coef.to_string(),
        }),
    }
}

fn rule_value_from_json(
    value: &Value,
    ground: &GroundSpace,
    filters: &FilterRegistry,
    path: &str,
) -> Result<RuleValue, CoreError> {
    let obj = as_object(value, path)?;
    match str_field(obj, "kind", path)? {
        "constant" => {
            let measure_path = format!("{path}.measure");
            let measure =
                measure_from_json(field(obj, "measure", path)?, ground, filters, &measure_path)?;
            Ok(RuleValue::Constant(measure))
        }
        "diagonal" => Ok(RuleValue::Diagonal {
            coef: q_field(obj, "coef", path)?,
        }),
        "point" => Ok(RuleValue::PointTarget {
            target: ground.parse_point(str_field(obj, "target", path)?)?,
            coef: q_field(obj, "coef", path)?,
        }),
        "shift" => Ok(RuleValue::Shift {
            offset: bigint_field(obj, "offset", path)?,
            coef: q_field(obj, "coef", path)?,
        }),
        other => Err(bad(path, format!("unknown rule value kind {other:?}"))),
    }
}

pub fn kernel_to_json(kernel: &Kernel) -> Value {
    let rules: Vec<Value> = kernel
        .rules()
        .iter()
        .map(|r| {
            json!({
                "piece": set_to_json(&r.piece),
                "value": rule_value_to_json(&r.value),
            })
        })
        .collect();
    json!({"ground": ground_to_json(kernel.ground()), "rules": rules})
}

pub fn kernel_from_json(
    value: &Value,
    filters: &FilterRegistry,
    path: &str,
) -> Result<Kernel, CoreError> {
    let obj = as_object(value, path)?;
    let ground = ground_from_json(field(obj, "ground", path)?, &format!("{path}.ground"))?;
    let rules_value = field(obj, "rules", path)?
        .as_array()
        .ok_or_else(|| bad(&format!("{path}.rules"), "expected an array"))?;
    let mut rules = Vec::with_capacity(rules_value.len());
    for (i, rule) in rules_value.iter().enumerate() {
        let rule_path = format!("{path}.rules[{i}]");
        let rule_obj = as_object(rule, &rule_path)?;
        let piece = set_from_json(
            field(rule_obj, "piece", &rule_path)?,
            &ground,
            &format!("{rule_path}.piece"),
        )?;
        let value = rule_value_from_json(
            field(rule_obj, "value", &rule_path)?,
            &ground,
            filters,
            &format!("{rule_path}.value"),
        )?;
        rules.push(KernelRule::new(piece, value));
    }
    Kernel::new(ground, rules)
}

pub fn combined_to_json(combined: &CombinedKernel) -> Value {
    json!({
        "q1": combined.q1().to_string(),
        "q2": combined.q2().to_string(),
        "ca": kernel_to_json(combined.ca_part()),
        "pfa": kernel_to_json(combined.pfa_part()),
    })
}

pub fn combined_from_json(
    value: &Value,
    filters: &FilterRegistry,
    path: &str,
) -> Result<CombinedKernel, CoreError> {
    let obj = as_object(value, path)?;
    let q1 = q_field(obj, "q1", path)?;
    let ca = kernel_from_json(field(obj, "ca", path)?, filters, &format!("{path}.ca"))?;
    let pfa = kernel_from_json(field(obj, "pfa", path)?, filters, &format!("{path}.pfa"))?;
    CombinedKernel::from_scaled_parts(q1, ca, pfa)
}
