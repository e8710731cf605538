//! Presentation documents: { "generators": [{name, weight, role}], "relators": [expr], "central": [name] }.

use crate::CliError;
use kvlie::catalog::RELATOR_DEG;
use kvlie::exact::expr::lie_to_expr;
use kvlie::exact::{parse, Alphabet, Role, Symbol};
use kvlie::presented::Presentation;
use serde_json::{json, Value};
use std::sync::Arc;

fn role_name(r: Role) -> &'static str {
    match r {
        Role::X => "x",
        Role::Y => "y",
        Role::T => "t",
        Role::Z => "z",
        Role::Center => "c",
        Role::Plain => "plain",
    }
}

pub fn to_json(p: &Presentation) -> Value {
    let a = &p.alpha;
    let gens: Vec<Value> = a.symbols().iter().map(|s| json!({"name": s.name, "weight": s.weight, "role": role_name(s.role)})).collect();
    let rels: Vec<Value> = p.relators.iter().map(|r| json!(lie_to_expr(r).map(|e| e.to_string()).unwrap_or_else(|| r.to_string()))).collect();
    let central: Vec<Value> = a.letters().filter(|&l| a.is_central(l)).map(|l| json!(a.name(l))).collect();
    json!({"name": p.name, "generators": gens, "relators": rels, "central": central})
}

fn bad(msg: impl ToString) -> CliError {
    CliError::new("presentation", msg)
}

pub fn from_json(v: &Value, deg: u32) -> Result<Presentation, CliError> {
    let central: Vec<&str> = match v.get("central") {
        None => Vec::new(),
        Some(c) => c.as_array().ok_or_else(|| bad("central must be a list"))?.iter().map(|x| x.as_str().ok_or_else(|| bad("central entries are names"))).collect::<Result<_, _>>()?,
    };
    let gens = v.get("generators").and_then(|g| g.as_array()).ok_or_else(|| bad("missing generators list"))?;
    let mut syms = Vec::new();
    for g in gens {
        let name = g.get("name").and_then(|n| n.as_str()).ok_or_else(|| bad("generator without name"))?;
        let weight = g.get("weight").map(|w| w.as_u64().ok_or_else(|| bad(format!("weight of {name} must be a positive integer")))).transpose()?.unwrap_or(1);
        if weight == 0 {
            return Err(bad(format!("weight of {name} must be a positive integer")));
        }
        let s = Symbol::plain(name, weight as u32);
        syms.push(if central.contains(&name) { s.central() } else { s });
    }
    for c in &central {
        if !syms.iter().any(|s| s.name == *c) {
            return Err(bad(format!("central name {c} is not a generator")));
        }
    }
    let alpha = Arc::new(Alphabet::new(syms).map_err(bad)?);
    let rels = match v.get("relators") {
        None => Vec::new(),
        Some(r) => r.as_array().ok_or_else(|| bad("relators must be a list"))?.clone(),
    };
    let d = deg.max(RELATOR_DEG);
    let mut out = Vec::new();
    for r in rels {
        let s = r.as_str().ok_or_else(|| bad("relators are expression strings"))?;
        let e = parse(s).map_err(|e| CliError::new("parse", e))?;
        out.push(e.eval_lie(&alpha, d).map_err(|e| CliError::new("eval", e))?);
    }
    let name = v.get("name").and_then(|n| n.as_str()).unwrap_or("presentation");
    Ok(Presentation::new(name, alpha, out))
}
