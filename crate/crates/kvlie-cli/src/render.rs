//! JSON renderings of algebra elements.

use kvlie::exact::expr::lie_to_expr;
use kvlie::exact::lie::bracket_string;
use kvlie::exact::{Alphabet, CyclicElement, CyclicPair, LieElement, TensorElement};
use serde_json::{json, Value};

fn word(alpha: &Alphabet, w: &[u8]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|&l| alpha.name(l)).collect::<Vec<_>>().join(" ")
}

pub fn lie(e: &LieElement) -> Value {
    let terms: Vec<Value> = e.terms.iter().map(|(w, c)| json!({"bracket": bracket_string(&e.alpha, w), "coeff": c.to_string()})).collect();
    json!({
        "expr": lie_to_expr(e).map(|x| x.to_string()),
        "terms": terms,
    })
}

pub fn tensor(e: &TensorElement) -> Value {
    Value::Array(e.terms.iter().map(|(w, c)| json!({"word": word(&e.alpha, w), "coeff": c.to_string()})).collect())
}

pub fn cyclic(e: &CyclicElement) -> Value {
    Value::Array(e.terms.iter().map(|(w, c)| json!({"necklace": word(&e.alpha, w), "coeff": c.to_string()})).collect())
}

pub fn cyclic_pair(e: &CyclicPair) -> Value {
    Value::Array(
        e.terms
            .iter()
            .map(|((a, b), c)| json!({"left": word(&e.alpha, a), "right": word(&e.alpha, b), "coeff": c.to_string()}))
            .collect(),
    )
}
