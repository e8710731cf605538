//! u^f_{g,1…n} = L(H) ⊕ K t_{**} and its action table by t^f_{g,1…n0}.

use super::{gen, make_tf_with_last, t, x, y, StrandSet};
use crate::exact::{Alphabet, LieElement, Scalar, Symbol};
use crate::presented::{GradedBasis, LieAlgebra, Presentation};
use crate::semidirect::{Action, ActionTable};
use rayon::prelude::*;
use std::sync::Arc;

/// Letters t_{j*} (j = 1…n), x_*^a, y_*^a and the central t_{**}.
pub fn uf_alphabet(g: usize, n: usize) -> Arc<Alphabet> {
    let mut s = Vec::new();
    for j in 1..=n {
        s.push(Symbol::t(&j.to_string(), "*"));
    }
    for a in 1..=g {
        s.push(Symbol::x("*", a));
    }
    for a in 1..=g {
        s.push(Symbol::y("*", a));
    }
    s.push(Symbol::t("*", "*").central());
    Arc::new(Alphabet::new(s).expect("u^f alphabet"))
}

pub fn uf_presentation(g: usize, n: usize) -> Presentation {
    Presentation::free(&format!("u^f_{{{g},{n}}}"), uf_alphabet(g, n))
}

/// ω⃗ = Σ_a [x_*^a, y_*^a] + Σ_j t_{j*}.
pub fn omega_vec(alpha: &Arc<Alphabet>, g: usize, n: usize, deg: u32) -> LieElement {
    let mut w = LieElement::zero(alpha, deg);
    for a in 1..=g {
        w = w.add(&gen(alpha, &x("*", a), deg).bracket(&gen(alpha, &y("*", a), deg)));
    }
    for j in 1..=n {
        w = w.add(&gen(alpha, &t(&j.to_string(), "*"), deg));
    }
    w
}

/// ω⃗ − c·t_{**}; the genuine ω_* has c = g − 1.
pub fn omega_star_with(alpha: &Arc<Alphabet>, g: usize, n: usize, c: i64, deg: u32) -> LieElement {
    omega_vec(alpha, g, n, deg).sub(&gen(alpha, &t("*", "*"), deg).scale(&Scalar::int(c)))
}

pub fn omega_star(alpha: &Arc<Alphabet>, g: usize, n: usize, deg: u32) -> LieElement {
    omega_star_with(alpha, g, n, g as i64 - 1, deg)
}

/// Deliberate corruptions used to show the verifier can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    None,
    /// (g − 1) → g inside ω_* only.
    OmegaOnly,
    /// (g − 1) → g inside ω_* and in the last relation at 0.
    LastRelation,
}

/// The action table of t^f_{g,1…n0} on u^f_{g,1…n}, with ω_* = ω⃗ − c·t_{**}.
pub fn uf_action_with(g: usize, n: usize, deg: u32, c: i64) -> ActionTable {
    let outer = StrandSet::base(g, n).alphabet();
    let ua = uf_alphabet(g, n);
    let om = omega_star_with(&ua, g, n, c, deg);
    let u = |name: &str| gen(&ua, name, deg);
    let br = |a: &LieElement, b: &LieElement| a.bracket(b);
    let zero = LieElement::zero(&ua, deg);
    let delta = |p: bool, e: LieElement| if p { e } else { zero.clone() };
    let mut table = Vec::new();
    for sym in outer.symbols() {
        let mut row = Vec::new();
        for w in ua.symbols() {
            let lab = &sym.labels;
            let is0 = |s: &str| s == "0";
            let v = match (sym.role, w.role) {
                (_, crate::exact::Role::T) if w.labels[0] == "*" => zero.clone(),
                (crate::exact::Role::T, crate::exact::Role::T) => {
                    let k = &w.labels[0];
                    let tk = u(&t(k, "*"));
                    let (i, j) = (&lab[0], &lab[1]);
                    match (is0(i), is0(j)) {
                        (false, false) => br(&tk, &delta(i == k, u(&t(j, "*"))).add(&delta(j == k, u(&t(i, "*"))))),
                        (false, true) | (true, false) => {
                            let i = if is0(i) { j } else { i };
                            br(&u(&t(i, "*")).add(&delta(i == k, om.clone())), &tk)
                        }
                        (true, true) => br(&tk, &om).scale(&Scalar::int(2)),
                    }
                }
                (crate::exact::Role::T, _) => {
                    let wv = u(&w.name);
                    let (i, j) = (&lab[0], &lab[1]);
                    match (is0(i), is0(j)) {
                        (false, false) => zero.clone(),
                        (false, true) | (true, false) => {
                            let i = if is0(i) { j } else { i };
                            br(&u(&t(i, "*")), &wv)
                        }
                        (true, true) => br(&wv, &om).scale(&Scalar::int(2)),
                    }
                }
                (role @ (crate::exact::Role::X | crate::exact::Role::Y), wrole) => {
                    let a = sym.handle.unwrap();
                    let i = &lab[0];
                    let me = if role == crate::exact::Role::X { u(&x("*", a)) } else { u(&y("*", a)) };
                    let sign = if role == crate::exact::Role::X { 1 } else { -1 };
                    match wrole {
                        crate::exact::Role::T => {
                            let k = &w.labels[0];
                            let tk = u(&t(k, "*"));
                            if is0(i) {
                                br(&me, &tk)
                            } else {
                                delta(i == k, br(&tk, &me))
                            }
                        }
                        _ => {
                            let b = w.handle.unwrap();
                            let wv = u(&w.name);
                            // x_i pairs with y, y_i pairs with x
                            let pairs = (role == crate::exact::Role::X) != (wrole == crate::exact::Role::X);
                            if is0(i) {
                                br(&me, &wv).sub(&delta(pairs && a == b, om.scale(&Scalar::int(sign))))
                            } else {
                                delta(pairs && a == b, u(&t(i, "*")).scale(&Scalar::int(sign)))
                            }
                        }
                    }
                }
                _ => unreachable!("t^f generators are x, y or t"),
            };
            row.push(v);
        }
        table.push(row);
    }
    ActionTable { table }
}

pub fn uf_action(g: usize, n: usize, deg: u32) -> ActionTable {
    uf_action_with(g, n, deg, g as i64 - 1)
}

#[derive(Clone, Debug)]
pub struct ActionEntry {
    pub relator: String,
    pub generator: String,
    pub residue: String,
}

#[derive(Clone, Debug)]
pub struct ActionReport {
    pub g: usize,
    pub n: usize,
    pub deg: u32,
    pub mutation: Mutation,
    pub relators_checked: usize,
    pub pairs_checked: usize,
    pub failures: Vec<ActionEntry>,
}

impl ActionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failing_relators(&self) -> Vec<String> {
        let mut v: Vec<String> = self.failures.iter().map(|f| f.relator.clone()).collect();
        v.dedup();
        v
    }
}

/// Checks that every relator of t^f_{g,1…n0} of weight ≤ D acts as zero on every generator of u^f.
/// Actions are computed exactly (inner truncation D + 2).
pub fn verify_action(g: usize, n: usize, deg: u32, mutation: Mutation) -> ActionReport {
    let c = match mutation {
        Mutation::None => g as i64 - 1,
        _ => g as i64,
    };
    let last = move |i: &str| if i == "0" && mutation == Mutation::LastRelation { g as i64 } else { g as i64 - 1 };
    let outer = make_tf_with_last(&StrandSet::base(g, n), &last);
    let inner_deg = deg + 2;
    let inner = GradedBasis::build(Arc::new(uf_presentation(g, n)), inner_deg).expect("free presentation");
    let table = uf_action_with(g, n, inner_deg, c);
    let action = Action::new(&inner, &table);
    let rels: Vec<(String, LieElement)> = outer
        .all_relators_labelled(super::RELATOR_DEG)
        .into_iter()
        .filter(|(_, r)| r.weights().iter().all(|&w| w <= deg))
        .collect();
    let ua = inner.alphabet().clone();
    let failures: Vec<Vec<ActionEntry>> = rels
        .par_iter()
        .map(|(label, r)| {
            let mut out = Vec::new();
            for w in ua.letters() {
                let res = action.act(r, &LieElement::generator(&ua, inner_deg, w));
                if !res.is_zero() {
                    out.push(ActionEntry { relator: label.clone(), generator: ua.name(w).to_string(), residue: res.to_string() });
                }
            }
            out
        })
        .collect();
    ActionReport {
        g,
        n,
        deg,
        mutation,
        relators_checked: rels.len(),
        pairs_checked: rels.len() * ua.len(),
        failures: failures.into_iter().flatten().collect(),
    }
}
