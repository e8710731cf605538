//! Free Lie algebra elements in Lyndon coordinates.

use super::alphabet::{Alphabet, Letter};
use super::scalar::Scalar;
use super::tensor::{add_into, TensorElement};
use super::word::{is_lyndon, lyndon_expansion, standard_factorization, word, Word};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("tensor is not a Lie element (non-Lyndon leading word {0})")]
    NotLie(String),
}

/// Σ c_w P(w) over Lyndon words w, truncated at weight `deg`.
#[derive(Clone, Debug)]
pub struct LieElement {
    pub alpha: Arc<Alphabet>,
    pub deg: u32,
    pub terms: BTreeMap<Word, Scalar>,
}

impl PartialEq for LieElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl LieElement {
    pub fn zero(alpha: &Arc<Alphabet>, deg: u32) -> Self {
        LieElement { alpha: alpha.clone(), deg, terms: BTreeMap::new() }
    }

    pub fn generator(alpha: &Arc<Alphabet>, deg: u32, l: Letter) -> Self {
        let mut e = Self::zero(alpha, deg);
        e.add_term(word(&[l]), Scalar::one());
        e
    }

    /// The basis element P(w) for a Lyndon word `w`.
    pub fn basis(alpha: &Arc<Alphabet>, deg: u32, w: &[Letter]) -> Self {
        assert!(is_lyndon(w));
        let mut e = Self::zero(alpha, deg);
        e.add_term(word(w), Scalar::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[Letter]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if self.alpha.word_weight(&w) <= self.deg {
            add_into(&mut self.terms, w, c);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &LieElement, c: &Scalar) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut r = self.clone();
        r.add_assign_scaled(other, &Scalar::one());
        r
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        let mut r = self.clone();
        r.add_assign_scaled(other, &Scalar::int(-1));
        r
    }

    pub fn scale(&self, c: &Scalar) -> LieElement {
        let mut r = Self::zero(&self.alpha, self.deg);
        r.add_assign_scaled(self, c);
        r
    }

    pub fn neg(&self) -> LieElement {
        self.scale(&Scalar::int(-1))
    }

    pub fn with_deg(&self, deg: u32) -> LieElement {
        let mut r = Self::zero(&self.alpha, deg);
        for (w, c) in &self.terms {
            r.add_term(w.clone(), c.clone());
        }
        r
    }

    pub fn to_tensor(&self) -> TensorElement {
        let mut t = TensorElement::zero(&self.alpha, self.deg);
        for (w, c) in &self.terms {
            for (v, k) in lyndon_expansion(w).iter() {
                add_into(&mut t.terms, v.clone(), c * &Scalar::int(*k));
            }
        }
        t
    }

    /// Inverse of `to_tensor`, failing if `t` is not in the Lie subalgebra.
    pub fn from_tensor(t: &TensorElement) -> Result<LieElement, LieError> {
        let mut rest = t.terms.clone();
        let mut out = LieElement::zero(&t.alpha, t.deg);
        while let Some((w, c)) = rest.pop_first() {
            if !is_lyndon(&w) {
                let names: Vec<&str> = w.iter().map(|&l| t.alpha.name(l)).collect();
                return Err(LieError::NotLie(names.join(" ")));
            }
            for (v, k) in lyndon_expansion(&w).iter().skip(1) {
                add_into(&mut rest, v.clone(), &c * &Scalar::int(-*k));
            }
            out.terms.insert(w, c);
        }
        Ok(out)
    }

    pub fn bracket(&self, other: &LieElement) -> LieElement {
        let deg = self.deg.min(other.deg);
        let mut out = BTreeMap::new();
        let rhs: Vec<(&Word, &Scalar, u32)> = other.terms.iter().map(|(w, c)| (w, c, self.alpha.word_weight(w))).collect();
        for (u, cu) in &self.terms {
            let ku = self.alpha.word_weight(u);
            for (v, cv, kv) in &rhs {
                if ku + kv > deg || u == *v {
                    continue;
                }
                let c = cu * cv;
                for (w, k) in basis_bracket(u, v).iter() {
                    add_into(&mut out, w.clone(), c.mul_q(&crate::exact::scalar::q(*k)));
                }
            }
        }
        LieElement { alpha: self.alpha.clone(), deg, terms: out }
    }

    pub fn homogeneous_part(&self, d: u32) -> LieElement {
        let mut r = Self::zero(&self.alpha, self.deg);
        for (w, c) in &self.terms {
            if self.alpha.word_weight(w) == d {
                r.terms.insert(w.clone(), c.clone());
            }
        }
        r
    }

    pub fn weights(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|w| self.alpha.word_weight(w)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Drops basis words of length >= 2 containing a central letter.
    pub fn project_central(&self) -> LieElement {
        let mut r = Self::zero(&self.alpha, self.deg);
        for (w, c) in &self.terms {
            if w.len() == 1 || !w.iter().any(|&l| self.alpha.is_central(l)) {
                r.terms.insert(w.clone(), c.clone());
            }
        }
        r
    }

    pub fn scalars(&self) -> impl Iterator<Item = &Scalar> {
        self.terms.values()
    }

    /// Exponential in the completed tensor algebra.
    pub fn exp(&self) -> TensorElement {
        self.to_tensor().exp()
    }
}

type BracketTable = RwLock<HashMap<(Word, Word), Arc<Vec<(Word, i64)>>>>;

fn bracket_cache() -> &'static BracketTable {
    static C: OnceLock<BracketTable> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// [P(u), P(v)] in Lyndon coordinates, for Lyndon words u and v (cached, integer coefficients).
pub fn basis_bracket(u: &[Letter], v: &[Letter]) -> Arc<Vec<(Word, i64)>> {
    if u == v {
        return Arc::new(Vec::new());
    }
    if u > v {
        let r = basis_bracket(v, u);
        return Arc::new(r.iter().map(|(w, c)| (w.clone(), -c)).collect());
    }
    let key = (word(u), word(v));
    if let Some(r) = bracket_cache().read().unwrap().get(&key) {
        return r.clone();
    }
    let pu = lyndon_expansion(u);
    let pv = lyndon_expansion(v);
    let mut t: BTreeMap<Word, i64> = BTreeMap::new();
    for (a, ca) in pu.iter() {
        for (b, cb) in pv.iter() {
            let c = ca.checked_mul(*cb).expect("structure constant overflow");
            *t.entry(super::word::concat(a, b)).or_insert(0) += c;
            *t.entry(super::word::concat(b, a)).or_insert(0) -= c;
        }
    }
    t.retain(|_, c| *c != 0);
    let mut out = Vec::new();
    while let Some((w, c)) = t.pop_first() {
        debug_assert!(is_lyndon(&w));
        for (x, k) in lyndon_expansion(&w).iter().skip(1) {
            let e = t.entry(x.clone()).or_insert(0);
            *e -= c.checked_mul(*k).expect("structure constant overflow");
            if *e == 0 {
                t.remove(x);
            }
        }
        out.push((w, c));
    }
    let r = Arc::new(out);
    bracket_cache().write().unwrap().insert(key, r.clone());
    r
}

/// log(e^{a_1} ⋯ e^{a_k}) as a Lie element.
pub fn bch(args: &[LieElement]) -> LieElement {
    assert!(!args.is_empty());
    let deg = args.iter().map(|a| a.deg).min().unwrap();
    let mut p = TensorElement::one(&args[0].alpha, deg);
    for a in args {
        p = p.mul(&a.with_deg(deg).exp());
    }
    LieElement::from_tensor(&p.log()).expect("log of a product of exponentials of Lie elements is Lie")
}

pub fn bracket_string(alpha: &Alphabet, w: &[Letter]) -> String {
    if w.len() == 1 {
        return alpha.name(w[0]).to_string();
    }
    let (u, v) = standard_factorization(w);
    format!("[{},{}]", bracket_string(alpha, u), bracket_string(alpha, v))
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c}) {}", bracket_string(&self.alpha, w))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::qf;

    #[test]
    fn bch_low_weights() {
        let a = Alphabet::plain(&["x", "y"]);
        let x = LieElement::generator(&a, 3, 0);
        let y = LieElement::generator(&a, 3, 1);
        let z = bch(&[x.clone(), y.clone()]);
        assert_eq!(z.coeff(&[0]), Scalar::one());
        assert_eq!(z.coeff(&[0, 1]), Scalar::Rat(qf(1, 2)));
        assert_eq!(z.coeff(&[0, 0, 1]), Scalar::Rat(qf(1, 12)));
        assert_eq!(z.coeff(&[0, 1, 1]), Scalar::Rat(qf(1, 12)));
    }

    #[test]
    fn cached_bracket_matches_tensor_route() {
        let a = Alphabet::plain(&["x", "y", "z"]);
        let g: Vec<LieElement> = (0..3).map(|l| LieElement::generator(&a, 5, l)).collect();
        let p = g[0].bracket(&g[1]).bracket(&g[2]).add(&g[2].bracket(&g[0]));
        let r = g[1].bracket(&g[0].bracket(&g[2]));
        let via = LieElement::from_tensor(&p.to_tensor().commutator(&r.to_tensor())).unwrap();
        assert_eq!(p.bracket(&r), via);
    }

    #[test]
    fn non_lie_tensor_rejected() {
        let a = Alphabet::plain(&["x", "y"]);
        let t = TensorElement::monomial(&a, 3, &[1, 0], Scalar::one());
        assert!(LieElement::from_tensor(&t).is_err());
    }

    #[test]
    fn bracket_antisymmetric() {
        let a = Alphabet::plain(&["x", "y", "z"]);
        let x = LieElement::generator(&a, 4, 0);
        let y = LieElement::generator(&a, 4, 1);
        let z = LieElement::generator(&a, 4, 2);
        let xy = x.bracket(&y);
        assert_eq!(xy, y.bracket(&x).neg());
        let j = x.bracket(&y.bracket(&z)).add(&y.bracket(&z.bracket(&x))).add(&z.bracket(&x.bracket(&y)));
        assert!(j.is_zero());
    }
}
