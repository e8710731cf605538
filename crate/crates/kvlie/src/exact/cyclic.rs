//! The trace space |T(H)| = T(H)/[T(H),T(H)], keyed by necklaces.

use super::alphabet::Alphabet;
use super::scalar::Scalar;
use super::tensor::{add_into, TensorElement, TensorPair};
use super::word::{min_rotation, Word};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct CyclicElement {
    pub alpha: Arc<Alphabet>,
    pub deg: u32,
    pub terms: BTreeMap<Word, Scalar>,
}

impl PartialEq for CyclicElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl CyclicElement {
    pub fn zero(alpha: &Arc<Alphabet>, deg: u32) -> Self {
        CyclicElement { alpha: alpha.clone(), deg, terms: BTreeMap::new() }
    }

    /// |t|
    pub fn project(t: &TensorElement) -> Self {
        let mut c = Self::zero(&t.alpha, t.deg);
        for (w, x) in &t.terms {
            add_into(&mut c.terms, min_rotation(w), x.clone());
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u8]) -> Scalar {
        self.terms.get(&min_rotation(w)).cloned().unwrap_or_default()
    }

    pub fn add_assign_scaled(&mut self, other: &CyclicElement, c: &Scalar) {
        for (w, x) in &other.terms {
            if self.alpha.word_weight(w) <= self.deg {
                add_into(&mut self.terms, w.clone(), x * c);
            }
        }
    }

    pub fn add(&self, other: &CyclicElement) -> CyclicElement {
        let mut r = self.clone();
        r.add_assign_scaled(other, &Scalar::one());
        r
    }

    pub fn sub(&self, other: &CyclicElement) -> CyclicElement {
        let mut r = self.clone();
        r.add_assign_scaled(other, &Scalar::int(-1));
        r
    }

    pub fn scale(&self, c: &Scalar) -> CyclicElement {
        let mut r = Self::zero(&self.alpha, self.deg);
        r.add_assign_scaled(self, c);
        r
    }

    pub fn with_deg(&self, deg: u32) -> CyclicElement {
        let mut r = Self::zero(&self.alpha, deg);
        r.add_assign_scaled(self, &Scalar::one());
        r
    }

    /// Representative in T(H): each necklace by its minimal rotation.
    pub fn lift(&self) -> TensorElement {
        TensorElement::from_terms(&self.alpha, self.deg, self.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
    }

    pub fn homogeneous_part(&self, d: u32) -> CyclicElement {
        let mut r = Self::zero(&self.alpha, self.deg);
        for (w, c) in &self.terms {
            if self.alpha.word_weight(w) == d {
                r.terms.insert(w.clone(), c.clone());
            }
        }
        r
    }
}

impl fmt::Display for CyclicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let ws: Vec<&str> = w.iter().map(|&l| self.alpha.name(l)).collect();
                format!("({c}) |{}|", if ws.is_empty() { "1".to_string() } else { ws.join(" ") })
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// |·| ⊗ |·|
#[derive(Clone, Debug)]
pub struct CyclicPair {
    pub alpha: Arc<Alphabet>,
    pub deg: u32,
    pub terms: BTreeMap<(Word, Word), Scalar>,
}

impl PartialEq for CyclicPair {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl CyclicPair {
    pub fn project(t: &TensorPair) -> Self {
        let mut terms = BTreeMap::new();
        for ((a, b), c) in &t.terms {
            let key = (min_rotation(a), min_rotation(b));
            match terms.entry(key) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
        CyclicPair { alpha: t.alpha.clone(), deg: t.deg, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for CyclicPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let name = |w: &Word| {
            let ws: Vec<&str> = w.iter().map(|&l| self.alpha.name(l)).collect();
            if ws.is_empty() {
                "1".to_string()
            } else {
                ws.join(" ")
            }
        };
        let parts: Vec<String> = self.terms.iter().map(|((a, b), c)| format!("({c}) |{}|⊗|{}|", name(a), name(b))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
