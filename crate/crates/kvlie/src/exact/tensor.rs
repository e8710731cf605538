//! Truncated tensor algebra T(H) with its cocommutative Hopf structure.

use super::alphabet::{Alphabet, Letter};
use super::scalar::{q, Scalar, Q};
use super::word::{concat, word, Word};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Noncommutative series truncated at total weight `deg`.
#[derive(Clone, Debug)]
pub struct TensorElement {
    pub alpha: Arc<Alphabet>,
    pub deg: u32,
    pub terms: BTreeMap<Word, Scalar>,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

pub(crate) fn add_into(m: &mut BTreeMap<Word, Scalar>, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match m.entry(w) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl TensorElement {
    pub fn zero(alpha: &Arc<Alphabet>, deg: u32) -> Self {
        TensorElement { alpha: alpha.clone(), deg, terms: BTreeMap::new() }
    }

    pub fn one(alpha: &Arc<Alphabet>, deg: u32) -> Self {
        Self::scalar(alpha, deg, Scalar::one())
    }

    pub fn scalar(alpha: &Arc<Alphabet>, deg: u32, c: Scalar) -> Self {
        let mut t = Self::zero(alpha, deg);
        add_into(&mut t.terms, Word::new(), c);
        t
    }

    pub fn letter(alpha: &Arc<Alphabet>, deg: u32, l: Letter) -> Self {
        Self::monomial(alpha, deg, &[l], Scalar::one())
    }

    pub fn monomial(alpha: &Arc<Alphabet>, deg: u32, w: &[Letter], c: Scalar) -> Self {
        let mut t = Self::zero(alpha, deg);
        if alpha.word_weight(w) <= deg {
            add_into(&mut t.terms, word(w), c);
        }
        t
    }

    pub fn from_terms(alpha: &Arc<Alphabet>, deg: u32, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut t = Self::zero(alpha, deg);
        for (w, c) in terms {
            if alpha.word_weight(&w) <= deg {
                add_into(&mut t.terms, w, c);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[Letter]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn counit(&self) -> Scalar {
        self.coeff(&[])
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if self.alpha.word_weight(&w) <= self.deg {
            add_into(&mut self.terms, w, c);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &TensorElement, c: &Scalar) {
        for (w, x) in &other.terms {
            if self.alpha.word_weight(w) <= self.deg {
                add_into(&mut self.terms, w.clone(), x * c);
            }
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut r = self.clone();
        r.add_assign_scaled(other, &Scalar::one());
        r
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        let mut r = self.clone();
        r.add_assign_scaled(other, &Scalar::int(-1));
        r
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        let mut r = Self::zero(&self.alpha, self.deg);
        r.add_assign_scaled(self, c);
        r
    }

    pub fn scale_q(&self, c: &Q) -> TensorElement {
        self.scale(&Scalar::Rat(c.clone()))
    }

    pub fn neg(&self) -> TensorElement {
        self.scale(&Scalar::int(-1))
    }

    pub fn with_deg(&self, deg: u32) -> TensorElement {
        TensorElement::from_terms(&self.alpha, deg, self.terms.clone())
    }

    pub fn mul(&self, other: &TensorElement) -> TensorElement {
        let deg = self.deg.min(other.deg);
        let mut out = BTreeMap::new();
        let rhs: Vec<(&Word, &Scalar, u32)> = other.terms.iter().map(|(w, c)| (w, c, self.alpha.word_weight(w))).collect();
        for (w1, c1) in &self.terms {
            let k1 = self.alpha.word_weight(w1);
            if k1 > deg {
                continue;
            }
            for (w2, c2, k2) in &rhs {
                if k1 + k2 <= deg {
                    add_into(&mut out, concat(w1, w2), c1 * c2);
                }
            }
        }
        TensorElement { alpha: self.alpha.clone(), deg, terms: out }
    }

    pub fn commutator(&self, other: &TensorElement) -> TensorElement {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, k: u32) -> TensorElement {
        let mut r = Self::one(&self.alpha, self.deg);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Lowest weight occurring (None for zero).
    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(|w| self.alpha.word_weight(w)).min()
    }

    pub fn homogeneous_part(&self, d: u32) -> TensorElement {
        TensorElement {
            alpha: self.alpha.clone(),
            deg: self.deg,
            terms: self.terms.iter().filter(|(w, _)| self.alpha.word_weight(w) == d).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    pub fn truncate(&self, d: u32) -> TensorElement {
        self.with_deg(d.min(self.deg))
    }

    /// Σ_k c_k x^k, for `x` without constant term.
    pub fn substitute_series(&self, coeffs: &[Q]) -> TensorElement {
        assert!(self.counit().is_zero(), "series substitution needs an augmentation-ideal argument");
        let mut out = Self::zero(&self.alpha, self.deg);
        let mut p = Self::one(&self.alpha, self.deg);
        let minw = self.min_weight().unwrap_or(u32::MAX);
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                if (k as u64) * (minw as u64) > self.deg as u64 {
                    break;
                }
                p = p.mul(self);
            }
            out.add_assign_scaled(&p, &Scalar::Rat(c.clone()));
        }
        out
    }

    fn series_len(&self) -> usize {
        let minw = self.min_weight().unwrap_or(1).max(1);
        (self.deg / minw) as usize + 1
    }

    pub fn exp(&self) -> TensorElement {
        let n = self.series_len();
        let mut coeffs = Vec::with_capacity(n);
        let mut f = q(1);
        for k in 0..n {
            if k > 0 {
                f /= q(k as i64);
            }
            coeffs.push(f.clone());
        }
        self.substitute_series(&coeffs)
    }

    /// log of an element with counit 1.
    pub fn log(&self) -> TensorElement {
        assert_eq!(self.counit(), Scalar::one(), "log needs counit 1");
        let y = self.sub(&Self::one(&self.alpha, self.deg));
        let n = y.series_len();
        let mut coeffs = vec![q(0)];
        for k in 1..n {
            let s = if k % 2 == 1 { 1 } else { -1 };
            coeffs.push(super::scalar::qf(s, k as i64));
        }
        y.substitute_series(&coeffs)
    }

    /// Inverse of an element with invertible counit.
    pub fn inverse(&self) -> TensorElement {
        let c0 = self.counit().inv().expect("inverse needs invertible rational counit");
        let y = self.scale(&c0).sub(&Self::one(&self.alpha, self.deg));
        let n = y.series_len();
        let coeffs: Vec<Q> = (0..n).map(|k| if k % 2 == 0 { q(1) } else { q(-1) }).collect();
        y.substitute_series(&coeffs).scale(&c0)
    }

    /// S(w_1…w_k) = (-1)^k w_k…w_1.
    pub fn antipode(&self) -> TensorElement {
        let mut out = BTreeMap::new();
        for (w, c) in &self.terms {
            let r: Word = w.iter().rev().copied().collect();
            let c = if w.len() % 2 == 1 { -c } else { c.clone() };
            add_into(&mut out, r, c);
        }
        TensorElement { alpha: self.alpha.clone(), deg: self.deg, terms: out }
    }

    /// Coproduct with primitive letters: Δ(w) = Σ over shuffles splitting w into two subwords.
    pub fn coproduct(&self) -> TensorPair {
        let mut out = TensorPair::zero(&self.alpha, self.deg);
        for (w, c) in &self.terms {
            let n = w.len();
            assert!(n < 64);
            for mask in 0u64..(1u64 << n) {
                let mut a = Word::new();
                let mut b = Word::new();
                for (i, &l) in w.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        a.push(l);
                    } else {
                        b.push(l);
                    }
                }
                out.add_term(a, b, c.clone());
            }
        }
        out
    }

    pub fn is_primitive(&self) -> bool {
        let mut d = self.coproduct();
        let one = Self::one(&self.alpha, self.deg);
        d.sub_assign(&TensorPair::tensor(self, &one));
        d.sub_assign(&TensorPair::tensor(&one, self));
        d.is_zero()
    }

    pub fn is_group_like(&self) -> bool {
        self.counit() == Scalar::one() && self.coproduct() == TensorPair::tensor(self, self)
    }

    /// Applies an algebra endomorphism given by letter images.
    pub fn apply_morphism(&self, images: &[TensorElement]) -> TensorElement {
        let target = &images.first().map(|t| t.alpha.clone()).unwrap_or_else(|| self.alpha.clone());
        let mut out = TensorElement::zero(target, self.deg);
        for (w, c) in &self.terms {
            let mut p = TensorElement::scalar(target, self.deg, c.clone());
            for &l in w.iter() {
                p = p.mul(&images[l as usize]);
                if p.is_zero() {
                    break;
                }
            }
            out.add_assign_scaled(&p, &Scalar::one());
        }
        out
    }

    /// Applies the derivation given by letter images.
    pub fn apply_derivation(&self, images: &[TensorElement]) -> TensorElement {
        let mut out = TensorElement::zero(&self.alpha, self.deg);
        for (w, c) in &self.terms {
            for i in 0..w.len() {
                let left = TensorElement::monomial(&self.alpha, self.deg, &w[..i], c.clone());
                let right = TensorElement::monomial(&self.alpha, self.deg, &w[i + 1..], Scalar::one());
                out.add_assign_scaled(&left.mul(&images[w[i] as usize]).mul(&right), &Scalar::one());
            }
        }
        out
    }

    pub fn scalars(&self) -> impl Iterator<Item = &Scalar> {
        self.terms.values()
    }

    pub fn fmt_words(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let ws: Vec<&str> = w.iter().map(|&l| self.alpha.name(l)).collect();
                let ws = if ws.is_empty() { "1".to_string() } else { ws.join("") };
                format!("({c}) {ws}")
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_words())
    }
}

/// Element of T(H) ⊗ T(H), truncated in total weight.
#[derive(Clone, Debug)]
pub struct TensorPair {
    pub alpha: Arc<Alphabet>,
    pub deg: u32,
    pub terms: BTreeMap<(Word, Word), Scalar>,
}

impl PartialEq for TensorPair {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl TensorPair {
    pub fn zero(alpha: &Arc<Alphabet>, deg: u32) -> Self {
        TensorPair { alpha: alpha.clone(), deg, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: Scalar) {
        if c.is_zero() || self.alpha.word_weight(&a) + self.alpha.word_weight(&b) > self.deg {
            return;
        }
        match self.terms.entry((a, b)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn tensor(a: &TensorElement, b: &TensorElement) -> TensorPair {
        let mut out = TensorPair::zero(&a.alpha, a.deg.min(b.deg));
        for (w1, c1) in &a.terms {
            for (w2, c2) in &b.terms {
                out.add_term(w1.clone(), w2.clone(), c1 * c2);
            }
        }
        out
    }

    pub fn add_assign_scaled(&mut self, other: &TensorPair, c: &Scalar) {
        for ((a, b), x) in &other.terms {
            self.add_term(a.clone(), b.clone(), x * c);
        }
    }

    pub fn sub_assign(&mut self, other: &TensorPair) {
        self.add_assign_scaled(other, &Scalar::int(-1));
    }

    pub fn add(&self, other: &TensorPair) -> TensorPair {
        let mut r = self.clone();
        r.add_assign_scaled(other, &Scalar::one());
        r
    }

    pub fn scale(&self, c: &Scalar) -> TensorPair {
        let mut r = TensorPair::zero(&self.alpha, self.deg);
        r.add_assign_scaled(self, c);
        r
    }

    /// Componentwise product in T ⊗ T.
    pub fn mul(&self, other: &TensorPair) -> TensorPair {
        let mut out = TensorPair::zero(&self.alpha, self.deg.min(other.deg));
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term(concat(a1, a2), concat(b1, b2), c1 * c2);
            }
        }
        out
    }

    pub fn swap(&self) -> TensorPair {
        let mut out = TensorPair::zero(&self.alpha, self.deg);
        for ((a, b), c) in &self.terms {
            out.add_term(b.clone(), a.clone(), c.clone());
        }
        out
    }

    /// Applies a linear map on each side independently.
    pub fn map_sides(&self, f: impl Fn(&TensorElement) -> TensorElement, g: impl Fn(&TensorElement) -> TensorElement) -> TensorPair {
        let mut out = TensorPair::zero(&self.alpha, self.deg);
        for ((a, b), c) in &self.terms {
            let fa = f(&TensorElement::monomial(&self.alpha, self.deg, a, c.clone()));
            let gb = g(&TensorElement::monomial(&self.alpha, self.deg, b, Scalar::one()));
            out.add_assign_scaled(&TensorPair::tensor(&fa, &gb), &Scalar::one());
        }
        out
    }
}
