//! Semidirect products U ⋊ T of presented Lie algebras, given an action of T's generators on U's.

use crate::exact::word::standard_factorization;
use crate::exact::{Alphabet, Letter, LieElement, Symbol, Word};
use crate::presented::{GradedBasis, LieAlgebra, Presentation};
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// `table[h][u]` = h·u for outer generator h and inner generator u, in inner ambient coordinates.
#[derive(Clone, Debug)]
pub struct ActionTable {
    pub table: Vec<Vec<LieElement>>,
}

/// Derivations of an inner algebra attached to outer generators.
pub struct Action<'a> {
    pub inner: &'a dyn LieAlgebra,
    pub table: &'a ActionTable,
    cache: DeriveCache,
}

type DeriveCache = Arc<RwLock<HashMap<(Letter, Word), LieElement>>>;

impl<'a> Action<'a> {
    pub fn new(inner: &'a dyn LieAlgebra, table: &'a ActionTable) -> Self {
        Action { inner, table, cache: Arc::default() }
    }

    fn on_basis(&self, z: Letter, w: &[Letter]) -> LieElement {
        let key = (z, crate::exact::word(w));
        if let Some(r) = self.cache.read().unwrap().get(&key) {
            return r.clone();
        }
        let r = if w.len() == 1 {
            self.inner.normal_form(&self.table.table[z as usize][w[0] as usize])
        } else {
            let (a, b) = standard_factorization(w);
            let pa = LieElement::basis(self.inner.alphabet(), self.inner.max_deg(), a);
            let pb = LieElement::basis(self.inner.alphabet(), self.inner.max_deg(), b);
            let da = self.on_basis(z, a);
            let db = self.on_basis(z, b);
            self.inner.bracket(&da, &pb).add(&self.inner.bracket(&pa, &db))
        };
        self.cache.write().unwrap().insert(key, r.clone());
        r
    }

    /// D_z(u) for a single outer generator z.
    pub fn derive(&self, z: Letter, u: &LieElement) -> LieElement {
        let mut out = LieElement::zero(self.inner.alphabet(), self.inner.max_deg());
        for (w, c) in &u.terms {
            out.add_assign_scaled(&self.on_basis(z, w), c);
        }
        out
    }

    /// Action of the outer basis element P(w).
    pub fn act_basis(&self, w: &[Letter], u: &LieElement) -> LieElement {
        if w.len() == 1 {
            return self.derive(w[0], u);
        }
        let (a, b) = standard_factorization(w);
        let ab = self.act_basis(a, &self.act_basis(b, u));
        let ba = self.act_basis(b, &self.act_basis(a, u));
        ab.sub(&ba)
    }

    /// Action of a free Lie element over the outer alphabet (Lyndon coordinates).
    pub fn act(&self, h: &LieElement, u: &LieElement) -> LieElement {
        let mut out = LieElement::zero(self.inner.alphabet(), self.inner.max_deg());
        for (w, c) in &h.terms {
            out.add_assign_scaled(&self.act_basis(w, u), c);
        }
        self.inner.normal_form(&out)
    }
}

/// U ⋊ T over the union alphabet (inner letters first).
pub struct Semidirect {
    pub inner: Arc<GradedBasis>,
    pub outer: Arc<GradedBasis>,
    pub table: ActionTable,
    pub alpha: Arc<Alphabet>,
    pub deg: u32,
    n_inner: usize,
    derive_cache: DeriveCache,
}

impl Semidirect {
    pub fn new(inner: Arc<GradedBasis>, outer: Arc<GradedBasis>, table: ActionTable) -> Semidirect {
        let deg = inner.deg.min(outer.deg);
        let mut syms: Vec<Symbol> = inner.alpha().symbols().to_vec();
        // outer central letters need not commute with the inner factor
        syms.extend(outer.alpha().symbols().iter().cloned().map(|mut s| {
            s.central = false;
            s
        }));
        let alpha = Arc::new(Alphabet::new(syms).expect("inner and outer generator names must differ"));
        let n_inner = inner.alpha().len();
        Semidirect { inner, outer, table, alpha, deg, n_inner, derive_cache: Arc::default() }
    }

    pub fn is_inner(&self, l: Letter) -> bool {
        (l as usize) < self.n_inner
    }

    pub fn inner_letter(&self, l: Letter) -> Letter {
        l
    }

    pub fn outer_letter(&self, l: Letter) -> Letter {
        l + self.n_inner as Letter
    }

    /// Splits a normal-form element into (inner, outer), re-expressed over the factor alphabets.
    pub fn split(&self, e: &LieElement) -> (LieElement, LieElement) {
        let mut u = LieElement::zero(self.inner.alpha(), self.deg);
        let mut h = LieElement::zero(self.outer.alpha(), self.deg);
        for (w, c) in &e.terms {
            if w.iter().all(|&l| self.is_inner(l)) {
                u.add_term(w.clone(), c.clone());
            } else if w.iter().all(|&l| !self.is_inner(l)) {
                h.add_term(w.iter().map(|&l| l - self.n_inner as Letter).collect(), c.clone());
            } else {
                panic!("split expects a normal form");
            }
        }
        (u, h)
    }

    pub fn join(&self, u: &LieElement, h: &LieElement) -> LieElement {
        let mut e = LieElement::zero(&self.alpha, self.deg);
        for (w, c) in &u.terms {
            e.add_term(w.clone(), c.clone());
        }
        for (w, c) in &h.terms {
            e.add_term(w.iter().map(|&l| self.outer_letter(l)).collect(), c.clone());
        }
        e
    }

    fn action(&self) -> Action<'_> {
        Action { inner: self.inner.as_ref(), table: &self.table, cache: self.derive_cache.clone() }
    }

    /// h·u for h over the outer alphabet and u over the inner alphabet.
    pub fn act(&self, h: &LieElement, u: &LieElement) -> LieElement {
        self.action().act(h, u)
    }

    fn pair_bracket(&self, (u1, h1): &(LieElement, LieElement), (u2, h2): &(LieElement, LieElement)) -> (LieElement, LieElement) {
        let a = self.action();
        let u = self.inner.bracket(u1, u2).add(&a.act(h1, u2)).sub(&a.act(h2, u1));
        (self.inner.reduce(&u), self.outer.bracket(h1, h2))
    }

    fn eval_basis(&self, w: &[Letter], memo: &mut HashMap<Word, (LieElement, LieElement)>) -> (LieElement, LieElement) {
        if let Some(r) = memo.get(w) {
            return r.clone();
        }
        let r = if w.iter().all(|&l| self.is_inner(l)) {
            (self.inner.reduce(&LieElement::basis(self.inner.alpha(), self.deg, w)), LieElement::zero(self.outer.alpha(), self.deg))
        } else if w.iter().all(|&l| !self.is_inner(l)) {
            let ww: Word = w.iter().map(|&l| l - self.n_inner as Letter).collect();
            (LieElement::zero(self.inner.alpha(), self.deg), self.outer.reduce(&LieElement::basis(self.outer.alpha(), self.deg, &ww)))
        } else {
            let (a, b) = standard_factorization(w);
            let pa = self.eval_basis(a, memo);
            let pb = self.eval_basis(b, memo);
            self.pair_bracket(&pa, &pb)
        };
        memo.insert(crate::exact::word(w), r.clone());
        r
    }

    /// Presentation of U ⋊ T: relators of both factors and [h, u] − h·u on generators.
    pub fn presentation(&self) -> Presentation {
        let d = self.deg;
        let mut rels: Vec<LieElement> = Vec::new();
        for r in &self.inner.pres.all_relators(d) {
            rels.push(self.join(r, &LieElement::zero(self.outer.alpha(), d)));
        }
        for r in &self.outer.pres.all_relators(d) {
            rels.push(self.join(&LieElement::zero(self.inner.alpha(), d), r));
        }
        for h in self.outer.alpha().letters() {
            for u in self.inner.alpha().letters() {
                let hh = LieElement::generator(&self.alpha, d, self.outer_letter(h));
                let uu = LieElement::generator(&self.alpha, d, u);
                let act = self.act(&LieElement::generator(self.outer.alpha(), d, h), &LieElement::generator(self.inner.alpha(), d, u));
                let rel = hh.bracket(&uu).sub(&self.join(&act, &LieElement::zero(self.outer.alpha(), d)));
                rels.push(rel);
            }
        }
        Presentation::new(&format!("{} ⋊ {}", self.inner.pres.name, self.outer.pres.name), self.alpha.clone(), rels)
    }
}

impl LieAlgebra for Semidirect {
    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alpha
    }

    fn max_deg(&self) -> u32 {
        self.deg
    }

    fn normal_form(&self, e: &LieElement) -> LieElement {
        let mut memo = HashMap::new();
        let mut u = LieElement::zero(self.inner.alpha(), self.deg);
        let mut h = LieElement::zero(self.outer.alpha(), self.deg);
        for (w, c) in &e.with_deg(self.deg).terms {
            let (a, b) = self.eval_basis(w, &mut memo);
            u.add_assign_scaled(&a, c);
            h.add_assign_scaled(&b, c);
        }
        self.join(&self.inner.reduce(&u), &self.outer.reduce(&h))
    }

    fn bracket(&self, a: &LieElement, b: &LieElement) -> LieElement {
        let pa = self.split(&self.normal_form(a));
        let pb = self.split(&self.normal_form(b));
        let (u, h) = self.pair_bracket(&pa, &pb);
        self.join(&u, &h)
    }

    fn dims(&self) -> Vec<usize> {
        self.inner.dims().iter().zip(self.outer.dims()).map(|(a, b)| a + b).collect()
    }
}
