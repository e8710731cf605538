//! Finitely presented graded Lie algebras, computed degree by degree.

use crate::exact::word::lyndon_words;
use crate::exact::{Alphabet, Letter, LieElement, Scalar, Word};
use crate::linalg::{Echelon, LinalgError, SparseVec};
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentedError {
    #[error("relator {0} is not weight-homogeneous")]
    Inhomogeneous(usize),
    #[error("relator {0} has non-rational coefficients")]
    NonRational(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("element lives over a different alphabet")]
    AlphabetMismatch,
}

/// Generators (with central flags on the alphabet) and homogeneous relators.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub alpha: Arc<Alphabet>,
    pub relators: Vec<LieElement>,
    /// Human-readable name for each relator.
    pub labels: Vec<String>,
}

impl Presentation {
    pub fn new(name: &str, alpha: Arc<Alphabet>, relators: Vec<LieElement>) -> Self {
        let labels = relators.iter().map(|r| r.to_string()).collect();
        Presentation { name: name.into(), alpha, relators, labels }
    }

    pub fn labelled(name: &str, alpha: Arc<Alphabet>, rels: Vec<(String, LieElement)>) -> Self {
        let (labels, relators) = rels.into_iter().unzip();
        Presentation { name: name.into(), alpha, relators, labels }
    }

    /// `all_relators` with labels.
    pub fn all_relators_labelled(&self, deg: u32) -> Vec<(String, LieElement)> {
        let mut out: Vec<(String, LieElement)> = self.labels.iter().cloned().zip(self.relators.iter().map(|r| r.with_deg(deg))).collect();
        for c in self.alpha.letters().filter(|&c| self.alpha.is_central(c)) {
            for s in self.alpha.letters().filter(|&s| s != c) {
                let e = LieElement::generator(&self.alpha, deg, c).bracket(&LieElement::generator(&self.alpha, deg, s));
                if !e.is_zero() {
                    out.push((format!("[{}, {}]", self.alpha.name(c), self.alpha.name(s)), e));
                }
            }
        }
        out
    }

    /// The free Lie algebra (modulo centrality of central letters).
    pub fn free(name: &str, alpha: Arc<Alphabet>) -> Self {
        Presentation::new(name, alpha, Vec::new())
    }

    /// Relators together with [c, s] for each central c and every generator s.
    pub fn all_relators(&self, deg: u32) -> Vec<LieElement> {
        self.all_relators_labelled(deg).into_iter().map(|(_, r)| r).collect()
    }

    pub fn generator(&self, name: &str, deg: u32) -> Option<LieElement> {
        self.alpha.letter(name).map(|l| LieElement::generator(&self.alpha, deg, l))
    }
}

/// Operations shared by presented algebras and semidirect products.
pub trait LieAlgebra: Sync {
    fn alphabet(&self) -> &Arc<Alphabet>;
    fn max_deg(&self) -> u32;
    fn normal_form(&self, e: &LieElement) -> LieElement;
    fn bracket(&self, a: &LieElement, b: &LieElement) -> LieElement;
    fn dims(&self) -> Vec<usize>;

    fn generator(&self, l: Letter) -> LieElement {
        self.normal_form(&LieElement::generator(self.alphabet(), self.max_deg(), l))
    }

    fn is_zero(&self, e: &LieElement) -> bool {
        self.normal_form(e).is_zero()
    }
}

#[derive(Clone, Debug)]
struct Level {
    words: Vec<Word>,
    col: HashMap<Word, u32>,
    ech: Echelon,
    /// Ideal rows of this weight, in ambient coordinates.
    rows: Vec<LieElement>,
}

/// Quotient basis of a presentation up to weight D: the non-pivot Lyndon words of each weight.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub pres: Arc<Presentation>,
    pub deg: u32,
    levels: Vec<Level>,
}

impl GradedBasis {
    pub fn build(pres: Arc<Presentation>, deg: u32) -> Result<GradedBasis, PresentedError> {
        let alpha = pres.alpha.clone();
        let mut by_weight: HashMap<u32, Vec<LieElement>> = HashMap::new();
        for (i, r) in pres.relators.iter().enumerate() {
            if r.scalars().any(|c| !c.is_rational()) {
                return Err(PresentedError::NonRational(i));
            }
            let r = r.with_deg(deg).project_central();
            let ws = r.weights();
            match ws.len() {
                0 => continue,
                1 => by_weight.entry(ws[0]).or_default().push(r),
                _ => return Err(PresentedError::Inhomogeneous(i)),
            }
        }
        let mut levels: Vec<Level> = vec![Level { words: vec![], col: HashMap::new(), ech: Echelon::new(), rows: vec![] }];
        let movers: Vec<Letter> = alpha.letters().filter(|&l| !alpha.is_central(l)).collect();
        for d in 1..=deg {
            let words = lyndon_words(&alpha, d, true);
            let col: HashMap<Word, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
            let mut cands: Vec<LieElement> = by_weight.remove(&d).unwrap_or_default();
            let jobs: Vec<(Letter, &LieElement)> = movers
                .iter()
                .filter(|&&s| alpha.weight(s) < d)
                .flat_map(|&s| levels[(d - alpha.weight(s)) as usize].rows.iter().map(move |r| (s, r)))
                .collect();
            let brs: Vec<LieElement> = jobs
                .par_iter()
                .map(|(s, r)| LieElement::generator(&alpha, deg, *s).bracket(r).project_central())
                .collect();
            cands.extend(brs);
            let mut ech = Echelon::new();
            for c in cands {
                ech.insert(to_sparse(&c, &col))?;
            }
            let rows = (0..ech.rank()).map(|i| from_sparse(&alpha, deg, &words, ech.row(i))).collect();
            levels.push(Level { words, col, ech, rows });
        }
        Ok(GradedBasis { pres, deg, levels })
    }

    pub fn alpha(&self) -> &Arc<Alphabet> {
        &self.pres.alpha
    }

    /// Quotient basis words of weight d.
    pub fn basis(&self, d: u32) -> Vec<Word> {
        let lv = &self.levels[d as usize];
        lv.words.iter().enumerate().filter(|(i, _)| !lv.ech.is_pivot(*i as u32)).map(|(_, w)| w.clone()).collect()
    }

    pub fn dim(&self, d: u32) -> usize {
        let lv = &self.levels[d as usize];
        lv.words.len() - lv.ech.rank()
    }

    /// Unique remainder of `e` modulo the ideal.
    pub fn reduce(&self, e: &LieElement) -> LieElement {
        let e = e.with_deg(self.deg).project_central();
        let alpha = self.alpha();
        let mut out = LieElement::zero(alpha, self.deg);
        for d in 1..=self.deg {
            let part = e.homogeneous_part(d);
            if part.is_zero() {
                continue;
            }
            let lv = &self.levels[d as usize];
            let mut v = to_sparse(&part, &lv.col);
            lv.ech.reduce(&mut v);
            for (c, x) in v {
                out.terms.insert(lv.words[c as usize].clone(), x);
            }
        }
        out
    }

    pub fn ideal_rows(&self, d: u32) -> &[LieElement] {
        &self.levels[d as usize].rows
    }
}

fn to_sparse(e: &LieElement, col: &HashMap<Word, u32>) -> SparseVec {
    e.terms.iter().map(|(w, c)| (*col.get(w).unwrap_or_else(|| panic!("word outside the ambient basis")), c.clone())).collect()
}

fn from_sparse(alpha: &Arc<Alphabet>, deg: u32, words: &[Word], v: &[(u32, Scalar)]) -> LieElement {
    let mut e = LieElement::zero(alpha, deg);
    for (c, x) in v {
        e.terms.insert(words[*c as usize].clone(), x.clone());
    }
    e
}

impl LieAlgebra for GradedBasis {
    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.pres.alpha
    }

    fn max_deg(&self) -> u32 {
        self.deg
    }

    fn normal_form(&self, e: &LieElement) -> LieElement {
        self.reduce(e)
    }

    fn bracket(&self, a: &LieElement, b: &LieElement) -> LieElement {
        self.reduce(&a.with_deg(self.deg).bracket(&b.with_deg(self.deg)))
    }

    fn dims(&self) -> Vec<usize> {
        (1..=self.deg).map(|d| self.dim(d)).collect()
    }
}

/// A Lie algebra map given by generator images, evaluated through standard bracketings.
pub struct LieMorphism<'a> {
    pub target: &'a dyn LieAlgebra,
    pub images: Vec<LieElement>,
}

impl<'a> LieMorphism<'a> {
    pub fn new(target: &'a dyn LieAlgebra, images: Vec<LieElement>) -> Self {
        LieMorphism { target, images }
    }

    pub fn apply(&self, e: &LieElement) -> LieElement {
        let mut memo: HashMap<Word, LieElement> = HashMap::new();
        let mut out = LieElement::zero(self.target.alphabet(), self.target.max_deg());
        for (w, c) in &e.terms {
            let img = self.basis_image(w, &mut memo);
            out.add_assign_scaled(&img, c);
        }
        self.target.normal_form(&out)
    }

    fn basis_image(&self, w: &[Letter], memo: &mut HashMap<Word, LieElement>) -> LieElement {
        if let Some(x) = memo.get(w) {
            return x.clone();
        }
        let r = if w.len() == 1 {
            self.target.normal_form(&self.images[w[0] as usize])
        } else {
            let (u, v) = crate::exact::word::standard_factorization(w);
            let a = self.basis_image(u, memo);
            let b = self.basis_image(v, memo);
            self.target.bracket(&a, &b)
        };
        memo.insert(crate::exact::word(w), r.clone());
        r
    }
}
