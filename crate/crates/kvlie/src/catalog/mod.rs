//! Concrete presentations: framed Drinfeld–Kohno algebras of genus g, insertion, and symmetries.

pub mod split;
pub mod uf;

use crate::exact::{Alphabet, LieElement, Scalar, Q};
use crate::presented::Presentation;
use num_traits::Zero;
use std::sync::Arc;

/// Relators of t^f_{g,I} have weight at most 4.
pub const RELATOR_DEG: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("strand {0} is not in the strand set")]
    UnknownStrand(String),
    #[error("strand label {0} occurs twice")]
    LabelCollision(String),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("matrix must be {0}x{0}")]
    BadShape(usize),
    #[error("rescaling factor must be an invertible rational")]
    BadScale,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandSet {
    pub g: usize,
    pub labels: Vec<String>,
    pub framed: bool,
}

impl StrandSet {
    pub fn new(g: usize, labels: &[&str]) -> Result<Self, CatalogError> {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(CatalogError::LabelCollision(l.clone()));
            }
        }
        Ok(StrandSet { g, labels, framed: true })
    }

    /// Strands 1, …, n.
    pub fn numbered(g: usize, n: usize) -> Self {
        StrandSet { g, labels: (1..=n).map(|i| i.to_string()).collect(), framed: true }
    }

    /// Strands 1, …, n, 0.
    pub fn base(g: usize, n: usize) -> Self {
        let mut s = Self::numbered(g, n);
        s.labels.push("0".into());
        s
    }

    /// Strands 1, …, n, *, 0.
    pub fn tower(g: usize, n: usize) -> Self {
        let mut s = Self::numbered(g, n);
        s.labels.push("*".into());
        s.labels.push("0".into());
        s
    }

    pub fn unframed(mut self) -> Self {
        self.framed = false;
        self
    }

    pub fn alphabet(&self) -> Arc<Alphabet> {
        Alphabet::tf(self.g, &self.labels)
    }

    pub fn describe(&self) -> String {
        format!("{}t_{{{},{}}}", if self.framed { "framed " } else { "" }, self.g, self.labels.join(""))
    }
}

pub fn gen(alpha: &Arc<Alphabet>, name: &str, deg: u32) -> LieElement {
    let l = alpha.letter(name).unwrap_or_else(|| panic!("no generator {name} in {alpha}"));
    LieElement::generator(alpha, deg, l)
}

pub fn x(i: &str, a: usize) -> String {
    format!("x[{i},{a}]")
}

pub fn y(i: &str, a: usize) -> String {
    format!("y[{i},{a}]")
}

pub fn t(i: &str, j: &str) -> String {
    format!("t[{i},{j}]")
}

/// Σ_a [x_i^a, y_i^a] + Σ_{j≠i} t_ij − c·t_ii, the last relation at strand i when c = g − 1.
pub fn last_relation(s: &StrandSet, alpha: &Arc<Alphabet>, i: &str, c: i64, deg: u32) -> LieElement {
    let mut r = LieElement::zero(alpha, deg);
    for a in 1..=s.g {
        r = r.add(&gen(alpha, &x(i, a), deg).bracket(&gen(alpha, &y(i, a), deg)));
    }
    for j in &s.labels {
        if j != i {
            r = r.add(&gen(alpha, &t(i, j), deg));
        }
    }
    r.sub(&gen(alpha, &t(i, i), deg).scale(&Scalar::int(c)))
}

/// The relators of t^f_{g,I} (and t_{g,I} when unframed), each with a label.
pub fn make_tf(s: &StrandSet) -> Presentation {
    make_tf_with_last(s, &|_| s.g as i64 - 1)
}

/// Same as `make_tf`, with the coefficient of t_ii in the last relation at i chosen per strand.
pub fn make_tf_with_last(s: &StrandSet, last: &dyn Fn(&str) -> i64) -> Presentation {
    let alpha = s.alphabet();
    let d = RELATOR_DEG;
    let g = |n: &str| gen(&alpha, n, d);
    let mut rels: Vec<(String, LieElement)> = Vec::new();
    let l = &s.labels;
    let n = l.len();
    let mut pairs = Vec::new();
    for p in 0..n {
        for q in p..n {
            pairs.push((p, q));
        }
    }
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(k, m) in &pairs[a + 1..] {
            if i != k && i != m && j != k && j != m {
                rels.push((format!("[t{}{}, t{}{}]", l[i], l[j], l[k], l[m]), g(&t(&l[i], &l[j])).bracket(&g(&t(&l[k], &l[m])))));
            }
        }
    }
    for &(i, j) in &pairs {
        for k in 0..n {
            if k != i && k != j {
                let r = g(&t(&l[i], &l[j])).bracket(&g(&t(&l[i], &l[k])).add(&g(&t(&l[j], &l[k]))));
                rels.push((format!("[t{0}{1}, t{0}{2} + t{1}{2}]", l[i], l[j], l[k]), r));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for a in 1..=s.g {
                for b in 1..=s.g {
                    let mut r = g(&x(&l[i], a)).bracket(&g(&y(&l[j], b)));
                    if a == b {
                        r = r.sub(&g(&t(&l[i], &l[j])));
                    }
                    rels.push((format!("[x{}^{a}, y{}^{b}] - δ t{}{}", l[i], l[j], l[i], l[j]), r));
                    if i < j {
                        rels.push((format!("[x{}^{a}, x{}^{b}]", l[i], l[j]), g(&x(&l[i], a)).bracket(&g(&x(&l[j], b)))));
                        rels.push((format!("[y{}^{a}, y{}^{b}]", l[i], l[j]), g(&y(&l[i], a)).bracket(&g(&y(&l[j], b)))));
                    }
                }
            }
        }
    }
    for &(i, j) in &pairs {
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            for a in 1..=s.g {
                rels.push((format!("[x{}^{a}, t{}{}]", l[k], l[i], l[j]), g(&x(&l[k], a)).bracket(&g(&t(&l[i], &l[j])))));
                rels.push((format!("[y{}^{a}, t{}{}]", l[k], l[i], l[j]), g(&y(&l[k], a)).bracket(&g(&t(&l[i], &l[j])))));
            }
        }
        if i != j {
            for a in 1..=s.g {
                let tij = g(&t(&l[i], &l[j]));
                rels.push((format!("[x{0}^{a} + x{1}^{a}, t{0}{1}]", l[i], l[j]), g(&x(&l[i], a)).add(&g(&x(&l[j], a))).bracket(&tij)));
                rels.push((format!("[y{0}^{a} + y{1}^{a}, t{0}{1}]", l[i], l[j]), g(&y(&l[i], a)).add(&g(&y(&l[j], a))).bracket(&tij)));
            }
        }
    }
    for i in l {
        let c = last(i);
        rels.push((format!("last relation at {i}: Σ[x{i},y{i}] + Σ t{i}j - ({c}) t{i}{i}"), last_relation(s, &alpha, i, c, d)));
    }
    if !s.framed {
        for i in l {
            rels.push((format!("t{i}{i}"), g(&t(i, i))));
        }
    }
    let rels = rels.into_iter().filter(|(_, r)| !r.project_central().is_zero()).collect();
    Presentation::labelled(&s.describe(), alpha, rels)
}

/// Target strand set and generator images of the insertion ∘_k with the set J.
pub fn insertion(s: &StrandSet, k: &str, j: &[&str]) -> Result<(StrandSet, Vec<LieElement>), CatalogError> {
    let pos = s.labels.iter().position(|l| l == k).ok_or_else(|| CatalogError::UnknownStrand(k.into()))?;
    let mut labels: Vec<String> = s.labels[..pos].to_vec();
    labels.extend(j.iter().map(|x| x.to_string()));
    labels.extend(s.labels[pos + 1..].iter().cloned());
    let refs: Vec<&str> = labels.iter().map(|x| x.as_str()).collect();
    let mut target = StrandSet::new(s.g, &refs)?;
    target.framed = s.framed;
    let ta = target.alphabet();
    let d = RELATOR_DEG.max(8);
    let src = s.alphabet();
    let sum = |f: &dyn Fn(&str) -> String| -> LieElement {
        let mut e = LieElement::zero(&ta, d);
        for l in j {
            e = e.add(&gen(&ta, &f(l), d));
        }
        e
    };
    let mut images = Vec::new();
    for sym in src.symbols() {
        let lab = &sym.labels;
        let img = match sym.role {
            crate::exact::Role::X if lab[0] == k => sum(&|l| x(l, sym.handle.unwrap())),
            crate::exact::Role::Y if lab[0] == k => sum(&|l| y(l, sym.handle.unwrap())),
            crate::exact::Role::T if lab[0] == k && lab[1] == k => {
                let mut e = LieElement::zero(&ta, d);
                for a in j {
                    for b in j {
                        e = e.add(&gen(&ta, &t(a, b), d));
                    }
                }
                e
            }
            crate::exact::Role::T if lab[0] == k => sum(&|l| t(l, &lab[1])),
            crate::exact::Role::T if lab[1] == k => sum(&|l| t(&lab[0], l)),
            _ => gen(&ta, &sym.name, d),
        };
        images.push(img);
    }
    Ok((target, images))
}

fn check_square(m: &[Vec<Q>], n: usize) -> Result<(), CatalogError> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(CatalogError::BadShape(n));
    }
    Ok(())
}

/// Whether σᵀJσ = J with J = [[0, I], [−I, 0]].
pub fn is_symplectic(sigma: &[Vec<Q>], g: usize) -> bool {
    let n = 2 * g;
    if check_square(sigma, n).is_err() {
        return false;
    }
    let j = |r: usize, c: usize| -> Q {
        if r < g && c == r + g {
            Q::from_integer(1.into())
        } else if r >= g && c + g == r {
            Q::from_integer((-1).into())
        } else {
            Q::zero()
        }
    };
    for a in 0..n {
        for b in 0..n {
            let mut acc = Q::zero();
            for r in 0..n {
                for c in 0..n {
                    acc += &sigma[r][a] * j(r, c) * &sigma[c][b];
                }
            }
            if acc != j(a, b) {
                return false;
            }
        }
    }
    true
}

/// Generator images of σ ∈ Sp(2g): x^a ↦ Σ_r σ_{r,a} e_r with e = (x^1…x^g, y^1…y^g), per strand.
pub fn symplectic_images(s: &StrandSet, sigma: &[Vec<Q>]) -> Result<Vec<LieElement>, CatalogError> {
    check_square(sigma, 2 * s.g)?;
    if !is_symplectic(sigma, s.g) {
        return Err(CatalogError::NotSymplectic);
    }
    let alpha = s.alphabet();
    let d = 8;
    let g = s.g;
    let basis = |strand: &str, r: usize| if r < g { gen(&alpha, &x(strand, r + 1), d) } else { gen(&alpha, &y(strand, r - g + 1), d) };
    Ok(alpha
        .symbols()
        .iter()
        .map(|sym| match sym.role {
            crate::exact::Role::X | crate::exact::Role::Y => {
                let col = if sym.role == crate::exact::Role::X { sym.handle.unwrap() - 1 } else { g + sym.handle.unwrap() - 1 };
                let mut e = LieElement::zero(&alpha, d);
                for (r, row) in sigma.iter().enumerate() {
                    e = e.add(&basis(&sym.labels[0], r).scale(&Scalar::Rat(row[col].clone())));
                }
                e
            }
            _ => gen(&alpha, &sym.name, d),
        })
        .collect())
}

/// x ↦ λx, y ↦ λy, t ↦ λ²t.
pub fn rescale_images(s: &StrandSet, lambda: &Q) -> Result<Vec<LieElement>, CatalogError> {
    if lambda.is_zero() {
        return Err(CatalogError::BadScale);
    }
    let alpha = s.alphabet();
    let d = 8;
    Ok(alpha
        .symbols()
        .iter()
        .enumerate()
        .map(|(l, sym)| {
            let c = if sym.weight == 1 { lambda.clone() } else { lambda * lambda };
            LieElement::generator(&alpha, d, l as u8).scale(&Scalar::Rat(c))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::presented::{GradedBasis, LieAlgebra, LieMorphism};

    #[test]
    fn genus_zero_two_strands() {
        let s = StrandSet::numbered(0, 2);
        let b = GradedBasis::build(Arc::new(make_tf(&s)), 4).unwrap();
        // t12 = -t11 = -t22 leaves a single central line
        assert_eq!(b.dims(), vec![0, 1, 0, 0]);
    }

    #[test]
    fn genus_one_one_strand_is_abelian() {
        let s = StrandSet::numbered(1, 1);
        let b = GradedBasis::build(Arc::new(make_tf(&s)), 5).unwrap();
        assert_eq!(b.dims(), vec![2, 1, 0, 0, 0]);
    }

    #[test]
    fn unframed_kills_diagonal() {
        let s = StrandSet::numbered(1, 2);
        let fr = GradedBasis::build(Arc::new(make_tf(&s)), 3).unwrap();
        let un = GradedBasis::build(Arc::new(make_tf(&s.clone().unframed())), 3).unwrap();
        assert_eq!(fr.dim(2) - 2, un.dim(2));
    }

    #[test]
    fn insertion_examples() {
        let s = StrandSet::numbered(1, 3);
        let (tgt, imgs) = insertion(&s, "3", &["u", "v"]).unwrap();
        assert_eq!(tgt.labels, vec!["1", "2", "u", "v"]);
        let a = s.alphabet();
        let ta = tgt.alphabet();
        let img = |n: &str| imgs[a.letter(n).unwrap() as usize].clone();
        assert_eq!(img("t[1,2]"), gen(&ta, "t[1,2]", 8));
        assert_eq!(img("t[1,3]"), gen(&ta, "t[1,u]", 8).add(&gen(&ta, "t[1,v]", 8)));
        let want = gen(&ta, "t[u,u]", 8).add(&gen(&ta, "t[u,v]", 8).scale(&Scalar::int(2))).add(&gen(&ta, "t[v,v]", 8));
        assert_eq!(img("t[3,3]"), want);
        assert!(insertion(&s, "9", &["u"]).is_err());
        assert!(insertion(&s, "3", &["1"]).is_err());
    }

    #[test]
    fn insertion_is_a_morphism() {
        for (g, n) in [(0, 3), (1, 2), (2, 1)] {
            let s = StrandSet::numbered(g, n);
            let (tgt, imgs) = insertion(&s, "1", &["a", "b"]).unwrap();
            let tb = GradedBasis::build(Arc::new(make_tf(&tgt)), 4).unwrap();
            let f = LieMorphism::new(&tb, imgs);
            for r in make_tf(&s).all_relators(4) {
                assert!(f.apply(&r).is_zero(), "g={g} n={n}");
            }
        }
    }

    #[test]
    fn symplectic_and_rescale_fix_relators() {
        let s = StrandSet::numbered(2, 2);
        let b = GradedBasis::build(Arc::new(make_tf(&s)), 4).unwrap();
        // a shear in Sp(4): x^1 -> x^1 + y^2, x^2 -> x^2 + y^1
        let mut m = vec![vec![q(0); 4]; 4];
        for i in 0..4 {
            m[i][i] = q(1);
        }
        m[3][0] = q(1);
        m[2][1] = q(1);
        assert!(is_symplectic(&m, 2));
        let f = LieMorphism::new(&b, symplectic_images(&s, &m).unwrap());
        let h = LieMorphism::new(&b, rescale_images(&s, &q(2)).unwrap());
        for r in make_tf(&s).all_relators(4) {
            assert!(f.apply(&r).is_zero());
            assert!(h.apply(&r).is_zero());
        }
        let t12 = gen(&s.alphabet(), "t[1,2]", 4);
        assert_eq!(h.apply(&t12), b.reduce(&t12.scale(&Scalar::int(4))));
        let mut bad = m.clone();
        bad[0][0] = q(2);
        assert_eq!(symplectic_images(&s, &bad).unwrap_err(), CatalogError::NotSymplectic);
    }
}
