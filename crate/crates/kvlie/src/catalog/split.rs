//! The maps F: u^f ⋊ t^f_{g,1…n0} → t^f_{g,1…n*0} and G in the other direction.

use super::uf::{omega_star, uf_action, uf_presentation};
use super::{gen, insertion, make_tf, t, x, y, StrandSet};
use crate::exact::{Alphabet, LieElement, Role};
use crate::presented::{GradedBasis, LieAlgebra, LieMorphism};
use crate::semidirect::Semidirect;
use std::sync::Arc;

/// Re-expresses `e` over an alphabet with identical symbol list.
pub fn rehome(e: &LieElement, alpha: &Arc<Alphabet>) -> LieElement {
    assert_eq!(e.alpha.symbols(), alpha.symbols(), "alphabets differ");
    LieElement { alpha: alpha.clone(), deg: e.deg, terms: e.terms.clone() }
}

pub struct SplitData {
    pub g: usize,
    pub n: usize,
    pub deg: u32,
    pub direct: Arc<GradedBasis>,
    pub semi: Semidirect,
    /// Images of the semidirect generators in the direct presentation.
    pub f_images: Vec<LieElement>,
    /// Images of the direct generators in the semidirect product.
    pub g_images: Vec<LieElement>,
}

impl SplitData {
    pub fn build(g: usize, n: usize, deg: u32) -> SplitData {
        let direct = Arc::new(GradedBasis::build(Arc::new(make_tf(&StrandSet::tower(g, n))), deg).expect("t^f presentation"));
        let inner = Arc::new(GradedBasis::build(Arc::new(uf_presentation(g, n)), deg).expect("free presentation"));
        let outer = Arc::new(GradedBasis::build(Arc::new(make_tf(&StrandSet::base(g, n))), deg).expect("t^f presentation"));
        let semi = Semidirect::new(inner.clone(), outer.clone(), uf_action(g, n, deg));
        let da = direct.alpha().clone();
        let sa = semi.alpha.clone();

        let mut f_images: Vec<LieElement> = inner.alpha().symbols().iter().map(|s| gen(&da, &s.name, deg)).collect();
        let (_, ins) = insertion(&StrandSet::base(g, n), "0", &["*", "0"]).expect("insertion at 0");
        f_images.extend(ins.iter().map(|e| rehome(e, &da).with_deg(deg)));

        let ia = inner.alpha().clone();
        let om = omega_star(&ia, g, n, deg);
        let inn = |e: &LieElement| semi.join(e, &LieElement::zero(outer.alpha(), deg));
        let out = |name: &str| semi.join(&LieElement::zero(&ia, deg), &gen(outer.alpha(), name, deg));
        let u = |name: &str| inn(&gen(&ia, name, deg));
        let g_images = da
            .symbols()
            .iter()
            .map(|s| {
                let lab: Vec<&str> = s.labels.iter().map(|x| x.as_str()).collect();
                match s.role {
                    Role::X | Role::Y => {
                        let a = s.handle.unwrap();
                        let nm = |i: &str| if s.role == Role::X { x(i, a) } else { y(i, a) };
                        match lab[0] {
                            "*" => u(&nm("*")),
                            "0" => out(&nm("0")).sub(&u(&nm("*"))),
                            i => out(&nm(i)),
                        }
                    }
                    Role::T => match (lab[0], lab[1]) {
                        ("*", "*") => u(&t("*", "*")),
                        ("*", "0") | ("0", "*") => inn(&om).neg(),
                        ("0", "0") => inn(&om.scale(&crate::exact::Scalar::int(2))).sub(&u(&t("*", "*"))).add(&out(&t("0", "0"))),
                        (i, "*") | ("*", i) => u(&t(i, "*")),
                        (i, "0") | ("0", i) => out(&t(i, "0")).sub(&u(&t(i, "*"))),
                        (i, j) => out(&t(i, j)),
                    },
                    _ => unreachable!(),
                }
            })
            .map(|e| rehome(&e, &sa))
            .collect();
        SplitData { g, n, deg, direct, semi, f_images, g_images }
    }

    pub fn f(&self) -> LieMorphism<'_> {
        LieMorphism::new(self.direct.as_ref(), self.f_images.clone())
    }

    pub fn g(&self) -> LieMorphism<'_> {
        LieMorphism::new(&self.semi, self.g_images.clone())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SplitReport {
    pub g: usize,
    pub n: usize,
    pub deg: u32,
    pub direct_dims: Vec<usize>,
    pub tower_dims: Vec<usize>,
    pub f_relator_failures: Vec<String>,
    pub g_relator_failures: Vec<String>,
    pub fg_failures: Vec<String>,
    pub gf_failures: Vec<String>,
    pub omega_ok: bool,
}

impl SplitReport {
    pub fn dims_match(&self) -> bool {
        self.direct_dims == self.tower_dims
    }

    pub fn ok(&self) -> bool {
        self.dims_match()
            && self.omega_ok
            && self.f_relator_failures.is_empty()
            && self.g_relator_failures.is_empty()
            && self.fg_failures.is_empty()
            && self.gf_failures.is_empty()
    }
}

pub fn verify_split(g: usize, n: usize, deg: u32) -> SplitReport {
    let data = SplitData::build(g, n, deg);
    let f = data.f();
    let gm = data.g();
    let semi = &data.semi;
    let direct = &data.direct;
    let mut rep = SplitReport { g, n, deg, direct_dims: direct.dims(), tower_dims: semi.dims(), ..Default::default() };

    let sp = semi.presentation();
    for (i, r) in sp.all_relators(deg).iter().enumerate() {
        if !f.apply(r).is_zero() {
            rep.f_relator_failures.push(sp.labels.get(i).cloned().unwrap_or_else(|| r.to_string()));
        }
    }
    for (label, r) in direct.pres.all_relators_labelled(deg) {
        if !gm.apply(&r).is_zero() {
            rep.g_relator_failures.push(label);
        }
    }
    let da = direct.alpha();
    for l in da.letters() {
        let s = LieElement::generator(da, deg, l);
        let back = f.apply(&gm.apply(&s));
        if back != direct.reduce(&s) {
            rep.fg_failures.push(format!("{} ↦ {}", da.name(l), back));
        }
    }
    let sa = &semi.alpha;
    for l in sa.letters() {
        let s = LieElement::generator(sa, deg, l);
        let back = gm.apply(&f.apply(&s));
        if back != semi.normal_form(&s) {
            rep.gf_failures.push(format!("{} ↦ {}", sa.name(l), back));
        }
    }
    let om = semi.join(&omega_star(semi.inner.alpha(), g, n, deg), &LieElement::zero(semi.outer.alpha(), deg));
    let om = rehome(&om, sa);
    rep.omega_ok = f.apply(&om) == direct.reduce(&gen(da, &t("*", "0"), deg).neg());
    rep
}
