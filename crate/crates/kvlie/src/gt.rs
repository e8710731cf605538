//! Graded Goldman–Turaev operations on U(L(H)) and U(L(H) ⊕ K t_{**}).
//!
//! Elements of both algebras are tensors over the gt alphabet; the central letter `c[]`
//! stands for t_{**} and is kept at the right end of every word.

use crate::exact::{Alphabet, CyclicElement, CyclicPair, Letter, Role, Scalar, Series, TensorElement, TensorPair, Word};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GtError {
    #[error("input is not group-like at the working truncation")]
    NotGroupLike,
    #[error("φ − S(φ) differs from 1/2 + s(ω) in weight {0}")]
    PhiInvariant(u32),
    #[error("element contains t_** where an element of U(L(H)) is expected")]
    Central,
}

/// Shared data: H for (g, n), the truncation degree and the central letter.
#[derive(Clone, Debug)]
pub struct GtContext {
    pub g: usize,
    pub n: usize,
    pub deg: u32,
    pub alpha: Arc<Alphabet>,
    pub center: Letter,
}

impl GtContext {
    pub fn new(g: usize, n: usize, deg: u32) -> Self {
        let alpha = Alphabet::gt(g, n);
        let center = alpha.letter("c[]").expect("gt alphabet has c[]");
        GtContext { g, n, deg, alpha, center }
    }

    pub fn zero(&self) -> TensorElement {
        TensorElement::zero(&self.alpha, self.deg)
    }

    pub fn one(&self) -> TensorElement {
        TensorElement::one(&self.alpha, self.deg)
    }

    pub fn letter(&self, l: Letter) -> TensorElement {
        TensorElement::letter(&self.alpha, self.deg, l)
    }

    pub fn word(&self, w: &[Letter]) -> TensorElement {
        TensorElement::monomial(&self.alpha, self.deg, w, Scalar::one())
    }

    pub fn named(&self, name: &str) -> TensorElement {
        self.letter(self.alpha.letter(name).unwrap_or_else(|| panic!("no generator {name}")))
    }

    /// Letters of H (everything except t_{**}).
    pub fn h_letters(&self) -> Vec<Letter> {
        self.alpha.letters().filter(|&l| l != self.center).collect()
    }

    /// ω = Σ_a [x^a, y^a] + Σ_i t_i.
    pub fn omega(&self) -> TensorElement {
        let mut w = self.zero();
        for a in 1..=self.g {
            w = w.add(&self.named(&format!("x[*,{a}]")).commutator(&self.named(&format!("y[*,{a}]"))));
        }
        for j in 1..=self.n {
            w = w.add(&self.named(&format!("t[{j},*]")));
        }
        w
    }

    pub fn s_omega(&self) -> TensorElement {
        self.omega().substitute_series(&Series::s_series(self.deg as usize / 2 + 1).coeffs)
    }

    /// Moves every t_{**} to the right end of each word.
    pub fn normalize(&self, e: &TensorElement) -> TensorElement {
        let mut out = self.zero();
        for (w, c) in &e.terms {
            let mut v: Word = w.iter().copied().filter(|&l| l != self.center).collect();
            let k = w.len() - v.len();
            v.extend(std::iter::repeat(self.center).take(k));
            out.add_term(v, c.clone());
        }
        out
    }

    /// The projection U(L(H) ⊕ K t_{**}) → U(L(H)).
    pub fn project(&self, e: &TensorElement) -> TensorElement {
        TensorElement::from_terms(&self.alpha, self.deg, e.terms.iter().filter(|(w, _)| !w.contains(&self.center)).map(|(w, c)| (w.clone(), c.clone())))
    }

    /// Words of U(L(H) ⊕ K t_{**}) with t_{**} at the end, of weight ≤ d.
    pub fn extended_words(&self, d: u32) -> Vec<Word> {
        let mut out = Vec::new();
        let hs = self.h_letters();
        fn rec(alpha: &Alphabet, hs: &[Letter], cur: &mut Word, w: u32, d: u32, out: &mut Vec<Word>) {
            out.push(cur.clone());
            for &l in hs {
                let nw = w + alpha.weight(l);
                if nw <= d {
                    cur.push(l);
                    rec(alpha, hs, cur, nw, d, out);
                    cur.pop();
                }
            }
        }
        rec(&self.alpha, &hs, &mut Word::new(), 0, d, &mut out);
        let cw = self.alpha.weight(self.center);
        let base = out.clone();
        for w in &base {
            let mut v = w.clone();
            let mut wt = self.alpha.word_weight(w);
            while wt + cw <= d {
                v.push(self.center);
                wt += cw;
                out.push(v.clone());
            }
        }
        out
    }
}

fn counit_part(e: &TensorElement) -> TensorElement {
    e.sub(&TensorElement::scalar(&e.alpha, e.deg, e.counit()))
}

/// A Fox pairing on U(L(H)), determined by its values on pairs of letters.
#[derive(Clone, Debug)]
pub struct FoxPairing {
    pub ctx: GtContext,
    pub table: Vec<Vec<TensorElement>>,
}

impl FoxPairing {
    pub fn from_letters(ctx: &GtContext, f: impl Fn(Letter, Letter) -> TensorElement) -> Self {
        let n = ctx.alpha.len();
        let val = |a: Letter, b: Letter| if a == ctx.center || b == ctx.center { ctx.zero() } else { f(a, b) };
        let table = (0..n as Letter).map(|a| (0..n as Letter).map(|b| val(a, b)).collect()).collect();
        FoxPairing { ctx: ctx.clone(), table }
    }

    /// x^i ⊙ y^j = δ_ij, y^i ⊙ x^j = −δ_ij, t_i ⊙ t_j = −δ_ij t_j, all else 0.
    pub fn diamond(ctx: &GtContext) -> Self {
        Self::from_letters(ctx, |a, b| diamond_letters(ctx, a, b))
    }

    /// ρ_e(x, y) = (x − ε(x)) e (y − ε(y)).
    pub fn rho(ctx: &GtContext, e: &TensorElement) -> Self {
        Self::from_letters(ctx, |a, b| ctx.letter(a).mul(e).mul(&ctx.letter(b)))
    }

    /// E = ⊙ + ρ_{s(ω)}.
    pub fn e_pairing(ctx: &GtContext) -> Self {
        Self::diamond(ctx).add(&Self::rho(ctx, &ctx.s_omega()))
    }

    pub fn zero(ctx: &GtContext) -> Self {
        Self::from_letters(ctx, |_, _| ctx.zero())
    }

    pub fn add(&self, other: &FoxPairing) -> FoxPairing {
        let table = self.table.iter().zip(&other.table).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a.add(b)).collect()).collect();
        FoxPairing { ctx: self.ctx.clone(), table }
    }

    /// η(a_1…a_k, b_1…b_l) = a_1…a_{k−1} η(a_k, b_1) b_2…b_l on words, bilinearly.
    pub fn eval(&self, a: &TensorElement, b: &TensorElement) -> TensorElement {
        let ctx = &self.ctx;
        let mut out = ctx.zero();
        for (u, cu) in &a.terms {
            let Some((&ul, upre)) = u.split_last() else { continue };
            for (v, cv) in &b.terms {
                let Some((&vf, vpost)) = v.split_first() else { continue };
                let val = &self.table[ul as usize][vf as usize];
                if val.is_zero() {
                    continue;
                }
                let t = ctx.word(upre).mul(val).mul(&ctx.word(vpost));
                out.add_assign_scaled(&t, &(cu * cv));
            }
        }
        out
    }
}

pub fn diamond_letters(ctx: &GtContext, a: Letter, b: Letter) -> TensorElement {
    let sa = ctx.alpha.symbol(a);
    let sb = ctx.alpha.symbol(b);
    match (sa.role, sb.role) {
        (Role::X, Role::Y) if sa.handle == sb.handle => ctx.one(),
        (Role::Y, Role::X) if sa.handle == sb.handle => ctx.one().neg(),
        (Role::T, Role::T) if a == b => ctx.letter(b).neg(),
        _ => ctx.zero(),
    }
}

/// a ⊙ b
pub fn diamond(ctx: &GtContext, a: &TensorElement, b: &TensorElement) -> TensorElement {
    FoxPairing::diamond(ctx).eval(a, b)
}

/// ρ_e(a, b)
pub fn rho(ctx: &GtContext, e: &TensorElement, a: &TensorElement, b: &TensorElement) -> TensorElement {
    counit_part(a).mul(e).mul(&counit_part(b)).with_deg(ctx.deg)
}

/// ξ on U(L(H) ⊕ K t_{**}).
pub fn xi_qd(ctx: &GtContext, a: &TensorElement) -> TensorElement {
    let a = ctx.normalize(a);
    let mut out = ctx.zero();
    for (w, c) in &a.terms {
        let s = w.iter().filter(|&&l| l == ctx.center).count();
        let z = &w[..w.len() - s];
        match s {
            0 => {
                for i in 0..z.len().saturating_sub(1) {
                    let mid = diamond_letters(ctx, z[i], z[i + 1]);
                    if mid.is_zero() {
                        continue;
                    }
                    let t = ctx.word(&z[..i]).mul(&mid).mul(&ctx.word(&z[i + 2..]));
                    out.add_assign_scaled(&t, c);
                }
            }
            1 => out.add_assign_scaled(&ctx.word(z), &(c * &Scalar::int(-2))),
            _ => {}
        }
    }
    out
}

/// q_{e1,e2}(x⃗) = (ε(x) − x) e1 + e2 (ε(x) − x), x the projection of x⃗.
pub fn q_qd(ctx: &GtContext, e1: &TensorElement, e2: &TensorElement, a: &TensorElement) -> TensorElement {
    let x = counit_part(&ctx.project(&ctx.normalize(a))).neg();
    x.mul(e1).add(&e2.mul(&x)).with_deg(ctx.deg)
}

/// A constant φ with φ − S(φ) = 1/2 + s(ω).
#[derive(Clone, Debug)]
pub struct PhiConstant {
    pub phi: TensorElement,
}

impl PhiConstant {
    pub fn new(ctx: &GtContext, phi: TensorElement) -> Result<Self, GtError> {
        let lhs = phi.sub(&phi.antipode());
        let rhs = ctx.s_omega().add(&ctx.one().scale(&Scalar::frac(1, 2)));
        let diff = lhs.sub(&rhs);
        if let Some(w) = diff.min_weight() {
            return Err(GtError::PhiInvariant(w));
        }
        Ok(PhiConstant { phi })
    }

    /// φ₀ = ½ (1/2 + s(ω)).
    pub fn phi0(ctx: &GtContext) -> Self {
        let phi = ctx.s_omega().add(&ctx.one().scale(&Scalar::frac(1, 2))).scale(&Scalar::frac(1, 2));
        PhiConstant::new(ctx, phi).expect("φ₀ satisfies its invariant")
    }

    /// φ̄ = φ + 1/2.
    pub fn bar(&self) -> TensorElement {
        self.phi.add(&TensorElement::one(&self.phi.alpha, self.phi.deg).scale(&Scalar::frac(1, 2)))
    }
}

/// E(a, b) = a ⊙ b + ρ_{s(ω)}(a, b).
pub fn e_eval(ctx: &GtContext, a: &TensorElement, b: &TensorElement) -> TensorElement {
    diamond(ctx, a, b).add(&rho(ctx, &ctx.s_omega(), a, b))
}

/// N = ξ + q_{φ, −S(φ) − 1/2}.
pub fn n_eval(ctx: &GtContext, phi: &PhiConstant, a: &TensorElement) -> TensorElement {
    let e2 = phi.phi.antipode().neg().sub(&ctx.one().scale(&Scalar::frac(1, 2)));
    xi_qd(ctx, a).add(&q_qd(ctx, &phi.phi, &e2, a))
}

/// A quasi-derivation U(L(H) ⊕ K t_{**}) → U(L(H)) given by generator values and a ruling pairing:
/// μ(ab) = μ(a) b + a μ(b) + η(a, b), with a, b projected where they appear outside μ.
#[derive(Clone, Debug)]
pub struct QuasiDerivation {
    pub values: Vec<TensorElement>,
    pub ruling: FoxPairing,
}

impl QuasiDerivation {
    pub fn eval(&self, a: &TensorElement) -> TensorElement {
        let ctx = &self.ruling.ctx;
        let a = ctx.normalize(a);
        let mut out = ctx.zero();
        for (w, c) in &a.terms {
            for i in 0..w.len() {
                let pre = &w[..i];
                if pre.contains(&ctx.center) {
                    break;
                }
                let post = &w[i + 1..];
                if !post.contains(&ctx.center) {
                    out.add_assign_scaled(&ctx.word(pre).mul(&self.values[w[i] as usize]).mul(&ctx.word(post)), c);
                    if i + 1 < w.len() {
                        let mid = &self.ruling.table[w[i] as usize][w[i + 1] as usize];
                        out.add_assign_scaled(&ctx.word(pre).mul(mid).mul(&ctx.word(&w[i + 2..])), c);
                    }
                }
            }
        }
        out
    }

    /// The quasi-derivation ruled by E with N's generator values.
    pub fn n_from_generators(ctx: &GtContext, phi: &PhiConstant) -> Self {
        let values = ctx
            .alpha
            .letters()
            .map(|l| if l == ctx.center { ctx.one().scale(&Scalar::int(-2)) } else { n_eval(ctx, phi, &ctx.letter(l)) })
            .collect();
        QuasiDerivation { values, ruling: FoxPairing::e_pairing(ctx) }
    }
}

/// mult: T ⊗ T → T.
pub fn mult(p: &TensorPair) -> TensorElement {
    let mut out = TensorElement::zero(&p.alpha, p.deg);
    for ((a, b), c) in &p.terms {
        let mut w = a.clone();
        w.extend_from_slice(b);
        out.add_term(w, c.clone());
    }
    out
}

fn check_group_like(ctx: &GtContext, a: &TensorElement) -> Result<(), GtError> {
    if ctx.normalize(a).is_group_like() {
        Ok(())
    } else {
        Err(GtError::NotGroupLike)
    }
}

/// Drops everything above weight D − 2, where truncated inputs stop determining the output.
fn reliable(ctx: &GtContext, p: &TensorPair) -> TensorPair {
    let mut out = TensorPair::zero(&ctx.alpha, ctx.deg.saturating_sub(2));
    out.add_assign_scaled(p, &Scalar::one());
    out
}

/// κ(α, β) = β S(η(α,β)′) α ⊗ η(α,β)″ for group-like α, β, through weight D − 2.
pub fn kappa_grouplike(p: &FoxPairing, a: &TensorElement, b: &TensorElement) -> Result<TensorPair, GtError> {
    let ctx = &p.ctx;
    check_group_like(ctx, a)?;
    check_group_like(ctx, b)?;
    let eta = p.eval(a, b);
    Ok(reliable(ctx, &eta.coproduct().map_sides(|u| b.mul(&u.antipode()).mul(a), |v| v.clone())))
}

/// |mult κ(α, β)|
pub fn goldman_grouplike(p: &FoxPairing, a: &TensorElement, b: &TensorElement) -> Result<CyclicElement, GtError> {
    Ok(CyclicElement::project(&mult(&kappa_grouplike(p, a, b)?)))
}

/// δ_μ(α⃗) = α S(μ(α⃗)′) ⊗ μ(α⃗)″ for group-like α⃗ in the extended algebra, through weight D − 2.
pub fn cobracket_grouplike(mu: &dyn Fn(&TensorElement) -> TensorElement, ctx: &GtContext, a: &TensorElement) -> Result<TensorPair, GtError> {
    check_group_like(ctx, a)?;
    let alpha = ctx.project(&ctx.normalize(a));
    let m = mu(a);
    Ok(reliable(ctx, &m.coproduct().map_sides(|u| alpha.mul(&u.antipode()), |v| v.clone())))
}

pub fn turaev_grouplike(mu: &dyn Fn(&TensorElement) -> TensorElement, ctx: &GtContext, a: &TensorElement) -> Result<CyclicPair, GtError> {
    Ok(CyclicPair::project(&cobracket_grouplike(mu, ctx, a)?))
}

/// Σ S(e′) ⊗ e″ + e″ ⊗ S(e′).
pub fn antipode_sum(e: &TensorElement) -> TensorPair {
    let d = e.coproduct();
    let mut out = TensorPair::zero(&e.alpha, e.deg);
    for ((a, b), c) in &d.terms {
        let sa: Word = a.iter().rev().copied().collect();
        let c = if a.len() % 2 == 1 { -c } else { c.clone() };
        out.add_term(sa.clone(), b.clone(), c.clone());
        out.add_term(b.clone(), sa, c);
    }
    out
}

/// X S(e′) ⊗ e″ + X e″ ⊗ S(e′) − S(e′) ⊗ e″ X − e″ ⊗ S(e′) X, before cyclic projection.
pub fn delta_q_incl_tensor(e: &TensorElement, x: &TensorElement) -> TensorPair {
    let s = antipode_sum(e);
    let one = TensorElement::one(&e.alpha, e.deg);
    let left = TensorPair::tensor(x, &one).mul(&s);
    let right = s.mul(&TensorPair::tensor(&one, x));
    let mut out = left;
    out.sub_assign(&right);
    out
}

pub fn delta_q_incl(e: &TensorElement, x: &TensorElement) -> CyclicPair {
    CyclicPair::project(&delta_q_incl_tensor(e, x))
}

/// |1 ∧ X| = |−X ⊗ 1 + 1 ⊗ X|.
pub fn one_wedge(x: &TensorElement) -> CyclicPair {
    let one = TensorElement::one(&x.alpha, x.deg);
    let mut p = TensorPair::tensor(&one, x);
    p.sub_assign(&TensorPair::tensor(x, &one));
    CyclicPair::project(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> GtContext {
        GtContext::new(1, 1, 6)
    }

    #[test]
    fn diamond_table() {
        let c = ctx();
        let (x, y, t) = (c.named("x[*,1]"), c.named("y[*,1]"), c.named("t[1,*]"));
        assert_eq!(diamond(&c, &x, &y), c.one());
        assert_eq!(diamond(&c, &y, &x), c.one().neg());
        assert!(diamond(&c, &x, &x).is_zero());
        assert_eq!(diamond(&c, &t, &t), t.neg());
        assert!(diamond(&c, &c.one(), &y).is_zero());
    }

    #[test]
    fn xi_examples() {
        let c = ctx();
        let (x, y) = (c.named("x[*,1]"), c.named("y[*,1]"));
        let z = c.named("c[]");
        assert!(xi_qd(&c, &x).is_zero());
        assert_eq!(xi_qd(&c, &x.mul(&y)), c.one());
        assert_eq!(xi_qd(&c, &x.mul(&z)), x.scale(&Scalar::int(-2)));
        assert_eq!(xi_qd(&c, &z.mul(&x)), x.scale(&Scalar::int(-2)));
        assert!(xi_qd(&c, &z.mul(&z)).is_zero());
    }

    #[test]
    fn rho_and_q_examples() {
        let c = ctx();
        let (x, y) = (c.named("x[*,1]"), c.named("y[*,1]"));
        let e = c.omega();
        assert!(rho(&c, &e, &c.one(), &y).is_zero());
        assert_eq!(rho(&c, &c.one(), &x, &y), x.mul(&y));
        assert_eq!(q_qd(&c, &e, &c.zero(), &y), y.mul(&e).neg());
    }

    #[test]
    fn n_values() {
        let c = ctx();
        let phi = PhiConstant::phi0(&c);
        assert_eq!(n_eval(&c, &phi, &c.named("c[]")), c.one().scale(&Scalar::int(-2)));
        let a = c.named("y[*,1]");
        let want = phi.phi.antipode().add(&c.one().scale(&Scalar::frac(1, 2))).mul(&a).sub(&a.mul(&phi.phi));
        assert_eq!(n_eval(&c, &phi, &a), want);
    }

    #[test]
    fn e_on_letters() {
        let c = ctx();
        let (x, y) = (c.named("x[*,1]"), c.named("y[*,1]"));
        let want = c.one().add(&x.mul(&c.s_omega()).mul(&y));
        assert_eq!(e_eval(&c, &x, &y), want);
        assert_eq!(FoxPairing::e_pairing(&c).eval(&x, &y), want);
    }

    #[test]
    fn phi_invariant_rejects() {
        let c = ctx();
        assert!(PhiConstant::new(&c, c.zero()).is_err());
    }

    #[test]
    fn n_matches_generator_description() {
        let c = GtContext::new(1, 1, 5);
        let phi = PhiConstant::phi0(&c);
        let qd = QuasiDerivation::n_from_generators(&c, &phi);
        for w in c.extended_words(4) {
            let e = c.word(&w);
            assert_eq!(qd.eval(&e), n_eval(&c, &phi, &e), "{}", e);
        }
    }

    #[test]
    fn delta_q_incl_examples() {
        let c = ctx();
        let x = c.named("x[*,1]").mul(&c.named("t[1,*]")).add(&c.named("y[*,1]"));
        assert_eq!(delta_q_incl(&c.s_omega(), &x), one_wedge(&x));
        assert!(delta_q_incl(&c.zero(), &x).is_zero());
        assert_eq!(delta_q_incl(&c.one().scale(&Scalar::frac(-1, 2)), &x), one_wedge(&x));
    }

    #[test]
    fn kappa_trivial() {
        let c = GtContext::new(1, 0, 4);
        let one = c.one();
        assert!(kappa_grouplike(&FoxPairing::diamond(&c), &one, &one).unwrap().is_zero());
        let a = c.named("x[*,1]").exp();
        let b = c.named("y[*,1]").exp();
        assert!(kappa_grouplike(&FoxPairing::zero(&c), &a, &b).unwrap().is_zero());
        assert_eq!(kappa_grouplike(&FoxPairing::diamond(&c), &c.named("x[*,1]"), &b), Err(GtError::NotGroupLike));
    }

    #[test]
    fn goldman_antisymmetry() {
        let c = GtContext::new(1, 0, 4);
        let p = FoxPairing::e_pairing(&c);
        let (x, y) = (c.named("x[*,1]"), c.named("y[*,1]"));
        let samples = [x.clone(), y.clone(), x.add(&y), x.commutator(&y), x.sub(&y.scale(&Scalar::int(2))).add(&x.commutator(&y))];
        for a in &samples {
            for b in &samples {
                let (ea, eb) = (a.exp(), b.exp());
                let l = goldman_grouplike(&p, &ea, &eb).unwrap();
                let r = goldman_grouplike(&p, &eb, &ea).unwrap();
                assert!(l.add(&r).is_zero(), "{a} {b}: {l} vs {r}");
            }
        }
    }
}
