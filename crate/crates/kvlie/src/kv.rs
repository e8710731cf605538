//! Tangential derivations and automorphisms of L(H), divergence cocycles, and the KV / KRV / SolKV checks.

use crate::exact::word::{lyndon_words, standard_factorization};
use crate::exact::{bch, q, Alphabet, CyclicElement, Letter, LieElement, Q, Scalar, Series, TensorElement, Word};
use crate::linalg::{subspace_membership, Echelon, LinalgError, SparseVec};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KvError {
    #[error("unknown group letter `{0}`")]
    UnknownLetter(String),
    #[error("malformed framing: {0}")]
    Framing(String),
    #[error("value for {0} is not a Lie element")]
    NotLie(String),
    #[error("value for {0} has a term of weight below {1}")]
    LowWeight(String, u32),
    #[error("wrong number of {0}: expected {1}, got {2}")]
    Arity(&'static str, usize, usize),
    #[error("no tangential solution in weight {0}")]
    NoSolution(u32),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// H = span{x_i, y_i, z_j} with its distinguished elements ξ, ω and r.
#[derive(Clone, Debug)]
pub struct KvContext {
    pub g: usize,
    pub n: usize,
    pub deg: u32,
    pub alpha: Arc<Alphabet>,
    pub xi: TensorElement,
    pub omega: TensorElement,
    pub r_bold: CyclicElement,
}

impl KvContext {
    pub fn new(g: usize, n: usize, deg: u32) -> Self {
        let alpha = Alphabet::kv(g, n);
        let mut ctx = KvContext {
            g,
            n,
            deg,
            alpha: alpha.clone(),
            xi: TensorElement::zero(&alpha, deg),
            omega: TensorElement::zero(&alpha, deg),
            r_bold: CyclicElement::zero(&alpha, deg),
        };
        ctx.xi = ctx.theta_exp(&boundary_word(g, n)).expect("boundary word uses declared letters").log();
        let mut om = ctx.zero();
        for a in 1..=g {
            om = om.add(&ctx.x(a).commutator(&ctx.y(a)));
        }
        for j in 1..=n {
            om = om.add(&ctx.z(j));
        }
        ctx.omega = om;
        let r = Series::r_series(deg as usize).coeffs;
        let mut rb = ctx.zero();
        for a in 1..=g {
            rb = rb.add(&ctx.x(a).substitute_series(&r)).add(&ctx.y(a).substitute_series(&r));
        }
        ctx.r_bold = CyclicElement::project(&rb);
        ctx
    }

    pub fn zero(&self) -> TensorElement {
        TensorElement::zero(&self.alpha, self.deg)
    }

    pub fn one(&self) -> TensorElement {
        TensorElement::one(&self.alpha, self.deg)
    }

    pub fn x_letter(&self, a: usize) -> Letter {
        (a - 1) as Letter
    }

    pub fn y_letter(&self, a: usize) -> Letter {
        (self.g + a - 1) as Letter
    }

    pub fn z_letter(&self, j: usize) -> Letter {
        (2 * self.g + j - 1) as Letter
    }

    pub fn x(&self, a: usize) -> TensorElement {
        TensorElement::letter(&self.alpha, self.deg, self.x_letter(a))
    }

    pub fn y(&self, a: usize) -> TensorElement {
        TensorElement::letter(&self.alpha, self.deg, self.y_letter(a))
    }

    pub fn z(&self, j: usize) -> TensorElement {
        TensorElement::letter(&self.alpha, self.deg, self.z_letter(j))
    }

    /// θ_exp: α_i ↦ e^{x_i}, β_i ↦ e^{y_i}, γ_j ↦ e^{z_j}.
    pub fn theta_exp(&self, w: &[GroupLetter]) -> Result<TensorElement, KvError> {
        let mut p = self.one();
        for gl in w {
            let l = match gl.gen {
                GroupGen::Alpha(a) if (1..=self.g).contains(&a) => self.x(a),
                GroupGen::Beta(a) if (1..=self.g).contains(&a) => self.y(a),
                GroupGen::Gamma(j) if (1..=self.n).contains(&j) => self.z(j),
                _ => return Err(KvError::UnknownLetter(gl.to_string())),
            };
            let e = if gl.inverse { l.neg().exp() } else { l.exp() };
            p = p.mul(&e);
        }
        Ok(p)
    }

    /// Spanning set of |Σ_j z_j K[[z_j]] + e² K[[e]]| at the working truncation.
    pub fn subspace_seeds(&self, e: &TensorElement) -> Vec<CyclicElement> {
        let mut seeds = Vec::new();
        for j in 1..=self.n {
            let z = self.z(j);
            let mut p = z.clone();
            while !p.is_zero() {
                seeds.push(CyclicElement::project(&p));
                p = p.mul(&z);
            }
        }
        let mut p = e.mul(e);
        while !p.is_zero() {
            seeds.push(CyclicElement::project(&p));
            p = p.mul(e);
        }
        seeds
    }

    /// Membership of `c` in |Σ_j z_j K[[z_j]] + e² K[[e]]|, with the reduced remainder.
    pub fn membership(&self, e: &TensorElement, c: &CyclicElement) -> Result<(bool, CyclicElement), KvError> {
        let seeds: Vec<BTreeMap<Word, Scalar>> = self.subspace_seeds(e).into_iter().map(|s| s.terms).collect();
        let (ok, rest) = subspace_membership(&seeds, &c.terms)?;
        Ok((ok, CyclicElement { alpha: self.alpha.clone(), deg: self.deg, terms: rest }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupGen {
    Alpha(usize),
    Beta(usize),
    Gamma(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupLetter {
    pub gen: GroupGen,
    pub inverse: bool,
}

impl fmt::Display for GroupLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, i) = match self.gen {
            GroupGen::Alpha(i) => ("a", i),
            GroupGen::Beta(i) => ("b", i),
            GroupGen::Gamma(i) => ("g", i),
        };
        write!(f, "{n}{i}{}", if self.inverse { "^-1" } else { "" })
    }
}

/// Parses whitespace-separated letters `a1`, `b2`, `g1` (or `alpha1`, `beta2`, `gamma1`), each optionally followed by `^-1`.
pub fn parse_group_word(s: &str) -> Result<Vec<GroupLetter>, KvError> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        let (body, inverse) = match tok.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (tok, false),
        };
        let split = body.find(|c: char| c.is_ascii_digit()).ok_or_else(|| KvError::UnknownLetter(tok.into()))?;
        let (name, idx) = body.split_at(split);
        let i: usize = idx.parse().map_err(|_| KvError::UnknownLetter(tok.into()))?;
        let gen = match name {
            "a" | "alpha" => GroupGen::Alpha(i),
            "b" | "beta" => GroupGen::Beta(i),
            "g" | "gamma" => GroupGen::Gamma(i),
            _ => return Err(KvError::UnknownLetter(tok.into())),
        };
        out.push(GroupLetter { gen, inverse });
    }
    Ok(out)
}

/// α_1β_1α_1⁻¹β_1⁻¹ ⋯ α_gβ_gα_g⁻¹β_g⁻¹ γ_1 ⋯ γ_n
pub fn boundary_word(g: usize, n: usize) -> Vec<GroupLetter> {
    let mut w = Vec::new();
    for a in 1..=g {
        for (gen, inverse) in [(GroupGen::Alpha(a), false), (GroupGen::Beta(a), false), (GroupGen::Alpha(a), true), (GroupGen::Beta(a), true)] {
            w.push(GroupLetter { gen, inverse });
        }
    }
    for j in 1..=n {
        w.push(GroupLetter { gen: GroupGen::Gamma(j), inverse: false });
    }
    w
}

/// Rotation numbers a_i, b_i, c_j of a framing.
#[derive(Clone, Debug, PartialEq)]
pub struct FramingData {
    pub a: Vec<Q>,
    pub b: Vec<Q>,
    pub c: Vec<Q>,
}

impl FramingData {
    pub fn zero(g: usize, n: usize) -> Self {
        FramingData { a: vec![q(0); g], b: vec![q(0); g], c: vec![q(0); n] }
    }

    /// `a=1,0;b=0,1/2;c=-1`; omitted keys are zero.
    pub fn parse(s: &str, g: usize, n: usize) -> Result<Self, KvError> {
        let mut fr = FramingData::zero(g, n);
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| KvError::Framing(format!("expected key=values in `{part}`")))?;
            let vals: Vec<Q> = v
                .split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<Q>().map_err(|_| KvError::Framing(format!("bad rational `{x}`"))))
                .collect::<Result<_, _>>()?;
            let (slot, want) = match k.trim() {
                "a" => (&mut fr.a, g),
                "b" => (&mut fr.b, g),
                "c" => (&mut fr.c, n),
                other => return Err(KvError::Framing(format!("unknown key `{other}`"))),
            };
            if vals.len() != want {
                return Err(KvError::Framing(format!("`{}` needs {want} values, got {}", k.trim(), vals.len())));
            }
            *slot = vals;
        }
        Ok(fr)
    }

    /// p^fr = Σ_i |a_i y_i − b_i x_i|
    pub fn p_fr(&self, ctx: &KvContext) -> CyclicElement {
        let mut p = ctx.zero();
        for i in 1..=ctx.g {
            p = p.add(&ctx.y(i).scale_q(&self.a[i - 1])).sub(&ctx.x(i).scale_q(&self.b[i - 1]));
        }
        CyclicElement::project(&p)
    }
}

/// ũ = (u; u_1, …, u_n) with u(z_j) = [z_j, u_j].
#[derive(Clone, Debug, PartialEq)]
pub struct TangentialDerivation {
    pub g: usize,
    pub n: usize,
    /// Images of every letter; the z entries are always [z_j, u_j].
    images: Vec<TensorElement>,
    pub conj: Vec<TensorElement>,
}

impl TangentialDerivation {
    pub fn zero(ctx: &KvContext) -> Self {
        let images = vec![ctx.zero(); ctx.alpha.len()];
        TangentialDerivation { g: ctx.g, n: ctx.n, images, conj: vec![ctx.zero(); ctx.n] }
    }

    /// Builds ũ from u(x_1…x_g, y_1…y_g) and u_1…u_n, checking Lie-ness and positive degree.
    pub fn new(ctx: &KvContext, xy: Vec<TensorElement>, conj: Vec<TensorElement>) -> Result<Self, KvError> {
        if xy.len() != 2 * ctx.g {
            return Err(KvError::Arity("x/y values", 2 * ctx.g, xy.len()));
        }
        if conj.len() != ctx.n {
            return Err(KvError::Arity("conjugators", ctx.n, conj.len()));
        }
        for (i, v) in xy.iter().enumerate() {
            let name = ctx.alpha.name(i as Letter).to_string();
            LieElement::from_tensor(v).map_err(|_| KvError::NotLie(name.clone()))?;
            if v.min_weight().is_some_and(|w| w < 2) {
                return Err(KvError::LowWeight(name, 2));
            }
        }
        for (j, v) in conj.iter().enumerate() {
            let name = format!("u_{}", j + 1);
            LieElement::from_tensor(v).map_err(|_| KvError::NotLie(name.clone()))?;
            if v.min_weight().is_some_and(|w| w < 1) {
                return Err(KvError::LowWeight(name, 1));
            }
        }
        Ok(Self::from_parts(ctx, xy, conj))
    }

    fn from_parts(ctx: &KvContext, xy: Vec<TensorElement>, conj: Vec<TensorElement>) -> Self {
        let mut images = xy;
        for j in 1..=ctx.n {
            images.push(ctx.z(j).commutator(&conj[j - 1]));
        }
        TangentialDerivation { g: ctx.g, n: ctx.n, images, conj }
    }

    /// ad_w: u(a) = [w, a], u_j = −w.
    pub fn ad(ctx: &KvContext, w: &TensorElement) -> Self {
        let xy = (1..=ctx.g).map(|a| w.commutator(&ctx.x(a))).chain((1..=ctx.g).map(|a| w.commutator(&ctx.y(a)))).collect();
        Self::from_parts(ctx, xy, vec![w.neg(); ctx.n])
    }

    pub fn image(&self, l: Letter) -> &TensorElement {
        &self.images[l as usize]
    }

    pub fn xy_values(&self) -> &[TensorElement] {
        &self.images[..2 * self.g]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|e| e.is_zero()) && self.conj.iter().all(|e| e.is_zero())
    }

    pub fn apply(&self, e: &TensorElement) -> TensorElement {
        e.apply_derivation(&self.images)
    }

    pub fn apply_cyclic(&self, c: &CyclicElement) -> CyclicElement {
        CyclicElement::project(&self.apply(&c.lift()))
    }

    fn combine(&self, other: &Self, f: impl Fn(&TensorElement, &TensorElement) -> TensorElement) -> Self {
        TangentialDerivation {
            g: self.g,
            n: self.n,
            images: self.images.iter().zip(&other.images).map(|(a, b)| f(a, b)).collect(),
            conj: self.conj.iter().zip(&other.conj).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.combine(self, |a, _| a.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::int(-1))
    }

    /// ([u, v]; u(v_j) − v(u_j) + [u_j, v_j])
    pub fn bracket(&self, other: &Self) -> Self {
        let k = 2 * self.g;
        let mut images: Vec<TensorElement> = (0..k).map(|i| self.apply(&other.images[i]).sub(&other.apply(&self.images[i]))).collect();
        let conj: Vec<TensorElement> = self
            .conj
            .iter()
            .zip(&other.conj)
            .map(|(uj, vj)| self.apply(vj).sub(&other.apply(uj)).add(&uj.commutator(vj)))
            .collect();
        for j in 0..self.n {
            let z = &self.images[k + j];
            let zl = TensorElement::letter(&z.alpha, z.deg, (k + j) as Letter);
            images.push(zl.commutator(&conj[j]));
        }
        TangentialDerivation { g: self.g, n: self.n, images, conj }
    }
}

/// G̃ = exp(ũ), stored by its logarithm.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentialAutomorphism {
    pub log: TangentialDerivation,
}

impl TangentialAutomorphism {
    pub fn identity(ctx: &KvContext) -> Self {
        TangentialAutomorphism { log: TangentialDerivation::zero(ctx) }
    }

    pub fn exp(u: TangentialDerivation) -> Self {
        TangentialAutomorphism { log: u }
    }

    /// Ad_{e^w} = exp(ad_w).
    pub fn inner(ctx: &KvContext, w: &TensorElement) -> Self {
        Self::exp(TangentialDerivation::ad(ctx, w))
    }

    /// G(e) = Σ_k u^k(e)/k!
    pub fn apply(&self, e: &TensorElement) -> TensorElement {
        let mut out = e.clone();
        let mut term = e.clone();
        let mut k = 1i64;
        loop {
            term = self.log.apply(&term).scale(&Scalar::frac(1, k));
            if term.is_zero() {
                return out;
            }
            out = out.add(&term);
            k += 1;
        }
    }

    pub fn apply_cyclic(&self, c: &CyclicElement) -> CyclicElement {
        CyclicElement::project(&self.apply(&c.lift()))
    }

    pub fn inverse(&self) -> Self {
        Self::exp(self.log.neg())
    }

    /// self ∘ other, via BCH in the derivation Lie algebra.
    pub fn compose(&self, other: &Self, deg: u32) -> Self {
        Self::exp(bch_derivations(&self.log, &other.log, deg))
    }

    /// The g_j with G(z_j) = g_j⁻¹ z_j g_j, from g⁻¹ dg/dt = G_t(u_j), g(0) = 1.
    pub fn conjugators(&self, ctx: &KvContext) -> Vec<TensorElement> {
        self.log
            .conj
            .iter()
            .map(|uj| {
                // A(t) = Σ_k t^k u^k(u_j)/k!
                let mut a = vec![uj.clone()];
                loop {
                    let next = self.log.apply(a.last().unwrap()).scale(&Scalar::frac(1, a.len() as i64));
                    if next.is_zero() {
                        break;
                    }
                    a.push(next);
                }
                let mut coeffs = vec![ctx.one()];
                let mut total = ctx.one();
                // every A_k has weight ≥ 1, so g_m vanishes for m > D
                for m in 0..ctx.deg as usize {
                    let mut s = ctx.zero();
                    for (k, ak) in a.iter().enumerate().take(m + 1) {
                        s = s.add(&coeffs[m - k].mul(ak));
                    }
                    let next = s.scale(&Scalar::frac(1, m as i64 + 1));
                    total = total.add(&next);
                    coeffs.push(next);
                }
                total
            })
            .collect()
    }
}

/// bch(u, v) evaluated in the Lie algebra of tangential derivations, through bracket length `deg`.
pub fn bch_derivations(u: &TangentialDerivation, v: &TangentialDerivation, deg: u32) -> TangentialDerivation {
    let two = Alphabet::plain(&["u", "v"]);
    let b = bch(&[LieElement::generator(&two, deg, 0), LieElement::generator(&two, deg, 1)]);
    let mut memo: HashMap<Word, TangentialDerivation> = HashMap::new();
    fn eval(w: &[Letter], u: &TangentialDerivation, v: &TangentialDerivation, memo: &mut HashMap<Word, TangentialDerivation>) -> TangentialDerivation {
        if w.len() == 1 {
            return if w[0] == 0 { u.clone() } else { v.clone() };
        }
        if let Some(r) = memo.get(w) {
            return r.clone();
        }
        let (a, b) = standard_factorization(w);
        let pa = eval(a, u, v, memo);
        let r = if pa.is_zero() { pa } else { pa.bracket(&eval(b, u, v, memo)) };
        memo.insert(crate::exact::word(w), r.clone());
        r
    }
    let mut out = u.sub(u);
    for (w, c) in &b.terms {
        out = out.add(&eval(w, u, v, &mut memo).scale(c));
    }
    out
}

/// d_w: the 1-cocycle with d_w(w′) = δ_{ww′}; on words it keeps the prefix of words ending in w.
pub fn d_w(e: &TensorElement, w: Letter) -> TensorElement {
    TensorElement::from_terms(&e.alpha, e.deg, e.terms.iter().filter(|(v, _)| v.last() == Some(&w)).map(|(v, c)| (crate::exact::word(&v[..v.len() - 1]), c.clone())))
}

/// sdiv_{x,y,z}(u) = Σ_w |d_w u(w)|
pub fn sdiv_xyz(ctx: &KvContext, u: &TangentialDerivation) -> CyclicElement {
    let mut out = CyclicElement::zero(&ctx.alpha, ctx.deg);
    for l in ctx.alpha.letters() {
        out = out.add(&CyclicElement::project(&d_w(u.image(l), l)));
    }
    out
}

/// b^fr(ũ) = Σ_j c_j |u_j|
pub fn b_fr(ctx: &KvContext, fr: &FramingData, u: &TangentialDerivation) -> CyclicElement {
    let mut out = ctx.zero();
    for (j, uj) in u.conj.iter().enumerate() {
        out = out.add(&uj.scale_q(&fr.c[j]));
    }
    CyclicElement::project(&out)
}

pub fn sdiv_fr_gr(ctx: &KvContext, fr: &FramingData, u: &TangentialDerivation) -> CyclicElement {
    sdiv_xyz(ctx, u).sub(&b_fr(ctx, fr, u))
}

/// sdiv_{x,y,z}(u) − b^fr(ũ) + u·(r − p^fr)
pub fn sdiv_fr(ctx: &KvContext, fr: &FramingData, u: &TangentialDerivation) -> CyclicElement {
    sdiv_fr_gr(ctx, fr, u).add(&u.apply_cyclic(&ctx.r_bold.sub(&fr.p_fr(ctx))))
}

/// Ψ(e^u) = Σ_k u^k ψ(u)/(k+1)!
pub fn integrate(psi: &dyn Fn(&TangentialDerivation) -> CyclicElement, g: &TangentialAutomorphism) -> CyclicElement {
    let u = &g.log;
    let mut term = psi(u);
    let mut out = term.clone();
    let mut k = 2i64;
    loop {
        term = u.apply_cyclic(&term).scale(&Scalar::frac(1, k));
        if term.is_zero() {
            return out;
        }
        out = out.add(&term);
        k += 1;
    }
}

pub fn j_xyz(ctx: &KvContext, g: &TangentialAutomorphism) -> CyclicElement {
    integrate(&|u| sdiv_xyz(ctx, u), g)
}

pub fn c_fr(ctx: &KvContext, fr: &FramingData, g: &TangentialAutomorphism) -> CyclicElement {
    integrate(&|u| b_fr(ctx, fr, u), g)
}

pub fn j_fr(ctx: &KvContext, fr: &FramingData, g: &TangentialAutomorphism) -> CyclicElement {
    integrate(&|u| sdiv_fr(ctx, fr, u), g)
}

pub fn j_fr_gr(ctx: &KvContext, fr: &FramingData, g: &TangentialAutomorphism) -> CyclicElement {
    integrate(&|u| sdiv_fr_gr(ctx, fr, u), g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KvKind {
    Kv,
    Krv,
    SolKv,
}

impl fmt::Display for KvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KvKind::Kv => "KV",
            KvKind::Krv => "KRV",
            KvKind::SolKv => "SolKV",
        })
    }
}

#[derive(Clone, Debug)]
pub struct KvReport {
    pub kind: KvKind,
    pub deg: u32,
    /// G(ξ) − ξ, G(ω) − ω or ξ − G(ω).
    pub equation_residue: TensorElement,
    /// The cocycle expression whose membership is tested.
    pub cocycle: CyclicElement,
    pub member: bool,
    pub membership_residual: CyclicElement,
}

impl KvReport {
    pub fn equation_ok(&self) -> bool {
        self.equation_residue.is_zero()
    }

    pub fn ok(&self) -> bool {
        self.equation_ok() && self.member
    }

    /// Nonzero homogeneous parts of the equation residue.
    pub fn residue_by_weight(&self) -> Vec<(u32, TensorElement)> {
        (1..=self.deg).map(|d| (d, self.equation_residue.homogeneous_part(d))).filter(|(_, e)| !e.is_zero()).collect()
    }
}

pub fn check(kind: KvKind, ctx: &KvContext, g: &TangentialAutomorphism, fr: &FramingData) -> Result<KvReport, KvError> {
    let (residue, cocycle, span) = match kind {
        KvKind::Kv => (g.apply(&ctx.xi).sub(&ctx.xi), j_fr(ctx, fr, g), &ctx.xi),
        KvKind::Krv => (g.apply(&ctx.omega).sub(&ctx.omega), j_fr_gr(ctx, fr, g), &ctx.omega),
        KvKind::SolKv => (ctx.xi.sub(&g.apply(&ctx.omega)), j_fr_gr(ctx, fr, g).sub(&ctx.r_bold).add(&fr.p_fr(ctx)), &ctx.xi),
    };
    let (member, membership_residual) = ctx.membership(span, &cocycle)?;
    Ok(KvReport { kind, deg: ctx.deg, equation_residue: residue, cocycle, member, membership_residual })
}

pub fn check_kv(ctx: &KvContext, g: &TangentialAutomorphism, fr: &FramingData) -> Result<KvReport, KvError> {
    check(KvKind::Kv, ctx, g, fr)
}

pub fn check_krv(ctx: &KvContext, g: &TangentialAutomorphism, fr: &FramingData) -> Result<KvReport, KvError> {
    check(KvKind::Krv, ctx, g, fr)
}

pub fn check_solkv(ctx: &KvContext, g: &TangentialAutomorphism, fr: &FramingData) -> Result<KvReport, KvError> {
    check(KvKind::SolKv, ctx, g, fr)
}

/// θ = G⁻¹ ∘ θ_exp.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub ctx: KvContext,
    pub g_inv: TangentialAutomorphism,
}

impl Expansion {
    pub fn theta_exp(ctx: &KvContext) -> Self {
        Expansion { ctx: ctx.clone(), g_inv: TangentialAutomorphism::identity(ctx) }
    }

    pub fn eval(&self, w: &[GroupLetter]) -> Result<TensorElement, KvError> {
        Ok(self.g_inv.apply(&self.ctx.theta_exp(w)?))
    }
}

pub fn compose_expansion(ctx: &KvContext, g: &TangentialAutomorphism) -> Expansion {
    Expansion { ctx: ctx.clone(), g_inv: g.inverse() }
}

/// log θ(∂_0Σ) − ω; θ is special when this vanishes.
pub fn special_residue(theta: &Expansion) -> TensorElement {
    let c = &theta.ctx;
    theta.eval(&boundary_word(c.g, c.n)).expect("boundary word").log().sub(&c.omega)
}

pub fn check_special(theta: &Expansion) -> bool {
    special_residue(theta).is_zero()
}

/// A tangential automorphism with G(ω) = ξ, found weight by weight.
pub fn solve_special(ctx: &KvContext) -> Result<TangentialAutomorphism, KvError> {
    let mut u = TangentialDerivation::zero(ctx);
    let basis = |d: u32| -> Vec<TensorElement> {
        if d == 0 {
            return vec![];
        }
        lyndon_words(&ctx.alpha, d, false).iter().map(|w| LieElement::basis(&ctx.alpha, ctx.deg, w).to_tensor()).collect()
    };
    for k in 1..=ctx.deg.saturating_sub(2) {
        let cur = TangentialAutomorphism::exp(u.clone()).apply(&ctx.omega);
        let target = ctx.xi.sub(&cur).homogeneous_part(k + 2);
        if target.is_zero() {
            continue;
        }
        // (slot, basis element, image in weight k + 2)
        let mut unknowns: Vec<(usize, TensorElement, TensorElement)> = Vec::new();
        for a in 1..=ctx.g {
            for p in basis(k + 1) {
                let im = p.commutator(&ctx.y(a));
                unknowns.push((a - 1, p, im));
            }
            for p in basis(k + 1) {
                let im = ctx.x(a).commutator(&p);
                unknowns.push((ctx.g + a - 1, p, im));
            }
        }
        for j in 1..=ctx.n {
            for p in basis(k) {
                let im = ctx.z(j).commutator(&p);
                unknowns.push((2 * ctx.g + j - 1, p, im));
            }
        }
        let mut cols: BTreeMap<Word, u32> = BTreeMap::new();
        let mut to_vec = |e: &TensorElement| -> SparseVec {
            e.terms
                .iter()
                .map(|(w, c)| {
                    let n = cols.len() as u32;
                    (*cols.entry(w.clone()).or_insert(n), c.clone())
                })
                .collect()
        };
        let mut ech = Echelon::tracking();
        for (_, _, im) in &unknowns {
            ech.insert(to_vec(im))?;
        }
        let (combo, residual) = ech.solve(&to_vec(&target));
        if !residual.is_empty() {
            return Err(KvError::NoSolution(k + 2));
        }
        let mut xy: Vec<TensorElement> = u.xy_values().to_vec();
        let mut conj = u.conj.clone();
        for (i, c) in combo {
            let (slot, p, _) = &unknowns[i as usize];
            if *slot < 2 * ctx.g {
                xy[*slot] = xy[*slot].add(&p.scale(&c));
            } else {
                conj[slot - 2 * ctx.g] = conj[slot - 2 * ctx.g].add(&p.scale(&c));
            }
        }
        u = TangentialDerivation::from_parts(ctx, xy, conj);
    }
    let g = TangentialAutomorphism::exp(u);
    if !ctx.xi.sub(&g.apply(&ctx.omega)).is_zero() {
        return Err(KvError::NoSolution(ctx.deg));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum_z(ctx: &KvContext) -> CyclicElement {
        let mut s = ctx.zero();
        for j in 1..=ctx.n {
            s = s.add(&ctx.z(j));
        }
        CyclicElement::project(&s)
    }

    #[test]
    fn xi_agrees_with_omega_in_weight_two() {
        for (g, n) in [(1, 0), (1, 1), (2, 1), (0, 2)] {
            let c = KvContext::new(g, n, 4);
            assert_eq!(c.xi.homogeneous_part(2), c.omega.homogeneous_part(2));
            assert!(c.xi.homogeneous_part(1).is_zero());
        }
    }

    #[test]
    fn theta_exp_examples() {
        let c = KvContext::new(1, 1, 4);
        assert_eq!(c.theta_exp(&[]).unwrap(), c.one());
        assert_eq!(c.theta_exp(&parse_group_word("a1").unwrap()).unwrap(), c.x(1).exp());
        let comm = c.theta_exp(&parse_group_word("a1 b1 a1^-1 b1^-1").unwrap()).unwrap();
        assert_eq!(comm.truncate(2), c.one().add(&c.x(1).commutator(&c.y(1))).truncate(2));
        assert!(c.theta_exp(&parse_group_word("a2").unwrap()).is_err());
        assert!(parse_group_word("q1").is_err());
    }

    #[test]
    fn sdiv_of_ad_omega() {
        for g in 0..=2 {
            for n in 0..=2 {
                let c = KvContext::new(g, n, 6);
                let u = TangentialDerivation::ad(&c, &c.omega);
                let want = sum_z(&c).scale(&Scalar::int(2 * g as i64 + n as i64 - 1));
                assert_eq!(sdiv_xyz(&c, &u), want, "g={g} n={n}");
            }
        }
    }

    #[test]
    fn sdiv_single_value() {
        let c = KvContext::new(1, 0, 4);
        let u = TangentialDerivation::new(&c, vec![c.x(1).commutator(&c.y(1)), c.zero()], vec![]).unwrap();
        assert_eq!(sdiv_xyz(&c, &u), CyclicElement::project(&c.y(1).neg()));
        assert!(sdiv_xyz(&c, &TangentialDerivation::zero(&c)).is_zero());
    }

    #[test]
    fn validation() {
        let c = KvContext::new(1, 1, 4);
        assert!(matches!(TangentialDerivation::new(&c, vec![c.x(1), c.zero()], vec![c.zero()]), Err(KvError::LowWeight(..))));
        assert!(matches!(TangentialDerivation::new(&c, vec![c.x(1).mul(&c.y(1)), c.zero()], vec![c.zero()]), Err(KvError::NotLie(_))));
        assert!(matches!(TangentialDerivation::new(&c, vec![c.zero()], vec![]), Err(KvError::Arity(..))));
    }

    #[test]
    fn framing_parse() {
        let fr = FramingData::parse("a=1/2;b=-1;c=3,0", 1, 2).unwrap();
        assert_eq!(fr.a, vec![q(1) / q(2)]);
        assert_eq!(fr.c, vec![q(3), q(0)]);
        assert!(FramingData::parse("a=1,2", 1, 0).is_err());
        assert!(FramingData::parse("d=1", 1, 0).is_err());
        let c = KvContext::new(1, 0, 3);
        assert_eq!(fr.p_fr(&KvContext::new(1, 2, 3)).terms.len(), 2);
        assert!(FramingData::zero(1, 0).p_fr(&c).is_zero());
    }

    #[test]
    fn inner_automorphism_is_krv() {
        for lam in [q(1), q(-2), q(3) / q(5)] {
            for (g, n) in [(1, 1), (2, 0), (0, 2), (1, 2)] {
                let c = KvContext::new(g, n, 6);
                let w = c.omega.scale_q(&lam);
                let gg = TangentialAutomorphism::inner(&c, &w);
                let zs = c.membership(&c.zero(), &j_xyz(&c, &gg)).unwrap();
                assert!(zs.0, "j_xyz");
                let fr = FramingData { a: vec![q(1); g], b: vec![q(-1); g], c: vec![q(1); n] };
                assert!(c.membership(&c.zero(), &c_fr(&c, &fr, &gg)).unwrap().0, "c^fr");
                let r = check_krv(&c, &gg, &fr).unwrap();
                assert!(r.ok(), "{:?}", r);
            }
        }
    }

    #[test]
    fn identity_checks() {
        let c = KvContext::new(1, 1, 3);
        let id = TangentialAutomorphism::identity(&c);
        let fr = FramingData::parse("a=2;b=1/3;c=-1", 1, 1).unwrap();
        assert!(check_kv(&c, &id, &fr).unwrap().ok());
        let s = check_solkv(&c, &id, &fr).unwrap();
        assert!(!s.equation_ok());
        assert_eq!(s.equation_residue, c.xi.sub(&c.omega));
        assert!(!check_special(&Expansion::theta_exp(&c)));
        assert!(check_special(&Expansion::theta_exp(&KvContext::new(1, 1, 2))));
    }

    #[test]
    fn special_solution() {
        for (g, n) in [(1, 0), (0, 2), (1, 1)] {
            let c = KvContext::new(g, n, 5);
            let gg = solve_special(&c).unwrap();
            assert_eq!(gg.apply(&c.omega), c.xi);
            assert!(check_special(&compose_expansion(&c, &gg)));
        }
    }

    #[test]
    fn conjugators_realise_tangential_action() {
        let c = KvContext::new(1, 2, 6);
        let gg = solve_special(&c).unwrap();
        for (j, gj) in gg.conjugators(&c).iter().enumerate() {
            let want = gj.inverse().mul(&c.z(j + 1)).mul(gj);
            assert_eq!(gg.apply(&c.z(j + 1)), want);
        }
    }

    #[test]
    fn composition_matches_operators() {
        let c = KvContext::new(1, 1, 5);
        let u = TangentialDerivation::new(&c, vec![c.x(1).commutator(&c.y(1)), c.z(1).scale(&Scalar::int(2))], vec![c.y(1)]).unwrap();
        let v = TangentialDerivation::new(&c, vec![c.z(1), c.y(1).commutator(&c.x(1).commutator(&c.y(1)))], vec![c.x(1).commutator(&c.y(1))]).unwrap();
        let (a, b) = (TangentialAutomorphism::exp(u), TangentialAutomorphism::exp(v));
        let ab = a.compose(&b, c.deg);
        for l in c.alpha.letters() {
            let e = TensorElement::letter(&c.alpha, c.deg, l);
            assert_eq!(ab.apply(&e), a.apply(&b.apply(&e)));
        }
        assert_eq!(ab.compose(&b.inverse(), c.deg).apply(&c.xi), a.apply(&c.xi));
    }
}
