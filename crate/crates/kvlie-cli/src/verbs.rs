use crate::render::{cyclic, cyclic_pair, lie, tensor};
use crate::{Algebra, CliError, GenArg, KindArg, MuArg, MutationArg, Outcome, PairingArg, Surface};
use kvlie::catalog::split::verify_split as split_check;
use kvlie::catalog::uf::{verify_action as action_check, Mutation};
use kvlie::catalog::{insertion, make_tf, StrandSet};
use kvlie::exact::expr::Expr;
use kvlie::exact::{parse, Alphabet, LieElement, Series, Symbol, TensorElement};
use kvlie::framing::{expand_reduced_dg, framing_value, solve_genus1, Generator};
use kvlie::gt::{self, FoxPairing, GtContext, PhiConstant};
use kvlie::kv::{self, FramingData, KvContext, KvKind, TangentialAutomorphism, TangentialDerivation};
use kvlie::presented::{GradedBasis, LieAlgebra, LieMorphism, Presentation};
use serde_json::{json, Value};
use std::sync::Arc;

fn algebra_err(e: impl ToString) -> CliError {
    CliError::new("algebra", e)
}

fn parse_expr(s: &str) -> Result<Expr, CliError> {
    parse(s).map_err(|e| CliError::new("parse", e))
}

fn eval_tensor(s: &str, alpha: &Arc<Alphabet>, deg: u32) -> Result<TensorElement, CliError> {
    parse_expr(s)?.eval(alpha, deg).map_err(|e| CliError::new("eval", e))
}

fn eval_lie(s: &str, alpha: &Arc<Alphabet>, deg: u32) -> Result<LieElement, CliError> {
    parse_expr(s)?.eval_lie(alpha, deg).map_err(|e| CliError::new("eval", e))
}

fn strand_set(alg: &Algebra) -> Result<StrandSet, CliError> {
    let s = match (&alg.labels, alg.strands) {
        (Some(l), _) => {
            let labels: Vec<&str> = l.split(',').map(|x| x.trim()).filter(|x| !x.is_empty()).collect();
            StrandSet::new(alg.genus, &labels).map_err(|e| CliError::new("usage", e))?
        }
        (None, Some(n)) => StrandSet::numbered(alg.genus, n),
        (None, None) => return Err(CliError::new("usage", "give --strands, --labels or --presentation")),
    };
    Ok(if alg.framed { s } else { s.unframed() })
}

fn presentation(alg: &Algebra, deg: u32) -> Result<Presentation, CliError> {
    match &alg.presentation {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{path}: {e}")))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| CliError::new("parse", format!("{path}: {e}")))?;
            crate::presentation::from_json(&v, deg)
        }
        None => Ok(make_tf(&strand_set(alg)?)),
    }
}

fn basis(p: Presentation, deg: u32) -> Result<GradedBasis, CliError> {
    GradedBasis::build(Arc::new(p), deg).map_err(algebra_err)
}

pub fn dims(alg: &Algebra, deg: u32, export: bool) -> Result<Outcome, CliError> {
    let p = presentation(alg, deg)?;
    let exported = export.then(|| crate::presentation::to_json(&p));
    let name = p.name.clone();
    let b = basis(p, deg)?;
    let mut result = json!({"algebra": name, "max_degree": deg, "dims": b.dims()});
    if let Some(e) = exported {
        result["presentation"] = e;
    }
    Ok(Outcome { result, failures: vec![] })
}

pub fn nf(expr: &str, alg: &Algebra, deg: u32) -> Result<Outcome, CliError> {
    let b = basis(presentation(alg, deg)?, deg)?;
    let e = eval_lie(expr, b.alpha(), deg)?;
    let r = b.reduce(&e);
    Ok(Outcome { result: json!({"input": expr, "is_zero": r.is_zero(), "normal_form": lie(&r)}), failures: vec![] })
}

fn weight_of(name: &str) -> u32 {
    match name.chars().next() {
        Some('t' | 'z' | 'c') => 2,
        _ => 1,
    }
}

pub fn bch(exprs: &[String], deg: u32) -> Result<Outcome, CliError> {
    let parsed: Vec<Expr> = exprs.iter().map(|s| parse_expr(s)).collect::<Result<_, _>>()?;
    let all = Expr::Bch(parsed);
    let syms: Vec<Symbol> = all
        .generators()
        .iter()
        .map(|g| {
            let s = Symbol::plain(g, weight_of(g));
            if g == "c[]" {
                s.central()
            } else {
                s
            }
        })
        .collect();
    if syms.is_empty() {
        let zero = LieElement::zero(&Alphabet::plain(&[]), deg);
        return Ok(Outcome { result: json!({"bch": lie(&zero)}), failures: vec![] });
    }
    let alpha = Arc::new(Alphabet::new(syms).map_err(algebra_err)?);
    let e = all.eval_lie(&alpha, deg).map_err(|e| CliError::new("eval", e))?;
    Ok(Outcome { result: json!({"alphabet": alpha.to_string(), "bch": lie(&e)}), failures: vec![] })
}

pub fn insert(alg: &Algebra, at: &str, into: &str, deg: u32) -> Result<Outcome, CliError> {
    let src = strand_set(alg)?;
    let labels: Vec<&str> = into.split(',').map(|x| x.trim()).filter(|x| !x.is_empty()).collect();
    let (target, images) = insertion(&src, at, &labels).map_err(|e| CliError::new("usage", e))?;
    let tb = basis(make_tf(&target), deg)?;
    let images: Vec<LieElement> = images.iter().map(|e| e.with_deg(deg)).collect();
    let m = LieMorphism::new(&tb, images.clone());
    let sa = src.alphabet();
    let mut imgs = serde_json::Map::new();
    for l in sa.letters() {
        imgs.insert(sa.name(l).to_string(), lie(&images[l as usize]));
    }
    let mut failures = Vec::new();
    for (label, r) in make_tf(&src).all_relators_labelled(deg) {
        let img = m.apply(&r);
        if !img.is_zero() {
            failures.push(json!({"relator": label, "witness": null, "residue": img.to_string()}));
        }
    }
    Ok(Outcome { result: json!({"source": src.describe(), "target": target.describe(), "images": imgs}), failures })
}

pub fn verify_action(s: &Surface, m: MutationArg) -> Result<Outcome, CliError> {
    let mutation = match m {
        MutationArg::None => Mutation::None,
        MutationArg::Omega => Mutation::OmegaOnly,
        MutationArg::Last => Mutation::LastRelation,
    };
    let r = action_check(s.genus, s.punctures, s.max_degree, mutation);
    let failures = r.failures.iter().map(|f| json!({"relator": f.relator, "witness": f.generator, "residue": f.residue})).collect();
    let result = json!({
        "genus": r.g,
        "punctures": r.n,
        "max_degree": r.deg,
        "mutation": format!("{:?}", r.mutation),
        "relators_checked": r.relators_checked,
        "pairs_checked": r.pairs_checked,
        "failing_relators": r.failing_relators(),
    });
    Ok(Outcome { result, failures })
}

pub fn verify_split(s: &Surface) -> Result<Outcome, CliError> {
    let r = split_check(s.genus, s.punctures, s.max_degree);
    let mut failures = Vec::new();
    let lists = [
        ("F kills relators", &r.f_relator_failures),
        ("G kills relators", &r.g_relator_failures),
        ("F∘G = id", &r.fg_failures),
        ("G∘F = id", &r.gf_failures),
    ];
    for (check, xs) in lists {
        for x in xs.iter() {
            failures.push(json!({"check": check, "relator": x}));
        }
    }
    if !r.dims_match() {
        failures.push(json!({"check": "dimensions", "direct": r.direct_dims, "tower": r.tower_dims}));
    }
    if !r.omega_ok {
        failures.push(json!({"check": "F(ω_*) = −t_{*0}"}));
    }
    let result = json!({"genus": r.g, "punctures": r.n, "max_degree": r.deg, "direct_dims": r.direct_dims, "tower_dims": r.tower_dims, "omega_ok": r.omega_ok});
    Ok(Outcome { result, failures })
}

fn pairing(ctx: &GtContext, p: PairingArg) -> FoxPairing {
    match p {
        PairingArg::Diamond => FoxPairing::diamond(ctx),
        PairingArg::Rho => FoxPairing::rho(ctx, &ctx.s_omega()),
        PairingArg::E => FoxPairing::e_pairing(ctx),
    }
}

pub fn goldman(a: &str, b: &str, s: &Surface, p: PairingArg) -> Result<Outcome, CliError> {
    let ctx = GtContext::new(s.genus, s.punctures, s.max_degree);
    let x = eval_tensor(a, &ctx.alpha, ctx.deg)?;
    let y = eval_tensor(b, &ctx.alpha, ctx.deg)?;
    let r = gt::goldman_grouplike(&pairing(&ctx, p), &x, &y).map_err(algebra_err)?;
    Ok(Outcome { result: json!({"reliable_through": ctx.deg.saturating_sub(2), "bracket": cyclic(&r)}), failures: vec![] })
}

pub fn turaev(a: &str, s: &Surface, mu: MuArg) -> Result<Outcome, CliError> {
    let ctx = GtContext::new(s.genus, s.punctures, s.max_degree);
    let x = eval_tensor(a, &ctx.alpha, ctx.deg)?;
    let phi = PhiConstant::phi0(&ctx);
    let f = |e: &TensorElement| match mu {
        MuArg::N => gt::n_eval(&ctx, &phi, e),
        MuArg::Xi => gt::xi_qd(&ctx, e),
    };
    let r = gt::turaev_grouplike(&f, &ctx, &x).map_err(algebra_err)?;
    Ok(Outcome { result: json!({"reliable_through": ctx.deg.saturating_sub(2), "cobracket": cyclic_pair(&r)}), failures: vec![] })
}

pub fn fox_eval(a: &str, b: &str, s: &Surface, p: PairingArg) -> Result<Outcome, CliError> {
    let ctx = GtContext::new(s.genus, s.punctures, s.max_degree);
    let x = eval_tensor(a, &ctx.alpha, ctx.deg)?;
    let y = eval_tensor(b, &ctx.alpha, ctx.deg)?;
    let r = pairing(&ctx, p).eval(&x, &y);
    Ok(Outcome { result: json!({"value": tensor(&r)}), failures: vec![] })
}

fn uint(v: &Value, key: &str) -> Result<usize, CliError> {
    v.get(key).and_then(|x| x.as_u64()).map(|x| x as usize).ok_or_else(|| CliError::new("input", format!("missing non-negative integer {key}")))
}

/// Index into the x/y value list for keys "x1", "x[*,1]", "y2", ….
fn xy_slot(key: &str, g: usize) -> Option<usize> {
    let (role, rest) = key.split_at(1);
    let idx = rest.strip_prefix("[*,").and_then(|r| r.strip_suffix(']')).unwrap_or(rest);
    let a: usize = idx.parse().ok()?;
    if a == 0 || a > g {
        return None;
    }
    match role {
        "x" => Some(a - 1),
        "y" => Some(g + a - 1),
        _ => None,
    }
}

pub fn kv_check(path: &str, framing: Option<&str>, kind: KindArg) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{path}: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::new("parse", format!("{path}: {e}")))?;
    let (g, n, d) = (uint(&v, "g")?, uint(&v, "n")?, uint(&v, "D")? as u32);
    let limit = crate::degree_limit();
    if d == 0 || d > limit {
        return Err(CliError::new("limit", format!("D = {d} must lie in 1..={limit}")));
    }
    let ctx = KvContext::new(g, n, d);
    let mut xy = vec![ctx.zero(); 2 * g];
    if let Some(u) = v.get("u") {
        let u = u.as_object().ok_or_else(|| CliError::new("input", "u must be an object"))?;
        for (k, e) in u {
            let slot = xy_slot(k, g).ok_or_else(|| CliError::new("input", format!("unknown key {k} in u")))?;
            let s = e.as_str().ok_or_else(|| CliError::new("input", format!("u.{k} must be an expression string")))?;
            xy[slot] = eval_tensor(s, &ctx.alpha, d)?;
        }
    }
    let conj = match v.get("conjugators") {
        None => vec![ctx.zero(); n],
        Some(c) => {
            let c = c.as_array().ok_or_else(|| CliError::new("input", "conjugators must be a list"))?;
            c.iter()
                .map(|e| e.as_str().ok_or_else(|| CliError::new("input", "conjugators are expression strings")).and_then(|s| eval_tensor(s, &ctx.alpha, d)))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let u = TangentialDerivation::new(&ctx, xy, conj).map_err(|e| CliError::new("input", e))?;
    let auto = TangentialAutomorphism::exp(u);
    let fr = match framing {
        Some(s) => FramingData::parse(s, g, n).map_err(|e| CliError::new("input", e))?,
        None => FramingData::zero(g, n),
    };
    let kind = match kind {
        KindArg::Kv => KvKind::Kv,
        KindArg::Krv => KvKind::Krv,
        KindArg::Solkv => KvKind::SolKv,
    };
    let rep = kv::check(kind, &ctx, &auto, &fr).map_err(algebra_err)?;
    let residue: Vec<Value> = rep.residue_by_weight().iter().map(|(w, e)| json!({"weight": w, "terms": tensor(e)})).collect();
    let mut failures = Vec::new();
    if !rep.equation_ok() {
        failures.push(json!({"check": "equation", "residue": residue}));
    }
    if !rep.member {
        failures.push(json!({"check": "divergence", "residual": cyclic(&rep.membership_residual)}));
    }
    let result = json!({
        "kind": rep.kind.to_string(),
        "g": g,
        "n": n,
        "D": d,
        "equation_ok": rep.equation_ok(),
        "member": rep.member,
        "equation_residue": residue,
        "cocycle": cyclic(&rep.cocycle),
        "membership_residual": cyclic(&rep.membership_residual),
    });
    Ok(Outcome { result, failures })
}

fn gen_name(g: Generator) -> &'static str {
    match g {
        Generator::A => "A",
        Generator::B => "B",
    }
}

pub fn framing_eqs(genus: usize, handle: Option<usize>, which: GenArg) -> Result<Outcome, CliError> {
    let handles: Vec<usize> = match handle {
        Some(a) => vec![a],
        None => (1..=genus).collect(),
    };
    let gens: Vec<Generator> = match which {
        GenArg::A => vec![Generator::A],
        GenArg::B => vec![Generator::B],
        GenArg::Both => vec![Generator::A, Generator::B],
    };
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for &gen in &gens {
        for &a in &handles {
            let sys = expand_reduced_dg(genus, a, gen).map_err(|e| CliError::new("usage", e))?;
            let (direct, elim) = framing_value(&sys);
            let eqs: Vec<Value> = sys.equations.iter().map(|e| json!({"monomial": e.monomial, "poly": e.poly.to_string()})).collect();
            let extra: Vec<Value> = sys.extra.iter().map(|(w, c)| json!({"bracket": w, "coeff": c.to_string()})).collect();
            if !extra.is_empty() {
                failures.push(json!({"check": "no further equations", "handle": a, "generator": gen_name(gen), "extra": extra}));
            }
            if sys.mentions_pi() {
                failures.push(json!({"check": "cubic coefficients cancel", "handle": a, "generator": gen_name(gen)}));
            }
            entries.push(json!({
                "handle": a,
                "generator": gen_name(gen),
                "equations": eqs,
                "framing": elim.to_string(),
                "framing_direct": direct.to_string(),
                "extra": extra,
            }));
        }
    }
    let mut result = json!({"genus": genus, "systems": entries});
    if genus == 1 {
        let mut sols = Vec::new();
        for &gen in &gens {
            let r = solve_genus1(gen).map_err(|e| CliError::new("usage", e))?;
            if !r.ok() {
                failures.push(json!({"check": "genus 1 solution", "generator": gen_name(gen)}));
            }
            let steps: Vec<Value> = r.steps.iter().map(|s| json!({"claim": s.claim, "holds": s.holds})).collect();
            sols.push(json!({
                "generator": gen_name(gen),
                "steps": steps,
                "nu": r.nu.map(|x| x.to_string()),
                "s": r.s.map(|x| x.to_string()),
                "framing": r.framing.map(|x| x.to_string()),
                "residues": r.residues.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "degenerate_without_nondegeneracy": r.degenerate_without_nondegeneracy,
            }));
        }
        result["genus1_solution"] = Value::Array(sols);
    }
    Ok(Outcome { result, failures })
}

pub fn series(name: &str, order: usize) -> Result<Outcome, CliError> {
    let s = Series::by_name(name, order).ok_or_else(|| CliError::new("usage", format!("unknown series {name}; try s, r, exp, log1p, bernoulli")))?;
    let coeffs: Vec<String> = s.coeffs.iter().map(kvlie::exact::scalar::fmt_q).collect();
    Ok(Outcome { result: json!({"name": s.name, "order": order, "coeffs": coeffs}), failures: vec![] })
}
