use kvlie::catalog::{make_tf, StrandSet};
use kvlie::exact::expr::lie_to_expr;
use kvlie::exact::word::{free_lie_dims, is_lyndon, lyndon_words, Word};
use kvlie::exact::{bch, parse, Alphabet, CyclicElement, LieElement, Scalar};
use kvlie::kv::{j_xyz, sdiv_xyz, KvContext, TangentialAutomorphism, TangentialDerivation};
use kvlie::presented::GradedBasis;
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

fn coeffs(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-3i64..=3, 1i64..=3), n)
}

/// Combination of the Lyndon words of the given weights, coefficients taken cyclically from `cs`.
fn lie_from(alpha: &Arc<Alphabet>, deg: u32, weights: std::ops::RangeInclusive<u32>, skip: bool, cs: &[(i64, i64)]) -> LieElement {
    let words: Vec<Word> = weights.flat_map(|k| lyndon_words(alpha, k, skip)).collect();
    let mut e = LieElement::zero(alpha, deg);
    for (w, (n, d)) in words.iter().zip(cs.iter().cycle()) {
        e.add_term(w.clone(), Scalar::frac(*n, *d));
    }
    e
}

fn two() -> Arc<Alphabet> {
    Alphabet::plain(&["x", "y"])
}

fn tf_basis() -> &'static GradedBasis {
    static B: OnceLock<GradedBasis> = OnceLock::new();
    B.get_or_init(|| GradedBasis::build(Arc::new(make_tf(&StrandSet::numbered(1, 2))), 4).unwrap())
}

fn kv_ctx() -> &'static KvContext {
    static C: OnceLock<KvContext> = OnceLock::new();
    C.get_or_init(|| KvContext::new(1, 1, 5))
}

/// A tangential derivation of positive degree on L(x, y, z).
fn derivation(cs: &[(i64, i64)], shift: usize) -> TangentialDerivation {
    let c = kv_ctx();
    let rot: Vec<(i64, i64)> = cs.iter().cycle().skip(shift).take(cs.len()).copied().collect();
    let xy = vec![lie_from(&c.alpha, c.deg, 2..=3, false, &rot).to_tensor(), lie_from(&c.alpha, c.deg, 2..=3, false, &rot[1..]).to_tensor()];
    let conj = vec![lie_from(&c.alpha, c.deg, 1..=2, false, &rot[2..]).to_tensor()];
    TangentialDerivation::new(c, xy, conj).unwrap()
}

/// Cyclic values of the divergence are reliable two weights below the truncation.
fn reliable(e: &CyclicElement) -> CyclicElement {
    e.with_deg(kv_ctx().deg - 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn log_exp_round_trip(cs in coeffs(14)) {
        let a = two();
        let e = lie_from(&a, 6, 1..=4, false, &cs);
        let g = e.exp();
        prop_assert!(g.is_group_like());
        let back = g.log();
        prop_assert!(back.is_primitive());
        prop_assert_eq!(back, e.to_tensor());
    }

    #[test]
    fn bch_is_associative(c1 in coeffs(5), c2 in coeffs(5), c3 in coeffs(5)) {
        let a = two();
        let (x, y, z) = (lie_from(&a, 5, 1..=3, false, &c1), lie_from(&a, 5, 1..=3, false, &c2), lie_from(&a, 5, 1..=3, false, &c3));
        let left = bch(&[bch(&[x.clone(), y.clone()]), z.clone()]);
        prop_assert_eq!(&left, &bch(&[x.clone(), bch(&[y.clone(), z.clone()])]));
        prop_assert_eq!(&left, &bch(&[x, y, z]));
    }

    #[test]
    fn bch_with_inverse_vanishes(cs in coeffs(8)) {
        let a = two();
        let x = lie_from(&a, 6, 1..=3, false, &cs);
        prop_assert!(bch(&[x.clone(), x.neg()]).is_zero());
    }

    #[test]
    fn expression_round_trip(cs in coeffs(20)) {
        let b = tf_basis();
        let e = lie_from(b.alpha(), 4, 1..=3, true, &cs);
        prop_assume!(!e.is_zero());
        let text = lie_to_expr(&e).unwrap().to_string();
        let back = parse(&text).unwrap().eval_lie(b.alpha(), 4).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn reduce_is_idempotent(cs in coeffs(40)) {
        let b = tf_basis();
        let e = lie_from(b.alpha(), 4, 1..=4, true, &cs);
        let r = b.reduce(&e);
        prop_assert_eq!(b.reduce(&r), r.clone());
        // e − reduce(e) lies in the ideal
        prop_assert!(b.reduce(&e.sub(&r)).is_zero());
    }

    #[test]
    fn sdiv_is_a_cocycle(cs in coeffs(30)) {
        let c = kv_ctx();
        let (u, v) = (derivation(&cs, 0), derivation(&cs, 7));
        let lhs = sdiv_xyz(c, &u.bracket(&v));
        let rhs = u.apply_cyclic(&sdiv_xyz(c, &v)).sub(&v.apply_cyclic(&sdiv_xyz(c, &u)));
        prop_assert_eq!(reliable(&lhs), reliable(&rhs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn integrated_cocycle_law(cs in coeffs(30)) {
        let c = kv_ctx();
        let f = TangentialAutomorphism::exp(derivation(&cs, 0));
        let g = TangentialAutomorphism::exp(derivation(&cs, 11));
        let fg = f.compose(&g, c.deg);
        let lhs = j_xyz(c, &fg);
        let rhs = j_xyz(c, &f).add(&f.apply_cyclic(&j_xyz(c, &g)));
        prop_assert_eq!(reliable(&lhs), reliable(&rhs));
    }
}

#[test]
fn lyndon_words_are_sorted_lyndon_and_counted() {
    for alpha in [Alphabet::kv(1, 2), Alphabet::gt(1, 1), StrandSet::numbered(1, 2).alphabet()] {
        let dims = free_lie_dims(&alpha, 6, true);
        for d in 1..=6 {
            let ws = lyndon_words(&alpha, d, true);
            assert!(ws.windows(2).all(|p| p[0] < p[1]));
            assert!(ws.iter().all(|w| is_lyndon(w) && alpha.word_weight(w) == d));
            assert_eq!(ws.len() as u64, dims[d as usize - 1]);
        }
    }
}
