//! Words, Lyndon words and necklaces.

use super::alphabet::{Alphabet, Letter};
use smallvec::SmallVec;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

pub type Word = SmallVec<[Letter; 16]>;

pub fn word(letters: &[Letter]) -> Word {
    Word::from_slice(letters)
}

pub fn concat(a: &[Letter], b: &[Letter]) -> Word {
    let mut w = Word::with_capacity(a.len() + b.len());
    w.extend_from_slice(a);
    w.extend_from_slice(b);
    w
}

/// Duval: `w` is Lyndon iff it is strictly smaller than all its proper rotations.
pub fn is_lyndon(w: &[Letter]) -> bool {
    if w.is_empty() {
        return false;
    }
    let n = w.len();
    let (mut i, mut j) = (0usize, 1usize);
    while j < n {
        if w[i] == w[j] {
            i += 1;
        } else if w[i] < w[j] {
            i = 0;
        } else {
            return false;
        }
        j += 1;
    }
    i == 0
}

/// Standard factorization w = uv with v the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[Letter]) -> (&[Letter], &[Letter]) {
    debug_assert!(w.len() >= 2);
    for k in 1..w.len() {
        if is_lyndon(&w[k..]) {
            return (&w[..k], &w[k..]);
        }
    }
    unreachable!("a word of length >= 2 always has a Lyndon suffix")
}

/// Calls `visit` on every Lyndon word of exact weight `d`, in lexicographic order. If
/// `skip_central`, words of length >= 2 that contain a central letter are omitted.
pub fn lyndon_visit(alpha: &Alphabet, d: u32, skip_central: bool, visit: &mut dyn FnMut(&[Letter])) {
    fn rec(alpha: &Alphabet, d: u32, skip: bool, cur: &mut Word, wt: u32, p: usize, visit: &mut dyn FnMut(&[Letter])) {
        if wt == d {
            if p == cur.len() {
                visit(cur);
            }
            return;
        }
        let n = cur.len();
        let lo = if n == 0 { 0 } else { cur[n - p] };
        for c in lo..alpha.len() as Letter {
            let w = alpha.weight(c);
            if wt + w > d {
                continue;
            }
            if skip && (alpha.is_central(c) || (n > 0 && alpha.is_central(cur[0]))) && (n > 0 || wt + w < d) {
                continue;
            }
            let np = if n == 0 || c == cur[n - p] { if n == 0 { 1 } else { p } } else { n + 1 };
            cur.push(c);
            rec(alpha, d, skip, cur, wt + w, np, visit);
            cur.pop();
        }
    }
    rec(alpha, d, skip_central, &mut Word::new(), 0, 0, visit);
}

/// Lyndon words of exact weight `d` (see [`lyndon_visit`]), lexicographically sorted.
pub fn lyndon_words(alpha: &Alphabet, d: u32, skip_central: bool) -> Vec<Word> {
    let mut out = Vec::new();
    lyndon_visit(alpha, d, skip_central, &mut |w| out.push(word(w)));
    out
}

/// Dimensions of the weight 1..=d pieces of the free Lie algebra on `alpha`
/// (modulo brackets with central letters when `skip_central`).
pub fn free_lie_dims(alpha: &Alphabet, d: u32, skip_central: bool) -> Vec<u64> {
    (1..=d)
        .map(|k| {
            let mut n = 0u64;
            lyndon_visit(alpha, k, skip_central, &mut |_| n += 1);
            n
        })
        .collect()
}

/// All words of exact weight `d` (including the empty word when `d == 0`).
pub fn words_of_weight(alpha: &Alphabet, d: u32) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Word::new();
    fn rec(alpha: &Alphabet, d: u32, cur: &mut Word, wt: u32, out: &mut Vec<Word>) {
        if wt == d {
            out.push(cur.clone());
            return;
        }
        for c in alpha.letters() {
            let w = alpha.weight(c);
            if wt + w <= d {
                cur.push(c);
                rec(alpha, d, cur, wt + w, out);
                cur.pop();
            }
        }
    }
    rec(alpha, d, &mut cur, 0, &mut out);
    out
}

/// Minimal rotation (Booth), the canonical representative of a necklace.
pub fn min_rotation(w: &[Letter]) -> Word {
    let n = w.len();
    if n <= 1 {
        return word(w);
    }
    let mut best = 0;
    for k in 1..n {
        for i in 0..n {
            let a = w[(k + i) % n];
            let b = w[(best + i) % n];
            if a != b {
                if a < b {
                    best = k;
                }
                break;
            }
        }
    }
    let mut out = Word::with_capacity(n);
    out.extend_from_slice(&w[best..]);
    out.extend_from_slice(&w[..best]);
    out
}

type Expansion = Arc<Vec<(Word, i64)>>;

fn cache() -> &'static RwLock<HashMap<Word, Expansion>> {
    static C: OnceLock<RwLock<HashMap<Word, Expansion>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Tensor expansion of the standard bracketing P(w) of a Lyndon word.
/// The result is sorted by word; its minimal word is `w` with coefficient 1.
pub fn lyndon_expansion(w: &[Letter]) -> Expansion {
    if let Some(e) = cache().read().unwrap().get(w) {
        return e.clone();
    }
    let e: Expansion = if w.len() == 1 {
        Arc::new(vec![(word(w), 1)])
    } else {
        let (u, v) = standard_factorization(w);
        let pu = lyndon_expansion(u);
        let pv = lyndon_expansion(v);
        let mut m: std::collections::BTreeMap<Word, i64> = std::collections::BTreeMap::new();
        for (a, ca) in pu.iter() {
            for (b, cb) in pv.iter() {
                *m.entry(concat(a, b)).or_insert(0) += ca * cb;
                *m.entry(concat(b, a)).or_insert(0) -= ca * cb;
            }
        }
        Arc::new(m.into_iter().filter(|(_, c)| *c != 0).collect())
    };
    cache().write().unwrap().insert(word(w), e.clone());
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_recognition() {
        assert!(is_lyndon(&[0, 0, 1]));
        assert!(is_lyndon(&[0, 1, 1]));
        assert!(!is_lyndon(&[0, 1, 0]));
        assert!(!is_lyndon(&[0, 0]));
        assert!(is_lyndon(&[0, 0, 1, 0, 1]));
    }

    #[test]
    fn standard_factorization_examples() {
        assert_eq!(standard_factorization(&[0, 0, 1]), (&[0u8][..], &[0u8, 1][..]));
        assert_eq!(standard_factorization(&[0, 1, 1]), (&[0u8, 1][..], &[1u8][..]));
        assert_eq!(standard_factorization(&[0, 0, 1, 0, 1]), (&[0u8, 0, 1][..], &[0u8, 1][..]));
    }

    #[test]
    fn enumeration_matches_filter() {
        let a = Alphabet::plain(&["a", "b", "c"]);
        for d in 1..=5 {
            let mut brute: Vec<Word> = words_of_weight(&a, d).into_iter().filter(|w| is_lyndon(w)).collect();
            brute.sort();
            assert_eq!(lyndon_words(&a, d, false), brute, "d = {d}");
        }
    }

    #[test]
    fn expansion_is_triangular() {
        for w in [&[0u8, 1][..], &[0, 0, 1], &[0, 1, 1], &[0, 0, 1, 0, 1]] {
            let e = lyndon_expansion(w);
            assert_eq!(e[0], (word(w), 1));
            assert!(e.iter().skip(1).all(|(v, _)| v.as_slice() > w));
        }
    }

    #[test]
    fn necklace_rep() {
        assert_eq!(min_rotation(&[1, 0, 2, 0]).as_slice(), &[0, 1, 0, 2]);
        assert_eq!(min_rotation(&[2, 1, 1]).as_slice(), &[1, 1, 2]);
    }
}
