//! Sparse semi-echelon elimination over exact scalars.
//!
//! Rows are normalized so that the pivot (smallest column) has coefficient 1. Pivots must be
//! rational; right-hand sides may carry polynomial coefficients.

use crate::exact::Scalar;
use std::collections::BTreeMap;

pub type SparseVec = BTreeMap<u32, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("pivot coefficient {0} is not an invertible rational")]
    NonRationalPivot(String),
}

fn axpy(v: &mut SparseVec, row: &[(u32, Scalar)], c: &Scalar) {
    for (col, x) in row {
        let d = x * c;
        if d.is_zero() {
            continue;
        }
        match v.entry(*col) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(d);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &d;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    entries: Vec<(u32, Scalar)>,
    /// v = Σ combo[i] * seed_i for the seeds that produced this row.
    combo: SparseVec,
}

#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivot_row: Vec<u32>,
    track: bool,
    seeds: u32,
}

const NONE: u32 = u32::MAX;

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    /// Records how each row is built from inserted vectors, for `solve`.
    pub fn tracking() -> Self {
        Echelon { track: true, ..Default::default() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row.get(col as usize).is_some_and(|&r| r != NONE)
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r.entries[0].0)
    }

    pub fn row(&self, i: usize) -> &[(u32, Scalar)] {
        &self.rows[i].entries
    }

    fn reduce_inner(&self, v: &mut SparseVec, mut combo: Option<&mut SparseVec>) {
        let mut cursor = 0u32;
        loop {
            let next = v.range(cursor..).find(|(c, _)| self.is_pivot(**c)).map(|(c, x)| (*c, x.clone()));
            let Some((c, x)) = next else { break };
            let row = &self.rows[self.pivot_row[c as usize] as usize];
            let neg = -&x;
            axpy(v, &row.entries, &neg);
            if let Some(cm) = combo.as_deref_mut() {
                let e: Vec<(u32, Scalar)> = row.combo.iter().map(|(k, s)| (*k, s.clone())).collect();
                axpy(cm, &e, &x);
            }
            cursor = c + 1;
        }
    }

    /// Eliminates every pivot column from `v`; the remainder is unique.
    pub fn reduce(&self, v: &mut SparseVec) {
        self.reduce_inner(v, None);
    }

    /// Reduces and inserts; returns whether the rank grew.
    pub fn insert(&mut self, mut v: SparseVec) -> Result<bool, LinalgError> {
        let seed = self.seeds;
        self.seeds += 1;
        let mut combo = SparseVec::new();
        if self.track {
            combo.insert(seed, Scalar::one());
            let mut acc = SparseVec::new();
            self.reduce_inner(&mut v, Some(&mut acc));
            axpy(&mut combo, &acc.into_iter().collect::<Vec<_>>(), &Scalar::int(-1));
        } else {
            self.reduce(&mut v);
        }
        let Some((&p, c)) = v.iter().next() else { return Ok(false) };
        let inv = c.inv().ok_or_else(|| LinalgError::NonRationalPivot(c.to_string()))?;
        let entries: Vec<(u32, Scalar)> = v.iter().map(|(k, x)| (*k, x * &inv)).collect();
        let combo = if self.track { combo.into_iter().map(|(k, x)| (k, &x * &inv)).collect() } else { SparseVec::new() };
        if self.pivot_row.len() <= p as usize {
            self.pivot_row.resize(p as usize + 1, NONE);
        }
        self.pivot_row[p as usize] = self.rows.len() as u32;
        self.rows.push(Row { entries, combo });
        Ok(true)
    }

    /// Writes `v = Σ coeff_i seed_i + residual` (seeds indexed by insertion order).
    /// Only meaningful for a tracking echelon.
    pub fn solve(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        assert!(self.track, "solve needs a tracking echelon");
        let mut r = v.clone();
        let mut combo = SparseVec::new();
        self.reduce_inner(&mut r, Some(&mut combo));
        (combo, r)
    }
}

/// Whether `target` lies in the span of `seeds`; returns the verdict and the reduced remainder.
/// Vectors are keyed by arbitrary ordered labels, mapped to columns on first sight.
pub fn subspace_membership<K: Ord + Clone>(seeds: &[BTreeMap<K, Scalar>], target: &BTreeMap<K, Scalar>) -> Result<(bool, BTreeMap<K, Scalar>), LinalgError> {
    let mut cols: BTreeMap<K, u32> = BTreeMap::new();
    for k in seeds.iter().flat_map(|s| s.keys()).chain(target.keys()) {
        let n = cols.len() as u32;
        cols.entry(k.clone()).or_insert(n);
    }
    let to_vec = |m: &BTreeMap<K, Scalar>| -> SparseVec { m.iter().map(|(k, x)| (cols[k], x.clone())).collect() };
    let mut ech = Echelon::new();
    for s in seeds {
        ech.insert(to_vec(s))?;
    }
    let mut v = to_vec(target);
    ech.reduce(&mut v);
    let back: BTreeMap<u32, &K> = cols.iter().map(|(k, c)| (*c, k)).collect();
    let rest: BTreeMap<K, Scalar> = v.into_iter().map(|(c, x)| (back[&c].clone(), x)).collect();
    Ok((rest.is_empty(), rest))
}
