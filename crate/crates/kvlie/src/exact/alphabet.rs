//! Weighted, labelled generator sets.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub type Letter = u8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    X,
    Y,
    T,
    Z,
    Center,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub role: Role,
    /// Strand labels (`[i]` for x/y, `[i, j]` for t, `[j]` for z).
    pub labels: Vec<String>,
    /// Handle index for x/y symbols.
    pub handle: Option<usize>,
    pub weight: u32,
    pub central: bool,
}

impl Symbol {
    pub fn x(strand: &str, a: usize) -> Self {
        Symbol { name: format!("x[{strand},{a}]"), role: Role::X, labels: vec![strand.into()], handle: Some(a), weight: 1, central: false }
    }

    pub fn y(strand: &str, a: usize) -> Self {
        Symbol { name: format!("y[{strand},{a}]"), role: Role::Y, labels: vec![strand.into()], handle: Some(a), weight: 1, central: false }
    }

    pub fn t(i: &str, j: &str) -> Self {
        Symbol { name: format!("t[{i},{j}]"), role: Role::T, labels: vec![i.into(), j.into()], handle: None, weight: 2, central: false }
    }

    pub fn z(j: &str) -> Self {
        Symbol { name: format!("z[{j}]"), role: Role::Z, labels: vec![j.into()], handle: None, weight: 2, central: false }
    }

    pub fn center() -> Self {
        Symbol { name: "c[]".into(), role: Role::Center, labels: vec![], handle: None, weight: 2, central: true }
    }

    pub fn plain(name: &str, weight: u32) -> Self {
        Symbol { name: name.into(), role: Role::Plain, labels: vec![], handle: None, weight, central: false }
    }

    pub fn central(mut self) -> Self {
        self.central = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
    index: HashMap<String, Letter>,
}

#[derive(Debug, thiserror::Error)]
pub enum AlphabetError {
    #[error("duplicate symbol {0}")]
    Duplicate(String),
    #[error("too many symbols ({0}); at most 255 are supported")]
    TooMany(usize),
    #[error("symbol {0} has weight 0")]
    ZeroWeight(String),
}

impl Alphabet {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, AlphabetError> {
        if symbols.len() > 255 {
            return Err(AlphabetError::TooMany(symbols.len()));
        }
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if s.weight == 0 {
                return Err(AlphabetError::ZeroWeight(s.name.clone()));
            }
            if index.insert(s.name.clone(), i as Letter).is_some() {
                return Err(AlphabetError::Duplicate(s.name.clone()));
            }
            if s.role == Role::T {
                let alt = format!("t[{},{}]", s.labels[1], s.labels[0]);
                if alt != s.name {
                    index.entry(alt).or_insert(i as Letter);
                }
            }
        }
        Ok(Alphabet { symbols, index })
    }

    /// Letters named `names`, all of weight 1.
    pub fn plain(names: &[&str]) -> Arc<Self> {
        Arc::new(Alphabet::new(names.iter().map(|n| Symbol::plain(n, 1)).collect()).expect("plain alphabet"))
    }

    /// Generators of t^f_{g,I}: x, y per strand and handle, then t_ij for i <= j (t_ii central).
    pub fn tf(g: usize, strands: &[String]) -> Arc<Self> {
        let mut s = Vec::new();
        for i in strands {
            for a in 1..=g {
                s.push(Symbol::x(i, a));
            }
            for a in 1..=g {
                s.push(Symbol::y(i, a));
            }
        }
        for (p, i) in strands.iter().enumerate() {
            for j in &strands[p..] {
                let sym = Symbol::t(i, j);
                s.push(if i == j { sym.central() } else { sym });
            }
        }
        Arc::new(Alphabet::new(s).expect("tf alphabet"))
    }

    /// Letters x^a, y^a (weight 1) and z_j (weight 2) of the free Lie algebra L(H).
    pub fn kv(g: usize, n: usize) -> Arc<Self> {
        let mut s = Vec::new();
        for a in 1..=g {
            s.push(Symbol::x("*", a));
        }
        for a in 1..=g {
            s.push(Symbol::y("*", a));
        }
        for j in 1..=n {
            s.push(Symbol::z(&j.to_string()));
        }
        Arc::new(Alphabet::new(s).expect("kv alphabet"))
    }

    /// H = {x_*^a, y_*^a, t_{j*}} together with the central t_** (printed `c[]`).
    pub fn gt(g: usize, n: usize) -> Arc<Self> {
        let mut s = Vec::new();
        for a in 1..=g {
            s.push(Symbol::x("*", a));
        }
        for a in 1..=g {
            s.push(Symbol::y("*", a));
        }
        for j in 1..=n {
            s.push(Symbol::t(&j.to_string(), "*"));
        }
        s.push(Symbol::center());
        Arc::new(Alphabet::new(s).expect("gt alphabet"))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, l: Letter) -> &Symbol {
        &self.symbols[l as usize]
    }

    pub fn weight(&self, l: Letter) -> u32 {
        self.symbols[l as usize].weight
    }

    pub fn is_central(&self, l: Letter) -> bool {
        self.symbols[l as usize].central
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.symbols[l as usize].name
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.index.get(name).copied()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.symbols.len() as Letter
    }

    pub fn word_weight(&self, w: &[Letter]) -> u32 {
        w.iter().map(|&l| self.weight(l)).sum()
    }

    pub fn find(&self, role: Role, labels: &[&str], handle: Option<usize>) -> Option<Letter> {
        self.symbols
            .iter()
            .position(|s| {
                s.role == role
                    && s.handle == handle
                    && (s.labels.iter().map(|x| x.as_str()).eq(labels.iter().copied())
                        || (role == Role::T && labels.len() == 2 && s.labels[0] == labels[1] && s.labels[1] == labels[0]))
            })
            .map(|p| p as Letter)
    }

    pub fn max_weight(&self) -> u32 {
        self.symbols.iter().map(|s| s.weight).max().unwrap_or(1)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.symbols.iter().map(|s| s.name.as_str()).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tf_alphabet_layout() {
        let a = Alphabet::tf(1, &["1".into(), "2".into()]);
        assert_eq!(a.len(), 4 + 3);
        assert_eq!(a.letter("t[2,1]"), a.letter("t[1,2]"));
        assert!(a.is_central(a.letter("t[1,1]").unwrap()));
        assert!(!a.is_central(a.letter("t[1,2]").unwrap()));
        assert_eq!(a.weight(a.letter("x[2,1]").unwrap()), 1);
        assert_eq!(a.find(Role::T, &["2", "1"], None), a.letter("t[1,2]"));
    }

    #[test]
    fn duplicates_rejected() {
        assert!(Alphabet::new(vec![Symbol::plain("a", 1), Symbol::plain("a", 1)]).is_err());
    }
}
