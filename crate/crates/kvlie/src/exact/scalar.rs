//! Exact scalars: rationals, and polynomials over Q in named indeterminates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A monomial: variable names with positive exponents, sorted by name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub Vec<(Arc<str>, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(Arc::from(name), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn exponent(&self, v: &str) -> u32 {
        self.0.iter().find(|(n, _)| &**n == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(Arc<str>, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i].0 < other.0[j].0) {
                out.push(self.0[i].clone());
                i += 1;
            } else if i == self.0.len() || other.0[j].0 < self.0[i].0 {
                out.push(other.0[j].clone());
                j += 1;
            } else {
                out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    /// Removes `v` entirely, returning its exponent.
    pub fn split_off(&self, v: &str) -> (u32, Monomial) {
        let e = self.exponent(v);
        let rest = self.0.iter().filter(|(n, _)| &**n != v).cloned().collect();
        (e, Monomial(rest))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(n, e)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial over Q. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(pub BTreeMap<Monomial, Q>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn constant(c: Q) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Monomial::one(), c);
        }
        Poly(m)
    }

    pub fn var(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(Monomial::var(name), q(1));
        Poly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(q(0)),
            1 => self.0.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, x)| (m.clone(), x * c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn variables(&self) -> Vec<Arc<str>> {
        let mut v: Vec<Arc<str>> = self.0.keys().flat_map(|m| m.0.iter().map(|(n, _)| n.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Substitutes `v := value`.
    pub fn substitute(&self, v: &str, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let (e, rest) = m.split_off(v);
            let mut term = Poly(BTreeMap::from([(rest, c.clone())]));
            for _ in 0..e {
                term = term.mul(value);
            }
            for (mm, cc) in term.0 {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// Coefficient of `v^k` as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: &str, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let (e, rest) = m.split_off(v);
            if e == k {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    pub fn degree_in(&self, v: &str) -> u32 {
        self.0.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Leading monomial: highest total degree, ties broken by the reverse of the map order.
    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.0.iter().max_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| b.0.cmp(a.0)))
    }

    /// Scaled so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &Q)> = self.0.iter().filter(|(m, _)| !m.is_one()).collect();
        if let Some(c) = self.0.get(&Monomial::one()) {
            terms.push((self.0.keys().next().unwrap(), c));
        }
        let mut s = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&fmt_q(&a));
            } else if a.is_one() {
                s.push_str(&m.to_string());
            } else {
                s.push_str(&format!("{}*{}", fmt_q(&a), m));
            }
        }
        write!(f, "{s}")
    }
}

/// A coefficient: either a rational or a polynomial with at least one variable.
/// Constant polynomials are always folded into `Rat`, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Q),
    Poly(Poly),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(q(0))
    }

    pub fn one() -> Self {
        Scalar::Rat(q(1))
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rat(q(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::Rat(qf(n, d))
    }

    pub fn var(name: &str) -> Self {
        Scalar::Poly(Poly::var(name))
    }

    pub fn from_poly(p: Poly) -> Self {
        match p.as_constant() {
            Some(c) => Scalar::Rat(c),
            None => Scalar::Poly(p),
        }
    }

    pub fn to_poly(&self) -> Poly {
        match self {
            Scalar::Rat(r) => Poly::constant(r.clone()),
            Scalar::Poly(p) => p.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Poly(p) => p.is_zero(),
        }
    }

    pub fn as_rat(&self) -> Option<&Q> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Poly(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn mul_q(&self, c: &Q) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r * c),
            Scalar::Poly(p) => Scalar::from_poly(p.scale(c)),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) if !r.is_zero() => Some(Scalar::Rat(r.recip())),
            _ => None,
        }
    }

    pub fn variables(&self) -> Vec<Arc<str>> {
        match self {
            Scalar::Rat(_) => vec![],
            Scalar::Poly(p) => p.variables(),
        }
    }

    pub fn substitute(&self, v: &str, value: &Scalar) -> Scalar {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Poly(p) => Scalar::from_poly(p.substitute(v, &value.to_poly())),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", fmt_q(r)),
            Scalar::Poly(p) => write!(f, "{p}"),
        }
    }
}

impl From<Q> for Scalar {
    fn from(r: Q) -> Self {
        Scalar::Rat(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => {
                let mut p = self.to_poly();
                for (m, c) in rhs.to_poly().0 {
                    p.add_term(m, c);
                }
                Scalar::from_poly(p)
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), Scalar::Poly(p)) | (Scalar::Poly(p), Scalar::Rat(a)) => Scalar::from_poly(p.scale(a)),
            (Scalar::Poly(a), Scalar::Poly(b)) => Scalar::from_poly(a.mul(b)),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Poly(p) => Scalar::Poly(p.scale(&q(-1))),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => *a += b,
            _ => *self = &*self + rhs,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => *a -= b,
            _ => *self = &*self - rhs,
        }
    }
}
