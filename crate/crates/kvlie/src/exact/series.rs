//! One-variable power series with rational coefficients, truncated at a fixed order.

use super::scalar::{q, Q};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub name: String,
    /// c_0, c_1, …, c_D
    pub coeffs: Vec<Q>,
}

fn factorial(n: usize) -> Q {
    (1..=n).fold(q(1), |acc, k| acc * q(k as i64))
}

impl Series {
    pub fn new(name: &str, coeffs: Vec<Q>) -> Self {
        Series { name: name.into(), coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn exp(d: usize) -> Self {
        Series::new("exp", (0..=d).map(|k| factorial(k).recip()).collect())
    }

    /// log(1 + x)
    pub fn log1p(d: usize) -> Self {
        Series::new(
            "log1p",
            (0..=d).map(|k| if k == 0 { q(0) } else { Q::new(if k % 2 == 1 { 1.into() } else { (-1).into() }, (k as i64).into()) }).collect(),
        )
    }

    pub fn mul(&self, other: &Series) -> Series {
        let d = self.order().min(other.order());
        let mut c = vec![q(0); d + 1];
        for i in 0..=d {
            for j in 0..=d - i {
                c[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        Series::new("product", c)
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Series {
        let d = self.order();
        let a0 = self.coeffs[0].clone();
        assert!(!a0.is_zero(), "series inverse needs a nonzero constant term");
        let mut b = vec![q(0); d + 1];
        b[0] = a0.recip();
        for n in 1..=d {
            let mut s = q(0);
            for k in 1..=n {
                s += &self.coeffs[k] * &b[n - k];
            }
            b[n] = -s / &a0;
        }
        Series::new("recip", b)
    }

    /// f(g) for g without constant term.
    pub fn compose(&self, g: &Series) -> Series {
        assert!(g.coeffs[0].is_zero());
        let d = self.order().min(g.order());
        let mut out = vec![q(0); d + 1];
        let mut p = vec![q(0); d + 1];
        p[0] = q(1);
        for k in 0..=d {
            for i in 0..=d {
                out[i] += &self.coeffs[k] * &p[i];
            }
            let pg = Series::new("", p.clone()).mul(&Series::new("", g.coeffs[..=d].to_vec()));
            p = pg.coeffs;
        }
        Series::new("compose", out)
    }

    /// (e^w − 1)/w = Σ w^k/(k+1)!
    pub fn exp_difference_quotient(d: usize) -> Self {
        Series::new("expm1_over_w", (0..=d).map(|k| factorial(k + 1).recip()).collect())
    }

    /// s(ω) = e^ω/(1 − e^ω) + 1/ω, with the pole removed.
    pub fn s_series(d: usize) -> Self {
        // w/(e^w - 1) = Σ b_k w^k; s_0 = -1 - b_1, s_k = -b_{k+1}
        let b = Series::exp_difference_quotient(d + 1).recip();
        let mut c = Vec::with_capacity(d + 1);
        c.push(-q(1) - &b.coeffs[1]);
        for k in 1..=d {
            c.push(-b.coeffs[k + 1].clone());
        }
        Series::new("s", c)
    }

    /// r(s) = log((e^s − 1)/s).
    pub fn r_series(d: usize) -> Self {
        let mut g = Series::exp_difference_quotient(d);
        g.coeffs[0] = q(0);
        let mut r = Series::log1p(d).compose(&g);
        r.name = "r".into();
        r
    }

    /// Σ_k w^k/(k+1)!, the coefficients of (e^u − 1)/u used in cocycle integration.
    pub fn integration_kernel(d: usize) -> Self {
        Series::exp_difference_quotient(d)
    }

    pub fn by_name(name: &str, d: usize) -> Option<Self> {
        Some(match name {
            "s" => Series::s_series(d),
            "r" => Series::r_series(d),
            "exp" => Series::exp(d),
            "log1p" => Series::log1p(d),
            "bernoulli" => {
                let mut b = Series::exp_difference_quotient(d).recip();
                b.name = "bernoulli".into();
                b
            }
            _ => return None,
        })
    }

    pub fn is_identity_like(&self) -> bool {
        self.coeffs.len() > 1 && self.coeffs[0].is_zero() && self.coeffs[1].is_one()
    }
}
