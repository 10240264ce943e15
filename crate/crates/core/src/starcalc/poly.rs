//! Sparse real polynomials in at most four phase-space variables.

use std::collections::BTreeMap;
use std::fmt;

/// Largest number of variables a polynomial can carry.
pub const MAX_VARS: usize = 4;

/// Per-variable exponents of a monomial. Unused slots stay zero.
pub type Exponents = [u8; MAX_VARS];

/// A polynomial stored as a map from exponents to nonzero coefficients.
#[derive(Clone, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<Exponents, f64>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

pub(crate) fn unit(var: usize) -> Exponents {
    let mut e = [0; MAX_VARS];
    e[var] = 1;
    e
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Poly::zero();
        p.add_term([0; MAX_VARS], c);
        p
    }

    /// The monomial z_var.
    pub fn var(var: usize) -> Self {
        assert!(var < MAX_VARS, "variable index {var} out of range");
        let mut p = Poly::zero();
        p.add_term(unit(var), 1.0);
        p
    }

    /// Σ coeffs[i]·z_i.
    pub fn linear(coeffs: &[f64]) -> Self {
        let mut p = Poly::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(unit(i), c);
        }
        p
    }

    /// zᵀ M z for a square matrix M.
    pub fn quadratic(m: &nalgebra::DMatrix<f64>) -> Self {
        let mut p = Poly::zero();
        let n = m.nrows();
        for i in 0..n {
            for j in 0..n {
                let mut e = [0; MAX_VARS];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, m[(i, j)]);
            }
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, f64)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Adds `c` to the coefficient of `e`, dropping it if it becomes zero.
    pub fn add_term(&mut self, e: Exponents, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(e).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &Exponents) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &f64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term if the polynomial has no other terms.
    pub fn as_constant(&self) -> Option<f64> {
        match self.terms.len() {
            0 => Some(0.0),
            1 => self.terms.get(&[0; MAX_VARS]).copied(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Highest power of each variable that appears.
    pub fn max_powers(&self) -> Exponents {
        let mut m = [0; MAX_VARS];
        for e in self.terms.keys() {
            for i in 0..MAX_VARS {
                m[i] = m[i].max(e[i]);
            }
        }
        m
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Poly {
        if s == 0.0 {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_scaled(other, 1.0);
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_scaled(other, -1.0);
        out
    }

    pub fn add_assign_scaled(&mut self, other: &Poly, s: f64) {
        for (e, c) in &other.terms {
            self.add_term(*e, c * s);
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for i in 0..MAX_VARS {
                    e[i] += eb[i];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(1.0);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// ∂/∂z_var.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let k = e[var];
            if k > 0 {
                let mut d = *e;
                d[var] -= 1;
                out.add_term(d, c * k as f64);
            }
        }
        out
    }

    /// Drops coefficients below `rel · max|coeff|`.
    pub fn prune(&mut self, rel: f64) {
        let cut = rel * self.max_abs_coeff();
        self.terms.retain(|_, c| c.abs() > cut);
    }

    /// Substitutes z_i → images[i] (a polynomial) for every variable.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let maxp = self.max_powers();
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            let mut row = vec![Poly::constant(1.0)];
            for k in 1..=maxp[i] as usize {
                let next = row[k - 1].mul(img);
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut term = Poly::constant(*c);
            for i in 0..images.len() {
                if e[i] > 0 {
                    term = term.mul(&powers[i][e[i] as usize]);
                }
            }
            out.add_assign_scaled(&term, 1.0);
        }
        out
    }

    /// Moves variable slots: output slot `map[i]` receives input slot `i`.
    /// Every input slot that carries a nonzero power must be mapped.
    pub fn relabel(&self, map: &[Option<usize>; MAX_VARS]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut ne = [0; MAX_VARS];
            for i in 0..MAX_VARS {
                if e[i] > 0 {
                    let j = map[i].expect("relabel dropped a live variable");
                    ne[j] += e[i];
                }
            }
            out.add_term(ne, *c);
        }
        out
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        let maxp = self.max_powers();
        let mut pw = [[1.0f64; 64]; MAX_VARS];
        for i in 0..z.len().min(MAX_VARS) {
            for k in 1..=(maxp[i] as usize).min(63) {
                pw[i][k] = pw[i][k - 1] * z[i];
            }
        }
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = *c;
                for i in 0..MAX_VARS {
                    if e[i] > 0 {
                        t *= pw[i][e[i] as usize];
                    }
                }
                t
            })
            .sum()
    }
}
