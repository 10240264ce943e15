//! Deformed Moyal star-product calculus on the Gaussian × polynomial class.
//!
//! Two kinds of products are supported, which is all the oscillator problem
//! needs:
//!
//! * a polynomial left (or right) factor against any [`GaussPoly`]; the
//!   bidifferential series terminates at the polynomial's degree;
//! * pure Gaussians whose exponents are combinations of mutually
//!   star-commuting two-square forms (a [`ModeBasis`]); these compose
//!   through the star-exponential group law one mode at a time.

mod exponential;
pub mod gauss;
pub mod poly;
mod product;

use nalgebra::{DMatrix, DVector};

pub use exponential::{gaussian_star, star_exp, star_log_gaussian, star_power, StarLog};
pub use gauss::{Deformation, Dim, GaussPoly, PhaseVariables};
pub use poly::{Exponents, Poly, MAX_VARS};
pub use product::{star_product_poly_left, star_product_poly_right, SplitGaussPoly};

use crate::error::{Error, Result};

/// Coefficient pruning threshold, relative to the largest coefficient.
pub const PRUNE_REL: f64 = 1e-15;

/// Tolerance on |Im| / |Re| for results that must be real.
pub const REALITY_TOL: f64 = 1e-10;

/// H = (a·x + b·p)² + (c·x + d·p)² with two-component vectors a, b, c, d.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
    deformation: Deformation,
    k: f64,
}

fn dot(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[0] + u[1] * v[1]
}

fn wedge(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

/// k = (a·d − b·c)ħ + (a∧c)μ + (b∧d)ν, the star commutator of the two
/// linear forms whose squares make up H.
pub fn k_constant(form: &QuadraticForm, deformation: &Deformation) -> f64 {
    let QuadraticForm { a, b, c, d, .. } = *form;
    (dot(a, d) - dot(b, c)) * deformation.hbar + wedge(a, c) * deformation.mu + wedge(b, d) * deformation.nu
}

impl QuadraticForm {
    pub fn new(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2], deformation: Deformation) -> Self {
        let mut form = QuadraticForm {
            a,
            b,
            c,
            d,
            deformation,
            k: 0.0,
        };
        form.k = k_constant(&form, &deformation);
        form
    }

    /// Two-square decomposition of a positive semidefinite 2×2 matrix over
    /// (x, p), on the canonical two-variable space.
    pub fn from_matrix_2d(m: &DMatrix<f64>, hbar: f64) -> Result<Self> {
        if m.nrows() != 2 || m.ncols() != 2 {
            return Err(Error::Domain("expected a 2x2 matrix".into()));
        }
        let (xx, pp, xp) = (m[(0, 0)], m[(1, 1)], 0.5 * (m[(0, 1)] + m[(1, 0)]));
        let scale = xx.abs().max(pp.abs()).max(xp.abs()).max(f64::MIN_POSITIVE);
        let det = xx * pp - xp * xp;
        if xx < 0.0 || pp < 0.0 || det < -1e-12 * scale * scale {
            return Err(Error::Domain("matrix is not positive semidefinite".into()));
        }
        let form = if xx > 0.0 {
            let a = xx.sqrt();
            let b = xp / a;
            let d = (pp - b * b).max(0.0).sqrt();
            QuadraticForm::new([a, 0.0], [b, 0.0], [0.0, 0.0], [d, 0.0], Deformation::canonical(hbar))
        } else {
            if xp.abs() > 1e-12 * scale {
                return Err(Error::Domain("matrix is not positive semidefinite".into()));
            }
            QuadraticForm::new(
                [0.0; 2],
                [pp.sqrt(), 0.0],
                [0.0; 2],
                [0.0; 2],
                Deformation::canonical(hbar),
            )
        };
        Ok(form)
    }

    /// a x² + b p² on the two-variable space.
    pub fn diagonal_2d(x_coeff: f64, p_coeff: f64, hbar: f64) -> Result<Self> {
        Self::from_matrix_2d(&DMatrix::from_row_slice(2, 2, &[x_coeff, 0.0, 0.0, p_coeff]), hbar)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn deformation(&self) -> Deformation {
        self.deformation
    }

    pub fn vectors(&self) -> ([f64; 2], [f64; 2], [f64; 2], [f64; 2]) {
        (self.a, self.b, self.c, self.d)
    }

    /// Phase variables matching this form's deformation.
    pub fn phase_variables(&self, dim: Dim) -> PhaseVariables {
        match dim {
            Dim::Two => PhaseVariables::two(self.deformation.hbar),
            Dim::Four => PhaseVariables::four(self.deformation),
        }
    }

    /// Coefficient vectors of the two linear forms in the variable order of `dim`.
    pub fn generators(&self, dim: Dim) -> Result<[DVector<f64>; 2]> {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        match dim {
            Dim::Two => {
                if [a[1], b[1], c[1], d[1]].iter().any(|&v| v != 0.0) {
                    return Err(Error::Domain(
                        "form uses subsystem-2 variables on a two-variable space".into(),
                    ));
                }
                Ok([
                    DVector::from_row_slice(&[a[0], b[0]]),
                    DVector::from_row_slice(&[c[0], d[0]]),
                ])
            }
            Dim::Four => Ok([
                DVector::from_row_slice(&[a[0], a[1], b[0], b[1]]),
                DVector::from_row_slice(&[c[0], c[1], d[0], d[1]]),
            ]),
        }
    }

    /// Symmetric matrix M with H(z) = zᵀMz.
    pub fn matrix(&self, dim: Dim) -> Result<DMatrix<f64>> {
        let [g, h] = self.generators(dim)?;
        Ok(&g * g.transpose() + &h * h.transpose())
    }

    pub fn polynomial(&self, dim: Dim) -> Result<Poly> {
        Ok(Poly::quadratic(&self.matrix(dim)?))
    }

    pub fn eval(&self, x: [f64; 2], p: [f64; 2]) -> f64 {
        let l1 = dot(self.a, x) + dot(self.b, p);
        let l2 = dot(self.c, x) + dot(self.d, p);
        l1 * l1 + l2 * l2
    }
}

/// Mutually star-commuting quadratic forms; Gaussians whose exponents are
/// linear combinations of them are closed under the star product.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    vars: PhaseVariables,
    forms: Vec<QuadraticForm>,
    matrices: Vec<DMatrix<f64>>,
}

impl ModeBasis {
    pub fn new(vars: PhaseVariables, forms: Vec<QuadraticForm>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::Domain("mode basis needs at least one form".into()));
        }
        let theta = vars.poisson_tensor();
        let mut gens = Vec::new();
        let mut matrices = Vec::new();
        for f in &forms {
            let d = f.deformation();
            let expected = vars.deformation();
            let consistent = match vars.dim() {
                Dim::Two => d.hbar == expected.hbar,
                Dim::Four => d == expected,
            };
            if !consistent {
                return Err(Error::Domain("form deformation differs from the phase space".into()));
            }
            gens.push(f.generators(vars.dim())?);
            matrices.push(f.matrix(vars.dim())?);
        }
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                for g in &gens[i] {
                    for h in &gens[j] {
                        let bracket = (g.transpose() * &theta * h)[(0, 0)];
                        let scale = g.norm() * h.norm() * theta.amax();
                        if bracket.abs() > 1e-10 * scale.max(f64::MIN_POSITIVE) {
                            return Err(Error::Domain(format!(
                                "forms {i} and {j} do not star-commute (bracket {bracket:e})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(ModeBasis { vars, forms, matrices })
    }

    pub fn single(vars: PhaseVariables, form: QuadraticForm) -> Result<Self> {
        Self::new(vars, vec![form])
    }

    /// Basis for a two-variable Gaussian: H = −Q when Q is negative
    /// semidefinite, H = Q otherwise.
    pub fn infer_2d(g: &GaussPoly) -> Result<Self> {
        if g.vars().dim() != Dim::Two {
            return Err(Error::Unsupported(
                "basis inference is only defined on two variables".into(),
            ));
        }
        let q = g.exponent();
        let m = if q[(0, 0)] + q[(1, 1)] <= 0.0 { -q } else { q.clone() };
        let form = QuadraticForm::from_matrix_2d(&m, g.vars().deformation().hbar)?;
        Self::single(*g.vars(), form)
    }

    pub fn vars(&self) -> &PhaseVariables {
        &self.vars
    }

    pub fn forms(&self) -> &[QuadraticForm] {
        &self.forms
    }

    /// Splits a pure Gaussian into (overall constant, per-mode scales s_m)
    /// with exponent Σ s_m M_m.
    pub fn decompose(&self, g: &GaussPoly) -> Result<(f64, Vec<f64>)> {
        if g.vars() != &self.vars {
            return Err(Error::Domain("operand lives on a different phase space".into()));
        }
        let constant = g
            .gaussian_prefactor()
            .ok_or_else(|| Error::Unsupported("operand has a non-constant polynomial part".into()))?;
        let q = g.exponent();
        let n = self.matrices.len();
        let gram = DMatrix::from_fn(n, n, |i, j| self.matrices[i].dot(&self.matrices[j]));
        let rhs = DVector::from_fn(n, |i, _| self.matrices[i].dot(q));
        let scales = gram
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Domain("mode basis matrices are linearly dependent".into()))?;
        let mut fit = DMatrix::zeros(q.nrows(), q.ncols());
        for (m, s) in self.matrices.iter().zip(scales.iter()) {
            fit += m * *s;
        }
        let resid = (q - &fit).amax();
        if resid > 1e-9 * q.amax().max(1e-300) && resid > 1e-300 {
            return Err(Error::Unsupported(format!(
                "exponent is not a combination of the shared forms (residual {resid:e})"
            )));
        }
        Ok((constant, scales.iter().copied().collect()))
    }

    /// constant · exp(Σ s_m H_m).
    pub fn compose(&self, constant: f64, scales: &[f64]) -> Result<GaussPoly> {
        let n = self.vars.n();
        let mut q = DMatrix::zeros(n, n);
        for (m, s) in self.matrices.iter().zip(scales) {
            q += m * *s;
        }
        GaussPoly::gaussian(self.vars, constant, q)
    }
}
