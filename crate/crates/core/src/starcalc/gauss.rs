//! The closed function class `prefactor · poly(z) · exp(zᵀQz)`.

use nalgebra::DMatrix;

use super::poly::Poly;
use crate::error::{Error, Result};

/// The constants (ħ, μ, ν) entering the deformed star product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deformation {
    pub hbar: f64,
    pub mu: f64,
    pub nu: f64,
}

impl Deformation {
    pub fn canonical(hbar: f64) -> Self {
        Deformation { hbar, mu: 0.0, nu: 0.0 }
    }
}

/// Number of phase-space variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    /// (x, p) of a single subsystem.
    Two,
    /// (x₁, x₂, p₁, p₂).
    Four,
}

impl Dim {
    pub fn n(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Four => 4,
        }
    }
}

/// Variable layout plus the star-product deformation acting on it.
///
/// On the two-variable space only the ħ term survives: the μ and ν terms
/// pair distinct subsystem indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseVariables {
    dim: Dim,
    deformation: Deformation,
}

impl PhaseVariables {
    pub fn two(hbar: f64) -> Self {
        PhaseVariables {
            dim: Dim::Two,
            deformation: Deformation::canonical(hbar),
        }
    }

    pub fn four(deformation: Deformation) -> Self {
        PhaseVariables {
            dim: Dim::Four,
            deformation,
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim.n()
    }

    pub fn deformation(&self) -> Deformation {
        self.deformation
    }

    /// Antisymmetric tensor Θ with z_a ⋆ z_b − z_b ⋆ z_a = iΘ_ab.
    pub fn poisson_tensor(&self) -> DMatrix<f64> {
        let Deformation { hbar, mu, nu } = self.deformation;
        match self.dim {
            Dim::Two => DMatrix::from_row_slice(2, 2, &[0.0, hbar, -hbar, 0.0]),
            Dim::Four => DMatrix::from_row_slice(
                4,
                4,
                &[
                    0.0, mu, hbar, 0.0, //
                    -mu, 0.0, 0.0, hbar, //
                    -hbar, 0.0, 0.0, nu, //
                    0.0, -hbar, -nu, 0.0,
                ],
            ),
        }
    }
}

/// `prefactor · poly(z) · exp(zᵀQz)` over two or four phase-space variables.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussPoly {
    vars: PhaseVariables,
    prefactor: f64,
    exponent: DMatrix<f64>,
    poly: Poly,
}

impl GaussPoly {
    /// The exponent matrix is symmetrized on the way in.
    pub fn new(vars: PhaseVariables, prefactor: f64, exponent: DMatrix<f64>, poly: Poly) -> Result<Self> {
        let n = vars.n();
        if exponent.nrows() != n || exponent.ncols() != n {
            return Err(Error::Domain(format!(
                "exponent matrix is {}x{}, expected {n}x{n}",
                exponent.nrows(),
                exponent.ncols()
            )));
        }
        let live = poly.max_powers();
        if live[n..].iter().any(|&k| k > 0) {
            return Err(Error::Domain(format!(
                "polynomial uses variables beyond the {n}-variable space"
            )));
        }
        let exponent = (&exponent + exponent.transpose()) * 0.5;
        Ok(GaussPoly {
            vars,
            prefactor,
            exponent,
            poly,
        })
    }

    /// A pure polynomial (Q = 0).
    pub fn polynomial(vars: PhaseVariables, poly: Poly) -> Result<Self> {
        let n = vars.n();
        Self::new(vars, 1.0, DMatrix::zeros(n, n), poly)
    }

    /// `prefactor · exp(zᵀQz)`.
    pub fn gaussian(vars: PhaseVariables, prefactor: f64, exponent: DMatrix<f64>) -> Result<Self> {
        Self::new(vars, prefactor, exponent, Poly::constant(1.0))
    }

    pub fn one(vars: PhaseVariables) -> Self {
        let n = vars.n();
        GaussPoly {
            vars,
            prefactor: 1.0,
            exponent: DMatrix::zeros(n, n),
            poly: Poly::constant(1.0),
        }
    }

    pub fn vars(&self) -> &PhaseVariables {
        &self.vars
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    pub fn exponent(&self) -> &DMatrix<f64> {
        &self.exponent
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn has_zero_exponent(&self) -> bool {
        self.exponent.iter().all(|&q| q == 0.0)
    }

    /// Folds the prefactor into the polynomial coefficients.
    pub fn folded_poly(&self) -> Poly {
        self.poly.scale(self.prefactor)
    }

    /// Overall constant when the polynomial part is a constant.
    pub fn gaussian_prefactor(&self) -> Option<f64> {
        self.poly.as_constant().map(|c| c * self.prefactor)
    }

    pub fn with_poly(&self, poly: Poly) -> GaussPoly {
        GaussPoly { poly, ..self.clone() }
    }

    pub fn scale(&self, s: f64) -> GaussPoly {
        GaussPoly {
            prefactor: self.prefactor * s,
            ..self.clone()
        }
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        let n = self.vars.n();
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                q += z[i] * self.exponent[(i, j)] * z[j];
            }
        }
        self.prefactor * self.poly.eval(z) * q.exp()
    }

    fn same_space(&self, other: &GaussPoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::Domain("operands live on different phase spaces".into()));
        }
        Ok(())
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GaussPoly) -> Result<GaussPoly> {
        self.same_space(other)?;
        Ok(GaussPoly {
            vars: self.vars,
            prefactor: self.prefactor * other.prefactor,
            exponent: &self.exponent + &other.exponent,
            poly: self.poly.mul(&other.poly),
        })
    }

    /// Sum of two functions sharing an exponent matrix (to `tol`, relative).
    pub fn add_same_exponent(&self, other: &GaussPoly, tol: f64) -> Result<GaussPoly> {
        self.same_space(other)?;
        if !self.exponent_matches(other, tol) {
            return Err(Error::Unsupported("sum of GaussPolys with different exponents".into()));
        }
        let poly = self.folded_poly().add(&other.folded_poly());
        Ok(GaussPoly {
            vars: self.vars,
            prefactor: 1.0,
            exponent: self.exponent.clone(),
            poly,
        })
    }

    pub fn exponent_matches(&self, other: &GaussPoly, tol: f64) -> bool {
        let scale = self.exponent.amax().max(other.exponent.amax()).max(1.0);
        (&self.exponent - &other.exponent).amax() <= tol * scale
    }

    /// Coefficient-wise sup distance of the prefactor-folded polynomials, or
    /// `None` when the exponents differ beyond `tol`.
    pub fn distance(&self, other: &GaussPoly, tol: f64) -> Option<f64> {
        if self.vars != other.vars || !self.exponent_matches(other, tol) {
            return None;
        }
        Some(self.folded_poly().sub(&other.folded_poly()).max_abs_coeff())
    }

    /// ∂/∂z_var, staying inside the class.
    pub fn derivative(&self, var: usize) -> GaussPoly {
        self.with_poly(derivative_poly(&self.poly, &self.exponent, var))
    }
}

/// Polynomial part of ∂_var(P·exp(zᵀQz)), i.e. ∂P + 2P(Qz)_var.
pub(crate) fn derivative_poly(p: &Poly, q: &DMatrix<f64>, var: usize) -> Poly {
    let n = q.nrows();
    let row: Vec<f64> = (0..n).map(|j| 2.0 * q[(var, j)]).collect();
    let mut out = p.derivative(var);
    if row.iter().any(|&r| r != 0.0) {
        out.add_assign_scaled(&p.mul(&Poly::linear(&row)), 1.0);
    }
    out
}
