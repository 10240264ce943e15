//! Star-exponentials of two-square forms and the Gaussian group law.

use super::gauss::{Dim, GaussPoly};
use super::poly::Poly;
use super::{ModeBasis, QuadraticForm};
use crate::error::{Error, Result};

/// Largest |k·t| for which cosh(k·t) is finite in f64.
const COSH_LIMIT: f64 = 709.0;

/// Slack on |k·s| ≤ 1 for operands sitting on the pure-state boundary.
const BOUNDARY_SLACK: f64 = 1e-12;

/// exp_⋆(H t) = sech(k t) · exp(H tanh(k t)/k); exp(H t) when k = 0.
pub fn star_exp(form: &QuadraticForm, t: f64, dim: Dim) -> Result<GaussPoly> {
    let vars = form.phase_variables(dim);
    let m = form.matrix(dim)?;
    let k = form.k();
    let kt = k * t;
    if !kt.is_finite() || kt.abs() > COSH_LIMIT {
        return Err(Error::OutOfRange(format!("|k t| = {} overflows cosh", kt.abs())));
    }
    if k == 0.0 {
        return GaussPoly::gaussian(vars, 1.0, m * t);
    }
    GaussPoly::gaussian(vars, 1.0 / kt.cosh(), m * (kt.tanh() / k))
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau.abs() <= 1.0 + BOUNDARY_SLACK) {
        return Err(Error::Domain(format!(
            "|k s| = {} exceeds 1; not a star-exponential",
            tau.abs()
        )));
    }
    Ok(())
}

/// G₁ ⋆ G₂ for pure Gaussians built on the same star-commuting forms.
///
/// Per mode, with τ = k·s, converting to star-exponential parameters,
/// adding and converting back reduces to
/// s = (s₁ + s₂)/(1 + τ₁τ₂) and constant factor 1/(1 + τ₁τ₂),
/// which stays finite on the pure-state boundary |τ| = 1.
pub fn gaussian_star(left: &GaussPoly, right: &GaussPoly, basis: &ModeBasis) -> Result<GaussPoly> {
    let (c1, s1) = basis.decompose(left)?;
    let (c2, s2) = basis.decompose(right)?;
    let mut constant = c1 * c2;
    let mut scales = Vec::with_capacity(s1.len());
    for ((form, a), b) in basis.forms().iter().zip(&s1).zip(&s2) {
        let k = form.k();
        check_tau(k * a)?;
        check_tau(k * b)?;
        let den = 1.0 + k * k * a * b;
        if den.abs() < 1e-300 {
            return Err(Error::Domain(
                "opposite pure-state boundaries have no star product".into(),
            ));
        }
        constant /= den;
        scales.push((a + b) / den);
    }
    basis.compose(constant, &scales)
}

/// n-fold star power by repeated [`gaussian_star`].
pub fn star_power(g: &GaussPoly, n: u32, basis: &ModeBasis) -> Result<GaussPoly> {
    if n == 0 {
        return Err(Error::Domain("star power needs n >= 1".into()));
    }
    let (c, s) = basis.decompose(g)?;
    let base = basis.compose(c, &s)?;
    let mut acc = base.clone();
    for _ in 1..n {
        acc = gaussian_star(&acc, &base, basis)?;
    }
    Ok(acc)
}

/// ln_⋆ of a Gaussian, split into an additive constant and a quadratic
/// polynomial Σ t_m H_m.
#[derive(Debug, Clone)]
pub struct StarLog {
    pub constant: f64,
    pub form_part: GaussPoly,
}

/// Inverts the star-exponential: G = c·exp(Σ s_m H_m) = c·Π cosh(k t_m)·exp_⋆(Σ t_m H_m)
/// with t_m = artanh(k s_m)/k, hence ln_⋆ G = ln c − ½ Σ ln(1 − τ_m²) + Σ t_m H_m.
pub fn star_log_gaussian(g: &GaussPoly, basis: &ModeBasis) -> Result<StarLog> {
    let (c, s) = basis.decompose(g)?;
    if !(c > 0.0) {
        return Err(Error::Domain(format!(
            "star logarithm needs a positive constant, got {c}"
        )));
    }
    let dim = basis.vars().dim();
    let mut constant = c.ln();
    let mut poly = Poly::zero();
    for (form, &sm) in basis.forms().iter().zip(&s) {
        let k = form.k();
        let tau = k * sm;
        if !(tau.abs() < 1.0) {
            return Err(Error::Domain(format!(
                "|k s| = {} must be < 1 for the star logarithm",
                tau.abs()
            )));
        }
        let t = if k == 0.0 { sm } else { tau.atanh() / k };
        constant -= 0.5 * (-tau * tau).ln_1p();
        poly.add_assign_scaled(&form.polynomial(dim)?, t);
    }
    Ok(StarLog {
        constant,
        form_part: GaussPoly::polynomial(*basis.vars(), poly)?,
    })
}
