//! Physical inputs and the scalar symbols derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the three-way λ cross-check in [`derive`].
pub const LAMBDA_CROSS_CHECK_TOL: f64 = 1e-12;

/// Relative width of the band below μν = ħ² that is accepted but flagged.
pub const NEAR_SINGULAR_BAND: f64 = 1e-9;

/// Lower (open) bound of λ over the admissible parameter region.
pub const LAMBDA_INF: f64 = 0.577_350_269_189_625_8; // √3/3

/// Physical parameters of the oscillator on noncommutative phase space.
///
/// `mu` is the position-position and `nu` the momentum-momentum
/// noncommutativity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub mu: f64,
    pub nu: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            mu: 0.0,
            nu: 0.0,
        }
    }
}

impl ModelParams {
    /// Builds and validates a parameter set.
    pub fn new(hbar: f64, mass: f64, omega: f64, mu: f64, nu: f64) -> Result<Self> {
        let p = ModelParams {
            hbar,
            mass,
            omega,
            mu,
            nu,
        };
        p.validate()?;
        Ok(p)
    }

    /// Natural units (ħ = m = ω = 1) with the given deformation.
    pub fn natural(mu: f64, nu: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, mu, nu)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("hbar", self.hbar), ("mass", self.mass), ("omega", self.omega)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameters(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        for (name, v) in [("mu", self.mu), ("nu", self.nu)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameters(format!("{name} must be finite, got {v}")));
            }
        }
        if self.mu * self.nu >= self.hbar * self.hbar {
            return Err(Error::InvalidParameters(format!(
                "mu*nu must be < hbar^2 (got mu*nu = {}, hbar^2 = {}); the minimal phase-space cell is singular",
                self.mu * self.nu,
                self.hbar * self.hbar
            )));
        }
        if self.mu * self.nu <= -self.hbar * self.hbar {
            return Err(Error::InvalidParameters(format!(
                "mu*nu must be > -hbar^2 (got mu*nu = {}, hbar^2 = {}); theta = mu*nu/hbar^2 must lie in (-1, 1)",
                self.mu * self.nu,
                self.hbar * self.hbar
            )));
        }
        Ok(())
    }

    /// θ = μν/ħ².
    pub fn theta(&self) -> f64 {
        self.mu * self.nu / (self.hbar * self.hbar)
    }

    /// True when μν lies in the accepted-but-suspicious band just below ħ².
    pub fn near_singular(&self) -> bool {
        let h2 = self.hbar * self.hbar;
        self.mu * self.nu >= h2 * (1.0 - NEAR_SINGULAR_BAND)
    }
}

/// Every derived scalar used downstream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedQuantities {
    pub eta: f64,
    pub delta: f64,
    /// Rotation angle that splits H into two star-commuting oscillators.
    pub c: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    pub lambda: f64,
    pub u: f64,
    pub v: f64,
    pub theta: f64,
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Computes η, δ, c, h±, λ, u, v and θ.
///
/// λ is evaluated three ways (δ/η, u/v and δ²/θ forms); disagreement beyond
/// [`LAMBDA_CROSS_CHECK_TOL`] is reported as a consistency error.
pub fn derive(params: &ModelParams) -> Result<DerivedQuantities> {
    params.validate()?;
    let ModelParams {
        hbar,
        mass,
        omega,
        mu,
        nu,
    } = *params;
    let mw = mass * omega;
    let eta = (mw * mw * mu + nu) / (2.0 * hbar * mw);
    let delta = (mw * mw * mu - nu) / (2.0 * hbar * mw);
    let theta = params.theta();
    let u = mw * mu / hbar;
    let v = nu / (hbar * mw);

    let root = (1.0 + delta * delta).sqrt();
    // the smaller of √(1+δ²) ± η is taken from h₊h₋ = ħ²(1 − θ) to avoid cancellation
    let (h_plus, h_minus) = if eta >= 0.0 {
        let big = hbar * (root + eta);
        (big, hbar * hbar * (1.0 - theta) / big)
    } else {
        let big = hbar * (root - eta);
        (hbar * hbar * (1.0 - theta) / big, big)
    };
    if !(h_plus > 0.0 && h_minus > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "h+ = {h_plus}, h- = {h_minus} must both be positive"
        )));
    }

    // cot(2c) = -δ with 2c in (0, π); this is the branch on which H+ and H-
    // star-commute for the ε12 = +1 orientation.
    let c = 0.5 * f64::atan2(1.0, -delta);

    let d2 = delta * delta;
    // (1+δ²)² − δ²η² = (1 + δ² − δη)(1 + δ² + δη), each factor written as
    // 1 + δ(δ ∓ η) with δ − η = −v and δ + η = u to avoid cancellation.
    let lambda_de = ((1.0 + d2) / (p_width_factor(delta, v) * x_width_factor(delta, u))).sqrt();
    let lambda_uv = lambda_from_uv(u, v)?;
    let lambda_th = lambda_from_theta(d2, theta)?;
    for (name, other) in [("(u, v)", lambda_uv), ("(delta^2, theta)", lambda_th)] {
        if rel_diff(lambda_de, other) > LAMBDA_CROSS_CHECK_TOL {
            return Err(Error::Consistency(format!(
                "lambda from (delta, eta) = {lambda_de} disagrees with {name} form = {other}"
            )));
        }
    }
    Ok(DerivedQuantities {
        eta,
        delta,
        c,
        h_plus,
        h_minus,
        lambda: lambda_de.min(1.0),
        u,
        v,
        theta,
    })
}

/// 1 + δ² − δη, the momentum-width denominator of the reduced ground state.
pub(crate) fn p_width_factor(delta: f64, v: f64) -> f64 {
    1.0 - delta * v
}

/// 1 + δ² + δη, the position-width denominator of the reduced ground state.
pub(crate) fn x_width_factor(delta: f64, u: f64) -> f64 {
    1.0 + delta * u
}

/// λ in terms of u = mωμ/ħ and v = ν/(ħmω).
pub fn lambda_from_uv(u: f64, v: f64) -> Result<f64> {
    let uv = u * v;
    if !(uv > -1.0 && uv < 1.0) {
        return Err(Error::Domain(format!("u*v must lie in (-1, 1), got {uv}")));
    }
    let w = (u - v) * (u - v);
    Ok(((4.0 + w) / (4.0 + (2.0 - uv) * w)).sqrt().min(1.0))
}

/// λ in terms of δ² and θ = μν/ħ².
pub fn lambda_from_theta(delta_sq: f64, theta: f64) -> Result<f64> {
    if !(theta > -1.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta must lie in (-1, 1), got {theta}")));
    }
    if !(delta_sq >= 0.0) {
        return Err(Error::Domain(format!("delta^2 must be >= 0, got {delta_sq}")));
    }
    if delta_sq.is_infinite() {
        return Ok((1.0 / (2.0 - theta)).sqrt());
    }
    Ok(((1.0 + delta_sq) / (1.0 + (2.0 - theta) * delta_sq)).sqrt().min(1.0))
}
