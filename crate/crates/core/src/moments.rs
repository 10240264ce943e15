//! Exact integration of [`GaussPoly`] functions by Gaussian moments.
//!
//! Convention: a function is `prefactor · P(z) · exp(zᵀQz)` with Q negative
//! definite, and the associated covariance is Σ = −½Q⁻¹. Then
//! ∫ exp(zᵀQz) dz = π^{d/2}/√det(−Q) and ∫ z^α exp(zᵀQz) dz is that
//! normalization times the Gaussian moment E[z^α] under N(0, Σ).

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::starcalc::{Exponents, GaussPoly, PhaseVariables, Poly, MAX_VARS};

/// Highest total polynomial degree accepted by the moment recursion.
pub const MAX_MOMENT_DEGREE: u32 = 48;

/// Which subsystem a marginal keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    One,
    Two,
}

impl Subsystem {
    /// (x, p) slots in the four-variable layout (x₁, x₂, p₁, p₂).
    pub fn slots(self) -> [usize; 2] {
        match self {
            Subsystem::One => [0, 2],
            Subsystem::Two => [1, 3],
        }
    }

    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::One => Subsystem::Two,
            Subsystem::Two => Subsystem::One,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Subsystem::One => 1,
            Subsystem::Two => 2,
        }
    }
}

/// Gaussian moments E[z^α] for one covariance, built once for a fixed set of
/// monomials and read-only afterwards.
#[derive(Debug, Clone)]
pub struct MomentTable {
    covariance: DMatrix<f64>,
    moments: HashMap<Exponents, f64>,
}

impl MomentTable {
    /// Builds every moment needed by the monomials of `poly`.
    pub fn build(covariance: DMatrix<f64>, poly: &Poly) -> Result<Self> {
        let deg = poly.total_degree();
        if deg > MAX_MOMENT_DEGREE {
            return Err(Error::OutOfRange(format!(
                "polynomial degree {deg} exceeds {MAX_MOMENT_DEGREE}"
            )));
        }
        let mut table = MomentTable {
            covariance,
            moments: HashMap::new(),
        };
        table.moments.insert([0; MAX_VARS], 1.0);
        for (e, _) in poly.terms() {
            table.fill(*e);
        }
        Ok(table)
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    /// E[z^α]; zero for odd total degree.
    pub fn get(&self, alpha: &Exponents) -> f64 {
        if alpha.iter().map(|&k| k as u32).sum::<u32>() % 2 == 1 {
            return 0.0;
        }
        self.moments[alpha]
    }

    // E[z_k z^β] = Σ_j Σ_kj β_j E[z^{β − e_j}]
    fn fill(&mut self, alpha: Exponents) -> f64 {
        let total: u32 = alpha.iter().map(|&k| k as u32).sum();
        if total % 2 == 1 {
            return 0.0;
        }
        if let Some(&m) = self.moments.get(&alpha) {
            return m;
        }
        let n = self.covariance.nrows();
        let k = (0..n).find(|&i| alpha[i] > 0).expect("nonzero multi-index");
        let mut beta = alpha;
        beta[k] -= 1;
        let mut acc = 0.0;
        for j in 0..n {
            if beta[j] == 0 {
                continue;
            }
            let s = self.covariance[(k, j)];
            if s == 0.0 {
                continue;
            }
            let mut gamma = beta;
            gamma[j] -= 1;
            acc += s * beta[j] as f64 * self.fill(gamma);
        }
        self.moments.insert(alpha, acc);
        acc
    }

    /// Σ_α c_α E[z^α].
    pub fn expectation(&self, poly: &Poly) -> f64 {
        poly.terms().map(|(e, c)| c * self.get(e)).sum()
    }
}

fn negative_definite_parts(q: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let a = -q;
    let chol = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Domain("exponent matrix is not negative definite".into()))?;
    let det = chol.determinant();
    let cov = chol.inverse() * 0.5;
    Ok((cov, det))
}

/// ∫ F over all of its variables.
pub fn integrate(f: &GaussPoly) -> Result<f64> {
    let q = f.exponent();
    let (cov, det) = negative_definite_parts(q)?;
    let d = q.nrows() as i32;
    let norm = std::f64::consts::PI.powi(d).sqrt() / det.sqrt();
    let table = MomentTable::build(cov, f.poly())?;
    Ok(f.prefactor() * norm * table.expectation(f.poly()))
}

/// ∫ F over the other subsystem's (x, p), leaving a function of `keep`'s
/// (x, p) on the two-variable space.
///
/// Writing z = (k, r), completing the square gives the Schur complement
/// Q_kk − Q_kr Q_rr⁻¹ Q_rk as the new exponent and r = s + B k with
/// B = −Q_rr⁻¹ Q_rk; the polynomial is shifted accordingly and s is
/// integrated out by moments.
pub fn marginalize(f: &GaussPoly, keep: Subsystem) -> Result<GaussPoly> {
    if f.vars().n() != 4 {
        return Err(Error::Domain("marginalize expects a four-variable function".into()));
    }
    let q = f.exponent();
    let ks = keep.slots();
    let rs = keep.other().slots();
    let sub = |rows: [usize; 2], cols: [usize; 2]| DMatrix::from_fn(2, 2, |i, j| q[(rows[i], cols[j])]);
    let q_kk = sub(ks, ks);
    let q_kr = sub(ks, rs);
    let q_rk = sub(rs, ks);
    let q_rr = sub(rs, rs);
    let (cov_r, det_r) = negative_definite_parts(&q_rr)?;
    let q_rr_inv = q_rr
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Domain("singular block".into()))?;
    let b = -(&q_rr_inv * &q_rk);
    let schur = &q_kk - &q_kr * &q_rr_inv * &q_rk;

    // r_j → r_j + Σ_l B_jl k_l, in place on the four-variable polynomial
    let mut images: Vec<Poly> = (0..4).map(Poly::var).collect();
    for (j, &rj) in rs.iter().enumerate() {
        let mut img = Poly::var(rj);
        for (l, &kl) in ks.iter().enumerate() {
            let mut lin = Poly::var(kl);
            lin = lin.scale(b[(j, l)]);
            img = img.add(&lin);
        }
        images[rj] = img;
    }
    let shifted = f.poly().substitute(&images);

    // Integrate the r slots: moments of N(0, −½Q_rr⁻¹) over (r₀, r₁)
    let mut r_only = Poly::zero();
    for (e, _) in shifted.terms() {
        r_only.add_term([e[rs[0]], e[rs[1]], 0, 0], 1.0);
    }
    let table = MomentTable::build(cov_r, &r_only)?;
    let mut kept = Poly::zero();
    for (e, c) in shifted.terms() {
        let m = table.get(&[e[rs[0]], e[rs[1]], 0, 0]);
        if m != 0.0 {
            kept.add_term([e[ks[0]], e[ks[1]], 0, 0], c * m);
        }
    }
    let norm = std::f64::consts::PI / det_r.sqrt();
    let vars = PhaseVariables::two(f.vars().deformation().hbar);
    GaussPoly::new(vars, f.prefactor() * norm, schur, kept)
}
