//! Linear map from canonical coordinates (y, q) to the deformed ones (x, p).

use std::f64::consts::PI;

use nalgebra::Matrix4;

use crate::error::Result;
use crate::params::ModelParams;

/// (x₁, x₂, p₁, p₂)ᵀ = M · (y₁, y₂, q₁, q₂)ᵀ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxMap {
    pub matrix: Matrix4<f64>,
}

/// Commutator matrix of the canonical variables, [y_i, q_j] = iħδ_ij.
pub fn omega_canonical(hbar: f64) -> Matrix4<f64> {
    Matrix4::new(
        0.0, 0.0, hbar, 0.0, //
        0.0, 0.0, 0.0, hbar, //
        -hbar, 0.0, 0.0, 0.0, //
        0.0, -hbar, 0.0, 0.0,
    )
}

/// Commutator matrix of the deformed variables.
pub fn omega_ncps(params: &ModelParams) -> Matrix4<f64> {
    let (h, mu, nu) = (params.hbar, params.mu, params.nu);
    Matrix4::new(
        0.0, mu, h, 0.0, //
        -mu, 0.0, 0.0, h, //
        -h, 0.0, 0.0, nu, //
        0.0, -h, -nu, 0.0,
    )
}

/// Scaled Bopp shift
/// x_i = a y_i − (μ/2aħ) ε_ij q_j,  p_i = a q_i + (ν/2aħ) ε_ij y_j,
/// with a² = (1 + √(1 − θ))/2 so that [x_i, p_i] = iħ exactly.
pub fn build_map(params: &ModelParams) -> Result<DarbouxMap> {
    params.validate()?;
    let theta = params.theta();
    let a = ((1.0 + (1.0 - theta).sqrt()) / 2.0).sqrt();
    let m = params.mu / (2.0 * a * params.hbar);
    let n = params.nu / (2.0 * a * params.hbar);
    let matrix = Matrix4::new(
        a, 0.0, 0.0, -m, //
        0.0, a, m, 0.0, //
        0.0, n, a, 0.0, //
        -n, 0.0, 0.0, a,
    );
    Ok(DarbouxMap { matrix })
}

impl DarbouxMap {
    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// max |M Ω₀ Mᵀ − Ω_ncps|.
    pub fn commutator_error(&self, params: &ModelParams) -> f64 {
        let image = self.matrix * omega_canonical(params.hbar) * self.matrix.transpose();
        (image - omega_ncps(params)).amax()
    }

    pub fn compose(&self, other: &Matrix4<f64>) -> DarbouxMap {
        DarbouxMap {
            matrix: self.matrix * other,
        }
    }
}

/// Minimal phase-space cell 4π²(ħ² − μν).
pub fn cell_size(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    Ok(4.0 * PI * PI * (params.hbar * params.hbar - params.mu * params.nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Matrix2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
        loop {
            let hbar = rng.gen_range(0.3..2.0);
            let mu = rng.gen_range(-2.0..2.0);
            let nu = rng.gen_range(-2.0..2.0);
            if let Ok(p) = ModelParams::new(hbar, 1.0, 1.0, mu, nu) {
                return p;
            }
        }
    }

    fn random_symplectic(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
        let mut a = Matrix2::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        a += Matrix2::identity() * 2.0;
        let a_inv_t = a.try_inverse().unwrap().transpose();
        let b01 = rng.gen_range(-1.0..1.0);
        let b = Matrix2::new(rng.gen_range(-1.0..1.0), b01, b01, rng.gen_range(-1.0..1.0));
        let mut diag = Matrix4::zeros();
        diag.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
        diag.fixed_view_mut::<2, 2>(2, 2).copy_from(&a_inv_t);
        let mut shear = Matrix4::identity();
        shear.fixed_view_mut::<2, 2>(0, 2).copy_from(&b);
        diag * shear
    }

    #[test]
    fn identity_without_deformation() {
        let m = build_map(&ModelParams::default()).unwrap();
        assert_eq!(m.matrix, Matrix4::identity());
        assert_eq!(m.determinant(), 1.0);
    }

    #[test]
    fn determinant_examples() {
        let p = ModelParams::natural(1.0, 0.0).unwrap();
        assert_relative_eq!(build_map(&p).unwrap().determinant(), 1.0, max_relative = 1e-14);
        let p = ModelParams::natural(0.5, 0.5).unwrap();
        let m = build_map(&p).unwrap();
        assert_relative_eq!(m.determinant(), 0.75, max_relative = 1e-14);
        assert!(m.commutator_error(&p) < 1e-15);
    }

    #[test]
    fn cell_examples() {
        assert_relative_eq!(
            cell_size(&ModelParams::default()).unwrap(),
            4.0 * PI * PI,
            max_relative = 1e-15
        );
        let p = ModelParams::natural(0.5, 0.5).unwrap();
        assert_relative_eq!(cell_size(&p).unwrap(), 3.0 * PI * PI, max_relative = 1e-15);
        let m = build_map(&p).unwrap();
        assert_relative_eq!(
            cell_size(&p).unwrap(),
            (2.0 * PI * p.hbar).powi(2) * m.determinant(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn plain_bopp_shift_misses_canonical_pair() {
        let p = ModelParams::natural(0.5, 0.5).unwrap();
        let (m, n) = (p.mu / 2.0, p.nu / 2.0);
        let plain = DarbouxMap {
            matrix: Matrix4::new(1.0, 0.0, 0.0, -m, 0.0, 1.0, m, 0.0, 0.0, n, 1.0, 0.0, -n, 0.0, 0.0, 1.0),
        };
        assert_relative_eq!(plain.commutator_error(&p), p.theta() / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_params(&mut rng);
            let m = build_map(&p).unwrap();
            assert!(m.commutator_error(&p) < 1e-12);
            assert!((m.determinant() - (1.0 - p.theta())).abs() < 1e-12);
        }
    }

    #[test]
    fn symplectic_composition_is_another_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = ModelParams::new(1.3, 1.0, 1.0, 0.4, -0.9).unwrap();
        let m = build_map(&p).unwrap();
        for _ in 0..5 {
            let s = random_symplectic(&mut rng);
            let j = omega_canonical(1.0);
            assert!((s * j * s.transpose() - j).amax() < 1e-12);
            let composed = m.compose(&s);
            assert!(composed.commutator_error(&p) < 1e-10);
            assert_relative_eq!(composed.determinant(), m.determinant(), max_relative = 1e-10);
        }
    }

    #[test]
    fn rejects_singular_cell() {
        assert!(build_map(&ModelParams {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            mu: 2.0,
            nu: 1.0
        })
        .is_err());
        assert!(cell_size(&ModelParams {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            mu: 1.0,
            nu: 1.0
        })
        .is_err());
    }
}
