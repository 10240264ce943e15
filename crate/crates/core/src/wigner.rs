//! Oscillator Wigner eigenfunctions, spectrum and reduced ground state.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::moments::Subsystem;
use crate::params::{derive, p_width_factor, x_width_factor, ModelParams};
use crate::starcalc::{
    star_product_poly_left, star_product_poly_right, Deformation, Dim, GaussPoly, ModeBasis, PhaseVariables, Poly,
    QuadraticForm,
};

/// Largest supported Laguerre index for either mode.
pub const MAX_INDEX: u32 = 12;

/// Points per axis of the residual grid.
pub const GRID_POINTS: usize = 11;

/// Half-width of the residual grid in marginal standard deviations.
pub const GRID_SIGMAS: f64 = 3.0;

pub fn deformation(params: &ModelParams) -> Deformation {
    Deformation {
        hbar: params.hbar,
        mu: params.mu,
        nu: params.nu,
    }
}

pub fn phase_variables(params: &ModelParams) -> PhaseVariables {
    PhaseVariables::four(deformation(params))
}

/// H = (p₁² + p₂²)/2m + mω²(x₁² + x₂²)/2 in the layout (x₁, x₂, p₁, p₂).
pub fn hamiltonian(params: &ModelParams) -> Poly {
    let kx = 0.5 * params.mass * params.omega * params.omega;
    let kp = 0.5 / params.mass;
    Poly::from_terms([
        ([2, 0, 0, 0], kx),
        ([0, 2, 0, 0], kx),
        ([0, 0, 2, 0], kp),
        ([0, 0, 0, 2], kp),
    ])
}

pub(crate) fn hamiltonians_pm_at_angle(params: &ModelParams, c: f64) -> (QuadraticForm, QuadraticForm) {
    let def = deformation(params);
    let (s, co) = c.sin_cos();
    let sm = params.mass.sqrt();
    let w = params.omega;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // H₊ = ½(p₁cos c/√m + ω√m x₂ sin c)² + ½(ω√m x₁ sin c − p₂ cos c/√m)²
    let plus = QuadraticForm::new(
        [0.0, r * w * sm * s],
        [r * co / sm, 0.0],
        [r * w * sm * s, 0.0],
        [0.0, -r * co / sm],
        def,
    );
    // H₋ = ½(p₂ sin c/√m + ω√m x₁ cos c)² + ½(ω√m x₂ cos c − p₁ sin c/√m)²
    let minus = QuadraticForm::new(
        [r * w * sm * co, 0.0],
        [0.0, r * s / sm],
        [0.0, r * w * sm * co],
        [-r * s / sm, 0.0],
        def,
    );
    (plus, minus)
}

/// The two star-commuting oscillators with H₊ + H₋ = H.
pub fn hamiltonians_pm(params: &ModelParams) -> Result<(QuadraticForm, QuadraticForm)> {
    let d = derive(params)?;
    Ok(hamiltonians_pm_at_angle(params, d.c))
}

/// {H₊, H₋} as a star-commuting basis on the four-variable space.
pub fn mode_basis(params: &ModelParams) -> Result<ModeBasis> {
    let (hp, hm) = hamiltonians_pm(params)?;
    ModeBasis::new(phase_variables(params), vec![hp, hm])
}

/// E_ij = ħω[(i + j + 1)√(1 + δ²) + (i − j)η].
pub fn energy(i: u32, j: u32, params: &ModelParams) -> Result<f64> {
    let d = derive(params)?;
    let (i, j) = (i as f64, j as f64);
    Ok(params.hbar * params.omega * ((i + j + 1.0) * (1.0 + d.delta * d.delta).sqrt() + (i - j) * d.eta))
}

/// Laguerre polynomial L_n evaluated on a polynomial argument, by the
/// three-term recurrence.
pub fn laguerre(n: u32, arg: &Poly) -> Poly {
    let mut prev = Poly::constant(1.0);
    if n == 0 {
        return prev;
    }
    let mut cur = Poly::constant(1.0).sub(arg);
    for k in 1..n {
        let kf = k as f64;
        // (k+1) L_{k+1} = (2k+1−x) L_k − k L_{k−1}
        let mut next = cur.scale(2.0 * kf + 1.0).sub(&arg.mul(&cur));
        next.add_assign_scaled(&prev, -kf);
        prev = cur;
        cur = next.scale(1.0 / (kf + 1.0));
    }
    cur
}

/// Scalar Laguerre polynomial (same recurrence), for tests and evaluation.
pub fn laguerre_scalar(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// A Wigner eigenfunction W_ij of the oscillator.
#[derive(Debug, Clone)]
pub struct WignerState {
    pub i: u32,
    pub j: u32,
    pub function: GaussPoly,
    /// Energy in the units of ħω supplied by the parameters.
    pub energy: f64,
    pub params: ModelParams,
}

impl WignerState {
    pub fn is_ground(&self) -> bool {
        self.i == 0 && self.j == 0
    }
}

/// W_ij = ((−1)^{i+j}/(π²h₊h₋)) exp(−2H₊/(h₊ω) − 2H₋/(h₋ω)) L_i(4H₊/(h₊ω)) L_j(4H₋/(h₋ω)).
pub fn wigner_state(i: u32, j: u32, params: &ModelParams) -> Result<WignerState> {
    if i > MAX_INDEX || j > MAX_INDEX {
        return Err(Error::OutOfRange(format!(
            "indices must be <= {MAX_INDEX}, got ({i}, {j})"
        )));
    }
    let d = derive(params)?;
    let (hp, hm) = hamiltonians_pm_at_angle(params, d.c);
    let w = params.omega;
    let mp = hp.matrix(Dim::Four)?;
    let mm = hm.matrix(Dim::Four)?;
    let exponent = &mp * (-2.0 / (d.h_plus * w)) + &mm * (-2.0 / (d.h_minus * w));
    let lp = laguerre(i, &Poly::quadratic(&mp).scale(4.0 / (d.h_plus * w)));
    let lm = laguerre(j, &Poly::quadratic(&mm).scale(4.0 / (d.h_minus * w)));
    let sign = if (i + j).is_multiple_of(2) { 1.0 } else { -1.0 };
    let prefactor = sign / (PI * PI * d.h_plus * d.h_minus);
    let function = GaussPoly::new(phase_variables(params), prefactor, exponent, lp.mul(&lm))?;
    Ok(WignerState {
        i,
        j,
        function,
        energy: energy(i, j, params)?,
        params: *params,
    })
}

/// Marginal Wigner function of one subsystem.
#[derive(Debug, Clone)]
pub struct ReducedState {
    pub subsystem: Subsystem,
    pub function: GaussPoly,
    pub lambda: f64,
    pub hbar: f64,
}

impl ReducedState {
    /// (λ/πħ) exp(−λ(x² + p²)/ħ): the reduced ground state with purity
    /// parameter λ in symplectically normalized coordinates.
    pub fn canonical(lambda: f64, hbar: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) || !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::OutOfRange(format!(
                "need 0 < lambda <= 1 and hbar > 0, got {lambda}, {hbar}"
            )));
        }
        let exponent = DMatrix::from_diagonal_element(2, 2, -lambda / hbar);
        let function = GaussPoly::gaussian(PhaseVariables::two(hbar), lambda / (PI * hbar), exponent)?;
        Ok(ReducedState {
            subsystem: Subsystem::One,
            function,
            lambda,
            hbar,
        })
    }
}

/// Closed-form reduced ground state on the kept subsystem's (x, p):
/// (λ/πħ) exp(−(√(1+δ²)/ħmω)(p²/(1+δ²−δη) + m²ω²x²/(1+δ²+δη))).
pub fn reduced_ground_state(params: &ModelParams, subsystem: Subsystem) -> Result<ReducedState> {
    let d = derive(params)?;
    let mw = params.mass * params.omega;
    let root = (1.0 + d.delta * d.delta).sqrt();
    let scale = root / (params.hbar * mw);
    let qx = -scale * mw * mw / x_width_factor(d.delta, d.u);
    let qp = -scale / p_width_factor(d.delta, d.v);
    let exponent = DMatrix::from_row_slice(2, 2, &[qx, 0.0, 0.0, qp]);
    let prefactor = d.lambda / (PI * params.hbar);
    let function = GaussPoly::gaussian(PhaseVariables::two(params.hbar), prefactor, exponent)?;
    Ok(ReducedState {
        subsystem,
        function,
        lambda: d.lambda,
        hbar: params.hbar,
    })
}

/// Reduced state of the ground state (closed form). Excited states are
/// rejected.
pub fn reduce(state: &WignerState, subsystem: Subsystem) -> Result<ReducedState> {
    if !state.is_ground() {
        return Err(Error::Unsupported(format!(
            "closed-form marginal only exists for the ground state, got ({}, {})",
            state.i, state.j
        )));
    }
    reduced_ground_state(&state.params, subsystem)
}

/// Deterministic grid: [`GRID_POINTS`] per axis on ±[`GRID_SIGMAS`] marginal
/// standard deviations of the function's Gaussian.
pub fn sample_grid(f: &GaussPoly) -> Result<Vec<Vec<f64>>> {
    let n = f.vars().n();
    let a = -f.exponent();
    let cov = a
        .try_inverse()
        .ok_or_else(|| Error::Domain("exponent is singular".into()))?
        * 0.5;
    let axes: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let sigma = cov[(i, i)].abs().sqrt();
            (0..GRID_POINTS)
                .map(|k| GRID_SIGMAS * sigma * (2.0 * k as f64 / (GRID_POINTS - 1) as f64 - 1.0))
                .collect()
        })
        .collect();
    let total = GRID_POINTS.pow(n as u32);
    let mut pts = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx;
        let mut z = vec![0.0; n];
        for (i, axis) in axes.iter().enumerate() {
            z[i] = axis[rem % GRID_POINTS];
            rem /= GRID_POINTS;
        }
        pts.push(z);
    }
    Ok(pts)
}

/// Sup-norm residuals of the star-genvalue equation on [`sample_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenvalueResidual {
    /// sup |H ⋆ W − E W|
    pub left: f64,
    /// sup |W ⋆ H − E W|
    pub right: f64,
    /// sup |W| on the same grid
    pub max_abs: f64,
    /// largest |Im|/|Re| coefficient ratio over both products
    pub imag_ratio: f64,
}

impl GenvalueResidual {
    pub fn residual(&self) -> f64 {
        self.left.max(self.right)
    }

    /// residual / max|W|
    pub fn relative(&self) -> f64 {
        self.residual() / self.max_abs
    }
}

pub fn genvalue_residual(state: &WignerState, params: &ModelParams) -> Result<GenvalueResidual> {
    genvalue_residual_with_energy(state, params, state.energy)
}

/// Same as [`genvalue_residual`] with an explicit trial eigenvalue.
pub fn genvalue_residual_with_energy(state: &WignerState, params: &ModelParams, e: f64) -> Result<GenvalueResidual> {
    let vars = phase_variables(params);
    if state.function.vars() != &vars {
        return Err(Error::Domain("state was built for different parameters".into()));
    }
    let h = GaussPoly::polynomial(vars, hamiltonian(params))?;
    let w = &state.function;
    let hw = star_product_poly_left(&h, w)?;
    let wh = star_product_poly_right(w, &h)?;
    let imag_ratio = hw.imag_ratio().max(wh.imag_ratio());
    let target = w.poly().scale(e);
    let rl = w.with_poly(hw.re.poly().sub(&target));
    let rr = w.with_poly(wh.re.poly().sub(&target));
    let mut out = GenvalueResidual {
        left: 0.0,
        right: 0.0,
        max_abs: 0.0,
        imag_ratio,
    };
    for z in sample_grid(w)? {
        out.left = out.left.max(rl.eval(&z).abs());
        out.right = out.right.max(rr.eval(&z).abs());
        out.max_abs = out.max_abs.max(w.eval(&z).abs());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{integrate, marginalize};
    use approx::assert_relative_eq;

    fn natural(mu: f64, nu: f64) -> ModelParams {
        ModelParams::natural(mu, nu).unwrap()
    }

    #[test]
    fn laguerre_matches_closed_forms() {
        for x in [0.0, 0.7, 2.5] {
            assert_relative_eq!(
                laguerre_scalar(2, x),
                0.5 * (x * x - 4.0 * x + 2.0),
                max_relative = 1e-14
            );
            assert_relative_eq!(
                laguerre_scalar(3, x),
                (-x * x * x + 9.0 * x * x - 18.0 * x + 6.0) / 6.0,
                max_relative = 1e-14,
                epsilon = 1e-15
            );
            let p = laguerre(4, &Poly::var(0));
            assert_relative_eq!(
                p.eval(&[x]),
                laguerre_scalar(4, x),
                max_relative = 1e-13,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn plus_minus_reassemble_h() {
        for (mu, nu) in [(0.0, 0.0), (0.3, 0.1), (-0.4, 0.7)] {
            let p = ModelParams::new(1.2, 0.7, 1.9, mu, nu).unwrap();
            let (hp, hm) = hamiltonians_pm(&p).unwrap();
            let sum = hp
                .polynomial(Dim::Four)
                .unwrap()
                .add(&hm.polynomial(Dim::Four).unwrap());
            assert!(sum.sub(&hamiltonian(&p)).max_abs_coeff() < 1e-14);
        }
    }

    #[test]
    fn k_constants_set_the_spectrum() {
        let p = natural(0.3, 0.1);
        let d = derive(&p).unwrap();
        let (hp, hm) = hamiltonians_pm(&p).unwrap();
        assert_relative_eq!(hp.k().abs(), d.h_plus * p.omega / 2.0, max_relative = 1e-14);
        assert_relative_eq!(hm.k().abs(), d.h_minus * p.omega / 2.0, max_relative = 1e-14);
        assert_relative_eq!(
            energy(0, 0, &p).unwrap(),
            (d.h_plus + d.h_minus) * p.omega / 2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn plus_and_minus_star_commute() {
        let p = natural(0.3, 0.1);
        let vars = phase_variables(&p);
        let (hp, hm) = hamiltonians_pm(&p).unwrap();
        let gp = GaussPoly::polynomial(vars, hp.polynomial(Dim::Four).unwrap()).unwrap();
        let gm = GaussPoly::polynomial(vars, hm.polynomial(Dim::Four).unwrap()).unwrap();
        let pm = star_product_poly_left(&gp, &gm).unwrap();
        let mp = star_product_poly_left(&gm, &gp).unwrap();
        assert!(pm.re.folded_poly().sub(&mp.re.folded_poly()).max_abs_coeff() < 1e-10);
        assert!(pm.im.folded_poly().sub(&mp.im.folded_poly()).max_abs_coeff() < 1e-10);
        assert!(mode_basis(&p).is_ok());
    }

    #[test]
    fn literal_arccot_branch_does_not_split_h() {
        // c = ½ arccot(δ) taken literally leaves H₊ and H₋ non-commuting once δ ≠ 0.
        let p = natural(0.3, 0.1);
        let d = derive(&p).unwrap();
        let literal = 0.5 * f64::atan2(1.0, d.delta);
        let (hp, hm) = hamiltonians_pm_at_angle(&p, literal);
        assert!(ModeBasis::new(phase_variables(&p), vec![hp, hm]).is_err());
    }

    #[test]
    fn commutative_ground_state() {
        let p = natural(0.0, 0.0);
        let w = wigner_state(0, 0, &p).unwrap();
        assert_relative_eq!(w.function.prefactor(), 1.0 / (PI * PI), max_relative = 1e-15);
        assert!((w.function.exponent() + DMatrix::<f64>::identity(4, 4)).amax() < 1e-15);
        assert_relative_eq!(w.energy, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn excited_energy_formula() {
        let p = natural(0.2, 0.1);
        let e = energy(1, 0, &p).unwrap();
        assert_relative_eq!(e, 2.0 * 1.0025f64.sqrt() + 0.15, max_relative = 1e-14);
        let split = energy(1, 0, &p).unwrap() - energy(0, 1, &p).unwrap();
        assert_relative_eq!(split, 0.3, max_relative = 1e-13);
    }

    #[test]
    fn degenerate_spectrum_without_deformation() {
        let p = natural(0.0, 0.0);
        for n in 0..5u32 {
            let e0 = energy(n, 0, &p).unwrap();
            for i in 0..=n {
                assert_eq!(energy(i, n - i, &p).unwrap(), e0);
            }
        }
    }

    #[test]
    fn normalization() {
        let p = natural(0.2, 0.1);
        for i in 0..=3 {
            for j in 0..=3 {
                let w = wigner_state(i, j, &p).unwrap();
                assert_relative_eq!(integrate(&w.function).unwrap(), 1.0, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn orthogonality_through_trace() {
        let p = ModelParams::new(1.1, 0.9, 1.3, 0.25, -0.4).unwrap();
        let cell = 4.0 * PI * PI * (p.hbar * p.hbar - p.mu * p.nu);
        let states: Vec<WignerState> = (0..=2)
            .flat_map(|i| (0..=2).map(move |j| (i, j)))
            .map(|(i, j)| wigner_state(i, j, &p).unwrap())
            .collect();
        for a in &states {
            for b in &states {
                let v = integrate(&a.function.mul(&b.function).unwrap()).unwrap() * cell;
                let expect = if (a.i, a.j) == (b.i, b.j) { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-9, "({},{}) x ({},{}) = {v}", a.i, a.j, b.i, b.j);
            }
        }
    }

    #[test]
    fn reduced_state_is_normalized() {
        let p = natural(1.0, 0.0);
        let d = derive(&p).unwrap();
        assert_relative_eq!(d.lambda, (5.0f64 / 6.0).sqrt(), max_relative = 1e-14);
        let r = reduced_ground_state(&p, Subsystem::One).unwrap();
        assert_relative_eq!(r.function.prefactor(), d.lambda / PI, max_relative = 1e-15);
        assert_relative_eq!(integrate(&r.function).unwrap(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn excited_state_is_negative_at_origin() {
        let w = wigner_state(1, 0, &natural(0.2, 0.1)).unwrap();
        assert!(w.function.eval(&[0.0; 4]) < 0.0);
        let g = wigner_state(0, 0, &natural(0.2, 0.1)).unwrap();
        assert!(g.function.eval(&[0.0; 4]) > 0.0);
    }

    #[test]
    fn rejects_large_indices() {
        assert!(matches!(
            wigner_state(13, 0, &natural(0.0, 0.0)),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn ground_state_residual_and_negative_control() {
        let p = natural(0.2, 0.1);
        let w = wigner_state(0, 0, &p).unwrap();
        let r = genvalue_residual(&w, &p).unwrap();
        assert!(r.relative() < 1e-8, "{r:?}");
        assert!(r.imag_ratio < 1e-10);
        let bad = genvalue_residual_with_energy(&w, &p, w.energy + 1.0).unwrap();
        assert!(bad.relative() >= 0.9);
    }

    #[test]
    fn excited_residual() {
        let p = natural(0.2, 0.05);
        let w = wigner_state(2, 1, &p).unwrap();
        let r = genvalue_residual(&w, &p).unwrap();
        assert!(r.relative() < 1e-8, "{r:?}");
    }

    #[test]
    fn reduced_state_commutative() {
        let p = ModelParams::new(0.8, 1.3, 0.6, 0.0, 0.0).unwrap();
        let r = reduced_ground_state(&p, Subsystem::One).unwrap();
        let mw = p.mass * p.omega;
        assert_relative_eq!(r.function.prefactor(), 1.0 / (PI * p.hbar), max_relative = 1e-15);
        assert_relative_eq!(r.function.exponent()[(0, 0)], -mw / p.hbar, max_relative = 1e-15);
        assert_relative_eq!(
            r.function.exponent()[(1, 1)],
            -1.0 / (p.hbar * mw),
            max_relative = 1e-15
        );
    }

    #[test]
    fn reduced_matches_marginal() {
        for (mu, nu) in [(1.0, 0.0), (0.3, -0.6), (-0.5, 0.2)] {
            let p = natural(mu, nu);
            let w = wigner_state(0, 0, &p).unwrap();
            for sub in [Subsystem::One, Subsystem::Two] {
                let closed = reduce(&w, sub).unwrap().function;
                let marg = marginalize(&w.function, sub).unwrap();
                for z in sample_grid(&closed).unwrap() {
                    assert!((closed.eval(&z) - marg.eval(&z)).abs() < 1e-10, "({mu},{nu}) {sub:?}");
                }
            }
        }
        let e = wigner_state(1, 0, &natural(0.1, 0.1)).unwrap();
        assert!(reduce(&e, Subsystem::One).is_err());
    }
}
