//! Rényi, von Neumann and Tsallis entanglement entropies of the oscillator
//! ground state, in closed form and through star powers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::darboux::cell_size;
use crate::error::{Error, Result};
use crate::moments::integrate;
use crate::params::{ModelParams, LAMBDA_INF};
use crate::starcalc::{star_log_gaussian, star_power, GaussPoly, ModeBasis};
use crate::wigner::{mode_basis, ReducedState, WignerState};

/// Largest n for which the β/γ coefficients are tabulated.
pub const MAX_BETA_GAMMA_ORDER: u32 = 64;

/// Tolerance used when summing Wigner functions of a test mixture.
const MIXTURE_EXPONENT_TOL: f64 = 1e-12;

/// β_n and γ_n as integer coefficient lists in λ² (index k ↦ λ^{2k}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaGamma {
    pub n: u32,
    pub beta: Vec<u64>,
    pub gamma: Vec<u64>,
}

fn horner(coeffs: &[u64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

impl BetaGamma {
    pub fn beta_at(&self, lambda: f64) -> f64 {
        horner(&self.beta, lambda * lambda)
    }

    pub fn gamma_at(&self, lambda: f64) -> f64 {
        horner(&self.gamma, lambda * lambda)
    }

    pub fn beta_sum(&self) -> u64 {
        self.beta.iter().sum()
    }

    pub fn gamma_sum(&self) -> u64 {
        self.gamma.iter().sum()
    }
}

/// β_n = β_{n−1} + γ_{n−1}, γ_n = λ²β_{n−1} + γ_{n−1}, β₁ = γ₁ = 1.
pub fn beta_gamma(n: u32) -> Result<BetaGamma> {
    if n == 0 || n > MAX_BETA_GAMMA_ORDER {
        return Err(Error::OutOfRange(format!(
            "beta/gamma order must be in 1..={MAX_BETA_GAMMA_ORDER}, got {n}"
        )));
    }
    let mut beta = vec![1u64];
    let mut gamma = vec![1u64];
    for _ in 1..n {
        let len = beta.len().max(gamma.len()) + 1;
        let mut nb = vec![0u64; len];
        let mut ng = vec![0u64; len];
        for (k, &b) in beta.iter().enumerate() {
            nb[k] += b;
            ng[k + 1] += b;
        }
        for (k, &g) in gamma.iter().enumerate() {
            nb[k] += g;
            ng[k] += g;
        }
        while nb.last() == Some(&0) {
            nb.pop();
        }
        while ng.last() == Some(&0) {
            ng.pop();
        }
        beta = nb;
        gamma = ng;
    }
    Ok(BetaGamma { n, beta, gamma })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyKind {
    Renyi,
    Tsallis,
    VonNeumann,
}

impl fmt::Display for EntropyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntropyKind::Renyi => "renyi",
            EntropyKind::Tsallis => "tsallis",
            EntropyKind::VonNeumann => "von-neumann",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    StarPowerNumeric,
}

/// One entropy value in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub kind: EntropyKind,
    pub order: u32,
    pub lambda: f64,
    pub value: f64,
    pub method: Method,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > LAMBDA_INF && lambda <= 1.0) {
        return Err(Error::OutOfRange(format!(
            "lambda must lie in (sqrt(3)/3, 1], got {lambda}"
        )));
    }
    Ok(())
}

fn check_integer_order(order: u32, name: &str) -> Result<()> {
    if order < 2 {
        return Err(Error::UnsupportedOrder(format!(
            "{name} order must be an integer >= 2 (use von-neumann for order 1), got {order}"
        )));
    }
    Ok(())
}

/// Validates a user-facing order: integers only, ≥ 1.
pub fn parse_order(order: f64) -> Result<u32> {
    if !(order.is_finite() && order >= 1.0 && order.fract() == 0.0 && order <= MAX_BETA_GAMMA_ORDER as f64) {
        return Err(Error::UnsupportedOrder(format!(
            "unsupported order {order}: only integers 1..={MAX_BETA_GAMMA_ORDER} are supported"
        )));
    }
    Ok(order as u32)
}

fn renyi_value(alpha: u32, lambda: f64) -> Result<f64> {
    let bg = beta_gamma(alpha)?;
    let ratio = bg.beta_at(lambda) / (2.0 * lambda).powi(alpha as i32 - 1);
    Ok(ratio.ln() / (alpha as f64 - 1.0))
}

fn von_neumann_value(lambda: f64) -> f64 {
    if lambda == 1.0 {
        return 0.0;
    }
    let a = (1.0 + lambda) * (1.0 + lambda).ln();
    let b = (1.0 - lambda) * (1.0 - lambda).ln();
    (a - b) / (2.0 * lambda) - (2.0 * lambda).ln()
}

fn tsallis_value(q: u32, lambda: f64) -> Result<f64> {
    let bg = beta_gamma(q)?;
    let trace = (2.0 * lambda).powi(q as i32 - 1) / bg.beta_at(lambda);
    Ok((1.0 - trace) / (q as f64 - 1.0))
}

/// E_α = ln β_α(λ)/(α − 1) − ln 2λ for integer α ≥ 2.
pub fn renyi_entanglement(alpha: u32, lambda: f64) -> Result<EntropyResult> {
    check_integer_order(alpha, "renyi")?;
    check_lambda(lambda)?;
    Ok(EntropyResult {
        kind: EntropyKind::Renyi,
        order: alpha,
        lambda,
        value: renyi_value(alpha, lambda)?,
        method: Method::ClosedForm,
    })
}

/// E₁ = [(1+λ)ln(1+λ) − (1−λ)ln(1−λ)]/2λ − ln 2λ, exactly 0 at λ = 1.
pub fn von_neumann_entanglement(lambda: f64) -> Result<EntropyResult> {
    check_lambda(lambda)?;
    Ok(EntropyResult {
        kind: EntropyKind::VonNeumann,
        order: 1,
        lambda,
        value: von_neumann_value(lambda),
        method: Method::ClosedForm,
    })
}

/// E′_q = [1 − (2λ)^{q−1}/β_q(λ)]/(q − 1); q = 1 is the von Neumann value.
pub fn tsallis_entanglement(q: u32, lambda: f64) -> Result<EntropyResult> {
    if q == 1 {
        let r = von_neumann_entanglement(lambda)?;
        return Ok(EntropyResult {
            kind: EntropyKind::Tsallis,
            ..r
        });
    }
    check_integer_order(q, "tsallis")?;
    check_lambda(lambda)?;
    Ok(EntropyResult {
        kind: EntropyKind::Tsallis,
        order: q,
        lambda,
        value: tsallis_value(q, lambda)?,
        method: Method::ClosedForm,
    })
}

/// Dispatches on kind and order to the closed forms.
pub fn entanglement(kind: EntropyKind, order: u32, lambda: f64) -> Result<EntropyResult> {
    match (kind, order) {
        (EntropyKind::VonNeumann, 1) | (EntropyKind::Renyi, 1) => {
            let r = von_neumann_entanglement(lambda)?;
            Ok(EntropyResult { kind, ..r })
        }
        (EntropyKind::VonNeumann, _) => Err(Error::UnsupportedOrder(format!(
            "von-neumann entropy has order 1, got {order}"
        ))),
        (EntropyKind::Renyi, a) => renyi_entanglement(a, lambda),
        (EntropyKind::Tsallis, q) => tsallis_entanglement(q, lambda),
    }
}

/// (2πħ)^{n−1} ∫ (W⋆…⋆W) for a reduced Gaussian, i.e. Tr ρⁿ.
pub fn reduced_trace_power(reduced: &ReducedState, n: u32) -> Result<f64> {
    let basis = ModeBasis::infer_2d(&reduced.function)?;
    let w = star_power(&reduced.function, n, &basis)?;
    let cell = 2.0 * std::f64::consts::PI * reduced.hbar;
    Ok(cell.powi(n as i32 - 1) * integrate(&w)?)
}

/// ln[(2πħ)^{α−1} ∫ W^α_⋆]/(1 − α) through star powers and exact moments.
pub fn renyi_numeric(reduced: &ReducedState, alpha: u32) -> Result<EntropyResult> {
    check_integer_order(alpha, "renyi")?;
    let trace = reduced_trace_power(reduced, alpha)?;
    Ok(EntropyResult {
        kind: EntropyKind::Renyi,
        order: alpha,
        lambda: reduced.lambda,
        value: trace.ln() / (1.0 - alpha as f64),
        method: Method::StarPowerNumeric,
    })
}

/// [1 − (2πħ)^{q−1} ∫ W^q_⋆]/(q − 1) through star powers.
pub fn tsallis_numeric(reduced: &ReducedState, q: u32) -> Result<EntropyResult> {
    if q == 1 {
        let r = von_neumann_numeric(reduced)?;
        return Ok(EntropyResult {
            kind: EntropyKind::Tsallis,
            ..r
        });
    }
    check_integer_order(q, "tsallis")?;
    let trace = reduced_trace_power(reduced, q)?;
    Ok(EntropyResult {
        kind: EntropyKind::Tsallis,
        order: q,
        lambda: reduced.lambda,
        value: (1.0 - trace) / (q as f64 - 1.0),
        method: Method::StarPowerNumeric,
    })
}

/// −∫ W · ln_⋆(2πħ W) through the star logarithm. The pure point λ = 1 is
/// returned as 0 without entering the logarithm.
pub fn von_neumann_numeric(reduced: &ReducedState) -> Result<EntropyResult> {
    let value = if reduced.lambda == 1.0 {
        0.0
    } else {
        let basis = ModeBasis::infer_2d(&reduced.function)?;
        let rho = reduced.function.scale(2.0 * std::f64::consts::PI * reduced.hbar);
        let log = star_log_gaussian(&rho, &basis)?;
        let mass = integrate(&reduced.function)?;
        let mean = integrate(&reduced.function.mul(&log.form_part)?)?;
        -(log.constant * mass + mean)
    };
    Ok(EntropyResult {
        kind: EntropyKind::VonNeumann,
        order: 1,
        lambda: reduced.lambda,
        value,
        method: Method::StarPowerNumeric,
    })
}

fn total_result(order: u32, trace: f64) -> EntropyResult {
    EntropyResult {
        kind: EntropyKind::Renyi,
        order,
        lambda: f64::NAN,
        value: trace.ln() / (1.0 - order as f64),
        method: Method::StarPowerNumeric,
    }
}

/// Rényi entropy of the full four-variable state,
/// ln[(4π²(ħ² − μν))^{α−1} ∫ W^α_⋆]/(1 − α).
///
/// The ground state goes through Gaussian star powers for any α ≥ 2; excited
/// states are supported at α = 2 through ∫ W ⋆ W = ∫ W².
pub fn renyi_total(state: &WignerState, alpha: u32, params: &ModelParams) -> Result<EntropyResult> {
    check_integer_order(alpha, "renyi")?;
    let cell = cell_size(params)?;
    let trace = if state.is_ground() {
        let basis = mode_basis(params)?;
        cell.powi(alpha as i32 - 1) * integrate(&star_power(&state.function, alpha, &basis)?)?
    } else if alpha == 2 {
        cell * integrate(&state.function.mul(&state.function)?)?
    } else {
        return Err(Error::Unsupported(format!(
            "total Renyi entropy of excited state ({}, {}) is only available at order 2",
            state.i, state.j
        )));
    };
    Ok(total_result(alpha, trace))
}

/// Order-2 Rényi entropy of Σ w_k W_k, a finite mixture of eigenfunctions.
pub fn mixture_renyi2(components: &[(f64, &WignerState)], params: &ModelParams) -> Result<EntropyResult> {
    let (first, rest) = components
        .split_first()
        .ok_or_else(|| Error::Domain("mixture needs at least one component".into()))?;
    let mut f: GaussPoly = first.1.function.scale(first.0);
    for (w, s) in rest {
        f = f.add_same_exponent(&s.function.scale(*w), MIXTURE_EXPONENT_TOL)?;
    }
    let trace = cell_size(params)? * integrate(&f.mul(&f)?)?;
    Ok(total_result(2, trace))
}

/// λ on the ν = 0 line as a function of u = mωμ/ħ.
pub fn lambda_nu_zero(u: f64) -> f64 {
    ((4.0 + u * u) / (4.0 + 2.0 * u * u)).sqrt()
}

/// Explicit von Neumann entropy on the ν = 0 line.
pub fn e1_nu_zero(u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let u2 = u * u;
    let r = ((4.0 + 2.0 * u2) / (4.0 + u2)).sqrt();
    let s4 = (4.0 + u2).sqrt();
    let s42 = (4.0 + 2.0 * u2).sqrt();
    0.5 * (1.0 - r) * u2.ln() - (2.0 * s4).ln() + r * (s4 + s42).ln()
}

/// Open upper bound of E_α (α = 1 for von Neumann) as λ → √3/3.
pub fn renyi_supremum(alpha: u32) -> Result<f64> {
    if alpha == 1 {
        return Ok(von_neumann_value(LAMBDA_INF));
    }
    renyi_value(alpha, LAMBDA_INF)
}

/// Open upper bound of E′_q as λ → √3/3.
pub fn tsallis_supremum(q: u32) -> Result<f64> {
    if q == 1 {
        return Ok(von_neumann_value(LAMBDA_INF));
    }
    tsallis_value(q, LAMBDA_INF)
}

/// Open upper bound of the ν = 0 von Neumann entropy as |u| → ∞.
pub fn e1_nu_zero_supremum() -> f64 {
    std::f64::consts::SQRT_2 * std::f64::consts::SQRT_2.ln_1p() - std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::Subsystem;
    use crate::params::derive;
    use crate::wigner::{reduced_ground_state, wigner_state};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn closed_beta(n: u32, l: f64) -> f64 {
        ((1.0 + l).powi(n as i32) - (1.0 - l).powi(n as i32)) / (2.0 * l)
    }

    fn closed_gamma(n: u32, l: f64) -> f64 {
        ((1.0 + l).powi(n as i32) + (1.0 - l).powi(n as i32)) / 2.0
    }

    fn lambda_grid(points: usize) -> Vec<f64> {
        (1..=points)
            .map(|k| LAMBDA_INF + (1.0 - LAMBDA_INF) * k as f64 / points as f64)
            .collect()
    }

    #[test]
    fn table_lines() {
        let bg = beta_gamma(2).unwrap();
        assert_eq!((bg.beta, bg.gamma), (vec![2], vec![1, 1]));
        let bg = beta_gamma(5).unwrap();
        assert_eq!((bg.beta, bg.gamma), (vec![5, 10, 1], vec![1, 10, 5]));
        let bg = beta_gamma(6).unwrap();
        assert_eq!(bg.beta, vec![6, 20, 6]);
        assert_eq!(bg.beta_sum(), 32);
        assert!(beta_gamma(0).is_err());
    }

    #[test]
    fn coefficient_sums() {
        for n in 1..=12 {
            let bg = beta_gamma(n).unwrap();
            assert_eq!(bg.beta_sum(), 1 << (n - 1));
            assert_eq!(bg.gamma_sum(), 1 << (n - 1));
        }
    }

    #[test]
    fn matches_binomial_closed_forms() {
        for n in 1..=20 {
            let bg = beta_gamma(n).unwrap();
            for l in [0.3, 0.6, 0.9, 1.0] {
                assert_relative_eq!(bg.beta_at(l), closed_beta(n, l), max_relative = 1e-12);
                assert_relative_eq!(bg.gamma_at(l), closed_gamma(n, l), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn renyi_examples() {
        assert_eq!(renyi_entanglement(2, 1.0).unwrap().value, 0.0);
        assert!((renyi_supremum(2).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-12);
        assert!((renyi_supremum(3).unwrap() - 0.5 * 2.5f64.ln()).abs() < 1e-12);
        assert!((renyi_supremum(4).unwrap() - (2f64.ln() / 3.0 + 3f64.ln() / 6.0)).abs() < 1e-12);
        assert!(matches!(renyi_entanglement(1, 0.9), Err(Error::UnsupportedOrder(_))));
        assert!(matches!(renyi_entanglement(2, 0.5), Err(Error::OutOfRange(_))));
        assert!(renyi_entanglement(2, 1.0 + 1e-12).is_err());
    }

    #[test]
    fn von_neumann_examples() {
        assert_eq!(von_neumann_entanglement(1.0).unwrap().value, 0.0);
        let sup = 3f64.sqrt() / 2.0 * (2.0 + 3f64.sqrt()).ln() - 0.5 * 2f64.ln();
        assert!((renyi_supremum(1).unwrap() - sup).abs() < 1e-12);
        let l = (5.0f64 / 6.0).sqrt();
        let v = von_neumann_entanglement(l).unwrap().value;
        assert!((v - 0.194_032_359_560_980_1).abs() < 1e-13, "{v}");
        assert_relative_eq!(v, e1_nu_zero(1.0), max_relative = 1e-13);
    }

    #[test]
    fn tsallis_examples() {
        assert_eq!(tsallis_entanglement(2, 1.0).unwrap().value, 0.0);
        assert_relative_eq!(tsallis_entanglement(2, 0.9).unwrap().value, 0.1, max_relative = 1e-14);
        assert_relative_eq!(tsallis_supremum(3).unwrap(), 0.3, max_relative = 1e-13);
    }

    #[test]
    fn order_parsing() {
        assert_eq!(parse_order(2.0).unwrap(), 2);
        assert!(matches!(parse_order(2.5), Err(Error::UnsupportedOrder(_))));
        assert!(matches!(parse_order(0.0), Err(Error::UnsupportedOrder(_))));
        assert!(matches!(parse_order(f64::NAN), Err(Error::UnsupportedOrder(_))));
    }

    #[test]
    fn nu_zero_examples() {
        assert_eq!(e1_nu_zero(0.0), 0.0);
        assert!((e1_nu_zero(1e6) - e1_nu_zero_supremum()).abs() < 1e-3);
        assert!((e1_nu_zero_supremum() - 0.553).abs() < 5e-4);
        for u in [0.3, -2.0, 7.5] {
            let d = derive(&ModelParams::natural(u, 0.0).unwrap()).unwrap();
            assert_relative_eq!(d.lambda, lambda_nu_zero(u), max_relative = 1e-14);
            let vn = von_neumann_entanglement(d.lambda).unwrap().value;
            assert_relative_eq!(e1_nu_zero(u), vn, max_relative = 1e-11);
        }
    }

    #[test]
    fn numeric_matches_closed_form() {
        for l in (0..9).map(|k| 0.6 + 0.05 * k as f64) {
            let r = ReducedState::canonical(l, 1.0).unwrap();
            for alpha in 2..=6 {
                let n = renyi_numeric(&r, alpha).unwrap().value;
                let c = renyi_entanglement(alpha, l).unwrap().value;
                assert!((n - c).abs() < 1e-9, "alpha {alpha}, lambda {l}: {n} vs {c}");
            }
            assert!((renyi_entanglement(2, l).unwrap().value + l.ln()).abs() < 1e-12);
            assert!((renyi_numeric(&r, 2).unwrap().value + l.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn physical_reduced_state_numeric() {
        let p = ModelParams::natural(1.0, 0.0).unwrap();
        let r = reduced_ground_state(&p, Subsystem::One).unwrap();
        let n = renyi_numeric(&r, 3).unwrap();
        let c = renyi_entanglement(3, r.lambda).unwrap();
        assert!((n.value - c.value).abs() < 1e-9);
        let vn = von_neumann_numeric(&r).unwrap().value;
        assert!((vn - von_neumann_entanglement(r.lambda).unwrap().value).abs() < 1e-10);
        let t = tsallis_numeric(&r, 2).unwrap().value;
        assert!((t - tsallis_entanglement(2, r.lambda).unwrap().value).abs() < 1e-10);
        let other = reduced_ground_state(&p, Subsystem::Two).unwrap();
        assert_eq!(renyi_numeric(&other, 3).unwrap().value, n.value);
    }

    #[test]
    fn von_neumann_numeric_on_grid() {
        for l in lambda_grid(9) {
            let r = ReducedState::canonical(l, 0.7).unwrap();
            let n = von_neumann_numeric(&r).unwrap().value;
            assert!(
                (n - von_neumann_entanglement(l).unwrap().value).abs() < 1e-10,
                "lambda {l}"
            );
        }
    }

    #[test]
    fn pure_states_have_zero_total_entropy() {
        for (mu, nu) in [(0.0, 0.0), (0.2, 0.1), (1.0, -0.5)] {
            let p = ModelParams::natural(mu, nu).unwrap();
            for (i, j) in [(0, 0), (1, 1)] {
                let w = wigner_state(i, j, &p).unwrap();
                let v = renyi_total(&w, 2, &p).unwrap().value;
                assert!(v.abs() < 1e-9, "({i},{j}) at ({mu},{nu}): {v}");
            }
            let g = wigner_state(0, 0, &p).unwrap();
            assert!(renyi_total(&g, 4, &p).unwrap().value.abs() < 1e-9);
        }
        let p = ModelParams::natural(0.2, 0.1).unwrap();
        let e = wigner_state(1, 0, &p).unwrap();
        assert!(matches!(renyi_total(&e, 3, &p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn even_mixture_has_ln2() {
        let p = ModelParams::natural(0.2, 0.1).unwrap();
        let a = wigner_state(0, 0, &p).unwrap();
        let b = wigner_state(1, 0, &p).unwrap();
        let v = mixture_renyi2(&[(0.5, &a), (0.5, &b)], &p).unwrap().value;
        assert!((v - 2f64.ln()).abs() < 1e-9, "{v}");
    }

    #[test]
    fn vanishing_on_special_line() {
        for k in 0..20 {
            let mu = -2.0 + 0.2 * k as f64;
            let mw = 1.3 * 0.8;
            let Ok(p) = ModelParams::new(1.0, 1.3, 0.8, mu, mw * mw * mu) else {
                continue;
            };
            let l = derive(&p).unwrap().lambda;
            assert_eq!(l, 1.0);
            assert_eq!(von_neumann_entanglement(l).unwrap().value, 0.0);
            for a in 2..=4 {
                assert_eq!(renyi_entanglement(a, l).unwrap().value, 0.0);
            }
        }
    }

    #[test]
    fn ordering_and_bounds_on_grid() {
        for l in lambda_grid(50) {
            let e1 = von_neumann_entanglement(l).unwrap().value;
            let e: Vec<f64> = (2..=6).map(|a| renyi_entanglement(a, l).unwrap().value).collect();
            let strict = l < 1.0;
            let chain = [e1, e[0], e[1], e[2]];
            for w in chain.windows(2) {
                if strict {
                    assert!(w[0] > w[1], "lambda {l}: {chain:?}");
                } else {
                    assert_eq!(w[0], w[1]);
                }
            }
            for (k, &v) in e.iter().enumerate() {
                assert!((0.0..1.0).contains(&v), "alpha {} lambda {l}: {v}", k + 2);
            }
            for q in 2..=4 {
                let t = tsallis_entanglement(q, l).unwrap().value;
                let r = e[q as usize - 2];
                if strict {
                    assert!(r > t);
                } else {
                    assert_eq!(r, t);
                }
            }
        }
    }

    #[test]
    fn strictly_decreasing_in_lambda() {
        let grid = lambda_grid(50);
        for pair in grid.windows(2) {
            assert!(
                von_neumann_entanglement(pair[0]).unwrap().value > von_neumann_entanglement(pair[1]).unwrap().value
            );
            for a in 2..=6 {
                assert!(renyi_entanglement(a, pair[0]).unwrap().value > renyi_entanglement(a, pair[1]).unwrap().value);
            }
        }
    }

    #[test]
    fn serializes_with_kebab_case() {
        let r = von_neumann_entanglement(1.0).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(
            s.contains("\"kind\":\"von-neumann\"") && s.contains("\"method\":\"closed-form\""),
            "{s}"
        );
        let back: EntropyResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    proptest! {
        #[test]
        fn beta_bounds(n in 1u32..=20, l in 0.01f64..=1.0) {
            let b = beta_gamma(n).unwrap().beta_at(l);
            let lo = (2.0 * l).powi(n as i32 - 1);
            let hi = 2f64.powi(n as i32 - 1);
            prop_assert!(b >= lo * (1.0 - 1e-12) && b <= hi * (1.0 + 1e-12));
        }

        #[test]
        fn recurrence_holds_pointwise(n in 2u32..=30, l in 0.0f64..=1.0) {
            let cur = beta_gamma(n).unwrap();
            let prev = beta_gamma(n - 1).unwrap();
            let (b, g) = (prev.beta_at(l), prev.gamma_at(l));
            prop_assert!((cur.beta_at(l) - (b + g)).abs() <= 1e-12 * cur.beta_at(l));
            prop_assert!((cur.gamma_at(l) - (l * l * b + g)).abs() <= 1e-12 * cur.gamma_at(l));
        }

        #[test]
        fn ordering_at_random_lambda(l in (LAMBDA_INF + 1e-9)..1.0f64) {
            let e1 = von_neumann_entanglement(l).unwrap().value;
            let mut prev = e1;
            for a in 2..=6 {
                let v = renyi_entanglement(a, l).unwrap().value;
                prop_assert!(v < prev && v >= 0.0);
                prev = v;
            }
            prop_assert!(e1 < 1.0);
        }

        #[test]
        fn subsystems_agree(mu in -3.0f64..3.0, nu in -3.0f64..3.0) {
            prop_assume!((mu * nu).abs() < 0.9);
            let p = ModelParams::natural(mu, nu).unwrap();
            let a = reduced_ground_state(&p, Subsystem::One).unwrap();
            let b = reduced_ground_state(&p, Subsystem::Two).unwrap();
            prop_assert_eq!(a.function.prefactor(), b.function.prefactor());
            prop_assert_eq!(a.function.exponent(), b.function.exponent());
        }
    }
}
