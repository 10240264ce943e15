//! The invariant suite behind `ncps verify`.

use serde::Serialize;

use crate::darboux::{build_map, cell_size};
use crate::entropy::{
    mixture_renyi2, renyi_entanglement, renyi_numeric, renyi_total, von_neumann_entanglement, von_neumann_numeric,
};
use crate::error::Result;
use crate::moments::{integrate, marginalize, Subsystem};
use crate::params::{derive, ModelParams};
use crate::starcalc::{gaussian_star, star_exp, star_log_gaussian, Dim, ModeBasis, QuadraticForm};
use crate::wigner::{genvalue_residual_with_energy, reduced_ground_state, sample_grid, wigner_state};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub error: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub params: ModelParams,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Knobs for negative controls.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VerifyOptions {
    /// Relative shift applied to every eigenvalue in the genvalue check.
    pub perturb_energy: f64,
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn push(&mut self, name: impl Into<String>, error: f64, tolerance: f64) {
        // NaN errors fail
        let passed = error <= tolerance;
        self.checks.push(Check {
            name: name.into(),
            passed,
            error,
            tolerance,
        });
    }
}

fn max_abs<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |m, x| {
        if x.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(x.abs())
        }
    })
}

/// Runs every check at `params`. Errors are only returned for invalid
/// parameters; a failing computation is recorded as a failed check.
pub fn run(params: &ModelParams, options: VerifyOptions) -> Result<Report> {
    let d = derive(params)?;
    let mut s = Suite { checks: Vec::new() };
    let cell = cell_size(params)?;

    s.push(
        "params.h_plus_h_minus",
        (d.h_plus * d.h_minus - (params.hbar * params.hbar - params.mu * params.nu)).abs()
            / (params.hbar * params.hbar),
        1e-12,
    );

    let mut genvalue = 0.0f64;
    let mut imag = 0.0f64;
    for i in 0..=2 {
        for j in 0..=2 {
            let err = wigner_state(i, j, params).and_then(|w| {
                let e = w.energy * (1.0 + options.perturb_energy);
                genvalue_residual_with_energy(&w, params, e)
            });
            match err {
                Ok(r) => {
                    genvalue = genvalue.max(r.relative());
                    imag = imag.max(r.imag_ratio);
                }
                Err(_) => genvalue = f64::NAN,
            }
        }
    }
    s.push("wigner.genvalue_residual", genvalue, 1e-8);
    s.push("wigner.star_product_reality", imag, 1e-10);

    let states: Vec<_> = (0..=3)
        .flat_map(|i| (0..=3).map(move |j| (i, j)))
        .filter_map(|(i, j)| wigner_state(i, j, params).ok())
        .collect();
    s.push(
        "wigner.normalization",
        if states.len() == 16 {
            max_abs(
                states
                    .iter()
                    .map(|w| integrate(&w.function).map_or(f64::NAN, |v| v - 1.0)),
            )
        } else {
            f64::NAN
        },
        1e-10,
    );
    let low: Vec<_> = states.iter().filter(|w| w.i <= 2 && w.j <= 2).collect();
    let mut ortho = 0.0f64;
    for a in &low {
        for b in &low {
            let v = a
                .function
                .mul(&b.function)
                .and_then(|f| integrate(&f))
                .map_or(f64::NAN, |v| v * cell);
            let expect = if (a.i, a.j) == (b.i, b.j) { 1.0 } else { 0.0 };
            ortho = max_abs([ortho, v - expect]);
        }
    }
    s.push("wigner.orthogonality", ortho, 1e-9);

    let marginal = (|| -> Result<f64> {
        let w = wigner_state(0, 0, params)?;
        let mut err = 0.0f64;
        for sub in [Subsystem::One, Subsystem::Two] {
            let closed = reduced_ground_state(params, sub)?.function;
            let m = marginalize(&w.function, sub)?;
            for z in sample_grid(&closed)? {
                err = err.max((closed.eval(&z) - m.eval(&z)).abs());
            }
        }
        Ok(err)
    })();
    s.push("wigner.reduced_marginal", marginal.unwrap_or(f64::NAN), 1e-10);

    let (group, roundtrip) = star_exp_laws(params).unwrap_or((f64::NAN, f64::NAN));
    s.push("starcalc.group_law", group, 1e-10);
    s.push("starcalc.log_round_trip", roundtrip, 1e-10);

    let reduced = reduced_ground_state(params, Subsystem::One)?;
    let mut closed_numeric = 0.0f64;
    for alpha in 2..=6 {
        let c = renyi_entanglement(alpha, d.lambda).map(|r| r.value);
        let n = renyi_numeric(&reduced, alpha).map(|r| r.value);
        closed_numeric = match (c, n) {
            (Ok(c), Ok(n)) => max_abs([closed_numeric, c - n]),
            _ => f64::NAN,
        };
    }
    s.push("entropy.renyi_closed_vs_numeric", closed_numeric, 1e-9);
    let vn = match (von_neumann_entanglement(d.lambda), von_neumann_numeric(&reduced)) {
        (Ok(c), Ok(n)) => (c.value - n.value).abs(),
        _ => f64::NAN,
    };
    s.push("entropy.von_neumann_closed_vs_numeric", vn, 1e-9);

    let pure = (|| -> Result<f64> {
        let mut err = 0.0f64;
        for (i, j) in [(0, 0), (1, 1)] {
            err = err.max(renyi_total(&wigner_state(i, j, params)?, 2, params)?.value.abs());
        }
        let a = wigner_state(0, 0, params)?;
        let b = wigner_state(1, 0, params)?;
        let mix = mixture_renyi2(&[(0.5, &a), (0.5, &b)], params)?.value;
        Ok(err.max((mix - std::f64::consts::LN_2).abs()))
    })();
    s.push("entropy.pure_state_and_mixture", pure.unwrap_or(f64::NAN), 1e-9);

    let map = build_map(params)?;
    s.push("darboux.commutators", map.commutator_error(params), 1e-12);
    s.push(
        "darboux.determinant",
        (map.determinant() - (1.0 - params.theta())).abs(),
        1e-12,
    );
    let two_pi_hbar = 2.0 * std::f64::consts::PI * params.hbar;
    s.push(
        "darboux.cell_size",
        (cell - two_pi_hbar * two_pi_hbar * map.determinant()).abs() / cell,
        1e-12,
    );

    let passed = s.checks.iter().all(|c| c.passed);
    Ok(Report {
        params: *params,
        passed,
        checks: s.checks,
    })
}

/// Group law and ln_⋆ round trip for the reduced state's quadratic form.
fn star_exp_laws(params: &ModelParams) -> Result<(f64, f64)> {
    let reduced = reduced_ground_state(params, Subsystem::One)?;
    let form = QuadraticForm::from_matrix_2d(&(-reduced.function.exponent()), params.hbar)?;
    let basis = ModeBasis::single(*reduced.function.vars(), form.clone())?;
    let mut group = 0.0f64;
    let mut roundtrip = 0.0f64;
    for (t1, t2) in [(0.3, -0.7), (-1.1, -0.4), (0.8, 0.6)] {
        let lhs = gaussian_star(&star_exp(&form, t1, Dim::Two)?, &star_exp(&form, t2, Dim::Two)?, &basis)?;
        let rhs = star_exp(&form, t1 + t2, Dim::Two)?;
        group = group.max(lhs.distance(&rhs, 1e-10).unwrap_or(f64::NAN));
        let log = star_log_gaussian(&rhs, &basis)?;
        let expect = form.polynomial(Dim::Two)?.scale(t1 + t2);
        roundtrip = roundtrip
            .max(log.constant.abs())
            .max(log.form_part.poly().sub(&expect).max_abs_coeff());
    }
    Ok((group, roundtrip))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params_pass() {
        let r = run(&ModelParams::default(), VerifyOptions::default()).unwrap();
        assert!(
            r.passed,
            "{:#?}",
            r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
        );
    }

    #[test]
    fn deformed_params_pass() {
        let r = run(
            &ModelParams::new(1.1, 0.8, 1.4, 0.3, -0.2).unwrap(),
            VerifyOptions::default(),
        )
        .unwrap();
        assert!(
            r.passed,
            "{:#?}",
            r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
        );
    }

    #[test]
    fn perturbed_energy_fails_genvalue_only() {
        let r = run(
            &ModelParams::natural(0.2, 0.1).unwrap(),
            VerifyOptions { perturb_energy: 0.01 },
        )
        .unwrap();
        assert!(!r.passed);
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["wigner.genvalue_residual"]);
    }

    #[test]
    fn singular_cell_is_an_error() {
        assert!(run(
            &ModelParams {
                mu: 2.0,
                nu: 1.0,
                ..ModelParams::default()
            },
            VerifyOptions::default()
        )
        .is_err());
    }
}
