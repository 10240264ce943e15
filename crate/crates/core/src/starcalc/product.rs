use std::collections::HashMap;

use super::gauss::{derivative_poly, GaussPoly};
use super::poly::{Exponents, Poly, MAX_VARS};
use super::PRUNE_REL;
use crate::error::{Error, Result};

/// Real and imaginary parts of a star product; both share the right
/// operand's prefactor and exponent.
#[derive(Debug, Clone)]
pub struct SplitGaussPoly {
    pub re: GaussPoly,
    pub im: GaussPoly,
}

impl SplitGaussPoly {
    /// max|Im coeff| / max|Re coeff|.
    pub fn imag_ratio(&self) -> f64 {
        let re = self.re.poly().max_abs_coeff();
        let im = self.im.poly().max_abs_coeff();
        if im == 0.0 {
            0.0
        } else {
            im / re.max(f64::MIN_POSITIVE)
        }
    }

    /// The real part, provided the imaginary part is negligible.
    pub fn into_real(self, tol: f64) -> Result<GaussPoly> {
        let r = self.imag_ratio();
        if r > tol {
            return Err(Error::Consistency(format!(
                "star product has imaginary part (relative {r:e})"
            )));
        }
        Ok(self.re)
    }
}

/// f ⋆ g for a polynomial f (zero exponent) and any g in the class.
pub fn star_product_poly_left(left: &GaussPoly, right: &GaussPoly) -> Result<SplitGaussPoly> {
    if !left.has_zero_exponent() {
        return Err(Error::Unsupported("left factor must be a pure polynomial".into()));
    }
    terminating_product(left, right, 1)
}

/// g ⋆ f for a polynomial f (zero exponent) and any g in the class.
pub fn star_product_poly_right(left: &GaussPoly, right: &GaussPoly) -> Result<SplitGaussPoly> {
    if !right.has_zero_exponent() {
        return Err(Error::Unsupported("right factor must be a pure polynomial".into()));
    }
    terminating_product(right, left, -1)
}

fn factorial(n: u8) -> f64 {
    (1..=n as u32).map(f64::from).product()
}

/// Σ_α (iσ/2)^|α| / α! · ∂^α f · D^α g with D_a = Σ_b Θ_ab ∂_b.
///
/// σ = +1 gives f ⋆ g; σ = −1 gives g ⋆ f.
fn terminating_product(poly_side: &GaussPoly, gauss_side: &GaussPoly, sigma: i32) -> Result<SplitGaussPoly> {
    if poly_side.vars() != gauss_side.vars() {
        return Err(Error::Domain("operands live on different phase spaces".into()));
    }
    let vars = *gauss_side.vars();
    let n = vars.n();
    let theta = vars.poisson_tensor();
    let q = gauss_side.exponent();
    let f = poly_side.folded_poly();
    let maxp = f.max_powers();
    let deg = f.total_degree();

    // Multi-indices bounded by the per-variable powers of f, by total order.
    let mut alphas: Vec<Exponents> = Vec::new();
    let mut cur = [0u8; MAX_VARS];
    loop {
        alphas.push(cur);
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            if cur[i] < maxp[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let order = |a: &Exponents| a.iter().map(|&k| k as u32).sum::<u32>();
    alphas.retain(|a| order(a) <= deg);
    alphas.sort_by_key(|a| (order(a), *a));

    let mut d_memo: HashMap<Exponents, Poly> = HashMap::new();
    d_memo.insert([0; MAX_VARS], gauss_side.poly().clone());

    let mut re = Poly::zero();
    let mut im = Poly::zero();
    for alpha in &alphas {
        let mut df = f.clone();
        for (var, &k) in alpha.iter().enumerate().take(n) {
            for _ in 0..k {
                df = df.derivative(var);
            }
        }
        if df.is_zero() {
            continue;
        }
        let dg = d_power(alpha, &mut d_memo, &theta, q, n);
        if dg.is_zero() {
            continue;
        }
        let ord = order(alpha);
        let alpha_fact: f64 = alpha.iter().map(|&k| factorial(k)).product();
        let mag = 0.5f64.powi(ord as i32) / alpha_fact;
        // (iσ)^ord
        let s = if sigma < 0 && ord % 2 == 1 { -1.0 } else { 1.0 };
        let term = df.mul(&dg);
        match ord % 4 {
            0 => re.add_assign_scaled(&term, mag),
            1 => im.add_assign_scaled(&term, s * mag),
            2 => re.add_assign_scaled(&term, -mag),
            _ => im.add_assign_scaled(&term, -s * mag),
        }
    }
    re.prune(PRUNE_REL);
    im.prune(PRUNE_REL);
    Ok(SplitGaussPoly {
        re: gauss_side.with_poly(re),
        im: gauss_side.with_poly(im),
    })
}

fn d_power(
    alpha: &Exponents,
    memo: &mut HashMap<Exponents, Poly>,
    theta: &nalgebra::DMatrix<f64>,
    q: &nalgebra::DMatrix<f64>,
    n: usize,
) -> Poly {
    if let Some(p) = memo.get(alpha) {
        return p.clone();
    }
    let a = (0..n).find(|&i| alpha[i] > 0).expect("nonzero multi-index");
    let mut beta = *alpha;
    beta[a] -= 1;
    let base = d_power(&beta, memo, theta, q, n);
    let mut out = Poly::zero();
    for b in 0..n {
        let t = theta[(a, b)];
        if t != 0.0 {
            out.add_assign_scaled(&derivative_poly(&base, q, b), t);
        }
    }
    out.prune(PRUNE_REL);
    memo.insert(*alpha, out.clone());
    out
}
