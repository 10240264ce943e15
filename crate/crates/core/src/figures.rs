//! Deterministic CSV data for the five entropy figures.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::entropy::{e1_nu_zero, renyi_entanglement, tsallis_entanglement, von_neumann_entanglement};
use crate::error::{Error, Result};
use crate::params::{lambda_from_theta, lambda_from_uv};

/// Significant digits of every number written to a figure CSV.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Lower end of the λ axis in figures 3 and 5.
pub const LAMBDA_AXIS_MIN: f64 = 0.578;

/// Which figure, and the grid it is sampled on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureSpec {
    pub id: u8,
    /// Points per axis.
    pub grid: usize,
    pub a_range: (f64, f64),
    /// Second axis, only used by the surface figures 1 and 2.
    pub b_range: (f64, f64),
}

impl FigureSpec {
    /// Default axes:
    /// 1: E₁ over (u, v) ∈ [−5, 5]², 101 × 101;
    /// 2: E₁ over (δ², θ) ∈ [0, 10] × [−1, 1], 101 × 101;
    /// 3: Rényi E₁…E₄ over λ ∈ [0.578, 1], 401 points;
    /// 4: E₁ on ν = 0 over u ∈ [−10, 10], 401 points;
    /// 5: Tsallis E′₁…E′₄ over λ ∈ [0.578, 1], 401 points.
    pub fn default_for(id: u8) -> Result<Self> {
        let (grid, a_range, b_range) = match id {
            1 => (101, (-5.0, 5.0), (-5.0, 5.0)),
            2 => (101, (0.0, 10.0), (-1.0, 1.0)),
            3 | 5 => (401, (LAMBDA_AXIS_MIN, 1.0), (0.0, 0.0)),
            4 => (401, (-10.0, 10.0), (0.0, 0.0)),
            _ => return Err(Error::Unsupported(format!("unknown figure id {id}; expected 1-5"))),
        };
        Ok(FigureSpec {
            id,
            grid,
            a_range,
            b_range,
        })
    }

    pub fn with_grid(self, grid: usize) -> Result<Self> {
        if grid < 2 {
            return Err(Error::OutOfRange(format!("grid needs at least 2 points, got {grid}")));
        }
        Ok(FigureSpec { grid, ..self })
    }

    pub fn header(&self) -> &'static str {
        match self.id {
            1 | 2 => "a,b,E1",
            3 => "lambda,E1,E2,E3,E4",
            4 => "u,E1",
            _ => "lambda,Eq1,Eq2,Eq3,Eq4",
        }
    }
}

/// n points from lo to hi; the last point is exactly hi.
pub fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            if k + 1 == n {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Nine significant digits, `.` separator, no exponent for 1e−4 ≤ |x| < 1e9.
/// Exact zero prints as `0`; other integral values keep one decimal (`1.0`).
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    if !(-4..9).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    }
    let (int_part, frac_part) = if exp >= 0 {
        let split = exp as usize + 1;
        (digits[..split].to_string(), digits[split..].to_string())
    } else {
        (
            "0".to_string(),
            format!("{}{}", "0".repeat((-exp - 1) as usize), digits),
        )
    };
    let frac = frac_part.trim_end_matches('0');
    let frac = if frac.is_empty() { "0" } else { frac };
    format!("{}{int_part}.{frac}", if negative { "-" } else { "" })
}

fn cell(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

fn e1_of(lambda: Result<f64>) -> Option<f64> {
    lambda.and_then(von_neumann_entanglement).ok().map(|r| r.value)
}

fn surface_row(id: u8, a: f64, b: f64) -> String {
    let lambda = if id == 1 {
        lambda_from_uv(a, b)
    } else {
        lambda_from_theta(a, b)
    };
    format!("{},{},{}", format_number(a), format_number(b), cell(e1_of(lambda)))
}

fn lambda_row(id: u8, lambda: f64) -> Result<String> {
    let mut row = format_number(lambda);
    for order in 1..=4u32 {
        let v = match (id, order) {
            (3, 1) => von_neumann_entanglement(lambda)?.value,
            (3, a) => renyi_entanglement(a, lambda)?.value,
            (_, q) => tsallis_entanglement(q, lambda)?.value,
        };
        write!(row, ",{}", format_number(v)).expect("write to String");
    }
    Ok(row)
}

/// The full CSV text, header included, rows in grid order.
pub fn generate(spec: &FigureSpec) -> Result<String> {
    let a = axis(spec.a_range.0, spec.a_range.1, spec.grid);
    let rows: Vec<String> = match spec.id {
        1 | 2 => {
            let b = axis(spec.b_range.0, spec.b_range.1, spec.grid);
            a.par_iter()
                .flat_map_iter(|&x| b.iter().map(move |&y| surface_row(spec.id, x, y)))
                .collect()
        }
        3 | 5 => a.par_iter().map(|&l| lambda_row(spec.id, l)).collect::<Result<_>>()?,
        4 => a
            .par_iter()
            .map(|&u| format!("{},{}", format_number(u), format_number(e1_nu_zero(u))))
            .collect(),
        id => return Err(Error::Unsupported(format!("unknown figure id {id}; expected 1-5"))),
    };
    let mut out = String::with_capacity(rows.iter().map(|r| r.len() + 1).sum::<usize>() + 32);
    out.push_str(spec.header());
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}
