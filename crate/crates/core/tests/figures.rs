use std::time::{Duration, Instant};

use ncps::entropy::{renyi_supremum, tsallis_supremum};
use ncps::figures::{generate, FigureSpec};

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn all_figures_fast_and_deterministic() {
    for id in 1..=5 {
        let spec = FigureSpec::default_for(id).unwrap();
        let start = Instant::now();
        let a = generate(&spec).unwrap();
        assert!(start.elapsed() < Duration::from_secs(10), "figure {id}");
        assert_eq!(a, generate(&spec).unwrap(), "figure {id}");
    }
}

#[test]
fn surface_shapes_and_masks() {
    for id in [1, 2] {
        let csv = generate(&FigureSpec::default_for(id).unwrap()).unwrap();
        assert!(csv.starts_with("a,b,E1\n"));
        let r = rows(&csv);
        assert_eq!(r.len(), 101 * 101);
        for row in &r {
            let (a, b) = (num(&row[0]), num(&row[1]));
            let inside = if id == 1 { (a * b).abs() < 1.0 } else { b.abs() < 1.0 };
            assert_eq!(row[2].is_empty(), !inside, "figure {id} at ({a}, {b})");
            if inside {
                assert!((0.0..1.0).contains(&num(&row[2])));
            }
        }
    }
}

#[test]
fn lambda_figures_endpoints() {
    let r3 = rows(&generate(&FigureSpec::default_for(3).unwrap()).unwrap());
    let first = &r3[0];
    assert_eq!(first[0], "0.578");
    for (k, expect) in [0.794, 0.549, 0.458, 0.414].iter().enumerate() {
        assert!((num(&first[k + 1]) - expect).abs() < 2e-3, "E{}", k + 1);
        let sup = renyi_supremum(k as u32 + 1).unwrap();
        assert!(num(&first[k + 1]) < sup);
    }
    assert_eq!(r3.last().unwrap().join(","), "1.0,0,0,0,0");
    let r5 = rows(&generate(&FigureSpec::default_for(5).unwrap()).unwrap());
    assert_eq!(r5.last().unwrap().join(","), "1.0,0,0,0,0");
    for q in 1..=4u32 {
        assert!(num(&r5[0][q as usize]) < tsallis_supremum(q).unwrap());
    }
    assert_eq!(r3.len(), 401);
}

#[test]
fn nu_zero_figure_grows_with_abs_u() {
    let csv = generate(&FigureSpec::default_for(4).unwrap()).unwrap();
    assert!(csv.starts_with("u,E1\n"));
    let r: Vec<(f64, f64)> = rows(&csv).iter().map(|x| (num(&x[0]), num(&x[1]))).collect();
    let mid = r.iter().position(|p| p.0 == 0.0).unwrap();
    assert_eq!(r[mid].1, 0.0);
    for k in mid..r.len() - 1 {
        assert!(r[k + 1].1 >= r[k].1);
    }
    for k in 1..=mid {
        assert!(r[k - 1].1 >= r[k].1);
    }
}
