//! Spectra of small fixtures, with masses checked against a hull and
//! shoelace area computed here from the exponents alone.

use num_rational::Rational64;

use milnor_core::pipeline::{analyze_laurent, AnalyzeOptions, Gate};
use milnor_core::spectrum::SpectrumPoly;
use milnor_core::LaurentPoly;

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Twice the area of the convex hull of `pts` together with the origin.
fn doubled_hull_area(mut pts: Vec<(i64, i64)>) -> i64 {
    pts.push((0, 0));
    pts.sort();
    pts.dedup();
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let hull: Vec<_> = lower.into_iter().chain(upper).collect();
    let n = hull.len();
    (0..n)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<i64>()
        .abs()
}

fn sp(terms: &[(i64, i64, i64)]) -> SpectrumPoly {
    SpectrumPoly::from_terms(terms.iter().map(|&(n, d, m)| (Rational64::new(n, d), m)))
}

fn spectrum(text: &str, vars: &[&str]) -> SpectrumPoly {
    let f = LaurentPoly::parse(text, vars).unwrap();
    let r = analyze_laurent(&f, &AnalyzeOptions::default()).unwrap();
    assert_eq!(r.gate, Gate::Open, "{text}");
    let s = r.spectrum.unwrap();
    assert!(!s.is_partial(), "{text}");
    s.value
}

fn plane_mass(text: &str, exps: &[(i64, i64)]) {
    let s = spectrum(text, &["x", "y"]);
    assert_eq!(s.mass(), -doubled_hull_area(exps.to_vec()), "{text}: {s}");
}

#[test]
fn one_variable() {
    assert_eq!(spectrum("x + x^-1", &["x"]), sp(&[(0, 1, 2)]));
    assert_eq!(spectrum("x^3 + x^-2", &["x"]).mass(), 5);
}

#[test]
fn mirror() {
    assert_eq!(
        spectrum("x + y + x^-1*y^-1", &["x", "y"]),
        sp(&[(0, 1, -5), (1, 1, 2)])
    );
    plane_mass("x + y + x^-1*y^-1", &[(1, 0), (0, 1), (-1, -1)]);
}

#[test]
fn skew_triangle() {
    plane_mass("x + y + x^-2*y^-1", &[(1, 0), (0, 1), (-2, -1)]);
    assert_eq!(doubled_hull_area(vec![(1, 0), (0, 1), (-2, -1)]), 4);
}

#[test]
fn quadrilaterals() {
    plane_mass("x + y + x^-1 + y^-1", &[(1, 0), (0, 1), (-1, 0), (0, -1)]);
    plane_mass(
        "x + 3*y + x^-1*y^2 + x^-1*y^-1",
        &[(1, 0), (0, 1), (-1, 2), (-1, -1)],
    );
    plane_mass(
        "x*y + x^-1 + y^-1 + 2*x",
        &[(1, 1), (-1, 0), (0, -1), (1, 0)],
    );
}
