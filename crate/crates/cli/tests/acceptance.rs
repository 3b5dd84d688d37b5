//! Acceptance run: one PASS/FAIL line per criterion, each checked against
//! an oracle written here rather than taken from the library.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use milnor_core::cone::{self, ChiConvention};
use milnor_core::motivic::{
    assemble_s_infinity, fiber_class, reduce_vertex_fiber, Cell, ClassExpr, EdgeOptions, Generator,
};
use milnor_core::pipeline::{
    analyze_affine, analyze_laurent, calibration_suite, AnalyzeOptions, Gate,
};
use milnor_core::spectrum::{euler_specialization, sp_of_class, SpectrumPoly};
use milnor_core::{newton_polytope_at_infinity, ExponentVector, Face, LaurentPoly, Polytope};

type Outcome = Result<String, String>;

fn names(d: usize) -> Vec<String> {
    ["x", "y", "z"][..d].iter().map(|s| s.to_string()).collect()
}

fn random_poly(rng: &mut ChaCha8Rng, d: usize, commode: bool) -> LaurentPoly {
    let mut terms = BTreeMap::new();
    if commode {
        for i in 0..d {
            for s in [1, -1] {
                let mut e = vec![0; d];
                e[i] = s * rng.gen_range(1..=2);
                terms.insert(e, rng.gen_range(1..=3));
            }
        }
    }
    for _ in 0..rng.gen_range(2..=5) {
        let e: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
        let c = if rng.gen_bool(0.5) {
            rng.gen_range(1..=5)
        } else {
            -rng.gen_range(1..=5)
        };
        terms.insert(e, c);
    }
    LaurentPoly::from_terms(
        names(d),
        terms
            .into_iter()
            .map(|(e, c)| (ExponentVector::new(e), BigRational::from_integer(c.into()))),
    )
    .unwrap()
}

fn criterion_chi_commode() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut polytopes, mut faces, mut flagged) = (0, 0, 0);
    while polytopes < 24 {
        let d = 2 + polytopes % 2;
        let f = random_poly(&mut rng, d, true);
        let poly = newton_polytope_at_infinity(&f).unwrap();
        if !poly.is_commode() {
            continue;
        }
        polytopes += 1;
        for face in poly.face_lattice().faces_gamma() {
            let closed = cone::chi_commode(face, &poly).map_err(|e| e.to_string())?;
            let nc = cone::normal_cone(face, &poly).map_err(|e| e.to_string())?;
            let value = cone::euler_compact(&nc).map_err(|e| e.to_string())?;
            // an open cone of dimension k has compactly supported χ = (-1)^k
            let expected = if (d - face.dim) % 2 == 0 { 1 } else { -1 };
            if face.in_coordinate_hyperplane {
                if closed != value {
                    flagged += 1;
                }
                continue;
            }
            faces += 1;
            if closed != value || value != expected || nc.dim() != d - face.dim {
                return Err(format!(
                    "{f}: face {:?} closed {closed} cone {value}",
                    face.vertices
                ));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 10.0 {
        return Err(format!("took {secs:.1}s"));
    }
    Ok(format!(
        "{polytopes} commode polytopes, {faces} faces agree; {flagged} coordinate-hyperplane faces flagged; {secs:.2}s"
    ))
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn doubled_hull_area(mut pts: Vec<(i64, i64)>) -> i64 {
    pts.push((0, 0));
    pts.sort();
    pts.dedup();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let seq: Vec<_> = if pass == 0 {
            pts.clone()
        } else {
            pts.iter().rev().copied().collect()
        };
        for p in seq {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let n = hull.len();
    (0..n)
        .map(|i| hull[i].0 * hull[(i + 1) % n].1 - hull[i].1 * hull[(i + 1) % n].0)
        .sum::<i64>()
        .abs()
}

fn spectrum(text: &str, vars: &[&str], convention: ChiConvention) -> Result<SpectrumPoly, String> {
    let f = LaurentPoly::parse(text, vars).map_err(|e| e.to_string())?;
    let options = AnalyzeOptions {
        chi_convention: convention,
        ..AnalyzeOptions::default()
    };
    let r = analyze_laurent(&f, &options).map_err(|e| e.to_string())?;
    let s = r.spectrum.ok_or(format!("{text}: no spectrum"))?;
    if s.is_partial() {
        return Err(format!("{text}: partial"));
    }
    Ok(s.value)
}

fn criterion_mass() -> Outcome {
    let one_d = spectrum("x + x^-1", &["x"], ChiConvention::ConeChi)?;
    if one_d.mass() != 2 {
        return Err(format!("x + x^-1: mass {}", one_d.mass()));
    }
    let mut seen = vec!["x + x^-1: 2".to_string()];
    for (text, pts) in [
        ("x + y + x^-1*y^-1", vec![(1, 0), (0, 1), (-1, -1)]),
        ("x + y + x^-2*y^-1", vec![(1, 0), (0, 1), (-2, -1)]),
    ] {
        let s = spectrum(text, &["x", "y"], ChiConvention::ConeChi)?;
        let vol = doubled_hull_area(pts);
        if s.mass() != -vol {
            return Err(format!("{text}: mass {} volume {vol}", s.mass()));
        }
        seen.push(format!("{text}: {}", s.mass()));
    }
    Ok(seen.join("; "))
}

/// Vertices of `poly` maximizing `w`.
fn argmax(poly: &Polytope, w: &[i64]) -> (BTreeSet<ExponentVector>, i64) {
    let dot = |v: &ExponentVector| v.entries().iter().zip(w).map(|(a, b)| a * b).sum::<i64>();
    let verts = poly.vertices();
    let best = verts.iter().map(dot).max().unwrap();
    (
        verts.iter().filter(|v| dot(v) == best).cloned().collect(),
        best,
    )
}

fn box_points(d: usize, r: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * r + 1) as usize;
    (0..side.pow(d as u32)).rev().map(move |mut code| {
        (0..d)
            .map(|_| {
                let c = (code % side) as i64 - r;
                code /= side;
                c
            })
            .collect()
    })
}

/// A weight other than `avoid` selecting `face`: first from a box, then
/// near multiples of `avoid` for thin cones, and `2 avoid` as a last resort.
fn second_weight(face: &Face, poly: &Polytope, avoid: &[i64]) -> (Vec<i64>, i64, bool) {
    let d = poly.ambient_dim();
    let target: BTreeSet<ExponentVector> = face.vertices.iter().cloned().collect();
    let selects = |w: &Vec<i64>| {
        let (set, n) = argmax(poly, w);
        (w.as_slice() != avoid && set == target && n > 0).then_some(n)
    };
    let near = (2..=24i64).flat_map(|k| {
        box_points(d, 6).map(move |v| {
            v.iter()
                .zip(avoid)
                .map(|(a, b)| a + k * b)
                .collect::<Vec<i64>>()
        })
    });
    let parallel =
        |w: &Vec<i64>| (0..d).all(|i| (0..d).all(|j| w[i] * avoid[j] == w[j] * avoid[i]));
    box_points(d, 6)
        .chain(near)
        .filter(|w| !parallel(w))
        .find_map(|w| selects(&w).map(|n| (w, n, false)))
        .unwrap_or_else(|| {
            let w: Vec<i64> = avoid.iter().map(|x| 2 * x).collect();
            let n = selects(&w).unwrap();
            (w, n, true)
        })
}

fn criterion_weight_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut inputs, mut faces, mut scaled) = (0, 0, 0);
    let options = AnalyzeOptions::default();
    while inputs < 12 {
        let d = 2 + inputs % 2;
        let f = random_poly(&mut rng, d, false);
        if f.is_constant() {
            continue;
        }
        let report = analyze_laurent(&f, &options).map_err(|e| e.to_string())?;
        if report.gate != Gate::Open {
            continue;
        }
        inputs += 1;
        let poly = newton_polytope_at_infinity(&f).unwrap();
        let mut at_first = Vec::new();
        let mut at_second = Vec::new();
        for face in poly.face_lattice().faces_gamma() {
            let w = cone::sample_weight(face, &poly).map_err(|e| e.to_string())?;
            let (set, n) = argmax(&poly, w.entries());
            if set != face.vertices.iter().cloned().collect() {
                return Err(format!(
                    "{f}: sample weight {w:?} misses face {:?}",
                    face.vertices
                ));
            }
            let (w2, n2, was_scaled) = second_weight(face, &poly, w.entries());
            if was_scaled && face.dim + 1 != d {
                return Err(format!(
                    "{f}: face {:?} has only a rescaled second weight",
                    face.vertices
                ));
            }
            scaled += was_scaled as usize;
            let chi = cone::chi(face, &poly, ChiConvention::ConeChi)
                .unwrap()
                .chi_used
                .unwrap();
            let a = fiber_class(&f, &poly, face, n, EdgeOptions::default())
                .map_err(|e| e.to_string())?;
            let b = fiber_class(&f, &poly, face, n2, EdgeOptions::default())
                .map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!(
                    "{f}: face {:?} differs at {w:?} and {w2:?}",
                    face.vertices
                ));
            }
            at_first.push((chi, a));
            at_second.push((chi, b));
            faces += 1;
        }
        let s1 = assemble_s_infinity(at_first.iter().map(|(c, x)| (*c, x)));
        let s2 = assemble_s_infinity(at_second.iter().map(|(c, x)| (*c, x)));
        if s1 != s2 || Some(&s1) != report.s_infinity.as_ref() {
            return Err(format!("{f}: S_inf depends on the weight"));
        }
    }
    Ok(format!("{inputs} inputs, {faces} faces; {scaled} of them facets, whose normal ray only allows a multiple"))
}

/// `z^m (f(z) - t)` as coefficients, low degree first.
fn shifted(coeffs: &BTreeMap<i64, f64>, t: Complex64) -> Vec<Complex64> {
    let m = -coeffs.keys().next().unwrap().min(&0);
    let top = *coeffs.keys().last().unwrap();
    let mut p = vec![Complex64::new(0.0, 0.0); (top + m + 1) as usize];
    for (&e, &c) in coeffs {
        p[(e + m) as usize] += c;
    }
    p[m as usize] -= t;
    p
}

fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    p.iter().rev().fold(
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        |(v, dv), &c| (v * z + c, dv * z + v),
    )
}

fn durand_kerner(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n];
    let radius = p.iter().map(|c| (c / lead).norm()).fold(1.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * PI * k as f64 / n as f64))
        .collect();
    for _ in 0..5000 {
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(lead, |acc, j| acc * (z[i] - z[j]));
            let step = horner(p, z[i]).0 / denom;
            z[i] -= step;
        }
    }
    z
}

/// Exponents of the monodromy at infinity of a one-variable `f`, from the
/// cycles of its roots of `f = t` as `t` runs once around `|t| = 10^6`.
fn root_monodromy(coeffs: &BTreeMap<i64, f64>) -> SpectrumPoly {
    let r = 1e6;
    let start = durand_kerner(&shifted(coeffs, Complex64::new(r, 0.0)));
    let mut z = start.clone();
    let steps = 40000;
    for s in 1..=steps {
        let p = shifted(
            coeffs,
            Complex64::from_polar(r, 2.0 * PI * s as f64 / steps as f64),
        );
        for zi in z.iter_mut() {
            for _ in 0..4 {
                let (v, dv) = horner(&p, *zi);
                *zi -= v / dv;
            }
        }
    }
    let perm: Vec<usize> = z
        .iter()
        .map(|w| {
            (0..start.len())
                .min_by(|&a, &b| (start[a] - w).norm().total_cmp(&(start[b] - w).norm()))
                .unwrap()
        })
        .collect();
    let mut seen = vec![false; perm.len()];
    let mut out = SpectrumPoly::zero();
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut c = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            c += 1;
        }
        for k in 0..c {
            out.add_term(Rational64::new(k, c), 1);
        }
    }
    out
}

fn criterion_calibration() -> Outcome {
    let report = calibration_suite(ChiConvention::ConeChi);
    if !report.all_pass() {
        return Err(format!(
            "calibration rows failing: {:?}",
            report
                .rows
                .iter()
                .filter(|r| !r.pass)
                .map(|r| &r.fixture)
                .collect::<Vec<_>>()
        ));
    }
    let sign = report
        .rows
        .iter()
        .find(|r| r.fixture == "x*y")
        .and_then(|r| r.sign)
        .unwrap();
    let calibrated = calibration_suite(ChiConvention::Calibrated);
    let sign_cal = calibrated
        .rows
        .iter()
        .find(|r| r.fixture == "x*y")
        .and_then(|r| r.sign);
    let fixtures: [(&str, &[(i64, f64)]); 6] = [
        ("x", &[(1, 1.0)]),
        ("x + x^-1", &[(1, 1.0), (-1, 1.0)]),
        ("x^2", &[(2, 1.0)]),
        ("x^3 + x^-2", &[(3, 1.0), (-2, 1.0)]),
        ("x^2 + 3*x^-1", &[(2, 1.0), (-1, 3.0)]),
        ("2*x^3 - x + x^-1", &[(3, 2.0), (1, -1.0), (-1, 1.0)]),
    ];
    for (text, coeffs) in fixtures {
        let oracle = root_monodromy(&coeffs.iter().copied().collect());
        let computed = spectrum(text, &["x"], ChiConvention::ConeChi)?;
        if oracle != computed {
            return Err(format!("{text}: roots give {oracle}, computed {computed}"));
        }
    }
    Ok(format!(
        "{} calibration fixtures; 6 one-variable spectra match root monodromy at |t| = 1e6; x*y sign {sign:+} under cone-chi, {} under calibrated",
        report.rows.len(),
        sign_cal.map_or("none".into(), |s| format!("{s:+}"))
    ))
}

fn criterion_mass_euler() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let terms: Vec<(u64, u32, u32, i64)> = (0..rng.gen_range(0..8))
            .map(|_| {
                (
                    rng.gen_range(1..=8),
                    rng.gen_range(0..=3),
                    rng.gen_range(0..=3),
                    rng.gen_range(-6..=6),
                )
            })
            .collect();
        let x = ClassExpr::from_terms(
            terms
                .iter()
                .map(|&(e, r, k, c)| (Generator::Cell(Cell::new(e, r, k)), c)),
        );
        // χ(μ_e × G_m^r × A^k) = e when r = 0, else 0
        let euler: i64 = terms
            .iter()
            .filter(|t| t.1 == 0)
            .map(|t| t.0 as i64 * t.3)
            .sum();
        let mass = sp_of_class(&x).value.mass();
        if mass != euler || euler_specialization(&x) != Ok(euler) {
            return Err(format!("{x}: mass {mass}, euler {euler}"));
        }
    }
    Ok("1000 random classes".into())
}

fn milnor(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_milnor"))
        .args(args)
        .env_remove("MILNOR_SEED")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn criterion_gate() -> Outcome {
    let input = "x^2 + 2*x*y + y^2 + x";
    let (code, out, err) = milnor(&["analyze", input, "--vars", "x,y", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    let witness = v["strata"][0]["faces"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|f| f["certificate"]["witness"].as_str())
        .find(|w| w.contains("u + 1"));
    if code != 2
        || !v["spectrum"].is_null()
        || v["gate"]["status"] != "refused"
        || witness.is_none()
        || !err.contains("u + 1")
    {
        return Err(format!(
            "exit {code}, spectrum {}, gate {}",
            v["spectrum"], v["gate"]
        ));
    }
    Ok(format!(
        "exit 2, spectrum withheld, witness \"{}\"",
        witness.unwrap()
    ))
}

fn criterion_affine() -> Outcome {
    let f = LaurentPoly::parse("x + y", &["x", "y"]).unwrap();
    let options = AnalyzeOptions::default();
    let r = analyze_affine(&f, &options).map_err(|e| e.to_string())?;
    let total = r.spectrum.as_ref().ok_or("no total")?.value.clone();
    let mut sum: BTreeMap<Rational64, i64> = BTreeMap::new();
    for s in &r.strata {
        for (e, m) in s
            .analysis
            .spectrum
            .as_ref()
            .ok_or("stratum without spectrum")?
            .value
            .terms()
        {
            *sum.entry(e).or_default() += m;
        }
    }
    sum.retain(|_, m| *m != 0);
    let total_terms: BTreeMap<Rational64, i64> = total.terms().collect();
    if sum != total_terms {
        return Err(format!("strata sum {sum:?} vs total {total}"));
    }
    let torus = r
        .strata
        .iter()
        .find(|s| s.zeroed.is_empty())
        .ok_or("no torus stratum")?;
    let laurent = analyze_laurent(&f, &options).map_err(|e| e.to_string())?;
    if laurent.strata[0].analysis != torus.analysis {
        return Err("torus stratum differs from the Laurent analysis".into());
    }
    Ok(format!(
        "{} strata sum to {total}; torus stratum equals the Laurent run",
        r.strata.len() + r.skipped.len()
    ))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Checks `{x^a = 1}` with `λ = e^{2πi/N}` acting by weights `ω`, over
/// `μ_Q^d` written additively as `(Z/Q)^d`.
fn orbit_check(a: &[i64], w: &[i64], n: i64) -> Result<(), String> {
    let e = a.iter().fold(0, |g, &x| gcd(g, x));
    let q = n * e / gcd(n, e);
    let d = a.len();
    let mut labels = BTreeSet::new();
    let mut code = vec![0i64; d];
    loop {
        if a.iter()
            .zip(&code)
            .map(|(x, k)| x * k)
            .sum::<i64>()
            .rem_euclid(q)
            == 0
        {
            // the component is read off from x^(a/e), an e-th root of unity
            let c = a
                .iter()
                .zip(&code)
                .map(|(x, k)| (x / e) * k)
                .sum::<i64>()
                .rem_euclid(q);
            labels.insert(c / (q / e));
        }
        let Some(i) = (0..d).find(|&i| code[i] < q - 1) else {
            break;
        };
        code[i] += 1;
        code[..i].iter_mut().for_each(|c| *c = 0);
    }
    if labels.len() as i64 != e {
        return Err(format!("a {a:?}: {} components, content {e}", labels.len()));
    }
    // λ shifts x by (Q/N)ω, hence the label by (Q/N)(ω·a/e)/(Q/e) = 1
    let step = (q / n) * a.iter().zip(w).map(|(x, y)| (x / e) * y).sum::<i64>();
    let shift = step.rem_euclid(q) / (q / e);
    let mut orbit = BTreeSet::new();
    let mut c = 0;
    for _ in 0..e {
        orbit.insert(c);
        c = (c + shift).rem_euclid(e);
    }
    if orbit.len() as i64 != e || c != 0 {
        return Err(format!("a {a:?} w {w:?}: orbit of size {}", orbit.len()));
    }
    let class = reduce_vertex_fiber(a, n).map_err(|e| e.to_string())?;
    if class != ClassExpr::cell(Cell::new(e as u64, d as u32 - 1, 0)) {
        return Err(format!("a {a:?} N {n}: class {class}"));
    }
    Ok(())
}

fn criterion_orbits() -> Outcome {
    let mut cases = 0;
    for d in 1..=2usize {
        let vecs: Vec<Vec<i64>> = (0..9i64.pow(d as u32))
            .map(|mut c| {
                (0..d)
                    .map(|_| {
                        let v = c % 9 - 4;
                        c /= 9;
                        v
                    })
                    .collect()
            })
            .collect();
        for a in vecs.iter().filter(|a| a.iter().any(|&x| x != 0)) {
            for w in &vecs {
                let n: i64 = a.iter().zip(w).map(|(x, y)| x * y).sum();
                if (1..=12).contains(&n) {
                    orbit_check(a, w, n)?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} (exponent, weight) pairs in d = 1, 2"))
}

fn criterion_determinism() -> Outcome {
    for (text, vars) in [
        ("x + y + x^-1*y^-1", "x,y"),
        ("x + y + z + x^-1*y^-1*z^-1", "x,y,z"),
        ("x^2 + 2*x*y + y^2 + x", "x,y"),
    ] {
        let args = ["analyze", text, "--vars", vars, "--format", "json"];
        let (c1, a, _) = milnor(&args);
        let (c2, b, _) = milnor(&args);
        if a != b || c1 != c2 || a.is_empty() {
            return Err(format!("{text}: outputs differ"));
        }
    }
    Ok("3 inputs, byte-identical JSON across runs".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        (
            "commode chi closed form equals normal cone chi",
            criterion_chi_commode,
        ),
        ("mass equals signed normalized volume", criterion_mass),
        (
            "S_inf independent of the weight",
            criterion_weight_independence,
        ),
        ("calibration and root monodromy", criterion_calibration),
        (
            "spectrum mass equals Euler characteristic",
            criterion_mass_euler,
        ),
        ("degeneracy gate", criterion_gate),
        ("affine spectrum is the sum of strata", criterion_affine),
        (
            "monomial fibres are one free orbit of tori",
            criterion_orbits,
        ),
        ("deterministic output", criterion_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
