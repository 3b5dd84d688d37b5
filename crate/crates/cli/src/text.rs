//! Plain-text renderings. The `spectrum:` lines use the parseable
//! `c*t^(p/q)` form, so text and JSON carry the same numbers.

use std::fmt::Write;

use milnor_core::pipeline::AnalysisReport;

use crate::dto::{CalibrationReportJson, CheckReportJson, ChiReportJson, PolytopeReportJson};

fn vectors(vs: impl IntoIterator<Item = impl AsRef<[i64]>>) -> String {
    let parts: Vec<String> = vs
        .into_iter()
        .map(|v| {
            let inner: Vec<String> = v.as_ref().iter().map(i64::to_string).collect();
            format!("({})", inner.join(","))
        })
        .collect();
    parts.join(" ")
}

fn opt(x: Option<i64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn analysis(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "input: {}", r.input);
    let _ = writeln!(s, "variables: {}", r.variables.join(","));
    let _ = writeln!(s, "mode: {}", r.mode.tag());
    let _ = writeln!(s, "chi convention: {}", r.chi_convention);
    let _ = writeln!(s, "assume nondegenerate: {}", r.assume_nondegenerate);
    let _ = writeln!(s, "seed: {}", r.seed);
    for st in &r.strata {
        let a = &st.analysis;
        let p = &a.polytope;
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "stratum {}: {} in {}",
            milnor_core::pipeline::stratum_label(&st.zeroed),
            a.polynomial,
            a.variables.join(",")
        );
        let _ = writeln!(
            s,
            "  polytope: dim {} in Z^{}, commode {}, normalized volume {}, f-vector {:?}",
            p.dim, p.ambient_dim, p.commode, p.normalized_volume, p.f_vector
        );
        let _ = writeln!(
            s,
            "  vertices: {}",
            vectors(p.vertices.iter().map(|v| v.to_vec()))
        );
        for row in &a.faces {
            let _ = writeln!(
                s,
                "  face {} (dim {}) {}: f_gamma = {}",
                row.face_id,
                row.dim,
                vectors(row.vertices.iter().map(|v| v.to_vec())),
                row.face_polynomial
            );
            let _ = writeln!(
                s,
                "    chi used {} (closed form {}, cone {}); {}{}",
                opt(row.chi.chi_used),
                opt(row.chi.chi_closed_form),
                row.chi.chi_cone,
                row.certificate.status,
                row.certificate
                    .witness
                    .as_ref()
                    .map(|w| format!(" [{w}]"))
                    .unwrap_or_default()
            );
            let _ = writeln!(
                s,
                "    weight {} N {} fiber {}",
                vectors([row.weight.to_vec()]),
                row.degree,
                row.fiber
                    .as_ref()
                    .map(|c| c.to_string())
                    .or_else(|| row.fiber_error.clone())
                    .unwrap_or_default()
            );
            let _ = writeln!(s, "    total space {}", row.total_space);
        }
        let _ = writeln!(s, "  verdict: {}", a.verdict);
        let _ = writeln!(s, "  gate: {}", a.gate.tag());
        if let Some(x) = &a.s_infinity {
            let _ = writeln!(s, "  S_inf: {x}");
        }
        if let Some(sp) = &a.spectrum {
            let _ = writeln!(s, "  spectrum: {}", sp.value);
        }
    }
    for sk in &r.skipped {
        let _ = writeln!(
            s,
            "skipped stratum {}: {}",
            milnor_core::pipeline::stratum_label(&sk.zeroed),
            sk.reason
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "gate: {}", r.gate.tag());
    if let Some(reason) = r.gate.reason() {
        let _ = writeln!(s, "gate reason: {reason}");
    }
    match (&r.s_infinity, &r.spectrum) {
        (Some(x), Some(sp)) => {
            let _ = writeln!(s, "S_inf: {x}");
            let _ = writeln!(s, "spectrum: {}", sp.value);
            let _ = writeln!(s, "partial: {}", sp.is_partial());
            if sp.is_partial() {
                let _ = writeln!(s, "remainder: {}", sp.remainder);
            }
        }
        _ => {
            let _ = writeln!(s, "spectrum: withheld");
        }
    }
    for c in &r.checks {
        let _ = writeln!(s, "check {c}");
    }
    s
}

pub fn polytope(r: &PolytopeReportJson) -> String {
    let mut s = String::new();
    let p = &r.polytope;
    let _ = writeln!(s, "input: {}", r.input);
    let _ = writeln!(s, "variables: {}", r.variables.join(","));
    let _ = writeln!(s, "dim {} in Z^{}", p.dim, p.ambient_dim);
    let _ = writeln!(s, "vertices: {}", vectors(&p.vertices));
    let _ = writeln!(s, "commode: {}", p.commode);
    let _ = writeln!(
        s,
        "normalized volume: {}/{}",
        p.normalized_volume.num, p.normalized_volume.den
    );
    let _ = writeln!(s, "f-vector: {:?}", p.f_vector);
    for f in &p.facets {
        let _ = writeln!(
            s,
            "facet <{}, x> <= {}",
            vectors([&f.outer_normal]),
            f.support_value
        );
    }
    for f in &r.faces {
        let _ = writeln!(
            s,
            "face {} dim {} {}{}{}",
            f.id,
            f.dim,
            vectors(&f.vertices),
            if f.contains_origin { " contains 0" } else { "" },
            if f.in_coordinate_hyperplane {
                " in a coordinate hyperplane"
            } else {
                ""
            }
        );
    }
    s
}

pub fn chi(r: &ChiReportJson) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "input: {}", r.input);
    let _ = writeln!(s, "commode: {}", r.commode);
    let _ = writeln!(s, "convention: {}", r.convention);
    for row in &r.rows {
        let _ = writeln!(
            s,
            "face {} dim {} {}: chi {} (closed form {}, cone {})",
            row.chi.face_id,
            row.dim,
            vectors(&row.vertices),
            opt(row.chi.used),
            opt(row.chi.closed_form),
            row.chi.cone
        );
    }
    s
}

pub fn certificates(r: &CheckReportJson) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "input: {}", r.input);
    for c in &r.certificates {
        let _ = writeln!(
            s,
            "face {}: {}{}{}",
            c.face_id,
            c.status,
            c.detail
                .as_ref()
                .map(|d| format!(" ({d})"))
                .unwrap_or_default(),
            c.witness
                .as_ref()
                .map(|w| format!(" [{w}]"))
                .unwrap_or_default()
        );
    }
    let _ = writeln!(s, "verdict: {}", r.verdict);
    s
}

pub fn calibration(r: &CalibrationReportJson) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "convention: {}", r.convention);
    for row in &r.rows {
        let computed = row
            .computed
            .as_ref()
            .and_then(|t| crate::dto::spectrum_from_terms(t).ok())
            .map_or_else(|| "none".to_string(), |sp| sp.to_string());
        let _ = writeln!(
            s,
            "{} f = {} ({}): expected {}, computed {}{}",
            if row.pass { "PASS" } else { "FAIL" },
            row.fixture,
            row.variables.join(","),
            row.expected,
            computed,
            row.sign
                .map(|g| format!(", sign {g:+}"))
                .unwrap_or_default()
        );
    }
    s
}
