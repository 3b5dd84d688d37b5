//! End-to-end analysis: Newton polyhedron, per-face data, the class
//! `S_{f,∞}`, its spectrum, and consistency checks.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use thiserror::Error;

use crate::cone::{self, ChiConvention, ChiReport, ConeError};
use crate::laurent::{ExponentVector, LaurentError, LaurentPoly, Restriction};
use crate::motivic::{self, ClassExpr, EdgeOptions, MotivicError};
use crate::nondegeneracy::{self, Certificate, ChartError, Status};
use crate::polytope::{
    face_restriction, newton_polytope_at_infinity, FaceLattice, Polytope, PolytopeError,
};
use crate::spectrum::{self, SpectrumPoly, SpectrumValue};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] LaurentError),
    #[error("input is constant")]
    Constant,
    #[error("affine mode needs nonnegative exponents; `{0}` has a negative one")]
    NegativeExponent(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Motivic(#[from] MotivicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnalyzeOptions {
    pub chi_convention: ChiConvention,
    pub assume_nondegenerate: bool,
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            chi_convention: ChiConvention::default(),
            assume_nondegenerate: false,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Laurent,
    Affine,
}

impl Mode {
    pub fn tag(self) -> &'static str {
        match self {
            Mode::Laurent => "laurent",
            Mode::Affine => "affine",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetSummary {
    pub outer_normal: Vec<i64>,
    pub support_value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeSummary {
    pub ambient_dim: usize,
    pub dim: usize,
    pub vertices: Vec<ExponentVector>,
    pub facets: Vec<FacetSummary>,
    pub f_vector: Vec<usize>,
    pub commode: bool,
    pub normalized_volume: Rational64,
}

impl PolytopeSummary {
    pub fn new(poly: &Polytope, lattice: &FaceLattice) -> Self {
        PolytopeSummary {
            ambient_dim: poly.ambient_dim(),
            dim: poly.dim(),
            vertices: poly.vertices(),
            facets: poly
                .facets()
                .iter()
                .map(|f| FacetSummary {
                    outer_normal: f.outer_normal(),
                    support_value: f.support_value(),
                })
                .collect(),
            f_vector: lattice.f_vector(),
            commode: poly.is_commode(),
            normalized_volume: poly.normalized_volume(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceRow {
    pub face_id: usize,
    pub dim: usize,
    pub vertices: Vec<ExponentVector>,
    pub lattice_points: Vec<ExponentVector>,
    pub in_coordinate_hyperplane: bool,
    pub face_polynomial: String,
    pub chi: ChiReport,
    pub certificate: Certificate,
    pub weight: ExponentVector,
    pub degree: i64,
    pub fiber: Option<ClassExpr>,
    pub fiber_error: Option<String>,
    pub total_space: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Open,
    /// Hypotheses fail but the user asked to proceed.
    Overridden(String),
    Refused(String),
}

impl Gate {
    pub fn is_refused(&self) -> bool {
        matches!(self, Gate::Refused(_))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Gate::Open => "open",
            Gate::Overridden(_) => "overridden",
            Gate::Refused(_) => "refused",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Gate::Open => None,
            Gate::Overridden(r) | Gate::Refused(r) => Some(r),
        }
    }
}

/// Analysis of one Laurent polynomial on its torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentAnalysis {
    pub polynomial: String,
    pub variables: Vec<String>,
    pub polytope: PolytopeSummary,
    pub faces: Vec<FaceRow>,
    pub verdict: Status,
    pub gate: Gate,
    pub s_infinity: Option<ClassExpr>,
    pub spectrum: Option<SpectrumValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckOutcome {
    Pass,
    Fail,
    Skipped,
}

impl CheckOutcome {
    pub fn tag(self) -> &'static str {
        match self {
            CheckOutcome::Pass => "pass",
            CheckOutcome::Fail => "fail",
            CheckOutcome::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    /// The stratum the check ran on (`torus` for the open torus).
    pub scope: String,
    pub outcome: CheckOutcome,
    pub details: String,
}

/// A coordinate stratum: the named variables are zero, the others nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumReport {
    pub zeroed: Vec<String>,
    pub analysis: LaurentAnalysis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedStratum {
    pub zeroed: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub input: String,
    pub variables: Vec<String>,
    pub mode: Mode,
    pub chi_convention: ChiConvention,
    pub assume_nondegenerate: bool,
    pub seed: u64,
    pub strata: Vec<StratumReport>,
    pub skipped: Vec<SkippedStratum>,
    pub gate: Gate,
    pub s_infinity: Option<ClassExpr>,
    pub spectrum: Option<SpectrumValue>,
    pub checks: Vec<CheckResult>,
}

pub fn stratum_label(zeroed: &[String]) -> String {
    if zeroed.is_empty() {
        "torus".into()
    } else {
        zeroed
            .iter()
            .map(|v| format!("{v}=0"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Runs the face-by-face computation for `f` on its torus.
pub fn analyze_torus(
    f: &LaurentPoly,
    options: &AnalyzeOptions,
) -> Result<LaurentAnalysis, PipelineError> {
    if f.is_constant() {
        return Err(PipelineError::Constant);
    }
    let poly = newton_polytope_at_infinity(f)?;
    let lattice = poly.face_lattice();
    let certificates = nondegeneracy::check_all(f, &poly, &lattice, options.seed)?;
    let edge_options = EdgeOptions {
        allow_degenerate: options.assume_nondegenerate,
    };
    let mut faces = Vec::new();
    for (face, certificate) in lattice
        .faces_gamma()
        .into_iter()
        .zip(certificates.certificates)
    {
        let chi = cone::chi(face, &poly, options.chi_convention)?;
        let weight = cone::sample_weight(face, &poly)?;
        let degree = cone::face_degree(face, &weight)?;
        let fg = face_restriction(f, &poly, face)?;
        let (fiber, fiber_error) = match motivic::fiber_class(f, &poly, face, degree, edge_options)
        {
            Ok(c) => (Some(c), None),
            Err(e @ MotivicError::DegenerateEdge(_)) => (None, Some(e.to_string())),
            Err(e) => return Err(e.into()),
        };
        faces.push(FaceRow {
            face_id: face.id,
            dim: face.dim,
            vertices: face.vertices.clone(),
            lattice_points: face.lattice_points.clone(),
            in_coordinate_hyperplane: face.in_coordinate_hyperplane,
            face_polynomial: fg.to_string(),
            total_space: motivic::total_space_symbol(&fg, &weight),
            chi,
            certificate,
            weight,
            degree,
            fiber,
            fiber_error,
        });
    }

    let verdict = certificates.verdict;
    let gate = if verdict == Status::ExactDegenerate {
        let witness = faces
            .iter()
            .find(|r| r.certificate.status == Status::ExactDegenerate)
            .map(|r| {
                format!(
                    "face {} is degenerate: {}",
                    r.face_id,
                    r.certificate.witness.as_deref().unwrap_or("no witness")
                )
            })
            .unwrap_or_default();
        if options.assume_nondegenerate {
            Gate::Overridden(witness)
        } else {
            Gate::Refused(witness)
        }
    } else if faces.iter().any(|r| r.chi.chi_used.is_none()) {
        Gate::Refused(format!(
            "the {} convention gives no Euler characteristic on a non-commode polyhedron",
            options.chi_convention
        ))
    } else {
        Gate::Open
    };

    let (s_infinity, spectrum) = if gate.is_refused() {
        (None, None)
    } else {
        let s = motivic::assemble_s_infinity(faces.iter().map(|r| {
            (
                r.chi.chi_used.expect("gate checked chi"),
                r.fiber.as_ref().expect("fibers exist unless refused"),
            )
        }));
        let sp = spectrum::sp_of_class(&s);
        (Some(s), Some(sp))
    };

    Ok(LaurentAnalysis {
        polynomial: f.to_string(),
        variables: f.variables().to_vec(),
        polytope: PolytopeSummary::new(&poly, &lattice),
        faces,
        verdict,
        gate,
        s_infinity,
        spectrum,
    })
}

fn report_from_strata(
    f: &LaurentPoly,
    mode: Mode,
    options: &AnalyzeOptions,
    strata: Vec<(StratumReport, LaurentPoly)>,
    skipped: Vec<SkippedStratum>,
) -> AnalysisReport {
    let gate = strata
        .iter()
        .map(|(s, _)| &s.analysis.gate)
        .find(|g| g.is_refused())
        .or_else(|| {
            strata
                .iter()
                .map(|(s, _)| &s.analysis.gate)
                .find(|g| **g != Gate::Open)
        })
        .cloned()
        .unwrap_or(Gate::Open);
    let (s_infinity, spectrum) = if gate.is_refused() {
        (None, None)
    } else {
        let mut s = ClassExpr::zero();
        let mut sp = SpectrumValue {
            value: SpectrumPoly::zero(),
            remainder: ClassExpr::zero(),
        };
        for (st, _) in &strata {
            s = s.add(st.analysis.s_infinity.as_ref().expect("open gate"));
            sp = sp.add(st.analysis.spectrum.as_ref().expect("open gate"));
        }
        (Some(s), Some(sp))
    };
    let mut checks = Vec::new();
    for (st, g) in &strata {
        checks.extend(consistency_suite(
            &st.analysis,
            g,
            &stratum_label(&st.zeroed),
            options,
        ));
    }
    if mode == Mode::Affine {
        checks.push(additivity_check(&strata, spectrum.as_ref()));
    }
    AnalysisReport {
        input: f.to_string(),
        variables: f.variables().to_vec(),
        mode,
        chi_convention: options.chi_convention,
        assume_nondegenerate: options.assume_nondegenerate,
        seed: options.seed,
        strata: strata.into_iter().map(|(s, _)| s).collect(),
        skipped,
        gate,
        s_infinity,
        spectrum,
        checks,
    }
}

pub fn analyze_laurent(
    f: &LaurentPoly,
    options: &AnalyzeOptions,
) -> Result<AnalysisReport, PipelineError> {
    let analysis = analyze_torus(f, options)?;
    let stratum = StratumReport {
        zeroed: Vec::new(),
        analysis,
    };
    Ok(report_from_strata(
        f,
        Mode::Laurent,
        options,
        vec![(stratum, f.clone())],
        Vec::new(),
    ))
}

/// Sums the analyses of the restrictions of `f` to the `2^d` coordinate
/// strata of affine space. Constant restrictions contribute nothing.
pub fn analyze_affine(
    f: &LaurentPoly,
    options: &AnalyzeOptions,
) -> Result<AnalysisReport, PipelineError> {
    if let Some(i) = (0..f.dimension()).find(|&i| f.terms().any(|(e, _)| e[i] < 0)) {
        return Err(PipelineError::NegativeExponent(f.variables()[i].clone()));
    }
    if f.is_constant() {
        return Err(PipelineError::Constant);
    }
    let d = f.dimension();
    let mut strata = Vec::new();
    let mut skipped = Vec::new();
    for mask in 0u64..(1u64 << d) {
        let zeroed_ids: BTreeSet<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
        let zeroed: Vec<String> = zeroed_ids
            .iter()
            .map(|&i| f.variables()[i].clone())
            .collect();
        match f.stratum_restriction(&zeroed_ids)? {
            Restriction::Polynomial(g) => {
                let analysis = analyze_torus(&g, options)?;
                strata.push((StratumReport { zeroed, analysis }, g));
            }
            Restriction::ConstantZero => skipped.push(SkippedStratum {
                zeroed,
                reason: "restriction is 0".into(),
            }),
            Restriction::ConstantValue(c) => skipped.push(SkippedStratum {
                zeroed,
                reason: format!("restriction is the constant {c}"),
            }),
        }
    }
    Ok(report_from_strata(
        f,
        Mode::Affine,
        options,
        strata,
        skipped,
    ))
}

fn check(name: &str, scope: &str, outcome: CheckOutcome, details: String) -> CheckResult {
    CheckResult {
        name: name.into(),
        scope: scope.into(),
        outcome,
        details,
    }
}

fn pass_or_fail(ok: bool) -> CheckOutcome {
    if ok {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail
    }
}

/// Kouchnirenko mass, weight independence, commode χ agreement and
/// mass against Euler characteristic.
pub fn consistency_suite(
    analysis: &LaurentAnalysis,
    f: &LaurentPoly,
    scope: &str,
    options: &AnalyzeOptions,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let summary = &analysis.polytope;
    let d = summary.ambient_dim as u32;

    let total_spectrum = analysis.spectrum.as_ref().filter(|s| !s.is_partial());
    out.push(if !summary.commode {
        check(
            "kouchnirenko-mass",
            scope,
            CheckOutcome::Skipped,
            "polyhedron is not commode".into(),
        )
    } else if analysis.gate != Gate::Open {
        check(
            "kouchnirenko-mass",
            scope,
            CheckOutcome::Skipped,
            "non-degeneracy not established".into(),
        )
    } else if let Some(sp) = total_spectrum {
        let mass = sp.value.mass();
        let volume = *summary.normalized_volume.numer();
        let expected = if d % 2 == 1 { volume } else { -volume };
        check(
            "kouchnirenko-mass",
            scope,
            pass_or_fail(mass == expected),
            format!("mass {mass}, (-1)^(d-1) d! Vol = {expected}"),
        )
    } else {
        check(
            "kouchnirenko-mass",
            scope,
            CheckOutcome::Skipped,
            "spectrum is partial".into(),
        )
    });

    out.push(weight_independence(analysis, f, scope, options));

    out.push(if summary.commode {
        let bad: Vec<usize> = analysis
            .faces
            .iter()
            .filter(|r| !r.in_coordinate_hyperplane && r.chi.disagreement())
            .map(|r| r.face_id)
            .collect();
        let flagged = analysis.faces.iter().filter(|r| r.in_coordinate_hyperplane).count();
        check(
            "commode-chi-agreement",
            scope,
            pass_or_fail(bad.is_empty()),
            if bad.is_empty() {
                format!("closed form equals cone value off coordinate hyperplanes; {flagged} face(s) in a coordinate hyperplane")
            } else {
                format!("disagreement on faces {bad:?}")
            },
        )
    } else {
        check(
            "commode-chi-agreement",
            scope,
            CheckOutcome::Skipped,
            "polyhedron is not commode".into(),
        )
    });

    out.push(match (&analysis.s_infinity, total_spectrum) {
        (Some(s), Some(sp)) => match spectrum::euler_specialization(s) {
            Ok(chi) => check(
                "mass-euler",
                scope,
                pass_or_fail(chi == sp.value.mass()),
                format!("mass {}, Euler characteristic {chi}", sp.value.mass()),
            ),
            Err(e) => check("mass-euler", scope, CheckOutcome::Skipped, e.to_string()),
        },
        _ => check(
            "mass-euler",
            scope,
            CheckOutcome::Skipped,
            "no total spectrum".into(),
        ),
    });
    out
}

fn weight_independence(
    analysis: &LaurentAnalysis,
    f: &LaurentPoly,
    scope: &str,
    options: &AnalyzeOptions,
) -> CheckResult {
    let name = "weight-independence";
    let run = || -> Result<Vec<usize>, PipelineError> {
        let poly = newton_polytope_at_infinity(f)?;
        let lattice = poly.face_lattice();
        let edge_options = EdgeOptions {
            allow_degenerate: options.assume_nondegenerate,
        };
        let mut bad = Vec::new();
        for row in &analysis.faces {
            let Some(fiber) = &row.fiber else { continue };
            let face = lattice.face(row.face_id);
            let w2 = cone::second_weight(face, &poly, &row.weight)?;
            let n2 = cone::face_degree(face, &w2)?;
            if w2 == row.weight || motivic::fiber_class(f, &poly, face, n2, edge_options)? != *fiber
            {
                bad.push(row.face_id);
            }
        }
        Ok(bad)
    };
    match run() {
        Ok(bad) if bad.is_empty() => check(
            name,
            scope,
            CheckOutcome::Pass,
            format!(
                "{} face(s) compared at two weights",
                analysis.faces.iter().filter(|r| r.fiber.is_some()).count()
            ),
        ),
        Ok(bad) => check(
            name,
            scope,
            CheckOutcome::Fail,
            format!("classes differ on faces {bad:?}"),
        ),
        Err(e) => check(name, scope, CheckOutcome::Fail, e.to_string()),
    }
}

fn additivity_check(
    strata: &[(StratumReport, LaurentPoly)],
    total: Option<&SpectrumValue>,
) -> CheckResult {
    let Some(total) = total else {
        return check(
            "stratum-additivity",
            "affine",
            CheckOutcome::Skipped,
            "no total spectrum".into(),
        );
    };
    let sum = strata.iter().fold(
        SpectrumValue {
            value: SpectrumPoly::zero(),
            remainder: ClassExpr::zero(),
        },
        |acc, (s, _)| acc.add(s.analysis.spectrum.as_ref().expect("open gate")),
    );
    check(
        "stratum-additivity",
        "affine",
        pass_or_fail(sum == *total),
        format!("{} stratum spectra summed", strata.len()),
    )
}

/// A fixture with an independently known spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalibrationRow {
    pub fixture: String,
    pub variables: Vec<String>,
    pub expected: String,
    pub computed: Option<SpectrumPoly>,
    pub pass: bool,
    /// Sign relating the computed value to the expected one, when a sign
    /// is allowed.
    pub sign: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalibrationReport {
    pub convention: ChiConvention,
    pub rows: Vec<CalibrationRow>,
}

impl CalibrationReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

pub fn calibration_suite(convention: ChiConvention) -> CalibrationReport {
    let half = Rational64::new(1, 2);
    let zero = Rational64::from_integer(0);
    let one = Rational64::from_integer(1);
    let fixtures: [(&str, &[&str], SpectrumPoly, bool); 4] = [
        ("x", &["x"], SpectrumPoly::one(), false),
        ("x + x^-1", &["x"], SpectrumPoly::monomial(zero, 2), false),
        (
            "x^2",
            &["x"],
            SpectrumPoly::from_terms([(zero, 1), (half, 1)]),
            false,
        ),
        (
            "x*y",
            &["x", "y"],
            SpectrumPoly::from_terms([(one, 1), (zero, -1)]),
            true,
        ),
    ];
    let options = AnalyzeOptions {
        chi_convention: convention,
        ..AnalyzeOptions::default()
    };
    let rows = fixtures
        .into_iter()
        .map(|(text, vars, expected, signed)| {
            let computed = LaurentPoly::parse(text, vars)
                .ok()
                .and_then(|f| analyze_laurent(&f, &options).ok())
                .and_then(|r| r.spectrum)
                .filter(|s| !s.is_partial())
                .map(|s| s.value);
            let sign = match &computed {
                Some(c) if *c == expected => Some(1),
                Some(c) if signed && *c == expected.neg() => Some(-1),
                _ => None,
            };
            CalibrationRow {
                fixture: text.into(),
                variables: vars.iter().map(|v| v.to_string()).collect(),
                expected: if signed {
                    format!("±({expected})")
                } else {
                    expected.to_string()
                },
                pass: sign.is_some(),
                sign: if signed { sign } else { None },
                computed,
            }
        })
        .collect();
    CalibrationReport { convention, rows }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]: {} ({})",
            self.name,
            self.scope,
            self.outcome.tag(),
            self.details
        )
    }
}
