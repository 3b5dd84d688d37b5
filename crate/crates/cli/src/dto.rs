//! Stable JSON layout of the reports. Rationals are `{num, den}`, exponent
//! vectors are integer arrays, spectra are lists of `{num, den, mult}`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use milnor_core::cone::{ChiConvention, ChiReport};
use milnor_core::motivic::{Cell, ClassExpr, Generator, OpaqueClass};
use milnor_core::nondegeneracy::{Certificate, NondegeneracyReport, Status};
use milnor_core::pipeline::{
    AnalysisReport, CalibrationReport, CheckOutcome, CheckResult, FaceRow, FacetSummary, Gate,
    LaurentAnalysis, Mode, PolytopeSummary, SkippedStratum, StratumReport,
};
use milnor_core::spectrum::{SpectrumPoly, SpectrumValue};
use milnor_core::{ExponentVector, Face, FaceLattice, Polytope};

/// Bumped on any change to the layout below.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DtoError {
    #[error("unknown {what} tag `{tag}`")]
    UnknownTag { what: &'static str, tag: String },
    #[error("invalid field {0}")]
    Invalid(&'static str),
}

fn unknown(what: &'static str, tag: &str) -> DtoError {
    DtoError::UnknownTag {
        what,
        tag: tag.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: i64,
    pub den: i64,
}

impl From<Rational64> for RationalJson {
    fn from(r: Rational64) -> Self {
        RationalJson {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl TryFrom<RationalJson> for Rational64 {
    type Error = DtoError;
    fn try_from(r: RationalJson) -> Result<Self, DtoError> {
        if r.den == 0 {
            return Err(DtoError::Invalid("den"));
        }
        Ok(Rational64::new(r.num, r.den))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumTermJson {
    pub num: i64,
    pub den: i64,
    pub mult: i64,
}

pub fn spectrum_terms(s: &SpectrumPoly) -> Vec<SpectrumTermJson> {
    s.terms()
        .map(|(e, m)| SpectrumTermJson {
            num: *e.numer(),
            den: *e.denom(),
            mult: m,
        })
        .collect()
}

pub fn spectrum_from_terms(terms: &[SpectrumTermJson]) -> Result<SpectrumPoly, DtoError> {
    terms
        .iter()
        .map(|t| {
            if t.den == 0 {
                Err(DtoError::Invalid("den"))
            } else {
                Ok((Rational64::new(t.num, t.den), t.mult))
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(SpectrumPoly::from_terms)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpaqueJson {
    pub vertices: Vec<Vec<i64>>,
    pub face_polynomial: String,
    pub ambient_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorJson {
    Cell {
        orbit: u64,
        torus: u32,
        lefschetz: u32,
    },
    Opaque {
        opaque: OpaqueJson,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTermJson {
    pub generator: GeneratorJson,
    pub coeff: i64,
}

pub fn class_json(x: &ClassExpr) -> Vec<ClassTermJson> {
    x.terms()
        .map(|(g, coeff)| ClassTermJson {
            generator: match g {
                Generator::Cell(c) => GeneratorJson::Cell {
                    orbit: c.orbit,
                    torus: c.torus,
                    lefschetz: c.lefschetz,
                },
                Generator::Opaque(o) => GeneratorJson::Opaque {
                    opaque: OpaqueJson {
                        vertices: o.vertices.clone(),
                        face_polynomial: o.face_polynomial.clone(),
                        ambient_dim: o.ambient_dim,
                    },
                },
            },
            coeff,
        })
        .collect()
}

pub fn class_from_json(terms: &[ClassTermJson]) -> Result<ClassExpr, DtoError> {
    let mut out = ClassExpr::zero();
    for t in terms {
        let g = match &t.generator {
            GeneratorJson::Cell {
                orbit,
                torus,
                lefschetz,
            } => {
                if *orbit == 0 {
                    return Err(DtoError::Invalid("orbit"));
                }
                Generator::Cell(Cell::new(*orbit, *torus, *lefschetz))
            }
            GeneratorJson::Opaque { opaque } => Generator::Opaque(OpaqueClass {
                vertices: opaque.vertices.clone(),
                face_polynomial: opaque.face_polynomial.clone(),
                ambient_dim: opaque.ambient_dim,
            }),
        };
        out.add_term(g, t.coeff);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub terms: Vec<SpectrumTermJson>,
    pub partial: bool,
    pub remainder: Vec<ClassTermJson>,
}

impl From<&SpectrumValue> for SpectrumJson {
    fn from(s: &SpectrumValue) -> Self {
        SpectrumJson {
            terms: spectrum_terms(&s.value),
            partial: s.is_partial(),
            remainder: class_json(&s.remainder),
        }
    }
}

impl SpectrumJson {
    pub fn to_value(&self) -> Result<SpectrumValue, DtoError> {
        let value = SpectrumValue {
            value: spectrum_from_terms(&self.terms)?,
            remainder: class_from_json(&self.remainder)?,
        };
        if value.is_partial() != self.partial {
            return Err(DtoError::Invalid("partial"));
        }
        Ok(value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetJson {
    pub outer_normal: Vec<i64>,
    pub support_value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub ambient_dim: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<FacetJson>,
    pub f_vector: Vec<usize>,
    pub commode: bool,
    pub normalized_volume: RationalJson,
}

impl From<&PolytopeSummary> for PolytopeJson {
    fn from(p: &PolytopeSummary) -> Self {
        PolytopeJson {
            ambient_dim: p.ambient_dim,
            dim: p.dim,
            vertices: p.vertices.iter().map(|v| v.to_vec()).collect(),
            facets: p
                .facets
                .iter()
                .map(|f| FacetJson {
                    outer_normal: f.outer_normal.clone(),
                    support_value: f.support_value,
                })
                .collect(),
            f_vector: p.f_vector.clone(),
            commode: p.commode,
            normalized_volume: p.normalized_volume.into(),
        }
    }
}

impl PolytopeJson {
    fn to_summary(&self) -> Result<PolytopeSummary, DtoError> {
        Ok(PolytopeSummary {
            ambient_dim: self.ambient_dim,
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .cloned()
                .map(ExponentVector::new)
                .collect(),
            facets: self
                .facets
                .iter()
                .map(|f| FacetSummary {
                    outer_normal: f.outer_normal.clone(),
                    support_value: f.support_value,
                })
                .collect(),
            f_vector: self.f_vector.clone(),
            commode: self.commode,
            normalized_volume: self.normalized_volume.try_into()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiJson {
    pub face_id: usize,
    pub closed_form: Option<i64>,
    pub cone: i64,
    pub used: Option<i64>,
    pub convention: String,
}

impl From<&ChiReport> for ChiJson {
    fn from(c: &ChiReport) -> Self {
        ChiJson {
            face_id: c.face_id,
            closed_form: c.chi_closed_form,
            cone: c.chi_cone,
            used: c.chi_used,
            convention: c.convention.tag().into(),
        }
    }
}

fn convention(tag: &str) -> Result<ChiConvention, DtoError> {
    ChiConvention::from_tag(tag).ok_or_else(|| unknown("chi convention", tag))
}

impl ChiJson {
    fn to_report(&self) -> Result<ChiReport, DtoError> {
        Ok(ChiReport {
            face_id: self.face_id,
            chi_closed_form: self.closed_form,
            chi_cone: self.cone,
            chi_used: self.used,
            convention: convention(&self.convention)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub face_id: usize,
    pub status: String,
    /// What a probabilistic status was based on.
    pub detail: Option<String>,
    pub witness: Option<String>,
    pub seed: Option<u64>,
}

fn status_json(s: &Status) -> (String, Option<String>) {
    let detail = match s {
        Status::ProbablyNondegenerate(why) => Some(why.clone()),
        _ => None,
    };
    (s.tag().into(), detail)
}

fn status_from(tag: &str, detail: Option<&String>) -> Result<Status, DtoError> {
    Ok(match tag {
        "exact-nondegenerate" => Status::ExactNondegenerate,
        "exact-degenerate" => Status::ExactDegenerate,
        "probably-nondegenerate" => {
            Status::ProbablyNondegenerate(detail.cloned().unwrap_or_default())
        }
        "unknown" => Status::Unknown,
        other => return Err(unknown("status", other)),
    })
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        let (status, detail) = status_json(&c.status);
        CertificateJson {
            face_id: c.face_id,
            status,
            detail,
            witness: c.witness.clone(),
            seed: c.seed,
        }
    }
}

impl CertificateJson {
    fn to_certificate(&self) -> Result<Certificate, DtoError> {
        Ok(Certificate {
            face_id: self.face_id,
            status: status_from(&self.status, self.detail.as_ref())?,
            witness: self.witness.clone(),
            seed: self.seed,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceJson {
    pub id: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub lattice_points: Vec<Vec<i64>>,
    pub in_coordinate_hyperplane: bool,
    pub face_polynomial: String,
    pub chi: ChiJson,
    pub certificate: CertificateJson,
    pub weight: Vec<i64>,
    pub degree: i64,
    pub fiber: Option<Vec<ClassTermJson>>,
    pub fiber_error: Option<String>,
    pub total_space: String,
}

impl From<&FaceRow> for FaceJson {
    fn from(r: &FaceRow) -> Self {
        FaceJson {
            id: r.face_id,
            dim: r.dim,
            vertices: r.vertices.iter().map(|v| v.to_vec()).collect(),
            lattice_points: r.lattice_points.iter().map(|v| v.to_vec()).collect(),
            in_coordinate_hyperplane: r.in_coordinate_hyperplane,
            face_polynomial: r.face_polynomial.clone(),
            chi: (&r.chi).into(),
            certificate: (&r.certificate).into(),
            weight: r.weight.to_vec(),
            degree: r.degree,
            fiber: r.fiber.as_ref().map(class_json),
            fiber_error: r.fiber_error.clone(),
            total_space: r.total_space.clone(),
        }
    }
}

impl FaceJson {
    fn to_row(&self) -> Result<FaceRow, DtoError> {
        Ok(FaceRow {
            face_id: self.id,
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .cloned()
                .map(ExponentVector::new)
                .collect(),
            lattice_points: self
                .lattice_points
                .iter()
                .cloned()
                .map(ExponentVector::new)
                .collect(),
            in_coordinate_hyperplane: self.in_coordinate_hyperplane,
            face_polynomial: self.face_polynomial.clone(),
            chi: self.chi.to_report()?,
            certificate: self.certificate.to_certificate()?,
            weight: ExponentVector::new(self.weight.clone()),
            degree: self.degree,
            fiber: self.fiber.as_deref().map(class_from_json).transpose()?,
            fiber_error: self.fiber_error.clone(),
            total_space: self.total_space.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateJson {
    pub status: String,
    pub reason: Option<String>,
}

impl From<&Gate> for GateJson {
    fn from(g: &Gate) -> Self {
        GateJson {
            status: g.tag().into(),
            reason: g.reason().map(str::to_string),
        }
    }
}

impl GateJson {
    fn to_gate(&self) -> Result<Gate, DtoError> {
        let reason = || self.reason.clone().unwrap_or_default();
        Ok(match self.status.as_str() {
            "open" => Gate::Open,
            "overridden" => Gate::Overridden(reason()),
            "refused" => Gate::Refused(reason()),
            other => return Err(unknown("gate", other)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumJson {
    pub zeroed: Vec<String>,
    pub polynomial: String,
    pub variables: Vec<String>,
    pub polytope: PolytopeJson,
    pub faces: Vec<FaceJson>,
    pub verdict: String,
    pub verdict_detail: Option<String>,
    pub gate: GateJson,
    pub s_infinity: Option<Vec<ClassTermJson>>,
    pub spectrum: Option<SpectrumJson>,
}

impl From<&StratumReport> for StratumJson {
    fn from(s: &StratumReport) -> Self {
        let a = &s.analysis;
        let (verdict, verdict_detail) = status_json(&a.verdict);
        StratumJson {
            zeroed: s.zeroed.clone(),
            polynomial: a.polynomial.clone(),
            variables: a.variables.clone(),
            polytope: (&a.polytope).into(),
            faces: a.faces.iter().map(FaceJson::from).collect(),
            verdict,
            verdict_detail,
            gate: (&a.gate).into(),
            s_infinity: a.s_infinity.as_ref().map(class_json),
            spectrum: a.spectrum.as_ref().map(SpectrumJson::from),
        }
    }
}

impl StratumJson {
    fn to_stratum(&self) -> Result<StratumReport, DtoError> {
        Ok(StratumReport {
            zeroed: self.zeroed.clone(),
            analysis: LaurentAnalysis {
                polynomial: self.polynomial.clone(),
                variables: self.variables.clone(),
                polytope: self.polytope.to_summary()?,
                faces: self
                    .faces
                    .iter()
                    .map(FaceJson::to_row)
                    .collect::<Result<_, _>>()?,
                verdict: status_from(&self.verdict, self.verdict_detail.as_ref())?,
                gate: self.gate.to_gate()?,
                s_infinity: self
                    .s_infinity
                    .as_deref()
                    .map(class_from_json)
                    .transpose()?,
                spectrum: self
                    .spectrum
                    .as_ref()
                    .map(SpectrumJson::to_value)
                    .transpose()?,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedJson {
    pub zeroed: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub scope: String,
    pub outcome: String,
    pub details: String,
}

impl From<&CheckResult> for CheckJson {
    fn from(c: &CheckResult) -> Self {
        CheckJson {
            name: c.name.clone(),
            scope: c.scope.clone(),
            outcome: c.outcome.tag().into(),
            details: c.details.clone(),
        }
    }
}

impl CheckJson {
    fn to_check(&self) -> Result<CheckResult, DtoError> {
        let outcome = match self.outcome.as_str() {
            "pass" => CheckOutcome::Pass,
            "fail" => CheckOutcome::Fail,
            "skipped" => CheckOutcome::Skipped,
            other => return Err(unknown("check outcome", other)),
        };
        Ok(CheckResult {
            name: self.name.clone(),
            scope: self.scope.clone(),
            outcome,
            details: self.details.clone(),
        })
    }
}

/// Output of `analyze`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonReport {
    pub schema_version: u32,
    pub input: String,
    pub variables: Vec<String>,
    pub mode: String,
    pub chi_convention: String,
    pub assume_nondegenerate: bool,
    pub seed: u64,
    pub strata: Vec<StratumJson>,
    pub skipped: Vec<SkippedJson>,
    pub gate: GateJson,
    pub s_infinity: Option<Vec<ClassTermJson>>,
    pub spectrum: Option<SpectrumJson>,
    pub checks: Vec<CheckJson>,
}

impl From<&AnalysisReport> for JsonReport {
    fn from(r: &AnalysisReport) -> Self {
        JsonReport {
            schema_version: SCHEMA_VERSION,
            input: r.input.clone(),
            variables: r.variables.clone(),
            mode: r.mode.tag().into(),
            chi_convention: r.chi_convention.tag().into(),
            assume_nondegenerate: r.assume_nondegenerate,
            seed: r.seed,
            strata: r.strata.iter().map(StratumJson::from).collect(),
            skipped: r
                .skipped
                .iter()
                .map(|s| SkippedJson {
                    zeroed: s.zeroed.clone(),
                    reason: s.reason.clone(),
                })
                .collect(),
            gate: (&r.gate).into(),
            s_infinity: r.s_infinity.as_ref().map(class_json),
            spectrum: r.spectrum.as_ref().map(SpectrumJson::from),
            checks: r.checks.iter().map(CheckJson::from).collect(),
        }
    }
}

impl JsonReport {
    pub fn to_report(&self) -> Result<AnalysisReport, DtoError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DtoError::Invalid("schema_version"));
        }
        let mode = match self.mode.as_str() {
            "laurent" => Mode::Laurent,
            "affine" => Mode::Affine,
            other => return Err(unknown("mode", other)),
        };
        Ok(AnalysisReport {
            input: self.input.clone(),
            variables: self.variables.clone(),
            mode,
            chi_convention: convention(&self.chi_convention)?,
            assume_nondegenerate: self.assume_nondegenerate,
            seed: self.seed,
            strata: self
                .strata
                .iter()
                .map(StratumJson::to_stratum)
                .collect::<Result<_, _>>()?,
            skipped: self
                .skipped
                .iter()
                .map(|s| SkippedStratum {
                    zeroed: s.zeroed.clone(),
                    reason: s.reason.clone(),
                })
                .collect(),
            gate: self.gate.to_gate()?,
            s_infinity: self
                .s_infinity
                .as_deref()
                .map(class_from_json)
                .transpose()?,
            spectrum: self
                .spectrum
                .as_ref()
                .map(SpectrumJson::to_value)
                .transpose()?,
            checks: self
                .checks
                .iter()
                .map(CheckJson::to_check)
                .collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFaceJson {
    pub id: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub lattice_points: Vec<Vec<i64>>,
    pub contains_origin: bool,
    pub in_coordinate_hyperplane: bool,
}

/// Output of `polytope`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeReportJson {
    pub schema_version: u32,
    pub input: String,
    pub variables: Vec<String>,
    pub polytope: PolytopeJson,
    pub faces: Vec<LatticeFaceJson>,
}

impl PolytopeReportJson {
    pub fn new(
        input: String,
        variables: Vec<String>,
        poly: &Polytope,
        lattice: &FaceLattice,
    ) -> Self {
        let face = |f: &Face| LatticeFaceJson {
            id: f.id,
            dim: f.dim,
            vertices: f.vertices.iter().map(|v| v.to_vec()).collect(),
            lattice_points: f.lattice_points.iter().map(|v| v.to_vec()).collect(),
            contains_origin: f.contains_origin,
            in_coordinate_hyperplane: f.in_coordinate_hyperplane,
        };
        PolytopeReportJson {
            schema_version: SCHEMA_VERSION,
            input,
            variables,
            polytope: (&PolytopeSummary::new(poly, lattice)).into(),
            faces: lattice.proper_faces().map(face).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiRowJson {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub in_coordinate_hyperplane: bool,
    #[serde(flatten)]
    pub chi: ChiJson,
}

/// Output of `chi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiReportJson {
    pub schema_version: u32,
    pub input: String,
    pub variables: Vec<String>,
    pub commode: bool,
    pub convention: String,
    pub rows: Vec<ChiRowJson>,
}

/// Output of `check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReportJson {
    pub schema_version: u32,
    pub input: String,
    pub variables: Vec<String>,
    pub seed: u64,
    pub certificates: Vec<CertificateJson>,
    pub verdict: String,
    pub verdict_detail: Option<String>,
}

impl CheckReportJson {
    pub fn new(
        input: String,
        variables: Vec<String>,
        seed: u64,
        report: &NondegeneracyReport,
    ) -> Self {
        let (verdict, verdict_detail) = status_json(&report.verdict);
        CheckReportJson {
            schema_version: SCHEMA_VERSION,
            input,
            variables,
            seed,
            certificates: report
                .certificates
                .iter()
                .map(CertificateJson::from)
                .collect(),
            verdict,
            verdict_detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationRowJson {
    pub fixture: String,
    pub variables: Vec<String>,
    pub expected: String,
    pub computed: Option<Vec<SpectrumTermJson>>,
    pub pass: bool,
    pub sign: Option<i64>,
}

/// Output of `calibrate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationReportJson {
    pub schema_version: u32,
    pub convention: String,
    pub rows: Vec<CalibrationRowJson>,
    pub all_pass: bool,
}

impl From<&CalibrationReport> for CalibrationReportJson {
    fn from(c: &CalibrationReport) -> Self {
        CalibrationReportJson {
            schema_version: SCHEMA_VERSION,
            convention: c.convention.tag().into(),
            rows: c
                .rows
                .iter()
                .map(|r| CalibrationRowJson {
                    fixture: r.fixture.clone(),
                    variables: r.variables.clone(),
                    expected: r.expected.clone(),
                    computed: r.computed.as_ref().map(spectrum_terms),
                    pass: r.pass,
                    sign: r.sign,
                })
                .collect(),
            all_pass: c.all_pass(),
        }
    }
}
