//! Class expressions built from cyclic orbits, tori and powers of the
//! Lefschetz class, and the reduction of the face fibres `{f_γ = 1}` to them.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::lattice::{self, LatticeError};
use crate::laurent::LaurentPoly;
use crate::nondegeneracy::edge_polynomial;
use crate::polytope::{face_restriction, Face, Polytope, PolytopeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MotivicError {
    #[error("weight has degree {0} on the face; it must be positive")]
    NonPositiveDegree(i64),
    #[error("edge polynomial {0} has a repeated root")]
    DegenerateEdge(String),
    #[error("edge lies on a line through the origin")]
    EdgeThroughOrigin,
    #[error("face of dimension {0} handed to the wrong reducer")]
    WrongDimension(usize),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `[μ_orbit free orbit] × [G_m^torus] × L^lefschetz`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub orbit: u64,
    pub torus: u32,
    pub lefschetz: u32,
}

impl Cell {
    pub const POINT: Cell = Cell {
        orbit: 1,
        torus: 0,
        lefschetz: 0,
    };

    pub fn new(orbit: u64, torus: u32, lefschetz: u32) -> Self {
        assert!(orbit >= 1, "orbit size must be positive");
        Cell {
            orbit,
            torus,
            lefschetz,
        }
    }

    pub fn torus(r: u32) -> Self {
        Cell::new(1, r, 0)
    }

    pub fn orbit(e: u64) -> Self {
        Cell::new(e, 0, 0)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.orbit > 1 {
            parts.push(format!("[mu_{}]", self.orbit));
        }
        match self.torus {
            0 => {}
            1 => parts.push("[G_m]".to_string()),
            r => parts.push(format!("[G_m^{r}]")),
        }
        match self.lefschetz {
            0 => {}
            1 => parts.push("L".to_string()),
            k => parts.push(format!("L^{k}")),
        }
        if parts.is_empty() {
            f.write_str("[pt]")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// The unreduced class of `{f_γ = 1}` for a face the reducers do not handle.
/// Identified by the face and `f_γ`; the weight is deliberately not part of
/// the identity, as the class does not depend on it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpaqueClass {
    pub vertices: Vec<Vec<i64>>,
    pub face_polynomial: String,
    pub ambient_dim: usize,
}

impl fmt::Display for OpaqueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{{{} = 1}} in G_m^{}]",
            self.face_polynomial, self.ambient_dim
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Cell(Cell),
    Opaque(OpaqueClass),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Cell(c) => c.fmt(f),
            Generator::Opaque(o) => o.fmt(f),
        }
    }
}

/// Integer combination of generators; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct ClassExpr {
    terms: BTreeMap<Generator, i64>,
}

impl ClassExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point() -> Self {
        Self::cell(Cell::POINT)
    }

    pub fn cell(c: Cell) -> Self {
        Self::generator(Generator::Cell(c), 1)
    }

    pub fn opaque(o: OpaqueClass) -> Self {
        Self::generator(Generator::Opaque(o), 1)
    }

    pub fn generator(g: Generator, coeff: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(g, coeff);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Generator, i64)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (g, c) in terms {
            out.add_term(g, c);
        }
        out
    }

    pub fn add_term(&mut self, g: Generator, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(g.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&g);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, i64)> {
        self.terms.iter().map(|(g, &c)| (g, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_term(g.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(g, c)| (g.clone(), c * k)))
    }

    /// Product with `[G_m^r] × L^k` (opaque terms are left as they are only
    /// when `r = k = 0`).
    pub fn times_cell(&self, torus: u32, lefschetz: u32) -> Option<Self> {
        let mut out = Self::zero();
        for (g, c) in self.terms() {
            match g {
                Generator::Cell(cell) => out.add_term(
                    Generator::Cell(Cell::new(
                        cell.orbit,
                        cell.torus + torus,
                        cell.lefschetz + lefschetz,
                    )),
                    c,
                ),
                Generator::Opaque(_) if torus == 0 && lefschetz == 0 => out.add_term(g.clone(), c),
                Generator::Opaque(_) => return None,
            }
        }
        Some(out)
    }

    pub fn is_opaque_free(&self) -> bool {
        self.terms.keys().all(|g| matches!(g, Generator::Cell(_)))
    }

    /// Splits into the cell part and the opaque part.
    pub fn split_opaque(&self) -> (Self, Self) {
        let mut cells = Self::zero();
        let mut opaque = Self::zero();
        for (g, c) in self.terms() {
            match g {
                Generator::Cell(_) => cells.add_term(g.clone(), c),
                Generator::Opaque(_) => opaque.add_term(g.clone(), c),
            }
        }
        (cells, opaque)
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{}*{g}", c.abs())?;
            }
        }
        Ok(())
    }
}

/// `{c x^a = 1} ⊂ G_m^d` with its `μ_N` action: `content(a)` components
/// permuted as one free orbit, each a torus of dimension `d - 1`.
pub fn reduce_vertex_fiber(exponent: &[i64], degree: i64) -> Result<ClassExpr, MotivicError> {
    if degree <= 0 {
        return Err(MotivicError::NonPositiveDegree(degree));
    }
    let d = exponent.len();
    let e = lattice::content(exponent) as u64;
    Ok(ClassExpr::cell(Cell::new(e, d as u32 - 1, 0)))
}

/// Options for edge reduction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeOptions {
    /// Accept edges with repeated roots, counting each root once.
    pub allow_degenerate: bool,
}

/// `{f_γ = 1}` for an edge. Writing `f_γ = y^b q(y₁)` in coordinates whose
/// first axis is the edge direction, the fibre is fibred over
/// `{q ≠ 0} ⊂ G_m` by `{y'^{b'} = const}`. When `b'` is primitive the
/// fibres are tori and the class is `[G_m^{d-1}] - ℓ[G_m^{d-2}]`. Otherwise
/// the fibration is a nontrivial cyclic cover and the class is kept opaque.
pub fn reduce_edge_fiber(
    f: &LaurentPoly,
    poly: &Polytope,
    face: &Face,
    degree: i64,
    options: EdgeOptions,
) -> Result<ClassExpr, MotivicError> {
    if face.dim != 1 {
        return Err(MotivicError::WrongDimension(face.dim));
    }
    if degree <= 0 {
        return Err(MotivicError::NonPositiveDegree(degree));
    }
    let d = f.dimension();
    let p = edge_polynomial(f, face);
    if !p.is_squarefree() && !options.allow_degenerate {
        return Err(MotivicError::DegenerateEdge(p.to_string()));
    }
    let roots = p.squarefree_part().degree().unwrap_or(0) as i64;
    let a0 = face.vertices[0].entries();
    let v = lattice::primitive(&lattice::sub(face.vertices[1].entries(), a0));
    let u = lattice::complete_to_unimodular(&[v], d)?;
    let b = lattice::vec_mat(a0, &lattice::unimodular_inverse(&u)?);
    let transverse = lattice::content(&b[1..]);
    if transverse == 0 {
        return Err(MotivicError::EdgeThroughOrigin);
    }
    if transverse > 1 {
        return opaque_fiber(f, poly, face);
    }
    let mut out = ClassExpr::cell(Cell::torus(d as u32 - 1));
    out.add_term(Generator::Cell(Cell::torus(d as u32 - 2)), -roots);
    Ok(out)
}

pub fn opaque_fiber(
    f: &LaurentPoly,
    poly: &Polytope,
    face: &Face,
) -> Result<ClassExpr, MotivicError> {
    let fg = face_restriction(f, poly, face)?;
    Ok(ClassExpr::opaque(OpaqueClass {
        vertices: face.vertices.iter().map(|v| v.to_vec()).collect(),
        face_polynomial: fg.to_string(),
        ambient_dim: f.dimension(),
    }))
}

/// `[f_γ^{-1}(1), μ_γ]` for a face of `Γ` and a weight with positive
/// degree `N` on it.
pub fn fiber_class(
    f: &LaurentPoly,
    poly: &Polytope,
    face: &Face,
    degree: i64,
    options: EdgeOptions,
) -> Result<ClassExpr, MotivicError> {
    match face.dim {
        0 => reduce_vertex_fiber(face.vertices[0].entries(), degree),
        1 => reduce_edge_fiber(f, poly, face, degree, options),
        _ => {
            if degree <= 0 {
                return Err(MotivicError::NonPositiveDegree(degree));
            }
            opaque_fiber(f, poly, face)
        }
    }
}

/// `-Σ χ_γ · class_γ`.
pub fn assemble_s_infinity<'a, I>(faces: I) -> ClassExpr
where
    I: IntoIterator<Item = (i64, &'a ClassExpr)>,
{
    faces
        .into_iter()
        .fold(ClassExpr::zero(), |acc, (chi, class)| {
            acc.sub(&class.scale(chi))
        })
}

/// The unreduced total-space symbol `[G_m^d \ f_γ^{-1}(0), f_γ^{-1}, σ(γ)]`.
pub fn total_space_symbol(face_polynomial: &LaurentPoly, weight: &[i64]) -> String {
    let w: Vec<String> = weight.iter().map(|x| x.to_string()).collect();
    format!(
        "[G_m^{} \\ {{{fp} = 0}}, ({fp})^-1, sigma({})]",
        face_polynomial.dimension(),
        w.join(","),
        fp = face_polynomial
    )
}
