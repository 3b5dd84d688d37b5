//! Rational polyhedral cones: the normal cones `C_γ` of faces of the Newton
//! polyhedron, their Euler characteristic with compact supports, sample
//! weights and face degrees.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{self, IntMatrix};
use crate::laurent::ExponentVector;
use crate::polytope::{Face, Polytope, PolytopeError};

/// Largest infinity-norm scanned by [`sample_weight`].
pub const WEIGHT_SCAN_RADIUS: i64 = 6;

const PERCEPTRON_LIMIT: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("face contains the origin")]
    FaceContainsOrigin,
    #[error("malformed cone: {0}")]
    Malformed(String),
    #[error("polytope is not commode")]
    NotCommode,
    #[error("inner product is not constant on the face (weight outside the normal cone)")]
    NonConstantDegree,
    #[error("weight has non-positive degree {0} on the face")]
    NonPositiveDegree(i64),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Which faces of the cone are removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Openness {
    /// The relative interior.
    RelativeInterior,
    Closed,
    /// Simplicial cones only: `flags[i]` removes the facet opposite ray `i`.
    OpenFacets(Vec<bool>),
}

/// `relint/closure(cone(rays)) + span(lineality)`, with the rays spanning a
/// pointed cone whose span meets the lineality space only in 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCone {
    ambient_dim: usize,
    rays: IntMatrix,
    lineality: IntMatrix,
    openness: Openness,
}

/// Pulling triangulation of the pointed part of a cone, by ray indices.
#[derive(Debug, Clone)]
pub struct ConeTriangulation {
    pub simplices: Vec<Vec<usize>>,
    /// Ray sets of the facets of the pointed part (empty when it is a ray).
    pub boundary: Vec<Vec<usize>>,
}

impl ConeTriangulation {
    /// All nonempty cells of the triangulation.
    pub fn cells(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for s in &self.simplices {
            for mask in 1u64..(1u64 << s.len()) {
                let cell: Vec<usize> = (0..s.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| s[b])
                    .collect();
                out.insert(cell);
            }
        }
        out
    }

    pub fn is_interior(&self, cell: &[usize]) -> bool {
        !self
            .boundary
            .iter()
            .any(|facet| cell.iter().all(|r| facet.contains(r)))
    }
}

impl RationalCone {
    pub fn new(
        ambient_dim: usize,
        rays: IntMatrix,
        lineality: IntMatrix,
        openness: Openness,
    ) -> Result<Self, ConeError> {
        let mut uniq: Vec<Vec<i64>> = Vec::new();
        for r in rays {
            if r.len() != ambient_dim {
                return Err(ConeError::Malformed("ray of wrong dimension".into()));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(ConeError::Malformed("zero ray".into()));
            }
            let p = lattice::primitive(&r);
            if !uniq.contains(&p) {
                uniq.push(p);
            }
        }
        if lineality.iter().any(|l| l.len() != ambient_dim) {
            return Err(ConeError::Malformed(
                "lineality vector of wrong dimension".into(),
            ));
        }
        let lin_rank = lattice::column_echelon(&lineality, ambient_dim).rank;
        if lin_rank != lineality.len() {
            return Err(ConeError::Malformed("lineality basis is dependent".into()));
        }
        let ray_rank = lattice::column_echelon(&uniq, ambient_dim).rank;
        let joint: IntMatrix = uniq.iter().chain(lineality.iter()).cloned().collect();
        if lattice::column_echelon(&joint, ambient_dim).rank != ray_rank + lin_rank {
            return Err(ConeError::Malformed("rays meet the lineality space".into()));
        }
        if !uniq.is_empty() {
            let hull = Polytope::from_points(uniq.clone(), vec![true; uniq.len()])?;
            if hull.contains(&vec![0; ambient_dim]) {
                return Err(ConeError::Malformed(
                    "rays do not span a pointed cone".into(),
                ));
            }
        }
        if let Openness::OpenFacets(flags) = &openness {
            if flags.len() != uniq.len() || ray_rank != uniq.len() {
                return Err(ConeError::Malformed(
                    "facet flags require a simplicial cone with one flag per ray".into(),
                ));
            }
        }
        Ok(RationalCone {
            ambient_dim,
            rays: uniq,
            lineality,
            openness,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<i64>] {
        &self.lineality
    }

    pub fn openness(&self) -> &Openness {
        &self.openness
    }

    /// Dimension of the pointed part.
    pub fn pointed_dim(&self) -> usize {
        lattice::column_echelon(&self.rays, self.ambient_dim).rank
    }

    pub fn dim(&self) -> usize {
        self.pointed_dim() + self.lineality.len()
    }

    /// An integer functional strictly positive on every ray.
    pub fn positive_functional(&self) -> Result<Vec<i64>, ConeError> {
        let mut phi = vec![0i64; self.ambient_dim];
        for _ in 0..PERCEPTRON_LIMIT {
            match self.rays.iter().find(|r| lattice::dot(&phi, r) <= 0) {
                Some(r) => phi = lattice::add(&phi, r),
                None => return Ok(phi),
            }
        }
        Err(ConeError::Malformed("no positive functional found".into()))
    }

    /// Pulling triangulation of the transversal slice `cone ∩ {φ = const}`.
    /// `order` ranks the rays for pulling; `None` pulls in index order.
    pub fn triangulate(&self, order: Option<&[usize]>) -> Result<ConeTriangulation, ConeError> {
        if self.rays.is_empty() {
            return Ok(ConeTriangulation {
                simplices: Vec::new(),
                boundary: Vec::new(),
            });
        }
        let phi = self.positive_functional()?;
        let heights: Vec<i64> = self.rays.iter().map(|r| lattice::dot(&phi, r)).collect();
        let level = heights.iter().fold(1i64, |acc, h| acc.lcm(h));
        let slice: IntMatrix = self
            .rays
            .iter()
            .zip(&heights)
            .map(|(r, h)| lattice::scale(r, level / h))
            .collect();
        let poly = Polytope::from_points(slice.clone(), vec![true; slice.len()])?;
        // `Polytope` dedups nothing here (rays are distinct), so indices agree
        debug_assert_eq!(poly.points(), &slice[..]);
        let lattice_of_slice = poly.face_lattice();
        let default: Vec<usize> = (0..self.rays.len()).collect();
        let order = order.unwrap_or(&default);
        let mut simplices: Vec<Vec<usize>> = poly
            .triangulate(&lattice_of_slice, lattice_of_slice.top(), order)
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        simplices.sort();
        let boundary = poly.facets().iter().map(|f| f.points.clone()).collect();
        Ok(ConeTriangulation {
            simplices,
            boundary,
        })
    }

    /// Exact membership test consistent with the openness flags.
    pub fn contains(&self, w: &[i64]) -> Result<bool, ConeError> {
        if w.len() != self.ambient_dim {
            return Err(ConeError::Malformed("point of wrong dimension".into()));
        }
        match &self.openness {
            Openness::OpenFacets(flags) => {
                let all: Vec<usize> = (0..self.rays.len()).collect();
                Ok(match self.coordinates(&all, w) {
                    Some(lambda) => lambda.iter().zip(flags).all(|(l, &open)| {
                        if open {
                            l.is_positive()
                        } else {
                            !l.is_negative()
                        }
                    }),
                    None => false,
                })
            }
            Openness::Closed => {
                let tri = self.triangulate(None)?;
                if self.rays.is_empty() {
                    return Ok(self.coordinates(&[], w).is_some());
                }
                Ok(tri.simplices.iter().any(|s| {
                    self.coordinates(s, w)
                        .is_some_and(|l| l.iter().all(|x| !x.is_negative()))
                }))
            }
            Openness::RelativeInterior => {
                if self.rays.is_empty() {
                    return Ok(self.coordinates(&[], w).is_some());
                }
                let tri = self.triangulate(None)?;
                Ok(tri.cells().iter().filter(|c| tri.is_interior(c)).any(|c| {
                    self.coordinates(c, w)
                        .is_some_and(|l| l.iter().all(Signed::is_positive))
                }))
            }
        }
    }

    /// Coefficients of `w` on the rays in `cell` after removing a lineality
    /// component, if `w` lies in their span plus the lineality space.
    fn coordinates(&self, cell: &[usize], w: &[i64]) -> Option<Vec<BigRational>> {
        let cols: IntMatrix = cell
            .iter()
            .map(|&i| self.rays[i].clone())
            .chain(self.lineality.iter().cloned())
            .collect();
        solve_columns(&cols, w).map(|mut x| {
            x.truncate(cell.len());
            x
        })
    }
}

impl fmt::Display for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.openness {
            Openness::RelativeInterior => "relint".to_string(),
            Openness::Closed => "closed".to_string(),
            Openness::OpenFacets(flags) => format!("open-facets{flags:?}"),
        };
        write!(
            f,
            "{kind} cone(rays={:?}) + span{:?}",
            self.rays, self.lineality
        )
    }
}

/// Solves `Σ x_j cols[j] = target` exactly; the columns must be independent.
fn solve_columns(cols: &[Vec<i64>], target: &[i64]) -> Option<Vec<BigRational>> {
    let n = target.len();
    let m = cols.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            cols.iter()
                .map(|c| BigRational::from_integer(c[i].into()))
                .chain(std::iter::once(BigRational::from_integer(target[i].into())))
                .collect()
        })
        .collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..m {
        let Some(p) = (row..n).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for j in col..=m {
            a[row][j] = &a[row][j] * &inv;
        }
        for i in 0..n {
            if i != row && !a[i][col].is_zero() {
                let factor = a[i][col].clone();
                for j in col..=m {
                    let delta = &factor * &a[row][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..n).any(|i| !a[i][m].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); m];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][m].clone();
    }
    Some(x)
}

/// Euler characteristic with compact supports.
///
/// The pointed part is triangulated on a transversal slice; a relatively
/// open cell spanned by `j` rays contributes `(-1)^j`, and each lineality
/// direction contributes a factor `-1`.
pub fn euler_compact(cone: &RationalCone) -> Result<i64, ConeError> {
    let lineality_sign = if cone.lineality.len().is_multiple_of(2) { 1 } else { -1 };
    let parity = |n: usize| if n.is_multiple_of(2) { 1i64 } else { -1 };
    let pointed = match &cone.openness {
        Openness::RelativeInterior => {
            if cone.rays.is_empty() {
                1
            } else {
                let tri = cone.triangulate(None)?;
                tri.cells()
                    .iter()
                    .filter(|c| tri.is_interior(c))
                    .map(|c| parity(c.len()))
                    .sum()
            }
        }
        Openness::Closed => {
            let tri = cone.triangulate(None)?;
            1 + tri.cells().iter().map(|c| parity(c.len())).sum::<i64>()
        }
        Openness::OpenFacets(flags) => {
            // cell T survives iff it contains every ray whose opposite facet is removed
            let n = cone.rays.len();
            let required: Vec<usize> = (0..n).filter(|&i| flags[i]).collect();
            (0u64..(1u64 << n))
                .filter(|mask| required.iter().all(|&i| mask >> i & 1 == 1))
                .map(|mask| parity(mask.count_ones() as usize))
                .sum()
        }
    };
    Ok(lineality_sign * pointed)
}

/// The relatively open cone of weights whose maximizing face on the
/// polytope is exactly `face`.
pub fn normal_cone(face: &Face, poly: &Polytope) -> Result<RationalCone, ConeError> {
    if face.contains_origin {
        return Err(ConeError::FaceContainsOrigin);
    }
    if !poly.owns_face(face) {
        return Err(PolytopeError::ForeignFace.into());
    }
    let rays: IntMatrix = face
        .facet_ids
        .iter()
        .map(|&j| poly.facets()[j].outer_normal())
        .collect();
    RationalCone::new(
        poly.ambient_dim(),
        rays,
        poly.equations().to_vec(),
        Openness::RelativeInterior,
    )
}

/// Point ids of the polytope on which `⟨w, ·⟩` attains its maximum.
pub fn maximizing_points(poly: &Polytope, w: &[i64]) -> Vec<usize> {
    let values: Vec<i64> = poly.points().iter().map(|p| lattice::dot(w, p)).collect();
    let max = values.iter().copied().max().unwrap_or(0);
    (0..values.len()).filter(|&i| values[i] == max).collect()
}

/// Whether `w` lies in the relatively open normal cone of `face`.
pub fn in_normal_cone(poly: &Polytope, face: &Face, w: &[i64]) -> bool {
    maximizing_points(poly, w) == face.point_ids
}

/// `χ(C_γ)` for a commode polytope: 0 on faces inside a coordinate
/// hyperplane, `(-1)^(d - dim γ)` otherwise.
pub fn chi_commode(face: &Face, poly: &Polytope) -> Result<i64, ConeError> {
    if !poly.is_commode() {
        return Err(ConeError::NotCommode);
    }
    if face.in_coordinate_hyperplane {
        return Ok(0);
    }
    let codim = poly.ambient_dim() - face.dim;
    Ok(if codim.is_multiple_of(2) { 1 } else { -1 })
}

/// How `χ(C_γ)` is chosen on non-commode polytopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum ChiConvention {
    /// Only commode inputs get a value.
    CommodeOnly,
    /// `χ_c` of the relatively open real cone.
    #[default]
    ConeChi,
    /// `χ_c` of the pointed part of the cone, i.e. the cone value times
    /// `(-1)^(d - dim Γ_-)`.
    Calibrated,
}

impl ChiConvention {
    pub fn tag(self) -> &'static str {
        match self {
            ChiConvention::CommodeOnly => "commode-only",
            ChiConvention::ConeChi => "cone-chi",
            ChiConvention::Calibrated => "calibrated",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "commode-only" => Some(ChiConvention::CommodeOnly),
            "cone-chi" => Some(ChiConvention::ConeChi),
            "calibrated" => Some(ChiConvention::Calibrated),
            _ => None,
        }
    }

    /// Global sign applied to cone values on a non-commode polytope.
    pub fn non_commode_sign(self, poly: &Polytope) -> Option<i64> {
        match self {
            ChiConvention::CommodeOnly => None,
            ChiConvention::ConeChi => Some(1),
            ChiConvention::Calibrated => {
                let codim = poly.ambient_dim() - poly.dim();
                Some(if codim.is_multiple_of(2) { 1 } else { -1 })
            }
        }
    }
}

impl fmt::Display for ChiConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiReport {
    pub face_id: usize,
    /// Commode closed form; `None` when the polytope is not commode.
    pub chi_closed_form: Option<i64>,
    pub chi_cone: i64,
    /// Value used for assembly; `None` if the convention gives none.
    pub chi_used: Option<i64>,
    pub convention: ChiConvention,
}

impl ChiReport {
    /// Closed form and cone value disagree (faces in coordinate hyperplanes).
    pub fn disagreement(&self) -> bool {
        self.chi_closed_form.is_some_and(|c| c != self.chi_cone)
    }
}

pub fn chi(
    face: &Face,
    poly: &Polytope,
    convention: ChiConvention,
) -> Result<ChiReport, ConeError> {
    let chi_cone = euler_compact(&normal_cone(face, poly)?)?;
    let chi_closed_form = if poly.is_commode() {
        Some(chi_commode(face, poly)?)
    } else {
        None
    };
    let chi_used = match chi_closed_form {
        Some(c) => Some(c),
        None => convention.non_commode_sign(poly).map(|s| s * chi_cone),
    };
    Ok(ChiReport {
        face_id: face.id,
        chi_closed_form,
        chi_cone,
        chi_used,
        convention,
    })
}

/// A lattice point of the relatively open normal cone of `face`: the
/// lexicographically smallest point of minimal infinity norm up to
/// [`WEIGHT_SCAN_RADIUS`], else the sum of the cone's generators.
pub fn sample_weight(face: &Face, poly: &Polytope) -> Result<ExponentVector, ConeError> {
    let cone = normal_cone(face, poly)?;
    let d = poly.ambient_dim();
    for radius in 1..=WEIGHT_SCAN_RADIUS {
        let mut w = vec![-radius; d];
        loop {
            if w.iter().any(|x| x.abs() == radius) && in_normal_cone(poly, face, &w) {
                return Ok(ExponentVector::new(w));
            }
            if !next_in_box(&mut w, radius) {
                break;
            }
        }
    }
    let sum = cone
        .rays()
        .iter()
        .fold(vec![0i64; d], |acc, r| lattice::add(&acc, r));
    debug_assert!(in_normal_cone(poly, face, &sum));
    Ok(ExponentVector::new(sum))
}

/// A second interior weight, distinct from `first`: `first` plus every
/// generator of the cone and every lineality vector.
pub fn second_weight(
    face: &Face,
    poly: &Polytope,
    first: &[i64],
) -> Result<ExponentVector, ConeError> {
    let cone = normal_cone(face, poly)?;
    let shifted = cone
        .rays()
        .iter()
        .chain(cone.lineality())
        .fold(first.to_vec(), |acc, r| lattice::add(&acc, r));
    debug_assert!(in_normal_cone(poly, face, &shifted));
    Ok(ExponentVector::new(shifted))
}

fn next_in_box(w: &mut [i64], radius: i64) -> bool {
    for i in (0..w.len()).rev() {
        if w[i] < radius {
            w[i] += 1;
            for x in w.iter_mut().skip(i + 1) {
                *x = -radius;
            }
            return true;
        }
    }
    false
}

/// `N_γ = ⟨w, a⟩` for any `a` on the face.
pub fn face_degree(face: &Face, w: &[i64]) -> Result<i64, ConeError> {
    let mut values = face.vertices.iter().map(|v| lattice::dot(w, v));
    let first = values.next().ok_or(ConeError::NonConstantDegree)?;
    if values.any(|v| v != first) {
        return Err(ConeError::NonConstantDegree);
    }
    if first <= 0 {
        return Err(ConeError::NonPositiveDegree(first));
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;
    use crate::polytope::newton_polytope_at_infinity;

    fn setup(text: &str, vars: &[&str]) -> (Polytope, crate::polytope::FaceLattice) {
        let f = LaurentPoly::parse(text, vars).unwrap();
        let p = newton_polytope_at_infinity(&f).unwrap();
        let l = p.face_lattice();
        (p, l)
    }

    fn find<'a>(l: &'a crate::polytope::FaceLattice, verts: &[&[i64]]) -> &'a Face {
        let mut want: Vec<ExponentVector> = verts
            .iter()
            .map(|v| ExponentVector::new(v.to_vec()))
            .collect();
        want.sort();
        l.faces().iter().find(|f| f.vertices == want).expect("face")
    }

    #[test]
    fn half_plane_normal_cone_of_xy() {
        let (p, l) = setup("x*y", &["x", "y"]);
        let v = find(&l, &[&[1, 1]]);
        let cone = normal_cone(v, &p).unwrap();
        assert_eq!(cone.dim(), 2);
        assert_eq!(cone.lineality().len(), 1);
        for (w, inside) in [
            ([1, 0], true),
            ([3, -2], true),
            ([1, -1], false),
            ([-1, 0], false),
        ] {
            assert_eq!(cone.contains(&w).unwrap(), inside, "{w:?}");
            assert_eq!(in_normal_cone(&p, v, &w), inside, "{w:?}");
        }
        assert_eq!(euler_compact(&cone).unwrap(), 1);
    }

    #[test]
    fn open_ray_of_mirror_edge() {
        let (p, l) = setup("x + y + x^-1*y^-1", &["x", "y"]);
        let e = find(&l, &[&[1, 0], &[0, 1]]);
        let cone = normal_cone(e, &p).unwrap();
        assert_eq!(cone.rays(), &[vec![1, 1]]);
        assert!(cone.lineality().is_empty());
        assert_eq!(euler_compact(&cone).unwrap(), -1);
    }

    #[test]
    fn euler_characteristics_of_basic_cones() {
        let ray = RationalCone::new(1, vec![vec![1]], vec![], Openness::RelativeInterior).unwrap();
        assert_eq!(euler_compact(&ray).unwrap(), -1);
        let quadrant = RationalCone::new(
            2,
            vec![vec![1, 0], vec![0, 1]],
            vec![],
            Openness::RelativeInterior,
        )
        .unwrap();
        assert_eq!(euler_compact(&quadrant).unwrap(), 1);
        let closed =
            RationalCone::new(2, vec![vec![1, 0], vec![0, 1]], vec![], Openness::Closed).unwrap();
        assert_eq!(euler_compact(&closed).unwrap(), 0);
        let half_open = RationalCone::new(
            2,
            vec![vec![1, 0], vec![0, 1]],
            vec![],
            Openness::OpenFacets(vec![true, false]),
        )
        .unwrap();
        assert_eq!(euler_compact(&half_open).unwrap(), 0);
    }

    #[test]
    fn half_plane_by_cell_decomposition() {
        // {w1 + w2 > 0} = three open 2-cones and two open rays
        let two = |a: [i64; 2], b: [i64; 2]| {
            RationalCone::new(
                2,
                vec![a.to_vec(), b.to_vec()],
                vec![],
                Openness::RelativeInterior,
            )
            .unwrap()
        };
        let ray = |a: [i64; 2]| {
            RationalCone::new(2, vec![a.to_vec()], vec![], Openness::RelativeInterior).unwrap()
        };
        let pieces = [
            two([1, -1], [1, 0]),
            two([1, 0], [0, 1]),
            two([0, 1], [-1, 1]),
            ray([1, 0]),
            ray([0, 1]),
        ];
        let total: i64 = pieces.iter().map(|c| euler_compact(c).unwrap()).sum();
        let half_plane = RationalCone::new(
            2,
            vec![vec![1, 0]],
            vec![vec![1, -1]],
            Openness::RelativeInterior,
        )
        .unwrap();
        assert_eq!(total, euler_compact(&half_plane).unwrap());
        assert_eq!(total, 1);
        // the pieces partition a sample of lattice points of the half-plane
        for w1 in -4..=4i64 {
            for w2 in -4..=4i64 {
                let hits = pieces
                    .iter()
                    .filter(|c| c.contains(&[w1, w2]).unwrap())
                    .count();
                assert_eq!(hits, usize::from(w1 + w2 > 0), "({w1},{w2})");
                assert_eq!(half_plane.contains(&[w1, w2]).unwrap(), w1 + w2 > 0);
            }
        }
    }

    #[test]
    fn non_pointed_rays_are_malformed() {
        let err = RationalCone::new(
            1,
            vec![vec![1], vec![-1]],
            vec![],
            Openness::RelativeInterior,
        );
        assert!(matches!(err, Err(ConeError::Malformed(_))));
        let err = RationalCone::new(
            2,
            vec![vec![1, 1]],
            vec![vec![2, 2]],
            Openness::RelativeInterior,
        );
        assert!(matches!(err, Err(ConeError::Malformed(_))));
    }

    #[test]
    fn commode_closed_form_on_mirror() {
        let (p, l) = setup("x + y + x^-1*y^-1", &["x", "y"]);
        assert_eq!(chi_commode(find(&l, &[&[1, 0]]), &p).unwrap(), 0);
        assert_eq!(chi_commode(find(&l, &[&[-1, -1]]), &p).unwrap(), 1);
        for e in l.faces_gamma().into_iter().filter(|f| f.dim == 1) {
            assert_eq!(chi_commode(e, &p).unwrap(), -1);
        }
        let (q, lq) = setup("x", &["x"]);
        assert_eq!(
            chi_commode(find(&lq, &[&[1]]), &q),
            Err(ConeError::NotCommode)
        );
    }

    #[test]
    fn chi_reports() {
        let (p, l) = setup("x + y + x^-1*y^-1", &["x", "y"]);
        let r = chi(find(&l, &[&[-1, -1]]), &p, ChiConvention::ConeChi).unwrap();
        assert_eq!((r.chi_used, r.chi_cone), (Some(1), 1));
        let r = chi(find(&l, &[&[1, 0]]), &p, ChiConvention::ConeChi).unwrap();
        assert_eq!((r.chi_used, r.chi_cone), (Some(0), 1));
        assert!(r.disagreement());

        let (q, lq) = setup("x*y", &["x", "y"]);
        let v = find(&lq, &[&[1, 1]]);
        assert_eq!(
            chi(v, &q, ChiConvention::ConeChi).unwrap().chi_used,
            Some(1)
        );
        assert_eq!(
            chi(v, &q, ChiConvention::Calibrated).unwrap().chi_used,
            Some(-1)
        );
        assert_eq!(
            chi(v, &q, ChiConvention::CommodeOnly).unwrap().chi_used,
            None
        );
    }

    #[test]
    fn sample_weights() {
        let (p, l) = setup("x + y + x^-1*y^-1", &["x", "y"]);
        assert_eq!(
            sample_weight(find(&l, &[&[1, 0], &[0, 1]]), &p)
                .unwrap()
                .entries(),
            &[1, 1]
        );
        assert_eq!(
            sample_weight(find(&l, &[&[1, 0], &[-1, -1]]), &p)
                .unwrap()
                .entries(),
            &[1, -2]
        );
        let (q, lq) = setup("x", &["x"]);
        assert_eq!(
            sample_weight(find(&lq, &[&[1]]), &q).unwrap().entries(),
            &[1]
        );
        for f in l.faces_gamma() {
            let w = sample_weight(f, &p).unwrap();
            let w2 = second_weight(f, &p, &w).unwrap();
            assert_ne!(w, w2);
            assert!(in_normal_cone(&p, f, &w2));
        }
    }

    #[test]
    fn face_degrees() {
        let (p, l) = setup("x*y", &["x", "y"]);
        let v = find(&l, &[&[1, 1]]);
        assert_eq!(face_degree(v, &[1, 0]).unwrap(), 1);
        assert_eq!(
            face_degree(v, &[-1, 0]),
            Err(ConeError::NonPositiveDegree(-1))
        );
        let _ = p;
        let (_, lq) = setup("x^2", &["x"]);
        assert_eq!(face_degree(find(&lq, &[&[2]]), &[1]).unwrap(), 2);
        let (_, lm) = setup("x + y + x^-1*y^-1", &["x", "y"]);
        let e = find(&lm, &[&[1, 0], &[0, 1]]);
        assert_eq!(face_degree(e, &[1, 1]).unwrap(), 1);
        assert_eq!(face_degree(e, &[1, 0]), Err(ConeError::NonConstantDegree));
    }
}
