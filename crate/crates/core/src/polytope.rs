//! Exact lattice polytopes: brute-force facet search in an affine lattice
//! chart, the full face lattice, pulling triangulations and normalized volume.
//!
//! Polytopes may be lower dimensional. All facet data is computed in a
//! unimodular chart of the affine hull and lifted back to `Z^d`, so facet
//! normals are only determined modulo the orthogonal complement of the hull
//! (returned by [`Polytope::equations`]).

use std::collections::{BTreeSet, HashSet};

use num_rational::Rational64;
use thiserror::Error;

use crate::lattice::{self, IntMatrix};
use crate::laurent::{ExponentVector, LaurentPoly};

/// Above this many points the brute-force facet search is refused.
pub const MAX_POINTS: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polynomial is constant; its Newton polyhedron at infinity is a point")]
    ConstantInput,
    #[error("empty point set")]
    Empty,
    #[error("too many points for exact facet search ({0} > {MAX_POINTS})")]
    TooManyPoints(usize),
    #[error("points have inconsistent dimensions")]
    DimensionMismatch,
    #[error("face does not belong to this polytope")]
    ForeignFace,
}

/// A facet given by a primitive inner normal: `⟨inner_normal, x⟩ >= offset`
/// on the polytope, with equality exactly on `points`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub inner_normal: Vec<i64>,
    pub offset: i64,
    pub points: Vec<usize>,
}

impl Facet {
    pub fn outer_normal(&self) -> Vec<i64> {
        lattice::scale(&self.inner_normal, -1)
    }

    /// Maximum of the outer normal over the polytope.
    pub fn support_value(&self) -> i64 {
        -self.offset
    }
}

#[derive(Debug, Clone)]
pub struct Polytope {
    ambient_dim: usize,
    points: Vec<Vec<i64>>,
    in_support: Vec<bool>,
    affine_dim: usize,
    base: Vec<i64>,
    chart: IntMatrix,
    vertices: Vec<usize>,
    facets: Vec<Facet>,
    equations: IntMatrix,
}

/// A nonempty face of a polytope (the polytope itself included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub dim: usize,
    /// Indices (into [`Polytope::points`]) of the vertices of the face.
    pub vertex_ids: Vec<usize>,
    pub vertices: Vec<ExponentVector>,
    /// Indices of every generating point lying on the face.
    pub point_ids: Vec<usize>,
    /// Generating points on the face that come from the support.
    pub lattice_points: Vec<ExponentVector>,
    pub contains_origin: bool,
    pub in_coordinate_hyperplane: bool,
    /// Saturated basis of the direction lattice of the face.
    pub direction_basis: IntMatrix,
    pub base_point: ExponentVector,
    /// Facets containing the face.
    pub facet_ids: Vec<usize>,
}

impl Face {
    /// Whether an integer point lies in the affine span of the face and on
    /// every facet hyperplane through it.
    pub fn contains_point(&self, poly: &Polytope, x: &[i64]) -> bool {
        poly.contains(x)
            && self
                .facet_ids
                .iter()
                .all(|&j| lattice::dot(&poly.facets[j].inner_normal, x) == poly.facets[j].offset)
    }
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    faces: Vec<Face>,
    /// `covers[i]`: faces of dimension `dim + 1` containing face `i`.
    covers: Vec<Vec<usize>>,
    /// `covered_by[i]`: faces of dimension `dim - 1` contained in face `i`.
    subfaces: Vec<Vec<usize>>,
    top: usize,
}

impl Polytope {
    /// Convex hull of a finite set of integer points. `in_support[i]` marks the
    /// points that count as lattice points of the support.
    pub fn from_points(
        points: Vec<Vec<i64>>,
        in_support: Vec<bool>,
    ) -> Result<Self, PolytopeError> {
        let d = points.first().ok_or(PolytopeError::Empty)?.len();
        if points.iter().any(|p| p.len() != d) || in_support.len() != points.len() {
            return Err(PolytopeError::DimensionMismatch);
        }
        let mut seen = HashSet::new();
        let mut pts = Vec::new();
        let mut flags = Vec::new();
        for (p, s) in points.into_iter().zip(in_support) {
            if seen.insert(p.clone()) {
                pts.push(p);
                flags.push(s);
            } else if s {
                let i = pts.iter().position(|q| *q == p).expect("seen");
                flags[i] = true;
            }
        }
        if pts.len() > MAX_POINTS {
            return Err(PolytopeError::TooManyPoints(pts.len()));
        }
        let base = pts[0].clone();
        let diffs: IntMatrix = pts.iter().map(|p| lattice::sub(p, &base)).collect();
        let ech = lattice::column_echelon(&diffs, d);
        let k = ech.rank;
        let coords: Vec<Vec<i64>> = ech.reduced.iter().map(|r| r[..k].to_vec()).collect();
        let chart_facets = chart_facets(&coords, k);
        let facets = chart_facets
            .into_iter()
            .map(|(n, h, on)| {
                let mut lifted = n.clone();
                lifted.resize(d, 0);
                let outer = lattice::mat_vec(&ech.transform, &lifted);
                let value = h + lattice::dot(&outer, &base);
                Facet {
                    inner_normal: lattice::scale(&outer, -1),
                    offset: -value,
                    points: on,
                }
            })
            .collect::<Vec<_>>();
        let mut poly = Polytope {
            ambient_dim: d,
            points: pts,
            in_support: flags,
            affine_dim: k,
            base,
            chart: ech.transform.clone(),
            vertices: Vec::new(),
            facets,
            equations: ech.orthogonal_basis(),
        };
        poly.vertices = poly.compute_vertices();
        Ok(poly)
    }

    fn compute_vertices(&self) -> Vec<usize> {
        if self.affine_dim == 0 {
            return vec![0];
        }
        // a point is a vertex iff the facets through it cut out only that point
        (0..self.points.len())
            .filter(|&i| {
                let mut set: BTreeSet<usize> = (0..self.points.len()).collect();
                for f in &self.facets {
                    if f.points.contains(&i) {
                        set.retain(|j| f.points.contains(j));
                    }
                }
                set.len() == 1
            })
            .collect()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.ambient_dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn point_in_support(&self, i: usize) -> bool {
        self.in_support[i]
    }

    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertices(&self) -> Vec<ExponentVector> {
        self.vertices
            .iter()
            .map(|&i| ExponentVector::new(self.points[i].clone()))
            .collect()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Integer basis of the vectors orthogonal to the affine hull.
    pub fn equations(&self) -> &[Vec<i64>] {
        &self.equations
    }

    /// Base point of the affine chart.
    pub fn base_point(&self) -> &[i64] {
        &self.base
    }

    /// Unimodular matrix `V`; chart coordinates of `x` are the first
    /// `dim()` entries of `(x - base) * V`.
    pub fn chart(&self) -> &IntMatrix {
        &self.chart
    }

    /// Exact membership of an integer point.
    pub fn contains(&self, x: &[i64]) -> bool {
        let rel = lattice::sub(x, &self.base);
        self.equations.iter().all(|e| lattice::dot(e, &rel) == 0)
            && self
                .facets
                .iter()
                .all(|f| lattice::dot(&f.inner_normal, x) >= f.offset)
    }

    /// Whether `face` was produced by this polytope's face lattice: its facet
    /// ids are valid and cut out exactly its points.
    pub fn owns_face(&self, face: &Face) -> bool {
        if face.facet_ids.iter().any(|&j| j >= self.facets.len())
            || face.point_ids.iter().any(|&i| i >= self.points.len())
        {
            return false;
        }
        let cut: Vec<usize> = (0..self.points.len())
            .filter(|i| {
                face.facet_ids
                    .iter()
                    .all(|&j| self.facets[j].points.contains(i))
            })
            .collect();
        cut == face.point_ids
            && face
                .vertices
                .iter()
                .all(|v| face.point_ids.iter().any(|&i| self.points[i] == **v))
    }

    /// Whether the origin lies in the interior of the polytope (which must
    /// then be full dimensional).
    pub fn is_commode(&self) -> bool {
        self.is_full_dimensional() && self.facets.iter().all(|f| f.offset < 0)
    }

    /// `d!` times the Euclidean volume; zero unless full dimensional.
    pub fn normalized_volume(&self) -> Rational64 {
        if !self.is_full_dimensional() {
            return Rational64::from_integer(0);
        }
        let lattice = self.face_lattice();
        let order: Vec<usize> = (0..self.points.len()).collect();
        let total: i64 = self
            .triangulate(&lattice, lattice.top(), &order)
            .iter()
            .map(|simplex| self.simplex_volume(simplex))
            .sum();
        Rational64::from_integer(total)
    }

    /// `|det(v_1 - v_0, ..., v_d - v_0)|` of a full-dimensional simplex.
    pub fn simplex_volume(&self, simplex: &[usize]) -> i64 {
        let v0 = &self.points[simplex[0]];
        let rows: IntMatrix = simplex[1..]
            .iter()
            .map(|&i| lattice::sub(&self.points[i], v0))
            .collect();
        lattice::determinant(&rows).abs()
    }

    /// Pulling triangulation of a face: vertices are pulled in the order
    /// given by `order` (a permutation of point indices). Each simplex is a
    /// list of `dim + 1` point indices.
    pub fn triangulate(
        &self,
        lattice: &FaceLattice,
        face: usize,
        order: &[usize],
    ) -> Vec<Vec<usize>> {
        let f = &lattice.faces[face];
        if f.dim == 0 {
            return vec![f.vertex_ids.clone()];
        }
        let rank = |i: usize| order.iter().position(|&j| j == i).unwrap_or(usize::MAX);
        let apex = *f
            .vertex_ids
            .iter()
            .min_by_key(|&&v| (rank(v), v))
            .expect("faces have vertices");
        let mut out = Vec::new();
        for &g in &lattice.subfaces[face] {
            if lattice.faces[g].vertex_ids.contains(&apex) {
                continue;
            }
            for mut simplex in self.triangulate(lattice, g, order) {
                simplex.insert(0, apex);
                out.push(simplex);
            }
        }
        out
    }

    /// All nonempty faces with their incidences.
    pub fn face_lattice(&self) -> FaceLattice {
        let all: Vec<usize> = (0..self.points.len()).collect();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        sets.insert(all.clone());
        let mut frontier: Vec<Vec<usize>> = self.facets.iter().map(|f| f.points.clone()).collect();
        while let Some(s) = frontier.pop() {
            if s.is_empty() || !sets.insert(s.clone()) {
                continue;
            }
            for f in &self.facets {
                let meet: Vec<usize> = s.iter().copied().filter(|i| f.points.contains(i)).collect();
                if !meet.is_empty() && meet.len() < s.len() && !sets.contains(&meet) {
                    frontier.push(meet);
                }
            }
        }
        let vertex_set: BTreeSet<usize> = self.vertices.iter().copied().collect();
        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|point_ids| self.make_face(point_ids, &vertex_set))
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        for (i, f) in faces.iter_mut().enumerate() {
            f.id = i;
        }
        let n = faces.len();
        let mut covers = vec![Vec::new(); n];
        let mut subfaces = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if faces[j].dim == faces[i].dim + 1
                    && faces[i]
                        .point_ids
                        .iter()
                        .all(|p| faces[j].point_ids.contains(p))
                {
                    covers[i].push(j);
                    subfaces[j].push(i);
                }
            }
        }
        let top = faces
            .iter()
            .position(|f| f.point_ids.len() == self.points.len())
            .expect("polytope is a face of itself");
        FaceLattice {
            faces,
            covers,
            subfaces,
            top,
        }
    }

    fn make_face(&self, point_ids: Vec<usize>, vertex_set: &BTreeSet<usize>) -> Face {
        let d = self.ambient_dim;
        let vertex_ids: Vec<usize> = point_ids
            .iter()
            .copied()
            .filter(|i| vertex_set.contains(i))
            .collect();
        let base = self.points[vertex_ids[0]].clone();
        let diffs: IntMatrix = point_ids
            .iter()
            .map(|&i| lattice::sub(&self.points[i], &base))
            .collect();
        let ech = lattice::column_echelon(&diffs, d);
        let facet_ids: Vec<usize> = self
            .facets
            .iter()
            .enumerate()
            .filter(|(_, f)| point_ids.iter().all(|p| f.points.contains(p)))
            .map(|(j, _)| j)
            .collect();
        let mut vertices: Vec<ExponentVector> = vertex_ids
            .iter()
            .map(|&i| ExponentVector::new(self.points[i].clone()))
            .collect();
        vertices.sort();
        let in_coordinate_hyperplane =
            (0..d).any(|c| vertex_ids.iter().all(|&v| self.points[v][c] == 0));
        let origin = vec![0i64; d];
        let contains_origin =
            self.contains(&origin) && facet_ids.iter().all(|&j| self.facets[j].offset == 0);
        Face {
            id: 0,
            dim: ech.rank,
            vertex_ids,
            vertices,
            lattice_points: point_ids
                .iter()
                .filter(|&&i| self.in_support[i])
                .map(|&i| ExponentVector::new(self.points[i].clone()))
                .collect(),
            point_ids,
            contains_origin,
            in_coordinate_hyperplane,
            direction_basis: ech.saturated_basis(),
            base_point: ExponentVector::new(base),
            facet_ids,
        }
    }
}

impl FaceLattice {
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Id of the polytope itself.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn covers(&self, id: usize) -> &[usize] {
        &self.covers[id]
    }

    pub fn subfaces(&self, id: usize) -> &[usize] {
        &self.subfaces[id]
    }

    /// Proper faces (everything except the polytope itself).
    pub fn proper_faces(&self) -> impl Iterator<Item = &Face> {
        let top = self.top;
        self.faces.iter().filter(move |f| f.id != top)
    }

    /// Number of faces of each dimension `0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let top_dim = self.faces[self.top].dim;
        let mut out = vec![0; top_dim + 1];
        for f in &self.faces {
            out[f.dim] += 1;
        }
        out
    }

    /// `Σ (-1)^dim` over all faces including the empty face (dimension -1)
    /// and the polytope itself; zero for every polytope.
    pub fn euler_poincare_sum(&self) -> i64 {
        self.faces
            .iter()
            .map(|f| if f.dim % 2 == 0 { 1 } else { -1 })
            .sum::<i64>()
            - 1
    }

    /// Faces of the Newton polyhedron at infinity not containing the origin.
    pub fn faces_gamma(&self) -> Vec<&Face> {
        self.faces.iter().filter(|f| !f.contains_origin).collect()
    }
}

/// Newton polyhedron at infinity: convex hull of `supp(f) ∪ {0}`.
pub fn newton_polytope_at_infinity(f: &LaurentPoly) -> Result<Polytope, PolytopeError> {
    if f.is_constant() {
        return Err(PolytopeError::ConstantInput);
    }
    let d = f.dimension();
    let mut points: Vec<Vec<i64>> = f
        .support()
        .into_iter()
        .map(ExponentVector::into_inner)
        .collect();
    let mut flags = vec![true; points.len()];
    points.push(vec![0; d]);
    flags.push(false);
    Polytope::from_points(points, flags)
}

/// `f_γ`: the terms of `f` whose exponents lie on the face.
pub fn face_restriction(
    f: &LaurentPoly,
    poly: &Polytope,
    face: &Face,
) -> Result<LaurentPoly, PolytopeError> {
    if poly.ambient_dim() != f.dimension() || !poly.owns_face(face) {
        return Err(PolytopeError::ForeignFace);
    }
    let support_ok = face
        .lattice_points
        .iter()
        .all(|v| f.coefficient(v).is_some());
    if !support_ok {
        return Err(PolytopeError::ForeignFace);
    }
    Ok(f.filter_terms(|e| face.contains_point(poly, e)))
}

/// Facets of a full-dimensional point configuration in `Z^k`, as
/// `(primitive outer normal, support value, points on the facet)`.
fn chart_facets(coords: &[Vec<i64>], k: usize) -> Vec<(Vec<i64>, i64, Vec<usize>)> {
    let mut out: Vec<(Vec<i64>, i64, Vec<usize>)> = Vec::new();
    if k == 0 {
        return out;
    }
    let n = coords.len();
    let mut found: HashSet<Vec<i64>> = HashSet::new();
    let mut subset: Vec<usize> = (0..k).collect();
    if n < k {
        return out;
    }
    loop {
        let p0 = &coords[subset[0]];
        let rows: IntMatrix = subset[1..]
            .iter()
            .map(|&i| lattice::sub(&coords[i], p0))
            .collect();
        let normal = lattice::primitive(&cofactor_normal(&rows, k));
        if normal.iter().any(|&x| x != 0)
            && !(found.contains(&normal) && found.contains(&lattice::scale(&normal, -1)))
        {
            let level = lattice::dot(&normal, p0);
            let values: Vec<i64> = coords.iter().map(|c| lattice::dot(&normal, c)).collect();
            let max = *values.iter().max().expect("nonempty");
            let min = *values.iter().min().expect("nonempty");
            for (sign, extreme) in [(1i64, max), (-1i64, min)] {
                if level == extreme {
                    let outer = lattice::scale(&normal, sign);
                    if found.insert(outer.clone()) {
                        let on: Vec<usize> = (0..n).filter(|&i| values[i] == level).collect();
                        out.push((outer, sign * level, on));
                    }
                }
            }
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    out.sort();
    out
}

/// Normal vector to the span of `k - 1` rows in `Z^k` by cofactor expansion.
fn cofactor_normal(rows: &[Vec<i64>], k: usize) -> Vec<i64> {
    (0..k)
        .map(|j| {
            let minor: IntMatrix = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let det = lattice::determinant(&minor);
            if j % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Advances `subset` (strictly increasing indices below `n`) to the next
/// combination in lexicographic order.
pub(crate) fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
