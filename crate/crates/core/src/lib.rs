//! Exact computation of the motivic Milnor fibre at infinity and the
//! spectrum at infinity of Laurent polynomials that are non-degenerate for
//! their Newton polyhedron at infinity.
//!
//! The pipeline runs bottom-up through the modules:
//! [`laurent`] (parsing) → [`polytope`] (Newton polyhedron, face lattice) →
//! [`cone`] (normal cones, Euler characteristics, weights) →
//! [`nondegeneracy`] (certificates) → [`motivic`] (fibre classes) →
//! [`spectrum`] (Hodge spectrum realization) → [`pipeline`] (reports and checks).

pub mod cone;
pub mod lattice;
pub mod laurent;
pub mod motivic;
pub mod nondegeneracy;
pub mod pipeline;
pub mod polytope;
pub mod spectrum;
pub mod unipoly;

pub use laurent::{ExponentVector, LaurentError, LaurentPoly, Restriction};
pub use polytope::{newton_polytope_at_infinity, Face, FaceLattice, Polytope, PolytopeError};
