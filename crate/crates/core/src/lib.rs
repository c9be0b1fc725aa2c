//! Exact computation of degree components of (generic) Gröbner fans for
//! graded ideals in `K[x, y, z]`.
//!
//! A degree-`e` component of the Gröbner fan of `I` is determined by the set
//! of points `m_J = Σ_{ν ∈ J} ν` over the column bases `J` of a coefficient
//! matrix of `I_e`. Its maximal cones are in bijection with the vertices of
//! `conv{m_J}`, a polygon in the plane `Σ m_i = e · dim(I_e)`.
//!
//! Module map:
//!
//! * [`linalg`]: exact rational determinants, rank, incremental independence.
//! * [`poly`]: graded polynomials in three variables, coordinate changes and
//!   coefficient matrices of graded components.
//! * [`fan`]: the column-matroid greedy oracle, the support-function sweep
//!   that enumerates polygon vertices, cone location and cross-degree
//!   refinement.
//! * [`family`]: the monomial family `I(d)`, the index sets `J(n)`, their
//!   separating weights and the block matrix `B` with its reduction chain.
//! * [`generic`]: seeded sampling of coordinate changes and dense ideals, and
//!   the randomized lower-bound experiments.
//! * [`oracle`]: exhaustive Plücker-coordinate enumeration for small cases.

pub mod error;
pub mod fan;
pub mod family;
pub mod generic;
pub mod linalg;
pub mod oracle;
pub mod par;
pub mod poly;

pub use error::{Error, Result};
pub use linalg::{Matrix, Rational};
pub use poly::{Exponent, IdealSpec, LinearChange, Poly};
