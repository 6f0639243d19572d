//! Exact p-adic linear algebra for slope multiplicities of Hecke-type operators.
//!
//! An endomorphism of a lattice `L` that maps a sublattice `K` into `p^n L`
//! has a characteristic polynomial whose Newton polygon is pinned between two
//! convex piecewise-linear functions `B` and `T` determined by the shape of
//! `L/K`. This crate computes all of those objects exactly and checks the
//! divisibility, congruence and slope-coincidence statements on random
//! instances.
//!
//! - [`valuation`]: `v_p` of integers and rationals.
//! - [`linalg`]: integer matrices, division-free characteristic polynomials,
//!   p-local Smith normal form, quotient shapes.
//! - [`newton`]: Newton polygons and slope multiplicities.
//! - [`bounds`]: sigma profiles, `B`, `T`, the critical slope `c`, depth
//!   thresholds, chord bounds.
//! - [`symmetric`]: symmetric-power and tensor modules, the `(p, x)^n`
//!   filtration, the weight-shift map.
//! - [`harness`]: seeded verification campaigns.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod newton;
pub mod rational;
pub mod symmetric;
pub mod valuation;

pub use error::{Error, Result};
pub use linalg::{CharPolyCoeffs, IntegerMatrix, QuotientShape};
pub use newton::{NewtonPolygon, SlopeCount};
pub use valuation::{vp, Prime, Valuation};
