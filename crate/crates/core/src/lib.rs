//! Exact computation of free differential graded algebra resolutions for
//! algebras presented by a quiver with relations.
//!
//! The library builds, over ℚ or GF(p):
//!
//! * quivers, path spaces, two-sided ideals and quotient algebras with
//!   canonical normal forms ([`quiver`]);
//! * the bracketing combinatorics indexing the resolution, together with an
//!   independent polygon-dissection cross-check ([`bracket`]);
//! * the A-infinity coalgebra of decorated closed bracketings and its
//!   coproducts ([`coalgebra`]);
//! * the free dg algebra resolution with differential, product, contracting
//!   homotopy and augmentation, plus the cobar repackaging consistency check
//!   ([`dga`]);
//! * graded Betti tables via an independent bar-complex oracle, the quadratic
//!   intersection complex and a Koszulity probe ([`tor`], [`compare`]).
//!
//! Everything is exact: scalars are arbitrary-precision rationals or prime
//! field elements, and all homology is computed by sparse row reduction.

pub mod bracket;
pub mod coalgebra;
pub mod compare;
pub mod decor;
pub mod dga;
pub mod field;
pub mod linalg;
pub mod par;
pub mod quiver;
pub mod tor;

pub use field::{Field, PrimeField, Rationals};
