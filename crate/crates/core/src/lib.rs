//! Exact computational toolkit for CCZ- and EA-equivalence of quadratic
//! functions over F_{p^n}.
//!
//! The crate builds, for a quadratic (n,n)- or (n,m)-function F with a
//! component function admitting a linear structure, companion functions
//! F∘H that are CCZ-equivalent but (under mild linearity/uniformity
//! hypotheses) EA-inequivalent to F, and verifies every claim exhaustively
//! at desk scale: involutions, graph-isomorphism witnesses, algebraic
//! degrees, Walsh and differential spectra.
//!
//! All arithmetic is exact; odd-characteristic Walsh values live in the
//! cyclotomic ring Z[xi_p]. No floating point participates in any decision.

pub mod construct;
pub mod cyclotomic;
pub mod equiv;
pub mod error;
pub mod fp;
pub mod gfield;
pub mod invariants;
pub mod linstruct;
pub mod vfunc;

pub use error::{Error, Result};
pub use gfield::{Ctx, FieldCtx, FieldElement};
