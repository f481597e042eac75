//! Exact computation with compactly generated tensor t-structures on the
//! derived category of a PID spectrum.
//!
//! The library works over the rings `Z`, `F_p[x]`, and single-element
//! localizations of either.  Everything is exact: matrices of ring elements,
//! Smith normal form with invertible transforms, bounded complexes of finite
//! free modules, and the support/orthogonality machinery built on top.
//!
//! Module layout:
//!
//! * [`exactalg`] — ring elements, matrices, Smith normal form, factorization,
//!   finitely generated modules.
//! * [`complex`] — perfect complexes, chain maps, cones, tensor and Hom
//!   complexes, cohomology, splitting over hereditary rings.
//! * [`supports`] — specialization-closed subsets, filtrations of supports,
//!   Koszul generator families, aisle membership, graded supports.
//! * [`aisle`] — orthogonality certificates, coaisle membership, verified
//!   t-decomposition, classification round-trips, the property harness.
//! * [`zariski`] — restriction to basic opens and extension of perfect
//!   complexes back to the whole spectrum.

pub mod error;
pub mod exactalg;
pub mod complex;
pub mod supports;
pub mod aisle;
pub mod zariski;

pub use error::Error;
