//! Exact identifiability analysis for linear compartmental models.
//!
//! A linear compartmental model is a directed graph together with input,
//! output, and leak compartment sets. The library builds the model's
//! input-output equations symbolically, extracts the coefficient map, and
//! decides generic local identifiability by computing the exact rank of the
//! coefficient map's Jacobian at random rational points. All arithmetic is
//! exact (arbitrary-precision rationals); no floating point is involved in
//! any decision.
//!
//! Modules:
//! - [`poly`]: sparse multivariate polynomials over exact rationals,
//!   elementary symmetric polynomials, symbolic determinants.
//! - [`model`]: the model data type, validation, connectivity predicates,
//!   and the compartmental matrix.
//! - [`ioeq`]: input-output equations and the coefficient map.
//! - [`ident`]: Jacobian construction, exact rank, and the identifiability
//!   verdict.
//! - [`families`]: generators for catenary, cycle, mammillary, fin, and wing
//!   models, with closed-form coefficient maps checked against the general
//!   pipeline.
//! - [`suites`]: parametrized sweeps that replay each structural result as an
//!   executable check.

pub mod families;
pub mod ident;
pub mod ioeq;
pub mod model;
pub mod poly;
pub mod suites;

pub use ident::{decide, Verdict};
pub use ioeq::{coefficient_map, CoefficientMap};
pub use model::{ModelSpec, ParameterSpace, VarId};
pub use poly::{MultiPoly, Rational};
