//! Exact invariants of torus-knot connected sums and the `(e,h)`-geography
//! of nonorientable surfaces they bound in the 4-ball.

pub mod error;
pub mod expr;
pub mod geography;
pub mod invariants;
pub mod poly;
pub mod rational;
pub mod registry;
pub mod report;

pub use error::{Error, ParseError, RegistryError, Result};
pub use expr::{Base, KnotExpr, NamedKnot, Term, TorusKnot};
pub use geography::{
    Apex, Certificate, Engine, GeographyReport, LatticePoint, QueryBox, Status, Wedge,
};
pub use invariants::{Calculator, InvariantBundle, Options};
pub use rational::Rational;
pub use registry::Registry;

/// Version string recorded in emitted documents.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
