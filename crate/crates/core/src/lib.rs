//! Exact arithmetic for minimal points of `(1, xi, xi^3)` and the graded
//! ring of invariants attached to pairs of them.

pub mod algebraic;
pub mod error;
pub mod forms;
pub mod identities;
pub mod interval;
pub mod lab;
pub mod linalg;
pub mod minimal;
pub mod mpoly;
pub mod real;
pub mod ring;
pub mod search;
pub mod vec3;

pub use error::{LabError, Result};
pub use interval::Interval;
pub use real::{parse_xi, RealContext, XiRegistry, XiSource};
pub use vec3::{Vec3, Vec3Z};
