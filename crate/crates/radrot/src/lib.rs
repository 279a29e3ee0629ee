//! Function classes of bounded radius and boundary rotation.
//!
//! This crate constructs members of the classes `P_k` (measure-representable
//! functions with `p(0) = 1`), `R_k` (bounded radius rotation) and `V_k`
//! (bounded boundary rotation) from their measure and Schwarz-function
//! representations, evaluates the closed-form growth, distortion, disk and
//! coefficient bounds these classes satisfy, and verifies each inequality
//! and its sharpness numerically on seeded ensembles.
//!
//! Module map:
//!
//! - [`series`]: truncated complex power series, the substrate for every
//!   construction
//! - [`measures`]: atomic signed measures on the circle and the Herglotz
//!   transform into `P_k`
//! - [`caratheodory`]: Schwarz functions (finite Blaschke-type products) and
//!   the map `phi -> (1+phi)/(1-phi)`
//! - [`classes`]: constructors and converters among `P_k`, `R_k`, `V_k`,
//!   including the extremal function `f*`
//! - [`bounds`]: closed-form bound evaluators
//! - [`verify`]: seeded Monte-Carlo and grid verification with JSON/CSV
//!   reports
//!
//! ```
//! use radrot::bounds::growth_bounds;
//! use radrot::classes::{extremal_fn, pk_from_rk};
//!
//! let f = extremal_fn(4.0, 30).unwrap();
//! // |a_2(f*)| = k
//! assert!((f.series().coeff(2).norm() - 4.0).abs() < 1e-10);
//! let b = growth_bounds(4.0, 0.5).unwrap();
//! assert!(b.lower < b.upper);
//! ```

// `!(x >= 2.0)` and friends are intentional: the negated form rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod caratheodory;
pub mod classes;
pub mod error;
pub mod measures;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
