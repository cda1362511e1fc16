//! Numerical constants and experiments for Gagliardo–Nirenberg–Sobolev (GNS)
//! inequalities of the form
//!
//! ```text
//! ∫|∇u|² (∫u²)^{2/d} ≥ G ∫|u − ū|^{2+4/d}
//! ```
//!
//! on ℝ^d, on bounded convex domains and on the unit cube `[0,1]^d`.
//!
//! * [`special`]: Γ, B and unit-ball geometry.
//! * [`euclidean`]: closed-form lower bounds for the sharp constant `G(d)` on ℝ^d.
//! * [`lattice`]: exact weighted counting of Neumann eigenvalues of the cube and
//!   certificates for the counting constant `N_d`.
//! * [`convex`]: constants for convex domains and cubes.
//! * [`ground_state`]: shooting solver for the radial ground state and the
//!   numerical value of `G(d)`.
//! * [`cube`]: grid functions on the cube, the discrete variational quotient,
//!   descent, cosine projectors, corner rearrangement and concentration runs.
//! * [`report`]: the two summary tables and their rendering.

pub mod convex;
pub mod cube;
pub mod error;
pub mod euclidean;
pub mod ground_state;
pub mod lattice;
pub mod report;
pub mod special;

pub use error::{Error, Result};
