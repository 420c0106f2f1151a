//! Exact rank stratification of polynomial maps `ℂⁿ → ℂᵖ`.
//!
//! The crate computes the degeneracy loci `Σ_{f,r} = {z : rank df_z < r}` as
//! varieties of Jacobian minors, measures their dimension with Gröbner bases,
//! perturbs maps generically with a seeded affine spray, pushes compact
//! polydiscs off small algebraic sets with shear automorphisms, and
//! certifies `rank ≥ r` on polydiscs with exact arithmetic. The
//! [`pipeline`] module strings these together into a finite-stage
//! approximation procedure.

pub mod error;
pub mod escape;
pub mod exact;
pub mod genericity;
pub mod groebner;
pub mod jet;
pub mod linalg;
pub mod pipeline;
pub mod rng;
pub mod spray;
pub mod strata;

pub use error::{Error, Result};
