//! Bivariate interpolation for Guruswami–Sudan list decoding of
//! Reed–Solomon codes.
//!
//! Three solvers for the same problem (find `Q(x, y)` of y-degree at most
//! `ell`, vanishing with multiplicity `s_i` at every point, of minimal
//! `(1,w)`-weighted degree):
//!
//! * [`oracle::oracle_min_solution`]: linear algebra over the monomial
//!   coefficients, used as ground truth.
//! * [`classic::knh_interpolate`]: the quadratic KNH iteration.
//! * [`fast::solve`]: its divide-and-conquer variant built on transform
//!   matrices over `F[x]`, quasi-linear in the number of points.
//!
//! [`decoder`] wraps the interpolation into an end-to-end list decoder.

pub mod bipoly;
pub mod classic;
pub mod cli;
pub mod decoder;
pub mod error;
pub mod fast;
pub mod field;
pub mod hasse;
pub mod instance;
pub mod matrix;
pub mod ntt;
pub mod oracle;
pub mod roots;
pub mod unipoly;

pub use bipoly::{BiPoly, WeightedMonomial};
pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use instance::{InterpolationInstance, Point};
pub use unipoly::UniPoly;
