//! Exact arithmetic over F_q[t]: characters, Gauss sums, Poisson summation,
//! Dirichlet and elliptic L-polynomials, and family rank surveys.

pub mod cache;
pub mod characters;
pub mod dirichlet_l;
pub mod elliptic_l;
pub mod error;
pub mod fourier_poisson;
pub mod fq_poly;
pub mod rank_survey;
pub mod roots;

pub use error::{Error, Result};
pub use fq_poly::PolyFq;
