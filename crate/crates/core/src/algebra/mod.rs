//! Exact arithmetic: rationals, linear forms, polynomials, dense matrices and
//! exact rank.

mod assignment;
mod elim;
mod linform;
mod matrix;
mod poly;
mod rational;
mod var;

pub use assignment::{random_assignment, Assignment};
pub use elim::{kernel_dim, rank, rank_bareiss, rank_modular, BAREISS_MAX_DIM};
pub use linform::LinForm;
pub use matrix::{mat_mul, Matrix, Ring};
pub use poly::{Monomial, Poly};
pub use rational::Rational;
pub use var::VarId;
