//! Exact linear algebra over ℚ and ℤ.

pub mod matrix;
pub mod rational;
pub mod snf;

pub use matrix::{Echelon, Matrix, Solution};
pub use rational::Rational;
pub use snf::{lattice_contains, smith_normal_form, IntMatrix, SmithForm};
