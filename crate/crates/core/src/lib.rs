pub mod error;
pub mod qlinalg;
pub mod expr;
pub mod gca;
pub mod complex;
pub mod torus_rep;
pub mod t2_forms;
pub mod mc_dgcat;
pub mod xmodel;
pub mod cli;
#[cfg(test)]
mod properties;
