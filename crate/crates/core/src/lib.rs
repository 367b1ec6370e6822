//! Multisequences from rational function fields and the Hermitian curve,
//! their joint nonlinear complexity, and the lower bounds they satisfy.

pub mod bounds;
pub mod cli;
pub mod complexity;
pub mod gf;
pub mod hermitian;
pub mod multiseq;
pub mod rational;
