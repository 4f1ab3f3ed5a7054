//! Numerical differential geometry on compact matrix groups.

pub mod checks;
pub mod forms;
pub mod group;
pub mod nerve;
pub mod poly;
pub mod quadrature;

pub use group::{Family, GroupSpec, Mat, MatrixGroup};
pub use poly::{InvariantPolynomial, Normalization};
