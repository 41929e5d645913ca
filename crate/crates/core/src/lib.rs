//! Numerical machinery for the KPZ-class polymer laws: contour-integral
//! kernels, Nystrom Fredholm determinants of the Borodin-Peche family
//! (Tracy-Widom and BBP as special cases), exact finite-size Laplace
//! transforms of the O'Connell-Yor semi-discrete polymer with log-gamma
//! boundary sources, and seeded Monte Carlo simulators that cross-validate
//! the determinant side at desk scale.

pub mod contours;
pub mod distributions;
pub mod error;
pub mod fredholm;
pub mod kernels;
pub mod polymer;
pub mod specfun;

pub use contours::{ComplexPath, Discretization, QuadratureRule, Segment, Wedge};
pub use error::{Error, Result};
pub use specfun::ScalingConstants;
