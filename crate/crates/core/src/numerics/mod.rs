//! Numerical kernels shared by the model and experiment code.

mod ecdf;
mod quadrature;
mod random;
mod special;

pub use ecdf::{ks_distance, ks_two_sample, EmpiricalCdf};
pub use quadrature::{integrate, integrate_default, Quadrature, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
pub use random::{Dist, RandomStream};
pub use special::{bessel_k, one_minus_z_k1, std_normal_cdf};

pub(crate) use special::std_normal_cdf_unchecked;
