//! Statistics of cognitive-radio capacity under path loss, lognormal
//! shadowing and Rayleigh fading.
//!
//! A primary-user (PU) receiver sits at the origin of a disc; the PU
//! transmitter and the cognitive-radio (CR) receiver are area-uniform in the
//! annulus `[R_0, R_p]` around it, and the CR transmitter is area-uniform in
//! the annulus `[R_0, R_c]` around the CR receiver. The crate evaluates the
//! probability of the low-interference regime, the law of the power-loss
//! parameter α and the resulting CR rates both analytically and by
//! Monte Carlo.

// Guards of the form `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod numerics;

pub use error::{Error, Result};
pub use geometry::SystemParams;
