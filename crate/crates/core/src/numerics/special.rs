//! Standard normal CDF and the modified Bessel functions K0 and K1.
//!
//! K0/K1 use the ascending series for `x <= 2` and Steed's continued
//! fraction (Temme's CF2 formulation) above, both accurate to a few ulp.

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;

/// Standard normal CDF `Φ(x)`. Accepts infinities.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(domain("std_normal_cdf of NaN"));
    }
    Ok(std_normal_cdf_unchecked(x))
}

/// `Φ(x)` without the NaN check, for hot loops whose argument is known finite.
#[inline]
pub(crate) fn std_normal_cdf_unchecked(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Modified Bessel function of the second kind, `K_order(x)`, for order 0 or 1.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("bessel_k requires x > 0, got {x}")));
    }
    let (k0, k1) = if x <= SERIES_LIMIT {
        k01_series(x)
    } else {
        k01_continued_fraction(x)
    };
    match order {
        0 => Ok(k0),
        1 => Ok(k1),
        _ => Err(domain(format!(
            "bessel_k supports orders 0 and 1, got {order}"
        ))),
    }
}

/// `1 - z·K1(z)` for `z >= 0`, evaluated without cancellation near zero.
///
/// This is the CDF of the product of two independent unit exponentials
/// evaluated at `z²/4`.
pub fn one_minus_z_k1(z: f64) -> Result<f64> {
    if z.is_nan() || z < 0.0 {
        return Err(domain(format!("one_minus_z_k1 requires z >= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == f64::INFINITY {
        return Ok(1.0);
    }
    if z > SERIES_LIMIT {
        let (_, k1) = k01_continued_fraction(z);
        return Ok(1.0 - z * k1);
    }
    // z·K1(z) = 1 + z·I1(z)·ln(z/2) - (z²/4)·Σ_k (ψ(k+1)+ψ(k+2))·y^k/(k!(k+1)!)
    let (i1, psi_sum) = k1_series_parts(z);
    Ok(-z * i1 * (0.5 * z).ln() + 0.25 * z * z * psi_sum)
}

fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // K0 = -(ln(x/2) + γ)·I0(x) + Σ_{k≥1} y^k/(k!)² · H_k
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= y / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic < 1e-18 * tail.abs().max(i0) {
            break;
        }
    }
    let k0 = -(log_half + EULER_GAMMA) * i0 + tail;

    let (i1, psi_sum) = k1_series_parts(x);
    let k1 = 1.0 / x + i1 * log_half - 0.25 * x * psi_sum;
    (k0, k1)
}

/// Returns `I1(x)` and `Σ_k (ψ(k+1)+ψ(k+2))·y^k/(k!(k+1)!)` with `y = x²/4`.
fn k1_series_parts(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut psi1 = -EULER_GAMMA;
    let mut psi2 = 1.0 - EULER_GAMMA;
    let mut i1_sum = 1.0;
    let mut psi_sum = psi1 + psi2;
    for k in 1..60 {
        let kf = k as f64;
        term *= y / (kf * (kf + 1.0));
        psi1 += 1.0 / kf;
        psi2 += 1.0 / (kf + 1.0);
        i1_sum += term;
        psi_sum += term * (psi1 + psi2);
        if term < 1e-18 * i1_sum {
            break;
        }
    }
    (0.5 * x * i1_sum, psi_sum)
}

fn k01_continued_fraction(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let q_next = (q1 - b * q2) / a;
        q1 = q2;
        q2 = q_next;
        q += c * q_next;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}
