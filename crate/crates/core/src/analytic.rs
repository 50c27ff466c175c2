//! Closed-form and single-quadrature results: the probability of the
//! low-interference regime, the law of the approximate power loss, and the
//! CR-rate CDF for fixed link gains.

use crate::error::{domain, Result};
use crate::geometry::{ratio_cdf_coeffs, Drop, RatioCdfCoeffs, SystemParams};
use crate::numerics::{bessel_k, integrate, one_minus_z_k1, std_normal_cdf_unchecked};

/// Quadrature tolerance (absolute and relative) for the weight integrals.
pub const WEIGHT_TOL: f64 = 1e-10;
/// Slack allowed before a probability is reported as out of range.
const CLAMP_SLACK: f64 = 1e-9;

/// Inputs of the low-interference probability.
///
/// With `Y = |f̃|²/|c̃|²`, `X = X_cc − X_cp ~ N(0, 2σ²)` and `Z = r_cc/r_cp`,
/// the regime holds when `Z < W` where `W = K^{1/γ}·e^{X/γ}·Y^{-1/γ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowInterferenceInputs {
    /// `K = N_p/N_c`.
    pub k: f64,
    pub gamma: f64,
    pub sigma_sf: f64,
    pub coeffs: RatioCdfCoeffs,
}

impl LowInterferenceInputs {
    pub fn new(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            k: params.noise_ratio(),
            gamma: params.gamma,
            sigma_sf: params.sigma_sf(),
            coeffs: ratio_cdf_coeffs(params)?,
        })
    }
}

/// `I(m, θ, κ) = ∫_θ^κ w^{2m} f_W(w) dw`, evaluated as a finite-range
/// integral over `v = y/(1+y)` in `(0, 1)`.
///
/// `κ = ∞` and `θ = 0` are accepted. Returns 0 for an empty interval.
pub fn weight_integral(
    m: i32,
    theta: f64,
    kappa: f64,
    inputs: &LowInterferenceInputs,
) -> Result<f64> {
    if !(-1..=1).contains(&m) {
        return Err(domain(format!(
            "weight integral exponent must be -1, 0 or 1, got {m}"
        )));
    }
    if theta.is_nan() || kappa.is_nan() || theta < 0.0 || theta > kappa {
        return Err(domain(format!(
            "weight integral needs 0 <= θ <= κ, got θ={theta}, κ={kappa}"
        )));
    }
    if theta == kappa {
        return Ok(0.0);
    }
    let (k, g, sigma) = (inputs.k, inputs.gamma, inputs.sigma_sf);
    if !(k > 0.0 && g > 2.0 && sigma > 0.0) {
        return Err(domain("weight integral needs K > 0, γ > 2 and σ > 0"));
    }
    let mf = m as f64;
    let exponent = 2.0 * mf / g;
    let shift = 4.0 * mf * sigma * sigma / g;
    let scale = std::f64::consts::SQRT_2 * sigma;
    let log_const = exponent * k.ln() + 4.0 * mf * mf * sigma * sigma / (g * g);
    // Bracket arguments are (γ·ln θ − ln K + ln y − shift)/scale.
    let lower_offset = (theta > 0.0).then(|| g * theta.ln() - k.ln() - shift);
    let upper_offset = kappa.is_finite().then(|| g * kappa.ln() - k.ln() - shift);

    let integrand = |v: f64| -> f64 {
        let ln_y = v.ln() - (-v).ln_1p();
        if !ln_y.is_finite() {
            // Nodes that round onto an endpoint carry no mass.
            return 0.0;
        }
        let hi = upper_offset.map_or(f64::INFINITY, |b| (b + ln_y) / scale);
        let lo = lower_offset.map_or(f64::NEG_INFINITY, |a| (a + ln_y) / scale);
        let bracket = normal_interval(lo, hi);
        if bracket == 0.0 {
            return 0.0;
        }
        (log_const - exponent * ln_y).exp() * bracket
    };

    // The bracket switches on and off around ln y = −offset; map a ladder of
    // points around each edge into v so that every feature sits on a panel
    // boundary, however close to v = 0 or 1 it lies.
    let mut cuts: Vec<f64> = vec![0.5];
    for offset in [lower_offset, upper_offset].into_iter().flatten() {
        for step in [-12.0, -8.0, -5.0, -3.0, -1.5, 0.0, 1.5, 3.0, 5.0, 8.0, 12.0] {
            let u = -offset + step * scale;
            cuts.push(logistic(u));
        }
    }
    cuts.retain(|&v| v > 0.0 && v < 1.0);
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let pieces = (cuts.len() - 1) as f64;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(integrand, w[0], w[1], WEIGHT_TOL / pieces, WEIGHT_TOL)?.value;
    }
    Ok(total)
}

fn logistic(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// `Φ(hi) − Φ(lo)` for `lo <= hi`, using upper tails on the right half-line.
fn normal_interval(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 {
        std_normal_cdf_unchecked(-lo) - std_normal_cdf_unchecked(-hi)
    } else {
        std_normal_cdf_unchecked(hi) - std_normal_cdf_unchecked(lo)
    }
}

/// Probability of the low-interference regime `P(a < 1)` under the
/// independent area-uniform distance model.
pub fn prob_low_interference(params: &SystemParams) -> Result<f64> {
    let inputs = LowInterferenceInputs::new(params)?;
    let theta = inputs.coeffs.theta;
    let mut p = 0.0;
    for branch in 1..5 {
        let (lo, hi) = (
            theta[branch - 1],
            if branch < 4 {
                theta[branch]
            } else {
                f64::INFINITY
            },
        );
        for (j, &c) in inputs.coeffs.c[branch].iter().enumerate() {
            if c != 0.0 {
                p += c * weight_integral(j as i32 - 1, lo, hi, &inputs)?;
            }
        }
    }
    if !(-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&p) {
        return Err(domain(format!(
            "low-interference probability {p} outside [0, 1]"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Law of `α_approx = |s|²|t|²/4` for one drop when `|s|²` and `|t|²` are
/// treated as exponentials with means `mu_s` and `mu_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaApproxLaw {
    pub mu_s: f64,
    pub mu_t: f64,
}

impl AlphaApproxLaw {
    pub fn new(mu_s: f64, mu_t: f64) -> Result<Self> {
        if !(mu_s > 0.0 && mu_t > 0.0 && mu_s.is_finite() && mu_t.is_finite()) {
            return Err(domain(format!(
                "mean SNRs must be positive and finite, got {mu_s}, {mu_t}"
            )));
        }
        Ok(Self { mu_s, mu_t })
    }

    /// `μ_s = P_p·Γ_pp/N_p`, `μ_t = P_c·Γ_cp/N_p`.
    pub fn from_drop(drop: &Drop, params: &SystemParams) -> Result<Self> {
        Self::new(
            params.p_p * drop.gain_pp / params.n_p,
            params.p_c * drop.gain_cp / params.n_p,
        )
    }

    fn z(&self, x: f64) -> f64 {
        (16.0 * x / (self.mu_s * self.mu_t)).sqrt()
    }
}

/// `P(α_approx < x) = 1 − z·K1(z)` with `z = √(16x/(μ_s·μ_t))`.
pub fn alpha_approx_cdf(x: f64, law: &AlphaApproxLaw) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(domain(format!("alpha_approx CDF needs x >= 0, got {x}")));
    }
    one_minus_z_k1(law.z(x))
}

/// CDF of `α̂`, i.e. `α_approx` conditioned on `α_approx < 1`.
pub fn alpha_hat_cdf(x: f64, law: &AlphaApproxLaw) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("alpha_hat CDF needs x in [0, 1], got {x}")));
    }
    Ok(alpha_approx_cdf(x, law)? / alpha_approx_cdf(1.0, law)?)
}

/// Density of `α̂` on `(0, 1)`: `(8/(μ_s μ_t))·K0(z)/P(α_approx < 1)`.
pub fn alpha_hat_pdf(x: f64, law: &AlphaApproxLaw) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(format!(
            "alpha_hat density needs x in (0, 1), got {x}"
        )));
    }
    let norm = alpha_approx_cdf(1.0, law)?;
    Ok(8.0 / (law.mu_s * law.mu_t) * bessel_k(0, law.z(x))? / norm)
}

/// `P(R_CR < r)` for fixed link gains, with `α̂` from [`AlphaApproxLaw`] and
/// `|c̃|²` an independent unit exponential.
pub fn rate_cdf_fixed_gains(
    r: f64,
    law: &AlphaApproxLaw,
    gain_cc: f64,
    params: &SystemParams,
) -> Result<f64> {
    if r.is_nan() || r < 0.0 {
        return Err(domain(format!("rate CDF needs r >= 0, got {r}")));
    }
    if !(gain_cc > 0.0) {
        return Err(domain(format!(
            "rate CDF needs a positive CC gain, got {gain_cc}"
        )));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    if r == f64::INFINITY {
        return Ok(1.0);
    }
    let tau = (r * std::f64::consts::LN_2).exp_m1() * params.n_c / (params.p_c * gain_cc);
    let norm = alpha_approx_cdf(1.0, law)?;
    let scale = 8.0 / (law.mu_s * law.mu_t * norm);
    let integrand = |u: f64| {
        let miss = -(-tau / (1.0 - u)).exp_m1();
        let z = law.z(u);
        if z > 700.0 {
            return 0.0;
        }
        miss * scale * bessel_k(0, z).unwrap_or(0.0)
    };
    // The density has a logarithmic singularity at 0; split so the quadrature
    // refines toward it without starving the rest of the range.
    let mut total = 0.0;
    for (a, b) in [(0.0, 1e-6), (1e-6, 1e-3), (1e-3, 1.0)] {
        total += integrate(integrand, a, b, 1e-12, 1e-10)?.value;
    }
    Ok(total.clamp(0.0, 1.0))
}
