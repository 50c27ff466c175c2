//! Transceiver placement, link gains and the distance-ratio distribution.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::RandomStream;

/// `ln(10)/10`: converts a dB-scale Gaussian into natural-log units.
pub const BETA_LN: f64 = std::f64::consts::LN_10 / 10.0;

/// Smallest CR-transmitter to PU-receiver distance accepted by [`make_drop`].
pub const MIN_CP_DISTANCE: f64 = 1e-9;

/// Scalar model parameters. Powers, noise and gain constants are linear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// Inner exclusion radius (m).
    #[serde(rename = "R_0")]
    pub r_0: f64,
    /// Radius of the PU region (m).
    #[serde(rename = "R_p")]
    pub r_p: f64,
    /// Outer radius of the CR annulus (m).
    #[serde(rename = "R_c")]
    pub r_c: f64,
    /// Path-loss exponent.
    pub gamma: f64,
    /// Shadowing standard deviation in dB.
    pub sigma_db: f64,
    #[serde(rename = "N_p")]
    pub n_p: f64,
    #[serde(rename = "N_c")]
    pub n_c: f64,
    #[serde(rename = "P_p")]
    pub p_p: f64,
    #[serde(rename = "P_c")]
    pub p_c: f64,
    /// Gain constant on links from the PU transmitter.
    #[serde(rename = "A_p")]
    pub a_p: f64,
    /// Gain constant on links from the CR transmitter.
    #[serde(rename = "A_c")]
    pub a_c: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            r_0: 1.0,
            r_p: 1000.0,
            r_c: 100.0,
            gamma: 3.5,
            sigma_db: 8.0,
            n_p: 1.0,
            n_c: 1.0,
            p_p: 1.0,
            p_c: 1.0,
            a_p: 1.0,
            a_c: 1.0,
        }
    }
}

impl SystemParams {
    /// Shadowing standard deviation in natural-log units.
    pub fn sigma_sf(&self) -> f64 {
        BETA_LN * self.sigma_db
    }

    /// Ratio `N_p/N_c` appearing in the low-interference condition.
    pub fn noise_ratio(&self) -> f64 {
        self.n_p / self.n_c
    }

    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, f64); 11] = [
            ("R_0", self.r_0),
            ("R_p", self.r_p),
            ("R_c", self.r_c),
            ("gamma", self.gamma),
            ("sigma_db", self.sigma_db),
            ("N_p", self.n_p),
            ("N_c", self.n_c),
            ("P_p", self.p_p),
            ("P_c", self.p_c),
            ("A_p", self.a_p),
            ("A_c", self.a_c),
        ];
        for (field, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    field,
                    reason: format!("must be finite and positive, got {value}"),
                });
            }
        }
        if self.gamma <= 2.0 {
            return Err(Error::InvalidParameter {
                field: "gamma",
                reason: format!("path-loss exponent must exceed 2, got {}", self.gamma),
            });
        }
        if self.r_0 >= self.r_c {
            return Err(Error::InvalidParameter {
                field: "R_c",
                reason: format!("must exceed R_0 = {}, got {}", self.r_0, self.r_c),
            });
        }
        if self.r_c > self.r_p {
            return Err(Error::InvalidParameter {
                field: "R_c",
                reason: format!("must not exceed R_p = {}, got {}", self.r_p, self.r_c),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// One realization of positions and shadowing, with the resulting link gains.
///
/// Link names are transmitter then receiver: `pp` is PU→PU, `pc` PU→CR,
/// `cc` CR→CR and `cp` CR→PU. The PU receiver is at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drop {
    pub pu_tx: Point,
    pub cr_rx: Point,
    pub cr_tx: Point,
    pub r_pp: f64,
    pub r_pc: f64,
    pub r_cc: f64,
    pub r_cp: f64,
    pub x_pp: f64,
    pub x_pc: f64,
    pub x_cc: f64,
    pub x_cp: f64,
    pub gain_pp: f64,
    pub gain_pc: f64,
    pub gain_cc: f64,
    pub gain_cp: f64,
}

/// Link gain `A·e^X·r^{-γ}`.
#[inline]
pub fn link_gain(a: f64, shadowing: f64, distance: f64, gamma: f64) -> f64 {
    a * shadowing.exp() * distance.powf(-gamma)
}

/// Radius of an area-uniform point in the annulus `[r_in, r_out]`.
#[inline]
pub fn sample_annulus_radius(r_in: f64, r_out: f64, stream: &mut RandomStream) -> f64 {
    let u = stream.uniform();
    (r_in * r_in + u * (r_out * r_out - r_in * r_in)).sqrt()
}

/// Point uniformly distributed over the area of an annulus around `center`.
pub fn sample_annulus(
    center: Point,
    r_in: f64,
    r_out: f64,
    stream: &mut RandomStream,
) -> Result<Point> {
    if !(r_in >= 0.0 && r_in < r_out && r_out.is_finite()) {
        return Err(domain(format!(
            "annulus requires 0 <= r_in < r_out, got [{r_in}, {r_out}]"
        )));
    }
    Ok(sample_annulus_unchecked(center, r_in, r_out, stream))
}

#[inline]
fn sample_annulus_unchecked(
    center: Point,
    r_in: f64,
    r_out: f64,
    stream: &mut RandomStream,
) -> Point {
    let r = sample_annulus_radius(r_in, r_out, stream);
    let angle = std::f64::consts::TAU * stream.uniform();
    let (s, c) = angle.sin_cos();
    Point {
        x: center.x + r * c,
        y: center.y + r * s,
    }
}

/// Draws the three transmitter/receiver positions and four shadowing values.
///
/// Consumes exactly six uniforms (plus six more per rejected CR-transmitter
/// placement, which happens with probability zero) and four normals.
pub fn make_drop(params: &SystemParams, stream: &mut RandomStream) -> Result<Drop> {
    params.validate()?;
    Ok(make_drop_unchecked(params, stream))
}

pub(crate) fn make_drop_unchecked(params: &SystemParams, stream: &mut RandomStream) -> Drop {
    let pu_tx = sample_annulus_unchecked(Point::ORIGIN, params.r_0, params.r_p, stream);
    let cr_rx = sample_annulus_unchecked(Point::ORIGIN, params.r_0, params.r_p, stream);
    let (cr_tx, r_cp) = loop {
        let p = sample_annulus_unchecked(cr_rx, params.r_0, params.r_c, stream);
        let r = p.norm();
        if r >= MIN_CP_DISTANCE {
            break (p, r);
        }
    };
    let r_pp = pu_tx.norm();
    let r_pc = pu_tx.distance(&cr_rx);
    let r_cc = cr_tx.distance(&cr_rx);

    let sigma = params.sigma_sf();
    let x_pp = sigma * stream.std_normal();
    let x_pc = sigma * stream.std_normal();
    let x_cc = sigma * stream.std_normal();
    let x_cp = sigma * stream.std_normal();

    let g = params.gamma;
    Drop {
        pu_tx,
        cr_rx,
        cr_tx,
        r_pp,
        r_pc,
        r_cc,
        r_cp,
        x_pp,
        x_pc,
        x_cc,
        x_cp,
        gain_pp: link_gain(params.a_p, x_pp, r_pp, g),
        gain_pc: link_gain(params.a_p, x_pc, r_pc, g),
        gain_cc: link_gain(params.a_c, x_cc, r_cc, g),
        gain_cp: link_gain(params.a_c, x_cp, r_cp, g),
    }
}

/// Piecewise-quadratic-in-`x²` form of the CDF of `Z = r_cc/r_cp` when both
/// distances are independent and area-uniform (`r_cc` on `[R_0, R_c]`,
/// `r_cp` on `[R_0, R_p]`).
///
/// On branch `i` the CDF is `c[i][0]·x⁻² + c[i][1] + c[i][2]·x²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioCdfCoeffs {
    /// Breakpoints `θ₂..θ₆`: `R_0/R_p`, `R_c/R_p`, `1`, `R_c/R_0`, `+∞`.
    pub theta: [f64; 5],
    /// Branch coefficients; row 0 is the identically-zero branch below `θ₂`.
    pub c: [[f64; 3]; 5],
    pub delta: f64,
}

pub fn ratio_cdf_coeffs(params: &SystemParams) -> Result<RatioCdfCoeffs> {
    let (r0, rc, rp) = (params.r_0, params.r_c, params.r_p);
    if !(r0 > 0.0 && r0 < rc && rc <= rp && rp.is_finite()) {
        return Err(domain(format!(
            "ratio CDF requires 0 < R_0 < R_c <= R_p, got R_0={r0}, R_c={rc}, R_p={rp}"
        )));
    }
    let (r0_2, rc_2, rp_2) = (r0 * r0, rc * rc, rp * rp);
    let (r0_4, rc_4, rp_4) = (r0_2 * r0_2, rc_2 * rc_2, rp_2 * rp_2);
    let delta = (rc_2 - r0_2) * (rp_2 - r0_2);
    let c = [
        [0.0, 0.0, 0.0],
        [0.5 * r0_4 / delta, -r0_2 * rp_2 / delta, 0.5 * rp_4 / delta],
        [
            0.5 * (r0_4 - rc_4) / delta,
            rp_2 * (rc_2 - r0_2) / delta,
            0.0,
        ],
        [
            -0.5 * rc_4 / delta,
            1.0 + r0_2 * rc_2 / delta,
            -0.5 * r0_4 / delta,
        ],
        [0.0, 1.0, 0.0],
    ];
    Ok(RatioCdfCoeffs {
        theta: [r0 / rp, rc / rp, 1.0, rc / r0, f64::INFINITY],
        c,
        delta,
    })
}

impl RatioCdfCoeffs {
    /// Index (0..5) of the branch containing `x`; branch `i` covers
    /// `(θ_{i+1}, θ_{i+2}]` with `θ₁ = 0`.
    fn branch(&self, x: f64) -> usize {
        self.theta[..4].iter().take_while(|&&t| x > t).count()
    }

    fn branch_value(&self, i: usize, x: f64) -> f64 {
        let [c0, c1, c2] = self.c[i];
        let x2 = x * x;
        c0 / x2 + c1 + c2 * x2
    }
}

/// `P(r_cc/r_cp < x)` under the independent area-uniform model.
pub fn ratio_cdf_eval(coeffs: &RatioCdfCoeffs, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("ratio CDF requires x > 0, got {x}")));
    }
    let i = coeffs.branch(x);
    if i == 0 {
        return Ok(0.0);
    }
    if i == 4 {
        return Ok(1.0);
    }
    Ok(coeffs.branch_value(i, x).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn default_params_valid() {
        defaults().validate().unwrap();
        assert!((defaults().sigma_sf() - 8.0 * 10f64.ln() / 10.0).abs() < 1e-15);
    }

    #[test]
    fn validation_names_field() {
        let p = SystemParams {
            r_c: 2000.0,
            ..defaults()
        };
        match p.validate() {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "R_c"),
            other => panic!("{other:?}"),
        }
        let p = SystemParams {
            gamma: 2.0,
            ..defaults()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { field: "gamma", .. })
        ));
        let p = SystemParams {
            n_c: 0.0,
            ..defaults()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { field: "N_c", .. })
        ));
    }

    #[test]
    fn annulus_rejects_bad_radii() {
        let mut s = RandomStream::new(1, 0);
        assert!(sample_annulus(Point::ORIGIN, 2.0, 2.0, &mut s).is_err());
        assert!(sample_annulus(Point::ORIGIN, 3.0, 2.0, &mut s).is_err());
        assert!(sample_annulus(Point::ORIGIN, -1.0, 2.0, &mut s).is_err());
    }

    #[test]
    fn annulus_radii_in_range() {
        let mut s = RandomStream::new(2, 0);
        let c = Point { x: 5.0, y: -3.0 };
        for _ in 0..10_000 {
            let p = sample_annulus(c, 1.0, 4.0, &mut s).unwrap();
            let r = p.distance(&c);
            assert!((1.0 - 1e-12..=4.0 + 1e-12).contains(&r));
        }
    }

    #[test]
    fn drop_gains_match_definition() {
        let p = SystemParams {
            a_p: 3.0e13,
            a_c: 1.0e10,
            ..defaults()
        };
        let mut s = RandomStream::new(3, 0);
        for _ in 0..1000 {
            let d = make_drop(&p, &mut s).unwrap();
            assert!((p.r_0..=p.r_p).contains(&d.r_pp));
            assert!(d.r_cc >= p.r_0 * (1.0 - 1e-12) && d.r_cc <= p.r_c * (1.0 + 1e-12));
            assert_eq!(d.r_pp, d.pu_tx.norm());
            assert_eq!(d.r_cp, d.cr_tx.norm());
            assert_eq!(d.gain_pp, p.a_p * d.x_pp.exp() * d.r_pp.powf(-p.gamma));
            assert_eq!(d.gain_pc, p.a_p * d.x_pc.exp() * d.r_pc.powf(-p.gamma));
            assert_eq!(d.gain_cc, p.a_c * d.x_cc.exp() * d.r_cc.powf(-p.gamma));
            assert_eq!(d.gain_cp, p.a_c * d.x_cp.exp() * d.r_cp.powf(-p.gamma));
            assert!(d.gain_cp.is_finite() && d.gain_cp > 0.0);
        }
    }

    #[test]
    fn coefficient_table_matches_closed_form() {
        let p = defaults();
        let k = ratio_cdf_coeffs(&p).unwrap();
        let (r0, rc, rp) = (p.r_0, p.r_c, p.r_p);
        let delta = (rc * rc - r0 * r0) * (rp * rp - r0 * r0);
        assert_eq!(k.delta, delta);
        assert_eq!(k.theta[..4], [r0 / rp, rc / rp, 1.0, rc / r0]);
        // Branch 3 as printed in full (no coefficient-form ambiguity there).
        for &x in &[0.15, 0.4, 0.9] {
            let printed = (0.5 * (rc.powi(4) - r0.powi(4)) - r0 * r0 * (rc * rc - r0 * r0)
                + (x * x * rp * rp - rc * rc) * (rc * rc - r0 * r0))
                / (x * x * delta);
            assert!((ratio_cdf_eval(&k, x).unwrap() - printed).abs() < 1e-12);
        }
    }

    #[test]
    fn ends_and_continuity() {
        for p in [
            defaults(),
            SystemParams {
                r_0: 2.0,
                r_c: 50.0,
                r_p: 400.0,
                ..defaults()
            },
            SystemParams {
                r_c: 1000.0,
                ..defaults()
            },
        ] {
            let k = ratio_cdf_coeffs(&p).unwrap();
            assert!(k.branch_value(1, k.theta[0]).abs() < 1e-12);
            assert!((k.branch_value(3, k.theta[3]) - 1.0).abs() < 1e-12);
            for i in 1..4 {
                let t = k.theta[i];
                let jump = (k.branch_value(i, t) - k.branch_value(i + 1, t)).abs();
                assert!(jump < 1e-12, "jump {jump} at theta index {i}");
            }
        }
    }

    #[test]
    fn tabulated_points() {
        let k = ratio_cdf_coeffs(&defaults()).unwrap();
        assert_eq!(ratio_cdf_eval(&k, 0.0005).unwrap(), 0.0);
        assert_eq!(ratio_cdf_eval(&k, 200.0).unwrap(), 1.0);
        // 1 - (0.5·R_c⁴ + 0.5·R_0⁴ - R_0²R_c²)/Δ at x = 1
        let expected = 1.0 - (0.5e8 + 0.5 - 1e4) / (9999.0 * 999_999.0);
        assert!((ratio_cdf_eval(&k, 1.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.99500).abs() < 1e-5);
        assert!(ratio_cdf_eval(&k, 0.0).is_err());
        assert!(ratio_cdf_eval(&k, -1.0).is_err());
    }

    #[test]
    fn symmetric_when_radii_coincide() {
        let p = SystemParams {
            r_c: 1000.0,
            ..defaults()
        };
        let k = ratio_cdf_coeffs(&p).unwrap();
        assert!((ratio_cdf_eval(&k, 1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn monotone_on_grid() {
        let k = ratio_cdf_coeffs(&defaults()).unwrap();
        let (lo, hi) = ((k.theta[0] / 2.0).ln(), (2.0 * k.theta[3]).ln());
        let mut prev = 0.0;
        for i in 0..10_000 {
            let x = (lo + (hi - lo) * i as f64 / 9_999.0).exp();
            let f = ratio_cdf_eval(&k, x).unwrap();
            assert!(f >= prev - 1e-15, "x={x}");
            prev = f;
        }
    }

    #[test]
    fn invalid_ordering_rejected() {
        let p = SystemParams {
            r_c: 2000.0,
            ..defaults()
        };
        assert!(ratio_cdf_coeffs(&p).is_err());
        let p = SystemParams {
            r_0: 200.0,
            ..defaults()
        };
        assert!(ratio_cdf_coeffs(&p).is_err());
    }
}
