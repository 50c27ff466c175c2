use crate::error::{domain, Result};

/// Right-continuous empirical CDF over a finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    /// Builds the ECDF; NaN samples are rejected.
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(domain("empirical CDF of an empty sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(domain("empirical CDF sample contains NaN"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|&s| s <= x);
        count as f64 / self.sorted.len() as f64
    }
}

/// Kolmogorov-Smirnov distance `sup |F_n - F|` against a continuous CDF.
///
/// The supremum is taken over both one-sided limits at every sample point;
/// the left limit of `cdf` is read one ulp below the point, so the distance
/// to a step function with the same jumps is exactly zero.
pub fn ks_distance<F: Fn(f64) -> f64>(ecdf: &EmpiricalCdf, cdf: F) -> Result<f64> {
    if ecdf.is_empty() {
        return Err(domain("KS distance of an empty sample"));
    }
    let n = ecdf.len() as f64;
    let xs = ecdf.samples();
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        // Ties: the ECDF jumps once over the whole run of equal values.
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let below = i as f64 / n;
        let above = (j + 1) as f64 / n;
        let left = cdf(xs[i].next_down());
        let right = cdf(xs[i]);
        d = d.max((left - below).abs()).max((above - right).abs());
        i = j + 1;
    }
    Ok(d.min(1.0))
}

/// Two-sample sup distance `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_two_sample(a: &EmpiricalCdf, b: &EmpiricalCdf) -> f64 {
    let (xa, xb) = (a.samples(), b.samples());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
