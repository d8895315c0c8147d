use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::quad::{chebyshev_coefficients, chebyshev_extrema, clenshaw, clenshaw_complex};
use crate::realsets::Hull;

/// Polynomial stored in the Chebyshev basis of a hull interval.
///
/// The value at `x` is `exp(log_scale) * sum_k coeffs[k] * T_k(s)` with
/// `s = (2x - (lo + hi)) / (hi - lo)`. For monic polynomials of degree `n`
/// the scale is `2 (L/4)^n` (`L` the hull length), which makes the
/// leading coefficient exactly 1 and keeps the others of moderate size
/// even when `L/4` raised to `n` under- or overflows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    pub hull: Hull,
    pub log_scale: f64,
    pub coeffs: Vec<f64>,
    pub monic: bool,
}

/// Scale used for a monic polynomial of the given degree on `hull`.
pub fn monic_log_scale(hull: &Hull, degree: usize) -> f64 {
    if degree == 0 {
        0.0
    } else {
        LN_2 + degree as f64 * (hull.len() / 4.0).ln()
    }
}

impl Poly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Interpolates a degree-`degree` polynomial from a log-valued sampler
    /// `f(x) -> (ln|p(x)|, sign)`. When `monic` is set the leading
    /// coefficient is pinned to 1 after interpolation.
    pub fn from_log_sampler<F>(hull: Hull, degree: usize, monic: bool, mut f: F) -> Self
    where
        F: FnMut(f64) -> (f64, f64),
    {
        let log_scale = if monic { monic_log_scale(&hull, degree) } else { 0.0 };
        let values: Vec<f64> = chebyshev_extrema(degree)
            .iter()
            .map(|&s| {
                let (lv, sg) = f(hull.from_unit(s));
                sg * (lv - log_scale).exp()
            })
            .collect();
        let mut coeffs = chebyshev_coefficients(&values);
        if monic && degree > 0 {
            coeffs[degree] = 1.0;
        }
        if monic && degree == 0 {
            coeffs[0] = 1.0;
        }
        Self { hull, log_scale, coeffs, monic }
    }

    /// Builds a polynomial from monomial coefficients (`coeffs[k]` multiplies `x^k`).
    pub fn from_monomial(hull: Hull, monomial: &[f64]) -> Self {
        let n = monomial.len() - 1;
        let monic = monomial[n] == 1.0;
        let log_scale = if monic { monic_log_scale(&hull, n) } else { 0.0 };
        // power basis in s, x = mid + (L/2) s
        let (mid, half) = (hull.mid(), 0.5 * hull.len());
        let mut power_s = vec![0.0; n + 1];
        for &c in monomial.iter().rev() {
            let mut next = vec![0.0; n + 1];
            for i in 0..n {
                next[i + 1] += half * power_s[i];
            }
            for i in 0..=n {
                next[i] += mid * power_s[i];
            }
            next[0] += c;
            power_s = next;
        }
        // s^k in Chebyshev polynomials, one degree at a time
        let mut coeffs = vec![0.0; n + 1];
        let mut sk = vec![0.0; n + 1];
        sk[0] = 1.0;
        for k in 0..=n {
            for i in 0..=k {
                coeffs[i] += power_s[k] * sk[i];
            }
            if k < n {
                // s T_0 = T_1, s T_i = (T_{i-1} + T_{i+1}) / 2
                let mut next = vec![0.0; n + 1];
                for i in 0..=k {
                    if i == 0 {
                        next[1] += sk[0];
                    } else {
                        next[i - 1] += 0.5 * sk[i];
                        next[i + 1] += 0.5 * sk[i];
                    }
                }
                sk = next;
            }
        }
        let f = (-log_scale).exp();
        coeffs.iter_mut().for_each(|c| *c *= f);
        if monic {
            coeffs[n] = 1.0;
        }
        Self { hull, log_scale, coeffs, monic }
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, self.hull.to_unit(x)) * self.log_scale.exp()
    }

    /// `(ln|p(x)|, sign)`; usable where `p(x)` itself would under- or overflow.
    pub fn evaluate_log(&self, x: f64) -> (f64, f64) {
        let v = clenshaw(&self.coeffs, self.hull.to_unit(x));
        (v.abs().ln() + self.log_scale, if v < 0.0 { -1.0 } else { 1.0 })
    }

    pub fn evaluate_complex(&self, z: Complex64) -> Complex64 {
        let s = (2.0 * z - (self.hull.lo + self.hull.hi)) / self.hull.len();
        clenshaw_complex(&self.coeffs, s) * self.log_scale.exp()
    }

    /// Monomial coefficients in `x`, lowest degree first. Intended for
    /// small degrees; accuracy degrades like the monomial basis does.
    pub fn to_monomial(&self) -> Vec<f64> {
        let n = self.degree();
        // Chebyshev -> power basis in s.
        let mut power_s = vec![0.0; n + 1];
        let mut t_prev = vec![0.0; n + 1];
        let mut t_cur = vec![0.0; n + 1];
        t_prev[0] = 1.0;
        if n >= 1 {
            t_cur[1] = 1.0;
        }
        for (k, &c) in self.coeffs.iter().enumerate() {
            let basis = match k {
                0 => t_prev.clone(),
                1 => t_cur.clone(),
                _ => {
                    let mut next = vec![0.0; n + 1];
                    for i in 0..n {
                        next[i + 1] += 2.0 * t_cur[i];
                    }
                    for i in 0..=n {
                        next[i] -= t_prev[i];
                    }
                    t_prev = std::mem::replace(&mut t_cur, next);
                    t_cur.clone()
                }
            };
            for i in 0..=n {
                power_s[i] += c * basis[i];
            }
        }
        // s = alpha x + beta
        let alpha = 2.0 / self.hull.len();
        let beta = -(self.hull.lo + self.hull.hi) / self.hull.len();
        let mut out = vec![0.0; n + 1];
        // Horner in polynomial arithmetic: out = (...(c_n s + c_{n-1}) s + ...)
        for &c in power_s.iter().rev() {
            let mut next = vec![0.0; n + 1];
            for i in 0..n {
                next[i + 1] += alpha * out[i];
            }
            for i in 0..=n {
                next[i] += beta * out[i];
            }
            next[0] += c;
            out = next;
        }
        let scale = self.log_scale.exp();
        out.iter_mut().for_each(|c| *c *= scale);
        if self.monic {
            out[n] = 1.0;
        }
        out
    }

    /// Largest coefficient difference relative to the largest coefficient
    /// of `other`, after bringing both to a common scale. Hulls must match.
    pub fn relative_coefficient_distance(&self, other: &Poly) -> f64 {
        assert_eq!(self.hull, other.hull, "coefficient comparison needs a common hull");
        let n = self.coeffs.len().max(other.coeffs.len());
        let shift = self.log_scale - other.log_scale;
        let f = shift.exp();
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for k in 0..n {
            let a = self.coeffs.get(k).copied().unwrap_or(0.0) * f;
            let b = other.coeffs.get(k).copied().unwrap_or(0.0);
            num = num.max((a - b).abs());
            den = den.max(b.abs());
        }
        num / den
    }

    /// Sup norm over a set estimated on a cosine-spaced grid per band.
    pub fn sup_norm_on(&self, set: &crate::realsets::IntervalSet, points_per_band: usize) -> f64 {
        set.bands()
            .iter()
            .flat_map(|b| {
                (0..=points_per_band).map(move |i| {
                    b.at_angle(std::f64::consts::PI * i as f64 / points_per_band as f64)
                })
            })
            .map(|x| self.evaluate(x).abs())
            .fold(0.0, f64::max)
    }
}
