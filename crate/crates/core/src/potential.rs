//! Equilibrium measure, Green's function and capacity of a finite gap set.
//!
//! Everything is driven by the critical-point polynomial `q(t) = prod (t - c_k)`,
//! one `c_k` per gap, defined by requiring
//! `F(t) = q(t) / sqrt(prod (t - a_k)(t - b_k))` to integrate to zero over
//! every gap. Then `G(x) = |int_{b_p}^x F|` along the real line, the
//! equilibrium density is `|F| / pi` on the bands, and the Robin constant
//! is the regularised tail integral of `F - 1/t`.
//!
//! All integrals against the density use the cosine substitution on a band
//! (or gap) `t = mid - half cos(phi)`, which cancels the square-root
//! endpoint factors of that band exactly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::PotentialError;
use crate::quad::{adaptive, bisect, neumaier_sum};
use crate::realsets::{Band, IntervalSet};

pub const DEFAULT_QUAD_ORDER: usize = 2048;
const SINGULAR_CONDITION: f64 = 1e12;
const QUAD_TOL: f64 = 1e-14;

/// Equilibrium data of a finite gap set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumData {
    pub set: IntervalSet,
    /// Monomial coefficients of `q`, lowest degree first (monic).
    pub q_coeffs: Vec<f64>,
    pub critical_points: Vec<f64>,
    pub robin: f64,
    pub capacity: f64,
    pub pw_sum: f64,
    pub band_measures: Vec<f64>,
    pub quad_order: usize,
}

/// Green's function value with the log-kernel harmonic conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenValue {
    pub g: f64,
    /// `int arg(z - t) drho(t)` on the principal branch.
    pub conj: f64,
    /// `ln|B(z)| = -g`.
    pub b_log: f64,
    /// `arg B(z) = -conj`.
    pub b_phase: f64,
}

/// Serialisable summary of [`EquilibriumData`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSummary {
    pub capacity: f64,
    pub robin: f64,
    pub pw_sum: f64,
    pub critical_points: Vec<f64>,
    pub band_measures: Vec<f64>,
}

/// Monic critical-point polynomial of `set`, as monomial coefficients
/// (lowest degree first), together with its roots.
pub fn critical_polynomial(set: &IntervalSet) -> Result<(Vec<f64>, Vec<f64>), PotentialError> {
    critical_polynomial_with(set, DEFAULT_QUAD_ORDER)
}

fn critical_polynomial_with(set: &IntervalSet, order: usize) -> Result<(Vec<f64>, Vec<f64>), PotentialError> {
    let gaps = set.gaps();
    let m = gaps.len();
    if m == 0 {
        return Ok((vec![1.0], vec![]));
    }
    let hull = set.hull();
    let ends = set.endpoints();
    let u = |t: f64| hull.to_unit(t);
    // I[j][k] = int_gap_j u(t)^k / sqrt|R(t)| dt, k = 0..=m
    let mut moments = vec![vec![0.0; m + 1]; m];
    for (j, gap) in gaps.iter().enumerate() {
        let band = gap.as_band();
        let others: Vec<f64> = ends.iter().copied().filter(|&e| e != gap.left && e != gap.right).collect();
        for i in 0..order {
            let phi = PI * (i as f64 + 0.5) / order as f64;
            let t = band.at_angle(phi);
            let wgt = others.iter().map(|&e| (t - e).abs().sqrt()).product::<f64>().recip();
            let ut = u(t);
            let mut pw = 1.0;
            for k in 0..=m {
                moments[j][k] += wgt * pw;
                pw *= ut;
            }
        }
        for k in 0..=m {
            moments[j][k] *= PI / order as f64;
        }
    }
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    for j in 0..m {
        let row_scale = moments[j].iter().fold(0.0f64, |acc, v| acc.max(v.abs())).recip();
        for k in 0..m {
            a[(j, k)] = moments[j][k] * row_scale;
        }
        rhs[j] = -moments[j][m] * row_scale;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond < SINGULAR_CONDITION) {
        return Err(PotentialError::SingularSystem(cond));
    }
    let d = a.lu().solve(&rhs).ok_or(PotentialError::SingularSystem(cond))?;
    // q in the unit variable: u^m + sum d_k u^k
    let mut q_unit: Vec<f64> = d.iter().copied().collect();
    q_unit.push(1.0);
    let eval_unit = |s: f64| q_unit.iter().rev().fold(0.0, |acc, &c| acc * s + c);
    let mut roots = Vec::with_capacity(m);
    for gap in &gaps {
        let r = bisect(|t| eval_unit(u(t)), gap.left, gap.right)
            .ok_or(PotentialError::SingularSystem(cond))?;
        roots.push(r);
    }
    Ok((expand_roots(&roots), roots))
}

fn expand_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &v) in c.iter().enumerate() {
            next[i + 1] += v;
            next[i] -= r * v;
        }
        c = next;
    }
    c
}

impl EquilibriumData {
    pub fn compute(set: &IntervalSet) -> Result<Self, PotentialError> {
        Self::with_order(set, DEFAULT_QUAD_ORDER)
    }

    pub fn with_order(set: &IntervalSet, quad_order: usize) -> Result<Self, PotentialError> {
        let (q_coeffs, critical_points) = critical_polynomial_with(set, quad_order)?;
        let mut eq = Self {
            set: set.clone(),
            q_coeffs,
            critical_points,
            robin: 0.0,
            capacity: 0.0,
            pw_sum: 0.0,
            band_measures: vec![],
            quad_order,
        };
        eq.band_measures = (0..set.band_count()).map(|k| eq.band_integral(k, quad_order)).collect();
        eq.robin = eq.robin_constant()?;
        eq.capacity = (-eq.robin).exp();
        eq.pw_sum = eq.critical_points.iter().map(|&c| eq.green_real(c)).sum();
        Ok(eq)
    }

    pub fn summary(&self) -> EquilibriumSummary {
        EquilibriumSummary {
            capacity: self.capacity,
            robin: self.robin,
            pw_sum: self.pw_sum,
            critical_points: self.critical_points.clone(),
            band_measures: self.band_measures.clone(),
        }
    }

    fn q(&self, t: f64) -> f64 {
        self.critical_points.iter().map(|&c| t - c).product()
    }

    /// `(1/pi) prod|t - c| / prod_{e not in skip} sqrt|t - e|`: the density
    /// with the two square-root factors of one band or gap removed.
    fn reduced_density(&self, t: f64, skip: (f64, f64)) -> f64 {
        let num: f64 = self.critical_points.iter().map(|&c| (t - c).abs()).product();
        let den: f64 = self
            .set
            .endpoints()
            .iter()
            .filter(|&&e| e != skip.0 && e != skip.1)
            .map(|&e| (t - e).abs().sqrt())
            .product();
        num / (PI * den)
    }

    fn band_integral(&self, k: usize, order: usize) -> f64 {
        let b = self.set.bands()[k];
        let skip = (b.lo, b.hi);
        let sum = neumaier_sum(
            (0..order).map(|i| PI * self.reduced_density(b.at_angle(PI * (i as f64 + 0.5) / order as f64), skip)),
        );
        sum / order as f64
    }

    /// Gap integrals of `q / sqrt|R|`; all vanish for the exact `q`.
    pub fn gap_integrals(&self, order: usize) -> Vec<f64> {
        self.set
            .gaps()
            .iter()
            .map(|g| {
                let band = g.as_band();
                let sum: f64 = (0..order)
                    .map(|i| {
                        let t = band.at_angle(PI * (i as f64 + 0.5) / order as f64);
                        PI * self.q(t).signum() * self.reduced_density(t, (g.left, g.right))
                    })
                    .sum();
                sum * PI / order as f64
            })
            .collect()
    }

    /// Equilibrium density at a point interior to a band.
    pub fn density(&self, x: f64) -> Result<f64, PotentialError> {
        let inside = self.set.bands().iter().any(|b| b.lo < x && x < b.hi);
        if !inside {
            return Err(PotentialError::OutsideSupport(x));
        }
        let num: f64 = self.critical_points.iter().map(|&c| (x - c).abs()).product();
        let den: f64 = self.set.bands().iter().map(|b| ((x - b.lo) * (x - b.hi)).abs().sqrt()).product();
        Ok(num / (PI * den))
    }

    pub fn band_measure(&self, k: usize) -> Result<f64, PotentialError> {
        self.band_measures.get(k).copied().ok_or(PotentialError::BandIndex(k))
    }

    /// Equilibrium mass of `[lo, phi]`-portion of band `k`, in the angle variable.
    fn partial_band(&self, k: usize, phi: f64) -> f64 {
        let b = self.set.bands()[k];
        adaptive(|p| self.reduced_density(b.at_angle(p), (b.lo, b.hi)), 0.0, phi, QUAD_TOL, QUAD_TOL).value
    }

    /// `rho_e((-inf, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (k, b) in self.set.bands().iter().enumerate() {
            if x >= b.hi {
                acc += self.band_measures[k];
            } else if x > b.lo {
                let full = self.band_measures[k];
                let phi = b.angle_of(x);
                acc += self.partial_band(k, phi).min(full);
                break;
            } else {
                break;
            }
        }
        acc.min(1.0)
    }

    /// Equilibrium mass of `[lo, hi]`.
    pub fn harmonic_measure(&self, lo: f64, hi: f64) -> f64 {
        (self.cdf(hi) - self.cdf(lo)).max(0.0)
    }

    /// Smallest `x` with `cdf(x) >= u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let bands = self.set.bands();
        if u <= 0.0 {
            return bands[0].lo;
        }
        if u >= 1.0 {
            return bands[bands.len() - 1].hi;
        }
        let mut acc = 0.0;
        for (k, b) in bands.iter().enumerate() {
            let m = self.band_measures[k];
            if u <= acc + m * (1.0 - 1e-15) || k + 1 == bands.len() {
                let target = (u - acc).clamp(0.0, m);
                if target >= m {
                    return b.hi;
                }
                let (mut lo, mut hi) = (0.0, PI);
                for _ in 0..64 {
                    let mid = 0.5 * (lo + hi);
                    if self.partial_band(k, mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-15 {
                        break;
                    }
                }
                return b.at_angle(0.5 * (lo + hi));
            }
            acc += m;
        }
        bands[bands.len() - 1].hi
    }

    /// Green's function on the real line from the exact integral of `F`.
    pub fn green_real(&self, x: f64) -> f64 {
        let set = &self.set;
        if set.band_index(x).is_some() {
            return 0.0;
        }
        let hull = set.hull();
        if let Some(j) = set.gap_index(x) {
            let g = set.gaps()[j];
            let band = g.as_band();
            let phi = band.angle_of(x);
            let r = adaptive(
                |p| {
                    let t = band.at_angle(p);
                    PI * self.q(t).signum() * self.reduced_density(t, (g.left, g.right))
                },
                0.0,
                phi,
                QUAD_TOL,
                QUAD_TOL,
            );
            return r.value.abs();
        }
        // outside the hull: t = edge +- s^2
        let (edge, dir) = if x > hull.hi { (hull.hi, 1.0) } else { (hull.lo, -1.0) };
        let smax = (x - edge).abs().sqrt();
        let integrand = |s: f64| {
            let t = edge + dir * s * s;
            let num: f64 = self.critical_points.iter().map(|&c| (t - c).abs()).product();
            let den: f64 =
                set.endpoints().iter().filter(|&&e| e != edge).map(|&e| (t - e).abs().sqrt()).product();
            2.0 * num / den
        };
        let far = 8.0 * hull.len().max(1e-300);
        if (x - edge).abs() <= far {
            return adaptive(integrand, 0.0, smax, QUAD_TOL, QUAD_TOL).value;
        }
        // far field: G(x) = ln|x - m| + R - int_{|x-m|}^inf (F - 1/t) along the ray
        let near = adaptive(integrand, 0.0, far.sqrt(), QUAD_TOL, QUAD_TOL).value;
        let tail = adaptive(
            |s: f64| {
                let t = edge + dir * s * s;
                2.0 * s * (self.abs_f(t) - 1.0 / (t - edge).abs())
            },
            far.sqrt(),
            smax,
            QUAD_TOL,
            QUAD_TOL,
        )
        .value;
        near + tail + ((x - edge).abs() / far).ln()
    }

    fn abs_f(&self, t: f64) -> f64 {
        let num: f64 = self.critical_points.iter().map(|&c| (t - c).abs()).product();
        let den: f64 = self.set.bands().iter().map(|b| ((t - b.lo) * (t - b.hi)).abs().sqrt()).product();
        num / den
    }

    /// Robin constant from the tail integral after shifting the set so the
    /// left end sits at 1.
    fn robin_constant(&self) -> Result<f64, PotentialError> {
        let shift = 1.0 - self.set.hull().lo;
        let bands: Vec<Band> = self.set.bands().iter().map(|b| Band::new(b.lo + shift, b.hi + shift)).collect();
        let crit: Vec<f64> = self.critical_points.iter().map(|c| c + shift).collect();
        let top = bands[bands.len() - 1].hi;
        let ends: Vec<f64> = bands.iter().flat_map(|b| [b.lo, b.hi]).collect();
        // [top, 2 top] with t = top + s^2: integrand 2 s (F - 1/t)
        let near = |s: f64| {
            let t = top + s * s;
            let num: f64 = crit.iter().map(|&c| t - c).product();
            let den: f64 = ends.iter().filter(|&&e| e != top).map(|&e| (t - e).sqrt()).product();
            2.0 * num / den - 2.0 * s / t
        };
        // [2 top, inf) with t = 2 top / u: (F - 1/t) 2 top / u^2 = expm1(L) / (u t) * 2top/u
        let far = |u: f64| {
            let t = 2.0 * top / u;
            let l: f64 = crit.iter().map(|&c| (-c / t).ln_1p()).sum::<f64>()
                - 0.5 * ends.iter().map(|&e| (-e / t).ln_1p()).sum::<f64>();
            l.exp_m1() / t * (2.0 * top / (u * u))
        };
        let level = |tol: f64| {
            let a = adaptive(near, 0.0, top.sqrt(), tol, tol);
            let b = adaptive(far, 0.0, 1.0, tol, tol);
            a.value + b.value
        };
        let fine = level(1e-15);
        let coarse = level(1e-12);
        if (fine - coarse).abs() > 1e-10 {
            return Err(PotentialError::QuadratureFailure((fine - coarse).abs()));
        }
        Ok(fine - top.ln())
    }

    /// Quadrature order for log-kernel integrals at distance `dist` from `e`.
    fn kernel_order(&self, dist: f64) -> usize {
        let widest = self.set.bands().iter().map(Band::half).fold(0.0, f64::max);
        let want = if dist > 0.0 { 64.0 * widest / dist } else { f64::INFINITY };
        let mut n = self.quad_order;
        while (n as f64) < want && n < (1 << 20) {
            n *= 2;
        }
        n
    }

    /// `int log(z - t) drho(t)` with the principal logarithm.
    pub fn log_kernel(&self, z: Complex64) -> Complex64 {
        let dist = self
            .set
            .bands()
            .iter()
            .map(|b| {
                let dx = if z.re < b.lo {
                    b.lo - z.re
                } else if z.re > b.hi {
                    z.re - b.hi
                } else {
                    0.0
                };
                dx.hypot(z.im)
            })
            .fold(f64::INFINITY, f64::min);
        let order = self.kernel_order(dist);
        let mut acc = Complex64::new(0.0, 0.0);
        for b in self.set.bands() {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..order {
                let t = b.at_angle(PI * (i as f64 + 0.5) / order as f64);
                s += (z - t).ln() * self.reduced_density(t, (b.lo, b.hi));
            }
            acc += s * (PI / order as f64);
        }
        acc
    }

    /// Green's function at any `z`. Real `z` uses the exact real-axis
    /// route; otherwise the log-kernel potential is integrated.
    pub fn green(&self, z: Complex64) -> GreenValue {
        if z.im == 0.0 {
            let g = self.green_real(z.re);
            // arg(x - t) is pi for t > x and 0 otherwise
            let conj = PI * (1.0 - self.cdf(z.re));
            return GreenValue { g, conj, b_log: -g, b_phase: -conj };
        }
        let k = self.log_kernel(z);
        let g = (self.robin + k.re).max(0.0);
        GreenValue { g, conj: k.im, b_log: -g, b_phase: -k.im }
    }

    /// `B(z) = C exp(-int log(z - t) drho)`, single-valued off `(-inf, b_p]`.
    pub fn blaschke(&self, z: Complex64) -> Result<Complex64, PotentialError> {
        let top = self.set.hull().hi;
        if z.im == 0.0 {
            if z.re <= top {
                return Err(PotentialError::BranchDomain(z.re));
            }
            return Ok(Complex64::new((-self.green_real(z.re)).exp(), 0.0));
        }
        Ok(self.capacity * (-self.log_kernel(z)).exp())
    }

    /// `|B(z)| = exp(-G(z))`, defined everywhere.
    pub fn blaschke_abs(&self, z: Complex64) -> f64 {
        (-self.green(z).g).exp()
    }

    /// Phase change `-2 pi rho(selected bands)` of `B` around a loop
    /// enclosing exactly those bands, reduced to `[0, 2 pi)`.
    pub fn winding_phase(&self, bands: &[usize]) -> Result<f64, PotentialError> {
        let mut mass = 0.0;
        for &k in bands {
            mass += self.band_measure(k)?;
        }
        let mut phase = (-TAU * mass).rem_euclid(TAU);
        if (TAU - phase) < 1e-10 {
            phase = 0.0;
        }
        Ok(phase)
    }
}

/// Capacity and Robin constant of a set.
pub fn capacity(set: &IntervalSet) -> Result<(f64, f64), PotentialError> {
    let eq = EquilibriumData::compute(set)?;
    Ok((eq.capacity, eq.robin))
}
