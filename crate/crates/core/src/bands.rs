//! The envelope set `e_n = T_n^{-1}([-||T_n||, ||T_n||])` of a Chebyshev
//! polynomial and the closed-form potential theory it carries.
//!
//! With the discriminant `D = 2 T_n / ||T_n||`, `e_n = D^{-1}([-2, 2])` is a
//! period-`n` set: its Green's function is `(1/n) acosh|D/2|` extended
//! harmonically, every band `[alpha_j, beta_j]` has equilibrium mass `1/n`
//! and the capacity is `(||T_n|| / 2)^(1/n)`.
//!
//! `D` is never formed from coefficients. Every evaluation goes through the
//! root form as `ln|D/2| = ln|T_n| - ln||T_n||`, which stays accurate for
//! large `n` and close to band edges.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::chebyshev::{ChebyshevOptions, ChebyshevResult, Poly, RootForm};
use crate::error::{BandsError, Error};
use crate::potential::EquilibriumData;
use crate::quad::{adaptive, bisect};
use crate::realsets::{Band, Gap, Hull, IntervalSet};

/// `ln|D/2|` at an interior critical point below which the gap is closed.
pub const CLOSED_GAP_LOG_TOL: f64 = 1e-11;
/// Edges closer than this (relative to the hull) are treated as touching.
pub const EDGE_MERGE_TOL: f64 = 1e-9;
const MASS_TOL: f64 = 1e-14;

/// Band structure of a level set `{x : |P(x)| <= exp(log_norm)}` of a monic
/// polynomial `P` with real simple zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    /// `alpha_1 <= beta_1 <= alpha_2 <= ... <= beta_n`.
    pub edges: Vec<f64>,
    /// Band edges as offsets from the band's zero.
    pub offsets: Vec<(f64, f64)>,
    /// Bands with closed gaps merged.
    pub bands: IntervalSet,
    /// Zeros of `P'`, one between consecutive zeros of `P`.
    pub critical: Vec<f64>,
    /// `closed[j]` when the gap after band `j` has zero length.
    pub closed: Vec<bool>,
}

/// Edges of `{|P| <= exp(log_norm)}`. `P` must be the Chebyshev polynomial
/// of some set (or any polynomial whose critical values all reach the
/// level), so that the level set has exactly `n` bands, one per zero.
pub fn envelope(roots: &RootForm, log_norm: f64, hull: Hull) -> Result<Envelope, BandsError> {
    let n = roots.degree();
    let expected = 2 * n;
    let eta = &roots.zeros;
    let len = hull.len().max(eta.last().unwrap_or(&0.0) - eta.first().unwrap_or(&0.0));
    let phi = |x: f64| roots.log_abs(x).0 - log_norm;
    let mismatch = |found: usize| BandsError::EdgeCountMismatch { found, expected };

    let mut critical = Vec::with_capacity(n.saturating_sub(1));
    for w in eta.windows(2) {
        // the log-derivative falls from +inf to -inf between two zeros
        let y = bisect(|x| roots.log_derivative(x), w[0].next_up(), w[1].next_down()).ok_or(mismatch(0))?;
        critical.push(y);
    }
    let mut closed: Vec<bool> = critical.iter().map(|&y| phi(y) <= CLOSED_GAP_LOG_TOL).collect();

    // Edges are located as offsets from their zero so that bands far inside a
    // wide gap, whose width can sit below the spacing of doubles near the
    // zero, keep full relative accuracy.
    let phi_at = |j: usize, d: f64| {
        let mut acc = d.abs().ln() - log_norm;
        for (k, &e) in eta.iter().enumerate() {
            if k != j {
                acc += ((eta[j] - e) + d).abs().ln();
            }
        }
        acc
    };
    let mut offsets = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(expected);
    for j in 0..n {
        let phi_j = |d: f64| phi_at(j, d);
        let left = if j == 0 {
            bisect(phi_j, hull.lo.min(eta[0]) - len - eta[0], 0.0)
        } else if closed[j - 1] {
            Some(critical[j - 1] - eta[j])
        } else {
            bisect(phi_j, critical[j - 1] - eta[j], 0.0)
        };
        let right = if j + 1 == n {
            bisect(phi_j, 0.0, hull.hi.max(eta[j]) + len - eta[j])
        } else if closed[j] {
            Some(critical[j] - eta[j])
        } else {
            bisect(phi_j, 0.0, critical[j] - eta[j])
        };
        match (left, right) {
            (Some(l), Some(r)) => {
                offsets.push((l, r));
                edges.push(eta[j] + l);
                edges.push(eta[j] + r);
            }
            _ => return Err(mismatch(edges.len())),
        }
    }
    let tol = EDGE_MERGE_TOL * len;
    for j in 0..n.saturating_sub(1) {
        if edges[2 * j + 2] - edges[2 * j + 1] <= tol {
            closed[j] = true;
        }
    }
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(n);
    for j in 0..n {
        let (a, mut b) = (edges[2 * j], edges[2 * j + 1]);
        if b <= a {
            b = a.next_up();
        }
        match merged.last_mut() {
            Some(last) if closed[j - 1] => last.1 = b,
            _ => merged.push((a, b)),
        }
    }
    let bands = IntervalSet::new(&merged).map_err(|_| mismatch(edges.len()))?;
    Ok(Envelope { edges, offsets, bands, critical, closed })
}

/// `ln|w|` with `w + 1/w = 2u`, `|w| >= 1`, given `ld = ln u`.
fn log_joukowski(ld: Complex64) -> f64 {
    // w = u (1 +- t) with t = sqrt(1 - u^-2)
    let t = (1.0 - (-2.0 * ld).exp()).sqrt();
    ld.re + (1.0 + t).norm().ln().max((1.0 - t).norm().ln())
}

/// `ln(w)` for the same `w`, on the branch `ln u + ln(1 +- t)`.
fn log_joukowski_complex(ld: Complex64) -> Complex64 {
    let t = (1.0 - (-2.0 * ld).exp()).sqrt();
    let (p, m) = (1.0 + t, 1.0 - t);
    ld + if p.norm() >= m.norm() { p.ln() } else { m.ln() }
}

/// Equilibrium mass of one band of `e_n`, full and split at its zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandMass {
    pub lo: f64,
    pub hi: f64,
    /// Quadrature of `w_n` over the band.
    pub mass: f64,
    pub left_half: f64,
    pub right_half: f64,
    /// `|theta(beta) - theta(alpha)| / (pi n)` from `D = 2 cos(theta)`.
    pub theta_mass: f64,
}

/// `rho_n(K)` for a gap `K` of the original set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapMass {
    pub gap: Gap,
    pub mass: f64,
    /// Total length of `K` intersected with `e_n`.
    pub width: f64,
    pub is_single_interval: bool,
    pub has_zero: bool,
    /// A zero lies within the edge tolerance of a gap endpoint, so the
    /// `1/(2n)` bound may or may not apply.
    pub ambiguous: bool,
    pub zero: Option<f64>,
}

/// Everything derived from one `T_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantFrame {
    pub source: ChebyshevResult,
    pub n: usize,
    /// `D = 2 T_n / ||T_n||` in the hull-Chebyshev basis.
    pub delta: Poly,
    pub bands_n: IntervalSet,
    pub edges: Vec<f64>,
    /// Band edges as offsets from the band's zero.
    pub offsets: Vec<(f64, f64)>,
    pub zeros: Vec<f64>,
    /// All zeros of `D'`.
    pub critical: Vec<f64>,
    /// Zeros of `D'` in open gaps of `e_n`.
    pub interior_critical: Vec<f64>,
    pub closed: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSummary {
    pub n: usize,
    pub edges: Vec<f64>,
    pub bands: IntervalSet,
    pub zeros: Vec<f64>,
    pub band_masses: Vec<f64>,
    pub gap_masses: Vec<f64>,
    pub envelope_capacity: f64,
}

pub fn build_frame(result: &ChebyshevResult) -> Result<DiscriminantFrame, BandsError> {
    let env = envelope(&result.roots, result.log_norm, result.set.hull())?;
    let mut delta = result.poly.clone();
    delta.log_scale += LN_2 - result.log_norm;
    delta.monic = false;
    let interior_critical =
        env.critical.iter().zip(&env.closed).filter(|(_, &c)| !c).map(|(&y, _)| y).collect();
    Ok(DiscriminantFrame {
        source: result.clone(),
        n: result.n,
        delta,
        bands_n: env.bands,
        edges: env.edges,
        offsets: env.offsets,
        zeros: result.roots.zeros.clone(),
        critical: env.critical,
        interior_critical,
        closed: env.closed,
    })
}

impl DiscriminantFrame {
    fn hull_len(&self) -> f64 {
        self.source.set.hull().len()
    }

    /// Band `j` of `e_n` before merging.
    pub fn band(&self, j: usize) -> Band {
        Band::new(self.edges[2 * j], self.edges[2 * j + 1])
    }

    /// `(ln|D(x)/2|, sign)`.
    pub fn log_half_delta(&self, x: f64) -> (f64, f64) {
        let (l, s) = self.source.roots.log_abs(x);
        (l - self.source.log_norm, s)
    }

    pub fn delta_at(&self, x: f64) -> f64 {
        let (l, s) = self.log_half_delta(x);
        2.0 * s * l.exp()
    }

    pub fn delta_complex(&self, z: Complex64) -> Complex64 {
        2.0 * (self.source.roots.log_complex(z) - self.source.log_norm).exp()
    }

    /// `D'(x)` from the root form.
    pub fn delta_derivative(&self, x: f64) -> f64 {
        let (l, s) = self.source.roots.derivative_log(x);
        2.0 * s * (l - self.source.log_norm).exp()
    }

    /// `G_n(z) = (1/n) ln|D/2 + sqrt((D/2)^2 - 1)|`, zero on `e_n`.
    pub fn green_n(&self, z: Complex64) -> f64 {
        let n = self.n as f64;
        if z.im == 0.0 {
            let x = z.re;
            if self.bands_n.band_index(x).is_some() {
                return 0.0;
            }
            let (l, _) = self.log_half_delta(x);
            if l <= 0.0 {
                return 0.0;
            }
            return (l + (-(-2.0 * l).exp_m1()).sqrt().ln_1p()) / n;
        }
        let ld = self.source.roots.log_complex(z) - self.source.log_norm;
        (log_joukowski(ld) / n).max(0.0)
    }

    /// `(B_n^n, B_n^-n)` with `|B_n^n| < 1`.
    pub fn bn_powers(&self, z: Complex64) -> Result<(Complex64, Complex64), BandsError> {
        let dist = self.bands_n.distance(z.re).hypot(z.im);
        if dist <= 1e-12 * self.hull_len() {
            return Err(BandsError::OnSpectrum(dist));
        }
        let ld = self.source.roots.log_complex(z) - self.source.log_norm;
        let lw = log_joukowski_complex(ld);
        Ok(((-lw).exp(), lw.exp()))
    }

    /// `C(e_n) = (||T_n|| / 2)^(1/n)`.
    pub fn envelope_capacity(&self) -> f64 {
        ((self.source.log_norm - LN_2) / self.n as f64).exp()
    }

    /// `q` in `C(e_n) = C(e) (1 + q/n)`.
    pub fn totik_q(&self, capacity: f64) -> f64 {
        let n = self.n as f64;
        n * ((self.source.log_norm - LN_2) / n - capacity.ln()).exp_m1()
    }

    /// `w_n` at `eta_j + base + d` with `eta_j + base` an edge of band `j`.
    /// `ln|D/2|` is a sum of `ln|1 + d / (x_edge - eta_k)|`, so small `d`
    /// keep full relative accuracy.
    fn density_near(&self, j: usize, base: f64, d: f64) -> f64 {
        let eta_j = self.zeros[j];
        let mut l = 0.0;
        let mut log_der = 0.0;
        for &eta in &self.zeros {
            let off = (eta_j - eta) + base;
            let r = d / off;
            l += if r > -0.5 { r.ln_1p() } else { (1.0 + r).abs().ln() };
            log_der += 1.0 / (off + d);
        }
        let den = (-(2.0 * l).exp_m1()).max(1e-300).sqrt();
        let mut num = l.exp() * log_der.abs();
        if !num.is_finite() {
            // on a zero
            let (ld, _) = self.source.roots.derivative_log(eta_j + base + d);
            num = (ld - self.source.log_norm).exp();
        }
        num / (PI * self.n as f64 * den)
    }

    /// Offset of `x` from zero `j`, exact when `x` is an edge of band `j`.
    fn offset_of(&self, j: usize, x: f64) -> f64 {
        let (lo, hi) = self.offsets[j];
        if x == self.edges[2 * j] {
            lo
        } else if x == self.edges[2 * j + 1] {
            hi
        } else {
            x - self.zeros[j]
        }
    }

    /// Cosine angle of offset `d` in band `j`.
    fn angle_in(&self, j: usize, d: f64) -> f64 {
        let (lo, hi) = self.offsets[j];
        let half = 0.5 * (hi - lo);
        if half <= 0.0 {
            return if d <= lo { 0.0 } else { PI };
        }
        ((0.5 * (lo + hi) - d) / half).clamp(-1.0, 1.0).acos()
    }

    /// Integrand in the cosine angle of band `j`: `w_n(x(theta)) dx/dtheta`.
    fn band_integrand(&self, j: usize, theta: f64) -> f64 {
        let (lo, hi) = self.offsets[j];
        let half = 0.5 * (hi - lo);
        let (base, d) = if theta <= 0.5 * PI {
            let s = (0.5 * theta).sin();
            (lo, 2.0 * half * s * s)
        } else {
            let c = (0.5 * theta).cos();
            (hi, -2.0 * half * c * c)
        };
        self.density_near(j, base, d) * half * theta.sin()
    }

    fn band_angle_mass(&self, j: usize, t0: f64, t1: f64) -> f64 {
        adaptive(|t| self.band_integrand(j, t), t0, t1, MASS_TOL, MASS_TOL).value
    }

    /// `w_n(x) = |D'(x)| / (pi n sqrt(4 - D(x)^2))` for `x` inside `e_n`.
    pub fn density_n(&self, x: f64) -> Result<f64, BandsError> {
        let inside = self.bands_n.bands().iter().any(|b| b.lo < x && x < b.hi);
        if !inside {
            return Err(BandsError::OutsideSupport(x));
        }
        for j in 0..self.n {
            let b = self.band(j);
            if b.lo < x && x < b.hi {
                let (lo, hi) = self.offsets[j];
                let d = x - self.zeros[j];
                return Ok(if d - lo <= hi - d {
                    self.density_near(j, lo, d - lo)
                } else {
                    self.density_near(j, hi, d - hi)
                });
            }
        }
        // x sits on a closed gap; the density is smooth there
        let h = 1e-7 * self.hull_len();
        Ok(0.5 * (self.density_n(x - h)? + self.density_n(x + h)?))
    }

    pub fn band_masses(&self) -> Vec<BandMass> {
        let n = self.n as f64;
        (0..self.n)
            .map(|j| {
                let b = self.band(j);
                let t_eta = self.angle_in(j, 0.0);
                let left_half = self.band_angle_mass(j, 0.0, t_eta);
                let right_half = self.band_angle_mass(j, t_eta, PI);
                let theta = |x: f64| (0.5 * self.delta_at(x)).clamp(-1.0, 1.0).acos();
                BandMass {
                    lo: b.lo,
                    hi: b.hi,
                    mass: left_half + right_half,
                    left_half,
                    right_half,
                    theta_mass: (theta(b.hi) - theta(b.lo)).abs() / (PI * n),
                }
            })
            .collect()
    }

    /// Part of band `j` inside `gap` as `(lo, hi, theta_lo, theta_hi)`.
    /// Bands lying wholly inside the gap always count, however thin.
    fn gap_piece(&self, j: usize, gap: Gap, tol: f64) -> Option<(f64, f64, f64, f64)> {
        let b = self.band(j);
        if b.lo >= gap.left && b.hi <= gap.right {
            return Some((b.lo, b.hi, 0.0, PI));
        }
        let (lo, hi) = (b.lo.max(gap.left), b.hi.min(gap.right));
        (hi - lo > tol).then(|| {
            (lo, hi, self.angle_in(j, self.offset_of(j, lo)), self.angle_in(j, self.offset_of(j, hi)))
        })
    }

    pub fn gap_mass(&self, gap: Gap) -> GapMass {
        let tol = 1e-12 * self.hull_len();
        let mut mass = 0.0;
        let mut pieces: Vec<(f64, f64)> = Vec::new();
        for j in 0..self.n {
            if let Some((lo, hi, t0, t1)) = self.gap_piece(j, gap, tol) {
                mass += self.band_angle_mass(j, t0, t1);
                match pieces.last_mut() {
                    Some(last) if lo - last.1 <= EDGE_MERGE_TOL * self.hull_len() => last.1 = hi,
                    _ => pieces.push((lo, hi)),
                }
            }
        }
        let zero = self.zeros.iter().copied().find(|&z| gap.contains(z));
        let edge_tol = EDGE_MERGE_TOL * self.hull_len();
        let ambiguous = self
            .zeros
            .iter()
            .any(|&z| (z - gap.left).abs() <= edge_tol || (z - gap.right).abs() <= edge_tol);
        GapMass {
            gap,
            mass,
            width: pieces.iter().map(|p| p.1 - p.0).sum(),
            is_single_interval: pieces.len() <= 1,
            has_zero: zero.is_some(),
            ambiguous,
            zero,
        }
    }

    /// `int f drho_n` over `K` intersected with `e_n`.
    pub fn gap_integral<F: Fn(f64) -> f64>(&self, gap: Gap, f: F) -> f64 {
        let tol = 1e-12 * self.hull_len();
        let mut acc = 0.0;
        for j in 0..self.n {
            let b = self.band(j);
            if let Some((_, _, t0, t1)) = self.gap_piece(j, gap, tol) {
                acc += adaptive(
                    |t| self.band_integrand(j, t) * f(b.at_angle(t)),
                    t0,
                    t1,
                    MASS_TOL,
                    1e-12,
                )
                .value;
            }
        }
        acc
    }

    pub fn gap_masses(&self) -> Vec<GapMass> {
        self.source.set.gaps().into_iter().map(|g| self.gap_mass(g)).collect()
    }

    pub fn summary(&self) -> FrameSummary {
        FrameSummary {
            n: self.n,
            edges: self.edges.clone(),
            bands: self.bands_n.clone(),
            zeros: self.zeros.clone(),
            band_masses: self.band_masses().iter().map(|m| m.mass).collect(),
            gap_masses: self.gap_masses().iter().map(|g| g.mass).collect(),
            envelope_capacity: self.envelope_capacity(),
        }
    }

    /// `{x : |D(x) + shift| <= 2 scale}`, a period-`n` superset of `e_n`
    /// when `scale >= 1 + |shift|/2`. `None` if some interior critical
    /// value falls inside the new range, which would break the band count.
    pub fn perturbed_superset(&self, scale: f64, shift: f64) -> Option<IntervalSet> {
        let lo_level = -2.0 * scale - shift;
        let hi_level = 2.0 * scale - shift;
        if self.critical.iter().any(|&y| {
            let v = self.delta_at(y);
            v > lo_level && v < hi_level
        }) {
            return None;
        }
        let len = self.hull_len();
        let mut stops = vec![self.edges[0] - 4.0 * len * scale];
        stops.extend(&self.critical);
        stops.push(self.edges[2 * self.n - 1] + 4.0 * len * scale);
        let mut cuts = Vec::new();
        for w in stops.windows(2) {
            for level in [lo_level, hi_level] {
                if let Some(x) = bisect(|x| self.delta_at(x) - level, w[0], w[1]) {
                    cuts.push(x);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        if cuts.len() % 2 == 1 {
            return None;
        }
        let bands: Vec<(f64, f64)> = cuts.chunks(2).map(|c| (c[0], c[1])).collect();
        IntervalSet::new(&bands).ok()
    }
}

/// How the part of `e_n` inside a gap behaves across an `n` sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapClass {
    /// No part of `e_n` ever enters the gap.
    Empty,
    /// Gap zeros settle in the interior of the gap (exponential decay expected).
    InteriorZeros,
    /// Gap zeros drift toward a gap edge.
    EdgeZeros,
    /// The gap never holds a zero.
    NoZeros,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapBandRow {
    pub n: usize,
    pub width: f64,
    pub zero: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapBandSeries {
    pub gap: Gap,
    pub rows: Vec<GapBandRow>,
    /// Least-squares slope of `ln width` against `n`.
    pub exp_rate: Option<f64>,
    /// Least-squares slope of `ln width` against `ln n`.
    pub power_rate: Option<f64>,
    pub class: GapClass,
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn gap_band_width(
    set: &IntervalSet,
    gap: Gap,
    n_list: &[usize],
    opts: &ChebyshevOptions,
) -> Result<GapBandSeries, Error> {
    let eq = EquilibriumData::compute(set)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let t = crate::chebyshev::chebyshev_with(set, n, opts, Some(&eq))?;
        let frame = build_frame(&t)?;
        let gm = frame.gap_mass(gap);
        rows.push(GapBandRow { n, width: gm.width, zero: gm.zero });
    }
    let positive: Vec<&GapBandRow> = rows.iter().filter(|r| r.width > 0.0).collect();
    let exp_rate = slope(&positive.iter().map(|r| (r.n as f64, r.width.ln())).collect::<Vec<_>>());
    let power_rate = slope(&positive.iter().map(|r| ((r.n as f64).ln(), r.width.ln())).collect::<Vec<_>>());
    let late = &rows[rows.len() / 2..];
    let zeros: Vec<f64> = late.iter().filter_map(|r| r.zero).collect();
    let class = if positive.is_empty() {
        GapClass::Empty
    } else if zeros.is_empty() {
        GapClass::NoZeros
    } else if zeros.iter().all(|&z| (z - gap.left).min(gap.right - z) > 0.05 * gap.len()) {
        GapClass::InteriorZeros
    } else {
        GapClass::EdgeZeros
    };
    Ok(GapBandSeries { gap, rows, exp_rate, power_rate, class })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::chebyshev;

    fn two_band() -> IntervalSet {
        IntervalSet::new(&[(-1.0, -0.5), (0.5, 1.0)]).unwrap()
    }

    fn asym() -> IntervalSet {
        IntervalSet::new(&[(0.0, 1.0), (2.0, 3.1)]).unwrap()
    }

    fn frame(set: &IntervalSet, n: usize) -> DiscriminantFrame {
        build_frame(&chebyshev(set, n, 1e-12).unwrap()).unwrap()
    }

    #[test]
    fn unit_interval_cubic_frame() {
        let f = frame(&IntervalSet::unit(), 3);
        assert_eq!(f.bands_n.band_count(), 1);
        assert!(f.bands_n.edge_distance(&IntervalSet::unit()).unwrap() < 1e-12);
        let expected = [-1.0, -0.5, -0.5, 0.5, 0.5, 1.0];
        for (a, b) in f.edges.iter().zip(expected) {
            assert!((a - b).abs() < 1e-8, "{:?}", f.edges);
        }
        assert!(f.interior_critical.is_empty());
    }

    #[test]
    fn period_two_frame_is_the_set() {
        let f = frame(&two_band(), 2);
        assert!(f.bands_n.edge_distance(&two_band()).unwrap() < 1e-12);
        assert!((f.envelope_capacity() - 3f64.sqrt() / 4.0).abs() < 1e-14);
    }

    #[test]
    fn asymmetric_frame_contains_the_set() {
        let s = asym();
        let f = frame(&s, 2);
        for b in s.bands() {
            assert!(f.bands_n.contains(b.lo, 1e-9 * 3.1) && f.bands_n.contains(b.hi, 1e-9 * 3.1));
        }
        assert_ne!(f.bands_n, s);
        for e in &f.edges {
            assert!((f.delta_at(*e).abs() - 2.0).abs() < 1e-8);
        }
        for m in f.band_masses() {
            assert!((m.mass - 0.5).abs() < 1e-9);
        }
        let cap = EquilibriumData::compute(&s).unwrap().capacity;
        let f3 = frame(&s, 3);
        assert!(f3.envelope_capacity() >= cap);
        assert!(f3.totik_q(cap) >= 0.0);
    }

    #[test]
    fn delta_monotone_inside_bands() {
        let f = frame(&asym(), 7);
        for j in 0..7 {
            let b = f.band(j);
            let sign = if (7 - j - 1) % 2 == 0 { 1.0 } else { -1.0 };
            for i in 1..50 {
                let x = b.lo + b.len() * i as f64 / 50.0;
                assert!(sign * f.delta_derivative(x) > 0.0);
                assert!(f.delta_at(x).abs() <= 2.0);
            }
        }
    }

    #[test]
    fn green_n_examples() {
        let f = frame(&IntervalSet::unit(), 1);
        assert!((f.green_n(Complex64::new(2.0, 0.0)) - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-14);
        let f2 = frame(&two_band(), 2);
        assert!((f2.green_n(Complex64::new(0.0, 0.0)) - 0.5 * 3f64.ln()).abs() < 1e-13);
        assert_eq!(f2.green_n(Complex64::new(0.7, 0.0)), 0.0);
        let z = Complex64::new(0.3, 0.2);
        let exact = EquilibriumData::compute(&two_band()).unwrap().green(z).g;
        assert!((f2.green_n(z) - exact).abs() < 1e-10);
    }

    #[test]
    fn bn_powers_examples() {
        let f = frame(&IntervalSet::unit(), 1);
        let (s, b) = f.bn_powers(Complex64::new(2.0, 0.0)).unwrap();
        assert!((s.re - (2.0 - 3f64.sqrt())).abs() < 1e-14 && (b.re - (2.0 + 3f64.sqrt())).abs() < 1e-14);
        let f2 = frame(&two_band(), 2);
        let (s, _) = f2.bn_powers(Complex64::new(0.0, 0.0)).unwrap();
        assert!((s.norm() - 1.0 / 3.0).abs() < 1e-13);
        assert!(matches!(f2.bn_powers(Complex64::new(0.75, 0.0)), Err(BandsError::OnSpectrum(_))));
        for z in [Complex64::new(0.1, 0.3), Complex64::new(-2.0, 1.0), Complex64::new(1.2, 0.0)] {
            let (s, b) = f2.bn_powers(z).unwrap();
            let d = f2.delta_complex(z);
            assert!((s + b - d).norm() <= 1e-12 * d.norm());
            assert!(((s * b) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn far_field_of_bn_power() {
        let f = frame(&asym(), 4);
        let z = 1e5;
        let (_, b) = f.bn_powers(Complex64::new(z, 0.0)).unwrap();
        let lhs = b.re.ln() - 4.0 * z.ln();
        let rhs = -4.0 * f.envelope_capacity().ln();
        assert!((lhs - rhs).abs() < 1e-4);
    }

    #[test]
    fn density_examples() {
        let f = frame(&IntervalSet::unit(), 1);
        assert!((f.density_n(0.0).unwrap() - 1.0 / PI).abs() < 1e-14);
        for n in [2, 5, 9] {
            let f = frame(&IntervalSet::unit(), n);
            let w = f.density_n(0.3).unwrap();
            assert!((w - 1.0 / (PI * 0.91f64.sqrt())).abs() < 1e-9, "n={n} {w}");
        }
        let f2 = frame(&two_band(), 2);
        let eq = EquilibriumData::compute(&two_band()).unwrap();
        assert!((f2.density_n(0.75).unwrap() - eq.density(0.75).unwrap()).abs() < 1e-12);
        assert!(f2.density_n(0.0).is_err());
    }

    #[test]
    fn band_mass_examples() {
        for m in frame(&IntervalSet::unit(), 4).band_masses() {
            assert!((m.mass - 0.25).abs() < 1e-12, "{m:?}");
            assert!((m.left_half - 0.125).abs() < 1e-12);
            // acos is only sqrt(eps)-accurate at closed-gap edges
            assert!((m.theta_mass - 0.25).abs() < 1e-6);
        }
        for m in frame(&asym(), 3).band_masses() {
            assert!((m.mass - 1.0 / 3.0).abs() < 1e-9, "{m:?}");
            assert!((m.right_half - 1.0 / 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn gap_mass_bounds() {
        let s = asym();
        for n in 1..=12 {
            let f = frame(&s, n);
            for g in f.gap_masses() {
                assert!(g.is_single_interval);
                assert!(g.mass <= 1.0 / n as f64 + 1e-10);
                if !g.has_zero {
                    assert!(g.mass <= 0.5 / n as f64 + 1e-10, "n={n} {g:?}");
                }
            }
        }
    }

    #[test]
    fn closed_gaps_merge() {
        let f = frame(&two_band(), 4);
        assert_eq!(f.edges.len(), 8);
        assert_eq!(f.bands_n.band_count(), 2);
        assert!(f.bands_n.edge_distance(&two_band()).unwrap() < 1e-8);
        let f = frame(&IntervalSet::unit(), 12);
        assert_eq!(f.bands_n.band_count(), 1);
        assert!(f.closed.iter().all(|&c| c));
    }

    #[test]
    fn envelope_is_minimal_among_perturbed_supersets() {
        let f = frame(&asym(), 3);
        let c_n = f.envelope_capacity();
        let own = EquilibriumData::compute(&f.bands_n).unwrap().capacity;
        assert!((own - c_n).abs() < 1e-10);
        for (scale, shift) in [(1.001, 0.0), (1.01, 0.01), (1.01, -0.015)] {
            if let Some(g) = f.perturbed_superset(scale, shift) {
                let cg = EquilibriumData::compute(&g).unwrap().capacity;
                assert!(c_n <= cg + 1e-9);
            }
        }
    }

    #[test]
    fn gap_band_width_classes() {
        let s = two_band();
        let gap = s.gaps()[0];
        let even = gap_band_width(&s, gap, &[2, 4, 6], &Default::default()).unwrap();
        assert!(even.rows.iter().all(|r| r.width == 0.0));
        assert_eq!(even.class, GapClass::Empty);
        let odd = gap_band_width(&s, gap, &[3, 5, 7, 9], &Default::default()).unwrap();
        assert!(odd.rows.windows(2).all(|w| w[1].width < w[0].width));
        assert_eq!(odd.class, GapClass::InteriorZeros);
        assert!(odd.exp_rate.unwrap() < 0.0);
    }
}
