//! Verification harness for Widom factors and the limit theorems.
//!
//! Everything here is a check: the Schiefermayr lower bound `W_n >= 2`, the
//! Totik–Widom upper bound `W_n <= 2 exp(PW)` with its refinement through
//! gap occupancy, the inequality chain
//! `ln(C(e_n)/C(e)) <= sum_j rho_n(K_j) G(c_j) <= PW/n`, Bernstein–Walsh,
//! root asymptotics, zero counting, and the Szegő–Widom objects
//! `L_n = T_n B^n / C^n` and `H_n` on the real branch domain `z > b_p`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::bands::{build_frame, DiscriminantFrame};
use crate::chebyshev::{chebyshev_with, ChebyshevOptions, ChebyshevResult};
use crate::error::{AsymptoticsError, Error};
use crate::potential::EquilibriumData;
use crate::realsets::{Hull, IntervalSet};

/// Slack allowed on every bound.
pub const BOUND_TOL: f64 = 1e-8;

/// `n`-independent data a sweep needs from the set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetData {
    pub set: IntervalSet,
    pub capacity: f64,
    pub pw_sum: f64,
    /// `G(c_j)`, one per gap.
    pub critical_values: Vec<f64>,
}

impl SetData {
    pub fn from_equilibrium(eq: &EquilibriumData) -> Self {
        Self {
            set: eq.set.clone(),
            capacity: eq.capacity,
            pw_sum: eq.pw_sum,
            critical_values: eq.critical_points.iter().map(|&c| eq.green_real(c)).collect(),
        }
    }

    /// Sum of the `n` largest critical values.
    pub fn s_n(&self, n: usize) -> f64 {
        let mut v = self.critical_values.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v.iter().take(n).sum()
    }
}

/// Slacks of the bounds for one `n`; all are `>= -BOUND_TOL` on success
/// except `q_consistency`, which is an absolute mismatch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundChecks {
    /// `W_n - 2`.
    pub schiefermayr: f64,
    /// `2 exp(PW) - W_n`.
    pub totik_widom: f64,
    /// `sum_j rho_n(K_j) G(c_j) - ln(C(e_n)/C(e))`.
    pub chain_lower: f64,
    /// `PW/n - sum_j rho_n(K_j) G(c_j)`.
    pub chain_upper: f64,
    /// `refined_bound - W_n`.
    pub refined: f64,
    /// `|n ln(1 + q_n/n) - ln(W_n/2)|`.
    pub q_consistency: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidomEntry {
    pub n: usize,
    pub log_norm: f64,
    pub widom_factor: f64,
    pub envelope_capacity: f64,
    pub q_n: f64,
    pub gap_masses: Vec<f64>,
    pub gap_has_zero: Vec<bool>,
    pub gap_ambiguous: Vec<bool>,
    /// `2 exp(PW/2 + (1/2) sum of G(c_j) over gaps holding a zero)`.
    pub refined_bound: f64,
    /// `2 exp(PW/2 + S_n/2)` with `S_n` the `n` largest critical values.
    pub largest_gaps_bound: f64,
    pub checks: BoundChecks,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidomSeries {
    pub data: SetData,
    pub entries: Vec<WidomEntry>,
    /// Degrees whose solve failed, with the error code.
    pub failures: Vec<(usize, String)>,
}

impl WidomSeries {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.entries.iter().all(|e| e.checks.passed)
    }

    pub fn max_widom_factor(&self) -> f64 {
        self.entries.iter().map(|e| e.widom_factor).fold(0.0, f64::max)
    }
}

/// One sweep entry from an already computed `T_n`.
pub fn widom_entry_from(data: &SetData, t: &ChebyshevResult) -> Result<WidomEntry, Error> {
    let frame = build_frame(t)?;
    Ok(entry_from_frame(data, &frame))
}

pub fn entry_from_frame(data: &SetData, frame: &DiscriminantFrame) -> WidomEntry {
    let n = frame.n;
    let nf = n as f64;
    let t = &frame.source;
    let log_c = data.capacity.ln();
    let log_w = t.log_norm - nf * log_c;
    let widom_factor = log_w.exp();
    let envelope_capacity = frame.envelope_capacity();
    let q_n = frame.totik_q(data.capacity);
    let gms = frame.gap_masses();
    let gap_masses: Vec<f64> = gms.iter().map(|g| g.mass).collect();
    let gap_has_zero: Vec<bool> = gms.iter().map(|g| g.has_zero).collect();
    let gap_ambiguous: Vec<bool> = gms.iter().map(|g| g.ambiguous).collect();

    let pw = data.pw_sum;
    let log_ratio = (t.log_norm - LN_2) / nf - log_c;
    let mid: f64 = gap_masses.iter().zip(&data.critical_values).map(|(m, g)| m * g).sum();
    let occupied: f64 = gms
        .iter()
        .zip(&data.critical_values)
        .filter(|(g, _)| g.has_zero || g.ambiguous)
        .map(|(_, v)| v)
        .sum();
    let refined_bound = 2.0 * (0.5 * pw + 0.5 * occupied).exp();
    let largest_gaps_bound = 2.0 * (0.5 * pw + 0.5 * data.s_n(n)).exp();

    let schiefermayr = widom_factor - 2.0;
    let totik_widom = 2.0 * pw.exp() - widom_factor;
    let chain_lower = mid - log_ratio;
    let chain_upper = pw / nf - mid;
    let refined = refined_bound - widom_factor;
    let q_consistency = (nf * (q_n / nf).ln_1p() - (log_w - LN_2)).abs();
    let passed = [schiefermayr, totik_widom, chain_lower, chain_upper, refined].iter().all(|&s| s >= -BOUND_TOL)
        && q_consistency <= BOUND_TOL;
    WidomEntry {
        n,
        log_norm: t.log_norm,
        widom_factor,
        envelope_capacity,
        q_n,
        gap_masses,
        gap_has_zero,
        gap_ambiguous,
        refined_bound,
        largest_gaps_bound,
        checks: BoundChecks { schiefermayr, totik_widom, chain_lower, chain_upper, refined, q_consistency, passed },
    }
}

/// `W_n` with all bound certificates for `n = 1..=n_max`. Solver failures
/// are recorded per degree and do not stop the sweep.
pub fn widom_series(set: &IntervalSet, n_max: usize) -> Result<WidomSeries, Error> {
    widom_series_with(set, n_max, &ChebyshevOptions::default())
}

pub fn widom_series_with(set: &IntervalSet, n_max: usize, opts: &ChebyshevOptions) -> Result<WidomSeries, Error> {
    let eq = EquilibriumData::compute(set)?;
    let data = SetData::from_equilibrium(&eq);
    let mut entries = Vec::with_capacity(n_max);
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let outcome = chebyshev_with(set, n, opts, Some(&eq))
            .map_err(Error::from)
            .and_then(|t| widom_entry_from(&data, &t));
        match outcome {
            Ok(e) => entries.push(e),
            Err(e) => {
                log::warn!("widom sweep n={n}: {e}");
                failures.push((n, e.code()));
            }
        }
    }
    Ok(WidomSeries { data, entries, failures })
}

/// `ln(C(e_n)/C(e))` computed as `int G_e drho_n`, which only sees the
/// parts of `e_n` inside gaps of `e`.
pub fn green_integral_identity(frame: &DiscriminantFrame, eq: &EquilibriumData) -> f64 {
    eq.set.gaps().into_iter().map(|g| frame.gap_integral(g, |x| eq.green_real(x))).sum()
}

/// Largest `ln|T_n(z)| - ln||T_n|| - n G(z)` over the samples; `<= 0`
/// when the Bernstein–Walsh inequality holds.
pub fn bernstein_walsh_check(t: &ChebyshevResult, eq: &EquilibriumData, z_samples: &[Complex64]) -> f64 {
    z_samples
        .iter()
        .map(|&z| {
            let lt = if z.im == 0.0 { t.log_abs(z.re).0 } else { t.log_abs_complex(z) };
            lt - t.log_norm - t.n as f64 * eq.green(z).g
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `|(1/n) ln|T_n(z)| - ln C(e) - G(z)|`.
pub fn root_asymptotics_error(t: &ChebyshevResult, eq: &EquilibriumData, z: Complex64) -> f64 {
    let lt = if z.im == 0.0 { t.log_abs(z.re).0 } else { t.log_abs_complex(z) };
    (lt / t.n as f64 - eq.capacity.ln() - eq.green(z).g).abs()
}

/// Kolmogorov distance between the zero counting measure of `T_n` and the
/// equilibrium measure.
pub fn zero_counting_distance(t: &ChebyshevResult, eq: &EquilibriumData) -> f64 {
    let n = t.n as f64;
    t.zeros()
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let f = eq.cdf(x);
            (f - k as f64 / n).abs().max(((k + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// `L_n`, `H_n` and the residual of `L_n = (1 + B_n^{2n}) H_n` at real `z > b_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SzegoWidom {
    pub l_n: f64,
    pub h_n: f64,
    pub bn_2n: f64,
    pub residual: f64,
}

pub fn szego_widom_residual(
    frame: &DiscriminantFrame,
    eq: &EquilibriumData,
    z: f64,
) -> Result<SzegoWidom, AsymptoticsError> {
    if !(z > eq.set.hull().hi) {
        return Err(AsymptoticsError::BranchDomain(z));
    }
    let t = &frame.source;
    let nf = t.n as f64;
    let g = eq.green_real(z);
    let log_c = eq.capacity.ln();
    let l_n = (t.log_abs(z).0 - nf * g - nf * log_c).exp();
    let (small, _) = frame.bn_powers(Complex64::new(z, 0.0)).map_err(|_| AsymptoticsError::BranchDomain(z))?;
    let log_cn = frame.envelope_capacity().ln();
    let h_n = (nf * log_cn - nf * g - nf * log_c - small.re.ln()).exp();
    let bn_2n = small.re * small.re;
    let residual = (l_n - (1.0 + bn_2n) * h_n).abs() / l_n.abs();
    Ok(SzegoWidom { l_n, h_n, bn_2n, residual })
}

/// `|L_n(z)| = |T_n(z)| exp(-n G(z)) / C^n`, defined for every `z`.
pub fn szego_widom_modulus(t: &ChebyshevResult, eq: &EquilibriumData, z: Complex64) -> f64 {
    let lt = if z.im == 0.0 { t.log_abs(z.re).0 } else { t.log_abs_complex(z) };
    let nf = t.n as f64;
    (lt - nf * eq.green(z).g - nf * eq.capacity.ln()).exp()
}

/// Largest `|L_{kp}(z) - 1 - B(z)^{2kp}|` over `k <= k_max` and the
/// samples. For a period-`p` set the Widom minimiser is 1 along this
/// subsequence, so the deviation vanishes up to rounding.
pub fn szego_widom_trivial_subsequence(
    period_set: &IntervalSet,
    p: usize,
    k_max: usize,
    z_samples: &[f64],
) -> Result<f64, Error> {
    let eq = EquilibriumData::compute(period_set)?;
    let pf = p as f64;
    for &m in &eq.band_measures {
        if ((m * pf).round() - m * pf).abs() > 1e-8 * pf {
            return Err(AsymptoticsError::NotPeriodic { period: p, mass: m }.into());
        }
    }
    let top = period_set.hull().hi;
    if let Some(&z) = z_samples.iter().find(|&&z| !(z > top)) {
        return Err(AsymptoticsError::BranchDomain(z).into());
    }
    let greens: Vec<f64> = z_samples.iter().map(|&z| eq.green_real(z)).collect();
    let log_c = eq.capacity.ln();
    let mut worst = 0.0f64;
    for k in 1..=k_max {
        let n = k * p;
        let nf = n as f64;
        let t = chebyshev_with(period_set, n, &ChebyshevOptions::default(), Some(&eq))?;
        for (&z, &g) in z_samples.iter().zip(&greens) {
            let l = (t.log_abs(z).0 - nf * g - nf * log_c).exp();
            let b2n = (-2.0 * nf * g).exp();
            worst = worst.max((l - 1.0 - b2n).abs());
        }
    }
    Ok(worst)
}

/// Green's function of a single interval in closed form.
pub fn interval_green(hull: Hull, z: Complex64) -> f64 {
    let u = (2.0 * z - (hull.lo + hull.hi)) / hull.len();
    let s = (u * u - 1.0).sqrt();
    (u + s).norm().ln().max((u - s).norm().ln()).max(0.0)
}

/// Random finite gap sets: `p` in `{2, 3, 4}`, endpoints uniform in
/// `[-2, 2]`, every band and gap at least `0.1` long.
pub fn random_corpus(seed: u64, count: usize) -> Vec<IntervalSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_set(&mut rng)).collect()
}

pub fn random_set<R: Rng>(rng: &mut R) -> IntervalSet {
    let p = rng.random_range(2..=4usize);
    loop {
        let mut pts: Vec<f64> = (0..2 * p).map(|_| rng.random_range(-2.0..2.0)).collect();
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).all(|w| w[1] - w[0] >= 0.1) {
            let bands: Vec<(f64, f64)> = pts.chunks(2).map(|c| (c[0], c[1])).collect();
            return IntervalSet::new(&bands).expect("separated by construction");
        }
    }
}

pub const CSV_HEADER: &str = "set_id,n,log_norm,widom_factor,envelope_capacity,q_n,gap_masses,\
schiefermayr_slack,totik_widom_slack,chain_lower_slack,chain_upper_slack,refined_slack,passed";

/// Full-precision float formatting shared by CSV and JSON output.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

impl WidomEntry {
    pub fn csv_row(&self, set_id: &str) -> String {
        let gaps: Vec<String> = self.gap_masses.iter().map(|&m| fmt_f64(m)).collect();
        let c = &self.checks;
        format!(
            "{set_id},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            fmt_f64(self.log_norm),
            fmt_f64(self.widom_factor),
            fmt_f64(self.envelope_capacity),
            fmt_f64(self.q_n),
            gaps.join(";"),
            fmt_f64(c.schiefermayr),
            fmt_f64(c.totik_widom),
            fmt_f64(c.chain_lower),
            fmt_f64(c.chain_upper),
            fmt_f64(c.refined),
            c.passed
        )
    }
}
