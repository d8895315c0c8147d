//! Monic minimax (Chebyshev) polynomials of finite interval unions.
//!
//! [`chebyshev`] runs a multi-point exchange started from equilibrium
//! quantiles of the set; every result carries an alternation set, the
//! equioscillation defect, and its zeros. [`alternation_certificate`] is an
//! independent check that only looks at coefficients.

mod exchange;
mod poly;
mod roots;

pub use poly::{monic_log_scale, Poly};
pub use roots::{log_abs_product, RootForm};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::error::ChebyshevError;
use crate::potential::EquilibriumData;
use crate::quad::bisect;
use crate::realsets::IntervalSet;
use exchange::{local_extrema, select_alternating, Reference};

/// Solver settings. `tol = None` picks 1e-12 for `n <= 40` and 1e-10 above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevOptions {
    pub tol: Option<f64>,
    pub max_iterations: usize,
    /// Minimum grid points per band is `grid_factor * n`.
    pub grid_factor: usize,
}

impl Default for ChebyshevOptions {
    fn default() -> Self {
        Self { tol: None, max_iterations: 200, grid_factor: 64 }
    }
}

const POLISH_STEPS: usize = 4;
const POLISH_FLOOR: f64 = 1e-14;

pub fn default_tolerance(n: usize) -> f64 {
    if n <= 40 {
        1e-12
    } else {
        1e-10
    }
}

/// Degree-`n` Chebyshev polynomial of a set with its certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevResult {
    pub n: usize,
    pub set: IntervalSet,
    pub poly: Poly,
    /// Root form of the same polynomial; the accurate evaluation path.
    pub roots: RootForm,
    pub norm: f64,
    pub log_norm: f64,
    pub alternation: Vec<f64>,
    pub iterations: usize,
    /// `max_e |T_n| / h - 1` at the final reference level `h`.
    pub residual: f64,
}

impl ChebyshevResult {
    /// Zeros of `T_n`, sorted.
    pub fn zeros(&self) -> &[f64] {
        &self.roots.zeros
    }

    /// `T_n(x)` from the root form.
    pub fn value(&self, x: f64) -> f64 {
        self.roots.value(x)
    }

    pub fn log_abs(&self, x: f64) -> (f64, f64) {
        self.roots.log_abs(x)
    }

    pub fn log_abs_complex(&self, z: Complex64) -> f64 {
        self.roots.log_abs_complex(z)
    }

    /// `T_n(z) / ||T_n||` as a complex number, computed in log space.
    pub fn normalized_complex(&self, z: Complex64) -> Complex64 {
        (self.roots.log_complex(z) - self.log_norm).exp()
    }

    /// Widom factor `||T_n|| / C^n` for a given capacity.
    pub fn widom_factor(&self, capacity: f64) -> f64 {
        (self.log_norm - self.n as f64 * capacity.ln()).exp()
    }
}

/// Computes `T_n` for `set` with tolerance `tol` on the relative defect.
pub fn chebyshev(set: &IntervalSet, n: usize, tol: f64) -> Result<ChebyshevResult, ChebyshevError> {
    let opts = ChebyshevOptions { tol: Some(tol), ..Default::default() };
    chebyshev_with(set, n, &opts, None)
}

/// Like [`chebyshev`] but with explicit options and an optional
/// precomputed equilibrium measure used to seed the reference.
pub fn chebyshev_with(
    set: &IntervalSet,
    n: usize,
    opts: &ChebyshevOptions,
    equilibrium: Option<&EquilibriumData>,
) -> Result<ChebyshevResult, ChebyshevError> {
    if n == 0 {
        return Err(ChebyshevError::InvalidDegree(n));
    }
    let tol = opts.tol.unwrap_or_else(|| default_tolerance(n));
    if !(tol > 0.0) {
        return Err(ChebyshevError::InvalidTolerance(tol));
    }
    let owned;
    let eq = match equilibrium {
        Some(eq) => Some(eq),
        None => {
            owned = EquilibriumData::compute(set).ok();
            owned.as_ref()
        }
    };
    let mut nodes = initial_reference(set, n, eq);
    let hull_len = set.hull().len();
    let grid = opts.grid_factor * n;
    let mut best_defect = f64::INFINITY;
    let mut stalled = 0usize;

    for iteration in 1..=opts.max_iterations {
        let reference = Reference::new(nodes.clone());
        let spacing = reference.min_spacing();
        let cands = local_extrema(set, |x| reference.error(x), grid);
        let max_abs = cands.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
        let defect = max_abs - 1.0;
        log::debug!("exchange n={n} it={iteration} level={:e} defect={defect:e}", reference.log_level.exp());
        if !(spacing > 1e-15 * hull_len) {
            return Err(ChebyshevError::IllConditioned { spacing, defect });
        }
        if defect <= tol {
            return polish(set, n, reference, cands, max_abs, iteration, defect, grid);
        }
        if defect < 0.5 * best_defect {
            best_defect = defect;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 8 {
                return Err(ChebyshevError::NoConvergence { iterations: iteration, defect });
            }
        }
        let selected = select_alternating(&cands, n + 1)
            .ok_or(ChebyshevError::IllConditioned { spacing, defect })?;
        nodes = selected.into_iter().map(|p| p.0).collect();
    }
    let reference = Reference::new(nodes);
    let cands = local_extrema(set, |x| reference.error(x), grid);
    let defect = cands.iter().map(|c| c.1.abs()).fold(0.0, f64::max) - 1.0;
    Err(ChebyshevError::NoConvergence { iterations: opts.max_iterations, defect })
}

/// Extra exchanges after convergence, kept while each one at least halves
/// the defect. Level-set edges near nearly closed gaps are sensitive to it.
#[allow(clippy::too_many_arguments)]
fn polish(
    set: &IntervalSet,
    n: usize,
    mut reference: Reference,
    mut cands: Vec<(f64, f64)>,
    mut max_abs: f64,
    mut iterations: usize,
    mut defect: f64,
    grid: usize,
) -> Result<ChebyshevResult, ChebyshevError> {
    for _ in 0..POLISH_STEPS {
        if defect <= POLISH_FLOOR {
            break;
        }
        let Some(selected) = select_alternating(&cands, n + 1) else { break };
        let next = Reference::new(selected.into_iter().map(|p| p.0).collect());
        let next_cands = local_extrema(set, |x| next.error(x), grid);
        let next_max = next_cands.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
        if !(next_max - 1.0 < 0.5 * defect) {
            break;
        }
        reference = next;
        cands = next_cands;
        max_abs = next_max;
        defect = next_max - 1.0;
        iterations += 1;
    }
    finish(set, n, reference, max_abs, iterations, defect)
}

fn finish(
    set: &IntervalSet,
    n: usize,
    reference: Reference,
    max_abs: f64,
    iterations: usize,
    defect: f64,
) -> Result<ChebyshevResult, ChebyshevError> {
    let hull = set.hull();
    let mut zeros = Vec::with_capacity(n);
    for w in reference.nodes.windows(2) {
        let root = bisect(|x| reference.error(x), w[0], w[1])
            .ok_or(ChebyshevError::RootPolishFailure(0.5 * (w[0] + w[1])))?;
        zeros.push(root);
    }
    let roots = RootForm::new(zeros);
    let poly = Poly::from_log_sampler(hull, n, true, |x| roots.log_abs(x));
    let log_norm = reference.log_level + max_abs.ln();
    Ok(ChebyshevResult {
        n,
        set: set.clone(),
        poly,
        roots,
        norm: log_norm.exp(),
        log_norm,
        alternation: reference.nodes,
        iterations,
        residual: defect.max(0.0),
    })
}

/// `n + 1` starting points: equilibrium quantiles `j/n` when the
/// equilibrium measure is available, otherwise arc-cosine points spread
/// over the bands in proportion to their lengths.
fn initial_reference(set: &IntervalSet, n: usize, eq: Option<&EquilibriumData>) -> Vec<f64> {
    if let Some(eq) = eq {
        let pts: Vec<f64> = (0..=n).map(|j| eq.quantile(j as f64 / n as f64)).collect();
        if pts.windows(2).all(|w| w[1] > w[0]) {
            return pts;
        }
    }
    let p = set.band_count();
    let total = set.total_length();
    // at least one point per band when there is room
    let mut counts: Vec<usize> = set
        .bands()
        .iter()
        .map(|b| ((n + 1) as f64 * b.len() / total).floor() as usize)
        .collect();
    let mut assigned: usize = counts.iter().sum();
    let mut k = 0;
    while assigned < n + 1 {
        counts[k % p] += 1;
        assigned += 1;
        k += 1;
    }
    let mut pts = Vec::with_capacity(n + 1);
    for (b, &c) in set.bands().iter().zip(&counts) {
        match c {
            0 => {}
            1 => pts.push(b.mid()),
            _ => pts.extend((0..c).map(|i| b.at_angle(PI * i as f64 / (c - 1) as f64))),
        }
    }
    pts
}

/// Clenshaw evaluation of a stored polynomial.
pub fn evaluate(poly: &Poly, x: f64) -> f64 {
    poly.evaluate(x)
}

/// `(ln|p(x)|, sign)`.
pub fn evaluate_log(poly: &Poly, x: f64) -> (f64, f64) {
    poly.evaluate_log(x)
}

/// Independent Chebyshev check of a monic polynomial on `set`: scans for
/// `n + 1` alternating near-extremal points using only Clenshaw
/// evaluation. Returns `(is_chebyshev, relative_defect)`.
pub fn alternation_certificate(poly: &Poly, set: &IntervalSet) -> (bool, f64) {
    let n = poly.degree();
    // evaluate relative to the stored scale to stay in range
    let f = |x: f64| crate::quad::clenshaw(&poly.coeffs, poly.hull.to_unit(x));
    let cands = local_extrema(set, f, 256 * n.max(1));
    let max_abs = cands.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
    match select_alternating(&cands, n + 1) {
        Some(sel) => {
            let min_abs = sel.iter().map(|c| c.1.abs()).fold(f64::INFINITY, f64::min);
            let defect = (max_abs - min_abs) / max_abs;
            (defect <= 1e-8, defect)
        }
        None => (false, 1.0),
    }
}

/// `||T_n||^k S_k(T_n / ||T_n||)` with `S_k = 2^(1-k) cos(k arccos u)` the
/// monic Chebyshev polynomial of `[-1, 1]`; degree `k n`, monic.
pub fn compose_chebyshev(base: &ChebyshevResult, k: usize) -> Poly {
    assert!(k >= 1);
    if k == 1 {
        return base.poly.clone();
    }
    let kf = k as f64;
    Poly::from_log_sampler(base.poly.hull, k * base.n, true, |x| {
        let (lt, st) = base.roots.log_abs(x);
        let u_log = lt - base.log_norm;
        let (lc, sc) = log_classical_chebyshev(k, u_log, st);
        (kf * base.log_norm + (1.0 - kf) * LN_2 + lc, sc)
    })
}

/// `(ln|T_k(u)|, sign)` for the classical `T_k` with `u = sign * exp(u_log)`.
fn log_classical_chebyshev(k: usize, u_log: f64, sign: f64) -> (f64, f64) {
    let kf = k as f64;
    if u_log <= 0.0 {
        let u = sign * u_log.exp();
        let v = (kf * u.clamp(-1.0, 1.0).acos()).cos();
        (v.abs().ln(), v.signum())
    } else {
        // |u| > 1: T_k(u) = sign^k cosh(k acosh|u|)
        let au = u_log.exp();
        let y = kf * if u_log > 20.0 { u_log + LN_2 } else { (au + (au * au - 1.0).sqrt()).ln() };
        let lc = y + (-2.0 * y).exp().ln_1p() - LN_2;
        let sg = if sign < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        (lc, sg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_band() -> IntervalSet {
        IntervalSet::new(&[(-1.0, -0.5), (0.5, 1.0)]).unwrap()
    }

    #[test]
    fn unit_interval_cubic() {
        let r = chebyshev(&IntervalSet::unit(), 3, 1e-12).unwrap();
        assert!((r.norm - 0.25).abs() < 1e-14);
        let m = r.poly.to_monomial();
        let expected = [0.0, -0.75, 0.0, 1.0];
        for (a, b) in m.iter().zip(expected) {
            assert!((a - b).abs() < 1e-13, "{m:?}");
        }
        assert_eq!(r.alternation.len(), 4);
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn degree_one_on_unit_interval() {
        let r = chebyshev(&IntervalSet::unit(), 1, 1e-12).unwrap();
        assert!((r.norm - 1.0).abs() < 1e-15);
        assert!(r.zeros()[0].abs() < 1e-15);
    }

    #[test]
    fn two_band_quadratic() {
        let r = chebyshev(&two_band(), 2, 1e-12).unwrap();
        assert!((r.norm - 0.375).abs() < 1e-14);
        let m = r.poly.to_monomial();
        assert!((m[0] + 0.625).abs() < 1e-13 && m[1].abs() < 1e-13, "{m:?}");
        assert!((evaluate(&r.poly, 0.5) + 0.375).abs() < 1e-13);
        let z = r.zeros();
        assert!((z[0] + 0.625f64.sqrt()).abs() < 1e-14 && (z[1] - 0.625f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn evaluation_examples() {
        let p = chebyshev(&IntervalSet::unit(), 3, 1e-12).unwrap().poly;
        assert!((evaluate(&p, 1.0) - 0.25).abs() < 1e-14);
        assert!(evaluate(&p, 0.0).abs() < 1e-14);
        let (l, s) = evaluate_log(&p, 1.0);
        assert!((l - 0.25f64.ln()).abs() < 1e-13 && s == 1.0);
    }

    #[test]
    fn rejects_bad_requests() {
        assert_eq!(chebyshev(&IntervalSet::unit(), 0, 1e-12).unwrap_err(), ChebyshevError::InvalidDegree(0));
        assert!(matches!(
            chebyshev(&IntervalSet::unit(), 2, 0.0).unwrap_err(),
            ChebyshevError::InvalidTolerance(_)
        ));
    }

    #[test]
    fn certificate_examples() {
        let u = IntervalSet::unit();
        let t3 = Poly::from_monomial(u.hull(), &[0.0, -0.75, 0.0, 1.0]);
        let (ok, d) = alternation_certificate(&t3, &u);
        assert!(ok && d <= 1e-12, "{d}");
        let cube = Poly::from_monomial(u.hull(), &[0.0, 0.0, 0.0, 1.0]);
        assert!(!alternation_certificate(&cube, &u).0);
        let s = two_band();
        let q = Poly::from_monomial(s.hull(), &[-0.625, 0.0, 1.0]);
        let (ok, d) = alternation_certificate(&q, &s);
        assert!(ok && d <= 1e-12, "{d}");
    }

    #[test]
    fn zeros_of_unit_cubic() {
        let r = chebyshev(&IntervalSet::unit(), 3, 1e-12).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let expected = [-h, 0.0, h];
        for (a, b) in r.zeros().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn compose_examples() {
        let t1 = chebyshev(&IntervalSet::unit(), 1, 1e-12).unwrap();
        let c = compose_chebyshev(&t1, 3).to_monomial();
        for (a, b) in c.iter().zip([0.0, -0.75, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-13);
        }
        let t2 = chebyshev(&two_band(), 2, 1e-12).unwrap();
        assert_eq!(compose_chebyshev(&t2, 1), t2.poly);
        let c = compose_chebyshev(&t2, 2).to_monomial();
        let expected = [25.0 / 64.0 - 9.0 / 128.0, 0.0, -1.25, 0.0, 1.0];
        for (a, b) in c.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn fallback_reference_is_valid() {
        let s = IntervalSet::new(&[(0.0, 1.0), (2.0, 2.1), (3.0, 5.0)]).unwrap();
        for n in 1..12 {
            let pts = initial_reference(&s, n, None);
            assert_eq!(pts.len(), n + 1);
            assert!(pts.windows(2).all(|w| w[1] > w[0]));
            assert!(pts.iter().all(|&x| s.contains(x, 1e-12)));
        }
    }
}
