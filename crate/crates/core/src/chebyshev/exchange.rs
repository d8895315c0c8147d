//! Multi-interval exchange iteration.
//!
//! The trial polynomial on a reference `x_0 < ... < x_n` is the unique
//! monic `P` with `P(x_j) = (-1)^(n-j) h`. In Lagrange form on the
//! reference, monicity fixes `h = 1 / sum |w_j|` with barycentric weights
//! `w_j = 1 / prod_{k != j} (x_j - x_k)`, so no linear solve is needed and
//! `P` is evaluated with the first barycentric formula. Everything is
//! carried relative to `h`, so the normalised error `E = P / h` equals
//! `+-1` on the reference and the defect is `max_e |E| - 1`.

use super::roots::log_abs_product;
use crate::quad::golden_max;
use crate::realsets::IntervalSet;
use std::f64::consts::PI;

pub(crate) struct Reference {
    pub nodes: Vec<f64>,
    // ln|w_j| - max_k ln|w_k|
    rel_logw: Vec<f64>,
    // ln h
    pub log_level: f64,
    // ln of max_k |w_k|
    log_wmax: f64,
}

impl Reference {
    pub fn new(nodes: Vec<f64>) -> Self {
        let n = nodes.len();
        let logw: Vec<f64> = (0..n)
            .map(|j| {
                let (l, _) = log_abs_product(
                    nodes.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &xk)| nodes[j] - xk),
                );
                -l
            })
            .collect();
        let m = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let rel_logw: Vec<f64> = logw.iter().map(|l| l - m).collect();
        let s: f64 = rel_logw.iter().map(|l| l.exp()).sum();
        Self { nodes, rel_logw, log_level: -m - s.ln(), log_wmax: m }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Normalised error `P(x) / h`.
    pub fn error(&self, x: f64) -> f64 {
        let n = self.degree();
        let mut sigma = 0.0;
        for (j, (&xj, &lw)) in self.nodes.iter().zip(&self.rel_logw).enumerate() {
            let d = x - xj;
            if d == 0.0 {
                return if (n - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            }
            sigma += lw.exp() / d;
        }
        let (ll, sg) = log_abs_product(self.nodes.iter().map(|&xk| x - xk));
        sg * (ll + self.log_wmax).exp() * sigma
    }

    pub fn min_spacing(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

/// Local extrema of `f` on each band: both endpoints plus interior local
/// maxima of `|f|` found on a cosine-spaced grid and polished by golden
/// section. Sorted by position.
pub(crate) fn local_extrema<F: Fn(f64) -> f64>(
    set: &IntervalSet,
    f: F,
    points_per_band: usize,
) -> Vec<(f64, f64)> {
    let m = points_per_band.max(8);
    let x_tol = 1e-15 * set.hull().len().max(1e-300);
    let mut out = Vec::new();
    for band in set.bands() {
        let xs: Vec<f64> = (0..=m).map(|i| band.at_angle(PI * i as f64 / m as f64)).collect();
        let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        out.push((xs[0], vs[0]));
        for i in 1..m {
            let (a, b, c) = (vs[i - 1], vs[i], vs[i + 1]);
            let same_sign = a.signum() == b.signum() && b.signum() == c.signum();
            if same_sign && b.abs() >= a.abs() && b.abs() >= c.abs() && b != 0.0 {
                let sg = b.signum();
                let (x, v) = golden_max(|x| sg * f(x), xs[i - 1], xs[i + 1], x_tol);
                if v >= b.abs() {
                    out.push((x, sg * v));
                } else {
                    out.push((xs[i], b));
                }
            }
        }
        out.push((xs[m], vs[m]));
    }
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out.dedup_by(|p, q| p.0 == q.0);
    out
}

/// Chooses `count` points with alternating signs from sorted candidates,
/// greedily removing the weakest while keeping alternation. The global
/// maximiser of `|f|` is never removed.
pub(crate) fn select_alternating(cands: &[(f64, f64)], count: usize) -> Option<Vec<(f64, f64)>> {
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(cands.len());
    for &(x, v) in cands {
        if v == 0.0 {
            continue;
        }
        match pts.last_mut() {
            Some(last) if last.1.signum() == v.signum() => {
                if v.abs() > last.1.abs() {
                    *last = (x, v);
                }
            }
            _ => pts.push((x, v)),
        }
    }
    while pts.len() > count {
        let excess = pts.len() - count;
        let (idx, _) = pts
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.abs().total_cmp(&b.1 .1.abs()))
            .expect("nonempty");
        let last = pts.len() - 1;
        if idx == 0 || idx == last {
            pts.remove(idx);
        } else if excess == 1 {
            if pts[0].1.abs() <= pts[last].1.abs() {
                pts.remove(0);
            } else {
                pts.remove(last);
            }
        } else {
            // drop the weakest and merge its two equal-sign neighbours
            let drop = if pts[idx - 1].1.abs() <= pts[idx + 1].1.abs() { idx - 1 } else { idx + 1 };
            let (lo, hi) = if drop < idx { (drop, idx) } else { (idx, drop) };
            pts.remove(hi);
            pts.remove(lo);
        }
    }
    (pts.len() == count).then_some(pts)
}
