//! Periodic Jacobi matrices through their transfer matrices.
//!
//! The discriminant `D = tr M_p` has leading coefficient `1/(a_1...a_p)`,
//! the spectrum is `D^{-1}([-2, 2])`, and `(a_1...a_p) D` is the Chebyshev
//! polynomial of that spectrum with norm `2 a_1...a_p`.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bands::envelope;
use crate::chebyshev::{chebyshev, Poly, RootForm};
use crate::error::{BandsError, Error, JacobiError};
use crate::potential::EquilibriumData;
use crate::quad::{chebyshev_coefficients, chebyshev_extrema};
use crate::realsets::{Hull, IntervalSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct JacobiParams {
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    p: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<RawParams> for JacobiParams {
    type Error = JacobiError;

    fn try_from(raw: RawParams) -> Result<Self, JacobiError> {
        if raw.a.len() != raw.p {
            return Err(JacobiError::LengthMismatch(raw.p, raw.a.len()));
        }
        Self::new(raw.a, raw.b)
    }
}

impl From<JacobiParams> for RawParams {
    fn from(j: JacobiParams) -> Self {
        RawParams { p: j.a.len(), a: j.a, b: j.b }
    }
}

impl JacobiParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self, JacobiError> {
        if a.is_empty() {
            return Err(JacobiError::EmptyPeriod);
        }
        if a.len() != b.len() {
            return Err(JacobiError::LengthMismatch(a.len(), b.len()));
        }
        if let Some((i, &v)) = a.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(JacobiError::InvalidOffDiagonal(i, v));
        }
        if let Some((i, &v)) = b.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(JacobiError::InvalidDiagonal(i, v));
        }
        Ok(Self { a, b })
    }

    pub fn period(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `a_1 ... a_p`.
    pub fn a_product(&self) -> f64 {
        self.a.iter().product()
    }

    /// Radius containing the spectrum: `max|b| + 2 max a + 1`.
    pub fn bound(&self) -> f64 {
        let bmax = self.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let amax = self.a.iter().fold(0.0f64, |m, v| m.max(*v));
        bmax + 2.0 * amax + 1.0
    }

    /// Random parameters with `a` in `[0.5, 1.5]` and `b` in `[-1, 1]`.
    pub fn random<R: Rng>(rng: &mut R, p: usize) -> Self {
        let a = (0..p).map(|_| rng.random_range(0.5..1.5)).collect();
        let b = (0..p).map(|_| rng.random_range(-1.0..1.0)).collect();
        Self::new(a, b).expect("valid by construction")
    }
}

/// `M_p(z) = A_p ... A_1` with `A_j = (1/a_j) [[z - b_j, -1], [a_j^2, 0]]`.
pub fn transfer_matrix(params: &JacobiParams, z: Complex64) -> Matrix2<Complex64> {
    let mut m = Matrix2::identity();
    for (&a, &b) in params.a.iter().zip(&params.b) {
        let step = Matrix2::new(
            (z - b) / a,
            Complex64::new(-1.0 / a, 0.0),
            Complex64::new(a, 0.0),
            Complex64::new(0.0, 0.0),
        );
        m = step * m;
    }
    m
}

/// `D(z) = tr M_p(z)`.
pub fn discriminant(params: &JacobiParams, z: Complex64) -> Complex64 {
    transfer_matrix(params, z).trace()
}

/// `(D(x), D'(x))` on the real line.
pub fn discriminant_real(params: &JacobiParams, x: f64) -> (f64, f64) {
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    let mut dm = [[0.0, 0.0], [0.0, 0.0]];
    for (&a, &b) in params.a.iter().zip(&params.b) {
        let s = [[(x - b) / a, -1.0 / a], [a, 0.0]];
        let mut next = [[0.0; 2]; 2];
        let mut dnext = [[0.0; 2]; 2];
        for i in 0..2 {
            for k in 0..2 {
                next[i][k] = s[i][0] * m[0][k] + s[i][1] * m[1][k];
                dnext[i][k] = s[i][0] * dm[0][k] + s[i][1] * dm[1][k];
            }
        }
        // d/dx of the step only touches its (0, 0) entry
        for k in 0..2 {
            dnext[0][k] += m[0][k] / a;
        }
        m = next;
        dm = dnext;
    }
    (m[0][0] + m[1][1], dm[0][0] + dm[1][1])
}

/// The monic polynomial `(a_1...a_p) D` interpolated at `p + 1`
/// Chebyshev points of `hull`.
pub fn monic_discriminant(params: &JacobiParams, hull: Hull) -> Poly {
    let scale = params.a_product();
    Poly::from_log_sampler(hull, params.period(), true, |x| {
        let v = scale * discriminant_real(params, x).0;
        (v.abs().ln(), v.signum())
    })
}

/// Real zeros of `D` from the colleague matrix of its Chebyshev series on
/// `[-R, R]`, each polished by Newton steps on the trace.
pub fn discriminant_zeros(params: &JacobiParams) -> Vec<f64> {
    let p = params.period();
    let r = params.bound();
    let hull = Hull { lo: -r, hi: r };
    let values: Vec<f64> = chebyshev_extrema(p).iter().map(|&s| discriminant_real(params, r * s).0).collect();
    let c = chebyshev_coefficients(&values);
    let mut roots: Vec<f64> = if p == 1 {
        vec![-c[0] / c[1]]
    } else {
        let mut m = DMatrix::<f64>::zeros(p, p);
        m[(0, 1)] = 1.0;
        for i in 1..p {
            m[(i, i - 1)] = 0.5;
            if i + 1 < p {
                m[(i, i + 1)] = 0.5;
            }
        }
        for k in 0..p {
            m[(p - 1, k)] -= c[k] / (2.0 * c[p]);
        }
        m.complex_eigenvalues().iter().map(|l| l.re).collect()
    };
    for s in roots.iter_mut() {
        let mut x = hull.from_unit(*s);
        for _ in 0..8 {
            let (d, dd) = discriminant_real(params, x);
            if dd == 0.0 {
                break;
            }
            let step = d / dd;
            x -= step;
            if step.abs() <= 1e-16 * r {
                break;
            }
        }
        *s = x;
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// `D^{-1}([-2, 2])` with closed gaps merged.
pub fn spectrum(params: &JacobiParams) -> Result<IntervalSet, BandsError> {
    let zeros = discriminant_zeros(params);
    let r = params.bound();
    let roots = RootForm::new(zeros);
    let log_norm = (2.0 * params.a_product()).ln();
    Ok(envelope(&roots, log_norm, Hull { lo: -r, hi: r })?.bands)
}

/// Outcome of comparing `(a_1...a_p) D` with `T_p` of the spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub params: JacobiParams,
    pub spectrum: Option<IntervalSet>,
    /// Relative coefficient distance in the hull-Chebyshev basis.
    pub coefficient_residual: f64,
    /// `|(a_1...a_p)^(1/p) - C(e)|`.
    pub capacity_residual: f64,
    /// `|2 a_1...a_p - ||T_p|| |` relative.
    pub norm_residual: f64,
    pub passed: bool,
    pub failure: Option<String>,
}

pub fn chebyshev_identity_check(params: &JacobiParams, tol: f64) -> IdentityReport {
    match identity_residuals(params) {
        Ok((spec, coef, cap, norm)) => IdentityReport {
            params: params.clone(),
            spectrum: Some(spec),
            coefficient_residual: coef,
            capacity_residual: cap,
            norm_residual: norm,
            passed: coef <= tol && cap <= 10.0 * tol,
            failure: None,
        },
        Err(e) => IdentityReport {
            params: params.clone(),
            spectrum: None,
            coefficient_residual: f64::NAN,
            capacity_residual: f64::NAN,
            norm_residual: f64::NAN,
            passed: false,
            failure: Some(e.code()),
        },
    }
}

fn identity_residuals(params: &JacobiParams) -> Result<(IntervalSet, f64, f64, f64), Error> {
    let p = params.period();
    let spec = spectrum(params)?;
    let t = chebyshev(&spec, p, 1e-13)?;
    let scaled = monic_discriminant(params, spec.hull());
    let coef = scaled.relative_coefficient_distance(&t.poly);
    let prod = params.a_product();
    let cap = EquilibriumData::compute(&spec)?.capacity;
    let cap_res = (prod.powf(1.0 / p as f64) - cap).abs();
    let norm_res = ((2.0 * prod).ln() - t.log_norm).abs();
    Ok((spec, coef, cap_res, norm_res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn params(a: &[f64], b: &[f64]) -> JacobiParams {
        JacobiParams::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(JacobiParams::new(vec![], vec![]), Err(JacobiError::EmptyPeriod));
        assert!(matches!(JacobiParams::new(vec![1.0], vec![]), Err(JacobiError::LengthMismatch(1, 0))));
        assert!(matches!(JacobiParams::new(vec![0.0], vec![0.0]), Err(JacobiError::InvalidOffDiagonal(0, _))));
        assert!(matches!(JacobiParams::new(vec![1.0], vec![f64::NAN]), Err(JacobiError::InvalidDiagonal(0, _))));
        let j: JacobiParams = serde_json_like();
        assert_eq!(j.period(), 2);
    }

    fn serde_json_like() -> JacobiParams {
        let raw = RawParams { p: 2, a: vec![1.0, 0.5], b: vec![0.0, 0.0] };
        JacobiParams::try_from(raw).unwrap()
    }

    #[test]
    fn transfer_matrix_examples() {
        let z = Complex64::new(0.3, -0.7);
        let m = transfer_matrix(&params(&[1.0], &[0.0]), z);
        assert_eq!(m, Matrix2::new(z, Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        let m = transfer_matrix(&params(&[1.0, 1.0], &[0.0, 0.0]), Complex64::new(0.0, 0.0));
        assert_eq!(m, -Matrix2::identity());
        let j = params(&[0.7, 1.3, 0.9], &[0.2, -0.4, 0.1]);
        for z in [Complex64::new(1.0, 2.0), Complex64::new(-3.0, 0.1)] {
            let d = transfer_matrix(&j, z).determinant();
            assert!((d - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn discriminant_examples() {
        let free = params(&[1.0], &[0.0]);
        assert_eq!(discriminant(&free, Complex64::new(2.0, 0.0)), Complex64::new(2.0, 0.0));
        let j = params(&[1.0, 0.5], &[0.0, 0.0]);
        // second difference of a quadratic is twice its leading coefficient
        let d = |x: f64| discriminant_real(&j, x).0;
        let second = d(1.0) - 2.0 * d(0.0) + d(-1.0);
        assert!((second / 2.0 - 2.0).abs() < 1e-14);
        let (v, dv) = discriminant_real(&j, 0.7);
        let h = 1e-6;
        assert!((dv - (d(0.7 + h) - d(0.7 - h)) / (2.0 * h)).abs() < 1e-8);
        assert!((v - discriminant(&j, Complex64::new(0.7, 0.0)).re).abs() < 1e-15);
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(&params(&[1.0], &[0.0])).unwrap();
        assert!(s.edge_distance(&IntervalSet::new(&[(-2.0, 2.0)]).unwrap()).unwrap() < 1e-13);
        let s = spectrum(&params(&[0.5], &[0.0])).unwrap();
        assert!(s.edge_distance(&IntervalSet::unit()).unwrap() < 1e-13);
        let s = spectrum(&params(&[1.0, 1.0], &[1.0, -1.0])).unwrap();
        // D = (z^2 - 1) - 2, bands where |z^2 - 3| <= 2
        let expected = IntervalSet::new(&[(-5f64.sqrt(), -1.0), (1.0, 5f64.sqrt())]).unwrap();
        assert!(s.edge_distance(&expected).unwrap() < 1e-13, "{s:?}");
        assert!(s.is_symmetric(1e-13));
        let s = spectrum(&params(&[1.0, 1.0], &[0.0, 0.0])).unwrap();
        assert_eq!(s.band_count(), 1);
    }

    #[test]
    fn identity_examples() {
        let r = chebyshev_identity_check(&params(&[0.5], &[0.0]), 1e-8);
        assert!(r.passed && r.capacity_residual < 1e-14, "{r:?}");
        let r = chebyshev_identity_check(&params(&[1.0, 1.0], &[0.0, 0.0]), 1e-8);
        assert!(r.passed, "{r:?}");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let j = JacobiParams::random(&mut rng, 3);
            let r = chebyshev_identity_check(&j, 1e-8);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn monotone_inside_bands() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let j = JacobiParams::random(&mut rng, 3);
        let s = spectrum(&j).unwrap();
        for b in s.bands() {
            for i in 1..200 {
                let x = b.lo + b.len() * i as f64 / 200.0;
                let (d, dd) = discriminant_real(&j, x);
                assert!(d.abs() <= 2.0 + 1e-12);
                assert!(dd != 0.0);
            }
        }
    }
}
