use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const BIG: f64 = 1e150;
const LN_BIG: f64 = 345.387_763_949_107; // ln(1e150)

/// `(ln|prod|, sign)` of a product of real factors without over- or underflow.
pub fn log_abs_product<I: IntoIterator<Item = f64>>(factors: I) -> (f64, f64) {
    let mut acc = 1.0f64;
    let mut exp = 0i64;
    for f in factors {
        acc *= f;
        let a = acc.abs();
        if a > BIG {
            acc /= BIG;
            exp += 1;
        } else if a < 1.0 / BIG && a != 0.0 {
            acc *= BIG;
            exp -= 1;
        }
    }
    if acc == 0.0 {
        return (f64::NEG_INFINITY, 1.0);
    }
    (acc.abs().ln() + exp as f64 * LN_BIG, acc.signum())
}

/// A monic polynomial with real zeros, `p(z) = prod (z - zeros[k])`.
///
/// Product evaluation is accurate to a few ulps relative everywhere off the
/// zeros, including far outside the hull, which a coefficient form is not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootForm {
    pub zeros: Vec<f64>,
}

impl RootForm {
    pub fn new(mut zeros: Vec<f64>) -> Self {
        zeros.sort_by(f64::total_cmp);
        Self { zeros }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn log_abs(&self, x: f64) -> (f64, f64) {
        log_abs_product(self.zeros.iter().map(|&r| x - r))
    }

    pub fn value(&self, x: f64) -> f64 {
        let (l, s) = self.log_abs(x);
        s * l.exp()
    }

    pub fn log_abs_complex(&self, z: Complex64) -> f64 {
        self.zeros.iter().map(|&r| (z - r).norm().ln()).sum()
    }

    /// Complex logarithm `sum ln(z - zeros[k])` (principal branch per factor).
    pub fn log_complex(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().map(|&r| (z - r).ln()).sum()
    }

    /// `p'(x) / p(x) = sum 1/(x - zeros[k])`.
    pub fn log_derivative(&self, x: f64) -> f64 {
        self.zeros.iter().map(|&r| 1.0 / (x - r)).sum()
    }

    /// `(ln|p'(x)|, sign)`.
    pub fn derivative_log(&self, x: f64) -> (f64, f64) {
        let hit = self.zeros.iter().position(|&r| r == x);
        match hit {
            Some(i) => log_abs_product(
                self.zeros.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &r)| x - r),
            ),
            None => {
                let (l, s) = self.log_abs(x);
                let d = self.log_derivative(x);
                (l + d.abs().ln(), s * d.signum())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_survives_extreme_magnitudes() {
        let (l, s) = log_abs_product(std::iter::repeat_n(1e-3, 400));
        assert!((l - 400.0 * 1e-3f64.ln()).abs() < 1e-9);
        assert_eq!(s, 1.0);
        let (l, s) = log_abs_product(std::iter::repeat_n(-1e3, 401));
        assert!((l - 401.0 * 1e3f64.ln()).abs() < 1e-9);
        assert_eq!(s, -1.0);
    }

    #[test]
    fn root_form_values_and_derivative() {
        let p = RootForm::new(vec![0.5, -0.5, 0.0]); // x^3 - x/4
        assert!((p.value(1.0) - 0.75).abs() < 1e-15);
        let (l, s) = p.derivative_log(1.0);
        assert!((s * l.exp() - 2.75).abs() < 1e-14);
        let (l, s) = p.derivative_log(0.0);
        assert!((s * l.exp() + 0.25).abs() < 1e-15);
        let z = Complex64::new(0.2, 1.0);
        let direct = z * z * z - z / 4.0;
        assert!((p.log_complex(z).exp() - direct).norm() < 1e-14);
    }
}
