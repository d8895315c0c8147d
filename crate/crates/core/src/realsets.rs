//! Finite unions of disjoint closed real intervals.

use serde::{Deserialize, Serialize};

use crate::error::SetError;

/// A closed band `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn half(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    /// Point at angle `phi` of the cosine parametrisation, `phi = 0` at `lo`.
    pub fn at_angle(&self, phi: f64) -> f64 {
        self.mid() - self.half() * phi.cos()
    }

    /// Inverse of [`Band::at_angle`], clamped to `[0, pi]`.
    pub fn angle_of(&self, x: f64) -> f64 {
        ((self.mid() - x) / self.half()).clamp(-1.0, 1.0).acos()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Open gap `(left, right)` between two consecutive bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub left: f64,
    pub right: f64,
}

impl Gap {
    pub fn len(&self) -> f64 {
        self.right - self.left
    }

    pub fn contains(&self, x: f64) -> bool {
        self.left < x && x < self.right
    }

    pub fn as_band(&self) -> Band {
        Band::new(self.left, self.right)
    }
}

/// Convex hull `[lo, hi]` of a set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hull {
    pub lo: f64,
    pub hi: f64,
}

impl Hull {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Affine map onto `[-1, 1]`.
    pub fn to_unit(&self, x: f64) -> f64 {
        (2.0 * x - (self.lo + self.hi)) / (self.hi - self.lo)
    }

    pub fn from_unit(&self, s: f64) -> f64 {
        self.mid() + 0.5 * self.len() * s
    }
}

/// A finite union of disjoint closed intervals, sorted left to right.
///
/// Serialises as `{"bands": [[a1, b1], [a2, b2], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSet", into = "RawSet")]
pub struct IntervalSet {
    bands: Vec<Band>,
}

#[derive(Serialize, Deserialize)]
struct RawSet {
    bands: Vec<[f64; 2]>,
}

impl TryFrom<RawSet> for IntervalSet {
    type Error = SetError;

    fn try_from(raw: RawSet) -> Result<Self, Self::Error> {
        let pairs: Vec<(f64, f64)> = raw.bands.iter().map(|b| (b[0], b[1])).collect();
        validate_set(&pairs)
    }
}

impl From<IntervalSet> for RawSet {
    fn from(set: IntervalSet) -> Self {
        RawSet { bands: set.bands.iter().map(|b| [b.lo, b.hi]).collect() }
    }
}

/// Sort and merge raw `(a, b)` pairs into a valid [`IntervalSet`].
///
/// Touching or overlapping intervals merge; point bands are rejected.
pub fn validate_set(raw_bands: &[(f64, f64)]) -> Result<IntervalSet, SetError> {
    if raw_bands.is_empty() {
        return Err(SetError::EmptyInput);
    }
    let mut bands = Vec::with_capacity(raw_bands.len());
    for &(a, b) in raw_bands {
        if !a.is_finite() || !b.is_finite() {
            return Err(SetError::NonFinite(a, b));
        }
        if a >= b {
            return Err(SetError::DegenerateBand(a, b));
        }
        bands.push(Band::new(a, b));
    }
    bands.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    let mut merged: Vec<Band> = Vec::with_capacity(bands.len());
    for b in bands {
        match merged.last_mut() {
            Some(last) if b.lo <= last.hi => last.hi = last.hi.max(b.hi),
            _ => merged.push(b),
        }
    }
    Ok(IntervalSet { bands: merged })
}

impl IntervalSet {
    pub fn new(raw_bands: &[(f64, f64)]) -> Result<Self, SetError> {
        validate_set(raw_bands)
    }

    /// The interval `[-1, 1]`.
    pub fn unit() -> Self {
        Self { bands: vec![Band::new(-1.0, 1.0)] }
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    pub fn gaps(&self) -> Vec<Gap> {
        self.bands
            .windows(2)
            .map(|w| Gap { left: w[0].hi, right: w[1].lo })
            .collect()
    }

    pub fn hull(&self) -> Hull {
        Hull { lo: self.bands[0].lo, hi: self.bands[self.bands.len() - 1].hi }
    }

    /// All `2p` endpoints in increasing order.
    pub fn endpoints(&self) -> Vec<f64> {
        self.bands.iter().flat_map(|b| [b.lo, b.hi]).collect()
    }

    /// Distance from `x` to the set.
    pub fn distance(&self, x: f64) -> f64 {
        self.bands
            .iter()
            .map(|b| {
                if x < b.lo {
                    b.lo - x
                } else if x > b.hi {
                    x - b.hi
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// Index of the band containing `x` (closed), if any.
    pub fn band_index(&self, x: f64) -> Option<usize> {
        self.bands.iter().position(|b| b.contains(x))
    }

    /// Index of the gap containing `x` (open), if any.
    pub fn gap_index(&self, x: f64) -> Option<usize> {
        self.gaps().iter().position(|g| g.contains(x))
    }

    pub fn total_length(&self) -> f64 {
        self.bands.iter().map(Band::len).sum()
    }

    /// Image under `x -> scale * x + shift` with `scale > 0`.
    pub fn affine(&self, scale: f64, shift: f64) -> Self {
        assert!(scale > 0.0);
        Self {
            bands: self
                .bands
                .iter()
                .map(|b| Band::new(scale * b.lo + shift, scale * b.hi + shift))
                .collect(),
        }
    }

    /// True when the set is invariant under `x -> -x` up to `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let p = self.bands.len();
        (0..p).all(|k| {
            let b = self.bands[k];
            let m = self.bands[p - 1 - k];
            (b.lo + m.hi).abs() <= tol && (b.hi + m.lo).abs() <= tol
        })
    }

    /// Largest endpoint displacement between two sets with equal band count.
    pub fn edge_distance(&self, other: &Self) -> Option<f64> {
        if self.bands.len() != other.bands.len() {
            return None;
        }
        Some(
            self.endpoints()
                .iter()
                .zip(other.endpoints())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        let s = validate_set(&[(-1.0, 1.0)]).unwrap();
        assert_eq!(s.bands(), &[Band::new(-1.0, 1.0)]);
        let s = validate_set(&[(0.5, 1.0), (-1.0, -0.5)]).unwrap();
        assert_eq!(s.bands(), &[Band::new(-1.0, -0.5), Band::new(0.5, 1.0)]);
        let s = validate_set(&[(0.0, 1.0), (1.0, 2.0)]).unwrap();
        assert_eq!(s.bands(), &[Band::new(0.0, 2.0)]);
        let s = validate_set(&[(0.0, 3.0), (1.0, 2.0), (2.5, 4.0)]).unwrap();
        assert_eq!(s.bands(), &[Band::new(0.0, 4.0)]);
    }

    #[test]
    fn validate_errors() {
        assert_eq!(validate_set(&[]), Err(SetError::EmptyInput));
        assert_eq!(validate_set(&[(1.0, 1.0)]), Err(SetError::DegenerateBand(1.0, 1.0)));
        assert_eq!(validate_set(&[(2.0, 1.0)]), Err(SetError::DegenerateBand(2.0, 1.0)));
        assert!(matches!(validate_set(&[(0.0, f64::NAN)]), Err(SetError::NonFinite(..))));
    }

    #[test]
    fn gaps_examples() {
        assert!(IntervalSet::unit().gaps().is_empty());
        let s = IntervalSet::new(&[(-1.0, -0.5), (0.5, 1.0)]).unwrap();
        assert_eq!(s.gaps(), vec![Gap { left: -0.5, right: 0.5 }]);
        let s = IntervalSet::new(&[(0.0, 1.0), (2.0, 3.0), (4.0, 5.0)]).unwrap();
        assert_eq!(
            s.gaps(),
            vec![Gap { left: 1.0, right: 2.0 }, Gap { left: 3.0, right: 4.0 }]
        );
    }

    #[test]
    fn contains_examples() {
        assert!(IntervalSet::unit().contains(0.0, 0.0));
        let two = IntervalSet::new(&[(-1.0, -0.5), (0.5, 1.0)]).unwrap();
        assert!(!two.contains(0.0, 0.0));
        let s = IntervalSet::new(&[(0.0, 1.0)]).unwrap();
        assert!(s.contains(1.0 + 1e-12, 1e-10));
        assert!(!s.contains(1.0 + 1e-12, 0.0));
    }

    #[test]
    fn json_round_trip() {
        let s: IntervalSet = serde_json_like("{\"bands\": [[0.5, 1], [-1, -0.5]]}");
        assert_eq!(s.bands().len(), 2);
        assert_eq!(s.hull(), Hull { lo: -1.0, hi: 1.0 });
    }

    fn serde_json_like(text: &str) -> IntervalSet {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn symmetric_detection() {
        assert!(IntervalSet::new(&[(-1.0, -0.5), (0.5, 1.0)]).unwrap().is_symmetric(1e-14));
        assert!(!IntervalSet::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap().is_symmetric(1e-14));
    }
}
