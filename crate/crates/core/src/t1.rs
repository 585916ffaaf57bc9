//! Type-1 fuzzy numbers stored as their α-cuts on a uniform level grid.
//!
//! Every cut formula used by the triangular constructors is affine in α, so
//! grid nodes hold exact values and [`T1Fuzzy::cut_at`] interpolates linearly
//! between them.

use std::fmt;

use crate::error::{Error, Result};
use crate::interval::Interval;

pub const DEFAULT_ALPHA_COUNT: usize = 101;

/// Tolerance for monotonicity and ordering checks in [`T1Fuzzy::validate`].
pub const VALIDITY_TOL: f64 = 1e-9;

/// Uniform α levels `0, 1/(n-1), ..., 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlphaGrid {
    count: usize,
}

impl AlphaGrid {
    pub fn new(count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidGrid(format!(
                "alpha grid needs at least 2 levels, got {count}"
            )));
        }
        Ok(Self { count })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.count - 1) as f64
    }

    #[inline]
    pub fn level(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            1.0
        } else {
            k as f64 / (self.count - 1) as f64
        }
    }

    pub fn levels(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |k| self.level(k))
    }

    /// Index of the node equal to `alpha` within `1e-9`, if any.
    pub fn index_of(&self, alpha: f64) -> Option<usize> {
        let pos = alpha * (self.count - 1) as f64;
        let k = pos.round();
        if k < 0.0 || k > (self.count - 1) as f64 {
            return None;
        }
        let k = k as usize;
        ((self.level(k) - alpha).abs() <= 1e-9).then_some(k)
    }

    /// Bracketing node and interpolation weight for `alpha` in `[0, 1]`.
    pub(crate) fn locate(&self, alpha: f64) -> (usize, f64) {
        let alpha = alpha.clamp(0.0, 1.0);
        let pos = alpha * (self.count - 1) as f64;
        let k = (pos.floor() as usize).min(self.count - 2);
        (k, pos - k as f64)
    }
}

impl Default for AlphaGrid {
    fn default() -> Self {
        Self {
            count: DEFAULT_ALPHA_COUNT,
        }
    }
}

/// Triangular type-1 number `<<left, core, right>>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangularT1 {
    pub left: f64,
    pub core: f64,
    pub right: f64,
}

impl TriangularT1 {
    pub fn new(left: f64, core: f64, right: f64) -> Result<Self> {
        if !(left <= core && core <= right) {
            return Err(Error::InvalidShape(format!(
                "expected left <= core <= right, got <<{left}, {core}, {right}>>"
            )));
        }
        Ok(Self { left, core, right })
    }

    pub fn cut(&self, alpha: f64) -> Interval {
        Interval::hull(
            self.core - (1.0 - alpha) * (self.core - self.left),
            self.core + (1.0 - alpha) * (self.right - self.core),
        )
    }

    /// Membership grade of `x`, read off the two linear flanks.
    pub fn membership(&self, x: f64) -> f64 {
        if x < self.left || x > self.right {
            0.0
        } else if x == self.core {
            1.0
        } else if x < self.core {
            (x - self.left) / (self.core - self.left)
        } else {
            (self.right - x) / (self.right - self.core)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidityReason {
    NonFinite,
    /// Left end exceeds right end.
    Inverted,
    /// Left end decreases as α grows.
    LeftDecreasing,
    /// Right end increases as α grows.
    RightIncreasing,
}

impl fmt::Display for ValidityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ValidityReason::NonFinite => "non-finite endpoint",
            ValidityReason::Inverted => "left end exceeds right end",
            ValidityReason::LeftDecreasing => "left end decreases in alpha",
            ValidityReason::RightIncreasing => "right end increases in alpha",
        };
        f.write_str(s)
    }
}

/// First offending level of a cut family that is not a fuzzy number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidityError {
    pub level: usize,
    pub alpha: f64,
    pub reason: ValidityReason,
}

impl fmt::Display for ValidityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at alpha = {} (level {})",
            self.reason, self.alpha, self.level
        )
    }
}

impl std::error::Error for ValidityError {}

/// A type-1 fuzzy number as the α-indexed family of its cuts.
///
/// Values built through the checked constructors and the arithmetic in this
/// module are valid fuzzy numbers. [`T1Fuzzy::raw`] and [`T1Fuzzy::tabulate`]
/// store arbitrary endpoint families so they can be inspected with
/// [`T1Fuzzy::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct T1Fuzzy {
    grid: AlphaGrid,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl T1Fuzzy {
    pub fn from_triangular(t: TriangularT1, grid: AlphaGrid) -> Self {
        Self::tabulate(grid, |alpha| {
            (
                t.core - (1.0 - alpha) * (t.core - t.left),
                t.core + (1.0 - alpha) * (t.right - t.core),
            )
        })
    }

    pub fn crisp(r: f64, grid: AlphaGrid) -> Self {
        Self {
            grid,
            left: vec![r; grid.count()],
            right: vec![r; grid.count()],
        }
    }

    /// Checked constructor.
    pub fn from_endpoints(grid: AlphaGrid, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        let u = Self::raw(grid, left, right)?;
        u.validate()?;
        Ok(u)
    }

    /// Stores an endpoint family without checking the fuzzy-number invariants.
    pub fn raw(grid: AlphaGrid, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        if left.len() != grid.count() || right.len() != grid.count() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, left, right })
    }

    /// Samples `f(alpha) = (left, right)` at every grid level, unchecked.
    pub fn tabulate(grid: AlphaGrid, mut f: impl FnMut(f64) -> (f64, f64)) -> Self {
        let (left, right) = grid.levels().map(&mut f).unzip();
        Self { grid, left, right }
    }

    pub fn grid(&self) -> AlphaGrid {
        self.grid
    }

    pub fn left(&self) -> &[f64] {
        &self.left
    }

    pub fn right(&self) -> &[f64] {
        &self.right
    }

    pub fn endpoints(&self, k: usize) -> (f64, f64) {
        (self.left[k], self.right[k])
    }

    /// Cut at grid level `k` (ordered hull for unvalidated families).
    pub fn cut(&self, k: usize) -> Interval {
        Interval::hull(self.left[k], self.right[k])
    }

    pub fn cuts(&self) -> impl Iterator<Item = Interval> + '_ {
        (0..self.grid.count()).map(move |k| self.cut(k))
    }

    /// Endpoints at an arbitrary level, linearly interpolated between nodes.
    pub fn cut_at(&self, alpha: f64) -> (f64, f64) {
        let (k, t) = self.grid.locate(alpha);
        let lerp = |v: &[f64]| v[k] + t * (v[k + 1] - v[k]);
        if t == 0.0 {
            (self.left[k], self.right[k])
        } else {
            (lerp(&self.left), lerp(&self.right))
        }
    }

    pub fn support(&self) -> Interval {
        self.cut(0)
    }

    pub fn core(&self) -> Interval {
        self.cut(self.grid.count() - 1)
    }

    pub fn is_crisp(&self, tol: f64) -> bool {
        self.left
            .iter()
            .zip(&self.right)
            .all(|(l, r)| (r - l).abs() <= tol)
            && (self.left[0] - self.left[self.grid.count() - 1]).abs() <= tol
    }

    pub fn validate(&self) -> Result<(), ValidityError> {
        self.validate_with_tol(VALIDITY_TOL)
    }

    /// Checks cut ordering and endpoint monotonicity, reporting the first
    /// offending level. Nesting of the cuts follows from monotonicity.
    pub fn validate_with_tol(&self, tol: f64) -> Result<(), ValidityError> {
        let fail = |level: usize, reason| ValidityError {
            level,
            alpha: self.grid.level(level),
            reason,
        };
        for k in 0..self.grid.count() {
            let (l, r) = (self.left[k], self.right[k]);
            if !l.is_finite() || !r.is_finite() {
                return Err(fail(k, ValidityReason::NonFinite));
            }
            if l - r > tol {
                return Err(fail(k, ValidityReason::Inverted));
            }
            if k > 0 {
                if self.left[k - 1] - l > tol {
                    return Err(fail(k, ValidityReason::LeftDecreasing));
                }
                if r - self.right[k - 1] > tol {
                    return Err(fail(k, ValidityReason::RightIncreasing));
                }
            }
        }
        Ok(())
    }

    fn same_grid(&self, other: &T1Fuzzy) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn zip_with(&self, other: &T1Fuzzy, f: impl Fn(Interval, Interval) -> Interval) -> T1Fuzzy {
        let (left, right) = (0..self.grid.count())
            .map(|k| {
                let c = f(self.cut(k), other.cut(k));
                (c.lo(), c.hi())
            })
            .unzip();
        T1Fuzzy {
            grid: self.grid,
            left,
            right,
        }
    }

    pub fn add(&self, other: &T1Fuzzy) -> Result<T1Fuzzy> {
        self.same_grid(other)?;
        let (left, right) = (0..self.grid.count())
            .map(|k| (self.left[k] + other.left[k], self.right[k] + other.right[k]))
            .unzip();
        Ok(T1Fuzzy {
            grid: self.grid,
            left,
            right,
        })
    }

    pub fn scale(&self, k: f64) -> T1Fuzzy {
        let (left, right) = if k >= 0.0 {
            (
                self.left.iter().map(|l| k * l).collect(),
                self.right.iter().map(|r| k * r).collect(),
            )
        } else {
            (
                self.right.iter().map(|r| k * r).collect(),
                self.left.iter().map(|l| k * l).collect(),
            )
        };
        T1Fuzzy {
            grid: self.grid,
            left,
            right,
        }
    }

    /// Levelwise product; the assembled family is validated.
    pub fn mul(&self, other: &T1Fuzzy) -> Result<T1Fuzzy> {
        self.same_grid(other)?;
        let p = self.zip_with(other, Interval::mul);
        p.validate()?;
        Ok(p)
    }

    /// Hukuhara difference `w` with `other + w = self`.
    pub fn h_diff(&self, other: &T1Fuzzy) -> Result<T1Fuzzy> {
        self.same_grid(other)?;
        let mut left = Vec::with_capacity(self.grid.count());
        let mut right = Vec::with_capacity(self.grid.count());
        for k in 0..self.grid.count() {
            let a = Interval::new(self.left[k], self.right[k])
                .map_err(|_| Error::NoHukuharaDifference)?;
            let b = Interval::new(other.left[k], other.right[k])
                .map_err(|_| Error::NoHukuharaDifference)?;
            let w = a.h_diff(b)?;
            left.push(w.lo());
            right.push(w.hi());
        }
        let w = T1Fuzzy {
            grid: self.grid,
            left,
            right,
        };
        w.validate().map_err(|_| Error::NoHukuharaDifference)?;
        Ok(w)
    }

    pub fn le(&self, other: &T1Fuzzy) -> Result<bool> {
        self.same_grid(other)?;
        Ok((0..self.grid.count())
            .all(|k| self.left[k] <= other.left[k] && self.right[k] <= other.right[k]))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.left.iter().all(|&l| l >= 0.0)
    }

    pub fn is_positive(&self) -> bool {
        self.left.iter().all(|&l| l > 0.0)
    }

    /// Fuzzy Hausdorff distance, the supremum taken over grid levels.
    pub fn d_hausdorff(&self, other: &T1Fuzzy) -> Result<f64> {
        self.same_grid(other)?;
        Ok((0..self.grid.count())
            .map(|k| {
                (self.left[k] - other.left[k])
                    .abs()
                    .max((self.right[k] - other.right[k]).abs())
            })
            .fold(0.0, f64::max))
    }

    /// Membership grade of `x`: the largest α whose cut contains `x`,
    /// interpolating linearly between grid levels.
    pub fn membership(&self, x: f64) -> f64 {
        let n = self.grid.count();
        if !self.cut(0).contains(x) {
            return 0.0;
        }
        let mut k = 0;
        while k + 1 < n && self.cut(k + 1).contains(x) {
            k += 1;
        }
        if k + 1 == n {
            return 1.0;
        }
        let (l0, r0) = (self.left[k], self.right[k]);
        let (l1, r1) = (self.left[k + 1], self.right[k + 1]);
        let t = if x < l1 {
            if l1 > l0 {
                (x - l0) / (l1 - l0)
            } else {
                0.0
            }
        } else if r1 < r0 {
            (r0 - x) / (r0 - r1)
        } else {
            0.0
        };
        self.grid.level(k) + t.clamp(0.0, 1.0) * self.grid.step()
    }
}

impl fmt::Display for T1Fuzzy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.grid.count();
        write!(
            f,
            "T1Fuzzy(support {}, core {}, {} levels)",
            self.cut(0),
            self.cut(n - 1),
            n
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> AlphaGrid {
        AlphaGrid::new(11).unwrap()
    }

    fn tri(l: f64, c: f64, r: f64) -> T1Fuzzy {
        T1Fuzzy::from_triangular(TriangularT1::new(l, c, r).unwrap(), grid())
    }

    fn close(a: &T1Fuzzy, b: &T1Fuzzy, tol: f64) -> bool {
        a.d_hausdorff(b).unwrap() <= tol
    }

    #[test]
    fn grid_levels() {
        let g = AlphaGrid::new(31).unwrap();
        assert_eq!(g.level(0), 0.0);
        assert_eq!(g.level(30), 1.0);
        assert_eq!(g.index_of(1.0 / 3.0), Some(10));
        assert_eq!(g.index_of(0.34), None);
        assert!(AlphaGrid::new(1).is_err());
        assert_eq!(AlphaGrid::default().count(), 101);
    }

    #[test]
    fn triangular_cuts() {
        let u = tri(0.0, 1.0, 2.0);
        assert_eq!(u.cut(0), Interval::new(0.0, 2.0).unwrap());
        assert_eq!(u.cut(10), Interval::crisp(1.0));
        let five = tri(3.5, 5.0, 6.5);
        assert_eq!(five.cut(5), Interval::new(4.25, 5.75).unwrap());
        assert!(TriangularT1::new(1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn sum_scale_product() {
        let s = tri(0.0, 1.0, 2.0).add(&tri(1.0, 2.0, 3.0)).unwrap();
        assert!(close(&s, &tri(1.0, 3.0, 5.0), 1e-15));
        let neg = tri(1.0, 2.0, 3.0).scale(-1.0);
        assert!(close(&neg, &tri(-3.0, -2.0, -1.0), 1e-15));
        let p = tri(0.0, 1.0, 2.0).mul(&tri(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(p.cut(0), Interval::new(0.0, 6.0).unwrap());
        assert_eq!(p.cut(10), Interval::crisp(2.0));
        let other = T1Fuzzy::crisp(0.0, AlphaGrid::new(5).unwrap());
        assert_eq!(p.add(&other), Err(Error::GridMismatch));
    }

    #[test]
    fn hukuhara_difference() {
        let w = tri(2.0, 4.0, 6.0).h_diff(&tri(1.0, 2.0, 3.0)).unwrap();
        assert!(close(&w, &tri(1.0, 2.0, 3.0), 1e-15));
        let u = tri(-1.0, 0.5, 4.0);
        assert!(u.h_diff(&u).unwrap().is_crisp(0.0));
        assert_eq!(
            tri(1.0, 2.0, 3.0).h_diff(&tri(0.0, 2.0, 4.0)),
            Err(Error::NoHukuharaDifference)
        );
    }

    #[test]
    fn zero_minus_fuzzy_is_rejected() {
        let zero = T1Fuzzy::crisp(0.0, grid());
        assert_eq!(
            zero.h_diff(&tri(1.0, 2.0, 3.0)),
            Err(Error::NoHukuharaDifference)
        );
        let c = T1Fuzzy::crisp(4.0, grid());
        assert!(close(
            &zero.h_diff(&c).unwrap(),
            &T1Fuzzy::crisp(-4.0, grid()),
            0.0
        ));
    }

    #[test]
    fn hukuhara_requires_monotone_result() {
        // Levelwise differences exist but the assembled family is not a
        // fuzzy number: the subtrahend's core is wider than the minuend's.
        let g = AlphaGrid::new(3).unwrap();
        let a = T1Fuzzy::from_endpoints(g, vec![0.0, 0.0, 0.0], vec![4.0, 4.0, 4.0]).unwrap();
        let b = T1Fuzzy::from_endpoints(g, vec![0.0, 1.0, 1.0], vec![4.0, 3.0, 3.0]).unwrap();
        assert_eq!(a.h_diff(&b), Err(Error::NoHukuharaDifference));
    }

    #[test]
    fn order_and_sign() {
        assert!(tri(0.0, 1.0, 2.0).le(&tri(1.0, 2.0, 3.0)).unwrap());
        assert!(tri(0.0, 1.0, 2.0).is_nonnegative());
        assert!(!tri(0.0, 1.0, 2.0).is_positive());
        assert!(tri(0.5, 1.0, 2.0).is_positive());
    }

    #[test]
    fn hausdorff_examples() {
        let u = tri(0.0, 1.0, 2.0);
        assert_eq!(u.d_hausdorff(&u).unwrap(), 0.0);
        assert!((u.d_hausdorff(&tri(1.0, 2.0, 3.0)).unwrap() - 1.0).abs() < 1e-12);
        let d = T1Fuzzy::crisp(0.0, grid())
            .d_hausdorff(&T1Fuzzy::crisp(5.0, grid()))
            .unwrap();
        assert_eq!(d, 5.0);
    }

    #[test]
    fn validate_reports_first_offending_level() {
        assert!(tri(-3.0, 0.0, 0.5).validate().is_ok());
        let inverted = T1Fuzzy::tabulate(grid(), |a| (1.0 - a, a - 1.0));
        let err = inverted.validate().unwrap_err();
        assert_eq!(err.level, 0);
        assert_eq!(err.reason, ValidityReason::Inverted);

        let swapped = T1Fuzzy::tabulate(grid(), |a| (-a, 2.0 + a));
        let err = swapped.validate().unwrap_err();
        assert_eq!(err.level, 1);
        assert_eq!(err.reason, ValidityReason::LeftDecreasing);
    }

    #[test]
    fn interpolation_and_membership() {
        let five = tri(3.5, 5.0, 6.5);
        let (l, r) = five.cut_at(1.0 / 3.0);
        assert!((l - 4.0).abs() < 1e-12 && (r - 6.0).abs() < 1e-12);
        assert!((five.membership(4.5) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(five.membership(5.0), 1.0);
        assert_eq!(five.membership(7.0), 0.0);
        assert_eq!(tri(4.5, 5.0, 5.5).membership(4.5), 0.0);
    }
}
