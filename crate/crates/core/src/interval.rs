//! Closed real intervals and the endpoint arithmetic every level cut is built on.
//!
//! A crisp real `r` is the degenerate interval `[r, r]`; there is no separate
//! crisp type.

use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// Slack allowed when deciding whether a Hukuhara difference exists.
pub const HDIFF_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    pub const fn crisp(r: f64) -> Self {
        Self { lo: r, hi: r }
    }

    /// Ordered hull of two reals.
    pub fn hull(a: f64, b: f64) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub const fn zero() -> Self {
        Self::crisp(0.0)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn add(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    /// Scalar multiple; a negative factor swaps the endpoints.
    pub fn scale(self, k: f64) -> Interval {
        if k >= 0.0 {
            Interval {
                lo: k * self.lo,
                hi: k * self.hi,
            }
        } else {
            Interval {
                lo: k * self.hi,
                hi: k * self.lo,
            }
        }
    }

    pub fn mul(self, other: Interval) -> Interval {
        let products = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }

    /// Hukuhara difference `w` with `other + w = self`, computed endpoint-wise.
    ///
    /// It exists only when `self` is at least as wide as `other`. Inversions
    /// within [`HDIFF_TOL`] are treated as exact-width ties and collapse to the
    /// midpoint.
    pub fn h_diff(self, other: Interval) -> Result<Interval> {
        let lo = self.lo - other.lo;
        let hi = self.hi - other.hi;
        if lo <= hi {
            Ok(Interval { lo, hi })
        } else if lo - hi <= HDIFF_TOL {
            Ok(Interval::crisp(0.5 * (lo + hi)))
        } else {
            Err(Error::NoHukuharaDifference)
        }
    }

    /// Componentwise order: both endpoints compare.
    pub fn le(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi <= other.hi
    }

    /// Hausdorff distance between two intervals.
    pub fn distance(&self, other: &Interval) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval::add(self, rhs)
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        Interval::mul(self, rhs)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn rejects_inverted_bounds() {
        assert!(matches!(
            Interval::new(2.0, 1.0),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn addition_examples() {
        assert_eq!(iv(1.0, 2.0) + iv(3.0, 5.0), iv(4.0, 7.0));
        assert_eq!(Interval::zero() + iv(-1.5, 2.5), iv(-1.5, 2.5));
        assert_eq!(iv(4.5, 5.5) + iv(1.0, 2.0), iv(5.5, 7.5));
    }

    #[test]
    fn scaling_examples() {
        assert_eq!(iv(1.0, 3.0).scale(2.0), iv(2.0, 6.0));
        assert_eq!(iv(1.0, 3.0).scale(-1.0), iv(-3.0, -1.0));
        let z = iv(-4.0, 9.0).scale(0.0);
        assert_eq!((z.lo(), z.hi()), (0.0, 0.0));
    }

    #[test]
    fn product_examples() {
        assert_eq!(iv(1.0, 2.0) * iv(-3.0, 4.0), iv(-6.0, 8.0));
        let z = Interval::zero() * iv(-2.0, 7.0);
        assert_eq!((z.lo().abs(), z.hi().abs()), (0.0, 0.0));
        assert_eq!(iv(2.0, 3.0) * iv(2.0, 3.0), iv(4.0, 9.0));
    }

    #[test]
    fn hukuhara_examples() {
        assert_eq!(iv(2.0, 6.0).h_diff(iv(1.0, 3.0)).unwrap(), iv(1.0, 3.0));
        let a = iv(-0.7, 4.25);
        assert_eq!(a.h_diff(a).unwrap(), Interval::zero());
        assert_eq!(
            iv(1.0, 3.0).h_diff(iv(0.0, 4.0)),
            Err(Error::NoHukuharaDifference)
        );
    }

    #[test]
    fn order_examples() {
        assert!(iv(1.0, 2.0).le(&iv(1.0, 3.0)));
        assert!(!iv(1.0, 5.0).le(&iv(2.0, 4.0)));
        assert!(Interval::zero().le(&Interval::zero()));
    }

    #[test]
    fn opposite_is_not_hukuhara_negation() {
        let a = iv(1.0, 3.0);
        let sum = a + a.scale(-1.0);
        assert_ne!(sum, Interval::zero());
        assert_eq!(a.h_diff(a).unwrap(), Interval::zero());
        let crisp = Interval::crisp(2.5);
        assert_eq!(crisp + crisp.scale(-1.0), Interval::zero());
    }

    fn interval() -> impl Strategy<Value = Interval> {
        (-50.0f64..50.0, 0.0f64..20.0).prop_map(|(lo, w)| Interval::new(lo, lo + w).unwrap())
    }

    proptest! {
        #[test]
        fn hdiff_round_trip(b in interval(), extra in interval()) {
            let a = b + extra;
            let w = a.h_diff(b).unwrap();
            let back = b + w;
            prop_assert!(back.distance(&a) <= 1e-12 * (1.0 + a.lo().abs().max(a.hi().abs())));
        }

        #[test]
        fn scale_inverse(a in interval(), k in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0]) {
            let back = a.scale(1.0 / k).scale(k);
            prop_assert!(back.distance(&a) <= 1e-12 * (1.0 + a.lo().abs().max(a.hi().abs())));
        }

        #[test]
        fn product_encloses_sampled_products(a in interval(), b in interval()) {
            let p = a * b;
            let mut sampled_lo = f64::INFINITY;
            let mut sampled_hi = f64::NEG_INFINITY;
            for i in 0..10 {
                for j in 0..10 {
                    let x = if i == 9 { a.hi() } else { a.lo() + a.width() * i as f64 / 9.0 };
                    let y = if j == 9 { b.hi() } else { b.lo() + b.width() * j as f64 / 9.0 };
                    let xy = x * y;
                    sampled_lo = sampled_lo.min(xy);
                    sampled_hi = sampled_hi.max(xy);
                    prop_assert!(p.lo() <= xy + 1e-9 && xy <= p.hi() + 1e-9);
                }
            }
            let corners = [a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()];
            let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert_eq!(p.lo(), lo);
            prop_assert_eq!(p.hi(), hi);
            prop_assert!(p.lo() <= sampled_lo && sampled_hi <= p.hi());
        }
    }
}
