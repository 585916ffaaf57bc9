//! Perfect quasi-type-2 fuzzy numbers.
//!
//! A value is stored as its β-planes: for each β level a pair of type-1
//! numbers, the lower and upper membership functions. The β=0 pair is the
//! foot-print of uncertainty and the β=1 plane, where the pair coincides, is
//! the principle set.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::t1::{AlphaGrid, T1Fuzzy, TriangularT1, ValidityReason, VALIDITY_TOL};

pub const DEFAULT_BETA_COUNT: usize = 21;

/// Default number of x nodes for [`d_hung_yang`].
pub const DEFAULT_HY_NODES: usize = 201;

/// Sorted β levels from 0 to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaGrid {
    levels: Arc<Vec<f64>>,
}

impl BetaGrid {
    pub fn uniform(count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidGrid(format!(
                "beta grid needs at least 2 levels, got {count}"
            )));
        }
        let n = (count - 1) as f64;
        let mut levels: Vec<f64> = (0..count).map(|k| k as f64 / n).collect();
        levels[count - 1] = 1.0;
        Ok(Self {
            levels: Arc::new(levels),
        })
    }

    pub fn new(levels: Vec<f64>) -> Result<Self> {
        let ok = levels.len() >= 2
            && levels[0] == 0.0
            && levels[levels.len() - 1] == 1.0
            && levels.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::InvalidGrid(
                "beta levels must increase strictly from 0 to 1".into(),
            ));
        }
        Ok(Self {
            levels: Arc::new(levels),
        })
    }

    pub fn count(&self) -> usize {
        self.levels.len()
    }

    #[inline]
    pub fn level(&self, j: usize) -> f64 {
        self.levels[j]
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn index_of(&self, beta: f64) -> Option<usize> {
        self.levels.iter().position(|&b| (b - beta).abs() <= 1e-9)
    }

    fn locate(&self, beta: f64) -> (usize, f64) {
        let beta = beta.clamp(0.0, 1.0);
        let n = self.levels.len();
        let j = self.levels[..n - 1]
            .partition_point(|&b| b <= beta)
            .saturating_sub(1);
        let (b0, b1) = (self.levels[j], self.levels[j + 1]);
        (j, (beta - b0) / (b1 - b0))
    }
}

impl Default for BetaGrid {
    fn default() -> Self {
        Self::uniform(DEFAULT_BETA_COUNT).expect("default grid is valid")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Plane {
    Lower,
    Upper,
}

impl Plane {
    pub const BOTH: [Plane; 2] = [Plane::Lower, Plane::Upper];

    pub fn as_str(&self) -> &'static str {
        match self {
            Plane::Lower => "lower",
            Plane::Upper => "upper",
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Seven shape parameters `<<L̄0, X1, L̲0; C; R̲0, Y1, R̄0>>`.
///
/// `L̄0`/`R̄0` bound the upper foot-print, `L̲0`/`R̲0` the lower foot-print and
/// `X1`/`Y1` the principle set, all sharing the core `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangularQT2 {
    pub l_bar0: f64,
    pub x1: f64,
    pub l_under0: f64,
    pub c: f64,
    pub r_under0: f64,
    pub y1: f64,
    pub r_bar0: f64,
}

impl TriangularQT2 {
    pub fn new(params: [f64; 7]) -> Result<Self> {
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidShape("non-finite shape parameter".into()));
        }
        if !params.windows(2).all(|w| w[0] <= w[1]) {
            return Err(Error::InvalidShape(format!(
                "parameters must be nondecreasing, got {params:?}"
            )));
        }
        let [l_bar0, x1, l_under0, c, r_under0, y1, r_bar0] = params;
        Ok(Self {
            l_bar0,
            x1,
            l_under0,
            c,
            r_under0,
            y1,
            r_bar0,
        })
    }

    pub fn crisp(r: f64) -> Self {
        Self::new([r; 7]).expect("constant tuple is ordered")
    }

    pub fn to_array(&self) -> [f64; 7] {
        [
            self.l_bar0,
            self.x1,
            self.l_under0,
            self.c,
            self.r_under0,
            self.y1,
            self.r_bar0,
        ]
    }

    pub fn principle(&self) -> TriangularT1 {
        TriangularT1 {
            left: self.x1,
            core: self.c,
            right: self.y1,
        }
    }

    pub fn lower_footprint(&self) -> TriangularT1 {
        TriangularT1 {
            left: self.l_under0,
            core: self.c,
            right: self.r_under0,
        }
    }

    pub fn upper_footprint(&self) -> TriangularT1 {
        TriangularT1 {
            left: self.l_bar0,
            core: self.c,
            right: self.r_bar0,
        }
    }

    /// Endpoints of the `plane` cut at `(alpha, beta)`.
    pub fn cut(&self, plane: Plane, alpha: f64, beta: f64) -> (f64, f64) {
        let c = self.c;
        let toward_core = |p: f64| c - (1.0 - alpha) * (c - p);
        let x1 = toward_core(self.x1);
        let y1 = toward_core(self.y1);
        let (l0, r0) = match plane {
            Plane::Lower => (toward_core(self.l_under0), toward_core(self.r_under0)),
            Plane::Upper => (toward_core(self.l_bar0), toward_core(self.r_bar0)),
        };
        (x1 - (1.0 - beta) * (x1 - l0), y1 - (1.0 - beta) * (y1 - r0))
    }
}

impl fmt::Display for TriangularQT2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<<{}, {}, {}; {}; {}, {}, {}>>",
            self.l_bar0, self.x1, self.l_under0, self.c, self.r_under0, self.y1, self.r_bar0
        )
    }
}

/// Triangular secondary membership at a point, living in grade space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondaryMF {
    /// Lower foot-print grade.
    pub foot_low: f64,
    /// Principle-set grade.
    pub apex: f64,
    /// Upper foot-print grade.
    pub foot_high: f64,
}

impl SecondaryMF {
    pub const ZERO: SecondaryMF = SecondaryMF {
        foot_low: 0.0,
        apex: 0.0,
        foot_high: 0.0,
    };

    pub fn as_triangular(&self) -> TriangularT1 {
        TriangularT1 {
            left: self.foot_low,
            core: self.apex,
            right: self.foot_high,
        }
    }

    /// β-cut `S(x; β)` of the secondary grade profile.
    pub fn cut(&self, beta: f64) -> Interval {
        Interval::hull(
            self.foot_low + beta * (self.apex - self.foot_low),
            self.foot_high - beta * (self.foot_high - self.apex),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum T2ValidityReason {
    /// A plane is not a type-1 fuzzy number.
    Plane(ValidityReason),
    /// The lower cut is not inside the upper cut.
    Containment,
    /// An endpoint moves away from the principle set as β grows.
    BetaMonotonicity,
    /// Lower and upper planes differ at β = 1.
    Collapse,
}

impl fmt::Display for T2ValidityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            T2ValidityReason::Plane(r) => write!(f, "{r}"),
            T2ValidityReason::Containment => f.write_str("lower cut not contained in upper cut"),
            T2ValidityReason::BetaMonotonicity => {
                f.write_str("endpoint not monotone toward the principle set in beta")
            }
            T2ValidityReason::Collapse => f.write_str("planes differ at beta = 1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct T2ValidityError {
    pub beta: f64,
    pub alpha: f64,
    pub plane: Option<Plane>,
    pub reason: T2ValidityReason,
}

impl fmt::Display for T2ValidityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at beta = {}, alpha = {}",
            self.reason, self.beta, self.alpha
        )?;
        if let Some(p) = self.plane {
            write!(f, " ({p} plane)")?;
        }
        Ok(())
    }
}

impl std::error::Error for T2ValidityError {}

/// A type-2 fuzzy number as β-indexed pairs of lower/upper type-1 numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct T2Fuzzy {
    alpha: AlphaGrid,
    beta: BetaGrid,
    lower: Vec<T1Fuzzy>,
    upper: Vec<T1Fuzzy>,
}

impl T2Fuzzy {
    pub fn from_triangular_qt2(t: &TriangularQT2, alpha: AlphaGrid, beta: BetaGrid) -> Self {
        Self::tabulate(alpha, beta, |plane, b, a| t.cut(plane, a, b))
    }

    pub fn crisp(r: f64, alpha: AlphaGrid, beta: BetaGrid) -> Self {
        let n = beta.count();
        Self {
            lower: vec![T1Fuzzy::crisp(r, alpha); n],
            upper: vec![T1Fuzzy::crisp(r, alpha); n],
            alpha,
            beta,
        }
    }

    /// Samples `f(plane, beta, alpha)` at every grid node without validation.
    pub fn tabulate(
        alpha: AlphaGrid,
        beta: BetaGrid,
        mut f: impl FnMut(Plane, f64, f64) -> (f64, f64),
    ) -> Self {
        let mut lower = Vec::with_capacity(beta.count());
        let mut upper = Vec::with_capacity(beta.count());
        for &b in beta.levels() {
            lower.push(T1Fuzzy::tabulate(alpha, |a| f(Plane::Lower, b, a)));
            upper.push(T1Fuzzy::tabulate(alpha, |a| f(Plane::Upper, b, a)));
        }
        Self {
            alpha,
            beta,
            lower,
            upper,
        }
    }

    /// Checked constructor from explicit plane families.
    pub fn from_planes(beta: BetaGrid, lower: Vec<T1Fuzzy>, upper: Vec<T1Fuzzy>) -> Result<Self> {
        let t = Self::from_planes_unchecked(beta, lower, upper)?;
        t.validate()?;
        Ok(t)
    }

    /// Checks only that the shapes line up.
    pub fn from_planes_unchecked(
        beta: BetaGrid,
        lower: Vec<T1Fuzzy>,
        upper: Vec<T1Fuzzy>,
    ) -> Result<Self> {
        if lower.len() != beta.count() || upper.len() != beta.count() || lower.is_empty() {
            return Err(Error::GridMismatch);
        }
        let alpha = lower[0].grid();
        if lower.iter().chain(&upper).any(|p| p.grid() != alpha) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            alpha,
            beta,
            lower,
            upper,
        })
    }

    pub fn alpha_grid(&self) -> AlphaGrid {
        self.alpha
    }

    pub fn beta_grid(&self) -> &BetaGrid {
        &self.beta
    }

    pub fn plane(&self, plane: Plane, j: usize) -> &T1Fuzzy {
        match plane {
            Plane::Lower => &self.lower[j],
            Plane::Upper => &self.upper[j],
        }
    }

    pub fn lower(&self, j: usize) -> &T1Fuzzy {
        &self.lower[j]
    }

    pub fn upper(&self, j: usize) -> &T1Fuzzy {
        &self.upper[j]
    }

    /// Endpoints at grid node `(j, k)` = `(beta, alpha)`.
    pub fn endpoints(&self, plane: Plane, j: usize, k: usize) -> (f64, f64) {
        self.plane(plane, j).endpoints(k)
    }

    /// Endpoints at arbitrary `(alpha, beta)`, bilinear between grid nodes.
    pub fn cut_at(&self, plane: Plane, alpha: f64, beta: f64) -> (f64, f64) {
        let (j, t) = self.beta.locate(beta);
        let (l0, r0) = self.plane(plane, j).cut_at(alpha);
        if t == 0.0 {
            return (l0, r0);
        }
        let (l1, r1) = self.plane(plane, j + 1).cut_at(alpha);
        (l0 + t * (l1 - l0), r0 + t * (r1 - r0))
    }

    /// The β=0 pair `(lower, upper)`.
    pub fn footprint(&self) -> (T1Fuzzy, T1Fuzzy) {
        (self.lower[0].clone(), self.upper[0].clone())
    }

    /// The β=1 plane; both members of the pair must agree there.
    pub fn principle_set(&self) -> Result<T1Fuzzy> {
        let last = self.beta.count() - 1;
        let gap = self.lower[last].d_hausdorff(&self.upper[last])?;
        if gap > VALIDITY_TOL {
            return Err(Error::DegenerateMismatch { gap });
        }
        Ok(self.lower[last].clone())
    }

    pub fn validate(&self) -> Result<(), T2ValidityError> {
        self.validate_with_tol(VALIDITY_TOL)
    }

    /// Checks plane validity, containment, β-monotone convergence and the
    /// β=1 collapse, in that order per β level.
    pub fn validate_with_tol(&self, tol: f64) -> Result<(), T2ValidityError> {
        let nb = self.beta.count();
        let na = self.alpha.count();
        let err = |j: usize, k: usize, plane, reason| T2ValidityError {
            beta: self.beta.level(j),
            alpha: self.alpha.level(k),
            plane,
            reason,
        };
        for j in 0..nb {
            for plane in Plane::BOTH {
                if let Err(e) = self.plane(plane, j).validate_with_tol(tol) {
                    return Err(err(
                        j,
                        e.level,
                        Some(plane),
                        T2ValidityReason::Plane(e.reason),
                    ));
                }
            }
            for k in 0..na {
                let (ll, lr) = self.lower[j].endpoints(k);
                let (ul, ur) = self.upper[j].endpoints(k);
                if ul - ll > tol || lr - ur > tol {
                    return Err(err(j, k, None, T2ValidityReason::Containment));
                }
                if j > 0 {
                    let (pll, plr) = self.lower[j - 1].endpoints(k);
                    let (pul, pur) = self.upper[j - 1].endpoints(k);
                    if ll - pll > tol || plr - lr > tol {
                        return Err(err(
                            j,
                            k,
                            Some(Plane::Lower),
                            T2ValidityReason::BetaMonotonicity,
                        ));
                    }
                    if pul - ul > tol || ur - pur > tol {
                        return Err(err(
                            j,
                            k,
                            Some(Plane::Upper),
                            T2ValidityReason::BetaMonotonicity,
                        ));
                    }
                }
                if j == nb - 1 && ((ll - ul).abs() > tol || (lr - ur).abs() > tol) {
                    return Err(err(j, k, None, T2ValidityReason::Collapse));
                }
            }
        }
        Ok(())
    }

    fn same_grids(&self, other: &T2Fuzzy) -> Result<()> {
        if self.alpha == other.alpha && self.beta == other.beta {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn planewise(
        &self,
        other: &T2Fuzzy,
        f: impl Fn(&T1Fuzzy, &T1Fuzzy) -> Result<T1Fuzzy>,
    ) -> Result<T2Fuzzy> {
        self.same_grids(other)?;
        let lower = self
            .lower
            .iter()
            .zip(&other.lower)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        let upper = self
            .upper
            .iter()
            .zip(&other.upper)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(T2Fuzzy {
            alpha: self.alpha,
            beta: self.beta.clone(),
            lower,
            upper,
        })
    }

    pub fn add(&self, other: &T2Fuzzy) -> Result<T2Fuzzy> {
        self.planewise(other, T1Fuzzy::add)
    }

    pub fn scale(&self, k: f64) -> T2Fuzzy {
        T2Fuzzy {
            alpha: self.alpha,
            beta: self.beta.clone(),
            lower: self.lower.iter().map(|p| p.scale(k)).collect(),
            upper: self.upper.iter().map(|p| p.scale(k)).collect(),
        }
    }

    /// Planewise Hukuhara difference; the result must again be a valid
    /// type-2 number.
    pub fn h_diff(&self, other: &T2Fuzzy) -> Result<T2Fuzzy> {
        let w = self.planewise(other, T1Fuzzy::h_diff)?;
        w.validate().map_err(|_| Error::NoHukuharaDifference)?;
        Ok(w)
    }

    pub fn le(&self, other: &T2Fuzzy) -> Result<bool> {
        self.same_grids(other)?;
        for (a, b) in self.lower.iter().zip(&other.lower) {
            if !a.le(b)? {
                return Ok(false);
            }
        }
        for (a, b) in self.upper.iter().zip(&other.upper) {
            if !a.le(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.lower
            .iter()
            .chain(&self.upper)
            .all(T1Fuzzy::is_nonnegative)
    }

    pub fn is_positive(&self) -> bool {
        self.lower
            .iter()
            .chain(&self.upper)
            .all(T1Fuzzy::is_positive)
    }

    pub fn is_crisp(&self, tol: f64) -> bool {
        let r = self.lower[0].left()[0];
        self.lower
            .iter()
            .chain(&self.upper)
            .all(|p| p.is_crisp(tol) && (p.left()[0] - r).abs() <= tol)
    }

    /// Largest endpoint gap over every plane, β and α.
    pub fn d_planewise(&self, other: &T2Fuzzy) -> Result<f64> {
        self.same_grids(other)?;
        let mut d: f64 = 0.0;
        for (a, b) in self.lower.iter().zip(&other.lower) {
            d = d.max(a.d_hausdorff(b)?);
        }
        for (a, b) in self.upper.iter().zip(&other.upper) {
            d = d.max(a.d_hausdorff(b)?);
        }
        Ok(d)
    }

    /// Secondary membership at `x`, assuming a triangular grade profile
    /// between the foot-print grades with its apex at the principle grade.
    /// Outside the upper foot-print support the zero secondary is returned.
    pub fn secondary_at(&self, x: f64) -> SecondaryMF {
        let last = self.beta.count() - 1;
        let high = self.upper[0].membership(x);
        if high == 0.0 && !self.upper[0].support().contains(x) {
            return SecondaryMF::ZERO;
        }
        let low = self.lower[0].membership(x);
        let apex = self.lower[last].membership(x);
        SecondaryMF {
            foot_low: low.min(apex),
            apex,
            foot_high: high.max(apex),
        }
    }
}

impl fmt::Display for T2Fuzzy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T2Fuzzy(footprint {} / {}, {} beta x {} alpha levels)",
            self.lower[0].support(),
            self.upper[0].support(),
            self.beta.count(),
            self.alpha.count()
        )
    }
}

fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// `H_f = 2 ∫ β d_H(S_A(x;β), S_B(x;β)) dβ` over the β grid.
fn secondary_distance(a: &SecondaryMF, b: &SecondaryMF, betas: &[f64]) -> f64 {
    let ys: Vec<f64> = betas
        .iter()
        .map(|&beta| 2.0 * beta * a.cut(beta).distance(&b.cut(beta)))
        .collect();
    trapezoid(betas, &ys)
}

/// Hung–Yang distance with [`DEFAULT_HY_NODES`] x nodes over the hull of both
/// upper foot-print supports.
pub fn d_hung_yang(a: &T2Fuzzy, b: &T2Fuzzy) -> Result<f64> {
    let sa = a.upper[0].support();
    let sb = b.upper[0].support();
    let domain = Interval::hull(sa.lo().min(sb.lo()), sa.hi().max(sb.hi()));
    d_hung_yang_on(a, b, domain, DEFAULT_HY_NODES)
}

/// Hung–Yang distance by composite trapezoid quadrature on `nodes` uniform
/// points of `domain` and on the β grid.
pub fn d_hung_yang_on(a: &T2Fuzzy, b: &T2Fuzzy, domain: Interval, nodes: usize) -> Result<f64> {
    a.same_grids(b)?;
    if nodes < 2 {
        return Err(Error::InvalidGrid(
            "quadrature needs at least 2 nodes".into(),
        ));
    }
    if domain.width() == 0.0 {
        return Ok(0.0);
    }
    let betas = a.beta.levels();
    let step = domain.width() / (nodes - 1) as f64;
    let xs: Vec<f64> = (0..nodes)
        .map(|i| {
            if i + 1 == nodes {
                domain.hi()
            } else {
                domain.lo() + i as f64 * step
            }
        })
        .collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| secondary_distance(&a.secondary_at(x), &b.secondary_at(x), betas))
        .collect();
    Ok(trapezoid(&xs, &ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIVE: [f64; 7] = [3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5];
    const ONE: [f64; 7] = [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5];

    fn grids() -> (AlphaGrid, BetaGrid) {
        (AlphaGrid::new(31).unwrap(), BetaGrid::uniform(21).unwrap())
    }

    fn qt2(p: [f64; 7]) -> T2Fuzzy {
        let (a, b) = grids();
        T2Fuzzy::from_triangular_qt2(&TriangularQT2::new(p).unwrap(), a, b)
    }

    fn tri1(l: f64, c: f64, r: f64) -> T1Fuzzy {
        T1Fuzzy::from_triangular(TriangularT1::new(l, c, r).unwrap(), grids().0)
    }

    #[test]
    fn shape_ordering_is_enforced() {
        assert!(TriangularQT2::new(FIVE).is_ok());
        assert!(TriangularQT2::new([3.5, 4.6, 4.5, 5.0, 5.5, 6.0, 6.5]).is_err());
        assert!(BetaGrid::new(vec![0.0, 0.5, 0.4, 1.0]).is_err());
        assert!(BetaGrid::new(vec![0.0, 0.2, 1.0]).is_ok());
    }

    #[test]
    fn five_cut_formulas() {
        let t = TriangularQT2::new(FIVE).unwrap();
        for &(a, b) in &[(0.0, 0.0), (0.3, 0.8), (1.0, 0.25), (0.6, 1.0)] {
            let (ll, lr) = t.cut(Plane::Lower, a, b);
            assert!((ll - (0.5 * a + 0.5 * a * b - 0.5 * b + 4.5)).abs() < 1e-12);
            assert!((lr - (-0.5 * a - 0.5 * a * b + 0.5 * b + 5.5)).abs() < 1e-12);
            let (ul, ur) = t.cut(Plane::Upper, a, b);
            assert!((ul - (1.5 * a - 0.5 * a * b + 0.5 * b + 3.5)).abs() < 1e-12);
            assert!((ur - (-1.5 * a + 0.5 * a * b - 0.5 * b + 6.5)).abs() < 1e-12);
        }
        let five = qt2(FIVE);
        let (l, r) = five.cut_at(Plane::Lower, 1.0 / 3.0, 0.5);
        assert!((l - 4.5).abs() < 1e-12 && (r - 5.5).abs() < 1e-12);
        let (l, r) = five.cut_at(Plane::Upper, 1.0 / 3.0, 0.5);
        assert!((l - 25.0 / 6.0).abs() < 1e-12 && (r - 35.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn one_core_is_crisp() {
        let one = qt2(ONE);
        let last = one.beta_grid().count() - 1;
        let k = one.alpha_grid().count() - 1;
        assert_eq!(one.endpoints(Plane::Lower, last, k), (1.0, 1.0));
        assert_eq!(one.endpoints(Plane::Upper, last, k), (1.0, 1.0));
    }

    #[test]
    fn triangular_values_are_valid() {
        assert!(qt2(FIVE).validate().is_ok());
        assert!(qt2(ONE).validate().is_ok());
        assert!(qt2([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).validate().is_ok());
    }

    #[test]
    fn footprint_and_principle() {
        let five = qt2(FIVE);
        let (lo, up) = five.footprint();
        assert!(lo.d_hausdorff(&tri1(4.5, 5.0, 5.5)).unwrap() < 1e-12);
        assert!(up.d_hausdorff(&tri1(3.5, 5.0, 6.5)).unwrap() < 1e-12);
        let p = five.principle_set().unwrap();
        assert!(p.d_hausdorff(&tri1(4.0, 5.0, 6.0)).unwrap() < 1e-12);
        let p = qt2(ONE).principle_set().unwrap();
        assert!(p.d_hausdorff(&tri1(0.0, 1.0, 2.0)).unwrap() < 1e-12);

        let (a, b) = grids();
        let c = T2Fuzzy::crisp(2.0, a, b.clone());
        assert!(c.footprint().0.is_crisp(0.0) && c.footprint().1.is_crisp(0.0));
        assert!(c.principle_set().unwrap().is_crisp(0.0));

        let mut lower: Vec<T1Fuzzy> = (0..b.count()).map(|j| five.lower(j).clone()).collect();
        let upper: Vec<T1Fuzzy> = (0..b.count()).map(|j| five.upper(j).clone()).collect();
        lower[b.count() - 1] = tri1(4.01, 5.0, 5.99);
        let bad = T2Fuzzy::from_planes_unchecked(b, lower, upper).unwrap();
        assert!(matches!(
            bad.principle_set(),
            Err(Error::DegenerateMismatch { .. })
        ));
        assert_eq!(
            bad.validate().unwrap_err().reason,
            T2ValidityReason::Collapse
        );
    }

    #[test]
    fn beta_one_collapse_is_exact() {
        for p in [FIVE, ONE, [-2.0, -1.0, 0.0, 0.5, 0.75, 3.0, 9.0]] {
            let t = qt2(p);
            let last = t.beta_grid().count() - 1;
            assert!(t.lower(last).d_hausdorff(t.upper(last)).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn sum_and_scale() {
        let (a, b) = grids();
        let five = qt2(FIVE);
        let one = qt2(ONE);
        assert_eq!(five.add(&T2Fuzzy::crisp(0.0, a, b)).unwrap(), five);
        let two = one.scale(2.0);
        let last = two.beta_grid().count() - 1;
        assert_eq!(two.endpoints(Plane::Upper, last, 30), (2.0, 2.0));

        let s = five.add(&one).unwrap();
        let t5 = TriangularQT2::new(FIVE).unwrap();
        let t1 = TriangularQT2::new(ONE).unwrap();
        for plane in Plane::BOTH {
            let (sl, sr) = s.cut_at(plane, 1.0 / 3.0, 0.5);
            let (al, ar) = t5.cut(plane, 1.0 / 3.0, 0.5);
            let (bl, br) = t1.cut(plane, 1.0 / 3.0, 0.5);
            assert!((sl - (al + bl)).abs() < 1e-12 && (sr - (ar + br)).abs() < 1e-12);
        }
    }

    #[test]
    fn hukuhara_difference() {
        let five = qt2(FIVE);
        let one = qt2(ONE);
        let back = five.add(&one).unwrap().h_diff(&one).unwrap();
        assert!(back.d_planewise(&five).unwrap() <= 1e-12);
        assert!(five.h_diff(&five).unwrap().is_crisp(0.0));
        assert_eq!(
            one.h_diff(&qt2([3.0, 4.0, 4.5, 5.0, 5.5, 6.0, 7.0])),
            Err(Error::NoHukuharaDifference)
        );
    }

    #[test]
    fn order_and_sign() {
        let five = qt2(FIVE);
        let one = qt2(ONE);
        assert!(one.le(&five).unwrap());
        assert!(!five.le(&one).unwrap());
        assert!(five.is_nonnegative());
        assert!(five.is_positive());
        assert!(!one.is_nonnegative());
    }

    #[test]
    fn secondary_membership() {
        let five = qt2(FIVE);
        let s = five.secondary_at(4.5);
        assert!(s.foot_low.abs() < 1e-12);
        assert!((s.apex - 0.5).abs() < 1e-12);
        assert!((s.foot_high - 2.0 / 3.0).abs() < 1e-12);
        let core = five.secondary_at(5.0);
        assert_eq!((core.foot_low, core.apex, core.foot_high), (1.0, 1.0, 1.0));
        assert_eq!(five.secondary_at(8.0), SecondaryMF::ZERO);
        let c = s.cut(0.5);
        assert!((c.lo() - 0.25).abs() < 1e-12 && (c.hi() - (2.0 / 3.0 - 1.0 / 12.0)).abs() < 1e-12);
    }

    #[test]
    fn hung_yang_identity_and_symmetry() {
        let five = qt2(FIVE);
        let one = qt2(ONE);
        assert_eq!(d_hung_yang(&five, &five).unwrap(), 0.0);
        let ab = d_hung_yang(&five, &one).unwrap();
        let ba = d_hung_yang(&one, &five).unwrap();
        assert!(ab > 0.0);
        assert_eq!(ab, ba);
    }

    #[test]
    fn hung_yang_crisp_zero_one() {
        // The integrand is nonzero only at the two endpoints, so the exact
        // integral is 0 and the trapezoid rule reports one panel's worth.
        let (a, b) = grids();
        let z = T2Fuzzy::crisp(0.0, a, b.clone());
        let o = T2Fuzzy::crisp(1.0, a, b);
        let d = d_hung_yang(&z, &o).unwrap();
        assert!((d - 1.0 / 200.0).abs() < 1e-12);
        let dense = d_hung_yang_on(&z, &o, Interval::new(0.0, 1.0).unwrap(), 2001).unwrap();
        assert!((dense - 1.0 / 2000.0).abs() < 1e-12);
    }
}
