//! Second-order linear type-2 fuzzy initial value problems with crisp
//! constant coefficients:
//!
//! ```text
//! D²Y(x) + a·DY(x) + b·Y(x) = 0,   Y(0) = U,   DY(0) = V
//! ```
//!
//! Each term is combined either by addition of a scaled value or by a
//! Hukuhara difference. For a chosen derivative form the problem splits into
//! independent endpoint systems, one per plane, β and α, with state
//! `(y_-, y_+, y'_-, y'_+)`. All of them share the same 4×4 matrix.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{Matrix4, Vector4};
use rayon::prelude::*;

use crate::calculus::FormPair;
use crate::error::{Error, Result};
use crate::t1::{AlphaGrid, T1Fuzzy};
use crate::t2::{BetaGrid, Plane, T2Fuzzy, TriangularQT2};

/// Ordering/monotonicity slack used when judging whether a trajectory is a
/// valid fuzzy solution.
pub const ADMISSIBILITY_TOL: f64 = 1e-7;

pub const DEFAULT_DX: f64 = 1e-3;
pub const DEFAULT_OUTPUT_DX: f64 = 1e-2;

/// Environment variable that caps solver threads.
pub const THREADS_ENV: &str = "T2FDE_THREADS";

/// How a coefficient term enters the equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TermMode {
    /// `+ k·Z`, a negative `k` swapping the endpoints of `Z`.
    PlusScaled(f64),
    /// `⊖ k·Z` with `k >= 0`, a Hukuhara difference.
    HukuharaMinusScaled(f64),
}

impl TermMode {
    pub fn hminus(k: f64) -> Result<Self> {
        if k >= 0.0 && k.is_finite() {
            Ok(TermMode::HukuharaMinusScaled(k))
        } else {
            Err(Error::InvalidProblem(format!(
                "Hukuhara-minus coefficient must be finite and nonnegative, got {k}"
            )))
        }
    }

    pub fn coefficient(&self) -> f64 {
        match *self {
            TermMode::PlusScaled(k) | TermMode::HukuharaMinusScaled(k) => k,
        }
    }

    /// Contribution to the (left, right) endpoint equations as a 2×2 map of
    /// `(z_-, z_+)`.
    fn endpoint_map(&self) -> [[f64; 2]; 2] {
        match *self {
            TermMode::PlusScaled(k) if k >= 0.0 => [[k, 0.0], [0.0, k]],
            TermMode::PlusScaled(k) => [[0.0, k], [k, 0.0]],
            TermMode::HukuharaMinusScaled(k) => [[-k, 0.0], [0.0, -k]],
        }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        match *self {
            TermMode::PlusScaled(k) if !k.is_finite() => Err(Error::InvalidProblem(format!(
                "coefficient {name} is not finite"
            ))),
            TermMode::HukuharaMinusScaled(k) => Self::hminus(k).map(|_| ()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TermMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermMode::PlusScaled(k) => write!(f, "+ {k}"),
            TermMode::HukuharaMinusScaled(k) => write!(f, "(-H) {k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormSelection {
    Auto,
    Fixed(FormPair),
}

impl FormSelection {
    pub fn pairs(&self) -> Vec<FormPair> {
        match self {
            FormSelection::Auto => FormPair::ALL.to_vec(),
            FormSelection::Fixed(p) => vec![*p],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Rk4,
    ClosedForm,
}

impl Backend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::Rk4 => "rk4",
            Backend::ClosedForm => "closed",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fully specified problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    /// Coefficient term of `DY`.
    pub a: TermMode,
    /// Coefficient term of `Y`.
    pub b: TermMode,
    /// `Y(0)`.
    pub u: TriangularQT2,
    /// `DY(0)`.
    pub v: TriangularQT2,
    pub x_end: f64,
    /// Integration step.
    pub dx: f64,
    /// Spacing of the stored samples; a multiple of `dx`.
    pub output_dx: f64,
    pub form: FormSelection,
    pub alpha: AlphaGrid,
    pub beta: BetaGrid,
    pub backend: Backend,
    /// Worker threads; `None` defers to `T2FDE_THREADS`, then to rayon.
    pub threads: Option<usize>,
}

impl ProblemSpec {
    pub fn new(a: TermMode, b: TermMode, u: TriangularQT2, v: TriangularQT2) -> Self {
        Self {
            a,
            b,
            u,
            v,
            x_end: 1.0,
            dx: DEFAULT_DX,
            output_dx: DEFAULT_OUTPUT_DX,
            form: FormSelection::Auto,
            alpha: AlphaGrid::default(),
            beta: BetaGrid::default(),
            backend: Backend::Rk4,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.a.validate("a")?;
        self.b.validate("b")?;
        for (name, v) in [
            ("x_end", self.x_end),
            ("dx", self.dx),
            ("output_dx", self.output_dx),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidProblem(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        self.steps()?;
        self.sample_stride()?;
        if self.threads == Some(0) {
            return Err(Error::InvalidProblem("threads must be at least 1".into()));
        }
        Ok(())
    }

    fn ratio(num: f64, den: f64, what: &str) -> Result<usize> {
        let r = num / den;
        let n = r.round();
        if n < 1.0 || (r - n).abs() > 1e-9 * r.max(1.0) {
            return Err(Error::InvalidProblem(format!(
                "{what} must be a positive whole multiple ({num} / {den} = {r})"
            )));
        }
        Ok(n as usize)
    }

    /// Number of integration steps to `x_end`.
    pub fn steps(&self) -> Result<usize> {
        Self::ratio(self.x_end, self.dx, "x_end / dx")
    }

    /// Integration steps between stored samples.
    pub fn sample_stride(&self) -> Result<usize> {
        let stride = Self::ratio(self.output_dx, self.dx, "output_dx / dx")?;
        if self.steps()? % stride != 0 {
            return Err(Error::InvalidProblem(
                "x_end must be a whole multiple of output_dx".into(),
            ));
        }
        Ok(stride)
    }

    /// Stored sample abscissae.
    pub fn x_samples(&self) -> Result<Vec<f64>> {
        let stride = self.sample_stride()?;
        let n = self.steps()? / stride;
        Ok((0..=n)
            .map(|i| {
                if i == n {
                    self.x_end
                } else {
                    (i * stride) as f64 * self.dx
                }
            })
            .collect())
    }
}

/// The endpoint system `u' = M u` for one form pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutSystem {
    pub form: FormPair,
    matrix: [[f64; 4]; 4],
}

impl CutSystem {
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        self.matrix
    }

    /// Whether the left and right endpoint equations are independent of each
    /// other.
    pub fn is_separable(&self) -> bool {
        let m = &self.matrix;
        m[2][1] == 0.0 && m[2][3] == 0.0 && m[3][0] == 0.0 && m[3][2] == 0.0
    }

    /// State at `x = 0` from the cuts of `Y(0)` and `DY(0)`.
    pub fn initial_state(&self, y0: (f64, f64), dy0: (f64, f64)) -> [f64; 4] {
        [y0.0, y0.1, dy0.0, dy0.1]
    }

    #[inline]
    pub fn apply(&self, u: &[f64; 4]) -> [f64; 4] {
        let m = &self.matrix;
        std::array::from_fn(|r| m[r][0] * u[0] + m[r][1] * u[1] + m[r][2] * u[2] + m[r][3] * u[3])
    }
}

impl fmt::Display for CutSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["y-", "y+", "y'-", "y'+"];
        for (row, lhs) in self.matrix.iter().zip(["y'-", "y'+", "y''-", "y''+"]) {
            write!(f, "{lhs} =")?;
            let mut any = false;
            for (c, name) in row.iter().zip(NAMES) {
                if *c != 0.0 {
                    write!(f, " {:+} {name}", c)?;
                    any = true;
                }
            }
            if !any {
                f.write_str(" 0")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Builds the endpoint system of `spec` in the form `pair`.
///
/// The `DY` term always enters with cut `(y'_-, y'_+)`; the form pair only
/// decides whether `D²Y` contributes `(y''_-, y''_+)` or, for the swapped
/// pairs, `(y''_+, y''_-)`.
pub fn build_cut_system(spec: &ProblemSpec, pair: FormPair) -> CutSystem {
    let a = spec.a.endpoint_map();
    let b = spec.b.endpoint_map();
    // left/right endpoint equations: D2_side + sum_c (a[side][c] y'_c + b[side][c] y_c) = 0
    let mut rhs = [[0.0; 4]; 2];
    for side in 0..2 {
        for c in 0..2 {
            rhs[side][c] = -b[side][c];
            rhs[side][2 + c] = -a[side][c];
        }
    }
    let (lo_row, hi_row) = if pair.is_swapped() {
        (rhs[1], rhs[0])
    } else {
        (rhs[0], rhs[1])
    };
    let matrix = [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0], lo_row, hi_row];
    CutSystem { form: pair, matrix }
}

/// Classic fourth-order Runge–Kutta with a fixed step. Returns the state
/// every `stride` steps, starting with `y0`.
pub fn rk4<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    dx: f64,
    steps: usize,
    stride: usize,
) -> Result<Vec<[f64; N]>> {
    let stride = stride.max(1);
    let mut out = Vec::with_capacity(steps / stride + 1);
    let mut y = y0;
    out.push(y);
    let axpy = |y: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] {
        std::array::from_fn(|i| y[i] + s * k[i])
    };
    for n in 0..steps {
        let x = n as f64 * dx;
        let k1 = f(x, &y);
        let k2 = f(x + 0.5 * dx, &axpy(&y, &k1, 0.5 * dx));
        let k3 = f(x + 0.5 * dx, &axpy(&y, &k2, 0.5 * dx));
        let k4 = f(x + dx, &axpy(&y, &k3, dx));
        y = std::array::from_fn(|i| y[i] + dx / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::IntegrationFailure { x: x + dx });
        }
        if (n + 1) % stride == 0 {
            out.push(y);
        }
    }
    Ok(out)
}

const MAX_EIGENVECTOR_CONDITION: f64 = 1e8;
const CLUSTER_TOL: f64 = 1e-4;

/// One diagonal block of `P⁻¹ M P`.
#[derive(Clone, Copy, Debug)]
enum Block {
    /// Eigenvalues clustered around `lambda`; `B − λI` is small or nilpotent.
    Real {
        start: usize,
        size: usize,
        lambda: f64,
    },
    /// Copies of the pair `σ ± iω` with `(B − σI)² = −ω² I`.
    Complex {
        start: usize,
        size: usize,
        sigma: f64,
        omega: f64,
    },
}

/// Exact propagator `exp(M x)` of a constant 4×4 system.
///
/// `M` is block-diagonalised over its invariant subspaces, `M = P B P⁻¹`.
/// Blocks of nearby real eigenvalues are exponentiated by a rapidly
/// converging (or terminating) series; complex pairs by the rotation
/// formula, which needs them to be non-defective.
#[derive(Clone, Debug)]
pub struct Propagator {
    p: Matrix4<f64>,
    p_inv: Matrix4<f64>,
    b: Matrix4<f64>,
    blocks: Vec<Block>,
}

/// Basis vectors for the null space of `a`: right singular vectors of its
/// `dim` smallest singular values.
fn near_null_space(a: Matrix4<f64>, dim: usize) -> Vec<Vector4<f64>> {
    let svd = a.svd(false, true);
    let sv: Vector4<f64> = svd.singular_values;
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    order[..dim]
        .iter()
        .map(|&i| v_t.row(i).transpose())
        .collect()
}

impl Propagator {
    /// Fails with `UnsupportedSpectrum` for a defective complex pair or an
    /// ill-conditioned invariant-subspace basis.
    pub fn new(m: &[[f64; 4]; 4]) -> Result<Self> {
        let m = Matrix4::from_fn(|r, c| m[r][c]);
        let scale = m.abs().max().max(1.0);
        let id = Matrix4::<f64>::identity();

        let eig = m.complex_eigenvalues();
        let mut reals: Vec<f64> = Vec::new();
        let mut pairs: Vec<(f64, f64)> = Vec::new();
        for z in eig.iter() {
            if z.im.abs() <= 1e-9 * scale {
                reals.push(z.re);
            } else if z.im > 0.0 {
                pairs.push((z.re, z.im));
            }
        }
        let mut pair_clusters: Vec<Vec<(f64, f64)>> = Vec::new();
        for z in pairs {
            let near =
                |w: &(f64, f64)| (z.0 - w.0).abs() + (z.1 - w.1).abs() <= CLUSTER_TOL * scale;
            match pair_clusters.iter_mut().find(|c| c.iter().any(near)) {
                Some(c) => c.push(z),
                None => pair_clusters.push(vec![z]),
            }
        }
        reals.sort_by(|a, b| a.total_cmp(b));
        let mut clusters: Vec<Vec<f64>> = Vec::new();
        for l in reals {
            match clusters.last_mut() {
                Some(c) if (l - c[c.len() - 1]).abs() <= CLUSTER_TOL * scale => c.push(l),
                _ => clusters.push(vec![l]),
            }
        }

        let mut columns = Vec::with_capacity(4);
        let mut blocks = Vec::new();
        for c in &clusters {
            let lambda = c.iter().sum::<f64>() / c.len() as f64;
            let shifted = m - id * lambda;
            let mut power = id;
            for _ in 0..c.len() {
                power *= shifted;
            }
            blocks.push(Block::Real {
                start: columns.len(),
                size: c.len(),
                lambda,
            });
            columns.extend(near_null_space(power, c.len()));
        }
        for c in &pair_clusters {
            let k = c.len() as f64;
            let sigma = c.iter().map(|z| z.0).sum::<f64>() / k;
            let omega = c.iter().map(|z| z.1).sum::<f64>() / k;
            let shifted = m - id * sigma;
            let q = shifted * shifted + id * (omega * omega);
            let mut power = id;
            for _ in 0..c.len() {
                power *= q;
            }
            blocks.push(Block::Complex {
                start: columns.len(),
                size: 2 * c.len(),
                sigma,
                omega,
            });
            columns.extend(near_null_space(power, 2 * c.len()));
        }

        let p = Matrix4::from_columns(&columns);
        let p_inv = p
            .try_inverse()
            .ok_or_else(|| Error::UnsupportedSpectrum("eigenvector matrix is singular".into()))?;
        // Nearly parallel basis vectors amplify round-off by the condition number.
        let cond = p.abs().max() * p_inv.abs().max() * 16.0;
        if cond > MAX_EIGENVECTOR_CONDITION {
            return Err(Error::UnsupportedSpectrum(format!(
                "eigenvector matrix is ill-conditioned (condition ~{cond:.1e})"
            )));
        }
        let b: Matrix4<f64> = p_inv * m * p;
        // Re-derive σ and ω from each block so the rotation formula matches
        // the block actually exponentiated, and reject defective pairs.
        for blk in &mut blocks {
            if let Block::Complex {
                start,
                size,
                sigma,
                omega,
            } = blk
            {
                let r = *start..*start + *size;
                let n = *size as f64;
                *sigma = r.clone().map(|i| b[(i, i)]).sum::<f64>() / n;
                let mut sq_trace = 0.0;
                for i in r.clone() {
                    for j in r.clone() {
                        let bij = b[(i, j)] - if i == j { *sigma } else { 0.0 };
                        let bji = b[(j, i)] - if i == j { *sigma } else { 0.0 };
                        sq_trace += bij * bji;
                    }
                }
                if sq_trace >= 0.0 {
                    return Err(Error::UnsupportedSpectrum(
                        "complex pair lost in block reduction".into(),
                    ));
                }
                *omega = (-sq_trace / n).sqrt();
                for i in r.clone() {
                    for j in r.clone() {
                        let sq: f64 = r
                            .clone()
                            .map(|l| {
                                (b[(i, l)] - if i == l { *sigma } else { 0.0 })
                                    * (b[(l, j)] - if l == j { *sigma } else { 0.0 })
                            })
                            .sum();
                        let want = if i == j { -*omega * *omega } else { 0.0 };
                        if (sq - want).abs() > 1e-8 * scale * scale {
                            return Err(Error::UnsupportedSpectrum(format!(
                                "defective complex eigenvalue {} + {}i",
                                sigma, omega
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self {
            p,
            p_inv,
            b,
            blocks,
        })
    }

    pub fn at(&self, x: f64) -> Matrix4<f64> {
        let mut e = Matrix4::<f64>::zeros();
        for &blk in &self.blocks {
            match blk {
                Block::Real {
                    start,
                    size,
                    lambda,
                } => {
                    let mut n = Matrix4::<f64>::zeros();
                    let mut id = Matrix4::<f64>::zeros();
                    for r in start..start + size {
                        id[(r, r)] = 1.0;
                        for c in start..start + size {
                            n[(r, c)] = self.b[(r, c)];
                        }
                        n[(r, r)] -= lambda;
                    }
                    let mut term = id;
                    let mut series = id;
                    for k in 1..64 {
                        term = term * n * (x / k as f64);
                        series += term;
                        if term.abs().max() <= f64::EPSILON * 1e-3 * series.abs().max() {
                            break;
                        }
                    }
                    e += series * (lambda * x).exp();
                }
                Block::Complex {
                    start,
                    size,
                    sigma,
                    omega,
                } => {
                    let (cos, sin) = ((omega * x).cos(), (omega * x).sin() / omega);
                    let g = (sigma * x).exp();
                    for i in start..start + size {
                        for j in start..start + size {
                            let eye = if i == j { 1.0 } else { 0.0 };
                            let shifted = self.b[(i, j)] - sigma * eye;
                            e[(i, j)] = g * (cos * eye + sin * shifted);
                        }
                    }
                }
            }
        }
        self.p * e * self.p_inv
    }
}

/// Why a trajectory is not an admissible solution.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Admissible,
    /// The form couples left and right endpoint equations.
    Coupled,
    /// First sample where the solution stops being a fuzzy number.
    Invalid {
        x: f64,
        beta: f64,
        alpha: f64,
        plane: Option<Plane>,
        reason: String,
    },
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Verdict::Admissible)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Admissible => f.write_str("admissible"),
            Verdict::Coupled => f.write_str("endpoint equations are coupled"),
            Verdict::Invalid {
                x,
                beta,
                alpha,
                plane,
                reason,
            } => {
                write!(f, "invalid at x = {x}, beta = {beta}, alpha = {alpha}")?;
                if let Some(p) = plane {
                    write!(f, " ({p} plane)")?;
                }
                write!(f, ": {reason}")
            }
        }
    }
}

/// Solution of one form pair, sampled on the output grid.
#[derive(Clone, Debug)]
pub struct FuzzyTrajectory {
    pub form: FormPair,
    pub backend: Backend,
    pub xs: Vec<f64>,
    values: Vec<T2Fuzzy>,
    derivatives: Vec<T2Fuzzy>,
    pub verdict: Verdict,
}

impl FuzzyTrajectory {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `Y(x_i)`.
    pub fn value(&self, i: usize) -> &T2Fuzzy {
        &self.values[i]
    }

    /// Endpoints `(y'_-, y'_+)` of `DY(x_i)` per level, stored in the same
    /// layout as the values.
    pub fn derivative(&self, i: usize) -> &T2Fuzzy {
        &self.derivatives[i]
    }

    pub fn values(&self) -> &[T2Fuzzy] {
        &self.values
    }

    pub fn alpha_grid(&self) -> AlphaGrid {
        self.values[0].alpha_grid()
    }

    pub fn beta_grid(&self) -> &BetaGrid {
        self.values[0].beta_grid()
    }

    /// Largest planewise gap to `other` over all samples.
    pub fn max_distance(&self, other: &FuzzyTrajectory) -> Result<f64> {
        if self.xs != other.xs {
            return Err(Error::GridMismatch);
        }
        self.values
            .iter()
            .zip(&other.values)
            .try_fold(0.0f64, |d, (a, b)| Ok(d.max(a.d_planewise(b)?)))
    }
}

fn thread_count(spec: &ProblemSpec) -> Option<usize> {
    spec.threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&n: &usize| n > 0)
    })
}

fn with_pool<T: Send>(spec: &ProblemSpec, f: impl FnOnce() -> T + Send) -> Result<T> {
    match thread_count(spec) {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidProblem(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Level `(plane, β index, α index)` in row-major order.
fn levels(spec: &ProblemSpec) -> Vec<(Plane, usize, usize)> {
    let mut out = Vec::with_capacity(2 * spec.beta.count() * spec.alpha.count());
    for j in 0..spec.beta.count() {
        for plane in Plane::BOTH {
            for k in 0..spec.alpha.count() {
                out.push((plane, j, k));
            }
        }
    }
    out
}

fn initial(spec: &ProblemSpec, sys: &CutSystem, (plane, j, k): (Plane, usize, usize)) -> [f64; 4] {
    let (b, a) = (spec.beta.level(j), spec.alpha.level(k));
    sys.initial_state(spec.u.cut(plane, a, b), spec.v.cut(plane, a, b))
}

fn assemble(
    spec: &ProblemSpec,
    sys: &CutSystem,
    backend: Backend,
    xs: Vec<f64>,
    per_level: Vec<Vec<[f64; 4]>>,
) -> Result<FuzzyTrajectory> {
    let na = spec.alpha.count();
    let nb = spec.beta.count();
    let build = |i: usize, offset: usize| -> Result<T2Fuzzy> {
        let mut lower = Vec::with_capacity(nb);
        let mut upper = Vec::with_capacity(nb);
        for j in 0..nb {
            for (p, dst) in [&mut lower, &mut upper].into_iter().enumerate() {
                let base = (j * 2 + p) * na;
                let (l, r) = (0..na)
                    .map(|k| {
                        let s = per_level[base + k][i];
                        (s[offset], s[offset + 1])
                    })
                    .unzip();
                dst.push(T1Fuzzy::raw(spec.alpha, l, r)?);
            }
        }
        T2Fuzzy::from_planes_unchecked(spec.beta.clone(), lower, upper)
    };
    let mut values = Vec::with_capacity(xs.len());
    let mut derivatives = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        values.push(build(i, 0)?);
        derivatives.push(build(i, 2)?);
    }
    let mut traj = FuzzyTrajectory {
        form: sys.form,
        backend,
        xs,
        values,
        derivatives,
        verdict: Verdict::Admissible,
    };
    traj.verdict = judge(sys, &traj);
    Ok(traj)
}

fn judge(sys: &CutSystem, traj: &FuzzyTrajectory) -> Verdict {
    if !sys.is_separable() {
        return Verdict::Coupled;
    }
    for (i, &x) in traj.xs.iter().enumerate() {
        if let Err(e) = traj.values[i].validate_with_tol(ADMISSIBILITY_TOL) {
            return Verdict::Invalid {
                x,
                beta: e.beta,
                alpha: e.alpha,
                plane: e.plane,
                reason: e.reason.to_string(),
            };
        }
        let d = &traj.derivatives[i];
        for j in 0..d.beta_grid().count() {
            for plane in Plane::BOTH {
                if let Err(e) = d.plane(plane, j).validate_with_tol(ADMISSIBILITY_TOL) {
                    return Verdict::Invalid {
                        x,
                        beta: d.beta_grid().level(j),
                        alpha: e.alpha,
                        plane: Some(plane),
                        reason: format!("first derivative: {}", e.reason),
                    };
                }
            }
        }
    }
    Verdict::Admissible
}

/// Integrates every level of `spec` in `pair` with fixed-step RK4.
pub fn rk4_solve(spec: &ProblemSpec, pair: FormPair) -> Result<FuzzyTrajectory> {
    spec.validate()?;
    let sys = build_cut_system(spec, pair);
    let (steps, stride) = (spec.steps()?, spec.sample_stride()?);
    let lv = levels(spec);
    let per_level = with_pool(spec, || {
        lv.par_iter()
            .map(|&l| {
                rk4(
                    |_, u| sys.apply(u),
                    initial(spec, &sys, l),
                    spec.dx,
                    steps,
                    stride,
                )
            })
            .collect::<Result<Vec<_>>>()
    })??;
    assemble(spec, &sys, Backend::Rk4, spec.x_samples()?, per_level)
}

/// Evaluates the exact solution through the eigen-decomposition of the
/// system matrix. Fails with `UnsupportedSpectrum` when that is unavailable.
pub fn closed_form_solve(spec: &ProblemSpec, pair: FormPair) -> Result<FuzzyTrajectory> {
    spec.validate()?;
    let sys = build_cut_system(spec, pair);
    let prop = Propagator::new(&sys.matrix())?;
    let xs = spec.x_samples()?;
    let phis: Vec<Matrix4<f64>> = xs.iter().map(|&x| prop.at(x)).collect();
    let lv = levels(spec);
    let per_level = with_pool(spec, || {
        lv.par_iter()
            .map(|&l| {
                let init = initial(spec, &sys, l);
                let y0 = Vector4::from(init);
                phis.iter()
                    .zip(&xs)
                    .map(|(phi, &x)| {
                        if x == 0.0 {
                            return Ok(init);
                        }
                        let y = phi * y0;
                        if y.iter().all(|v| v.is_finite()) {
                            Ok([y[0], y[1], y[2], y[3]])
                        } else {
                            Err(Error::IntegrationFailure { x })
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })??;
    assemble(spec, &sys, Backend::ClosedForm, xs, per_level)
}

/// Solves `pair` with the spec's backend, falling back to RK4 when the
/// closed form is unsupported. The trajectory records the backend used.
pub fn solve_form(spec: &ProblemSpec, pair: FormPair) -> Result<FuzzyTrajectory> {
    match spec.backend {
        Backend::Rk4 => rk4_solve(spec, pair),
        Backend::ClosedForm => match closed_form_solve(spec, pair) {
            Err(Error::UnsupportedSpectrum(_)) => rk4_solve(spec, pair),
            r => r,
        },
    }
}

/// Solves every form the spec selects (all four under `Auto`), each with its
/// own verdict.
pub fn solve(spec: &ProblemSpec) -> Result<Vec<FuzzyTrajectory>> {
    spec.form
        .pairs()
        .into_iter()
        .map(|p| solve_form(spec, p))
        .collect()
}

/// Form pairs whose trajectories are admissible solutions on `[0, x_end]`.
pub fn admissible_forms(spec: &ProblemSpec) -> Result<BTreeSet<FormPair>> {
    let mut out = BTreeSet::new();
    for p in FormPair::ALL {
        if solve_form(spec, p)?.verdict.is_admissible() {
            out.insert(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIVE: [f64; 7] = [3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5];
    const ONE: [f64; 7] = [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5];

    fn spec(a: TermMode, b: TermMode) -> ProblemSpec {
        let mut s = ProblemSpec::new(
            a,
            b,
            TriangularQT2::new(FIVE).unwrap(),
            TriangularQT2::new(ONE).unwrap(),
        );
        s.alpha = AlphaGrid::new(7).unwrap();
        s.beta = BetaGrid::uniform(5).unwrap();
        s.output_dx = 0.1;
        s
    }

    #[test]
    fn problem_systems() {
        let p1 = spec(TermMode::PlusScaled(3.0), TermMode::PlusScaled(0.0));
        let m = build_cut_system(&p1, FormPair::P11).matrix();
        assert_eq!(m[2], [0.0, 0.0, -3.0, 0.0]);
        assert_eq!(m[3], [0.0, 0.0, 0.0, -3.0]);

        let p2 = spec(
            TermMode::PlusScaled(0.0),
            TermMode::HukuharaMinusScaled(1.0),
        );
        let m = build_cut_system(&p2, FormPair::P11).matrix();
        assert_eq!(m[2], [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(m[3], [0.0, 1.0, 0.0, 0.0]);

        let p3 = spec(TermMode::PlusScaled(0.0), TermMode::PlusScaled(-1.0));
        let sys = build_cut_system(&p3, FormPair::P12);
        assert_eq!(sys.matrix()[2], [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(sys.matrix()[3], [0.0, 1.0, 0.0, 0.0]);
        assert!(sys.is_separable());
        assert!(!build_cut_system(&p3, FormPair::P11).is_separable());
    }

    #[test]
    fn rk4_exponential() {
        let out = rk4(|_, y: &[f64; 1]| [y[0]], [1.0], 1e-3, 1000, 1000).unwrap();
        assert!((out[1][0] - 1f64.exp()).abs() < 1e-11);
        let blow = rk4(|_, y: &[f64; 1]| [y[0] * 1e300], [1.0], 1.0, 5, 1);
        assert!(matches!(blow, Err(Error::IntegrationFailure { .. })));
    }

    #[test]
    fn propagator_matches_series() {
        let m = [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, -3.0, 0.0],
            [0.0, 0.0, 0.0, -3.0],
        ];
        let phi = Propagator::new(&m).unwrap().at(0.5);
        let e = (-1.5f64).exp();
        assert!((phi[(0, 2)] - (1.0 - e) / 3.0).abs() < 1e-12);
        assert!((phi[(2, 2)] - e).abs() < 1e-12);
        assert!((phi[(0, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn propagator_handles_nearly_equal_eigenvalues() {
        // Two eigenvalues about 4e-7 apart.
        let k = 0.0021837684570322757;
        let a = 2.809873773242983;
        let m = [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, k, 0.0, -a],
            [k, 0.0, -a, 0.0],
        ];
        let y0 = [4.0, 6.0, -0.5, 1.5];
        let f = |_: f64, y: &[f64; 4]| {
            std::array::from_fn(|r| (0..4).map(|c| m[r][c] * y[c]).sum::<f64>())
        };
        let want = rk4(f, y0, 1e-4, 10_000, 10_000).unwrap()[1];
        let phi = Propagator::new(&m).unwrap().at(1.0);
        for r in 0..4 {
            let got: f64 = (0..4).map(|c| phi[(r, c)] * y0[c]).sum();
            assert!((got - want[r]).abs() < 1e-10, "{got} vs {}", want[r]);
        }
    }

    #[test]
    fn rotations_have_exact_propagators() {
        // Two copies of y'' = -y.
        let m = [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ];
        let x = 0.7f64;
        let phi = Propagator::new(&m).unwrap().at(x);
        assert!((phi[(0, 0)] - x.cos()).abs() < 1e-12);
        assert!((phi[(0, 2)] - x.sin()).abs() < 1e-12);
        assert!((phi[(2, 0)] + x.sin()).abs() < 1e-12);
        assert!(phi[(0, 1)].abs() < 1e-12);

        // Coupled pair with eigenvalues ±1 and ±i, checked against RK4.
        let m = [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ];
        let y0 = [4.5, 5.5, 0.5, 1.5];
        let f = |_: f64, y: &[f64; 4]| {
            std::array::from_fn(|r| (0..4).map(|c| m[r][c] * y[c]).sum::<f64>())
        };
        let want = rk4(f, y0, 1e-4, 10_000, 10_000).unwrap()[1];
        let phi = Propagator::new(&m).unwrap().at(1.0);
        for r in 0..4 {
            let got: f64 = (0..4).map(|c| phi[(r, c)] * y0[c]).sum();
            assert!((got - want[r]).abs() < 1e-10);
        }
    }

    #[test]
    fn defective_complex_pair_is_unsupported() {
        // Companion matrix of (s² + 1)².
        let m = [
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [-1.0, 0.0, -2.0, 0.0],
        ];
        assert!(matches!(
            Propagator::new(&m),
            Err(Error::UnsupportedSpectrum(_))
        ));
    }

    #[test]
    fn zero_equation_is_linear_growth() {
        let mut s = spec(TermMode::PlusScaled(0.0), TermMode::PlusScaled(0.0));
        s.backend = Backend::ClosedForm;
        s.form = FormSelection::Fixed(FormPair::P11);
        let t = solve(&s).unwrap().remove(0);
        assert_eq!(t.backend, Backend::ClosedForm);
        let u = T2Fuzzy::from_triangular_qt2(&s.u, s.alpha, s.beta.clone());
        let v = T2Fuzzy::from_triangular_qt2(&s.v, s.alpha, s.beta.clone());
        for (i, &x) in t.xs.iter().enumerate() {
            let expect = u.add(&v.scale(x)).unwrap();
            assert!(t.value(i).d_planewise(&expect).unwrap() < 1e-12);
        }
    }

    #[test]
    fn bad_specs_are_rejected() {
        let mut s = spec(TermMode::PlusScaled(1.0), TermMode::PlusScaled(0.0));
        s.dx = 0.3;
        assert!(s.validate().is_err());
        let mut s = spec(
            TermMode::PlusScaled(1.0),
            TermMode::HukuharaMinusScaled(-1.0),
        );
        s.dx = 1e-3;
        assert!(s.validate().is_err());
        assert!(TermMode::hminus(-2.0).is_err());
    }
}
