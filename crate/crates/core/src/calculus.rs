//! Fuzzy-valued functions of a crisp variable and their Hukuhara derivatives.
//!
//! A function is given by its endpoint functions per level. Derivatives are
//! assembled from endpoint derivatives (analytic when supplied, otherwise
//! finite differences) in the arrangement each form prescribes, and a form is
//! accepted when the assembled candidate is a valid fuzzy number.
//!
//! The `check_*` functions evaluate both sides of the differentiation rules
//! (sum, Hukuhara difference, mixed forms, crisp factor, chain) so they can be
//! compared on concrete inputs.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::t1::{AlphaGrid, T1Fuzzy};
use crate::t2::{BetaGrid, Plane, T2Fuzzy, TriangularQT2};

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-5;

/// Tolerance used to validate derivative candidates and to compare the two
/// sides of a rule.
pub const DERIV_TOL: f64 = 1e-6;

/// Decreasing steps used by [`is_t2_continuous`] by default.
pub const DEFAULT_CONTINUITY_STEPS: [f64; 8] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DerivForm {
    /// Cuts `[F'_-, F'_+]`.
    Form1,
    /// Cuts `[F'_+, F'_-]`.
    Form2,
}

impl DerivForm {
    pub const ALL: [DerivForm; 2] = [DerivForm::Form1, DerivForm::Form2];

    pub fn index(self) -> u8 {
        match self {
            DerivForm::Form1 => 1,
            DerivForm::Form2 => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(DerivForm::Form1),
            2 => Some(DerivForm::Form2),
            _ => None,
        }
    }

    pub fn other(self) -> Self {
        match self {
            DerivForm::Form1 => DerivForm::Form2,
            DerivForm::Form2 => DerivForm::Form1,
        }
    }

    fn arrange(self, (lo, hi): (f64, f64)) -> (f64, f64) {
        match self {
            DerivForm::Form1 => (lo, hi),
            DerivForm::Form2 => (hi, lo),
        }
    }
}

impl fmt::Display for DerivForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.index())
    }
}

/// Second-order form `(i, j)`: first derivative in form `i`, its derivative
/// in form `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormPair {
    first: u8,
    second: u8,
}

impl FormPair {
    pub const P11: FormPair = FormPair {
        first: 1,
        second: 1,
    };
    pub const P12: FormPair = FormPair {
        first: 1,
        second: 2,
    };
    pub const P21: FormPair = FormPair {
        first: 2,
        second: 1,
    };
    pub const P22: FormPair = FormPair {
        first: 2,
        second: 2,
    };
    pub const ALL: [FormPair; 4] = [Self::P11, Self::P12, Self::P21, Self::P22];

    pub fn new(first: DerivForm, second: DerivForm) -> Self {
        Self {
            first: first.index(),
            second: second.index(),
        }
    }

    pub fn first_form(self) -> DerivForm {
        DerivForm::from_index(self.first).expect("form pair holds 1 or 2")
    }

    pub fn second_form(self) -> DerivForm {
        DerivForm::from_index(self.second).expect("form pair holds 1 or 2")
    }

    /// `(1,2)` and `(2,1)` swap the second-derivative endpoints.
    pub fn is_swapped(self) -> bool {
        self.first != self.second
    }

    /// Same second index, other first index.
    pub fn mirrored(self) -> Self {
        Self::new(self.first_form().other(), self.second_form())
    }

    /// Compact label such as `"12"`.
    pub fn label(self) -> String {
        format!("{}{}", self.first, self.second)
    }

    fn arrange(self, pair: (f64, f64)) -> (f64, f64) {
        if self.is_swapped() {
            (pair.1, pair.0)
        } else {
            pair
        }
    }
}

impl fmt::Display for FormPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

impl FromStr for FormPair {
    type Err = Error;

    /// Accepts `"12"`, `"1,2"` and `"(1,2)"`.
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ',' | ' '))
            .map(|c| c.to_digit(10).map(|d| d as u8).unwrap_or(0))
            .collect();
        match digits.as_slice() {
            [i @ 1..=2, j @ 1..=2] => Ok(FormPair {
                first: *i,
                second: *j,
            }),
            _ => Err(Error::InvalidProblem(format!(
                "expected a form pair such as 11 or (1,2), got {s:?}"
            ))),
        }
    }
}

/// Derivative order and form used by the rule checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    First(DerivForm),
    Second(FormPair),
}

impl Order {
    fn mirrored(self) -> Self {
        match self {
            Order::First(f) => Order::First(f.other()),
            Order::Second(p) => Order::Second(p.mirrored()),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::First(form) => write!(f, "{form}"),
            Order::Second(pair) => write!(f, "{pair}"),
        }
    }
}

/// A level of a type-2 value: plane, β and α.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub plane: Plane,
    pub beta: f64,
    pub alpha: f64,
}

pub type T1Endpoints = Arc<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>;
pub type T2Endpoints = Arc<dyn Fn(f64, Level) -> (f64, f64) + Send + Sync>;
pub type ShapeFn = Arc<dyn Fn(f64) -> [f64; 7] + Send + Sync>;
type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

fn central<T: Copy>(f: impl Fn(f64) -> T, x: f64, h: f64, combine: impl Fn(T, T) -> T) -> T {
    combine(f(x + h), f(x - h))
}

fn d1_pair(f: impl Fn(f64) -> (f64, f64), x: f64, h: f64) -> (f64, f64) {
    central(&f, x, h, |p, m| {
        ((p.0 - m.0) / (2.0 * h), (p.1 - m.1) / (2.0 * h))
    })
}

/// Five-point second difference with step `sqrt(h)`.
fn d2_scalar(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let s = h.sqrt();
    (-f(x + 2.0 * s) + 16.0 * f(x + s) - 30.0 * f(x) + 16.0 * f(x - s) - f(x - 2.0 * s))
        / (12.0 * s * s)
}

fn d2_pair(f: impl Fn(f64) -> (f64, f64), x: f64, h: f64) -> (f64, f64) {
    (d2_scalar(|t| f(t).0, x, h), d2_scalar(|t| f(t).1, x, h))
}

pub(crate) fn scale_pair(k: f64, (lo, hi): (f64, f64)) -> (f64, f64) {
    if k >= 0.0 {
        (k * lo, k * hi)
    } else {
        (k * hi, k * lo)
    }
}

fn check_interior(domain: Interval, x: f64) -> Result<()> {
    if domain.lo() < x && x < domain.hi() {
        Ok(())
    } else {
        Err(Error::OutsideDomain {
            x,
            lo: domain.lo(),
            hi: domain.hi(),
        })
    }
}

fn not_differentiable(form: impl fmt::Display, x: f64, reason: impl fmt::Display) -> Error {
    Error::NotDifferentiableInForm {
        form: form.to_string(),
        x,
        reason: reason.to_string(),
    }
}

/// Crisp real function with optional analytic derivatives.
#[derive(Clone)]
pub struct CrispFunction {
    f: RealFn,
    d1: Option<RealFn>,
    d2: Option<RealFn>,
}

impl CrispFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            d1: None,
            d2: None,
        }
    }

    pub fn with_derivatives(
        mut self,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.d1 = Some(Arc::new(d1));
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn derivative(&self, x: f64, h: f64) -> f64 {
        match &self.d1 {
            Some(d) => d(x),
            None => ((self.f)(x + h) - (self.f)(x - h)) / (2.0 * h),
        }
    }

    pub fn second_derivative(&self, x: f64, h: f64) -> f64 {
        match &self.d2 {
            Some(d) => d(x),
            None => d2_scalar(&*self.f, x, h),
        }
    }
}

/// Type-1 fuzzy-valued function `x -> [F_-(x, α), F_+(x, α)]`.
#[derive(Clone)]
pub struct T1Function {
    domain: Interval,
    grid: AlphaGrid,
    f: T1Endpoints,
    d1: Option<T1Endpoints>,
    d2: Option<T1Endpoints>,
}

impl T1Function {
    pub fn new(
        domain: Interval,
        grid: AlphaGrid,
        f: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            grid,
            f: Arc::new(f),
            d1: None,
            d2: None,
        }
    }

    /// Supplies analytic endpoint derivatives `(F'_-, F'_+)` and
    /// `(F''_-, F''_+)`.
    pub fn with_derivatives(
        mut self,
        d1: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
        d2: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        self.d1 = Some(Arc::new(d1));
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn grid(&self) -> AlphaGrid {
        self.grid
    }

    pub fn endpoints(&self, x: f64, alpha: f64) -> (f64, f64) {
        (self.f)(x, alpha)
    }

    /// Cut family at `x`, not validated.
    pub fn eval(&self, x: f64) -> T1Fuzzy {
        T1Fuzzy::tabulate(self.grid, |a| (self.f)(x, a))
    }

    pub fn endpoint_derivative(&self, x: f64, alpha: f64, h: f64) -> (f64, f64) {
        match &self.d1 {
            Some(d) => d(x, alpha),
            None => self.numeric_derivative(x, alpha, h),
        }
    }

    pub fn endpoint_second_derivative(&self, x: f64, alpha: f64, h: f64) -> (f64, f64) {
        match &self.d2 {
            Some(d) => d(x, alpha),
            None => self.numeric_second_derivative(x, alpha, h),
        }
    }

    pub fn numeric_derivative(&self, x: f64, alpha: f64, h: f64) -> (f64, f64) {
        d1_pair(|t| (self.f)(t, alpha), x, h)
    }

    pub fn numeric_second_derivative(&self, x: f64, alpha: f64, h: f64) -> (f64, f64) {
        d2_pair(|t| (self.f)(t, alpha), x, h)
    }
}

pub fn t1_derivative(f: &T1Function, form: DerivForm, x: f64, h: f64) -> Result<T1Fuzzy> {
    check_interior(f.domain, x)?;
    let cand = T1Fuzzy::tabulate(f.grid, |a| form.arrange(f.endpoint_derivative(x, a, h)));
    cand.validate_with_tol(DERIV_TOL)
        .map_err(|e| not_differentiable(form, x, e))?;
    Ok(cand)
}

pub fn t1_second_derivative(f: &T1Function, pair: FormPair, x: f64, h: f64) -> Result<T1Fuzzy> {
    check_interior(f.domain, x)?;
    let cand = T1Fuzzy::tabulate(f.grid, |a| {
        pair.arrange(f.endpoint_second_derivative(x, a, h))
    });
    cand.validate_with_tol(DERIV_TOL)
        .map_err(|e| not_differentiable(pair, x, e))?;
    Ok(cand)
}

/// Type-2 fuzzy-valued function given by its endpoint functions per level.
#[derive(Clone)]
pub struct T2Function {
    domain: Interval,
    alpha: AlphaGrid,
    beta: BetaGrid,
    f: T2Endpoints,
    d1: Option<T2Endpoints>,
    d2: Option<T2Endpoints>,
}

impl T2Function {
    pub fn new(
        domain: Interval,
        alpha: AlphaGrid,
        beta: BetaGrid,
        f: impl Fn(f64, Level) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            alpha,
            beta,
            f: Arc::new(f),
            d1: None,
            d2: None,
        }
    }

    pub fn with_derivatives(
        mut self,
        d1: impl Fn(f64, Level) -> (f64, f64) + Send + Sync + 'static,
        d2: impl Fn(f64, Level) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        self.d1 = Some(Arc::new(d1));
        self.d2 = Some(Arc::new(d2));
        self
    }

    /// Constant function.
    pub fn constant(domain: Interval, value: &T2Fuzzy) -> Self {
        let v = value.clone();
        Self::new(
            domain,
            value.alpha_grid(),
            value.beta_grid().clone(),
            move |_, l| v.cut_at(l.plane, l.alpha, l.beta),
        )
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn alpha_grid(&self) -> AlphaGrid {
        self.alpha
    }

    pub fn beta_grid(&self) -> &BetaGrid {
        &self.beta
    }

    pub fn endpoints(&self, x: f64, level: Level) -> (f64, f64) {
        (self.f)(x, level)
    }

    fn tabulate(&self, mut g: impl FnMut(Level) -> (f64, f64)) -> T2Fuzzy {
        T2Fuzzy::tabulate(self.alpha, self.beta.clone(), |plane, beta, alpha| {
            g(Level { plane, beta, alpha })
        })
    }

    /// Value at `x`, not validated.
    pub fn eval(&self, x: f64) -> T2Fuzzy {
        self.tabulate(|l| (self.f)(x, l))
    }

    pub fn endpoint_derivative(&self, x: f64, level: Level, h: f64) -> (f64, f64) {
        match &self.d1 {
            Some(d) => d(x, level),
            None => self.numeric_derivative(x, level, h),
        }
    }

    pub fn endpoint_second_derivative(&self, x: f64, level: Level, h: f64) -> (f64, f64) {
        match &self.d2 {
            Some(d) => d(x, level),
            None => self.numeric_second_derivative(x, level, h),
        }
    }

    pub fn numeric_derivative(&self, x: f64, level: Level, h: f64) -> (f64, f64) {
        d1_pair(|t| (self.f)(t, level), x, h)
    }

    pub fn numeric_second_derivative(&self, x: f64, level: Level, h: f64) -> (f64, f64) {
        d2_pair(|t| (self.f)(t, level), x, h)
    }

    /// Pointwise sum. Derivatives of the result are always numeric.
    pub fn sum(&self, other: &T2Function) -> T2Function {
        let (f, g) = (self.f.clone(), other.f.clone());
        T2Function::new(self.domain, self.alpha, self.beta.clone(), move |x, l| {
            let (a, b) = (f(x, l), g(x, l));
            (a.0 + b.0, a.1 + b.1)
        })
    }

    /// Pointwise Hukuhara difference, endpoint by endpoint. Existence is not
    /// checked here.
    pub fn h_diff(&self, other: &T2Function) -> T2Function {
        let (f, g) = (self.f.clone(), other.f.clone());
        T2Function::new(self.domain, self.alpha, self.beta.clone(), move |x, l| {
            let (a, b) = (f(x, l), g(x, l));
            (a.0 - b.0, a.1 - b.1)
        })
    }

    /// `x -> c(x) · F(x)` for a crisp factor `c`.
    pub fn crisp_product(&self, c: &CrispFunction) -> T2Function {
        let (f, c) = (self.f.clone(), c.f.clone());
        T2Function::new(self.domain, self.alpha, self.beta.clone(), move |x, l| {
            scale_pair(c(x), f(x, l))
        })
    }

    /// `x -> F(inner(x))` on `domain`.
    pub fn compose(&self, inner: &CrispFunction, domain: Interval) -> T2Function {
        let (f, g) = (self.f.clone(), inner.f.clone());
        T2Function::new(domain, self.alpha, self.beta.clone(), move |x, l| {
            f(g(x), l)
        })
    }
}

fn t2_candidate(
    f: &T2Function,
    x: f64,
    form: impl fmt::Display,
    mut g: impl FnMut(Level) -> (f64, f64),
) -> Result<T2Fuzzy> {
    check_interior(f.domain, x)?;
    let cand = f.tabulate(&mut g);
    cand.validate_with_tol(DERIV_TOL)
        .map_err(|e| not_differentiable(form, x, e))?;
    Ok(cand)
}

/// First derivative in `form`, applying the type-1 rule planewise.
pub fn t2_derivative(f: &T2Function, form: DerivForm, x: f64, h: f64) -> Result<T2Fuzzy> {
    t2_candidate(f, x, form, |l| form.arrange(f.endpoint_derivative(x, l, h)))
}

/// Second derivative in `pair`. Only the assembled second-order candidate is
/// validated; combine with [`t2_derivative`] to also require the first form.
pub fn t2_second_derivative(f: &T2Function, pair: FormPair, x: f64, h: f64) -> Result<T2Fuzzy> {
    t2_candidate(f, x, pair, |l| {
        pair.arrange(f.endpoint_second_derivative(x, l, h))
    })
}

fn t2_order_derivative(f: &T2Function, order: Order, x: f64, h: f64) -> Result<T2Fuzzy> {
    match order {
        Order::First(form) => t2_derivative(f, form, x, h),
        Order::Second(pair) => {
            t2_derivative(f, pair.first_form(), x, h)?;
            t2_second_derivative(f, pair, x, h)
        }
    }
}

/// Triangular type-2 valued function given by its seven shape functions.
#[derive(Clone)]
pub struct TriangularT2Function {
    domain: Interval,
    shape: ShapeFn,
    d1: Option<ShapeFn>,
    d2: Option<ShapeFn>,
}

impl TriangularT2Function {
    pub fn new(domain: Interval, shape: impl Fn(f64) -> [f64; 7] + Send + Sync + 'static) -> Self {
        Self {
            domain,
            shape: Arc::new(shape),
            d1: None,
            d2: None,
        }
    }

    pub fn with_derivatives(
        mut self,
        d1: impl Fn(f64) -> [f64; 7] + Send + Sync + 'static,
        d2: impl Fn(f64) -> [f64; 7] + Send + Sync + 'static,
    ) -> Self {
        self.d1 = Some(Arc::new(d1));
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn shape(&self, x: f64) -> Result<TriangularQT2> {
        TriangularQT2::new((self.shape)(x))
    }

    fn shape_derivative(&self, x: f64, h: f64) -> [f64; 7] {
        match &self.d1 {
            Some(d) => d(x),
            None => {
                let (p, m) = ((self.shape)(x + h), (self.shape)(x - h));
                std::array::from_fn(|i| (p[i] - m[i]) / (2.0 * h))
            }
        }
    }

    fn shape_second_derivative(&self, x: f64, h: f64) -> [f64; 7] {
        match &self.d2 {
            Some(d) => d(x),
            None => std::array::from_fn(|i| d2_scalar(|t| (self.shape)(t)[i], x, h)),
        }
    }

    /// The same function in endpoint form, with shape derivatives carried
    /// over to the endpoints.
    pub fn to_function(&self, alpha: AlphaGrid, beta: BetaGrid) -> T2Function {
        let shape = self.shape.clone();
        let cut = |p: [f64; 7], l: Level| {
            let t = TriangularQT2 {
                l_bar0: p[0],
                x1: p[1],
                l_under0: p[2],
                c: p[3],
                r_under0: p[4],
                y1: p[5],
                r_bar0: p[6],
            };
            t.cut(l.plane, l.alpha, l.beta)
        };
        let f = T2Function::new(self.domain, alpha, beta, move |x, l| cut(shape(x), l));
        match (&self.d1, &self.d2) {
            (Some(d1), Some(d2)) => {
                let (d1, d2) = (d1.clone(), d2.clone());
                f.with_derivatives(move |x, l| cut(d1(x), l), move |x, l| cut(d2(x), l))
            }
            _ => f,
        }
    }
}

fn ordered_tuple(
    d: [f64; 7],
    reverse: bool,
    form: impl fmt::Display,
    x: f64,
) -> Result<TriangularQT2> {
    let mut d = d;
    if reverse {
        d.reverse();
    }
    let ordered = d.windows(2).all(|w| w[0] <= w[1] + DERIV_TOL);
    if !ordered {
        return Err(not_differentiable(
            form,
            x,
            format!("derivative tuple {d:?} is not ordered"),
        ));
    }
    let mut fixed = d;
    for i in 1..7 {
        fixed[i] = fixed[i].max(fixed[i - 1]);
    }
    TriangularQT2::new(fixed)
}

/// Derivative of a triangular function as a 7-tuple: `Form1` keeps the shape
/// order, `Form2` reverses it.
pub fn triangular_t2_derivative(
    f: &TriangularT2Function,
    form: DerivForm,
    x: f64,
    h: f64,
) -> Result<TriangularQT2> {
    check_interior(f.domain, x)?;
    ordered_tuple(f.shape_derivative(x, h), form == DerivForm::Form2, form, x)
}

/// Second derivative tuple; swapped pairs reverse the order.
pub fn triangular_t2_second_derivative(
    f: &TriangularT2Function,
    pair: FormPair,
    x: f64,
    h: f64,
) -> Result<TriangularQT2> {
    check_interior(f.domain, x)?;
    ordered_tuple(f.shape_second_derivative(x, h), pair.is_swapped(), pair, x)
}

/// Numerical continuity verdict at `x`: the planewise distance from `F(x)` to
/// `F(x ± h)` must not grow along `steps` and must end below `1e-6`.
pub fn is_t2_continuous(f: &T2Function, x: f64, steps: &[f64]) -> bool {
    let center = f.eval(x);
    let mut prev = f64::INFINITY;
    let mut last = f64::INFINITY;
    for &h in steps {
        let d = [x - h, x + h]
            .iter()
            .map(|&t| center.d_planewise(&f.eval(t)).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        if d > prev + 1e-12 {
            return false;
        }
        prev = d;
        last = d;
    }
    last < DERIV_TOL
}

/// Outcome of comparing the two sides of a differentiation rule.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleReport {
    pub rule: String,
    pub samples: usize,
    pub max_discrepancy: f64,
    pub passed: bool,
    /// Set when the left-hand side could not be formed in the predicted form.
    pub note: Option<String>,
}

impl RuleReport {
    fn new(rule: String) -> Self {
        Self {
            rule,
            samples: 0,
            max_discrepancy: 0.0,
            passed: true,
            note: None,
        }
    }

    fn record(&mut self, lhs: Result<T2Fuzzy>, rhs: &T2Fuzzy) -> Result<()> {
        self.samples += 1;
        match lhs {
            Ok(lhs) => {
                let d = lhs.d_planewise(rhs)?;
                self.max_discrepancy = self.max_discrepancy.max(d);
            }
            Err(e) => {
                self.max_discrepancy = f64::INFINITY;
                self.note.get_or_insert_with(|| e.to_string());
            }
        }
        self.passed = self.max_discrepancy <= DERIV_TOL;
        Ok(())
    }
}

impl fmt::Display for RuleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} over {} samples, max discrepancy {:.3e}",
            self.rule,
            if self.passed { "pass" } else { "FAIL" },
            self.samples,
            self.max_discrepancy
        )?;
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

fn hypothesis<T>(what: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::HypothesisViolated(format!("{what}: {e}")))
}

/// `(F + G)^(o) = F^(o) + G^(o)` with both operands differentiable in `o`.
pub fn check_sum_rule(
    f: &T2Function,
    g: &T2Function,
    order: Order,
    xs: &[f64],
    h: f64,
) -> Result<RuleReport> {
    let sum = f.sum(g);
    let mut report = RuleReport::new(format!("sum rule {order}"));
    for &x in xs {
        let df = hypothesis("F", t2_order_derivative(f, order, x, h))?;
        let dg = hypothesis("G", t2_order_derivative(g, order, x, h))?;
        report.record(t2_order_derivative(&sum, order, x, h), &df.add(&dg)?)?;
    }
    Ok(report)
}

/// `(F ⊖ G)^(o) = F^(o) ⊖ G^(o)` when the pointwise and derivative
/// differences exist and both operands are differentiable in `o`.
pub fn check_hdiff_rule(
    f: &T2Function,
    g: &T2Function,
    order: Order,
    xs: &[f64],
    h: f64,
) -> Result<RuleReport> {
    let diff = f.h_diff(g);
    let mut report = RuleReport::new(format!("H-difference rule {order}"));
    for &x in xs {
        hypothesis("F(x) - G(x)", f.eval(x).h_diff(&g.eval(x)))?;
        let df = hypothesis("F", t2_order_derivative(f, order, x, h))?;
        let dg = hypothesis("G", t2_order_derivative(g, order, x, h))?;
        let rhs = hypothesis("F' - G'", df.h_diff(&dg))?;
        report.record(t2_order_derivative(&diff, order, x, h), &rhs)?;
    }
    Ok(report)
}

/// Mixed forms: with `F` differentiable in `order` and `G` in the order with
/// the first index flipped, `(F ⊖ G)^(order) = F^(order) + (-1) G^(mirror)`.
pub fn check_mixed_diff_rule(
    f: &T2Function,
    g: &T2Function,
    order: Order,
    xs: &[f64],
    h: f64,
) -> Result<RuleReport> {
    let mirror = order.mirrored();
    let diff = f.h_diff(g);
    let mut report = RuleReport::new(format!("mixed difference rule F{order} G{mirror}"));
    for &x in xs {
        hypothesis("F(x) - G(x)", f.eval(x).h_diff(&g.eval(x)))?;
        let df = hypothesis("F", t2_order_derivative(f, order, x, h))?;
        let dg = hypothesis("G", t2_order_derivative(g, mirror, x, h))?;
        let rhs = df.add(&dg.scale(-1.0))?;
        report.record(t2_order_derivative(&diff, order, x, h), &rhs)?;
    }
    Ok(report)
}

/// Crisp factor rule in its four sign cases:
/// `First(Form1)` needs `cc' > 0`, `First(Form2)` needs `cc' < 0`,
/// `Second((1,1))` needs `cc' > 0` and `c'c'' > 0`, `Second((2,2))` needs
/// `cc' < 0` and `c'c'' < 0`.
pub fn check_crisp_product_rule(
    c: &CrispFunction,
    g: &T2Function,
    order: Order,
    xs: &[f64],
    h: f64,
) -> Result<RuleReport> {
    let prod = g.crisp_product(c);
    let mut report = RuleReport::new(format!("crisp product rule {order}"));
    for &x in xs {
        let (v, d1, d2) = (c.eval(x), c.derivative(x, h), c.second_derivative(x, h));
        let sign_ok = match order {
            Order::First(DerivForm::Form1) => v * d1 > 0.0,
            Order::First(DerivForm::Form2) => v * d1 < 0.0,
            Order::Second(FormPair::P11) => v * d1 > 0.0 && d1 * d2 > 0.0,
            Order::Second(FormPair::P22) => v * d1 < 0.0 && d1 * d2 < 0.0,
            Order::Second(p) => {
                return Err(Error::HypothesisViolated(format!(
                    "no crisp product rule for the {p} form"
                )))
            }
        };
        if !sign_ok {
            return Err(Error::HypothesisViolated(format!(
                "sign condition for {order} fails at x = {x}"
            )));
        }
        let gx = g.eval(x);
        let rhs = match order {
            Order::First(form) => {
                let dg = hypothesis("G", t2_derivative(g, form, x, h))?;
                gx.scale(d1).add(&dg.scale(v))?
            }
            Order::Second(pair) => {
                let dg = hypothesis("G", t2_derivative(g, pair.first_form(), x, h))?;
                let ddg = hypothesis("G", t2_second_derivative(g, pair, x, h))?;
                gx.scale(d2).add(&dg.scale(2.0 * d1))?.add(&ddg.scale(v))?
            }
        };
        report.record(t2_order_derivative(&prod, order, x, h), &rhs)?;
    }
    Ok(report)
}

/// `(G ∘ c)^(form)(x) = c'(x) · G^(form)(c(x))` for an increasing inner
/// function `c`. `domain` is where `x` ranges.
pub fn check_chain_rule(
    g: &T2Function,
    c: &CrispFunction,
    domain: Interval,
    form: DerivForm,
    xs: &[f64],
    h: f64,
) -> Result<RuleReport> {
    let comp = g.compose(c, domain);
    let mut report = RuleReport::new(format!("chain rule {form}"));
    for &x in xs {
        let d1 = c.derivative(x, h);
        if d1 <= 0.0 {
            return Err(Error::HypothesisViolated(format!(
                "inner function not increasing at x = {x}"
            )));
        }
        let dg = hypothesis("G", t2_derivative(g, form, c.eval(x), h))?;
        report.record(t2_derivative(&comp, form, x, h), &dg.scale(d1))?;
    }
    Ok(report)
}

/// Type-1 version of [`check_chain_rule`].
pub fn check_t1_chain_rule(
    g: &T1Function,
    c: &CrispFunction,
    domain: Interval,
    form: DerivForm,
    xs: &[f64],
    h: f64,
) -> Result<RuleReport> {
    let inner = c.f.clone();
    let outer = g.f.clone();
    let comp = T1Function::new(domain, g.grid, move |x, a| outer(inner(x), a));
    let mut report = RuleReport::new(format!("type-1 chain rule {form}"));
    for &x in xs {
        let d1 = c.derivative(x, h);
        if d1 <= 0.0 {
            return Err(Error::HypothesisViolated(format!(
                "inner function not increasing at x = {x}"
            )));
        }
        let rhs = hypothesis("G", t1_derivative(g, form, c.eval(x), h))?.scale(d1);
        report.samples += 1;
        match t1_derivative(&comp, form, x, h) {
            Ok(lhs) => {
                report.max_discrepancy = report.max_discrepancy.max(lhs.d_hausdorff(&rhs)?);
            }
            Err(e) => {
                report.max_discrepancy = f64::INFINITY;
                report.note.get_or_insert_with(|| e.to_string());
            }
        }
        report.passed = report.max_discrepancy <= DERIV_TOL;
    }
    Ok(report)
}
