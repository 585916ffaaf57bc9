//! Seeded property suites over randomly generated inputs.
//!
//! Each suite reports one line per property with the number of instances,
//! the worst discrepancy seen and the tolerance it was judged against.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{
    check_chain_rule, check_crisp_product_rule, check_hdiff_rule, check_mixed_diff_rule,
    check_sum_rule, check_t1_chain_rule, is_t2_continuous, t2_derivative, t2_second_derivative,
    CrispFunction, DerivForm, FormPair, Level, Order, RuleReport, T1Function, T2Function,
    DEFAULT_CONTINUITY_STEPS, DEFAULT_STEP, DERIV_TOL,
};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::ivp::{self, Backend, ProblemSpec, TermMode};
use crate::t1::{AlphaGrid, T1Fuzzy, TriangularT1};
use crate::t2::{d_hung_yang_on, BetaGrid, Plane, T2Fuzzy, TriangularQT2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    T1,
    T2,
    Calculus,
    Ivp,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::T1, Suite::T2, Suite::Calculus, Suite::Ivp];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::T1 => "t1",
            Suite::T2 => "t2",
            Suite::Calculus => "calculus",
            Suite::Ivp => "ivp",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidProblem(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    pub worst: f64,
    pub tol: f64,
    pub note: Option<String>,
}

impl PropertyReport {
    fn new(name: impl Into<String>, tol: f64) -> Self {
        Self {
            name: name.into(),
            instances: 0,
            failures: 0,
            worst: 0.0,
            tol,
            note: None,
        }
    }

    fn observe(&mut self, d: f64) {
        self.instances += 1;
        if d.is_nan() || d > self.worst {
            self.worst = if d.is_nan() { f64::INFINITY } else { d };
        }
        if d.is_nan() || d > self.tol {
            self.failures += 1;
        }
    }

    fn check(&mut self, ok: bool) {
        self.observe(if ok { 0.0 } else { 1.0 });
    }

    fn fail(&mut self, note: impl fmt::Display) {
        self.instances += 1;
        self.failures += 1;
        self.worst = f64::INFINITY;
        self.note.get_or_insert_with(|| note.to_string());
    }

    fn rule(&mut self, r: Result<RuleReport>) {
        match r {
            Ok(rep) => {
                self.observe(rep.max_discrepancy);
                if let Some(n) = rep.note {
                    self.note.get_or_insert(n);
                }
            }
            Err(e) => self.fail(e),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} instances, worst {:.3e} (tol {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.instances,
            self.worst,
            self.tol
        )?;
        if self.failures > 0 {
            write!(f, ", {} failures", self.failures)?;
        }
        if let Some(n) = &self.note {
            write!(f, " [{n}]")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub count: usize,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyReport::passed)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} (seed {}, count {})",
            self.suite, self.seed, self.count
        )?;
        for p in &self.properties {
            writeln!(f, "  {p}")?;
        }
        Ok(())
    }
}

/// Runs `count` random instances of every property in `suite`.
pub fn run_suite(suite: Suite, seed: u64, count: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let properties = if count == 0 {
        Vec::new()
    } else {
        match suite {
            Suite::T1 => t1_suite(&mut rng, count),
            Suite::T2 => t2_suite(&mut rng, count),
            Suite::Calculus => calculus_suite(&mut rng, count),
            Suite::Ivp => ivp_suite(&mut rng, count),
        }
    };
    SuiteReport {
        suite,
        seed,
        count,
        properties,
    }
}

/// Random inputs shared by the suites and the tests.
pub mod generators {
    use super::*;

    /// Valid type-1 number with arbitrary monotone endpoint families.
    pub fn t1<R: Rng>(rng: &mut R, grid: AlphaGrid) -> T1Fuzzy {
        let n = grid.count();
        let core = rng.random_range(-5.0..5.0);
        let width = if rng.random_bool(0.2) {
            0.0
        } else {
            rng.random_range(0.0..2.0)
        };
        let spread = rng.random_range(0.1..2.0);
        let mut left = vec![core; n];
        let mut right = vec![core + width; n];
        for k in (0..n - 1).rev() {
            left[k] = left[k + 1] - rng.random_range(0.0..spread) / n as f64;
            right[k] = right[k + 1] + rng.random_range(0.0..spread) / n as f64;
        }
        T1Fuzzy::from_endpoints(grid, left, right).expect("generated family is valid")
    }

    /// Type-1 number whose support is wider than its core.
    pub fn t1_noncrisp<R: Rng>(rng: &mut R, grid: AlphaGrid) -> T1Fuzzy {
        loop {
            let u = t1(rng, grid);
            if !u.is_crisp(1e-9) {
                return u;
            }
        }
    }

    pub fn shape<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> [f64; 7] {
        let mut p: [f64; 7] = std::array::from_fn(|_| rng.random_range(lo..hi));
        p.sort_by(|a, b| a.total_cmp(b));
        p
    }

    pub fn qt2<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> TriangularQT2 {
        TriangularQT2::new(shape(rng, lo, hi)).expect("sorted tuple")
    }

    pub fn t2<R: Rng>(rng: &mut R, alpha: AlphaGrid, beta: &BetaGrid) -> T2Fuzzy {
        T2Fuzzy::from_triangular_qt2(&qt2(rng, -5.0, 5.0), alpha, beta.clone())
    }

    /// `ψ(x) = r + p e^{q x}`, positive on `[0, 1]`.
    #[derive(Clone, Copy, Debug)]
    pub struct Profile {
        pub r: f64,
        pub p: f64,
        pub q: f64,
    }

    impl Profile {
        /// Profile whose first and second derivatives have the signs that
        /// make `A + ψ B` differentiable in `pair`.
        pub fn for_pair<R: Rng>(rng: &mut R, pair: FormPair) -> Self {
            let d1 = pair.first_form() == DerivForm::Form1;
            let d2 = !pair.is_swapped();
            // ψ' = p q e^{qx}, ψ'' = p q² e^{qx}
            let p_pos = d2;
            let q_pos = d1 == p_pos;
            Self::with_signs(rng, p_pos, q_pos)
        }

        pub fn for_form<R: Rng>(rng: &mut R, form: DerivForm) -> Self {
            let p_pos = rng.random_bool(0.5);
            let q_pos = (form == DerivForm::Form1) == p_pos;
            Self::with_signs(rng, p_pos, q_pos)
        }

        pub fn with_signs<R: Rng>(rng: &mut R, p_pos: bool, q_pos: bool) -> Self {
            let p: f64 = rng.random_range(0.5..1.5) * if p_pos { 1.0 } else { -1.0 };
            let q: f64 = rng.random_range(0.3..1.2) * if q_pos { 1.0 } else { -1.0 };
            let r = p.abs() * q.abs().exp() + rng.random_range(0.2..1.0);
            Self { r, p, q }
        }

        pub fn value(&self, x: f64) -> f64 {
            self.r + self.p * (self.q * x).exp()
        }

        pub fn d1(&self, x: f64) -> f64 {
            self.p * self.q * (self.q * x).exp()
        }

        pub fn d2(&self, x: f64) -> f64 {
            self.p * self.q * self.q * (self.q * x).exp()
        }
    }

    /// `F(x) = A + ψ(x) B` with analytic endpoint derivatives.
    pub fn t2_function(
        a: TriangularQT2,
        b: TriangularQT2,
        psi: Profile,
        domain: Interval,
        alpha: AlphaGrid,
        beta: BetaGrid,
    ) -> T2Function {
        let cut = |t: &TriangularQT2, l: Level| t.cut(l.plane, l.alpha, l.beta);
        T2Function::new(domain, alpha, beta, move |x, l| {
            let (al, ar) = cut(&a, l);
            let (bl, br) = cut(&b, l);
            let s = psi.value(x);
            (al + s * bl, ar + s * br)
        })
        .with_derivatives(
            move |x, l| {
                let (bl, br) = cut(&b, l);
                (psi.d1(x) * bl, psi.d1(x) * br)
            },
            move |x, l| {
                let (bl, br) = cut(&b, l);
                (psi.d2(x) * bl, psi.d2(x) * br)
            },
        )
    }

    /// Type-1 analogue of [`t2_function`].
    pub fn t1_function(
        a: TriangularT1,
        b: TriangularT1,
        psi: Profile,
        domain: Interval,
        grid: AlphaGrid,
    ) -> T1Function {
        let cut = |t: &TriangularT1, alpha: f64| {
            let c = t.cut(alpha);
            (c.lo(), c.hi())
        };
        T1Function::new(domain, grid, move |x, alpha| {
            let (al, ar) = cut(&a, alpha);
            let (bl, br) = cut(&b, alpha);
            let s = psi.value(x);
            (al + s * bl, ar + s * br)
        })
        .with_derivatives(
            move |x, alpha| {
                let (bl, br) = cut(&b, alpha);
                (psi.d1(x) * bl, psi.d1(x) * br)
            },
            move |x, alpha| {
                let (bl, br) = cut(&b, alpha);
                (psi.d2(x) * bl, psi.d2(x) * br)
            },
        )
    }
}

use generators as gen;

fn t1_suite(rng: &mut ChaCha8Rng, count: usize) -> Vec<PropertyReport> {
    let grid = AlphaGrid::new(21).expect("grid");
    let mut round_trip = PropertyReport::new("h_diff round trip", 1e-9);
    let mut distributive = PropertyReport::new("distributive lemma", 1e-9);
    let mut zero_minus = PropertyReport::new("0 - u rejected for non-crisp u", 0.0);
    let mut plus_negation = PropertyReport::new("u + (-1)v differs from u - v", 0.0);
    let mut metric = PropertyReport::new("d_H metric axioms", 1e-12);
    let mut closure = PropertyReport::new("sum and scalar preserve validity", 0.0);

    for _ in 0..count {
        let v = gen::t1(rng, grid);
        let w = gen::t1(rng, grid);
        let u = v.add(&w).expect("same grid");
        match u.h_diff(&v) {
            Ok(d) => round_trip.observe(
                v.add(&d)
                    .and_then(|s| s.d_hausdorff(&u))
                    .unwrap_or(f64::INFINITY),
            ),
            Err(e) => round_trip.fail(e),
        }

        let (u2, v2) = (gen::t1(rng, grid), gen::t1(rng, grid));
        let u1 = u2.add(&gen::t1(rng, grid)).expect("same grid");
        let v1 = v2.add(&gen::t1(rng, grid)).expect("same grid");
        let lhs = u1.add(&v1).and_then(|a| a.h_diff(&u2.add(&v2)?));
        let rhs = u1.h_diff(&u2).and_then(|a| a.add(&v1.h_diff(&v2)?));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => distributive.observe(l.d_hausdorff(&r).expect("same grid")),
            (Err(e), _) | (_, Err(e)) => distributive.fail(e),
        }

        let nc = gen::t1_noncrisp(rng, grid);
        zero_minus.check(matches!(
            T1Fuzzy::crisp(0.0, grid).h_diff(&nc),
            Err(Error::NoHukuharaDifference)
        ));

        let vn = gen::t1_noncrisp(rng, grid);
        let un = vn.add(&gen::t1(rng, grid)).expect("same grid");
        let plus_neg = un.add(&vn.scale(-1.0)).expect("same grid");
        let hd = un.h_diff(&vn);
        plus_negation
            .check(matches!(hd, Ok(d) if plus_neg.d_hausdorff(&d).expect("same grid") > 0.0));

        let c = gen::t1(rng, grid);
        let d = |a: &T1Fuzzy, b: &T1Fuzzy| a.d_hausdorff(b).expect("same grid");
        let identity = d(&v, &v) == 0.0;
        let symmetry = d(&v, &w) == d(&w, &v);
        let triangle = d(&v, &c) - (d(&v, &w) + d(&w, &c));
        if identity && symmetry {
            metric.observe(triangle.max(0.0));
        } else {
            metric.fail("identity or symmetry violated");
        }

        let k = rng.random_range(-3.0..3.0);
        closure.check(u.validate().is_ok() && v.scale(k).validate().is_ok());
    }
    vec![
        round_trip,
        distributive,
        zero_minus,
        plus_negation,
        metric,
        closure,
    ]
}

fn t2_suite(rng: &mut ChaCha8Rng, count: usize) -> Vec<PropertyReport> {
    let alpha = AlphaGrid::new(11).expect("grid");
    let beta = BetaGrid::uniform(6).expect("grid");
    let mut valid = PropertyReport::new("triangular values are valid", 0.0);
    let mut chain = PropertyReport::new("beta = 0 ordering chain", 0.0);
    let mut collapse = PropertyReport::new("beta = 1 collapse", 1e-12);
    let mut round_trip = PropertyReport::new("planewise h_diff round trip", 1e-9);
    let mut distributive = PropertyReport::new("planewise distributive lemma", 1e-9);
    let mut zero_minus = PropertyReport::new("0 - A rejected for non-crisp A", 0.0);
    let mut hy = PropertyReport::new("d_HY pseudometric", 1e-6);
    let hy_count = count.min(200);

    for i in 0..count {
        let ta = gen::qt2(rng, -5.0, 5.0);
        let a = T2Fuzzy::from_triangular_qt2(&ta, alpha, beta.clone());
        valid.check(a.validate().is_ok());

        let mut ok = true;
        for k in 0..alpha.count() {
            let al = alpha.level(k);
            let (ll, lr) = ta.cut(Plane::Lower, al, 0.0);
            let (ul, ur) = ta.cut(Plane::Upper, al, 0.0);
            let (x1, y1) = ta.cut(Plane::Lower, al, 1.0);
            let seq = [ul, x1, ll, ta.c, lr, y1, ur];
            ok &= seq.windows(2).all(|w| w[0] <= w[1] + 1e-12);
        }
        chain.check(ok);

        let last = beta.count() - 1;
        collapse.observe(a.lower(last).d_hausdorff(a.upper(last)).expect("same grid"));

        let b = gen::t2(rng, alpha, &beta);
        let sum = b.add(&a).expect("same grid");
        match sum.h_diff(&b) {
            Ok(d) => round_trip.observe(
                b.add(&d)
                    .and_then(|s| s.d_planewise(&sum))
                    .unwrap_or(f64::INFINITY),
            ),
            Err(e) => round_trip.fail(e),
        }

        let (a2, b2) = (gen::t2(rng, alpha, &beta), gen::t2(rng, alpha, &beta));
        let a1 = a2.add(&gen::t2(rng, alpha, &beta)).expect("same grid");
        let b1 = b2.add(&gen::t2(rng, alpha, &beta)).expect("same grid");
        let lhs = a1.add(&b1).and_then(|x| x.h_diff(&a2.add(&b2)?));
        let rhs = a1.h_diff(&a2).and_then(|x| x.add(&b1.h_diff(&b2)?));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => distributive.observe(l.d_planewise(&r).expect("same grid")),
            (Err(e), _) | (_, Err(e)) => distributive.fail(e),
        }

        if !a.is_crisp(1e-9) {
            zero_minus.check(matches!(
                T2Fuzzy::crisp(0.0, alpha, beta.clone()).h_diff(&a),
                Err(Error::NoHukuharaDifference)
            ));
        }

        if i < hy_count {
            let c = gen::t2(rng, alpha, &beta);
            let domain = Interval::new(-5.0, 5.0).expect("ordered");
            let d =
                |x: &T2Fuzzy, y: &T2Fuzzy| d_hung_yang_on(x, y, domain, 201).expect("same grid");
            let (ab, ba) = (d(&a, &b), d(&b, &a));
            if d(&a, &a) == 0.0 && ab == ba && ab >= 0.0 {
                hy.observe((d(&a, &c) - d(&a, &b) - d(&b, &c)).max(0.0));
            } else {
                hy.fail("identity or symmetry violated");
            }
        }
    }
    vec![
        valid,
        chain,
        collapse,
        round_trip,
        distributive,
        zero_minus,
        hy,
    ]
}

struct CalcContext {
    domain: Interval,
    alpha: AlphaGrid,
    beta: BetaGrid,
}

impl CalcContext {
    fn function(&self, psi: gen::Profile, rng: &mut ChaCha8Rng) -> T2Function {
        let b = gen::qt2(rng, -3.0, 3.0);
        self.function_with(rng, b, psi)
    }

    fn function_with(
        &self,
        rng: &mut ChaCha8Rng,
        b: TriangularQT2,
        psi: gen::Profile,
    ) -> T2Function {
        let a = gen::qt2(rng, -3.0, 3.0);
        gen::t2_function(a, b, psi, self.domain, self.alpha, self.beta.clone())
    }

    fn xs(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..3).map(|_| rng.random_range(0.1..0.9)).collect()
    }
}

fn random_order(rng: &mut ChaCha8Rng) -> Order {
    if rng.random_bool(1.0 / 3.0) {
        Order::First(DerivForm::ALL[rng.random_range(0..2)])
    } else {
        Order::Second(FormPair::ALL[rng.random_range(0..4)])
    }
}

fn profile_for(rng: &mut ChaCha8Rng, order: Order) -> gen::Profile {
    match order {
        Order::First(f) => gen::Profile::for_form(rng, f),
        Order::Second(p) => gen::Profile::for_pair(rng, p),
    }
}

fn calculus_suite(rng: &mut ChaCha8Rng, count: usize) -> Vec<PropertyReport> {
    let ctx = CalcContext {
        domain: Interval::new(0.0, 1.0).expect("ordered"),
        alpha: AlphaGrid::new(11).expect("grid"),
        beta: BetaGrid::uniform(6).expect("grid"),
    };
    let h = DEFAULT_STEP;
    let mut sum = PropertyReport::new("sum rule", DERIV_TOL);
    let mut hdiff = PropertyReport::new("H-difference rule", DERIV_TOL);
    let mut mixed = PropertyReport::new("mixed-form difference rule", DERIV_TOL);
    let mut product: Vec<PropertyReport> = ["(1)", "(2)", "(1,1)", "(2,2)"]
        .iter()
        .map(|c| PropertyReport::new(format!("crisp product rule {c}"), DERIV_TOL))
        .collect();
    let mut chain = PropertyReport::new("chain rule", DERIV_TOL);
    let mut chain_t1 = PropertyReport::new("type-1 chain rule", DERIV_TOL);
    let mut swap = PropertyReport::new("second-order swap law", DERIV_TOL);
    let mut parametric = PropertyReport::new("parametric form vs finite differences", DERIV_TOL);
    let mut continuity = PropertyReport::new("differentiable implies continuous", 0.0);

    for _ in 0..count {
        // Sum rule: both operands in the same form.
        let order = random_order(rng);
        let f = ctx.function(profile_for(rng, order), rng);
        let g = ctx.function(profile_for(rng, order), rng);
        let xs = ctx.xs(rng);
        sum.rule(check_sum_rule(&f, &g, order, &xs, h));

        // H-difference rule: F = G + W with W in the same form.
        let order = random_order(rng);
        let g = ctx.function(profile_for(rng, order), rng);
        let w = ctx.function(profile_for(rng, order), rng);
        hdiff.rule(check_hdiff_rule(&g.sum(&w), &g, order, &ctx.xs(rng), h));

        // Mixed forms: G in the mirrored form, W dominating it in `order`.
        let order = random_order(rng);
        let b = gen::qt2(rng, -3.0, 3.0);
        let q_pos = match order {
            Order::First(_) => rng.random_bool(0.5),
            Order::Second(p) => p.second_form() == DerivForm::Form1,
        };
        let w_first = match order {
            Order::First(f) => f,
            Order::Second(p) => p.first_form(),
        };
        let p_w_pos = (w_first == DerivForm::Form1) == q_pos;
        let pg = gen::Profile::with_signs(rng, !p_w_pos, q_pos);
        let kappa = rng.random_range(1.5..3.0);
        let pw = gen::Profile {
            r: pg.r * kappa,
            p: -pg.p * kappa,
            q: pg.q,
        };
        let g = ctx.function_with(rng, b, pg);
        let w = ctx.function_with(rng, b, pw);
        mixed.rule(check_mixed_diff_rule(
            &g.sum(&w),
            &g,
            order,
            &ctx.xs(rng),
            h,
        ));

        // Crisp factor, all four sign cases.
        for (case, rep) in product.iter_mut().enumerate() {
            let (order, rising) = match case {
                0 => (Order::First(DerivForm::Form1), true),
                1 => (Order::First(DerivForm::Form2), false),
                2 => (Order::Second(FormPair::P11), true),
                _ => (Order::Second(FormPair::P22), false),
            };
            let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let k = s * rng.random_range(0.5..1.5);
            let rho = rng.random_range(0.3..1.2) * if rising { 1.0 } else { -1.0 };
            let c = CrispFunction::new(move |x| k * (rho * x).exp()).with_derivatives(
                move |x| k * rho * (rho * x).exp(),
                move |x| k * rho * rho * (rho * x).exp(),
            );
            let g = ctx.function(profile_for(rng, order), rng);
            rep.rule(check_crisp_product_rule(&c, &g, order, &ctx.xs(rng), h));
        }

        // Chain rule with an increasing quadratic inner function.
        let form = DerivForm::ALL[rng.random_range(0..2)];
        let a1 = rng.random_range(0.5..2.0);
        let a2 = rng.random_range(-0.2 * a1..a1);
        let a0 = rng.random_range(-1.0..1.0);
        let inner = CrispFunction::new(move |x| a0 + a1 * x + a2 * x * x)
            .with_derivatives(move |x| a1 + 2.0 * a2 * x, move |_| 2.0 * a2);
        let wide = Interval::new(-10.0, 10.0).expect("ordered");
        let g = ctx
            .function(gen::Profile::for_form(rng, form), rng)
            .with_domain(wide);
        chain.rule(check_chain_rule(
            &g,
            &inner,
            ctx.domain,
            form,
            &ctx.xs(rng),
            h,
        ));

        let tri = |rng: &mut ChaCha8Rng| {
            let mut p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
            p.sort_by(|a, b| a.total_cmp(b));
            TriangularT1::new(p[0], p[1], p[2]).expect("sorted")
        };
        let g1 = gen::t1_function(
            tri(rng),
            tri(rng),
            gen::Profile::for_form(rng, form),
            wide,
            ctx.alpha,
        );
        chain_t1.rule(check_t1_chain_rule(
            &g1,
            &inner,
            ctx.domain,
            form,
            &ctx.xs(rng),
            h,
        ));

        // Swap law, parametric consistency and continuity on one generator.
        let pair = FormPair::ALL[rng.random_range(0..4)];
        let f = ctx.function(gen::Profile::for_pair(rng, pair), rng);
        let partner = match pair {
            FormPair::P11 => FormPair::P22,
            FormPair::P22 => FormPair::P11,
            FormPair::P12 => FormPair::P21,
            _ => FormPair::P12,
        };
        let x = rng.random_range(0.1..0.9);
        match (
            t2_second_derivative(&f, pair, x, h),
            t2_second_derivative(&f, partner, x, h),
        ) {
            (Ok(a), Ok(b)) => {
                let numeric = numeric_second(&f, pair, x, h);
                let d = a
                    .d_planewise(&b)
                    .expect("same grid")
                    .max(a.d_planewise(&numeric).expect("same grid"));
                swap.observe(d);
            }
            (Err(e), _) | (_, Err(e)) => swap.fail(e),
        }

        let mut worst: f64 = 0.0;
        for plane in Plane::BOTH {
            for &beta in ctx.beta.levels() {
                for alpha in ctx.alpha.levels() {
                    let l = Level { plane, beta, alpha };
                    let (a1, n1) = (
                        f.endpoint_derivative(x, l, h),
                        f.numeric_derivative(x, l, h),
                    );
                    let (a2, n2) = (
                        f.endpoint_second_derivative(x, l, h),
                        f.numeric_second_derivative(x, l, h),
                    );
                    worst = worst
                        .max((a1.0 - n1.0).abs())
                        .max((a1.1 - n1.1).abs())
                        .max((a2.0 - n2.0).abs())
                        .max((a2.1 - n2.1).abs());
                }
            }
        }
        parametric.observe(worst);

        if t2_derivative(&f, pair.first_form(), x, h).is_ok() {
            continuity.check(is_t2_continuous(&f, x, &DEFAULT_CONTINUITY_STEPS));
        } else {
            continuity.fail(format!(
                "generator not differentiable in {}",
                pair.first_form()
            ));
        }
    }

    let mut out = vec![sum, hdiff, mixed];
    out.extend(product);
    out.extend([chain, chain_t1, swap, parametric, continuity]);
    out
}

/// Second-derivative candidate built from finite differences only.
fn numeric_second(f: &T2Function, pair: FormPair, x: f64, h: f64) -> T2Fuzzy {
    T2Fuzzy::tabulate(
        f.alpha_grid(),
        f.beta_grid().clone(),
        |plane, beta, alpha| {
            let (lo, hi) = f.numeric_second_derivative(x, Level { plane, beta, alpha }, h);
            if pair.is_swapped() {
                (hi, lo)
            } else {
                (lo, hi)
            }
        },
    )
}

fn ivp_suite(rng: &mut ChaCha8Rng, count: usize) -> Vec<PropertyReport> {
    let mut symmetry = PropertyReport::new("form-pair symmetry", 1e-9);
    let mut collapse = PropertyReport::new("crisp collapse at alpha = beta = 1", 1e-8);
    let mut backends = PropertyReport::new("rk4 vs closed form", 1e-7);
    let mut initial = PropertyReport::new("initial value reproduced", 0.0);
    let mut verdicts = PropertyReport::new("admissible trajectories are valid", 0.0);

    for _ in 0..count {
        let a = TermMode::PlusScaled(rng.random_range(0.0..3.0));
        let k = rng.random_range(0.0..2.0);
        let b = match rng.random_range(0..3) {
            0 => TermMode::HukuharaMinusScaled(k),
            1 => TermMode::PlusScaled(-k),
            _ => TermMode::PlusScaled(k),
        };
        let mut spec = ProblemSpec::new(a, b, gen::qt2(rng, 2.0, 8.0), gen::qt2(rng, -2.0, 2.0));
        spec.alpha = AlphaGrid::new(5).expect("grid");
        spec.beta = BetaGrid::uniform(3).expect("grid");
        spec.output_dx = 0.1;

        let solved: Result<Vec<_>> = FormPair::ALL
            .iter()
            .map(|&p| ivp::rk4_solve(&spec, p))
            .collect();
        let all = match solved {
            Ok(t) => t,
            Err(e) => {
                symmetry.fail(&e);
                continue;
            }
        };
        let d = |i: usize, j: usize| all[i].max_distance(&all[j]).unwrap_or(f64::INFINITY);
        symmetry.observe(d(0, 3).max(d(1, 2)));

        let u = T2Fuzzy::from_triangular_qt2(&spec.u, spec.alpha, spec.beta.clone());
        initial.check(all.iter().all(|t| t.value(0) == &u));

        let (jb, ka) = (spec.beta.count() - 1, spec.alpha.count() - 1);
        let mut gap: f64 = 0.0;
        for t in &all {
            for v in t.values() {
                let (ll, lr) = v.endpoints(Plane::Lower, jb, ka);
                let (ul, ur) = v.endpoints(Plane::Upper, jb, ka);
                gap = gap
                    .max((ll - lr).abs())
                    .max((ll - ul).abs())
                    .max((ll - ur).abs());
            }
            if t.verdict.is_admissible() {
                verdicts.check(
                    t.values()
                        .iter()
                        .all(|v| v.validate_with_tol(ivp::ADMISSIBILITY_TOL).is_ok()),
                );
            }
        }
        collapse.observe(gap);

        spec.backend = Backend::ClosedForm;
        for (p, rk) in FormPair::ALL.iter().zip(&all) {
            match ivp::closed_form_solve(&spec, *p) {
                Ok(cf) => backends.observe(cf.max_distance(rk).unwrap_or(f64::INFINITY)),
                Err(Error::UnsupportedSpectrum(_)) => {}
                Err(e) => backends.fail(e),
            }
        }
    }
    if verdicts.instances == 0 {
        verdicts.note = Some("no admissible trajectory generated".into());
    }
    vec![symmetry, collapse, backends, initial, verdicts]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_run_has_no_properties() {
        let r = run_suite(Suite::Calculus, 1, 0);
        assert!(r.properties.is_empty());
        assert!(r.passed());
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run_suite(Suite::T1, 7, 20);
        let b = run_suite(Suite::T1, 7, 20);
        assert_eq!(a, b);
    }

    #[test]
    fn profiles_have_requested_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for pair in FormPair::ALL {
            let p = gen::Profile::for_pair(&mut rng, pair);
            for x in [0.0, 0.5, 1.0] {
                assert!(p.value(x) > 0.0);
                assert_eq!(p.d1(x) > 0.0, pair.first_form() == DerivForm::Form1);
                assert_eq!(p.d2(x) > 0.0, !pair.is_swapped());
            }
        }
    }

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
