use std::collections::BTreeSet;

use t2fde::calculus::{
    t2_derivative, t2_second_derivative, DerivForm, FormPair, Level, T2Function,
};
use t2fde::ivp::{
    admissible_forms, build_cut_system, closed_form_solve, rk4_solve, solve, Backend,
    FormSelection, ProblemSpec, TermMode, Verdict,
};
use t2fde::{AlphaGrid, BetaGrid, Interval, Plane, T2Fuzzy, TriangularQT2};

const FIVE: [f64; 7] = [3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5];
const ONE: [f64; 7] = [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5];

fn problem(a: TermMode, b: TermMode) -> ProblemSpec {
    let mut s = ProblemSpec::new(
        a,
        b,
        TriangularQT2::new(FIVE).unwrap(),
        TriangularQT2::new(ONE).unwrap(),
    );
    s.alpha = AlphaGrid::new(31).unwrap();
    s.beta = BetaGrid::uniform(21).unwrap();
    s.output_dx = 0.05;
    s
}

fn p1() -> ProblemSpec {
    problem(TermMode::PlusScaled(3.0), TermMode::PlusScaled(0.0))
}

fn p2() -> ProblemSpec {
    problem(
        TermMode::PlusScaled(0.0),
        TermMode::HukuharaMinusScaled(1.0),
    )
}

fn p3() -> ProblemSpec {
    problem(TermMode::PlusScaled(0.0), TermMode::PlusScaled(-1.0))
}

/// Independent oracle for the first problem: each endpoint solves
/// `y'' + 3y' = 0`, so `y = u + v (1 - e^{-3x}) / 3`.
fn p1_cut(plane: Plane, a: f64, b: f64, x: f64) -> (f64, f64) {
    let e = (-3.0 * x).exp();
    let u = TriangularQT2::new(FIVE).unwrap().cut(plane, a, b);
    let v = TriangularQT2::new(ONE).unwrap().cut(plane, a, b);
    (u.0 + v.0 * (1.0 - e) / 3.0, u.1 + v.1 * (1.0 - e) / 3.0)
}

#[test]
fn problem1_general_cut_matches_printed_coefficients() {
    for &(a, b) in &[(0.0, 0.0), (1.0 / 3.0, 0.5), (0.7, 0.2), (1.0, 1.0)] {
        for &x in &[0.0f64, 0.4, 1.0] {
            let e = (-3.0 * x).exp();
            let printed = (-a / 6.0 - a * b / 6.0 + b / 6.0 - 1.0 / 6.0) * e
                + (2.0 * a / 3.0 + 2.0 * a * b / 3.0 - 2.0 * b / 3.0 + 14.0 / 3.0);
            assert!((p1_cut(Plane::Lower, a, b, x).0 - printed).abs() < 1e-12);
        }
    }
}

#[test]
fn problem1_and_2_closed_forms() {
    let t = closed_form_solve(&p1(), FormPair::P11).unwrap();
    let (na, nb) = (31, 21);
    for (i, &x) in t.xs.iter().enumerate() {
        for j in 0..nb {
            for k in 0..na {
                let (a, b) = (k as f64 / 30.0, j as f64 / 20.0);
                for plane in Plane::BOTH {
                    let got = t.value(i).endpoints(plane, j, k);
                    let want = p1_cut(plane, a, b, x);
                    assert!((got.0 - want.0).abs() < 1e-10 && (got.1 - want.1).abs() < 1e-10);
                }
            }
        }
    }

    let t = closed_form_solve(&p2(), FormPair::P11).unwrap();
    let i = t.xs.iter().position(|&x| (x - 0.5).abs() < 1e-12).unwrap();
    let x: f64 = 0.5;
    let lower = t.value(i).endpoints(Plane::Lower, 10, 10);
    let e = x.exp();
    let f = 2.0 * (-x).exp();
    let (a, b) = (1.0 / 3.0, 0.5);
    assert!((lower.0 - (f + 0.5 * (a + a * b - b + 5.0) * e)).abs() < 1e-10);
    assert!((lower.1 - (f + 0.5 * (-a - a * b + b + 7.0) * e)).abs() < 1e-10);
}

#[test]
fn admissible_form_sets() {
    let expect = |v: &[FormPair]| v.iter().copied().collect::<BTreeSet<_>>();
    assert_eq!(
        admissible_forms(&p1()).unwrap(),
        expect(&[FormPair::P11, FormPair::P22])
    );
    assert_eq!(
        admissible_forms(&p2()).unwrap(),
        expect(&[FormPair::P11, FormPair::P22])
    );
    assert_eq!(
        admissible_forms(&p3()).unwrap(),
        expect(&[FormPair::P12, FormPair::P21])
    );
}

#[test]
fn auto_mode_reports_every_form() {
    let all = solve(&p3()).unwrap();
    assert_eq!(all.len(), 4);
    for t in &all {
        match t.form {
            FormPair::P12 | FormPair::P21 => assert_eq!(t.verdict, Verdict::Admissible),
            _ => assert_eq!(t.verdict, Verdict::Coupled),
        }
    }
}

#[test]
fn mixed_signs_admit_no_form() {
    let s = problem(TermMode::PlusScaled(-1.0), TermMode::PlusScaled(2.0));
    assert!(admissible_forms(&s).unwrap().is_empty());
}

#[test]
fn form_pair_symmetry() {
    for spec in [p1(), p2(), p3()] {
        let t11 = rk4_solve(&spec, FormPair::P11).unwrap();
        let t22 = rk4_solve(&spec, FormPair::P22).unwrap();
        assert!(t11.max_distance(&t22).unwrap() <= 1e-9);
        let t12 = rk4_solve(&spec, FormPair::P12).unwrap();
        let t21 = rk4_solve(&spec, FormPair::P21).unwrap();
        assert!(t12.max_distance(&t21).unwrap() <= 1e-9);
    }
}

#[test]
fn crisp_collapse_and_residual() {
    for (spec, pair) in [
        (p1(), FormPair::P11),
        (p2(), FormPair::P11),
        (p3(), FormPair::P12),
    ] {
        let mut spec = spec;
        spec.output_dx = spec.dx;
        spec.alpha = AlphaGrid::new(3).unwrap();
        spec.beta = BetaGrid::uniform(3).unwrap();
        let t = rk4_solve(&spec, pair).unwrap();
        let (j, k) = (2, 2);
        let y: Vec<f64> = (0..t.len())
            .map(|i| {
                let v = t.value(i);
                let (ll, lr) = v.endpoints(Plane::Lower, j, k);
                let (ul, ur) = v.endpoints(Plane::Upper, j, k);
                for w in [lr, ul, ur] {
                    assert!((w - ll).abs() <= 1e-8);
                }
                ll
            })
            .collect();
        let (a, b) = match (spec.a, spec.b) {
            (TermMode::PlusScaled(a), TermMode::PlusScaled(b)) => (a, b),
            (TermMode::PlusScaled(a), TermMode::HukuharaMinusScaled(b)) => (a, -b),
            _ => unreachable!(),
        };
        let h = spec.dx;
        // Five-point stencils keep the truncation error far below 1e-6.
        for i in 2..y.len() - 2 {
            let d1 = (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h);
            let d2 = (-y[i + 2] + 16.0 * y[i + 1] - 30.0 * y[i] + 16.0 * y[i - 1] - y[i - 2])
                / (12.0 * h * h);
            assert!((d2 + a * d1 + b * y[i]).abs() <= 1e-6, "residual at {i}");
        }
    }
}

#[test]
fn initial_values_reproduced() {
    let mut spec = p2();
    spec.alpha = AlphaGrid::new(5).unwrap();
    spec.beta = BetaGrid::uniform(5).unwrap();
    spec.output_dx = spec.dx;
    for backend in [Backend::Rk4, Backend::ClosedForm] {
        spec.backend = backend;
        spec.form = FormSelection::Fixed(FormPair::P11);
        let t = solve(&spec).unwrap().remove(0);
        let u = T2Fuzzy::from_triangular_qt2(&spec.u, spec.alpha, spec.beta.clone());
        assert_eq!(t.value(0), &u);
        let h = spec.dx;
        for j in 0..5 {
            for k in 0..5 {
                for plane in Plane::BOTH {
                    let e = |i: usize| t.value(i).endpoints(plane, j, k);
                    let fd = |s: fn((f64, f64)) -> f64| {
                        (-3.0 * s(e(0)) + 4.0 * s(e(1)) - s(e(2))) / (2.0 * h)
                    };
                    let v = spec.v.cut(plane, k as f64 / 4.0, j as f64 / 4.0);
                    assert!((fd(|p| p.0) - v.0).abs() < 1e-4);
                    assert!((fd(|p| p.1) - v.1).abs() < 1e-4);
                }
            }
        }
    }
}

#[test]
fn problem1_second_derivative_is_minus_three_first() {
    // Endpoint solution of the first problem as a function of x.
    let f = T2Function::new(
        Interval::new(0.0, 1.0).unwrap(),
        AlphaGrid::new(11).unwrap(),
        BetaGrid::uniform(6).unwrap(),
        |x, l: Level| p1_cut(l.plane, l.alpha, l.beta, x),
    );
    for x in [0.2, 0.5, 0.8] {
        let d1 = t2_derivative(&f, DerivForm::Form1, x, 1e-5).unwrap();
        let d2 = t2_second_derivative(&f, FormPair::P12, x, 1e-5).unwrap();
        // The swapped arrangement of -3 y' is what the second-order candidate
        // must match; the unswapped (1,1) candidate is an inverted interval.
        assert!(d2.d_planewise(&d1.scale(-3.0)).unwrap() < 1e-6);
        assert!(t2_second_derivative(&f, FormPair::P11, x, 1e-5).is_err());
        for j in 0..6 {
            for k in 0..11 {
                for plane in Plane::BOTH {
                    let e1 = f.numeric_derivative(x, lvl(plane, j, k), 1e-5);
                    let e2 = f.numeric_second_derivative(x, lvl(plane, j, k), 1e-5);
                    assert!((e2.0 + 3.0 * e1.0).abs() < 1e-6);
                    assert!((e2.1 + 3.0 * e1.1).abs() < 1e-6);
                }
            }
        }
    }
}

fn lvl(plane: Plane, j: usize, k: usize) -> Level {
    Level {
        plane,
        beta: j as f64 / 5.0,
        alpha: k as f64 / 10.0,
    }
}

#[test]
fn cut_system_display() {
    let s = build_cut_system(&p1(), FormPair::P11).to_string();
    assert!(s.contains("y''- = -3 y'-"), "{s}");
}
