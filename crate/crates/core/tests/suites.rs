use std::time::Instant;

use t2fde::suites::{run_suite, Suite, SuiteReport};

fn run(suite: Suite, count: usize) -> SuiteReport {
    let start = Instant::now();
    let r = run_suite(suite, 20240601, count);
    println!("{r}elapsed {:.2?}", start.elapsed());
    for p in &r.properties {
        assert!(p.instances > 0, "{p}");
    }
    assert!(r.passed(), "{r}");
    r
}

#[test]
fn t1_suite() {
    let r = run(Suite::T1, 1000);
    assert!(r.properties.iter().all(|p| p.instances == 1000));
}

#[test]
fn t2_suite() {
    let r = run(Suite::T2, 1000);
    let rt = r.property("planewise h_diff round trip").unwrap();
    assert_eq!(rt.instances, 1000);
}

#[test]
fn calculus_suite() {
    let r = run(Suite::Calculus, 100);
    for p in &r.properties {
        assert!(p.instances >= 100, "{p}");
    }
}

#[test]
fn ivp_suite() {
    run(Suite::Ivp, 40);
}
