//! Every state reachable from every admissible start, under every outcome of
//! the shared randomness, for all point-mass specs and a family of symmetric
//! laws at N = 16, 24, 32.

use std::collections::BTreeSet;

use redistwalk::coupling::exact::check_machine;
use redistwalk::coupling::reach::{explore, ReachReport};
use redistwalk::coupling::{is_legal_edge, DetMachine, StageLabel, SymMachine};
use redistwalk::{ChainSpec, PointMassSpec};

fn det_report(spec: PointMassSpec) -> ReachReport {
    let m = DetMachine::new(spec);
    let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).unwrap()).collect();
    explore(&m, starts, |_| {})
}

fn symmetric_laws(n: usize) -> Vec<Vec<(i64, f64)>> {
    let odd: Vec<i64> = (3..=n as i64 - 3).step_by(2).collect();
    let mut laws: Vec<Vec<(i64, f64)>> = odd.iter().map(|&s| vec![(s, 1.0)]).collect();
    for w in odd.windows(2) {
        laws.push(vec![(w[0], 0.5), (w[1], 0.5)]);
    }
    laws.push(odd.iter().map(|&s| (s, 1.0 / odd.len() as f64)).collect());
    laws.push(vec![(3, 0.25), (n as i64 - 3, 0.75)]);
    laws
}

#[test]
fn deterministic_machine_never_violates_a_stage_invariant() {
    let mut total = ReachReport::default();
    for n in [16, 24, 32] {
        for spec in PointMassSpec::all(n) {
            let r = det_report(spec);
            assert!(r.passed(), "{spec}: {:?}", r.violations);
            total.merge(r);
        }
    }
    for &(a, b) in &total.edges {
        assert!(is_legal_edge(a, b), "{a} -> {b}");
    }
    for s in StageLabel::DETERMINISTIC {
        assert!(total.stages.contains(&s), "{s} never reached");
    }
}

#[test]
fn stage_2b_overshoot_needs_a_large_gap() {
    let mut overshoots = Vec::new();
    for n in [16, 24, 32] {
        for spec in PointMassSpec::all(n) {
            if det_report(spec).edges.contains(&(StageLabel::S2b, StageLabel::S2c)) {
                overshoots.push(spec);
            }
        }
    }
    assert!(!overshoots.is_empty());
    for spec in &overshoots {
        let f = DetMachine::new(*spec).frame_spec();
        assert_eq!(spec.n, 32, "{spec}");
        assert!(2 * f.j0 > f.n + f.jn + 2, "{spec}");
    }
    assert!(overshoots.contains(&PointMassSpec::new(32, 25, 3).unwrap()));
}

#[test]
fn stage_three_entry_sites() {
    // Entries into S3 happen only at J_N (from S2c) or at J0 (from S3).
    for n in [16, 24, 32] {
        for spec in PointMassSpec::all(n) {
            let m = DetMachine::new(spec);
            let f = m.frame_spec();
            let r = det_report(spec);
            for (site, from) in &r.s3_entries {
                for stage in from {
                    match stage {
                        StageLabel::S2c => assert_eq!(*site, f.jn, "{spec}"),
                        StageLabel::S3 => assert_eq!(*site, f.j0, "{spec}"),
                        other => panic!("{spec}: S3 entered from {other}"),
                    }
                }
            }
        }
    }
}

#[test]
fn symmetric_machine_never_violates_a_stage_invariant() {
    let mut seen = BTreeSet::new();
    for n in [16, 24, 32] {
        for nu in symmetric_laws(n) {
            let c = ChainSpec::from_sparse(n, &nu, &nu).unwrap();
            let m = SymMachine::new(&c).unwrap();
            let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).unwrap()).collect();
            let r = explore(&m, starts, |_| {});
            assert!(r.passed(), "N={n} nu={nu:?}: {:?}", r.violations);
            for &(a, b) in &r.edges {
                assert!(is_legal_edge(a, b), "{a} -> {b}");
            }
            seen.extend(r.stages);
        }
    }
    for s in StageLabel::SYMMETRIC {
        assert!(seen.contains(&s), "{s} never reached");
    }
}

#[test]
fn machines_reproduce_the_kernel_exactly() {
    for n in [16, 24] {
        for spec in PointMassSpec::all(n) {
            let m = DetMachine::new(spec);
            let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).unwrap()).collect();
            let r = check_machine(&m, starts);
            assert!(r.passed(), "{spec}: {r:?}");
        }
        for nu in symmetric_laws(n) {
            let c = ChainSpec::from_sparse(n, &nu, &nu).unwrap();
            let m = SymMachine::new(&c).unwrap();
            let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).unwrap()).collect();
            let r = check_machine(&m, starts);
            assert!(r.passed(), "N={n} nu={nu:?}: {r:?}");
        }
    }
}
