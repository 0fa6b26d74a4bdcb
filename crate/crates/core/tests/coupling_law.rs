//! Coupling times: Monte Carlo against the exact law of the same machine, and
//! the exact law against the convolution bounds.

use redistwalk::coupling::reach::coupling_time_survival;
use redistwalk::acceptance::symmetric_laws;
use redistwalk::coupling::{Coupler, CouplingKind, DetMachine, SymMachine};
use redistwalk::montecarlo::{run_batch, BatchSpec, SurvivalCurve};
use redistwalk::oracle::exit_sum_tail;
use redistwalk::{l0_of, ChainSpec, PointMassSpec, Site};

const TRIALS: u64 = 40_000;

fn simulate(chain: &ChainSpec, kind: CouplingKind, start: (Site, Site), seed: u64) -> SurvivalCurve {
    let coupler = Coupler::new(chain, kind).unwrap();
    let spec = BatchSpec { x: start.0, y: start.1, n_trials: TRIALS, master_seed: seed, horizon: 1_000_000 };
    let batch = run_batch(&coupler, &spec).unwrap();
    assert_eq!(batch.stats.timeouts, 0);
    batch.survival(spec.horizon)
}

fn assert_within_band(empirical: &SurvivalCurve, exact: &[f64], label: &str) {
    for (t, s) in empirical.survival.iter().enumerate() {
        let e = exact.get(t).copied().unwrap_or(0.0);
        assert!((s - e).abs() <= empirical.radius, "{label}: t={t} empirical {s} exact {e}");
    }
}

#[test]
fn deterministic_coupling_time_matches_its_exact_law() {
    for (j0, jn, start) in [(5, 11, (7, 9)), (3, 13, (6, 8)), (13, 3, (4, 6))] {
        let spec = PointMassSpec::new(16, j0, jn).unwrap();
        let chain = spec.to_chain_spec().unwrap();
        let m = DetMachine::new(spec);
        let empirical = simulate(&chain, CouplingKind::Deterministic, start, 17);
        let exact = coupling_time_survival(&m, m.start(start.0, start.1).unwrap(), empirical.t_max());
        assert_within_band(&empirical, &exact, &format!("{spec} {start:?}"));
    }
}

#[test]
fn symmetric_coupling_time_matches_its_exact_law() {
    let chain = ChainSpec::from_sparse(16, &[(3, 0.25), (5, 0.25), (7, 0.5)], &[(3, 0.25), (5, 0.25), (7, 0.5)]).unwrap();
    let m = SymMachine::new(&chain).unwrap();
    for start in [(7, 9), (6, 8)] {
        let empirical = simulate(&chain, CouplingKind::Symmetric, start, 23);
        let exact = coupling_time_survival(&m, m.start(start.0, start.1).unwrap(), empirical.t_max());
        assert_within_band(&empirical, &exact, &format!("{start:?}"));
    }
}

#[test]
fn exact_laws_respect_the_convolution_bounds_from_every_start() {
    const T_MAX: usize = 1500;
    for spec in [16, 24, 32].into_iter().flat_map(PointMassSpec::all) {
        let chain = spec.to_chain_spec().unwrap();
        let m = DetMachine::new(spec);
        let copies = 6 + spec.n / (chain.rho() + 1);
        let bound = exit_sum_tail(&vec![l0_of(&spec); copies], T_MAX);
        for (x, y) in m.domain_pairs() {
            let exact = coupling_time_survival(&m, m.start(x, y).unwrap(), T_MAX);
            for (t, (s, b)) in exact.iter().zip(&bound).enumerate() {
                assert!(s <= &(b + 1e-12), "{spec} ({x},{y}) t={t}: {s} > {b}");
            }
        }
    }
    let bound = exit_sum_tail(&[8; 5], T_MAX);
    for (name, nu) in symmetric_laws() {
        let chain = ChainSpec::from_sparse(16, &nu, &nu).unwrap();
        let m = SymMachine::new(&chain).unwrap();
        for (x, y) in m.domain_pairs() {
            let exact = coupling_time_survival(&m, m.start(x, y).unwrap(), T_MAX);
            for (t, (s, b)) in exact.iter().zip(&bound).enumerate() {
                assert!(s <= &(b + 1e-12), "{name} ({x},{y}) t={t}: {s} > {b}");
            }
        }
    }
}
