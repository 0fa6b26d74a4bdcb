//! The acceptance suite. Each criterion is a list of [`Verdict`]s and passes
//! when all of them do.

use std::fmt::Write as _;

use astro_float::BigFloat;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{ChainSpec, PointMassSpec, Site};
use crate::coupling::exact::{check_machine, check_regimes};
use crate::coupling::reach::{explore, ReachReport};
use crate::coupling::{Coupler, CouplingKind, DetMachine, Machine, StageLabel, SymMachine};
use crate::montecarlo::{
    dominance_audit, exit_pair_audit, fit_rate, marginal_audit, run_batch, run_batch_on, trial_seed, BatchSpec,
    Pooling, Verdict,
};
use crate::oracle::{self, precise};
use crate::report;
use crate::spectral::{self, l0_of};

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "lambda closed form vs killed-walk spectrum"),
    (2, "exit-tail expansion remainder"),
    (3, "exit-time dominance by the center start"),
    (4, "pairwise-to-uniform distance inequality"),
    (5, "lower bound on d_t and its eigenvalue"),
    (6, "rate of d_t and of the coupling time"),
    (7, "deterministic coupling time vs convolution bound"),
    (8, "symmetric coupling time, lower bound and rate"),
    (9, "marginals of every coupling"),
    (10, "stage invariants"),
    (11, "determinism across thread counts"),
];

/// Deliberate faults for checking that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Adds a constant to every closed-form `λ(L)` the suite uses.
    LambdaOffset(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct Config {
    pub seed: u64,
    pub trials: u64,
    pub marginal_steps: u64,
    pub horizon: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub mutation: Option<Mutation>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 20_160_429,
            trials: 100_000,
            marginal_steps: 1_000_000,
            horizon: 10_000,
            threads: None,
            mutation: None,
        }
    }
}

impl Config {
    fn lambda(&self, l: usize) -> f64 {
        let base = spectral::lambda_of(l);
        match self.mutation {
            Some(Mutation::LambdaOffset(d)) => base + d,
            None => base,
        }
    }

    fn seed_for(&self, criterion: u8, index: u64) -> u64 {
        trial_seed(self.seed, criterion as u64 * 1_000 + index)
    }

    fn exact(&self, check: impl Into<String>, pass: bool, margin: f64) -> Verdict {
        Verdict { check: check.into(), pass, margin, n_trials: 0, seed: self.seed }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub checks: Vec<Verdict>,
}

impl Criterion {
    fn new(id: u8, checks: Vec<Verdict>, detail: String) -> Self {
        let name = CRITERIA[id as usize - 1].1.to_string();
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        Criterion { id, name, pass, detail, checks }
    }

    /// One line: `criterion N: PASS|FAIL name (detail)`.
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2}: {} {} ({})",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub pass: bool,
    pub criteria: Vec<Criterion>,
}

/// Runs the listed criteria (all of them when `ids` is empty).
pub fn run(config: &Config, ids: &[u8]) -> Report {
    let go = || {
        let criteria: Vec<Criterion> = CRITERIA
            .iter()
            .filter(|(id, _)| ids.is_empty() || ids.contains(id))
            .map(|&(id, _)| run_criterion(config, id))
            .collect();
        Report { seed: config.seed, pass: criteria.iter().all(|c| c.pass), criteria }
    };
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(go),
        None => go(),
    }
}

pub fn run_criterion(config: &Config, id: u8) -> Criterion {
    match id {
        1 => lambda_closed_form(config),
        2 => exit_tail_remainder(config),
        3 => exit_dominance(config),
        4 => pair_inequality(config),
        5 => lower_bound(config),
        6 => rates(config),
        7 => deterministic_domination(config),
        8 => symmetric_domination(config),
        9 => marginals(config),
        10 => stage_invariants(config),
        11 => determinism(config),
        _ => panic!("no criterion {id}"),
    }
}

fn pm(n: usize, j0: usize, jn: usize) -> PointMassSpec {
    PointMassSpec::new(n, j0, jn).expect("valid point-mass spec")
}

fn chain(pm: &PointMassSpec) -> ChainSpec {
    pm.to_chain_spec().expect("valid point-mass spec")
}

fn sparse(n: usize, nu0: &[(i64, f64)], nun: &[(i64, f64)]) -> ChainSpec {
    ChainSpec::from_sparse(n, nu0, nun).expect("valid spec")
}

/// The point-mass specs the rate and domination checks use.
pub fn rate_specs() -> [PointMassSpec; 3] {
    [pm(16, 3, 13), pm(16, 5, 11), pm(16, 13, 3)]
}

/// The equal laws the symmetric checks use.
pub fn symmetric_laws() -> Vec<(&'static str, Vec<(i64, f64)>)> {
    vec![
        ("delta5", vec![(5, 1.0)]),
        ("uniform{5,7}", vec![(5, 0.5), (7, 0.5)]),
        ("uniform{3,5,7}", vec![(3, 1.0 / 3.0), (5, 1.0 / 3.0), (7, 1.0 / 3.0)]),
    ]
}

fn lambda_closed_form(config: &Config) -> Criterion {
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    for l in 1..=64 {
        let s = oracle::killed_spectrum(l);
        let err = (config.lambda(l) - s.top()).abs();
        worst = worst.max(err);
        checks.push(config.exact(format!("lambda L={l}"), err <= 1e-10, 1e-10 - err));
        let m = l as f64 + 1.0;
        let sines: Vec<f64> = (1..=l).map(|z| (std::f64::consts::PI * z as f64 / m).sin()).collect();
        let norm = sines.iter().map(|v| v * v).sum::<f64>().sqrt();
        let vec_err = sines
            .iter()
            .zip(&s.top_vector)
            .map(|(a, b)| (a / norm - b).abs())
            .fold(0.0, f64::max);
        let positive = s.top_vector.iter().all(|&v| v > 0.0);
        checks.push(config.exact(format!("sine eigenvector L={l}"), positive && vec_err <= 1e-8, 1e-8 - vec_err));
    }
    Criterion::new(1, checks, format!("L=1..64, max |error| {worst:.2e}"))
}

fn exit_tail_remainder(config: &Config) -> Criterion {
    let prec = precise::DEFAULT_PRECISION;
    let rm = astro_float::RoundingMode::ToEven;
    let mut checks = Vec::new();
    let mut detail = String::new();
    for l in [2usize, 4, 8, 16] {
        let t_max = 8 * l * l;
        let exact = precise::exit_tails(l, t_max, prec);
        let formula = spectral::exit_tail_formula_precise(l, t_max, prec);
        let lambda2 = oracle::killed_spectrum(l).second_modulus();
        let base = BigFloat::from_f64(lambda2, prec);
        let mut power = BigFloat::from_u8(1, prec);
        let mut worst = 0.0f64;
        for t in 0..=t_max {
            for z in 0..l {
                let diff = exact[t][z].sub(&formula[t][z], prec, rm).abs();
                let ratio = precise::to_f64(&diff.div(&power, prec, rm));
                worst = worst.max(ratio);
            }
            power = power.mul(&base, prec, rm);
        }
        checks.push(config.exact(format!("remainder constant L={l}"), worst <= 100.0, 100.0 - worst));
        let _ = write!(detail, "C({l})={worst:.3} ");
    }
    Criterion::new(2, checks, format!("{}at 640 bits, t<=8L^2", detail))
}

fn exit_dominance(config: &Config) -> Criterion {
    let mut checks = Vec::new();
    let mut worst = f64::INFINITY;
    for l in 1..=32 {
        let curves = oracle::exit_tail_curves(l, 8 * l * l);
        let c = &curves[oracle::center(l) - 1];
        let mut margin = f64::INFINITY;
        for curve in &curves {
            for (q, qc) in curve.iter().zip(c) {
                if *qc > 0.0 {
                    margin = margin.min((qc - q) / qc);
                }
            }
        }
        worst = worst.min(margin);
        checks.push(config.exact(format!("exact tails L={l}"), margin >= -1e-12, margin));
    }
    let mut sampled = 0;
    for (i, (l, z)) in [(7usize, 1usize), (7, 7), (8, 1), (8, 8), (16, 1), (16, 11)].into_iter().enumerate() {
        let seed = config.seed_for(3, i as u64);
        let a = exit_pair_audit(l, z, config.trials, seed);
        sampled += a.n_samples;
        checks.push(Verdict {
            check: format!("coupled exit times L={l} z={z}: {} disordered", a.disordered),
            pass: a.passed(),
            margin: a.radius - a.center_sup_error,
            n_trials: a.n_samples,
            seed,
        });
    }
    Criterion::new(
        3,
        checks,
        format!("L<=32 worst relative margin {worst:.1e}; {sampled} coupled pairs"),
    )
}

fn pair_inequality(config: &Config) -> Criterion {
    let specs = [
        ("N=16 delta5/delta11", sparse(16, &[(5, 1.0)], &[(11, 1.0)])),
        ("N=16 uniform{5,7}/uniform{9,11}", sparse(16, &[(5, 0.5), (7, 0.5)], &[(9, 0.5), (11, 0.5)])),
        ("N=24 delta7/delta17", sparse(24, &[(7, 1.0)], &[(17, 1.0)])),
        ("N=24 uniform{3,5}/delta21", sparse(24, &[(3, 0.5), (5, 0.5)], &[(21, 1.0)])),
    ];
    let mut checks = Vec::new();
    let mut worst = f64::INFINITY;
    for (name, spec) in specs {
        let (sup, tilde) = oracle::sup_curves(&spec, 400);
        let a = oracle::triangle_audit(spec.n(), spec.rho(), &sup, &tilde);
        worst = worst.min(a.worst_margin);
        checks.push(config.exact(format!("{name} factor {}", a.factor), a.pass, a.worst_margin));
    }
    Criterion::new(4, checks, format!("t=1..400, worst margin {worst:.3e}"))
}

fn lower_bound(config: &Config) -> Criterion {
    let mut checks = Vec::new();
    let mut detail = String::new();
    for spec in rate_specs() {
        let c = chain(&spec);
        let lam = config.lambda(l0_of(&spec));
        let factor = 0.5 * (1.0 - 2.0 * std::f64::consts::PI / spec.n as f64);
        let (sup, _) = oracle::sup_curves(&c, 400);
        let margin = sup
            .values
            .iter()
            .enumerate()
            .map(|(t, d)| (d - factor * lam.powi(t as i32)) / d)
            .fold(f64::INFINITY, f64::min);
        checks.push(config.exact(format!("{spec} d_t >= bound, t<=400"), margin >= 0.0, margin));
        let dist = oracle::distance_to_spectrum(&oracle::full_spectrum(&c), lam);
        checks.push(config.exact(format!("{spec} lambda(L0) in spectrum"), dist <= 1e-8, 1e-8 - dist));
        let _ = write!(detail, "{}/{}: gap {dist:.1e} ", spec.j0, spec.jn);
    }
    Criterion::new(5, checks, format!("N=16 {}", detail.trim_end()))
}

/// Start pair for the rate fit: the two sites next to the middle.
fn middle_pair(n: usize) -> (Site, Site) {
    (n / 2 - 1, n / 2 + 1)
}

fn rates(config: &Config) -> Criterion {
    let mut checks = Vec::new();
    let mut detail = String::new();
    for (i, spec) in rate_specs().into_iter().enumerate() {
        let c = chain(&spec);
        let target = config.lambda(l0_of(&spec)).ln();
        let (sup, _) = oracle::sup_curves(&c, 400);
        match fit_rate(&sup.values, (300, 400), 0) {
            Ok(f) => {
                let rel = (f.slope / target - 1.0).abs();
                checks.push(config.exact(format!("{spec} exact d_t slope"), rel <= 0.02, 0.02 - rel));
                let _ = write!(detail, "{}/{} d_t {:+.4}", spec.j0, spec.jn, f.slope / target - 1.0);
            }
            Err(e) => checks.push(config.exact(format!("{spec} exact d_t slope: {e}"), false, f64::NAN)),
        }
        let (x, y) = middle_pair(spec.n);
        let seed = config.seed_for(6, i as u64);
        let coupler = Coupler::new(&c, CouplingKind::Deterministic).expect("point-mass spec");
        let batch = BatchSpec { x, y, n_trials: config.trials, master_seed: seed, horizon: config.horizon };
        let verdict = match run_batch(&coupler, &batch) {
            Ok(b) => match b.survival(config.horizon).tail_rate(0) {
                Ok(f) => {
                    let rel = (f.slope / target - 1.0).abs();
                    let _ = write!(detail, " tau {:+.4}; ", f.slope / target - 1.0);
                    Verdict {
                        check: format!("{spec} coupling-time slope from ({x},{y}) over {:?}", f.window),
                        pass: rel <= 0.05,
                        margin: 0.05 - rel,
                        n_trials: config.trials,
                        seed,
                    }
                }
                Err(e) => failed_mc(format!("{spec} coupling-time slope: {e}"), config.trials, seed),
            },
            Err(e) => failed_mc(format!("{spec} coupling-time slope: {e}"), config.trials, seed),
        };
        checks.push(verdict);
    }
    Criterion::new(6, checks, format!("relative slope errors: {}", detail.trim_end_matches("; ")))
}

fn failed_mc(check: String, n_trials: u64, seed: u64) -> Verdict {
    Verdict { check, pass: false, margin: f64::NAN, n_trials, seed }
}

/// Runs a batch and audits it against the survival of a sum of
/// center-started exit times.
fn domination_check(
    config: &Config,
    coupler: &Coupler,
    start: (Site, Site),
    lengths: &[usize],
    seed: u64,
    label: String,
) -> Verdict {
    let batch = BatchSpec { x: start.0, y: start.1, n_trials: config.trials, master_seed: seed, horizon: config.horizon };
    match run_batch(coupler, &batch) {
        Ok(b) => {
            let s = b.survival(config.horizon);
            let bound = oracle::exit_sum_tail(lengths, s.t_max());
            match dominance_audit(&s, &bound) {
                Ok(d) => Verdict {
                    check: format!("{label}: {} timeouts, worst at t={}", b.stats.timeouts, d.worst_t),
                    pass: d.pass,
                    margin: d.margin,
                    n_trials: config.trials,
                    seed,
                },
                Err(e) => failed_mc(format!("{label}: {e}"), config.trials, seed),
            }
        }
        Err(e) => failed_mc(format!("{label}: {e}"), config.trials, seed),
    }
}

fn deterministic_domination(config: &Config) -> Criterion {
    let mut checks = Vec::new();
    let mut missing = Vec::new();
    let mut index = 0;
    for spec in rate_specs() {
        let c = chain(&spec);
        let m = DetMachine::new(spec);
        let coupler = Coupler::new(&c, CouplingKind::Deterministic).expect("point-mass spec");
        let copies = 6 + spec.n / (c.rho() + 1);
        let lengths = vec![l0_of(&spec); copies];
        for stage in [StageLabel::S1, StageLabel::S2a, StageLabel::S2b, StageLabel::S2c] {
            let start = m
                .domain_pairs()
                .into_iter()
                .find(|&(x, y)| m.start(x, y).map(|s| m.stage(&s)) == Ok(stage));
            let Some(start) = start else {
                missing.push(format!("{}/{} {stage}", spec.j0, spec.jn));
                continue;
            };
            let seed = config.seed_for(7, index);
            index += 1;
            let label = format!("{spec} {stage} start {start:?} vs {copies} x T({})", l0_of(&spec));
            checks.push(domination_check(config, &coupler, start, &lengths, seed, label));
        }
    }
    let worst = checks.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
    let mut detail = format!("{} batches, worst margin {worst:.4}", checks.len());
    if !missing.is_empty() {
        let _ = write!(detail, "; no start with gap <= rho for {}", missing.join(", "));
    }
    Criterion::new(7, checks, detail)
}

fn symmetric_domination(config: &Config) -> Criterion {
    let n = 16;
    let half = n / 2;
    let target = config.lambda(half).ln();
    let mut checks = Vec::new();
    let mut detail = String::new();
    let exit_tail = oracle::center_tail(half, 400);
    for (i, (name, nu)) in symmetric_laws().into_iter().enumerate() {
        let c = sparse(n, &nu, &nu);
        let coupler = Coupler::new(&c, CouplingKind::Symmetric).expect("equal laws");
        for (j, start) in [(half - 2, half), (half - 1, half + 1)].into_iter().enumerate() {
            let seed = config.seed_for(8, (2 * i + j) as u64);
            let label = format!("N=16 {name} start {start:?} vs 5 x T({half})");
            checks.push(domination_check(config, &coupler, start, &[half; 5], seed, label));
        }
        let (sup, _) = oracle::sup_curves(&c, 400);
        let margin = sup.values.iter().zip(&exit_tail).map(|(d, q)| d - q).fold(f64::INFINITY, f64::min);
        checks.push(config.exact(format!("N=16 {name} d_t >= P(T({half}) > t), t<=400"), margin >= 0.0, margin));
        match fit_rate(&sup.values, (300, 400), 0) {
            Ok(f) => {
                let rel = (f.slope / target - 1.0).abs();
                checks.push(config.exact(format!("N=16 {name} d_t slope"), rel <= 0.02, 0.02 - rel));
                let _ = write!(detail, "{name} {:+.4} ", f.slope / target - 1.0);
            }
            Err(e) => checks.push(config.exact(format!("N=16 {name} d_t slope: {e}"), false, f64::NAN)),
        }
    }
    Criterion::new(8, checks, format!("d_t slope errors: {}", detail.trim_end()))
}

/// Every ordered start the coupler accepts, odd gaps included.
fn admissible_starts(coupler: &Coupler) -> Vec<(Site, Site)> {
    let n = coupler.chain().n();
    let mut out = Vec::new();
    for x in 0..=n {
        for y in x + 1..=n {
            if coupler.check_start(x, y).is_ok() {
                out.push((x, y));
            }
        }
    }
    out
}

fn marginals(config: &Config) -> Criterion {
    let mut checks = Vec::new();
    let mut regime_cases = 0;
    let mut machine_cases = 0;
    let mut chains: Vec<(String, ChainSpec)> = rate_specs().iter().map(|s| (s.to_string(), chain(s))).collect();
    for (name, nu) in symmetric_laws() {
        chains.push((format!("N=16 {name}"), sparse(16, &nu, &nu)));
    }
    chains.push((
        "N=16 thirds/quarters".into(),
        sparse(16, &[(3, 1.0 / 3.0), (5, 1.0 / 3.0), (7, 1.0 / 3.0)], &[(9, 0.25), (11, 0.75)]),
    ));
    for (name, c) in &chains {
        let r = check_regimes(c);
        regime_cases += r.cases;
        checks.push(config.exact(format!("{name} regimes and parity fix, exact"), r.passed(), -(r.mismatches as f64)));
    }
    let mut det_mismatches = 0;
    for spec in PointMassSpec::all(16) {
        let m = DetMachine::new(spec);
        let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).expect("domain pair")).collect();
        let r = check_machine(&m, starts);
        machine_cases += r.cases;
        det_mismatches += r.mismatches + usize::from(r.cases == 0);
    }
    checks.push(config.exact(
        "every N=16 deterministic machine, exact",
        det_mismatches == 0,
        -(det_mismatches as f64),
    ));
    let mut memory = 0;
    for (name, nu) in symmetric_laws() {
        let c = sparse(16, &nu, &nu);
        let m = SymMachine::new(&c).expect("equal laws");
        let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).expect("domain pair")).collect();
        let r = check_machine(&m, starts);
        machine_cases += r.cases;
        memory += r.memory_states;
        checks.push(config.exact(format!("N=16 {name} symmetric machine, exact"), r.passed(), -(r.mismatches as f64)));
    }
    let mut mc = Vec::new();
    let runs: Vec<(String, ChainSpec, CouplingKind, Pooling)> = vec![
        ("N=16 J0=5 JN=11".into(), chain(&pm(16, 5, 11)), CouplingKind::Deterministic, Pooling::ByStage),
        ("N=16 J0=13 JN=3".into(), chain(&pm(16, 13, 3)), CouplingKind::Deterministic, Pooling::ByStage),
        ("N=16 uniform{5,7}".into(), sparse(16, &[(5, 0.5), (7, 0.5)], &[(5, 0.5), (7, 0.5)]), CouplingKind::Symmetric, Pooling::ByPosition),
        ("N=16 delta5".into(), sparse(16, &[(5, 1.0)], &[(5, 1.0)]), CouplingKind::Symmetric, Pooling::ByPosition),
    ];
    for (i, (name, c, kind, pooling)) in runs.into_iter().enumerate() {
        let coupler = Coupler::new(&c, kind).expect("coupling exists");
        let seed = config.seed_for(9, i as u64);
        let starts = admissible_starts(&coupler);
        match marginal_audit(&coupler, &starts, config.marginal_steps, seed, config.horizon, pooling, 4.0) {
            Ok(a) => {
                mc.push(format!("{kind} {name} max|z|={:.2}", a.worst_z));
                checks.push(Verdict {
                    check: format!(
                        "{kind} {name} one-step laws {pooling:?}: {} groups, {} steps",
                        a.groups, a.steps
                    ),
                    pass: a.passed(),
                    margin: 4.0 - a.worst_z,
                    n_trials: a.steps,
                    seed,
                });
            }
            Err(e) => checks.push(failed_mc(format!("{kind} {name}: {e}"), 0, seed)),
        }
    }
    Criterion::new(
        9,
        checks,
        format!(
            "{regime_cases} regime cases, {machine_cases} machine states exact ({memory} use memory); {}",
            mc.join(", ")
        ),
    )
}

#[derive(Default)]
struct TrialTally {
    trials: u64,
    violations: u64,
    illegal: u64,
    timeouts: u64,
    first: Option<String>,
}

fn tally_trials(config: &Config, jobs: &[(Coupler, Vec<(Site, Site)>)], seed: u64) -> TrialTally {
    let plan: Vec<(usize, Site, Site)> = jobs
        .iter()
        .enumerate()
        .flat_map(|(k, (_, starts))| starts.iter().map(move |&(x, y)| (k, x, y)))
        .collect();
    let outcomes: Vec<Result<(bool, bool), String>> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let (k, x, y) = plan[(i % plan.len() as u64) as usize];
            match jobs[k].0.run(x, y, trial_seed(seed, i), config.horizon) {
                Ok(r) => Ok((r.path_is_legal(), r.timed_out)),
                Err(e) => Err(format!("{} ({x},{y}): {e}", jobs[k].0.chain().n())),
            }
        })
        .collect();
    let mut t = TrialTally::default();
    for o in outcomes {
        t.trials += 1;
        match o {
            Ok((legal, timed_out)) => {
                t.illegal += u64::from(!legal);
                t.timeouts += u64::from(timed_out);
            }
            Err(e) => {
                t.violations += 1;
                t.first.get_or_insert(e);
            }
        }
    }
    t
}

fn stage_invariants(config: &Config) -> Criterion {
    let mut checks = Vec::new();
    let det_jobs: Vec<(Coupler, Vec<(Site, Site)>)> = PointMassSpec::all(16)
        .into_iter()
        .map(|s| {
            let c = Coupler::new(&chain(&s), CouplingKind::Deterministic).expect("point-mass spec");
            let starts = admissible_starts(&c);
            (c, starts)
        })
        .collect();
    let sym_jobs: Vec<(Coupler, Vec<(Site, Site)>)> = symmetric_laws()
        .into_iter()
        .map(|(_, nu)| {
            let c = Coupler::new(&sparse(16, &nu, &nu), CouplingKind::Symmetric).expect("equal laws");
            let starts = admissible_starts(&c);
            (c, starts)
        })
        .collect();
    let mut detail = String::new();
    for (i, (name, jobs)) in [("deterministic", det_jobs), ("symmetric", sym_jobs)].into_iter().enumerate() {
        let seed = config.seed_for(10, i as u64);
        let t = tally_trials(config, &jobs, seed);
        let bad = t.violations + t.illegal;
        checks.push(Verdict {
            check: match &t.first {
                Some(f) => format!("{name} trials, N=16: first violation {f}"),
                None => format!("{name} trials, N=16, {} timeouts", t.timeouts),
            },
            pass: bad == 0,
            margin: -(bad as f64),
            n_trials: t.trials,
            seed,
        });
        let _ = write!(detail, "{name}: {} trials, {} violations; ", t.trials, bad);
    }
    let mut det = ReachReport::default();
    for n in [16, 24, 32] {
        for spec in PointMassSpec::all(n) {
            let m = DetMachine::new(spec);
            let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).expect("domain pair")).collect();
            det.merge(explore(&m, starts, |_| {}));
        }
    }
    checks.push(config.exact(
        format!("deterministic exhaustive N=16,24,32: {} states", det.states),
        det.passed(),
        -(det.violation_count as f64),
    ));
    let mut sym = ReachReport::default();
    for n in [16, 24, 32] {
        for (_, nu) in symmetric_laws() {
            let m = SymMachine::new(&sparse(n, &nu, &nu)).expect("equal laws");
            let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).expect("domain pair")).collect();
            sym.merge(explore(&m, starts, |_| {}));
        }
    }
    checks.push(config.exact(
        format!("symmetric exhaustive N=16,24,32: {} states", sym.states),
        sym.passed(),
        -(sym.violation_count as f64),
    ));
    let _ = write!(detail, "exhaustive: {} + {} states", det.states, sym.states);
    Criterion::new(10, checks, detail)
}

fn batch_csv(coupler: &Coupler, spec: &BatchSpec, threads: usize) -> Result<Vec<u8>, String> {
    let b = run_batch_on(coupler, spec, threads).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    report::write_trials(&mut out, &b.records).map_err(|e| e.to_string())?;
    report::write_survival(&mut out, &b.survival(spec.horizon)).map_err(|e| e.to_string())?;
    Ok(out)
}

fn determinism(config: &Config) -> Criterion {
    let mut checks = Vec::new();
    let cases = [
        ("deterministic N=16 J0=5 JN=11", chain(&pm(16, 5, 11)), CouplingKind::Deterministic, (4, 7)),
        ("symmetric N=16 uniform{5,7}", sparse(16, &[(5, 0.5), (7, 0.5)], &[(5, 0.5), (7, 0.5)]), CouplingKind::Symmetric, (7, 9)),
    ];
    for (i, (name, c, kind, (x, y))) in cases.into_iter().enumerate() {
        let coupler = Coupler::new(&c, kind).expect("coupling exists");
        let seed = config.seed_for(11, i as u64);
        let n_trials = (config.trials / 5).max(1);
        let spec = BatchSpec { x, y, n_trials, master_seed: seed, horizon: config.horizon };
        let outputs: Vec<Result<Vec<u8>, String>> = [1, 2, 4, 7].iter().map(|&t| batch_csv(&coupler, &spec, t)).collect();
        let same = outputs.iter().all(|o| o.is_ok() && o == &outputs[0]);
        let error = outputs.iter().find_map(|o| o.as_ref().err().cloned());
        checks.push(Verdict {
            check: match error {
                Some(e) => format!("{name} start ({x},{y}): {e}"),
                None => format!("{name} start ({x},{y}): CSV bytes at 1, 2, 4, 7 threads"),
            },
            pass: same,
            margin: if same { 0.0 } else { -1.0 },
            n_trials,
            seed,
        });
    }
    Criterion::new(11, checks, "trial and survival CSVs compared byte for byte".into())
}
