//! Seeded batches of coupling runs, survival curves, rate fits and the
//! stochastic audits.
//!
//! Trial `i` of a batch with master seed `m` runs on its own ChaCha stream,
//! so a batch is the same whatever the thread count.

use std::collections::{BTreeMap, HashMap};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::Site;
use crate::coupling::dominance::sample_exit_pair;
use crate::coupling::{Coupler, CouplingError, StageLabel, StepObserver, TrialRecord};
use crate::oracle;

/// Confidence level of the survival bands.
pub const DKW_ALPHA: f64 = 0.01;

/// Seed of trial `index` under `master`: the first word of stream `index` of
/// the ChaCha generator keyed by `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

/// Uniform radius of a DKW band for `n` samples at level `1 − DKW_ALPHA`.
pub fn dkw_radius(n: u64) -> f64 {
    ((2.0 / DKW_ALPHA).ln() / (2.0 * n as f64)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BatchSpec {
    pub x: Site,
    pub y: Site,
    pub n_trials: u64,
    pub master_seed: u64,
    pub horizon: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StageTally {
    pub visits: u64,
    pub steps: u64,
}

/// Order-free summary of a set of trials. `merge` is associative and
/// commutative with `BatchStats::default()` as identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BatchStats {
    pub n_trials: u64,
    pub timeouts: u64,
    /// Coupling times of the trials that coalesced.
    pub tau_counts: BTreeMap<u64, u64>,
    pub stages: BTreeMap<StageLabel, StageTally>,
    pub illegal_paths: u64,
}

impl BatchStats {
    pub fn from_record(r: &TrialRecord) -> Self {
        let mut s = BatchStats::default();
        s.add(r);
        s
    }

    pub fn add(&mut self, r: &TrialRecord) {
        self.n_trials += 1;
        if r.timed_out {
            self.timeouts += 1;
        } else {
            *self.tau_counts.entry(r.tau).or_default() += 1;
        }
        for v in &r.stage_path {
            let e = self.stages.entry(v.label).or_default();
            e.visits += 1;
            e.steps += v.duration;
        }
        if !r.path_is_legal() {
            self.illegal_paths += 1;
        }
    }

    pub fn merge(&mut self, other: &BatchStats) {
        self.n_trials += other.n_trials;
        self.timeouts += other.timeouts;
        for (&t, &c) in &other.tau_counts {
            *self.tau_counts.entry(t).or_default() += c;
        }
        for (&l, t) in &other.stages {
            let e = self.stages.entry(l).or_default();
            e.visits += t.visits;
            e.steps += t.steps;
        }
        self.illegal_paths += other.illegal_paths;
    }

    /// Largest coalescence time seen, if any trial coalesced.
    pub fn max_tau(&self) -> Option<u64> {
        self.tau_counts.keys().next_back().copied()
    }

    /// Empirical `P(τ > t)` for `t = 0..=t_max`. Timed-out trials count as
    /// surviving at every `t`.
    pub fn survival(&self, t_max: usize) -> SurvivalCurve {
        assert!(self.n_trials > 0, "survival curve of an empty batch");
        let n = self.n_trials as f64;
        let mut alive = self.n_trials;
        let mut counts = self.tau_counts.iter().peekable();
        let mut survival = Vec::with_capacity(t_max + 1);
        let mut survivors = Vec::with_capacity(t_max + 1);
        for t in 0..=t_max as u64 {
            while let Some((_, c)) = counts.next_if(|(&tau, _)| tau <= t) {
                alive -= c;
            }
            survivors.push(alive);
            survival.push(alive as f64 / n);
        }
        SurvivalCurve {
            n_trials: self.n_trials,
            radius: dkw_radius(self.n_trials),
            survival,
            survivors,
        }
    }
}

/// Empirical survival curve with a uniform DKW band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalCurve {
    pub n_trials: u64,
    pub radius: f64,
    pub survival: Vec<f64>,
    /// Surviving trial counts behind each value.
    pub survivors: Vec<u64>,
}

impl SurvivalCurve {
    pub fn t_max(&self) -> usize {
        self.survival.len() - 1
    }

    pub fn ci_lo(&self, t: usize) -> f64 {
        (self.survival[t] - self.radius).max(0.0)
    }

    pub fn ci_hi(&self, t: usize) -> f64 {
        (self.survival[t] + self.radius).min(1.0)
    }

    /// From the first time survival drops to `level` to the last time at
    /// least `floor` trials survive, or `None` when that is too short to fit.
    pub fn tail_window(&self, level: f64, floor: u64) -> Option<(usize, usize)> {
        let end = self.survivors.iter().rposition(|&s| s >= floor)?;
        let start = self.survival.iter().position(|&s| s <= level)?;
        (end >= start + 2).then_some((start, end))
    }

    /// Survivor-weighted fit over [`SurvivalCurve::tail_window`] with the
    /// default level and floor.
    pub fn tail_rate(&self, degree: u8) -> Result<RateFit, FitError> {
        let window = self
            .tail_window(TAIL_LEVEL, TAIL_FLOOR)
            .ok_or(FitError::BadWindow(0, self.t_max()))?;
        let weights: Vec<f64> = self.survivors.iter().map(|&s| s as f64).collect();
        fit_rate_weighted(&self.survival, Some(&weights), window, degree)
    }
}

/// Survival level at which tail fits start.
pub const TAIL_LEVEL: f64 = 0.1;
/// Fewest surviving trials a tail fit may use.
pub const TAIL_FLOOR: u64 = 50;

pub struct Batch {
    pub records: Vec<TrialRecord>,
    pub stats: BatchStats,
}

impl Batch {
    /// Survival curve out to one step past the last coalescence, or to the
    /// horizon when some trial timed out.
    pub fn survival(&self, horizon: u64) -> SurvivalCurve {
        let end = if self.stats.timeouts > 0 {
            horizon
        } else {
            self.stats.max_tau().map_or(0, |t| t + 1).min(horizon)
        };
        self.stats.survival(end as usize)
    }
}

/// Runs the trials of `spec` on the current rayon pool. Any assertion failure
/// fails the whole batch.
pub fn run_batch(coupler: &Coupler, spec: &BatchSpec) -> Result<Batch, CouplingError> {
    assert!(spec.n_trials >= 1, "a batch needs at least one trial");
    coupler.check_start(spec.x, spec.y)?;
    let records = (0..spec.n_trials)
        .into_par_iter()
        .map(|i| coupler.run(spec.x, spec.y, trial_seed(spec.master_seed, i), spec.horizon))
        .collect::<Result<Vec<_>, _>>()?;
    let stats = records
        .par_iter()
        .fold(BatchStats::default, |mut s, r| {
            s.add(r);
            s
        })
        .reduce(BatchStats::default, |mut a, b| {
            a.merge(&b);
            a
        });
    Ok(Batch { records, stats })
}

/// [`run_batch`] on a dedicated pool of `threads` workers.
pub fn run_batch_on(coupler: &Coupler, spec: &BatchSpec, threads: usize) -> Result<Batch, CouplingError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| run_batch(coupler, spec))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("fit window [{0}, {1}] is empty or out of range")]
    BadWindow(usize, usize),
    #[error("value {value} at t = {t} is not positive")]
    NonPositive { t: usize, value: f64 },
    #[error("polynomial degree {0} not supported (0 or 1)")]
    Degree(u8),
}

/// Least-squares fit of `ln v(t) ≈ c + ln(1 + βt) + st` over a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub window: (usize, usize),
    /// Fitted `s`, the exponential rate.
    pub slope: f64,
    pub degree: u8,
    /// `β`; zero for degree 0.
    pub prefactor: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

fn line_fit(ts: &[f64], ys: &[f64], ws: &[f64]) -> (f64, f64, f64) {
    let w: f64 = ws.iter().sum();
    let mt = ts.iter().zip(ws).map(|(t, w)| t * w).sum::<f64>() / w;
    let my = ys.iter().zip(ws).map(|(y, w)| y * w).sum::<f64>() / w;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for ((t, y), w) in ts.iter().zip(ys).zip(ws) {
        sxy += w * (t - mt) * (y - my);
        sxx += w * (t - mt) * (t - mt);
    }
    let s = sxy / sxx;
    let c = my - s * mt;
    let ss: f64 = ts.iter().zip(ys).zip(ws).map(|((t, y), w)| w * (y - c - s * t).powi(2)).sum();
    (c, s, (ss / w).sqrt())
}

fn fit_with_prefactor(ts: &[f64], ys: &[f64], ws: &[f64], beta: f64) -> (f64, f64) {
    let adj: Vec<f64> = ts.iter().zip(ys).map(|(t, y)| y - (beta * t).ln_1p()).collect();
    let (_, s, r) = line_fit(ts, &adj, ws);
    (s, r)
}

/// Unweighted fit over `window = (t1, t2)`, both ends included.
pub fn fit_rate(values: &[f64], window: (usize, usize), degree: u8) -> Result<RateFit, FitError> {
    fit_rate_weighted(values, None, window, degree)
}

/// Fit with per-point weights, such as surviving-trial counts for an
/// empirical curve (the inverse variance of `ln Ŝ(t)` up to a constant).
pub fn fit_rate_weighted(
    values: &[f64],
    weights: Option<&[f64]>,
    window: (usize, usize),
    degree: u8,
) -> Result<RateFit, FitError> {
    let (t1, t2) = window;
    if t2 >= values.len() || t2 < t1 + 2 || weights.is_some_and(|w| w.len() < values.len()) {
        return Err(FitError::BadWindow(t1, t2));
    }
    let ts: Vec<f64> = (t1..=t2).map(|t| t as f64).collect();
    let ws: Vec<f64> = match weights {
        Some(w) => w[t1..=t2].to_vec(),
        None => vec![1.0; ts.len()],
    };
    let mut ys = Vec::with_capacity(ts.len());
    for t in t1..=t2 {
        let v = values[t];
        if !(v > 0.0) {
            return Err(FitError::NonPositive { t, value: v });
        }
        ys.push(v.ln());
    }
    let (_, s0, r0) = line_fit(&ts, &ys, &ws);
    let (slope, prefactor, residual) = match degree {
        0 => (s0, 0.0, r0),
        1 => {
            // Coarse scan of log β, then golden-section refinement.
            let (lo, hi) = ((1e-7f64).ln(), (10.0f64).ln());
            let steps = 240;
            let at = |u: f64| fit_with_prefactor(&ts, &ys, &ws, u.exp()).1;
            let grid: Vec<f64> = (0..=steps).map(|k| lo + (hi - lo) * k as f64 / steps as f64).collect();
            let best = (0..=steps)
                .min_by(|&a, &b| at(grid[a]).total_cmp(&at(grid[b])))
                .unwrap();
            let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(steps)]);
            let g = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..100 {
                let c = b - g * (b - a);
                let d = a + g * (b - a);
                if at(c) < at(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            let beta = (0.5 * (a + b)).exp();
            let (s1, r1) = fit_with_prefactor(&ts, &ys, &ws, beta);
            if r1 < r0 {
                (s1, beta, r1)
            } else {
                (s0, 0.0, r0)
            }
        }
        d => return Err(FitError::Degree(d)),
    };
    Ok(RateFit { window, slope, degree, prefactor, residual })
}

/// Fits both degrees and keeps degree 1 when it at least halves the residual.
pub fn fit_rate_auto(values: &[f64], window: (usize, usize)) -> Result<(RateFit, RateFit), FitError> {
    let f0 = fit_rate(values, window, 0)?;
    let f1 = fit_rate(values, window, 1)?;
    Ok(if f1.residual < 0.5 * f0.residual { (f1, f0) } else { (f0, f1) })
}

/// A single pass/fail outcome, as written to JSON reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub margin: f64,
    pub n_trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("grid mismatch: empirical curve has {empirical} points, bound has {bound}")]
pub struct GridMismatch {
    pub empirical: usize,
    pub bound: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dominance {
    pub pass: bool,
    /// `min_t (bound + radius − empirical)`.
    pub margin: f64,
    pub worst_t: usize,
}

/// Whether `empirical ≤ bound + radius` at every `t` of the common grid.
pub fn dominance_audit(empirical: &SurvivalCurve, bound: &[f64]) -> Result<Dominance, GridMismatch> {
    if bound.len() != empirical.survival.len() {
        return Err(GridMismatch { empirical: empirical.survival.len(), bound: bound.len() });
    }
    let (worst_t, margin) = empirical
        .survival
        .iter()
        .zip(bound)
        .map(|(e, b)| b + empirical.radius - e)
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty grid");
    Ok(Dominance { pass: margin >= -1e-12, margin, worst_t })
}

/// How marginal transitions are grouped before comparison with the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pooling {
    /// By stage, copy and the copy's position.
    ByStage,
    /// By copy and position only. A copy that lands on a remembered site is
    /// not Markov given the joint history, only given its own.
    ByPosition,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginalAudit {
    pub pooling: Pooling,
    pub steps: u64,
    pub groups: usize,
    pub tests: usize,
    pub failures: usize,
    pub worst_z: f64,
    pub first_failure: Option<String>,
}

impl MarginalAudit {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.tests > 0
    }
}

type GroupKey = (Option<StageLabel>, u8, Site);

struct MarginalCounter {
    pooling: Pooling,
    n: usize,
    steps: u64,
    counts: HashMap<GroupKey, Vec<u64>>,
}

impl StepObserver for MarginalCounter {
    fn observe(&mut self, stage: StageLabel, before: (Site, Site), after: (Site, Site), _memory: bool) {
        self.steps += 1;
        let stage = (self.pooling == Pooling::ByStage).then_some(stage);
        for (copy, from, to) in [(0u8, before.0, after.0), (1, before.1, after.1)] {
            let row = self.counts.entry((stage, copy, from)).or_insert_with(|| vec![0; self.n + 1]);
            row[to] += 1;
        }
    }
}

/// Runs trials from `starts` in turn until at least `min_steps` steps are
/// observed, then compares each group's empirical one-step law with the
/// kernel row at a `z_max`-sigma binomial band per site.
pub fn marginal_audit(
    coupler: &Coupler,
    starts: &[(Site, Site)],
    min_steps: u64,
    master_seed: u64,
    horizon: u64,
    pooling: Pooling,
    z_max: f64,
) -> Result<MarginalAudit, CouplingError> {
    let chain = coupler.chain();
    let mut counter = MarginalCounter { pooling, n: chain.n(), steps: 0, counts: HashMap::new() };
    let mut i = 0u64;
    while counter.steps < min_steps && !starts.is_empty() {
        let (x, y) = starts[(i % starts.len() as u64) as usize];
        coupler.run_observed(x, y, trial_seed(master_seed, i), horizon, &mut counter)?;
        i += 1;
    }
    let mut keys: Vec<&GroupKey> = counter.counts.keys().collect();
    keys.sort();
    let mut audit = MarginalAudit {
        pooling,
        steps: counter.steps,
        groups: keys.len(),
        tests: 0,
        failures: 0,
        worst_z: 0.0,
        first_failure: None,
    };
    for key in keys {
        let counts = &counter.counts[key];
        let total: u64 = counts.iter().sum();
        let row = chain.transition_row(key.2).expect("observed site");
        for (j, (&c, &p)) in counts.iter().zip(row.as_slice()).enumerate() {
            let expected = total as f64 * p;
            let z = if p == 0.0 || p == 1.0 {
                if c as f64 == expected { 0.0 } else { f64::INFINITY }
            } else {
                (c as f64 - expected) / (expected * (1.0 - p)).sqrt()
            };
            audit.tests += 1;
            audit.worst_z = audit.worst_z.max(z.abs());
            if z.abs() > z_max {
                audit.failures += 1;
                if audit.first_failure.is_none() {
                    audit.first_failure = Some(format!(
                        "{key:?} -> {j}: {c} of {total}, expected {expected:.1}"
                    ));
                }
            }
        }
    }
    Ok(audit)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExitPairAudit {
    pub l: usize,
    pub z: usize,
    pub n_samples: u64,
    /// Samples with `T > T′`.
    pub disordered: u64,
    /// `sup_t |empirical − exact|` for the center-started time `T′`.
    pub center_sup_error: f64,
    pub radius: f64,
}

impl ExitPairAudit {
    pub fn passed(&self) -> bool {
        self.disordered == 0 && self.center_sup_error <= self.radius
    }
}

/// Draws `n` coupled exit-time pairs and checks their ordering and the law
/// of the center-started time against the exact tail.
pub fn exit_pair_audit(l: usize, z: usize, n: u64, master_seed: u64) -> ExitPairAudit {
    let pairs: Vec<_> = (0..n)
        .into_par_iter()
        .map(|i| sample_exit_pair(l, z, &mut ChaCha8Rng::seed_from_u64(trial_seed(master_seed, i))))
        .collect();
    let disordered = pairs.iter().filter(|p| p.t > p.t_center).count() as u64;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for p in &pairs {
        *counts.entry(p.t_center).or_default() += 1;
    }
    let t_max = counts.keys().next_back().copied().unwrap_or(0) as usize + 1;
    let exact = oracle::center_tail(l, t_max);
    let mut alive = n;
    let mut worst = 0.0f64;
    for (t, &q) in exact.iter().enumerate() {
        alive -= counts.get(&(t as u64)).copied().unwrap_or(0);
        worst = worst.max((alive as f64 / n as f64 - q).abs());
    }
    ExitPairAudit { l, z, n_samples: n, disordered, center_sup_error: worst, radius: dkw_radius(n) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainSpec, PointMassSpec};
    use crate::coupling::CouplingKind;

    fn det_coupler() -> Coupler {
        let c = PointMassSpec::new(16, 5, 11).unwrap().to_chain_spec().unwrap();
        Coupler::new(&c, CouplingKind::Deterministic).unwrap()
    }

    #[test]
    fn trial_seeds_differ_and_replay() {
        assert_eq!(trial_seed(7, 3), trial_seed(7, 3));
        assert_ne!(trial_seed(7, 3), trial_seed(7, 4));
        assert_ne!(trial_seed(7, 3), trial_seed(8, 3));
    }

    #[test]
    fn single_trial_is_a_step() {
        let c = det_coupler();
        let spec = BatchSpec { x: 4, y: 8, n_trials: 1, master_seed: 11, horizon: 10_000 };
        let b = run_batch(&c, &spec).unwrap();
        let tau = b.records[0].tau as usize;
        let s = b.survival(spec.horizon);
        assert_eq!(s.t_max(), tau + 1);
        assert!(s.survival[..tau].iter().all(|&v| v == 1.0));
        assert_eq!(s.survival[tau], 0.0);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let c = det_coupler();
        let spec = BatchSpec { x: 2, y: 6, n_trials: 2_000, master_seed: 5, horizon: 10_000 };
        let a = run_batch_on(&c, &spec, 1).unwrap();
        let b = run_batch_on(&c, &spec, 4).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.stats, b.stats);
        assert_eq!(a.stats.illegal_paths, 0);
    }

    #[test]
    fn geometric_curve_slope() {
        let lam: f64 = 0.97;
        let v: Vec<f64> = (0..400).map(|t| lam.powi(t)).collect();
        let f = fit_rate(&v, (100, 399), 0).unwrap();
        assert!((f.slope - lam.ln()).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn linear_prefactor_is_recovered() {
        let lam: f64 = 0.98;
        let v: Vec<f64> = (0..800).map(|t| (2.0 + 0.3 * t as f64) * lam.powi(t)).collect();
        let (best, other) = fit_rate_auto(&v, (200, 799)).unwrap();
        assert_eq!(best.degree, 1);
        assert!(((best.slope - lam.ln()) / lam.ln()).abs() < 0.01, "{best:?}");
        assert!(((other.slope - lam.ln()) / lam.ln()).abs() > 0.05, "{other:?}");
    }

    #[test]
    fn fit_errors() {
        let v = vec![1.0, 0.5, 0.0, 0.1];
        assert_eq!(fit_rate(&v, (0, 3), 0), Err(FitError::NonPositive { t: 2, value: 0.0 }));
        assert_eq!(fit_rate(&v, (0, 9), 0), Err(FitError::BadWindow(0, 9)));
        assert_eq!(fit_rate(&v, (0, 1), 0), Err(FitError::BadWindow(0, 1)));
        assert_eq!(fit_rate(&[1.0, 0.5, 0.25], (0, 2), 2), Err(FitError::Degree(2)));
    }

    #[test]
    fn dominance_edge_cases() {
        let mut stats = BatchStats::default();
        stats.n_trials = 10;
        stats.tau_counts.insert(0, 10);
        let zero = stats.survival(5);
        let bound = vec![0.3; 6];
        assert!(dominance_audit(&zero, &bound).unwrap().pass);
        assert!(dominance_audit(&zero, &bound[..5]).is_err());
        let mut same = zero.clone();
        same.survival = bound.clone();
        let d = dominance_audit(&same, &bound).unwrap();
        assert!(d.pass);
        assert!((d.margin - same.radius).abs() < 1e-15);
    }

    #[test]
    fn timeouts_survive() {
        let c = det_coupler();
        let spec = BatchSpec { x: 4, y: 8, n_trials: 50, master_seed: 1, horizon: 3 };
        let b = run_batch(&c, &spec).unwrap();
        assert!(b.stats.timeouts > 0);
        let s = b.survival(3);
        assert_eq!(s.t_max(), 3);
        assert_eq!(s.survivors[3], b.stats.timeouts);
    }

    #[test]
    fn marginals_small() {
        let c = det_coupler();
        let m = crate::coupling::DetMachine::new(PointMassSpec::new(16, 5, 11).unwrap());
        let a = marginal_audit(&c, &m.domain_pairs(), 100_000, 3, 10_000, Pooling::ByStage, 4.0).unwrap();
        assert!(a.passed(), "{a:?}");
        let sym = ChainSpec::from_sparse(16, &[(5, 0.5), (7, 0.5)], &[(5, 0.5), (7, 0.5)]).unwrap();
        let c = Coupler::new(&sym, CouplingKind::Symmetric).unwrap();
        let m = crate::coupling::SymMachine::new(&sym).unwrap();
        let a = marginal_audit(&c, &m.domain_pairs(), 100_000, 3, 10_000, Pooling::ByPosition, 4.0).unwrap();
        assert!(a.passed(), "{a:?}");
    }

    #[test]
    fn exit_pairs_small() {
        let a = exit_pair_audit(8, 1, 5_000, 9);
        assert!(a.passed(), "{a:?}");
    }
}
