//! Couplings of two copies of the chain.
//!
//! Both copies are driven by one lazy increment `ξ ∈ {−1, 0, +1}` of the walk
//! on the extended line `{−1, …, N + 1}`; stepping to `−1` or `N + 1` stands
//! for a redistribution from `0` or `N`. Under [`Regime::Rigid`] both copies
//! take `ξ`, under [`Regime::Ref`] the lower copy takes `ξ` and the upper `−ξ`.
//!
//! A coupling is a [`Machine`]: a pure transition function on its state given
//! the increment and, when a copy lands at a fresh redistribution site, the
//! drawn site. The same machine is driven by an RNG in [`drive`] and by the
//! exhaustive search in [`reach`].

pub mod deterministic;
pub mod dominance;
pub mod exact;
pub mod pair;
pub mod reach;
pub mod symmetric;

use std::fmt;
use std::hash::Hash;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::chain::{Boundary, ChainSpec, Law, Site, SpecError};

pub use deterministic::DetMachine;
pub use pair::{decompose_pair, parity_fix_outcomes, ParityCoins};
pub use symmetric::SymMachine;

/// One lazy increment of the underlying walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Increment {
    Down,
    Stay,
    Up,
}

impl Increment {
    pub const ALL: [Increment; 3] = [Increment::Down, Increment::Stay, Increment::Up];

    pub fn value(self) -> i64 {
        match self {
            Increment::Down => -1,
            Increment::Stay => 0,
            Increment::Up => 1,
        }
    }

    pub fn negated(self) -> Increment {
        match self {
            Increment::Down => Increment::Up,
            Increment::Stay => Increment::Stay,
            Increment::Up => Increment::Down,
        }
    }

    /// Probability of this outcome, in quarters.
    pub fn quarters(self) -> u32 {
        match self {
            Increment::Stay => 2,
            _ => 1,
        }
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Increment {
        match rng.gen_range(0u8..4) {
            0 => Increment::Down,
            3 => Increment::Up,
            _ => Increment::Stay,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    Rigid,
    Ref,
}

/// Where a copy ends up after one increment on the extended line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ext {
    Site(Site),
    /// Stepped to `−1`: redistributed from `0`.
    ExitLeft,
    /// Stepped to `N + 1`: redistributed from `N`.
    ExitRight,
}

impl Ext {
    pub fn shift(x: Site, inc: Increment, n: usize) -> Ext {
        let p = x as i64 + inc.value();
        if p < 0 {
            Ext::ExitLeft
        } else if p > n as i64 {
            Ext::ExitRight
        } else {
            Ext::Site(p as Site)
        }
    }

    pub fn site(self) -> Option<Site> {
        match self {
            Ext::Site(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_exit(self) -> bool {
        !matches!(self, Ext::Site(_))
    }
}

/// Moves of the lower and upper copy under a regime.
pub fn regime_moves(regime: Regime, lo: Site, hi: Site, inc: Increment, n: usize) -> (Ext, Ext) {
    let hi_inc = match regime {
        Regime::Rigid => inc,
        Regime::Ref => inc.negated(),
    };
    (Ext::shift(lo, inc, n), Ext::shift(hi, hi_inc, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StageLabel {
    ParityFix,
    S1,
    S2a,
    S2b,
    S2c,
    S3,
    S4,
    R1a,
    R1b,
    R1c,
    R2a,
    R2b,
    R3,
    Done,
}

impl StageLabel {
    pub const DETERMINISTIC: [StageLabel; 6] = [
        StageLabel::S1,
        StageLabel::S2a,
        StageLabel::S2b,
        StageLabel::S2c,
        StageLabel::S3,
        StageLabel::S4,
    ];
    pub const SYMMETRIC: [StageLabel; 6] = [
        StageLabel::R1a,
        StageLabel::R1b,
        StageLabel::R1c,
        StageLabel::R2a,
        StageLabel::R2b,
        StageLabel::R3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StageLabel::ParityFix => "ParityFix",
            StageLabel::S1 => "S1",
            StageLabel::S2a => "S2a",
            StageLabel::S2b => "S2b",
            StageLabel::S2c => "S2c",
            StageLabel::S3 => "S3",
            StageLabel::S4 => "S4",
            StageLabel::R1a => "R1a",
            StageLabel::R1b => "R1b",
            StageLabel::R1c => "R1c",
            StageLabel::R2a => "R2a",
            StageLabel::R2b => "R2b",
            StageLabel::R3 => "R3",
            StageLabel::Done => "Done",
        }
    }

    pub fn regime(self) -> Option<Regime> {
        use StageLabel::*;
        match self {
            S1 | S4 | R1b | R2a | R3 => Some(Regime::Ref),
            S2a | S2b | S2c | S3 | R1a | R1c | R2b => Some(Regime::Rigid),
            ParityFix | Done => None,
        }
    }
}

impl fmt::Display for StageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The stage graph. A trial may also start in any stage, or finish in the
/// parity-fix step.
///
/// `S2b → S2c` occurs only after `S4 → S2b` with a gap above
/// `N + JN − J0 + 2`, which needs `N ≥ 32`.
pub fn is_legal_edge(from: StageLabel, to: StageLabel) -> bool {
    use StageLabel::*;
    match from {
        ParityFix => to != ParityFix,
        S1 => matches!(to, Done),
        S2a => matches!(to, S1),
        S2b => matches!(to, S1 | S2a | S2c),
        S2c => matches!(to, S1 | S2a | S3),
        S3 => matches!(to, S1 | S2a | S3 | S4 | Done),
        S4 => matches!(to, Done | S1 | S2a | S2b),
        R1a => matches!(to, R1b | R1c | R2a | R3),
        R1b => matches!(to, Done | R1c),
        R1c => matches!(to, R3 | R2a),
        R2a => matches!(to, Done | R2b),
        R2b => matches!(to, Done | R3),
        R3 => matches!(to, Done),
        Done => false,
    }
}

/// A failed stage invariant: the configuration a proof step rules out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub stage: StageLabel,
    pub x: Site,
    pub y: Site,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at ({}, {}): {}", self.stage, self.x, self.y, self.message)
    }
}

#[derive(Debug, Error)]
pub enum CouplingError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("the deterministic coupling needs point-mass redistribution laws")]
    NotPointMass,
    #[error(
        "no coupling is implemented for nu0 != nuN with random redistribution; \
         efficient couplings for that case are an open problem"
    )]
    Unsupported,
    #[error("the symmetric coupling needs nu0 = nuN")]
    UnequalLaws,
    #[error("start ({x}, {y}) outside the coupling's domain: {reason}")]
    OutOfDomain { x: Site, y: Site, reason: String },
    #[error("stage invariant violated: {0}")]
    Violation(Violation),
}

/// Randomness consumed by one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Noise {
    pub inc: Increment,
    /// Fresh redistribution site in original coordinates, when requested.
    pub draw: Option<Site>,
}

impl Noise {
    pub fn plain(inc: Increment) -> Self {
        Noise { inc, draw: None }
    }
}

pub trait Machine {
    type State: Clone + Eq + Hash + fmt::Debug;

    fn chain(&self) -> &ChainSpec;

    fn stage(&self, s: &Self::State) -> StageLabel;

    /// Labelled positions `(X, Y)` in original coordinates.
    fn positions(&self, s: &Self::State) -> (Site, Site);

    /// Lower position and gap in the machine's working frame.
    fn frame_entry(&self, s: &Self::State) -> (Site, usize);

    /// The law to draw from when `inc` sends a copy to a fresh site.
    fn draw_needed(&self, s: &Self::State, inc: Increment) -> Option<Boundary>;

    fn step(&self, s: &Self::State, noise: Noise) -> Result<Self::State, Violation>;

    /// True when the step from `from` lands a copy at a remembered site
    /// rather than a fresh draw, so that the copy's move is not a function of
    /// its own position and the current noise alone.
    fn uses_memory(&self, _from: &Self::State, _noise: Noise) -> bool {
        false
    }
}

/// Samples sites from a redistribution law.
#[derive(Debug, Clone)]
pub struct LawSampler {
    sites: Vec<Site>,
    index: WeightedIndex<f64>,
}

impl LawSampler {
    pub fn new(law: &Law) -> Self {
        let sites = law.support().iter().map(|p| p.0).collect();
        let index = WeightedIndex::new(law.support().iter().map(|p| p.1))
            .expect("a validated law has positive total mass");
        LawSampler { sites, index }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Site {
        if self.sites.len() == 1 {
            return self.sites[0];
        }
        self.sites[self.index.sample(rng)]
    }
}

/// One visit to a stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageVisit {
    pub label: StageLabel,
    pub duration: u64,
    /// Lower position at entry, in the machine's working frame.
    pub entry_lo: Site,
    pub entry_gap: usize,
}

/// One coupling run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    /// Coupling time, or the horizon when the run timed out.
    pub tau: u64,
    pub timed_out: bool,
    pub stage_path: Vec<StageVisit>,
    pub assertions_passed: bool,
}

impl TrialRecord {
    /// `label:duration` tokens joined by `;`, with a trailing `timeout` token
    /// for runs cut off at the horizon.
    pub fn path_string(&self) -> String {
        let mut parts: Vec<String> = self
            .stage_path
            .iter()
            .map(|v| format!("{}:{}", v.label, v.duration))
            .collect();
        if self.timed_out {
            parts.push("timeout".into());
        }
        parts.join(";")
    }

    pub fn path_is_legal(&self) -> bool {
        let labels: Vec<StageLabel> = self.stage_path.iter().map(|v| v.label).collect();
        labels.windows(2).all(|w| is_legal_edge(w[0], w[1]))
            && (self.timed_out
                || labels
                    .last()
                    .map_or(true, |&l| is_legal_edge(l, StageLabel::Done) || l == StageLabel::ParityFix))
    }
}

/// Observer of every step a driver takes: stage before the step, labelled
/// positions before and after, and whether the move used remembered state.
pub trait StepObserver {
    fn observe(&mut self, stage: StageLabel, before: (Site, Site), after: (Site, Site), memory: bool);
}

impl StepObserver for () {
    fn observe(&mut self, _: StageLabel, _: (Site, Site), _: (Site, Site), _: bool) {}
}

/// Samplers for the two boundaries of a chain.
#[derive(Debug, Clone)]
pub struct Samplers {
    left: LawSampler,
    right: LawSampler,
}

impl Samplers {
    pub fn new(chain: &ChainSpec) -> Self {
        Samplers {
            left: LawSampler::new(chain.nu0()),
            right: LawSampler::new(chain.nun()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, b: Boundary, rng: &mut R) -> Site {
        match b {
            Boundary::Left => self.left.sample(rng),
            Boundary::Right => self.right.sample(rng),
        }
    }
}

pub(crate) fn check_step(
    from: StageLabel,
    to: StageLabel,
    after: (Site, Site),
) -> Result<(), String> {
    if from != to && !is_legal_edge(from, to) {
        return Err(format!("illegal stage transition {from} -> {to}"));
    }
    let gap = after.0.abs_diff(after.1);
    if gap % 2 != 0 {
        return Err(format!("odd gap {gap}"));
    }
    if (to == StageLabel::Done) != (gap == 0) {
        return Err(format!("stage {to} with gap {gap}"));
    }
    Ok(())
}

/// Runs a machine from `start` for at most `horizon` steps. `t0` offsets the
/// clock (a preceding parity-fix step), and `path` may already hold visits.
pub fn drive<M: Machine, R: Rng + ?Sized, O: StepObserver>(
    machine: &M,
    samplers: &Samplers,
    start: M::State,
    rng: &mut R,
    horizon: u64,
    t0: u64,
    path: &mut Vec<StageVisit>,
    observer: &mut O,
) -> Result<(u64, bool), Violation> {
    let mut state = start;
    let mut t = t0;
    let mut stage = machine.stage(&state);
    if stage == StageLabel::Done {
        return Ok((t, false));
    }
    let (lo, gap) = machine.frame_entry(&state);
    path.push(StageVisit { label: stage, duration: 0, entry_lo: lo, entry_gap: gap });
    while t < horizon {
        let inc = Increment::sample(rng);
        let draw = machine.draw_needed(&state, inc).map(|b| samplers.sample(b, rng));
        let noise = Noise { inc, draw };
        let before = machine.positions(&state);
        let memory = machine.uses_memory(&state, noise);
        let next = machine.step(&state, noise)?;
        let next_stage = machine.stage(&next);
        let after = machine.positions(&next);
        check_step(stage, next_stage, after).map_err(|message| Violation {
            stage,
            x: after.0,
            y: after.1,
            message,
        })?;
        observer.observe(stage, before, after, memory);
        t += 1;
        path.last_mut().expect("open visit").duration += 1;
        if next_stage == StageLabel::Done {
            return Ok((t, false));
        }
        if next_stage != stage {
            let (lo, gap) = machine.frame_entry(&next);
            path.push(StageVisit { label: next_stage, duration: 0, entry_lo: lo, entry_gap: gap });
        }
        state = next;
        stage = next_stage;
    }
    Ok((t, true))
}

/// Which coupling to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingKind {
    Deterministic,
    Symmetric,
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CouplingKind::Deterministic => "deterministic",
            CouplingKind::Symmetric => "symmetric",
        })
    }
}

/// The couplings a chain admits, in the order they are preferred.
pub fn available_kinds(chain: &ChainSpec) -> Vec<CouplingKind> {
    let mut kinds = Vec::new();
    if chain.as_point_mass().is_some() {
        kinds.push(CouplingKind::Deterministic);
    }
    if chain.has_equal_laws() {
        kinds.push(CouplingKind::Symmetric);
    }
    kinds
}

enum Engine {
    Det(DetMachine),
    Sym(SymMachine),
}

/// A ready-to-run coupling for one chain, including the parity-fix step for
/// odd starting gaps.
pub struct Coupler {
    chain: ChainSpec,
    samplers: Samplers,
    engine: Engine,
}

impl Coupler {
    pub fn new(chain: &ChainSpec, kind: CouplingKind) -> Result<Self, CouplingError> {
        chain.validate()?;
        let engine = match kind {
            CouplingKind::Deterministic => {
                let pm = chain.as_point_mass().ok_or(CouplingError::NotPointMass)?;
                Engine::Det(DetMachine::new(pm))
            }
            CouplingKind::Symmetric => Engine::Sym(SymMachine::new(chain)?),
        };
        Ok(Coupler {
            chain: chain.clone(),
            samplers: Samplers::new(chain),
            engine,
        })
    }

    /// Picks the first available coupling, refusing chains with no coupling.
    pub fn for_chain(chain: &ChainSpec) -> Result<Self, CouplingError> {
        let kind = *available_kinds(chain).first().ok_or(CouplingError::Unsupported)?;
        Coupler::new(chain, kind)
    }

    pub fn kind(&self) -> CouplingKind {
        match self.engine {
            Engine::Det(_) => CouplingKind::Deterministic,
            Engine::Sym(_) => CouplingKind::Symmetric,
        }
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    /// Whether an even-gap pair can be handed to the stage machine directly.
    pub fn in_domain(&self, x: Site, y: Site) -> Result<(), String> {
        match &self.engine {
            Engine::Det(m) => m.check_domain(x, y),
            Engine::Sym(m) => m.check_domain(x, y),
        }
    }

    /// Checks a start pair: equal, an in-domain even gap, or an odd gap whose
    /// every parity-fix outcome is coalesced or in the domain.
    pub fn check_start(&self, x: Site, y: Site) -> Result<(), CouplingError> {
        let n = self.chain.n();
        if x > n || y > n {
            return Err(CouplingError::OutOfDomain { x, y, reason: format!("sites must lie in 0..={n}") });
        }
        if x == y {
            return Ok(());
        }
        let err = |reason: String| CouplingError::OutOfDomain { x, y, reason };
        if x.abs_diff(y) % 2 == 0 {
            return self.in_domain(x, y).map_err(err);
        }
        for (a, b, _) in parity_fix_outcomes(&self.chain, x, y) {
            if a != b {
                self.in_domain(a, b)
                    .map_err(|r| err(format!("parity-fix outcome ({a}, {b}) unusable: {r}")))?;
            }
        }
        Ok(())
    }

    /// One seeded trial with no observer.
    pub fn run(&self, x: Site, y: Site, seed: u64, horizon: u64) -> Result<TrialRecord, CouplingError> {
        self.run_observed(x, y, seed, horizon, &mut ())
    }

    pub fn run_observed<O: StepObserver>(
        &self,
        x: Site,
        y: Site,
        seed: u64,
        horizon: u64,
        observer: &mut O,
    ) -> Result<TrialRecord, CouplingError> {
        self.check_start(x, y)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut path = Vec::new();
        let (mut x, mut y) = (x, y);
        let mut t0 = 0;
        if x.abs_diff(y) % 2 == 1 && horizon > 0 {
            let coins = ParityCoins::sample(&mut rng);
            let (a, b) = coins.apply(&self.chain, x, y, &self.samplers, &mut rng);
            observer.observe(StageLabel::ParityFix, (x, y), (a, b), false);
            path.push(StageVisit {
                label: StageLabel::ParityFix,
                duration: 1,
                entry_lo: x.min(y),
                entry_gap: x.abs_diff(y),
            });
            x = a;
            y = b;
            t0 = 1;
        }
        let outcome = if x == y || x.abs_diff(y) % 2 == 1 {
            Ok((t0, x != y))
        } else {
            match &self.engine {
                Engine::Det(m) => {
                    let s = m.start(x, y).map_err(|reason| CouplingError::OutOfDomain { x, y, reason })?;
                    drive(m, &self.samplers, s, &mut rng, horizon, t0, &mut path, observer)
                }
                Engine::Sym(m) => {
                    let s = m.start(x, y).map_err(|reason| CouplingError::OutOfDomain { x, y, reason })?;
                    drive(m, &self.samplers, s, &mut rng, horizon, t0, &mut path, observer)
                }
            }
        };
        let (tau, timed_out) = outcome.map_err(CouplingError::Violation)?;
        Ok(TrialRecord {
            seed,
            tau,
            timed_out,
            stage_path: path,
            assertions_passed: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_line_moves() {
        assert_eq!(Ext::shift(0, Increment::Down, 16), Ext::ExitLeft);
        assert_eq!(Ext::shift(16, Increment::Up, 16), Ext::ExitRight);
        assert_eq!(Ext::shift(7, Increment::Up, 16), Ext::Site(8));
        let (a, b) = regime_moves(Regime::Rigid, 4, 8, Increment::Up, 16);
        assert_eq!((a, b), (Ext::Site(5), Ext::Site(9)));
        let (a, b) = regime_moves(Regime::Ref, 6, 8, Increment::Up, 16);
        assert_eq!((a, b), (Ext::Site(7), Ext::Site(7)));
        let (a, b) = regime_moves(Regime::Ref, 6, 8, Increment::Stay, 16);
        assert_eq!((a, b), (Ext::Site(6), Ext::Site(8)));
    }

    #[test]
    fn stage_graph() {
        use StageLabel::*;
        assert!(is_legal_edge(S2b, S2a));
        assert!(!is_legal_edge(S2a, S2b));
        assert!(is_legal_edge(S3, S3));
        assert!(!is_legal_edge(S1, S2a));
        assert!(is_legal_edge(R1a, R1b) && is_legal_edge(R1b, R1c) && is_legal_edge(R1c, R3));
        assert!(!is_legal_edge(R3, R1a));
        assert_eq!(S4.regime(), Some(Regime::Ref));
        assert_eq!(R2b.regime(), Some(Regime::Rigid));
    }

    #[test]
    fn increment_sampling_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = [0u32; 3];
        for _ in 0..40_000 {
            counts[(Increment::sample(&mut rng).value() + 1) as usize] += 1;
        }
        assert!((counts[0] as f64 - 10_000.0).abs() < 400.0);
        assert!((counts[1] as f64 - 20_000.0).abs() < 500.0);
    }

    #[test]
    fn path_string_format() {
        let r = TrialRecord {
            seed: 1,
            tau: 7,
            timed_out: false,
            stage_path: vec![
                StageVisit { label: StageLabel::S2a, duration: 3, entry_lo: 4, entry_gap: 2 },
                StageVisit { label: StageLabel::S1, duration: 4, entry_lo: 5, entry_gap: 2 },
            ],
            assertions_passed: true,
        };
        assert_eq!(r.path_string(), "S2a:3;S1:4");
        assert!(r.path_is_legal());
    }
}
