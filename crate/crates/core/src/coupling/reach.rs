//! Exhaustive exploration of a stage machine: every state reachable from a
//! set of starts under every increment and every redistribution draw.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::{check_step, Increment, Machine, Noise, StageLabel, Violation};
use crate::chain::Site;

/// A noise outcome with its probability split into the increment's quarters
/// and the mass of the drawn site (1 when nothing is drawn).
#[derive(Debug, Clone, Copy)]
pub struct Outcome {
    pub noise: Noise,
    pub quarters: u32,
    pub mass: f64,
}

impl Outcome {
    pub fn probability(&self) -> f64 {
        self.quarters as f64 / 4.0 * self.mass
    }
}

pub fn outcomes<M: Machine>(m: &M, s: &M::State) -> Vec<Outcome> {
    let mut out = Vec::new();
    for inc in Increment::ALL {
        match m.draw_needed(s, inc) {
            None => out.push(Outcome { noise: Noise::plain(inc), quarters: inc.quarters(), mass: 1.0 }),
            Some(b) => {
                for &(site, mass) in m.chain().law(b).support() {
                    out.push(Outcome {
                        noise: Noise { inc, draw: Some(site) },
                        quarters: inc.quarters(),
                        mass,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ReachReport {
    pub starts: usize,
    pub states: usize,
    pub transitions: usize,
    pub stages: BTreeSet<StageLabel>,
    pub edges: BTreeSet<(StageLabel, StageLabel)>,
    /// Lower position (working frame) at each entry into `S3`, with the stage
    /// it was entered from.
    pub s3_entries: BTreeMap<Site, BTreeSet<StageLabel>>,
    pub violation_count: usize,
    /// The first few violations, for diagnosis.
    pub violations: Vec<Violation>,
}

impl ReachReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn merge(&mut self, other: ReachReport) {
        self.starts += other.starts;
        self.states += other.states;
        self.transitions += other.transitions;
        self.stages.extend(other.stages);
        self.edges.extend(other.edges);
        for (site, from) in other.s3_entries {
            self.s3_entries.entry(site).or_default().extend(from);
        }
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < MAX_KEPT {
                self.violations.push(v);
            }
        }
    }
}

const MAX_KEPT: usize = 16;

/// Breadth-first search from `starts`; `visit` sees every reachable state.
pub fn explore<M: Machine>(
    m: &M,
    starts: Vec<M::State>,
    mut visit: impl FnMut(&M::State),
) -> ReachReport {
    let mut report = ReachReport { starts: starts.len(), ..Default::default() };
    let mut seen: HashSet<M::State> = HashSet::new();
    let mut queue = VecDeque::new();
    for s in starts {
        if seen.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        visit(&s);
        let stage = m.stage(&s);
        report.stages.insert(stage);
        if stage == StageLabel::Done {
            continue;
        }
        for o in outcomes(m, &s) {
            report.transitions += 1;
            let result = m.step(&s, o.noise).and_then(|next| {
                let to = m.stage(&next);
                let after = m.positions(&next);
                check_step(stage, to, after)
                    .map(|_| next)
                    .map_err(|message| Violation { stage, x: after.0, y: after.1, message })
            });
            match result {
                Ok(next) => {
                    let to = m.stage(&next);
                    if to != stage {
                        report.edges.insert((stage, to));
                    }
                    if to == StageLabel::S3 && (stage != StageLabel::S3 || m.frame_entry(&next).1 != m.frame_entry(&s).1) {
                        report.s3_entries.entry(m.frame_entry(&next).0).or_default().insert(stage);
                    }
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
                Err(v) => {
                    report.violation_count += 1;
                    if report.violations.len() < MAX_KEPT {
                        report.violations.push(v);
                    }
                }
            }
        }
    }
    report.states = seen.len();
    report
}

/// Exact `P(τ > t)` for `t = 0..=t_max` from a single machine state, by
/// evolving the law of the machine's state. Panics on a violation.
pub fn coupling_time_survival<M: Machine>(m: &M, start: M::State, t_max: usize) -> Vec<f64> {
    let mut index: HashMap<M::State, usize> = HashMap::new();
    let mut states = vec![start.clone()];
    index.insert(start, 0);
    let mut edges: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let s = states[i].clone();
        let mut out = Vec::new();
        if m.stage(&s) != StageLabel::Done {
            for o in outcomes(m, &s) {
                let next = m.step(&s, o.noise).unwrap_or_else(|v| panic!("{v}"));
                if m.stage(&next) == StageLabel::Done {
                    continue;
                }
                let j = *index.entry(next.clone()).or_insert_with(|| {
                    states.push(next);
                    states.len() - 1
                });
                out.push((j, o.probability()));
            }
        }
        edges.push(out);
        i += 1;
    }
    let mut law = vec![0.0; states.len()];
    if m.stage(&states[0]) != StageLabel::Done {
        law[0] = 1.0;
    }
    let mut next = vec![0.0; states.len()];
    let mut survival = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        survival.push(law.iter().sum::<f64>().min(1.0));
        if t == t_max {
            break;
        }
        next.iter_mut().for_each(|v| *v = 0.0);
        for (from, out) in edges.iter().enumerate() {
            let mass = law[from];
            if mass == 0.0 {
                continue;
            }
            for &(to, p) in out {
                next[to] += mass * p;
            }
        }
        std::mem::swap(&mut law, &mut next);
    }
    survival
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainSpec, PointMassSpec};
    use crate::coupling::{DetMachine, SymMachine};

    #[test]
    fn deterministic_machine_small_case() {
        let m = DetMachine::new(PointMassSpec::new(16, 5, 11).unwrap());
        let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).unwrap()).collect();
        let r = explore(&m, starts, |_| {});
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.stages.contains(&StageLabel::Done));
    }

    #[test]
    fn symmetric_machine_small_case() {
        let c = ChainSpec::from_sparse(16, &[(5, 0.5), (7, 0.5)], &[(5, 0.5), (7, 0.5)]).unwrap();
        let m = SymMachine::new(&c).unwrap();
        let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).unwrap()).collect();
        let r = explore(&m, starts, |_| {});
        assert!(r.passed(), "{:?}", r.violations);
        for s in StageLabel::SYMMETRIC {
            assert!(r.stages.contains(&s), "{s} unreachable");
        }
    }
}
