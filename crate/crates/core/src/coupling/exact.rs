//! Exact marginal checks in rational arithmetic: summing the probabilities of
//! every shared-randomness outcome must give back each copy's transition row.
//!
//! Redistribution masses are read as the simplest fractions within rounding
//! of their `f64` values (`1/3` rather than its binary expansion), so that a
//! law given as thirds sums to exactly one.

use num_rational::{Ratio, Rational64};
use num_traits::{One, Zero};
use serde::Serialize;

use super::reach::{explore, outcomes};
use super::{regime_moves, ParityCoins, Ext, Increment, Machine, Regime};
use crate::chain::{ChainSpec, Law, Site};

type Q = Ratio<i128>;

/// The simplest fraction within rounding of `x`.
pub fn rational(x: f64) -> Q {
    let r = Rational64::approximate_float(x).expect("representable probability");
    Q::new(*r.numer() as i128, *r.denom() as i128)
}

fn quarters(q: u32) -> Q {
    Q::new(q as i128, 4)
}

fn rational_law(law: &Law) -> Vec<(Site, Q)> {
    law.support().iter().map(|&(s, m)| (s, rational(m))).collect()
}

/// Row `p(x, ·)` in rationals, built from the kernel's definition.
pub fn rational_row(chain: &ChainSpec, x: Site) -> Vec<Q> {
    let n = chain.n();
    let mut row = zeros(n);
    row[x] += Q::new(1, 2);
    for (e, law) in [
        (Ext::shift(x, Increment::Down, n), chain.nu0()),
        (Ext::shift(x, Increment::Up, n), chain.nun()),
    ] {
        match e {
            Ext::Site(s) => row[s] += quarters(1),
            _ => {
                for (s, m) in rational_law(law) {
                    row[s] += quarters(1) * m;
                }
            }
        }
    }
    row
}

/// Whether the floating-point row agrees with the rational one to `1e-15`
/// and both laws sum to exactly one in rationals.
pub fn rows_consistent(chain: &ChainSpec) -> bool {
    let sums_ok = [chain.nu0(), chain.nun()]
        .iter()
        .all(|law| rational_law(law).iter().fold(Q::zero(), |acc, (_, m)| acc + m) == Q::one());
    sums_ok
        && (0..=chain.n()).all(|x| {
            let row = chain.transition_row(x).expect("site in range");
            rational_row(chain, x)
                .iter()
                .zip(row.as_slice())
                .all(|(q, &f)| ((*q.numer() as f64) / (*q.denom() as f64) - f).abs() <= 1e-15)
        })
}

fn zeros(n: usize) -> Vec<Q> {
    vec![Q::zero(); n + 1]
}

/// Adds `weight` times the landing law of `e` to `acc`.
fn add_landing(acc: &mut [Q], e: Ext, weight: &Q, nu0: &Law, nun: &Law) {
    match e {
        Ext::Site(s) => acc[s] += weight,
        Ext::ExitLeft | Ext::ExitRight => {
            let law = if e == Ext::ExitLeft { nu0 } else { nun };
            for (s, m) in rational_law(law) {
                acc[s] += weight * m;
            }
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ExactReport {
    pub cases: usize,
    pub mismatches: usize,
    /// States left out because a copy's move used remembered state.
    pub memory_states: usize,
    pub first_mismatch: Option<String>,
}

impl ExactReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.cases > 0
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.mismatches += 1;
            if self.first_mismatch.is_none() {
                self.first_mismatch = Some(what());
            }
        }
    }

    pub fn merge(&mut self, other: ExactReport) {
        self.cases += other.cases;
        self.mismatches += other.mismatches;
        self.memory_states += other.memory_states;
        if self.first_mismatch.is_none() {
            self.first_mismatch = other.first_mismatch;
        }
    }
}

/// Both regimes and the parity-fix step, at every ordered pair of sites.
pub fn check_regimes(chain: &ChainSpec) -> ExactReport {
    let n = chain.n();
    let rows: Vec<Vec<Q>> = (0..=n).map(|x| rational_row(chain, x)).collect();
    let mut report = ExactReport::default();
    report.record(rows_consistent(chain), || "rational rows disagree with transition_row".into());
    for lo in 0..=n {
        for hi in lo..=n {
            for regime in [Regime::Rigid, Regime::Ref] {
                let mut lo_law = zeros(n);
                let mut hi_law = zeros(n);
                for inc in Increment::ALL {
                    let (mlo, mhi) = regime_moves(regime, lo, hi, inc, n);
                    let w = quarters(inc.quarters());
                    add_landing(&mut lo_law, mlo, &w, chain.nu0(), chain.nun());
                    add_landing(&mut hi_law, mhi, &w, chain.nu0(), chain.nun());
                }
                report.record(lo_law == rows[lo] && hi_law == rows[hi], || {
                    format!("{regime:?} at ({lo}, {hi})")
                });
            }
            let mut x_law = zeros(n);
            let mut y_law = zeros(n);
            for coins in ParityCoins::ALL {
                let (e, move_y) = coins.target(chain, lo, hi);
                let w = quarters(1);
                let (mover, stayer, still) = if move_y {
                    (&mut y_law, &mut x_law, lo)
                } else {
                    (&mut x_law, &mut y_law, hi)
                };
                add_landing(mover, e, &w, chain.nu0(), chain.nun());
                stayer[still] += w;
            }
            report.record(x_law == rows[lo] && y_law == rows[hi], || {
                format!("parity fix at ({lo}, {hi})")
            });
        }
    }
    report
}

/// Every state a machine reaches from `starts`: each copy's one-step law,
/// summed over all outcomes, must equal its transition row.
pub fn check_machine<M: Machine>(m: &M, starts: Vec<M::State>) -> ExactReport {
    let chain = m.chain().clone();
    let n = chain.n();
    let rows: Vec<Vec<Q>> = (0..=n).map(|x| rational_row(&chain, x)).collect();
    let mut report = ExactReport::default();
    report.record(rows_consistent(&chain), || "rational rows disagree with transition_row".into());
    explore(m, starts, |s| {
        if m.stage(s) == super::StageLabel::Done {
            return;
        }
        let outs = outcomes(m, s);
        if outs.iter().any(|o| m.uses_memory(s, o.noise)) {
            report.memory_states += 1;
            return;
        }
        let (px, py) = m.positions(s);
        let mut x_law = zeros(n);
        let mut y_law = zeros(n);
        for o in &outs {
            let Ok(next) = m.step(s, o.noise) else { continue };
            let (nx, ny) = m.positions(&next);
            let w = quarters(o.quarters) * rational(o.mass);
            x_law[nx] += &w;
            y_law[ny] += &w;
        }
        report.record(x_law == rows[px] && y_law == rows[py], || {
            format!("{} at ({px}, {py}): {s:?}", m.stage(s))
        });
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::PointMassSpec;
    use crate::coupling::{DetMachine, SymMachine};

    #[test]
    fn regimes_are_exact() {
        let c = ChainSpec::from_sparse(16, &[(3, 1.0 / 3.0), (5, 1.0 / 3.0), (7, 1.0 / 3.0)], &[(11, 0.25), (9, 0.75)])
            .unwrap();
        let r = check_regimes(&c);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn broken_row_is_caught() {
        let c = ChainSpec::from_sparse(16, &[(5, 1.0)], &[(11, 1.0)]).unwrap();
        let mut row = rational_row(&c, 0);
        row[5] = Q::new(1, 8);
        assert_ne!(row, rational_row(&c, 0));
    }

    #[test]
    fn machines_are_exact() {
        let m = DetMachine::new(PointMassSpec::new(16, 13, 3).unwrap());
        let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).unwrap()).collect();
        let r = check_machine(&m, starts);
        assert!(r.passed(), "{r:?}");
        let c = ChainSpec::symmetric(16, {
            let mut v = vec![0.0; 17];
            v[5] = 0.5;
            v[7] = 0.5;
            v
        })
        .unwrap();
        let m = SymMachine::new(&c).unwrap();
        let starts = m.domain_pairs().into_iter().map(|(x, y)| m.start(x, y).unwrap()).collect();
        let r = check_machine(&m, starts);
        assert!(r.passed(), "{r:?}");
        assert!(r.memory_states > 0);
    }
}
