//! The stage machine for point-mass redistribution `ν0 = δ_{J0}`, `νN = δ_{JN}`.
//!
//! The machine works in a frame where `J0 ≤ N − JN`, reflecting the chain
//! through `x ↦ N − x` when needed. With `D` the gap and `X̄` the lower copy,
//! the symmetric points are `ℓ0(D) = (J0 − 1 − D)/2` and
//! `ℓN(D) = (N + 1 + JN − D)/2`: reflecting from either one ends in
//! coalescence, possibly at the instant of a redistribution.

use super::{regime_moves, Ext, Increment, Machine, Noise, Violation};
use crate::chain::{Boundary, ChainSpec, PointMassSpec, Site};
use crate::coupling::StageLabel::{self, *};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DetState {
    pub stage: StageLabel,
    /// Copy `X`, in the working frame.
    pub x: Site,
    /// Copy `Y`, in the working frame.
    pub y: Site,
}

#[derive(Debug, Clone)]
pub struct DetMachine {
    original: PointMassSpec,
    frame: PointMassSpec,
    mirrored: bool,
    chain: ChainSpec,
    rho: usize,
}

impl DetMachine {
    pub fn new(spec: PointMassSpec) -> Self {
        let mirrored = spec.j0 > spec.n - spec.jn;
        let frame = if mirrored { spec.mirrored() } else { spec };
        let chain = spec.to_chain_spec().expect("valid point-mass spec");
        DetMachine {
            original: spec,
            frame,
            mirrored,
            rho: chain.rho(),
            chain,
        }
    }

    pub fn spec(&self) -> PointMassSpec {
        self.original
    }

    /// The spec in the working frame, where `J0 ≤ N − JN`.
    pub fn frame_spec(&self) -> PointMassSpec {
        self.frame
    }

    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    fn to_frame(&self, s: Site) -> Site {
        if self.mirrored {
            self.frame.n - s
        } else {
            s
        }
    }

    pub fn ell0(&self, d: usize) -> i64 {
        (self.frame.j0 as i64 - 1 - d as i64) / 2
    }

    pub fn elln(&self, d: usize) -> i64 {
        (self.frame.n as i64 + 1 + self.frame.jn as i64 - d as i64) / 2
    }

    /// Stage of a configuration with lower copy at `lo` and gap `d > 0`.
    pub fn classify(&self, lo: Site, d: usize) -> StageLabel {
        let lo = lo as i64;
        let (l0, ln) = (self.ell0(d), self.elln(d));
        if d < self.frame.j0 {
            if lo == l0 || lo == ln {
                S1
            } else if lo < l0 {
                S2b
            } else if lo > ln {
                S2c
            } else {
                S2a
            }
        } else if lo == ln {
            S1
        } else if lo < ln {
            S3
        } else {
            S4
        }
    }

    /// Starting pairs: an even gap in `(0, ρ]`.
    pub fn check_domain(&self, x: Site, y: Site) -> Result<(), String> {
        let n = self.frame.n;
        if x > n || y > n {
            return Err(format!("sites must lie in 0..={n}"));
        }
        let d = x.abs_diff(y);
        if d % 2 != 0 {
            return Err(format!("gap {d} is odd"));
        }
        if d > self.rho {
            return Err(format!("gap {d} exceeds rho = {}", self.rho));
        }
        Ok(())
    }

    /// Initial state for `(x, y)` in original coordinates.
    pub fn start(&self, x: Site, y: Site) -> Result<DetState, String> {
        self.check_domain(x, y)?;
        let (fx, fy) = (self.to_frame(x), self.to_frame(y));
        let stage = if fx == fy {
            Done
        } else {
            self.classify(fx.min(fy), fx.abs_diff(fy))
        };
        Ok(DetState { stage, x: fx, y: fy })
    }

    /// Every start pair the machine accepts, in original coordinates.
    pub fn domain_pairs(&self) -> Vec<(Site, Site)> {
        let n = self.frame.n;
        let mut out = Vec::new();
        for x in 0..=n {
            for y in x + 2..=n {
                if self.check_domain(x, y).is_ok() {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn land(&self, e: Ext) -> Site {
        match e {
            Ext::Site(s) => s,
            Ext::ExitLeft => self.frame.j0,
            Ext::ExitRight => self.frame.jn,
        }
    }
}

impl Machine for DetMachine {
    type State = DetState;

    fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    fn stage(&self, s: &DetState) -> StageLabel {
        s.stage
    }

    fn positions(&self, s: &DetState) -> (Site, Site) {
        (self.to_frame(s.x), self.to_frame(s.y))
    }

    fn frame_entry(&self, s: &DetState) -> (Site, usize) {
        (s.x.min(s.y), s.x.abs_diff(s.y))
    }

    fn draw_needed(&self, _: &DetState, _: Increment) -> Option<Boundary> {
        None
    }

    fn step(&self, s: &DetState, noise: Noise) -> Result<DetState, Violation> {
        let stage = s.stage;
        let Some(regime) = stage.regime() else {
            return Ok(s.clone());
        };
        let (n, j0, jn) = (self.frame.n, self.frame.j0, self.frame.jn);
        let x_is_lo = s.x <= s.y;
        let (lo, hi) = (s.x.min(s.y), s.x.max(s.y));
        let d = hi - lo;
        let (mlo, mhi) = regime_moves(regime, lo, hi, noise.inc, n);
        let (nlo, nhi) = (self.land(mlo), self.land(mhi));
        let (nx, ny) = if x_is_lo { (nlo, nhi) } else { (nhi, nlo) };
        let fail = |message: String| Violation {
            stage,
            x: self.to_frame(s.x),
            y: self.to_frame(s.y),
            message,
        };
        let (new_lo, new_d) = (nlo.min(nhi), nlo.abs_diff(nhi));
        let l0 = self.ell0(d);
        let ln = self.elln(d);
        let next = match stage {
            S1 => {
                if mlo.is_exit() && mhi.is_exit() {
                    return Err(fail("both copies redistributed".into()));
                }
                if mlo.is_exit() && (mlo != Ext::ExitLeft || mhi != Ext::Site(j0)) {
                    return Err(fail(format!(
                        "lower copy redistributed while the upper copy moved to {:?}, not J0 = {j0}",
                        mhi
                    )));
                }
                if mhi.is_exit() && (mhi != Ext::ExitRight || mlo != Ext::Site(jn)) {
                    return Err(fail(format!(
                        "upper copy redistributed while the lower copy moved to {:?}, not JN = {jn}",
                        mlo
                    )));
                }
                if new_d == 0 {
                    Done
                } else {
                    S1
                }
            }
            S2a => {
                if mlo.is_exit() || mhi.is_exit() {
                    return Err(fail("redistribution between the symmetric points".into()));
                }
                let p = nlo as i64;
                if p == l0 || p == ln {
                    S1
                } else if p > l0 && p < ln {
                    S2a
                } else {
                    return Err(fail(format!("lower copy jumped past a symmetric point to {p}")));
                }
            }
            S2b => {
                if mhi.is_exit() {
                    return Err(fail("upper copy redistributed".into()));
                }
                if mlo.is_exit() {
                    if mlo != Ext::ExitLeft {
                        return Err(fail("lower copy left through N".into()));
                    }
                    let expected = j0 as i64 + 1 - d as i64;
                    if new_d as i64 != expected || new_d % 2 != 0 || new_d == 0 || new_d >= j0 {
                        return Err(fail(format!("new gap {new_d}, expected {expected} in (0, J0)")));
                    }
                    // From a start with D ≤ ρ this lands strictly between the
                    // symmetric points. A re-entry from S4 with a large gap
                    // can land on or beyond lN instead.
                    let next = self.classify(new_lo, new_d);
                    if !matches!(next, S1 | S2a | S2c) {
                        return Err(fail(format!("redistribution led to {next}")));
                    }
                    next
                } else {
                    let p = nlo as i64;
                    if p == l0 {
                        S1
                    } else if p < l0 {
                        S2b
                    } else {
                        return Err(fail(format!("lower copy jumped past l0 to {p}")));
                    }
                }
            }
            S2c => {
                if mlo.is_exit() {
                    return Err(fail("lower copy redistributed".into()));
                }
                if mhi.is_exit() {
                    if mhi != Ext::ExitRight {
                        return Err(fail("upper copy left through 0".into()));
                    }
                    let expected = n as i64 + 1 - d as i64 - jn as i64;
                    if new_d as i64 != expected || new_d == 0 {
                        return Err(fail(format!("new gap {new_d}, expected {expected}")));
                    }
                    let next = self.classify(new_lo, new_d);
                    let ok = if new_d >= j0 { next == S3 } else { matches!(next, S1 | S2a) };
                    if !ok {
                        return Err(fail(format!("redistribution led to {next} with gap {new_d}")));
                    }
                    next
                } else {
                    let p = nlo as i64;
                    if p == ln {
                        S1
                    } else if p > ln {
                        S2c
                    } else {
                        return Err(fail(format!("lower copy jumped past lN to {p}")));
                    }
                }
            }
            S3 => {
                if mhi.is_exit() {
                    return Err(fail("upper copy redistributed".into()));
                }
                if mlo.is_exit() {
                    if mlo != Ext::ExitLeft {
                        return Err(fail("lower copy left through N".into()));
                    }
                    let expected = d as i64 - 1 - j0 as i64;
                    if new_d as i64 != expected.abs() || expected < 0 {
                        return Err(fail(format!("new gap {new_d}, expected {expected}")));
                    }
                    if new_d == 0 {
                        Done
                    } else {
                        let l = self.elln(new_d);
                        let j = j0 as i64;
                        if j > l {
                            S4
                        } else if j == l {
                            S1
                        } else if new_d < j0 {
                            S2a
                        } else {
                            S3
                        }
                    }
                } else {
                    let p = nlo as i64;
                    if p == ln {
                        S1
                    } else if p < ln {
                        S3
                    } else {
                        return Err(fail(format!("lower copy jumped past lN to {p}")));
                    }
                }
            }
            S4 => {
                if mlo.is_exit() {
                    return Err(fail("lower copy redistributed".into()));
                }
                if mhi.is_exit() {
                    if mhi != Ext::ExitRight {
                        return Err(fail("upper copy left through 0".into()));
                    }
                    if new_d == 0 {
                        Done
                    } else {
                        if new_d >= j0 {
                            return Err(fail(format!("new gap {new_d} is not below J0 = {j0}")));
                        }
                        let next = self.classify(new_lo, new_d);
                        if !matches!(next, S1 | S2a | S2b) {
                            return Err(fail(format!("redistribution led to {next}")));
                        }
                        next
                    }
                } else if new_d == 0 {
                    Done
                } else {
                    S4
                }
            }
            _ => return Err(fail(format!("stage {stage} does not belong to this machine"))),
        };
        Ok(DetState { stage: next, x: nx, y: ny })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machine(n: usize, j0: usize, jn: usize) -> DetMachine {
        DetMachine::new(PointMassSpec::new(n, j0, jn).unwrap())
    }

    #[test]
    fn frame_normalization() {
        assert!(!machine(16, 13, 3).is_mirrored());
        let m = machine(16, 13, 5);
        assert!(m.is_mirrored());
        assert_eq!((m.frame_spec().j0, m.frame_spec().jn), (11, 3));
        assert!(!machine(16, 5, 11).is_mirrored());
    }

    #[test]
    fn symmetric_points_and_classification() {
        let m = machine(16, 5, 11);
        assert_eq!(m.ell0(2), 1);
        assert_eq!(m.elln(2), 13);
        assert_eq!(m.classify(1, 2), S1);
        assert_eq!(m.classify(13, 2), S1);
        assert_eq!(m.classify(0, 2), S2b);
        assert_eq!(m.classify(4, 2), S2a);
        assert_eq!(m.classify(14, 2), S2c);
        assert_eq!(m.start(1, 3).unwrap().stage, S1);
        assert_eq!(m.start(6, 8).unwrap().stage, S2a);
        assert!(m.start(2, 7).is_err());
        assert!(m.start(2, 8).is_err());
        assert!(m.start(2, 6).is_ok());
    }

    #[test]
    fn stage_one_boundary_meeting() {
        // Lower copy at 0, upper at J0 - 1: reflecting a step down sends the
        // lower copy to J0 just as the upper copy arrives there.
        let m = machine(16, 5, 11);
        let s = DetState { stage: S1, x: 0, y: 4 };
        let next = m.step(&s, Noise::plain(Increment::Down)).unwrap();
        assert_eq!(next, DetState { stage: Done, x: 5, y: 5 });
    }

    #[test]
    fn stage_2b_redistribution() {
        let m = machine(16, 5, 11);
        let s = DetState { stage: S2b, x: 0, y: 2 };
        let next = m.step(&s, Noise::plain(Increment::Down)).unwrap();
        assert_eq!((next.x, next.y), (5, 1));
        assert_eq!(next.stage, S2a);
    }
}
