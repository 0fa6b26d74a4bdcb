//! The stage machine for a common random redistribution law `ν0 = νN = ν`.
//!
//! Starts with both copies in the upper half run in the reflected frame
//! `x ↦ N − x`, which also reflects every drawn site.
//!
//! Stages, with `d` the starting gap and `K` the site a copy lands on when
//! redistributed from `0`:
//!
//! * `R1a` rigid until the upper copy reaches `N/2`, or the lower copy is
//!   redistributed to `K` (then `R2a` from `(d − 1, K)`). For a pair that
//!   straddles `N/2`, rigid until the copies sit symmetrically about `N/2`
//!   (then `R3`), or either copy is redistributed (then `R2a`, in the
//!   reflected frame when the upper copy went).
//! * `R1b` reflection until the copies meet or the gap reaches `ρ`.
//! * `R1c` rigid until the upper copy reaches `(N + ρ)/2` (then `R3`), or the
//!   lower copy is redistributed to `K` (then `R2a` from `(ρ − 1, K)`).
//! * `R2a` reflection until the copies meet or the gap reaches `K + 1`.
//! * `R2b` rigid until the lower copy is redistributed, landing on the
//!   remembered `K` where the other copy arrives, or reaches `N/2 − (K+1)/2`.
//! * `R3` reflection of a pair symmetric about `N/2`: the copies meet in the
//!   middle or leave together and land on one shared draw.

use super::{regime_moves, CouplingError, Ext, Increment, Machine, Noise, Violation};
use crate::chain::{Boundary, ChainSpec, Site};
use crate::coupling::StageLabel::{self, *};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymState {
    pub stage: StageLabel,
    /// Copy `X`, in the working frame.
    pub x: Site,
    /// Copy `Y`, in the working frame.
    pub y: Site,
    /// Whether the working frame is the reflection `x ↦ N − x`.
    pub mirrored: bool,
    /// Whether `R1a` runs the straddling variant.
    pub straddle: bool,
    /// The remembered landing site `K`, in the working frame.
    pub k: Option<Site>,
}

#[derive(Debug, Clone)]
pub struct SymMachine {
    chain: ChainSpec,
    n: usize,
    rho: usize,
}

impl SymMachine {
    pub fn new(chain: &ChainSpec) -> Result<Self, CouplingError> {
        chain.validate()?;
        if !chain.has_equal_laws() {
            return Err(CouplingError::UnequalLaws);
        }
        Ok(SymMachine {
            chain: chain.clone(),
            n: chain.n(),
            rho: chain.rho(),
        })
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    fn half(&self) -> Site {
        self.n / 2
    }

    fn frame(&self, s: Site, mirrored: bool) -> Site {
        if mirrored {
            self.n - s
        } else {
            s
        }
    }

    /// Original-coordinate boundary behind a frame exit.
    fn boundary(&self, e: Ext, mirrored: bool) -> Boundary {
        match (e, mirrored) {
            (Ext::ExitLeft, false) | (Ext::ExitRight, true) => Boundary::Left,
            _ => Boundary::Right,
        }
    }

    /// Starting pairs: an even gap in `(0, ρ]`.
    pub fn check_domain(&self, x: Site, y: Site) -> Result<(), String> {
        if x > self.n || y > self.n {
            return Err(format!("sites must lie in 0..={}", self.n));
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

    fn entry_at_half(&self, d: usize) -> StageLabel {
        if d == self.rho {
            R1c
        } else {
            R1b
        }
    }

    /// Initial state for `(x, y)` in original coordinates.
    pub fn start(&self, x: Site, y: Site) -> Result<SymState, String> {
        self.check_domain(x, y)?;
        let h = self.half();
        let (lo, hi) = (x.min(y), x.max(y));
        let d = hi - lo;
        let mirrored = lo >= h && hi > h;
        let (fx, fy) = (self.frame(x, mirrored), self.frame(y, mirrored));
        let (flo, fhi) = (fx.min(fy), fx.max(fy));
        let straddle = flo < h && fhi > h;
        let stage = if d == 0 {
            Done
        } else if straddle {
            if flo + fhi == self.n {
                R3
            } else {
                R1a
            }
        } else if fhi == h {
            self.entry_at_half(d)
        } else {
            R1a
        };
        Ok(SymState { stage, x: fx, y: fy, mirrored, straddle, k: None })
    }

    pub fn domain_pairs(&self) -> Vec<(Site, Site)> {
        let mut out = Vec::new();
        for x in 0..=self.n {
            for y in x + 2..=self.n {
                if self.check_domain(x, y).is_ok() {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn moves(&self, s: &SymState, inc: Increment) -> Option<(Ext, Ext)> {
        let regime = s.stage.regime()?;
        let (lo, hi) = (s.x.min(s.y), s.x.max(s.y));
        Some(regime_moves(regime, lo, hi, inc, self.n))
    }
}

impl Machine for SymMachine {
    type State = SymState;

    fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    fn stage(&self, s: &SymState) -> StageLabel {
        s.stage
    }

    fn positions(&self, s: &SymState) -> (Site, Site) {
        (self.frame(s.x, s.mirrored), self.frame(s.y, s.mirrored))
    }

    fn frame_entry(&self, s: &SymState) -> (Site, usize) {
        (s.x.min(s.y), s.x.abs_diff(s.y))
    }

    fn draw_needed(&self, s: &SymState, inc: Increment) -> Option<Boundary> {
        let (mlo, mhi) = self.moves(s, inc)?;
        let fresh = match s.stage {
            R1a if s.straddle => {
                if mlo.is_exit() {
                    Some(mlo)
                } else if mhi.is_exit() {
                    Some(mhi)
                } else {
                    None
                }
            }
            R1a | R1c if mlo.is_exit() => Some(mlo),
            R3 if mlo.is_exit() && mhi.is_exit() => Some(mlo),
            _ => None,
        };
        fresh.map(|e| self.boundary(e, s.mirrored))
    }

    fn uses_memory(&self, s: &SymState, noise: Noise) -> bool {
        s.stage == R2b && self.moves(s, noise.inc).is_some_and(|(mlo, _)| mlo.is_exit())
    }

    fn step(&self, s: &SymState, noise: Noise) -> Result<SymState, Violation> {
        let stage = s.stage;
        let Some((mlo, mhi)) = self.moves(s, noise.inc) else {
            return Ok(s.clone());
        };
        let (n, h, rho) = (self.n, self.half(), self.rho);
        let x_is_lo = s.x <= s.y;
        let fail = |message: String| Violation {
            stage,
            x: self.frame(s.x, s.mirrored),
            y: self.frame(s.y, s.mirrored),
            message,
        };
        let drawn = |what: &str| -> Result<Site, Violation> {
            noise
                .draw
                .map(|k| self.frame(k, s.mirrored))
                .ok_or_else(|| fail(format!("{what} needs a redistribution draw")))
        };
        let place = |nlo: Site, nhi: Site| if x_is_lo { (nlo, nhi) } else { (nhi, nlo) };
        let mut next = s.clone();
        let sites = (mlo.site(), mhi.site());
        match stage {
            R1a if s.straddle => match (mlo, mhi) {
                (Ext::ExitLeft, Ext::Site(other)) => {
                    let k = drawn("R1a")?;
                    (next.x, next.y) = place(k, other);
                    next.k = Some(k);
                    next.stage = R2a;
                }
                (Ext::Site(other), Ext::ExitRight) => {
                    // The upper copy left through N: continue in the
                    // reflected frame, where it left through 0.
                    let k = n - drawn("R1a")?;
                    let other = n - other;
                    next.mirrored = !s.mirrored;
                    (next.x, next.y) = place(other, k);
                    next.k = Some(k);
                    next.stage = R2a;
                }
                (Ext::Site(a), Ext::Site(b)) => {
                    (next.x, next.y) = place(a, b);
                    next.stage = if a + b == n { R3 } else { R1a };
                }
                _ => return Err(fail("unexpected redistribution".into())),
            },
            R1a | R1c => match (mlo, mhi) {
                (Ext::ExitLeft, Ext::Site(other)) => {
                    let k = drawn("lower exit")?;
                    if other >= k {
                        return Err(fail(format!("landing site {k} not above the other copy {other}")));
                    }
                    (next.x, next.y) = place(k, other);
                    next.k = Some(k);
                    next.stage = R2a;
                }
                (Ext::Site(a), Ext::Site(b)) => {
                    (next.x, next.y) = place(a, b);
                    next.stage = if stage == R1a {
                        if b == h {
                            self.entry_at_half(b - a)
                        } else if b < h {
                            R1a
                        } else {
                            return Err(fail("upper copy passed N/2".into()));
                        }
                    } else if b == (n + rho) / 2 {
                        if a + b != n {
                            return Err(fail("R1c ended off the symmetric line".into()));
                        }
                        R3
                    } else {
                        R1c
                    };
                }
                _ => return Err(fail("upper copy redistributed".into())),
            },
            R1b => {
                let (Some(a), Some(b)) = sites else {
                    return Err(fail("redistribution before the gap reached rho".into()));
                };
                (next.x, next.y) = place(a, b);
                let gap = a.abs_diff(b);
                next.stage = if gap == 0 {
                    Done
                } else if gap == rho {
                    R1c
                } else if gap < rho {
                    R1b
                } else {
                    return Err(fail(format!("gap {gap} passed rho")));
                };
            }
            R2a => {
                let (Some(a), Some(b)) = sites else {
                    return Err(fail("redistribution while closing on K".into()));
                };
                let k = s.k.ok_or_else(|| fail("no remembered K".into()))?;
                (next.x, next.y) = place(a, b);
                let gap = a.abs_diff(b);
                next.stage = if gap == 0 {
                    Done
                } else if gap == k + 1 {
                    R2b
                } else if gap < k + 1 {
                    R2a
                } else {
                    return Err(fail(format!("gap {gap} passed K + 1")));
                };
            }
            R2b => {
                let k = s.k.ok_or_else(|| fail("no remembered K".into()))?;
                match (mlo, mhi) {
                    (Ext::ExitLeft, Ext::Site(other)) => {
                        if other != k {
                            return Err(fail(format!("landing on K = {k} missed the other copy at {other}")));
                        }
                        (next.x, next.y) = (k, k);
                        next.stage = Done;
                    }
                    (Ext::Site(a), Ext::Site(b)) => {
                        (next.x, next.y) = place(a, b);
                        let target = h - (k + 1) / 2;
                        next.stage = if a == target {
                            R3
                        } else if a < target {
                            R2b
                        } else {
                            return Err(fail("lower copy passed its target".into()));
                        };
                    }
                    _ => return Err(fail("upper copy redistributed".into())),
                }
            }
            R3 => match (mlo, mhi) {
                (Ext::ExitLeft, Ext::ExitRight) => {
                    let k = drawn("R3")?;
                    (next.x, next.y) = (k, k);
                    next.stage = Done;
                }
                (Ext::Site(a), Ext::Site(b)) => {
                    if a + b != n {
                        return Err(fail("pair left the symmetric line".into()));
                    }
                    (next.x, next.y) = place(a, b);
                    next.stage = if a == b { Done } else { R3 };
                }
                _ => return Err(fail("only one copy redistributed".into())),
            },
            _ => return Err(fail(format!("stage {stage} does not belong to this machine"))),
        }
        if next.stage == Done {
            next.k = None;
        }
        Ok(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machine(nu: &[(i64, f64)]) -> SymMachine {
        SymMachine::new(&ChainSpec::from_sparse(16, nu, nu).unwrap()).unwrap()
    }

    #[test]
    fn start_stages() {
        let m = machine(&[(5, 1.0)]);
        assert_eq!(m.rho(), 4);
        assert_eq!(m.start(2, 4).unwrap().stage, R1a);
        assert_eq!(m.start(6, 8).unwrap().stage, R1b);
        assert_eq!(m.start(4, 8).unwrap().stage, R1c);
        assert_eq!(m.start(6, 10).unwrap().stage, R3);
        assert_eq!(m.start(7, 9).unwrap().stage, R3);
        let s = m.start(8, 10).unwrap();
        assert!(s.mirrored);
        assert_eq!(s.stage, R1b);
        assert!(m.start(3, 5).unwrap().stage == R1a);
        assert!(m.start(2, 8).is_err());
        let s = m.start(5, 9).unwrap();
        assert!(s.straddle && s.stage == R1a);
    }

    #[test]
    fn unequal_laws_rejected() {
        let c = ChainSpec::from_sparse(16, &[(5, 1.0)], &[(7, 1.0)]).unwrap();
        assert!(matches!(SymMachine::new(&c), Err(CouplingError::UnequalLaws)));
    }

    #[test]
    fn r2b_lands_on_remembered_site() {
        let m = machine(&[(5, 0.5), (7, 0.5)]);
        let s = SymState { stage: R2b, x: 0, y: 8, mirrored: false, straddle: false, k: Some(7) };
        assert!(m.draw_needed(&s, Increment::Down).is_none());
        assert!(m.uses_memory(&s, Noise::plain(Increment::Down)));
        let next = m.step(&s, Noise::plain(Increment::Down)).unwrap();
        assert_eq!((next.stage, next.x, next.y), (Done, 7, 7));
    }

    #[test]
    fn r3_leaves_together() {
        let m = machine(&[(5, 0.5), (7, 0.5)]);
        let s = SymState { stage: R3, x: 16, y: 0, mirrored: false, straddle: false, k: None };
        assert_eq!(m.draw_needed(&s, Increment::Down), Some(Boundary::Left));
        let next = m.step(&s, Noise { inc: Increment::Down, draw: Some(7) }).unwrap();
        assert_eq!((next.stage, next.x, next.y), (Done, 7, 7));
    }
}
