//! Odd gaps: the two-coin step that makes a gap even, and the chain of
//! intermediate sites that splits an arbitrary pair into small gaps.

use rand::Rng;

use super::{Ext, Increment, Samplers};
use crate::chain::{Boundary, ChainSpec, Site};

/// The two fair coins of the parity-fix step: which copy moves, and where.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParityCoins {
    pub move_y: bool,
    pub right: bool,
}

impl ParityCoins {
    pub const ALL: [ParityCoins; 4] = [
        ParityCoins { move_y: false, right: false },
        ParityCoins { move_y: false, right: true },
        ParityCoins { move_y: true, right: false },
        ParityCoins { move_y: true, right: true },
    ];

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        ParityCoins {
            move_y: rng.gen(),
            right: rng.gen(),
        }
    }

    fn increment(self) -> Increment {
        if self.right {
            Increment::Up
        } else {
            Increment::Down
        }
    }

    /// Where the moving copy goes; `None` for a redistribution.
    pub fn target(self, chain: &ChainSpec, x: Site, y: Site) -> (Ext, bool) {
        let mover = if self.move_y { y } else { x };
        (Ext::shift(mover, self.increment(), chain.n()), self.move_y)
    }

    pub fn apply<R: Rng + ?Sized>(
        self,
        chain: &ChainSpec,
        x: Site,
        y: Site,
        samplers: &Samplers,
        rng: &mut R,
    ) -> (Site, Site) {
        let (ext, move_y) = self.target(chain, x, y);
        let site = match ext {
            Ext::Site(s) => s,
            Ext::ExitLeft => samplers.sample(Boundary::Left, rng),
            Ext::ExitRight => samplers.sample(Boundary::Right, rng),
        };
        if move_y {
            (x, site)
        } else {
            (site, y)
        }
    }
}

/// Every outcome `(x', y', probability)` of the parity-fix step, with
/// redistributions expanded over the law's support.
pub fn parity_fix_outcomes(chain: &ChainSpec, x: Site, y: Site) -> Vec<(Site, Site, f64)> {
    let mut out = Vec::new();
    for coins in ParityCoins::ALL {
        let (ext, move_y) = coins.target(chain, x, y);
        let place = |s: Site| if move_y { (x, s) } else { (s, y) };
        match ext {
            Ext::Site(s) => {
                let (a, b) = place(s);
                out.push((a, b, 0.25));
            }
            Ext::ExitLeft | Ext::ExitRight => {
                let law = if ext == Ext::ExitLeft { chain.nu0() } else { chain.nun() };
                for &(s, m) in law.support() {
                    let (a, b) = place(s);
                    out.push((a, b, 0.25 * m));
                }
            }
        }
    }
    out
}

/// Sites `x = x₀ < x₁ < … < x_n = y`: as many gaps of `ρ` as fit, then the
/// remainder, with an odd remainder `b > 1` split into `b − 1` and `1`.
pub fn decompose_pair(x: Site, y: Site, rho: usize) -> Vec<Site> {
    assert!(x < y && rho >= 2 && rho % 2 == 0);
    let d = y - x;
    let mut sites = vec![x];
    let mut cur = x;
    for _ in 0..d / rho {
        cur += rho;
        sites.push(cur);
    }
    let b = d % rho;
    if b % 2 == 1 && b > 1 {
        cur += b - 1;
        sites.push(cur);
    }
    if cur < y {
        sites.push(y);
    }
    sites
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainSpec;

    fn spec() -> ChainSpec {
        ChainSpec::from_sparse(16, &[(5, 1.0)], &[(11, 1.0)]).unwrap()
    }

    fn gaps(sites: &[Site]) -> Vec<usize> {
        sites.windows(2).map(|w| w[1] - w[0]).collect()
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(gaps(&decompose_pair(2, 6, 4)), vec![4]);
        assert_eq!(gaps(&decompose_pair(0, 10, 4)), vec![4, 4, 2]);
        assert_eq!(gaps(&decompose_pair(0, 5, 4)), vec![4, 1]);
        assert_eq!(gaps(&decompose_pair(0, 7, 4)), vec![4, 2, 1]);
        assert_eq!(gaps(&decompose_pair(3, 4, 4)), vec![1]);
        assert_eq!(gaps(&decompose_pair(0, 3, 4)), vec![2, 1]);
    }

    #[test]
    fn parity_fix_examples() {
        let s = spec();
        let out = parity_fix_outcomes(&s, 4, 5);
        assert!(out.contains(&(5, 5, 0.25)));
        let out = parity_fix_outcomes(&s, 0, 1);
        assert!(out.contains(&(5, 1, 0.25)));
        for (a, b, _) in parity_fix_outcomes(&s, 16, 15) {
            assert_eq!(a.abs_diff(b) % 2, 0);
        }
        let total: f64 = parity_fix_outcomes(&s, 0, 1).iter().map(|o| o.2).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }
}
