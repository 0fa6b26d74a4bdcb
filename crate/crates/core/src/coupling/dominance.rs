//! Exit times from `{1, …, L}`: a coupling of the walk started at `z` with the
//! walk started at a center under which the first never leaves later.

use rand::Rng;

use super::{Increment, ParityCoins};

/// Paired exit times: `t` from `z`, `t_center` from the center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExitPair {
    pub t: u64,
    pub t_center: u64,
}

/// The center used against `z`: `(L+1)/2` for odd `L`, and for even `L`
/// whichever of `L/2`, `L/2 + 1` is an even distance from `z` after folding
/// `z` into the lower half.
pub fn dominance_center(l: usize, z: usize) -> usize {
    assert!((1..=l).contains(&z));
    if l % 2 == 1 {
        return (l + 1) / 2;
    }
    let folded = fold(l, z);
    if (l / 2 - folded) % 2 == 0 {
        l / 2
    } else {
        l / 2 + 1
    }
}

/// `z` reflected into `{1, …, ⌊(L+1)/2⌋}` via `z ↦ L + 1 − z`.
fn fold(l: usize, z: usize) -> usize {
    if 2 * z > l + 1 {
        l + 1 - z
    } else {
        z
    }
}

fn outside(p: i64, l: usize) -> bool {
    p <= 0 || p > l as i64
}

/// Samples the coupled exit times. The walk from `z` is run reflected when
/// `z` lies above the center, which leaves its exit time unchanged. An odd
/// gap is closed to an even one by a two-coin step; from there the copies
/// reflect until they meet and then move together.
pub fn sample_exit_pair<R: Rng + ?Sized>(l: usize, z: usize, rng: &mut R) -> ExitPair {
    let c = dominance_center(l, z);
    let mut a = fold(l, z) as i64;
    let mut b = c as i64;
    let mut t = 0u64;
    let mut t_a = None;
    if (b - a) % 2 != 0 {
        let coins = ParityCoins::sample(rng);
        let step = if coins.right { 1 } else { -1 };
        if coins.move_y {
            b += step;
        } else {
            a += step;
        }
        t = 1;
        if outside(a, l) {
            t_a = Some(t);
        }
        debug_assert!(!outside(b, l));
    }
    loop {
        let xi = Increment::sample(rng).value();
        t += 1;
        if t_a.is_none() {
            if a == b {
                a += xi;
                b += xi;
            } else {
                a += xi;
                b -= xi;
            }
            if outside(a, l) {
                t_a = Some(t);
            }
        } else {
            b += xi;
        }
        if outside(b, l) {
            let t_center = t;
            return ExitPair { t: t_a.unwrap_or(t), t_center };
        }
    }
}
