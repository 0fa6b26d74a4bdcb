//! Multi-precision exit tails.
//!
//! Past a few hundred steps the remainder in the exit-tail expansion drops
//! far below double-precision resolution of the tail itself, so the remainder
//! audit evolves the killed walk in wide binary floating point instead.

use astro_float::{BigFloat, RoundingMode};

/// Working precision in bits; ample for `t ≤ 8·64²` at the sizes audited.
pub const DEFAULT_PRECISION: usize = 640;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// `Q_z(T(L) > t)` for all `z` and `t = 0..=t_max`, indexed `[t][z − 1]`,
/// by iterating the killed walk at `prec` bits.
pub fn exit_tails(l: usize, t_max: usize, prec: usize) -> Vec<Vec<BigFloat>> {
    assert!(l >= 1);
    let half = BigFloat::from_f64(0.5, prec);
    let quarter = BigFloat::from_f64(0.25, prec);
    let zero = BigFloat::from_u8(0, prec);
    let mut v: Vec<BigFloat> = (0..l).map(|_| BigFloat::from_u8(1, prec)).collect();
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        out.push(v.clone());
        if t == t_max {
            break;
        }
        v = (0..l)
            .map(|i| {
                let left = if i > 0 { &v[i - 1] } else { &zero };
                let right = if i + 1 < l { &v[i + 1] } else { &zero };
                let sides = left.add(right, prec, RM).mul(&quarter, prec, RM);
                v[i].mul(&half, prec, RM).add(&sides, prec, RM)
            })
            .collect();
    }
    out
}

/// Lossy conversion for reporting.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    // Display yields a decimal scientific form Rust can parse.
    x.to_string().parse().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_double_precision_early_on() {
        let big = exit_tails(6, 40, 256);
        let small = super::super::exit_tail_curves(6, 40);
        for t in 0..=40 {
            for z in 0..6 {
                let a = to_f64(&big[t][z]);
                assert!((a - small[z][t]).abs() <= 1e-14 * small[z][t].max(1e-300));
            }
        }
    }
}
