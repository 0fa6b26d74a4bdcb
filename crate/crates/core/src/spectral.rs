//! Closed forms: the killed-walk eigenvalue `λ(L)`, the exit-tail expansion,
//! the effective length `L0` of a deterministic-redistribution chain, and the
//! sine eigenfunctions behind the lower bound on `d_t`.

use std::f64::consts::PI;
use std::fmt;

use astro_float::{BigFloat, Consts};
use serde::Serialize;

use crate::chain::{PointMassSpec, Site};
use crate::oracle::precise::RM;

/// `λ(L) = ½(cos(π/(L+1)) + 1)`, the top eigenvalue of the walk killed
/// outside `{1, …, L}`.
pub fn lambda_of(l: usize) -> f64 {
    assert!(l >= 1);
    0.5 * ((PI / (l as f64 + 1.0)).cos() + 1.0)
}

/// Exit-time tail model for `T(L)`: leading coefficient and rate, plus the
/// rate of the first discarded term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExitTailModel {
    pub l: usize,
    pub lambda: f64,
    /// Modulus of the next eigenvalue, `½(cos(2π/(L+1)) + 1)`; zero for `L = 1`.
    pub lambda2_bound: f64,
}

impl ExitTailModel {
    pub fn new(l: usize) -> Self {
        assert!(l >= 1);
        let lambda2_bound = if l == 1 {
            0.0
        } else {
            0.5 * ((2.0 * PI / (l as f64 + 1.0)).cos() + 1.0)
        };
        ExitTailModel {
            l,
            lambda: lambda_of(l),
            lambda2_bound,
        }
    }

    /// `(2/(L+1)) cot(π/(2(L+1))) sin(πz/(L+1))`.
    pub fn coefficient(&self, z: usize) -> f64 {
        assert!((1..=self.l).contains(&z));
        let m = self.l as f64 + 1.0;
        (2.0 / m) / (PI / (2.0 * m)).tan() * (PI * z as f64 / m).sin()
    }

    pub fn leading(&self, z: usize, t: usize) -> f64 {
        self.coefficient(z) * self.lambda.powi(t as i32)
    }
}

/// Leading term of `Q_z(T(L) > t)`.
pub fn exit_tail_formula(l: usize, z: usize, t: usize) -> f64 {
    ExitTailModel::new(l).leading(z, t)
}

/// The leading term evaluated at `prec` bits for all `z` and `t = 0..=t_max`,
/// indexed `[t][z − 1]`.
pub fn exit_tail_formula_precise(l: usize, t_max: usize, prec: usize) -> Vec<Vec<BigFloat>> {
    let mut cc = Consts::new().expect("constant cache");
    let pi = cc.pi(prec, RM);
    let m = BigFloat::from_u64(l as u64 + 1, prec);
    let angle = pi.div(&m, prec, RM);
    let half_angle = angle.div(&BigFloat::from_u8(2, prec), prec, RM);
    let one = BigFloat::from_u8(1, prec);
    let half = BigFloat::from_f64(0.5, prec);
    let lambda = angle.cos(prec, RM, &mut cc).add(&one, prec, RM).mul(&half, prec, RM);
    let cot = half_angle
        .cos(prec, RM, &mut cc)
        .div(&half_angle.sin(prec, RM, &mut cc), prec, RM);
    let scale = BigFloat::from_u8(2, prec).div(&m, prec, RM).mul(&cot, prec, RM);
    let coeffs: Vec<BigFloat> = (1..=l)
        .map(|z| {
            let arg = angle.mul(&BigFloat::from_u64(z as u64, prec), prec, RM);
            scale.mul(&arg.sin(prec, RM, &mut cc), prec, RM)
        })
        .collect();
    let mut out = Vec::with_capacity(t_max + 1);
    let mut power = one.clone();
    for t in 0..=t_max {
        out.push(coeffs.iter().map(|c| c.mul(&power, prec, RM)).collect());
        if t < t_max {
            power = power.mul(&lambda, prec, RM);
        }
    }
    out
}

/// `L0 = ½ max{J0 − 1, N − 1 − JN, N + JN − J0}`.
pub fn l0_of(spec: &PointMassSpec) -> usize {
    let n = spec.n as i64;
    let (j0, jn) = (spec.j0 as i64, spec.jn as i64);
    let m = (j0 - 1).max(n - 1 - jn).max(n + jn - j0);
    debug_assert!(m > 0 && m % 2 == 0);
    (m / 2) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    LeftLoop,
    RightLoop,
    Cross,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::LeftLoop => "left-loop",
            Family::RightLoop => "right-loop",
            Family::Cross => "cross",
        })
    }
}

/// A function `f(x) = sin(k·x + ω)` that is an eigenfunction of the chain.
///
/// `k` is a wave number, unrelated to the gap parameter `ρ` of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenCandidate {
    pub family: Family,
    pub wave_number: f64,
    pub phase: f64,
    pub eigenvalue: f64,
}

impl EigenCandidate {
    fn new(family: Family, wave_number: f64, phase: f64) -> Self {
        EigenCandidate {
            family,
            wave_number,
            phase,
            eigenvalue: 0.5 * (wave_number.cos() + 1.0),
        }
    }

    /// `f(x)` on the extended line `{−1, …, N + 1}`.
    pub fn eval(&self, x: i64) -> f64 {
        (self.wave_number * x as f64 + self.phase).sin()
    }

    /// The two boundary identities `f(−1) = f(J0)` and `f(N+1) = f(JN)`,
    /// returned as absolute differences.
    pub fn constraint_residuals(&self, spec: &PointMassSpec) -> (f64, f64) {
        let left = (self.eval(-1) - self.eval(spec.j0 as i64)).abs();
        let right = (self.eval(spec.n as i64 + 1) - self.eval(spec.jn as i64)).abs();
        (left, right)
    }

    /// `max_x |(Pf)(x) − λ f(x)|` with `P` the chain's transition matrix.
    pub fn eigen_residual(&self, spec: &PointMassSpec) -> f64 {
        let chain = spec.to_chain_spec().expect("valid point-mass spec");
        let f: Vec<f64> = (0..=spec.n).map(|x| self.eval(x as i64)).collect();
        (0..=spec.n)
            .map(|x| {
                let row = chain.transition_row(x).expect("site in range");
                let pf: f64 = row.as_slice().iter().zip(&f).map(|(p, v)| p * v).sum();
                (pf - self.eigenvalue * f[x]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// The three sine eigenfunctions, in the order left-loop, right-loop, cross.
pub fn eigen_candidates(spec: &PointMassSpec) -> [EigenCandidate; 3] {
    let n = spec.n as f64;
    let (j0, jn) = (spec.j0 as f64, spec.jn as f64);

    // Left loop: k(J0 + 1) = 2π settles f(−1) = f(J0) for any phase; the
    // phase then solves f(N+1) = f(JN) by symmetry about π/2.
    let k = 2.0 * PI / (j0 + 1.0);
    let left = EigenCandidate::new(Family::LeftLoop, k, 0.5 * PI - 0.5 * k * (n + 1.0 + jn));

    // Right loop: k(N + 1 − JN) = 2π, phase from the left identity.
    let k = 2.0 * PI / (n + 1.0 - jn);
    let right = EigenCandidate::new(Family::RightLoop, k, 0.5 * PI - 0.5 * k * (j0 - 1.0));

    // Cross: both identities by reflection, about π/2 on the left and 3π/2
    // on the right.
    let k = 2.0 * PI / (n + 1.0 + jn - (j0 - 1.0));
    let cross = EigenCandidate::new(Family::Cross, k, 0.5 * PI - 0.5 * k * (j0 - 1.0));

    [left, right, cross]
}

/// The candidate with the smallest wave number, hence the largest eigenvalue.
pub fn slowest_candidate(spec: &PointMassSpec) -> EigenCandidate {
    eigen_candidates(spec)
        .into_iter()
        .min_by(|a, b| a.wave_number.total_cmp(&b.wave_number))
        .unwrap()
}

/// `½(1 − 2π/N) λ(L0)^t`.
pub fn lower_bound_curve(spec: &PointMassSpec, t: usize) -> f64 {
    0.5 * (1.0 - 2.0 * PI / spec.n as f64) * lambda_of(l0_of(spec)).powi(t as i32)
}

/// Range of `L0` over every point-mass spec for a given `N`, next to the
/// reference values quoted for the extremes.
#[derive(Debug, Clone, Serialize)]
pub struct L0Survey {
    pub n: usize,
    pub min_l0: usize,
    pub argmin: Vec<(Site, Site)>,
    pub max_l0: usize,
    pub argmax: Vec<(Site, Site)>,
    /// `N − 3`, quoted as the maximum, attained at `(3, N − 3)`.
    pub quoted_max: usize,
    /// `2(N − 1)/3`, quoted as a lower bound.
    pub quoted_lower: f64,
    /// `(N − 1)/3`, what equalizing the three terms of `L0` gives.
    pub equalized_lower: f64,
    /// `L0` when `J0 = JN` (always `N/2`).
    pub equal_jumps: Vec<usize>,
}

pub fn l0_survey(n: usize) -> L0Survey {
    let all = PointMassSpec::all(n);
    let values: Vec<(PointMassSpec, usize)> = all.iter().map(|s| (*s, l0_of(s))).collect();
    let min_l0 = values.iter().map(|v| v.1).min().unwrap_or(0);
    let max_l0 = values.iter().map(|v| v.1).max().unwrap_or(0);
    let pick = |target: usize| {
        values
            .iter()
            .filter(|v| v.1 == target)
            .map(|v| (v.0.j0, v.0.jn))
            .collect()
    };
    let mut equal_jumps: Vec<usize> = values
        .iter()
        .filter(|v| v.0.j0 == v.0.jn)
        .map(|v| v.1)
        .collect();
    equal_jumps.dedup();
    L0Survey {
        n,
        min_l0,
        argmin: pick(min_l0),
        max_l0,
        argmax: pick(max_l0),
        quoted_max: n - 3,
        quoted_lower: 2.0 * (n as f64 - 1.0) / 3.0,
        equalized_lower: (n as f64 - 1.0) / 3.0,
        equal_jumps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(n: usize, j0: usize, jn: usize) -> PointMassSpec {
        PointMassSpec::new(n, j0, jn).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert!((lambda_of(1) - 0.5).abs() < 1e-16);
        assert!((lambda_of(3) - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-15);
        let mut prev = lambda_of(1);
        for l in 2..200 {
            let v = lambda_of(l);
            assert!(v > prev && v > 0.5 && v < 1.0);
            prev = v;
        }
    }

    #[test]
    fn lambda_matches_killed_spectrum() {
        assert!((lambda_of(8) - crate::oracle::killed_spectrum(8).top()).abs() < 1e-10);
    }

    #[test]
    fn l0_examples() {
        for j in (3..=13).step_by(2) {
            assert_eq!(l0_of(&pm(16, j, j)), 8);
        }
        assert_eq!(l0_of(&pm(16, 3, 13)), 13);
        assert_eq!(l0_of(&pm(16, 13, 3)), 6);
        assert_eq!(l0_of(&pm(16, 5, 11)), 11);
    }

    #[test]
    fn exit_formula_examples() {
        for t in 0..30 {
            let v = exit_tail_formula(1, 1, t);
            assert!((v - 0.5f64.powi(t as i32)).abs() < 1e-15);
        }
        // Center maximizes the coefficient for odd L.
        let m = ExitTailModel::new(9);
        let c = (1..=9).map(|z| m.coefficient(z)).collect::<Vec<_>>();
        let best = (1..=9).max_by(|&a, &b| c[a - 1].total_cmp(&c[b - 1])).unwrap();
        assert_eq!(best, 5);
        assert!(m.lambda2_bound < m.lambda);
    }

    #[test]
    fn candidates_for_3_13() {
        let s = pm(16, 3, 13);
        let c = eigen_candidates(&s);
        assert!((c[0].wave_number - PI / 2.0).abs() < 1e-15);
        assert!((c[1].wave_number - PI / 2.0).abs() < 1e-15);
        assert!((c[2].wave_number - PI / 14.0).abs() < 1e-15);
        let l0 = l0_of(&s);
        assert!((c[2].wave_number - PI / (l0 as f64 + 1.0)).abs() < 1e-15);
        // The defining identity of the cross family.
        let k = c[2].wave_number;
        let lhs = PI - k * (13.0 + 1.0);
        let rhs = -PI + k * (16.0 + 1.0 - 3.0);
        assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn candidates_are_eigenfunctions_everywhere() {
        for n in [16, 24, 32] {
            for s in PointMassSpec::all(n) {
                let cands = eigen_candidates(&s);
                for c in cands {
                    let (a, b) = c.constraint_residuals(&s);
                    assert!(a <= 1e-10 && b <= 1e-10, "{s} {c:?}");
                    assert!(c.eigen_residual(&s) <= 1e-10, "{s} {c:?}");
                    assert!(c.eigenvalue > 0.0 && c.eigenvalue < 1.0);
                }
                let slow = slowest_candidate(&s);
                let lam = lambda_of(l0_of(&s));
                assert!((slow.eigenvalue - lam).abs() <= 1e-12, "{s}");
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        let s = pm(16, 3, 13);
        assert!((lower_bound_curve(&s, 0) - 0.5 * (1.0 - 2.0 * PI / 16.0)).abs() < 1e-15);
        assert!((lower_bound_curve(&s, 0) - 0.30365).abs() < 1e-5);
        let r = lower_bound_curve(&s, 11) / lower_bound_curve(&s, 10);
        assert!((r.ln() - lambda_of(13).ln()).abs() < 1e-12);
    }

    #[test]
    fn survey_for_16() {
        let s = l0_survey(16);
        assert_eq!(s.max_l0, 13);
        assert_eq!(s.argmax, vec![(3, 13)]);
        assert_eq!(s.equal_jumps, vec![8]);
        assert!(s.min_l0 as f64 >= s.equalized_lower);
    }

    #[test]
    fn precise_formula_matches_double() {
        let big = exit_tail_formula_precise(7, 30, 256);
        for t in 0..=30 {
            for z in 1..=7 {
                let a = crate::oracle::precise::to_f64(&big[t][z - 1]);
                let b = exit_tail_formula(7, z, t);
                assert!((a - b).abs() <= 1e-13 * b, "t={t} z={z}");
            }
        }
    }
}
