//! Brute-force ground truth.
//!
//! Everything here is computed by evolving distributions or by dense linear
//! algebra on the transition matrices, never from the closed forms in
//! [`crate::spectral`]. The closed forms are audited against these values.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::chain::{ChainSpec, ProbVector, Site, SpecError};

pub mod precise;

/// Total-variation distance: half the L1 distance.
pub fn tv(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let l1: f64 = a.iter().zip(b).map(|(p, q)| (p - q).abs()).sum();
    (0.5 * l1).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Pair { x: Site, y: Site },
    Sup,
    TildeSup,
}

/// A distance curve indexed by `t = 0, …, t_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TvCurve {
    pub kind: CurveKind,
    pub values: Vec<f64>,
}

impl TvCurve {
    pub fn t_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// `d_t(x, y)` for `t = 0..=t_max`.
pub fn pair_curve(spec: &ChainSpec, x: Site, y: Site, t_max: usize) -> Result<TvCurve, SpecError> {
    let mut a = ProbVector::point_mass(spec.n(), x)?.into_vec();
    let mut b = ProbVector::point_mass(spec.n(), y)?.into_vec();
    let mut scratch = vec![0.0; spec.num_sites()];
    let mut values = Vec::with_capacity(t_max + 1);
    values.push(tv(&a, &b));
    for _ in 0..t_max {
        spec.step_into(&a, &mut scratch);
        std::mem::swap(&mut a, &mut scratch);
        spec.step_into(&b, &mut scratch);
        std::mem::swap(&mut b, &mut scratch);
        values.push(tv(&a, &b));
    }
    Ok(TvCurve {
        kind: CurveKind::Pair { x, y },
        values,
    })
}

pub fn d_t_pair(spec: &ChainSpec, x: Site, y: Site, t: usize) -> Result<f64, SpecError> {
    Ok(*pair_curve(spec, x, y, t)?.values.last().unwrap())
}

/// The laws `P^t(x, ·)` for every start `x`, advanced one step at a time.
pub struct LawTable<'a> {
    spec: &'a ChainSpec,
    rows: Vec<Vec<f64>>,
    scratch: Vec<f64>,
    t: usize,
}

impl<'a> LawTable<'a> {
    pub fn new(spec: &'a ChainSpec) -> Self {
        let m = spec.num_sites();
        let rows = (0..m)
            .map(|x| {
                let mut r = vec![0.0; m];
                r[x] = 1.0;
                r
            })
            .collect();
        LawTable {
            spec,
            rows,
            scratch: vec![0.0; m],
            t: 0,
        }
    }

    pub fn advance(&mut self) {
        for row in &mut self.rows {
            self.spec.step_into(row, &mut self.scratch);
            std::mem::swap(row, &mut self.scratch);
        }
        self.t += 1;
    }

    pub fn time(&self) -> usize {
        self.t
    }

    pub fn law(&self, x: Site) -> &[f64] {
        &self.rows[x]
    }

    /// `sup_{x,y} d_t(x, y)`.
    pub fn sup_distance(&self) -> f64 {
        let m = self.rows.len();
        let mut best = 0.0f64;
        for x in 0..m {
            for y in x + 1..m {
                best = best.max(tv(&self.rows[x], &self.rows[y]));
            }
        }
        best
    }

    /// `sup d_t(x, y)` over pairs with `y − x` even, positive and at most `rho`.
    pub fn tilde_distance(&self, rho: usize) -> f64 {
        let m = self.rows.len();
        let mut best = 0.0f64;
        for x in 0..m {
            let mut y = x + 2;
            while y < m && y - x <= rho {
                best = best.max(tv(&self.rows[x], &self.rows[y]));
                y += 2;
            }
        }
        best
    }
}

/// The sup curve `d_t` and the restricted curve `d̃_t` together.
pub fn sup_curves(spec: &ChainSpec, t_max: usize) -> (TvCurve, TvCurve) {
    let rho = spec.rho();
    let mut table = LawTable::new(spec);
    let mut sup = Vec::with_capacity(t_max + 1);
    let mut tilde = Vec::with_capacity(t_max + 1);
    loop {
        sup.push(table.sup_distance());
        tilde.push(table.tilde_distance(rho));
        if table.time() == t_max {
            break;
        }
        table.advance();
    }
    (
        TvCurve {
            kind: CurveKind::Sup,
            values: sup,
        },
        TvCurve {
            kind: CurveKind::TildeSup,
            values: tilde,
        },
    )
}

pub fn d_t_sup(spec: &ChainSpec, t: usize) -> f64 {
    *sup_curves(spec, t).0.values.last().unwrap()
}

pub fn tilde_d_t(spec: &ChainSpec, t: usize) -> f64 {
    *sup_curves(spec, t).1.values.last().unwrap()
}

/// Outcome of checking `d_t ≤ ⌊1 + N/ρ⌋ (d̃_t + d̃_{t−1})` for every `t ≥ 1`.
#[derive(Debug, Clone, Serialize)]
pub struct TriangleAudit {
    pub factor: usize,
    pub pass: bool,
    /// `min_t (rhs − lhs)`; `+∞` when there is nothing to check.
    pub worst_margin: f64,
    pub worst_t: Option<usize>,
}

pub fn triangle_audit(n: usize, rho: usize, sup: &TvCurve, tilde: &TvCurve) -> TriangleAudit {
    let factor = 1 + n / rho;
    let mut worst_margin = f64::INFINITY;
    let mut worst_t = None;
    for t in 1..sup.values.len() {
        let rhs = factor as f64 * (tilde.values[t] + tilde.values[t - 1]);
        let margin = rhs - sup.values[t];
        if margin < worst_margin {
            worst_margin = margin;
            worst_t = Some(t);
        }
    }
    TriangleAudit {
        factor,
        pass: worst_margin >= 0.0,
        worst_margin,
        worst_t,
    }
}

/// Center of `{1, …, L}`: `⌊(L+1)/2⌋`.
pub fn center(l: usize) -> usize {
    (l + 1) / 2
}

/// The lazy walk killed on leaving `{1, …, L}`, as an `L × L` matrix.
pub fn killed_matrix(l: usize) -> DMatrix<f64> {
    DMatrix::from_fn(l, l, |i, j| match i.abs_diff(j) {
        0 => 0.5,
        1 => 0.25,
        _ => 0.0,
    })
}

/// Survival curves `Q_z(T(L) > t)` for every `z ∈ {1..L}` and `t = 0..=t_max`,
/// indexed `[z − 1][t]`.
pub fn exit_tail_curves(l: usize, t_max: usize) -> Vec<Vec<f64>> {
    assert!(l >= 1);
    let mut out = vec![Vec::with_capacity(t_max + 1); l];
    let mut v = vec![1.0; l];
    let mut next = vec![0.0; l];
    for t in 0..=t_max {
        for (z, val) in v.iter().enumerate() {
            out[z].push(*val);
        }
        if t == t_max {
            break;
        }
        for i in 0..l {
            let left = if i > 0 { v[i - 1] } else { 0.0 };
            let right = if i + 1 < l { v[i + 1] } else { 0.0 };
            next[i] = 0.5 * v[i] + 0.25 * (left + right);
        }
        std::mem::swap(&mut v, &mut next);
    }
    out
}

pub fn exit_tail_curve(l: usize, z: usize, t_max: usize) -> Vec<f64> {
    assert!((1..=l).contains(&z), "start {z} outside 1..={l}");
    exit_tail_curves(l, t_max).swap_remove(z - 1)
}

/// `Q_z(T(L) > t)`.
pub fn exit_tail_exact(l: usize, z: usize, t: usize) -> f64 {
    *exit_tail_curve(l, z, t).last().unwrap()
}

/// Survival curve of the exit time from the center; `L = 0` means `T = 0`.
pub fn center_tail(l: usize, t_max: usize) -> Vec<f64> {
    if l == 0 {
        return vec![0.0; t_max + 1];
    }
    exit_tail_curve(l, center(l), t_max)
}

/// Survival curve `P(T₁ + … + T_k > t)` for independent center-started exit
/// times `T_i` from intervals of the given lengths, by exact convolution.
pub fn exit_sum_tail(lengths: &[usize], t_max: usize) -> Vec<f64> {
    let mut pmf = vec![0.0; t_max + 1];
    pmf[0] = 1.0;
    for &l in lengths {
        let tail = center_tail(l, t_max);
        let mut own = vec![0.0; t_max + 1];
        own[0] = 1.0 - tail[0];
        for t in 1..=t_max {
            own[t] = tail[t - 1] - tail[t];
        }
        let mut conv = vec![0.0; t_max + 1];
        for (i, &a) in pmf.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in own[..=t_max - i].iter().enumerate() {
                conv[i + j] += a * b;
            }
        }
        pmf = conv;
    }
    let mut cdf = 0.0;
    pmf.iter()
        .map(|p| {
            cdf += p;
            (1.0 - cdf).max(0.0)
        })
        .collect()
}

/// Spectrum of the killed walk on `{1..L}`.
#[derive(Debug, Clone, Serialize)]
pub struct KilledWalkSpectrum {
    pub l: usize,
    /// All eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm eigenvector of the top eigenvalue, signed to be positive.
    pub top_vector: Vec<f64>,
}

impl KilledWalkSpectrum {
    pub fn top(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Largest modulus among the remaining eigenvalues (0 when `L = 1`).
    pub fn second_modulus(&self) -> f64 {
        self.eigenvalues[1..]
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }
}

pub fn killed_spectrum(l: usize) -> KilledWalkSpectrum {
    assert!(l >= 1);
    let eig = SymmetricEigen::new(killed_matrix(l));
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let col = eig.eigenvectors.column(order[0]);
    let sign = if col.sum() < 0.0 { -1.0 } else { 1.0 };
    let norm = col.norm();
    let top_vector = col.iter().map(|v| sign * v / norm).collect();
    KilledWalkSpectrum {
        l,
        eigenvalues,
        top_vector,
    }
}

/// All `N + 1` eigenvalues of the transition matrix, by decreasing modulus.
pub fn full_spectrum(spec: &ChainSpec) -> Vec<Complex<f64>> {
    let mut eig: Vec<Complex<f64>> = spec
        .transition_matrix()
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect();
    eig.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)));
    eig
}

/// Largest modulus after removing the single eigenvalue nearest to 1.
pub fn second_modulus(eigenvalues: &[Complex<f64>]) -> f64 {
    let one = eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| {
            (a.1 - Complex::new(1.0, 0.0))
                .norm()
                .total_cmp(&(b.1 - Complex::new(1.0, 0.0)).norm())
        })
        .map(|(i, _)| i);
    eigenvalues
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != one)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max)
}

/// Distance from `value` to the nearest eigenvalue in the list.
pub fn distance_to_spectrum(eigenvalues: &[Complex<f64>], value: f64) -> f64 {
    eigenvalues
        .iter()
        .map(|z| (z - Complex::new(value, 0.0)).norm())
        .fold(f64::INFINITY, f64::min)
}
