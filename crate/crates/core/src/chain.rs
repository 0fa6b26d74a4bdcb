//! The lazy walk on `{0, …, N}` with redistribution at the two endpoints.
//!
//! From an interior site the walk stays put with probability 1/2 and moves to
//! each neighbour with probability 1/4. At `0` the missing left step is replaced
//! by a jump drawn from `nu0`; at `N` the missing right step by a jump drawn
//! from `nuN`. Both laws must live on the odd sites `{3, 5, …, N-3}` and `N`
//! must be a multiple of four.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A site of the state space `{0, …, N}`.
pub type Site = usize;

/// Tolerance on the total mass of a redistribution law.
pub const LAW_MASS_TOL: f64 = 1e-12;
/// Tolerance on the total mass of an evolved distribution.
pub const PROB_VECTOR_TOL: f64 = 1e-10;
/// Required residual `‖πP − π‖₁` of the stationary solve.
pub const STATIONARY_RESIDUAL_TOL: f64 = 1e-10;

/// Which endpoint a redistribution law belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Boundary {
    /// Jumps taken when the walk tries to step left from `0`.
    Left,
    /// Jumps taken when the walk tries to step right from `N`.
    Right,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Left => f.write_str("nu0"),
            Boundary::Right => f.write_str("nuN"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("N = {0} is not a positive multiple of 4 greater than 2")]
    NotMultipleOfFour(usize),
    #[error("{law} has length {len}, expected N + 1 = {expected}")]
    LengthMismatch {
        law: Boundary,
        len: usize,
        expected: usize,
    },
    #[error("{law} puts mass on site {site}, outside 0..={n}")]
    OutOfRange { law: Boundary, site: i64, n: usize },
    #[error("{law} puts negative mass {mass} on site {site}")]
    NegativeMass {
        law: Boundary,
        site: Site,
        mass: f64,
    },
    #[error("{law} puts mass on site {site}; support must lie in the odd sites 3..={max}")]
    Parity {
        law: Boundary,
        site: Site,
        max: usize,
    },
    #[error("{law} has total mass {sum}, expected 1")]
    MassSum { law: Boundary, sum: f64 },
    #[error("site {site} is outside 0..={n}")]
    SiteOutOfRange { site: Site, n: usize },
    #[error("distribution has length {len}, expected {expected}")]
    DistributionLength { len: usize, expected: usize },
    #[error("not a probability vector: {0}")]
    NotProbability(String),
    #[error("stationary solve failed: residual {residual:e}")]
    Stationary { residual: f64 },
}

/// A probability distribution over `{0, …, N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(entries: Vec<f64>) -> Result<Self, SpecError> {
        if let Some((i, &m)) = entries.iter().enumerate().find(|(_, &m)| !(m >= 0.0)) {
            return Err(SpecError::NotProbability(format!(
                "entry {i} is {m}"
            )));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > PROB_VECTOR_TOL {
            return Err(SpecError::NotProbability(format!("total mass {sum}")));
        }
        Ok(ProbVector(entries))
    }

    pub fn point_mass(n: usize, site: Site) -> Result<Self, SpecError> {
        if site > n {
            return Err(SpecError::SiteOutOfRange { site, n });
        }
        let mut v = vec![0.0; n + 1];
        v[site] = 1.0;
        Ok(ProbVector(v))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<Site> for ProbVector {
    type Output = f64;
    fn index(&self, i: Site) -> &f64 {
        &self.0[i]
    }
}

/// Sparse view of a redistribution law: the sites with positive mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Law {
    dense: Vec<f64>,
    support: Vec<(Site, f64)>,
}

impl Law {
    fn from_dense(dense: Vec<f64>) -> Self {
        let support = dense
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(s, &m)| (s, m))
            .collect();
        Law { dense, support }
    }

    pub fn dense(&self) -> &[f64] {
        &self.dense
    }

    /// `(site, mass)` pairs with positive mass, in increasing site order.
    pub fn support(&self) -> &[(Site, f64)] {
        &self.support
    }

    pub fn mass(&self, site: Site) -> f64 {
        self.dense.get(site).copied().unwrap_or(0.0)
    }

    /// The single site carrying all the mass, if the law is a point mass.
    pub fn point_mass(&self) -> Option<Site> {
        match self.support.as_slice() {
            [(s, m)] if (*m - 1.0).abs() <= LAW_MASS_TOL => Some(*s),
            _ => None,
        }
    }

    /// The law of `N - K` when `K` has this law.
    pub fn mirrored(&self) -> Law {
        let mut dense = self.dense.clone();
        dense.reverse();
        Law::from_dense(dense)
    }
}

/// The chain parameters: `N` and the two redistribution laws.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    n: usize,
    nu0: Law,
    nun: Law,
}

pub fn validate_parts(n: usize, nu0: &[f64], nun: &[f64]) -> Result<(), SpecError> {
    if n <= 2 || n % 4 != 0 {
        return Err(SpecError::NotMultipleOfFour(n));
    }
    for (law, masses) in [(Boundary::Left, nu0), (Boundary::Right, nun)] {
        if masses.len() != n + 1 {
            return Err(SpecError::LengthMismatch {
                law,
                len: masses.len(),
                expected: n + 1,
            });
        }
        for (site, &mass) in masses.iter().enumerate() {
            if mass < 0.0 || mass.is_nan() {
                return Err(SpecError::NegativeMass { law, site, mass });
            }
        }
        for (site, &mass) in masses.iter().enumerate() {
            if mass > 0.0 && !(site % 2 == 1 && site >= 3 && site <= n - 3) {
                return Err(SpecError::Parity {
                    law,
                    site,
                    max: n - 3,
                });
            }
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > LAW_MASS_TOL {
            return Err(SpecError::MassSum { law, sum });
        }
    }
    Ok(())
}

impl ChainSpec {
    /// Builds a spec from dense mass vectors of length `N + 1`.
    pub fn new(n: usize, nu0: Vec<f64>, nun: Vec<f64>) -> Result<Self, SpecError> {
        validate_parts(n, &nu0, &nun)?;
        Ok(ChainSpec {
            n,
            nu0: Law::from_dense(nu0),
            nun: Law::from_dense(nun),
        })
    }

    /// Builds a spec from sparse `(site, mass)` pairs; repeated sites add up.
    pub fn from_sparse(
        n: usize,
        nu0: &[(i64, f64)],
        nun: &[(i64, f64)],
    ) -> Result<Self, SpecError> {
        let densify = |law: Boundary, pairs: &[(i64, f64)]| -> Result<Vec<f64>, SpecError> {
            let mut v = vec![0.0; n + 1];
            for &(site, mass) in pairs {
                if site < 0 || site as usize > n {
                    return Err(SpecError::OutOfRange { law, site, n });
                }
                v[site as usize] += mass;
            }
            Ok(v)
        };
        if n <= 2 || n % 4 != 0 {
            return Err(SpecError::NotMultipleOfFour(n));
        }
        ChainSpec::new(n, densify(Boundary::Left, nu0)?, densify(Boundary::Right, nun)?)
    }

    /// Same redistribution law at both ends.
    pub fn symmetric(n: usize, nu: Vec<f64>) -> Result<Self, SpecError> {
        ChainSpec::new(n, nu.clone(), nu)
    }

    /// Re-checks every invariant. Always `Ok` for a constructed spec.
    pub fn validate(&self) -> Result<(), SpecError> {
        validate_parts(self.n, self.nu0.dense(), self.nun.dense())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu0(&self) -> &Law {
        &self.nu0
    }

    pub fn nun(&self) -> &Law {
        &self.nun
    }

    pub fn law(&self, b: Boundary) -> &Law {
        match b {
            Boundary::Left => &self.nu0,
            Boundary::Right => &self.nun,
        }
    }

    pub fn num_sites(&self) -> usize {
        self.n + 1
    }

    /// `Some` when both laws are point masses.
    pub fn as_point_mass(&self) -> Option<PointMassSpec> {
        Some(PointMassSpec {
            n: self.n,
            j0: self.nu0.point_mass()?,
            jn: self.nun.point_mass()?,
        })
    }

    /// Whether `nu0` and `nuN` coincide (within the mass tolerance).
    pub fn has_equal_laws(&self) -> bool {
        self.nu0
            .dense()
            .iter()
            .zip(self.nun.dense())
            .all(|(a, b)| (a - b).abs() <= LAW_MASS_TOL)
    }

    /// The chain seen through `x ↦ N - x`: the ends swap and the laws are reflected.
    pub fn mirrored(&self) -> ChainSpec {
        ChainSpec {
            n: self.n,
            nu0: self.nun.mirrored(),
            nun: self.nu0.mirrored(),
        }
    }

    /// Row `p(x, ·)` of the transition matrix.
    pub fn transition_row(&self, x: Site) -> Result<ProbVector, SpecError> {
        if x > self.n {
            return Err(SpecError::SiteOutOfRange { site: x, n: self.n });
        }
        let mut row = vec![0.0; self.n + 1];
        self.spread(x, 1.0, &mut row);
        Ok(ProbVector(row))
    }

    /// Adds `mass · p(x, ·)` into `out`.
    #[inline]
    fn spread(&self, x: Site, mass: f64, out: &mut [f64]) {
        let quarter = 0.25 * mass;
        out[x] += 0.5 * mass;
        if x > 0 {
            out[x - 1] += quarter;
        } else {
            for &(s, w) in self.nu0.support() {
                out[s] += quarter * w;
            }
        }
        if x < self.n {
            out[x + 1] += quarter;
        } else {
            for &(s, w) in self.nun.support() {
                out[s] += quarter * w;
            }
        }
    }

    /// One step of `dist ↦ dist · P` into a caller-provided buffer.
    pub fn step_into(&self, dist: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (x, &m) in dist.iter().enumerate() {
            if m != 0.0 {
                self.spread(x, m, out);
            }
        }
    }

    /// The law after `steps` steps started from `dist`.
    pub fn evolve(&self, dist: &ProbVector, steps: usize) -> Result<ProbVector, SpecError> {
        if dist.len() != self.n + 1 {
            return Err(SpecError::DistributionLength {
                len: dist.len(),
                expected: self.n + 1,
            });
        }
        let mut cur = dist.0.clone();
        let mut next = vec![0.0; self.n + 1];
        for _ in 0..steps {
            self.step_into(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(ProbVector(cur))
    }

    /// Dense transition matrix `P`, rows indexed by the current site.
    pub fn transition_matrix(&self) -> DMatrix<f64> {
        let m = self.n + 1;
        let mut p = DMatrix::zeros(m, m);
        let mut row = vec![0.0; m];
        for x in 0..m {
            row.iter_mut().for_each(|v| *v = 0.0);
            self.spread(x, 1.0, &mut row);
            for (y, &v) in row.iter().enumerate() {
                p[(x, y)] = v;
            }
        }
        p
    }

    /// The gap parameter: the largest even number not exceeding the distance
    /// from the union of the two supports to `{0, N}`.
    pub fn rho(&self) -> usize {
        let n = self.n;
        let nearest = self
            .nu0
            .support()
            .iter()
            .chain(self.nun.support())
            .map(|&(s, _)| s.min(n - s))
            .min()
            .expect("validated laws have nonempty support");
        2 * (nearest / 2)
    }

    /// The unique stationary distribution, from a direct linear solve of
    /// `π(P − I) = 0` with one equation replaced by `Σπ = 1`.
    pub fn stationary(&self) -> Result<ProbVector, SpecError> {
        let m = self.n + 1;
        let p = self.transition_matrix();
        let mut a = p.transpose() - DMatrix::identity(m, m);
        for j in 0..m {
            a[(m - 1, j)] = 1.0;
        }
        let mut b = DVector::zeros(m);
        b[m - 1] = 1.0;
        let pi = a.lu().solve(&b).ok_or(SpecError::Stationary {
            residual: f64::INFINITY,
        })?;
        let pi: Vec<f64> = pi.iter().map(|v| v.max(0.0)).collect();
        let total: f64 = pi.iter().sum();
        let pi: Vec<f64> = pi.iter().map(|v| v / total).collect();
        let residual = self.stationary_residual(&pi);
        if residual > STATIONARY_RESIDUAL_TOL {
            return Err(SpecError::Stationary { residual });
        }
        Ok(ProbVector(pi))
    }

    /// `‖πP − π‖₁`.
    pub fn stationary_residual(&self, pi: &[f64]) -> f64 {
        let mut next = vec![0.0; self.n + 1];
        self.step_into(pi, &mut next);
        next.iter().zip(pi).map(|(a, b)| (a - b).abs()).sum()
    }
}

/// Deterministic redistribution: `nu0 = δ_{J0}`, `nuN = δ_{JN}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointMassSpec {
    pub n: usize,
    pub j0: Site,
    pub jn: Site,
}

impl PointMassSpec {
    pub fn new(n: usize, j0: Site, jn: Site) -> Result<Self, SpecError> {
        let spec = PointMassSpec { n, j0, jn };
        spec.to_chain_spec()?;
        Ok(spec)
    }

    pub fn to_chain_spec(&self) -> Result<ChainSpec, SpecError> {
        if self.n <= 2 || self.n % 4 != 0 {
            return Err(SpecError::NotMultipleOfFour(self.n));
        }
        for (law, site) in [(Boundary::Left, self.j0), (Boundary::Right, self.jn)] {
            if site > self.n {
                return Err(SpecError::OutOfRange {
                    law,
                    site: site as i64,
                    n: self.n,
                });
            }
        }
        let mut nu0 = vec![0.0; self.n + 1];
        let mut nun = vec![0.0; self.n + 1];
        nu0[self.j0] = 1.0;
        nun[self.jn] = 1.0;
        ChainSpec::new(self.n, nu0, nun)
    }

    /// The chain seen through `x ↦ N - x`.
    pub fn mirrored(&self) -> PointMassSpec {
        PointMassSpec {
            n: self.n,
            j0: self.n - self.jn,
            jn: self.n - self.j0,
        }
    }

    /// Every point-mass spec for a given `N`.
    pub fn all(n: usize) -> Vec<PointMassSpec> {
        let odd: Vec<Site> = (3..=n.saturating_sub(3)).step_by(2).collect();
        odd.iter()
            .flat_map(|&j0| odd.iter().map(move |&jn| PointMassSpec { n, j0, jn }))
            .collect()
    }
}

impl fmt::Display for PointMassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} J0={} JN={}", self.n, self.j0, self.jn)
    }
}

/// Accepts either a dense mass vector or a list of `[site, mass]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MassList {
    Sparse(Vec<(i64, f64)>),
    Dense(Vec<f64>),
}

/// On-disk form: `{"N": 16, "nu0": [[5, 1.0]], "nuN": [[11, 1.0]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ChainSpecFile {
    #[serde(rename = "N")]
    n: usize,
    nu0: MassList,
    #[serde(rename = "nuN")]
    nun: MassList,
}

impl TryFrom<ChainSpecFile> for ChainSpec {
    type Error = SpecError;

    fn try_from(file: ChainSpecFile) -> Result<Self, SpecError> {
        let n = file.n;
        if n <= 2 || n % 4 != 0 {
            return Err(SpecError::NotMultipleOfFour(n));
        }
        let densify = |law: Boundary, list: MassList| -> Result<Vec<f64>, SpecError> {
            match list {
                MassList::Dense(v) => Ok(v),
                MassList::Sparse(pairs) => {
                    let mut v = vec![0.0; n + 1];
                    for (site, mass) in pairs {
                        if site < 0 || site as usize > n {
                            return Err(SpecError::OutOfRange { law, site, n });
                        }
                        v[site as usize] += mass;
                    }
                    Ok(v)
                }
            }
        };
        ChainSpec::new(
            n,
            densify(Boundary::Left, file.nu0)?,
            densify(Boundary::Right, file.nun)?,
        )
    }
}

impl From<&ChainSpec> for ChainSpecFile {
    fn from(spec: &ChainSpec) -> Self {
        let sparse = |law: &Law| {
            MassList::Sparse(law.support().iter().map(|&(s, m)| (s as i64, m)).collect())
        };
        ChainSpecFile {
            n: spec.n,
            nu0: sparse(&spec.nu0),
            nun: sparse(&spec.nun),
        }
    }
}

impl Serialize for ChainSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ChainSpecFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = ChainSpecFile::deserialize(d)?;
        ChainSpec::try_from(file).map_err(serde::de::Error::custom)
    }
}

impl ChainSpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(n: usize, s: Site) -> Vec<f64> {
        let mut v = vec![0.0; n + 1];
        v[s] = 1.0;
        v
    }

    fn spec_5_11() -> ChainSpec {
        ChainSpec::new(16, delta(16, 5), delta(16, 11)).unwrap()
    }

    #[test]
    fn validate_accepts_and_rejects() {
        assert!(spec_5_11().validate().is_ok());
        assert_eq!(
            ChainSpec::new(10, delta(10, 5), delta(10, 5)),
            Err(SpecError::NotMultipleOfFour(10))
        );
        assert!(matches!(
            ChainSpec::new(16, delta(16, 4), delta(16, 11)),
            Err(SpecError::Parity { site: 4, .. })
        ));
        assert!(matches!(
            ChainSpec::new(16, delta(16, 15), delta(16, 11)),
            Err(SpecError::Parity { site: 15, .. })
        ));
        let mut half = vec![0.0; 17];
        half[5] = 0.5;
        assert!(matches!(
            ChainSpec::new(16, half, delta(16, 11)),
            Err(SpecError::MassSum { .. })
        ));
        let mut neg = delta(16, 5);
        neg[7] = -0.25;
        neg[9] = 0.25;
        assert!(matches!(
            ChainSpec::new(16, neg, delta(16, 11)),
            Err(SpecError::NegativeMass { site: 7, .. })
        ));
    }

    #[test]
    fn transition_rows() {
        let spec = spec_5_11();
        let r = spec.transition_row(7).unwrap();
        assert_eq!((r[6], r[7], r[8]), (0.25, 0.5, 0.25));
        assert_eq!(r.as_slice().iter().sum::<f64>(), 1.0);

        let r = spec.transition_row(0).unwrap();
        assert_eq!((r[0], r[1], r[5]), (0.5, 0.25, 0.25));
        assert_eq!(r.as_slice().iter().filter(|&&v| v > 0.0).count(), 3);

        let mut nun = vec![0.0; 17];
        nun[3] = 0.5;
        nun[5] = 0.5;
        let spec = ChainSpec::new(16, delta(16, 5), nun).unwrap();
        let r = spec.transition_row(16).unwrap();
        assert_eq!((r[16], r[15], r[3], r[5]), (0.5, 0.25, 0.125, 0.125));
        assert!(spec.transition_row(17).is_err());
    }

    #[test]
    fn rho_examples() {
        let s = ChainSpec::new(16, delta(16, 5), delta(16, 5)).unwrap();
        assert_eq!(s.rho(), 4);
        let s = ChainSpec::new(16, delta(16, 3), delta(16, 13)).unwrap();
        assert_eq!(s.rho(), 2);
        let s = ChainSpec::new(16, delta(16, 7), delta(16, 9)).unwrap();
        assert_eq!(s.rho(), 6);
    }

    #[test]
    fn evolve_examples() {
        let spec = spec_5_11();
        let d = ProbVector::point_mass(16, 7).unwrap();
        assert_eq!(spec.evolve(&d, 0).unwrap(), d);
        let one = spec.evolve(&d, 1).unwrap();
        assert_eq!((one[6], one[7], one[8]), (0.25, 0.5, 0.25));

        // Two steps from 0 with nu0 = δ5, against a dense matrix square.
        let p = spec.transition_matrix();
        let p2 = &p * &p;
        let two = spec.evolve(&ProbVector::point_mass(16, 0).unwrap(), 2).unwrap();
        for y in 0..=16 {
            assert!((two[y] - p2[(0, y)]).abs() < 1e-15);
        }
        // Hand computation: from 0 the law after one step is {0:1/2, 1:1/4, 5:1/4}.
        assert!((two[0] - 0.3125).abs() < 1e-15);
        assert!((two[5] - 0.25).abs() < 1e-15);
        assert!((two[4] - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn stationary_two_ways() {
        let spec = ChainSpec::new(16, delta(16, 5), delta(16, 11)).unwrap();
        let pi = spec.stationary().unwrap();
        assert!(spec.stationary_residual(pi.as_slice()) <= 1e-10);
        assert!(pi.as_slice().iter().all(|&v| v > 0.0));

        let spec = ChainSpec::new(16, delta(16, 5), delta(16, 5)).unwrap();
        let pi = spec.stationary().unwrap();
        let long = spec
            .evolve(&ProbVector::point_mass(16, 0).unwrap(), 100_000)
            .unwrap();
        for x in 0..=16 {
            assert!((pi[x] - long[x]).abs() < 1e-8);
        }
    }

    #[test]
    fn json_round_trip_and_dense_input() {
        let spec = spec_5_11();
        let back = ChainSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, back);

        let dense = format!(
            "{{\"N\": 16, \"nu0\": {:?}, \"nuN\": [[11, 1.0]]}}",
            delta(16, 5)
        );
        assert_eq!(ChainSpec::from_json(&dense).unwrap(), spec);

        let bad = r#"{"N": 16, "nu0": [[4, 1.0]], "nuN": [[11, 1.0]]}"#;
        let err = ChainSpec::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("odd sites"), "{err}");
    }

    #[test]
    fn point_mass_helpers() {
        let pm = PointMassSpec::new(16, 3, 13).unwrap();
        assert_eq!(pm.to_chain_spec().unwrap().as_point_mass(), Some(pm));
        assert_eq!(pm.mirrored(), PointMassSpec { n: 16, j0: 3, jn: 13 });
        assert_eq!(
            PointMassSpec { n: 16, j0: 5, jn: 7 }.mirrored(),
            PointMassSpec { n: 16, j0: 9, jn: 11 }
        );
        assert!(PointMassSpec::new(16, 2, 13).is_err());
        assert_eq!(PointMassSpec::all(16).len(), 36);
    }

    #[test]
    fn mirrored_chain_is_conjugate() {
        let mut nu = vec![0.0; 17];
        nu[3] = 0.25;
        nu[7] = 0.75;
        let spec = ChainSpec::new(16, nu, delta(16, 11)).unwrap();
        let m = spec.mirrored();
        let (p, q) = (spec.transition_matrix(), m.transition_matrix());
        for x in 0..=16 {
            for y in 0..=16 {
                assert_eq!(p[(x, y)], q[(16 - x, 16 - y)]);
            }
        }
    }
}
