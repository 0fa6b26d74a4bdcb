//! CSV writers. Reals are written with 17 significant digits.

use std::io::Write;

use nalgebra::Complex;

use crate::chain::PointMassSpec;
use crate::coupling::TrialRecord;
use crate::montecarlo::SurvivalCurve;
use crate::oracle::TvCurve;
use crate::spectral::EigenCandidate;

pub type CsvResult = Result<(), csv::Error>;

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// `t,value`.
pub fn write_tv_curve<W: Write>(w: W, curve: &TvCurve) -> CsvResult {
    write_series(w, &curve.values)
}

/// `t,value` for any curve indexed by time.
pub fn write_series<W: Write>(w: W, values: &[f64]) -> CsvResult {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "value"])?;
    for (t, v) in values.iter().enumerate() {
        out.write_record([t.to_string(), real(*v)])?;
    }
    out.flush()?;
    Ok(())
}

/// `index,real,imag`.
pub fn write_spectrum<W: Write>(w: W, eigenvalues: &[Complex<f64>]) -> CsvResult {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "real", "imag"])?;
    for (i, z) in eigenvalues.iter().enumerate() {
        out.write_record([i.to_string(), real(z.re), real(z.im)])?;
    }
    out.flush()?;
    Ok(())
}

/// `family,rho,omega,eigenvalue,residual`.
pub fn write_candidates<W: Write>(w: W, spec: &PointMassSpec, candidates: &[EigenCandidate]) -> CsvResult {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["family", "rho", "omega", "eigenvalue", "residual"])?;
    for c in candidates {
        out.write_record([
            c.family.to_string(),
            real(c.wave_number),
            real(c.phase),
            real(c.eigenvalue),
            real(c.eigen_residual(spec)),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `seed,tau,stage_path`.
pub fn write_trials<W: Write>(w: W, records: &[TrialRecord]) -> CsvResult {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["seed", "tau", "stage_path"])?;
    for r in records {
        out.write_record([r.seed.to_string(), r.tau.to_string(), r.path_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// `t,survival,ci_lo,ci_hi`.
pub fn write_survival<W: Write>(w: W, curve: &SurvivalCurve) -> CsvResult {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "survival", "ci_lo", "ci_hi"])?;
    for t in 0..curve.survival.len() {
        out.write_record([
            t.to_string(),
            real(curve.survival[t]),
            real(curve.ci_lo(t)),
            real(curve.ci_hi(t)),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::CurveKind;

    #[test]
    fn series_round_trip() {
        let curve = TvCurve { kind: CurveKind::Sup, values: vec![1.0, 0.1 + 0.2, 1e-300] };
        let mut buf = Vec::new();
        write_tv_curve(&mut buf, &curve).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,value"));
        let back: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert_eq!(back, curve.values);
    }

    #[test]
    fn trial_rows() {
        use crate::coupling::{StageLabel, StageVisit};
        let r = TrialRecord {
            seed: 42,
            tau: 9,
            timed_out: true,
            stage_path: vec![StageVisit { label: StageLabel::S3, duration: 9, entry_lo: 3, entry_gap: 6 }],
            assertions_passed: true,
        };
        let mut buf = Vec::new();
        write_trials(&mut buf, &[r]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "seed,tau,stage_path\n42,9,S3:9;timeout\n");
    }
}
