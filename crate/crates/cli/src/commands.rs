use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use redistwalk::acceptance;
use redistwalk::coupling::{available_kinds, Coupler, CouplingError, CouplingKind};
use redistwalk::montecarlo::{
    dominance_audit, fit_rate_weighted, run_batch, run_batch_on, Batch, BatchSpec, Verdict, TAIL_FLOOR, TAIL_LEVEL,
};
use redistwalk::spectral::{eigen_candidates, l0_survey, slowest_candidate};
use redistwalk::{l0_of, lambda_of, oracle, report, ChainSpec, Law, Site};
use serde::Serialize;

use crate::config::RunConfig;

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> report::CsvResult) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    f(&mut w).with_context(|| format!("writing {}", path.display()))?;
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn describe_law(law: &Law) -> String {
    let parts: Vec<String> = law.support().iter().map(|(s, m)| format!("{s}:{m}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn describe(chain: &ChainSpec) -> String {
    format!(
        "N={} nu0={} nuN={} rho={}",
        chain.n(),
        describe_law(chain.nu0()),
        describe_law(chain.nun()),
        chain.rho()
    )
}

pub fn tv(cfg: &RunConfig) -> Result<bool> {
    let chain = cfg.load_spec()?;
    let n = chain.n();
    let t_max = cfg.horizon.unwrap_or(400) as usize;
    let (x, y) = (cfg.x.unwrap_or(0), cfg.y.unwrap_or(n));
    let pair = oracle::pair_curve(&chain, x, y, t_max)?;
    let (sup, tilde) = oracle::sup_curves(&chain, t_max);
    let dir = cfg.out_dir()?;
    write_file(&dir.join("pair.csv"), |w| report::write_tv_curve(w, &pair))?;
    write_file(&dir.join("sup.csv"), |w| report::write_tv_curve(w, &sup))?;
    write_file(&dir.join("tilde.csv"), |w| report::write_tv_curve(w, &tilde))?;

    println!("spec: {}", describe(&chain));
    println!("horizon: {t_max}");
    println!("d_t({x},{y}) at t={t_max}: {}", report::real(pair.values[t_max]));
    println!("d_t at t={t_max}: {}", report::real(sup.values[t_max]));
    println!("tilde d_t at t={t_max}: {}", report::real(tilde.values[t_max]));
    let audit = oracle::triangle_audit(n, chain.rho(), &sup, &tilde);
    match audit.worst_t {
        None => println!("prop1: PASS (vacuous, nothing to check at horizon {t_max})"),
        Some(t) => println!(
            "prop1: {} (d_t <= {} (tilde d_t + tilde d_t-1) for 1 <= t <= {t_max}; worst margin {:.3e} at t={t})",
            if audit.pass { "PASS" } else { "FAIL" },
            audit.factor,
            audit.worst_margin
        ),
    }
    println!("wrote {}", dir.display());
    Ok(audit.pass)
}

pub fn spectral(cfg: &RunConfig) -> Result<bool> {
    const RESIDUAL_TOL: f64 = 1e-10;
    const MEMBERSHIP_TOL: f64 = 1e-8;

    let chain = cfg.load_spec()?;
    let Some(spec) = chain.as_point_mass() else {
        bail!("spectral needs point-mass laws nu0 = delta_J0 and nuN = delta_JN")
    };
    let n = spec.n;
    let l0 = l0_of(&spec);
    let lambda = lambda_of(l0);
    let candidates = eigen_candidates(&spec);
    let eigenvalues = oracle::full_spectrum(&chain);
    let distance = oracle::distance_to_spectrum(&eigenvalues, lambda);

    println!("spec: {spec} rho={}", chain.rho());
    println!(
        "L0 = max(J0-1, N-1-JN, N+JN-J0)/2 = max({}, {}, {})/2 = {l0}",
        spec.j0 as i64 - 1,
        n as i64 - 1 - spec.jn as i64,
        n as i64 + spec.jn as i64 - spec.j0 as i64
    );
    println!("lambda(L0) = {}", report::real(lambda));
    println!("ln lambda(L0) = {}", report::real(lambda.ln()));
    println!();
    println!("{:<11} {:>23} {:>23} {:>23} {:>10} {:>10}", "family", "wave number", "phase", "eigenvalue", "residual", "boundary");
    let mut worst = 0.0f64;
    for c in &candidates {
        let r = c.eigen_residual(&spec);
        let (a, b) = c.constraint_residuals(&spec);
        worst = worst.max(r);
        println!(
            "{:<11} {:>23} {:>23} {:>23} {:>10.2e} {:>10.2e}",
            c.family.to_string(),
            report::real(c.wave_number),
            report::real(c.phase),
            report::real(c.eigenvalue),
            r,
            a.max(b)
        );
    }
    let slowest = slowest_candidate(&spec);
    println!();
    println!(
        "min wave number: {} = pi/{} ({})",
        report::real(slowest.wave_number),
        (PI / slowest.wave_number).round(),
        slowest.family
    );
    println!(
        "lambda(L0) in spec(P): distance {distance:.2e} over {} eigenvalues, {}",
        eigenvalues.len(),
        if distance <= MEMBERSHIP_TOL { "PASS" } else { "FAIL" }
    );
    println!("candidate residuals: max {worst:.2e}, {}", if worst <= RESIDUAL_TOL { "PASS" } else { "FAIL" });

    let survey = l0_survey(n);
    let sites = |v: &[(Site, Site)]| v.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(" ");
    println!();
    println!("L0 over every point-mass spec with N={n}:");
    println!("  J0 = JN           L0 = {:?} (N/2 = {})", survey.equal_jumps, n / 2);
    println!("  maximum           L0 = {} at {} (N-3 = {})", survey.max_l0, sites(&survey.argmax), survey.quoted_max);
    println!("  minimum           L0 = {} at {}", survey.min_l0, sites(&survey.argmin));
    println!("  2(N-1)/3          {:.4}", survey.quoted_lower);
    println!("  (N-1)/3           {:.4}", survey.equalized_lower);

    let dir = cfg.out_dir()?;
    write_file(&dir.join("candidates.csv"), |w| report::write_candidates(w, &spec, &candidates))?;
    write_file(&dir.join("spectrum.csv"), |w| report::write_spectrum(w, &eigenvalues))?;
    println!("wrote {}", dir.display());
    Ok(worst <= RESIDUAL_TOL && distance <= MEMBERSHIP_TOL)
}

#[derive(Debug, Serialize)]
struct RateReport {
    kind: CouplingKind,
    window: Option<(usize, usize)>,
    slope: Option<f64>,
    target: f64,
    relative_error: Option<f64>,
    note: Option<String>,
}

#[derive(Debug, Serialize)]
struct CoupleReport<'a> {
    spec: &'a ChainSpec,
    start: (Site, Site),
    seed: u64,
    n_trials: u64,
    pass: bool,
    verdicts: Vec<Verdict>,
    rates: Vec<RateReport>,
}

/// What one coupling kind is audited against: `copies` center-started exit
/// times from an interval of length `length`.
struct Target {
    length: usize,
    copies: usize,
}

fn target(chain: &ChainSpec, kind: CouplingKind) -> Target {
    match kind {
        CouplingKind::Deterministic => {
            let spec = chain.as_point_mass().expect("deterministic coupling needs point masses");
            Target { length: l0_of(&spec), copies: 6 + chain.n() / (chain.rho() + 1) }
        }
        CouplingKind::Symmetric => Target { length: chain.n() / 2, copies: 5 },
    }
}

pub fn couple(cfg: &RunConfig, only: Option<CouplingKind>) -> Result<bool> {
    let chain = cfg.load_spec()?;
    let seed = cfg.seed()?;
    let n = chain.n();
    let available = available_kinds(&chain);
    if available.is_empty() {
        bail!("{}", CouplingError::Unsupported);
    }
    let kinds = match only {
        Some(k) if available.contains(&k) => vec![k],
        Some(k) => bail!("the {k} coupling does not apply to this spec; available: {available:?}"),
        None => available,
    };
    let n_trials = cfg.trials.unwrap_or(100_000);
    if n_trials == 0 {
        bail!("trials must be at least 1");
    }
    let (x, y) = (cfg.x.unwrap_or(n / 2 - 1), cfg.y.unwrap_or(n / 2 + 1));
    let odd = x.abs_diff(y) % 2 == 1;
    let couplers = kinds
        .iter()
        .map(|&kind| {
            let c = Coupler::new(&chain, kind)?;
            c.check_start(x, y)?;
            Ok(c)
        })
        .collect::<Result<Vec<_>, CouplingError>>()?;
    let dir = cfg.out_dir()?;

    println!("spec: {}", describe(&chain));
    println!("start: ({x}, {y}), {n_trials} trials, master seed {seed}");
    if odd {
        println!("note: odd gap, so a parity-fix step is prepended; bounds are shifted by one step");
    }

    let mut verdicts = Vec::new();
    let mut rates = Vec::new();
    for coupler in &couplers {
        let kind = coupler.kind();
        let Target { length, copies } = target(&chain, kind);
        let horizon = cfg.horizon.unwrap_or(200 * (length * length) as u64);
        if horizon == 0 {
            bail!("horizon must be at least 1");
        }
        // A fixed offset per kind, so a kind replays the same with or without the other.
        let kind_seed = match kind {
            CouplingKind::Deterministic => seed,
            CouplingKind::Symmetric => seed.wrapping_add(1),
        };
        let spec = BatchSpec { x, y, n_trials, master_seed: kind_seed, horizon };
        let verdict = |check: String, pass: bool, margin: f64| Verdict { check, pass, margin, n_trials, seed: kind_seed };
        println!();
        println!("[{kind}] horizon {horizon}, audited against {copies} x T({length})");
        let run = match cfg.threads {
            Some(t) => run_batch_on(coupler, &spec, t),
            None => run_batch(coupler, &spec),
        };
        let batch: Batch = match run {
            Ok(b) => b,
            Err(CouplingError::Violation(v)) => {
                println!("  stage invariants: FAIL ({v:?})");
                verdicts.push(verdict(format!("{kind} stage invariants: {v:?}"), false, f64::NAN));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let illegal = batch.stats.illegal_paths;
        println!("  stage invariants: {} ({illegal} illegal stage paths)", if illegal == 0 { "PASS" } else { "FAIL" });
        verdicts.push(verdict(format!("{kind} stage invariants and stage paths"), illegal == 0, -(illegal as f64)));

        let survival = batch.survival(horizon);
        let mut bound = oracle::exit_sum_tail(&vec![length; copies], survival.t_max());
        if odd {
            bound.pop();
            bound.insert(0, 1.0);
        }
        match dominance_audit(&survival, &bound) {
            Ok(d) => {
                println!(
                    "  domination: {} (worst margin {:.4e} at t={}, DKW radius {:.4e}, {} timeouts)",
                    if d.pass { "PASS" } else { "FAIL" },
                    d.margin,
                    d.worst_t,
                    survival.radius,
                    batch.stats.timeouts
                );
                verdicts.push(verdict(
                    format!("{kind} P(tau > t) <= P({copies} x T({length}) > t) + DKW, worst t={}", d.worst_t),
                    d.pass,
                    d.margin,
                ));
            }
            Err(e) => bail!("bound grid mismatch: {e:?}"),
        }

        let target_rate = lambda_of(length).ln();
        let window = cfg.window.or_else(|| survival.tail_window(TAIL_LEVEL, TAIL_FLOOR));
        let weights: Vec<f64> = survival.survivors.iter().map(|&s| s as f64).collect();
        let fit = window.map(|w| fit_rate_weighted(&survival.survival, Some(&weights), w, 0));
        let rate = match fit {
            Some(Ok(f)) => {
                let rel = f.slope / target_rate - 1.0;
                println!(
                    "  rate: slope {:.6} over [{}, {}] vs ln lambda({length}) = {:.6} ({:+.2}%)",
                    f.slope,
                    f.window.0,
                    f.window.1,
                    target_rate,
                    100.0 * rel
                );
                RateReport { kind, window, slope: Some(f.slope), target: target_rate, relative_error: Some(rel), note: None }
            }
            Some(Err(e)) => {
                println!("  rate: no fit ({e})");
                RateReport { kind, window, slope: None, target: target_rate, relative_error: None, note: Some(e.to_string()) }
            }
            None => {
                let note = "too few surviving trials for a tail fit".to_string();
                println!("  rate: no fit ({note})");
                RateReport { kind, window, slope: None, target: target_rate, relative_error: None, note: Some(note) }
            }
        };
        rates.push(rate);

        write_file(&dir.join(format!("trials_{kind}.csv")), |w| report::write_trials(w, &batch.records))?;
        write_file(&dir.join(format!("survival_{kind}.csv")), |w| report::write_survival(w, &survival))?;
        write_file(&dir.join(format!("bound_{kind}.csv")), |w| report::write_series(w, &bound))?;
    }

    if rates.len() > 1 {
        let slopes: Vec<String> = rates
            .iter()
            .map(|r| format!("{} {}", r.kind, r.slope.map_or("n/a".to_string(), |s| format!("{s:.6}"))))
            .collect();
        println!();
        println!("rates: {} (ln lambda(N/2) = {:.6})", slopes.join(", "), lambda_of(n / 2).ln());
    }

    let pass = !verdicts.is_empty() && verdicts.iter().all(|v| v.pass);
    let report = CoupleReport { spec: &chain, start: (x, y), seed, n_trials, pass, verdicts, rates };
    let path = dir.join("report.json");
    std::fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    println!();
    println!("couple: {}", if pass { "PASS" } else { "FAIL" });
    println!("wrote {}", dir.display());
    Ok(pass)
}

pub struct VerifyOptions {
    pub config: acceptance::Config,
    pub only: Vec<u8>,
    pub out: Option<std::path::PathBuf>,
}

pub fn verify(opts: &VerifyOptions) -> Result<bool> {
    for id in &opts.only {
        if !acceptance::CRITERIA.iter().any(|(c, _)| c == id) {
            bail!("no criterion {id}; criteria are numbered 1 to {}", acceptance::CRITERIA.len());
        }
    }
    let report = acceptance::run(&opts.config, &opts.only);
    for c in &report.criteria {
        eprintln!("{}", c.line());
    }
    let json = serde_json::to_string_pretty(&report)?;
    println!("{json}");
    if let Some(path) = &opts.out {
        std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.pass)
}
