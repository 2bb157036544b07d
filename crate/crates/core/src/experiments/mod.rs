//! Failure-rate sweeps over a grid of loads around a predicted threshold.
//!
//! At every grid point `c`, `trials` hypergraphs with `n = round(c·m)` edges
//! are sampled and each selected method runs on the same instance. Seeds
//! come from [`crate::rng::trial_seed`], so results depend only on the
//! configuration and never on the number of worker threads.

mod sigmoid;

pub use sigmoid::{fit_sigmoid, sigmoid, SigmoidFit};

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{peel, sample_mixed, sample_regular, Hypergraph};
use crate::orientation::{matching_orient, selfless_orient};
use crate::rng::trial_seed;
use crate::thresholds::DegreeSpec;
use crate::xorsat::{from_hypergraph, rank_and_solve};

/// What counts as a failure for each method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// The selfless heuristic finds no orientation with in-degree ≤ ℓ.
    Selfless,
    /// No orientation with in-degree ≤ ℓ exists.
    Matching,
    /// The XORSAT system with random right-hand sides is unsatisfiable.
    Xorsat,
    /// The (ℓ+1)-core is nonempty.
    Peel,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Selfless,
        Method::Matching,
        Method::Xorsat,
        Method::Peel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Selfless => "selfless",
            Method::Matching => "matching",
            Method::Xorsat => "xorsat",
            Method::Peel => "peel",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Degrees {
    /// Every key has exactly `k` choices.
    K(u32),
    Spec(DegreeSpec),
}

impl Degrees {
    fn max_degree(&self) -> u32 {
        match self {
            Degrees::K(k) => *k,
            Degrees::Spec(spec) => spec.max_degree(),
        }
    }

    pub fn sample(&self, m: usize, n: usize, seed: u64) -> Result<Hypergraph> {
        match self {
            Degrees::K(k) => sample_regular(m, n, *k, seed),
            Degrees::Spec(spec) => sample_mixed(m, n, spec, seed),
        }
    }
}

fn default_jobs() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub m: usize,
    pub degrees: Degrees,
    /// Bucket capacity.
    pub ell: u32,
    pub center: f64,
    pub half_width: f64,
    pub step: f64,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
    /// Worker threads; does not affect results.
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    /// Record wall-clock time per method. Off by default so that output is
    /// reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
}

impl SweepConfig {
    /// The standard protocol: 81 loads spaced 1e-4 apart, 100 trials each.
    pub fn around(m: usize, degrees: Degrees, ell: u32, center: f64) -> Self {
        SweepConfig {
            m,
            degrees,
            ell,
            center,
            half_width: 0.004,
            step: 1e-4,
            trials: 100,
            methods: vec![Method::Selfless],
            master_seed: 0,
            jobs: 1,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.step > 0.0) || !self.step.is_finite() {
            return bad(format!("step must be positive, got {}", self.step));
        }
        if !(self.half_width >= 0.0) || !self.half_width.is_finite() {
            return bad(format!(
                "half-width must be nonnegative, got {}",
                self.half_width
            ));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.ell == 0 {
            return bad("bucket size must be at least 1".into());
        }
        if self.methods.is_empty() {
            return bad("no methods selected".into());
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        if self.degrees.max_degree() < 2 || self.degrees.max_degree() as usize > self.m {
            return bad(format!(
                "edge size {} does not fit {} nodes",
                self.degrees.max_degree(),
                self.m
            ));
        }
        if !(self.center - self.half_width > 0.0) {
            return bad("grid must stay at positive loads".into());
        }
        Ok(())
    }

    /// `⌊2·half_width/step⌋ + 1`, allowing for rounding in the ratio.
    pub fn grid_len(&self) -> usize {
        (2.0 * self.half_width / self.step + 1e-9).floor() as usize + 1
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.grid_len())
            .map(|i| self.center - self.half_width + i as f64 * self.step)
            .collect()
    }

    pub fn edges_at(&self, c: f64) -> usize {
        (c * self.m as f64).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodStats {
    pub method: Method,
    pub trials: usize,
    pub failures: usize,
    pub millis: f64,
}

impl MethodStats {
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub c: f64,
    pub n: usize,
    /// In the order of `SweepConfig::methods`.
    pub methods: Vec<MethodStats>,
    /// Trials where selfless succeeded but matching failed. Always 0 unless
    /// an implementation is wrong; counted only when both methods ran.
    pub dominance_violations: usize,
}

impl SweepRecord {
    pub fn stats(&self, method: Method) -> Option<&MethodStats> {
        self.methods.iter().find(|s| s.method == method)
    }
}

struct TrialOutcome {
    failed: Vec<bool>,
    millis: Vec<f64>,
}

fn run_trial(cfg: &SweepConfig, n: usize, seed: u64) -> Result<TrialOutcome> {
    let g = cfg.degrees.sample(cfg.m, n, seed)?;
    let mut failed = Vec::with_capacity(cfg.methods.len());
    let mut millis = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let start = cfg.timing.then(Instant::now);
        let fail = match method {
            Method::Selfless => !selfless_orient(&g, cfg.ell, seed).is_success(),
            Method::Matching => !matching_orient(&g, cfg.ell).is_success(),
            Method::Xorsat => !rank_and_solve(&from_hypergraph(&g, seed)).satisfiable,
            Method::Peel => !peel(&g, cfg.ell + 1).is_empty(),
        };
        failed.push(fail);
        millis.push(start.map_or(0.0, |t| t.elapsed().as_secs_f64() * 1e3));
    }
    Ok(TrialOutcome { failed, millis })
}

/// Runs every (grid point, trial) pair and returns one record per grid
/// point, in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let grid = cfg.grid();
    let jobs: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|gi| (0..cfg.trials).map(move |ti| (gi, ti)))
        .collect();
    let work = |&(gi, ti): &(usize, usize)| {
        run_trial(
            cfg,
            cfg.edges_at(grid[gi]),
            trial_seed(cfg.master_seed, gi as u64, ti as u64),
        )
    };
    let outcomes: Vec<TrialOutcome> = if cfg.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| jobs.par_iter().map(work).collect::<Result<_>>())?
    } else {
        jobs.iter().map(work).collect::<Result<_>>()?
    };

    let selfless = cfg.methods.iter().position(|&m| m == Method::Selfless);
    let matching = cfg.methods.iter().position(|&m| m == Method::Matching);
    let records = grid
        .iter()
        .zip(outcomes.chunks(cfg.trials))
        .map(|(&c, trials)| {
            let methods = cfg
                .methods
                .iter()
                .enumerate()
                .map(|(i, &method)| MethodStats {
                    method,
                    trials: trials.len(),
                    failures: trials.iter().filter(|t| t.failed[i]).count(),
                    millis: trials.iter().map(|t| t.millis[i]).sum(),
                })
                .collect();
            let dominance_violations = match (selfless, matching) {
                (Some(s), Some(mt)) => trials
                    .iter()
                    .filter(|t| !t.failed[s] && t.failed[mt])
                    .count(),
                _ => 0,
            };
            SweepRecord {
                c,
                n: cfg.edges_at(c),
                methods,
                dominance_violations,
            }
        })
        .collect();
    Ok(records)
}

/// `(c, failure rate)` pairs for one method, ready for [`fit_sigmoid`].
pub fn rate_curve(records: &[SweepRecord], method: Method) -> Vec<(f64, f64)> {
    records
        .iter()
        .filter_map(|r| r.stats(method).map(|s| (r.c, s.rate())))
        .collect()
}

/// Formats like C's `%.{precision}g`.
pub fn format_g(x: f64, precision: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let p = precision.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    } else {
        trim(&format!("{:.*}", (p as i32 - 1 - exp) as usize, x))
    }
}

pub const CSV_HEADER: &str = "c,n,method,trials,failures,rate,millis";

/// One CSV row per (record, method), LF line endings, reals as `%.10g`.
pub fn write_csv<W: Write>(mut w: W, records: &[SweepRecord]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        for s in &r.methods {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                format_g(r.c, 10),
                r.n,
                s.method,
                s.trials,
                s.failures,
                format_g(s.rate(), 10),
                format_g(s.millis, 10)
            )?;
        }
    }
    Ok(())
}

pub fn to_csv(records: &[SweepRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Reads `(c, failure rate)` pairs for `method` back from CSV written by
/// [`write_csv`]. Blank lines and lines starting with `{` (an appended fit
/// summary) are skipped.
pub fn read_rates(text: &str, method: Method) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == CSV_HEADER => {}
        _ => return Err(Error::parse(1, format!("expected header {CSV_HEADER:?}"))),
    }
    let mut points = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('{') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::parse(
                i + 1,
                format!("expected 7 fields, found {}", fields.len()),
            ));
        }
        let row_method: Method = fields[2]
            .parse()
            .map_err(|_| Error::parse(i + 1, format!("unknown method {:?}", fields[2])))?;
        if row_method != method {
            continue;
        }
        let number = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::parse(i + 1, format!("not a number: {s:?}")))
        };
        points.push((number(fields[0])?, number(fields[5])?));
    }
    if points.is_empty() {
        return Err(Error::Config(format!("no rows for method {method}")));
    }
    Ok(points)
}
