//! Analytic core densities and load thresholds.
//!
//! Peeling a random hypergraph with `n = c·m` edges leaves each node alive
//! with a probability governed by a single Poisson parameter `β`. The load
//! `c` and every core statistic are explicit functions of `β`, so all the
//! solvers here work along `β` and map back to `c` through
//! `g(β) = β / Λ'(Pr[Po(β) ≥ ℓ−1])`, which for `k` choices per key is
//! `β / (k·Pr[Po(β) ≥ ℓ−1]^{k−1})`.
//!
//! * the minimum of `g` is the point `c*` where a nonempty ℓ-core appears;
//! * above it, `β(c)` is the root of `g(β) = c` on the increasing branch;
//! * the threshold `c_{k,ℓ}` is the load at which the core's edge density
//!   reaches `ℓ−1`.

mod degree;
mod poisson;

pub use degree::{optimal_distribution, DegreeSpec, MAX_DEGREE};
pub use poisson::{poisson_pmf, poisson_tail};

use poisson::tail_unchecked;

use crate::error::{Error, Result};

/// Left end of the search interval for the minimizer of `g`.
const BETA_FLOOR: f64 = 1e-6;
const BETA_CEILING: f64 = 1e6;
/// Bracket width for `β*`.
const MINIMIZER_TOL: f64 = 1e-12;
/// Relative bracket width for roots in `β`.
const ROOT_TOL: f64 = 1e-13;
/// Largest acceptable final bracket width of a threshold, in units of load.
pub const THRESHOLD_TOL: f64 = 1e-10;

const FIXED_POINT_TOL: f64 = 1e-13;
const FIXED_POINT_MAX_ITER: usize = 1_000_000;

/// Predicted shape of the ℓ-core at load `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorePrediction {
    pub beta: f64,
    /// Expected `m̂ / m`.
    pub node_fraction: f64,
    /// Expected `n̂ / n`.
    pub edge_fraction: f64,
    /// Expected `n̂ / m̂`.
    pub edge_density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    /// Appearance point of the ℓ-core, `min g`.
    pub c_star: f64,
    /// Minimizer of `g`.
    pub beta_star: f64,
    /// Load at which the core density reaches `ℓ−1`.
    pub c_threshold: f64,
    /// `β(c_threshold)`.
    pub beta_threshold: f64,
    /// Width of the final bracket around `c_threshold`.
    pub residual: f64,
}

/// The family of core equations for one degree distribution and core order.
trait CoreModel {
    fn ell(&self) -> u32;
    /// `ln g(β)`; infinite where the tail underflows.
    fn ln_g(&self, beta: f64) -> f64;
    /// Expected fraction of edges that survive peeling.
    fn edge_fraction(&self, beta: f64) -> f64;
    /// Expected core edge density.
    fn density(&self, beta: f64) -> f64;

    fn g(&self, beta: f64) -> f64 {
        self.ln_g(beta).exp()
    }

    fn node_fraction(&self, beta: f64) -> f64 {
        tail_unchecked(beta, self.ell())
    }
}

struct Regular {
    k: u32,
    ell: u32,
}

impl CoreModel for Regular {
    fn ell(&self) -> u32 {
        self.ell
    }

    fn ln_g(&self, beta: f64) -> f64 {
        let t = tail_unchecked(beta, self.ell - 1);
        beta.ln() - (self.k as f64).ln() - (self.k - 1) as f64 * t.ln()
    }

    fn edge_fraction(&self, beta: f64) -> f64 {
        tail_unchecked(beta, self.ell - 1).powi(self.k as i32)
    }

    fn density(&self, beta: f64) -> f64 {
        let t = tail_unchecked(beta, self.ell - 1);
        let p = tail_unchecked(beta, self.ell);
        beta * t / (self.k as f64 * p)
    }
}

struct Mixed<'a> {
    spec: &'a DegreeSpec,
    ell: u32,
}

impl CoreModel for Mixed<'_> {
    fn ell(&self) -> u32 {
        self.ell
    }

    fn ln_g(&self, beta: f64) -> f64 {
        let t = tail_unchecked(beta, self.ell - 1);
        beta.ln() - self.spec.lambda_prime(t).ln()
    }

    fn edge_fraction(&self, beta: f64) -> f64 {
        self.spec.lambda(tail_unchecked(beta, self.ell - 1))
    }

    fn density(&self, beta: f64) -> f64 {
        let t = tail_unchecked(beta, self.ell - 1);
        let p = tail_unchecked(beta, self.ell);
        beta * self.spec.lambda(t) / (self.spec.lambda_prime(t) * p)
    }
}

fn check_regular(k: u32, ell: u32) -> Result<Regular> {
    if k < 2 || ell < 2 {
        return Err(Error::domain(format!(
            "need k >= 2 and ell >= 2, got k={k}, ell={ell}"
        )));
    }
    if k > MAX_DEGREE {
        return Err(Error::domain(format!("k={k} exceeds {MAX_DEGREE}")));
    }
    if k + ell <= 4 {
        return Err(Error::UnsupportedCase { k, ell });
    }
    Ok(Regular { k, ell })
}

fn check_mixed(spec: &DegreeSpec, ell: u32) -> Result<Mixed<'_>> {
    if ell < 2 {
        return Err(Error::domain(format!("need ell >= 2, got {ell}")));
    }
    let kappa = spec.mean();
    if ell == 2 && kappa <= 2.0 {
        return Err(Error::UnsupportedSpec(format!(
            "mean number of choices {kappa} must exceed 2 for ell = 2"
        )));
    }
    Ok(Mixed { spec, ell })
}

/// `g_{k,ℓ}(β) = β / (k · Pr[Po(β) ≥ ℓ−1]^{k−1})`.
pub fn g(k: u32, ell: u32, beta: f64) -> Result<f64> {
    if k < 2 || ell < 1 {
        return Err(Error::domain(format!(
            "need k >= 2 and ell >= 1, got k={k}, ell={ell}"
        )));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!(
            "beta must be positive and finite, got {beta}"
        )));
    }
    let t = tail_unchecked(beta, ell - 1);
    if t == 0.0 {
        return Err(Error::domain(format!(
            "Pr[Po({beta}) >= {}] vanishes",
            ell - 1
        )));
    }
    Ok(beta / (k as f64 * t.powi(k as i32 - 1)))
}

/// Golden-section search for the minimizer of `ln g` on `[BETA_FLOOR, B]`,
/// where `B` is doubled until `g` is increasing there.
fn appearance(model: &impl CoreModel) -> Result<(f64, f64)> {
    let mut upper = 1.0;
    while !(model.ln_g(upper) > model.ln_g(upper / 2.0)) {
        upper *= 2.0;
        if upper > BETA_CEILING {
            return Err(Error::Numerical(
                "could not bracket the minimum of g".into(),
            ));
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (BETA_FLOOR, upper);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = model.ln_g(x1);
    let mut f2 = model.ln_g(x2);
    while b - a > MINIMIZER_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = model.ln_g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = model.ln_g(x2);
        }
    }
    let (beta, ln_min) = [(a, model.ln_g(a)), (x1, f1), (x2, f2), (b, model.ln_g(b))]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .expect("four candidates");
    if !ln_min.is_finite() {
        return Err(Error::Numerical("g has no finite minimum".into()));
    }
    Ok((beta, ln_min.exp()))
}

/// Bisection for `f(β) = 0` with `f(lo) < 0 <= f(hi)`.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    for _ in 0..400 {
        if hi - lo <= ROOT_TOL * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn expand_until(start: f64, pred: impl Fn(f64) -> bool) -> Result<f64> {
    let mut hi = start;
    while !pred(hi) {
        hi *= 2.0;
        if !hi.is_finite() || hi > BETA_CEILING {
            return Err(Error::Numerical("failed to bracket a root in beta".into()));
        }
    }
    Ok(hi)
}

fn beta_on_branch(model: &impl CoreModel, c: f64, beta_star: f64, c_star: f64) -> Result<f64> {
    if !(c > c_star) {
        return Err(Error::Subcritical { c, c_star });
    }
    let hi = expand_until(2.0 * beta_star + 1.0, |b| model.g(b) >= c)?;
    let (lo, hi) = bisect(beta_star, hi, |b| model.g(b) - c);
    Ok(0.5 * (lo + hi))
}

fn threshold(model: &impl CoreModel) -> Result<ThresholdResult> {
    let (beta_star, c_star) = appearance(model)?;
    let target = (model.ell() - 1) as f64;
    if model.density(beta_star) >= target {
        // The core is already at least this dense when it appears.
        return Ok(ThresholdResult {
            c_star,
            beta_star,
            c_threshold: c_star,
            beta_threshold: beta_star,
            residual: 0.0,
        });
    }
    let hi = expand_until(2.0 * beta_star + 1.0, |b| model.density(b) > target)?;
    check_density_monotone(model, beta_star, hi)?;
    let (lo, hi) = bisect(beta_star, hi, |b| model.density(b) - target);
    let beta = 0.5 * (lo + hi);
    let residual = (model.g(hi) - model.g(lo)).abs();
    if residual > THRESHOLD_TOL {
        return Err(Error::Numerical(format!(
            "threshold bracket [{}, {}] did not shrink below {THRESHOLD_TOL}",
            model.g(lo),
            model.g(hi)
        )));
    }
    Ok(ThresholdResult {
        c_star,
        beta_star,
        c_threshold: model.g(beta),
        beta_threshold: beta,
        residual,
    })
}

/// Bisection on the density assumes it increases along the supercritical
/// branch; sample the bracket and refuse to continue if it does not.
fn check_density_monotone(model: &impl CoreModel, lo: f64, hi: f64) -> Result<()> {
    const SAMPLES: usize = 64;
    let mut prev = model.density(lo);
    for i in 1..=SAMPLES {
        let beta = lo + (hi - lo) * i as f64 / SAMPLES as f64;
        let d = model.density(beta);
        if d < prev - 1e-12 * prev.abs().max(1.0) {
            return Err(Error::Numerical(format!(
                "core density is not monotone on [{lo}, {hi}]: drops to {d} at beta={beta}"
            )));
        }
        prev = d;
    }
    Ok(())
}

fn predict(model: &impl CoreModel, c: f64) -> Result<CorePrediction> {
    let (beta_star, c_star) = appearance(model)?;
    let beta = beta_on_branch(model, c, beta_star, c_star)?;
    Ok(CorePrediction {
        beta,
        node_fraction: model.node_fraction(beta),
        edge_fraction: model.edge_fraction(beta),
        edge_density: model.density(beta),
    })
}

/// Minimizer `β*` and minimum `c*` of `g_{k,ℓ}`: the load above which a
/// random k-uniform hypergraph has a nonempty ℓ-core.
pub fn core_appearance(k: u32, ell: u32) -> Result<(f64, f64)> {
    appearance(&check_regular(k, ell)?)
}

/// The root `β > β*` of `g_{k,ℓ}(β) = c`.
pub fn beta_of_c(k: u32, ell: u32, c: f64) -> Result<f64> {
    let model = check_regular(k, ell)?;
    let (beta_star, c_star) = appearance(&model)?;
    beta_on_branch(&model, c, beta_star, c_star)
}

/// Expected ℓ-core size and density at load `c > c*`.
pub fn predict_core(k: u32, ell: u32, c: f64) -> Result<CorePrediction> {
    predict(&check_regular(k, ell)?, c)
}

/// Core prediction for a mixed number of choices per key.
pub fn predict_mixed_core(spec: &DegreeSpec, ell: u32, c: f64) -> Result<CorePrediction> {
    predict(&check_mixed(spec, ell)?, c)
}

/// `c_{k,ℓ}`: the load at which the ℓ-core reaches edge density `ℓ−1`.
/// For `ℓ = 2, k ≥ 3` this is the k-ary cuckoo hashing threshold.
pub fn orientation_threshold(k: u32, ell: u32) -> Result<ThresholdResult> {
    threshold(&check_regular(k, ell)?)
}

/// `c_{κ*,ℓ}` for a distribution of choices per key.
pub fn mixed_threshold(spec: &DegreeSpec, ell: u32) -> Result<ThresholdResult> {
    threshold(&check_mixed(spec, ell)?)
}

/// Empirical closed form `0.5 / (3 − κ*)` of the 2-choice/3-choice
/// threshold, observed for `κ* ≤ 2.25`. Informational only.
pub fn small_kappa_closed_form(kappa: f64) -> Option<f64> {
    (kappa > 2.0 && kappa <= 2.25).then(|| 0.5 / (3.0 - kappa))
}

/// Iterates of `p_{j+1} = Pr[Po(c·Λ'(1 − p_j)) ≤ ℓ−2]` from `p_0 = 0`: the
/// probability that a node at depth `j` of the peeling tree is deleted.
#[derive(Debug, Clone)]
pub struct FixedPointIter<'a> {
    spec: &'a DegreeSpec,
    c: f64,
    ell: u32,
    p: f64,
}

impl Iterator for FixedPointIter<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let beta = self.c * self.spec.lambda_prime(1.0 - self.p);
        self.p = 1.0 - tail_unchecked(beta, self.ell - 1);
        Some(self.p)
    }
}

pub fn mixed_fixed_point_iterates(
    spec: &DegreeSpec,
    c: f64,
    ell: u32,
) -> Result<FixedPointIter<'_>> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::domain(format!("load must be positive, got {c}")));
    }
    if ell < 2 {
        return Err(Error::domain(format!("need ell >= 2, got {ell}")));
    }
    Ok(FixedPointIter {
        spec,
        c,
        ell,
        p: 0.0,
    })
}

/// The smallest nonnegative solution of `p = Pr[Po(c·Λ'(1−p)) ≤ ℓ−2]`,
/// found as the limit of the peeling recurrence. Returns 1 when the
/// process deletes everything.
pub fn mixed_fixed_point(spec: &DegreeSpec, c: f64, ell: u32) -> Result<f64> {
    let mut prev = 0.0;
    for p in mixed_fixed_point_iterates(spec, c, ell)?.take(FIXED_POINT_MAX_ITER) {
        if 1.0 - p < FIXED_POINT_TOL {
            return Ok(1.0);
        }
        if (p - prev).abs() < FIXED_POINT_TOL {
            return Ok(p);
        }
        prev = p;
    }
    Ok(prev)
}
