//! Least-squares fit of `σ(c; a, b) = 1 / (1 + e^{-(c-a)/b})` to failure
//! rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;
const PARAM_TOL: f64 = 1e-10;

pub fn sigmoid(c: f64, a: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::domain(format!(
            "sigmoid width must be positive, got {b}"
        )));
    }
    Ok(logistic(c, a, b))
}

fn logistic(c: f64, a: f64, b: f64) -> f64 {
    1.0 / (1.0 + (-(c - a) / b).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmoidFit {
    /// Inflection point: the empirical threshold.
    pub a: f64,
    /// Width of the transition.
    pub b: f64,
    /// Residual sum of squares.
    pub sum_res: f64,
    #[serde(skip)]
    pub iterations: usize,
    pub converged: bool,
}

impl SigmoidFit {
    /// `{"a":…,"b":…,"sum_res":…,"converged":…}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fit serializes")
    }
}

fn sum_sq(points: &[(f64, f64)], a: f64, b: f64) -> f64 {
    points
        .iter()
        .map(|&(c, y)| {
            let r = y - logistic(c, a, b);
            r * r
        })
        .sum()
}

/// Starting point: `a` where the rates first cross 0.5 (linearly
/// interpolated between the bracketing points, or the middle of the grid if
/// they never do); `b` twice the median grid spacing.
fn initial_guess(points: &[(f64, f64)]) -> (f64, f64) {
    let first = points[0].0;
    let last = points[points.len() - 1].0;
    let a = points
        .windows(2)
        .find(|w| (w[0].1 < 0.5) != (w[1].1 < 0.5))
        .map(|w| {
            let (c0, y0) = w[0];
            let (c1, y1) = w[1];
            c0 + (0.5 - y0) / (y1 - y0) * (c1 - c0)
        })
        .unwrap_or(0.5 * (first + last));
    let mut gaps: Vec<f64> = points
        .windows(2)
        .map(|w| w[1].0 - w[0].0)
        .filter(|&d| d > 0.0)
        .collect();
    gaps.sort_by(f64::total_cmp);
    let step = gaps.get(gaps.len() / 2).copied().unwrap_or(1.0);
    (a, 2.0 * step)
}

/// Damped Gauss–Newton on the residual sum of squares.
///
/// The full Gauss–Newton step is halved until the residual does not grow
/// and the width stays positive. Stops when the accepted update is below
/// 1e-10 in both parameters, when no damped step improves the fit, or after
/// 500 iterations.
pub fn fit_sigmoid(points: &[(f64, f64)]) -> Result<SigmoidFit> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|&(c, y)| !c.is_finite() || !(0.0..=1.0).contains(&y))
    {
        return Err(Error::domain("rates must lie in [0, 1] at finite loads"));
    }
    if points.iter().all(|p| p.1 == 0.0) || points.iter().all(|p| p.1 == 1.0) {
        return Err(Error::DegenerateFit(
            "rates are constant at 0 or 1; there is no transition to locate".into(),
        ));
    }
    let mut points = points.to_vec();
    points.sort_by(|p, q| p.0.total_cmp(&q.0));

    let (mut a, mut b) = initial_guess(&points);
    let mut ssr = sum_sq(&points, a, b);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITER {
        iterations += 1;
        let (mut jaa, mut jab, mut jbb, mut ga, mut gb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(c, y) in &points {
            let s = logistic(c, a, b);
            let ds = s * (1.0 - s);
            let da = -ds / b;
            let db = -ds * (c - a) / (b * b);
            let r = y - s;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * r;
            gb += db * r;
        }
        let ridge = 1e-12 * (jaa + jbb);
        let (jaa, jbb) = (jaa + ridge, jbb + ridge);
        let det = jaa * jbb - jab * jab;
        if !(det.abs() > 0.0) || !det.is_finite() {
            break;
        }
        let delta_a = (jbb * ga - jab * gb) / det;
        let delta_b = (jaa * gb - jab * ga) / det;

        let mut damping = 1.0;
        let mut accepted = None;
        while damping > 1e-12 {
            let na = a + damping * delta_a;
            let nb = b + damping * delta_b;
            if nb > 0.0 {
                let nssr = sum_sq(&points, na, nb);
                if nssr <= ssr {
                    accepted = Some((na, nb, nssr));
                    break;
                }
            }
            damping *= 0.5;
        }
        let Some((na, nb, nssr)) = accepted else {
            // No descent direction left at working precision.
            converged = true;
            break;
        };
        let moved = (na - a).abs().max((nb - b).abs());
        a = na;
        b = nb;
        ssr = nssr;
        if moved < PARAM_TOL {
            converged = true;
            break;
        }
    }
    Ok(SigmoidFit {
        a,
        b,
        sum_res: ssr,
        iterations,
        converged,
    })
}
