//! Poisson probabilities computed by direct pmf recurrence.

use crate::error::{Error, Result};

/// Above this mean `e^{-beta}` underflows and terms are formed in log space.
const LOG_SPACE_BETA: f64 = 700.0;

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::domain(format!(
            "Poisson mean must be finite and nonnegative, got {beta}"
        )));
    }
    Ok(())
}

fn ln_factorial(j: u32) -> f64 {
    (2..=j).map(|i| (i as f64).ln()).sum()
}

/// `Pr[Po(beta) = j]`.
pub fn poisson_pmf(beta: f64, j: u32) -> Result<f64> {
    check_beta(beta)?;
    Ok(pmf_unchecked(beta, j))
}

fn pmf_unchecked(beta: f64, j: u32) -> f64 {
    if beta == 0.0 {
        return if j == 0 { 1.0 } else { 0.0 };
    }
    if beta > LOG_SPACE_BETA {
        return (-beta + j as f64 * beta.ln() - ln_factorial(j)).exp();
    }
    let mut p = (-beta).exp();
    for i in 1..=j {
        p *= beta / i as f64;
    }
    p
}

/// `Pr[Po(beta) >= j]`.
///
/// When `j` lies above the mean the upper tail is summed directly, so small
/// tails keep full relative precision; otherwise the result is one minus
/// the lower sum.
pub fn poisson_tail(beta: f64, j: u32) -> Result<f64> {
    check_beta(beta)?;
    Ok(tail_unchecked(beta, j))
}

pub(crate) fn tail_unchecked(beta: f64, j: u32) -> f64 {
    if j == 0 {
        return 1.0;
    }
    if beta == 0.0 {
        return 0.0;
    }
    if j as f64 > beta {
        let mut term = pmf_unchecked(beta, j);
        let mut sum = 0.0;
        let mut i = j;
        while term > 0.0 {
            sum += term;
            i += 1;
            term *= beta / i as f64;
            if term < sum * 1e-17 {
                break;
            }
        }
        return sum.min(1.0);
    }
    let lower: f64 = if beta > LOG_SPACE_BETA {
        (0..j).map(|i| pmf_unchecked(beta, i)).sum()
    } else {
        let mut term = (-beta).exp();
        let mut sum = 0.0;
        for i in 0..j {
            sum += term;
            term *= beta / (i + 1) as f64;
        }
        sum
    };
    (1.0 - lower).clamp(0.0, 1.0)
}
