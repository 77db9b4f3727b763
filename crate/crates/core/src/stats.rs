//! Estimation and hypothesis-testing utilities shared by the experiments:
//! moments with standard errors, log-log scaling fits, the two-sample
//! Kolmogorov-Smirnov test with its asymptotic p-value, empirical
//! characteristic functions, and the moment-difference dependence test.
//!
//! All estimators are deterministic functions of their inputs; confidence
//! intervals are mean +/- 4 standard errors throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limit::CnTable;

/// Half-width of every confidence interval, in standard errors.
pub const CI_STDERRS: f64 = 4.0;

/// Sample mean of `x^k` with plug-in standard error.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
    pub order: u32,
}

impl MomentEstimate {
    pub fn ci(&self) -> (f64, f64) {
        (
            self.mean - CI_STDERRS * self.stderr,
            self.mean + CI_STDERRS * self.stderr,
        )
    }
}

pub fn moment_estimate(samples: &[f64], order: u32) -> Result<MomentEstimate> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            need: 2,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let powers: Vec<f64> = samples.iter().map(|x| x.powi(order as i32)).collect();
    let mean = powers.iter().sum::<f64>() / n;
    let var = powers.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(MomentEstimate {
        mean,
        stderr: (var / n).sqrt(),
        count: samples.len(),
        order,
    })
}

/// Unbiased sample variance with an asymptotic standard error from the
/// fourth central moment.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct VarianceEstimate {
    pub variance: f64,
    pub stderr: f64,
    pub count: usize,
}

pub fn variance_estimate(samples: &[f64]) -> Result<VarianceEstimate> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            need: 2,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = samples.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let variance = m2 * n / (n - 1.0);
    let stderr = ((m4 - m2 * m2).max(0.0) / n).sqrt();
    Ok(VarianceEstimate {
        variance,
        stderr,
        count: samples.len(),
    })
}

/// Least-squares line through `(log n, log statistic)` pairs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn scaling_fit(pairs: &[(f64, f64)]) -> Result<ScalingFit> {
    if pairs.len() < 3 {
        return Err(Error::TooFewSamples {
            need: 3,
            got: pairs.len(),
        });
    }
    if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| !(x > 0.0) || !(y > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "scaling fit needs positive pairs, got ({x}, {y})"
        )));
    }
    let logs: Vec<(f64, f64)> = pairs.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|&(x, _)| x).sum::<f64>() / n;
    let mean_y = logs.iter().map(|&(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mean_x).powi(2)).sum();
    let sxy: f64 = logs
        .iter()
        .map(|&(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = (logs
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ScalingFit {
        slope,
        intercept,
        residual,
    })
}

/// Two-sample Kolmogorov-Smirnov statistic with its asymptotic p-value.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n_a: usize,
    pub n_b: usize,
}

impl KsResult {
    pub fn rejected_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    for side in [a, b] {
        if side.len() < 100 {
            return Err(Error::TooFewSamples {
                need: 100,
                got: side.len(),
            });
        }
        if side.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidInput("samples contain NaN".into()));
        }
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(|x, y| x.partial_cmp(y).expect("no NaN after check"));
    sb.sort_by(|x, y| x.partial_cmp(y).expect("no NaN after check"));
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < sa.len() && j < sb.len() {
        let (va, vb) = (sa[i], sb[j]);
        if va <= vb {
            while i < sa.len() && sa[i] == va {
                i += 1;
            }
        }
        if vb <= va {
            while j < sb.len() && sb[j] == vb {
                j += 1;
            }
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(KsResult {
        statistic: d,
        p_value: ks_asymptotic_p(d, sa.len(), sb.len()),
        n_a: sa.len(),
        n_b: sb.len(),
    })
}

/// Asymptotic Kolmogorov tail `Q(lambda) = 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2)`
/// with the small-sample correction of the effective size.
fn ks_asymptotic_p(d: f64, na: usize, nb: usize) -> f64 {
    let ne = (na as f64 * nb as f64) / (na as f64 + nb as f64);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    if lambda < 1e-9 {
        return 1.0;
    }
    let mut sum = 0.0f64;
    let mut sign = 1.0f64;
    for j in 1..=100 {
        let term = (-2.0 * (j as f64).powi(2) * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-12 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Empirical characteristic function `mean exp(i theta x)` with
/// componentwise standard errors.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CharFnEstimate {
    pub re: f64,
    pub im: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub count: usize,
}

pub fn empirical_char_fn(samples: &[f64], theta: f64) -> Result<CharFnEstimate> {
    if samples.len() < 100 {
        return Err(Error::TooFewSamples {
            need: 100,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let (mut sum_re, mut sum_im) = (0.0f64, 0.0f64);
    for &x in samples {
        sum_re += (theta * x).cos();
        sum_im += (theta * x).sin();
    }
    let re = sum_re / n;
    let im = sum_im / n;
    let (mut var_re, mut var_im) = (0.0f64, 0.0f64);
    for &x in samples {
        var_re += ((theta * x).cos() - re).powi(2);
        var_im += ((theta * x).sin() - im).powi(2);
    }
    Ok(CharFnEstimate {
        re,
        im,
        stderr_re: (var_re / (n - 1.0) / n).sqrt(),
        stderr_im: (var_im / (n - 1.0) / n).sqrt(),
        count: samples.len(),
    })
}

/// Plug-in estimate of `E[xy] - E[x] E[y]` with an influence-function
/// standard error.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MomentDifference {
    pub joint: f64,
    pub product: f64,
    pub difference: f64,
    pub stderr: f64,
    pub count: usize,
}

impl MomentDifference {
    pub fn ci(&self) -> (f64, f64) {
        (
            self.difference - CI_STDERRS * self.stderr,
            self.difference + CI_STDERRS * self.stderr,
        )
    }

    pub fn ci_excludes_zero(&self) -> bool {
        let (lo, hi) = self.ci();
        lo > 0.0 || hi < 0.0
    }
}

pub fn moment_difference(x: &[f64], y: &[f64]) -> Result<MomentDifference> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "paired samples must have equal length, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::TooFewSamples { need: 2, got: x.len() });
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let joint = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / n;
    let difference = joint - mean_x * mean_y;
    let mut var = 0.0f64;
    for (&a, &b) in x.iter().zip(y) {
        let influence = (a * b - joint) - mean_y * (a - mean_x) - mean_x * (b - mean_y);
        var += influence * influence;
    }
    Ok(MomentDifference {
        joint,
        product: mean_x * mean_y,
        difference,
        stderr: (var / (n - 1.0) / n).sqrt(),
        count: x.len(),
    })
}

/// Moment of a standard Gaussian: `(order-1)!!` for even order.
pub fn gaussian_moment(order: u32) -> f64 {
    assert!(order % 2 == 0, "odd Gaussian moments vanish");
    let mut m = 1.0f64;
    let mut k = order as i64 - 1;
    while k > 1 {
        m *= k as f64;
        k -= 2;
    }
    m
}

/// Outcome of the moment-difference dependence test between the
/// self-intersection time and an even power of the Brownian endpoint.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DependenceReport {
    pub order: u32,
    /// `E[V B^n]` estimate.
    pub joint: f64,
    pub joint_stderr: f64,
    /// `E[V] E[B^n]` estimate.
    pub product: f64,
    pub difference: f64,
    pub difference_stderr: f64,
    pub ci: (f64, f64),
    /// `C(n) E[B^n]`, the predicted joint moment.
    pub reference_joint: f64,
    /// `C(0) E[B^n]`, the joint moment under independence.
    pub reference_product: f64,
    /// `(C(n) - C(0)) E[B^n]`, the predicted difference.
    pub reference_difference: f64,
    pub n_samples: usize,
    /// True when the difference CI excludes zero.
    pub reject_independence: bool,
}

/// Test `E[V B^n] = C(n) E[B^n]` against the independence prediction
/// `C(0) E[B^n]` on `(delta, b, v)` triples.
pub fn dependence_test(
    samples: &[(f64, f64, f64)],
    order: u32,
    cn_table: &CnTable,
) -> Result<DependenceReport> {
    if order != 2 && order != 4 {
        return Err(Error::InvalidInput(format!(
            "dependence test is defined for orders 2 and 4, got {order}"
        )));
    }
    if samples.len() < 10_000 {
        return Err(Error::TooFewSamples {
            need: 10_000,
            got: samples.len(),
        });
    }
    let cn = cn_table
        .cn(order)
        .ok_or_else(|| Error::InvalidInput(format!("C({order}) missing from table")))?;
    let c0 = cn_table
        .cn(0)
        .ok_or_else(|| Error::InvalidInput("C(0) missing from table".into()))?;
    let v: Vec<f64> = samples.iter().map(|&(_, _, v)| v).collect();
    let bpow: Vec<f64> = samples
        .iter()
        .map(|&(_, b, _)| b.powi(order as i32))
        .collect();
    let diff = moment_difference(&v, &bpow)?;
    let joint_se = moment_estimate(
        &samples
            .iter()
            .map(|&(_, b, vv)| vv * b.powi(order as i32))
            .collect::<Vec<f64>>(),
        1,
    )?
    .stderr;
    let gm = gaussian_moment(order);
    Ok(DependenceReport {
        order,
        joint: diff.joint,
        joint_stderr: joint_se,
        product: diff.product,
        difference: diff.difference,
        difference_stderr: diff.stderr,
        ci: diff.ci(),
        reference_joint: cn * gm,
        reference_product: c0 * gm,
        reference_difference: (cn - c0) * gm,
        n_samples: samples.len(),
        reject_independence: diff.ci_excludes_zero(),
    })
}
