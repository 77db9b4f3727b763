//! Continuum objects: Brownian paths, occupation-time local time profiles,
//! the self-similar scenery integral sampled on top of them, the
//! self-intersection time, and the dependence constants C(n).
//!
//! Local time is estimated by bin occupation of the discretized path: each
//! time step `dt` is attributed to the bin of the left endpoint, which
//! conserves total occupation mass exactly. Conditionally on the path, the
//! scenery integral at time t is a centered Gaussian whose variance is the
//! integral of the squared local time, so it can be drawn either through
//! the explicit two-half-axis integral or as a single conditional draw;
//! both produce the same law.

use std::io::Write;

use crate::error::{Error, Result};
use crate::rng::{self, RngStream};
use crate::stats::{self, KsResult};

/// Discretized standard Brownian path on a uniform grid.
#[derive(Clone, Debug)]
pub struct BrownianPath {
    dt: f64,
    values: Vec<f64>,
}

impl BrownianPath {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.dt
    }

    /// Path value at time `t` (nearest grid point).
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let idx = (t / self.dt).round() as usize;
        if idx >= self.values.len() {
            return Err(Error::OutOfRange {
                index: idx,
                horizon: self.values.len() - 1,
            });
        }
        Ok(self.values[idx])
    }
}

/// Simulate a Brownian path on `[0, t_max]` with step `dt`.
pub fn simulate_brownian(t_max: f64, dt: f64, stream: &mut RngStream) -> Result<BrownianPath> {
    if !(t_max > 0.0) || !(dt > 0.0 && dt <= t_max) {
        return Err(Error::InvalidInput(format!(
            "need 0 < dt <= t_max, got dt={dt}, t_max={t_max}"
        )));
    }
    let steps = (t_max / dt).round() as usize;
    let sqrt_dt = dt.sqrt();
    let mut values = Vec::with_capacity(steps + 1);
    let mut b = 0.0f64;
    values.push(b);
    for _ in 0..steps {
        b += sqrt_dt * rng::standard_normal(stream);
        values.push(b);
    }
    Ok(BrownianPath { dt, values })
}

/// Binned local time profile of a Brownian path up to time `t`.
///
/// Bin `j` covers `[j*h, (j+1)*h)`; the stored quantity per bin is the
/// occupation count (number of `dt`-steps whose left endpoint falls in the
/// bin), so the mass identity `sum L*h = t` is an integer statement.
#[derive(Clone, Debug)]
pub struct ContinuumLocalTime {
    h: f64,
    dt: f64,
    t: f64,
    offset: i64,
    counts: Vec<u64>,
}

#[inline]
fn bin_of(x: f64, h: f64) -> i64 {
    (x / h).floor() as i64
}

impl ContinuumLocalTime {
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Local time estimate at level `x`: occupation of the bin containing
    /// `x`, divided by the bin width.
    pub fn level(&self, x: f64) -> f64 {
        self.count_at_bin(bin_of(x, self.h)) as f64 * self.dt / self.h
    }

    fn count_at_bin(&self, j: i64) -> u64 {
        let idx = j - self.offset;
        if idx < 0 || idx as usize >= self.counts.len() {
            0
        } else {
            self.counts[idx as usize]
        }
    }

    /// Number of occupied `dt`-steps; `total_count() * dt` is the mass.
    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Total occupation mass `sum_bins L*h`.
    pub fn total_mass(&self) -> f64 {
        self.total_count() as f64 * self.dt
    }

    /// Occupation mass of `[a, b)`, summing whole bins between the bin
    /// boundaries at or above `a` and `b`; `a` and `b` should be multiples
    /// of the bin width for an exact window.
    pub fn lambda(&self, a: f64, b: f64) -> Result<f64> {
        if !(a < b) {
            return Err(Error::InvalidInput(format!("need a < b, got {a}, {b}")));
        }
        let lo = (a / self.h).ceil() as i64;
        let hi = (b / self.h).ceil() as i64;
        let mut count = 0u64;
        for j in lo..hi {
            count += self.count_at_bin(j);
        }
        Ok(count as f64 * self.dt)
    }

    /// `sum_bins L^2 * h`, the self-intersection time estimate.
    pub fn self_intersection(&self) -> f64 {
        let sum_sq: f64 = self.counts.iter().map(|&c| (c as f64) * (c as f64)).sum();
        sum_sq * self.dt * self.dt / self.h
    }

    /// Occupied bins in ascending order as `(bin index, L estimate)`.
    pub fn iter_levels(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (self.offset + i as i64, c as f64 * self.dt / self.h))
    }
}

/// Bin-occupation local time of `path` up to time `t` with bin width `h`.
pub fn continuum_local_time(path: &BrownianPath, t: f64, h: f64) -> Result<ContinuumLocalTime> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("bin width must be positive, got {h}")));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time must be nonnegative, got {t}")));
    }
    let steps = (t / path.dt).round() as usize;
    if steps > path.values.len() - 1 {
        return Err(Error::OutOfRange {
            index: steps,
            horizon: path.values.len() - 1,
        });
    }
    // left-endpoint convention: step k occupies the bin of values[k]
    let window = &path.values[..steps];
    let mut offset = 0i64;
    let mut counts = Vec::new();
    if !window.is_empty() {
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for &x in window {
            let j = bin_of(x, h);
            lo = lo.min(j);
            hi = hi.max(j);
        }
        offset = lo;
        counts = vec![0u64; (hi - lo) as usize + 1];
        for &x in window {
            counts[(bin_of(x, h) - offset) as usize] += 1;
        }
    }
    Ok(ContinuumLocalTime {
        h,
        dt: path.dt,
        t,
        offset,
        counts,
    })
}

/// Time spent by the path in the bin window `[a, b)` up to `t`, accumulated
/// step by step with the same bin indexing as the profile; agrees with
/// [`ContinuumLocalTime::lambda`] exactly.
pub fn occupation_time(path: &BrownianPath, t: f64, a: f64, b: f64, h: f64) -> Result<f64> {
    if !(a < b) || !(h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need a < b and h > 0, got a={a}, b={b}, h={h}"
        )));
    }
    let steps = (t / path.dt).round() as usize;
    if steps > path.values.len() - 1 {
        return Err(Error::OutOfRange {
            index: steps,
            horizon: path.values.len() - 1,
        });
    }
    let lo = (a / h).ceil() as i64;
    let hi = (b / h).ceil() as i64;
    let mut count = 0u64;
    for &x in &path.values[..steps] {
        let j = bin_of(x, h);
        if j >= lo && j < hi {
            count += 1;
        }
    }
    Ok(count as f64 * path.dt)
}

/// How to draw the scenery integral given a local time profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KsMode {
    /// Explicit stochastic integral: independent `N(0, h)` scenery
    /// increments per bin, split over the two half-axes.
    Integral,
    /// One conditional draw `N(0, sum L^2 h)`.
    Conditional,
}

/// Draw the scenery integral at the profile's horizon. Both modes produce
/// the same law; the empty profile yields 0 in either mode.
pub fn ks_sample(localtime: &ContinuumLocalTime, stream: &mut RngStream, mode: KsMode) -> f64 {
    match mode {
        KsMode::Conditional => {
            let v = localtime.self_intersection();
            if v == 0.0 {
                0.0
            } else {
                v.sqrt() * rng::standard_normal(stream)
            }
        }
        KsMode::Integral => {
            let sqrt_h = localtime.h.sqrt();
            let mut delta = 0.0f64;
            // positive half-axis first, then negative, each by increasing |x|
            for (j, l) in localtime.iter_levels().filter(|(j, _)| *j >= 0) {
                let _ = j;
                delta += l * sqrt_h * rng::standard_normal(stream);
            }
            let negatives: Vec<f64> = localtime
                .iter_levels()
                .filter(|(j, _)| *j < 0)
                .map(|(_, l)| l)
                .collect();
            for l in negatives.into_iter().rev() {
                delta += l * sqrt_h * rng::standard_normal(stream);
            }
            delta
        }
    }
}

/// Self-intersection time `sum L^2 h` of a unit-horizon profile.
pub fn self_intersection(localtime: &ContinuumLocalTime) -> f64 {
    localtime.self_intersection()
}

/// Scale a `(delta, b)` sample by the jump-mean factors
/// `m (1+m)^(-3/4)` and `(1+m)^(-1/2)`.
pub fn scale_limit_pair(delta: f64, b: f64, m: f64) -> (f64, f64) {
    debug_assert!(m >= 0.0, "jump mean must be nonnegative");
    let one_plus = 1.0 + m;
    (
        m * one_plus.powf(-0.75) * delta,
        one_plus.powf(-0.5) * b,
    )
}

/// Refinement control for the dependence-constant quadrature.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSettings {
    pub initial_panels: usize,
    pub tolerance: f64,
    pub max_doublings: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            initial_panels: 32,
            tolerance: 1e-10,
            max_doublings: 24,
        }
    }
}

/// Dependence constant
/// `C(n) = 2 int_{0<s<t<=1} (1-t+s)^{n/2} / sqrt(2 pi (t-s)) ds dt`.
///
/// The difference variable reduces the double integral to
/// `2/sqrt(2 pi) int_0^1 (1-u)^{n/2+1} u^{-1/2} du`, and the square-root
/// substitution `u = v^2` absorbs the endpoint weight exactly, leaving a
/// polynomial integrand handled by composite Simpson with refinement.
pub fn cn_constant(n: u32, settings: &QuadratureSettings) -> Result<f64> {
    if n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "dependence constant is defined for even n, got {n}"
        )));
    }
    let power = (n / 2 + 1) as i32;
    let integrand = |v: f64| (1.0 - v * v).powi(power);
    let mut panels = settings.initial_panels.max(2);
    let mut previous = simpson(&integrand, panels);
    let mut last_change = f64::INFINITY;
    for _ in 0..settings.max_doublings {
        panels *= 2;
        let current = simpson(&integrand, panels);
        last_change = (current - previous).abs();
        previous = current;
        if last_change < settings.tolerance {
            let scale = 4.0 / (2.0 * std::f64::consts::PI).sqrt();
            return Ok(scale * current);
        }
    }
    Err(Error::QuadratureDiverged { last_change })
}

/// Composite Simpson on [0, 1] with an even number of panels.
fn simpson(f: &dyn Fn(f64) -> f64, panels: usize) -> f64 {
    let n = if panels % 2 == 0 { panels } else { panels + 1 };
    let step = 1.0 / n as f64;
    let mut acc = f(0.0) + f(1.0);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(k as f64 * step);
    }
    acc * step / 3.0
}

/// Table of dependence constants for even orders.
#[derive(Clone, Debug)]
pub struct CnTable {
    entries: Vec<(u32, f64)>,
}

impl CnTable {
    /// Compute `C(n)` for each even order and validate positivity and
    /// strict decrease.
    pub fn compute(orders: &[u32], settings: &QuadratureSettings) -> Result<CnTable> {
        let mut entries = Vec::with_capacity(orders.len());
        for &n in orders {
            let c = cn_constant(n, settings)?;
            if c <= 0.0 {
                return Err(Error::InvalidInput(format!("C({n}) = {c} not positive")));
            }
            entries.push((n, c));
        }
        entries.sort_by_key(|&(n, _)| n);
        for pair in entries.windows(2) {
            if pair[1].1 >= pair[0].1 {
                return Err(Error::InvalidInput(format!(
                    "C must strictly decrease: C({}) = {} vs C({}) = {}",
                    pair[0].0, pair[0].1, pair[1].0, pair[1].1
                )));
            }
        }
        Ok(CnTable { entries })
    }

    pub fn cn(&self, n: u32) -> Option<f64> {
        self.entries.iter().find(|&&(k, _)| k == n).map(|&(_, c)| c)
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    /// CSV export, columns `n,cn`.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,cn")?;
        for &(n, c) in &self.entries {
            writeln!(w, "{n},{c}")?;
        }
        Ok(())
    }
}

/// Two-sample self-similarity check: `c^(-3/4) delta_ct` against `delta_t`
/// and `c^(-1/2) b_ct` against `b_t`.
#[derive(Clone, Debug)]
pub struct SelfSimilarityReport {
    pub ks_delta: KsResult,
    pub ks_b: KsResult,
}

pub fn self_similarity_check(
    at_t: &[(f64, f64)],
    at_ct: &[(f64, f64)],
    c: f64,
) -> Result<SelfSimilarityReport> {
    if !(c > 0.0) {
        return Err(Error::InvalidInput(format!("scale factor must be positive, got {c}")));
    }
    let delta_t: Vec<f64> = at_t.iter().map(|&(d, _)| d).collect();
    let b_t: Vec<f64> = at_t.iter().map(|&(_, b)| b).collect();
    let delta_scaled: Vec<f64> = at_ct.iter().map(|&(d, _)| d * c.powf(-0.75)).collect();
    let b_scaled: Vec<f64> = at_ct.iter().map(|&(_, b)| b * c.powf(-0.5)).collect();
    Ok(SelfSimilarityReport {
        ks_delta: stats::ks_two_sample(&delta_scaled, &delta_t)?,
        ks_b: stats::ks_two_sample(&b_scaled, &b_t)?,
    })
}
