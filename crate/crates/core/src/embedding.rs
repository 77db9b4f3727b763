//! Discrete embedding of the lattice walk.
//!
//! The lattice walk decomposes into a vertical simple random walk `Y`, its
//! local times `N_n(y)`, a scenery sum `Z_n`, and a horizontal process `X_n`
//! accumulated through bursts of geometric jumps: the i-th visit to level
//! `y` contributes `xi_i^(y)` horizontal steps in the direction of the
//! orientation, followed by one vertical step. `T_n` is the lattice time
//! just after the n-th vertical move, and on every path the lattice walk
//! satisfies `M_{T_n} = (X_n, Y_n)` exactly.
//!
//! Jump draws are derived from a `(site, index)` key, so the unrolled
//! lattice walk and the closed-form double sums consume identical values
//! and the identity is machine-checkable rather than distributional.

use std::io::Write;

use crate::error::{Error, Result};
use crate::lattice::{LatticeState, LatticeTrajectory, OrientationField};
use crate::rng::{self, GeometricParam, RngStream};

/// Vertical simple random walk `Y_0..Y_n`, `Y_0 = 0`, steps +/-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalPath {
    values: Vec<i64>,
}

impl VerticalPath {
    /// Wrap an explicit path; test fixture. Panics unless it starts at 0
    /// with unit steps.
    pub fn from_values(values: Vec<i64>) -> Self {
        assert_eq!(values.first(), Some(&0), "path must start at 0");
        assert!(
            values.windows(2).all(|w| (w[1] - w[0]).abs() == 1),
            "steps must be +/-1"
        );
        Self { values }
    }

    /// Number of steps (one less than the number of time points).
    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    #[inline]
    pub fn value(&self, k: usize) -> i64 {
        self.values[k]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn last(&self) -> i64 {
        *self.values.last().expect("path never empty")
    }
}

/// Simulate `n` steps of the vertical walk.
pub fn simulate_vertical(n: usize, stream: &mut RngStream) -> VerticalPath {
    let mut values = Vec::with_capacity(n + 1);
    let mut y = 0i64;
    values.push(y);
    for _ in 0..n {
        y += i64::from(rng::sample_rademacher(stream));
        values.push(y);
    }
    VerticalPath { values }
}

/// Occupation counts `N_n(y)` of the time points `0..=n`.
#[derive(Clone, Debug)]
pub struct LocalTimeTable {
    horizon: usize,
    offset: i64,
    counts: Vec<u64>,
}

impl LocalTimeTable {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    #[inline]
    pub fn count(&self, y: i64) -> u64 {
        let idx = y - self.offset;
        if idx < 0 || idx as usize >= self.counts.len() {
            0
        } else {
            self.counts[idx as usize]
        }
    }

    /// Total mass; equals `horizon + 1` by construction.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Visited sites in ascending order with their counts.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (self.offset + i as i64, c))
    }
}

/// Exact occupation counts of `path` over time points `0..=n`.
pub fn local_time(path: &VerticalPath, n: usize) -> Result<LocalTimeTable> {
    if n > path.horizon() {
        return Err(Error::OutOfRange {
            index: n,
            horizon: path.horizon(),
        });
    }
    let window = &path.values()[..=n];
    let min = *window.iter().min().expect("nonempty");
    let max = *window.iter().max().expect("nonempty");
    let mut counts = vec![0u64; (max - min) as usize + 1];
    for &y in window {
        counts[(y - min) as usize] += 1;
    }
    Ok(LocalTimeTable {
        horizon: n,
        offset: min,
        counts,
    })
}

/// Doubly infinite family of geometric jump lengths `xi_i^(y)`, keyed by
/// `(site y, index i >= 1)` and queryable lazily in any order.
#[derive(Clone, Debug)]
pub struct JumpFamily {
    source: JumpSource,
    param: GeometricParam,
}

#[derive(Clone, Debug)]
enum JumpSource {
    Keyed(RngStream),
    Forced(u64),
}

impl JumpFamily {
    pub fn keyed(stream: &RngStream, param: GeometricParam) -> Self {
        Self {
            source: JumpSource::Keyed(stream.clone()),
            param,
        }
    }

    /// Every jump equal to `value`; test fixture.
    pub fn forced(value: u64, param: GeometricParam) -> Self {
        Self {
            source: JumpSource::Forced(value),
            param,
        }
    }

    pub fn param(&self) -> &GeometricParam {
        &self.param
    }

    /// Jump length for the `i`-th visit (i >= 1) to site `y`; idempotent.
    #[inline]
    pub fn jump(&self, y: i64, i: u64) -> u64 {
        match &self.source {
            JumpSource::Keyed(base) => {
                let mut s = base.substream2(y as u64, i);
                rng::sample_geometric(&mut s, &self.param)
            }
            JumpSource::Forced(v) => *v,
        }
    }
}

/// Scenery sum `Z_n`, the sum of orientations read along the path.
pub fn scenery_sum(path: &VerticalPath, field: &mut OrientationField, n: usize) -> Result<i64> {
    if n > path.horizon() {
        return Err(Error::OutOfRange {
            index: n,
            horizon: path.horizon(),
        });
    }
    let mut z = 0i64;
    for &y in &path.values()[..=n] {
        z += i64::from(field.orientation_at(y));
    }
    Ok(z)
}

/// Same quantity through the local-time formula `sum_y eps_y N_n(y)`;
/// the two routes agree exactly on every path.
pub fn scenery_sum_from_table(table: &LocalTimeTable, field: &mut OrientationField) -> i64 {
    table
        .iter()
        .map(|(y, c)| i64::from(field.orientation_at(y)) * c as i64)
        .sum()
}

/// Scenery sums at several horizons in one pass over the path.
pub fn scenery_checkpoints(
    path: &VerticalPath,
    field: &mut OrientationField,
    ns: &[usize],
) -> Result<Vec<i64>> {
    let max = ns.iter().copied().max().unwrap_or(0);
    if max > path.horizon() {
        return Err(Error::OutOfRange {
            index: max,
            horizon: path.horizon(),
        });
    }
    let mut out = vec![0i64; ns.len()];
    let mut z = 0i64;
    for (k, &y) in path.values()[..=max].iter().enumerate() {
        z += i64::from(field.orientation_at(y));
        for (slot, &n) in out.iter_mut().zip(ns) {
            if n == k {
                *slot = z;
            }
        }
    }
    Ok(out)
}

/// Horizontal embedding `X_n = sum_y eps_y sum_{i<=N_{n-1}(y)} xi_i^(y)`,
/// evaluated as the closed-form double sum over the local-time table.
pub fn embed_horizontal(
    path: &VerticalPath,
    field: &mut OrientationField,
    jumps: &JumpFamily,
    n: usize,
) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidInput("horizontal embedding needs n >= 1".into()));
    }
    let table = local_time(path, n - 1)?;
    let mut x = 0i64;
    for (y, count) in table.iter() {
        let eps = i64::from(field.orientation_at(y));
        let mut burst = 0u64;
        for i in 1..=count {
            burst += jumps.jump(y, i);
        }
        x += eps * burst as i64;
    }
    Ok(x)
}

/// Centered component `sum_y eps_y sum_{i<=N_{n-1}(y)} (xi_i^(y) - m)`.
///
/// When `m` has a short binary representation (p = 2/3 or 1/2) every
/// partial sum is exact in f64 and the decomposition
/// `X_n = X_n^(1) + m Z_{n-1}` holds with zero tolerance.
pub fn embed_centered(
    path: &VerticalPath,
    field: &mut OrientationField,
    jumps: &JumpFamily,
    n: usize,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("centered embedding needs n >= 1".into()));
    }
    let m = jumps.param().mean();
    let table = local_time(path, n - 1)?;
    let mut x1 = 0.0f64;
    for (y, count) in table.iter() {
        let eps = f64::from(field.orientation_at(y));
        for i in 1..=count {
            x1 += eps * (jumps.jump(y, i) as f64 - m);
        }
    }
    Ok(x1)
}

/// Stopping times `T_0..T_up_to`, `T_n = n + sum of the first n bursts`.
pub fn stopping_times(
    path: &VerticalPath,
    jumps: &JumpFamily,
    up_to: usize,
) -> Result<Vec<u64>> {
    if up_to > path.horizon() {
        return Err(Error::OutOfRange {
            index: up_to,
            horizon: path.horizon(),
        });
    }
    let mut counts = CountTable::new();
    let mut times = Vec::with_capacity(up_to + 1);
    let mut t = 0u64;
    times.push(t);
    for k in 0..up_to {
        let y = path.value(k);
        let i = counts.increment(y);
        t += 1 + jumps.jump(y, i);
        times.push(t);
    }
    Ok(times)
}

/// Inverse time `U_n = sup{k >= 0 : T_k <= n}`.
pub fn inverse_time(times: &[u64], n: u64) -> Result<usize> {
    match times.first() {
        Some(&t0) if t0 <= n => {}
        _ => return Err(Error::EmptySupremum(n)),
    }
    Ok(times.partition_point(|&t| t <= n) - 1)
}

/// Fraction of time the rescaled walk spends in `[a, b)` up to `[nt]`:
/// `(1/n) sum_{a <= y/sqrt(n) < b} N_[nt](y)`.
pub fn occupation_fraction(
    path: &VerticalPath,
    n: usize,
    t: f64,
    a: f64,
    b: f64,
) -> Result<f64> {
    if !(a < b) || !(t >= 0.0) || n == 0 {
        return Err(Error::InvalidInput(
            "occupation fraction needs a < b, t >= 0, n >= 1".into(),
        ));
    }
    let nt = (n as f64 * t).floor() as usize;
    let table = local_time(path, nt)?;
    let scale = (n as f64).sqrt();
    let mut sum = 0u64;
    for (y, c) in table.iter() {
        let pos = y as f64 / scale;
        if a <= pos && pos < b {
            sum += c;
        }
    }
    Ok(sum as f64 / n as f64)
}

/// The embedded processes on a common index: `X_n`, `Y_n`, `Z_n`, `T_n`.
#[derive(Clone, Debug)]
pub struct EmbeddedTriple {
    pub horizontal: Vec<i64>,
    pub vertical: VerticalPath,
    pub scenery: Vec<i64>,
    pub times: Vec<u64>,
}

impl EmbeddedTriple {
    pub fn horizon(&self) -> usize {
        self.times.len() - 1
    }

    /// CSV export, columns `n,x,y,z,t`.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,x,y,z,t")?;
        for n in 0..=self.horizon() {
            writeln!(
                w,
                "{n},{},{},{},{}",
                self.horizontal[n],
                self.vertical.value(n),
                self.scenery[n],
                self.times[n]
            )?;
        }
        Ok(())
    }
}

/// Build `X`, `Z`, `T` along `path` in one pass (one jump query per step).
pub fn embedded_triple(
    path: &VerticalPath,
    field: &mut OrientationField,
    jumps: &JumpFamily,
    up_to: usize,
) -> Result<EmbeddedTriple> {
    if up_to > path.horizon() {
        return Err(Error::OutOfRange {
            index: up_to,
            horizon: path.horizon(),
        });
    }
    let mut counts = CountTable::new();
    let mut horizontal = Vec::with_capacity(up_to + 1);
    let mut scenery = Vec::with_capacity(up_to + 1);
    let mut times = Vec::with_capacity(up_to + 1);
    let (mut x, mut t) = (0i64, 0u64);
    let mut z = i64::from(field.orientation_at(path.value(0)));
    horizontal.push(x);
    times.push(t);
    scenery.push(z);
    for k in 0..up_to {
        let y = path.value(k);
        let i = counts.increment(y);
        let burst = jumps.jump(y, i);
        x += i64::from(field.orientation_at(y)) * burst as i64;
        t += 1 + burst;
        horizontal.push(x);
        times.push(t);
        z += i64::from(field.orientation_at(path.value(k + 1)));
        scenery.push(z);
    }
    Ok(EmbeddedTriple {
        horizontal,
        vertical: VerticalPath {
            values: path.values()[..=up_to].to_vec(),
        },
        scenery,
        times,
    })
}

/// Simulate the lattice walk and its embedding from one randomness source
/// and verify the pathwise identity `M_{T_n} = (X_n, Y_n)` for every
/// `n <= n_vertical`, recomputing `X_n` through the closed-form double sum.
///
/// Verification is quadratic in the horizon; intended for desk-scale
/// horizons. A violation signals an internal coupling bug and is returned
/// as a hard error.
pub fn coupled_simulation(
    n_vertical: usize,
    param: &GeometricParam,
    base: &RngStream,
) -> Result<(LatticeTrajectory, EmbeddedTriple)> {
    let mut vertical_stream = base.substream(rng::labels::VERTICAL);
    let path = simulate_vertical(n_vertical, &mut vertical_stream);
    let mut field = OrientationField::random(&base.substream(rng::labels::FIELD));
    let jumps = JumpFamily::keyed(&base.substream(rng::labels::JUMPS), *param);

    let triple = embedded_triple(&path, &mut field, &jumps, n_vertical)?;
    let trajectory = unroll_walk(&path, &mut field, &jumps, param.p());

    for n in 0..=n_vertical {
        let state = trajectory.state(triple.times[n] as usize);
        let x_direct = if n == 0 {
            0
        } else {
            embed_horizontal(&path, &mut field, &jumps, n)?
        };
        if state.x != triple.horizontal[n]
            || state.y != path.value(n)
            || x_direct != triple.horizontal[n]
        {
            return Err(Error::CouplingViolation {
                n,
                walk_x: state.x,
                walk_y: state.y,
                embed_x: triple.horizontal[n],
                embed_y: path.value(n),
            });
        }
    }
    Ok((trajectory, triple))
}

/// Unroll the embedding into a lattice trajectory: at the i-th visit to
/// level `y`, `xi_i^(y)` horizontal steps in the orientation's direction,
/// then one vertical step.
fn unroll_walk(
    path: &VerticalPath,
    field: &mut OrientationField,
    jumps: &JumpFamily,
    p: f64,
) -> LatticeTrajectory {
    let mut counts = CountTable::new();
    let mut states = vec![LatticeState::ORIGIN];
    let mut x = 0i64;
    for k in 0..path.horizon() {
        let y = path.value(k);
        let i = counts.increment(y);
        let dir = i64::from(field.orientation_at(y));
        for _ in 0..jumps.jump(y, i) {
            x += dir;
            states.push(LatticeState { x, y });
        }
        states.push(LatticeState {
            x,
            y: path.value(k + 1),
        });
    }
    LatticeTrajectory { states, p }
}

/// Growable visit-count table over lattice levels.
struct CountTable {
    offset: i64,
    counts: Vec<u64>,
}

impl CountTable {
    fn new() -> Self {
        Self {
            offset: 0,
            counts: Vec::new(),
        }
    }

    /// Bump the count at `y` and return the new value.
    #[inline]
    fn increment(&mut self, y: i64) -> u64 {
        if self.counts.is_empty() {
            self.offset = y - 4;
            self.counts = vec![0; 9];
        }
        while y < self.offset {
            let grow = self.counts.len().max(8);
            let mut next = vec![0; grow + self.counts.len()];
            next[grow..].copy_from_slice(&self.counts);
            self.offset -= grow as i64;
            self.counts = next;
        }
        while (y - self.offset) as usize >= self.counts.len() {
            let grow = self.counts.len().max(8);
            self.counts.resize(self.counts.len() + grow, 0);
        }
        let slot = &mut self.counts[(y - self.offset) as usize];
        *slot += 1;
        *slot
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::labels;

    fn fixture(seed: u64, replica: u64) -> RngStream {
        RngStream::new(seed, replica)
    }

    #[test]
    fn zero_step_path_is_origin() {
        let mut s = fixture(1, 0);
        let path = simulate_vertical(0, &mut s);
        assert_eq!(path.values(), &[0]);
    }

    #[test]
    fn vertical_variance_is_linear() {
        // Var(Y_n)/n within 1 +/- 0.03 at n=1e4 over 1e4 replicas.
        let n = 10_000usize;
        let reps = 10_000u64;
        let mut sum_sq = 0.0f64;
        for r in 0..reps {
            let mut s = fixture(2, r);
            let mut y = 0i64;
            for _ in 0..n {
                y += i64::from(rng::sample_rademacher(&mut s));
            }
            sum_sq += (y * y) as f64;
        }
        let var = sum_sq / reps as f64 / n as f64;
        assert!((var - 1.0).abs() < 0.03, "var ratio {var}");
    }

    #[test]
    fn local_time_counts_directly() {
        let path = VerticalPath::from_values(vec![0, 1, 0, -1]);
        let table = local_time(&path, 3).unwrap();
        assert_eq!(table.count(0), 2);
        assert_eq!(table.count(1), 1);
        assert_eq!(table.count(-1), 1);
        assert_eq!(table.count(5), 0);
        assert_eq!(table.total(), 4);
        assert!(local_time(&path, 4).is_err());
    }

    #[test]
    fn local_time_mass_is_horizon_plus_one() {
        for r in 0..50 {
            let mut s = fixture(3, r);
            let path = simulate_vertical(257, &mut s);
            for n in [0, 1, 17, 256, 257] {
                assert_eq!(local_time(&path, n).unwrap().total(), n as u64 + 1);
            }
        }
    }

    #[test]
    fn scenery_sum_routes_agree() {
        // the two defining formulas, on 1000 random paths
        for r in 0..1000 {
            let base = fixture(4, r);
            let mut s = base.substream(labels::VERTICAL);
            let path = simulate_vertical(200, &mut s);
            let mut field = OrientationField::random(&base.substream(labels::FIELD));
            let n = 100 + (r as usize % 100);
            let direct = scenery_sum(&path, &mut field, n).unwrap();
            let table = local_time(&path, n).unwrap();
            assert_eq!(direct, scenery_sum_from_table(&table, &mut field));
        }
    }

    #[test]
    fn forced_field_gives_full_mass() {
        let mut s = fixture(5, 0);
        let path = simulate_vertical(100, &mut s);
        let mut field = OrientationField::forced(1);
        assert_eq!(scenery_sum(&path, &mut field, 100).unwrap(), 101);
    }

    #[test]
    fn scenery_checkpoints_match_direct_sums() {
        let base = fixture(6, 0);
        let mut s = base.substream(labels::VERTICAL);
        let path = simulate_vertical(500, &mut s);
        let mut field = OrientationField::random(&base.substream(labels::FIELD));
        let ns = [0usize, 10, 499, 500];
        let got = scenery_checkpoints(&path, &mut field, &ns).unwrap();
        for (slot, &n) in got.iter().zip(&ns) {
            assert_eq!(*slot, scenery_sum(&path, &mut field, n).unwrap());
        }
    }

    #[test]
    fn forced_jumps_make_x_trivial() {
        let param = GeometricParam::standard();
        let mut s = fixture(7, 0);
        let path = simulate_vertical(64, &mut s);
        let mut field = OrientationField::random(&fixture(7, 1));
        let zeros = JumpFamily::forced(0, param);
        assert_eq!(embed_horizontal(&path, &mut field, &zeros, 64).unwrap(), 0);

        // unit jumps on an all-plus field: X_n = sum of local times = n
        let mut plus = OrientationField::forced(1);
        let ones = JumpFamily::forced(1, param);
        for n in [1usize, 2, 10, 64] {
            assert_eq!(
                embed_horizontal(&path, &mut plus, &ones, n).unwrap(),
                n as i64
            );
        }
    }

    #[test]
    fn decomposition_is_exact_for_dyadic_means() {
        // X_n - m Z_{n-1} equals the sum of centered jumps, exactly.
        for (num, den) in [(2u64, 3u64), (1, 2), (1, 3), (4, 5)] {
            let param = GeometricParam::from_fraction(num, den).unwrap();
            let m = param.mean();
            for r in 0..20 {
                let base = fixture(8 + num * 31 + den, r);
                let mut s = base.substream(labels::VERTICAL);
                let path = simulate_vertical(300, &mut s);
                let mut field = OrientationField::random(&base.substream(labels::FIELD));
                let jumps = JumpFamily::keyed(&base.substream(labels::JUMPS), param);
                for n in [1usize, 7, 128, 300] {
                    let x = embed_horizontal(&path, &mut field, &jumps, n).unwrap();
                    let z = scenery_sum(&path, &mut field, n - 1).unwrap();
                    let x1 = embed_centered(&path, &mut field, &jumps, n).unwrap();
                    assert_eq!(x as f64 - m * z as f64, x1, "p={num}/{den}, n={n}");
                }
            }
        }
    }

    #[test]
    fn centered_component_vanishes_under_rescaling() {
        // E[(X^(1)_n / n^(3/4))^2] decreases along n = 1e3, 1e4, 1e5
        let param = GeometricParam::standard();
        let mut means = Vec::new();
        for (gi, n) in [1_000usize, 10_000, 100_000].into_iter().enumerate() {
            let mut acc = 0.0f64;
            let reps = 200u64;
            for r in 0..reps {
                let base = fixture(900 + gi as u64, r);
                let mut s = base.substream(labels::VERTICAL);
                let path = simulate_vertical(n, &mut s);
                let mut field = OrientationField::random(&base.substream(labels::FIELD));
                let jumps = JumpFamily::keyed(&base.substream(labels::JUMPS), param);
                let x = embed_horizontal(&path, &mut field, &jumps, n).unwrap() as f64;
                let z = scenery_sum(&path, &mut field, n - 1).unwrap() as f64;
                let x1 = x - param.mean() * z;
                acc += (x1 / (n as f64).powf(0.75)).powi(2);
            }
            means.push(acc / reps as f64);
        }
        assert!(
            means[0] > means[1] && means[1] > means[2],
            "not decreasing: {means:?}"
        );
    }

    #[test]
    fn stopping_times_with_zero_jumps_are_the_index() {
        let param = GeometricParam::standard();
        let mut s = fixture(10, 0);
        let path = simulate_vertical(50, &mut s);
        let jumps = JumpFamily::forced(0, param);
        let times = stopping_times(&path, &jumps, 50).unwrap();
        assert_eq!(times, (0..=50).collect::<Vec<u64>>());
    }

    #[test]
    fn stopping_times_strictly_increase() {
        let param = GeometricParam::standard();
        for r in 0..50 {
            let base = fixture(11, r);
            let mut s = base.substream(labels::VERTICAL);
            let path = simulate_vertical(200, &mut s);
            let jumps = JumpFamily::keyed(&base.substream(labels::JUMPS), param);
            let times = stopping_times(&path, &jumps, 200).unwrap();
            for (n, pair) in times.windows(2).enumerate() {
                assert!(pair[1] > pair[0]);
                assert!(pair[1] >= n as u64 + 1);
            }
        }
    }

    #[test]
    fn stopping_ratio_approaches_one_plus_m() {
        // single path, n=1e5, |T_n/n - 1.5| < 0.02
        let param = GeometricParam::standard();
        let base = fixture(12, 0);
        let mut s = base.substream(labels::VERTICAL);
        let path = simulate_vertical(100_000, &mut s);
        let jumps = JumpFamily::keyed(&base.substream(labels::JUMPS), param);
        let times = stopping_times(&path, &jumps, 100_000).unwrap();
        let ratio = times[100_000] as f64 / 100_000.0;
        assert!((ratio - 1.5).abs() < 0.02, "T_n/n = {ratio}");
    }

    #[test]
    fn inverse_time_inverts_stopping_times() {
        let trivial: Vec<u64> = (0..=100).collect();
        for n in [0u64, 1, 50, 100] {
            assert_eq!(inverse_time(&trivial, n).unwrap(), n as usize);
        }

        let param = GeometricParam::standard();
        for r in 0..20 {
            let base = fixture(13, r);
            let mut s = base.substream(labels::VERTICAL);
            let path = simulate_vertical(100, &mut s);
            let jumps = JumpFamily::keyed(&base.substream(labels::JUMPS), param);
            let times = stopping_times(&path, &jumps, 100).unwrap();
            for (k, &t) in times.iter().enumerate() {
                assert_eq!(inverse_time(&times, t).unwrap(), k);
            }
        }

        assert!(matches!(
            inverse_time(&[5, 9], 4),
            Err(Error::EmptySupremum(4))
        ));
    }

    #[test]
    fn inverse_ratio_approaches_phi() {
        // U_n/n -> 1/(1+m) = 2/3 at n=1e5
        let param = GeometricParam::standard();
        let base = fixture(14, 0);
        let mut s = base.substream(labels::VERTICAL);
        let path = simulate_vertical(100_000, &mut s);
        let jumps = JumpFamily::keyed(&base.substream(labels::JUMPS), param);
        let times = stopping_times(&path, &jumps, 100_000).unwrap();
        let u = inverse_time(&times, 100_000).unwrap();
        let ratio = u as f64 / 100_000.0;
        assert!((ratio - 2.0 / 3.0).abs() < 0.02, "U_n/n = {ratio}");
    }

    #[test]
    fn occupation_fraction_direct_cases() {
        // all visited sites covered: ([nt]+1)/n
        let path = VerticalPath::from_values(vec![0, 1, 0, -1]);
        let all = occupation_fraction(&path, 4, 0.75, -10.0, 10.0).unwrap();
        assert_eq!(all, 4.0 / 4.0);

        // sites with 0 <= y/2 < 0.6 are {0, 1}
        let frac = occupation_fraction(&path, 4, 0.75, 0.0, 0.6).unwrap();
        assert_eq!(frac, (2.0 + 1.0) / 4.0);

        // five-point variant at t=1
        let path5 = VerticalPath::from_values(vec![0, 1, 0, -1, 0]);
        let frac5 = occupation_fraction(&path5, 4, 1.0, 0.0, 0.6).unwrap();
        assert_eq!(frac5, (3.0 + 1.0) / 4.0);

        assert!(occupation_fraction(&path, 4, 1.0, 0.0, 0.6).is_err());
        assert!(occupation_fraction(&path, 4, 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn coupled_identity_holds_on_random_paths() {
        for (num, den) in [(2u64, 3u64), (1, 2)] {
            let param = GeometricParam::from_fraction(num, den).unwrap();
            for r in 0..25 {
                let base = fixture(15 + num, r);
                let (trajectory, triple) = coupled_simulation(200, &param, &base).unwrap();
                // spot re-check on top of the internal verification
                for n in [0usize, 1, 57, 200] {
                    let s = trajectory.state(triple.times[n] as usize);
                    assert_eq!((s.x, s.y), (triple.horizontal[n], triple.vertical.value(n)));
                }
                // the walk takes exactly n vertical moves in the first T_n steps
                for n in [1usize, 100, 200] {
                    let t_n = triple.times[n] as usize;
                    let verticals = trajectory.states[..=t_n]
                        .windows(2)
                        .filter(|w| w[1].y != w[0].y)
                        .count();
                    assert_eq!(verticals, n);
                }
            }
        }
    }

    #[test]
    fn coupled_simulation_degenerates_at_p_one() {
        let param = GeometricParam::from_probability(1.0).unwrap();
        let base = fixture(16, 0);
        let (trajectory, triple) = coupled_simulation(500, &param, &base).unwrap();
        assert_eq!(trajectory.len_steps(), 500);
        for n in 0..=500usize {
            assert_eq!(triple.times[n], n as u64);
            let s = trajectory.state(n);
            assert_eq!(s.x, 0);
            assert_eq!(s.y, triple.vertical.value(n));
        }
    }

    #[test]
    fn triple_csv_has_one_row_per_index() {
        let param = GeometricParam::standard();
        let base = fixture(17, 0);
        let (_, triple) = coupled_simulation(10, &param, &base).unwrap();
        let mut buf = Vec::new();
        triple.to_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,x,y,z,t\n0,0,0,"));
        assert_eq!(text.lines().count(), 12);
    }
}
