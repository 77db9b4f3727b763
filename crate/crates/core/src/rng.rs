//! Splittable, counter-based random streams.
//!
//! A stream is a pair `(key, counter)`: draw `i` of a stream is
//! `mix64(key + (i+1)*GOLDEN)`, i.e. splitmix64 with an explicit counter.
//! Jump-ahead is a counter assignment, and child streams are derived by
//! rehashing the key with a label, so a draw keyed by `(replica, site,
//! index)` can be reproduced without storing any history. Identical
//! `(master_seed, stream_id)` pairs yield bit-identical sequences on every
//! run and under any thread schedule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0xD134_2543_DE82_EF95;
const LABEL_SALT: u64 = 0x2545_F491_4F6C_DD1D;

/// Substream labels shared across the crate, so that the components of one
/// replica (vertical walk, orientation field, jump family, Brownian
/// increments, scenery noise) never collide.
pub mod labels {
    pub const VERTICAL: u64 = 1;
    pub const FIELD: u64 = 2;
    pub const JUMPS: u64 = 3;
    pub const BROWNIAN: u64 = 4;
    pub const SCENERY_NOISE: u64 = 5;
    pub const REFERENCE: u64 = 6;
}

/// Finalizer of splitmix64 / Stafford mix13.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic random stream identified by `(master_seed, stream_id)`.
///
/// Value-like: clone freely, never share one instance between concurrent
/// workers. Replica `r` of an experiment uses `stream_id = r` and derives
/// purpose-specific children via [`RngStream::substream`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngStream {
    key: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let key = mix64(
            mix64(master_seed.wrapping_add(GOLDEN))
                ^ mix64(stream_id.wrapping_mul(STREAM_SALT).wrapping_add(LABEL_SALT)),
        );
        Self { key, counter: 0 }
    }

    /// Child stream with an independent key; the parent is not advanced.
    pub fn substream(&self, label: u64) -> Self {
        let key = mix64(self.key ^ mix64(label.wrapping_mul(STREAM_SALT).wrapping_add(GOLDEN)));
        Self { key, counter: 0 }
    }

    /// Child stream keyed by two labels, e.g. `(site, index)`.
    pub fn substream2(&self, a: u64, b: u64) -> Self {
        self.substream(mix64(a.wrapping_mul(GOLDEN) ^ b.wrapping_add(LABEL_SALT)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in (0, 1]; never returns 0, so logarithms are safe.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Geometric jump parameter: success probability `p` and mean `m=(1-p)/p`.
///
/// Constructed via [`GeometricParam::from_fraction`] whenever `p` is a
/// ratio of small integers, so that `m` is exact in floating point
/// (`p = 2/3` gives `m = 0.5` exactly).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricParam {
    p: f64,
    m: f64,
}

impl GeometricParam {
    pub fn from_probability(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self { p, m: (1.0 - p) / p })
    }

    /// `p = num/den` with `m = (den-num)/num` computed from the integers.
    pub fn from_fraction(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidProbability(if den == 0 {
                f64::NAN
            } else {
                num as f64 / den as f64
            }));
        }
        Ok(Self {
            p: num as f64 / den as f64,
            m: (den - num) as f64 / num as f64,
        })
    }

    /// The standard case `p = 2/3`, `m = 1/2`.
    pub fn standard() -> Self {
        Self::from_fraction(2, 3).expect("2/3 is a valid probability")
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Mean of the jump law, `(1-p)/p`.
    #[inline]
    pub fn mean(&self) -> f64 {
        self.m
    }
}

/// Fair random sign.
#[inline]
pub fn sample_rademacher(stream: &mut RngStream) -> i8 {
    if stream.next_u64() >> 63 == 1 {
        1
    } else {
        -1
    }
}

/// Geometric draw on {0, 1, 2, ...} with `P[k] = p (1-p)^k`, by inversion.
#[inline]
pub fn sample_geometric(stream: &mut RngStream, param: &GeometricParam) -> u64 {
    let p = param.p;
    let u = stream.next_f64();
    if p >= 1.0 {
        return 0;
    }
    // u in (0,1]: P[k >= j] = P[u <= (1-p)^j] = (1-p)^j.
    (u.ln() / (1.0 - p).ln()) as u64
}

/// Gaussian draw via Box-Muller; `variance = 0` returns `mean` exactly.
pub fn sample_gaussian(stream: &mut RngStream, mean: f64, variance: f64) -> Result<f64> {
    if !(variance >= 0.0) {
        return Err(Error::InvalidVariance(variance));
    }
    if variance == 0.0 {
        return Ok(mean);
    }
    Ok(mean + variance.sqrt() * standard_normal(stream))
}

/// N(0,1) draw; consumes exactly two uniforms.
#[inline]
pub fn standard_normal(stream: &mut RngStream) -> f64 {
    let u1 = stream.next_f64();
    let u2 = stream.next_f64();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
