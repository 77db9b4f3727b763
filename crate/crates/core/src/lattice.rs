//! The randomly oriented lattice and its Markov chain.
//!
//! Horizontal edges at level `y` are usable only in the direction of a
//! fair random sign `eps_y`; vertical edges are undirected. The walk moves
//! up or down with probability `p/2` each and horizontally (in the allowed
//! direction) with probability `1-p`.

use std::io::Write;

use crate::rng::{GeometricParam, RngStream};

/// Lazily realized i.i.d. +/-1 orientation field indexed by lattice level.
///
/// Signs are derived from a per-level key, so the value at a level does not
/// depend on query order; realized levels are memoized in a growable table
/// (which also serves as the exportable snapshot).
#[derive(Clone, Debug)]
pub struct OrientationField {
    source: FieldSource,
    realized: LevelTable,
}

#[derive(Clone, Debug)]
enum FieldSource {
    Keyed(RngStream),
    Forced(i8),
}

impl OrientationField {
    /// Random field backed by `stream`; the stream is captured as a key
    /// generator, per-level values come from `stream.substream2`.
    pub fn random(stream: &RngStream) -> Self {
        Self {
            source: FieldSource::Keyed(stream.clone()),
            realized: LevelTable::new(),
        }
    }

    /// Constant field, every level oriented in `sign`; test fixture for
    /// monotonicity and exact-value checks.
    pub fn forced(sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "orientation must be +1 or -1");
        Self {
            source: FieldSource::Forced(sign),
            realized: LevelTable::new(),
        }
    }

    /// Orientation at level `y`; samples lazily, memoizes, idempotent.
    #[inline]
    pub fn orientation_at(&mut self, y: i64) -> i8 {
        if let Some(v) = self.realized.get(y) {
            return v;
        }
        let v = match &self.source {
            FieldSource::Keyed(base) => {
                let mut s = base.substream2(y as u64, 0);
                crate::rng::sample_rademacher(&mut s)
            }
            FieldSource::Forced(sign) => *sign,
        };
        self.realized.set(y, v);
        v
    }

    /// Realized levels in ascending order.
    pub fn snapshot(&self) -> Vec<(i64, i8)> {
        self.realized.entries()
    }

    /// CSV snapshot of realized levels, columns `y,epsilon`.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "y,epsilon")?;
        for (y, eps) in self.snapshot() {
            writeln!(w, "{y},{eps}")?;
        }
        Ok(())
    }
}

/// Memo table over a contiguous window of levels; 0 marks unrealized.
#[derive(Clone, Debug)]
struct LevelTable {
    offset: i64,
    values: Vec<i8>,
}

impl LevelTable {
    fn new() -> Self {
        Self {
            offset: 0,
            values: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, y: i64) -> Option<i8> {
        let idx = y - self.offset;
        if idx < 0 || idx as usize >= self.values.len() {
            return None;
        }
        match self.values[idx as usize] {
            0 => None,
            v => Some(v),
        }
    }

    fn set(&mut self, y: i64, v: i8) {
        if self.values.is_empty() {
            self.offset = y - 4;
            self.values = vec![0; 9];
        }
        while y < self.offset {
            // grow downward by doubling
            let grow = self.values.len().max(8);
            let mut next = vec![0; grow + self.values.len()];
            next[grow..].copy_from_slice(&self.values);
            self.offset -= grow as i64;
            self.values = next;
        }
        while (y - self.offset) as usize >= self.values.len() {
            let grow = self.values.len().max(8);
            self.values.resize(self.values.len() + grow, 0);
        }
        self.values[(y - self.offset) as usize] = v;
    }

    fn entries(&self) -> Vec<(i64, i8)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (self.offset + i as i64, v))
            .collect()
    }
}

/// A lattice vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeState {
    pub x: i64,
    pub y: i64,
}

impl LatticeState {
    pub const ORIGIN: LatticeState = LatticeState { x: 0, y: 0 };
}

/// One transition of the lattice walk: up/down with probability `p/2`
/// each, horizontal in the allowed direction with probability `1-p`.
/// Consumes exactly one draw.
#[inline]
pub fn step_lattice(
    state: LatticeState,
    field: &mut OrientationField,
    param: &GeometricParam,
    stream: &mut RngStream,
) -> LatticeState {
    let p = param.p();
    let u = stream.next_f64();
    if u <= 1.0 - p {
        LatticeState {
            x: state.x + i64::from(field.orientation_at(state.y)),
            y: state.y,
        }
    } else if u <= 1.0 - p / 2.0 {
        LatticeState {
            x: state.x,
            y: state.y + 1,
        }
    } else {
        LatticeState {
            x: state.x,
            y: state.y - 1,
        }
    }
}

/// Walk trajectory `M_0..M_n` started at the origin.
#[derive(Clone, Debug)]
pub struct LatticeTrajectory {
    pub states: Vec<LatticeState>,
    pub p: f64,
}

impl LatticeTrajectory {
    pub fn len_steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn state(&self, n: usize) -> LatticeState {
        self.states[n]
    }

    pub fn last(&self) -> LatticeState {
        *self.states.last().expect("trajectory never empty")
    }

    /// CSV export, columns `step,x,y`.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "step,x,y")?;
        for (k, s) in self.states.iter().enumerate() {
            writeln!(w, "{k},{},{}", s.x, s.y)?;
        }
        Ok(())
    }
}

/// Simulate `n_steps` transitions from the origin.
pub fn simulate_lattice(
    n_steps: usize,
    param: &GeometricParam,
    field: &mut OrientationField,
    stream: &mut RngStream,
) -> LatticeTrajectory {
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut state = LatticeState::ORIGIN;
    states.push(state);
    for _ in 0..n_steps {
        state = step_lattice(state, field, param, stream);
        states.push(state);
    }
    LatticeTrajectory {
        states,
        p: param.p(),
    }
}

/// Endpoint-only variant of [`simulate_lattice`]; same draws, no storage.
pub fn lattice_endpoint(
    n_steps: usize,
    param: &GeometricParam,
    field: &mut OrientationField,
    stream: &mut RngStream,
) -> LatticeState {
    let mut state = LatticeState::ORIGIN;
    for _ in 0..n_steps {
        state = step_lattice(state, field, param, stream);
    }
    state
}

pub fn is_legal_increment(from: LatticeState, to: LatticeState, eps_at_level: i8) -> bool {
    let dx = to.x - from.x;
    let dy = to.y - from.y;
    (dx == 0 && dy.abs() == 1) || (dy == 0 && dx == i64::from(eps_at_level))
}
