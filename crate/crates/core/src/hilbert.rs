//! Composite Hilbert space `coin ⊗ x ⊗ y ⊗ label`, its flat index layout,
//! state construction and probability extraction.
//!
//! Amplitudes are stored coin-major: the flat index of `(coin, x, y, z)` is
//! `((coin·L + x)·L + y)·m + z`. The label index `z` is the least significant
//! digit, so when `L` and `m` are powers of two the low wires of a circuit are
//! the label bits, followed by the `y` bits, the `x` bits and finally the coin
//! bits.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Open grid; walkers that would leave the lattice self-loop.
    Open,
    /// Torus.
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Labeling {
    /// Plain search, a single layer.
    None,
    /// Layers are decoupled; the walker never changes label.
    Static,
    /// A third coin bit lets the walker hop between neighbouring layers.
    Dynamic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Labeling::None => "none",
            Labeling::Static => "static",
            Labeling::Dynamic => "dynamic",
        })
    }
}

/// Lattice side, boundary condition, layer count and labeling mode. Fixes the
/// dimension of the state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeConfig {
    side: usize,
    boundary: Boundary,
    layers: usize,
    labeling: Labeling,
}

impl LatticeConfig {
    pub fn new(side: usize, boundary: Boundary, layers: usize, labeling: Labeling) -> Result<Self> {
        if side < 2 {
            return Err(Error::InvalidConfig(format!("side must be >= 2, got {side}")));
        }
        if layers < 1 {
            return Err(Error::InvalidConfig("layers must be >= 1".into()));
        }
        if labeling == Labeling::None && layers != 1 {
            return Err(Error::InvalidConfig(format!(
                "labeling = none requires layers = 1, got {layers}"
            )));
        }
        Ok(Self {
            side,
            boundary,
            layers,
            labeling,
        })
    }

    /// Unlabeled search on an `L × L` lattice.
    pub fn plain(side: usize, boundary: Boundary) -> Result<Self> {
        Self::new(side, boundary, 1, Labeling::None)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    /// Number of lattice sites `N = L²`.
    pub fn sites(&self) -> usize {
        self.side * self.side
    }

    /// 4 for the two-qubit coin, 8 when a label-direction coin bit is present.
    pub fn coin_dim(&self) -> usize {
        match self.labeling {
            Labeling::Dynamic => 8,
            Labeling::None | Labeling::Static => 4,
        }
    }

    /// Total state dimension `d·N·m`.
    pub fn dim(&self) -> usize {
        self.coin_dim() * self.sites() * self.layers
    }

    /// Same lattice with a different layer count and labeling.
    pub fn with_layers(&self, layers: usize, labeling: Labeling) -> Result<Self> {
        Self::new(self.side, self.boundary, layers, labeling)
    }
}

/// Movement directions of the two-qubit coin. `↑ = |00⟩`, `← = |01⟩`,
/// `→ = |10⟩`, `↓ = |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Left,
    Right,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Left, Direction::Right, Direction::Down];

    /// Coin index of the direction in the two-qubit coin basis.
    pub fn index(self) -> usize {
        match self {
            Direction::Up => 0,
            Direction::Left => 1,
            Direction::Right => 2,
            Direction::Down => 3,
        }
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    /// Coin bits `(i, j)` with index `2i + j`.
    pub fn bits(self) -> (usize, usize) {
        let c = self.index();
        (c >> 1, c & 1)
    }

    /// The flip-flop partner `(1-i, 1-j)`.
    pub fn flipped(self) -> Self {
        Self::from_index(3 - self.index()).unwrap()
    }
}

/// Coin index in the three-qubit coin: `(i, j)` is the planar direction and
/// `k` the label-direction bit.
pub fn dynamic_coin_index(direction: Direction, k: usize) -> usize {
    2 * direction.index() + (k & 1)
}

/// A marked site `(x, y)` in layer `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mark {
    pub x: usize,
    pub y: usize,
    #[serde(alias = "z")]
    pub layer: usize,
}

impl Mark {
    pub fn new(x: usize, y: usize, layer: usize) -> Self {
        Self { x, y, layer }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})@{}", self.x, self.y, self.layer)
    }
}

/// Per-layer sets of marked positions. Order of insertion is kept so that
/// per-mark time series line up with the input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledMarks {
    marks: Vec<Mark>,
}

impl LabeledMarks {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Rejects duplicate triples. Range checks against a lattice happen in
    /// [`LabeledMarks::validate`].
    pub fn new(marks: impl IntoIterator<Item = Mark>) -> Result<Self> {
        let marks: Vec<Mark> = marks.into_iter().collect();
        for (i, a) in marks.iter().enumerate() {
            if marks[..i].contains(a) {
                return Err(Error::InvalidArgument(format!("duplicate mark {a}")));
            }
        }
        Ok(Self { marks })
    }

    /// Builds marks from `(x, y, z)` triples.
    pub fn from_triples(triples: &[(usize, usize, usize)]) -> Result<Self> {
        Self::new(triples.iter().map(|&(x, y, z)| Mark::new(x, y, z)))
    }

    pub fn validate(&self, config: &LatticeConfig) -> Result<()> {
        for mark in &self.marks {
            check(mark.x, config.side(), "mark x")?;
            check(mark.y, config.side(), "mark y")?;
            check(mark.layer, config.layers(), "mark layer")?;
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Mark> {
        self.marks.iter()
    }

    pub fn as_slice(&self) -> &[Mark] {
        &self.marks
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    /// Marks in layer `z`.
    pub fn in_layer(&self, layer: usize) -> impl Iterator<Item = &Mark> {
        self.marks.iter().filter(move |m| m.layer == layer)
    }

    pub fn contains(&self, x: usize, y: usize, layer: usize) -> bool {
        self.marks.contains(&Mark::new(x, y, layer))
    }
}

fn check(value: usize, bound: usize, what: &'static str) -> Result<()> {
    if value < bound {
        Ok(())
    } else {
        Err(Error::OutOfRange { what, value, bound })
    }
}

/// Flat index of `(coin, x, y, z)`.
pub fn index_of(coin: usize, x: usize, y: usize, z: usize, config: &LatticeConfig) -> Result<usize> {
    let l = config.side();
    let m = config.layers();
    check(coin, config.coin_dim(), "coin")?;
    check(x, l, "x")?;
    check(y, l, "y")?;
    check(z, m, "z")?;
    Ok(((coin * l + x) * l + y) * m + z)
}

/// Unchecked flat index for hot loops. Callers guarantee ranges.
#[inline]
pub(crate) fn flat(coin: usize, x: usize, y: usize, z: usize, l: usize, m: usize) -> usize {
    ((coin * l + x) * l + y) * m + z
}

/// Inverse of [`index_of`]: returns `(coin, x, y, z)`.
pub fn decode(index: usize, config: &LatticeConfig) -> Result<(usize, usize, usize, usize)> {
    check(index, config.dim(), "index")?;
    let l = config.side();
    let m = config.layers();
    let z = index % m;
    let rest = index / m;
    let y = rest % l;
    let rest = rest / l;
    let x = rest % l;
    let coin = rest / l;
    Ok((coin, x, y, z))
}

/// Amplitudes over `coin ⊗ x ⊗ y ⊗ label`, laid out as documented at the
/// module level.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    config: LatticeConfig,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> State<T> {
    pub fn from_amplitudes(config: LatticeConfig, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != config.dim() {
            return Err(Error::InvalidArgument(format!(
                "state length {} does not match dimension {}",
                amplitudes.len(),
                config.dim()
            )));
        }
        Ok(Self { config, amplitudes })
    }

    pub fn zeros(config: LatticeConfig) -> Self {
        Self {
            config,
            amplitudes: vec![Complex::new(T::zero(), T::zero()); config.dim()],
        }
    }

    /// Computational basis state `|coin⟩|x, y⟩|η_z⟩`.
    pub fn basis(config: LatticeConfig, coin: usize, x: usize, y: usize, z: usize) -> Result<Self> {
        let idx = index_of(coin, x, y, z, &config)?;
        let mut state = Self::zeros(config);
        state.amplitudes[idx] = Complex::new(T::one(), T::zero());
        Ok(state)
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn amplitude(&self, coin: usize, x: usize, y: usize, z: usize) -> Result<Complex<T>> {
        Ok(self.amplitudes[index_of(coin, x, y, z, &self.config)?])
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_diff(&self, other: &Self) -> T {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }
}

/// Uniform superposition over coin, position and label.
pub fn uniform_initial_state<T: Real>(config: &LatticeConfig) -> State<T> {
    let amp = T::one() / T::from_count(config.dim()).sqrt();
    State {
        config: *config,
        amplitudes: vec![Complex::new(amp, T::zero()); config.dim()],
    }
}

/// Probability over `(x, y, z)`, indexed `(x·L + y)·m + z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal<T> {
    side: usize,
    layers: usize,
    probabilities: Vec<T>,
}

impl<T: Real> Marginal<T> {
    pub fn get(&self, x: usize, y: usize, z: usize) -> T {
        self.probabilities[(x * self.side + y) * self.layers + z]
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn total(&self) -> T {
        self.probabilities.iter().copied().sum()
    }

    /// Site of maximal probability over the whole space; ties resolve to the
    /// smallest flat index.
    pub fn argmax(&self) -> Mark {
        self.argmax_where(|_| true)
    }

    /// Site of maximal probability within layer `z`.
    pub fn argmax_in_layer(&self, layer: usize) -> Mark {
        self.argmax_where(|z| z == layer)
    }

    fn argmax_where(&self, keep: impl Fn(usize) -> bool) -> Mark {
        let mut best: Option<(usize, T)> = None;
        for (i, &p) in self.probabilities.iter().enumerate() {
            if !keep(i % self.layers) {
                continue;
            }
            if best.is_none_or(|(_, b)| p > b) {
                best = Some((i, p));
            }
        }
        let i = best.map_or(0, |(i, _)| i);
        let z = i % self.layers;
        let rest = i / self.layers;
        Mark::new(rest / self.side, rest % self.side, z)
    }
}

/// `P(x, y, z) = Σ_coin |ψ(coin, x, y, z)|²`.
pub fn position_marginal<T: Real>(state: &State<T>) -> Marginal<T> {
    let cfg = state.config();
    let block = cfg.sites() * cfg.layers();
    let mut probabilities = vec![T::zero(); block];
    for coin_block in state.amplitudes().chunks_exact(block) {
        for (p, a) in probabilities.iter_mut().zip(coin_block) {
            *p += a.norm_sqr();
        }
    }
    Marginal {
        side: cfg.side(),
        layers: cfg.layers(),
        probabilities,
    }
}

/// `Σ_coin |ψ(coin, x, y, z)|²` for a single site, without building the full
/// marginal.
pub fn site_probability<T: Real>(state: &State<T>, x: usize, y: usize, z: usize) -> T {
    let cfg = state.config();
    let (l, m) = (cfg.side(), cfg.layers());
    (0..cfg.coin_dim())
        .map(|c| state.amplitudes()[flat(c, x, y, z, l, m)].norm_sqr())
        .sum()
}
