//! Gate-level compilation of the search walk.
//!
//! Wire `w` of a compiled circuit is bit `w` of the flat state index, so the
//! label wires come first, then the `y` wires, the `x` wires and the coin
//! wires on top. With this ordering a circuit state vector lines up with
//! [`crate::hilbert::State`] without any permutation. Only the periodic
//! boundary is compiled; side and layer count must be powers of two.

mod build;
pub mod qasm;
mod resources;
mod sim;

pub use build::{
    decrementor, diffusion_circuit, flipflop_circuit, hadamard_basis_diffusion, incrementor,
    oracle_circuit, search_circuit, step_circuit,
};
pub use qasm::{export_qasm, inline_qasm, parse_qasm};
pub use resources::{cnot_estimate, gate_counts, mcx_toffoli_estimate, toffoli_estimate, ResourceReport};
pub use sim::{circuit_unitary, max_diff_up_to_global_phase, run_circuit, statevector, UNITARY_WIDTH_LIMIT};

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::hilbert::LatticeConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    Z,
    /// `diag(1, e^{iθ})`.
    Phase(f64),
    /// `−G = I − 2|ψ_c⟩⟨ψ_c|` on 2 or 3 coin wires.
    NegGrover,
}

/// Control wire with polarity: `on = true` fires on `|1⟩`, `false` on `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub wire: usize,
    pub on: bool,
}

impl Control {
    pub fn on(wire: usize) -> Self {
        Self { wire, on: true }
    }

    pub fn off(wire: usize) -> Self {
        Self { wire, on: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<Control>,
    pub targets: Vec<usize>,
}

impl Gate {
    pub fn h(target: usize) -> Self {
        Self::single(GateKind::H, target)
    }

    pub fn x(target: usize) -> Self {
        Self::single(GateKind::X, target)
    }

    pub fn z(target: usize) -> Self {
        Self::single(GateKind::Z, target)
    }

    pub fn phase(theta: f64, target: usize) -> Self {
        Self::single(GateKind::Phase(theta), target)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::x(target).controlled([Control::on(control)])
    }

    pub fn mcx(controls: impl IntoIterator<Item = Control>, target: usize) -> Self {
        Self::x(target).controlled(controls)
    }

    pub fn neg_grover(targets: Vec<usize>) -> Self {
        Self {
            kind: GateKind::NegGrover,
            controls: Vec::new(),
            targets,
        }
    }

    fn single(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            controls: Vec::new(),
            targets: vec![target],
        }
    }

    /// Adds controls in front of the existing ones.
    pub fn controlled(mut self, extra: impl IntoIterator<Item = Control>) -> Self {
        let mut controls: Vec<Control> = extra.into_iter().collect();
        controls.append(&mut self.controls);
        self.controls = controls;
        self
    }

    /// Gate name used in histograms: `x`, `cx`, `ccx`, `mcx`, `z`, `cz`, `mcz`,
    /// `p`, `cp`, `mcp`, `h`, `neg_grover` and `cu` (controlled `−G`).
    pub fn name(&self) -> &'static str {
        let k = self.controls.len();
        match (self.kind, k) {
            (GateKind::H, 0) => "h",
            (GateKind::H, _) => "ch",
            (GateKind::X, 0) => "x",
            (GateKind::X, 1) => "cx",
            (GateKind::X, 2) => "ccx",
            (GateKind::X, _) => "mcx",
            (GateKind::Z, 0) => "z",
            (GateKind::Z, 1) => "cz",
            (GateKind::Z, _) => "mcz",
            (GateKind::Phase(_), 0) => "p",
            (GateKind::Phase(_), 1) => "cp",
            (GateKind::Phase(_), _) => "mcp",
            (GateKind::NegGrover, 0) => "neg_grover",
            (GateKind::NegGrover, _) => "cu",
        }
    }

    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            GateKind::Phase(theta) => GateKind::Phase(-theta),
            other => other,
        };
        Self {
            kind,
            controls: self.controls.clone(),
            targets: self.targets.clone(),
        }
    }

    fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().map(|c| c.wire).chain(self.targets.iter().copied())
    }

    fn check(&self, width: usize) -> Result<()> {
        let expected_targets = match self.kind {
            GateKind::NegGrover => self.targets.len() == 2 || self.targets.len() == 3,
            _ => self.targets.len() == 1,
        };
        if !expected_targets {
            return Err(Error::InvalidArgument(format!(
                "{} gate with {} targets",
                self.name(),
                self.targets.len()
            )));
        }
        if self.kind == GateKind::H && !self.controls.is_empty() {
            return Err(Error::Unsupported("controlled Hadamard".into()));
        }
        let wires: Vec<usize> = self.wires().collect();
        for (i, &w) in wires.iter().enumerate() {
            if w >= width {
                return Err(Error::OutOfRange {
                    what: "wire",
                    value: w,
                    bound: width,
                });
            }
            if wires[..i].contains(&w) {
                return Err(Error::InvalidArgument(format!(
                    "wire {w} used twice in one {} gate",
                    self.name()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        if let GateKind::Phase(theta) = self.kind {
            write!(f, "({theta})")?;
        }
        for c in &self.controls {
            write!(f, " {}{}", if c.on { "" } else { "!" }, c.wire)?;
        }
        write!(f, " ->")?;
        for t in &self.targets {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}

/// Role of each wire in a compiled walk circuit. Ranges are in ascending wire
/// order, least significant bit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireMap {
    pub label: Range<usize>,
    pub y: Range<usize>,
    pub x: Range<usize>,
    pub coin: Range<usize>,
}

impl WireMap {
    /// Requires power-of-two side and layer count.
    pub fn for_config(config: &LatticeConfig) -> Result<Self> {
        let axis = exact_log2(config.side())
            .ok_or_else(|| Error::Unsupported(format!("side {} is not a power of two", config.side())))?;
        let label = exact_log2(config.layers())
            .ok_or_else(|| Error::Unsupported(format!("layer count {} is not a power of two", config.layers())))?;
        let coin = exact_log2(config.coin_dim()).expect("coin dimension is 4 or 8");
        Ok(Self {
            label: 0..label,
            y: label..label + axis,
            x: label + axis..label + 2 * axis,
            coin: label + 2 * axis..label + 2 * axis + coin,
        })
    }

    pub fn width(&self) -> usize {
        self.coin.end
    }

    /// Position wires `D = log₂ N`.
    pub fn position_wires(&self) -> usize {
        self.y.len() + self.x.len()
    }

    /// Label wires `D' = log₂ m`.
    pub fn label_wires(&self) -> usize {
        self.label.len()
    }
}

pub(crate) fn exact_log2(n: usize) -> Option<usize> {
    n.is_power_of_two().then(|| n.trailing_zeros() as usize)
}

/// Ordered gate list over a fixed number of wires.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    wires: Option<WireMap>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
            wires: None,
        }
    }

    pub fn for_lattice(config: &LatticeConfig) -> Result<Self> {
        let wires = WireMap::for_config(config)?;
        Ok(Self {
            width: wires.width(),
            gates: Vec::new(),
            wires: Some(wires),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn wire_map(&self) -> Option<&WireMap> {
        self.wires.as_ref()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`, mapping its wire `w` to `placement[w]` and adding
    /// `controls` to every gate.
    pub fn append_mapped(&mut self, other: &Circuit, placement: &[usize], controls: &[Control]) -> Result<()> {
        if placement.len() != other.width {
            return Err(Error::InvalidArgument(format!(
                "placement covers {} wires, sub-circuit has {}",
                placement.len(),
                other.width
            )));
        }
        for gate in &other.gates {
            let mapped = Gate {
                kind: gate.kind,
                controls: gate
                    .controls
                    .iter()
                    .map(|c| Control {
                        wire: placement[c.wire],
                        on: c.on,
                    })
                    .collect(),
                targets: gate.targets.iter().map(|&t| placement[t]).collect(),
            }
            .controlled(controls.iter().copied());
            self.push(mapped)?;
        }
        Ok(())
    }

    /// Appends a circuit of the same width unchanged.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        let identity: Vec<usize> = (0..other.width).collect();
        self.append_mapped(other, &identity, &[])
    }

    pub fn inverse(&self) -> Self {
        Self {
            width: self.width,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            wires: self.wires.clone(),
        }
    }
}
