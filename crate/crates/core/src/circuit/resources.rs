use std::collections::BTreeMap;

use serde::Serialize;

use super::{exact_log2, Circuit};
use crate::hilbert::{Labeling, LatticeConfig};

/// Literal gate histogram plus the analytic Toffoli and CNOT estimates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub width: usize,
    /// `D = log₂ N`.
    pub position_wires: usize,
    /// `D' = log₂ m`.
    pub label_wires: usize,
    pub total_gates: usize,
    pub histogram: BTreeMap<String, usize>,
    pub toffoli_estimate: u64,
    pub cnot_estimate: u64,
}

/// Toffoli count of an `n`-control multi-controlled X, `≈ 16n`.
pub fn mcx_toffoli_estimate(n: u64) -> u64 {
    16 * n
}

/// Flip-flop shift cost. Four controlled translations over `D/2` wires each,
/// the one on `n` wires costing `16·n/2` Toffoli, sum to `4(D² + D)`; the
/// dynamic label register adds `8D'(D' + 1)`.
pub fn toffoli_estimate(d: u64, d_label: u64, labeling: Labeling) -> u64 {
    let planar = 4 * (d * d + d);
    match labeling {
        Labeling::Dynamic => planar + 8 * d_label * (d_label + 1),
        Labeling::None | Labeling::Static => planar,
    }
}

/// An `n`-wire controlled gate needs at least `2n` CNOTs; summed over every
/// controlled gate of the circuit.
pub fn cnot_estimate(circuit: &Circuit) -> u64 {
    circuit
        .gates()
        .iter()
        .filter(|g| !g.controls.is_empty())
        .map(|g| 2 * (g.controls.len() + g.targets.len()) as u64)
        .sum()
}

fn ceil_log2(n: usize) -> usize {
    exact_log2(n).unwrap_or_else(|| (usize::BITS - (n - 1).leading_zeros()) as usize)
}

pub fn gate_counts(circuit: &Circuit, config: &LatticeConfig) -> ResourceReport {
    let mut histogram = BTreeMap::new();
    for g in circuit.gates() {
        *histogram.entry(g.name().to_string()).or_insert(0) += 1;
    }
    let d = 2 * ceil_log2(config.side());
    let d_label = ceil_log2(config.layers());
    ResourceReport {
        width: circuit.width(),
        position_wires: d,
        label_wires: d_label,
        total_gates: circuit.len(),
        histogram,
        toffoli_estimate: toffoli_estimate(d as u64, d_label as u64, config.labeling()),
        cnot_estimate: cnot_estimate(circuit),
    }
}
