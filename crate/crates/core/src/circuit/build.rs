use std::ops::Range;

use super::{Circuit, Control, Gate, WireMap};
use crate::error::{Error, Result};
use crate::hilbert::{Boundary, LabeledMarks, Labeling, LatticeConfig};

/// `|v⟩ → |v + 1 mod 2ⁿ⟩` on `n` wires, wire 0 least significant. Each bit is
/// flipped when every lower bit is 1, starting from the top bit so lower bits
/// are still unchanged when tested.
pub fn incrementor(n: usize) -> Circuit {
    counter(n, true)
}

/// `|v⟩ → |v − 1 mod 2ⁿ⟩`: the incrementor with every control polarity
/// flipped (a bit flips when every lower bit is 0).
pub fn decrementor(n: usize) -> Circuit {
    counter(n, false)
}

fn counter(n: usize, polarity: bool) -> Circuit {
    let mut c = Circuit::new(n);
    for t in (0..n).rev() {
        let controls = (0..t).map(|w| Control { wire: w, on: polarity });
        c.push(Gate::mcx(controls, t)).expect("wires in range");
    }
    c
}

/// `G` on `coin_wires` wires. Two wires: `(X⊗X)·H_a·CX_{a→b}·H_a` with `a` the
/// upper wire, which equals `G` exactly. Three wires:
/// `H^⊗3·X^⊗3·CCZ·X^⊗3·H^⊗3 = −G`, correct up to a global phase.
pub fn diffusion_circuit(coin_wires: usize) -> Result<Circuit> {
    let mut c = Circuit::new(coin_wires);
    match coin_wires {
        2 => {
            let (b, a) = (0, 1);
            c.push(Gate::h(a))?;
            c.push(Gate::cx(a, b))?;
            c.push(Gate::h(a))?;
            c.push(Gate::x(a))?;
            c.push(Gate::x(b))?;
        }
        3 => {
            let layer = |c: &mut Circuit, g: fn(usize) -> Gate| (0..3).try_for_each(|w| c.push(g(w)));
            layer(&mut c, Gate::h)?;
            layer(&mut c, Gate::x)?;
            c.push(Gate::z(2).controlled([Control::on(0), Control::on(1)]))?;
            layer(&mut c, Gate::x)?;
            layer(&mut c, Gate::h)?;
        }
        n => return Err(Error::InvalidArgument(format!("diffusion on {n} coin wires"))),
    }
    Ok(c)
}

/// `(H⊗H)·A·(H⊗H)` with `A = diag(1,−1,−1,−1) = (Z⊗Z)·CZ`. Exactly `G`.
pub fn hadamard_basis_diffusion() -> Circuit {
    let mut c = Circuit::new(2);
    let gates = [
        Gate::h(0),
        Gate::h(1),
        Gate::z(1).controlled([Control::on(0)]),
        Gate::z(0),
        Gate::z(1),
        Gate::h(0),
        Gate::h(1),
    ];
    for g in gates {
        c.push(g).expect("two wires");
    }
    c
}

fn compilable(config: &LatticeConfig) -> Result<WireMap> {
    if config.boundary() != Boundary::Periodic {
        return Err(Error::Unsupported("circuits are compiled for the periodic boundary only".into()));
    }
    WireMap::for_config(config)
}

fn wires(range: &Range<usize>) -> Vec<usize> {
    range.clone().collect()
}

fn controlled_counter(c: &mut Circuit, on: &Range<usize>, up: bool, controls: &[Control]) -> Result<()> {
    let sub = if up { incrementor(on.len()) } else { decrementor(on.len()) };
    c.append_mapped(&sub, &wires(on), controls)
}

/// Flip-flop shift for the periodic boundary.
///
/// Static and unlabeled: translations controlled on the coin state
/// (`↑=00: y+1`, `↓=11: y−1`, `→=10: x+1`, `←=01: x−1`), then `X` on both
/// coin wires.
///
/// Dynamic: the same with `10: x−1` and `01: x+1`; the label counter moves up
/// on `k=0` and down on `k=1`, `k` is flipped, and finally the two
/// configurations that crossed the label edge are swapped back so that the
/// label register behaves as an open chain.
pub fn flipflop_circuit(config: &LatticeConfig) -> Result<Circuit> {
    let map = compilable(config)?;
    let mut c = Circuit::for_lattice(config)?;
    let coin = wires(&map.coin);
    let (hi, lo) = (coin[coin.len() - 1], coin[coin.len() - 2]);
    let sel = |i: bool, j: bool| [Control { wire: hi, on: i }, Control { wire: lo, on: j }];
    let dynamic = config.labeling() == Labeling::Dynamic;

    controlled_counter(&mut c, &map.y, true, &sel(false, false))?;
    controlled_counter(&mut c, &map.y, false, &sel(true, true))?;
    controlled_counter(&mut c, &map.x, !dynamic, &sel(true, false))?;
    controlled_counter(&mut c, &map.x, dynamic, &sel(false, true))?;
    c.push(Gate::x(hi))?;
    c.push(Gate::x(lo))?;

    if dynamic && !map.label.is_empty() {
        let k = coin[0];
        controlled_counter(&mut c, &map.label, true, &[Control::off(k)])?;
        controlled_counter(&mut c, &map.label, false, &[Control::on(k)])?;
        c.push(Gate::x(k))?;
        // Swap (k=1, z=0) with (k=0, z=all ones).
        let label = wires(&map.label);
        for &z in &label {
            c.push(Gate::cx(k, z))?;
        }
        c.push(Gate::mcx(label.iter().map(|&z| Control::on(z)), k))?;
        for &z in &label {
            c.push(Gate::cx(k, z))?;
        }
    }
    Ok(c)
}

/// `R` as a sequence of controlled `−G` gates, one per mark: flip the
/// position and label wires whose mark bit is 0, apply `−G` to the coin
/// controlled on all of them, and undo the flips.
pub fn oracle_circuit(config: &LatticeConfig, marks: &LabeledMarks) -> Result<Circuit> {
    let map = compilable(config)?;
    marks.validate(config)?;
    let mut c = Circuit::for_lattice(config)?;
    let registers: Vec<usize> = map.label.clone().chain(map.y.clone()).chain(map.x.clone()).collect();
    for mark in marks.iter() {
        let value = |range: &Range<usize>, v: usize| {
            range.clone().enumerate().map(move |(b, w)| (w, (v >> b) & 1 == 1))
        };
        let bits: Vec<(usize, bool)> = value(&map.label, mark.layer)
            .chain(value(&map.y, mark.y))
            .chain(value(&map.x, mark.x))
            .collect();
        let zeros: Vec<usize> = bits.iter().filter(|(_, b)| !b).map(|(w, _)| *w).collect();
        for &w in &zeros {
            c.push(Gate::x(w))?;
        }
        c.push(Gate::neg_grover(wires(&map.coin)).controlled(registers.iter().map(|&w| Control::on(w))))?;
        for &w in &zeros {
            c.push(Gate::x(w))?;
        }
    }
    Ok(c)
}

/// One application of `U' = S·(G⊗I)·R`.
pub fn step_circuit(config: &LatticeConfig, marks: &LabeledMarks) -> Result<Circuit> {
    let map = compilable(config)?;
    let mut c = oracle_circuit(config, marks)?;
    c.append_mapped(&diffusion_circuit(map.coin.len())?, &wires(&map.coin), &[])?;
    c.extend(&flipflop_circuit(config)?)?;
    Ok(c)
}

/// Hadamard on every wire, which prepares the uniform state, followed by
/// `steps` walk steps.
pub fn search_circuit(config: &LatticeConfig, marks: &LabeledMarks, steps: usize) -> Result<Circuit> {
    let mut c = Circuit::for_lattice(config)?;
    for w in 0..c.width() {
        c.push(Gate::h(w))?;
    }
    let one = step_circuit(config, marks)?;
    for _ in 0..steps {
        c.extend(&one)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_unitary, max_diff_up_to_global_phase};
    use ndarray::Array2;
    use num_complex::Complex64;

    fn permutation_of(c: &Circuit) -> Vec<usize> {
        let u = circuit_unitary::<f64>(c).unwrap();
        (0..u.ncols())
            .map(|j| {
                let col = u.column(j);
                let i = col.iter().position(|v| (v.re - 1.0).abs() < 1e-12).unwrap();
                assert!(col.iter().filter(|v| v.norm() > 1e-12).count() == 1);
                i
            })
            .collect()
    }

    #[test]
    fn incrementor_adds_one() {
        for n in 1..=5 {
            let perm = permutation_of(&incrementor(n));
            for (v, out) in perm.iter().enumerate() {
                assert_eq!(*out, (v + 1) % (1 << n), "n={n} v={v}");
            }
        }
    }

    #[test]
    fn decrementor_subtracts_one_and_inverts_incrementor() {
        for n in 1..=5 {
            let perm = permutation_of(&decrementor(n));
            for (v, out) in perm.iter().enumerate() {
                assert_eq!(*out, (v + (1 << n) - 1) % (1 << n));
            }
            let reversed = incrementor(n).inverse();
            assert_eq!(permutation_of(&reversed), perm);
        }
    }

    fn grover(d: usize) -> Array2<Complex64> {
        Array2::from_shape_fn((d, d), |(i, j)| {
            let v = 2.0 / d as f64 - if i == j { 1.0 } else { 0.0 };
            Complex64::new(v, 0.0)
        })
    }

    #[test]
    fn two_wire_diffusion_is_exact() {
        let u = circuit_unitary::<f64>(&diffusion_circuit(2).unwrap()).unwrap();
        let diff = (&u - &grover(4)).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "{diff}");
        let u = circuit_unitary::<f64>(&hadamard_basis_diffusion()).unwrap();
        let diff = (&u - &grover(4)).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn hadamard_basis_core_is_diagonal() {
        let mut a = Circuit::new(2);
        a.push(Gate::z(1).controlled([Control::on(0)])).unwrap();
        a.push(Gate::z(0)).unwrap();
        a.push(Gate::z(1)).unwrap();
        let u = circuit_unitary::<f64>(&a).unwrap();
        for (i, want) in [1.0, -1.0, -1.0, -1.0].into_iter().enumerate() {
            assert!((u[[i, i]] - Complex64::new(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn three_wire_diffusion_up_to_phase() {
        let u = circuit_unitary::<f64>(&diffusion_circuit(3).unwrap()).unwrap();
        let g = grover(8);
        let diff = max_diff_up_to_global_phase(u.as_slice().unwrap(), g.as_slice().unwrap()).unwrap();
        assert!(diff < 1e-12, "{diff}");
        let neg = (&u + &g).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(neg < 1e-12, "{neg}");
    }

    #[test]
    fn open_boundary_is_unsupported() {
        let cfg = LatticeConfig::plain(4, Boundary::Open).unwrap();
        assert!(matches!(flipflop_circuit(&cfg), Err(Error::Unsupported(_))));
    }

    #[test]
    fn oracle_uses_one_controlled_gate_per_mark() {
        let cfg = LatticeConfig::new(4, Boundary::Periodic, 2, Labeling::Static).unwrap();
        let marks = LabeledMarks::from_triples(&[(0, 0, 0), (3, 3, 1)]).unwrap();
        let c = oracle_circuit(&cfg, &marks).unwrap();
        assert_eq!(c.gates().iter().filter(|g| g.name() == "cu").count(), 2);
        // (0,0,0) flips all five register wires twice; (3,3,1) none.
        assert_eq!(c.gates().iter().filter(|g| g.name() == "x").count(), 10);
    }
}
