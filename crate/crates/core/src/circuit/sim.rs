use ndarray::Array2;
use num_complex::Complex;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Widest circuit for which a full unitary is built (4096 × 4096).
pub const UNITARY_WIDTH_LIMIT: usize = 12;

fn controls_fire(gate: &Gate, index: usize) -> bool {
    gate.controls.iter().all(|c| ((index >> c.wire) & 1 == 1) == c.on)
}

fn apply_gate<T: Real>(gate: &Gate, amps: &mut [Complex<T>]) {
    let target_mask: usize = gate.targets.iter().map(|&t| 1 << t).sum();
    let offsets: Vec<usize> = (0..1usize << gate.targets.len())
        .map(|sub| {
            gate.targets
                .iter()
                .enumerate()
                .filter(|(b, _)| (sub >> b) & 1 == 1)
                .map(|(_, &t)| 1 << t)
                .sum()
        })
        .collect();
    let half = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let phase = match gate.kind {
        GateKind::Phase(theta) => Complex::from_polar(T::one(), T::lit(theta)),
        _ => Complex::new(T::one(), T::zero()),
    };
    let mut block = vec![Complex::new(T::zero(), T::zero()); offsets.len()];
    for base in 0..amps.len() {
        if base & target_mask != 0 || !controls_fire(gate, base) {
            continue;
        }
        match gate.kind {
            GateKind::X => amps.swap(base, base | offsets[1]),
            GateKind::Z => amps[base | offsets[1]] = -amps[base | offsets[1]],
            GateKind::Phase(_) => amps[base | offsets[1]] = amps[base | offsets[1]] * phase,
            GateKind::H => {
                let (a, b) = (amps[base], amps[base | offsets[1]]);
                amps[base] = (a + b).scale(half);
                amps[base | offsets[1]] = (a - b).scale(half);
            }
            GateKind::NegGrover => {
                for (slot, &off) in block.iter_mut().zip(&offsets) {
                    *slot = amps[base | off];
                }
                let w = T::lit(2.0) / T::from_count(block.len());
                let mean = block.iter().fold(Complex::new(T::zero(), T::zero()), |s, &v| s + v).scale(w);
                for (v, &off) in block.iter().zip(&offsets) {
                    amps[base | off] = *v - mean;
                }
            }
        }
    }
}

/// Runs `circuit` on `amps` in place. The slice length must be `2^width`.
pub fn run_circuit<T: Real>(circuit: &Circuit, amps: &mut [Complex<T>]) -> Result<()> {
    if amps.len() != 1usize << circuit.width() {
        return Err(Error::InvalidArgument(format!(
            "state of length {} for a {}-wire circuit",
            amps.len(),
            circuit.width()
        )));
    }
    for gate in circuit.gates() {
        apply_gate(gate, amps);
    }
    Ok(())
}

/// Output state for the all-zeros input.
pub fn statevector<T: Real>(circuit: &Circuit) -> Result<Vec<Complex<T>>> {
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 1usize << circuit.width()];
    amps[0] = Complex::new(T::one(), T::zero());
    run_circuit(circuit, &mut amps)?;
    Ok(amps)
}

/// Full unitary, column `j` being the image of basis state `j`.
pub fn circuit_unitary<T: Real>(circuit: &Circuit) -> Result<Array2<Complex<T>>> {
    if circuit.width() > UNITARY_WIDTH_LIMIT {
        return Err(Error::Size {
            dim: 1 << circuit.width(),
            limit: 1 << UNITARY_WIDTH_LIMIT,
        });
    }
    let dim = 1usize << circuit.width();
    let mut out = Array2::from_elem((dim, dim), Complex::new(T::zero(), T::zero()));
    let mut column = vec![Complex::new(T::zero(), T::zero()); dim];
    for j in 0..dim {
        column.iter_mut().for_each(|v| *v = Complex::new(T::zero(), T::zero()));
        column[j] = Complex::new(T::one(), T::zero());
        run_circuit(circuit, &mut column)?;
        out.column_mut(j).iter_mut().zip(&column).for_each(|(o, v)| *o = *v);
    }
    Ok(out)
}

/// `max |a_i·e^{-iφ_a} − b_i·e^{-iφ_b}|`, where both phases are read off the
/// entry at which `|a|` is largest.
pub fn max_diff_up_to_global_phase<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!("lengths {} and {} differ", a.len(), b.len())));
    }
    let Some(k) = (0..a.len()).max_by(|&i, &j| a[i].norm_sqr().partial_cmp(&a[j].norm_sqr()).expect("finite")) else {
        return Ok(T::zero());
    };
    let unit = |z: Complex<T>| {
        let n = z.norm();
        if n > T::zero() {
            z.conj().unscale(n)
        } else {
            Complex::new(T::one(), T::zero())
        }
    };
    let (pa, pb) = (unit(a[k]), unit(b[k]));
    Ok(a.iter()
        .zip(b)
        .map(|(&x, &y)| (x * pa - y * pb).norm())
        .fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Control;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn cx_permutes_basis() {
        let mut circ = Circuit::new(2);
        circ.push(Gate::cx(0, 1)).unwrap();
        let u = circuit_unitary::<f64>(&circ).unwrap();
        // |01⟩ (index 1) -> |11⟩ (index 3)
        assert_eq!(u[[3, 1]], c(1.0));
        assert_eq!(u[[0, 0]], c(1.0));
        assert_eq!(u[[2, 2]], c(1.0));
        assert_eq!(u[[1, 3]], c(1.0));
    }

    #[test]
    fn negative_control_polarity() {
        let mut circ = Circuit::new(2);
        circ.push(Gate::x(1).controlled([Control::off(0)])).unwrap();
        let u = circuit_unitary::<f64>(&circ).unwrap();
        assert_eq!(u[[2, 0]], c(1.0));
        assert_eq!(u[[1, 1]], c(1.0));
    }

    #[test]
    fn neg_grover_matches_closed_form() {
        let mut circ = Circuit::new(2);
        circ.push(Gate::neg_grover(vec![0, 1])).unwrap();
        let u = circuit_unitary::<f64>(&circ).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.5 } else { -0.5 };
                assert!((u[[i, j]] - c(want)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn hadamard_squares_to_identity() {
        let mut circ = Circuit::new(1);
        circ.push(Gate::h(0)).unwrap();
        circ.push(Gate::h(0)).unwrap();
        let u = circuit_unitary::<f64>(&circ).unwrap();
        assert!((u[[0, 0]] - c(1.0)).norm() < 1e-15);
        assert!(u[[0, 1]].norm() < 1e-15);
    }

    #[test]
    fn global_phase_is_ignored() {
        let a = vec![c(0.6), Complex::new(0.0, 0.8)];
        let phase = Complex::from_polar(1.0, 1.234);
        let b: Vec<_> = a.iter().map(|v| v * phase).collect();
        assert!(max_diff_up_to_global_phase(&a, &b).unwrap() < 1e-15);
        let flipped = vec![c(0.6), Complex::new(0.0, -0.8)];
        assert!(max_diff_up_to_global_phase(&a, &flipped).unwrap() > 1.0);
    }

    #[test]
    fn width_guard() {
        assert!(circuit_unitary::<f64>(&Circuit::new(13)).is_err());
    }
}
