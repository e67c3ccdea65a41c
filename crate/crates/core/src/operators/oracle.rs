use num_complex::Complex;

use crate::error::Result;
use crate::hilbert::{flat, LabeledMarks, LatticeConfig, State};
use crate::scalar::Real;

/// Marked triples bound to the lattice they live on. Induces the reflection
/// `R = I − 2|ψ_c⟩⟨ψ_c| ⊗ Σ_z Σ_{(x,y)∈M_z} |x,y,η_z⟩⟨x,y,η_z|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSpec {
    config: LatticeConfig,
    marks: LabeledMarks,
}

impl OracleSpec {
    pub fn new(config: LatticeConfig, marks: LabeledMarks) -> Result<Self> {
        marks.validate(&config)?;
        Ok(Self { config, marks })
    }

    /// Oracle with no marks; `R = I`.
    pub fn unmarked(config: LatticeConfig) -> Self {
        Self {
            config,
            marks: LabeledMarks::empty(),
        }
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn marks(&self) -> &LabeledMarks {
        &self.marks
    }
}

/// Applies `−G` to the coin block of every marked site, in place.
pub(crate) fn reflect_marked<T: Real>(amplitudes: &mut [Complex<T>], spec: &OracleSpec) {
    let cfg = spec.config();
    let (l, m, d) = (cfg.side(), cfg.layers(), cfg.coin_dim());
    let scale = T::lit(2.0) / T::from_count(d);
    for mark in spec.marks().iter() {
        let idx = |c: usize| flat(c, mark.x, mark.y, mark.layer, l, m);
        let sum = (0..d).fold(Complex::new(T::zero(), T::zero()), |acc, c| acc + amplitudes[idx(c)]);
        let mean = sum * scale;
        for c in 0..d {
            let i = idx(c);
            amplitudes[i] = amplitudes[i] - mean;
        }
    }
}

pub fn apply_oracle<T: Real>(state: &State<T>, spec: &OracleSpec) -> State<T> {
    let mut out = state.clone();
    reflect_marked(out.amplitudes_mut(), spec);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{Boundary, Labeling};

    #[test]
    fn marked_block_transforms_by_minus_grover() {
        let cfg = LatticeConfig::plain(2, Boundary::Periodic).unwrap();
        let spec = OracleSpec::new(cfg, LabeledMarks::from_triples(&[(0, 0, 0)]).unwrap()).unwrap();
        let s = State::<f64>::basis(cfg, 0, 0, 0, 0).unwrap();
        let out = apply_oracle(&s, &spec);
        let want = [0.5, -0.5, -0.5, -0.5];
        for (c, w) in want.iter().enumerate() {
            assert_eq!(out.amplitude(c, 0, 0, 0).unwrap(), Complex::new(*w, 0.0));
        }
        // untouched elsewhere
        let s = State::<f64>::basis(cfg, 2, 1, 0, 0).unwrap();
        assert_eq!(apply_oracle(&s, &spec), s);
    }

    #[test]
    fn reflection_squares_to_identity() {
        let cfg = LatticeConfig::new(3, Boundary::Open, 2, Labeling::Dynamic).unwrap();
        let spec = OracleSpec::new(cfg, LabeledMarks::from_triples(&[(0, 1, 0), (2, 2, 1)]).unwrap()).unwrap();
        let amps: Vec<_> = (0..cfg.dim())
            .map(|i| Complex::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let s = State::from_amplitudes(cfg, amps).unwrap();
        let twice = apply_oracle(&apply_oracle(&s, &spec), &spec);
        assert!(twice.max_diff(&s) < 1e-14);
    }

    #[test]
    fn rejects_marks_outside_lattice() {
        let cfg = LatticeConfig::new(4, Boundary::Open, 2, Labeling::Static).unwrap();
        assert!(OracleSpec::new(cfg, LabeledMarks::from_triples(&[(0, 0, 2)]).unwrap()).is_err());
    }
}
