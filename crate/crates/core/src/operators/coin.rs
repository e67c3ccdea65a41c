use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::State;
use crate::scalar::Real;

/// Grover diffusion coin `2|ψ_c⟩⟨ψ_c| − I` of dimension 4 or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverCoin<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Real> GroverCoin<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> T {
        self.entries[row * self.dim + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// `G·v` for a coin-space vector.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.dim)
            .map(|r| {
                v.iter()
                    .enumerate()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (c, a)| {
                        acc + a * self.entry(r, c)
                    })
            })
            .collect()
    }
}

pub fn grover_coin<T: Real>(dim: usize) -> Result<GroverCoin<T>> {
    if dim != 4 && dim != 8 {
        return Err(Error::InvalidArgument(format!(
            "Grover coin dimension must be 4 or 8, got {dim}"
        )));
    }
    let off = T::lit(2.0) / T::from_count(dim);
    let entries = (0..dim * dim)
        .map(|i| if i / dim == i % dim { off - T::one() } else { off })
        .collect();
    Ok(GroverCoin { dim, entries })
}

/// `(G ⊗ I)·ψ`: the Grover coin on every site.
pub fn apply_coin<T: Real>(state: &State<T>) -> State<T> {
    let cfg = *state.config();
    let d = cfg.coin_dim();
    let block = cfg.sites() * cfg.layers();
    let scale = T::lit(2.0) / T::from_count(d);
    let src = state.amplitudes();
    let mut out = src.to_vec();
    for site in 0..block {
        let sum = (0..d).fold(Complex::new(T::zero(), T::zero()), |acc, c| acc + src[c * block + site]);
        let mean = sum * scale;
        for c in 0..d {
            out[c * block + site] = mean - src[c * block + site];
        }
    }
    State::from_amplitudes(cfg, out).expect("length preserved")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_dim_matches_closed_form() {
        let g = grover_coin::<f64>(4).unwrap();
        let expected = [
            [-0.5, 0.5, 0.5, 0.5],
            [0.5, -0.5, 0.5, 0.5],
            [0.5, 0.5, -0.5, 0.5],
            [0.5, 0.5, 0.5, -0.5],
        ];
        for (r, row) in expected.iter().enumerate() {
            for (c, &want) in row.iter().enumerate() {
                assert_eq!(g.entry(r, c), want);
            }
        }
    }

    #[test]
    fn reflection_and_eigenvectors() {
        for d in [4usize, 8] {
            let g = grover_coin::<f64>(d).unwrap();
            let diag = 2.0 / d as f64 - 1.0;
            for r in 0..d {
                for c in 0..d {
                    assert_eq!(g.entry(r, c), g.entry(c, r));
                    let want = if r == c { diag } else { 2.0 / d as f64 };
                    assert!((g.entry(r, c) - want).abs() < 1e-15);
                    // G² = I
                    let sq: f64 = (0..d).map(|k| g.entry(r, k) * g.entry(k, c)).sum();
                    let id = if r == c { 1.0 } else { 0.0 };
                    assert!((sq - id).abs() < 1e-14);
                }
            }
            let uniform = vec![Complex::new(1.0 / (d as f64).sqrt(), 0.0); d];
            for (a, b) in g.apply(&uniform).iter().zip(&uniform) {
                assert!((a - b).norm() < 1e-15);
            }
            // a vector orthogonal to the uniform coin state picks up -1
            let mut phi = vec![Complex::new(0.0, 0.0); d];
            phi[0] = Complex::new(1.0, 0.0);
            phi[d - 1] = Complex::new(-1.0, 0.0);
            for (a, b) in g.apply(&phi).iter().zip(&phi) {
                assert!((a + b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_other_dimensions() {
        assert!(grover_coin::<f64>(2).is_err());
        assert!(grover_coin::<f64>(6).is_err());
    }
}
