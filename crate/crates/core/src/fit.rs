//! Least-squares fit of `p(N) = a / ln(b·N)`.
//!
//! For fixed `b` the model is linear in `a`, so `a` is profiled out in closed
//! form and only `ln b` is searched: a log-spaced scan over
//! `b ∈ [1e-3, 1e3]` (clipped so that `b·N > 1` for every point) brackets the
//! minimum, then golden-section search refines it.

use crate::error::{Error, Result};
use crate::scalar::Real;

const B_MIN: f64 = 1e-3;
const B_MAX: f64 = 1e3;
const SCAN_POINTS: usize = 400;
const GOLDEN_ITERS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct InverseLogFit<T> {
    pub a: T,
    pub b: T,
    pub rms_residual: T,
    /// Fitted `(N, p)` pairs.
    pub points: Vec<(T, T)>,
}

impl<T: Real> InverseLogFit<T> {
    pub fn predict(&self, n: T) -> T {
        self.a / (self.b * n).ln()
    }
}

/// Optimal `a` and the residual sum of squares at `ln b = log_b`.
fn profile<T: Real>(points: &[(T, T)], log_b: T) -> (T, T) {
    let b = log_b.exp();
    let (mut pu, mut uu) = (T::zero(), T::zero());
    for &(n, p) in points {
        let u = T::one() / (b * n).ln();
        pu += p * u;
        uu += u * u;
    }
    let a = pu / uu;
    let sse = points
        .iter()
        .map(|&(n, p)| {
            let r = p - a / (b * n).ln();
            r * r
        })
        .sum();
    (a, sse)
}

pub fn fit_inverse_log<T: Real>(points: &[(T, T)]) -> Result<InverseLogFit<T>> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(n, p)| n <= T::zero() || p <= T::zero() || !n.is_finite() || !p.is_finite()) {
        return Err(Error::Fit("all N and p must be positive and finite".into()));
    }
    let n_min = points.iter().map(|p| p.0).fold(T::infinity(), T::min);
    let n_max = points.iter().map(|p| p.0).fold(T::neg_infinity(), T::max);
    if n_min == n_max {
        return Err(Error::Fit("all points share the same N".into()));
    }

    // b·N > 1 for every point keeps the logarithm positive.
    let lo = T::lit(B_MIN).ln().max(-n_min.ln() + T::lit(1e-9));
    let hi = T::lit(B_MAX).ln();
    if lo >= hi {
        return Err(Error::Fit("no admissible b in the search range".into()));
    }

    let grid = |k: usize| lo + (hi - lo) * T::from_count(k) / T::from_count(SCAN_POINTS - 1);
    let best = (0..SCAN_POINTS)
        .map(|k| (k, profile(points, grid(k)).1))
        .filter(|(_, sse)| sse.is_finite())
        .fold(None, |acc: Option<(usize, T)>, (k, sse)| match acc {
            Some((_, s)) if s <= sse => acc,
            _ => Some((k, sse)),
        })
        .ok_or_else(|| Error::Fit("objective not finite anywhere in range".into()))?
        .0;

    let mut left = grid(best.saturating_sub(1));
    let mut right = grid((best + 1).min(SCAN_POINTS - 1));
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut c = right - inv_phi * (right - left);
    let mut d = left + inv_phi * (right - left);
    let mut fc = profile(points, c).1;
    let mut fd = profile(points, d).1;
    for _ in 0..GOLDEN_ITERS {
        if (right - left).abs() <= T::epsilon() * (T::one() + left.abs()) {
            break;
        }
        if fc < fd {
            right = d;
            d = c;
            fd = fc;
            c = right - inv_phi * (right - left);
            fc = profile(points, c).1;
        } else {
            left = c;
            c = d;
            fc = fd;
            d = left + inv_phi * (right - left);
            fd = profile(points, d).1;
        }
    }
    let log_b = (left + right) / T::lit(2.0);
    let (a, sse) = profile(points, log_b);
    if !a.is_finite() || !sse.is_finite() {
        return Err(Error::Fit("non-finite optimum".into()));
    }
    Ok(InverseLogFit {
        a,
        b: log_b.exp(),
        rms_residual: (sse / T::from_count(points.len())).sqrt(),
        points: points.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn synthetic(a: f64, b: f64, sides: impl Iterator<Item = usize>) -> Vec<(f64, f64)> {
        sides
            .map(|l| {
                let n = (l * l) as f64;
                (n, a / (b * n).ln())
            })
            .collect()
    }

    #[test]
    fn exact_model_is_recovered() {
        let pts = synthetic(2.0, 3.0, [8, 12, 16, 24, 32, 48, 64].into_iter());
        let fit = fit_inverse_log(&pts).unwrap();
        assert!((fit.a - 2.0).abs() < 1e-6, "a = {}", fit.a);
        assert!((fit.b - 3.0).abs() < 1e-6, "b = {}", fit.b);
        assert!(fit.rms_residual < 1e-9);
        assert!(fit.points.iter().all(|&(n, _)| fit.b * n > 1.0));
    }

    #[test]
    fn noisy_model_within_ten_percent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<_> = synthetic(2.0, 3.0, (4..=64).step_by(4))
            .into_iter()
            .map(|(n, p)| (n, p * (1.0 + rng.gen_range(-0.01..=0.01))))
            .collect();
        let fit = fit_inverse_log(&pts).unwrap();
        assert!((fit.a - 2.0).abs() < 0.2, "a = {}", fit.a);
        assert!((fit.b - 3.0).abs() < 0.3, "b = {}", fit.b);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_inverse_log(&[(64.0, 0.3), (64.0, 0.31), (64.0, 0.29)]).is_err());
        assert!(fit_inverse_log(&[(64.0, 0.3), (256.0, 0.2)]).is_err());
        assert!(fit_inverse_log(&[(64.0, 0.3), (256.0, 0.0), (1024.0, 0.1)]).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let pts: Vec<(f32, f32)> = synthetic(2.0, 3.0, [8, 16, 32, 64].into_iter())
            .into_iter()
            .map(|(n, p)| (n as f32, p as f32))
            .collect();
        let fit = fit_inverse_log(&pts).unwrap();
        assert!((fit.a - 2.0).abs() < 1e-2);
        assert!((fit.b - 3.0).abs() < 5e-2);
    }
}
