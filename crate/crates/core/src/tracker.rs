//! Tracking a particle moving on the lattice with a time-windowed oracle.
//!
//! The particle sits at `(x_n, y_n)` at time `n·δt`. Each position stays
//! marked for the persistence time `T`, i.e. while `n·δt ≤ t < n·δt + T`, in
//! layer `η_{n mod m}` with `m = ⌊T/δt⌋`. Labels are recycled once their
//! window has closed. Every epoch `n` is sampled at the window midpoint
//! `t = n·δt + δt/2` and amplified with a fresh static-label search, the
//! oracle being held fixed for the duration of the run.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{position_marginal, Boundary, LabeledMarks, Labeling, LatticeConfig, Mark};
use crate::operators::OracleSpec;
use crate::scalar::Real;
use crate::search::{default_horizon, evolve, run_search};

/// Tolerance on `T/δt` before flooring, so that e.g. `0.3 / 0.1` yields 3.
const RATIO_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    positions: Vec<(usize, usize)>,
}

impl Trajectory {
    pub fn new(positions: Vec<(usize, usize)>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidArgument("trajectory has no positions".into()));
        }
        Ok(Self { positions })
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Checks every point against the lattice and reports the first offender.
    pub fn validate(&self, lattice: &LatticeConfig) -> Result<()> {
        let l = lattice.side();
        match self.positions.iter().position(|&(x, y)| x >= l || y >= l) {
            Some(i) => Err(Error::InvalidArgument(format!(
                "trajectory point {i} at {:?} lies outside the {l}x{l} lattice",
                self.positions[i]
            ))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingConfig {
    persistence: f64,
    delta_t: f64,
    lattice: LatticeConfig,
}

impl TrackingConfig {
    /// `persistence` is `T`, the time a position stays marked; `delta_t` is the
    /// time the particle takes per lattice step.
    pub fn new(side: usize, boundary: Boundary, persistence: f64, delta_t: f64) -> Result<Self> {
        if delta_t <= 0.0 || !delta_t.is_finite() || !persistence.is_finite() {
            return Err(Error::InvalidArgument("delta_t and T must be positive and finite".into()));
        }
        let layers = (persistence / delta_t + RATIO_SLACK).floor();
        if layers < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "T = {persistence} is shorter than delta_t = {delta_t}; no label layer fits"
            )));
        }
        let lattice = LatticeConfig::new(side, boundary, layers as usize, Labeling::Static)?;
        Ok(Self {
            persistence,
            delta_t,
            lattice,
        })
    }

    pub fn persistence(&self) -> f64 {
        self.persistence
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    /// `m = ⌊T/δt⌋`.
    pub fn layers(&self) -> usize {
        self.lattice.layers()
    }

    pub fn lattice(&self) -> &LatticeConfig {
        &self.lattice
    }

    /// Sampling time of epoch `n`.
    pub fn epoch_time(&self, epoch: usize) -> f64 {
        (epoch as f64 + 0.5) * self.delta_t
    }
}

/// Marks whose window `[n·δt, n·δt + T)` contains `t`, each in layer
/// `n mod m`, ordered by `n`.
pub fn active_marks(trajectory: &Trajectory, t: f64, cfg: &TrackingConfig) -> Result<LabeledMarks> {
    let m = cfg.layers();
    let mut owner: Vec<Option<usize>> = vec![None; m];
    let mut marks = Vec::new();
    for (n, &(x, y)) in trajectory.positions().iter().enumerate() {
        let start = n as f64 * cfg.delta_t;
        if start <= t && t < start + cfg.persistence {
            let layer = n % m;
            if let Some(first) = owner[layer] {
                return Err(Error::LabelCollision {
                    first,
                    second: n,
                    layer,
                });
            }
            owner[layer] = Some(n);
            marks.push(Mark::new(x, y, layer));
        }
    }
    LabeledMarks::new(marks)
}

/// Outcome of amplifying one epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<T> {
    pub epoch: usize,
    /// Most probable site in layer `η_{epoch mod m}` at the optimal step;
    /// `None` when no mark was active and the epoch was skipped.
    pub estimate: Option<Mark>,
    /// Most probable site over all layers.
    pub global_argmax: Option<Mark>,
    pub truth: Mark,
    pub probability: T,
    /// `P(estimate) / (1/(N·m))`.
    pub amplification_ratio: T,
    pub t_op: usize,
    pub active_marks: usize,
}

impl<T> Estimate<T> {
    pub fn skipped(&self) -> bool {
        self.estimate.is_none()
    }

    pub fn is_correct(&self) -> bool {
        self.estimate == Some(self.truth)
    }
}

fn track_epoch<T: Real>(trajectory: &Trajectory, cfg: &TrackingConfig, epoch: usize) -> Result<Estimate<T>> {
    let lattice = *cfg.lattice();
    let layer = epoch % cfg.layers();
    let (tx, ty) = trajectory.positions()[epoch];
    let truth = Mark::new(tx, ty, layer);
    let marks = active_marks(trajectory, cfg.epoch_time(epoch), cfg)?;
    if marks.is_empty() {
        return Ok(Estimate {
            epoch,
            estimate: None,
            global_argmax: None,
            truth,
            probability: T::zero(),
            amplification_ratio: T::zero(),
            t_op: 0,
            active_marks: 0,
        });
    }
    let record = run_search::<T>(&lattice, &marks, default_horizon(&lattice))?;
    let spec = OracleSpec::new(lattice, marks.clone())?;
    let marginal = position_marginal(&evolve::<T>(&spec, record.t_op));
    let estimate = marginal.argmax_in_layer(layer);
    let probability = marginal.get(estimate.x, estimate.y, estimate.layer);
    let baseline_inv = T::from_count(lattice.sites() * lattice.layers());
    Ok(Estimate {
        epoch,
        estimate: Some(estimate),
        global_argmax: Some(marginal.argmax()),
        truth,
        probability,
        amplification_ratio: probability * baseline_inv,
        t_op: record.t_op,
        active_marks: marks.len(),
    })
}

/// Amplifies every epoch of the trajectory. Epochs run in parallel; the
/// result is ordered by epoch.
pub fn track<T: Real>(trajectory: &Trajectory, cfg: &TrackingConfig) -> Result<Vec<Estimate<T>>> {
    trajectory.validate(cfg.lattice())?;
    (0..trajectory.len())
        .into_par_iter()
        .map(|epoch| track_epoch(trajectory, cfg, epoch))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub positions: Vec<(usize, usize)>,
    pub epochs: Vec<usize>,
    /// Set when labels break the cyclic `η_{n mod m}` sequence or epochs were
    /// skipped; the positions are still returned in epoch order.
    pub warning: Option<String>,
}

/// Orders recovered positions by epoch and checks that labels follow the
/// cyclic sequence `η_0, η_1, …, η_{m−1}, η_0, …`.
pub fn reconstruct_order<T: Clone>(estimates: &[Estimate<T>], cfg: &TrackingConfig) -> Result<Reconstruction> {
    if estimates.is_empty() {
        return Err(Error::InvalidArgument("no estimates to reconstruct from".into()));
    }
    let mut sorted: Vec<&Estimate<T>> = estimates.iter().collect();
    sorted.sort_by_key(|e| e.epoch);
    let mut problems = Vec::new();
    let mut positions = Vec::new();
    let mut epochs = Vec::new();
    for e in sorted {
        match e.estimate {
            None => problems.push(format!("epoch {} skipped", e.epoch)),
            Some(mark) => {
                if mark.layer != e.epoch % cfg.layers() {
                    problems.push(format!(
                        "epoch {} carries label {} instead of {}",
                        e.epoch,
                        mark.layer,
                        e.epoch % cfg.layers()
                    ));
                }
                positions.push((mark.x, mark.y));
                epochs.push(e.epoch);
            }
        }
    }
    Ok(Reconstruction {
        positions,
        epochs,
        warning: (!problems.is_empty()).then(|| problems.join("; ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walk() -> Trajectory {
        Trajectory::new(vec![(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0)]).unwrap()
    }

    #[test]
    fn layer_count_floors_ratio() {
        let cfg = TrackingConfig::new(8, Boundary::Periodic, 0.3, 0.1).unwrap();
        assert_eq!(cfg.layers(), 3);
        let cfg = TrackingConfig::new(8, Boundary::Periodic, 3.9, 1.0).unwrap();
        assert_eq!(cfg.layers(), 3);
        assert!(TrackingConfig::new(8, Boundary::Periodic, 0.5, 1.0).is_err());
        assert!(TrackingConfig::new(8, Boundary::Periodic, 1.0, 0.0).is_err());
    }

    #[test]
    fn window_examples() {
        let cfg = TrackingConfig::new(8, Boundary::Periodic, 3.0, 1.0).unwrap();
        let traj = walk();
        let at0 = active_marks(&traj, 0.0, &cfg).unwrap();
        assert_eq!(at0.as_slice(), &[Mark::new(0, 0, 0)]);
        let mid = active_marks(&traj, 3.5, &cfg).unwrap();
        assert_eq!(mid.as_slice(), &[Mark::new(1, 0, 1), Mark::new(2, 0, 2), Mark::new(3, 0, 0)]);
        assert!(active_marks(&traj, 8.0, &cfg).unwrap().is_empty());
    }

    #[test]
    fn non_integer_ratio_can_collide() {
        let cfg = TrackingConfig::new(8, Boundary::Periodic, 3.7, 1.0).unwrap();
        assert_eq!(cfg.layers(), 3);
        assert!(matches!(
            active_marks(&walk(), 3.5, &cfg),
            Err(Error::LabelCollision { first: 0, second: 3, layer: 0 })
        ));
    }

    #[test]
    fn off_lattice_point_reports_index() {
        let cfg = TrackingConfig::new(4, Boundary::Periodic, 2.0, 1.0).unwrap();
        let traj = Trajectory::new(vec![(0, 0), (1, 0), (4, 0)]).unwrap();
        let err = track::<f64>(&traj, &cfg).unwrap_err();
        assert!(err.to_string().contains("point 2"), "{err}");
    }

    #[test]
    fn stationary_particle_single_layer() {
        let cfg = TrackingConfig::new(8, Boundary::Periodic, 1.0, 1.0).unwrap();
        let traj = Trajectory::new(vec![(3, 5); 4]).unwrap();
        let est = track::<f64>(&traj, &cfg).unwrap();
        assert!(est.iter().all(|e| e.estimate == Some(Mark::new(3, 5, 0))));
    }

    #[test]
    fn reconstruction_ignores_input_order() {
        let cfg = TrackingConfig::new(8, Boundary::Periodic, 3.0, 1.0).unwrap();
        let mk = |epoch: usize, x: usize| Estimate {
            epoch,
            estimate: Some(Mark::new(x, 1, epoch % 3)),
            global_argmax: None,
            truth: Mark::new(x, 1, epoch % 3),
            probability: 0.1,
            amplification_ratio: 20.0,
            t_op: 5,
            active_marks: 1,
        };
        let ordered: Vec<_> = (0..5).map(|e| mk(e, e + 2)).collect();
        let mut shuffled = ordered.clone();
        shuffled.swap(0, 3);
        shuffled.swap(1, 4);
        let a = reconstruct_order(&ordered, &cfg).unwrap();
        let b = reconstruct_order(&shuffled, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.positions, vec![(2, 1), (3, 1), (4, 1), (5, 1), (6, 1)]);
        assert!(a.warning.is_none());

        let mut bad = ordered;
        bad[2].estimate = Some(Mark::new(4, 1, 0));
        let r = reconstruct_order(&bad, &cfg).unwrap();
        assert!(r.warning.unwrap().contains("epoch 2"));
        assert_eq!(r.positions.len(), 5);
    }
}
