//! Repeated application of `U'` from the uniform state, marked-site
//! probability time series, optimal step selection and size sweeps.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{site_probability, uniform_initial_state, LabeledMarks, Labeling, LatticeConfig, Mark, State};
use crate::hilbert::Boundary;
use crate::operators::{step, OracleSpec};
use crate::scalar::Real;

/// Probability time series of a search run. Index `t` of every series is the
/// state after `t` applications of `U'`; index 0 is the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchRecord<T> {
    pub marks: Vec<Mark>,
    /// `per_mark[k][t]`: position marginal at mark `k` after `t` steps.
    pub per_mark: Vec<Vec<T>>,
    /// Sum over marks at each step.
    pub collective: Vec<T>,
    pub t_op: usize,
    /// Collective probability at `t_op`.
    pub p_succ: T,
    /// False when the collective probability never rose above its initial
    /// value (in particular for an empty mark set).
    pub amplified: bool,
    pub steps_run: usize,
}

impl<T: Real> SearchRecord<T> {
    /// Per-mark probabilities at `t_op`.
    pub fn per_mark_at_optimum(&self) -> Vec<T> {
        self.per_mark.iter().map(|s| s[self.t_op]).collect()
    }
}

/// Peak of a collective series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum<T> {
    pub step: usize,
    pub probability: T,
    pub amplified: bool,
}

/// `⌈2·√(N·m·ln(N·m))⌉`.
pub fn default_horizon(config: &LatticeConfig) -> usize {
    let nm = (config.sites() * config.layers()) as f64;
    (2.0 * (nm * nm.ln()).sqrt()).ceil() as usize
}

/// Argmax of the collective series, first index on ties.
pub fn find_t_op<T: Real>(collective: &[T]) -> Result<Optimum<T>> {
    let first = *collective
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty probability series".into()))?;
    let (step, probability) = collective
        .iter()
        .copied()
        .enumerate()
        .fold((0, first), |best, (t, p)| if p > best.1 { (t, p) } else { best });
    Ok(Optimum {
        step,
        probability,
        amplified: probability > first,
    })
}

/// Evolves the uniform state through `steps` applications of `U'`.
pub fn evolve<T: Real>(spec: &OracleSpec, steps: usize) -> State<T> {
    let mut state = uniform_initial_state::<T>(spec.config());
    for _ in 0..steps {
        state = step(&state, spec).expect("state built on the oracle's lattice");
    }
    state
}

pub fn run_search<T: Real>(config: &LatticeConfig, marks: &LabeledMarks, horizon: usize) -> Result<SearchRecord<T>> {
    if horizon < 1 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    let spec = OracleSpec::new(*config, marks.clone())?;
    let marks: Vec<Mark> = marks.iter().copied().collect();
    let mut per_mark = vec![Vec::with_capacity(horizon + 1); marks.len()];
    let mut collective = Vec::with_capacity(horizon + 1);
    let mut state = uniform_initial_state::<T>(config);
    for t in 0..=horizon {
        if t > 0 {
            state = step(&state, &spec)?;
        }
        let mut total = T::zero();
        for (series, mark) in per_mark.iter_mut().zip(&marks) {
            let p = site_probability(&state, mark.x, mark.y, mark.layer);
            total += p;
            series.push(p);
        }
        collective.push(total);
    }
    let opt = find_t_op(&collective)?;
    Ok(SearchRecord {
        marks,
        per_mark,
        collective,
        t_op: opt.step,
        p_succ: opt.probability,
        amplified: opt.amplified,
        steps_run: horizon,
    })
}

/// Lattice settings shared by every size of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepTemplate {
    pub boundary: Boundary,
    pub labeling: Labeling,
    pub layers: usize,
}

impl SweepTemplate {
    pub fn config(&self, side: usize) -> Result<LatticeConfig> {
        LatticeConfig::new(side, self.boundary, self.layers, self.labeling)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalePoint<T> {
    pub side: usize,
    /// `N = L²`.
    pub sites: usize,
    pub t_op: usize,
    pub per_mark: Vec<T>,
    pub collective: T,
}

/// `{(0,0)@η₀, (1,1)@η₁}`, the two-mark pattern used for size sweeps.
pub fn corner_pair_marks() -> LabeledMarks {
    LabeledMarks::from_triples(&[(0, 0, 0), (1, 1, 1)]).expect("distinct marks")
}

/// Runs a search for every side length and records success probabilities at
/// the optimal step. Sizes run in parallel; output order follows `sides`.
pub fn scaling_sweep<T, F>(sides: &[usize], template: SweepTemplate, marks_for: F) -> Result<Vec<ScalePoint<T>>>
where
    T: Real,
    F: Fn(&LatticeConfig) -> LabeledMarks + Sync,
{
    if sides.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a sweep needs at least 3 sizes, got {}",
            sides.len()
        )));
    }
    sides
        .par_iter()
        .map(|&side| {
            let config = template.config(side)?;
            let marks = marks_for(&config);
            let record = run_search::<T>(&config, &marks, default_horizon(&config))?;
            Ok(ScalePoint {
                side,
                sites: config.sites(),
                t_op: record.t_op,
                per_mark: record.per_mark_at_optimum(),
                collective: record.p_succ,
            })
        })
        .collect()
}
