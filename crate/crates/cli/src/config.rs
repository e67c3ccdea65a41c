//! JSON experiment configs. Every field is checked against the core
//! invariants before anything runs; unknown fields are rejected.

use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use qwalk_core::tracker::{Trajectory, TrackingConfig};
use qwalk_core::{Boundary, LabeledMarks, Labeling, LatticeConfig, Mark};

use crate::Failure;

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MarkEntry {
    pub x: usize,
    pub y: usize,
    #[serde(default, alias = "z")]
    pub layer: usize,
}

fn default_layers() -> usize {
    1
}

fn default_labeling() -> Labeling {
    Labeling::None
}

fn default_steps() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub side: usize,
    pub boundary: Boundary,
    #[serde(default = "default_layers")]
    pub layers: usize,
    #[serde(default = "default_labeling")]
    pub labeling: Labeling,
    pub marks: Vec<MarkEntry>,
    /// Defaults to `⌈2√(Nm ln Nm)⌉`.
    #[serde(default)]
    pub horizon: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleConfig {
    pub sides: Vec<usize>,
    pub boundary: Boundary,
    #[serde(default = "default_layers")]
    pub layers: usize,
    /// One sweep per entry.
    pub labelings: Vec<Labeling>,
    pub marks: Vec<MarkEntry>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TrackConfig {
    pub side: usize,
    pub boundary: Boundary,
    /// Persistence time `T`.
    pub persistence: f64,
    pub delta_t: f64,
    /// CSV with an `x,y` header, resolved relative to the config file.
    pub trajectory: PathBuf,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    pub side: usize,
    #[serde(default = "default_layers")]
    pub layers: usize,
    #[serde(default = "default_labeling")]
    pub labeling: Labeling,
    pub marks: Vec<MarkEntry>,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn field<T>(name: &str, r: qwalk_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::invalid(format!("field `{name}`: {e}")))
}

pub fn marks(entries: &[MarkEntry]) -> Result<LabeledMarks, Failure> {
    if entries.is_empty() {
        return Err(Failure::invalid("field `marks`: no marked nodes"));
    }
    field("marks", LabeledMarks::new(entries.iter().map(|m| Mark::new(m.x, m.y, m.layer))))
}

fn lattice(side: usize, boundary: Boundary, layers: usize, labeling: Labeling) -> Result<LatticeConfig, Failure> {
    field("side/layers/labeling", LatticeConfig::new(side, boundary, layers, labeling))
}

impl SearchConfig {
    pub fn resolve(&self) -> Result<(LatticeConfig, LabeledMarks), Failure> {
        let cfg = lattice(self.side, self.boundary, self.layers, self.labeling)?;
        let marks = marks(&self.marks)?;
        field("marks", marks.validate(&cfg))?;
        if self.horizon == Some(0) {
            return Err(Failure::invalid("field `horizon`: must be >= 1"));
        }
        Ok((cfg, marks))
    }
}

impl ScaleConfig {
    pub fn validate(&self) -> Result<LabeledMarks, Failure> {
        if self.sides.len() < 3 {
            return Err(Failure::invalid(format!(
                "field `sides`: a sweep needs at least 3 sizes, got {}",
                self.sides.len()
            )));
        }
        if self.labelings.is_empty() {
            return Err(Failure::invalid("field `labelings`: empty"));
        }
        let marks = marks(&self.marks)?;
        for &side in &self.sides {
            for &labeling in &self.labelings {
                let cfg = lattice(side, self.boundary, self.layers, labeling)?;
                field("marks", marks.validate(&cfg))?;
            }
        }
        Ok(marks)
    }
}

#[derive(Debug, Deserialize)]
struct Point {
    x: usize,
    y: usize,
}

impl TrackConfig {
    pub fn resolve(&self, config_path: &Path) -> Result<(Trajectory, TrackingConfig), Failure> {
        let cfg = field(
            "persistence/delta_t",
            TrackingConfig::new(self.side, self.boundary, self.persistence, self.delta_t),
        )?;
        let path = config_path.parent().unwrap_or(Path::new(".")).join(&self.trajectory);
        let mut reader = csv::Reader::from_path(&path)
            .map_err(|e| Failure::invalid(format!("cannot read trajectory {}: {e}", path.display())))?;
        let mut positions = Vec::new();
        for (i, row) in reader.deserialize::<Point>().enumerate() {
            let p = row.map_err(|e| Failure::invalid(format!("{}: trajectory point {i}: {e}", path.display())))?;
            positions.push((p.x, p.y));
        }
        let trajectory = field("trajectory", Trajectory::new(positions))?;
        field("trajectory", trajectory.validate(cfg.lattice()))?;
        Ok((trajectory, cfg))
    }
}

impl CircuitConfig {
    pub fn resolve(&self) -> Result<(LatticeConfig, LabeledMarks), Failure> {
        if !self.side.is_power_of_two() || !self.layers.is_power_of_two() {
            return Err(Failure::invalid(format!(
                "fields `side`/`layers`: circuits need powers of two, got side {} and {} layers; \
                 use e.g. side {} or run `search` for other sizes",
                self.side,
                self.layers,
                self.side.next_power_of_two()
            )));
        }
        let cfg = lattice(self.side, Boundary::Periodic, self.layers, self.labeling)?;
        let marks = marks(&self.marks)?;
        field("marks", marks.validate(&cfg))?;
        Ok((cfg, marks))
    }
}
