use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use qwalk_core::circuit::{
    self, circuit_unitary, export_qasm, gate_counts, max_diff_up_to_global_phase, search_circuit, step_circuit,
};
use qwalk_core::fit::fit_inverse_log;
use qwalk_core::search::{default_horizon, evolve, run_search, scaling_sweep, SweepTemplate};
use qwalk_core::tracker::{reconstruct_order, track};
use qwalk_core::{dense_operator, DenseKind, Error, Labeling, Mark, OracleSpec};

use crate::config::{CircuitConfig, ScaleConfig, SearchConfig, TrackConfig};
use crate::Failure;

/// Widest circuit that gets a dense verification report.
const VERIFY_WIDTH: usize = 10;

fn core_failure(e: Error) -> Failure {
    match e {
        Error::LabelCollision { .. } | Error::InvalidConfig(_) => Failure::invalid(e.to_string()),
        other => Failure::runtime(other.to_string()),
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Failure> {
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| Failure::runtime(format!("cannot create {}: {e}", path.display())))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), Failure> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::runtime(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| Failure::runtime(e.to_string()))?;
    println!("{}", dir.join(name).display());
    Ok(())
}

fn write_csv(dir: &Path, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(create(dir, name)?);
    let io = |e: csv::Error| Failure::runtime(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| Failure::runtime(e.to_string()))?;
    println!("{}", dir.join(name).display());
    Ok(())
}

fn mark_column(m: &Mark) -> String {
    format!("p_{}_{}_{}", m.x, m.y, m.layer)
}

#[derive(Serialize)]
struct MarkProbability {
    x: usize,
    y: usize,
    layer: usize,
    probability: f64,
}

#[derive(Serialize)]
struct SearchSummary<'a> {
    config: &'a SearchConfig,
    steps_run: usize,
    t_op: usize,
    p_succ: f64,
    amplified: bool,
    per_mark_at_optimum: Vec<MarkProbability>,
}

pub fn search(config: &SearchConfig, out: &Path) -> Result<(), Failure> {
    let (cfg, marks) = config.resolve()?;
    let horizon = config.horizon.unwrap_or_else(|| default_horizon(&cfg));
    let record = run_search::<f64>(&cfg, &marks, horizon).map_err(core_failure)?;

    let mut header = vec!["step".to_string()];
    header.extend(record.marks.iter().map(mark_column));
    header.push("collective".into());
    let rows: Vec<Vec<String>> = (0..=horizon)
        .map(|t| {
            let mut row = vec![t.to_string()];
            row.extend(record.per_mark.iter().map(|s| s[t].to_string()));
            row.push(record.collective[t].to_string());
            row
        })
        .collect();
    write_csv(out, "search.csv", &header, &rows)?;

    let summary = SearchSummary {
        config,
        steps_run: record.steps_run,
        t_op: record.t_op,
        p_succ: record.p_succ,
        amplified: record.amplified,
        per_mark_at_optimum: record
            .marks
            .iter()
            .zip(record.per_mark_at_optimum())
            .map(|(m, p)| MarkProbability {
                x: m.x,
                y: m.y,
                layer: m.layer,
                probability: p,
            })
            .collect(),
    };
    write_json(out, "search_summary.json", &summary)?;
    if !record.amplified {
        eprintln!("warning: collective probability never rose above its initial value");
    }
    Ok(())
}

#[derive(Serialize)]
struct FitReport {
    labeling: Labeling,
    a: Option<f64>,
    b: Option<f64>,
    rms_residual: Option<f64>,
    error: Option<String>,
}

pub fn scale(config: &ScaleConfig, out: &Path) -> Result<(), Failure> {
    let marks = config.validate()?;
    let mut fit_errors = Vec::new();
    for &labeling in &config.labelings {
        let template = SweepTemplate {
            boundary: config.boundary,
            labeling,
            layers: config.layers,
        };
        let points = scaling_sweep::<f64, _>(&config.sides, template, |_| marks.clone()).map_err(core_failure)?;

        let mut header = vec!["side".to_string(), "N".into(), "t_op".into()];
        header.extend(marks.iter().map(mark_column));
        header.push("collective".into());
        let rows: Vec<Vec<String>> = points
            .iter()
            .map(|p| {
                let mut row = vec![p.side.to_string(), p.sites.to_string(), p.t_op.to_string()];
                row.extend(p.per_mark.iter().map(f64::to_string));
                row.push(p.collective.to_string());
                row
            })
            .collect();
        write_csv(out, &format!("scale_{labeling}.csv"), &header, &rows)?;

        let data: Vec<(f64, f64)> = points.iter().map(|p| (p.sites as f64, p.collective)).collect();
        let report = match fit_inverse_log(&data) {
            Ok(fit) => FitReport {
                labeling,
                a: Some(fit.a),
                b: Some(fit.b),
                rms_residual: Some(fit.rms_residual),
                error: None,
            },
            Err(e) => {
                fit_errors.push(format!("{labeling}: {e}"));
                FitReport {
                    labeling,
                    a: None,
                    b: None,
                    rms_residual: None,
                    error: Some(e.to_string()),
                }
            }
        };
        write_json(out, &format!("scale_{labeling}_fit.json"), &report)?;
    }
    if fit_errors.is_empty() {
        Ok(())
    } else {
        Err(Failure::runtime(format!("fit failed ({})", fit_errors.join("; "))))
    }
}

#[derive(Serialize)]
struct EpochRecord {
    epoch: usize,
    time: f64,
    truth: Mark,
    estimate: Option<Mark>,
    global_argmax: Option<Mark>,
    probability: f64,
    amplification_ratio: f64,
    t_op: usize,
    active_marks: usize,
    correct: bool,
}

#[derive(Serialize)]
struct TrackReport<'a> {
    config: &'a TrackConfig,
    layers: usize,
    epochs: Vec<EpochRecord>,
    reconstructed: Vec<(usize, usize)>,
    reconstructed_epochs: Vec<usize>,
    correct_epochs: usize,
    warning: Option<String>,
}

pub fn track_cmd(config: &TrackConfig, config_path: &Path, out: &Path) -> Result<(), Failure> {
    let (trajectory, cfg) = config.resolve(config_path)?;
    let estimates = track::<f64>(&trajectory, &cfg).map_err(core_failure)?;
    let recon = reconstruct_order(&estimates, &cfg).map_err(core_failure)?;

    let epochs: Vec<EpochRecord> = estimates
        .iter()
        .map(|e| EpochRecord {
            epoch: e.epoch,
            time: cfg.epoch_time(e.epoch),
            truth: e.truth,
            estimate: e.estimate,
            global_argmax: e.global_argmax,
            probability: e.probability,
            amplification_ratio: e.amplification_ratio,
            t_op: e.t_op,
            active_marks: e.active_marks,
            correct: e.is_correct(),
        })
        .collect();

    let header: Vec<String> = [
        "epoch", "time", "true_x", "true_y", "layer", "est_x", "est_y", "probability", "amplification_ratio", "t_op",
        "active_marks", "correct",
    ]
    .map(String::from)
    .to_vec();
    let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
    let rows: Vec<Vec<String>> = epochs
        .iter()
        .map(|e| {
            vec![
                e.epoch.to_string(),
                e.time.to_string(),
                e.truth.x.to_string(),
                e.truth.y.to_string(),
                e.truth.layer.to_string(),
                opt(e.estimate.map(|m| m.x)),
                opt(e.estimate.map(|m| m.y)),
                e.probability.to_string(),
                e.amplification_ratio.to_string(),
                e.t_op.to_string(),
                e.active_marks.to_string(),
                e.correct.to_string(),
            ]
        })
        .collect();
    write_csv(out, "track_epochs.csv", &header, &rows)?;

    if let Some(w) = &recon.warning {
        eprintln!("warning: {w}");
    }
    let report = TrackReport {
        config,
        layers: cfg.layers(),
        correct_epochs: epochs.iter().filter(|e| e.correct).count(),
        epochs,
        reconstructed: recon.positions,
        reconstructed_epochs: recon.epochs,
        warning: recon.warning,
    };
    write_json(out, "track_estimates.json", &report)
}

#[derive(Serialize)]
struct Verification {
    width: usize,
    steps: usize,
    /// Circuit for one step vs the dense step operator, up to global phase.
    step_unitary_max_diff: f64,
    /// Full circuit output vs the simulator state, up to global phase.
    statevector_max_diff: f64,
}

pub fn circuit_cmd(config: &CircuitConfig, out: &Path) -> Result<(), Failure> {
    let (cfg, marks) = config.resolve()?;
    let full = search_circuit(&cfg, &marks, config.steps).map_err(core_failure)?;

    let qasm = export_qasm(&full);
    let mut w = create(out, "circuit.qasm")?;
    w.write_all(qasm.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Failure::runtime(e.to_string()))?;
    println!("{}", out.join("circuit.qasm").display());

    write_json(out, "circuit_resources.json", &gate_counts(&full, &cfg))?;

    if full.width() > VERIFY_WIDTH {
        eprintln!(
            "notice: verification skipped, circuit has {} wires (limit {VERIFY_WIDTH})",
            full.width()
        );
        return Ok(());
    }
    let spec = OracleSpec::new(cfg, marks.clone()).map_err(core_failure)?;
    let one = circuit_unitary::<f64>(&step_circuit(&cfg, &marks).map_err(core_failure)?).map_err(core_failure)?;
    let dense = dense_operator::<f64>(&spec, DenseKind::Step).map_err(core_failure)?;
    let as_slice = |a: &qwalk_core::DenseMatrix| a.as_slice().map(<[_]>::to_vec).unwrap_or_else(|| a.iter().copied().collect());
    let step_diff = max_diff_up_to_global_phase(&as_slice(&one), &as_slice(&dense)).map_err(core_failure)?;
    let amps = circuit::statevector::<f64>(&full).map_err(core_failure)?;
    let sim = evolve::<f64>(&spec, config.steps);
    let state_diff = max_diff_up_to_global_phase(sim.amplitudes(), &amps).map_err(core_failure)?;
    write_json(
        out,
        "circuit_verification.json",
        &Verification {
            width: full.width(),
            steps: config.steps,
            step_unitary_max_diff: step_diff,
            statevector_max_diff: state_diff,
        },
    )
}
