//! The subcommands. Each returns the text it prints on success.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use elastimesh::hardbc::{apply_hard_bc, max_boundary_deviation};
use elastimesh::mesh::{
    export_csv, export_vtk, import_mesh_csv, quality_report, uniform_comp_grid, QualityReport,
};
use elastimesh::training::{
    export_loss_csv, generate_mesh, train, LossBreakdown, TrainConfig, TrainOutcome,
};
use elastimesh::{Activation, DomainSpec, Governing, StructuredMesh};
use serde::Serialize;

use crate::config::{Experiment, Method};
use crate::CliError;

/// Result of producing one mesh with one method.
pub struct MethodRun {
    pub method: Method,
    pub mesh: StructuredMesh,
    pub quality: QualityReport,
    pub boundary_deviation: f64,
    pub training: Option<TrainOutcome>,
    pub train_time_s: f64,
    pub mesh_time_s: f64,
}

impl MethodRun {
    pub fn total_time_s(&self) -> f64 {
        self.train_time_s + self.mesh_time_s
    }
}

fn write_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input {
        detail: format!("cannot write {}: {e}", path.display()),
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| write_err(dir, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| write_err(path, e))
}

/// Builds the mesh for `method`, training first if it needs a network.
pub fn run_method(
    domain: &DomainSpec,
    cfg: &TrainConfig,
    method: Method,
) -> Result<MethodRun, CliError> {
    let grid = uniform_comp_grid(cfg.ni, cfg.nj)?;
    let (training, train_time_s) = if method.trains() {
        let start = Instant::now();
        let outcome = train(domain, cfg)?;
        (Some(outcome), start.elapsed().as_secs_f64())
    } else {
        (None, 0.0)
    };
    let start = Instant::now();
    let mesh = match (&training, method) {
        (_, Method::Tfi) => elastimesh::tfi::tfi_generate(domain, cfg.ni, cfg.nj)?,
        (Some(t), Method::Pinn) => generate_mesh(&t.model, &grid)?,
        (Some(t), Method::PinnHardBc) => apply_hard_bc(&generate_mesh(&t.model, &grid)?, domain)?,
        (None, _) => unreachable!("network methods always train"),
    };
    let mesh_time_s = start.elapsed().as_secs_f64();
    let quality = quality_report(&mesh, train_time_s + mesh_time_s)?;
    let boundary_deviation = max_boundary_deviation(&mesh, domain)?;
    Ok(MethodRun {
        method,
        mesh,
        quality,
        boundary_deviation,
        training,
        train_time_s,
        mesh_time_s,
    })
}

#[derive(Debug, Serialize)]
pub struct TrainingSummary {
    pub epochs: usize,
    pub seed: u64,
    pub initial_loss: LossBreakdown,
    pub final_loss: LossBreakdown,
    pub boundary_weights: [f64; 4],
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub train_s: f64,
    pub mesh_s: f64,
    pub total_s: f64,
}

/// Contents of `report.json`. Only `timing` and `quality.generation_time`
/// vary between identical runs.
#[derive(Debug, Serialize)]
pub struct Report {
    pub name: String,
    pub method: &'static str,
    pub ni: usize,
    pub nj: usize,
    pub quality: QualityReport,
    pub boundary_max_deviation: f64,
    pub training: Option<TrainingSummary>,
    pub timing: Timing,
}

fn report_for(exp: &Experiment, run: &MethodRun) -> Report {
    Report {
        name: exp.name.clone(),
        method: run.method.as_str(),
        ni: run.mesh.ni(),
        nj: run.mesh.nj(),
        quality: run.quality.clone(),
        boundary_max_deviation: run.boundary_deviation,
        training: run.training.as_ref().map(|t| TrainingSummary {
            epochs: exp.train.epochs,
            seed: exp.train.seed,
            initial_loss: t.history[0],
            final_loss: *t.final_loss(),
            boundary_weights: t.weights.weights(),
        }),
        timing: Timing {
            train_s: run.train_time_s,
            mesh_s: run.mesh_time_s,
            total_s: run.total_time_s(),
        },
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn generate(exp: &Experiment) -> Result<String, CliError> {
    let run = run_method(&exp.domain, &exp.train, exp.method)?;
    let dir = &exp.output_dir;
    create_dir(dir)?;
    export_vtk(&run.mesh, dir.join("mesh.vtk"))?;
    export_csv(&run.mesh, dir.join("mesh.csv"))?;
    if let Some(t) = &run.training {
        export_loss_csv(&t.history, dir.join("loss.csv"))?;
        t.model.save(dir.join("model.json"))?;
    }
    let report = report_for(exp, &run);
    write_text(&dir.join("report.json"), &to_json(&report))?;

    let q = &run.quality;
    let mut out = format!(
        "{} [{}] {}x{}: min/max angle {:.2}/{:.2}, inverted {}, boundary deviation {:.3e}\n",
        exp.name,
        run.method.as_str(),
        run.mesh.ni(),
        run.mesh.nj(),
        q.avg_min_angle,
        q.avg_max_angle,
        q.inverted_cells,
        run.boundary_deviation
    );
    if let Some(t) = &report.training {
        let _ = writeln!(
            out,
            "loss {:.4e} -> {:.4e} after {} epochs",
            t.initial_loss.total, t.final_loss.total, t.epochs
        );
    }
    let _ = writeln!(out, "wrote {}", dir.display());
    Ok(out)
}

/// Aligned text table; the first row is the header.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r.get(c).map_or(0, String::len)).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn csv(rows: &[Vec<String>]) -> String {
    rows.iter().map(|r| r.join(",") + "\n").collect()
}

pub const COMPARE_COLUMNS: [&str; 7] = [
    "model",
    "method",
    "avg_min_angle",
    "avg_max_angle",
    "gen_time_s",
    "avg_cell_area",
    "inverted_cells",
];

/// TFI against the configured network method (`pinn+hardbc` when the
/// config asks for TFI).
pub fn compare(exp: &Experiment) -> Result<String, CliError> {
    let other = if exp.method.trains() {
        exp.method
    } else {
        Method::PinnHardBc
    };
    let mut rows = vec![COMPARE_COLUMNS.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for method in [Method::Tfi, other] {
        let run = run_method(&exp.domain, &exp.train, method)?;
        let q = &run.quality;
        rows.push(vec![
            exp.name.clone(),
            method.as_str().into(),
            q.avg_min_angle.to_string(),
            q.avg_max_angle.to_string(),
            format!("{:.6}", run.total_time_s()),
            q.avg_cell_area.to_string(),
            q.inverted_cells.to_string(),
        ]);
    }
    create_dir(&exp.output_dir)?;
    write_text(&exp.output_dir.join("compare.csv"), &csv(&rows))?;
    Ok(table(&rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Axis {
    Activation,
    Governing,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Activation => "activation",
            Axis::Governing => "governing",
        }
    }

    /// Variant names paired with the config each one trains with.
    pub fn variants(self, base: &TrainConfig) -> Vec<(&'static str, TrainConfig)> {
        match self {
            Axis::Activation => Activation::ALL
                .iter()
                .map(|&a| (a.as_str(), TrainConfig { activation: a, ..base.clone() }))
                .collect(),
            Axis::Governing => Governing::ALL
                .iter()
                .map(|&g| (g.as_str(), TrainConfig { governing: g, ..base.clone() }))
                .collect(),
        }
    }
}

pub const ABLATE_COLUMNS: [&str; 8] = [
    "variant",
    "status",
    "final_loss",
    "equation_term",
    "boundary_term",
    "avg_min_angle",
    "avg_max_angle",
    "inverted_cells",
];

/// Trains every variant of `axis` with the same seed and profile. A
/// diverged variant is reported with status `diverged` and NaN columns
/// instead of aborting the sweep.
pub fn ablate(exp: &Experiment, axis: Axis) -> Result<(String, PathBuf), CliError> {
    let method = if exp.method.trains() {
        exp.method
    } else {
        Method::PinnHardBc
    };
    let mut rows = vec![ABLATE_COLUMNS.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for (name, cfg) in axis.variants(&exp.train) {
        let nan = || f64::NAN.to_string();
        let row = match run_method(&exp.domain, &cfg, method) {
            Ok(run) => {
                let l = *run.training.as_ref().expect("trained").final_loss();
                vec![
                    name.to_string(),
                    "ok".into(),
                    l.total.to_string(),
                    l.equation_term.to_string(),
                    l.boundary_term.to_string(),
                    run.quality.avg_min_angle.to_string(),
                    run.quality.avg_max_angle.to_string(),
                    run.quality.inverted_cells.to_string(),
                ]
            }
            Err(CliError::Numeric { .. }) => vec![
                name.to_string(),
                "diverged".into(),
                nan(),
                nan(),
                nan(),
                nan(),
                nan(),
                nan(),
            ],
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    create_dir(&exp.output_dir)?;
    let path = exp.output_dir.join(format!("ablate_{}.csv", axis.as_str()));
    write_text(&path, &csv(&rows))?;
    Ok((table(&rows), path))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Vtk,
    Csv,
}

pub fn export(mesh: &Path, format: Format, out: &Path) -> Result<String, CliError> {
    let m = import_mesh_csv(mesh)?;
    match format {
        Format::Vtk => export_vtk(&m, out)?,
        Format::Csv => export_csv(&m, out)?,
    }
    Ok(format!("wrote {}\n", out.display()))
}

pub fn report(mesh: &Path, out: Option<&Path>) -> Result<String, CliError> {
    let start = Instant::now();
    let m = import_mesh_csv(mesh)?;
    let q = quality_report(&m, start.elapsed().as_secs_f64())?;
    let text = to_json(&q);
    if let Some(path) = out {
        write_text(path, &text)?;
    }
    Ok(text)
}
