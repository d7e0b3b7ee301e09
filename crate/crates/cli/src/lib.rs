//! Batch front end: configuration, solver pipeline and artifact writing.

pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

use std::path::{Path, PathBuf};

pub use config::{emit_config, parse_config, DataConfig, Format, Numerics, OutputConfig, RunConfig};
pub use error::{CliError, Result};
pub use pipeline::{all_pass, Check, Report};

/// Name of the configuration copy stored next to the outputs.
pub const CONFIG_COPY: &str = "config.toml";
pub const REPORT_FILE: &str = "report.json";

/// Command-line overrides applied on top of a parsed configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub modes: Option<usize>,
    pub quad: Option<usize>,
    pub grid: Option<[usize; 2]>,
    pub format: Option<Format>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        if let Some(o) = &self.out {
            cfg.output.dir = o.to_string_lossy().into_owned();
        }
        if let Some(m) = self.modes {
            cfg.numerics.modes = m;
            cfg.numerics.truncation = cfg.numerics.truncation.min(m);
        }
        if let Some(q) = self.quad {
            cfg.numerics.quad = q;
        }
        if let Some(g) = self.grid {
            cfg.numerics.grid = g;
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        cfg.validate()
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    parse_config(&output::read(path)?)
}

fn prepare_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = PathBuf::from(&cfg.output.dir);
    std::fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    Ok(dir)
}

/// Files produced by `solve`, as `(name, contents)`.
pub fn solve_artifacts(cfg: &RunConfig) -> Result<(Vec<(&'static str, String)>, Report)> {
    let out = pipeline::run_solve(cfg)?;
    let f = cfg.output.format;
    let files = vec![
        output::eigenvalues_table(&out.eigenvalues, f),
        output::coefficients_table(&out.coefficients, f),
        output::field_table(&out.field, f),
        (REPORT_FILE, output::report_json(&out.report)),
        (CONFIG_COPY, emit_config(cfg)),
    ];
    Ok((files, out.report))
}

/// Full pipeline; writes tables, report and the effective configuration.
pub fn solve(cfg: &RunConfig) -> Result<Report> {
    let dir = prepare_dir(cfg)?;
    let (files, report) = solve_artifacts(cfg)?;
    for (name, contents) in &files {
        output::write(&dir, name, contents)?;
    }
    Ok(report)
}

/// Eigenvalues and basis checks only.
pub fn eigen(cfg: &RunConfig) -> Result<Report> {
    let dir = prepare_dir(cfg)?;
    let out = pipeline::run_eigen(cfg)?;
    let (name, table) = output::eigenvalues_table(&out.eigenvalues, cfg.output.format);
    output::write(&dir, name, &table)?;
    output::write(&dir, REPORT_FILE, &output::report_json(&out.report))?;
    output::write(&dir, CONFIG_COPY, &emit_config(cfg))?;
    Ok(out.report)
}

/// Expansion errors of `phi` and `psi` for `1..=modes` terms.
pub fn expand(cfg: &RunConfig) -> Result<Vec<(usize, f64, f64)>> {
    let dir = prepare_dir(cfg)?;
    let rows = pipeline::run_expand(cfg)?;
    let (name, table) = output::expansion_table(&rows, cfg.output.format);
    output::write(&dir, name, &table)?;
    output::write(&dir, CONFIG_COPY, &emit_config(cfg))?;
    Ok(rows)
}

/// Re-runs a stored `solve` from its configuration copy and compares every
/// stored artifact byte for byte.
pub fn verify(dir: &Path) -> Result<Report> {
    let mut cfg = load_config(&dir.join(CONFIG_COPY))?;
    cfg.output.dir = dir.to_string_lossy().into_owned();
    let (files, report) = solve_artifacts(&cfg)?;
    for (name, contents) in &files {
        if *name == CONFIG_COPY {
            continue;
        }
        let stored = output::read(&dir.join(name))?;
        if &stored != contents {
            return Err(CliError::Verify(format!("{name} differs from the recomputed output")));
        }
    }
    Ok(report)
}

/// One line per check: `PASS name value <= bound`.
pub fn format_report(report: &Report) -> String {
    let mut s = String::new();
    for (name, c) in report {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        s.push_str(&format!("{tag} {name} value={} bound={}\n", output::num(c.value), output::num(c.bound)));
    }
    s
}
