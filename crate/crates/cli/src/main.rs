use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use degfrac_cli::{all_pass, format_report, load_config, CliError, Format, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "degfrac", version, about = "Spectral solver for a degenerate fractional equation of even order")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenbasis, series solution, field and verification report.
    Solve(Common),
    /// Eigenvalues and basis checks only.
    Eigen(Common),
    /// Re-run a stored solve (from <out>/config.toml) and compare its artifacts.
    Verify(Common),
    /// Expansion errors of the boundary data against the number of modes.
    Expand(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    modes: Option<usize>,
    #[arg(long)]
    quad: Option<usize>,
    /// `NX,NY`
    #[arg(long, value_parser = parse_grid)]
    grid: Option<[usize; 2]>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn parse_grid(s: &str) -> Result<[usize; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected NX,NY".into());
    }
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t}: {e}"));
    Ok([p(parts[0])?, p(parts[1])?])
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            modes: self.modes,
            quad: self.quad,
            grid: self.grid,
            format: self.format.map(|f| match f {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            }),
        }
    }

    fn config(&self) -> Result<RunConfig, CliError> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| CliError::Syntax("--config <path> is required".into()))?;
        let mut cfg = load_config(path)?;
        self.overrides().apply(&mut cfg)?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Solve(c) => {
            let report = degfrac_cli::solve(&c.config()?)?;
            print!("{}", format_report(&report));
            Ok(all_pass(&report))
        }
        Command::Eigen(c) => {
            let report = degfrac_cli::eigen(&c.config()?)?;
            print!("{}", format_report(&report));
            Ok(all_pass(&report))
        }
        Command::Verify(c) => {
            let dir = match (&c.out, &c.config) {
                (Some(d), _) => d.clone(),
                (None, Some(_)) => PathBuf::from(c.config()?.output.dir),
                (None, None) => return Err(CliError::Syntax("verify needs --out <dir> or --config <path>".into())),
            };
            let report = degfrac_cli::verify(&dir)?;
            print!("{}", format_report(&report));
            println!("stored artifacts reproduced");
            Ok(all_pass(&report))
        }
        Command::Expand(c) => {
            let rows = degfrac_cli::expand(&c.config()?)?;
            for (n, a, b) in rows {
                println!("{n} {a:.3e} {b:.3e}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
