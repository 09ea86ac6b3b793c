mod commands;
mod error;
mod mesh;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use focalis::{builtin, parse_curve, CurveModel};

use crate::error::CliError;
use crate::table::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Frenet frame and curvatures per sample (table).
    Frame,
    /// Focal curve, focal curvatures and radii per sample (table).
    Focal,
    /// Vertices, pseudo-vertices, flattenings and critical radii (report).
    Events,
    /// All verification suites (report).
    Verify,
    /// Polar-line surface and focal curve as OBJ (curves in 3-space).
    Mesh,
    /// Names of the built-in curves.
    Builtins,
}

/// Frenet apparatus, focal curves and vertices of curves in Euclidean space.
#[derive(Debug, Parser)]
#[command(name = "focalis", version)]
struct RunConfig {
    command: Command,
    /// Curve file.
    #[arg(long, conflicts_with = "builtin")]
    input: Option<PathBuf>,
    /// Built-in curve, e.g. `helix` or `random_poly_r4(3)`.
    #[arg(long)]
    builtin: Option<String>,
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,
    /// Jet order override.
    #[arg(long)]
    order: Option<usize>,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Defaults to csv for tables and json for reports.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Pass threshold for `verify`.
    #[arg(long)]
    tol: Option<f64>,
    /// Half-width of the polar-line strips for `mesh` (default 2 max R_2).
    #[arg(long)]
    u_max: Option<f64>,
}

impl RunConfig {
    fn curve(&self) -> Result<CurveModel, CliError> {
        match (&self.input, &self.builtin) {
            (Some(path), _) => {
                let source = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                let model = parse_curve(&source)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                Ok(model)
            }
            (None, Some(name)) => Ok(builtin(name)?),
            (None, None) => Err(CliError::Input("one of --input or --builtin is required".into())),
        }
    }

    fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Frame | Command::Focal | Command::Builtins | Command::Mesh => Format::Csv,
            Command::Events | Command::Verify => Format::Json,
        })
    }
}

fn run(config: &RunConfig) -> Result<(), CliError> {
    if let Some(tol) = config.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Input(format!("--tol must be positive, got {tol}")));
        }
    }
    let samples = config.samples as usize;
    let format = config.format();
    let mut buffer: Vec<u8> = Vec::new();
    match config.command {
        Command::Builtins => commands::builtins(format, &mut buffer)?,
        Command::Frame => commands::frame(&config.curve()?, samples, config.order)?.write(format, &mut buffer)?,
        Command::Focal => commands::focal(&config.curve()?, samples, config.order)?.write(format, &mut buffer)?,
        Command::Events => commands::events(&config.curve()?, samples, config.order, format, &mut buffer)?,
        Command::Verify => commands::verify(&config.curve()?, samples, config.tol, format, &mut buffer)?,
        Command::Mesh => {
            mesh::polar_surface(&config.curve()?, samples, config.order, config.u_max)?.write_obj(&mut buffer)?
        }
    }
    // Nothing is written until the whole result is available.
    match &config.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            w.write_all(&buffer)?;
            w.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            match out.write_all(&buffer).and_then(|()| out.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("focalis: {e}");
            e.exit_code()
        }
    }
}
