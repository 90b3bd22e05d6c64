mod commands;
mod input;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ramify",
    version,
    about = "Normalized ramification filtrations, Herbrand functions and depth maps"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Stroke color of plotted functions.
    #[arg(long, global = true, default_value = "#1f4e79")]
    pub line_color: String,

    /// Fill color of jump dots and profile glyphs.
    #[arg(long, global = true, default_value = "#a93226")]
    pub dot_color: String,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate, tabulate or plot the Herbrand function.
    Phi(PhiArgs),
    /// Lower and upper jumps with ℓ, u, c and d.
    Jumps(JumpsArgs),
    /// Quotient depths and the tower identities for a normal subgroup.
    Tower(TowerArgs),
    /// Depths and discriminant valuation of an Eisenstein polynomial.
    Newton(NewtonArgs),
    /// Convert between classical and normalized indexing.
    Convert(ConvertArgs),
    /// Depth transfer along norm, trace, characters and parameters.
    Depthmap(DepthmapArgs),
    /// Read local field records and normalize their ramification data.
    Ingest(IngestArgs),
    /// Run the full verification suite.
    Verify(VerifyArgs),
}

/// Where the depth data comes from; exactly one of these.
#[derive(Args, Debug, Clone, Default)]
pub struct Source {
    /// Named example, e.g. `cyclotomic:3,4` or `quaternion:lmfdb-q2`.
    #[arg(long)]
    pub preset: Option<String>,

    /// Multiset file (`-` for stdin).
    #[arg(long, value_name = "PATH")]
    pub multiset: Option<String>,

    /// Depth function file with a group table (`-` for stdin).
    #[arg(long, value_name = "PATH")]
    pub group: Option<String>,

    /// Eisenstein polynomial coefficients, constant term first; needs `--p`.
    #[arg(long, allow_hyphen_values = true, value_name = "COEFFS")]
    pub poly: Option<String>,

    /// Polynomial file in the form `p; c0 c1 ... cn` (`-` for stdin).
    #[arg(long, value_name = "PATH")]
    pub poly_file: Option<String>,

    /// Residue characteristic.
    #[arg(long)]
    pub p: Option<u64>,

    /// Ramification index e(L/F).
    #[arg(long)]
    pub e: Option<u64>,
}

#[derive(Args, Debug)]
pub struct PhiArgs {
    #[command(flatten)]
    pub source: Source,

    /// Evaluate at these points instead of tabulating.
    #[arg(long, value_name = "X")]
    pub eval: Vec<String>,

    /// Work with ψ = φ⁻¹.
    #[arg(long)]
    pub inverse: bool,

    /// Right end of the plotted range.
    #[arg(long, value_name = "X")]
    pub x_max: Option<String>,
}

#[derive(Args, Debug)]
pub struct JumpsArgs {
    #[command(flatten)]
    pub source: Source,

    /// Ramification index e(E/F) of the base, for d.
    #[arg(long, default_value_t = 1)]
    pub e_ef: u64,
}

#[derive(Args, Debug)]
pub struct TowerArgs {
    /// Tower file: depth function plus `kernel` (`-` for stdin).
    #[arg(long, value_name = "PATH")]
    pub file: Option<String>,

    /// Named example with a group table.
    #[arg(long, conflicts_with = "file", requires = "kernel")]
    pub preset: Option<String>,

    /// Kernel element indices, for `--preset`.
    #[arg(long, value_name = "INDICES")]
    pub kernel: Option<String>,

    /// Extra upper indices at which to check the exact sequences.
    #[arg(long, value_name = "S")]
    pub at: Vec<String>,
}

#[derive(Args, Debug)]
pub struct NewtonArgs {
    #[arg(long)]
    pub p: Option<u64>,

    /// Coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true, value_name = "COEFFS", requires = "p")]
    pub poly: Option<String>,

    /// Polynomial file `p; c0 c1 ... cn` (`-` for stdin).
    #[arg(long, value_name = "PATH", conflicts_with = "poly")]
    pub file: Option<String>,

    /// Require the result to be a Galois depth multiset.
    #[arg(long)]
    pub galois: bool,

    #[arg(long, default_value_t = 24)]
    pub degree_cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ToClassical,
    ToNormalized,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    #[arg(long)]
    pub e_ef: u64,

    #[arg(long)]
    pub e_lf: u64,

    #[arg(long, value_enum)]
    pub direction: Direction,

    /// Herbrand function `[(x,y),...] + slope s`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,

    /// Inverse Herbrand function, same syntax.
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,

    /// Lower index.
    #[arg(long)]
    pub lower: Option<String>,

    /// Upper index.
    #[arg(long)]
    pub upper: Option<String>,
}

#[derive(Args, Debug)]
pub struct DepthmapArgs {
    #[command(flatten)]
    pub source: Source,

    #[arg(long, default_value_t = 1)]
    pub e_ef: u64,

    /// Depth of an element of L.
    #[arg(long, value_name = "S")]
    pub trace: Option<String>,

    /// Depth of a unit of L.
    #[arg(long, value_name = "S")]
    pub norm: Option<String>,

    /// Depth of an additive character of E.
    #[arg(long, value_name = "R")]
    pub additive_char: Option<String>,

    /// Character depth of L^×, mapped to its parameter depth.
    #[arg(long, value_name = "R")]
    pub char_to_param: Option<String>,

    #[arg(long, value_name = "D")]
    pub param_to_char: Option<String>,

    /// Parameter depth over L, seen through restriction of scalars.
    #[arg(long, value_name = "D")]
    pub res_scalars: Option<String>,

    /// Character depths `r,s` on G_m(F) × Res G_m.
    #[arg(long, value_name = "R,S")]
    pub torus: Option<String>,

    /// Norm-one profile of a wild quadratic extension with this c.
    #[arg(long, value_name = "C")]
    pub profile: Option<String>,

    /// Last depth in the profile (default c + 4).
    #[arg(long, value_name = "R", requires = "profile")]
    pub r_max: Option<String>,
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// Record files, `-`, or identifiers to fetch. Empty means every fixture.
    pub inputs: Vec<String>,

    /// Never touch the network.
    #[arg(long)]
    pub offline: bool,

    #[arg(long, value_name = "DIR")]
    pub fixture_dir: Option<PathBuf>,

    /// Base URL for `GET {endpoint}/{id}`.
    #[arg(long, value_name = "URL")]
    pub endpoint: Option<String>,

    /// `native`, `lmfdb`, or a JSON translation table.
    #[arg(long, default_value = "native")]
    pub mapping: String,

    /// Network timeout in seconds.
    #[arg(long, default_value_t = 10)]
    pub timeout: u64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<u64>,

    /// Number of random towers (default 1000). The quotient-depth criterion
    /// reports a failure below 1000.
    #[arg(long)]
    pub towers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.body)
                    .map_err(|e| format!("{}: {e}", path.display())),
                None => std::io::stdout()
                    .write_all(out.body.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("ramify: {e}");
                return ExitCode::from(2);
            }
            for line in &out.diagnostics {
                eprintln!("ramify: {line}");
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("ramify: {e}");
            ExitCode::from(2)
        }
    }
}
