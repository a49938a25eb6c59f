use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toda_cli::config::{read_config_file, RunConfig};
use toda_cli::output::write_atomic;
use toda_cli::{run, CliResult, Command};

#[derive(Parser)]
#[command(
    name = "toda",
    version,
    about = "Blowup solution families of singular Toda systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact mass vectors and leading coefficients for every Weyl element.
    Atlas(Opts),
    /// Numerical limit masses against the exact Weyl formula.
    Verify(Opts),
    /// Radial profiles and PDE residuals, or rescaled blowup profiles.
    Profile(Opts),
    /// Fundamental representations: dimensions, weights, Gram determinants.
    RepInfo(Opts),
}

#[derive(Args)]
struct Opts {
    /// Lie type such as A2, B3, G2.
    #[arg(long = "type")]
    lie_type: Option<String>,
    /// Comma-separated gamma_i, exact (`1/5`) or decimal.
    #[arg(long, allow_hyphen_values = true)]
    gammas: Option<String>,
    /// `all` or a word such as `s1 s2`.
    #[arg(long)]
    tau: Option<String>,
    /// Positive chamber coefficients c with H0 = sum c_i E_i.
    #[arg(long)]
    chamber: Option<String>,
    /// Comma-separated lambda values, or `default`.
    #[arg(long)]
    lambda_schedule: Option<String>,
    /// Comma-separated k = e^{2 lambda}; alternative to --lambda-schedule.
    #[arg(long)]
    k_values: Option<String>,
    /// Radius r of the disc for local masses (default 0.1).
    #[arg(long)]
    radius: Option<String>,
    /// Convergence tolerance for mass limits (default 1e-6).
    #[arg(long)]
    tol: Option<String>,
    /// Smallest radius of the profile grid.
    #[arg(long)]
    rho_min: Option<String>,
    /// Largest radius of the profile grid.
    #[arg(long)]
    rho_max: Option<String>,
    /// Number of log-spaced profile radii.
    #[arg(long)]
    points: Option<String>,
    /// Explicit comma-separated radii for profiles.
    #[arg(long)]
    radii: Option<String>,
    /// Rescaled blowup profiles instead of the radial dump.
    #[arg(long)]
    blowup: bool,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Output file, written atomically; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for cached representations.
    #[arg(long, env = "TODA_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long)]
    reproducible: bool,
    /// Flat key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the effective configuration here before running.
    #[arg(long)]
    save_config: Option<PathBuf>,
    /// Debug: scale the non-leading q coefficients (negative control).
    #[arg(long, hide = true)]
    corrupt_q: Option<String>,
}

impl Opts {
    fn merged(&self) -> CliResult<BTreeMap<String, String>> {
        let mut map = match &self.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        let path = |p: &PathBuf| p.display().to_string();
        let flags = [
            ("type", self.lie_type.clone()),
            ("gammas", self.gammas.clone()),
            ("tau", self.tau.clone()),
            ("chamber", self.chamber.clone()),
            ("lambda-schedule", self.lambda_schedule.clone()),
            ("k-values", self.k_values.clone()),
            ("radius", self.radius.clone()),
            ("tol", self.tol.clone()),
            ("rho-min", self.rho_min.clone()),
            ("rho-max", self.rho_max.clone()),
            ("points", self.points.clone()),
            ("radii", self.radii.clone()),
            ("blowup", self.blowup.then(|| "true".to_string())),
            ("format", self.format.clone()),
            ("out", self.out.as_ref().map(path)),
            ("cache-dir", self.cache_dir.as_ref().map(path)),
            (
                "reproducible",
                self.reproducible.then(|| "true".to_string()),
            ),
            ("corrupt-q", self.corrupt_q.clone()),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                if key == "lambda-schedule" {
                    map.remove("k-values");
                } else if key == "k-values" {
                    map.remove("lambda-schedule");
                }
                map.insert(key.to_string(), v);
            }
        }
        Ok(map)
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let (command, opts) = match &cli.command {
        Cmd::Atlas(o) => (Command::Atlas, o),
        Cmd::Verify(o) => (Command::Verify, o),
        Cmd::Profile(o) => (Command::Profile, o),
        Cmd::RepInfo(o) => (Command::RepInfo, o),
    };
    let cfg = RunConfig::from_map(&opts.merged()?)?;
    if let Some(p) = &opts.save_config {
        write_atomic(p, cfg.to_config_text().as_bytes())?;
    }
    run(command, &cfg)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("toda: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
