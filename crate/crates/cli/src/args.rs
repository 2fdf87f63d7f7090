use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::manifest::{Feedback, Profile, RunManifest};

#[derive(Debug, Parser)]
#[command(
    name = "kdvsat",
    version,
    about = "Saturated feedback stabilization of the linear KdV equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one closed-loop scenario
    Simulate(SimulateArgs),
    /// Run one scenario per saturation level
    Sweep(SweepArgs),
    /// List critical lengths up to a bound
    CriticalLengths(CriticalLengthsArgs),
    /// Eigenvalues of the discrete generator
    Spectrum(SpectrumArgs),
    /// Solve the saturated resolvent problem by Picard iteration
    Resolvent(ResolventArgs),
}

/// Scenario flags shared by `simulate` and `sweep`. Unset flags fall back
/// to the `--config` file, then to the defaults.
#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// JSON manifest; explicit flags override its entries
    #[arg(long, env = "KDVSAT_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, env = "KDVSAT_LENGTH")]
    pub length: Option<f64>,
    #[arg(long, env = "KDVSAT_CELLS")]
    pub cells: Option<usize>,
    #[arg(long, env = "KDVSAT_DT")]
    pub dt: Option<f64>,
    #[arg(long, env = "KDVSAT_T_FINAL")]
    pub t_final: Option<f64>,
    #[arg(long, value_enum, env = "KDVSAT_PROFILE")]
    pub profile: Option<Profile>,
    /// Mode number of the sine profile
    #[arg(long, env = "KDVSAT_MODE")]
    pub mode: Option<u32>,
    #[arg(long, env = "KDVSAT_AMPLITUDE")]
    pub amplitude: Option<f64>,
    #[arg(long, env = "KDVSAT_GAIN")]
    pub gain: Option<f64>,
    /// Energy samples are recorded every this many steps
    #[arg(long, env = "KDVSAT_ENERGY_STRIDE")]
    pub energy_stride: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum, env = "KDVSAT_FEEDBACK")]
    pub feedback: Option<Feedback>,
    #[arg(long, env = "KDVSAT_SAT_LEVEL")]
    pub sat_level: Option<f64>,
    /// Snapshots are recorded every this many steps
    #[arg(long, env = "KDVSAT_SNAPSHOT_STRIDE")]
    pub snapshot_stride: Option<usize>,
    #[arg(long, env = "KDVSAT_TRAJ_OUT")]
    pub traj_out: Option<PathBuf>,
    #[arg(long, env = "KDVSAT_ENERGY_OUT")]
    pub energy_out: Option<PathBuf>,
    /// Write the resolved manifest here before running
    #[arg(long, env = "KDVSAT_EMIT_MANIFEST")]
    pub emit_manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Comma-separated levels; `inf` selects the unsaturated linear law
    #[arg(long, env = "KDVSAT_SAT_LEVELS", allow_hyphen_values = true)]
    pub sat_levels: String,
    /// Directory for the per-level energy CSVs and `summary.csv`
    #[arg(long, env = "KDVSAT_OUT_DIR")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct CriticalLengthsArgs {
    #[arg(long, env = "KDVSAT_MAX_LENGTH", allow_hyphen_values = true)]
    pub max_length: f64,
    /// CSV destination; standard output when absent
    #[arg(long, env = "KDVSAT_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, env = "KDVSAT_LENGTH", default_value_t = std::f64::consts::TAU)]
    pub length: f64,
    #[arg(long, env = "KDVSAT_CELLS", default_value_t = 256)]
    pub cells: usize,
    #[arg(long, env = "KDVSAT_OUT")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RhsProfile {
    OneMinusCos,
    Sine,
    /// Uniform nodal noise in [-1, 1] from `--seed`
    Random,
}

#[derive(Debug, Args)]
pub struct ResolventArgs {
    #[arg(long, env = "KDVSAT_LAMBDA_TILDE", default_value_t = 10.0)]
    pub lambda_tilde: f64,
    #[arg(long, env = "KDVSAT_GAIN", default_value_t = 1.0)]
    pub gain: f64,
    #[arg(long, env = "KDVSAT_SAT_LEVEL", default_value_t = 1.0)]
    pub sat_level: f64,
    #[arg(
        long,
        value_enum,
        env = "KDVSAT_RHS_PROFILE",
        default_value = "one-minus-cos"
    )]
    pub rhs_profile: RhsProfile,
    #[arg(long, env = "KDVSAT_RHS_AMPLITUDE", default_value_t = 1.0)]
    pub rhs_amplitude: f64,
    /// Mode number of the sine right-hand side
    #[arg(long, env = "KDVSAT_MODE", default_value_t = 1)]
    pub mode: u32,
    #[arg(long, env = "KDVSAT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "KDVSAT_TOL", default_value_t = kdvsat::resolvent::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, env = "KDVSAT_MAX_ITER", default_value_t = kdvsat::resolvent::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, env = "KDVSAT_LENGTH", default_value_t = std::f64::consts::TAU)]
    pub length: f64,
    #[arg(long, env = "KDVSAT_CELLS", default_value_t = 128)]
    pub cells: usize,
    /// Solution CSV destination
    #[arg(long, env = "KDVSAT_OUT")]
    pub out: Option<PathBuf>,
}

impl ScenarioArgs {
    /// Config file (if any) overlaid with the explicit flags.
    pub fn base_manifest(&self) -> crate::error::CliResult<RunManifest> {
        let mut m = match &self.config {
            Some(path) => RunManifest::load(path)?,
            None => RunManifest::default(),
        };
        set(&mut m.length, self.length);
        set(&mut m.cells, self.cells);
        set(&mut m.dt, self.dt);
        set(&mut m.t_final, self.t_final);
        set(&mut m.profile, self.profile);
        set(&mut m.mode, self.mode);
        set(&mut m.amplitude, self.amplitude);
        set(&mut m.gain, self.gain);
        set(&mut m.energy_stride, self.energy_stride);
        Ok(m)
    }
}

impl SimulateArgs {
    pub fn manifest(&self) -> crate::error::CliResult<RunManifest> {
        let mut m = self.scenario.base_manifest()?;
        set(&mut m.feedback, self.feedback);
        set(&mut m.sat_level, self.sat_level);
        set(&mut m.snapshot_stride, self.snapshot_stride);
        if self.traj_out.is_some() {
            m.traj_out = self.traj_out.clone();
        }
        if self.energy_out.is_some() {
            m.energy_out = self.energy_out.clone();
        }
        Ok(m)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}
