use kdvsat::{
    critical_lengths, init_profile, resolvent_fixed_point, simulate, spectrum, FeedbackLaw64,
    ProfileKind64, ResolventProblem64, SaturationLevels64, State64, Trajectory64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::args::{
    CriticalLengthsArgs, ResolventArgs, RhsProfile, SimulateArgs, SpectrumArgs, SweepArgs,
};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::output::{self, real, CsvFile};

pub fn run_manifest(m: &RunManifest, feedback: FeedbackLaw64) -> CliResult<Trajectory64> {
    let grid = m.grid()?;
    let y0 = init_profile(&grid, &m.profile_kind(), m.amplitude)?;
    Ok(simulate(&y0, feedback, &m.sim_config())?)
}

pub fn simulate_cmd(args: &SimulateArgs) -> CliResult<()> {
    let m = args.manifest()?;
    let feedback = m.feedback_law()?;
    m.sim_config().validate(&feedback)?;
    if let Some(path) = &args.emit_manifest {
        m.save(path)?;
    }
    let traj = run_manifest(&m, feedback)?;
    if let Some(path) = &m.traj_out {
        output::write_trajectory(path, &traj.snapshots)?;
    }
    if let Some(path) = &m.energy_out {
        output::write_energy(path, &traj.energy_trace)?;
    }
    let e = traj.energy_trace.energies();
    println!("steps = {}", m.sim_config().n_steps());
    println!("initial_energy = {}", real(e[0]));
    println!("final_energy = {}", real(e[e.len() - 1]));
    Ok(())
}

/// A sweep point: `None` is the unsaturated linear law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepLevel {
    pub level: Option<f64>,
}

impl SweepLevel {
    fn label(&self) -> String {
        match self.level {
            Some(u0) => real(u0),
            None => "inf".to_string(),
        }
    }

    fn file_name(&self, index: usize) -> String {
        match self.level {
            Some(u0) => format!("energy_{index:03}_u0_{u0}.csv"),
            None => format!("energy_{index:03}_inf.csv"),
        }
    }

    fn feedback(&self, gain: f64) -> CliResult<FeedbackLaw64> {
        Ok(match self.level {
            Some(u0) => FeedbackLaw64::saturated(gain, SaturationLevels64::symmetric(u0)?)?,
            None => FeedbackLaw64::linear(gain)?,
        })
    }
}

pub fn parse_levels(list: &str) -> CliResult<Vec<SweepLevel>> {
    let levels = list
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            if t.eq_ignore_ascii_case("inf") {
                return Ok(SweepLevel { level: None });
            }
            match t.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Ok(SweepLevel { level: Some(v) }),
                _ => Err(CliError::Usage(format!("invalid saturation level `{t}`"))),
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    if levels.is_empty() {
        return Err(CliError::Usage("--sat-levels lists no levels".into()));
    }
    Ok(levels)
}

pub fn sweep_cmd(args: &SweepArgs) -> CliResult<()> {
    let levels = parse_levels(&args.sat_levels)?;
    let mut base = args.scenario.base_manifest()?;
    base.snapshot_stride = usize::MAX;
    let laws = levels
        .iter()
        .map(|l| l.feedback(base.gain))
        .collect::<CliResult<Vec<_>>>()?;
    for law in &laws {
        base.sim_config().validate(law)?;
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;

    let times = levels
        .par_iter()
        .zip(&laws)
        .enumerate()
        .map(|(i, (level, law))| {
            let traj = run_manifest(&base, *law)?;
            output::write_energy(&args.out_dir.join(level.file_name(i)), &traj.energy_trace)?;
            Ok(traj.energy_trace.first_time_below(0.01))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let summary = args.out_dir.join("summary.csv");
    let mut csv = CsvFile::create(&summary, "level,time_to_1pct")?;
    for (level, t) in levels.iter().zip(&times) {
        // a level whose energy never reaches 1% within t_final is reported as inf
        let t = t.map_or_else(|| "inf".to_string(), real);
        csv.row(&format!("{},{t}", level.label()))?;
        println!("level {} time_to_1pct = {t}", level.label());
    }
    csv.finish()
}

pub fn critical_lengths_cmd(args: &CriticalLengthsArgs) -> CliResult<()> {
    let lengths = critical_lengths(args.max_length)?;
    let header = "k,l,length";
    let csv = match &args.out {
        Some(path) => CsvFile::create(path, header)?,
        None => CsvFile::stdout(header)?,
    };
    output::write_critical_lengths(csv, &lengths)
}

pub fn spectrum_cmd(args: &SpectrumArgs) -> CliResult<()> {
    let grid = kdvsat::Grid64::new(args.length, args.cells)?;
    let s = spectrum(&grid)?;
    output::write_spectrum(&args.out, s.eigenvalues.iter().map(|z| (z.re, z.im)))?;
    println!("min_abs_eigenvalue = {}", real(s.min_magnitude()));
    println!("max_real_part = {}", real(s.max_real_part()));
    Ok(())
}

fn resolvent_rhs(args: &ResolventArgs, grid: kdvsat::Grid64) -> CliResult<State64> {
    let kind = match args.rhs_profile {
        RhsProfile::OneMinusCos => ProfileKind64::OneMinusCos,
        RhsProfile::Sine => ProfileKind64::SineMode(args.mode),
        RhsProfile::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let samples = (0..grid.interior_len())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            ProfileKind64::Samples(samples)
        }
    };
    Ok(init_profile(&grid, &kind, args.rhs_amplitude)?)
}

pub fn resolvent_cmd(args: &ResolventArgs) -> CliResult<()> {
    let grid = kdvsat::Grid64::new(args.length, args.cells)?;
    let levels = SaturationLevels64::symmetric(args.sat_level)?;
    let rhs = resolvent_rhs(args, grid)?;
    let problem = ResolventProblem64::new(args.lambda_tilde, args.gain, levels, rhs)?;
    if problem.contraction_bound() >= 1.0 {
        eprintln!(
            "warning: gain / lambda_tilde = {} >= 1, the iteration need not contract",
            problem.contraction_bound()
        );
    }
    let sol = resolvent_fixed_point(&problem, args.tol, args.max_iter)?;
    if let Some(path) = &args.out {
        output::write_solution(path, &sol.solution)?;
    }
    println!("iterations = {}", sol.iterations);
    println!("residual = {}", real(sol.residual_norm));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_lists() {
        let l = parse_levels("1, 3,inf").unwrap();
        assert_eq!(
            l,
            vec![
                SweepLevel { level: Some(1.0) },
                SweepLevel { level: Some(3.0) },
                SweepLevel { level: None }
            ]
        );
        assert_eq!(parse_levels("2").unwrap().len(), 1);
        for bad in ["", " , ", "0", "-1", "abc", "nan"] {
            assert_eq!(parse_levels(bad).unwrap_err().exit_code(), 2, "{bad}");
        }
    }

    #[test]
    fn sweep_file_names_are_distinct_for_repeated_levels() {
        let a = SweepLevel { level: Some(1.0) };
        assert_ne!(a.file_name(0), a.file_name(1));
    }
}
