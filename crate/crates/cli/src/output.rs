//! CSV emission. Every real is written with 17 significant digits, which
//! round-trips an f64 exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use kdvsat::{CriticalLength64, EnergyTrace64, State64};

use crate::error::{CliError, CliResult};

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Buffered CSV file that maps every I/O failure to exit code 4.
pub struct CsvFile<'a> {
    path: &'a Path,
    out: Box<dyn Write + 'a>,
}

impl<'a> CsvFile<'a> {
    pub fn create(path: &'a Path, header: &str) -> CliResult<Self> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut csv = Self {
            path,
            out: Box::new(BufWriter::new(file)),
        };
        csv.row(header)?;
        Ok(csv)
    }

    pub fn stdout(header: &str) -> CliResult<Self> {
        let mut csv = Self {
            path: Path::new("<stdout>"),
            out: Box::new(std::io::stdout().lock()),
        };
        csv.row(header)?;
        Ok(csv)
    }

    pub fn row(&mut self, line: &str) -> CliResult<()> {
        writeln!(self.out, "{line}").map_err(|e| CliError::io(self.path, e))
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.out.flush().map_err(|e| CliError::io(self.path, e))
    }
}

/// Long form `time,x,y`, boundary nodes included.
pub fn write_trajectory(path: &Path, snapshots: &[State64]) -> CliResult<()> {
    let mut csv = CsvFile::create(path, "time,x,y")?;
    for s in snapshots {
        let t = real(s.time());
        let grid = s.grid();
        let zero = real(0.0);
        csv.row(&format!("{t},{},{zero}", real(grid.node(0))))?;
        for (x, y) in grid.interior_nodes().zip(s.values()) {
            csv.row(&format!("{t},{},{}", real(x), real(*y)))?;
        }
        csv.row(&format!("{t},{},{zero}", real(grid.node(grid.n_cells()))))?;
    }
    csv.finish()
}

pub fn write_energy(path: &Path, trace: &EnergyTrace64) -> CliResult<()> {
    let mut csv = CsvFile::create(path, "time,energy")?;
    for (t, e) in trace.iter() {
        csv.row(&format!("{},{}", real(t), real(e)))?;
    }
    csv.finish()
}

pub fn write_critical_lengths(mut csv: CsvFile<'_>, lengths: &[CriticalLength64]) -> CliResult<()> {
    for c in lengths {
        csv.row(&format!("{},{},{}", c.k, c.l, real(c.length)))?;
    }
    csv.finish()
}

pub fn write_spectrum(
    path: &Path,
    eigenvalues: impl IntoIterator<Item = (f64, f64)>,
) -> CliResult<()> {
    let mut csv = CsvFile::create(path, "re,im")?;
    for (re, im) in eigenvalues {
        csv.row(&format!("{},{}", real(re), real(im)))?;
    }
    csv.finish()
}

/// Solution with the boundary zeros, `x,u_tilde`.
pub fn write_solution(path: &Path, state: &State64) -> CliResult<()> {
    let mut csv = CsvFile::create(path, "x,u_tilde")?;
    let grid = state.grid();
    let zero = real(0.0);
    csv.row(&format!("{},{zero}", real(0.0)))?;
    for (x, u) in grid.interior_nodes().zip(state.values()) {
        csv.row(&format!("{},{}", real(x), real(*u)))?;
    }
    csv.row(&format!("{},{zero}", real(grid.length())))?;
    csv.finish()
}
