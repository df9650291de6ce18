//! `verify`: engine against the dense oracle over the standard grid.

use hyperpure_core::optics::LocalGateTable;
use hyperpure_core::oracle::{check_case, MAX_ORACLE_PHOTONS};
use hyperpure_core::scenario::{standard_cases, MODES};
use hyperpure_core::state::{PolBit, SpatialBit};
use rayon::prelude::*;

use crate::{CliError, Result};

pub const TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSummary {
    pub mode: &'static str,
    pub cases: usize,
    pub worst: f64,
    /// Label of the case with the worst deviation.
    pub worst_case: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub photons: usize,
    pub modes: Vec<ModeSummary>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.modes.iter().all(|m| m.worst < TOLERANCE)
    }

    pub fn worst(&self) -> f64 {
        self.modes.iter().map(|m| m.worst).fold(0.0, f64::max)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for m in &self.modes {
            let status = if m.worst < TOLERANCE {
                "ok"
            } else {
                "MISMATCH"
            };
            out.push_str(&format!(
                "{:<20} cases={:<3} worst={:.3e} {status}",
                m.mode, m.cases, m.worst
            ));
            if m.worst >= TOLERANCE {
                out.push_str(&format!(" [{} mode={}]", m.worst_case, m.mode));
            }
            out.push('\n');
        }
        for mode in MODES
            .iter()
            .filter(|&&x| self.modes.iter().all(|m| m.mode != x))
        {
            out.push_str(&format!("{mode:<20} skipped (needs m >= 3)\n"));
        }
        out.push_str(&format!(
            "m={} worst={:.3e} tolerance={TOLERANCE:e} {}\n",
            self.photons,
            self.worst(),
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Rows `(H, mode 1)` and `(V, mode 1)` exchanged.
pub fn corrupted_table() -> LocalGateTable {
    LocalGateTable::standard().with_swapped_rows(
        (PolBit::H, SpatialBit::Mode1),
        (PolBit::V, SpatialBit::Mode1),
    )
}

pub fn run(photons: usize, table: LocalGateTable) -> Result<VerifyReport> {
    if !(2..=MAX_ORACLE_PHOTONS).contains(&photons) {
        return Err(CliError::Usage(format!(
            "--m {photons} outside oracle capacity 2..={MAX_ORACLE_PHOTONS}"
        )));
    }
    let cases = standard_cases(photons)?;
    let deviations = cases
        .par_iter()
        .map(|case| {
            let mut case = case.clone();
            case.protocol = case.protocol.with_table(table);
            check_case(&case)
        })
        .collect::<std::result::Result<Vec<f64>, _>>()?;
    let mut modes: Vec<ModeSummary> = Vec::new();
    for (case, dev) in cases.iter().zip(deviations) {
        let slot = match modes.iter().position(|m| m.mode == case.mode) {
            Some(i) => i,
            None => {
                modes.push(ModeSummary {
                    mode: case.mode,
                    cases: 0,
                    worst: 0.0,
                    worst_case: String::new(),
                });
                modes.len() - 1
            }
        };
        let s = &mut modes[slot];
        s.cases += 1;
        // NaN counts as a mismatch
        if dev.is_nan() || dev > s.worst {
            s.worst = if dev.is_nan() { f64::INFINITY } else { dev };
            s.worst_case = case.label.clone();
        }
    }
    Ok(VerifyReport { photons, modes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passes_on_standard_table() {
        let r = run(2, LocalGateTable::standard()).unwrap();
        assert!(r.passed());
        assert_eq!(r.modes.len(), 3);
        assert!(r.render().contains("deterministic-demo   skipped"));
    }

    #[test]
    fn fails_on_corrupted_table() {
        let r = run(3, corrupted_table()).unwrap();
        assert!(!r.passed());
        let text = r.render();
        assert!(text.contains("MISMATCH"));
        assert!(text.contains("FAIL"));
    }

    #[test]
    fn capacity() {
        assert_eq!(
            run(6, LocalGateTable::standard()).unwrap_err().exit_code(),
            2
        );
        assert_eq!(
            run(1, LocalGateTable::standard()).unwrap_err().exit_code(),
            2
        );
    }
}
