//! Trajectory-level studies: correlation time series, sudden-death detection
//! and rectangular `(t, T)` sweeps.
//!
//! Every grid cell is an independent pure computation, so cells are
//! evaluated in parallel and collected in grid order. The result does not
//! depend on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{EnvironmentParams, Evolution};
use crate::error::{Error, Result};
use crate::states::{
    build_squeezed_thermal, gaussian_discord_report, log_negativity, ppt_g, CovarianceMatrix,
    EpsilonBranch, MeasuredMode, SqueezedThermalParams,
};

/// Coarse scan resolution used before bisecting for the death time.
pub const ESD_SCAN_STEPS: usize = 2000;
/// Discord above `1 + THRESHOLD_MARGIN` counts as above the unit threshold.
pub const THRESHOLD_MARGIN: f64 = 1e-12;

/// Correlation measures of the evolved state at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    /// Logarithmic negativity in bits.
    pub e_n: f64,
    /// Gaussian discord in nats.
    pub discord: f64,
    /// Smallest symplectic eigenvalue of the evolved state.
    pub nu_minus: f64,
    pub branch: EpsilonBranch,
}

/// Evenly spaced grid `min, …, max` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let g = Grid { min, max, count };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidInput("grid needs at least one point".into()));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            return Err(Error::InvalidInput(format!(
                "grid bounds [{}, {}] must be finite with min <= max",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + span * (i as f64 / last)
                }
            })
            .collect()
    }
}

fn check_ascending(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidInput(format!("{what} grid is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput(format!(
            "{what} grid must be finite and ascending"
        )));
    }
    Ok(())
}

fn measure(
    evo: &Evolution,
    s0: &CovarianceMatrix,
    t: f64,
    mode: MeasuredMode,
) -> Result<TrajectoryPoint> {
    let eval = || -> Result<TrajectoryPoint> {
        let st = evo.evolve(s0, t)?;
        let e_n = log_negativity(&st)?;
        let report = gaussian_discord_report(&st, mode)?;
        Ok(TrajectoryPoint {
            t,
            e_n,
            discord: report.value,
            nu_minus: report.spectrum.nu_minus,
            branch: report.invariants.branch,
        })
    };
    eval().map_err(|e| e.at_cell(t, evo.params().temperature))
}

/// Negativity and discord of `σ(t)` at every time in `t_grid`.
pub fn trajectory(
    s0: &CovarianceMatrix,
    p: &EnvironmentParams,
    t_grid: &[f64],
    mode: MeasuredMode,
) -> Result<Vec<TrajectoryPoint>> {
    check_ascending(t_grid, "time")?;
    if t_grid[0] < 0.0 {
        return Err(Error::InvalidInput("times must be non-negative".into()));
    }
    let evo = Evolution::thermal(p)?;
    t_grid
        .par_iter()
        .map(|&t| measure(&evo, s0, t, mode))
        .collect()
}

/// `4g(σ(t)) - 1`: negative while entangled, non-negative once separable.
fn separability_margin(evo: &Evolution, s0: &CovarianceMatrix, t: f64) -> Result<f64> {
    let eval = || -> Result<f64> { Ok(4.0 * ppt_g(&evo.evolve(s0, t)?)? - 1.0) };
    eval().map_err(|e| e.at_cell(t, evo.params().temperature))
}

/// First time in `(0, t_max]` at which the evolved state becomes separable.
///
/// Scans `4g - 1` on [`ESD_SCAN_STEPS`] uniform steps, then bisects the first
/// bracket to a width of at most `tol`. Returns `None` when the state stays
/// entangled over the whole window.
pub fn sudden_death_time(
    s0: &CovarianceMatrix,
    p: &EnvironmentParams,
    t_max: f64,
    tol: f64,
) -> Result<Option<f64>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "t_max = {t_max} must be positive"
        )));
    }
    if !(log_negativity(s0)? > 0.0) {
        return Err(Error::InvalidInput(
            "initial state is separable; there is no entanglement to lose".into(),
        ));
    }
    let evo = Evolution::thermal(p)?;
    let step = |k: usize| t_max * (k as f64 / ESD_SCAN_STEPS as f64);

    let mut lo = 0.0;
    for k in 1..=ESD_SCAN_STEPS {
        let t = step(k);
        if separability_margin(&evo, s0, t)? >= 0.0 {
            let mut hi = t;
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if separability_margin(&evo, s0, mid)? >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(hi));
        }
        lo = t;
    }
    Ok(None)
}

/// One cell of a `(t, T)` sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    #[serde(rename = "E_N")]
    pub e_n: f64,
    pub discord: f64,
    pub branch: EpsilonBranch,
}

/// Parameter echo for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub state: SqueezedThermalParams,
    pub lambda: f64,
    pub mass: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub measured_mode: MeasuredMode,
    pub t_grid: Grid,
    pub temperature_grid: Grid,
}

/// Rectangular `(T, t)` table, temperature-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub metadata: SweepMetadata,
    pub rows: Vec<SweepRow>,
}

/// Evaluates negativity and discord on every `(t, T)` pair.
///
/// The temperature field of `env` is ignored; each row of the table uses its
/// own temperature from `temperature_grid`.
pub fn sweep(
    state: &SqueezedThermalParams,
    env: &EnvironmentParams,
    t_grid: &Grid,
    temperature_grid: &Grid,
    mode: MeasuredMode,
) -> Result<SweepTable> {
    t_grid.validate()?;
    temperature_grid.validate()?;
    let s0 = build_squeezed_thermal(state)?;
    let times = t_grid.points();
    if times[0] < 0.0 {
        return Err(Error::InvalidInput("times must be non-negative".into()));
    }
    let temperatures = temperature_grid.points();

    let cells: Vec<(f64, f64)> = temperatures
        .iter()
        .flat_map(|&temp| times.iter().map(move |&t| (temp, t)))
        .collect();
    let evolutions: Vec<Evolution> = temperatures
        .iter()
        .map(|&temp| {
            Evolution::thermal(&env.with_temperature(temp)).map_err(|e| e.at_cell(times[0], temp))
        })
        .collect::<Result<_>>()?;

    let rows = cells
        .par_iter()
        .enumerate()
        .map(|(idx, &(temp, t))| {
            let evo = &evolutions[idx / times.len()];
            let point = measure(evo, &s0, t, mode)?;
            Ok(SweepRow {
                t,
                temperature: temp,
                e_n: point.e_n,
                discord: point.discord,
                branch: point.branch,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepTable {
        metadata: SweepMetadata {
            state: *state,
            lambda: env.lambda,
            mass: env.mass,
            omega1: env.omega1,
            omega2: env.omega2,
            measured_mode: mode,
            t_grid: *t_grid,
            temperature_grid: *temperature_grid,
        },
        rows,
    })
}

/// Position of a sweep cell relative to the unit discord threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThresholdClass {
    AboveOne,
    BetweenZeroAndOne,
}

/// Tags every row by whether its discord exceeds one.
///
/// A row above the threshold must be entangled; finding a separable one is
/// reported as [`Error::ThresholdInconsistency`].
pub fn classify_threshold(table: &SweepTable) -> Result<Vec<ThresholdClass>> {
    table
        .rows
        .iter()
        .map(|row| {
            if row.discord > 1.0 + THRESHOLD_MARGIN {
                if row.e_n > 0.0 {
                    Ok(ThresholdClass::AboveOne)
                } else {
                    Err(Error::ThresholdInconsistency {
                        t: row.t,
                        temperature: row.temperature,
                        discord: row.discord,
                    })
                }
            } else {
                Ok(ThresholdClass::BetweenZeroAndOne)
            }
        })
        .collect()
}
