//! Discretized classical field configurations as a sample grid.
//!
//! A real scalar field on `S` lattice sites, each taking one of `V` evenly
//! spaced values, gives `V^S` configurations `phi = (phi_1, ..., phi_S)`.
//! Each configuration is one grid cell, so wavefunctionals are ordinary
//! [`Ket`]s and every other module applies to them unchanged.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{compensated_sum, SampleGrid};
use crate::state::{polar_decompose, Ket};

/// Upper bound on `V^S`.
pub const MAX_CONFIGURATIONS: usize = 1 << 24;

#[derive(Clone, Debug)]
pub struct FieldConfigSpace {
    pub sites: u32,
    pub levels: u32,
    pub value_range: (f64, f64),
    pub grid: Arc<SampleGrid>,
}

impl FieldConfigSpace {
    /// Spacing between neighboring field values.
    pub fn spacing(&self) -> f64 {
        (self.value_range.1 - self.value_range.0) / self.levels as f64
    }

    /// Field value of level `j` at any site.
    pub fn value(&self, j: u32) -> f64 {
        self.value_range.0 + (j as f64 + 0.5) * self.spacing()
    }

    /// Cell index of the configuration with per-site levels `js`.
    pub fn cell_of(&self, js: &[u32]) -> Result<usize> {
        if js.len() != self.sites as usize {
            return Err(Error::InvalidGrid(format!(
                "configuration has {} sites, expected {}",
                js.len(),
                self.sites
            )));
        }
        let mut cell = 0usize;
        for &j in js {
            if j >= self.levels {
                return Err(Error::InvalidGrid(format!(
                    "level {j} out of range 0..{}",
                    self.levels
                )));
            }
            cell = cell * self.levels as usize + j as usize;
        }
        Ok(cell)
    }
}

/// Enumerates all configurations, `phi_1` varying slowest.
pub fn build_config_space(
    sites: u32,
    levels: u32,
    value_range: (f64, f64),
) -> Result<FieldConfigSpace> {
    if sites < 1 || levels < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 1 site and 2 levels, got S = {sites}, V = {levels}"
        )));
    }
    let (lo, hi) = value_range;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidGrid(format!("bad value range [{lo}, {hi}]")));
    }
    let cells = (levels as usize)
        .checked_pow(sites)
        .filter(|&c| c <= MAX_CONFIGURATIONS)
        .ok_or(Error::ConfigSpaceTooLarge { sites, levels })?;

    let s = sites as usize;
    let v = levels as usize;
    let spacing = (hi - lo) / levels as f64;
    let values: Vec<f64> = (0..v).map(|j| lo + (j as f64 + 0.5) * spacing).collect();
    let mut centers = Vec::with_capacity(cells * s);
    let mut digits = vec![0usize; s];
    for _ in 0..cells {
        centers.extend(digits.iter().map(|&j| values[j]));
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < v {
                break;
            }
            *d = 0;
        }
    }
    let weight = spacing.powi(sites as i32);
    let grid = SampleGrid::from_parts(s, centers, vec![weight; cells])?;
    Ok(FieldConfigSpace {
        sites,
        levels,
        value_range,
        grid: Arc::new(grid),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MapRow {
    pub phi: Vec<f64>,
    pub r: f64,
    pub theta: f64,
    pub prob_mass: f64,
}

/// Per-configuration modulus, phase, and probability mass of a wavefunctional.
#[derive(Clone, Debug, Serialize)]
pub struct DensityPhaseMap {
    pub sites: usize,
    pub rows: Vec<MapRow>,
}

impl DensityPhaseMap {
    pub fn total_probability(&self) -> f64 {
        compensated_sum(self.rows.iter().map(|r| r.prob_mass))
    }

    pub fn header(&self) -> Vec<String> {
        (1..=self.sites)
            .map(|i| format!("phi_{i}"))
            .chain(["r", "theta", "prob_mass"].map(String::from))
            .collect()
    }

    /// CSV with columns `phi_1..phi_S, r, theta, prob_mass`, one row per
    /// configuration in grid order.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record(self.header())?;
        for row in &self.rows {
            let fields = row
                .phi
                .iter()
                .chain([&row.r, &row.theta, &row.prob_mass])
                .map(|v| v.to_string());
            csv.write_record(fields)?;
        }
        csv.flush()?;
        Ok(())
    }
}

pub fn emit_density_phase_map(psi: &Ket) -> Result<DensityPhaseMap> {
    psi.require_unit()?;
    let grid = psi.grid();
    let polar = polar_decompose(psi);
    let rows = (0..grid.len())
        .map(|c| {
            let r = polar.r()[c];
            MapRow {
                phi: grid.center(c).to_vec(),
                r,
                theta: polar.theta()[c],
                prob_mass: r * r * grid.weight(c),
            }
        })
        .collect();
    Ok(DensityPhaseMap {
        sites: grid.dim(),
        rows,
    })
}
