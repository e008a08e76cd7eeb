use std::cmp::Ordering;

use super::density::DensityField;
use super::grid::SampleGrid;
use crate::error::{Error, Result};

/// How cells are laid out along the cumulative-mass axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellOrdering {
    /// Cell index order.
    Natural,
    /// Lexicographic by center coordinates, ties broken by index.
    Coordinate,
    /// An explicit list of distinct cell indices; cells not listed are left out.
    Explicit(Vec<usize>),
}

impl CellOrdering {
    pub fn resolve(&self, grid: &SampleGrid) -> Result<Vec<usize>> {
        match self {
            CellOrdering::Natural => Ok((0..grid.len()).collect()),
            CellOrdering::Coordinate => {
                let mut order: Vec<usize> = (0..grid.len()).collect();
                order.sort_by(|&a, &b| compare_centers(grid, a, b));
                Ok(order)
            }
            CellOrdering::Explicit(order) => {
                let mut seen = vec![false; grid.len()];
                for &c in order {
                    grid.check_index(c)?;
                    if std::mem::replace(&mut seen[c], true) {
                        return Err(Error::InvalidOrdering(format!("cell {c} listed twice")));
                    }
                }
                Ok(order.clone())
            }
        }
    }
}

/// Lexicographic comparison of two cell centers, then by index.
pub fn compare_centers(grid: &SampleGrid, a: usize, b: usize) -> Ordering {
    grid.center(a)
        .iter()
        .zip(grid.center(b))
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
        .then(a.cmp(&b))
}

/// Positive-mass cells in a chosen order with their normalized cumulative
/// masses. Entry `i` covers the mass interval `(lower(i), upper(i)]`; the last
/// upper mark is exactly 1.
#[derive(Clone, Debug)]
pub struct CumulativeTable {
    cells: Vec<usize>,
    masses: Vec<f64>,
    upper: Vec<f64>,
    total_mass: f64,
}

impl CumulativeTable {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Grid indices of the ordered cells.
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// Normalized mass of each ordered cell.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Normalized cumulative mass at the end of each ordered cell.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn lower(&self, pos: usize) -> f64 {
        if pos == 0 {
            0.0
        } else {
            self.upper[pos - 1]
        }
    }

    /// Cumulative coordinate of the mass midpoint of an ordered cell.
    pub fn midpoint(&self, pos: usize) -> f64 {
        0.5 * (self.lower(pos) + self.upper[pos])
    }

    /// Un-normalized total mass of the listed cells.
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Largest single-cell normalized mass.
    pub fn max_cell_mass(&self) -> f64 {
        self.masses.iter().copied().fold(0.0, f64::max)
    }

    /// Position of the first ordered cell whose upper mark reaches `u`.
    pub fn position_of(&self, u: f64) -> usize {
        self.upper
            .partition_point(|&m| m < u)
            .min(self.len().saturating_sub(1))
    }

    /// Coordinate at which the cumulative mass crosses `u` on a 1-D grid,
    /// interpolating linearly inside the crossing cell.
    pub fn quantile_coordinate(&self, grid: &SampleGrid, u: f64) -> Result<f64> {
        let pos = self.position_of(u);
        let (lo, hi) = grid.cell_interval(self.cells[pos])?;
        let frac = ((u - self.lower(pos)) / self.masses[pos]).clamp(0.0, 1.0);
        Ok(lo + frac * (hi - lo))
    }
}

/// Orders the cells of `density` and tabulates normalized cumulative mass.
/// Zero-mass cells are dropped from the table.
pub fn cumulative_order(
    density: &DensityField,
    ordering: &CellOrdering,
) -> Result<CumulativeTable> {
    let grid = density.grid();
    let order = ordering.resolve(grid)?;
    let values = density.values();
    let mut cells = Vec::with_capacity(order.len());
    let mut raw = Vec::with_capacity(order.len());
    for c in order {
        let m = values[c] * grid.weight(c);
        if m > 0.0 {
            cells.push(c);
            raw.push(m);
        }
    }
    let mut running = 0.0;
    let prefix: Vec<f64> = raw
        .iter()
        .map(|m| {
            running += m;
            running
        })
        .collect();
    let total_mass = running;
    if total_mass.is_nan() || total_mass <= 0.0 {
        return Err(Error::ZeroMass);
    }
    if !total_mass.is_finite() {
        return Err(Error::NonFinite("cumulative mass overflows".into()));
    }
    Ok(CumulativeTable {
        cells,
        masses: raw.iter().map(|m| m / total_mass).collect(),
        upper: prefix.iter().map(|p| p / total_mass).collect(),
        total_mass,
    })
}
