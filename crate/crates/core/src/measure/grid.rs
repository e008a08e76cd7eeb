use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Relative tolerance on `total_measure == sum(weights)`.
pub const TOTAL_MEASURE_RTOL: f64 = 1e-12;

/// Default cell count for 1-D convergence studies.
pub const DEFAULT_RESOLUTION: usize = 1 << 16;

/// Content-derived grid identifier.
///
/// Two grids with the same dimension, centers and weights (bitwise) share an
/// id, so serialized densities and kets can be re-attached to a grid that was
/// rebuilt from the same document.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridId(u64);

impl GridId {
    pub fn as_u64(self) -> u64 {
        self.0
    }
}

impl fmt::Display for GridId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// One cell of a grid, as it appears in the JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub center: Vec<f64>,
    pub weight: f64,
}

/// Serialized form of a [`SampleGrid`]: `{dim, cells: [{center, weight}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridDocument {
    pub dim: usize,
    pub cells: Vec<Cell>,
}

/// A finite discretization of a configuration space with per-cell measure
/// weights.
///
/// Centers are stored flat (`dim` coordinates per cell). Every weight is
/// strictly positive and the grid holds at least one cell.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    dim: usize,
    centers: Vec<f64>,
    weights: Vec<f64>,
    total_measure: f64,
    id: GridId,
}

impl SampleGrid {
    /// Builds a grid from explicit cells.
    pub fn new(dim: usize, cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let mut centers = Vec::new();
        let mut weights = Vec::new();
        for (i, cell) in cells.into_iter().enumerate() {
            if cell.center.len() != dim {
                return Err(Error::InvalidGrid(format!(
                    "cell {i} has {} coordinates, expected {dim}",
                    cell.center.len()
                )));
            }
            centers.extend_from_slice(&cell.center);
            weights.push(cell.weight);
        }
        Self::from_parts(dim, centers, weights)
    }

    /// Builds a grid from flat center coordinates (`dim` per cell) and weights.
    pub fn from_parts(dim: usize, centers: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        if weights.is_empty() {
            return Err(Error::InvalidGrid(
                "grid must contain at least one cell".into(),
            ));
        }
        if centers.len() != dim * weights.len() {
            return Err(Error::InvalidGrid(format!(
                "{} center coordinates for {} cells of dimension {dim}",
                centers.len(),
                weights.len()
            )));
        }
        if let Some(i) = centers.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite center coordinate in cell {}",
                i / dim
            )));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidGrid(format!(
                "cell {i} has weight {}, weights must be finite and > 0",
                weights[i]
            )));
        }
        let total_measure: f64 = weights.iter().sum();
        if !total_measure.is_finite() {
            return Err(Error::InvalidGrid("total measure overflows".into()));
        }
        let id = content_id(dim, &centers, &weights);
        Ok(Self {
            dim,
            centers,
            weights,
            total_measure,
            id,
        })
    }

    /// Uniform 1-D grid of `cells` cells over `[lo, hi]`, each of weight
    /// `(hi - lo) / cells`, centered in its interval.
    pub fn uniform(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidGrid(format!("bad interval [{lo}, {hi}]")));
        }
        if cells == 0 {
            return Err(Error::InvalidGrid(
                "grid must contain at least one cell".into(),
            ));
        }
        let width = (hi - lo) / cells as f64;
        let centers = (0..cells).map(|i| lo + (i as f64 + 0.5) * width).collect();
        Self::from_parts(1, centers, vec![width; cells])
    }

    pub fn from_document(doc: GridDocument) -> Result<Self> {
        Self::new(doc.dim, doc.cells)
    }

    pub fn to_document(&self) -> GridDocument {
        GridDocument {
            dim: self.dim,
            cells: (0..self.len())
                .map(|i| Cell {
                    center: self.center(i).to_vec(),
                    weight: self.weights[i],
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_document())?)
    }

    pub fn id(&self) -> GridId {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of cells (always at least one).
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn center(&self, cell: usize) -> &[f64] {
        &self.centers[cell * self.dim..(cell + 1) * self.dim]
    }

    pub fn weight(&self, cell: usize) -> f64 {
        self.weights[cell]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    /// Interval `[center - w/2, center + w/2]` of a cell on a 1-D grid.
    pub fn cell_interval(&self, cell: usize) -> Result<(f64, f64)> {
        self.require_1d()?;
        let c = self.centers[cell];
        let half = 0.5 * self.weights[cell];
        Ok((c - half, c + half))
    }

    pub fn require_1d(&self) -> Result<()> {
        if self.dim == 1 {
            Ok(())
        } else {
            Err(Error::NotOneDimensional(self.dim))
        }
    }

    pub fn check_index(&self, cell: usize) -> Result<()> {
        if cell < self.len() {
            Ok(())
        } else {
            Err(Error::CellOutOfRange {
                index: cell,
                cells: self.len(),
            })
        }
    }
}

/// Fails unless both grids are the same grid (same allocation or same content).
pub fn ensure_same_grid(a: &Arc<SampleGrid>, b: &Arc<SampleGrid>) -> Result<()> {
    if Arc::ptr_eq(a, b) || (a.id == b.id && a.len() == b.len()) {
        Ok(())
    } else {
        Err(Error::GridMismatch {
            left: a.id.to_string(),
            right: b.id.to_string(),
        })
    }
}

/// Resolves a serialized `grid_id` against a concrete grid.
pub(crate) fn ensure_grid_id(grid: &SampleGrid, grid_id: &str) -> Result<()> {
    let expected = grid.id().to_string();
    if expected == grid_id {
        Ok(())
    } else {
        Err(Error::GridMismatch {
            left: expected,
            right: grid_id.to_string(),
        })
    }
}

fn content_id(dim: usize, centers: &[f64], weights: &[f64]) -> GridId {
    let mut hasher = Sha256::new();
    hasher.update((dim as u64).to_le_bytes());
    hasher.update((weights.len() as u64).to_le_bytes());
    for c in centers {
        hasher.update(c.to_bits().to_le_bytes());
    }
    for w in weights {
        hasher.update(w.to_bits().to_le_bytes());
    }
    let digest = hasher.finalize();
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    GridId(u64::from_le_bytes(head))
}
