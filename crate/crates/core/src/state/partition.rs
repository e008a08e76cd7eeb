use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ket::Ket;
use crate::error::{Error, Result};
use crate::measure::{ensure_grid_id, ensure_same_grid, MeasurableSubset, SampleGrid};

/// An exhaustive labeling of grid cells by macrostate.
///
/// Each label `alpha` picks out the cell set `C_alpha`; the induced projectors
/// are diagonal in the cell basis, so they commute and sum to the identity.
/// Labels keep their declaration order, which is also the block order used by
/// macrostate-major refinements.
#[derive(Clone, Debug)]
pub struct MacrostatePartition {
    grid: Arc<SampleGrid>,
    names: Vec<String>,
    cell_labels: Vec<usize>,
    eigenvalues: BTreeMap<String, f64>,
}

/// `{grid_id, labels: [per-cell label], eigenvalues: {label: value}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionDocument {
    pub grid_id: String,
    pub labels: Vec<String>,
    #[serde(default)]
    pub eigenvalues: BTreeMap<String, f64>,
}

impl MacrostatePartition {
    /// `cell_labels[c]` indexes into `names`.
    pub fn new(grid: Arc<SampleGrid>, names: Vec<String>, cell_labels: Vec<usize>) -> Result<Self> {
        if cell_labels.len() != grid.len() {
            return Err(Error::InvalidPartition(format!(
                "{} labels for a grid of {} cells",
                cell_labels.len(),
                grid.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidPartition(format!(
                    "label `{name}` declared twice"
                )));
            }
        }
        if let Some(c) = cell_labels.iter().position(|&l| l >= names.len()) {
            return Err(Error::InvalidPartition(format!(
                "cell {c} has label index {} but only {} labels exist",
                cell_labels[c],
                names.len()
            )));
        }
        Ok(Self {
            grid,
            names,
            cell_labels,
            eigenvalues: BTreeMap::new(),
        })
    }

    /// Labels given per cell by name; the label set is taken in first-appearance order.
    pub fn from_cell_names<S: AsRef<str>>(grid: Arc<SampleGrid>, labels: &[S]) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut cell_labels = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            let idx = match names.iter().position(|n| n == l) {
                Some(i) => i,
                None => {
                    names.push(l.to_string());
                    names.len() - 1
                }
            };
            cell_labels.push(idx);
        }
        Self::new(grid, names, cell_labels)
    }

    /// Labels each cell by `classify(center)`, an index into `names`.
    pub fn from_fn<S: AsRef<str>>(
        grid: Arc<SampleGrid>,
        names: &[S],
        classify: impl Fn(&[f64]) -> usize,
    ) -> Result<Self> {
        let cell_labels = (0..grid.len()).map(|i| classify(grid.center(i))).collect();
        let names = names.iter().map(|s| s.as_ref().to_string()).collect();
        Self::new(grid, names, cell_labels)
    }

    /// A single label covering the whole grid.
    pub fn single(grid: Arc<SampleGrid>, name: &str) -> Self {
        let n = grid.len();
        Self {
            grid,
            names: vec![name.to_string()],
            cell_labels: vec![0; n],
            eigenvalues: BTreeMap::new(),
        }
    }

    /// Attaches an eigenvalue to a label (metadata only).
    pub fn with_eigenvalue(mut self, label: &str, value: f64) -> Result<Self> {
        self.label_index(label)?;
        self.eigenvalues.insert(label.to_string(), value);
        Ok(self)
    }

    pub fn grid(&self) -> &Arc<SampleGrid> {
        &self.grid
    }

    pub fn labels(&self) -> &[String] {
        &self.names
    }

    pub fn eigenvalue(&self, label: &str) -> Option<f64> {
        self.eigenvalues.get(label).copied()
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Label index of every cell.
    pub fn cell_labels(&self) -> &[usize] {
        &self.cell_labels
    }

    pub fn label_of(&self, cell: usize) -> &str {
        &self.names[self.cell_labels[cell]]
    }

    /// The cell set `C_alpha`.
    pub fn cells_of(&self, label: &str) -> Result<MeasurableSubset> {
        let idx = self.label_index(label)?;
        MeasurableSubset::new(
            self.grid.clone(),
            (0..self.grid.len()).filter(|&c| self.cell_labels[c] == idx),
        )
    }

    pub fn ensure_compatible(&self, psi: &Ket) -> Result<()> {
        ensure_same_grid(&self.grid, psi.grid())
    }

    pub fn to_document(&self) -> PartitionDocument {
        PartitionDocument {
            grid_id: self.grid.id().to_string(),
            labels: self
                .cell_labels
                .iter()
                .map(|&l| self.names[l].clone())
                .collect(),
            eigenvalues: self.eigenvalues.clone(),
        }
    }

    pub fn from_document(grid: Arc<SampleGrid>, doc: PartitionDocument) -> Result<Self> {
        ensure_grid_id(&grid, &doc.grid_id)?;
        let mut partition = Self::from_cell_names(grid, &doc.labels)?;
        for (label, value) in doc.eigenvalues {
            partition = partition.with_eigenvalue(&label, value)?;
        }
        Ok(partition)
    }
}
