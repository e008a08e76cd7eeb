use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::{Cell, SampleGrid};
use crate::state::{born_probabilities, Ket, MacrostatePartition};

/// `n` equal-amplitude orthogonal components, each assigned a label.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteCaseConfig {
    pub labels: Vec<String>,
}

impl FiniteCaseConfig {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let config = Self {
            labels: labels.iter().map(|s| s.as_ref().to_string()).collect(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.labels.is_empty() {
            return Err(Error::InvalidScenario(
                "finite case needs n >= 1 components".into(),
            ));
        }
        if let Some(i) = self.labels.iter().position(|l| l.is_empty()) {
            return Err(Error::InvalidScenario(format!(
                "component {i} has an empty label"
            )));
        }
        Ok(())
    }
}

/// Per-label probabilities in label order; serializes as a JSON object.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelProbabilities(pub Vec<(String, f64)>);

impl LabelProbabilities {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.0.iter().find(|(l, _)| l == label).map(|(_, p)| *p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(l, p)| (l.as_str(), *p))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Serialize for LabelProbabilities {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (label, p) in &self.0 {
            map.serialize_entry(label, p)?;
        }
        map.end()
    }
}

/// `psi = n^{-1/2} sum_k |k>` on an `n`-cell unit-weight grid, with the
/// partition given by the component labels.
pub fn finite_uniform_state(config: &FiniteCaseConfig) -> Result<(Ket, MacrostatePartition)> {
    config.validate()?;
    let n = config.n();
    let grid = Arc::new(SampleGrid::new(
        1,
        (0..n).map(|k| Cell {
            center: vec![k as f64],
            weight: 1.0,
        }),
    )?);
    let amp = 1.0 / (n as f64).sqrt();
    let psi = Ket::from_real(grid.clone(), &vec![amp; n])?;
    let partition = MacrostatePartition::from_cell_names(grid, &config.labels)?;
    Ok((psi, partition))
}

/// Born probabilities of the finite uniform case; these are `n_j / n`.
pub fn finite_uniform_case(config: &FiniteCaseConfig) -> Result<LabelProbabilities> {
    let (psi, partition) = finite_uniform_state(config)?;
    Ok(LabelProbabilities(born_probabilities(&psi, &partition)?))
}
