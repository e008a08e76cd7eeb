use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::finite::{finite_uniform_state, FiniteCaseConfig};
use super::states::{gaussian_ket, random_ket};
use super::stern_gerlach::{stern_gerlach_state, SternGerlachConfig};
use crate::error::{Error, Result};
use crate::measure::{GridDocument, SampleGrid};
use crate::state::{Ket, MacrostatePartition};

/// A grid in a scenario file: either a uniform interval or a full grid document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Uniform { lo: f64, hi: f64, cells: usize },
    Document(GridDocument),
}

impl GridSpec {
    /// `resolution` replaces the cell count of a uniform grid; it is ignored
    /// for explicit grid documents.
    pub fn build(&self, resolution: Option<usize>) -> Result<Arc<SampleGrid>> {
        let grid = match self {
            GridSpec::Uniform { lo, hi, cells } => {
                SampleGrid::uniform(*lo, *hi, resolution.unwrap_or(*cells))?
            }
            GridSpec::Document(doc) => SampleGrid::from_document(doc.clone())?,
        };
        Ok(Arc::new(grid))
    }
}

/// A scenario file, tagged by `type`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioFile {
    SternGerlach {
        a_re: f64,
        #[serde(default)]
        a_im: f64,
        b_re: f64,
        #[serde(default)]
        b_im: f64,
        sigma: f64,
        u_center: f64,
        d_center: f64,
        grid: GridSpec,
    },
    FiniteUniform {
        n: usize,
        labels: Vec<String>,
    },
    /// Gaussian packet split at `cut` into labels `le_cut` and `gt_cut`.
    Gaussian {
        center: f64,
        sigma: f64,
        cut: f64,
        grid: GridSpec,
    },
    /// Seeded random state on a 1-D grid, split at the sorted `cuts` into
    /// labels `r0, r1, ...`.
    Random {
        #[serde(default)]
        smoothness: usize,
        cuts: Vec<f64>,
        grid: GridSpec,
    },
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioFile::SternGerlach { .. } => "stern_gerlach",
            ScenarioFile::FiniteUniform { .. } => "finite_uniform",
            ScenarioFile::Gaussian { .. } => "gaussian",
            ScenarioFile::Random { .. } => "random",
        }
    }

    pub fn stern_gerlach_config(&self, resolution: Option<usize>) -> Result<SternGerlachConfig> {
        match self {
            ScenarioFile::SternGerlach {
                a_re,
                a_im,
                b_re,
                b_im,
                sigma,
                u_center,
                d_center,
                grid,
            } => Ok(SternGerlachConfig {
                a: Complex64::new(*a_re, *a_im),
                b: Complex64::new(*b_re, *b_im),
                screen: grid.build(resolution)?,
                sigma: *sigma,
                u_center: *u_center,
                d_center: *d_center,
            }),
            other => Err(Error::InvalidScenario(format!(
                "expected a stern_gerlach scenario, got {}",
                other.kind()
            ))),
        }
    }

    /// Builds the state and partition. `seed` only affects `random` scenarios.
    pub fn build(
        &self,
        seed: u64,
        resolution: Option<usize>,
    ) -> Result<(Ket, MacrostatePartition)> {
        match self {
            ScenarioFile::SternGerlach { .. } => {
                stern_gerlach_state(&self.stern_gerlach_config(resolution)?)
            }
            ScenarioFile::FiniteUniform { n, labels } => {
                if *n != labels.len() {
                    return Err(Error::InvalidScenario(format!(
                        "n = {n} but {} labels given",
                        labels.len()
                    )));
                }
                finite_uniform_state(&FiniteCaseConfig::new(labels)?)
            }
            ScenarioFile::Gaussian {
                center,
                sigma,
                cut,
                grid,
            } => {
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(Error::InvalidScenario(format!(
                        "sigma must be > 0, got {sigma}"
                    )));
                }
                let grid = grid.build(resolution)?;
                let psi = gaussian_ket(&grid, *center, *sigma)?;
                let cut = *cut;
                let partition = MacrostatePartition::from_fn(grid, &["le_cut", "gt_cut"], |x| {
                    usize::from(x[0] > cut)
                })?;
                Ok((psi, partition))
            }
            ScenarioFile::Random {
                smoothness,
                cuts,
                grid,
            } => {
                let grid = grid.build(resolution)?;
                grid.require_1d()?;
                let mut cuts = cuts.clone();
                if cuts.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidScenario("cuts must be finite".into()));
                }
                cuts.sort_by(f64::total_cmp);
                let names: Vec<String> = (0..=cuts.len()).map(|i| format!("r{i}")).collect();
                let psi = random_ket(seed, &grid, *smoothness);
                let partition = MacrostatePartition::from_fn(grid, &names, |x| {
                    cuts.partition_point(|&c| c < x[0])
                })?;
                Ok((psi, partition))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::born_probability;

    #[test]
    fn parses_each_type() {
        let sg = ScenarioFile::from_json(
            r#"{"type":"stern_gerlach","a_re":0.6,"a_im":0,"b_re":0,"b_im":0.8,
                "sigma":1,"u_center":3.5,"d_center":-3.5,"grid":{"lo":-8,"hi":8,"cells":1024}}"#,
        )
        .unwrap();
        let (psi, p) = sg.build(0, None).unwrap();
        assert!((born_probability(&psi, &p, "up").unwrap() - 0.36).abs() < 1e-12);

        let f = ScenarioFile::from_json(
            r#"{"type":"finite_uniform","n":4,"labels":["A","B","B","B"]}"#,
        )
        .unwrap();
        let (psi, p) = f.build(0, None).unwrap();
        assert_eq!(born_probability(&psi, &p, "A").unwrap(), 0.25);

        let g = ScenarioFile::from_json(
            r#"{"type":"gaussian","center":0,"sigma":1,"cut":1,"grid":{"lo":-8,"hi":8,"cells":64}}"#,
        )
        .unwrap();
        let (psi, _) = g.build(0, Some(256)).unwrap();
        assert_eq!(psi.len(), 256);

        let r = ScenarioFile::from_json(
            r#"{"type":"random","smoothness":4,"cuts":[0.5,-0.5],"grid":{"lo":-1,"hi":1,"cells":100}}"#,
        )
        .unwrap();
        let (a, p) = r.build(7, None).unwrap();
        let (b, _) = r.build(7, None).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert_eq!(p.labels(), ["r0", "r1", "r2"]);
        assert_eq!(p.label_of(0), "r0");
        assert_eq!(p.label_of(50), "r1");
        assert_eq!(p.label_of(99), "r2");
    }

    #[test]
    fn explicit_grid_document() {
        let s = ScenarioFile::from_json(
            r#"{"type":"gaussian","center":0,"sigma":1,"cut":0,
                "grid":{"dim":1,"cells":[{"center":[-1],"weight":1},{"center":[1],"weight":1}]}}"#,
        )
        .unwrap();
        let (psi, p) = s.build(0, Some(4096)).unwrap();
        assert_eq!(psi.len(), 2);
        assert!((born_probability(&psi, &p, "le_cut").unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_files() {
        assert!(
            ScenarioFile::from_json(r#"{"type":"finite_uniform","n":3,"labels":["A"]}"#)
                .unwrap()
                .build(0, None)
                .is_err()
        );
        assert!(ScenarioFile::from_json(r#"{"type":"nope"}"#).is_err());
        assert!(ScenarioFile::from_json(
            r#"{"type":"finite_uniform","n":1,"labels":["A"],"extra":1}"#
        )
        .is_err());
    }
}
