use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::grid::{ensure_grid_id, ensure_same_grid, SampleGrid};
use super::sum::compensated_sum;
use crate::error::{Error, Result};

/// A non-negative density with respect to the grid measure, one value per cell.
#[derive(Clone, Debug)]
pub struct DensityField {
    grid: Arc<SampleGrid>,
    values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityDocument {
    pub grid_id: String,
    pub values: Vec<f64>,
}

impl DensityField {
    pub fn new(grid: Arc<SampleGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidDensity(format!(
                "{} values for a grid of {} cells",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::NonFinite(format!(
                "density value at cell {i} is NaN"
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidDensity(format!(
                "value {} at cell {i} is not finite and non-negative",
                values[i]
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every cell center.
    pub fn from_fn(grid: Arc<SampleGrid>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(grid.center(i))).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Arc<SampleGrid>, value: f64) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![value; n])
    }

    pub fn grid(&self) -> &Arc<SampleGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mass `values[c] * w_c` carried by each cell.
    pub fn cell_masses(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(v, w)| v * w)
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.cell_masses())
    }

    pub fn to_document(&self) -> DensityDocument {
        DensityDocument {
            grid_id: self.grid.id().to_string(),
            values: self.values.clone(),
        }
    }

    pub fn from_document(grid: Arc<SampleGrid>, doc: DensityDocument) -> Result<Self> {
        ensure_grid_id(&grid, &doc.grid_id)?;
        Self::new(grid, doc.values)
    }
}

/// A set of cell indices of one grid. Members are kept sorted and unique.
#[derive(Clone, Debug)]
pub struct MeasurableSubset {
    grid: Arc<SampleGrid>,
    members: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubsetDocument {
    pub grid_id: String,
    pub members: Vec<usize>,
}

impl MeasurableSubset {
    pub fn new(grid: Arc<SampleGrid>, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        for &m in &members {
            grid.check_index(m)?;
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { grid, members })
    }

    pub fn empty(grid: Arc<SampleGrid>) -> Self {
        Self {
            grid,
            members: Vec::new(),
        }
    }

    pub fn all(grid: Arc<SampleGrid>) -> Self {
        let members = (0..grid.len()).collect();
        Self { grid, members }
    }

    /// Cells whose center satisfies `keep`.
    pub fn from_predicate(grid: Arc<SampleGrid>, keep: impl Fn(&[f64]) -> bool) -> Self {
        let members = (0..grid.len()).filter(|&i| keep(grid.center(i))).collect();
        Self { grid, members }
    }

    pub fn grid(&self) -> &Arc<SampleGrid> {
        &self.grid
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.members.binary_search(&cell).is_ok()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.members.iter().all(|&m| !other.contains(m))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Self::new(
            self.grid.clone(),
            self.members.iter().chain(&other.members).copied(),
        )
    }

    pub fn complement(&self) -> Self {
        let members = (0..self.grid.len())
            .filter(|&i| !self.contains(i))
            .collect();
        Self {
            grid: self.grid.clone(),
            members,
        }
    }

    pub fn to_document(&self) -> SubsetDocument {
        SubsetDocument {
            grid_id: self.grid.id().to_string(),
            members: self.members.clone(),
        }
    }

    pub fn from_document(grid: Arc<SampleGrid>, doc: SubsetDocument) -> Result<Self> {
        ensure_grid_id(&grid, &doc.grid_id)?;
        Self::new(grid, doc.members)
    }
}

/// `sum_{c in subset} values[c] * w_c`.
pub fn integrate(density: &DensityField, subset: &MeasurableSubset) -> Result<f64> {
    ensure_same_grid(density.grid(), subset.grid())?;
    let weights = density.grid.weights();
    if let Some(&c) = subset
        .members()
        .iter()
        .find(|&&c| density.values[c].is_nan())
    {
        return Err(Error::NonFinite(format!(
            "density value at cell {c} is NaN"
        )));
    }
    let total = compensated_sum(
        subset
            .members()
            .iter()
            .map(|&c| density.values[c] * weights[c]),
    );
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::NonFinite("integral overflows".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn unit_grid(n: usize) -> Arc<SampleGrid> {
        Arc::new(SampleGrid::uniform(0.0, 1.0, n).unwrap())
    }

    #[test]
    fn uniform_mass_of_first_quarter() {
        let g = unit_grid(1000);
        let d = DensityField::constant(g.clone(), 1.0).unwrap();
        let s = MeasurableSubset::from_predicate(g, |x| x[0] <= 0.25);
        assert!((integrate(&d, &s).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn gaussian_tail_matches_quadrature_oracle() {
        let g = Arc::new(SampleGrid::uniform(-8.0, 8.0, 1 << 16).unwrap());
        let d = DensityField::from_fn(g.clone(), |x| oracle::normal_pdf(x[0])).unwrap();
        let s = MeasurableSubset::from_predicate(g, |x| x[0] > 1.0);
        let expected = oracle::normal_tail_simpson(1.0, 8.0);
        assert!((expected - 0.15866).abs() < 1e-5);
        assert!((integrate(&d, &s).unwrap() - expected).abs() < 1e-3);
    }

    #[test]
    fn empty_subset_integrates_to_zero() {
        let g = unit_grid(16);
        let d = DensityField::constant(g.clone(), 3.5).unwrap();
        assert_eq!(integrate(&d, &MeasurableSubset::empty(g)).unwrap(), 0.0);
    }

    #[test]
    fn grid_mismatch_and_nan_are_errors() {
        let d = DensityField::constant(unit_grid(8), 1.0).unwrap();
        let s = MeasurableSubset::all(unit_grid(9));
        assert!(matches!(integrate(&d, &s), Err(Error::GridMismatch { .. })));
        let mut values = vec![1.0; 8];
        values[3] = f64::NAN;
        assert!(matches!(
            DensityField::new(unit_grid(8), values),
            Err(Error::NonFinite(_))
        ));
        assert!(DensityField::new(unit_grid(8), vec![-1.0; 8]).is_err());
        assert!(DensityField::new(unit_grid(8), vec![1.0; 7]).is_err());
    }

    #[test]
    fn subset_rejects_out_of_range_and_dedups() {
        let g = unit_grid(4);
        assert!(MeasurableSubset::new(g.clone(), [0, 4]).is_err());
        let s = MeasurableSubset::new(g, [3, 1, 3, 1]).unwrap();
        assert_eq!(s.members(), &[1, 3]);
    }

    #[test]
    fn documents_reattach_only_to_their_grid() {
        let g = unit_grid(8);
        let d = DensityField::constant(g.clone(), 2.0).unwrap();
        let doc = d.to_document();
        assert!(DensityField::from_document(g.clone(), doc.clone()).is_ok());
        assert!(DensityField::from_document(unit_grid(9), doc).is_err());
        let s = MeasurableSubset::new(g.clone(), [1, 2]).unwrap();
        let json = serde_json::to_string(&s.to_document()).unwrap();
        let back =
            MeasurableSubset::from_document(g, serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.members(), s.members());
    }

    proptest! {
        #[test]
        fn additivity_and_monotonicity(
            values in prop::collection::vec(0.0f64..10.0, 64),
            mask in prop::collection::vec(0u8..3, 64),
        ) {
            let g = unit_grid(64);
            let d = DensityField::new(g.clone(), values).unwrap();
            let a = MeasurableSubset::new(g.clone(), (0..64).filter(|&i| mask[i] == 1)).unwrap();
            let b = MeasurableSubset::new(g.clone(), (0..64).filter(|&i| mask[i] == 2)).unwrap();
            let ab = a.union(&b).unwrap();
            let (ia, ib, iab) = (
                integrate(&d, &a).unwrap(),
                integrate(&d, &b).unwrap(),
                integrate(&d, &ab).unwrap(),
            );
            prop_assert!((iab - (ia + ib)).abs() <= 1e-12 * iab.max(1e-300));
            prop_assert!(ia <= iab + 1e-15);
            prop_assert!(ib <= iab + 1e-15);
        }
    }
}
