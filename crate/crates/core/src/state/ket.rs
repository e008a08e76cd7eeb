use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{compensated_sum, ensure_grid_id, ensure_same_grid, SampleGrid};

/// `|<psi|psi> - 1|` allowed for a state treated as unit.
pub const UNIT_TOLERANCE: f64 = 1e-10;

/// A wavefunction sampled at cell centers.
///
/// Amplitudes follow the continuum-normalized convention: inner products carry
/// the cell weight, `<a|b> = sum_c conj(a_c) b_c w_c`, so the basis ket of a
/// cell is its indicator divided by `w_c` and is never stored.
#[derive(Clone, Debug)]
pub struct Ket {
    grid: Arc<SampleGrid>,
    amplitudes: Vec<Complex64>,
}

/// `{grid_id, amplitudes: [re0, im0, re1, im1, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KetDocument {
    pub grid_id: String,
    pub amplitudes: Vec<f64>,
}

impl Ket {
    pub fn new(grid: Arc<SampleGrid>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} amplitudes for a grid of {} cells",
                amplitudes.len(),
                grid.len()
            )));
        }
        if let Some(i) = amplitudes.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite(format!("amplitude at cell {i}")));
        }
        Ok(Self { grid, amplitudes })
    }

    pub fn zero(grid: Arc<SampleGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            amplitudes: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Samples `f` at every cell center.
    pub fn from_fn(grid: Arc<SampleGrid>, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let amplitudes = (0..grid.len()).map(|i| f(grid.center(i))).collect();
        Self::new(grid, amplitudes)
    }

    pub fn from_real(grid: Arc<SampleGrid>, values: &[f64]) -> Result<Self> {
        Self::new(
            grid,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn grid(&self) -> &Arc<SampleGrid> {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, cell: usize) -> Complex64 {
        self.amplitudes[cell]
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Probability mass `|psi_c|^2 w_c` of each cell.
    pub fn cell_masses(&self) -> impl Iterator<Item = f64> + '_ {
        self.amplitudes
            .iter()
            .zip(self.grid.weights())
            .map(|(a, w)| a.norm_sqr() * w)
    }

    pub fn norm_sqr(&self) -> f64 {
        compensated_sum(self.cell_masses())
    }

    pub fn is_unit(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= UNIT_TOLERANCE
    }

    pub fn require_unit(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() <= UNIT_TOLERANCE {
            Ok(())
        } else {
            Err(Error::NonUnit { norm_sqr })
        }
    }

    /// Rescales to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm.is_nan() || norm <= 0.0 {
            return Err(Error::ZeroMass);
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Keeps amplitudes where `keep(cell)` holds and zeroes the rest.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, &a)| if keep(i) { a } else { Complex64::new(0.0, 0.0) })
            .collect();
        Self {
            grid: self.grid.clone(),
            amplitudes,
        }
    }

    pub fn to_document(&self) -> KetDocument {
        KetDocument {
            grid_id: self.grid.id().to_string(),
            amplitudes: self.amplitudes.iter().flat_map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn from_document(grid: Arc<SampleGrid>, doc: KetDocument) -> Result<Self> {
        ensure_grid_id(&grid, &doc.grid_id)?;
        if doc.amplitudes.len() % 2 != 0 {
            return Err(Error::InvalidGrid(
                "interleaved amplitude array has odd length".into(),
            ));
        }
        let amplitudes = doc
            .amplitudes
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        Self::new(grid, amplitudes)
    }
}

/// `<a|b> = sum_c conj(a_c) b_c w_c`.
pub fn inner_product(a: &Ket, b: &Ket) -> Result<Complex64> {
    ensure_same_grid(&a.grid, &b.grid)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .zip(a.grid.weights())
        .map(|((x, y), w)| x.conj() * y * w)
        .sum())
}
