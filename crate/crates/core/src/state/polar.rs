//! Polar form of a wavefunction and absorption of its phase into the basis.
//!
//! Rewriting `psi = r e^{i theta}` and substituting `|c> -> e^{i theta_c} |c>`
//! leaves a state with real non-negative coefficients `r`. The phases are kept
//! in a [`GaugeRecord`], one U(1) element per configuration.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::ket::Ket;
use crate::error::Result;
use crate::measure::{DensityField, SampleGrid};

/// Modulus and phase per cell. `theta` lies in `(-pi, pi]` and is 0 wherever
/// `r` is 0.
#[derive(Clone, Debug)]
pub struct PolarForm {
    grid: Arc<SampleGrid>,
    r: Vec<f64>,
    theta: Vec<f64>,
}

impl PolarForm {
    pub fn grid(&self) -> &Arc<SampleGrid> {
        &self.grid
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// `r_c e^{i theta_c}` at every cell.
    pub fn recompose(&self) -> Ket {
        let amplitudes = self
            .r
            .iter()
            .zip(&self.theta)
            .map(|(&r, &t)| Complex64::from_polar(r, t))
            .collect();
        Ket::new(self.grid.clone(), amplitudes).expect("finite polar components")
    }

    /// `r` as a density with respect to the grid measure.
    pub fn modulus_density(&self) -> DensityField {
        DensityField::new(self.grid.clone(), self.r.clone()).expect("moduli are non-negative")
    }

    /// `r^2`, the probability density.
    pub fn probability_density(&self) -> DensityField {
        DensityField::new(self.grid.clone(), self.r.iter().map(|r| r * r).collect())
            .expect("squares are non-negative")
    }
}

fn canonical_phase(a: Complex64) -> f64 {
    if a.re == 0.0 && a.im == 0.0 {
        return 0.0;
    }
    let t = a.im.atan2(a.re);
    if t <= -PI {
        PI
    } else {
        t
    }
}

pub fn polar_decompose(psi: &Ket) -> PolarForm {
    let (r, theta) = psi
        .amplitudes()
        .iter()
        .map(|&a| (a.norm(), canonical_phase(a)))
        .unzip();
    PolarForm {
        grid: psi.grid().clone(),
        r,
        theta,
    }
}

/// Per-configuration U(1) phases absorbed from a state.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeRecord {
    theta: Vec<f64>,
}

impl GaugeRecord {
    pub fn identity(cells: usize) -> Self {
        Self {
            theta: vec![0.0; cells],
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.theta.iter().all(|&t| t == 0.0)
    }

    /// Undoes the absorption: multiplies each amplitude by `e^{i theta_c}`.
    pub fn restore(&self, psi: &Ket) -> Result<Ket> {
        let amplitudes = psi
            .amplitudes()
            .iter()
            .zip(&self.theta)
            .map(|(&a, &t)| a * Complex64::from_polar(1.0, t))
            .collect();
        Ket::new(psi.grid().clone(), amplitudes)
    }
}

/// Moves the phase of every amplitude into a gauge record, returning the real
/// non-negative state `r`.
pub fn gauge_absorb(psi: &Ket) -> (Ket, GaugeRecord) {
    let polar = polar_decompose(psi);
    let real = Ket::from_real(polar.grid.clone(), &polar.r).expect("finite moduli");
    (real, GaugeRecord { theta: polar.theta })
}
