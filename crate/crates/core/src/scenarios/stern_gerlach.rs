use std::sync::Arc;

use num_complex::Complex64;

use super::states::gaussian_ket;
use crate::error::{Error, Result};
use crate::measure::SampleGrid;
use crate::state::{Ket, MacrostatePartition};

pub const UP_LABEL: &str = "up";
pub const DOWN_LABEL: &str = "down";
/// Allowed deviation of `|a|^2 + |b|^2` from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;
/// Minimum separation of the two packet centers, in units of `sigma`.
pub const MIN_SEPARATION_SIGMAS: f64 = 6.0;

/// Spin amplitudes and the screen geometry of the two deflected packets.
#[derive(Clone, Debug)]
pub struct SternGerlachConfig {
    pub a: Complex64,
    pub b: Complex64,
    pub screen: Arc<SampleGrid>,
    pub sigma: f64,
    pub u_center: f64,
    pub d_center: f64,
}

impl SternGerlachConfig {
    pub fn validate(&self) -> Result<()> {
        self.screen.require_1d()?;
        let norm = self.a.norm_sqr() + self.b.norm_sqr();
        if norm.is_nan() || (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidScenario(format!(
                "|a|^2 + |b|^2 = {norm}, expected 1"
            )));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "sigma must be > 0, got {}",
                self.sigma
            )));
        }
        if !(self.u_center.is_finite() && self.d_center.is_finite()) {
            return Err(Error::InvalidScenario(
                "packet centers must be finite".into(),
            ));
        }
        let gap = (self.u_center - self.d_center).abs();
        if gap < MIN_SEPARATION_SIGMAS * self.sigma {
            return Err(Error::InvalidScenario(format!(
                "regions overlap: |u - d| = {gap} < {MIN_SEPARATION_SIGMAS} sigma = {}",
                MIN_SEPARATION_SIGMAS * self.sigma
            )));
        }
        Ok(())
    }
}

/// Two copies of a 1-D screen, one per spin sheet. Cell `i` is `(x_i, +1)`
/// and cell `len + i` is `(x_i, -1)`.
pub fn spin_sheet_grid(screen: &SampleGrid) -> Result<SampleGrid> {
    screen.require_1d()?;
    let n = screen.len();
    let mut centers = Vec::with_capacity(4 * n);
    for spin in [1.0, -1.0] {
        for i in 0..n {
            centers.push(screen.center(i)[0]);
            centers.push(spin);
        }
    }
    let weights = [screen.weights(), screen.weights()].concat();
    SampleGrid::from_parts(2, centers, weights)
}

/// `a g_U(x)|up> + b g_D(x)|down>` on the two-sheet grid, partitioned by sheet.
pub fn stern_gerlach_state(config: &SternGerlachConfig) -> Result<(Ket, MacrostatePartition)> {
    config.validate()?;
    let g_u = gaussian_ket(&config.screen, config.u_center, config.sigma)?;
    let g_d = gaussian_ket(&config.screen, config.d_center, config.sigma)?;
    let grid = Arc::new(spin_sheet_grid(&config.screen)?);
    let amplitudes = g_u
        .amplitudes()
        .iter()
        .map(|&g| config.a * g)
        .chain(g_d.amplitudes().iter().map(|&g| config.b * g))
        .collect();
    let psi = Ket::new(grid.clone(), amplitudes)?;
    let partition =
        MacrostatePartition::from_fn(grid, &[UP_LABEL, DOWN_LABEL], |x| usize::from(x[1] < 0.0))?;
    Ok((psi, partition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refinement::{
        build_refinement, counting_probability, RefinementOrdering, DEFAULT_TAU,
    };
    use crate::scenarios::random_spin_amplitudes;
    use crate::state::born_probability;

    fn config(a: Complex64, b: Complex64, cells: usize) -> SternGerlachConfig {
        SternGerlachConfig {
            a,
            b,
            screen: Arc::new(SampleGrid::uniform(-8.0, 8.0, cells).unwrap()),
            sigma: 1.0,
            u_center: 3.5,
            d_center: -3.5,
        }
    }

    #[test]
    fn pure_and_balanced_spins() {
        let one = Complex64::new(1.0, 0.0);
        let (psi, p) = stern_gerlach_state(&config(one, Complex64::new(0.0, 0.0), 1024)).unwrap();
        assert!((born_probability(&psi, &p, UP_LABEL).unwrap() - 1.0).abs() <= 1e-12);

        let h = Complex64::new(0.5f64.sqrt(), 0.0);
        let (psi, p) =
            stern_gerlach_state(&config(h, Complex64::new(0.0, 0.5f64.sqrt()), 1024)).unwrap();
        assert!((born_probability(&psi, &p, UP_LABEL).unwrap() - 0.5).abs() <= 1e-12);
        assert!((born_probability(&psi, &p, DOWN_LABEL).unwrap() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = config(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0), 64);
        assert!(matches!(
            stern_gerlach_state(&c),
            Err(Error::InvalidScenario(_))
        ));
        c.b = Complex64::new(0.0, 0.0);
        c.d_center = 3.5 - 5.9;
        assert!(matches!(
            stern_gerlach_state(&c),
            Err(Error::InvalidScenario(_))
        ));
        c.d_center = -3.5;
        c.sigma = 0.0;
        assert!(stern_gerlach_state(&c).is_err());
    }

    #[test]
    fn seeded_draws_reproduce_region_masses() {
        for seed in 0..20 {
            let (a, b) = random_spin_amplitudes(seed);
            let (psi, p) = stern_gerlach_state(&config(a, b, 4096)).unwrap();
            assert!((born_probability(&psi, &p, UP_LABEL).unwrap() - a.norm_sqr()).abs() <= 1e-10);
            assert!(
                (born_probability(&psi, &p, DOWN_LABEL).unwrap() - b.norm_sqr()).abs() <= 1e-10
            );
        }
    }

    #[test]
    fn counting_at_depth_twelve() {
        let a = Complex64::new(0.3f64.sqrt(), 0.0);
        let b = Complex64::new(0.0, 0.7f64.sqrt());
        let (psi, p) = stern_gerlach_state(&config(a, b, 1 << 16)).unwrap();
        let seq = build_refinement(&psi, &p, 12, RefinementOrdering::MacrostateMajor).unwrap();
        let up = counting_probability(&seq, 12, UP_LABEL, DEFAULT_TAU).unwrap();
        assert!((up - 0.3).abs() <= 1.5e-3, "{up}");
    }
}
