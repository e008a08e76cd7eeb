use crate::error::Result;
use crate::measure::{DensityField, MeasurableSubset};
use crate::state::Ket;

/// Relative cut used by [`default_support_threshold`].
pub const SUPPORT_RELATIVE_THRESHOLD: f64 = 1e-15;

/// `1e-15` times the largest single-cell probability mass.
pub fn default_support_threshold(psi: &Ket) -> f64 {
    SUPPORT_RELATIVE_THRESHOLD * psi.cell_masses().fold(0.0, f64::max)
}

/// Cells whose probability mass `|psi_c|^2 w_c` exceeds `threshold`.
pub fn support(psi: &Ket, threshold: f64) -> MeasurableSubset {
    let members: Vec<usize> = psi
        .cell_masses()
        .enumerate()
        .filter(|&(_, m)| m > threshold)
        .map(|(c, _)| c)
        .collect();
    MeasurableSubset::new(psi.grid().clone(), members).expect("indices come from the grid")
}

/// The state-induced density `|psi|^2` with respect to the grid measure.
pub fn mu_prime(psi: &Ket) -> Result<DensityField> {
    psi.require_unit()?;
    DensityField::new(
        psi.grid().clone(),
        psi.amplitudes().iter().map(|a| a.norm_sqr()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::measure::{integrate, SampleGrid};
    use crate::scenarios::gaussian_ket;
    use num_complex::Complex64;
    use std::sync::Arc;

    fn grid(n: usize) -> Arc<SampleGrid> {
        Arc::new(SampleGrid::uniform(-8.0, 8.0, n).unwrap())
    }

    #[test]
    fn exact_zeros_are_excluded() {
        let g = grid(64);
        let psi = Ket::from_fn(g, |x| {
            Complex64::new(if x[0] < 0.0 { 0.3 } else { 0.0 }, 0.0)
        })
        .unwrap();
        assert_eq!(
            support(&psi, 0.0).members(),
            (0..32).collect::<Vec<_>>().as_slice()
        );
    }

    #[test]
    fn positive_gaussian_has_full_support() {
        let g = grid(1024);
        let psi = gaussian_ket(&g, 0.0, 1.0).unwrap();
        assert_eq!(support(&psi, 0.0).len(), 1024);
    }

    #[test]
    fn default_threshold_keeps_all_but_negligible_mass() {
        let g = grid(1 << 16);
        let psi = gaussian_ket(&g, 0.0, 1.0).unwrap();
        let s = support(&psi, default_support_threshold(&psi));
        let m = s.members();
        assert!(
            m.windows(2).all(|w| w[1] == w[0] + 1),
            "support is contiguous"
        );
        let outside: f64 = psi
            .cell_masses()
            .enumerate()
            .filter(|(c, _)| !s.contains(*c))
            .map(|(_, x)| x)
            .sum();
        assert!(outside <= 1e-12);
    }

    #[test]
    fn narrow_packet_support_is_central_block() {
        let g = grid(1 << 12);
        let psi = gaussian_ket(&g, 0.0, 0.25).unwrap();
        let s = support(&psi, default_support_threshold(&psi));
        let m = s.members();
        assert!(m.len() < g.len());
        assert!(m.windows(2).all(|w| w[1] == w[0] + 1));
        assert!(g.center(m[0])[0] < 0.0 && g.center(*m.last().unwrap())[0] > 0.0);
    }

    #[test]
    fn mu_prime_of_unit_state() {
        let g = grid(2048);
        let psi = gaussian_ket(&g, 0.5, 0.7).unwrap();
        let d = mu_prime(&psi).unwrap();
        let total = integrate(&d, &support(&psi, 0.0)).unwrap();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mu_prime_uniform_and_split() {
        let g = Arc::new(SampleGrid::uniform(0.0, 1.0, 8).unwrap());
        let psi = Ket::from_real(g.clone(), &[1.0; 8]).unwrap();
        let d = mu_prime(&psi).unwrap();
        assert!(d.cell_masses().all(|m| (m - 0.125).abs() < 1e-15));

        let raw = Ket::from_fn(g.clone(), |x| {
            Complex64::new(
                if x[0] < 0.5 {
                    0.3f64.sqrt()
                } else {
                    0.7f64.sqrt()
                } * 2f64.sqrt(),
                0.0,
            )
        })
        .unwrap()
        .normalized()
        .unwrap();
        let d = mu_prime(&raw).unwrap();
        let left = MeasurableSubset::from_predicate(g, |x| x[0] < 0.5);
        assert!((integrate(&d, &left).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn mu_prime_requires_unit() {
        let psi = Ket::from_real(grid(4), &[1.0; 4]).unwrap();
        assert!(matches!(mu_prime(&psi), Err(Error::NonUnit { .. })));
    }
}
