//! The uniformized measure `dmu~ = r dmu`.
//!
//! After gauge absorption the state is `sum_c |c> mu~_c`: every basis ket
//! enters with the same unit amplitude and the weighting sits in the measure.
//! The squared norm of the `alpha` part is then computed through the
//! reproducing kernel, `sum_{c'} <c|c'> mu~_{c'} = r_c`, followed by an outer
//! sum against `mu~` again. That route never squares `r` directly, and must
//! agree with the integral of `r^2 dmu` over `C_alpha`.

use std::sync::Arc;

use super::born::born_probability;
use super::ket::Ket;
use super::partition::MacrostatePartition;
use super::polar::{gauge_absorb, polar_decompose};
use crate::error::Result;
use crate::measure::{compensated_sum, integrate, SampleGrid};

/// The three per-cell measures attached to a state: the grid measure `mu`,
/// the uniformized measure `r mu`, and the probability measure `r^2 mu`.
#[derive(Clone, Debug)]
pub struct ThreeDensities {
    pub grid: Arc<SampleGrid>,
    pub mu: Vec<f64>,
    pub mu_tilde: Vec<f64>,
    pub mu_prime: Vec<f64>,
}

pub fn three_densities(psi: &Ket) -> ThreeDensities {
    let (real, _) = gauge_absorb(psi);
    let grid = psi.grid().clone();
    let mu = grid.weights().to_vec();
    let r: Vec<f64> = real.amplitudes().iter().map(|a| a.re).collect();
    let mu_tilde = r.iter().zip(&mu).map(|(r, w)| r * w).collect();
    let mu_prime = r.iter().zip(&mu).map(|(r, w)| r * r * w).collect();
    ThreeDensities {
        grid,
        mu,
        mu_tilde,
        mu_prime,
    }
}

/// Both sides of `|sum_{C_alpha} |c> mu~_c|^2 = integral_{C_alpha} r^2 dmu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformizedIdentity {
    pub lhs: f64,
    pub rhs: f64,
}

impl UniformizedIdentity {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

pub fn uniformized_identity_check(
    psi: &Ket,
    partition: &MacrostatePartition,
    alpha: &str,
) -> Result<UniformizedIdentity> {
    partition.ensure_compatible(psi)?;
    let idx = partition.label_index(alpha)?;
    psi.require_unit()?;
    let densities = three_densities(psi);
    let labels = partition.cell_labels();
    let weights = &densities.mu;

    // The basis ket of cell c is e_c / w_c, so <c|c'> = delta_{cc'} / w_c and
    // sum_{c'} <c|c'> mu~_{c'} = mu~_c / w_c = r_c.
    let lhs = compensated_sum((0..weights.len()).filter(|&c| labels[c] == idx).map(|c| {
        let reproduced = densities.mu_tilde[c] / weights[c];
        reproduced * densities.mu_tilde[c]
    }));

    let r_squared = polar_decompose(psi).probability_density();
    let rhs = integrate(&r_squared, &partition.cells_of(alpha)?)?;
    Ok(UniformizedIdentity { lhs, rhs })
}

/// Identity check together with the Born probability both sides should equal.
pub fn uniformized_against_born(
    psi: &Ket,
    partition: &MacrostatePartition,
    alpha: &str,
) -> Result<(UniformizedIdentity, f64)> {
    let identity = uniformized_identity_check(psi, partition, alpha)?;
    Ok((identity, born_probability(psi, partition, alpha)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scenarios::random_ket;
    use crate::state::project;
    use num_complex::Complex64;

    fn grid(n: usize) -> Arc<SampleGrid> {
        Arc::new(SampleGrid::uniform(-1.0, 1.0, n).unwrap())
    }

    #[test]
    fn whole_space_gives_one() {
        let g = grid(300);
        let psi = random_ket(5, &g, 2);
        let p = MacrostatePartition::single(g, "all");
        let id = uniformized_identity_check(&psi, &p, "all").unwrap();
        assert!((id.lhs - 1.0).abs() < 1e-10 && (id.rhs - 1.0).abs() < 1e-10);
    }

    #[test]
    fn empty_amplitude_region_gives_zero() {
        let g = grid(10);
        let psi = Ket::from_fn(g.clone(), |x| {
            Complex64::new(0.0, if x[0] < 0.0 { 1.0 } else { 0.0 })
        })
        .unwrap()
        .normalized()
        .unwrap();
        let p = MacrostatePartition::from_fn(g, &["l", "r"], |x| usize::from(x[0] > 0.0)).unwrap();
        let id = uniformized_identity_check(&psi, &p, "r").unwrap();
        assert_eq!((id.lhs, id.rhs), (0.0, 0.0));
    }

    #[test]
    fn left_half_matches_born() {
        let g = grid(4096);
        let psi = random_ket(2024, &g, 16);
        let p = MacrostatePartition::from_fn(g, &["left", "right"], |x| usize::from(x[0] >= 0.0))
            .unwrap();
        let (id, born) = uniformized_against_born(&psi, &p, "left").unwrap();
        assert!(id.gap() <= 1e-12);
        assert!((id.lhs - born).abs() <= 1e-12);
        assert!((id.rhs - born).abs() <= 1e-12);
    }

    #[test]
    fn three_densities_relation() {
        let g = grid(256);
        let psi = random_ket(3, &g, 1);
        let p = MacrostatePartition::from_fn(g.clone(), &["a", "b"], |x| usize::from(x[0] > 0.5))
            .unwrap();
        let d = three_densities(&psi);
        for c in 0..g.len() {
            let r = psi.amplitude(c).norm();
            assert_eq!(d.mu_tilde[c], r * g.weight(c));
        }
        // integral of r^2 over C_alpha and the Born probability are the same sum
        let r2 = polar_decompose(&psi).probability_density();
        for label in ["a", "b"] {
            let lhs = integrate(&r2, &p.cells_of(label).unwrap()).unwrap();
            let born = born_probability(&psi, &p, label).unwrap();
            assert!((lhs - born).abs() <= 1e-15);
            // norm of the gauge-absorbed projection carries the same value
            let (real, _) = gauge_absorb(&psi);
            assert!((project(&real, &p, label).unwrap().norm_sqr() - born).abs() <= 1e-12);
        }
    }

    #[test]
    fn unknown_label() {
        let g = grid(4);
        let psi = random_ket(1, &g, 1);
        let p = MacrostatePartition::single(g, "all");
        assert!(matches!(
            uniformized_identity_check(&psi, &p, "none"),
            Err(Error::UnknownLabel(_))
        ));
    }
}
