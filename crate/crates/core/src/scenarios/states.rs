use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::measure::SampleGrid;
use crate::state::Ket;

/// Gaussian packet whose probability density `|psi|^2` has mean `center` and
/// standard deviation `sigma`, normalized on the grid.
pub fn gaussian_ket(grid: &Arc<SampleGrid>, center: f64, sigma: f64) -> Result<Ket> {
    grid.require_1d()?;
    let inv = 1.0 / (4.0 * sigma * sigma);
    Ket::from_fn(grid.clone(), |x| {
        let d = x[0] - center;
        Complex64::new((-d * d * inv).exp(), 0.0)
    })?
    .normalized()
}

/// A seeded unit ket with independent standard-normal real and imaginary
/// parts, box-filtered over `smoothness` consecutive cells (0 or 1 disables
/// smoothing). The same seed and grid give bitwise-identical amplitudes.
pub fn random_ket(seed: u64, grid: &Arc<SampleGrid>, smoothness: usize) -> Ket {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<Complex64> = (0..grid.len())
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    let amplitudes = if smoothness > 1 {
        box_filter(&raw, smoothness)
    } else {
        raw
    };
    Ket::new(grid.clone(), amplitudes)
        .and_then(|k| k.normalized())
        .expect("gaussian draws are finite and not all zero")
}

/// Centered moving average, truncated at the ends.
fn box_filter(values: &[Complex64], width: usize) -> Vec<Complex64> {
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(Complex64::new(0.0, 0.0));
    for v in values {
        let last = *prefix.last().unwrap();
        prefix.push(last + v);
    }
    let half = width / 2;
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + width - half).min(values.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Seeded spin amplitudes `(a, b)`, uniform on the Bloch sphere.
pub fn random_spin_amplitudes(seed: u64) -> (Complex64, Complex64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cos_theta: f64 = 1.0 - 2.0 * rng.random::<f64>();
    let phi: f64 = std::f64::consts::TAU * rng.random::<f64>();
    let theta = cos_theta.clamp(-1.0, 1.0).acos();
    let a = Complex64::new((0.5 * theta).cos(), 0.0);
    let b = Complex64::from_polar((0.5 * theta).sin(), phi);
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::inner_product;

    #[test]
    fn random_ket_is_unit_and_deterministic() {
        let g = Arc::new(SampleGrid::uniform(0.0, 1.0, 1000).unwrap());
        for seed in [0, 1, 42, u64::MAX] {
            assert!((random_ket(seed, &g, 5).norm_sqr() - 1.0).abs() < 1e-10);
        }
        let a = random_ket(42, &g, 3);
        let b = random_ket(42, &g, 3);
        assert_eq!(a.amplitudes(), b.amplitudes());
    }

    #[test]
    fn independent_seeds_are_nearly_orthogonal() {
        let g = Arc::new(SampleGrid::uniform(-8.0, 8.0, 1 << 16).unwrap());
        let ip = inner_product(&random_ket(1, &g, 1), &random_ket(2, &g, 1)).unwrap();
        assert!(ip.norm() < 0.2, "{ip}");
    }

    #[test]
    fn smoothing_reduces_roughness() {
        let g = Arc::new(SampleGrid::uniform(0.0, 1.0, 4096).unwrap());
        let rough = |k: &Ket| {
            k.amplitudes()
                .windows(2)
                .map(|w| (w[1] - w[0]).norm_sqr())
                .sum::<f64>()
        };
        assert!(rough(&random_ket(3, &g, 16)) < 0.1 * rough(&random_ket(3, &g, 1)));
    }

    #[test]
    fn gaussian_is_normalized_and_centered() {
        let g = Arc::new(SampleGrid::uniform(-8.0, 8.0, 4096).unwrap());
        let k = gaussian_ket(&g, 1.5, 0.5).unwrap();
        assert!((k.norm_sqr() - 1.0).abs() < 1e-12);
        let mean: f64 = k
            .cell_masses()
            .enumerate()
            .map(|(c, m)| m * g.center(c)[0])
            .sum();
        assert!((mean - 1.5).abs() < 1e-9);
    }

    #[test]
    fn spin_amplitudes_are_normalized() {
        for seed in 0..100 {
            let (a, b) = random_spin_amplitudes(seed);
            assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
