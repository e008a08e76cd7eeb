use num_complex::Complex64;

use super::ket::Ket;
use super::partition::MacrostatePartition;
use crate::error::Result;
use crate::measure::compensated_sum;

/// `<psi|P_alpha|psi> = sum_{c in C_alpha} |psi_c|^2 w_c` for a unit state.
pub fn born_probability(psi: &Ket, partition: &MacrostatePartition, alpha: &str) -> Result<f64> {
    partition.ensure_compatible(psi)?;
    let idx = partition.label_index(alpha)?;
    psi.require_unit()?;
    Ok(label_mass(psi, partition, idx))
}

/// Born probabilities of every label, in label order.
pub fn born_probabilities(
    psi: &Ket,
    partition: &MacrostatePartition,
) -> Result<Vec<(String, f64)>> {
    partition.ensure_compatible(psi)?;
    psi.require_unit()?;
    Ok(partition
        .labels()
        .iter()
        .enumerate()
        .map(|(idx, name)| (name.clone(), label_mass(psi, partition, idx)))
        .collect())
}

fn label_mass(psi: &Ket, partition: &MacrostatePartition, idx: usize) -> f64 {
    compensated_sum(
        psi.cell_masses()
            .zip(partition.cell_labels())
            .filter(|(_, &l)| l == idx)
            .map(|(m, _)| m),
    )
}

/// `P_alpha |psi>`: `psi` on cells labeled `alpha`, zero elsewhere.
pub fn project(psi: &Ket, partition: &MacrostatePartition, alpha: &str) -> Result<Ket> {
    partition.ensure_compatible(psi)?;
    let idx = partition.label_index(alpha)?;
    let labels = partition.cell_labels();
    Ok(psi.restricted(|c| labels[c] == idx))
}

/// Index of the most probable label (first one on ties).
pub fn most_probable_label(psi: &Ket, partition: &MacrostatePartition) -> Result<usize> {
    let probs = born_probabilities(psi, partition)?;
    let mut best = 0;
    for (i, (_, p)) in probs.iter().enumerate() {
        if *p > probs[best].1 {
            best = i;
        }
    }
    Ok(best)
}

/// Multiplies every amplitude by `e^{i phase}`.
pub fn with_global_phase(psi: &Ket, phase: f64) -> Ket {
    psi.scaled(Complex64::from_polar(1.0, phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::measure::SampleGrid;
    use crate::oracle;
    use crate::scenarios::{gaussian_ket, random_ket};
    use crate::state::inner_product;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn halves(grid: &Arc<SampleGrid>) -> MacrostatePartition {
        MacrostatePartition::from_fn(grid.clone(), &["left", "right"], |x| {
            usize::from(x[0] > 0.0)
        })
        .unwrap()
    }

    #[test]
    fn contained_state_has_probability_one() {
        let g = Arc::new(SampleGrid::uniform(-8.0, 8.0, 256).unwrap());
        let psi = Ket::from_fn(g.clone(), |x| {
            Complex64::new(if x[0] < 0.0 { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap()
        .normalized()
        .unwrap();
        assert!((born_probability(&psi, &halves(&g), "left").unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn uniform_four_cells_count() {
        let g = Arc::new(SampleGrid::uniform(0.0, 4.0, 4).unwrap());
        let psi = Ket::from_real(g.clone(), &[0.5; 4]).unwrap();
        let p = MacrostatePartition::from_cell_names(g, &["A", "B", "B", "B"]).unwrap();
        assert_eq!(born_probability(&psi, &p, "A").unwrap(), 0.25);
        assert_eq!(born_probability(&psi, &p, "B").unwrap(), 0.75);
    }

    #[test]
    fn gaussian_tail_probability() {
        let g = Arc::new(SampleGrid::uniform(-8.0, 8.0, 1 << 16).unwrap());
        let psi = gaussian_ket(&g, 0.0, 1.0).unwrap();
        let p =
            MacrostatePartition::from_fn(g, &["le1", "gt1"], |x| usize::from(x[0] > 1.0)).unwrap();
        let expected = oracle::normal_tail_simpson(1.0, 8.0);
        assert!((born_probability(&psi, &p, "gt1").unwrap() - expected).abs() < 1e-3);
    }

    #[test]
    fn errors_for_unknown_label_and_non_unit() {
        let g = Arc::new(SampleGrid::uniform(-1.0, 1.0, 8).unwrap());
        let p = halves(&g);
        let psi = Ket::from_real(g, &[1.0; 8]).unwrap();
        assert!(matches!(
            born_probability(&psi, &p, "left"),
            Err(Error::NonUnit { .. })
        ));
        let unit = psi.normalized().unwrap();
        assert!(matches!(
            born_probability(&unit, &p, "middle"),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(
            project(&unit, &p, "middle"),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn projection_is_idempotent_complete_and_orthogonal() {
        let g = Arc::new(SampleGrid::uniform(-1.0, 1.0, 128).unwrap());
        let p = halves(&g);
        let psi = random_ket(7, &g, 4);
        let once = project(&psi, &p, "left").unwrap();
        let twice = project(&once, &p, "left").unwrap();
        assert_eq!(once.amplitudes(), twice.amplitudes());
        let sum = once.add(&project(&psi, &p, "right").unwrap()).unwrap();
        assert_eq!(sum.amplitudes(), psi.amplitudes());
        let left_only = project(&psi, &p, "left").unwrap();
        let zero = project(&left_only, &p, "right").unwrap();
        assert!(zero
            .amplitudes()
            .iter()
            .all(|a| *a == Complex64::new(0.0, 0.0)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn completeness_and_pythagoras(seed in any::<u64>(), labels in 1usize..6) {
            let g = Arc::new(SampleGrid::uniform(-1.0, 1.0, 200).unwrap());
            let names: Vec<String> = (0..labels).map(|i| format!("L{i}")).collect();
            let p = MacrostatePartition::from_fn(g.clone(), &names, |x| {
                (((x[0] + 1.0) * 37.0) as usize) % labels
            }).unwrap();
            let psi = random_ket(seed, &g, 1);
            let probs = born_probabilities(&psi, &p).unwrap();
            let total: f64 = probs.iter().map(|(_, q)| q).sum();
            prop_assert!((total - 1.0).abs() <= 1e-10);
            let mut pieces = 0.0;
            for (name, q) in &probs {
                let proj = project(&psi, &p, name).unwrap();
                let n2 = inner_product(&proj, &proj).unwrap().re;
                prop_assert!((n2 - q).abs() <= 1e-12);
                pieces += n2;
            }
            prop_assert!((pieces - psi.norm_sqr()).abs() <= 1e-12);
        }

        #[test]
        fn argmax_ignores_global_phase(seed in any::<u64>(), phase in -10.0f64..10.0) {
            let g = Arc::new(SampleGrid::uniform(-1.0, 1.0, 100).unwrap());
            let p = MacrostatePartition::from_fn(g.clone(), &["a", "b", "c"], |x| {
                ((x[0] + 1.0) * 1.5) as usize
            }).unwrap();
            let psi = random_ket(seed, &g, 8);
            let rotated = with_global_phase(&psi, phase);
            let before = born_probabilities(&psi, &p).unwrap();
            let after = born_probabilities(&rotated, &p).unwrap();
            for ((_, x), (_, y)) in before.iter().zip(&after) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
            prop_assert_eq!(
                most_probable_label(&psi, &p).unwrap(),
                most_probable_label(&rotated, &p).unwrap()
            );
        }
    }
}
