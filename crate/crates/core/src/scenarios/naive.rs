use super::finite::LabelProbabilities;
use crate::error::{Error, Result};
use crate::refinement::{default_support_threshold, support};
use crate::state::{Ket, MacrostatePartition};

/// Fraction of support cells carrying each label, ignoring how much mass
/// each cell holds. Agrees with the Born rule only when `|psi|^2 w` is
/// constant on the support.
pub fn naive_branch_count(
    psi: &Ket,
    partition: &MacrostatePartition,
) -> Result<LabelProbabilities> {
    partition.ensure_compatible(psi)?;
    psi.require_unit()?;
    let cells = support(psi, default_support_threshold(psi));
    if cells.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut counts = vec![0usize; partition.labels().len()];
    for &c in cells.members() {
        counts[partition.cell_labels()[c]] += 1;
    }
    let total = cells.len() as f64;
    Ok(LabelProbabilities(
        partition
            .labels()
            .iter()
            .zip(counts)
            .map(|(l, k)| (l.clone(), k as f64 / total))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::SampleGrid;
    use crate::oracle;
    use crate::scenarios::{finite_uniform_state, gaussian_ket, FiniteCaseConfig};
    use crate::state::born_probability;
    use std::sync::Arc;

    #[test]
    fn unequal_two_cell_state_miscounts() {
        let g = Arc::new(SampleGrid::uniform(0.0, 2.0, 2).unwrap());
        let psi = Ket::from_real(g.clone(), &[0.9f64.sqrt(), 0.1f64.sqrt()]).unwrap();
        let p = MacrostatePartition::from_cell_names(g, &["A", "B"]).unwrap();
        let naive = naive_branch_count(&psi, &p).unwrap();
        assert_eq!(naive.get("A"), Some(0.5));
        assert_eq!(naive.get("B"), Some(0.5));
        let born = born_probability(&psi, &p, "A").unwrap();
        assert!((born - 0.9).abs() < 1e-15);
        assert!((born - 0.5).abs() >= 0.05);
    }

    #[test]
    fn uniform_case_agrees_with_born() {
        let (psi, p) =
            finite_uniform_state(&FiniteCaseConfig::new(&["A", "B", "B", "B"]).unwrap()).unwrap();
        let naive = naive_branch_count(&psi, &p).unwrap();
        assert_eq!(naive.get("A"), Some(0.25));
        assert_eq!(naive.get("B"), Some(0.75));
    }

    #[test]
    fn gaussian_off_center_cut_differs() {
        let g = Arc::new(SampleGrid::uniform(-8.0, 8.0, 1 << 12).unwrap());
        let psi = gaussian_ket(&g, 0.0, 1.0).unwrap();
        let p =
            MacrostatePartition::from_fn(g.clone(), &["le1", "gt1"], |x| usize::from(x[0] > 1.0))
                .unwrap();
        let naive = naive_branch_count(&psi, &p).unwrap().get("gt1").unwrap();
        let born = born_probability(&psi, &p, "gt1").unwrap();
        assert!((born - oracle::normal_tail_simpson(1.0, 8.0)).abs() < 1e-6);
        // oracle: every cell is in the support, so naive is the cell fraction
        let cells_above = (0..g.len()).filter(|&c| g.center(c)[0] > 1.0).count();
        assert_eq!(naive, cells_above as f64 / g.len() as f64);
        assert!((naive - born).abs() > 0.1);
    }

    #[test]
    fn zero_state_has_no_support() {
        let g = Arc::new(SampleGrid::uniform(0.0, 1.0, 4).unwrap());
        let p = MacrostatePartition::single(g.clone(), "all");
        assert!(naive_branch_count(&Ket::zero(g), &p).is_err());
    }
}
