use rayon::prelude::*;
use serde::Serialize;

use super::consistency::counting_probability;
use super::sequence::{RefinementOrdering, RefinementSequence};
use crate::error::Result;
use crate::state::born_probabilities;

/// One (level, label) entry of a convergence study.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub alpha: String,
    pub count_prob: f64,
    pub born_prob: f64,
    pub abs_error: f64,
    /// `1 - sum_alpha count_prob` at this level, over all labels.
    pub deficit: f64,
    /// Error bound for this row (see [`ConvergenceReport`]).
    pub bound: f64,
}

/// Counting probabilities against Born targets, level by level.
///
/// For a label occupying `B` contiguous blocks of the cumulative-mass axis
/// with `E` block ends strictly inside it, the row bound is
/// `max(B + 1, E) 2^-n + 2^n eps_grid`. Under macrostate-major ordering
/// `B = 1` and the bound is `2 * 2^-n + 2^n eps_grid`.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub ordering: RefinementOrdering,
    pub n_max: u32,
    pub eps_grid: f64,
    pub tau: f64,
    pub blocks: Vec<(String, usize)>,
    pub rows: Vec<ConvergenceRow>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: u32,
    alpha: &'a str,
    count_prob: f64,
    born_prob: f64,
    abs_error: f64,
    deficit: f64,
}

impl ConvergenceReport {
    pub fn within_bound(&self) -> bool {
        self.rows.iter().all(|r| r.abs_error <= r.bound)
    }

    pub fn rows_at(&self, n: u32) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(move |r| r.n == n)
    }

    pub fn row(&self, n: u32, alpha: &str) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.n == n && r.alpha == alpha)
    }

    /// CSV with columns `n, alpha, count_prob, born_prob, abs_error, deficit`.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        for r in &self.rows {
            csv.serialize(CsvRow {
                n: r.n,
                alpha: &r.alpha,
                count_prob: r.count_prob,
                born_prob: r.born_prob,
                abs_error: r.abs_error,
                deficit: r.deficit,
            })?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Number of contiguous runs of `label` along the ordered support, and the
/// number of run ends strictly inside the axis.
pub fn label_blocks(seq: &RefinementSequence, label: usize) -> (usize, usize) {
    let labels = seq.ordered_labels();
    let len = labels.len();
    let mut blocks = 0;
    let mut inner_ends = 0;
    let mut pos = 0;
    while pos < len {
        if labels[pos] != label {
            pos += 1;
            continue;
        }
        let start = pos;
        while pos < len && labels[pos] == label {
            pos += 1;
        }
        blocks += 1;
        inner_ends += usize::from(start > 0) + usize::from(pos < len);
    }
    (blocks, inner_ends)
}

pub fn convergence_study(
    seq: &RefinementSequence,
    labels: &[String],
    tau: f64,
) -> Result<ConvergenceReport> {
    let partition = seq.partition();
    let born = born_probabilities(seq.psi(), partition)?;
    let all_labels = partition.labels();
    let mut targets = Vec::with_capacity(labels.len());
    let mut blocks = Vec::with_capacity(labels.len());
    for label in labels {
        let idx = partition.label_index(label)?;
        let runs = label_blocks(seq, idx);
        targets.push((label.clone(), born[idx].1, runs));
        blocks.push((label.clone(), runs.0));
    }
    let eps = seq.eps_grid();

    let per_level: Vec<Result<Vec<ConvergenceRow>>> = (0..=seq.n_max())
        .into_par_iter()
        .map(|n| {
            let counts = all_labels
                .iter()
                .map(|l| counting_probability(seq, n, l, tau))
                .collect::<Result<Vec<f64>>>()?;
            let deficit = (1.0 - counts.iter().sum::<f64>()).clamp(0.0, 1.0);
            let size = 1.0 / (1u64 << n) as f64;
            targets
                .iter()
                .map(|(label, born_prob, (b, ends))| {
                    let count_prob = counts[partition.label_index(label)?];
                    let multiplier = (b + 1).max(*ends) as f64;
                    Ok(ConvergenceRow {
                        n,
                        alpha: label.clone(),
                        count_prob,
                        born_prob: *born_prob,
                        abs_error: (count_prob - born_prob).abs(),
                        deficit,
                        bound: multiplier * size + eps / size,
                    })
                })
                .collect()
        })
        .collect();

    let mut rows = Vec::new();
    for level in per_level {
        rows.extend(level?);
    }
    Ok(ConvergenceReport {
        ordering: seq.ordering(),
        n_max: seq.n_max(),
        eps_grid: eps,
        tau,
        blocks,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::SampleGrid;
    use crate::oracle;
    use crate::refinement::{build_refinement, DEFAULT_TAU};
    use crate::scenarios::{gaussian_ket, random_ket};
    use crate::state::MacrostatePartition;
    use std::sync::Arc;

    #[test]
    fn single_label_counts_one_everywhere() {
        let g = Arc::new(SampleGrid::uniform(0.0, 1.0, 4096).unwrap());
        let psi = random_ket(4, &g, 8);
        let p = MacrostatePartition::single(g, "all");
        let n_max = crate::refinement::max_safe_depth(&psi).unwrap();
        let seq = build_refinement(&psi, &p, n_max, Default::default()).unwrap();
        let report = convergence_study(&seq, p.labels(), DEFAULT_TAU).unwrap();
        assert!(report
            .rows
            .iter()
            .all(|r| r.count_prob == 1.0 && r.deficit == 0.0));
    }

    #[test]
    fn gaussian_half_line_converges() {
        let g = Arc::new(SampleGrid::uniform(-8.0, 8.0, 1 << 16).unwrap());
        let psi = gaussian_ket(&g, 0.0, 1.0).unwrap();
        let p =
            MacrostatePartition::from_fn(g, &["le1", "gt1"], |x| usize::from(x[0] > 1.0)).unwrap();
        let seq = build_refinement(&psi, &p, 12, RefinementOrdering::MacrostateMajor).unwrap();
        let report = convergence_study(&seq, p.labels(), DEFAULT_TAU).unwrap();
        assert!(report.within_bound());
        let tail = oracle::normal_tail_simpson(1.0, 8.0);
        for (label, target) in [("le1", 1.0 - tail), ("gt1", tail)] {
            let row = report.row(12, label).unwrap();
            assert!((row.count_prob - target).abs() <= 1e-3, "{label}: {row:?}");
        }
        for n in 0..=12 {
            let deficit = report.rows_at(n).next().unwrap().deficit;
            assert!(deficit <= 1.0 / (1u64 << n) as f64 + 1e-15);
        }
    }

    #[test]
    fn coordinate_ordering_with_split_label_still_converges() {
        let g = Arc::new(SampleGrid::uniform(-1.0, 1.0, 1 << 14).unwrap());
        let psi = random_ket(21, &g, 32);
        let p =
            MacrostatePartition::from_fn(g, &["outer", "inner"], |x| usize::from(x[0].abs() < 0.3))
                .unwrap();
        let n_max = crate::refinement::max_safe_depth(&psi).unwrap();
        let seq = build_refinement(&psi, &p, n_max, RefinementOrdering::CoordinateMajor).unwrap();
        assert_eq!(label_blocks(&seq, 0), (2, 2));
        assert_eq!(label_blocks(&seq, 1), (1, 2));
        let report = convergence_study(&seq, p.labels(), DEFAULT_TAU).unwrap();
        assert!(report.within_bound());
        let last = report
            .rows_at(n_max)
            .map(|r| r.abs_error)
            .fold(0.0, f64::max);
        assert!(last < 4.0 / (1u64 << n_max) as f64 + seq.eps_grid());
    }

    #[test]
    fn csv_has_contract_columns() {
        let g = Arc::new(SampleGrid::uniform(0.0, 1.0, 1024).unwrap());
        let psi = random_ket(1, &g, 4);
        let p = MacrostatePartition::from_fn(g, &["a", "b"], |x| usize::from(x[0] > 0.5)).unwrap();
        let seq = build_refinement(&psi, &p, 3, Default::default()).unwrap();
        let report = convergence_study(&seq, p.labels(), DEFAULT_TAU).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,alpha,count_prob,born_prob,abs_error,deficit\n"));
        assert_eq!(text.lines().count(), 1 + 4 * 2);
        let json: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(json["rows"].as_array().unwrap().len(), 8);
    }
}
