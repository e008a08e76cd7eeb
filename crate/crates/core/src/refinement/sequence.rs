use std::ops::Range;

use num_complex::Complex64;
use serde::Serialize;

use super::support::{default_support_threshold, mu_prime, support};
use crate::error::{Error, Result};
use crate::measure::{compare_centers, cumulative_order, CellOrdering, CumulativeTable};
use crate::state::{Ket, MacrostatePartition};

/// Largest member-mass deviation from `2^-n` accepted as an exact dyadic
/// split when the depth guard is waived.
const EXACT_SPLIT_TOL: f64 = 1e-12;

/// Order in which support cells are laid along the cumulative-mass axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RefinementOrdering {
    /// By label (declaration order), then by coordinate: each `C_alpha` is one
    /// contiguous block.
    #[default]
    MacrostateMajor,
    /// By coordinate only; a label may occupy several blocks.
    CoordinateMajor,
}

#[derive(Clone, Debug)]
struct Level {
    /// `starts[k]..starts[k + 1]` are the ordered positions of member `k`.
    starts: Vec<usize>,
    masses: Vec<f64>,
}

/// Nested partitions `D_0, D_1, ..., D_{n_max}` of the support into `2^n`
/// members of (nearly) equal probability mass.
///
/// Support cells are ordered once and given normalized cumulative masses;
/// a cell belongs to member `k` of level `n` when its mass midpoint lies in
/// `[k 2^-n, (k + 1) 2^-n)`. Member `k` of level `n + 1` is therefore contained
/// in member `k / 2` of level `n`. Members are indexed from 0.
#[derive(Clone, Debug)]
pub struct RefinementSequence {
    psi: Ket,
    partition: MacrostatePartition,
    ordering: RefinementOrdering,
    table: CumulativeTable,
    labels: Vec<usize>,
    eps_grid: f64,
    levels: Vec<Level>,
}

/// The largest `n` with `2^n * eps <= 0.5` (0 when `eps > 0.5`).
pub fn max_safe_depth_for(eps_grid: f64) -> u32 {
    let mut n = 0u32;
    while n < 62 && ((1u64 << (n + 1)) as f64) * eps_grid <= 0.5 {
        n += 1;
    }
    n
}

/// Maximum refinement depth the guard allows for `psi` on its grid.
pub fn max_safe_depth(psi: &Ket) -> Result<u32> {
    let d = mu_prime(psi)?;
    let s = support(psi, default_support_threshold(psi));
    let table = cumulative_order(&d, &CellOrdering::Explicit(s.members().to_vec()))?;
    Ok(max_safe_depth_for(table.max_cell_mass()))
}

pub fn build_refinement(
    psi: &Ket,
    partition: &MacrostatePartition,
    n_max: u32,
    ordering: RefinementOrdering,
) -> Result<RefinementSequence> {
    partition.ensure_compatible(psi)?;
    let density = mu_prime(psi)?;
    let grid = psi.grid();
    let mut cells = support(psi, default_support_threshold(psi))
        .members()
        .to_vec();
    if cells.is_empty() {
        return Err(Error::EmptySupport);
    }
    let cell_labels = partition.cell_labels();
    match ordering {
        RefinementOrdering::MacrostateMajor => cells.sort_by(|&a, &b| {
            cell_labels[a]
                .cmp(&cell_labels[b])
                .then_with(|| compare_centers(grid, a, b))
        }),
        RefinementOrdering::CoordinateMajor => cells.sort_by(|&a, &b| compare_centers(grid, a, b)),
    }
    let table = cumulative_order(&density, &CellOrdering::Explicit(cells))?;
    let eps_grid = table.max_cell_mass();
    if n_max > 30 {
        return Err(Error::DepthGuard {
            requested: n_max,
            max_safe: max_safe_depth_for(eps_grid),
            eps_grid,
        });
    }

    let finest = 1usize << n_max;
    let finest_member: Vec<usize> = (0..table.len())
        .map(|pos| ((table.midpoint(pos) * finest as f64) as usize).min(finest - 1))
        .collect();
    let levels: Vec<Level> = (0..=n_max)
        .map(|n| {
            let shift = n_max - n;
            let count = 1usize << n;
            let mut starts = vec![0usize; count + 1];
            let mut masses = vec![0.0; count];
            for (pos, &m) in finest_member.iter().enumerate() {
                let k = m >> shift;
                starts[k + 1] = pos + 1;
                masses[k] += table.masses()[pos];
            }
            // members left empty start where the previous one ended
            for k in 1..=count {
                starts[k] = starts[k].max(starts[k - 1]);
            }
            Level { starts, masses }
        })
        .collect();

    let guard_ok = ((1u64 << n_max) as f64) * eps_grid <= 0.5;
    if !guard_ok && !exactly_dyadic(&levels) {
        return Err(Error::DepthGuard {
            requested: n_max,
            max_safe: max_safe_depth_for(eps_grid),
            eps_grid,
        });
    }

    let labels = table.cells().iter().map(|&c| cell_labels[c]).collect();
    Ok(RefinementSequence {
        psi: psi.clone(),
        partition: partition.clone(),
        ordering,
        table,
        labels,
        eps_grid,
        levels,
    })
}

/// Every member non-empty with mass `2^-n` up to rounding.
fn exactly_dyadic(levels: &[Level]) -> bool {
    levels.iter().enumerate().all(|(n, level)| {
        let target = 1.0 / (1u64 << n) as f64;
        level.starts.windows(2).all(|w| w[1] > w[0])
            && level
                .masses
                .iter()
                .all(|m| (m - target).abs() <= EXACT_SPLIT_TOL)
    })
}

/// `|n,k> = sqrt(2^n) psi` restricted to member `D_{n,k}`.
#[derive(Clone, Debug)]
pub struct BranchVector {
    pub level: u32,
    pub index: usize,
    pub ket: Ket,
    /// Ordered positions of the member's cells.
    pub positions: Range<usize>,
}

/// Boundary record of one member, for plotting.
#[derive(Clone, Debug, Serialize)]
pub struct MemberBoundary {
    pub n: u32,
    pub k: usize,
    /// `k 2^-n`.
    pub cut_nominal: f64,
    /// Cumulative mass at the member's first cell.
    pub cut_realized: f64,
    pub mass: f64,
    pub cells: usize,
    /// First center coordinate of the member's first cell.
    pub coord_start: Option<f64>,
}

impl RefinementSequence {
    pub fn psi(&self) -> &Ket {
        &self.psi
    }

    pub fn partition(&self) -> &MacrostatePartition {
        &self.partition
    }

    pub fn ordering(&self) -> RefinementOrdering {
        self.ordering
    }

    pub fn n_max(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    /// Largest single-cell normalized probability mass.
    pub fn eps_grid(&self) -> f64 {
        self.eps_grid
    }

    pub fn table(&self) -> &CumulativeTable {
        &self.table
    }

    /// Label index of each ordered support cell.
    pub fn ordered_labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn member_count(&self, n: u32) -> Result<usize> {
        self.level(n).map(|l| l.masses.len())
    }

    fn level(&self, n: u32) -> Result<&Level> {
        self.levels.get(n as usize).ok_or(Error::LevelOutOfRange {
            level: n,
            n_max: self.n_max(),
        })
    }

    pub fn member_positions(&self, n: u32, k: usize) -> Result<Range<usize>> {
        let level = self.level(n)?;
        if k >= level.masses.len() {
            return Err(Error::MemberOutOfRange { level: n, index: k });
        }
        Ok(level.starts[k]..level.starts[k + 1])
    }

    /// Grid indices of the cells of `D_{n,k}`.
    pub fn member_cells(&self, n: u32, k: usize) -> Result<&[usize]> {
        let range = self.member_positions(n, k)?;
        Ok(&self.table.cells()[range])
    }

    /// Normalized probability masses of all members of a level.
    pub fn member_masses(&self, n: u32) -> Result<&[f64]> {
        self.level(n).map(|l| l.masses.as_slice())
    }

    /// Index of the level-`n` member containing member `k` of level `n + 1`.
    pub fn parent(&self, n_plus_one: u32, k: usize) -> Result<usize> {
        if n_plus_one == 0 {
            return Err(Error::LevelOutOfRange {
                level: 0,
                n_max: self.n_max(),
            });
        }
        self.member_positions(n_plus_one, k)?;
        Ok(k / 2)
    }

    pub fn branch_vector(&self, n: u32, k: usize) -> Result<BranchVector> {
        let positions = self.member_positions(n, k)?;
        let scale = ((1u64 << n) as f64).sqrt();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.psi.len()];
        for &c in &self.table.cells()[positions.clone()] {
            amplitudes[c] = self.psi.amplitude(c) * scale;
        }
        Ok(BranchVector {
            level: n,
            index: k,
            ket: Ket::new(self.psi.grid().clone(), amplitudes)?,
            positions,
        })
    }

    /// `2^{-n/2} sum_k |n,k>`, which equals `psi` on the support.
    pub fn reconstruct(&self, n: u32) -> Result<Ket> {
        let count = self.member_count(n)?;
        let inv_scale = 1.0 / ((1u64 << n) as f64).sqrt();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.psi.len()];
        for k in 0..count {
            let branch = self.branch_vector(n, k)?;
            for &c in &self.table.cells()[branch.positions.clone()] {
                amplitudes[c] += branch.ket.amplitude(c) * inv_scale;
            }
        }
        Ket::new(self.psi.grid().clone(), amplitudes)
    }

    /// Boundary records for every member of every level.
    pub fn boundaries(&self) -> Vec<MemberBoundary> {
        let grid = self.psi.grid();
        let mut out = Vec::new();
        for (n, level) in self.levels.iter().enumerate() {
            let scale = 1.0 / (1u64 << n) as f64;
            for (k, &mass) in level.masses.iter().enumerate() {
                let (start, end) = (level.starts[k], level.starts[k + 1]);
                out.push(MemberBoundary {
                    n: n as u32,
                    k,
                    cut_nominal: k as f64 * scale,
                    cut_realized: self.table.lower(start.min(self.table.len() - 1)),
                    mass,
                    cells: end - start,
                    coord_start: (end > start).then(|| grid.center(self.table.cells()[start])[0]),
                });
            }
        }
        out
    }

    /// Writes `boundaries()` as CSV.
    pub fn write_boundaries_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        for b in self.boundaries() {
            csv.serialize(b)?;
        }
        csv.flush()?;
        Ok(())
    }
}
