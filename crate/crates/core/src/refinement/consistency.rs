use serde::Serialize;

use super::sequence::RefinementSequence;
use crate::error::Result;

/// Default tolerance on the outside mass of a consistent member, relative to
/// the member size `2^-n`.
pub const DEFAULT_TAU: f64 = 1e-9;

/// Members of level `n` carrying at most `tau 2^-n` probability mass outside
/// `C_alpha`.
#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyIndex {
    pub level: u32,
    pub label: String,
    pub tau: f64,
    pub members: Vec<usize>,
}

impl ConsistencyIndex {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn consistency_index(
    seq: &RefinementSequence,
    n: u32,
    alpha: &str,
    tau: f64,
) -> Result<ConsistencyIndex> {
    let idx = seq.partition().label_index(alpha)?;
    let count = seq.member_count(n)?;
    let limit = tau * (1.0 / (1u64 << n) as f64);
    let masses = seq.table().masses();
    let labels = seq.ordered_labels();
    let mut members = Vec::new();
    for k in 0..count {
        let outside: f64 = seq
            .member_positions(n, k)?
            .filter(|&pos| labels[pos] != idx)
            .map(|pos| masses[pos])
            .sum();
        if outside <= limit {
            members.push(k);
        }
    }
    Ok(ConsistencyIndex {
        level: n,
        label: alpha.to_string(),
        tau,
        members,
    })
}

/// `|M_{n,alpha}| 2^-n`.
pub fn counting_probability(
    seq: &RefinementSequence,
    n: u32,
    alpha: &str,
    tau: f64,
) -> Result<f64> {
    let index = consistency_index(seq, n, alpha, tau)?;
    Ok(index.len() as f64 / (1u64 << n) as f64)
}
