use serde::{Deserialize, Serialize};

use super::{M1Verdict, M2Verdict};

/// Differences above this many references count as a large disagreement.
pub const LARGE_DISAGREEMENT: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementRecord {
    pub agree: bool,
    /// `|ghost_m2| - |ghost_m1|`.
    pub delta: i64,
    pub large_disagreement: bool,
}

pub fn compare_verdicts(m1: &M1Verdict, m2: &M2Verdict) -> AgreementRecord {
    compare_counts(m1.ghost.len(), m2.ghost.len())
}

pub fn compare_counts(m1_ghosts: usize, m2_ghosts: usize) -> AgreementRecord {
    let delta = m2_ghosts as i64 - m1_ghosts as i64;
    AgreementRecord {
        agree: delta == 0,
        delta,
        large_disagreement: delta.unsigned_abs() > LARGE_DISAGREEMENT,
    }
}
