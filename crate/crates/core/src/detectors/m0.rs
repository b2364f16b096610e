use serde::{Deserialize, Serialize};

/// List-length comparison between registered and extracted references.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct M0Estimate {
    pub registered_count: usize,
    pub extracted_count: usize,
    /// `max(0, registered - extracted)`.
    pub estimate: usize,
    /// `extracted < 0.95 * registered`.
    pub flagged: bool,
}

pub fn m0_estimate<A, B>(r_c: &[A], r_g: &[B]) -> M0Estimate {
    m0_from_counts(r_c.len(), r_g.len())
}

pub fn m0_from_counts(registered_count: usize, extracted_count: usize) -> M0Estimate {
    M0Estimate {
        registered_count,
        extracted_count,
        estimate: registered_count.saturating_sub(extracted_count),
        // exact form of extracted < 0.95 * registered
        flagged: 100 * extracted_count < 95 * registered_count,
    }
}
