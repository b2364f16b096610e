use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub enum BinSpec {
    /// Equal-width bins aligned on multiples of the width.
    Width(f64),
    /// Explicit strictly increasing edges; values outside are counted apart.
    Edges(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub lower: f64,
    pub upper: f64,
    pub count: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: Vec<Bin>,
    /// Values outside the explicit edges.
    pub outside: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HistError {
    #[error("bin width must be positive and finite, got {0}")]
    BadWidth(f64),
    #[error("bin edges must be at least two strictly increasing finite values")]
    BadEdges,
    #[error("values must be finite")]
    NonFinite,
}

/// Bins are `[lower, upper)`. Empty interior bins are kept.
pub fn histogram(values: &[f64], spec: &BinSpec) -> Result<Histogram, HistError> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(HistError::NonFinite);
    }
    match spec {
        BinSpec::Width(w) => {
            if !(w.is_finite() && *w > 0.0) {
                return Err(HistError::BadWidth(*w));
            }
            if values.is_empty() {
                return Ok(Histogram::default());
            }
            let index = |v: f64| (v / w).floor() as i64;
            let lo = values.iter().map(|&v| index(v)).min().unwrap();
            let hi = values.iter().map(|&v| index(v)).max().unwrap();
            let mut bins: Vec<Bin> = (lo..=hi)
                .map(|i| Bin {
                    lower: i as f64 * w,
                    upper: (i + 1) as f64 * w,
                    count: 0,
                })
                .collect();
            for &v in values {
                bins[(index(v) - lo) as usize].count += 1;
            }
            Ok(Histogram { bins, outside: 0 })
        }
        BinSpec::Edges(edges) => {
            if edges.len() < 2 || edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|p| p[0] >= p[1]) {
                return Err(HistError::BadEdges);
            }
            if values.is_empty() {
                return Ok(Histogram::default());
            }
            let mut h = Histogram {
                bins: edges
                    .windows(2)
                    .map(|p| Bin {
                        lower: p[0],
                        upper: p[1],
                        count: 0,
                    })
                    .collect(),
                outside: 0,
            };
            for &v in values {
                // first edge greater than v
                let k = edges.partition_point(|&e| e <= v);
                if k == 0 || k == edges.len() {
                    h.outside += 1;
                } else {
                    h.bins[k - 1].count += 1;
                }
            }
            Ok(h)
        }
    }
}

impl Histogram {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lower,upper,count\n");
        for b in &self.bins {
            let _ = writeln!(out, "{},{},{}", b.lower, b.upper, b.count);
        }
        out
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().map(|b| b.count).sum::<u64>() + self.outside
    }

    /// Lower edge of the fullest bin (the first on ties).
    pub fn mode_bin(&self) -> Option<f64> {
        let mut best: Option<&Bin> = None;
        for b in &self.bins {
            if best.is_none_or(|x| b.count > x.count) {
                best = Some(b);
            }
        }
        best.filter(|b| b.count > 0).map(|b| b.lower)
    }
}
