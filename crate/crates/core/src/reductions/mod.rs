//! The reduction chain
//! APSP ⇄ (min,+) product → all-pairs negative triangle → negative triangle
//! → zero-weight triangle.
//!
//! Each reduction is an instance transformer plus answer lifting, generic over
//! a solver closure for the target problem. Every target call is recorded in a
//! [`ReductionTrace`] so call-count contracts can be asserted.

mod apnt;
mod paths;
mod pipeline;
mod zwt;

use std::collections::BTreeMap;

pub use apnt::{apnt_via_nt, minplus_via_apnt, minplus_via_apnt_call_bound};
pub use paths::{apsp_via_minplus, minplus_via_apsp};
pub use pipeline::{pipeline_run, PipelineAnswer, PipelineId, PipelineOptions, PipelineSource};
pub use zwt::{
    floor_sum, floor_target_hit, nt_via_zwt, nt_via_zwt_with_targets, scale_count, zwt_call_bound,
    ZWT_TARGETS,
};

/// Answer of a negative- or zero-weight triangle solver. Decision-only
/// solvers leave `witness` empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleAnswer {
    pub found: bool,
    pub witness: Option<[usize; 3]>,
}

impl TriangleAnswer {
    pub fn from_witness(w: Option<[usize; 3]>) -> Self {
        Self {
            found: w.is_some(),
            witness: w,
        }
    }

    pub fn decision(found: bool) -> Self {
        Self {
            found,
            witness: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub target: String,
    pub summary: String,
    pub answer: String,
}

/// Log of target-solver calls made by a reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    entries: Vec<TraceEntry>,
    calls: BTreeMap<String, u64>,
    sizes: BTreeMap<String, u64>,
    dropped: u64,
}

impl ReductionTrace {
    /// Entries kept verbatim; further calls are only counted.
    pub const MAX_ENTRIES: usize = 4096;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, target: &str, size: usize, summary: String, answer: String) {
        *self.calls.entry(target.to_string()).or_default() += 1;
        *self.sizes.entry(target.to_string()).or_default() += size as u64;
        if self.entries.len() < Self::MAX_ENTRIES {
            self.entries.push(TraceEntry {
                target: target.to_string(),
                summary,
                answer,
            });
        } else {
            self.dropped += 1;
        }
    }

    pub fn calls(&self, target: &str) -> u64 {
        self.calls.get(target).copied().unwrap_or(0)
    }

    pub fn total_calls(&self) -> u64 {
        self.calls.values().sum()
    }

    /// Sum of instance sizes passed to `target`.
    pub fn total_size(&self, target: &str) -> u64 {
        self.sizes.get(target).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn call_counts(&self) -> &BTreeMap<String, u64> {
        &self.calls
    }

    pub fn merge(&mut self, other: &ReductionTrace) {
        for (k, v) in &other.calls {
            *self.calls.entry(k.clone()).or_default() += v;
        }
        for (k, v) in &other.sizes {
            *self.sizes.entry(k.clone()).or_default() += v;
        }
        for e in &other.entries {
            if self.entries.len() < Self::MAX_ENTRIES {
                self.entries.push(e.clone());
            } else {
                self.dropped += 1;
            }
        }
        self.dropped += other.dropped;
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "calls": self.calls,
            "sizes": self.sizes,
            "entries_dropped": self.dropped,
            "entries": self
                .entries
                .iter()
                .map(|e| serde_json::json!([e.target, e.summary, e.answer]))
                .collect::<Vec<_>>(),
        })
    }
}
