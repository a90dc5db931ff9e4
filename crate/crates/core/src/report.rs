//! Verification records and the JSON report schema.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gfq::Elem;

/// Bumped whenever the JSON layout changes.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    SampledPass,
    Fail,
    Degenerate,
    Skipped,
}

impl Status {
    pub fn is_pass(self) -> bool {
        matches!(self, Status::Pass | Status::SampledPass | Status::Skipped)
    }
}

/// Coordinates of a point, as written into reports.
pub type Coords = Vec<Elem>;
/// Basis rows of a subspace, as written into reports.
pub type Basis = Vec<Coords>;

/// A concrete counterexample. Every variant carries enough data to re-check
/// the violation against the set it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    NotSpanning { projdim: isize, expected: usize },
    SympDimension { symp: usize, projdim: isize },
    SympNotSplit { symp: usize, reason: String },
    /// A point of the symp's span where membership in X disagrees with the quadric.
    SympPointMismatch { symp: usize, point: Coords, in_set: bool },
    /// Two points of X lying in no common symp.
    OrphanPair { x: Coords, y: Coords },
    /// Two non-collinear points lying in more than one symp.
    NonUniqueSymp { x: Coords, y: Coords, symps: Vec<usize> },
    /// A point of the intersection of two symp spans outside X.
    Mm2 { symp_a: usize, symp_b: usize, point: Coords },
    Mm3 { point: Coords, projdim: isize, bound: usize },
    Quadrangle { corners: [Coords; 4], symps: Vec<usize> },
    /// Points of a symp collinear with an outside point that do not form a singular subspace.
    CollinearSet { p: Coords, symp: usize },
    Lemma1 { a: Basis, b: Basis },
    QuadricLemma { lemma: String, subspace: Basis },
    Recognition { detail: String, subspaces: Vec<Basis> },
    /// A point of T_x in X not joined to x by a singular line.
    WrinklePoint { x: Coords, y: Coords },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub exhaustive: bool,
    pub checked: u64,
    pub violations: u64,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub counts: BTreeMap<String, u64>,
    pub notes: Vec<String>,
    pub witnesses: Vec<Witness>,
}

/// Cap on witnesses kept per record; `violations` still counts all of them.
pub const MAX_WITNESSES: usize = 8;

impl CheckRecord {
    pub fn new(name: impl Into<String>) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            status: Status::Pass,
            exhaustive: true,
            checked: 0,
            violations: 0,
            seed: None,
            samples: None,
            counts: BTreeMap::new(),
            notes: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn sampled(mut self, seed: u64, samples: u64) -> CheckRecord {
        self.exhaustive = false;
        self.seed = Some(seed);
        self.samples = Some(samples);
        self
    }

    pub fn violation(&mut self, w: Witness) {
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    pub fn count(&mut self, key: &str, by: u64) {
        *self.counts.entry(key.to_string()).or_insert(0) += by;
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Fix the status from the violation count and sampling mode.
    pub fn finish(mut self) -> CheckRecord {
        if !matches!(self.status, Status::Degenerate | Status::Skipped) {
            self.status = match (self.violations, self.exhaustive) {
                (0, true) => Status::Pass,
                (0, false) => Status::SampledPass,
                _ => Status::Fail,
            };
        }
        self
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> CheckRecord {
        let mut r = CheckRecord::new(name);
        r.status = Status::Skipped;
        r.note(why);
        r
    }

    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }

    /// Order-independent merge of partial results from parallel workers.
    pub fn merge(mut self, other: CheckRecord) -> CheckRecord {
        self.checked += other.checked;
        self.violations += other.violations;
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.witnesses.extend(other.witnesses);
        self.witnesses.sort_by(|a, b| {
            serde_json::to_string(a).unwrap().cmp(&serde_json::to_string(b).unwrap())
        });
        self.witnesses.truncate(MAX_WITNESSES);
        self
    }
}

/// Sampling policy shared by the checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub seed: u64,
    /// Number of random probes when a check is not exhaustive.
    pub samples: u64,
    /// Points probed by the per-point scans (wrinkles) on large sets.
    pub point_samples: u64,
    /// Checks run exhaustively when |X| is at most this.
    pub exhaustive_limit: usize,
}

impl Default for Sampling {
    fn default() -> Sampling {
        Sampling { seed: 0x5eed_0f_6d6d, samples: 100_000, point_samples: 1_000, exhaustive_limit: 10_000 }
    }
}
