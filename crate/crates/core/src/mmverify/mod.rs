//! Verification of the Mazzocca-Melone axioms and the surrounding lemmas.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfq::FieldSpec;
use crate::mmset::MMSet;
use crate::report::{CheckRecord, Sampling, REPORT_SCHEMA_VERSION};

pub mod axioms;
pub mod closure;
pub mod graph;
pub mod lemmas;
pub mod recognize;
pub mod residue;
pub mod structure;
pub mod witness;
pub mod wrinkles;

pub use axioms::{check_mm1, check_mm2, check_mm3, tangent_space};
pub use closure::{closure_family, same_spans, symp_from_pair, Seeds};
pub use graph::Collinearity;
pub use lemmas::{check_lemma1, check_lemma_subspace, check_quadrangle};
pub use recognize::{recognize_grassmann, singular_subspaces};
pub use residue::{residue, Invariants, Residue};
pub use structure::check_structure;
pub use witness::recheck;
pub use wrinkles::{check_wrinkles, find_wrinkles};

/// The checks `verify` can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Structure,
    Mm1,
    Mm2,
    Mm3,
    Quadrangle,
    LemmaSubspace,
    Lemma1,
    Wrinkles,
    Recognition,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Structure,
        Check::Mm1,
        Check::Mm2,
        Check::Mm3,
        Check::Quadrangle,
        Check::LemmaSubspace,
        Check::Lemma1,
        Check::Wrinkles,
        Check::Recognition,
    ];

    /// The default suite.
    pub const DEFAULT: [Check; 6] = [Check::Structure, Check::Mm1, Check::Mm2, Check::Mm3, Check::Quadrangle, Check::Wrinkles];

    pub fn name(self) -> &'static str {
        match self {
            Check::Structure => "structure",
            Check::Mm1 => "mm1",
            Check::Mm2 => "mm2",
            Check::Mm3 => "mm3",
            Check::Quadrangle => "quadrangle",
            Check::LemmaSubspace => "lemma-subspace",
            Check::Lemma1 => "lemma1",
            Check::Wrinkles => "wrinkles",
            Check::Recognition => "recognition",
        }
    }
}

impl std::str::FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub sampling: Sampling,
    pub checks: Vec<Check>,
    /// Scan every pair of symps in MM2 regardless of size.
    pub exhaustive_mm2: bool,
    /// Largest singular subspace dimension explored by lemma1.
    pub lemma_max_k: usize,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions { sampling: Sampling::default(), checks: Check::DEFAULT.to_vec(), exhaustive_mm2: false, lemma_max_k: 2 }
    }
}

impl VerifyOptions {
    pub fn all_checks(mut self) -> VerifyOptions {
        self.checks = Check::ALL.to_vec();
        self
    }

    /// Every check that applies to sets of split type `d`.
    pub fn all_for_type(mut self, d: usize) -> VerifyOptions {
        self.checks = Check::ALL.into_iter().filter(|&c| c != Check::Recognition || d == 4).collect();
        self
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub d: usize,
    /// Projective dimension of the ambient space.
    pub n: usize,
    pub points: usize,
    /// Singular lines; only counted when the collinearity graph is dense.
    pub lines: Option<u64>,
    pub symps: usize,
    /// Projective dimension of T_x against the number of checked points.
    pub tangent_dims: BTreeMap<isize, u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub family: String,
    pub field: FieldSpec,
    pub sampling: Sampling,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHAR2_NOTE: &str = "nonsingular: zero radical in odd characteristic; in characteristic 2 no singular radical point, and zero radical in even vector dimension";

/// Histogram `tangent-projdim=k` counts of an MM3 record, keyed by k.
fn tangent_histogram(mm3: &CheckRecord) -> BTreeMap<isize, u64> {
    mm3.counts
        .iter()
        .filter_map(|(k, &v)| k.strip_prefix("tangent-projdim=").and_then(|s| s.parse().ok()).map(|d| (d, v)))
        .collect()
}

/// Runs the selected checks in a fixed order. Recognition is only defined
/// for split type 4 and is rejected on other sets.
pub fn verify(set: &MMSet, opts: &VerifyOptions) -> Result<VerificationReport> {
    let s = &opts.sampling;
    let mut wanted = opts.checks.clone();
    wanted.sort_unstable();
    wanted.dedup();
    if wanted.contains(&Check::Recognition) && set.d() != 4 {
        return Err(Error::Precondition(format!("recognition needs split type 4, got {}", set.d())));
    }
    let graph = Collinearity::new(set, s.exhaustive_limit);
    let mut checks = Vec::with_capacity(wanted.len());
    let mut tangent_dims = BTreeMap::new();
    for c in wanted {
        let rec = match c {
            Check::Structure => check_structure(set),
            Check::Mm1 => check_mm1(&graph, s),
            Check::Mm2 => check_mm2(set, s, opts.exhaustive_mm2),
            Check::Mm3 => {
                let r = check_mm3(set, s);
                tangent_dims = tangent_histogram(&r);
                r
            }
            Check::Quadrangle => check_quadrangle(&graph, s),
            Check::LemmaSubspace => check_lemma_subspace(&graph, s),
            Check::Lemma1 => check_lemma1(&graph, s, opts.lemma_max_k),
            Check::Wrinkles => check_wrinkles(&graph, s),
            Check::Recognition => recognize_grassmann(&graph)?,
        };
        checks.push(rec);
    }
    let summary = Summary {
        d: set.d(),
        n: set.ambient_dim(),
        points: set.len(),
        lines: graph.is_dense().then(|| graph.line_count()),
        symps: set.symps().len(),
        tangent_dims,
    };
    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        family: set.family().to_string(),
        field: set.field().spec(),
        sampling: *s,
        summary,
        checks,
        notes: vec![CHAR2_NOTE.to_string()],
    })
}
