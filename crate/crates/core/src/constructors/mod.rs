//! Explicit constructions of the second-row varieties as MMSets.

use crate::error::{Error, Result};
use crate::gfq::Field;
use crate::linproj::ProjPoint;
use crate::mmset::{MMSet, Symp};
use crate::mmverify::check_structure;

mod classical;
pub mod e6;
pub mod spinor;

pub use classical::{grassmann_lines, segre, veronese};
pub use e6::{e6_cubic, e6_derivative, e6_variety};
pub use spinor::{half_spin, pure_spinor, SpinorSpace};

/// Builds the set and refuses it unless every structural invariant holds.
/// `MMSet::new` already rejects repeated points, which is the injectivity check.
pub(crate) fn assemble(family: String, field: Field, n: usize, d: usize, points: Vec<ProjPoint>, symps: Vec<Symp>) -> Result<MMSet> {
    let set = MMSet::new(family, field, n, d, points, symps).map_err(|e| match e {
        Error::Structure(m) => Error::Structure(format!("map is not injective: {m}")),
        e => e,
    })?;
    let rec = check_structure(&set);
    if !rec.passed() {
        return Err(Error::Structure(format!(
            "{}: {} structural violations, first {:?}",
            set.family(),
            rec.violations,
            rec.witnesses.first()
        )));
    }
    Ok(set)
}
