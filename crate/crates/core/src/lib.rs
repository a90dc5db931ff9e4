//! Exact finite geometry for Mazzocca-Melone sets of split type.

pub mod constructors;
pub mod error;
pub mod gf2;
pub mod gfq;
pub mod io;
pub mod linproj;
pub mod mmset;
pub mod mmverify;
pub mod quadform;
pub mod report;

pub use error::{Error, Result};
pub use gfq::{Elem, Field, FieldSpec};
pub use linproj::{PointKey, ProjPoint, Subspace};
pub use quadform::{QuadraticForm, Quadric, QuadricKind};
pub use report::{CheckRecord, Status, Witness};
pub use mmset::{MMSet, Symp};
