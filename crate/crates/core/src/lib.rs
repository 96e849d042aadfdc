//! Generalized interval exchange transformations: Rauzy combinatorics, exact
//! Rauzy–Veech induction, full families of GIETs and the Thurston pullback map
//! used to realize prescribed renormalization paths.

pub mod branch;
pub mod combinatorics;
pub mod error;
pub mod exact_iet;
pub mod full_family;
pub mod giet;
pub mod io;
pub mod partition;
pub mod render;
pub mod semiconjugacy;
pub mod thurston;

pub use branch::{BranchMap, Interval, MonotoneBranch};
pub use combinatorics::{CombinatorialDatum, IntMatrix, Kind, RauzyArrow, RauzyClass, RauzyPath};
pub use error::{Error, Result};
pub use exact_iet::{ExactIet, Rational};
pub use giet::{partitions_equivalent, Giet};
pub use partition::{Atom, DynamicalPartition};
pub use io::Document;
