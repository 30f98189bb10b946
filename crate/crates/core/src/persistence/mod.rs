//! Persistent homology of Vietoris–Rips flag complexes in dimensions 0 and 1,
//! over the two-element field.
//!
//! Two routes produce a [`PersistenceDiagram`]:
//!
//! * [`rips_filtration`] + [`compute_persistence`]: materializes the filtration
//!   and reduces the boundary matrix column by column with clearing. Accepts
//!   any face-closed filtration, so it also serves arbitrary tie orders.
//! * [`rips_persistence`]: the production path for the pipeline. Components
//!   are merged with a union–find over sorted edges; loops are found by an
//!   implicit coboundary reduction that never stores the triangles.
//!
//! Pairs with `death == birth` are dropped from both.

mod diagram;
mod filtration;
mod mst;
mod reduce;
mod rips;

pub use diagram::{DimensionDiagram, PersistenceDiagram};
pub use filtration::{enclosing_radius, rips_filtration, FilteredSimplex};
pub use mst::dim0_mst_oracle;
pub use reduce::compute_persistence;
pub use rips::rips_persistence;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PersistenceError {
    #[error("filtration values decrease at position {position}")]
    UnsortedFiltration { position: usize },
    #[error("simplex at position {position} has a face that is absent or appears later")]
    MissingFace { position: usize },
    #[error("simplex at position {position} is malformed: {reason}")]
    InvalidSimplex { position: usize, reason: String },
}
