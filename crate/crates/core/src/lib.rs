//! Classification of non-singular Morse–Smale flows with two periodic
//! orbits on closed 3-manifolds: integer invariants, their consistency
//! classes, the ambient manifold, first homology and per-manifold censuses.

pub mod intlat;
mod text;
pub mod invariant;
pub mod manifold;
pub mod homology;
pub mod census;

pub use invariant::{canonical_form, consistent, ConsistencyWitness, FlowInvariant, InvariantError};
pub use manifold::{ambient_manifold, identify, Branch, LensSpace, LensSumRP3, ManifoldDescriptor, SeifertFibration};
pub use text::ParseError;
pub use homology::{h1_match_report, h1_of_descriptor, smith_normal_form, AbelianGroup, IntMatrix};
pub use census::{audit, census, count_classes, representatives, AuditReport, CensusReport, CensusWindow, Countability};
