//! Structured quadrilateral mesh generation for four-sided planar domains.
//!
//! Two generators share one mesh representation:
//!
//! * [`tfi`]: algebraic transfinite interpolation (bilinear Coons patch) of the
//!   four boundary curves.
//! * [`training`]: a small attention-gated network mapping the computational
//!   unit square onto the physical domain, trained without data by
//!   penalizing the Navier-Lamé residual of the map in the interior and the
//!   boundary mismatch on the edges. [`hardbc`] then snaps the boundary
//!   exactly and diffuses the correction inward.
//!
//! Second derivatives of the network map come from hyper-dual forward passes
//! and parameter gradients from a reverse-mode tape recorded over the real
//! arithmetic of those passes (see [`autodiff`]).

pub mod autodiff;
pub mod error;
pub mod geometry;
pub mod hardbc;
pub mod mesh;
pub mod network;
pub mod pde;
pub mod presets;
pub mod tfi;
pub mod training;

pub use error::{Error, Result};
pub use geometry::{BoundaryCurve, DomainSpec, Point};
pub use mesh::{CompGrid, Provenance, QualityReport, StructuredMesh};
pub use network::{Activation, PinnModel};
pub use pde::{Governing, LameConstants, SecondOrderJet};
pub use training::{TrainConfig, TrainOutcome, Trainer};
