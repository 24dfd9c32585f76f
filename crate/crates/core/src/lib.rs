//! Jacobi-Maupertuis geometry of the planar three-body problem.
//!
//! Hopf coordinates on the centre-of-mass configuration space and its
//! quotients, JM metrics for inverse-square and Newtonian potentials,
//! curvature by closed form and by finite differences, trajectory and
//! geodesic integration, linear stability, and the scans and suites that
//! check them.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod coords;
pub mod curvature;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod stability;

pub use analysis::{GridSpec, PowerSums, ScanReport, VerificationReport, VerifyConfig};
pub use coords::{ChartPoint, MassConfig, PlanarConfig, Space, SpecialPoint, C64};
pub use curvature::{Curvature, CurvatureReport};
pub use dynamics::{FlowKind, FlowState, PathRecord, StopStatus, Tolerances};
pub use error::{Error, Result};
pub use linalg::{Mat4, Vec4};
pub use metrics::{JmMetric, MetricField, PotentialKind};
pub use stability::{StabilityReport, Verdict};
