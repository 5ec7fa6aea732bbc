//! Minimum-cost charging plans for a battery-constrained vehicle.
//!
//! The all-pairs problem is reduced to no-recharge energetic paths
//! ([`energetic`]), one rectangular min-plus product and an all-pairs
//! shortest-path closure ([`minplus`]) on a graph over "empty" and "full"
//! states ([`reduction`]).

pub mod energetic;
pub mod error;
pub mod extensions;
pub mod graph;
pub mod io;
pub mod minplus;
pub mod numeric;
pub mod oracle;
pub mod plan;
pub mod random;
pub mod reduction;

pub use error::{Error, ParseError, Result};
pub use extensions::{add_source, apsp_via_mcp, with_initial_charges, SourceSpec};
pub use graph::{parse_graph, Arc, Graph, VertexId};
pub use numeric::{Int, NumericMode, Scalar};
pub use plan::{validate_plan, TravelPlan};
pub use reduction::{mcp_all_pairs, mcp_bounded, reconstruct_plan, PlanCostResult};
