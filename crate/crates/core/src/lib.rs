//! A-homotopy theory of finite simple graphs.
//!
//! The crate covers graph maps under the A-theory convention (edges may
//! collapse), box products and exponential graphs, A-homotopy of maps,
//! stabilized paths out of the infinite path and their homotopy grids,
//! winding numbers in cycle graphs, and cones under the span
//! `I_0 <- I_0 ⊔ I_0 -> I_0` together with an obstruction certificate showing
//! that a given cone admits no cone map into a suitable cone on a cycle graph.
//!
//! Every search is exhaustive and bounded by [`Limits`]; answers that claim
//! non-existence either carry an invariant-based certificate or come from a
//! search that exhausted its whole state space.

pub mod cone;
pub mod error;
pub mod format;
pub mod graph;
pub mod grid;
pub mod hom;
pub mod homotopy;
pub mod limits;
pub mod path;

pub use cone::{
    certify_no_cone_map, mark_columns, obstruction_cone, search_cone_maps, verify_cone_map, Cone,
    ConeDecomposition, ConeMap, ConeMapDefect, ObstructionReport, ReportEntry, Verdict,
};
pub use error::{Error, Result};
pub use graph::{is_graph_map, Graph, GraphMap, Vertex};
pub use grid::{GridBoundary, GridDefect, HomotopyGrid, HomotopyTrace};
pub use hom::{count_homomorphisms, enumerate_homomorphisms, exponential_graph, ExponentialGraph};
pub use homotopy::{
    are_homotopic, nullhomotopic_in_cycle, path_homotopic_rel_endpoints, Basing, MapHomotopy,
    Nullhomotopy, PathHomotopy,
};
pub use limits::Limits;
pub use path::{canonicalize, map_path, net_winding, winding_number, Canonical, StablePath, Winding};
