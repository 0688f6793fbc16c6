//! Paired 3-disjoint path covers of the balanced hypercube `BH_n`.

pub mod dpc3;
pub mod pathengine;
pub mod tables;
pub mod topology;
pub mod verify;

pub use dpc3::{build_3dpc, build_3dpc_with, compute_profile, CaseProfile, Dpc3Error, PathCover, Subcase, TerminalSpec};
pub use pathengine::{Cycle, EngineError, Path, PathEngine, Scope};
pub use topology::{BalancedHypercube, Color, NodeId, Partition};
pub use verify::{oracle_exists_3dpc, oracle_find_t3, verify_kdpc, OracleAnswer, Report};
