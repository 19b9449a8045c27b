//! Block partitions of the grid square and the approximation scheme for
//! delta-large rectangles: segment partitions around an independent set,
//! trail and ring splitting, and the region dynamic program.

pub mod dp;
pub mod grid;
pub mod partition;
pub mod region;
pub mod solve;
pub mod walk;

pub use dp::{ring_split, trail_dp, trail_split, RingParams, RingSplit, TrailDp, Value};
pub use grid::{build_grid, gen_delta_large, Grid, Item, Seg};
pub use partition::{build_partition, verify_partition, Partition, PartitionReport};
pub use region::{Region, ShapeKind};
pub use solve::{solve_blocks, solve_rectangles, BlockCaps, BlocksSolution};
