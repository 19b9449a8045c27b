//! Exact geometric machinery for maximum weight independent set of polygons:
//! L-infinity corridor decompositions, weighted cuttings, balanced separating
//! polygons and a recursive approximation scheme built on them.

pub mod corridor;
pub mod cuttings;
pub mod error;
pub mod gen;
pub mod geom;
pub mod num;
pub mod oracle;
pub mod par;
pub mod qptas;
pub mod rng;
pub mod separator;

pub use error::{Error, Result};
pub use geom::{Frame, Id, Point, Rect, Segment, WeightedPolygon};
pub use num::Rat;
