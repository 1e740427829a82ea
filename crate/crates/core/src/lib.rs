//! Stackelberg minimum spanning tree pricing games.
//!
//! A leader prices blue edges; a follower then buys a minimum spanning tree
//! over the fixed-cost red tree and the priced blue edges. The leader earns
//! the prices of the blue edges the follower takes. This crate models the
//! game and implements exact and approximate leader strategies.

pub mod budgeted;
pub mod follower;
pub mod model;
pub mod oracle;
pub mod path_approx;
pub mod pricing;
pub mod tree_approx;
pub mod two_cost;
pub mod union_find;
pub mod value;

pub use model::{
    BlueCatalog, BlueEdge, BlueMode, Budget, EdgeKey, GameInstance, PricedSolution, Purchase,
    RawInstance, RedEdge, RedTree, Vertex,
};
pub use value::Value;
