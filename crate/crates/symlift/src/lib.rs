//! Classification and lifting machinery for sampled symmetric-product
//! quotients: coincidence patterns of m-tuples, integer-partition counting,
//! finite-topology audits, sampled-region segmentation, and homotopy lifts
//! of paths through the quotient.

pub mod cli;
pub mod domain;
pub mod error;
pub mod finitetop;
pub mod io;
pub mod lifting;
pub mod matching;
pub mod parallel;
pub mod partitions;
pub mod pieces;
pub mod regions;
pub mod unionfind;

pub use domain::{MTuple, Point, PointDomain};
pub use error::{Error, Result};
pub use pieces::{classify, theta_canonical, PieceId};
