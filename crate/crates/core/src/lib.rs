//! Approximation algorithm for the Hamiltonian p-median problem: partition
//! the vertices of a complete metric graph into exactly `p` cycles of at
//! least three vertices each, at minimum total weight.
//!
//! * [`instance`]: instances, Euclidean generation, file format.
//! * [`matching`]: minimum-weight perfect matching (blossom algorithm).
//! * [`two_factor`]: minimum-weight 2-factors through a matching gadget.
//! * [`approx`]: the merge/split approximation and its counting lemmas.
//! * [`oracle`]: exhaustive solvers for small instances.
//! * [`bench`]: benchmark rows and CSV reports.

pub mod approx;
pub mod bench;
pub mod cover;
pub mod error;
pub mod instance;
pub mod matching;
pub mod oracle;
pub mod two_factor;

pub use approx::{solve, Branch, RunReport};
pub use cover::{CycleCover, HpmpSolution};
pub use error::{Error, Result};
pub use instance::{generate_euclidean, Instance, Point2D};
