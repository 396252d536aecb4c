//! Combinatorial and numerical kernels for longest-common-subsequence
//! statistics of random permutations.
//!
//! The crate is organized in five layers:
//!
//! * [`perm`]: permutation values, group operations and cycle statistics;
//! * [`subseq`]: LIS, LCS, RSK shape and Greene prefix invariants, each
//!   with an independent brute-force oracle;
//! * [`samplers`]: seeded samplers for conjugation-invariant permutation
//!   laws and the cycle-merging operators;
//! * [`shape`]: the Vershik-Kerov-Logan-Shepp limit shape, the area
//!   function `G` and the constant `theta`;
//! * [`twstat`]: the Tracy-Widom GUE reference distribution and the
//!   one-sample Kolmogorov-Smirnov statistic.

pub mod perm;
pub mod samplers;
pub mod shape;
pub mod subseq;
pub mod twstat;

pub use perm::{CycleDecomposition, PermError, Permutation};
pub use subseq::Shape;
