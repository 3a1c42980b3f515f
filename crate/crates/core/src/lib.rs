//! Realizations of digraphs in finite Abelian groups.
//!
//! The crate builds and checks three kinds of objects over a finite Abelian
//! group: zero-sum partitions with prescribed part sizes, irregular arc
//! labelings of digraphs (arc labels whose signed vertex sums are pairwise
//! distinct), and distance magic labelings of complete multipartite graphs.
//! Every constructor has an independent verifier next to it.

pub mod asymptotic;
pub mod digraph;
pub mod group;
pub mod magic;
pub mod matching;
pub mod partition;
pub mod realize;
pub mod verify;

pub use digraph::{Digraph, DigraphError, ReductionStep, SpanningArcOrder};
pub use group::{AbelianGroup, Element, GroupError, GroupSpec};
pub use partition::{
    Budget, Certificate, Ground, PartitionError, SizeSequence, SolvePath, Solved, ZeroSumPartition,
};
pub use verify::{verify_partition, PartitionViolation};
