//! Order-theoretic combinatorics of partial separability labels:
//! the partition lattice `P_I`, its down-set lattice `P_II`, and the
//! up-set class lattice `P_III`.

pub mod class;
pub mod dot;
pub mod downset;
pub mod partition;
pub mod text;

pub use class::{enumerate_class_labels, reconstruct_membership, ClassLabel, Sublattice};
pub use dot::hasse_dot;
pub use downset::{DownSetLabel, PartitionLattice, MAX_DOWNSET_ENUM_N, MAX_LATTICE_N};
pub use partition::{bell_number, enumerate_partitions, Bipartition, Partition, MAX_ENUM_N};
pub use text::{format_class, format_downset, format_partition, parse_downset, parse_partition};
