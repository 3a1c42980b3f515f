//! Definition-level check of zero-sum partitions.
//!
//! Nothing here is shared with the solvers except group arithmetic.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::group::{AbelianGroup, Element};
use crate::partition::{Ground, ZeroSumPartition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionViolation {
    #[error("expected {expected} parts, found {found}")]
    PartCount { expected: usize, found: usize },
    #[error("part {part} has {found} elements, expected {expected}")]
    WrongSize {
        part: usize,
        expected: usize,
        found: usize,
    },
    #[error("part {part} contains {element}, which is not in the ground set")]
    NotInGround { part: usize, element: String },
    #[error("element {element} occurs more than once")]
    Overlap { element: String },
    #[error("part {part} sums to {sum}, not 0")]
    NonzeroSum { part: usize, sum: String },
}

/// Checks sizes, membership in `ground`, pairwise disjointness and zero sums.
pub fn verify_partition(
    group: &AbelianGroup,
    ground: &Ground,
    sizes: &[usize],
    partition: &ZeroSumPartition,
) -> Result<(), PartitionViolation> {
    let parts = partition.parts();
    if parts.len() != sizes.len() {
        return Err(PartitionViolation::PartCount {
            expected: sizes.len(),
            found: parts.len(),
        });
    }
    let allowed: BTreeSet<Element> = match ground {
        Ground::NonZero => group.elements().filter(|e| !e.is_zero()).collect(),
        Ground::All => group.elements().collect(),
        Ground::Subset(list) => list.iter().copied().collect(),
    };
    let mut seen = BTreeSet::new();
    for (i, (part, &size)) in parts.iter().zip(sizes).enumerate() {
        if part.len() != size {
            return Err(PartitionViolation::WrongSize {
                part: i,
                expected: size,
                found: part.len(),
            });
        }
        for &e in part {
            if !group.contains(e) || !allowed.contains(&e) {
                let element = if group.contains(e) {
                    group.format(e)
                } else {
                    format!("#{}", e.index())
                };
                return Err(PartitionViolation::NotInGround { part: i, element });
            }
            if !seen.insert(e) {
                return Err(PartitionViolation::Overlap {
                    element: group.format(e),
                });
            }
        }
        let sum = group.sum_of(part.iter().copied());
        if !sum.is_zero() {
            return Err(PartitionViolation::NonzeroSum {
                part: i,
                sum: group.format(sum),
            });
        }
    }
    Ok(())
}
