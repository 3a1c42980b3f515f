//! Group distance magic labelings of complete multipartite graphs.
//!
//! In `K_{n1,...,nt}` a vertex sees every label outside its own class, so if
//! every class sums to 0 then every vertex has weight 0. More generally the
//! labeling is magic exactly when all classes have the same sum.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{AbelianGroup, Element};
use crate::partition::{
    backtrack, partition_large_parts, zero_sum_partition, Budget, Certificate, Ground,
    PartitionError, SizeSequence,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MagicError {
    #[error("invalid part sizes: {0}")]
    InvalidSpec(String),
    #[error("the graph has {vertices} vertices but the group has order {order}")]
    OrderMismatch { vertices: usize, order: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Class sizes of a complete multipartite graph, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipartiteSpec {
    sizes: Vec<usize>,
}

impl MultipartiteSpec {
    pub fn new(mut sizes: Vec<usize>) -> Result<Self, MagicError> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(MagicError::InvalidSpec(
                "need at least one class, all nonempty".into(),
            ));
        }
        sizes.sort_unstable();
        Ok(MultipartiteSpec { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MagicPath {
    /// More than three involutions, smallest class at least 3 and largest
    /// class at least `3n/4 - 1`: the other classes are packed into
    /// `Γ - {0}` and the largest takes everything left, including 0.
    LargestClass,
    /// More than one involution and every class at least 4.
    LargeClasses,
    /// Exact search.
    Search,
}

/// `classes[i]` lists the labels of class `i` (ascending class size), one
/// per vertex, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagicLabeling {
    pub classes: Vec<Vec<Element>>,
    pub mu: Element,
    pub path: MagicPath,
}

/// Labels `K_{n1,...,nt}` bijectively with `Γ` so that every vertex has the
/// same neighbour sum.
pub fn label_multipartite(
    spec: &MultipartiteSpec,
    group: &AbelianGroup,
    budget: &Budget,
) -> Result<MagicLabeling, MagicError> {
    let n = group.order();
    if spec.vertex_count() != n {
        return Err(MagicError::OrderMismatch {
            vertices: spec.vertex_count(),
            order: n,
        });
    }
    let sizes = spec.sizes();
    let t = sizes.len();
    let inv = group.involutions().len();

    let (parts, path) = if t == 1 {
        // no edges at all
        (vec![group.elements().collect()], MagicPath::Search)
    } else if inv > 3 && sizes[0] >= 3 && 4 * sizes[t - 1] + 4 >= 3 * n {
        (
            largest_takes_rest(group, sizes, budget)?,
            MagicPath::LargestClass,
        )
    } else if inv > 1 && sizes[0] >= 4 {
        let seq = SizeSequence::new(sizes.to_vec())?;
        let solved = partition_large_parts(group, &Ground::All, &seq, budget)?;
        (solved.partition.into_parts(), MagicPath::LargeClasses)
    } else {
        (search(group, sizes, budget)?, MagicPath::Search)
    };

    let mut classes = parts;
    for c in &mut classes {
        c.sort_unstable();
    }
    let verdict = verify_magic(spec, group, &classes);
    let mu = verdict.mu.unwrap_or(Element::ZERO);
    Ok(MagicLabeling { classes, mu, path })
}

fn largest_takes_rest(
    group: &AbelianGroup,
    sizes: &[usize],
    budget: &Budget,
) -> Result<Vec<Vec<Element>>, MagicError> {
    let t = sizes.len();
    let mut parts = if t > 1 {
        let seq = SizeSequence::new(sizes[..t - 1].to_vec())?;
        backtrack(group, &Ground::NonZero, &seq, budget)?
            .partition
            .into_parts()
    } else {
        Vec::new()
    };
    let mut used = vec![false; group.order()];
    for e in parts.iter().flatten() {
        used[e.index()] = true;
    }
    parts.push(group.elements().filter(|e| !used[e.index()]).collect());
    Ok(parts)
}

/// `Γ - {0}` with the largest class one short, 0 added to it afterwards; if
/// that has no solution, a search over all of `Γ`, first for zero class
/// sums and then for any common class sum.
fn search(
    group: &AbelianGroup,
    sizes: &[usize],
    budget: &Budget,
) -> Result<Vec<Vec<Element>>, MagicError> {
    let t = sizes.len();
    if sizes[t - 1] >= 2 {
        let mut short = sizes.to_vec();
        short[t - 1] -= 1;
        let seq = SizeSequence::new(short)?;
        match zero_sum_partition(group, &Ground::NonZero, &seq, budget) {
            Ok(solved) => {
                let mut parts = solved.partition.into_parts();
                parts[t - 1].push(Element::ZERO);
                return Ok(parts);
            }
            Err(PartitionError::NoPartition(_)) | Err(PartitionError::Unknown { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let seq = SizeSequence::new(sizes.to_vec())?;
    let zero_err = match zero_sum_partition(group, &Ground::All, &seq, budget) {
        Ok(solved) => return Ok(solved.partition.into_parts()),
        Err(e @ (PartitionError::NoPartition(_) | PartitionError::Unknown { .. })) => e,
        Err(e) => return Err(e.into()),
    };
    // The weight of a vertex is the total minus its class sum, so the
    // classes only need a common sum c with t*c equal to the total.
    let total = group.sum_of(group.elements());
    let mut unknown = matches!(zero_err, PartitionError::Unknown { .. });
    for c in group.elements().skip(1) {
        if group.scale(t as i64, c) != total {
            continue;
        }
        match constant_sum_classes(group, sizes, c, budget) {
            Ok(Some(parts)) => return Ok(parts),
            Ok(None) => {}
            Err(_) => unknown = true,
        }
    }
    Err(if unknown {
        zero_err
    } else {
        PartitionError::NoPartition(Certificate::ExhaustiveSearch { nodes: 0 })
    }
    .into())
}

/// Splits `Γ` into classes of the given sizes, each summing to `c`. The
/// smallest unused element is always placed first; `Err` means the node
/// budget ran out.
fn constant_sum_classes(
    group: &AbelianGroup,
    sizes: &[usize],
    c: Element,
    budget: &Budget,
) -> Result<Option<Vec<Vec<Element>>>, ()> {
    struct State<'a> {
        group: &'a AbelianGroup,
        c: Element,
        used: Vec<bool>,
        left: Vec<usize>,
        parts: Vec<Vec<Element>>,
        nodes: u64,
        max_nodes: u64,
    }

    impl State<'_> {
        fn next(&mut self) -> Result<bool, ()> {
            let Some(e) = (0..self.used.len()).find(|&i| !self.used[i]) else {
                return Ok(true);
            };
            let mut tried = Vec::new();
            for k in 0..self.left.len() {
                let s = self.left[k];
                if tried.contains(&s) {
                    continue;
                }
                tried.push(s);
                self.left.swap_remove(k);
                self.used[e] = true;
                let mut part = vec![Element::from_index(e)];
                let found = self.grow(&mut part, s - 1, e)?;
                self.used[e] = false;
                self.left.push(s);
                let last = self.left.len() - 1;
                self.left.swap(k, last);
                if found {
                    return Ok(true);
                }
            }
            Ok(false)
        }

        /// Adds `need` more elements above `after` to `part`.
        fn grow(&mut self, part: &mut Vec<Element>, need: usize, after: usize) -> Result<bool, ()> {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(());
            }
            let sum = self.group.sum_of(part.iter().copied());
            if need == 0 {
                if sum != self.c {
                    return Ok(false);
                }
                self.parts.push(part.clone());
                if self.next()? {
                    return Ok(true);
                }
                self.parts.pop();
                return Ok(false);
            }
            if need == 1 {
                let x = self.group.sub(self.c, sum);
                if x.index() <= after || self.used[x.index()] {
                    return Ok(false);
                }
                self.used[x.index()] = true;
                part.push(x);
                let found = self.grow(part, 0, x.index());
                part.pop();
                self.used[x.index()] = false;
                return found;
            }
            for i in after + 1..self.used.len() {
                if self.used[i] {
                    continue;
                }
                self.used[i] = true;
                part.push(Element::from_index(i));
                let found = self.grow(part, need - 1, i);
                part.pop();
                self.used[i] = false;
                if found? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }

    let mut st = State {
        group,
        c,
        used: vec![false; group.order()],
        left: sizes.to_vec(),
        parts: Vec::new(),
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    if !st.next()? {
        return Ok(None);
    }
    // back to ascending class size
    let mut parts = st.parts;
    parts.sort_by_key(|p| (p.len(), p[0]));
    Ok(Some(parts))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MagicViolation {
    ClassSize {
        class: usize,
        expected: usize,
        found: usize,
    },
    ClassCount {
        expected: usize,
        found: usize,
    },
    ForeignLabel {
        vertex: usize,
    },
    RepeatedLabel {
        vertex: usize,
    },
    /// Vertex `vertex` (classes numbered consecutively) has a weight other
    /// than that of vertex 0.
    Weight {
        vertex: usize,
        weight: String,
        expected: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagicVerdict {
    pub mu: Option<Element>,
    pub violation: Option<MagicViolation>,
}

impl MagicVerdict {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Definition-level check: labels form a bijection onto `Γ` and every
/// vertex's neighbour sum is the same.
pub fn verify_magic(
    spec: &MultipartiteSpec,
    group: &AbelianGroup,
    classes: &[Vec<Element>],
) -> MagicVerdict {
    let fail = |v| MagicVerdict {
        mu: None,
        violation: Some(v),
    };
    if classes.len() != spec.sizes().len() {
        return fail(MagicViolation::ClassCount {
            expected: spec.sizes().len(),
            found: classes.len(),
        });
    }
    for (class, (c, &size)) in classes.iter().zip(spec.sizes()).enumerate() {
        if c.len() != size {
            return fail(MagicViolation::ClassSize {
                class,
                expected: size,
                found: c.len(),
            });
        }
    }
    // vertex -> (class, label)
    let vertices: Vec<(usize, Element)> = classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |&l| (i, l)))
        .collect();
    let mut seen = HashSet::new();
    for (v, &(_, l)) in vertices.iter().enumerate() {
        if !group.contains(l) {
            return fail(MagicViolation::ForeignLabel { vertex: v });
        }
        if !seen.insert(l) {
            return fail(MagicViolation::RepeatedLabel { vertex: v });
        }
    }
    if vertices.len() != group.order() {
        return fail(MagicViolation::ClassCount {
            expected: group.order(),
            found: vertices.len(),
        });
    }
    let weight = |x: usize| {
        group.sum_of(
            vertices
                .iter()
                .filter(|(cls, _)| *cls != vertices[x].0)
                .map(|&(_, l)| l),
        )
    };
    let mu = weight(0);
    for x in 1..vertices.len() {
        let w = weight(x);
        if w != mu {
            return fail(MagicViolation::Weight {
                vertex: x,
                weight: group.format(w),
                expected: group.format(mu),
            });
        }
    }
    MagicVerdict {
        mu: Some(mu),
        violation: None,
    }
}
