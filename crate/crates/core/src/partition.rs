//! Zero-sum partitions with prescribed part sizes.
//!
//! The workhorse is an exact backtracking search that either returns a
//! partition, proves that none exists by exhausting the search space, or gives
//! up when its budget runs out. Only an exhausted search (or an arithmetic
//! argument such as a nonzero total) is ever reported as infeasible.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{AbelianGroup, Element, GroupSpec};
use crate::verify::verify_partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("invalid size sequence: {0}")]
    InvalidSizes(String),
    #[error("outside the predicate's hypothesis: {0}")]
    OutOfScope(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no partition exists: {0}")]
    NoPartition(Certificate),
    #[error("search budget exhausted after {nodes} nodes without a decision")]
    Unknown { nodes: u64 },
}

/// Why a partition provably does not exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// The complete search tree was explored.
    ExhaustiveSearch { nodes: u64 },
    /// The parts must cover the ground set, whose elements do not sum to 0.
    NonzeroTotal,
    /// The sizes add up to more than the ground set holds.
    TooFewElements,
    /// A part of size one must be `{0}`, which is unavailable or requested twice.
    SingletonPart,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::ExhaustiveSearch { nodes } => {
                write!(f, "exhaustive search ({nodes} nodes)")
            }
            Certificate::NonzeroTotal => write!(f, "the ground set does not sum to 0"),
            Certificate::TooFewElements => write!(f, "sizes exceed the ground set"),
            Certificate::SingletonPart => write!(f, "a singleton part can only be {{0}}"),
        }
    }
}

/// Part sizes `r1..rt`, in the order given.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SizeSequence(Vec<usize>);

impl SizeSequence {
    pub fn new(sizes: Vec<usize>) -> Result<Self, PartitionError> {
        if sizes.is_empty() {
            return Err(PartitionError::InvalidSizes(
                "at least one part is required".into(),
            ));
        }
        if sizes.contains(&0) {
            return Err(PartitionError::InvalidSizes(
                "part sizes must be positive".into(),
            ));
        }
        Ok(SizeSequence(sizes))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn count(&self, size: usize) -> usize {
        self.0.iter().filter(|&&r| r == size).count()
    }

    /// Number of terms equal to 2.
    pub fn twos(&self) -> usize {
        self.count(2)
    }

    /// Number of terms equal to 3.
    pub fn threes(&self) -> usize {
        self.count(3)
    }

    pub fn max(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> usize {
        self.0.iter().copied().min().unwrap_or(0)
    }
}

impl fmt::Display for SizeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for SizeSequence {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let sizes = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| PartitionError::InvalidSizes(format!("not a size: {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        SizeSequence::new(sizes)
    }
}

/// The set the parts are drawn from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ground {
    /// `Γ - {0}`
    NonZero,
    /// `Γ`
    All,
    /// An explicit subset.
    Subset(Vec<Element>),
}

impl Ground {
    pub fn members(&self, group: &AbelianGroup) -> Vec<Element> {
        match self {
            Ground::NonZero => group.elements().skip(1).collect(),
            Ground::All => group.elements().collect(),
            Ground::Subset(list) => {
                let mut v: Vec<Element> = list
                    .iter()
                    .copied()
                    .filter(|&e| group.contains(e))
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }
}

/// Disjoint zero-sum parts; `parts()[i]` has the i-th requested size and is
/// sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSumPartition {
    parts: Vec<Vec<Element>>,
}

impl ZeroSumPartition {
    pub fn new(mut parts: Vec<Vec<Element>>) -> Self {
        for p in &mut parts {
            p.sort_unstable();
        }
        ZeroSumPartition { parts }
    }

    pub fn parts(&self) -> &[Vec<Element>] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Vec<Element>> {
        self.parts
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.parts.iter().flatten().copied()
    }
}

/// Search limits. Running out of budget yields [`PartitionError::Unknown`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 50_000_000,
            max_time: None,
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes,
            max_time: None,
        }
    }
}

/// Which construction produced a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolvePath {
    /// Partition of `Γ - {0}` in a group with odd order or three involutions.
    Zeng,
    /// Parts of size 3, 4 and 5 in an elementary 2-group.
    Egawa,
    /// The small parts are packed, the largest part is whatever remains.
    LargeLastPart,
    /// All parts of size at least 4, built part by part.
    LargeParts,
    /// Plain exact search.
    Backtracking,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solved {
    pub partition: ZeroSumPartition,
    pub path: SolvePath,
    pub nodes: u64,
}

/// Whether `Γ - {0}` splits into zero-sum parts of *every* size sequence with
/// terms at least 2 summing to `n - 1`: exactly when `Γ` has odd order or
/// exactly three involutions.
pub fn feasible_zeng(group: &AbelianGroup, sizes: &SizeSequence) -> Result<bool, PartitionError> {
    let n = group.order();
    if sizes.total() + 1 != n {
        return Err(PartitionError::OutOfScope(format!(
            "sizes sum to {}, expected n - 1 = {}",
            sizes.total(),
            n - 1
        )));
    }
    if sizes.min() < 2 {
        return Err(PartitionError::OutOfScope(
            "every size must be at least 2".into(),
        ));
    }
    Ok(zeng_group(group))
}

fn zeng_group(group: &AbelianGroup) -> bool {
    group.order() % 2 == 1 || group.involutions().len() == 3
}

/// Disjoint zero-sum subsets of `ground` with the given sizes.
///
/// Dispatch, in order: the `Γ - {0}` case with odd order or three involutions;
/// elementary 2-groups with sizes 3, 4 and 5; a largest part of at least
/// `3n/4` in a group with several involutions; plain backtracking.
pub fn zero_sum_partition(
    group: &AbelianGroup,
    ground: &Ground,
    sizes: &SizeSequence,
    budget: &Budget,
) -> Result<Solved, PartitionError> {
    let n = group.order();
    let whole_nonzero = matches!(ground, Ground::NonZero) && sizes.total() + 1 == n;
    let path = if whole_nonzero && sizes.min() >= 2 && zeng_group(group) {
        SolvePath::Zeng
    } else if group.is_elementary_2group() && sizes.as_slice().iter().all(|r| (3..=5).contains(r)) {
        SolvePath::Egawa
    } else if whole_nonzero && large_last_applies(group, sizes) {
        SolvePath::LargeLastPart
    } else {
        SolvePath::Backtracking
    };
    let (partition, nodes) = if path == SolvePath::LargeLastPart {
        pack_then_remainder(group, ground, sizes, budget)?
    } else {
        search(group, ground, sizes.as_slice(), budget)?
    };
    Ok(Solved {
        partition,
        path,
        nodes,
    })
}

fn large_last_applies(group: &AbelianGroup, sizes: &SizeSequence) -> bool {
    let n = group.order();
    let s = sizes.as_slice();
    if s.len() < 2 || group.involutions().len() <= 1 {
        return false;
    }
    let big = largest_index(s);
    4 * s[big] >= 3 * n && s.iter().enumerate().all(|(i, &r)| i == big || r >= 3)
}

fn largest_index(sizes: &[usize]) -> usize {
    // last occurrence of the maximum
    let max = *sizes.iter().max().unwrap();
    sizes.iter().rposition(|&r| r == max).unwrap()
}

/// Packs every part except the largest, then takes all remaining ground
/// elements as the largest part. Valid when the ground set sums to 0.
fn pack_then_remainder(
    group: &AbelianGroup,
    ground: &Ground,
    sizes: &SizeSequence,
    budget: &Budget,
) -> Result<(ZeroSumPartition, u64), PartitionError> {
    let s = sizes.as_slice();
    let members = ground.members(group);
    if sizes.total() != members.len() {
        return Err(PartitionError::Hypothesis(
            "parts must cover the ground set".into(),
        ));
    }
    if !group.sum_of(members.iter().copied()).is_zero() {
        return Err(PartitionError::NoPartition(Certificate::NonzeroTotal));
    }
    let big = largest_index(s);
    let prefix: Vec<usize> = s
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != big)
        .map(|(_, &r)| r)
        .collect();
    let (packed, nodes) = search(group, ground, &prefix, budget)?;
    let mut used = vec![false; group.order()];
    for e in packed.elements() {
        used[e.index()] = true;
    }
    let rest: Vec<Element> = members.into_iter().filter(|e| !used[e.index()]).collect();
    let mut parts = packed.into_parts();
    parts.insert(big, rest);
    Ok((ZeroSumPartition::new(parts), nodes))
}

/// Plain exact search over `ground`; no dispatch.
pub fn backtrack(
    group: &AbelianGroup,
    ground: &Ground,
    sizes: &SizeSequence,
    budget: &Budget,
) -> Result<Solved, PartitionError> {
    let (partition, nodes) = search(group, ground, sizes.as_slice(), budget)?;
    Ok(Solved {
        partition,
        path: SolvePath::Backtracking,
        nodes,
    })
}

fn search(
    group: &AbelianGroup,
    ground: &Ground,
    sizes: &[usize],
    budget: &Budget,
) -> Result<(ZeroSumPartition, u64), PartitionError> {
    let members = ground.members(group);
    let total: usize = sizes.iter().sum();
    if total > members.len() {
        return Err(PartitionError::NoPartition(Certificate::TooFewElements));
    }
    let singles = sizes.iter().filter(|&&r| r == 1).count();
    if singles > 1 || (singles == 1 && members.first() != Some(&Element::ZERO)) {
        return Err(PartitionError::NoPartition(Certificate::SingletonPart));
    }
    if sizes.is_empty() {
        return Ok((ZeroSumPartition::new(Vec::new()), 0));
    }
    let exact = total == members.len();
    if exact && !group.sum_of(members.iter().copied()).is_zero() {
        return Err(PartitionError::NoPartition(Certificate::NonzeroTotal));
    }

    let mut engine = Engine::new(group, members, budget);
    let found = if exact {
        let mut distinct: Vec<(usize, usize)> = Vec::new();
        let mut sorted = sizes.to_vec();
        sorted.sort_unstable();
        for r in sorted {
            match distinct.last_mut() {
                Some((s, c)) if *s == r => *c += 1,
                _ => distinct.push((r, 1)),
            }
        }
        engine.remaining = distinct;
        engine.twos_left = sizes.iter().filter(|&&r| r == 2).count();
        engine.exact_next()
    } else {
        let mut order = sizes.to_vec();
        order.sort_unstable_by(|a, b| b.cmp(a));
        engine.twos_left = order.iter().filter(|&&r| r == 2).count();
        engine.order = order;
        engine.packing_next(0)
    };
    match found {
        Flow::Found => {}
        Flow::Exhausted => {
            return Err(PartitionError::NoPartition(Certificate::ExhaustiveSearch {
                nodes: engine.nodes,
            }))
        }
        Flow::Aborted => {
            return Err(PartitionError::Unknown {
                nodes: engine.nodes,
            })
        }
    }

    // hand the parts back in the caller's order
    let mut pool = engine.parts;
    for p in &mut pool {
        p.sort_unstable();
    }
    pool.sort_by_key(|p| p[0]);
    let mut parts = Vec::with_capacity(sizes.len());
    for &r in sizes {
        let pos = pool
            .iter()
            .position(|p| p.len() == r)
            .expect("part of requested size");
        parts.push(pool.remove(pos));
    }
    Ok((ZeroSumPartition::new(parts), engine.nodes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Found,
    Exhausted,
    Aborted,
}

struct Engine<'g> {
    group: &'g AbelianGroup,
    members: Vec<Element>,
    in_ground: Vec<bool>,
    used: Vec<bool>,
    unused_count: usize,
    /// inverse pairs `{a, -a}` with `a != -a` and both still available
    pairs_free: usize,
    twos_left: usize,
    parts: Vec<Vec<Element>>,
    current: Vec<Element>,
    /// exact mode: (size, parts still to build), sizes ascending
    remaining: Vec<(usize, usize)>,
    /// packing mode: sizes descending
    order: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
}

impl<'g> Engine<'g> {
    fn new(group: &'g AbelianGroup, members: Vec<Element>, budget: &Budget) -> Self {
        let mut in_ground = vec![false; group.order()];
        for &e in &members {
            in_ground[e.index()] = true;
        }
        let pairs_free = members
            .iter()
            .filter(|&&e| {
                let m = group.neg(e);
                e < m && in_ground[m.index()]
            })
            .count();
        Engine {
            group,
            unused_count: members.len(),
            members,
            used: vec![false; group.order()],
            in_ground,
            pairs_free,
            twos_left: 0,
            parts: Vec::new(),
            current: Vec::new(),
            remaining: Vec::new(),
            order: Vec::new(),
            nodes: 0,
            max_nodes: budget.max_nodes,
            deadline: budget.max_time.map(|d| Instant::now() + d),
            aborted: false,
        }
    }

    fn available(&self, e: Element) -> bool {
        self.in_ground[e.index()] && !self.used[e.index()]
    }

    fn place(&mut self, e: Element) {
        let m = self.group.neg(e);
        if m != e && self.available(m) {
            self.pairs_free -= 1;
        }
        self.used[e.index()] = true;
        self.unused_count -= 1;
        self.current.push(e);
    }

    fn unplace(&mut self) {
        let e = self.current.pop().expect("placed element");
        self.used[e.index()] = false;
        self.unused_count += 1;
        let m = self.group.neg(e);
        if m != e && self.available(m) {
            self.pairs_free += 1;
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.aborted = true;
        } else if self.nodes.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    fn commit_part(&mut self) {
        let part = std::mem::take(&mut self.current);
        self.parts.push(part);
    }

    fn reopen_part(&mut self) {
        self.current = self.parts.pop().expect("committed part");
    }

    /// Exact cover: the smallest unused element must lie in some remaining
    /// part; branch on that part's size.
    fn exact_next(&mut self) -> Flow {
        let left: usize = self.remaining.iter().map(|&(_, c)| c).sum();
        if left == 0 {
            return Flow::Found;
        }
        if self.twos_left > self.pairs_free {
            return Flow::Exhausted;
        }
        if left == 1 {
            // the ground set sums to 0, so whatever is left does too
            let rest: Vec<Element> = self
                .members
                .iter()
                .copied()
                .filter(|&e| !self.used[e.index()])
                .collect();
            let slot = self.remaining.iter().position(|&(_, c)| c == 1).unwrap();
            if rest.len() == self.remaining[slot].0 {
                self.remaining[slot].1 = 0;
                self.parts.push(rest);
                return Flow::Found;
            }
            return Flow::Exhausted;
        }
        let first = *self
            .members
            .iter()
            .find(|e| !self.used[e.index()])
            .expect("unused element while parts remain");
        for slot in 0..self.remaining.len() {
            let (size, count) = self.remaining[slot];
            if count == 0 {
                continue;
            }
            if size == 2 && self.group.neg(first) == first {
                continue;
            }
            self.remaining[slot].1 -= 1;
            if size == 2 {
                self.twos_left -= 1;
            }
            if self.tick() {
                return Flow::Aborted;
            }
            self.place(first);
            let flow = self.grow(size - 1, first, self.pos_of(first), true);
            if flow == Flow::Found {
                return flow;
            }
            self.unplace();
            if size == 2 {
                self.twos_left += 1;
            }
            self.remaining[slot].1 += 1;
            if flow != Flow::Exhausted {
                return flow;
            }
        }
        Flow::Exhausted
    }

    /// Packing: parts built in descending size; equal sizes have increasing
    /// first elements.
    fn packing_next(&mut self, k: usize) -> Flow {
        if k == self.order.len() {
            return Flow::Found;
        }
        if self.twos_left > self.pairs_free {
            return Flow::Exhausted;
        }
        let size = self.order[k];
        let lower = if k > 0 && self.order[k - 1] == size {
            let prev_first = self.parts[k - 1][0];
            Some(self.pos_of(prev_first))
        } else {
            None
        };
        if size == 2 {
            self.twos_left -= 1;
        }
        let flow = self.grow_packing(size, k, lower);
        if size == 2 {
            self.twos_left += 1;
        }
        flow
    }

    fn pos_of(&self, e: Element) -> usize {
        self.members.binary_search(&e).expect("ground element")
    }

    /// Adds `need` more elements to the current part, each after position
    /// `after` in the ground list; the last one is forced by the zero sum.
    /// Continues with `exact_next` or `packing_next` once the part closes.
    fn grow(&mut self, need: usize, sum: Element, after: usize, exact: bool) -> Flow {
        self.grow_inner(need, sum, Some(after), exact, 0)
    }

    fn grow_packing(&mut self, size: usize, k: usize, lower: Option<usize>) -> Flow {
        self.grow_inner(size, Element::ZERO, lower, false, k)
    }

    fn grow_inner(
        &mut self,
        need: usize,
        sum: Element,
        after: Option<usize>,
        exact: bool,
        k: usize,
    ) -> Flow {
        let start = after.map_or(0, |p| p + 1);
        if need == 0 {
            if !sum.is_zero() {
                return Flow::Exhausted;
            }
            return self.close(exact, k);
        }
        if need == 1 {
            let last = self.group.neg(sum);
            if !self.available(last) || self.members.binary_search(&last).unwrap() < start {
                return Flow::Exhausted;
            }
            if self.tick() {
                return Flow::Aborted;
            }
            self.place(last);
            let flow = self.close(exact, k);
            if flow != Flow::Found {
                self.unplace();
            }
            return flow;
        }
        if self.members.len() < start + need {
            return Flow::Exhausted;
        }
        for pos in start..=self.members.len() - need {
            let e = self.members[pos];
            if self.used[e.index()] {
                continue;
            }
            if self.tick() {
                return Flow::Aborted;
            }
            self.place(e);
            let flow = self.grow_inner(need - 1, self.group.add(sum, e), Some(pos), exact, k);
            if flow != Flow::Exhausted {
                return flow;
            }
            self.unplace();
        }
        Flow::Exhausted
    }

    fn close(&mut self, exact: bool, k: usize) -> Flow {
        self.commit_part();
        let flow = if exact {
            self.exact_next()
        } else {
            self.packing_next(k + 1)
        };
        if flow != Flow::Found {
            self.reopen_part();
        }
        flow
    }
}

/// `q3` triples, `q4` quadruples and `q5` quintuples of pairwise disjoint
/// zero-sum sets in an elementary 2-group of order `2^p`, found by search.
/// Requires `3q3 + 4q4 + 5q5 <= 2^p` and `!= 2^p - 2`.
pub fn egawa_partition_345(
    group: &AbelianGroup,
    q3: usize,
    q4: usize,
    q5: usize,
    budget: &Budget,
) -> Result<ZeroSumPartition, PartitionError> {
    if !group.is_elementary_2group() {
        return Err(PartitionError::Hypothesis(format!(
            "{group} is not an elementary 2-group"
        )));
    }
    let n = group.order();
    let total = 3 * q3 + 4 * q4 + 5 * q5;
    if total > n {
        return Err(PartitionError::Hypothesis(format!(
            "{total} elements requested, group has {n}"
        )));
    }
    if total + 2 == n {
        return Err(PartitionError::Hypothesis(format!(
            "{total} = 2^p - 2 is excluded"
        )));
    }
    let sizes: Vec<usize> = std::iter::repeat_n(3, q3)
        .chain(std::iter::repeat_n(4, q4))
        .chain(std::iter::repeat_n(5, q5))
        .collect();
    if sizes.is_empty() {
        return Ok(ZeroSumPartition::new(Vec::new()));
    }
    Ok(search(group, &Ground::All, &sizes, budget)?.0)
}

/// Partition of `ground` into parts of size at least 4 in a group with more
/// than one involution, built the constructive way: if some part has at
/// least 5 elements, the other parts are packed into `Γ - {0}` and the rest
/// of the ground set closes the largest part; if every part has 4 elements
/// (which forces `ground = Γ`), the subgroup of involutions and 0 is cut into
/// cosets of a four-element subgroup and the remaining elements into sets
/// `{a, -a, b, -b}`.
pub fn partition_large_parts(
    group: &AbelianGroup,
    ground: &Ground,
    sizes: &SizeSequence,
    budget: &Budget,
) -> Result<Solved, PartitionError> {
    let n = group.order();
    if group.involutions().len() <= 1 {
        return Err(PartitionError::Hypothesis(
            "needs more than one involution".into(),
        ));
    }
    if sizes.min() < 4 {
        return Err(PartitionError::Hypothesis(
            "every part must have at least 4 elements".into(),
        ));
    }
    let expected = match ground {
        Ground::NonZero => n - 1,
        Ground::All => n,
        Ground::Subset(_) => {
            return Err(PartitionError::Hypothesis(
                "ground must be Γ or Γ - {0}".into(),
            ))
        }
    };
    if sizes.total() != expected {
        return Err(PartitionError::Hypothesis(format!(
            "sizes sum to {}, ground set has {expected} elements",
            sizes.total()
        )));
    }
    if sizes.max() >= 5 {
        let s = sizes.as_slice();
        let big = largest_index(s);
        let prefix: Vec<usize> = s
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != big)
            .map(|(_, &r)| r)
            .collect();
        let (packed, nodes) = search(group, &Ground::NonZero, &prefix, budget)?;
        let mut used = vec![false; n];
        for e in packed.elements() {
            used[e.index()] = true;
        }
        let rest: Vec<Element> = ground
            .members(group)
            .into_iter()
            .filter(|e| !used[e.index()])
            .collect();
        let mut parts = packed.into_parts();
        parts.insert(big, rest);
        return Ok(Solved {
            partition: ZeroSumPartition::new(parts),
            path: SolvePath::LargeParts,
            nodes,
        });
    }
    // all parts have four elements
    let inv = group.involutions();
    let (i1, i2) = (inv[0], inv[1]);
    let mut taken = vec![false; n];
    let mut quads = Vec::new();
    for x in std::iter::once(Element::ZERO).chain(inv.iter().copied()) {
        if taken[x.index()] {
            continue;
        }
        let q = [
            x,
            group.add(x, i1),
            group.add(x, i2),
            group.add(group.add(x, i1), i2),
        ];
        for e in q {
            taken[e.index()] = true;
        }
        quads.push(q.to_vec());
    }
    let mut reps = Vec::new();
    for a in group.elements() {
        if !taken[a.index()] {
            let m = group.neg(a);
            taken[a.index()] = true;
            taken[m.index()] = true;
            reps.push((a, m));
        }
    }
    for pair in reps.chunks(2) {
        match pair {
            [(a, ma), (b, mb)] => quads.push(vec![*a, *ma, *b, *mb]),
            _ => {
                return Err(PartitionError::Hypothesis(
                    "odd number of inverse pairs".into(),
                ))
            }
        }
    }
    Ok(Solved {
        partition: ZeroSumPartition::new(quads),
        path: SolvePath::LargeParts,
        nodes: 0,
    })
}

/// Integer partitions of `total` into parts `>= min_part`, each listed in
/// nondecreasing order.
pub fn integer_partitions(total: usize, min_part: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in min..=left {
            if p < left && left - p < p {
                // the remainder could not continue the nondecreasing sequence
                continue;
            }
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 {
        rec(total, min_part.max(1), &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConjectureResult {
    Found {
        partition: ZeroSumPartition,
        path: SolvePath,
        verified: bool,
    },
    /// Proven to have no partition: a counterexample.
    Counterexample {
        certificate: Certificate,
    },
    Unknown {
        nodes: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceOutcome {
    pub sizes: Vec<usize>,
    pub result: ConjectureResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub group: GroupSpec,
    pub outcomes: Vec<SequenceOutcome>,
}

impl ConjectureReport {
    pub fn successes(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.result, ConjectureResult::Found { verified: true, .. }))
            .count()
    }

    pub fn counterexamples(&self) -> Vec<&SequenceOutcome> {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.result, ConjectureResult::Counterexample { .. }))
            .collect()
    }

    pub fn unknowns(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.result, ConjectureResult::Unknown { .. }))
            .count()
    }
}

/// Tries every size sequence with terms at least 3 summing to `n - 1` in a
/// group with more than one involution.
pub fn check_conjecture(
    group: &AbelianGroup,
    budget: &Budget,
) -> Result<ConjectureReport, PartitionError> {
    if group.involutions().len() <= 1 {
        return Err(PartitionError::Hypothesis(format!(
            "{group} has {} involution(s); at least two are required",
            group.involutions().len()
        )));
    }
    let n = group.order();
    let mut outcomes = Vec::new();
    for seq in integer_partitions(n - 1, 3) {
        let sizes = SizeSequence::new(seq.clone())?;
        let result = match zero_sum_partition(group, &Ground::NonZero, &sizes, budget) {
            Ok(solved) => {
                let verified =
                    verify_partition(group, &Ground::NonZero, &seq, &solved.partition).is_ok();
                ConjectureResult::Found {
                    partition: solved.partition,
                    path: solved.path,
                    verified,
                }
            }
            Err(PartitionError::NoPartition(certificate)) => {
                ConjectureResult::Counterexample { certificate }
            }
            Err(PartitionError::Unknown { nodes }) => ConjectureResult::Unknown { nodes },
            Err(e) => return Err(e),
        };
        outcomes.push(SequenceOutcome { sizes: seq, result });
    }
    Ok(ConjectureReport {
        group: group.spec().clone(),
        outcomes,
    })
}
