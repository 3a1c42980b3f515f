//! Zero-sum partitions with small parts in large groups.
//!
//! Large terms are split into 3s and 4s, then 4s and 5s into 2s and 3s while
//! the number of pairs allows it. What remains is either "many pairs plus a
//! few parts of size 3 to 5", solved by taking the pairs `{a, -a}` first and
//! packing the rest, or "pairs and triples only". Triples come from the
//! involutions (`T_I`) and, when those run out, from a hypergraph matching
//! over the inverse classes `{a, -a}` of the other elements (`T_R`).

use std::collections::HashSet;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{AbelianGroup, Element};
use crate::matching::{greedy_matching, Hypergraph};
use crate::partition::{
    backtrack, zero_sum_partition, Budget, Ground, PartitionError, SizeSequence, ZeroSumPartition,
};
use crate::verify::verify_partition;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticError {
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{needed} involution triples avoiding the distinguished involution needed, {available} available")]
    InsufficientTriples { needed: usize, available: usize },
    #[error("matching has {found} hyperedges, {needed} needed (coverage {coverage:.3})")]
    InsufficientCoverage {
        needed: usize,
        found: usize,
        coverage: f64,
    },
    #[error("{needed} inverse pairs needed, {available} left")]
    InsufficientPairs { needed: usize, available: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Involutions `I`, the other nonzero elements `R`, and, when
/// `|R| = |I| + 1`, the involution `ι0` with `-b = b + ι0` for all `b` in `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementClasses {
    pub involutions: Vec<Element>,
    pub rest: Vec<Element>,
    pub iota0: Option<Element>,
}

pub fn classify(group: &AbelianGroup) -> Result<ElementClasses, AsymptoticError> {
    if group.is_elementary_2group() {
        return Err(AsymptoticError::OutOfScope(format!(
            "{group} is an elementary 2-group"
        )));
    }
    let involutions = group.involutions().to_vec();
    let rest: Vec<Element> = group
        .elements()
        .filter(|&e| !e.is_zero() && !group.is_involution(e))
        .collect();
    let iota0 = if rest.len() == involutions.len() + 1 {
        let i0 = group.scale(-2, rest[0]);
        if rest.iter().any(|&b| group.neg(b) != group.add(b, i0)) {
            return Err(AsymptoticError::Internal(format!(
                "no common involution maps every element of R to its inverse in {group}"
            )));
        }
        Some(i0)
    } else {
        None
    };
    Ok(ElementClasses {
        involutions,
        rest,
        iota0,
    })
}

/// The classes `a* = {a, -a}` of `R`, each listed as `[a, -a]` with `a < -a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseQuotient {
    classes: Vec<[Element; 2]>,
    class_of: Vec<Option<usize>>,
}

impl InverseQuotient {
    pub fn new(group: &AbelianGroup, rest: &[Element]) -> Self {
        let mut class_of = vec![None; group.order()];
        let mut classes = Vec::new();
        for &a in rest {
            let m = group.neg(a);
            if a < m {
                class_of[a.index()] = Some(classes.len());
                class_of[m.index()] = Some(classes.len());
                classes.push([a, m]);
            }
        }
        InverseQuotient { classes, class_of }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[[Element; 2]] {
        &self.classes
    }

    pub fn class(&self, e: Element) -> Option<usize> {
        self.class_of.get(e.index()).copied().flatten()
    }
}

/// Which shape the split sequence has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitCase {
    /// `|R|/2` or `|R|/2 - 1` pairs, other terms in 3..=5.
    SaturatedPairs,
    /// Only pairs and triples.
    PairsAndTriples,
}

/// A refined size sequence; `origin[i]` is the index of the original term
/// that `terms[i]` came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    pub terms: Vec<usize>,
    pub origin: Vec<usize>,
}

impl SplitPlan {
    pub fn count(&self, size: usize) -> usize {
        self.terms.iter().filter(|&&r| r == size).count()
    }

    pub fn case(&self) -> SplitCase {
        if self.terms.iter().all(|&r| r <= 3) {
            SplitCase::PairsAndTriples
        } else {
            SplitCase::SaturatedPairs
        }
    }
}

/// Terms of 6 or more become 3s and 4s with as many 4s as possible; then
/// each 5 becomes 2 + 3 unless there are already `r_half` twos, and each 4
/// becomes 2 + 2 unless there are `r_half` or `r_half - 1` twos.
pub fn split_sizes(sizes: &SizeSequence, r_half: usize) -> SplitPlan {
    let mut coarse: Vec<(usize, usize)> = Vec::new();
    for (i, &r) in sizes.as_slice().iter().enumerate() {
        if r >= 6 {
            let fours = (0..=r / 4)
                .rev()
                .find(|&b| (r - 4 * b) % 3 == 0)
                .unwrap_or(0);
            let threes = (r - 4 * fours) / 3;
            coarse.extend(std::iter::repeat_n((3, i), threes));
            coarse.extend(std::iter::repeat_n((4, i), fours));
        } else {
            coarse.push((r, i));
        }
    }
    let mut twos = coarse.iter().filter(|t| t.0 == 2).count();
    let mut plan = SplitPlan {
        terms: Vec::new(),
        origin: Vec::new(),
    };
    for (r, i) in coarse {
        let pieces: &[usize] = match r {
            5 if twos < r_half => {
                twos += 1;
                &[2, 3]
            }
            4 if twos + 2 <= r_half => {
                twos += 2;
                &[2, 2]
            }
            _ => std::slice::from_ref(&r),
        };
        for &p in pieces {
            plan.terms.push(p);
            plan.origin.push(i);
        }
    }
    plan
}

/// Disjoint zero-sum triples (and possibly one quadruple) of involutions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TripleSystem {
    pub triples: Vec<[Element; 3]>,
    pub quadruple: Option<[Element; 4]>,
}

/// Covers the involutions with zero-sum triples: all of them when the 2-rank
/// `s` is even, all but a final quadruple when `s` is odd, none when `s <= 1`.
///
/// The involutions and 0 form `(Z2)^s`. For even `s` it is `GF(4)^(s/2)` and
/// the triples are the orbits `{x, ωx, ω²x}`. For odd `s >= 5` it is
/// `GF(8) × GF(4)^((s-3)/2)`; for each orbit `{y, ωy, ω²y}` with `y != 0`
/// and each `x`, `{(x,y), (αx,ωy), ((1+α)x,ω²y)}` is a triple, and
/// `(x, 0)` splits into one triple and one quadruple.
pub fn triple_cover_i(group: &AbelianGroup) -> TripleSystem {
    let even: Vec<usize> = group
        .factors()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d % 2 == 0)
        .map(|(i, _)| i)
        .collect();
    let s = even.len();
    let to_elem = |bits: u32| -> Element {
        let mut coords = vec![0u64; group.factors().len()];
        for (k, &pos) in even.iter().enumerate() {
            if bits >> k & 1 == 1 {
                coords[pos] = group.factors()[pos] / 2;
            }
        }
        group.element(&coords).expect("involution coordinates")
    };
    // multiplication by ω on each 2-bit chunk from bit `from` upwards
    let omega = |v: u32, from: usize| -> u32 {
        let mut out = v & ((1 << from) - 1);
        for k in (from..s).step_by(2) {
            let (b0, b1) = (v >> k & 1, v >> (k + 1) & 1);
            out |= b1 << k | (b0 ^ b1) << (k + 1);
        }
        out
    };
    let mut sys = TripleSystem::default();
    let sort3 = |mut t: [Element; 3]| {
        t.sort_unstable();
        t
    };
    if s <= 1 {
        return sys;
    }
    if s.is_multiple_of(2) {
        let mut taken = vec![false; 1 << s];
        for v in 1..(1u32 << s) {
            if taken[v as usize] {
                continue;
            }
            let w = omega(v, 0);
            let w2 = omega(w, 0);
            for x in [v, w, w2] {
                taken[x as usize] = true;
            }
            sys.triples
                .push(sort3([to_elem(v), to_elem(w), to_elem(w2)]));
        }
    } else {
        let alpha = |c: u32| -> u32 {
            let (c0, c1, c2) = (c & 1, c >> 1 & 1, c >> 2 & 1);
            c2 | (c0 ^ c2) << 1 | c1 << 2
        };
        let mut taken = vec![false; 1 << s];
        for y in 1..(1u32 << (s - 3)) {
            let yv = y << 3;
            if taken[yv as usize] {
                continue;
            }
            let wy = omega(yv, 3);
            let w2y = omega(wy, 3);
            for x in 0..8u32 {
                let ax = alpha(x);
                let t = [x | yv, ax | wy, (x ^ ax) | w2y];
                for v in t {
                    taken[v as usize] = true;
                }
                sys.triples.push(sort3(t.map(to_elem)));
            }
        }
        sys.triples.push(sort3([1, 2, 3].map(to_elem)));
        let mut q = [4, 5, 6, 7].map(to_elem);
        q.sort_unstable();
        sys.quadruple = Some(q);
    }
    sys.triples.sort_unstable();
    sys
}

/// Every zero-sum 3-subset of `R` (three distinct elements), ascending.
pub fn zero_sum_triples(group: &AbelianGroup, classes: &ElementClasses) -> Vec<[Element; 3]> {
    let mut in_r = vec![false; group.order()];
    for &a in &classes.rest {
        in_r[a.index()] = true;
    }
    let mut out = Vec::new();
    for (i, &a) in classes.rest.iter().enumerate() {
        for &b in &classes.rest[i + 1..] {
            let c = group.neg(group.add(a, b));
            if c > b && in_r[c.index()] {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Number of zero-sum triples of `R` through each element of `R`.
pub fn triple_degrees(group: &AbelianGroup, classes: &ElementClasses) -> Vec<usize> {
    let mut deg = vec![0usize; group.order()];
    for t in zero_sum_triples(group, classes) {
        for e in t {
            deg[e.index()] += 1;
        }
    }
    classes.rest.iter().map(|e| deg[e.index()]).collect()
}

/// Zero-sum triples inside `T ∪ -T` other than `T` and `-T`, over all
/// zero-sum triples `T` of `R`. Brute force.
pub fn extra_triples_in_inverse_pairs(
    group: &AbelianGroup,
    classes: &ElementClasses,
) -> Vec<[Element; 3]> {
    let mut out = Vec::new();
    for t in zero_sum_triples(group, classes) {
        let inv = t.map(|e| group.neg(e));
        let six: Vec<Element> = t.iter().chain(&inv).copied().collect();
        for i in 0..6 {
            for j in i + 1..6 {
                for k in j + 1..6 {
                    let mut s = [six[i], six[j], six[k]];
                    if !group.sum_of(s).is_zero() {
                        continue;
                    }
                    s.sort_unstable();
                    let mut a = t;
                    a.sort_unstable();
                    let mut b = inv;
                    b.sort_unstable();
                    if s != a && s != b {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

/// One triple of classes with a zero-sum representative `a + b + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassTriple {
    pub classes: [usize; 3],
    pub representative: [Element; 3],
}

/// The zero-sum triples of `R` pushed down to classes; a triple and its
/// inverse give the same class triple.
pub fn class_triples(
    group: &AbelianGroup,
    classes: &ElementClasses,
    quotient: &InverseQuotient,
) -> Vec<ClassTriple> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in zero_sum_triples(group, classes) {
        let mut key = t.map(|e| quotient.class(e).expect("element of R"));
        key.sort_unstable();
        if seen.insert(key) {
            out.push(ClassTriple {
                classes: key,
                representative: t,
            });
        }
    }
    out
}

/// `{a*, (a+ι1)*, (a+ι2)*, (a+ι3)*}` for every `a` in `R`, deduplicated.
pub fn involution_quadruples(
    group: &AbelianGroup,
    classes: &ElementClasses,
    quotient: &InverseQuotient,
    triple: [Element; 3],
) -> Vec<Vec<usize>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &a in &classes.rest {
        let mut q: Vec<usize> = std::iter::once(a)
            .chain(triple.iter().map(|&i| group.add(a, i)))
            .map(|e| quotient.class(e).expect("element of R"))
            .collect();
        q.sort_unstable();
        if seen.insert(q.clone()) {
            out.push(q);
        }
    }
    out
}

/// Classes of `R` under `a ~ b` iff `b - a` is 0 or an involution.
pub fn involution_cosets(group: &AbelianGroup, classes: &ElementClasses) -> Vec<Vec<Element>> {
    let mut seen = vec![false; group.order()];
    let mut out = Vec::new();
    for &a in &classes.rest {
        if seen[a.index()] {
            continue;
        }
        let mut coset: Vec<Element> = std::iter::once(a)
            .chain(classes.involutions.iter().map(|&i| group.add(a, i)))
            .collect();
        coset.sort_unstable();
        for &e in &coset {
            seen[e.index()] = true;
        }
        out.push(coset);
    }
    out
}

/// A hyperedge `(a*, b*, c*, u_j)` with `b = a + ι1`, `c = b + ι2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadEdge {
    pub classes: [usize; 3],
    pub u: usize,
    pub a: Element,
    pub iotas: [Element; 3],
}

/// 4-uniform hypergraph on `R*` plus one vertex `u_j` per selected
/// involution triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadHypergraph {
    pub class_count: usize,
    pub selected: Vec<[Element; 3]>,
    pub edges: Vec<QuadEdge>,
}

impl QuadHypergraph {
    pub fn build(
        group: &AbelianGroup,
        classes: &ElementClasses,
        quotient: &InverseQuotient,
        selected: Vec<[Element; 3]>,
    ) -> Self {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for (u, t) in selected.iter().enumerate() {
            for p in PERMS {
                let iotas = p.map(|k| t[k]);
                for &a in &classes.rest {
                    let b = group.add(a, iotas[0]);
                    let c = group.add(b, iotas[1]);
                    let cls = [a, b, c].map(|e| quotient.class(e).expect("element of R"));
                    if cls[0] == cls[1] || cls[1] == cls[2] || cls[0] == cls[2] {
                        continue;
                    }
                    let mut key = cls;
                    key.sort_unstable();
                    if seen.insert((key, u)) {
                        edges.push(QuadEdge {
                            classes: key,
                            u,
                            a,
                            iotas,
                        });
                    }
                }
            }
        }
        QuadHypergraph {
            class_count: quotient.len(),
            selected,
            edges,
        }
    }

    pub fn hypergraph(&self) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut v = e.classes.to_vec();
                v.push(self.class_count + e.u);
                v
            })
            .collect();
        Hypergraph::new(self.class_count + self.selected.len(), edges)
    }

    pub fn u_degree(&self, u: usize) -> usize {
        self.edges.iter().filter(|e| e.u == u).count()
    }

    /// `(a, -b, ι1), (b, -c, ι2), (c, -a, ι3)` for one hyperedge.
    pub fn triples_of(group: &AbelianGroup, e: &QuadEdge) -> [[Element; 3]; 3] {
        let a = e.a;
        let b = group.add(a, e.iotas[0]);
        let c = group.add(b, e.iotas[1]);
        [
            [a, group.neg(b), e.iotas[0]],
            [b, group.neg(c), e.iotas[1]],
            [c, group.neg(a), e.iotas[2]],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticConfig {
    pub epsilon: f64,
    pub seed: u64,
    /// Extra attempts with fresh seeds after a matching shortfall.
    pub retries: u32,
    /// Hand the original sequence to the exact solver if every attempt fails.
    pub fallback: bool,
    pub budget: Budget,
}

impl Default for AsymptoticConfig {
    fn default() -> Self {
        AsymptoticConfig {
            epsilon: 0.25,
            seed: 0,
            retries: 8,
            fallback: false,
            budget: Budget::default(),
        }
    }
}

/// How the triples were obtained in the pairs-and-triples case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TripleSource {
    /// `T_I` alone was enough.
    Involutions,
    /// Inverse-closed pairs of triples from a matching over `R*` (`|I| < |R|/2`).
    ClassTriples,
    /// Involution triples traded for three triples each (`|I| >= |R|/2`).
    Quadruples,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticStats {
    pub case: SplitCase,
    pub source: Option<TripleSource>,
    /// Whether the involutions were used at all (they are skipped when
    /// `|I| <= εn/2`).
    pub uses_involutions: bool,
    pub t_i: usize,
    pub r_star: usize,
    pub matched: Option<usize>,
    /// Fraction of the matching's vertex set covered.
    pub coverage: Option<f64>,
    pub attempts: u32,
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticOutcome {
    pub partition: ZeroSumPartition,
    pub stats: AsymptoticStats,
}

/// Disjoint zero-sum subsets of `Γ - {0}` with the given sizes, built from
/// pairs and triples as described in the module documentation.
///
/// Requires `(1 + ε) Σ r_i < n`, every `r_i >= 2`, and at most `|R|/2`
/// terms equal to 2. The result is always checked by the independent
/// verifier before it is returned.
pub fn partition_asymptotic(
    group: &AbelianGroup,
    sizes: &SizeSequence,
    config: &AsymptoticConfig,
) -> Result<AsymptoticOutcome, AsymptoticError> {
    let classes = classify(group)?;
    let n = group.order();
    let r_half = classes.rest.len() / 2;
    if sizes.min() < 2 {
        return Err(AsymptoticError::Precondition(
            "every size must be at least 2".into(),
        ));
    }
    if (sizes.total() as f64) * (1.0 + config.epsilon) >= n as f64 {
        return Err(AsymptoticError::Precondition(format!(
            "(1 + {}) * {} is not below n = {n}",
            config.epsilon,
            sizes.total()
        )));
    }
    if sizes.twos() > r_half {
        return Err(AsymptoticError::Precondition(format!(
            "{} pairs requested, only |R|/2 = {r_half} exist",
            sizes.twos()
        )));
    }

    let plan = split_sizes(sizes, r_half);
    let quotient = InverseQuotient::new(group, &classes.rest);
    let uses_involutions = (classes.involutions.len() as f64) > config.epsilon * n as f64 / 2.0;
    let t_i = if uses_involutions {
        triple_cover_i(group)
    } else {
        TripleSystem::default()
    };

    let mut stats = AsymptoticStats {
        case: plan.case(),
        source: None,
        uses_involutions,
        t_i: t_i.triples.len(),
        r_star: quotient.len(),
        matched: None,
        coverage: None,
        attempts: 0,
        fallback: false,
    };

    let mut seeds = ChaCha8Rng::seed_from_u64(config.seed);
    let mut last_err = None;
    for attempt in 0..=config.retries {
        let seed = if attempt == 0 {
            config.seed
        } else {
            seeds.next_u64()
        };
        stats.attempts = attempt + 1;
        let result = match plan.case() {
            SplitCase::SaturatedPairs => {
                saturated(group, &plan, &quotient, &config.budget).map(|p| (p, None))
            }
            SplitCase::PairsAndTriples => {
                pairs_and_triples(group, &plan, &classes, &quotient, &t_i, seed, &mut stats)
                    .map(|(p, s)| (p, Some(s)))
            }
        };
        match result {
            Ok((terms, source)) => {
                stats.source = source;
                let partition = assemble(sizes, &plan, terms);
                verify_partition(group, &Ground::NonZero, sizes.as_slice(), &partition).map_err(
                    |v| AsymptoticError::Internal(format!("constructed partition: {v}")),
                )?;
                return Ok(AsymptoticOutcome { partition, stats });
            }
            Err(e @ AsymptoticError::InsufficientCoverage { .. }) => last_err = Some(e),
            Err(e) => {
                last_err = Some(e);
                break;
            }
        }
    }
    let err = last_err.expect("at least one attempt");
    if config.fallback {
        let solved = zero_sum_partition(group, &Ground::NonZero, sizes, &config.budget)?;
        verify_partition(group, &Ground::NonZero, sizes.as_slice(), &solved.partition)
            .map_err(|v| AsymptoticError::Internal(format!("fallback partition: {v}")))?;
        stats.fallback = true;
        return Ok(AsymptoticOutcome {
            partition: solved.partition,
            stats,
        });
    }
    Err(err)
}

/// Joins the parts of split terms back together.
fn assemble(sizes: &SizeSequence, plan: &SplitPlan, terms: Vec<Vec<Element>>) -> ZeroSumPartition {
    let mut parts = vec![Vec::new(); sizes.len()];
    for (part, &i) in terms.into_iter().zip(&plan.origin) {
        parts[i].extend(part);
    }
    ZeroSumPartition::new(parts)
}

/// Hands out parts to plan terms by size.
struct Filler {
    terms: Vec<Option<Vec<Element>>>,
}

impl Filler {
    fn new(plan: &SplitPlan) -> Self {
        Filler {
            terms: vec![None; plan.terms.len()],
        }
    }

    fn put(&mut self, plan: &SplitPlan, part: Vec<Element>) {
        let slot = (0..plan.terms.len())
            .find(|&i| self.terms[i].is_none() && plan.terms[i] == part.len())
            .expect("free term of matching size");
        self.terms[slot] = Some(part);
    }

    fn finish(self) -> Result<Vec<Vec<Element>>, AsymptoticError> {
        self.terms
            .into_iter()
            .map(|t| t.ok_or_else(|| AsymptoticError::Internal("unfilled term".into())))
            .collect()
    }
}

fn take_pairs(
    filler: &mut Filler,
    plan: &SplitPlan,
    quotient: &InverseQuotient,
    blocked: &[bool],
    needed: usize,
) -> Result<(), AsymptoticError> {
    let free: Vec<usize> = (0..quotient.len()).filter(|&c| !blocked[c]).collect();
    if free.len() < needed {
        return Err(AsymptoticError::InsufficientPairs {
            needed,
            available: free.len(),
        });
    }
    for &c in &free[..needed] {
        filler.put(plan, quotient.classes()[c].to_vec());
    }
    Ok(())
}

/// Pairs first, then the parts of size 3 to 5 by exact packing in what is
/// left of `Γ - {0}`.
fn saturated(
    group: &AbelianGroup,
    plan: &SplitPlan,
    quotient: &InverseQuotient,
    budget: &Budget,
) -> Result<Vec<Vec<Element>>, AsymptoticError> {
    let mut filler = Filler::new(plan);
    let twos = plan.count(2);
    take_pairs(
        &mut filler,
        plan,
        quotient,
        &vec![false; quotient.len()],
        twos,
    )?;
    let mut used = vec![false; group.order()];
    for c in &quotient.classes()[..twos] {
        for e in c {
            used[e.index()] = true;
        }
    }
    let rest: Vec<Element> = group
        .elements()
        .filter(|e| !e.is_zero() && !used[e.index()])
        .collect();
    let big: Vec<usize> = plan.terms.iter().copied().filter(|&r| r > 2).collect();
    if !big.is_empty() {
        let seq = SizeSequence::new(big)?;
        let solved = backtrack(group, &Ground::Subset(rest), &seq, budget)?;
        for part in solved.partition.into_parts() {
            filler.put(plan, part);
        }
    }
    filler.finish()
}

fn pairs_and_triples(
    group: &AbelianGroup,
    plan: &SplitPlan,
    classes: &ElementClasses,
    quotient: &InverseQuotient,
    t_i: &TripleSystem,
    seed: u64,
    stats: &mut AsymptoticStats,
) -> Result<(Vec<Vec<Element>>, TripleSource), AsymptoticError> {
    let m2 = plan.count(2);
    let m3 = plan.count(3);
    let mut filler = Filler::new(plan);
    let mut blocked = vec![false; quotient.len()];

    if m3 <= t_i.triples.len() {
        for t in &t_i.triples[..m3] {
            filler.put(plan, t.to_vec());
        }
        take_pairs(&mut filler, plan, quotient, &blocked, m2)?;
        return Ok((filler.finish()?, TripleSource::Involutions));
    }

    let need = (m3 - t_i.triples.len()).div_ceil(2);
    let mut triples: Vec<[Element; 3]> = Vec::new();
    let source;
    if 2 * classes.involutions.len() < classes.rest.len() {
        source = TripleSource::ClassTriples;
        let ct = class_triples(group, classes, quotient);
        let h = Hypergraph::new(
            quotient.len(),
            ct.iter().map(|t| t.classes.to_vec()).collect(),
        );
        let m = greedy_matching(&h, seed);
        stats.matched = Some(m.edges.len());
        stats.coverage = Some(m.coverage);
        if m.edges.len() < need {
            return Err(AsymptoticError::InsufficientCoverage {
                needed: need,
                found: m.edges.len(),
                coverage: m.coverage,
            });
        }
        for &i in &m.edges[..need] {
            let t = ct[i].representative;
            triples.push(t);
            triples.push(t.map(|e| group.neg(e)));
            for c in ct[i].classes {
                blocked[c] = true;
            }
        }
        triples.extend(t_i.triples.iter().copied());
    } else {
        source = TripleSource::Quadruples;
        let iota0 = classes
            .iota0
            .ok_or_else(|| AsymptoticError::Internal("|I| >= |R|/2 without ι0".into()))?;
        let x = classes.rest.len().div_ceil(6);
        let free: Vec<usize> = (0..t_i.triples.len())
            .filter(|&i| !t_i.triples[i].contains(&iota0))
            .collect();
        if free.len() < x {
            return Err(AsymptoticError::InsufficientTriples {
                needed: x,
                available: free.len(),
            });
        }
        let selected: Vec<[Element; 3]> = free[..x].iter().map(|&i| t_i.triples[i]).collect();
        let q = QuadHypergraph::build(group, classes, quotient, selected);
        let m = greedy_matching(&q.hypergraph(), seed);
        stats.matched = Some(m.edges.len());
        stats.coverage = Some(m.coverage);
        if m.edges.len() < need {
            return Err(AsymptoticError::InsufficientCoverage {
                needed: need,
                found: m.edges.len(),
                coverage: m.coverage,
            });
        }
        let mut traded = vec![false; t_i.triples.len()];
        for &i in &m.edges[..need] {
            let e = &q.edges[i];
            traded[free[e.u]] = true;
            triples.extend(QuadHypergraph::triples_of(group, e));
            for c in e.classes {
                blocked[c] = true;
            }
        }
        triples.extend(
            (0..t_i.triples.len())
                .filter(|&i| !traded[i])
                .map(|i| t_i.triples[i]),
        );
    }
    // surplus triples are simply left out
    for t in &triples[..m3] {
        filler.put(plan, t.to_vec());
    }
    take_pairs(&mut filler, plan, quotient, &blocked, m2)?;
    Ok((filler.finish()?, source))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    fn sz(v: &[usize]) -> SizeSequence {
        SizeSequence::new(v.to_vec()).unwrap()
    }

    fn el(grp: &AbelianGroup, c: &[u64]) -> Element {
        grp.element(c).unwrap()
    }

    #[test]
    fn splitting() {
        assert_eq!(split_sizes(&sz(&[7]), 0).terms, vec![3, 4]);
        assert_eq!(split_sizes(&sz(&[7]), 10).terms, vec![3, 2, 2]);
        assert_eq!(split_sizes(&sz(&[9]), 0).terms, vec![3, 3, 3]);
        assert_eq!(split_sizes(&sz(&[10]), 0).terms, vec![3, 3, 4]);
        assert_eq!(split_sizes(&sz(&[6]), 0).terms, vec![3, 3]);
        assert_eq!(split_sizes(&sz(&[2, 5]), 1).terms, vec![2, 5]);
        assert_eq!(split_sizes(&sz(&[5]), 1).terms, vec![2, 3]);
        assert_eq!(split_sizes(&sz(&[4, 4]), 3).terms, vec![2, 2, 4]);
        let p = split_sizes(&sz(&[8, 5]), 10);
        assert_eq!(p.terms, vec![2, 2, 2, 2, 2, 3]);
        assert_eq!(p.origin, vec![0, 0, 0, 0, 1, 1]);
        assert_eq!(p.case(), SplitCase::PairsAndTriples);
    }

    #[test]
    fn classification() {
        let z7 = g(&[7]);
        let c = classify(&z7).unwrap();
        assert!(c.involutions.is_empty());
        assert_eq!(c.rest.len(), 6);
        let grp = g(&[4, 2]);
        let c = classify(&grp).unwrap();
        assert_eq!(c.involutions.len(), 3);
        assert_eq!(
            c.rest,
            vec![
                el(&grp, &[1, 0]),
                el(&grp, &[1, 1]),
                el(&grp, &[3, 0]),
                el(&grp, &[3, 1])
            ]
        );
        assert_eq!(c.iota0, Some(el(&grp, &[2, 0])));
        let c = classify(&g(&[12])).unwrap();
        assert_eq!((c.involutions.len(), c.rest.len(), c.iota0), (1, 10, None));
        assert!(matches!(
            classify(&g(&[2, 2])),
            Err(AsymptoticError::OutOfScope(_))
        ));
    }

    fn check_cover(grp: &AbelianGroup, sys: &TripleSystem) {
        let mut seen = HashSet::new();
        for t in &sys.triples {
            assert!(grp.sum_of(*t).is_zero());
            for e in t {
                assert!(grp.is_involution(*e));
                assert!(seen.insert(*e));
            }
        }
        if let Some(q) = sys.quadruple {
            assert!(grp.sum_of(q).is_zero());
            for e in q {
                assert!(seen.insert(e));
            }
        }
        assert_eq!(seen.len(), grp.involutions().len());
    }

    #[test]
    fn involution_triples() {
        let grp = g(&[4, 2]);
        let sys = triple_cover_i(&grp);
        assert_eq!(
            sys.triples,
            vec![[el(&grp, &[0, 1]), el(&grp, &[2, 0]), el(&grp, &[2, 1])]]
        );
        for f in [
            &[2u64, 2, 4][..],
            &[2, 2, 2, 2],
            &[2, 2, 2, 2, 2],
            &[2, 2, 2, 2, 2, 2],
            &[2; 7],
        ] {
            let grp = g(f);
            let sys = triple_cover_i(&grp);
            check_cover(&grp, &sys);
            let s = grp.two_rank();
            assert_eq!(sys.quadruple.is_some(), s % 2 == 1, "{grp}");
        }
        assert_eq!(triple_cover_i(&g(&[2, 2, 2, 2])).triples.len(), 5);
        assert_eq!(triple_cover_i(&g(&[2, 2, 2])).triples.len(), 1);
        assert_eq!(triple_cover_i(&g(&[12])), TripleSystem::default());
    }

    #[test]
    fn z7_class_triples() {
        let z7 = g(&[7]);
        let c = classify(&z7).unwrap();
        let q = InverseQuotient::new(&z7, &c.rest);
        let ts = zero_sum_triples(&z7, &c);
        let idx: Vec<Vec<usize>> = ts
            .iter()
            .map(|t| t.iter().map(|e| e.index()).collect())
            .collect();
        assert_eq!(idx, vec![vec![1, 2, 4], vec![3, 5, 6]]);
        assert_eq!(class_triples(&z7, &c, &q).len(), 1);
        assert!(extra_triples_in_inverse_pairs(&z7, &c).is_empty());
    }

    #[test]
    fn quadruple_hypergraph() {
        let grp = g(&[4, 2, 2, 2]);
        let c = classify(&grp).unwrap();
        let q = InverseQuotient::new(&grp, &c.rest);
        let sys = triple_cover_i(&grp);
        let iota0 = c.iota0.unwrap();
        let selected: Vec<_> = sys
            .triples
            .iter()
            .copied()
            .filter(|t| !t.contains(&iota0))
            .collect();
        let qh = QuadHypergraph::build(&grp, &c, &q, selected.clone());
        for (u, t) in selected.iter().enumerate() {
            let quads = involution_quadruples(&grp, &c, &q, *t);
            let mut all: Vec<usize> = quads.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..q.len()).collect::<Vec<_>>());
            assert_eq!(qh.u_degree(u), c.rest.len() / 2);
        }
        for e in &qh.edges {
            let ts = QuadHypergraph::triples_of(&grp, e);
            let mut nine: Vec<Element> = ts.iter().flatten().copied().collect();
            for t in ts {
                assert!(grp.sum_of(t).is_zero());
            }
            nine.sort_unstable();
            nine.dedup();
            assert_eq!(nine.len(), 9);
        }
    }

    #[test]
    fn examples_from_small_groups() {
        let cfg = AsymptoticConfig::default();
        let grp = g(&[4, 2, 3]);
        let out = partition_asymptotic(&grp, &sz(&[3, 3, 2, 2]), &cfg).unwrap();
        verify_partition(&grp, &Ground::NonZero, &[3, 3, 2, 2], &out.partition).unwrap();

        let z55 = g(&[5, 5]);
        let out = partition_asymptotic(&z55, &sz(&[3, 3, 3, 2]), &cfg).unwrap();
        assert_eq!(out.stats.source, Some(TripleSource::ClassTriples));

        assert!(matches!(
            partition_asymptotic(&g(&[13]), &sz(&[2; 7]), &cfg),
            Err(AsymptoticError::Precondition(_))
        ));
        assert!(matches!(
            partition_asymptotic(&g(&[25]), &sz(&[20]), &cfg),
            Err(AsymptoticError::Precondition(_))
        ));
    }

    #[test]
    fn saturated_pairs() {
        let grp = g(&[4, 4, 4]);
        let c = classify(&grp).unwrap();
        let half = c.rest.len() / 2;
        let mut s = vec![2; half - 1];
        s.extend([4, 5]);
        let cfg = AsymptoticConfig {
            epsilon: 0.01,
            ..Default::default()
        };
        let out = partition_asymptotic(&grp, &sz(&s), &cfg).unwrap();
        assert_eq!(out.stats.case, SplitCase::SaturatedPairs);
    }
}
