//! Irregular arc labelings.
//!
//! An arc labeling `ψ` gives every vertex the weight
//! `Σ ψ(incoming) - Σ ψ(outgoing)`; it is irregular when these weights are
//! pairwise distinct. Weights of a component always sum to 0, and conversely
//! any injective vertex map with zero component sums comes from a labeling,
//! so the problem reduces to zero-sum partitions.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Digraph, DigraphError, ReductionStep, Residual};
use crate::group::{AbelianGroup, Element};
use crate::partition::{
    zero_sum_partition, Budget, Certificate, Ground, PartitionError, SizeSequence,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("arc {arc} has no label")]
    IncompleteLabeling { arc: usize },
    #[error("vertex map has {found} entries for {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error("{what} {index} carries an element outside the group")]
    ForeignElement { what: &'static str, index: usize },
    #[error("the component of vertex {vertex} does not sum to 0")]
    ComponentSum { vertex: usize },
    #[error("provably unrealizable: {0}")]
    ProvablyUnrealizable(String),
    #[error("no realization exists: {0}")]
    NoRealization(Certificate),
    #[error("search budget exhausted after {nodes} nodes without a decision")]
    Unknown { nodes: u64 },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// `φ`: one group element per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexAssignment(pub Vec<Element>);

/// `ψ`: one label per arc, `None` where unset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcLabeling(pub Vec<Option<Element>>);

impl ArcLabeling {
    pub fn total(labels: Vec<Element>) -> Self {
        ArcLabeling(labels.into_iter().map(Some).collect())
    }

    pub fn get(&self, arc: usize) -> Option<Element> {
        self.0.get(arc).copied().flatten()
    }

    /// All labels, or the first unlabeled arc.
    pub fn to_total(&self) -> Result<Vec<Element>, RealizeError> {
        self.0
            .iter()
            .enumerate()
            .map(|(arc, l)| l.ok_or(RealizeError::IncompleteLabeling { arc }))
            .collect()
    }
}

/// `φ_ψ`: the weight of every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedDegrees(pub Vec<Element>);

/// Weight of every vertex: labels of incoming arcs minus labels of outgoing
/// arcs.
pub fn weighted_degrees(
    digraph: &Digraph,
    group: &AbelianGroup,
    psi: &ArcLabeling,
) -> Result<WeightedDegrees, RealizeError> {
    if psi.0.len() != digraph.arc_count() {
        return Err(RealizeError::IncompleteLabeling {
            arc: psi.0.len().min(digraph.arc_count()),
        });
    }
    let mut w = vec![Element::ZERO; digraph.vertex_count()];
    for (arc, &(t, h)) in digraph.arcs().iter().enumerate() {
        let l = psi.0[arc].ok_or(RealizeError::IncompleteLabeling { arc })?;
        if !group.contains(l) {
            return Err(RealizeError::ForeignElement {
                what: "arc",
                index: arc,
            });
        }
        w[h] = group.add(w[h], l);
        w[t] = group.sub(w[t], l);
    }
    Ok(WeightedDegrees(w))
}

/// A labeling whose weights are exactly `phi`. Arcs outside a breadth-first
/// spanning forest get 0; tree arcs are fixed from the last vertex of the
/// spanning order backwards.
pub fn arc_labeling_from_vertex_map(
    digraph: &Digraph,
    group: &AbelianGroup,
    phi: &VertexAssignment,
) -> Result<ArcLabeling, RealizeError> {
    let n = digraph.vertex_count();
    if phi.0.len() != n {
        return Err(RealizeError::WrongLength {
            expected: n,
            found: phi.0.len(),
        });
    }
    if let Some(v) = phi.0.iter().position(|&e| !group.contains(e)) {
        return Err(RealizeError::ForeignElement {
            what: "vertex",
            index: v,
        });
    }
    let mut labels = vec![Element::ZERO; digraph.arc_count()];
    let mut acc = vec![Element::ZERO; n];
    for comp in digraph.components() {
        if !group.sum_of(comp.iter().map(|&v| phi.0[v])).is_zero() {
            return Err(RealizeError::ComponentSum { vertex: comp[0] });
        }
        let order = digraph.spanning_arc_order(&comp)?;
        for i in (1..order.vertices.len()).rev() {
            let x = order.vertices[i];
            let arc = order.tree_arcs[i - 1];
            let (t, h) = digraph.arcs()[arc];
            let label = if h == x {
                group.sub(phi.0[x], acc[x])
            } else {
                group.sub(acc[x], phi.0[x])
            };
            labels[arc] = label;
            acc[h] = group.add(acc[h], label);
            acc[t] = group.sub(acc[t], label);
        }
    }
    Ok(ArcLabeling::total(labels))
}

/// Irregular labeling with nonzero labels and nonzero weights, built by
/// peeling the digraph down to nothing and labeling it back up one move at a
/// time. Needs components of order at least 3, `|Γ| >= 4|V|` and `|Γ| >= 12`.
///
/// Choices are the first admissible element, or a uniformly random admissible
/// one when `seed` is given.
pub fn irregular_label(
    digraph: &Digraph,
    group: &AbelianGroup,
    seed: Option<u64>,
) -> Result<ArcLabeling, RealizeError> {
    digraph.check_min_component_order()?;
    let order = group.order();
    let n = digraph.vertex_count();
    if order < 4 * n {
        return Err(RealizeError::Hypothesis(format!(
            "|Γ| = {order} < 4|V| = {}",
            4 * n
        )));
    }
    if order < 12 {
        return Err(RealizeError::Hypothesis(format!("|Γ| = {order} < 12")));
    }

    let mut residual = Residual::new(digraph);
    let mut steps = Vec::new();
    while let Some(step) = residual.step()? {
        residual.remove(&step);
        steps.push(step);
    }

    let mut chooser = Chooser {
        group,
        rng: seed.map(ChaCha8Rng::seed_from_u64),
    };
    let mut labels: Vec<Option<Element>> = vec![None; digraph.arc_count()];
    let mut weight = vec![Element::ZERO; n];
    let mut alive = vec![false; n];
    let arcs = digraph.arcs();

    for step in steps.iter().rev() {
        match *step {
            ReductionStep::P3Component {
                center,
                ends: [p, q],
                arcs: [ap, aq],
            } => {
                let others: Vec<Element> =
                    (0..n).filter(|&x| alive[x]).map(|x| weight[x]).collect();
                let mut forbid: HashSet<Element> = others.iter().copied().collect();
                forbid.insert(Element::ZERO);
                let a = chooser.pick(&forbid)?;

                let mut forbid: HashSet<Element> = others.iter().copied().collect();
                forbid.extend([Element::ZERO, a, group.neg(a), group.scale(-2, a)]);
                forbid.extend(group.half_set(group.neg(a)));
                forbid.extend(others.iter().map(|&w| group.sub(group.neg(a), w)));
                let b = chooser.pick(&forbid)?;

                for (end, arc, val) in [(p, ap, a), (q, aq, b)] {
                    let label = if arcs[arc].1 == end {
                        val
                    } else {
                        group.neg(val)
                    };
                    labels[arc] = Some(label);
                    weight[end] = val;
                    alive[end] = true;
                }
                weight[center] = group.neg(group.add(a, b));
                alive[center] = true;
            }
            ReductionStep::NonBridgeArc { arc } => {
                let (u, v) = arcs[arc];
                let (wu, wv) = (weight[u], weight[v]);
                let mut forbid: HashSet<Element> = HashSet::new();
                forbid.extend([Element::ZERO, wu, group.neg(wv)]);
                for x in (0..n).filter(|&x| alive[x] && x != u && x != v) {
                    forbid.insert(group.sub(wu, weight[x]));
                    forbid.insert(group.sub(weight[x], wv));
                }
                forbid.extend(group.half_set(group.sub(wu, wv)));
                let a = chooser.pick(&forbid)?;
                labels[arc] = Some(a);
                weight[u] = group.sub(wu, a);
                weight[v] = group.add(wv, a);
            }
            ReductionStep::LeafArc { arc, pendant } => {
                let (t, h) = arcs[arc];
                let v = if t == pendant { h } else { t };
                let wv = weight[v];
                let mut forbid: HashSet<Element> = HashSet::new();
                forbid.extend([Element::ZERO, wv]);
                for x in (0..n).filter(|&x| alive[x] && x != v) {
                    forbid.insert(weight[x]);
                    forbid.insert(group.sub(wv, weight[x]));
                }
                forbid.extend(group.half_set(wv));
                let a = chooser.pick(&forbid)?;
                labels[arc] = Some(if h == pendant { a } else { group.neg(a) });
                weight[pendant] = a;
                weight[v] = group.sub(wv, a);
                alive[pendant] = true;
            }
        }
    }
    Ok(ArcLabeling(labels))
}

struct Chooser<'g> {
    group: &'g AbelianGroup,
    rng: Option<ChaCha8Rng>,
}

impl Chooser<'_> {
    fn pick(&mut self, forbid: &HashSet<Element>) -> Result<Element, RealizeError> {
        if forbid.len() >= self.group.order() {
            return Err(RealizeError::Internal(format!(
                "{} of {} elements excluded",
                forbid.len(),
                self.group.order()
            )));
        }
        let admissible = self.group.elements().filter(|e| !forbid.contains(e));
        let choice = match &mut self.rng {
            None => admissible.into_iter().next(),
            Some(rng) => admissible.collect::<Vec<_>>().choose(rng).copied(),
        };
        choice.ok_or_else(|| RealizeError::Internal("no admissible element".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Try partition, induction and search in turn.
    #[default]
    Auto,
    /// Zero-sum partition of `Γ - {0}` (odd order or three involutions).
    Partition,
    /// Peeling induction (`|Γ| >= 4|V|`).
    Induction,
    /// Exact search for a vertex map with zero component sums.
    Search,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Method::Auto),
            "partition" => Ok(Method::Partition),
            "induction" => Ok(Method::Induction),
            "search" => Ok(Method::Search),
            _ => Err(format!("unknown method {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RealizeOptions {
    pub method: Method,
    pub budget: Budget,
    /// Randomizes the induction's choices.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Partition,
    Induction,
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub phi: VertexAssignment,
    pub psi: ArcLabeling,
    pub route: Route,
}

/// An irregular labeling of `digraph` in `group`.
///
/// In automatic mode: elementary 2-groups of order `2^m` are rejected when
/// `|V| = 2^m - 2`; groups of odd order or with three involutions go through
/// a partition of `Γ - {0}`; groups with `|Γ| >= 4|V|` use the induction;
/// everything else falls back to exact search.
pub fn realize(
    digraph: &Digraph,
    group: &AbelianGroup,
    options: &RealizeOptions,
) -> Result<Realization, RealizeError> {
    digraph.check_min_component_order()?;
    let n = digraph.vertex_count();
    let order = group.order();
    if order < n {
        return Err(RealizeError::ProvablyUnrealizable(format!(
            "{n} vertices need distinct weights but |Γ| = {order}"
        )));
    }
    match options.method {
        Method::Partition => via_partition(digraph, group, &options.budget),
        Method::Induction => via_induction(digraph, group, options.seed),
        Method::Search => via_search(digraph, group, &options.budget),
        Method::Auto => {
            if group.is_elementary_2group() && n + 2 == order {
                return Err(RealizeError::ProvablyUnrealizable(format!(
                    "|V| = 2^m - 2 = {n} in the elementary 2-group of order 2^{}",
                    group.two_rank()
                )));
            }
            if partition_route_applies(group) {
                return via_partition(digraph, group, &options.budget);
            }
            if order >= 4 * n && order >= 12 {
                return via_induction(digraph, group, options.seed);
            }
            via_search(digraph, group, &options.budget)
        }
    }
}

fn partition_route_applies(group: &AbelianGroup) -> bool {
    group.order() % 2 == 1 || group.involutions().len() == 3
}

fn via_induction(
    digraph: &Digraph,
    group: &AbelianGroup,
    seed: Option<u64>,
) -> Result<Realization, RealizeError> {
    let psi = irregular_label(digraph, group, seed)?;
    let phi = VertexAssignment(weighted_degrees(digraph, group, &psi)?.0);
    Ok(Realization {
        phi,
        psi,
        route: Route::Induction,
    })
}

fn via_partition(
    digraph: &Digraph,
    group: &AbelianGroup,
    budget: &Budget,
) -> Result<Realization, RealizeError> {
    if !partition_route_applies(group) {
        return Err(RealizeError::Hypothesis(format!(
            "{group} has even order and {} involution(s)",
            group.involutions().len()
        )));
    }
    let comps = digraph.components();
    let n = digraph.vertex_count();
    let order = group.order();
    let mut sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    // sizes must fill Γ - {0} exactly; 0 may join the largest component
    let largest = (0..sizes.len())
        .max_by_key(|&i| (sizes[i], std::cmp::Reverse(i)))
        .unwrap();
    let mut zero_joins = false;
    match (order - 1).cmp(&n) {
        std::cmp::Ordering::Less => {
            sizes[largest] -= 1;
            zero_joins = true;
        }
        std::cmp::Ordering::Equal => {}
        std::cmp::Ordering::Greater => {
            let pad = order - 1 - n;
            if pad == 1 {
                sizes[largest] -= 1;
                sizes.push(2);
                zero_joins = true;
            } else {
                sizes.push(pad);
            }
        }
    }
    let seq = SizeSequence::new(sizes).map_err(|e| RealizeError::Internal(e.to_string()))?;
    let solved = zero_sum_partition(group, &Ground::NonZero, &seq, budget).map_err(lift)?;
    let mut parts = solved.partition.into_parts();
    if zero_joins {
        parts[largest].insert(0, Element::ZERO);
    }
    finish(digraph, group, &comps, &parts, Route::Partition)
}

fn via_search(
    digraph: &Digraph,
    group: &AbelianGroup,
    budget: &Budget,
) -> Result<Realization, RealizeError> {
    let comps = digraph.components();
    let seq = SizeSequence::new(comps.iter().map(Vec::len).collect())
        .map_err(|e| RealizeError::Internal(e.to_string()))?;
    let solved = zero_sum_partition(group, &Ground::All, &seq, budget).map_err(lift)?;
    finish(
        digraph,
        group,
        &comps,
        solved.partition.parts(),
        Route::Search,
    )
}

fn lift(e: PartitionError) -> RealizeError {
    match e {
        PartitionError::NoPartition(c) => RealizeError::NoRealization(c),
        PartitionError::Unknown { nodes } => RealizeError::Unknown { nodes },
        other => RealizeError::Internal(other.to_string()),
    }
}

/// Component `i` (by smallest vertex) takes part `i`; vertices in ascending
/// order take the part's elements in ascending order.
fn finish(
    digraph: &Digraph,
    group: &AbelianGroup,
    comps: &[Vec<usize>],
    parts: &[Vec<Element>],
    route: Route,
) -> Result<Realization, RealizeError> {
    let mut phi = vec![Element::ZERO; digraph.vertex_count()];
    for (comp, part) in comps.iter().zip(parts) {
        let mut part = part.clone();
        part.sort_unstable();
        for (&v, &e) in comp.iter().zip(&part) {
            phi[v] = e;
        }
    }
    let phi = VertexAssignment(phi);
    let psi = arc_labeling_from_vertex_map(digraph, group, &phi)?;
    Ok(Realization { phi, psi, route })
}

/// Which checks [`verify_realization`] runs beyond injectivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerifyFlags {
    pub nonzero_arcs: bool,
    pub nonzero_weights: bool,
}

impl VerifyFlags {
    pub const STRICT: VerifyFlags = VerifyFlags {
        nonzero_arcs: true,
        nonzero_weights: true,
    };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealizationViolation {
    LabelCount {
        expected: usize,
        found: usize,
    },
    Unlabeled {
        arc: usize,
    },
    ForeignLabel {
        arc: usize,
    },
    SameWeight {
        first: usize,
        second: usize,
        weight: String,
    },
    ZeroArc {
        arc: usize,
    },
    ZeroWeight {
        vertex: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub violation: Option<RealizationViolation>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Definition-level check: recomputes all weights from `psi` and reports the
/// first violation.
pub fn verify_realization(
    digraph: &Digraph,
    group: &AbelianGroup,
    psi: &ArcLabeling,
    flags: VerifyFlags,
) -> Verdict {
    let fail = |v| Verdict { violation: Some(v) };
    if psi.0.len() != digraph.arc_count() {
        return fail(RealizationViolation::LabelCount {
            expected: digraph.arc_count(),
            found: psi.0.len(),
        });
    }
    let mut weight = vec![Element::ZERO; digraph.vertex_count()];
    for (arc, &(t, h)) in digraph.arcs().iter().enumerate() {
        let Some(l) = psi.0[arc] else {
            return fail(RealizationViolation::Unlabeled { arc });
        };
        if !group.contains(l) {
            return fail(RealizationViolation::ForeignLabel { arc });
        }
        if flags.nonzero_arcs && l.is_zero() {
            return fail(RealizationViolation::ZeroArc { arc });
        }
        weight[h] = group.add(weight[h], l);
        weight[t] = group.sub(weight[t], l);
    }
    let mut seen: HashMap<Element, usize> = HashMap::new();
    for (x, &w) in weight.iter().enumerate() {
        if let Some(&first) = seen.get(&w) {
            return fail(RealizationViolation::SameWeight {
                first,
                second: x,
                weight: group.format(w),
            });
        }
        seen.insert(w, x);
    }
    if flags.nonzero_weights {
        if let Some(vertex) = weight.iter().position(|w| w.is_zero()) {
            return fail(RealizationViolation::ZeroWeight { vertex });
        }
    }
    Verdict { violation: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    fn dg(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::new(n, arcs.to_vec()).unwrap()
    }

    fn el(i: usize) -> Element {
        Element::from_index(i)
    }

    #[test]
    fn weights_of_a_directed_path() {
        let z7 = g(&[7]);
        let p3 = dg(3, &[(0, 1), (1, 2)]);
        let (a, b) = (el(2), el(5));
        let w = weighted_degrees(&p3, &z7, &ArcLabeling::total(vec![a, b])).unwrap();
        assert_eq!(w.0, vec![z7.neg(a), z7.sub(a, b), b]);
        let zero = weighted_degrees(&p3, &z7, &ArcLabeling::total(vec![el(0); 2])).unwrap();
        assert!(zero.0.iter().all(|e| e.is_zero()));
        assert_eq!(
            weighted_degrees(&p3, &z7, &ArcLabeling(vec![Some(a), None])),
            Err(RealizeError::IncompleteLabeling { arc: 1 })
        );
    }

    #[test]
    fn vertex_map_to_labels() {
        let z7 = g(&[7]);
        let p3 = dg(3, &[(0, 1), (1, 2)]);
        let (a, b) = (el(2), el(5));
        let phi = VertexAssignment(vec![z7.neg(a), z7.sub(a, b), b]);
        let psi = arc_labeling_from_vertex_map(&p3, &z7, &phi).unwrap();
        assert_eq!(psi, ArcLabeling::total(vec![a, b]));

        let c3 = dg(3, &[(0, 1), (1, 2), (2, 0)]);
        let phi = VertexAssignment(vec![el(1), el(2), el(4)]);
        let psi = arc_labeling_from_vertex_map(&c3, &z7, &phi).unwrap();
        assert_eq!(weighted_degrees(&c3, &z7, &psi).unwrap().0, phi.0);

        let bad = VertexAssignment(vec![el(1), el(2), el(3)]);
        assert_eq!(
            arc_labeling_from_vertex_map(&c3, &z7, &bad),
            Err(RealizeError::ComponentSum { vertex: 0 })
        );
    }

    #[test]
    fn induction_on_small_cases() {
        let z12 = g(&[12]);
        let p3 = dg(3, &[(0, 1), (1, 2)]);
        let psi = irregular_label(&p3, &z12, None).unwrap();
        assert!(verify_realization(&p3, &z12, &psi, VerifyFlags::STRICT).passed());

        let two = dg(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (5, 4)]);
        let z24 = g(&[24]);
        for seed in [None, Some(1), Some(2)] {
            let psi = irregular_label(&two, &z24, seed).unwrap();
            assert!(verify_realization(&two, &z24, &psi, VerifyFlags::STRICT).passed());
        }
        assert!(matches!(
            irregular_label(&p3, &g(&[8]), None),
            Err(RealizeError::Hypothesis(_))
        ));
        assert!(matches!(
            irregular_label(&dg(2, &[(0, 1)]), &z24, None),
            Err(RealizeError::Digraph(DigraphError::SmallComponent { .. }))
        ));
    }

    #[test]
    fn realize_routes() {
        let v8 = g(&[2, 2, 2]);
        let two_paths = dg(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]);
        assert!(matches!(
            realize(&two_paths, &v8, &RealizeOptions::default()),
            Err(RealizeError::ProvablyUnrealizable(_))
        ));
        let search = RealizeOptions {
            method: Method::Search,
            ..Default::default()
        };
        assert!(matches!(
            realize(&two_paths, &v8, &search),
            Err(RealizeError::NoRealization(
                Certificate::ExhaustiveSearch { .. }
            ))
        ));

        let p5 = dg(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let r = realize(&p5, &v8, &RealizeOptions::default()).unwrap();
        assert_eq!(r.route, Route::Search);
        assert!(verify_realization(&p5, &v8, &r.psi, VerifyFlags::default()).passed());

        let z25 = g(&[25]);
        let mixed = dg(6, &[(0, 1), (1, 2), (3, 4), (4, 5), (5, 3)]);
        let r = realize(&mixed, &z25, &RealizeOptions::default()).unwrap();
        assert_eq!(r.route, Route::Partition);
        assert!(verify_realization(&mixed, &z25, &r.psi, VerifyFlags::default()).passed());
    }

    #[test]
    fn partition_route_padding() {
        // |V| = n, n - 1, n - 2 and far below n
        let c3 = |k: usize| {
            let arcs: Vec<(usize, usize)> = (0..k)
                .flat_map(|c| {
                    [
                        (3 * c, 3 * c + 1),
                        (3 * c + 1, 3 * c + 2),
                        (3 * c + 2, 3 * c),
                    ]
                })
                .collect();
            dg(3 * k, &arcs)
        };
        let opts = RealizeOptions {
            method: Method::Partition,
            ..Default::default()
        };
        for (f, k) in [
            (&[9u64][..], 3),
            (&[7], 2),
            (&[8, 2], 5),
            (&[5], 1),
            (&[15], 3),
            (&[4, 2], 2),
        ] {
            let grp = g(f);
            let d = c3(k);
            let r = realize(&d, &grp, &opts).unwrap();
            assert!(
                verify_realization(&d, &grp, &r.psi, VerifyFlags::default()).passed(),
                "{grp} k={k}"
            );
        }
        assert!(matches!(
            realize(&c3(1), &g(&[8]), &opts),
            Err(RealizeError::Hypothesis(_))
        ));
    }

    #[test]
    fn verifier_flags() {
        let z12 = g(&[12]);
        let p3 = dg(3, &[(0, 1), (1, 2)]);
        let zero = ArcLabeling::total(vec![el(0), el(0)]);
        assert!(matches!(
            verify_realization(&p3, &z12, &zero, VerifyFlags::default()).violation,
            Some(RealizationViolation::SameWeight { .. })
        ));
        let path = ArcLabeling::total(vec![el(0), el(3)]);
        // weights: 0, -3, 3
        let v = verify_realization(&p3, &z12, &path, VerifyFlags::default());
        assert!(v.passed());
        assert_eq!(
            verify_realization(
                &p3,
                &z12,
                &path,
                VerifyFlags {
                    nonzero_arcs: true,
                    ..Default::default()
                }
            )
            .violation,
            Some(RealizationViolation::ZeroArc { arc: 0 })
        );
        assert_eq!(
            verify_realization(
                &p3,
                &z12,
                &path,
                VerifyFlags {
                    nonzero_weights: true,
                    ..Default::default()
                }
            )
            .violation,
            Some(RealizationViolation::ZeroWeight { vertex: 0 })
        );
    }
}
