//! Directed multigraphs on dense vertex ids `0..n`.
//!
//! Connectivity questions (components, bridges, leaves) are answered on the
//! underlying undirected multigraph. Parallel arcs and opposite arcs between
//! the same pair are allowed; loops are not.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("arc {arc} is a loop at vertex {vertex}")]
    Loop { arc: usize, vertex: usize },
    #[error("arc {arc} refers to vertex {vertex}, but the digraph has {n} vertices")]
    VertexOutOfRange { arc: usize, vertex: usize, n: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("component containing vertex {vertex} has order {order} < 3")]
    SmallComponent { vertex: usize, order: usize },
    #[error("vertex set is not weakly connected: {0}")]
    Disconnected(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

/// One peeling move of the irregular-labeling induction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionStep {
    /// A whole component that is a path on three vertices; `arcs[i]` joins
    /// `center` and `ends[i]`.
    P3Component {
        center: usize,
        ends: [usize; 2],
        arcs: [usize; 2],
    },
    /// An arc lying on a cycle of the underlying multigraph.
    NonBridgeArc { arc: usize },
    /// An arc of a tree component whose `pendant` end has degree one.
    LeafArc { arc: usize, pendant: usize },
}

/// Vertices `x1..xk` of a component with, for each `i >= 2`, the arc that
/// attaches `x_i` to `{x1..x_{i-1}}`. `tree_arcs[i - 1]` belongs to `vertices[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningArcOrder {
    pub vertices: Vec<usize>,
    pub tree_arcs: Vec<usize>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self, DigraphError> {
        for (arc, &(t, h)) in arcs.iter().enumerate() {
            for vertex in [t, h] {
                if vertex >= n {
                    return Err(DigraphError::VertexOutOfRange { arc, vertex, n });
                }
            }
            if t == h {
                return Err(DigraphError::Loop { arc, vertex: t });
            }
        }
        Ok(Digraph { n, arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// `(tail, head)` pairs indexed by arc id.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn tail(&self, arc: usize) -> usize {
        self.arcs[arc].0
    }

    pub fn head(&self, arc: usize) -> usize {
        self.arcs[arc].1
    }

    /// Heads of arcs leaving `x`, ascending and without repeats.
    pub fn out_neighbors(&self, x: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.arcs.iter().filter(|a| a.0 == x).map(|a| a.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Tails of arcs entering `x`, ascending and without repeats.
    pub fn in_neighbors(&self, x: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.arcs.iter().filter(|a| a.1 == x).map(|a| a.0).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Weakly connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        Residual::new(self).components()
    }

    /// Ids of the arcs that are bridges of the underlying multigraph.
    pub fn bridges(&self) -> Vec<usize> {
        let res = Residual::new(self);
        let flags = res.bridge_flags();
        (0..self.arcs.len()).filter(|&a| flags[a]).collect()
    }

    /// Checks that every component has at least three vertices.
    pub fn check_min_component_order(&self) -> Result<(), DigraphError> {
        for comp in self.components() {
            if comp.len() < 3 {
                return Err(DigraphError::SmallComponent {
                    vertex: comp[0],
                    order: comp.len(),
                });
            }
        }
        Ok(())
    }

    /// Next peeling move, or `None` for the empty digraph.
    ///
    /// Priority: a component isomorphic to the path on three vertices, then a
    /// non-bridge arc, then a leaf arc. Ties go to the smallest
    /// (component minimum vertex, arc id).
    pub fn reduction_step(&self) -> Result<Option<ReductionStep>, DigraphError> {
        Residual::new(self).step()
    }

    /// Breadth-first spanning order of `component`, started at its smallest
    /// vertex, neighbours visited by (vertex id, arc id).
    pub fn spanning_arc_order(
        &self,
        component: &[usize],
    ) -> Result<SpanningArcOrder, DigraphError> {
        let mut inside = vec![false; self.n];
        for &v in component {
            if v >= self.n {
                return Err(DigraphError::Disconnected(format!(
                    "vertex {v} out of range"
                )));
            }
            inside[v] = true;
        }
        let Some(&start) = component.iter().min() else {
            return Ok(SpanningArcOrder {
                vertices: Vec::new(),
                tree_arcs: Vec::new(),
            });
        };
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n];
        for (id, &(t, h)) in self.arcs.iter().enumerate() {
            if inside[t] && inside[h] {
                adj[t].push((h, id));
                adj[h].push((t, id));
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut order = SpanningArcOrder {
            vertices: vec![start],
            tree_arcs: Vec::new(),
        };
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(y, id) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    order.vertices.push(y);
                    order.tree_arcs.push(id);
                    queue.push_back(y);
                }
            }
        }
        let mut distinct = component.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if order.vertices.len() != distinct.len() {
            return Err(DigraphError::Disconnected(format!(
                "reached {} of {} vertices from {start}",
                order.vertices.len(),
                distinct.len()
            )));
        }
        Ok(order)
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.arcs.len())?;
        for (t, h) in &self.arcs {
            writeln!(f, "{t} {h}")?;
        }
        Ok(())
    }
}

impl FromStr for Digraph {
    type Err = DigraphError;

    /// `n m` on the first line, then `m` lines `tail head`. Blank lines and
    /// lines starting with `#` are skipped.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_pair = |line: usize, text: &str| -> Result<(usize, usize), DigraphError> {
            let fields: Vec<&str> = text.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(DigraphError::Parse {
                    line,
                    msg: format!("expected two integers, found {}", fields.len()),
                });
            }
            let num = |t: &str| {
                t.parse::<usize>().map_err(|_| DigraphError::Parse {
                    line,
                    msg: format!("not a non-negative integer: {t:?}"),
                })
            };
            Ok((num(fields[0])?, num(fields[1])?))
        };
        let (line, header) = lines.next().ok_or(DigraphError::Parse {
            line: 1,
            msg: "missing header `n m`".into(),
        })?;
        let (n, m) = parse_pair(line, header)?;
        let mut arcs = Vec::with_capacity(m);
        let mut last = line;
        for (line, text) in lines {
            if arcs.len() == m {
                return Err(DigraphError::Parse {
                    line,
                    msg: "more arcs than declared".into(),
                });
            }
            arcs.push(parse_pair(line, text)?);
            last = line;
        }
        if arcs.len() != m {
            return Err(DigraphError::Parse {
                line: last,
                msg: format!("declared {m} arcs, found {}", arcs.len()),
            });
        }
        Digraph::new(n, arcs)
    }
}

/// A digraph with some vertices and arcs deleted; drives the peeling
/// induction without renumbering anything.
#[derive(Debug, Clone)]
pub(crate) struct Residual<'a> {
    graph: &'a Digraph,
    vertex_alive: Vec<bool>,
    arc_alive: Vec<bool>,
}

impl<'a> Residual<'a> {
    pub(crate) fn new(graph: &'a Digraph) -> Self {
        Residual {
            graph,
            vertex_alive: vec![true; graph.n],
            arc_alive: vec![true; graph.arcs.len()],
        }
    }

    pub(crate) fn alive_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.graph.n).filter(|&v| self.vertex_alive[v])
    }

    pub(crate) fn remove(&mut self, step: &ReductionStep) {
        match *step {
            ReductionStep::P3Component { center, ends, arcs } => {
                self.vertex_alive[center] = false;
                for v in ends {
                    self.vertex_alive[v] = false;
                }
                for a in arcs {
                    self.arc_alive[a] = false;
                }
            }
            ReductionStep::NonBridgeArc { arc } => self.arc_alive[arc] = false,
            ReductionStep::LeafArc { arc, pendant } => {
                self.arc_alive[arc] = false;
                self.vertex_alive[pendant] = false;
            }
        }
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.graph.n];
        for (id, &(t, h)) in self.graph.arcs.iter().enumerate() {
            if self.arc_alive[id] {
                adj[t].push((h, id));
                adj[h].push((t, id));
            }
        }
        adj
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.graph.n];
        let mut out = Vec::new();
        for s in self.alive_vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &(y, _) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Bridge flags per arc id (dead arcs are `false`), by iterative low-link.
    fn bridge_flags(&self) -> Vec<bool> {
        let adj = self.adjacency();
        let n = self.graph.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![usize::MAX; n];
        let mut is_bridge = vec![false; self.graph.arcs.len()];
        let mut clock = 0;
        for root in self.alive_vertices() {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = clock;
            low[root] = clock;
            clock += 1;
            // (vertex, arc used to enter it, next adjacency position)
            let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
            while let Some(frame) = stack.last_mut() {
                let (v, parent_arc, pos) = *frame;
                if pos < adj[v].len() {
                    frame.2 += 1;
                    let (w, id) = adj[v][pos];
                    if Some(id) == parent_arc {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = clock;
                        low[w] = clock;
                        clock += 1;
                        stack.push((w, Some(id), 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let (Some(&(p, _, _)), Some(id)) = (stack.last(), parent_arc) {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            is_bridge[id] = true;
                        }
                    }
                }
            }
        }
        is_bridge
    }

    pub(crate) fn step(&self) -> Result<Option<ReductionStep>, DigraphError> {
        let comps = self.components();
        if comps.is_empty() {
            return Ok(None);
        }
        for comp in &comps {
            if comp.len() < 3 {
                return Err(DigraphError::SmallComponent {
                    vertex: comp[0],
                    order: comp.len(),
                });
            }
        }
        let arcs = &self.graph.arcs;
        let mut comp_of = vec![usize::MAX; self.graph.n];
        for (ci, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = ci;
            }
        }
        let mut comp_arcs: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
        let mut degree = vec![0usize; self.graph.n];
        for (id, &(t, h)) in arcs.iter().enumerate() {
            if self.arc_alive[id] {
                comp_arcs[comp_of[t]].push(id);
                degree[t] += 1;
                degree[h] += 1;
            }
        }

        for (comp, ids) in comps.iter().zip(&comp_arcs) {
            if comp.len() == 3 && ids.len() == 2 {
                let center = *comp.iter().find(|&&v| degree[v] == 2).expect("path centre");
                let other = |id: usize| {
                    if arcs[id].0 == center {
                        arcs[id].1
                    } else {
                        arcs[id].0
                    }
                };
                return Ok(Some(ReductionStep::P3Component {
                    center,
                    ends: [other(ids[0]), other(ids[1])],
                    arcs: [ids[0], ids[1]],
                }));
            }
        }

        let bridges = self.bridge_flags();
        for ids in &comp_arcs {
            if let Some(&arc) = ids.iter().find(|&&id| !bridges[id]) {
                return Ok(Some(ReductionStep::NonBridgeArc { arc }));
            }
        }

        for ids in &comp_arcs {
            for &arc in ids {
                let (t, h) = arcs[arc];
                if degree[t] == 1 {
                    return Ok(Some(ReductionStep::LeafArc { arc, pendant: t }));
                }
                if degree[h] == 1 {
                    return Ok(Some(ReductionStep::LeafArc { arc, pendant: h }));
                }
            }
        }
        unreachable!("a forest with components of order >= 3 has a leaf arc")
    }
}
