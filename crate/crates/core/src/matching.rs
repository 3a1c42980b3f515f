//! Greedy matchings in uniform hypergraphs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Hyperedges over vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// # Panics
    /// If an edge names a vertex outside `0..vertex_count`.
    pub fn new(vertex_count: usize, edges: Vec<Vec<usize>>) -> Self {
        for e in &edges {
            assert!(
                e.iter().all(|&v| v < vertex_count),
                "edge {e:?} leaves the vertex set"
            );
        }
        Hypergraph {
            vertex_count,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// Indices into [`Hypergraph::edges`], in selection order.
    pub edges: Vec<usize>,
    pub covered: usize,
    /// `covered / vertex_count`, or 1 for an empty vertex set.
    pub coverage: f64,
}

/// A maximal set of pairwise disjoint hyperedges.
///
/// Repeatedly takes the free vertex with the fewest remaining usable edges
/// and matches it through the edge that destroys the fewest other edges,
/// then trades single edges for disjoint pairs while that is possible.
/// Ties are broken by a random priority drawn from `seed`.
/// The best of [`ROUNDS`] such runs is kept.
pub fn greedy_matching(h: &Hypergraph, seed: u64) -> Matching {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = h.vertex_count;
    let width = h.edges.iter().map(Vec::len).min().unwrap_or(1).max(1);
    let mut best: Option<(usize, Vec<usize>)> = None;
    for _ in 0..ROUNDS {
        let chosen = one_round(h, &mut rng);
        let covered: usize = chosen.iter().map(|&i| h.edges[i].len()).sum();
        if best.as_ref().is_none_or(|b| covered > b.0) {
            best = Some((covered, chosen));
        }
        if n - covered < width {
            break;
        }
    }
    let (covered, edges) = best.unwrap_or_default();
    let coverage = if n == 0 {
        1.0
    } else {
        covered as f64 / n as f64
    };
    Matching {
        edges,
        covered,
        coverage,
    }
}

/// Independent greedy runs per call.
pub const ROUNDS: usize = 8;

fn one_round(h: &Hypergraph, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = h.vertex_count;
    let priority: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
    let edge_priority: Vec<u64> = (0..h.edges.len()).map(|_| rng.gen()).collect();

    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in h.edges.iter().enumerate() {
        for &v in e {
            incident[v].push(i);
        }
    }
    let mut degree: Vec<usize> = incident.iter().map(Vec::len).collect();
    let mut edge_alive: Vec<bool> = h.edges.iter().map(|e| !has_repeat(e)).collect();
    for (i, e) in h.edges.iter().enumerate() {
        if !edge_alive[i] {
            for &v in e {
                degree[v] -= 1;
            }
        }
    }
    let mut free = vec![true; n];
    let mut chosen = Vec::new();

    loop {
        let pick = (0..n)
            .filter(|&v| free[v] && degree[v] > 0)
            .min_by_key(|&v| (degree[v], priority[v]));
        let Some(v) = pick else { break };
        let best = incident[v]
            .iter()
            .copied()
            .filter(|&i| edge_alive[i])
            .min_by_key(|&i| {
                let damage: usize = h.edges[i].iter().map(|&w| degree[w]).sum();
                (damage, edge_priority[i])
            })
            .expect("positive degree");
        chosen.push(best);
        for &w in &h.edges[best] {
            free[w] = false;
            for &i in &incident[w] {
                if edge_alive[i] {
                    edge_alive[i] = false;
                    for &x in &h.edges[i] {
                        degree[x] -= 1;
                    }
                }
            }
        }
    }

    improve(h, &mut chosen, &edge_priority);
    chosen
}

/// Local search: drop one matched edge whenever two disjoint edges fit into
/// the freed vertices together with the unmatched ones.
fn improve(h: &Hypergraph, chosen: &mut Vec<usize>, edge_priority: &[u64]) {
    let mut owner: Vec<Option<usize>> = vec![None; h.vertex_count];
    for (k, &i) in chosen.iter().enumerate() {
        for &v in &h.edges[i] {
            owner[v] = Some(k);
        }
    }
    let mut order: Vec<usize> = (0..h.edges.len())
        .filter(|&i| !has_repeat(&h.edges[i]))
        .collect();
    order.sort_by_key(|&i| edge_priority[i]);
    loop {
        let mut improved = false;
        for k in 0..chosen.len() {
            let fits: Vec<usize> = order
                .iter()
                .copied()
                .filter(|&i| h.edges[i].iter().all(|&v| owner[v].is_none_or(|o| o == k)))
                .filter(|&i| i != chosen[k])
                .collect();
            let pair = fits.iter().enumerate().find_map(|(x, &e)| {
                fits[x + 1..]
                    .iter()
                    .find(|&&f| h.edges[f].iter().all(|v| !h.edges[e].contains(v)))
                    .map(|&f| (e, f))
            });
            if let Some((e, f)) = pair {
                for &v in &h.edges[chosen[k]] {
                    owner[v] = None;
                }
                chosen[k] = e;
                chosen.push(f);
                let last = chosen.len() - 1;
                for &v in &h.edges[e] {
                    owner[v] = Some(k);
                }
                for &v in &h.edges[f] {
                    owner[v] = Some(last);
                }
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
}

fn has_repeat(e: &[usize]) -> bool {
    e.iter().enumerate().any(|(i, v)| e[..i].contains(v))
}
