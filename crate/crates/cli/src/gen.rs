//! Seeded random instances for the fuzzing harnesses.

use rand::seq::SliceRandom;
use rand::Rng;
use zerosum::realize::VertexAssignment;
use zerosum::{AbelianGroup, Digraph, Element};

/// A digraph on `n >= 3` vertices whose weak components all have at least
/// three vertices: random spanning trees with random orientations, plus a
/// few extra arcs (possibly parallel or antiparallel) inside components.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize) -> Digraph {
    assert!(n >= 3, "need at least three vertices");
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let size = if left < 6 {
            left
        } else {
            rng.gen_range(3..=left - 3)
        };
        sizes.push(size);
        left -= size;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut arcs = Vec::new();
    let mut start = 0;
    for size in sizes {
        let comp = &order[start..start + size];
        for i in 1..size {
            let j = rng.gen_range(0..i);
            arcs.push(orient(rng, comp[i], comp[j]));
        }
        for _ in 0..rng.gen_range(0..=size) {
            let a = comp[rng.gen_range(0..size)];
            let b = comp[rng.gen_range(0..size)];
            if a != b {
                arcs.push(orient(rng, a, b));
            }
        }
        start += size;
    }
    arcs.shuffle(rng);
    Digraph::new(n, arcs).expect("vertices in range, no loops")
}

fn orient<R: Rng>(rng: &mut R, a: usize, b: usize) -> (usize, usize) {
    if rng.gen() {
        (a, b)
    } else {
        (b, a)
    }
}

/// A uniformly random vertex map with zero sum on every component.
pub fn random_zero_sum_map<R: Rng>(
    rng: &mut R,
    digraph: &Digraph,
    group: &AbelianGroup,
) -> VertexAssignment {
    let mut phi = vec![Element::ZERO; digraph.vertex_count()];
    for comp in digraph.components() {
        let (&last, init) = comp.split_last().expect("components are nonempty");
        let mut sum = Element::ZERO;
        for &v in init {
            phi[v] = Element::from_index(rng.gen_range(0..group.order()));
            sum = group.add(sum, phi[v]);
        }
        phi[last] = group.neg(sum);
    }
    VertexAssignment(phi)
}

/// Terms in `2..=5` with total `t` satisfying `1.25 t < n`, at most
/// `max_twos` of them equal to 2.
pub fn random_sizes<R: Rng>(rng: &mut R, n: usize, max_twos: usize) -> Vec<usize> {
    // largest t with 5t < 4n
    let cap = (4 * n - 1) / 5;
    let target = rng.gen_range(cap / 3..=cap).max(2);
    let mut sizes = Vec::new();
    let mut total = 0;
    let mut twos = 0;
    loop {
        let mut r = rng.gen_range(2..=5);
        if r == 2 && twos == max_twos {
            r = 3;
        }
        if total + r > target {
            break;
        }
        twos += usize::from(r == 2);
        total += r;
        sizes.push(r);
    }
    if sizes.is_empty() {
        sizes.push(3);
    }
    sizes
}
