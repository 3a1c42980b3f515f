//! Sweeps and fuzzing harnesses. Jobs run on the rayon pool; results are
//! collected in job order, so output does not depend on scheduling.

use clap::ValueEnum;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use zerosum::asymptotic::{partition_asymptotic, AsymptoticConfig};
use zerosum::group::enumerate_groups;
use zerosum::partition::{check_conjecture, Budget, ConjectureResult};
use zerosum::realize::{
    arc_labeling_from_vertex_map, irregular_label, verify_realization, weighted_degrees,
    VerifyFlags,
};
use zerosum::{AbelianGroup, GroupSpec, SizeSequence};

use crate::gen::{random_digraph, random_sizes, random_zero_sum_map};
use crate::record::{encode, Artifact, GroundKind, Outcome, Record};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FuzzKind {
    /// Peeling induction on random digraphs, strict verification.
    Induction,
    /// Vertex map to arc labeling and back.
    Roundtrip,
    /// The pairs-and-triples construction on random size sequences.
    Asymptotic,
}

#[derive(Debug, Clone)]
pub struct FuzzParams {
    pub kind: FuzzKind,
    pub cases: usize,
    pub seed: u64,
    /// Inclusive range of vertex counts.
    pub vertices: (usize, usize),
    pub max_order: u64,
    /// Group specs; a default list is used when empty.
    pub groups: Vec<String>,
    pub retries: u32,
    pub fallback: bool,
    pub budget_nodes: Option<u64>,
}

impl FuzzParams {
    pub fn new(kind: FuzzKind, cases: usize, seed: u64) -> Self {
        FuzzParams {
            kind,
            cases,
            seed,
            vertices: (3, 12),
            max_order: 64,
            groups: Vec::new(),
            retries: 8,
            fallback: false,
            budget_nodes: None,
        }
    }
}

const ROUNDTRIP_GROUPS: [&str; 2] = ["Z11", "Z2xZ4"];

/// Orders 48 to 256, odd and even, with few and many involutions.
pub const ASYMPTOTIC_GROUPS: [&str; 11] = [
    "Z2^4xZ3", "Z2^4xZ4", "Z2^4xZ5", "Z7^2", "Z3^4", "Z5^3", "Z2^4xZ9", "Z256", "Z2^6xZ3",
    "Z3xZ5xZ7", "Z2^5xZ8",
];

/// Runs the harness and returns one record per case, in case order.
pub fn fuzz_records(p: &FuzzParams) -> Result<Vec<Record>, String> {
    let (lo, hi) = p.vertices;
    if lo < 3 || hi < lo {
        return Err(format!("vertex range {lo}..={hi} must start at 3 or more"));
    }
    let names: Vec<String> = if !p.groups.is_empty() {
        p.groups.clone()
    } else if p.kind == FuzzKind::Roundtrip {
        ROUNDTRIP_GROUPS.iter().map(|s| s.to_string()).collect()
    } else {
        ASYMPTOTIC_GROUPS.iter().map(|s| s.to_string()).collect()
    };
    let groups: Vec<AbelianGroup> = match p.kind {
        FuzzKind::Induction => enumerate_groups(p.max_order)
            .iter()
            .map(|s| AbelianGroup::from_spec(s).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?,
        _ => names
            .iter()
            .map(|s| s.parse::<AbelianGroup>().map_err(|e| format!("{s}: {e}")))
            .collect::<Result<_, _>>()?,
    };
    if p.kind == FuzzKind::Induction && !groups.iter().any(|g| g.order() >= 4 * hi) {
        return Err(format!(
            "no group of order at most {} has order >= {}",
            p.max_order,
            4 * hi
        ));
    }

    let mut master = ChaCha8Rng::seed_from_u64(p.seed);
    let seeds: Vec<u64> = (0..p.cases).map(|_| master.next_u64()).collect();
    let budget = budget(p.budget_nodes);
    Ok(seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match p.kind {
                FuzzKind::Induction => {
                    let n = rng.gen_range(lo..=hi);
                    let fits: Vec<&AbelianGroup> =
                        groups.iter().filter(|g| g.order() >= 4 * n).collect();
                    let g = fits[rng.gen_range(0..fits.len())];
                    induction_case(g, n, seed, &mut rng)
                }
                FuzzKind::Roundtrip => {
                    let n = rng.gen_range(lo..=hi);
                    roundtrip_case(&groups[i % groups.len()], n, seed, &mut rng)
                }
                FuzzKind::Asymptotic => {
                    asymptotic_case(&groups[i % groups.len()], seed, p, &budget, &mut rng)
                }
            }
        })
        .collect())
}

fn budget(nodes: Option<u64>) -> Budget {
    nodes.map(Budget::nodes).unwrap_or_default()
}

fn induction_case(g: &AbelianGroup, n: usize, seed: u64, rng: &mut ChaCha8Rng) -> Record {
    let d = random_digraph(rng, n);
    let rec = Record::new("fuzz-induction", g, Some(seed));
    let psi = match irregular_label(&d, g, Some(seed)) {
        Ok(psi) => psi,
        Err(e) => return rec.with(Outcome::Error, Some(e.to_string())),
    };
    let verdict = verify_realization(&d, g, &psi, VerifyFlags::STRICT);
    let phi = weighted_degrees(&d, g, &psi).expect("total labeling").0;
    let labels = psi.to_total().expect("total labeling");
    let mut rec = rec.with_artifact(Artifact::Labeling {
        vertices: n,
        arcs: d.arcs().to_vec(),
        phi: encode(g, &phi),
        psi: encode(g, &labels),
        route: None,
        irregular: Some(VerifyFlags::STRICT),
    });
    rec.verified = Some(verdict.passed());
    if let Some(v) = verdict.violation {
        rec.outcome = Outcome::Error;
        rec.detail = Some(format!("{v:?}"));
    }
    rec
}

fn roundtrip_case(g: &AbelianGroup, n: usize, seed: u64, rng: &mut ChaCha8Rng) -> Record {
    let d = random_digraph(rng, n);
    let phi = random_zero_sum_map(rng, &d, g);
    let rec = Record::new("fuzz-roundtrip", g, Some(seed));
    let psi = match arc_labeling_from_vertex_map(&d, g, &phi) {
        Ok(psi) => psi,
        Err(e) => return rec.with(Outcome::Error, Some(e.to_string())),
    };
    let back = weighted_degrees(&d, g, &psi).expect("total labeling");
    let mut rec = rec.with_artifact(Artifact::Labeling {
        vertices: n,
        arcs: d.arcs().to_vec(),
        phi: encode(g, &phi.0),
        psi: encode(g, &psi.to_total().expect("total labeling")),
        route: None,
        irregular: None,
    });
    rec.verified = Some(back.0 == phi.0);
    if back.0 != phi.0 {
        rec.outcome = Outcome::Error;
        rec.detail = Some("weighted degrees differ from the vertex map".into());
    }
    rec
}

fn asymptotic_case(
    g: &AbelianGroup,
    seed: u64,
    p: &FuzzParams,
    budget: &Budget,
    rng: &mut ChaCha8Rng,
) -> Record {
    let r_half = (g.order() - 1 - g.involutions().len()) / 2;
    let sizes = random_sizes(rng, g.order(), r_half);
    let config = AsymptoticConfig {
        seed,
        retries: p.retries,
        fallback: p.fallback,
        budget: *budget,
        ..Default::default()
    };
    let rec = Record::new("fuzz-asymptotic", g, Some(seed));
    let seq = SizeSequence::new(sizes.clone()).expect("positive sizes");
    match partition_asymptotic(g, &seq, &config) {
        Ok(out) => {
            let parts = out.partition.parts().iter().map(|p| encode(g, p)).collect();
            let mut rec = rec.with_artifact(Artifact::Partition {
                ground: GroundKind::NonZero,
                sizes,
                parts,
                path: None,
                stats: Some(out.stats),
            });
            // partition_asymptotic only returns verified partitions
            rec.verified = Some(true);
            rec
        }
        Err(e) => rec.with(Outcome::Error, Some(format!("sizes {seq}: {e}"))),
    }
}

/// Groups with more than one involution and order at most `max_order`.
pub fn conjecture_groups(max_order: u64) -> Vec<GroupSpec> {
    enumerate_groups(max_order)
        .into_iter()
        .filter(|s| AbelianGroup::from_spec(s).is_ok_and(|g| g.involutions().len() > 1))
        .collect()
}

/// One record per (group, size sequence), groups in enumeration order.
pub fn conjecture_records(max_order: u64, budget: &Budget) -> Result<Vec<Vec<Record>>, String> {
    conjecture_groups(max_order)
        .par_iter()
        .map(|spec| {
            let g = AbelianGroup::from_spec(spec).map_err(|e| e.to_string())?;
            let report = check_conjecture(&g, budget).map_err(|e| e.to_string())?;
            Ok(report
                .outcomes
                .into_iter()
                .map(|o| {
                    let rec = Record::new("conjecture", &g, None);
                    match o.result {
                        ConjectureResult::Found {
                            partition,
                            path,
                            verified,
                        } => {
                            let parts = partition.parts().iter().map(|p| encode(&g, p)).collect();
                            let mut rec = rec.with_artifact(Artifact::Partition {
                                ground: GroundKind::NonZero,
                                sizes: o.sizes,
                                parts,
                                path: Some(format!("{path:?}")),
                                stats: None,
                            });
                            rec.verified = Some(verified);
                            rec
                        }
                        ConjectureResult::Counterexample { certificate } => rec.with(
                            Outcome::Infeasible,
                            Some(format!("sizes {:?}: {certificate}", o.sizes)),
                        ),
                        ConjectureResult::Unknown { nodes } => rec.with(
                            Outcome::Unknown,
                            Some(format!(
                                "sizes {:?}: undecided after {nodes} nodes",
                                o.sizes
                            )),
                        ),
                    }
                })
                .collect())
        })
        .collect()
}
