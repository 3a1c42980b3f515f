//! Line-delimited JSON records and their re-verification.

use serde::{Deserialize, Serialize};
use zerosum::asymptotic::AsymptoticStats;
use zerosum::magic::{verify_magic, MultipartiteSpec};
use zerosum::realize::{verify_realization, weighted_degrees, ArcLabeling, Route, VerifyFlags};
use zerosum::{verify_partition, AbelianGroup, Digraph, Element, Ground, ZeroSumPartition};

/// Elements are written as coordinate vectors over the group's factors.
pub type Coords = Vec<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Success,
    Infeasible,
    Unknown,
    Error,
}

/// One job's result. Field names are stable; timing is deliberately absent
/// so that runs with the same seed are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub command: String,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub outcome: Outcome,
    /// Certificate, violated hypothesis or error text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Artifact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

impl Record {
    pub fn new(command: &str, group: &AbelianGroup, seed: Option<u64>) -> Self {
        Record {
            command: command.to_string(),
            group: group.to_string(),
            seed,
            outcome: Outcome::Error,
            detail: None,
            artifact: None,
            verified: None,
        }
    }

    pub fn with(mut self, outcome: Outcome, detail: Option<String>) -> Self {
        self.outcome = outcome;
        self.detail = detail;
        self
    }

    pub fn with_artifact(mut self, artifact: Artifact) -> Self {
        self.outcome = Outcome::Success;
        self.artifact = Some(artifact);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroundKind {
    NonZero,
    All,
}

impl GroundKind {
    pub fn ground(self) -> Ground {
        match self {
            GroundKind::NonZero => Ground::NonZero,
            GroundKind::All => Ground::All,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Artifact {
    Partition {
        ground: GroundKind,
        sizes: Vec<usize>,
        parts: Vec<Vec<Coords>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stats: Option<AsymptoticStats>,
    },
    /// An arc labeling together with the vertex map it must induce.
    Labeling {
        vertices: usize,
        arcs: Vec<(usize, usize)>,
        phi: Vec<Coords>,
        psi: Vec<Coords>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        route: Option<Route>,
        /// Whether the weights must also be pairwise distinct, and with
        /// which extra conditions.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        irregular: Option<VerifyFlags>,
    },
    Magic {
        classes: Vec<Vec<Coords>>,
        mu: Coords,
    },
}

pub fn encode(group: &AbelianGroup, items: &[Element]) -> Vec<Coords> {
    items.iter().map(|&e| group.coords(e)).collect()
}

fn decode(group: &AbelianGroup, items: &[Coords]) -> Result<Vec<Element>, String> {
    items
        .iter()
        .map(|c| group.element(c).map_err(|e| e.to_string()))
        .collect()
}

/// Checks an artifact against its definition. `Ok(())` means it passes.
pub fn verify_artifact(group: &AbelianGroup, artifact: &Artifact) -> Result<(), String> {
    match artifact {
        Artifact::Partition {
            ground,
            sizes,
            parts,
            ..
        } => {
            let parts = parts
                .iter()
                .map(|p| decode(group, p))
                .collect::<Result<Vec<_>, _>>()?;
            verify_partition(
                group,
                &ground.ground(),
                sizes,
                &ZeroSumPartition::new(parts),
            )
            .map_err(|v| format!("{v:?}"))
        }
        Artifact::Labeling {
            vertices,
            arcs,
            phi,
            psi,
            irregular,
            ..
        } => {
            let d = Digraph::new(*vertices, arcs.clone()).map_err(|e| e.to_string())?;
            let phi = decode(group, phi)?;
            let psi = ArcLabeling::total(decode(group, psi)?);
            let w = weighted_degrees(&d, group, &psi).map_err(|e| e.to_string())?;
            if w.0 != phi {
                return Err("weighted degrees differ from the recorded vertex map".into());
            }
            if let Some(flags) = irregular {
                let verdict = verify_realization(&d, group, &psi, *flags);
                if let Some(v) = verdict.violation {
                    return Err(format!("{v:?}"));
                }
            }
            Ok(())
        }
        Artifact::Magic { classes, mu } => {
            let classes = classes
                .iter()
                .map(|c| decode(group, c))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = MultipartiteSpec::new(classes.iter().map(Vec::len).collect())
                .map_err(|e| e.to_string())?;
            let verdict = verify_magic(&spec, group, &classes);
            if let Some(v) = verdict.violation {
                return Err(format!("{v:?}"));
            }
            let mu = group.element(mu).map_err(|e| e.to_string())?;
            if verdict.mu != Some(mu) {
                return Err("recorded magic constant is wrong".into());
            }
            Ok(())
        }
    }
}
