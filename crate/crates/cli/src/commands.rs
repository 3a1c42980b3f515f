use std::io::Write;
use std::path::Path;

use zerosum::asymptotic::{partition_asymptotic, AsymptoticConfig, AsymptoticError};
use zerosum::magic::{label_multipartite, verify_magic, MagicError, MultipartiteSpec};
use zerosum::partition::{zero_sum_partition, Budget, PartitionError};
use zerosum::realize::{
    realize as realize_digraph, verify_realization, Method, RealizeError, RealizeOptions,
    VerifyFlags,
};
use zerosum::{verify_partition, AbelianGroup, Digraph, Element, SizeSequence};

use crate::record::{encode, verify_artifact, Artifact, GroundKind, Outcome, Record};
use crate::sweep::{conjecture_records, fuzz_records, FuzzKind, FuzzParams};
use crate::{CliError, Common, Finished, Status};

fn group(spec: &str) -> Result<AbelianGroup, CliError> {
    spec.parse::<AbelianGroup>()
        .map_err(|e| CliError::Usage(format!("--group {spec:?}: {e}")))
}

fn sizes(text: &str, flag: &str) -> Result<SizeSequence, CliError> {
    text.parse::<SizeSequence>()
        .map_err(|e| CliError::Usage(format!("--{flag} {text:?}: {e}")))
}

fn budget(c: &Common) -> Budget {
    c.budget_nodes.map(Budget::nodes).unwrap_or_default()
}

fn set(g: &AbelianGroup, items: &[Element]) -> String {
    let inner: Vec<String> = items.iter().map(|&e| g.format(e)).collect();
    format!("{{{}}}", inner.join(","))
}

fn single(record: Record, status: Status) -> Result<Finished, CliError> {
    Ok(Finished {
        records: vec![record],
        status,
    })
}

fn negative(
    out: &mut dyn Write,
    record: Record,
    outcome: Outcome,
    detail: String,
) -> Result<Finished, CliError> {
    writeln!(out, "{detail}")?;
    single(record.with(outcome, Some(detail)), Status::Negative)
}

pub(crate) fn partition(
    out: &mut dyn Write,
    group_spec: &str,
    sizes_text: &str,
    ground: GroundKind,
    common: &Common,
) -> Result<Finished, CliError> {
    let g = group(group_spec)?;
    let seq = sizes(sizes_text, "sizes")?;
    let rec = Record::new("partition", &g, None);
    match zero_sum_partition(&g, &ground.ground(), &seq, &budget(common)) {
        Ok(solved) => {
            let verified =
                verify_partition(&g, &ground.ground(), seq.as_slice(), &solved.partition).is_ok();
            for p in solved.partition.parts() {
                writeln!(out, "{}", set(&g, p))?;
            }
            writeln!(out, "path: {:?}", solved.path)?;
            writeln!(out, "verified: {verified}")?;
            let parts = solved
                .partition
                .parts()
                .iter()
                .map(|p| encode(&g, p))
                .collect();
            let mut rec = rec.with_artifact(Artifact::Partition {
                ground,
                sizes: seq.as_slice().to_vec(),
                parts,
                path: Some(format!("{:?}", solved.path)),
                stats: None,
            });
            rec.verified = Some(verified);
            let status = if verified {
                Status::Success
            } else {
                Status::Negative
            };
            single(rec, status)
        }
        Err(PartitionError::InvalidSizes(m)) => Err(CliError::Usage(m)),
        Err(e @ PartitionError::NoPartition(_)) => {
            negative(out, rec, Outcome::Infeasible, e.to_string())
        }
        Err(e @ PartitionError::Unknown { .. }) => {
            negative(out, rec, Outcome::Unknown, e.to_string())
        }
        Err(e) => negative(out, rec, Outcome::Error, e.to_string()),
    }
}

pub(crate) fn realize(
    out: &mut dyn Write,
    group_spec: &str,
    path: &Path,
    method: &str,
    seed: Option<u64>,
    common: &Common,
) -> Result<Finished, CliError> {
    let g = group(group_spec)?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let d: Digraph = text
        .parse()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let method: Method = method.parse().map_err(CliError::Usage)?;
    let opts = RealizeOptions {
        method,
        budget: budget(common),
        seed,
    };
    let rec = Record::new("realize", &g, seed);
    match realize_digraph(&d, &g, &opts) {
        Ok(r) => {
            let verdict = verify_realization(&d, &g, &r.psi, VerifyFlags::default());
            let labels = r
                .psi
                .to_total()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            writeln!(out, "route: {:?}", r.route)?;
            writeln!(out, "phi:")?;
            for (v, &w) in r.phi.0.iter().enumerate() {
                writeln!(out, "  {v}: {}", g.format(w))?;
            }
            writeln!(out, "psi:")?;
            for (&(t, h), &l) in d.arcs().iter().zip(&labels) {
                writeln!(out, "  {t} -> {h}: {}", g.format(l))?;
            }
            writeln!(out, "verified: {}", verdict.passed())?;
            if let Some(v) = &verdict.violation {
                writeln!(out, "violation: {v:?}")?;
            }
            let mut rec = rec.with_artifact(Artifact::Labeling {
                vertices: d.vertex_count(),
                arcs: d.arcs().to_vec(),
                phi: encode(&g, &r.phi.0),
                psi: encode(&g, &labels),
                route: Some(r.route),
                irregular: Some(VerifyFlags::default()),
            });
            rec.verified = Some(verdict.passed());
            let status = if verdict.passed() {
                Status::Success
            } else {
                Status::Negative
            };
            single(rec, status)
        }
        Err(e @ (RealizeError::ProvablyUnrealizable(_) | RealizeError::NoRealization(_))) => {
            negative(out, rec, Outcome::Infeasible, e.to_string())
        }
        Err(e @ RealizeError::Unknown { .. }) => {
            negative(out, rec, Outcome::Unknown, e.to_string())
        }
        Err(e) => negative(out, rec, Outcome::Error, e.to_string()),
    }
}

pub(crate) fn magic(
    out: &mut dyn Write,
    group_spec: &str,
    parts_text: &str,
    common: &Common,
) -> Result<Finished, CliError> {
    let g = group(group_spec)?;
    let parts = sizes(parts_text, "parts")?;
    let spec = MultipartiteSpec::new(parts.as_slice().to_vec())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let rec = Record::new("magic", &g, None);
    match label_multipartite(&spec, &g, &budget(common)) {
        Ok(m) => {
            let verdict = verify_magic(&spec, &g, &m.classes);
            for c in &m.classes {
                writeln!(out, "{}", set(&g, c))?;
            }
            writeln!(out, "mu: {}", g.format(m.mu))?;
            writeln!(out, "verified: {}", verdict.passed())?;
            let mut rec = rec.with_artifact(Artifact::Magic {
                classes: m.classes.iter().map(|c| encode(&g, c)).collect(),
                mu: g.coords(m.mu),
            });
            rec.verified = Some(verdict.passed());
            let status = if verdict.passed() {
                Status::Success
            } else {
                Status::Negative
            };
            single(rec, status)
        }
        Err(e @ (MagicError::InvalidSpec(_) | MagicError::OrderMismatch { .. })) => {
            Err(CliError::Usage(e.to_string()))
        }
        Err(e @ MagicError::Partition(PartitionError::Unknown { .. })) => {
            negative(out, rec, Outcome::Unknown, e.to_string())
        }
        Err(e @ MagicError::Partition(PartitionError::NoPartition(_))) => negative(
            out,
            rec,
            Outcome::Infeasible,
            format!("not distance magic: {e}"),
        ),
        Err(e) => negative(out, rec, Outcome::Error, e.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn asympartition(
    out: &mut dyn Write,
    group_spec: &str,
    sizes_text: &str,
    epsilon: f64,
    seed: u64,
    retries: u32,
    fallback: bool,
    common: &Common,
) -> Result<Finished, CliError> {
    let g = group(group_spec)?;
    let seq = sizes(sizes_text, "sizes")?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(CliError::Usage(format!(
            "--epsilon {epsilon} must lie in (0, 1)"
        )));
    }
    let config = AsymptoticConfig {
        epsilon,
        seed,
        retries,
        fallback,
        budget: budget(common),
    };
    let rec = Record::new("asympartition", &g, Some(seed));
    match partition_asymptotic(&g, &seq, &config) {
        Ok(o) => {
            for p in o.partition.parts() {
                writeln!(out, "{}", set(&g, p))?;
            }
            let s = &o.stats;
            writeln!(out, "case: {:?}", s.case)?;
            if let Some(src) = s.source {
                writeln!(out, "triples from: {src:?}")?;
            }
            writeln!(out, "|T_I|: {}", s.t_i)?;
            writeln!(out, "|R*|: {}", s.r_star)?;
            if let (Some(m), Some(c)) = (s.matched, s.coverage) {
                writeln!(out, "matched: {m} (coverage {c:.3})")?;
            }
            writeln!(out, "attempts: {}", s.attempts)?;
            if s.fallback {
                writeln!(out, "fallback: exact search")?;
            }
            writeln!(out, "verified: true")?;
            let parts = o.partition.parts().iter().map(|p| encode(&g, p)).collect();
            let mut rec = rec.with_artifact(Artifact::Partition {
                ground: GroundKind::NonZero,
                sizes: seq.as_slice().to_vec(),
                parts,
                path: None,
                stats: Some(o.stats),
            });
            rec.verified = Some(true);
            single(rec, Status::Success)
        }
        Err(e @ AsymptoticError::Partition(PartitionError::NoPartition(_))) => {
            negative(out, rec, Outcome::Infeasible, e.to_string())
        }
        Err(e) => negative(out, rec, Outcome::Error, e.to_string()),
    }
}

pub(crate) fn conjecture(
    out: &mut dyn Write,
    max_order: u64,
    common: &Common,
) -> Result<Finished, CliError> {
    let per_group = conjecture_records(max_order, &budget(common)).map_err(CliError::Usage)?;
    let mut counter = 0;
    let mut unknown = 0;
    let mut unverified = 0;
    for records in &per_group {
        let Some(first) = records.first() else {
            continue;
        };
        let c = records
            .iter()
            .filter(|r| r.outcome == Outcome::Infeasible)
            .count();
        let u = records
            .iter()
            .filter(|r| r.outcome == Outcome::Unknown)
            .count();
        let bad = records.iter().filter(|r| r.verified == Some(false)).count();
        writeln!(
            out,
            "{}: {} sequences, {} partitioned, {c} counterexamples, {u} undecided",
            first.group,
            records.len(),
            records.len() - c - u
        )?;
        for r in records.iter().filter(|r| r.outcome != Outcome::Success) {
            writeln!(out, "  {}", r.detail.as_deref().unwrap_or(""))?;
        }
        counter += c;
        unknown += u;
        unverified += bad;
    }
    writeln!(out, "groups: {}", per_group.len())?;
    writeln!(out, "counterexamples: {counter}")?;
    writeln!(out, "undecided: {unknown}")?;
    writeln!(out, "unverified: {unverified}")?;
    let status = if counter + unknown + unverified == 0 {
        Status::Success
    } else {
        Status::Negative
    };
    Ok(Finished {
        records: per_group.into_iter().flatten().collect(),
        status,
    })
}

pub(crate) fn fuzz(out: &mut dyn Write, p: &FuzzParams) -> Result<Finished, CliError> {
    let records = fuzz_records(p).map_err(CliError::Usage)?;
    let passed = records
        .iter()
        .filter(|r| r.outcome == Outcome::Success)
        .count();
    for r in records.iter().filter(|r| r.outcome != Outcome::Success) {
        writeln!(
            out,
            "failed: {} seed {}: {}",
            r.group,
            r.seed.unwrap_or_default(),
            r.detail.as_deref().unwrap_or("")
        )?;
    }
    writeln!(out, "cases: {}", records.len())?;
    writeln!(out, "passed: {passed}")?;
    if p.kind == FuzzKind::Asymptotic {
        let coverages: Vec<f64> = records
            .iter()
            .filter_map(|r| match &r.artifact {
                Some(Artifact::Partition { stats: Some(s), .. }) => s.coverage,
                _ => None,
            })
            .collect();
        let good = coverages.iter().filter(|&&c| c >= 0.9).count();
        writeln!(
            out,
            "matching runs: {}, coverage >= 0.90: {good}",
            coverages.len()
        )?;
    }
    let status = if passed == records.len() {
        Status::Success
    } else {
        Status::Negative
    };
    Ok(Finished { records, status })
}

pub(crate) fn verify(out: &mut dyn Write, path: &Path) -> Result<Finished, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut checked = 0;
    let mut failed = 0;
    for (i, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let line_no = i + 1;
        let rec: Record = serde_json::from_str(line)
            .map_err(|e| CliError::Usage(format!("line {line_no}: {e}")))?;
        let Some(artifact) = &rec.artifact else {
            writeln!(out, "line {line_no}: {:?}, no artifact", rec.outcome)?;
            continue;
        };
        let g = group(&rec.group)?;
        checked += 1;
        match verify_artifact(&g, artifact) {
            Ok(()) => writeln!(out, "line {line_no}: ok")?,
            Err(why) => {
                failed += 1;
                writeln!(out, "line {line_no}: FAILED: {why}")?;
            }
        }
    }
    writeln!(out, "artifacts: {checked}, failed: {failed}")?;
    let status = if failed == 0 {
        Status::Success
    } else {
        Status::Negative
    };
    Ok(Finished {
        records: Vec::new(),
        status,
    })
}
