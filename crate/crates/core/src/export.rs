//! CSV and JSON exports with the readers used for test replay.
//!
//! All writers are deterministic: rows follow node/window order and floats
//! print with Rust's shortest round-trip formatting, so identical inputs
//! produce byte-identical files.

use std::collections::HashMap;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::pipeline::ego::{CiterCiteeRow, EgoDiversityRow};
use crate::pipeline::sankey::SankeyFlows;
use crate::pipeline::trajectory::{DiversityReport, DiversityRow, TrajectorySet};
use crate::pipeline::tree::CommunityTree;
use crate::spectral::eigen::ScreeEntry;
use crate::spectral::embed::Embedding;
use crate::spectral::simplex::SimplexModel;

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(csv::Writer::from_writer(file))
}

fn finish(mut w: csv::Writer<std::fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Export(format!("{}: {e}", path.display()))
}

/// Header: node_id, coord_1..coord_d, valid.
pub fn write_embedding_csv(
    path: impl AsRef<Path>,
    node_ids: &[i64],
    e: &Embedding,
) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    let mut header = vec!["node_id".to_string()];
    header.extend((1..=e.dim()).map(|c| format!("coord_{c}")));
    header.push("valid".into());
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for i in 0..e.n() {
        let mut row = vec![node_ids[i].to_string()];
        row.extend((0..e.dim()).map(|c| e.coords[(i, c)].to_string()));
        row.push((e.valid[i] as u8).to_string());
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    finish(w, path)
}

/// Reader for [`write_embedding_csv`]; returns node ids and the embedding.
pub fn read_embedding_csv(path: impl AsRef<Path>) -> Result<(Vec<i64>, Embedding)> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let dim = r.headers().map_err(|e| csv_error(path, e))?.len() - 2;
    let mut node_ids = Vec::new();
    let mut rows: Vec<(Vec<f64>, bool)> = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let parse = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Export(format!("{}: bad float '{s}'", path.display())))
        };
        node_ids.push(
            record[0]
                .parse::<i64>()
                .map_err(|_| Error::Export(format!("{}: bad node id", path.display())))?,
        );
        let coords: Vec<f64> =
            (1..=dim).map(|c| parse(&record[c])).collect::<Result<Vec<_>>>()?;
        rows.push((coords, &record[dim + 1] == "1"));
    }
    let n = rows.len();
    let coords = DMatrix::from_fn(n, dim, |i, c| rows[i].0[c]);
    let valid = rows.iter().map(|r| r.1).collect();
    Ok((node_ids, Embedding { coords, valid, k: dim + 1, window: None }))
}

/// Header: vertex, coord_1..coord_d.
pub fn write_vertices_csv(path: impl AsRef<Path>, vertices: &DMatrix<f64>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    let mut header = vec!["vertex".to_string()];
    header.extend((1..=vertices.ncols()).map(|c| format!("coord_{c}")));
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for v in 0..vertices.nrows() {
        let mut row = vec![(v + 1).to_string()];
        row.extend((0..vertices.ncols()).map(|c| vertices[(v, c)].to_string()));
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    finish(w, path)
}

/// Header: node_id, w_1..w_K, pi_1..pi_K, valid.
pub fn write_memberships_csv(
    path: impl AsRef<Path>,
    node_ids: &[i64],
    model: &SimplexModel,
) -> Result<()> {
    let path = path.as_ref();
    let k = model.weights.ncols();
    let mut w = csv_writer(path)?;
    let mut header = vec!["node_id".to_string()];
    header.extend((1..=k).map(|c| format!("w_{c}")));
    header.extend((1..=k).map(|c| format!("pi_{c}")));
    header.push("valid".into());
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for i in 0..model.weights.nrows() {
        let mut row = vec![node_ids[i].to_string()];
        row.extend((0..k).map(|c| model.weights[(i, c)].to_string()));
        match &model.memberships {
            Some(pi) => row.extend((0..k).map(|c| pi[(i, c)].to_string())),
            None => row.extend((0..k).map(|_| String::new())),
        }
        row.push((model.valid[i] as u8).to_string());
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    finish(w, path)
}

/// Header: c0, rank, magnitude, sign.
pub fn write_scree_csv(path: impl AsRef<Path>, entries: &[ScreeEntry]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    w.write_record(["c0", "rank", "magnitude", "sign"]).map_err(|e| csv_error(path, e))?;
    for e in entries {
        w.write_record([
            e.c0.to_string(),
            e.rank.to_string(),
            e.magnitude.to_string(),
            e.sign.to_string(),
        ])
        .map_err(|err| csv_error(path, err))?;
    }
    finish(w, path)
}

/// Header: node_id, window, coord_1..coord_d, valid. One row per node and
/// window, windows ordered.
pub fn write_trajectory_csv(path: impl AsRef<Path>, ts: &TrajectorySet) -> Result<()> {
    let path = path.as_ref();
    let dim = ts.knots.first().map(|k| k.dim()).unwrap_or(0);
    let mut w = csv_writer(path)?;
    let mut header = vec!["node_id".to_string(), "window".to_string()];
    header.extend((1..=dim).map(|c| format!("coord_{c}")));
    header.push("valid".into());
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for (t, knot) in ts.knots.iter().enumerate() {
        for i in 0..knot.n() {
            let mut row = vec![ts.node_ids[i].to_string(), (t + 1).to_string()];
            row.extend((0..dim).map(|c| knot.coords[(i, c)].to_string()));
            row.push((knot.valid[i] as u8).to_string());
            w.write_record(&row).map_err(|e| csv_error(path, e))?;
        }
    }
    finish(w, path)
}

/// Header: node_id, se_distance, max_distance, gap, sp, snp.
pub fn write_diversity_csv(path: impl AsRef<Path>, report: &DiversityReport) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    w.write_record(["node_id", "se_distance", "max_distance", "gap", "sp", "snp"])
        .map_err(|e| csv_error(path, e))?;
    for row in &report.rows {
        w.write_record([
            row.node_id.to_string(),
            row.se_distance.to_string(),
            row.max_distance.to_string(),
            row.gap.to_string(),
            (row.sp as u8).to_string(),
            (row.snp as u8).to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    finish(w, path)
}

pub fn read_diversity_csv(path: impl AsRef<Path>) -> Result<Vec<DiversityRow>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut out = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let f = |i: usize| -> Result<f64> {
            record[i]
                .parse()
                .map_err(|_| Error::Export(format!("{}: bad float", path.display())))
        };
        out.push(DiversityRow {
            node_id: record[0]
                .parse()
                .map_err(|_| Error::Export(format!("{}: bad node id", path.display())))?,
            se_distance: f(1)?,
            max_distance: f(2)?,
            gap: f(3)?,
            sp: &record[4] == "1",
            snp: &record[5] == "1",
        });
    }
    Ok(out)
}

/// Header: author, n_ego, psi, p_value, status. Empty psi/p for
/// insufficient networks.
pub fn write_ego_csv(path: impl AsRef<Path>, rows: &[EgoDiversityRow]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    w.write_record(["node_id", "n_ego", "psi", "p_value", "status"])
        .map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record([
            row.author.to_string(),
            row.n_ego.to_string(),
            row.psi.map(|v| v.to_string()).unwrap_or_default(),
            row.p_value.map(|v| v.to_string()).unwrap_or_default(),
            row.status.to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    finish(w, path)
}

/// Header: author, n_citer, t_citer, status_citer, n_citee, t_citee,
/// status_citee.
pub fn write_citer_citee_csv(path: impl AsRef<Path>, rows: &[CiterCiteeRow]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    w.write_record([
        "author",
        "n_citer",
        "t_citer",
        "status_citer",
        "n_citee",
        "t_citee",
        "status_citee",
    ])
    .map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record([
            row.author.to_string(),
            row.citer.n.to_string(),
            row.citer.statistic.map(|v| v.to_string()).unwrap_or_default(),
            row.citer.status.to_string(),
            row.citee.n.to_string(),
            row.citee.statistic.map(|v| v.to_string()).unwrap_or_default(),
            row.citee.status.to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    finish(w, path)
}

/// Header: from_window, to_window, from_community, to_community, count.
pub fn write_sankey_csv(path: impl AsRef<Path>, flows: &SankeyFlows) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    w.write_record(["from_window", "to_window", "from_community", "to_community", "count"])
        .map_err(|e| csv_error(path, e))?;
    for fm in &flows.flows {
        for (s, row) in fm.counts.iter().enumerate() {
            for (t, &count) in row.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                w.write_record([
                    fm.from_window.to_string(),
                    fm.to_window.to_string(),
                    fm.source_names[s].clone(),
                    fm.target_names[t].clone(),
                    count.to_string(),
                ])
                .map_err(|e| csv_error(path, e))?;
            }
        }
    }
    finish(w, path)
}

/// Flow rows as (from_window, to_window, from, to, count).
pub fn read_sankey_csv(
    path: impl AsRef<Path>,
) -> Result<Vec<(usize, usize, String, String, u64)>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut out = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let bad = || Error::Export(format!("{}: bad flow row", path.display()));
        out.push((
            record[0].parse().map_err(|_| bad())?,
            record[1].parse().map_err(|_| bad())?,
            record[2].to_string(),
            record[3].to_string(),
            record[4].parse().map_err(|_| bad())?,
        ));
    }
    Ok(out)
}

/// Nested machine-readable tree.
pub fn write_tree_json(path: impl AsRef<Path>, tree: &CommunityTree) -> Result<()> {
    let path = path.as_ref();
    let json = serde_json::to_string_pretty(tree)
        .map_err(|e| Error::Export(format!("tree serialization: {e}")))?;
    std::fs::write(path, json).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn read_tree_json(path: impl AsRef<Path>) -> Result<CommunityTree> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| Error::Export(format!("tree parse: {e}")))
}

/// Indented human-readable tree listing with sizes, p-values, split
/// parameters, exceptions, and representative names when available.
pub fn tree_to_text(tree: &CommunityTree, names: Option<&HashMap<i64, String>>) -> String {
    let mut out = String::new();
    fn emit(
        node: &crate::pipeline::tree::TreeNode,
        depth: usize,
        names: Option<&HashMap<i64, String>>,
        out: &mut String,
    ) {
        let indent = "  ".repeat(depth);
        let p = node.p_value.map(|p| format!("{p:.4}")).unwrap_or_else(|| "-".into());
        let k0 = node.k0.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
        let exc = node
            .exception
            .map(|e| format!(" [{e:?}]"))
            .unwrap_or_default();
        let label = node.label.as_deref().map(|l| format!(" {l}")).unwrap_or_default();
        let reps = node
            .annotations
            .as_ref()
            .map(|a| {
                let take = |list: &[(i64, f64)], n: usize| -> Vec<String> {
                    list.iter()
                        .take(n)
                        .map(|(id, _)| match names.and_then(|m| m.get(id)) {
                            Some(name) => name.clone(),
                            None => id.to_string(),
                        })
                        .collect()
                };
                let mut picks = take(&a.top_betweenness, 2);
                for c in take(&a.top_closeness, 2) {
                    if !picks.contains(&c) {
                        picks.push(c);
                        break;
                    }
                }
                format!("  ({})", picks.join(", "))
            })
            .unwrap_or_default();
        out.push_str(&format!(
            "{indent}{id}  size={size}  p={p}  k0={k0}{exc}{label}{reps}\n",
            id = node.id,
            size = node.size
        ));
        for child in &node.children {
            emit(child, depth + 1, names, out);
        }
    }
    emit(&tree.root, 0, names, &mut out);
    out
}

pub fn write_tree_text(
    path: impl AsRef<Path>,
    tree: &CommunityTree,
    names: Option<&HashMap<i64, String>>,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, tree_to_text(tree, names))
        .map_err(|e| Error::io(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::pipeline::tree::{build_tree, K0Schedule, TreeConfig};
    use crate::spectral::{score_embed, top_eigs};

    #[test]
    fn embedding_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("embed.csv");
        let mut edges = Vec::new();
        for i in 0..8usize {
            for j in (i + 1)..8 {
                if (i + j) % 2 == 0 || j == i + 1 {
                    edges.push((i, j, 1.0));
                }
            }
        }
        let g = Graph::from_edges((0..8).collect(), &edges).unwrap();
        let e = score_embed(&top_eigs(&g, 3, 0.0).unwrap()).unwrap();
        write_embedding_csv(&path, g.node_ids(), &e).unwrap();
        let (ids, back) = read_embedding_csv(&path).unwrap();
        assert_eq!(ids, g.node_ids());
        assert_eq!(back.valid, e.valid);
        for i in 0..e.n() {
            for c in 0..e.dim() {
                assert_eq!(back.coords[(i, c)], e.coords[(i, c)], "shortest round-trip floats");
            }
        }
    }

    #[test]
    fn tree_json_round_trip() {
        let mut edges = Vec::new();
        for i in 0..30usize {
            for j in (i + 1)..30 {
                edges.push((i, j, 1.0));
            }
        }
        let g = Graph::from_edges((0..30).collect(), &edges).unwrap();
        let tree = build_tree(&g, &K0Schedule::uniform(2), &TreeConfig::default(), 0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tree.json");
        write_tree_json(&path, &tree).unwrap();
        let back = read_tree_json(&path).unwrap();
        assert_eq!(back.root.id, tree.root.id);
        assert_eq!(back.root.members, tree.root.members);
        assert_eq!(back.node_ids, tree.node_ids);
        let text = tree_to_text(&tree, None);
        assert!(text.starts_with("root  size=30"));
    }
}
