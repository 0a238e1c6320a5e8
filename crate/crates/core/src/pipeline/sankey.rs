//! Community flows between adjacent time windows for Sankey diagrams.
//!
//! Each window's giant component is clustered with modified SCORE. Flows
//! are counted on V, the union of node sets shared by adjacent windows;
//! nodes of V absent from a window sit in that window's "outside"
//! pseudo-community (O_1, O_2, ...). Community indices are aligned across
//! windows by greedy maximal overlap within V, so stable flows sit on the
//! diagonal; names stay editable downstream.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::modified_score_cluster_with;
use crate::util::mix_seed;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowClustering {
    /// 1-based window index.
    pub window: usize,
    pub k: usize,
    /// Aligned community index per author id (giant-component members).
    pub labels: HashMap<i64, usize>,
    /// Default display names per aligned community index present here.
    pub community_names: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowMatrix {
    pub from_window: usize,
    pub to_window: usize,
    /// Community names plus the trailing outside pseudo-community.
    pub source_names: Vec<String>,
    pub target_names: Vec<String>,
    /// counts[s][t] = V-members moving from source s to target t.
    pub counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SankeyFlows {
    /// Sorted author ids of V = union of adjacent giant intersections.
    pub v_ids: Vec<i64>,
    pub clusterings: Vec<WindowClustering>,
    pub flows: Vec<FlowMatrix>,
}

/// Greedy maximal-overlap matching: returns for each raw label of the new
/// window an aligned index, reusing the previous window's indices where
/// overlap exists and minting fresh ones otherwise.
fn align_labels(
    prev: &HashMap<i64, usize>,
    raw: &HashMap<i64, usize>,
    raw_k: usize,
    v_ids: &[i64],
    next_fresh: &mut usize,
) -> Vec<usize> {
    let prev_indices: Vec<usize> = {
        let mut seen: Vec<usize> = prev.values().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    };
    let mut overlap: HashMap<(usize, usize), u64> = HashMap::new();
    for id in v_ids {
        if let (Some(&p), Some(&r)) = (prev.get(id), raw.get(id)) {
            *overlap.entry((r, p)).or_insert(0) += 1;
        }
    }
    let mut assigned: Vec<Option<usize>> = vec![None; raw_k];
    let mut used_prev: Vec<bool> = vec![false; prev_indices.iter().max().map(|&m| m + 1).unwrap_or(0)];
    let mut entries: Vec<((usize, usize), u64)> = overlap.into_iter().collect();
    // largest overlap first; ties break toward low indices for determinism
    entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    for ((r, p), _) in entries {
        if assigned[r].is_none() && !used_prev[p] {
            assigned[r] = Some(p);
            used_prev[p] = true;
        }
    }
    assigned
        .into_iter()
        .map(|a| {
            a.unwrap_or_else(|| {
                let fresh = *next_fresh;
                *next_fresh += 1;
                fresh
            })
        })
        .collect()
}

/// Cluster each window and count migrations of the shared node set between
/// adjacent windows.
pub fn sankey(
    window_graphs: &[Graph],
    ks: &[usize],
    c0: f64,
    seed: u64,
    kmeans_restarts: usize,
) -> Result<SankeyFlows> {
    if window_graphs.len() < 2 {
        return Err(Error::InvalidParameter("sankey needs at least two windows".into()));
    }
    if ks.len() != window_graphs.len() {
        return Err(Error::InvalidParameter(format!(
            "expected {} community counts, got {}",
            window_graphs.len(),
            ks.len()
        )));
    }

    // per-window giant clusterings, raw labels keyed by author id
    let mut raw: Vec<HashMap<i64, usize>> = Vec::with_capacity(window_graphs.len());
    for (t, g) in window_graphs.iter().enumerate() {
        let (giant, _) = g.giant_component()?;
        let truncate = (giant.n() as f64).ln();
        let labels = modified_score_cluster_with(
            &giant,
            ks[t],
            c0,
            truncate,
            mix_seed(seed, t as u64),
            kmeans_restarts,
        )?;
        raw.push(giant.node_ids().iter().copied().zip(labels).collect());
    }

    // V = union of adjacent giant intersections
    let mut v_ids: Vec<i64> = Vec::new();
    for t in 0..window_graphs.len() - 1 {
        for id in raw[t].keys() {
            if raw[t + 1].contains_key(id) {
                v_ids.push(*id);
            }
        }
    }
    v_ids.sort_unstable();
    v_ids.dedup();

    // align community indices across windows
    let mut next_fresh = ks[0];
    let mut aligned: Vec<HashMap<i64, usize>> = Vec::with_capacity(raw.len());
    aligned.push(raw[0].clone());
    for t in 1..raw.len() {
        let map = align_labels(&aligned[t - 1], &raw[t], ks[t], &v_ids, &mut next_fresh);
        aligned.push(raw[t].iter().map(|(&id, &r)| (id, map[r])).collect());
    }

    let clusterings: Vec<WindowClustering> = aligned
        .iter()
        .enumerate()
        .map(|(t, labels)| {
            let mut present: Vec<usize> = labels.values().copied().collect();
            present.sort_unstable();
            present.dedup();
            WindowClustering {
                window: t + 1,
                k: ks[t],
                labels: labels.clone(),
                community_names: present.iter().map(|&c| format!("C{}", c + 1)).collect(),
            }
        })
        .collect();

    // flows between adjacent windows over V
    let mut flows = Vec::new();
    for t in 0..aligned.len() - 1 {
        let src_communities: Vec<usize> = {
            let mut s: Vec<usize> = aligned[t].values().copied().collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let dst_communities: Vec<usize> = {
            let mut s: Vec<usize> = aligned[t + 1].values().copied().collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let src_pos: HashMap<usize, usize> =
            src_communities.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let dst_pos: HashMap<usize, usize> =
            dst_communities.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let mut counts = vec![vec![0u64; dst_communities.len() + 1]; src_communities.len() + 1];
        for id in &v_ids {
            let s = aligned[t].get(id).map(|&c| src_pos[&c]).unwrap_or(src_communities.len());
            let d = aligned[t + 1].get(id).map(|&c| dst_pos[&c]).unwrap_or(dst_communities.len());
            counts[s][d] += 1;
        }
        let mut source_names: Vec<String> =
            src_communities.iter().map(|&c| format!("C{}", c + 1)).collect();
        source_names.push(format!("O{}", t + 1));
        let mut target_names: Vec<String> =
            dst_communities.iter().map(|&c| format!("C{}", c + 1)).collect();
        target_names.push(format!("O{}", t + 2));
        flows.push(FlowMatrix {
            from_window: t + 1,
            to_window: t + 2,
            source_names,
            target_names,
            counts,
        });
    }
    Ok(SankeyFlows { v_ids, clusterings, flows })
}
