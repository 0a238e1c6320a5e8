//! Research trajectories and the diversity metrics derived from them.
//!
//! A trajectory is the ordered sequence of dynamic-embedding knots of one
//! node across windows. Diversity uses two distances on it: se_distance
//! E = |r^(T) - r^(1)| between the last and first knots, and max_distance
//! M = max_{t >= 2} |r^(t) - r^(1)|, so M >= E always. Both are defined
//! only for nodes that stay in the giant component of every window.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::eigen::top_eigs;
use crate::spectral::embed::{dynamic_embed, Embedding};

#[derive(Debug, Clone)]
pub struct TrajectorySet {
    pub node_ids: Vec<i64>,
    /// 1-based reference window whose eigenpairs define the projection.
    pub t0: usize,
    pub k: usize,
    /// One embedding per window, shared node indexing.
    pub knots: Vec<Embedding>,
    pub always_in_giant: Vec<bool>,
    /// In the giant of every window and valid at every knot.
    pub eligible: Vec<bool>,
    pub se_distance: Vec<Option<f64>>,
    pub max_distance: Vec<Option<f64>>,
}

/// E and M for every node with all knots valid and `eligible` set; a single
/// window leaves both undefined.
pub fn diversity_metrics(
    knots: &[Embedding],
    eligible: &[bool],
) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
    let t = knots.len();
    let n = eligible.len();
    if t < 2 {
        return (vec![None; n], vec![None; n]);
    }
    let dim = knots[0].dim();
    let dist = |a: &Embedding, b: &Embedding, i: usize| -> f64 {
        (0..dim).map(|c| (a.coords[(i, c)] - b.coords[(i, c)]).powi(2)).sum::<f64>().sqrt()
    };
    let mut se = vec![None; n];
    let mut max = vec![None; n];
    for i in 0..n {
        if !eligible[i] || !knots.iter().all(|k| k.valid[i]) {
            continue;
        }
        se[i] = Some(dist(&knots[t - 1], &knots[0], i));
        max[i] = Some((1..t).map(|w| dist(&knots[w], &knots[0], i)).fold(0.0, f64::max));
    }
    (se, max)
}

/// Embed every window against the eigenpairs of window `t0` (1-based,
/// c0 = 0) and compute per-node diversity metrics.
pub fn trajectories(window_graphs: &[Graph], t0: usize, k: usize) -> Result<TrajectorySet> {
    if window_graphs.is_empty() {
        return Err(Error::InvalidParameter("need at least one window".into()));
    }
    let t = window_graphs.len();
    if t0 < 1 || t0 > t {
        return Err(Error::InvalidParameter(format!("t0 = {t0} outside [1, {t}]")));
    }
    let n = window_graphs[0].n();
    for (w, g) in window_graphs.iter().enumerate() {
        if g.n() != n || g.node_ids() != window_graphs[0].node_ids() {
            return Err(Error::WindowNodeMismatch { expected: n, window: w + 1, actual: g.n() });
        }
    }
    let reference = top_eigs(&window_graphs[t0 - 1], k, 0.0)?;
    let knots = dynamic_embed(&reference, window_graphs)?;

    let mut always_in_giant = vec![true; n];
    for g in window_graphs {
        let (_, members) = g.giant_component()?;
        let mut in_giant = vec![false; n];
        for &m in &members {
            in_giant[m] = true;
        }
        for i in 0..n {
            always_in_giant[i] &= in_giant[i];
        }
    }
    let eligible: Vec<bool> = (0..n)
        .map(|i| always_in_giant[i] && knots.iter().all(|k| k.valid[i]))
        .collect();
    let (se_distance, max_distance) = diversity_metrics(&knots, &eligible);
    Ok(TrajectorySet {
        node_ids: window_graphs[0].node_ids().to_vec(),
        t0,
        k,
        knots,
        always_in_giant,
        eligible,
        se_distance,
        max_distance,
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DiversityRow {
    pub node_id: i64,
    pub se_distance: f64,
    pub max_distance: f64,
    pub gap: f64,
    /// Significant and persistent: both metrics large.
    pub sp: bool,
    /// Significant but not persistent: M large, E not.
    pub snp: bool,
}

#[derive(Debug, Clone)]
pub struct DiversityReport {
    /// Rows sorted by se_distance descending.
    pub rows: Vec<DiversityRow>,
    pub e_threshold: f64,
    pub m_threshold: f64,
    pub quantile: f64,
}

fn quantile_of(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let idx = ((sorted.len() - 1) as f64 * q).floor() as usize;
    sorted[idx]
}

/// Rank eligible nodes by their diversity metrics and flag SP/SnP types by
/// quantile thresholds (default top decile). With `degrees` and `top_n`,
/// ranking and thresholds are computed among the top-degree eligible nodes,
/// mirroring how the headline lists restrict to high-degree authors.
pub fn diversity_report(
    ts: &TrajectorySet,
    degrees: Option<&[f64]>,
    top_n: Option<usize>,
    quantile: f64,
) -> DiversityReport {
    let mut pool: Vec<usize> = (0..ts.node_ids.len())
        .filter(|&i| ts.se_distance[i].is_some())
        .collect();
    if let (Some(deg), Some(top)) = (degrees, top_n) {
        pool.sort_by(|&a, &b| {
            deg[b].partial_cmp(&deg[a]).unwrap().then(ts.node_ids[a].cmp(&ts.node_ids[b]))
        });
        pool.truncate(top);
    }
    let mut es: Vec<f64> = pool.iter().map(|&i| ts.se_distance[i].unwrap()).collect();
    let mut ms: Vec<f64> = pool.iter().map(|&i| ts.max_distance[i].unwrap()).collect();
    es.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let e_threshold = quantile_of(&es, quantile);
    let m_threshold = quantile_of(&ms, quantile);
    let large = |v: f64, thr: f64| v >= thr && v > 0.0;
    let mut rows: Vec<DiversityRow> = pool
        .iter()
        .map(|&i| {
            let e = ts.se_distance[i].unwrap();
            let m = ts.max_distance[i].unwrap();
            let e_large = large(e, e_threshold);
            let m_large = large(m, m_threshold);
            DiversityRow {
                node_id: ts.node_ids[i],
                se_distance: e,
                max_distance: m,
                gap: m - e,
                sp: e_large && m_large,
                snp: m_large && !e_large,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        b.se_distance.partial_cmp(&a.se_distance).unwrap().then(a.node_id.cmp(&b.node_id))
    });
    DiversityReport { rows, e_threshold, m_threshold, quantile }
}
