//! The research map: k-means sub-areas of a 2-dimensional SCORE embedding,
//! with per-cluster top-degree representatives and the simplex vertices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spectral::embed::Embedding;
use crate::spectral::kmeans::{kmeans, DEFAULT_MAX_ITERS};

#[derive(Debug, Clone)]
pub struct ResearchMap {
    /// L x 2 cluster centers; assignment is by nearest center (Voronoi).
    pub centers: DMatrix<f64>,
    /// Cluster per node; None for masked embedding rows.
    pub assignment: Vec<Option<usize>>,
    pub objective: f64,
    /// K x 2 simplex vertices (the triangle for K = 3).
    pub vertices: DMatrix<f64>,
    /// Per cluster, the highest-degree members as (node_id, degree).
    pub top_degree: Vec<Vec<(i64, f64)>>,
}

/// Cluster the valid rows of a 2-dimensional embedding into `l` sub-areas.
pub fn research_map(
    e: &Embedding,
    vertices: &DMatrix<f64>,
    l: usize,
    seed: u64,
    degrees: &[f64],
    node_ids: &[i64],
    top_per_cluster: usize,
    restarts: usize,
) -> Result<ResearchMap> {
    if e.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "research map needs a 2-dimensional embedding (K = 3), got dim {}",
            e.dim()
        )));
    }
    if degrees.len() != e.n() || node_ids.len() != e.n() {
        return Err(Error::InvalidParameter("degrees/node_ids disagree with embedding".into()));
    }
    let rows: Vec<usize> = (0..e.n()).filter(|&i| e.valid[i]).collect();
    if rows.len() < l {
        return Err(Error::TooFewValidRows { rows: rows.len(), k: l });
    }
    let points = DMatrix::from_fn(rows.len(), 2, |i, c| e.coords[(rows[i], c)]);
    let km = kmeans(&points, l, seed, restarts, DEFAULT_MAX_ITERS)?;
    let mut assignment = vec![None; e.n()];
    for (pos, &row) in rows.iter().enumerate() {
        assignment[row] = Some(km.assignments[pos]);
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); l];
    for (i, a) in assignment.iter().enumerate() {
        if let Some(c) = a {
            members[*c].push(i);
        }
    }
    let top_degree = members
        .iter()
        .map(|m| {
            let mut order = m.clone();
            order.sort_by(|&a, &b| {
                degrees[b].partial_cmp(&degrees[a]).unwrap().then(node_ids[a].cmp(&node_ids[b]))
            });
            order.into_iter().take(top_per_cluster).map(|i| (node_ids[i], degrees[i])).collect()
        })
        .collect();
    Ok(ResearchMap {
        centers: km.centers,
        assignment,
        objective: km.objective,
        vertices: vertices.clone(),
        top_degree,
    })
}
