//! Betweenness and closeness centrality used for community labeling.
//!
//! Betweenness here is the pair-count variant: node i scores one point for
//! each unordered pair {u, w} (u, w != i) such that at least one shortest
//! u-w path passes through i. This differs from the fractional Brandes
//! betweenness, which splits credit across shortest paths. Distances are hop
//! counts regardless of edge weights.

use rayon::prelude::*;
use std::collections::VecDeque;

use crate::graph::Graph;

/// Per-node centrality scores. Betweenness values are integer pair counts
/// stored as f64; closeness is the reciprocal of the within-component
/// distance sum, with 0 for isolated nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub betweenness: Vec<f64>,
    pub closeness: Vec<f64>,
}

/// Compute both centrality scores with one BFS sweep per source node.
///
/// For each source u, nodes are processed in decreasing BFS distance while
/// maintaining a descendant bitset over the shortest-path DAG: w is a
/// descendant of i exactly when some shortest u-w path passes through i.
/// Each unordered pair is seen from both endpoints, hence the final halving.
pub fn centrality(g: &Graph) -> CentralityScores {
    let n = g.n();
    if n == 0 {
        return CentralityScores { betweenness: vec![], closeness: vec![] };
    }
    let words = n.div_ceil(64);

    let per_source: Vec<(Vec<f64>, f64)> = (0..n)
        .into_par_iter()
        .map(|source| {
            let mut dist = vec![u32::MAX; n];
            let mut order: Vec<u32> = Vec::with_capacity(n);
            let mut queue = VecDeque::new();
            dist[source] = 0;
            queue.push_back(source as u32);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &v in g.neighbors(u as usize) {
                    if dist[v as usize] == u32::MAX {
                        dist[v as usize] = dist[u as usize] + 1;
                        queue.push_back(v);
                    }
                }
            }

            let dist_sum: u64 = order.iter().map(|&u| dist[u as usize] as u64).sum();

            // Descendant bitsets in reverse BFS order; desc[i] includes i.
            let mut desc = vec![0u64; n * words];
            let mut contrib = vec![0.0f64; n];
            for &u in order.iter().rev() {
                let u = u as usize;
                let du = dist[u];
                {
                    let row = &mut desc[u * words..(u + 1) * words];
                    row[u / 64] |= 1u64 << (u % 64);
                }
                for &v in g.neighbors(u) {
                    let v = v as usize;
                    if dist[v] == du + 1 {
                        let (head, tail) = desc.split_at_mut(u.max(v) * words);
                        let (a, b) = if u < v {
                            (&mut head[u * words..(u + 1) * words], &tail[..words])
                        } else {
                            (&mut tail[..words], &head[v * words..(v + 1) * words])
                        };
                        for w in 0..words {
                            a[w] |= b[w];
                        }
                    }
                }
                if u != source {
                    let row = &desc[u * words..(u + 1) * words];
                    let count: u64 = row.iter().map(|x| x.count_ones() as u64).sum();
                    contrib[u] += (count - 1) as f64;
                }
            }
            (contrib, dist_sum as f64)
        })
        .collect();

    let mut betweenness = vec![0.0f64; n];
    let mut closeness = vec![0.0f64; n];
    for (source, (contrib, dist_sum)) in per_source.into_iter().enumerate() {
        for i in 0..n {
            betweenness[i] += contrib[i];
        }
        closeness[source] = if dist_sum > 0.0 { 1.0 / dist_sum } else { 0.0 };
    }
    for b in &mut betweenness {
        *b /= 2.0;
    }
    CentralityScores { betweenness, closeness }
}
