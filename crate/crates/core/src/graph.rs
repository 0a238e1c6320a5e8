//! Immutable sparse symmetric graph storage.
//!
//! Graphs are undirected with nonnegative edge weights and a zero diagonal;
//! binary graphs store weight 1. Adjacency is kept in compressed sparse row
//! form with sorted neighbor lists, so values are cheap to share across
//! threads and every operation here is pure.

use std::collections::HashMap;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Undirected weighted graph with stable external node identifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_ids: Vec<i64>,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    weights: Vec<f64>,
}

impl Graph {
    /// Build a graph from undirected edges given as `(i, j, weight)` index
    /// triples into `node_ids`. Duplicate edges are summed; self-loops and
    /// negative weights are rejected.
    pub fn from_edges(node_ids: Vec<i64>, edges: &[(usize, usize, f64)]) -> Result<Graph> {
        let n = node_ids.len();
        {
            let mut seen = HashMap::with_capacity(n);
            for &id in &node_ids {
                if seen.insert(id, ()).is_some() {
                    return Err(Error::DuplicateNodeId(id));
                }
            }
        }
        let mut pair_weights: HashMap<(u32, u32), f64> = HashMap::with_capacity(edges.len());
        for &(i, j, w) in edges {
            if i >= n {
                return Err(Error::IndexOutOfRange(i, n));
            }
            if j >= n {
                return Err(Error::IndexOutOfRange(j, n));
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if w < 0.0 || !w.is_finite() {
                return Err(Error::NegativeWeight { src: i, dst: j, weight: w });
            }
            if w == 0.0 {
                continue;
            }
            let key = if i < j { (i as u32, j as u32) } else { (j as u32, i as u32) };
            *pair_weights.entry(key).or_insert(0.0) += w;
        }

        let mut degree_counts = vec![0usize; n];
        for &(i, j) in pair_weights.keys() {
            degree_counts[i as usize] += 1;
            degree_counts[j as usize] += 1;
        }
        let mut row_ptr = vec![0usize; n + 1];
        for i in 0..n {
            row_ptr[i + 1] = row_ptr[i] + degree_counts[i];
        }
        let nnz = row_ptr[n];
        let mut col_idx = vec![0u32; nnz];
        let mut weights = vec![0.0f64; nnz];
        let mut cursor = row_ptr[..n].to_vec();
        let mut pairs: Vec<((u32, u32), f64)> = pair_weights.into_iter().collect();
        pairs.sort_unstable_by_key(|&(k, _)| k);
        for ((i, j), w) in pairs {
            let (i, j) = (i as usize, j as usize);
            col_idx[cursor[i]] = j as u32;
            weights[cursor[i]] = w;
            cursor[i] += 1;
            col_idx[cursor[j]] = i as u32;
            weights[cursor[j]] = w;
            cursor[j] += 1;
        }
        // Sorting pairs by (i, j) fills row i in increasing j order, but row j
        // receives entries in increasing i order only because pairs are sorted
        // on the first key; re-sort each row to be safe.
        let mut g = Graph { node_ids, row_ptr, col_idx, weights };
        g.sort_rows();
        Ok(g)
    }

    fn sort_rows(&mut self) {
        for i in 0..self.n() {
            let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut entries: Vec<(u32, f64)> = (lo..hi)
                .map(|k| (self.col_idx[k], self.weights[k]))
                .collect();
            entries.sort_unstable_by_key(|&(c, _)| c);
            for (offset, (c, w)) in entries.into_iter().enumerate() {
                self.col_idx[lo + offset] = c;
                self.weights[lo + offset] = w;
            }
        }
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.node_ids.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.col_idx.len() / 2
    }

    pub fn node_ids(&self) -> &[i64] {
        &self.node_ids
    }

    pub fn node_id(&self, i: usize) -> i64 {
        self.node_ids[i]
    }

    /// Index of the node with the given external id, if present.
    pub fn index_of(&self, id: i64) -> Option<usize> {
        self.node_ids.iter().position(|&x| x == id)
    }

    /// Neighbor indices of node `i`, sorted ascending.
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    /// Edge weights parallel to `neighbors(i)`.
    pub fn neighbor_weights(&self, i: usize) -> &[f64] {
        &self.weights[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    /// Weight of edge (i, j); 0 when absent or i == j.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let nbrs = self.neighbors(i);
        match nbrs.binary_search(&(j as u32)) {
            Ok(pos) => self.neighbor_weights(i)[pos],
            Err(_) => 0.0,
        }
    }

    /// Weighted degree: sum of incident edge weights per node.
    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n())
            .map(|i| self.neighbor_weights(i).iter().sum())
            .collect()
    }

    /// Number of neighbors per node.
    pub fn neighbor_counts(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.neighbors(i).len()).collect()
    }

    /// True when every stored weight is exactly 1.
    pub fn is_binary(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n());
        debug_assert_eq!(y.len(), self.n());
        for i in 0..self.n() {
            let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut acc = 0.0;
            for k in lo..hi {
                acc += self.weights[k] * x[self.col_idx[k] as usize];
            }
            y[i] = acc;
        }
    }

    /// Connected component label per node plus the component count.
    /// Labels are assigned in order of the smallest node index they contain.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = std::collections::VecDeque::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if label[v] == usize::MAX {
                        label[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Induced subgraph on the largest connected component, with the map from
    /// new indices to old ones. Ties between equally large components break
    /// toward the one containing the smallest node index.
    pub fn giant_component(&self) -> Result<(Graph, Vec<usize>)> {
        if self.n() == 0 {
            return Err(Error::EmptyGraph);
        }
        let (labels, count) = self.component_labels();
        let mut sizes = vec![0usize; count];
        for &l in &labels {
            sizes[l] += 1;
        }
        // Labels are ordered by smallest member index, so the first maximal
        // size wins the tie.
        let best = (0..count).max_by_key(|&l| (sizes[l], std::cmp::Reverse(l))).unwrap();
        let members: Vec<usize> = (0..self.n()).filter(|&i| labels[i] == best).collect();
        let sub = self.induced_subgraph(&members)?;
        Ok((sub, members))
    }

    /// Induced subgraph on the given node indices (order preserved after
    /// sorting/dedup), keeping weights and external ids.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Graph> {
        if nodes.is_empty() {
            return Err(Error::EmptyNodeSet);
        }
        let n = self.n();
        let mut sorted: Vec<usize> = nodes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange(bad, n));
        }
        let mut new_index = vec![u32::MAX; n];
        for (new, &old) in sorted.iter().enumerate() {
            new_index[old] = new as u32;
        }
        let node_ids: Vec<i64> = sorted.iter().map(|&i| self.node_ids[i]).collect();
        let m = sorted.len();
        let mut row_ptr = vec![0usize; m + 1];
        for (new, &old) in sorted.iter().enumerate() {
            let kept = self
                .neighbors(old)
                .iter()
                .filter(|&&v| new_index[v as usize] != u32::MAX)
                .count();
            row_ptr[new + 1] = row_ptr[new] + kept;
        }
        let mut col_idx = Vec::with_capacity(row_ptr[m]);
        let mut weights = Vec::with_capacity(row_ptr[m]);
        for &old in &sorted {
            for (pos, &v) in self.neighbors(old).iter().enumerate() {
                let mapped = new_index[v as usize];
                if mapped != u32::MAX {
                    col_idx.push(mapped);
                    weights.push(self.neighbor_weights(old)[pos]);
                }
            }
        }
        Ok(Graph { node_ids, row_ptr, col_idx, weights })
    }

    /// Like `induced_subgraph`, but an empty node set yields an empty graph
    /// rather than an error.
    pub fn induced_subgraph_or_empty(&self, nodes: &[usize]) -> Result<Graph> {
        if nodes.is_empty() {
            return Ok(Graph { node_ids: vec![], row_ptr: vec![0], col_idx: vec![], weights: vec![] });
        }
        self.induced_subgraph(nodes)
    }

    /// Write the graph as `src_id<TAB>dst_id<TAB>weight` lines, one per
    /// undirected edge, ordered by node index. Isolated nodes do not appear.
    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut out = BufWriter::new(file);
        let mut emit = || -> std::io::Result<()> {
            for i in 0..self.n() {
                for (pos, &j) in self.neighbors(i).iter().enumerate() {
                    let j = j as usize;
                    if i < j {
                        let w = self.neighbor_weights(i)[pos];
                        writeln!(out, "{}\t{}\t{}", self.node_ids[i], self.node_ids[j], w)?;
                    }
                }
            }
            out.flush()
        };
        emit().map_err(|e| Error::io(path.display().to_string(), e))
    }

    /// Read an edge list written by [`Graph::write_edge_list`]. A non-numeric
    /// first line is treated as a header. Nodes are indexed by ascending id;
    /// duplicate edges are summed. Reader and writer are inverse up to edge
    /// ordering.
    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let file = std::fs::File::open(path).map_err(|e| Error::io(&display, e))?;
        let reader = std::io::BufReader::new(file);
        let mut raw: Vec<(i64, i64, f64)> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(&display, e))?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(['\t', ',']).map(str::trim).collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(Error::parse(&display, lineno + 1, "expected 2 or 3 fields"));
            }
            let src: i64 = match fields[0].parse() {
                Ok(v) => v,
                Err(_) if lineno == 0 => continue, // header line
                Err(_) => return Err(Error::parse(&display, lineno + 1, "bad source id")),
            };
            let dst: i64 = fields[1]
                .parse()
                .map_err(|_| Error::parse(&display, lineno + 1, "bad destination id"))?;
            let w: f64 = if fields.len() == 3 {
                fields[2]
                    .parse()
                    .map_err(|_| Error::parse(&display, lineno + 1, "bad weight"))?
            } else {
                1.0
            };
            raw.push((src, dst, w));
        }
        let mut ids: Vec<i64> = raw.iter().flat_map(|&(s, d, _)| [s, d]).collect();
        ids.sort_unstable();
        ids.dedup();
        let index: HashMap<i64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let edges: Vec<(usize, usize, f64)> =
            raw.into_iter().map(|(s, d, w)| (index[&s], index[&d], w)).collect();
        Graph::from_edges(ids, &edges)
    }

    /// Check symmetry, zero diagonal, and nonnegative weights by full scan.
    /// Intended for tests on graphs up to ~10^4 nodes.
    pub fn check_invariants(&self) -> Result<()> {
        for i in 0..self.n() {
            for (pos, &j) in self.neighbors(i).iter().enumerate() {
                let j = j as usize;
                let w = self.neighbor_weights(i)[pos];
                if i == j {
                    return Err(Error::SelfLoop(i));
                }
                if w < 0.0 {
                    return Err(Error::NegativeWeight { src: i, dst: j, weight: w });
                }
                if (self.weight(j, i) - w).abs() != 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "asymmetric weights at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }
}
