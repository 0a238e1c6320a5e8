//! Recursive hierarchical community detection.
//!
//! Each tree node holds a member set of the root graph. Its induced giant
//! component is SgnQ-tested; the node becomes a leaf when the p-value
//! exceeds `p_stop` or the giant has at most `size_stop` nodes, and is
//! otherwise split by modified SCORE into K0 parts which recurse. The root
//! is split unconditionally (it is never SgnQ-tested). Members outside the
//! induced giant attach as flagged children so the leaves always partition
//! the root node set: second components of at least `second_component_min`
//! nodes become candidate leaves for human confirmation, everything else
//! pools into a residue child.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::centrality::centrality;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sgnq::sgnq_statistic;
use crate::spectral::modified_score_cluster_with;
use crate::util::mix_seed;

/// Why a leaf stopped outside the plain stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeException {
    /// Members exceed `size_stop` but their giant component does not.
    GiantTooSmall,
    /// A non-giant component large enough to stand as its own community;
    /// kept as a candidate leaf for human confirmation.
    TightSecondComponent,
    /// A split produced a part too small to be meaningful; the node is kept
    /// whole for human confirmation.
    DegenerateSplit,
    /// Small non-giant remainders pooled under their parent.
    Residue,
}

/// Representative-node annotations for a leaf: top weighted degree within
/// the leaf, top betweenness and closeness within the leaf's giant
/// component (`giant_only` marks when that differs from the full leaf).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeafAnnotations {
    pub top_degree: Vec<(i64, f64)>,
    pub top_betweenness: Vec<(i64, f64)>,
    pub top_closeness: Vec<(i64, f64)>,
    pub giant_only: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeNode {
    /// "root", "C1", "C1-2", ... mirroring the split path.
    pub id: String,
    /// Indices into the root graph.
    pub members: Vec<usize>,
    pub size: usize,
    /// SgnQ p-value of the induced giant; None when not tested (root) or
    /// not computable.
    pub p_value: Option<f64>,
    /// Split parameter actually used (splits only).
    pub k0: Option<usize>,
    pub children: Vec<TreeNode>,
    /// Human-editable label slot.
    pub label: Option<String>,
    pub annotations: Option<LeafAnnotations>,
    pub exception: Option<TreeException>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaves(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if node.is_leaf() {
                out.push(node);
            } else {
                stack.extend(node.children.iter());
            }
        }
        out.sort_by(|a, b| a.id.cmp(&b.id));
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommunityTree {
    pub root: TreeNode,
    /// External ids of the root graph, for resolving member indices.
    pub node_ids: Vec<i64>,
}

impl CommunityTree {
    pub fn leaf_count(&self) -> usize {
        self.root.leaves().len()
    }
}

/// Per-depth K0 defaults plus per-node overrides keyed by node id.
#[derive(Debug, Clone, Default)]
pub struct K0Schedule {
    pub per_depth: Vec<usize>,
    pub overrides: HashMap<String, usize>,
    pub default_k0: usize,
}

impl K0Schedule {
    /// First split uses `k0_root`, everything below defaults to 2.
    pub fn uniform(k0_root: usize) -> Self {
        K0Schedule { per_depth: vec![k0_root], overrides: HashMap::new(), default_k0: 2 }
    }

    pub fn k0_for(&self, id: &str, depth: usize) -> usize {
        if let Some(&k) = self.overrides.get(id) {
            return k;
        }
        self.per_depth.get(depth).copied().unwrap_or(self.default_k0.max(2))
    }
}

#[derive(Debug, Clone)]
pub struct TreeConfig {
    pub p_stop: f64,
    pub size_stop: usize,
    pub c0: f64,
    /// Truncation threshold for modified SCORE; None means log(n) per node.
    pub truncate: Option<f64>,
    /// Second components at least this large become candidate leaves.
    pub second_component_min: usize,
    /// A split producing a part smaller than this is degenerate.
    pub min_split_part: usize,
    pub annotation_top: usize,
    pub kmeans_restarts: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            p_stop: 0.001,
            size_stop: 250,
            c0: 1.0,
            truncate: None,
            second_component_min: 50,
            min_split_part: 10,
            annotation_top: 10,
            kmeans_restarts: 20,
        }
    }
}

fn top_scored(ids: &[i64], scores: &[f64], top: usize) -> Vec<(i64, f64)> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b].partial_cmp(&scores[a]).unwrap().then_with(|| ids[a].cmp(&ids[b]))
    });
    order.into_iter().take(top).map(|i| (ids[i], scores[i])).collect()
}

fn annotate(sub: &Graph, giant: &Graph, top: usize) -> LeafAnnotations {
    let degree = top_scored(sub.node_ids(), &sub.degrees(), top);
    let scores = centrality(giant);
    LeafAnnotations {
        top_degree: degree,
        top_betweenness: top_scored(giant.node_ids(), &scores.betweenness, top.min(3)),
        top_closeness: top_scored(giant.node_ids(), &scores.closeness, top.min(3)),
        giant_only: giant.n() < sub.n(),
    }
}

struct Grower<'a> {
    root: &'a Graph,
    schedule: &'a K0Schedule,
    cfg: &'a TreeConfig,
    seed: u64,
}

fn fnv1a(text: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl<'a> Grower<'a> {
    fn leaf(
        &self,
        id: String,
        members: Vec<usize>,
        p_value: Option<f64>,
        sub: &Graph,
        giant: &Graph,
        exception: Option<TreeException>,
    ) -> TreeNode {
        TreeNode {
            id,
            size: members.len(),
            members,
            p_value,
            k0: None,
            children: Vec::new(),
            label: None,
            annotations: Some(annotate(sub, giant, self.cfg.annotation_top)),
            exception,
        }
    }

    fn grow(&self, id: String, members: Vec<usize>, depth: usize) -> Result<TreeNode> {
        let is_root = depth == 0;
        let sub = self.root.induced_subgraph(&members)?;
        let (giant, giant_map) = sub.giant_component()?;
        let p_value = if is_root { None } else { sgnq_statistic(&giant).ok().map(|r| r.p_value) };

        let giant_small = giant.n() <= self.cfg.size_stop;
        let stop = if is_root {
            giant_small
        } else {
            giant_small || p_value.map(|p| p > self.cfg.p_stop).unwrap_or(true)
        };
        if stop {
            let exception = (giant_small && members.len() > self.cfg.size_stop)
                .then_some(TreeException::GiantTooSmall);
            return Ok(self.leaf(id, members, p_value, &sub, &giant, exception));
        }

        // split the giant with modified SCORE, stepping K0 down when a part
        // comes back empty
        let mut k0 = self.schedule.k0_for(&id, depth);
        let truncate = self.cfg.truncate.unwrap_or_else(|| (giant.n() as f64).ln());
        let node_seed = mix_seed(self.seed, fnv1a(&id));
        let labels = loop {
            if k0 < 2 {
                return Ok(self.leaf(
                    id,
                    members,
                    p_value,
                    &sub,
                    &giant,
                    Some(TreeException::DegenerateSplit),
                ));
            }
            let labels = modified_score_cluster_with(
                &giant,
                k0,
                self.cfg.c0,
                truncate,
                node_seed,
                self.cfg.kmeans_restarts,
            )?;
            let mut sizes = vec![0usize; k0];
            for &l in &labels {
                sizes[l] += 1;
            }
            if sizes.iter().all(|&s| s > 0) {
                if sizes.iter().any(|&s| s < self.cfg.min_split_part) {
                    return Ok(self.leaf(
                        id,
                        members,
                        p_value,
                        &sub,
                        &giant,
                        Some(TreeException::DegenerateSplit),
                    ));
                }
                break labels;
            }
            k0 -= 1;
        };

        // cluster member sets in root-graph indices
        let mut cluster_members: Vec<Vec<usize>> = vec![Vec::new(); k0];
        for (gi, &label) in labels.iter().enumerate() {
            cluster_members[label].push(members[giant_map[gi]]);
        }

        // members outside the giant: large second components become
        // candidate leaves, the rest pool into one residue child
        let mut extra_children: Vec<(Vec<usize>, TreeException)> = Vec::new();
        if giant.n() < sub.n() {
            let (component_of, count) = sub.component_labels();
            let giant_label = component_of[giant_map[0]];
            let mut comps: Vec<Vec<usize>> = vec![Vec::new(); count];
            for (si, &c) in component_of.iter().enumerate() {
                if c != giant_label {
                    comps[c].push(members[si]);
                }
            }
            comps.retain(|c| !c.is_empty());
            comps.sort_by_key(|c| (std::cmp::Reverse(c.len()), c[0]));
            let mut residue: Vec<usize> = Vec::new();
            for comp in comps {
                if comp.len() >= self.cfg.second_component_min {
                    extra_children.push((comp, TreeException::TightSecondComponent));
                } else {
                    residue.extend(comp);
                }
            }
            if !residue.is_empty() {
                residue.sort_unstable();
                extra_children.push((residue, TreeException::Residue));
            }
        }

        let prefix = if is_root { "C".to_string() } else { format!("{id}-") };
        let clusters: Vec<(String, Vec<usize>)> = cluster_members
            .into_iter()
            .enumerate()
            .map(|(i, m)| (format!("{prefix}{}", i + 1), m))
            .collect();
        use rayon::prelude::*;
        let mut children: Vec<TreeNode> = clusters
            .into_par_iter()
            .map(|(child_id, m)| self.grow(child_id, m, depth + 1))
            .collect::<Result<Vec<_>>>()?;
        let mut next = children.len() + 1;
        for (m, exception) in extra_children {
            let child_id = format!("{prefix}{next}");
            next += 1;
            let child_sub = self.root.induced_subgraph(&m)?;
            let (child_giant, _) = child_sub.giant_component()?;
            let child_p = sgnq_statistic(&child_giant).ok().map(|r| r.p_value);
            children.push(self.leaf(child_id, m, child_p, &child_sub, &child_giant, Some(exception)));
        }

        Ok(TreeNode {
            id,
            size: members.len(),
            members,
            p_value,
            k0: Some(k0),
            children,
            label: None,
            annotations: None,
            exception: None,
        })
    }
}

/// Grow the community tree of a connected graph.
pub fn build_tree(
    g: &Graph,
    schedule: &K0Schedule,
    cfg: &TreeConfig,
    seed: u64,
) -> Result<CommunityTree> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (_, components) = g.component_labels();
    if components != 1 {
        return Err(Error::InvalidParameter(format!(
            "tree root must be connected; found {components} components (pass the giant component)"
        )));
    }
    let grower = Grower { root: g, schedule, cfg, seed };
    let root = grower.grow("root".to_string(), (0..g.n()).collect(), 0)?;
    Ok(CommunityTree { root, node_ids: g.node_ids().to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{sample_dcbm, DcbmParams};
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};

    fn clique(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j, 1.0));
            }
        }
        Graph::from_edges((0..n as i64).collect(), &edges).unwrap()
    }

    fn assert_partition(tree: &CommunityTree) {
        let mut seen = vec![false; tree.node_ids.len()];
        for leaf in tree.root.leaves() {
            for &m in &leaf.members {
                assert!(!seen[m], "node {m} in two leaves");
                seen[m] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "leaves must cover the root");
        fn check(node: &TreeNode, p_stop: f64, size_stop: usize) {
            if node.is_leaf() {
                if node.id != "root" {
                    let ok = node.p_value.map(|p| p > p_stop).unwrap_or(false)
                        || node.size <= size_stop
                        || node.exception.is_some();
                    assert!(ok, "leaf {} stops for no reason", node.id);
                }
                return;
            }
            assert!(node.k0.unwrap() >= 2);
            let total: usize = node.children.iter().map(|c| c.size).sum();
            assert_eq!(total, node.size, "children of {} must partition it", node.id);
            for c in &node.children {
                assert!(c.size < node.size);
                check(c, p_stop, size_stop);
            }
        }
        check(&tree.root, 0.001, 250);
    }

    #[test]
    fn single_clique_is_one_leaf() {
        let g = clique(50);
        let tree = build_tree(&g, &K0Schedule::uniform(2), &TreeConfig::default(), 1).unwrap();
        assert!(tree.root.is_leaf());
        assert_eq!(tree.root.size, 50);
        assert!(tree.root.p_value.is_none(), "root is never SgnQ-tested");
        assert_partition(&tree);
        let ann = tree.root.annotations.as_ref().unwrap();
        assert_eq!(ann.top_degree.len(), 10);
        assert!(!ann.giant_only);
    }

    #[test]
    fn disconnected_root_rejected() {
        let g = Graph::from_edges(vec![0, 1, 2, 3], &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(build_tree(&g, &K0Schedule::uniform(2), &TreeConfig::default(), 1).is_err());
    }

    fn planted_two_level(seed: u64) -> (Graph, Vec<usize>) {
        // 2 super-blocks x 2 sub-blocks, strong separation
        let n = 2000;
        let k = 4;
        let p = DMatrix::from_fn(k, k, |a, b| {
            if a == b {
                1.0
            } else if a / 2 == b / 2 {
                0.3
            } else {
                0.05
            }
        });
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let theta: Vec<f64> = (0..n).map(|_| 0.3 + 0.5 * rng.random::<f64>()).collect();
        let labels: Vec<usize> = (0..n).map(|i| i % k).collect();
        let params = DcbmParams::new(p, theta, labels.clone()).unwrap();
        let g = sample_dcbm(&params, seed).unwrap();
        let (giant, members) = g.giant_component().unwrap();
        let truth = members.iter().map(|&i| labels[i]).collect();
        (giant, truth)
    }

    fn adjusted_agreement(leaf_labels: &[usize], truth: &[usize], k: usize) -> f64 {
        // best-permutation agreement over leaf labels (k small)
        let mut perms = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        permute(&mut idx, 0, &mut perms);
        let mut best = 0usize;
        for perm in &perms {
            let agree =
                leaf_labels.iter().zip(truth).filter(|&(&l, &t)| perm[l] == t).count();
            best = best.max(agree);
        }
        best as f64 / truth.len() as f64
    }

    fn permute(idx: &mut Vec<usize>, at: usize, out: &mut Vec<Vec<usize>>) {
        if at == idx.len() {
            out.push(idx.clone());
            return;
        }
        for i in at..idx.len() {
            idx.swap(at, i);
            permute(idx, at + 1, out);
            idx.swap(at, i);
        }
    }

    #[test]
    fn planted_hierarchy_recovers_four_leaves() {
        let (g, truth) = planted_two_level(5);
        let schedule = K0Schedule::uniform(2);
        let cfg = TreeConfig { kmeans_restarts: 10, ..TreeConfig::default() };
        let tree = build_tree(&g, &schedule, &cfg, 7).unwrap();
        assert_partition(&tree);
        let leaves = tree.root.leaves();
        assert_eq!(leaves.len(), 4, "expected 4 leaves");
        // leaf-level labels vs planted labels
        let mut leaf_labels = vec![0usize; g.n()];
        for (li, leaf) in leaves.iter().enumerate() {
            for &m in &leaf.members {
                leaf_labels[m] = li;
            }
        }
        let agreement = adjusted_agreement(&leaf_labels, &truth, 4);
        assert!(agreement > 0.9, "agreement {agreement}");
        // super-splits significant, leaves null
        for child in &tree.root.children {
            assert!(child.p_value.unwrap() < 0.001);
            for leaf in &child.children {
                assert!(leaf.p_value.unwrap() > 0.001, "leaf {} p {:?}", leaf.id, leaf.p_value);
            }
        }
    }
}
