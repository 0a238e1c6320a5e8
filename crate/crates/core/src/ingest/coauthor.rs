//! Coauthorship networks, personalized (ego) networks, and the personalized
//! citer/citee networks derived from author-level citation relations.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ingest::tables::{AuthorPaperTable, CitationTable};

/// Binary coauthorship network: an edge joins authors with at least `m0`
/// joint papers within the optional journal and year filters. Returns the
/// giant component; node ids are author ids.
pub fn build_coauthorship(
    ap: &AuthorPaperTable,
    m0: u32,
    journals: Option<&HashSet<String>>,
    year_range: Option<(i32, i32)>,
) -> Result<Graph> {
    if m0 < 1 {
        return Err(Error::InvalidParameter("m0 must be >= 1".into()));
    }
    let mut paper_authors: HashMap<i64, Vec<i64>> = HashMap::new();
    for row in &ap.rows {
        if let Some(j) = journals {
            if !j.contains(&row.journal) {
                continue;
            }
        }
        if let Some((lo, hi)) = year_range {
            if row.year < lo || row.year > hi {
                continue;
            }
        }
        paper_authors.entry(row.paper).or_default().push(row.author);
    }
    let mut pair_counts: HashMap<(i64, i64), u32> = HashMap::new();
    for authors in paper_authors.values_mut() {
        authors.sort_unstable();
        authors.dedup();
        for (pos, &a) in authors.iter().enumerate() {
            for &b in &authors[pos + 1..] {
                *pair_counts.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    let mut edges: Vec<(i64, i64)> = pair_counts
        .into_iter()
        .filter(|&(_, c)| c >= m0)
        .map(|(pair, _)| pair)
        .collect();
    edges.sort_unstable();
    if edges.is_empty() {
        return Err(Error::ThresholdsEliminateAll);
    }
    let mut ids: Vec<i64> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index: HashMap<i64, usize> = ids.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let indexed: Vec<(usize, usize, f64)> =
        edges.iter().map(|&(a, b)| (index[&a], index[&b], 1.0)).collect();
    let graph = Graph::from_edges(ids, &indexed)?;
    let (giant, _) = graph.giant_component()?;
    Ok(giant)
}

/// Personalized network of a node: the induced subgraph on the node and all
/// of its neighbors (or the neighbors alone when `include_center` is false,
/// the variant used when community-detecting inside an ego network).
pub fn ego_network(g: &Graph, center: usize, include_center: bool) -> Result<Graph> {
    if center >= g.n() {
        return Err(Error::IndexOutOfRange(center, g.n()));
    }
    let neighbors = g.neighbors(center);
    if neighbors.is_empty() {
        return Err(Error::EgoNetworkEmpty);
    }
    let mut nodes: Vec<usize> = neighbors.iter().map(|&v| v as usize).collect();
    if include_center {
        nodes.push(center);
    }
    g.induced_subgraph(&nodes)
}

/// Author-level citation relations: `cites[u]` holds the authors u has
/// cited (self excluded), `cited_by[w]` the authors citing w. Build once
/// and reuse across per-author queries.
pub struct CitationIndex {
    cites: HashMap<i64, Vec<i64>>,
    cited_by: HashMap<i64, Vec<i64>>,
}

impl CitationIndex {
    pub fn new(ap: &AuthorPaperTable, ct: &CitationTable) -> Self {
        let mut paper_authors: HashMap<i64, Vec<i64>> = HashMap::new();
        for row in &ap.rows {
            paper_authors.entry(row.paper).or_default().push(row.author);
        }
        for authors in paper_authors.values_mut() {
            authors.sort_unstable();
            authors.dedup();
        }
        let mut cites: HashMap<i64, Vec<i64>> = HashMap::new();
        let mut cited_by: HashMap<i64, Vec<i64>> = HashMap::new();
        for row in &ct.rows {
            let (Some(from_authors), Some(to_authors)) =
                (paper_authors.get(&row.from_paper), paper_authors.get(&row.to_paper))
            else {
                continue;
            };
            for &u in from_authors {
                for &w in to_authors {
                    if u == w {
                        continue;
                    }
                    cites.entry(u).or_default().push(w);
                    cited_by.entry(w).or_default().push(u);
                }
            }
        }
        for v in cites.values_mut() {
            v.sort_unstable();
            v.dedup();
        }
        for v in cited_by.values_mut() {
            v.sort_unstable();
            v.dedup();
        }
        CitationIndex { cites, cited_by }
    }

    /// Personalized citer network of `author`: nodes share an edge when both
    /// have cited some third author; the returned graph is the ego network
    /// around `author` (center included).
    pub fn citer_ego(&self, author: i64) -> Result<Graph> {
        self.ego_from(author, &self.cites, &self.cited_by, "citer")
    }

    /// Personalized citee network: nodes share an edge when both have been
    /// cited by some third author.
    pub fn citee_ego(&self, author: i64) -> Result<Graph> {
        self.ego_from(author, &self.cited_by, &self.cites, "citee")
    }

    /// Generic co-incidence ego graph: with `forward = cites` this is the
    /// citer network (u ~ v iff forward(u) and forward(v) intersect), and
    /// `reverse` maps a shared target back to its sources.
    fn ego_from(
        &self,
        author: i64,
        forward: &HashMap<i64, Vec<i64>>,
        reverse: &HashMap<i64, Vec<i64>>,
        side: &'static str,
    ) -> Result<Graph> {
        let targets = forward
            .get(&author)
            .filter(|t| !t.is_empty())
            .ok_or(Error::InsufficientCitations { author, side })?;
        let mut members: HashSet<i64> = HashSet::new();
        for w in targets {
            if let Some(sources) = reverse.get(w) {
                members.extend(sources.iter().copied());
            }
        }
        members.remove(&author);
        let mut ids: Vec<i64> = members.into_iter().collect();
        ids.push(author);
        ids.sort_unstable();
        let index: HashMap<i64, usize> = ids.iter().enumerate().map(|(i, &a)| (a, i)).collect();

        // edges among ego members: u ~ v iff forward(u) and forward(v) share
        // an element (the shared target is never u or v since the relations
        // exclude self)
        let rows: Vec<Vec<(usize, usize)>> = ids
            .par_iter()
            .enumerate()
            .map(|(ui, &u)| {
                let mut marked = vec![false; ids.len()];
                let mut out = Vec::new();
                if let Some(ts) = forward.get(&u) {
                    for w in ts {
                        if let Some(sources) = reverse.get(w) {
                            for &v in sources {
                                if v == u {
                                    continue;
                                }
                                if let Some(&vi) = index.get(&v) {
                                    if vi > ui && !marked[vi] {
                                        marked[vi] = true;
                                        out.push((ui, vi));
                                    }
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();
        let edges: Vec<(usize, usize, f64)> = rows
            .into_iter()
            .flatten()
            .map(|(a, b)| (a, b, 1.0))
            .collect();
        Graph::from_edges(ids, &edges)
    }
}

/// Personalized citer and citee networks of one author. Either side without
/// citation activity is an error; use [`CitationIndex`] directly for
/// per-side reporting.
pub fn build_citer_and_citee_ego(
    ap: &AuthorPaperTable,
    ct: &CitationTable,
    author: i64,
) -> Result<(Graph, Graph)> {
    let index = CitationIndex::new(ap, ct);
    Ok((index.citer_ego(author)?, index.citee_ego(author)?))
}
