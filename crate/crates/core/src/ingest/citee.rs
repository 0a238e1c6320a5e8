//! Citee (co-citation) network construction.
//!
//! For each year t in the window, a citing paper published in year t links
//! every pair of authors (i, j) such that it cites at least one "fresh"
//! paper by i and one by j (fresh: published within `fresh_years` of t,
//! i.e. in [t - fresh_years + 1, t]). A citing paper counts once per pair
//! and is excluded for a pair whenever one of the pair authored it. The
//! yearly weighted graphs are summed, low-degree nodes are dropped, the
//! remainder is binarized at `weight_min`, and the single-network builder
//! returns the giant component.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ingest::tables::{AuthorPaperTable, CitationTable, WindowSpec};

/// Thresholds of the citee construction. Defaults: degree >= 60 on the
/// summed weighted graph, edge kept at weight >= 2, citations fresh within
/// 10 years.
#[derive(Debug, Clone, Copy)]
pub struct CiteeParams {
    pub degree_min: u32,
    pub weight_min: u32,
    pub fresh_years: i32,
}

impl Default for CiteeParams {
    fn default() -> Self {
        CiteeParams { degree_min: 60, weight_min: 2, fresh_years: 10 }
    }
}

struct Bibliography {
    /// paper -> sorted author ids
    paper_authors: HashMap<i64, Vec<i64>>,
    /// citing paper -> (cited paper, cited year) rows, keyed by citing year
    citations_by_year: HashMap<i32, Vec<(i64, Vec<(i64, i32)>)>>,
}

fn index_tables(ap: &AuthorPaperTable, ct: &CitationTable) -> Bibliography {
    let mut paper_authors: HashMap<i64, Vec<i64>> = HashMap::new();
    for row in &ap.rows {
        paper_authors.entry(row.paper).or_default().push(row.author);
    }
    for authors in paper_authors.values_mut() {
        authors.sort_unstable();
        authors.dedup();
    }
    let mut per_paper: HashMap<i64, (i32, Vec<(i64, i32)>)> = HashMap::new();
    for row in &ct.rows {
        per_paper
            .entry(row.from_paper)
            .or_insert_with(|| (row.from_year, Vec::new()))
            .1
            .push((row.to_paper, row.to_year));
    }
    let mut citations_by_year: HashMap<i32, Vec<(i64, Vec<(i64, i32)>)>> = HashMap::new();
    let mut papers: Vec<(i64, (i32, Vec<(i64, i32)>))> = per_paper.into_iter().collect();
    papers.sort_unstable_by_key(|&(p, _)| p);
    for (paper, (year, cited)) in papers {
        citations_by_year.entry(year).or_default().push((paper, cited));
    }
    Bibliography { paper_authors, citations_by_year }
}

/// Summed weighted co-citation counts over the window, keyed by ordered
/// author-id pairs.
fn accumulate_pair_weights(
    bib: &Bibliography,
    window: (i32, i32),
    fresh_years: i32,
) -> HashMap<(i64, i64), u32> {
    let years: Vec<i32> = (window.0..=window.1).collect();
    let yearly: Vec<HashMap<(i64, i64), u32>> = years
        .par_iter()
        .map(|&t| {
            let mut weights: HashMap<(i64, i64), u32> = HashMap::new();
            let Some(citing_papers) = bib.citations_by_year.get(&t) else {
                return weights;
            };
            let fresh_lo = t - fresh_years + 1;
            let mut cited_authors: Vec<i64> = Vec::new();
            for (citing, cited) in citing_papers {
                cited_authors.clear();
                for &(p, to_year) in cited {
                    if to_year < fresh_lo || to_year > t {
                        continue;
                    }
                    if let Some(authors) = bib.paper_authors.get(&p) {
                        cited_authors.extend_from_slice(authors);
                    }
                }
                cited_authors.sort_unstable();
                cited_authors.dedup();
                // a citing paper never counts for pairs involving its own authors
                if let Some(own) = bib.paper_authors.get(citing) {
                    cited_authors.retain(|a| !own.contains(a));
                }
                for (pos, &a) in cited_authors.iter().enumerate() {
                    for &b in &cited_authors[pos + 1..] {
                        *weights.entry((a, b)).or_insert(0) += 1;
                    }
                }
            }
            weights
        })
        .collect();
    let mut total: HashMap<(i64, i64), u32> = HashMap::new();
    for yearly_weights in yearly {
        for (pair, w) in yearly_weights {
            *total.entry(pair).or_insert(0) += w;
        }
    }
    total
}

/// Nodes passing the degree threshold plus the binarized edges among them.
fn threshold_pairs(
    pair_weights: &HashMap<(i64, i64), u32>,
    params: &CiteeParams,
) -> (Vec<i64>, Vec<(i64, i64)>) {
    let mut degree: HashMap<i64, u64> = HashMap::new();
    for (&(a, b), &w) in pair_weights {
        *degree.entry(a).or_insert(0) += w as u64;
        *degree.entry(b).or_insert(0) += w as u64;
    }
    let kept: HashSet<i64> = degree
        .iter()
        .filter(|&(_, &d)| d >= params.degree_min as u64 && d > 0)
        .map(|(&a, _)| a)
        .collect();
    let mut edges: Vec<(i64, i64)> = pair_weights
        .iter()
        .filter(|&(&(a, b), &w)| w >= params.weight_min && kept.contains(&a) && kept.contains(&b))
        .map(|(&pair, _)| pair)
        .collect();
    edges.sort_unstable();
    let mut ids: Vec<i64> = kept.into_iter().collect();
    ids.sort_unstable();
    (ids, edges)
}

fn binary_graph(ids: Vec<i64>, edges: &[(i64, i64)]) -> Result<Graph> {
    let index: HashMap<i64, usize> = ids.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let indexed: Vec<(usize, usize, f64)> =
        edges.iter().map(|&(a, b)| (index[&a], index[&b], 1.0)).collect();
    Graph::from_edges(ids, &indexed)
}

/// Build the citee network for one year window and return its giant
/// component. Node ids are author ids, ordered ascending.
pub fn build_citee_network(
    ap: &AuthorPaperTable,
    ct: &CitationTable,
    window: (i32, i32),
    params: &CiteeParams,
) -> Result<Graph> {
    let bib = index_tables(ap, ct);
    let pair_weights = accumulate_pair_weights(&bib, window, params.fresh_years);
    let (ids, edges) = threshold_pairs(&pair_weights, params);
    if ids.is_empty() {
        return Err(Error::ThresholdsEliminateAll);
    }
    let graph = binary_graph(ids, &edges)?;
    let (giant, _) = graph.giant_component()?;
    if giant.edge_count() == 0 {
        return Err(Error::ThresholdsEliminateAll);
    }
    Ok(giant)
}

/// Build one citee network per window, each restricted to the reference
/// node set (same indexing across windows; pass the node ids of the
/// window-1 network). Thresholds are applied to each window's full summed
/// weighted graph before the restriction; giant-component membership per
/// window is for the caller to derive, not enforced here.
pub fn build_citee_window_sequence(
    ap: &AuthorPaperTable,
    ct: &CitationTable,
    windows: &WindowSpec,
    reference_ids: &[i64],
    params: &CiteeParams,
) -> Result<Vec<Graph>> {
    let bib = index_tables(ap, ct);
    let data_years: Vec<i32> = ap.rows.iter().map(|r| r.year).collect();
    let (lo, hi) = match (data_years.iter().min(), data_years.iter().max()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(Error::InvalidParameter("author-paper table is empty".into())),
    };
    let reference_index: HashMap<i64, usize> =
        reference_ids.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut out = Vec::with_capacity(windows.len());
    for &(start, end) in &windows.windows {
        if start > hi || end < lo {
            return Err(Error::WindowOutOfRange { start, end, lo, hi });
        }
        let pair_weights = accumulate_pair_weights(&bib, (start, end), params.fresh_years);
        let (ids, edges) = threshold_pairs(&pair_weights, params);
        let kept: HashSet<i64> =
            ids.into_iter().filter(|a| reference_index.contains_key(a)).collect();
        let indexed: Vec<(usize, usize, f64)> = edges
            .iter()
            .filter(|(a, b)| kept.contains(a) && kept.contains(b))
            .map(|&(a, b)| (reference_index[&a], reference_index[&b], 1.0))
            .collect();
        out.push(Graph::from_edges(reference_ids.to_vec(), &indexed)?);
    }
    Ok(out)
}
