//! Personalized-network diversity: SgnQ on ego networks, batch reports, and
//! the citer/citee test-score pairs.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ingest::coauthor::{ego_network, CitationIndex};
use crate::ingest::tables::{AuthorPaperTable, CitationTable};
use crate::sgnq::{sgnq_statistic, MIN_EGO_SIZE};
use crate::spectral::modified_score_cluster;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EgoStatus {
    Ok,
    /// Network too small (or degenerate) for an asymptotic p-value.
    Insufficient,
}

impl std::fmt::Display for EgoStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EgoStatus::Ok => write!(f, "ok"),
            EgoStatus::Insufficient => write!(f, "insufficient"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoDiversityRow {
    pub author: i64,
    pub n_ego: usize,
    pub psi: Option<f64>,
    pub p_value: Option<f64>,
    pub status: EgoStatus,
}

/// SgnQ diversity of each author's personalized network (center included).
/// Ego networks below the minimum size report "insufficient".
pub fn ego_diversity_batch(g: &Graph, authors: &[i64]) -> Result<Vec<EgoDiversityRow>> {
    let index: HashMap<i64, usize> =
        g.node_ids().iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let centers: Vec<(i64, usize)> = authors
        .iter()
        .map(|&a| index.get(&a).map(|&i| (a, i)).ok_or(Error::UnknownAuthor(a)))
        .collect::<Result<Vec<_>>>()?;
    Ok(centers
        .par_iter()
        .map(|&(author, center)| {
            let ego = match ego_network(g, center, true) {
                Ok(e) => e,
                Err(_) => {
                    return EgoDiversityRow {
                        author,
                        n_ego: 1,
                        psi: None,
                        p_value: None,
                        status: EgoStatus::Insufficient,
                    }
                }
            };
            let n_ego = ego.n();
            if n_ego < MIN_EGO_SIZE {
                return EgoDiversityRow {
                    author,
                    n_ego,
                    psi: None,
                    p_value: None,
                    status: EgoStatus::Insufficient,
                };
            }
            match sgnq_statistic(&ego) {
                Ok(r) => EgoDiversityRow {
                    author,
                    n_ego,
                    psi: Some(r.psi),
                    p_value: Some(r.p_value),
                    status: EgoStatus::Ok,
                },
                Err(_) => EgoDiversityRow {
                    author,
                    n_ego,
                    psi: None,
                    p_value: None,
                    status: EgoStatus::Insufficient,
                },
            }
        })
        .collect())
}

/// Community-detection drill-down inside one ego network, excluding the
/// center (its edges dominate the spectrum without carrying community
/// signal). Clusters the giant component of the center-free ego network and
/// returns (node_id, label) pairs.
pub fn ego_drilldown(
    g: &Graph,
    author: i64,
    k0: usize,
    c0: f64,
    seed: u64,
) -> Result<Vec<(i64, usize)>> {
    let center = g
        .node_ids()
        .iter()
        .position(|&a| a == author)
        .ok_or(Error::UnknownAuthor(author))?;
    let ego = ego_network(g, center, false)?;
    let (giant, _) = ego.giant_component()?;
    let t = (giant.n() as f64).ln();
    let labels = modified_score_cluster(&giant, k0, c0, t, seed)?;
    Ok(giant.node_ids().iter().copied().zip(labels).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideScore {
    pub n: usize,
    pub statistic: Option<f64>,
    pub status: EgoStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiterCiteeRow {
    pub author: i64,
    pub citer: SideScore,
    pub citee: SideScore,
}

fn side_score(ego: Result<Graph>) -> SideScore {
    match ego {
        Ok(g) if g.n() >= MIN_EGO_SIZE => match sgnq_statistic(&g) {
            Ok(r) => SideScore { n: g.n(), statistic: Some(r.psi), status: EgoStatus::Ok },
            Err(_) => SideScore { n: g.n(), statistic: None, status: EgoStatus::Insufficient },
        },
        Ok(g) => SideScore { n: g.n(), statistic: None, status: EgoStatus::Insufficient },
        Err(_) => SideScore { n: 0, statistic: None, status: EgoStatus::Insufficient },
    }
}

/// SgnQ test scores on the personalized citer and citee networks of each
/// author; each side reports independently.
pub fn citer_citee_scores(
    ap: &AuthorPaperTable,
    ct: &CitationTable,
    authors: &[i64],
) -> Result<Vec<CiterCiteeRow>> {
    let index = CitationIndex::new(ap, ct);
    Ok(authors
        .par_iter()
        .map(|&author| CiterCiteeRow {
            author,
            citer: side_score(index.citer_ego(author)),
            citee: side_score(index.citee_ego(author)),
        })
        .collect())
}
