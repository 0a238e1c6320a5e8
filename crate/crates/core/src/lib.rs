//! Spectral analysis of bibliographic networks.
//!
//! The crate covers the full stack used to study co-citation and
//! co-authorship data: network construction from author-paper and citation
//! tables, degree-corrected (mixed-membership) block model samplers, SCORE
//! and dynamic network embeddings with simplex vertex hunting, the SgnQ
//! global test, recursive community trees, research maps and trajectories,
//! and research-diversity metrics, plus CSV/JSON exports for all of them.

pub mod centrality;
pub mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod models;
pub mod pipeline;
pub mod sgnq;
pub mod spectral;
pub(crate) mod util;

pub use centrality::{centrality, CentralityScores};
pub use error::{Error, Result};
pub use graph::Graph;
pub use models::{
    omega, sample_dcbm, sample_dcmm, sample_dynamic_dcmm, DcbmParams, DcmmParams, DcmmWindow,
    DynamicDcmmParams,
};
pub use ingest::{
    build_citee_network, build_citee_window_sequence, build_citer_and_citee_ego,
    build_coauthorship, ego_network, AuthorPaperTable, CitationIndex, CitationTable, CiteeParams,
    ParseOptions, WindowSpec,
};
pub use models::ModelSpec;
pub use pipeline::{
    build_tree, citer_citee_scores, diversity_report, ego_diversity_batch, ego_drilldown,
    research_map, sankey, trajectories, CommunityTree, DiversityReport, K0Schedule, ResearchMap,
    SankeyFlows, TrajectorySet, TreeConfig, TreeNode,
};
pub use sgnq::{sgnq_bruteforce, sgnq_statistic, SgnQResult};
pub use spectral::{
    dynamic_embed, estimate_memberships, kmeans, modified_score_cluster, population_dynamic_embed,
    score_embed, scree_data, top_eigs, truncate_embedding, vertex_hunt, EigenPairs, Embedding,
    KmeansResult, PopulationDynamics, ScreeEntry, SimplexModel,
};
