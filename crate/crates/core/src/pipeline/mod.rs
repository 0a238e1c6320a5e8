//! Composite analyses: community trees, research maps, trajectories and
//! diversity metrics, personalized-network diversity, and Sankey flows.

pub mod ego;
pub mod map;
pub mod sankey;
pub mod trajectory;
pub mod tree;

pub use ego::{
    citer_citee_scores, ego_diversity_batch, ego_drilldown, CiterCiteeRow, EgoDiversityRow,
    EgoStatus, SideScore,
};
pub use map::{research_map, ResearchMap};
pub use sankey::{sankey, FlowMatrix, SankeyFlows, WindowClustering};
pub use trajectory::{
    diversity_metrics, diversity_report, trajectories, DiversityReport, DiversityRow,
    TrajectorySet,
};
pub use tree::{
    build_tree, CommunityTree, K0Schedule, LeafAnnotations, TreeConfig, TreeException, TreeNode,
};
