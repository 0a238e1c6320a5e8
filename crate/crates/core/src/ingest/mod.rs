//! Bibliographic table parsing and network construction: citee networks,
//! coauthorship networks, and personalized (ego and citer/citee) networks.
//!
//! Identical input files produce bit-identical networks: node orderings are
//! sorted by author id and accumulation is merged deterministically.

pub mod citee;
pub mod coauthor;
pub mod tables;

pub use citee::{build_citee_network, build_citee_window_sequence, CiteeParams};
pub use coauthor::{
    build_citer_and_citee_ego, build_coauthorship, ego_network, CitationIndex,
};
pub use tables::{
    read_author_names, read_author_paper, read_citations, AuthorPaperRow, AuthorPaperTable,
    CitationRow, CitationTable, ParseOptions, TableReport, WindowSpec,
};
