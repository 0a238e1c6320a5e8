//! Integration coverage of the composite analyses and their export
//! round-trips on synthetic data.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bibnet::export;
use bibnet::graph::Graph;
use bibnet::models::{sample_dcbm, sample_dynamic_dcmm, DcbmParams, DcmmWindow, DynamicDcmmParams};
use bibnet::pipeline::{
    build_tree, diversity_report, ego_diversity_batch, sankey, trajectories, K0Schedule,
    TreeConfig,
};

fn two_block_graph(n: usize, seed: u64) -> (Graph, Vec<usize>) {
    let p = DMatrix::from_fn(2, 2, |a, b| if a == b { 1.0 } else { 0.05 });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta: Vec<f64> = (0..n).map(|_| 0.4 + 0.4 * rng.random::<f64>()).collect();
    let labels: Vec<usize> = (0..n).map(|i| i % 2).collect();
    let params = DcbmParams::new(p, theta, labels.clone()).unwrap();
    let g = sample_dcbm(&params, seed).unwrap();
    let (giant, members) = g.giant_component().unwrap();
    let truth = members.iter().map(|&i| labels[i]).collect();
    (giant, truth)
}

#[test]
fn tree_exports_round_trip_and_partition() {
    let (giant, _) = two_block_graph(400, 44);
    let cfg = TreeConfig { size_stop: 80, kmeans_restarts: 10, ..TreeConfig::default() };
    let tree = build_tree(&giant, &K0Schedule::uniform(2), &cfg, 3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("tree.json");
    export::write_tree_json(&json_path, &tree).unwrap();
    let back = export::read_tree_json(&json_path).unwrap();
    // replayed tree preserves the full structure
    assert_eq!(serde_json::to_string(&back).unwrap(), serde_json::to_string(&tree).unwrap());
    let text = export::tree_to_text(&tree, None);
    assert!(text.contains("C1"));
    // leaves partition the root
    let mut covered = vec![false; giant.n()];
    for leaf in tree.root.leaves() {
        for &m in &leaf.members {
            assert!(!covered[m]);
            covered[m] = true;
        }
    }
    assert!(covered.into_iter().all(|c| c));
}

#[test]
fn trajectory_and_diversity_exports_round_trip() {
    let n = 120;
    let p = DMatrix::from_fn(2, 2, |a, b| if a == b { 1.0 } else { 0.2 });
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let windows: Vec<DcmmWindow> = (0..3)
        .map(|_| {
            let theta: Vec<f64> = (0..n).map(|_| 0.4 + 0.5 * rng.random::<f64>()).collect();
            let mut pi = DMatrix::zeros(n, 2);
            for i in 0..n {
                let a = rng.random::<f64>();
                pi[(i, 0)] = a;
                pi[(i, 1)] = 1.0 - a;
            }
            DcmmWindow { theta, pi }
        })
        .collect();
    let params = DynamicDcmmParams::new(p, windows).unwrap();
    let graphs = sample_dynamic_dcmm(&params, 77).unwrap();
    let ts = trajectories(&graphs, 1, 2).unwrap();
    let report = diversity_report(&ts, None, None, 0.9);

    let dir = tempfile::tempdir().unwrap();
    let traj_path = dir.path().join("trajectories.csv");
    export::write_trajectory_csv(&traj_path, &ts).unwrap();
    let text = std::fs::read_to_string(&traj_path).unwrap();
    assert!(text.starts_with("node_id,window,coord_1,valid"));
    assert_eq!(text.lines().count(), 1 + 3 * n);

    let div_path = dir.path().join("diversity.csv");
    export::write_diversity_csv(&div_path, &report).unwrap();
    let rows = export::read_diversity_csv(&div_path).unwrap();
    assert_eq!(rows, report.rows);
}

#[test]
fn sankey_export_round_trips_and_conserves_flow() {
    let (g1, _) = two_block_graph(300, 61);
    let (g2, _) = two_block_graph(300, 62);
    let flows = sankey(&[g1, g2], &[2, 2], 1.0, 4, 10).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sankey.csv");
    export::write_sankey_csv(&path, &flows).unwrap();
    let rows = export::read_sankey_csv(&path).unwrap();
    let total: u64 = rows.iter().map(|r| r.4).sum();
    assert_eq!(total, flows.v_ids.len() as u64, "total flow equals |V|");
}

/// Complete ego networks are one tight-knit group: across many replicates
/// of a 30-node complete ego, SgnQ never dips below the tree's stopping
/// p-value.
#[test]
fn complete_egos_never_reject() {
    for rep in 0..100u64 {
        // disjoint cliques of size 30; the ego of any member is its clique
        let size = 30usize;
        let mut edges = Vec::new();
        for c in 0..2 {
            let base = c * size;
            for i in 0..size {
                for j in (i + 1)..size {
                    edges.push((base + i, base + j, 1.0));
                }
            }
        }
        let g = Graph::from_edges((0..(2 * size) as i64).collect(), &edges).unwrap();
        let probe = (rep % (2 * size) as u64) as i64;
        let rows = ego_diversity_batch(&g, &[probe]).unwrap();
        let p = rows[0].p_value.expect("complete ego is large enough");
        assert!(p > 0.001, "replicate {rep}: complete ego rejected with p = {p}");
    }
}

#[test]
fn ego_batch_matches_direct_sgnq() {
    let (giant, _) = two_block_graph(200, 70);
    let authors: Vec<i64> = giant.node_ids().iter().take(5).copied().collect();
    let rows = ego_diversity_batch(&giant, &authors).unwrap();
    for row in &rows {
        let center = giant.node_ids().iter().position(|&a| a == row.author).unwrap();
        let ego = bibnet::ingest::ego_network(&giant, center, true).unwrap();
        assert_eq!(row.n_ego, ego.n());
        if let Some(psi) = row.psi {
            let direct = bibnet::sgnq_statistic(&ego).unwrap();
            assert_eq!(psi, direct.psi);
        }
    }
}
