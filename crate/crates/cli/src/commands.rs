//! Task implementations behind `bibnet run` and `bibnet ingest`.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use sha2::Digest;

use bibnet::export;
use bibnet::graph::Graph;
use bibnet::ingest::{
    build_citee_network, build_citee_window_sequence, build_coauthorship, read_author_names,
    read_author_paper, read_citations, AuthorPaperTable, CitationTable, CiteeParams, ParseOptions,
};
use bibnet::models::ModelSpec;
use bibnet::pipeline::{
    build_tree, citer_citee_scores, diversity_report, ego_diversity_batch, research_map, sankey,
    trajectories, K0Schedule, TreeConfig,
};
use bibnet::spectral::{estimate_memberships, score_embed, scree_data, top_eigs, vertex_hunt};

use crate::config::RunConfig;

#[derive(serde::Serialize)]
struct Manifest {
    task: String,
    version: String,
    seed: u64,
    workers: usize,
    config_sha256: String,
    unix_timestamp: u64,
}

fn write_manifest(cfg: &RunConfig, task: &str) -> Result<()> {
    let mut hasher = sha2::Sha256::new();
    hasher.update(cfg.resolved_text().as_bytes());
    let manifest = Manifest {
        task: task.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        workers: cfg.workers,
        config_sha256: hasher.finalize().iter().map(|b| format!("{b:02x}")).collect(),
        unix_timestamp: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    let path = cfg.out.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn ensure_out(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out)
        .with_context(|| format!("creating output directory {}", cfg.out.display()))
}

fn parse_options(cfg: &RunConfig) -> ParseOptions {
    ParseOptions { permissive: cfg.permissive, year_range: cfg.year_range }
}

fn load_tables(cfg: &RunConfig) -> Result<(AuthorPaperTable, CitationTable)> {
    let aupap = cfg.aupap.as_ref().ok_or_else(|| anyhow!("config needs 'aupap'"))?;
    let pappap = cfg.pappap.as_ref().ok_or_else(|| anyhow!("config needs 'pappap'"))?;
    let opts = parse_options(cfg);
    let (ap, _) = read_author_paper(aupap, &opts)?;
    let (ct, _) = read_citations(pappap, &opts)?;
    Ok((ap, ct))
}

fn citee_params(cfg: &RunConfig) -> CiteeParams {
    CiteeParams {
        degree_min: cfg.degree_min,
        weight_min: cfg.weight_min,
        fresh_years: cfg.fresh_years,
    }
}

fn journals_set(list: &Option<Vec<String>>) -> Option<HashSet<String>> {
    list.as_ref().map(|j| j.iter().cloned().collect())
}

/// Graph for citee-style tasks: an explicit edge list wins, otherwise the
/// citee network of the first configured window.
fn load_citee_graph(cfg: &RunConfig) -> Result<Graph> {
    if let Some(path) = &cfg.graph {
        let g = Graph::read_edge_list(path)?;
        let (giant, _) = g.giant_component()?;
        if giant.n() < g.n() {
            log::info!("restricting to the giant component: {} of {} nodes", giant.n(), g.n());
        }
        return Ok(giant);
    }
    let (ap, ct) = load_tables(cfg)?;
    let window = cfg.windows.windows[0];
    Ok(build_citee_network(&ap, &ct, window, &citee_params(cfg))?)
}

fn load_coauthorship_graph(cfg: &RunConfig, m0: u32) -> Result<Graph> {
    if let Some(path) = &cfg.graph {
        let g = Graph::read_edge_list(path)?;
        let (giant, _) = g.giant_component()?;
        return Ok(giant);
    }
    let (ap, _) = load_tables_ap_only(cfg)?;
    Ok(build_coauthorship(&ap, m0, journals_set(&cfg.journals).as_ref(), Some(cfg.year_range))?)
}

fn load_tables_ap_only(cfg: &RunConfig) -> Result<(AuthorPaperTable, ())> {
    let aupap = cfg.aupap.as_ref().ok_or_else(|| anyhow!("config needs 'aupap'"))?;
    let (ap, _) = read_author_paper(aupap, &parse_options(cfg))?;
    Ok((ap, ()))
}

fn load_window_graphs(cfg: &RunConfig) -> Result<Vec<Graph>> {
    if !cfg.graph_windows.is_empty() {
        return cfg
            .graph_windows
            .iter()
            .map(|p| Graph::read_edge_list(p).map_err(anyhow::Error::from))
            .collect();
    }
    let (ap, ct) = load_tables(cfg)?;
    let params = citee_params(cfg);
    let reference = build_citee_network(&ap, &ct, cfg.windows.windows[0], &params)?;
    let seq =
        build_citee_window_sequence(&ap, &ct, &cfg.windows, reference.node_ids(), &params)?;
    Ok(seq)
}

fn author_list(cfg: &RunConfig) -> Result<Vec<i64>> {
    let spec = cfg.authors.as_ref().ok_or_else(|| anyhow!("config needs 'authors'"))?;
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path.trim())
            .with_context(|| format!("reading author list {path}"))?;
        return text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.parse().map_err(|_| anyhow!("bad author id '{l}'")))
            .collect();
    }
    spec.split(',')
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.parse().map_err(|_| anyhow!("bad author id '{l}'")))
        .collect()
}

fn names_map(cfg: &RunConfig) -> Option<HashMap<i64, String>> {
    cfg.author_names.as_ref().and_then(|p| read_author_names(p).ok())
}

pub fn cmd_ingest(cfg: &RunConfig) -> Result<()> {
    ensure_out(cfg)?;
    let opts = parse_options(cfg);
    let aupap = cfg.aupap.as_ref().ok_or_else(|| anyhow!("config needs 'aupap'"))?;
    let pappap = cfg.pappap.as_ref().ok_or_else(|| anyhow!("config needs 'pappap'"))?;
    let (_, ap_report) = read_author_paper(aupap, &opts)?;
    let (_, ct_report) = read_citations(pappap, &opts)?;
    println!("author-paper table: {} rows kept, {} skipped", ap_report.rows_kept, ap_report.rows_skipped);
    println!("  {} authors, {} papers", ap_report.distinct_authors, ap_report.distinct_papers);
    if let Some((lo, hi)) = ap_report.author_id_range {
        println!("  author ids {lo}..{hi}");
    }
    if let Some((lo, hi)) = ap_report.paper_id_range {
        println!("  paper ids {lo}..{hi}");
    }
    println!("citation table: {} rows kept, {} skipped", ct_report.rows_kept, ct_report.rows_skipped);
    println!("  {} cited/citing papers, {} inverted-year citations", ct_report.distinct_papers, ct_report.inverted_year_citations);
    for a in ap_report.anomalies.iter().chain(ct_report.anomalies.iter()).take(50) {
        println!("  anomaly: {a}");
    }
    let report = serde_json::json!({ "author_paper": ap_report, "citations": ct_report });
    std::fs::write(cfg.out.join("ingest_report.json"), serde_json::to_string_pretty(&report)?)?;
    write_manifest(cfg, "ingest")
}

fn run_citee_map(cfg: &RunConfig) -> Result<()> {
    let g = load_citee_graph(cfg)?;
    let pairs = top_eigs(&g, cfg.k, 0.0)?;
    let embedding = score_embed(&pairs)?;
    let vertices = vertex_hunt(&embedding, cfg.k, cfg.seed)?;
    let model = estimate_memberships(&embedding, &vertices, &pairs)?;
    let map = research_map(
        &embedding,
        &vertices,
        cfg.l,
        cfg.seed,
        &g.degrees(),
        g.node_ids(),
        5,
        cfg.restarts,
    )?;
    export::write_embedding_csv(cfg.out.join("embedding.csv"), g.node_ids(), &embedding)?;
    export::write_vertices_csv(cfg.out.join("vertices.csv"), &vertices)?;
    export::write_memberships_csv(cfg.out.join("memberships.csv"), g.node_ids(), &model)?;
    write_map_csv(&cfg.out, &map, g.node_ids(), names_map(cfg).as_ref())?;
    println!("citee map: {} nodes, {} clusters", g.n(), cfg.l);
    Ok(())
}

fn write_map_csv(
    out: &Path,
    map: &bibnet::pipeline::ResearchMap,
    node_ids: &[i64],
    names: Option<&HashMap<i64, String>>,
) -> Result<()> {
    let path = out.join("map_clusters.csv");
    let mut w = csv::WriterBuilder::new().from_path(&path)?;
    w.write_record(["cluster", "center_x", "center_y", "size", "top_degree"])?;
    let mut sizes = vec![0usize; map.centers.nrows()];
    for a in map.assignment.iter().flatten() {
        sizes[*a] += 1;
    }
    for c in 0..map.centers.nrows() {
        let tops: Vec<String> = map.top_degree[c]
            .iter()
            .map(|(id, _)| match names.and_then(|m| m.get(id)) {
                Some(name) => name.clone(),
                None => id.to_string(),
            })
            .collect();
        w.write_record([
            (c + 1).to_string(),
            map.centers[(c, 0)].to_string(),
            map.centers[(c, 1)].to_string(),
            sizes[c].to_string(),
            tops.join("; "),
        ])?;
    }
    w.flush()?;
    let path = out.join("map_assignments.csv");
    let mut w = csv::WriterBuilder::new().from_path(&path)?;
    w.write_record(["node_id", "cluster"])?;
    for (i, a) in map.assignment.iter().enumerate() {
        w.write_record([
            node_ids[i].to_string(),
            a.map(|c| (c + 1).to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn run_trajectories(cfg: &RunConfig) -> Result<PathBuf> {
    let windows = load_window_graphs(cfg)?;
    if windows.len() == 1 {
        eprintln!("warning: diversity undefined for single window");
    }
    let ts = trajectories(&windows, cfg.t0, cfg.k)?;
    let path = cfg.out.join("trajectories.csv");
    export::write_trajectory_csv(&path, &ts)?;
    let eligible = ts.eligible.iter().filter(|&&e| e).count();
    println!(
        "trajectories: {} windows, {} nodes, {} always-in-giant",
        windows.len(),
        ts.node_ids.len(),
        eligible
    );
    Ok(path)
}

fn run_diversity(cfg: &RunConfig) -> Result<()> {
    let windows = load_window_graphs(cfg)?;
    if windows.len() == 1 {
        eprintln!("warning: diversity undefined for single window");
    }
    let ts = trajectories(&windows, cfg.t0, cfg.k)?;
    export::write_trajectory_csv(cfg.out.join("trajectories.csv"), &ts)?;
    let degrees = windows[cfg.t0 - 1].degrees();
    let report = diversity_report(&ts, Some(&degrees), cfg.top_n, cfg.quantile);
    export::write_diversity_csv(cfg.out.join("diversity.csv"), &report)?;
    println!(
        "diversity: {} eligible rows, E-threshold {:.4}, M-threshold {:.4}",
        report.rows.len(),
        report.e_threshold,
        report.m_threshold
    );
    Ok(())
}

fn k0_schedule(cfg: &RunConfig) -> Result<K0Schedule> {
    let per_depth = if cfg.k0_schedule.is_empty() {
        vec![cfg.k0]
    } else {
        cfg.k0_schedule.clone()
    };
    let mut overrides = HashMap::new();
    if let Some(path) = &cfg.k0_overrides {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading k0 overrides {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(id), Some(k0)) = (parts.next(), parts.next()) else {
                bail!("{}:{}: expected 'NODE_ID K0'", path.display(), lineno + 1);
            };
            overrides.insert(id.to_string(), k0.parse()?);
        }
    }
    Ok(K0Schedule { per_depth, overrides, default_k0: 2 })
}

fn run_tree(cfg: &RunConfig) -> Result<()> {
    let g = load_coauthorship_graph(cfg, cfg.m0)?;
    let schedule = k0_schedule(cfg)?;
    let tree_cfg = TreeConfig {
        p_stop: cfg.p_stop,
        size_stop: cfg.size_stop,
        c0: cfg.c0,
        truncate: cfg.truncate_t,
        kmeans_restarts: cfg.restarts,
        ..TreeConfig::default()
    };
    let tree = build_tree(&g, &schedule, &tree_cfg, cfg.seed)?;
    export::write_tree_json(cfg.out.join("tree.json"), &tree)?;
    export::write_tree_text(cfg.out.join("tree.txt"), &tree, names_map(cfg).as_ref())?;
    println!("tree: {} nodes, {} leaves", g.n(), tree.leaf_count());
    Ok(())
}

fn run_ego(cfg: &RunConfig) -> Result<()> {
    let g = load_coauthorship_graph(cfg, cfg.m0)?;
    let authors = author_list(cfg)?;
    let rows = ego_diversity_batch(&g, &authors)?;
    export::write_ego_csv(cfg.out.join("ego.csv"), &rows)?;
    println!("ego: {} authors scored", rows.len());
    Ok(())
}

fn run_citer_citee(cfg: &RunConfig) -> Result<()> {
    let (ap, ct) = load_tables(cfg)?;
    let authors = author_list(cfg)?;
    let rows = citer_citee_scores(&ap, &ct, &authors)?;
    export::write_citer_citee_csv(cfg.out.join("citer_citee.csv"), &rows)?;
    let both: usize = rows
        .iter()
        .filter(|r| r.citer.statistic.is_some() && r.citee.statistic.is_some())
        .count();
    println!("citer-citee: {} authors, {both} with both sides scored", rows.len());
    Ok(())
}

fn run_sankey(cfg: &RunConfig) -> Result<()> {
    let graphs: Vec<Graph> = if !cfg.graph_windows.is_empty() {
        cfg.graph_windows
            .iter()
            .map(|p| Graph::read_edge_list(p).map_err(anyhow::Error::from))
            .collect::<Result<_>>()?
    } else {
        let (ap, _) = load_tables_ap_only(cfg)?;
        cfg.sankey_windows
            .iter()
            .map(|&window| {
                build_coauthorship(
                    &ap,
                    cfg.sankey_m0,
                    journals_set(&cfg.sankey_journals).as_ref(),
                    Some(window),
                )
                .map_err(anyhow::Error::from)
            })
            .collect::<Result<_>>()?
    };
    let flows = sankey(&graphs, &cfg.sankey_ks, cfg.c0, cfg.seed, cfg.restarts)?;
    export::write_sankey_csv(cfg.out.join("sankey.csv"), &flows)?;
    std::fs::write(
        cfg.out.join("sankey_communities.json"),
        serde_json::to_string_pretty(&flows.clusterings)?,
    )?;
    println!("sankey: |V| = {}, {} window pairs", flows.v_ids.len(), flows.flows.len());
    Ok(())
}

fn run_scree(cfg: &RunConfig) -> Result<()> {
    let g = if cfg.graph.is_some() {
        load_citee_graph(cfg)?
    } else {
        load_coauthorship_graph(cfg, cfg.m0)?
    };
    let entries = scree_data(&g, cfg.kmax.min(g.n()), cfg.c0)?;
    export::write_scree_csv(cfg.out.join("scree.csv"), &entries)?;
    println!("scree: {} entries for n = {}", entries.len(), g.n());
    Ok(())
}

fn run_simulate(cfg: &RunConfig) -> Result<()> {
    let model = cfg.model.as_ref().ok_or_else(|| anyhow!("config needs 'model'"))?;
    let spec = ModelSpec::read(model)?;
    let params = spec.instantiate(cfg.seed)?;
    let graphs = bibnet::models::sample_dynamic_dcmm(&params, cfg.seed)?;
    for (t, g) in graphs.iter().enumerate() {
        let path = cfg.out.join(format!("sample_window_{}.tsv", t + 1));
        g.write_edge_list(&path)?;
        println!("window {}: {} nodes, {} edges -> {}", t + 1, g.n(), g.edge_count(), path.display());
    }
    Ok(())
}

pub fn cmd_run(task: &str, cfg: &RunConfig) -> Result<()> {
    ensure_out(cfg)?;
    match task {
        "citee-map" => run_citee_map(cfg)?,
        "trajectories" => {
            run_trajectories(cfg)?;
        }
        "diversity" => run_diversity(cfg)?,
        "tree" => run_tree(cfg)?,
        "ego" => run_ego(cfg)?,
        "citer-citee" => run_citer_citee(cfg)?,
        "sankey" => run_sankey(cfg)?,
        "scree" => run_scree(cfg)?,
        "simulate" => run_simulate(cfg)?,
        other => bail!("unknown task '{other}'"),
    }
    write_manifest(cfg, task)
}
