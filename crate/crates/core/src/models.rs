//! Degree-corrected (mixed-membership) block models: parameter containers,
//! exact population matrices, and Bernoulli samplers.
//!
//! Edge probabilities are P(A(i,j) = 1) = theta_i theta_j pi_i' P pi_j with
//! a symmetric unit-diagonal community matrix P, positive degree parameters
//! theta, and simplex-valued membership rows pi. The block model is the
//! special case of degenerate memberships. Sampling uses one counter-derived
//! ChaCha8 stream per upper-triangle row (stream i seeded with
//! splitmix64(seed, i)), so results are independent of thread count and the
//! scheme is reproducible from the documentation alone.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::util::mix_seed;

fn validate_community_matrix(p: &DMatrix<f64>) -> Result<usize> {
    let k = p.nrows();
    if k == 0 || p.ncols() != k {
        return Err(Error::InvalidParameter("P must be square and nonempty".into()));
    }
    for a in 0..k {
        if p[(a, a)] != 1.0 {
            return Err(Error::InvalidParameter(format!("P({a},{a}) must be exactly 1")));
        }
        for b in 0..k {
            let v = p[(a, b)];
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("P({a},{b}) = {v} must be >= 0")));
            }
            if p[(a, b)] != p[(b, a)] {
                return Err(Error::InvalidParameter(format!("P must be symmetric at ({a},{b})")));
            }
        }
    }
    Ok(k)
}

fn validate_theta(theta: &[f64]) -> Result<()> {
    for (i, &t) in theta.iter().enumerate() {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("theta[{i}] = {t} must be > 0")));
        }
    }
    Ok(())
}

/// Normalize membership rows and check they sit on the simplex.
fn validate_pi(pi: &mut DMatrix<f64>, k: usize) -> Result<()> {
    if pi.ncols() != k {
        return Err(Error::InvalidParameter(format!(
            "Pi has {} columns, expected K = {k}",
            pi.ncols()
        )));
    }
    for i in 0..pi.nrows() {
        let mut sum = 0.0;
        for c in 0..k {
            let v = pi[(i, c)];
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("Pi({i},{c}) = {v} must be >= 0")));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("row {i} of Pi sums to {sum}, not 1")));
        }
        for c in 0..k {
            pi[(i, c)] /= sum;
        }
    }
    Ok(())
}

/// DCMM parameters: community matrix P, degree parameters theta, and
/// membership matrix Pi with rows on the simplex.
#[derive(Debug, Clone)]
pub struct DcmmParams {
    pub p: DMatrix<f64>,
    pub theta: Vec<f64>,
    pub pi: DMatrix<f64>,
}

impl DcmmParams {
    pub fn new(p: DMatrix<f64>, theta: Vec<f64>, mut pi: DMatrix<f64>) -> Result<Self> {
        let k = validate_community_matrix(&p)?;
        validate_theta(&theta)?;
        if pi.nrows() != theta.len() {
            return Err(Error::InvalidParameter("theta and Pi disagree on n".into()));
        }
        validate_pi(&mut pi, k)?;
        Ok(DcmmParams { p, theta, pi })
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn k(&self) -> usize {
        self.p.nrows()
    }
}

/// DCBM parameters: one community label per node.
#[derive(Debug, Clone)]
pub struct DcbmParams {
    pub p: DMatrix<f64>,
    pub theta: Vec<f64>,
    /// 0-based community labels.
    pub labels: Vec<usize>,
}

impl DcbmParams {
    pub fn new(p: DMatrix<f64>, theta: Vec<f64>, labels: Vec<usize>) -> Result<Self> {
        let k = validate_community_matrix(&p)?;
        validate_theta(&theta)?;
        if labels.len() != theta.len() {
            return Err(Error::InvalidParameter("theta and labels disagree on n".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidParameter(format!("label {bad} out of range for K = {k}")));
        }
        Ok(DcbmParams { p, theta, labels })
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn k(&self) -> usize {
        self.p.nrows()
    }

    /// Equivalent DCMM with degenerate membership rows.
    pub fn to_dcmm(&self) -> DcmmParams {
        let n = self.n();
        let k = self.k();
        let mut pi = DMatrix::zeros(n, k);
        for i in 0..n {
            pi[(i, self.labels[i])] = 1.0;
        }
        DcmmParams { p: self.p.clone(), theta: self.theta.clone(), pi }
    }
}

/// Per-window parameters of the dynamic DCMM; P is shared across windows.
#[derive(Debug, Clone)]
pub struct DcmmWindow {
    pub theta: Vec<f64>,
    pub pi: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct DynamicDcmmParams {
    pub p: DMatrix<f64>,
    pub windows: Vec<DcmmWindow>,
}

impl DynamicDcmmParams {
    pub fn new(p: DMatrix<f64>, windows: Vec<DcmmWindow>) -> Result<Self> {
        let k = validate_community_matrix(&p)?;
        if windows.is_empty() {
            return Err(Error::InvalidParameter("dynamic model needs at least one window".into()));
        }
        let n = windows[0].theta.len();
        let mut checked = Vec::with_capacity(windows.len());
        for (t, mut w) in windows.into_iter().enumerate() {
            validate_theta(&w.theta)?;
            if w.theta.len() != n || w.pi.nrows() != n {
                return Err(Error::InvalidParameter(format!("window {} disagrees on n", t + 1)));
            }
            validate_pi(&mut w.pi, k)?;
            checked.push(w);
        }
        Ok(DynamicDcmmParams { p, windows: checked })
    }

    pub fn n(&self) -> usize {
        self.windows[0].theta.len()
    }

    pub fn k(&self) -> usize {
        self.p.nrows()
    }

    pub fn t(&self) -> usize {
        self.windows.len()
    }

    /// Static parameters of one window (shares P).
    pub fn window_params(&self, t: usize) -> DcmmParams {
        DcmmParams {
            p: self.p.clone(),
            theta: self.windows[t].theta.clone(),
            pi: self.windows[t].pi.clone(),
        }
    }
}

/// Population matrix Omega(i,j) = theta_i theta_j pi_i' P pi_j, filled
/// symmetrically (upper triangle mirrored). The diagonal is defined but
/// never sampled.
pub fn omega(params: &DcmmParams) -> DMatrix<f64> {
    let n = params.n();
    let k = params.k();
    // w_i = theta_i pi_i ; g_i = P w_i
    let mut w = DMatrix::zeros(n, k);
    for i in 0..n {
        for c in 0..k {
            w[(i, c)] = params.theta[i] * params.pi[(i, c)];
        }
    }
    let g = &w * &params.p; // row i = w_i' P
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for c in 0..k {
                acc += g[(i, c)] * w[(j, c)];
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc;
        }
    }
    out
}

/// Edge probability for one pair, computed the same way in the DCMM and
/// DCBM samplers so degenerate memberships give bit-identical graphs.
#[inline]
fn pair_probability(theta_i: f64, theta_j: f64, block_term: f64) -> f64 {
    (theta_i * theta_j) * block_term
}

fn sample_rows<P>(n: usize, seed: u64, prob: P) -> Result<Vec<(usize, usize, f64)>>
where
    P: Fn(usize, usize) -> f64 + Sync,
{
    let rows: Vec<Result<Vec<(usize, usize, f64)>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, i as u64));
            let mut out = Vec::new();
            for j in (i + 1)..n {
                let p = prob(i, j);
                if p > 1.0 {
                    return Err(Error::ProbabilityAboveOne { i, j, value: p });
                }
                if rng.random::<f64>() < p {
                    out.push((i, j, 1.0));
                }
            }
            Ok(out)
        })
        .collect();
    let mut edges = Vec::new();
    for r in rows {
        edges.extend(r?);
    }
    Ok(edges)
}

/// Sample a DCMM graph: independent Bernoulli upper triangle, symmetrized,
/// zero diagonal. Probabilities above 1 are an error, not clipped.
pub fn sample_dcmm(params: &DcmmParams, seed: u64) -> Result<Graph> {
    let n = params.n();
    let k = params.k();
    let g = &params.pi * &params.p; // row j = pi_j' P
    let edges = sample_rows(n, seed, |i, j| {
        let mut block = 0.0;
        for c in 0..k {
            block += params.pi[(i, c)] * g[(j, c)];
        }
        pair_probability(params.theta[i], params.theta[j], block)
    })?;
    Graph::from_edges((0..n as i64).collect(), &edges)
}

/// Sample a DCBM graph through the block formula; with the same seed this
/// equals `sample_dcmm` on the degenerate-membership encoding.
pub fn sample_dcbm(params: &DcbmParams, seed: u64) -> Result<Graph> {
    let n = params.n();
    let edges = sample_rows(n, seed, |i, j| {
        let block = params.p[(params.labels[j], params.labels[i])];
        pair_probability(params.theta[i], params.theta[j], block)
    })?;
    Graph::from_edges((0..n as i64).collect(), &edges)
}

/// Independent per-window samples sharing P; window t uses the derived
/// stream seed splitmix64(seed, 0x57AD + t).
pub fn sample_dynamic_dcmm(params: &DynamicDcmmParams, seed: u64) -> Result<Vec<Graph>> {
    (0..params.t())
        .map(|t| {
            let wseed = mix_seed(seed, 0x57AD_0000 + t as u64);
            sample_dcmm(&params.window_params(t), wseed)
        })
        .collect()
}

/// Source of degree parameters in a model parameter file.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaSpec {
    Const(f64),
    Uniform(f64, f64),
    List(Vec<f64>),
}

/// Source of memberships in a model parameter file.
#[derive(Debug, Clone, PartialEq)]
pub enum PiSpec {
    /// 1-based community labels (block model).
    Labels(Vec<usize>),
    /// Explicit membership rows, `;`-separated.
    Rows(Vec<Vec<f64>>),
    /// Symmetric Dirichlet(alpha) rows; the first round(pure_frac * n)
    /// nodes are forced pure, cycling through the communities.
    Dirichlet { alpha: f64, pure_frac: f64 },
}

/// Plain-text model description. Format (one `key = value` per line,
/// `#` comments):
///
/// ```text
/// n = 500
/// k = 3
/// p = 1.0 0.25 0.25 ; 0.25 1.0 0.25 ; 0.25 0.25 1.0
/// theta = uniform 0.3 1.0      # or: const 0.5 | list v1 v2 ...
/// pi = dirichlet 0.4 pure 0.1  # or: labels 1 1 2 3 ...
/// windows = 1
/// ```
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub n: usize,
    pub k: usize,
    pub p: DMatrix<f64>,
    pub theta: ThetaSpec,
    pub pi: PiSpec,
    pub windows: usize,
}

impl ModelSpec {
    pub fn parse(text: &str) -> Result<ModelSpec> {
        let mut n = None;
        let mut k = None;
        let mut p_rows: Option<Vec<Vec<f64>>> = None;
        let mut theta = None;
        let mut pi = None;
        let mut windows = 1usize;
        let bad = |line: usize, msg: String| Error::parse("<model>", line, msg);
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(lineno, "expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let floats = |s: &str| -> Result<Vec<f64>> {
                s.split_whitespace()
                    .map(|v| v.parse().map_err(|_| bad(lineno, format!("bad number '{v}'"))))
                    .collect()
            };
            match key {
                "n" => n = Some(value.parse().map_err(|_| bad(lineno, "bad n".into()))?),
                "k" => k = Some(value.parse().map_err(|_| bad(lineno, "bad k".into()))?),
                "p" => {
                    p_rows = Some(
                        value.split(';').map(|row| floats(row)).collect::<Result<Vec<_>>>()?,
                    )
                }
                "theta" => {
                    let mut parts = value.split_whitespace();
                    theta = Some(match parts.next() {
                        Some("const") => ThetaSpec::Const(
                            floats(&value["const".len()..])?
                                .first()
                                .copied()
                                .ok_or_else(|| bad(lineno, "const needs a value".into()))?,
                        ),
                        Some("uniform") => {
                            let v = floats(&value["uniform".len()..])?;
                            if v.len() != 2 {
                                return Err(bad(lineno, "uniform needs two bounds".into()));
                            }
                            ThetaSpec::Uniform(v[0], v[1])
                        }
                        Some("list") => ThetaSpec::List(floats(&value["list".len()..])?),
                        _ => return Err(bad(lineno, format!("unknown theta source '{value}'"))),
                    });
                }
                "pi" => {
                    let mut parts = value.split_whitespace();
                    pi = Some(match parts.next() {
                        Some("labels") => {
                            let labels = value["labels".len()..]
                                .split_whitespace()
                                .map(|v| {
                                    v.parse::<usize>()
                                        .map_err(|_| bad(lineno, format!("bad label '{v}'")))
                                })
                                .collect::<Result<Vec<_>>>()?;
                            PiSpec::Labels(labels)
                        }
                        Some("rows") => {
                            let rows = value["rows".len()..]
                                .split(';')
                                .map(|row| floats(row))
                                .collect::<Result<Vec<_>>>()?;
                            PiSpec::Rows(rows)
                        }
                        Some("dirichlet") => {
                            let rest: Vec<&str> = parts.collect();
                            let alpha = rest
                                .first()
                                .and_then(|v| v.parse().ok())
                                .ok_or_else(|| bad(lineno, "dirichlet needs alpha".into()))?;
                            let pure_frac = match rest.get(1) {
                                Some(&"pure") => rest
                                    .get(2)
                                    .and_then(|v| v.parse().ok())
                                    .ok_or_else(|| bad(lineno, "pure needs a fraction".into()))?,
                                None => 0.0,
                                _ => return Err(bad(lineno, "expected 'pure FRAC'".into())),
                            };
                            PiSpec::Dirichlet { alpha, pure_frac }
                        }
                        _ => return Err(bad(lineno, format!("unknown pi source '{value}'"))),
                    });
                }
                "windows" => {
                    windows = value.parse().map_err(|_| bad(lineno, "bad windows".into()))?
                }
                other => return Err(bad(lineno, format!("unknown key '{other}'"))),
            }
        }
        let n = n.ok_or_else(|| Error::InvalidParameter("model file missing n".into()))?;
        let k = k.ok_or_else(|| Error::InvalidParameter("model file missing k".into()))?;
        let p_rows =
            p_rows.ok_or_else(|| Error::InvalidParameter("model file missing p".into()))?;
        if p_rows.len() != k || p_rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidParameter(format!("p must be {k} rows of {k} entries")));
        }
        let p = DMatrix::from_fn(k, k, |a, b| p_rows[a][b]);
        Ok(ModelSpec {
            n,
            k,
            p,
            theta: theta
                .ok_or_else(|| Error::InvalidParameter("model file missing theta".into()))?,
            pi: pi.ok_or_else(|| Error::InvalidParameter("model file missing pi".into()))?,
            windows,
        })
    }

    pub fn read(path: impl AsRef<std::path::Path>) -> Result<ModelSpec> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        ModelSpec::parse(&text)
    }

    /// Draw concrete parameters; each window redraws from the same sources
    /// with a derived stream.
    pub fn instantiate(&self, seed: u64) -> Result<DynamicDcmmParams> {
        let windows = (0..self.windows)
            .map(|t| {
                let wseed = mix_seed(seed, 0x9A4A_0000 + t as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(wseed);
                let theta = match &self.theta {
                    ThetaSpec::Const(v) => vec![*v; self.n],
                    ThetaSpec::Uniform(lo, hi) => {
                        (0..self.n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect()
                    }
                    ThetaSpec::List(list) => {
                        if list.len() != self.n {
                            return Err(Error::InvalidParameter(format!(
                                "theta list has {} entries, n = {}",
                                list.len(),
                                self.n
                            )));
                        }
                        list.clone()
                    }
                };
                let pi = match &self.pi {
                    PiSpec::Labels(labels) => {
                        if labels.len() != self.n {
                            return Err(Error::InvalidParameter(format!(
                                "labels list has {} entries, n = {}",
                                labels.len(),
                                self.n
                            )));
                        }
                        let mut pi = DMatrix::zeros(self.n, self.k);
                        for (i, &l) in labels.iter().enumerate() {
                            if l < 1 || l > self.k {
                                return Err(Error::InvalidParameter(format!(
                                    "label {l} outside 1..{}",
                                    self.k
                                )));
                            }
                            pi[(i, l - 1)] = 1.0;
                        }
                        pi
                    }
                    PiSpec::Rows(rows) => {
                        if rows.len() != self.n || rows.iter().any(|r| r.len() != self.k) {
                            return Err(Error::InvalidParameter(format!(
                                "pi rows must be {} rows of {} entries",
                                self.n, self.k
                            )));
                        }
                        DMatrix::from_fn(self.n, self.k, |i, c| rows[i][c])
                    }
                    PiSpec::Dirichlet { alpha, pure_frac } => {
                        // symmetric Dirichlet via normalized Gamma draws
                        let gamma = rand_distr::Gamma::new(*alpha, 1.0).map_err(|e| {
                            Error::InvalidParameter(format!("bad Dirichlet alpha: {e}"))
                        })?;
                        let pure_count =
                            ((pure_frac * self.n as f64).round() as usize).min(self.n);
                        let mut pi = DMatrix::zeros(self.n, self.k);
                        for i in 0..self.n {
                            if i < pure_count {
                                pi[(i, i % self.k)] = 1.0;
                            } else {
                                let mut row: Vec<f64> =
                                    (0..self.k).map(|_| rng.sample(gamma)).collect();
                                let mut sum: f64 = row.iter().sum();
                                if sum <= 0.0 {
                                    // all-zero draw (tiny alpha): fall back to pure
                                    let c = rng.random_range(0..self.k);
                                    row = vec![0.0; self.k];
                                    row[c] = 1.0;
                                    sum = 1.0;
                                }
                                for (c, v) in row.into_iter().enumerate() {
                                    pi[(i, c)] = v / sum;
                                }
                            }
                        }
                        pi
                    }
                };
                Ok(DcmmWindow { theta, pi })
            })
            .collect::<Result<Vec<_>>>()?;
        DynamicDcmmParams::new(self.p.clone(), windows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_matrix(k: usize, off: f64) -> DMatrix<f64> {
        DMatrix::from_fn(k, k, |a, b| if a == b { 1.0 } else { off })
    }

    fn uniform_theta(n: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect()
    }

    fn random_pi(n: usize, k: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, k, |_, _| rng.random::<f64>()).map(|v| v + 1e-3).normalize_rows()
    }

    trait NormalizeRows {
        fn normalize_rows(self) -> Self;
    }
    impl NormalizeRows for DMatrix<f64> {
        fn normalize_rows(mut self) -> Self {
            for i in 0..self.nrows() {
                let s: f64 = (0..self.ncols()).map(|c| self[(i, c)]).sum();
                for c in 0..self.ncols() {
                    self[(i, c)] /= s;
                }
            }
            self
        }
    }

    #[test]
    fn omega_rank_one_case() {
        // K = 1, P = [1], theta = 0.5 -> Omega = 0.25 everywhere
        let params = DcmmParams::new(
            DMatrix::from_element(1, 1, 1.0),
            vec![0.5; 4],
            DMatrix::from_element(4, 1, 1.0),
        )
        .unwrap();
        let om = omega(&params);
        for i in 0..4 {
            for j in 0..4 {
                assert!((om[(i, j)] - 0.25).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn omega_pure_nodes_reduce_to_block_entry() {
        let p = p_matrix(3, 0.2);
        let theta = vec![0.3, 0.7];
        let mut pi = DMatrix::zeros(2, 3);
        pi[(0, 0)] = 1.0;
        pi[(1, 2)] = 1.0;
        let params = DcmmParams::new(p.clone(), theta.clone(), pi).unwrap();
        let om = omega(&params);
        assert!((om[(0, 1)] - theta[0] * theta[1] * p[(0, 2)]).abs() < 1e-15);
    }

    #[test]
    fn omega_matches_scalar_triple_loop() {
        let params =
            DcmmParams::new(p_matrix(3, 0.3), uniform_theta(5, 0.2, 0.9, 1), random_pi(5, 3, 2))
                .unwrap();
        let om = omega(&params);
        for i in 0..5 {
            for j in 0..5 {
                let mut expect = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        expect += params.pi[(i, a)] * params.pi[(j, b)] * params.p[(a, b)];
                    }
                }
                expect *= params.theta[i] * params.theta[j];
                assert!((om[(i, j)] - expect).abs() < 1e-12, "({i},{j})");
            }
        }
        // exact symmetry
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(om[(i, j)], om[(j, i)]);
            }
        }
    }

    #[test]
    fn theta_scaling_scales_omega_quadratically() {
        let base =
            DcmmParams::new(p_matrix(2, 0.4), uniform_theta(6, 0.2, 0.8, 3), random_pi(6, 2, 4))
                .unwrap();
        let scaled = DcmmParams::new(
            base.p.clone(),
            base.theta.iter().map(|t| 0.5 * t).collect(),
            base.pi.clone(),
        )
        .unwrap();
        let om_base = omega(&base);
        let om_scaled = omega(&scaled);
        for i in 0..6 {
            for j in 0..6 {
                assert!((om_scaled[(i, j)] - 0.25 * om_base[(i, j)]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn probability_above_one_errors() {
        let params = DcmmParams::new(
            DMatrix::from_element(1, 1, 1.0),
            vec![1.5; 3],
            DMatrix::from_element(3, 1, 1.0),
        )
        .unwrap();
        assert!(matches!(sample_dcmm(&params, 0), Err(Error::ProbabilityAboveOne { .. })));
    }

    #[test]
    fn zero_omega_gives_empty_graph() {
        let params = DcmmParams::new(
            DMatrix::from_element(1, 1, 1.0),
            vec![1e-300; 10],
            DMatrix::from_element(10, 1, 1.0),
        )
        .unwrap();
        let g = sample_dcmm(&params, 5).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn seed_determinism_and_graph_invariants() {
        let params =
            DcmmParams::new(p_matrix(2, 0.3), uniform_theta(40, 0.3, 0.9, 7), random_pi(40, 2, 8))
                .unwrap();
        let a = sample_dcmm(&params, 123).unwrap();
        let b = sample_dcmm(&params, 123).unwrap();
        assert_eq!(a, b);
        let c = sample_dcmm(&params, 124).unwrap();
        assert_ne!(a, c);
        a.check_invariants().unwrap();
        assert!(a.is_binary());
    }

    #[test]
    fn dcbm_equals_degenerate_dcmm_with_same_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let labels: Vec<usize> = (0..50).map(|_| rng.random_range(0..3)).collect();
        let dcbm =
            DcbmParams::new(p_matrix(3, 0.2), uniform_theta(50, 0.3, 0.9, 10), labels).unwrap();
        let via_block = sample_dcbm(&dcbm, 555).unwrap();
        let via_mixed = sample_dcmm(&dcbm.to_dcmm(), 555).unwrap();
        assert_eq!(via_block, via_mixed);
    }

    #[test]
    fn iid_bernoulli_special_case() {
        // all labels equal, theta = sqrt(p): edge probability exactly p
        let p = 0.2f64;
        let dcbm = DcbmParams::new(
            DMatrix::from_element(1, 1, 1.0),
            vec![p.sqrt(); 200],
            vec![0; 200],
        )
        .unwrap();
        let g = sample_dcbm(&dcbm, 2).unwrap();
        let n_pairs = 200.0 * 199.0 / 2.0;
        let freq = g.edge_count() as f64 / n_pairs;
        // 5 sigma band
        let sigma = (p * (1.0 - p) / n_pairs).sqrt();
        assert!((freq - p).abs() < 5.0 * sigma, "freq {freq}");
    }

    #[test]
    fn dynamic_single_window_equals_static() {
        let theta = uniform_theta(30, 0.3, 0.9, 11);
        let pi = random_pi(30, 2, 12);
        let dynamic = DynamicDcmmParams::new(
            p_matrix(2, 0.3),
            vec![DcmmWindow { theta: theta.clone(), pi: pi.clone() }],
        )
        .unwrap();
        let windows = sample_dynamic_dcmm(&dynamic, 77).unwrap();
        assert_eq!(windows.len(), 1);
        let static_params = DcmmParams::new(p_matrix(2, 0.3), theta, pi).unwrap();
        let wseed = crate::util::mix_seed(77, 0x57AD_0000);
        let direct = sample_dcmm(&static_params, wseed).unwrap();
        assert_eq!(windows[0], direct);
    }

    #[test]
    fn model_spec_parses_and_instantiates() {
        let text = "\
# two communities
n = 40
k = 2
p = 1.0 0.2 ; 0.2 1.0
theta = uniform 0.3 0.9
pi = dirichlet 0.5 pure 0.2
windows = 2
";
        let spec = ModelSpec::parse(text).unwrap();
        assert_eq!(spec.n, 40);
        assert_eq!(spec.windows, 2);
        let params = spec.instantiate(3).unwrap();
        assert_eq!(params.t(), 2);
        assert_eq!(params.n(), 40);
        // pure fraction: first 8 nodes cycle through the communities
        let pi = &params.windows[0].pi;
        for i in 0..8 {
            assert_eq!(pi[(i, i % 2)], 1.0);
        }
        // deterministic
        let again = spec.instantiate(3).unwrap();
        assert_eq!(params.windows[0].theta, again.windows[0].theta);
        // unknown key rejected
        assert!(ModelSpec::parse("n = 5\nbogus = 1").is_err());
        // labels variant
        let spec2 = ModelSpec::parse(
            "n = 4\nk = 2\np = 1 0.1 ; 0.1 1\ntheta = const 0.5\npi = labels 1 1 2 2",
        )
        .unwrap();
        let params2 = spec2.instantiate(0).unwrap();
        assert_eq!(params2.windows[0].pi[(2, 1)], 1.0);
        // explicit rows variant
        let spec3 = ModelSpec::parse(
            "n = 2\nk = 2\np = 1 0.1 ; 0.1 1\ntheta = const 0.5\npi = rows 0.7 0.3 ; 0.2 0.8",
        )
        .unwrap();
        let params3 = spec3.instantiate(0).unwrap();
        assert_eq!(params3.windows[0].pi[(0, 0)], 0.7);
        assert_eq!(params3.windows[0].pi[(1, 1)], 0.8);
    }

    #[test]
    fn empirical_frequencies_match_omega() {
        // Monte Carlo frequency oracle: 5,000 samples at n = 200, at least
        // 99% of pairs within 3 binomial standard errors of Omega
        let n = 200;
        let params = DcmmParams::new(
            p_matrix(2, 0.4),
            uniform_theta(n, 0.3, 0.8, 13),
            random_pi(n, 2, 14),
        )
        .unwrap();
        let om = omega(&params);
        let reps = 5_000u64;
        let counts: Vec<u32> = (0..reps)
            .into_par_iter()
            .fold(
                || vec![0u32; n * n],
                |mut acc, r| {
                    let g = sample_dcmm(&params, 10_000 + r).unwrap();
                    for i in 0..n {
                        for &j in g.neighbors(i) {
                            acc[i * n + j as usize] += 1;
                        }
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u32; n * n],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        let mut within = 0usize;
        let mut total = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                let p = om[(i, j)];
                let freq = counts[i * n + j] as f64 / reps as f64;
                let se = (p * (1.0 - p) / reps as f64).sqrt().max(1e-12);
                total += 1;
                within += ((freq - p).abs() <= 3.0 * se) as usize;
            }
        }
        assert!(
            within as f64 >= 0.99 * total as f64,
            "{within}/{total} pairs within 3 standard errors"
        );
    }

    #[test]
    fn constant_dynamic_windows_are_iid_draws() {
        // constant (theta, Pi) across windows: per-window edge counts are
        // iid, so their means match the analytic expectation within a
        // Monte Carlo band
        let n = 60;
        let theta = uniform_theta(n, 0.3, 0.8, 15);
        let pi = random_pi(n, 2, 16);
        let window = DcmmWindow { theta: theta.clone(), pi: pi.clone() };
        let params = DynamicDcmmParams::new(
            p_matrix(2, 0.3),
            vec![window.clone(), window.clone(), window],
        )
        .unwrap();
        let om = omega(&params.window_params(0));
        let mut expected = 0.0;
        let mut variance = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                expected += om[(i, j)];
                variance += om[(i, j)] * (1.0 - om[(i, j)]);
            }
        }
        let reps = 200u64;
        let mut per_window_sums = [0.0f64; 3];
        for r in 0..reps {
            let graphs = sample_dynamic_dcmm(&params, 40_000 + r).unwrap();
            for (t, g) in graphs.iter().enumerate() {
                per_window_sums[t] += g.edge_count() as f64;
            }
        }
        let se = (variance / reps as f64).sqrt();
        for (t, sum) in per_window_sums.iter().enumerate() {
            let mean = sum / reps as f64;
            assert!(
                (mean - expected).abs() <= 4.0 * se,
                "window {t}: mean edges {mean:.2} vs expected {expected:.2}"
            );
        }
    }

    #[test]
    fn drifting_memberships_match_expected_degrees() {
        // Pi drifting from pure toward mixed: per-window expected degrees
        // follow the Omega_t row sums
        let n = 50;
        let p = p_matrix(2, 0.1);
        let theta = uniform_theta(n, 0.4, 0.9, 17);
        let windows: Vec<DcmmWindow> = (0..3)
            .map(|t| {
                let blend = t as f64 / 2.0; // 0 = pure, 1 = uniform
                let mut pi = DMatrix::zeros(n, 2);
                for i in 0..n {
                    let pure = (i % 2) as f64;
                    let target = 0.5;
                    pi[(i, 0)] = (1.0 - blend) * pure + blend * target;
                    pi[(i, 1)] = 1.0 - pi[(i, 0)];
                }
                DcmmWindow { theta: theta.clone(), pi }
            })
            .collect();
        let params = DynamicDcmmParams::new(p, windows).unwrap();
        let reps = 400u64;
        let mut degree_sums = vec![vec![0.0f64; n]; 3];
        for r in 0..reps {
            let graphs = sample_dynamic_dcmm(&params, 50_000 + r).unwrap();
            for (t, g) in graphs.iter().enumerate() {
                for (i, d) in g.degrees().into_iter().enumerate() {
                    degree_sums[t][i] += d;
                }
            }
        }
        for t in 0..3 {
            let om = omega(&params.window_params(t));
            for i in 0..n {
                let expected: f64 =
                    (0..n).filter(|&j| j != i).map(|j| om[(i, j)]).sum();
                let variance: f64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| om[(i, j)] * (1.0 - om[(i, j)]))
                    .sum();
                let mean = degree_sums[t][i] / reps as f64;
                let se = (variance / reps as f64).sqrt();
                assert!(
                    (mean - expected).abs() <= 5.0 * se + 1e-9,
                    "window {t} node {i}: mean degree {mean:.3} vs {expected:.3}"
                );
            }
        }
    }
}
