//! Simplex structure of SCORE embeddings: vertex hunting, barycentric
//! weights, membership calibration, and the exact population counterparts
//! used as test oracles.
//!
//! Under the model, embedded points live in a simplex whose K vertices
//! correspond to the communities. Writing M_t = P Pi_t' Theta_t Xi Lambda^-1
//! (eigenpairs taken from the reference window), the vertices are
//! v_k = M_t(k, 2..K) / M_t(k, 1), the barycentric weights satisfy
//! w_i = (pi_i o h_t) / |pi_i o h_t|_1 with h_t the first column of M_t, and
//! so pi_i is recovered as w_i o (1/h_t) up to normalization.
//!
//! Empirically 1/h is estimated by h_hat(k) = sqrt(lambda_1 + v_k'
//! diag(lambda_2..lambda_K) v_k): for a static embedding M Lambda M' = P with
//! unit diagonal gives lambda_1 + v_k' diag(lambda_2..) v_k = 1 / M(k,1)^2
//! exactly. Memberships are therefore pi ~ w o h_hat; the orientation is
//! pinned by the population identity tests below.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::models::{omega, DynamicDcmmParams};
use crate::spectral::eigen::{dense_symmetric_top, fix_signs, EigenPairs};
use crate::spectral::embed::Embedding;
use crate::spectral::kmeans::{kmeans, DEFAULT_MAX_ITERS, DEFAULT_RESTARTS};

/// Simplex fit: vertices, per-node barycentric weights, and calibrated
/// memberships. `pi ~ w o calibration`, renormalized to the simplex.
#[derive(Debug, Clone)]
pub struct SimplexModel {
    /// K x (K-1) vertex coordinates.
    pub vertices: DMatrix<f64>,
    /// n x K barycentric weights; rows for invalid embedding rows are zero.
    pub weights: DMatrix<f64>,
    /// n x K membership estimates on the simplex.
    pub memberships: Option<DMatrix<f64>>,
    /// Per-community factor mapping weights to memberships.
    pub calibration: Vec<f64>,
    pub valid: Vec<bool>,
}

/// Estimate the K simplex vertices of an embedded point cloud: cluster the
/// valid rows into L = max(10, 3K) groups, then pick K centers by successive
/// projection, greedily maximizing the residual after projecting out the
/// affine hull of the centers already chosen. Vertices are ordered by first
/// coordinate, then lexicographically.
pub fn vertex_hunt(e: &Embedding, k: usize, seed: u64) -> Result<DMatrix<f64>> {
    let dim = e.dim();
    if k < 2 || dim != k - 1 {
        return Err(Error::InvalidParameter(format!(
            "vertex hunt needs a (K-1)-dimensional embedding; K = {k}, dim = {dim}"
        )));
    }
    let rows: Vec<usize> = (0..e.n()).filter(|&i| e.valid[i]).collect();
    if rows.len() < k {
        return Err(Error::TooFewValidRows { rows: rows.len(), k });
    }
    let points = DMatrix::from_fn(rows.len(), dim, |i, c| e.coords[(rows[i], c)]);
    let l = (3 * k).max(10).min(rows.len());
    let centers = if l >= k {
        kmeans(&points, l, seed, DEFAULT_RESTARTS, DEFAULT_MAX_ITERS)?.centers
    } else {
        points.clone()
    };

    let candidates = centers.nrows();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    // Orthonormal basis of the span of differences to the first chosen point.
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for _ in 0..k {
        if chosen.len() >= 2 {
            // fold the latest pick into the affine-hull basis before scanning
            let prev = *chosen.last().unwrap();
            let mut diff = centers.row(prev).transpose() - centers.row(chosen[0]).transpose();
            for b in &basis {
                let proj = b.dot(&diff);
                diff -= b * proj;
            }
            let norm = diff.norm();
            if norm > 1e-12 {
                basis.push(diff / norm);
            }
        }
        let mut best = usize::MAX;
        let mut best_r = -1.0;
        for c in 0..candidates {
            if chosen.contains(&c) {
                continue;
            }
            let r = if chosen.is_empty() {
                centers.row(c).norm()
            } else {
                let mut diff = centers.row(c).transpose() - centers.row(chosen[0]).transpose();
                for b in &basis {
                    let proj = b.dot(&diff);
                    diff -= b * proj;
                }
                diff.norm()
            };
            if r > best_r {
                best_r = r;
                best = c;
            }
        }
        chosen.push(best);
    }

    let mut vertex_rows: Vec<Vec<f64>> =
        chosen.iter().map(|&c| (0..dim).map(|d| centers[(c, d)]).collect()).collect();
    vertex_rows.sort_by(|a, b| {
        for d in 0..dim {
            match a[d].partial_cmp(&b[d]).unwrap() {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(DMatrix::from_fn(k, dim, |i, c| vertex_rows[i][c]))
}

/// Solve r = sum_k w(k) v_k with sum_k w(k) = 1 for every valid row, clip
/// negative weights, and calibrate memberships.
pub fn estimate_memberships(
    e: &Embedding,
    vertices: &DMatrix<f64>,
    pairs: &EigenPairs,
) -> Result<SimplexModel> {
    let k = vertices.nrows();
    let dim = k - 1;
    if vertices.ncols() != dim || e.dim() != dim || pairs.k() != k {
        return Err(Error::InvalidParameter(
            "embedding, vertices, and eigenpairs disagree on K".into(),
        ));
    }
    // [V' ; 1'] w = [r ; 1]
    let mut system = DMatrix::zeros(k, k);
    for c in 0..dim {
        for j in 0..k {
            system[(c, j)] = vertices[(j, c)];
        }
    }
    for j in 0..k {
        system[(dim, j)] = 1.0;
    }
    let lu = system.lu();

    let calibration: Vec<f64> = (0..k)
        .map(|j| {
            let mut q = pairs.values[0];
            for c in 0..dim {
                q += pairs.values[c + 1] * vertices[(j, c)] * vertices[(j, c)];
            }
            q.max(1e-12).sqrt()
        })
        .collect();

    let n = e.n();
    let mut weights = DMatrix::zeros(n, k);
    let mut memberships = DMatrix::zeros(n, k);
    for i in 0..n {
        if !e.valid[i] {
            continue;
        }
        let mut rhs = DVector::zeros(k);
        for c in 0..dim {
            rhs[c] = e.coords[(i, c)];
        }
        rhs[dim] = 1.0;
        let mut w = lu.solve(&rhs).ok_or(Error::DegenerateVertexSet)?;
        // clip negatives and renormalize; points outside the simplex get
        // projected this way rather than through a constrained solve
        let mut sum = 0.0;
        for j in 0..k {
            if w[j] < 0.0 {
                w[j] = 0.0;
            }
            sum += w[j];
        }
        if sum <= 0.0 {
            // all mass clipped: fall back to the nearest vertex
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for j in 0..k {
                let mut d = 0.0;
                for c in 0..dim {
                    let diff = e.coords[(i, c)] - vertices[(j, c)];
                    d += diff * diff;
                }
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
            w.fill(0.0);
            w[best] = 1.0;
            sum = 1.0;
        }
        let mut pi_sum = 0.0;
        for j in 0..k {
            w[j] /= sum;
            weights[(i, j)] = w[j];
            let p = w[j] * calibration[j];
            memberships[(i, j)] = p;
            pi_sum += p;
        }
        for j in 0..k {
            memberships[(i, j)] /= pi_sum;
        }
    }
    Ok(SimplexModel {
        vertices: vertices.clone(),
        weights,
        memberships: Some(memberships),
        calibration,
        valid: e.valid.clone(),
    })
}

/// Exact population quantities of the dynamic embedding: embeddings
/// r_i^(t), vertices v_k^(t), the positive vector h_t, and the barycentric
/// weights (pi o h_t)/|pi o h_t|_1. This is the oracle for `dynamic_embed`,
/// `vertex_hunt`, and `estimate_memberships`.
#[derive(Debug, Clone)]
pub struct PopulationDynamics {
    pub embeddings: Vec<Embedding>,
    pub simplexes: Vec<SimplexModel>,
    /// h_t per window: first column of M_t.
    pub h: Vec<Vec<f64>>,
    /// Reference eigenpairs of Omega_1.
    pub reference: EigenPairs,
}

pub fn population_dynamic_embed(params: &DynamicDcmmParams) -> Result<PopulationDynamics> {
    let k = params.k();
    let n = params.n();
    if k < 2 {
        return Err(Error::EmbeddingDimensionZero);
    }
    let omega1 = omega(&params.window_params(0));
    let (values, mut vectors) = dense_symmetric_top(omega1, k);
    fix_signs(&mut vectors);
    let lam1_abs = values[0].abs();
    for (c, &v) in values.iter().enumerate() {
        if v.abs() <= 1e-12 * lam1_abs.max(1.0) {
            return Err(Error::SimplexCondition(format!(
                "eigenvalue {} of the reference window is zero",
                c + 1
            )));
        }
    }
    let reference = EigenPairs { values: values.clone(), vectors: vectors.clone(), ridge_c0: 0.0 };

    // Xi Lambda^-1, shared by all windows
    let mut xi_lam_inv = vectors.clone();
    for c in 0..k {
        for i in 0..n {
            xi_lam_inv[(i, c)] /= values[c];
        }
    }

    let mut embeddings = Vec::with_capacity(params.t());
    let mut simplexes = Vec::with_capacity(params.t());
    let mut h_all = Vec::with_capacity(params.t());
    for t in 0..params.t() {
        let wp = params.window_params(t);
        // M_t = P Pi' Theta Xi Lambda^-1
        let mut theta_xi = xi_lam_inv.clone();
        for i in 0..n {
            for c in 0..k {
                theta_xi[(i, c)] *= wp.theta[i];
            }
        }
        let m_t = &wp.p * (wp.pi.transpose() * &theta_xi);
        // Theorem conditions: rank K and strictly positive first column
        let svd = m_t.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !(smin > 1e-10 * smax.max(1.0)) {
            return Err(Error::SimplexCondition(format!("rank(M_t) < K at window {}", t + 1)));
        }
        let h: Vec<f64> = (0..k).map(|j| m_t[(j, 0)]).collect();
        if let Some(j) = h.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::SimplexCondition(format!(
                "first column of M_t has nonpositive entry {} at window {}",
                h[j],
                t + 1
            )));
        }
        let vertices = DMatrix::from_fn(k, k - 1, |j, c| m_t[(j, c + 1)] / m_t[(j, 0)]);

        // r_i from Y = Omega_t Xi Lambda^-1
        let omega_t = omega(&wp);
        let y = &omega_t * &xi_lam_inv;
        let mut coords = DMatrix::zeros(n, k - 1);
        for i in 0..n {
            for c in 0..(k - 1) {
                coords[(i, c)] = y[(i, c + 1)] / y[(i, 0)];
            }
        }
        let embedding =
            Embedding { coords, valid: vec![true; n], k, window: Some(t + 1) };

        // exact weights (pi o h)/l1 and calibration 1/h
        let mut weights = DMatrix::zeros(n, k);
        for i in 0..n {
            let mut sum = 0.0;
            for j in 0..k {
                let v = wp.pi[(i, j)] * h[j];
                weights[(i, j)] = v;
                sum += v;
            }
            for j in 0..k {
                weights[(i, j)] /= sum;
            }
        }
        simplexes.push(SimplexModel {
            vertices,
            weights,
            memberships: Some(wp.pi.clone()),
            calibration: h.iter().map(|&v| 1.0 / v).collect(),
            valid: vec![true; n],
        });
        embeddings.push(embedding);
        h_all.push(h);
    }
    Ok(PopulationDynamics { embeddings, simplexes, h: h_all, reference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{DcmmParams, DcmmWindow};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p_matrix(k: usize, off: f64) -> DMatrix<f64> {
        DMatrix::from_fn(k, k, |a, b| if a == b { 1.0 } else { off })
    }

    /// Random membership matrix with at least one pure node per community.
    fn pi_with_pure(n: usize, k: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let mut pi = DMatrix::zeros(n, k);
        for i in 0..n {
            if i < k {
                pi[(i, i)] = 1.0;
            } else if rng.random::<f64>() < 0.3 {
                pi[(i, rng.random_range(0..k))] = 1.0;
            } else {
                let mut sum = 0.0;
                for c in 0..k {
                    let v = rng.random::<f64>() + 1e-3;
                    pi[(i, c)] = v;
                    sum += v;
                }
                for c in 0..k {
                    pi[(i, c)] /= sum;
                }
            }
        }
        pi
    }

    fn random_dynamic(k: usize, t: usize, n: usize, seed: u64) -> DynamicDcmmParams {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = p_matrix(k, 0.1 + 0.3 * rng.random::<f64>());
        let windows = (0..t)
            .map(|_| {
                let theta: Vec<f64> = (0..n).map(|_| 0.3 + 0.7 * rng.random::<f64>()).collect();
                DcmmWindow { theta, pi: pi_with_pure(n, k, &mut rng) }
            })
            .collect();
        DynamicDcmmParams::new(p, windows).unwrap()
    }

    #[test]
    fn vertex_hunt_recovers_noiseless_triangle() {
        let verts = [[0.0, 0.0], [4.0, 0.0], [2.0, 3.0]];
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for v in &verts {
            for _ in 0..40 {
                rows.push(vec![v[0], v[1]]);
            }
        }
        // interior points in a few discrete piles, so the zero-cost
        // clustering keeps every center exactly on a pile
        for (a, b) in [(0.5, 0.3), (0.2, 0.5), (0.3, 0.2)] {
            let c = 1.0 - a - b;
            for _ in 0..10 {
                rows.push(vec![
                    a * verts[0][0] + b * verts[1][0] + c * verts[2][0],
                    a * verts[0][1] + b * verts[1][1] + c * verts[2][1],
                ]);
            }
        }
        let n = rows.len();
        let coords = DMatrix::from_fn(n, 2, |i, c| rows[i][c]);
        let e = Embedding { coords, valid: vec![true; n], k: 3, window: None };
        let found = vertex_hunt(&e, 3, 7).unwrap();
        let mut expected = verts.to_vec();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for j in 0..3 {
            for c in 0..2 {
                assert!(
                    (found[(j, c)] - expected[j][c]).abs() < 1e-9,
                    "vertex {j} coord {c}: {}",
                    found[(j, c)]
                );
            }
        }
    }

    #[test]
    fn vertex_hunt_matches_population_vertices() {
        // population embedding with heavy pure mass and mixed nodes sitting
        // on a few discrete barycenters: the zero-cost clustering keeps
        // centers exactly on the simplex points, so hunting is exact
        let k = 3;
        let n = 120;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = p_matrix(k, 0.2);
        let theta: Vec<f64> = (0..n).map(|_| 0.3 + 0.6 * rng.random::<f64>()).collect();
        let mixed_rows = [[0.6, 0.25, 0.15], [0.2, 0.55, 0.25], [0.15, 0.3, 0.55]];
        let mut pi = DMatrix::zeros(n, k);
        for i in 0..n {
            if i < 90 {
                pi[(i, i % k)] = 1.0;
            } else {
                let row = mixed_rows[i % 3];
                for c in 0..k {
                    pi[(i, c)] = row[c];
                }
            }
        }
        let params = DynamicDcmmParams::new(
            p,
            vec![DcmmWindow { theta, pi }],
        )
        .unwrap();
        let pop = population_dynamic_embed(&params).unwrap();
        let found = vertex_hunt(&pop.embeddings[0], k, 5).unwrap();
        let mut expected: Vec<Vec<f64>> = (0..k)
            .map(|j| (0..k - 1).map(|c| pop.simplexes[0].vertices[(j, c)]).collect())
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for j in 0..k {
            for c in 0..(k - 1) {
                assert!(
                    (found[(j, c)] - expected[j][c]).abs() < 1e-8,
                    "vertex {j} coord {c}: {} vs {}",
                    found[(j, c)],
                    expected[j][c]
                );
            }
        }
    }

    #[test]
    fn vertex_hunt_tolerates_noise() {
        // planted-simplex simulation: barycentric points plus N(0, 0.01)
        // noise; recovered vertices within 0.05 per coordinate
        let verts = [[0.0, 0.0], [3.0, 0.5], [1.0, 2.5]];
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let normal = rand_distr::Normal::new(0.0, 0.01).unwrap();
        let gamma = rand_distr::Gamma::new(0.2, 1.0).unwrap();
        let n = 2000;
        let mut coords = DMatrix::zeros(n, 2);
        for i in 0..n {
            // half the points pure, the rest corner-concentrated mixtures,
            // the shape SCORE clouds take
            let w = if i % 2 == 0 {
                let mut w = [0.0; 3];
                w[i % 3] = 1.0;
                w
            } else {
                let mut w = [0.0f64; 3];
                let mut sum = 0.0;
                for v in &mut w {
                    *v = rng.sample(gamma) + 1e-9;
                    sum += *v;
                }
                for v in &mut w {
                    *v /= sum;
                }
                w
            };
            for c in 0..2 {
                let noise: f64 = rng.sample(normal);
                coords[(i, c)] =
                    (0..3).map(|v| w[v] * verts[v][c]).sum::<f64>() + noise;
            }
        }
        let e = Embedding { coords, valid: vec![true; n], k: 3, window: None };
        let found = vertex_hunt(&e, 3, 21).unwrap();
        let mut expected = verts.to_vec();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for j in 0..3 {
            for c in 0..2 {
                assert!(
                    (found[(j, c)] - expected[j][c]).abs() < 0.05,
                    "vertex {j} coord {c}: {} vs {}",
                    found[(j, c)],
                    expected[j][c]
                );
            }
        }
    }

    #[test]
    fn too_few_valid_rows_errors() {
        let coords = DMatrix::zeros(2, 2);
        let e = Embedding { coords, valid: vec![true, false], k: 3, window: None };
        assert!(matches!(vertex_hunt(&e, 3, 0), Err(Error::TooFewValidRows { rows: 1, k: 3 })));
    }

    #[test]
    fn weights_at_vertices_and_centroid() {
        // regular simplex in 2D
        let vertices = DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.5, 0.75f64.sqrt()]);
        let pairs = EigenPairs {
            values: vec![2.0, 0.5, 0.3],
            vectors: DMatrix::zeros(4, 3),
            ridge_c0: 0.0,
        };
        let mut coords = DMatrix::zeros(4, 2);
        // row 0 at vertex 1, row 1 at vertex 2, row 2 at the centroid
        coords[(0, 0)] = 1.0;
        coords[(1, 0)] = 0.5;
        coords[(1, 1)] = 0.75f64.sqrt();
        coords[(2, 0)] = (0.0 + 1.0 + 0.5) / 3.0;
        coords[(2, 1)] = 0.75f64.sqrt() / 3.0;
        let e = Embedding { coords, valid: vec![true, true, true, false], k: 3, window: None };
        let model = estimate_memberships(&e, &vertices, &pairs).unwrap();
        assert!((model.weights[(0, 1)] - 1.0).abs() < 1e-12);
        let pi = model.memberships.as_ref().unwrap();
        assert!((pi[(0, 1)] - 1.0).abs() < 1e-12);
        assert!((model.weights[(1, 2)] - 1.0).abs() < 1e-12);
        for j in 0..3 {
            assert!((model.weights[(2, j)] - 1.0 / 3.0).abs() < 1e-12);
        }
        // invalid row untouched
        assert_eq!(model.weights[(3, 0)], 0.0);
    }

    #[test]
    fn population_pure_nodes_sit_on_vertices() {
        let params = random_dynamic(3, 2, 60, 3);
        let pop = population_dynamic_embed(&params).unwrap();
        for t in 0..2 {
            let wp = params.window_params(t);
            let e = &pop.embeddings[t];
            let s = &pop.simplexes[t];
            for i in 0..params.n() {
                if let Some(kpure) = (0..3).find(|&c| wp.pi[(i, c)] == 1.0) {
                    for c in 0..2 {
                        assert!(
                            (e.coords[(i, c)] - s.vertices[(kpure, c)]).abs() < 1e-9,
                            "window {t} node {i}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn population_weights_match_theorem_identity() {
        for seed in [5u64, 6, 7] {
            let k = 2 + (seed as usize % 3);
            let params = random_dynamic(k, 3, 50, seed);
            let pop = population_dynamic_embed(&params).unwrap();
            for t in 0..3 {
                let e = &pop.embeddings[t];
                let s = &pop.simplexes[t];
                for i in 0..params.n() {
                    // r_i reconstructs as sum_k w_k v_k
                    for c in 0..(k - 1) {
                        let mut rec = 0.0;
                        for j in 0..k {
                            rec += s.weights[(i, j)] * s.vertices[(j, c)];
                        }
                        assert!(
                            (rec - e.coords[(i, c)]).abs() < 1e-8,
                            "seed {seed} window {t} node {i} coord {c}"
                        );
                    }
                    let row_sum: f64 = (0..k).map(|j| s.weights[(i, j)]).sum();
                    assert!((row_sum - 1.0).abs() < 1e-10);
                    assert!((0..k).all(|j| s.weights[(i, j)] >= -1e-12));
                    // mixed nodes stay off the vertices
                    let max_pi = (0..k).fold(0.0f64, |m, j| m.max(params.windows[t].pi[(i, j)]));
                    if max_pi < 1.0 {
                        let max_w = (0..k).fold(0.0f64, |m, j| m.max(s.weights[(i, j)]));
                        assert!(max_w < 1.0, "mixed node {i} landed on a vertex");
                    }
                }
            }
        }
    }

    #[test]
    fn population_membership_recovery_via_static_estimators() {
        // static case: feed exact eigenpairs/embedding/vertices of Omega and
        // require pi_hat = pi; this pins the calibration formula and its
        // orientation
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 80;
        let k = 3;
        let p = p_matrix(k, 0.25);
        let theta: Vec<f64> = (0..n).map(|_| 0.3 + 0.7 * rng.random::<f64>()).collect();
        let pi = pi_with_pure(n, k, &mut rng);
        let params = DcmmParams::new(p.clone(), theta, pi.clone()).unwrap();
        let dynamic = DynamicDcmmParams::new(
            p,
            vec![DcmmWindow { theta: params.theta.clone(), pi: params.pi.clone() }],
        )
        .unwrap();
        let pop = population_dynamic_embed(&dynamic).unwrap();
        let model =
            estimate_memberships(&pop.embeddings[0], &pop.simplexes[0].vertices, &pop.reference)
                .unwrap();
        let pi_hat = model.memberships.as_ref().unwrap();
        for i in 0..n {
            for c in 0..k {
                assert!(
                    (pi_hat[(i, c)] - pi[(i, c)]).abs() < 1e-8,
                    "node {i} community {c}: {} vs {}",
                    pi_hat[(i, c)],
                    pi[(i, c)]
                );
            }
        }
    }

    #[test]
    fn degenerate_vertices_error() {
        let vertices = DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 1.0, 2.0, 2.0]);
        let pairs =
            EigenPairs { values: vec![1.0, 0.5, 0.2], vectors: DMatrix::zeros(2, 3), ridge_c0: 0.0 };
        let e = Embedding { coords: DMatrix::zeros(2, 2), valid: vec![true; 2], k: 3, window: None };
        assert!(matches!(
            estimate_memberships(&e, &vertices, &pairs),
            Err(Error::DegenerateVertexSet)
        ));
    }
}
