//! Lloyd's k-means with k-means++ seeding and deterministic restarts.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::util::mix_seed;

pub const DEFAULT_RESTARTS: usize = 20;
pub const DEFAULT_MAX_ITERS: usize = 300;

#[derive(Debug, Clone)]
pub struct KmeansResult {
    /// l x dim cluster centers.
    pub centers: DMatrix<f64>,
    pub assignments: Vec<usize>,
    /// Within-cluster sum of squared distances.
    pub objective: f64,
}

fn sq_dist_row(points: &DMatrix<f64>, i: usize, centers: &DMatrix<f64>, c: usize) -> f64 {
    let mut acc = 0.0;
    for d in 0..points.ncols() {
        let diff = points[(i, d)] - centers[(c, d)];
        acc += diff * diff;
    }
    acc
}

fn kpp_seed(points: &DMatrix<f64>, l: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let n = points.nrows();
    let dim = points.ncols();
    let mut centers = DMatrix::zeros(l, dim);
    let first = rng.random_range(0..n);
    for d in 0..dim {
        centers[(0, d)] = points[(first, d)];
    }
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist_row(points, i, &centers, 0)).collect();
    for c in 1..l {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if acc >= target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        for d in 0..dim {
            centers[(c, d)] = points[(pick, d)];
        }
        for i in 0..n {
            d2[i] = d2[i].min(sq_dist_row(points, i, &centers, c));
        }
    }
    centers
}

fn assign(points: &DMatrix<f64>, centers: &DMatrix<f64>, out: &mut [usize]) {
    let l = centers.nrows();
    for i in 0..points.nrows() {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for c in 0..l {
            let d = sq_dist_row(points, i, centers, c);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        out[i] = best;
    }
}

fn lloyd(points: &DMatrix<f64>, mut centers: DMatrix<f64>, max_iters: usize) -> KmeansResult {
    let n = points.nrows();
    let dim = points.ncols();
    let l = centers.nrows();
    let mut assignments = vec![0usize; n];
    assign(points, &centers, &mut assignments);
    for _ in 0..max_iters {
        // update step
        let mut counts = vec![0usize; l];
        let mut sums = DMatrix::<f64>::zeros(l, dim);
        for i in 0..n {
            counts[assignments[i]] += 1;
            for d in 0..dim {
                sums[(assignments[i], d)] += points[(i, d)];
            }
        }
        for c in 0..l {
            if counts[c] > 0 {
                for d in 0..dim {
                    centers[(c, d)] = sums[(c, d)] / counts[c] as f64;
                }
            }
        }
        // repair empty clusters with the point farthest from its center
        for c in 0..l {
            if counts[c] > 0 {
                continue;
            }
            let mut far = 0usize;
            let mut far_d = -1.0;
            for i in 0..n {
                let d = sq_dist_row(points, i, &centers, assignments[i]);
                if d > far_d {
                    far_d = d;
                    far = i;
                }
            }
            for d in 0..dim {
                centers[(c, d)] = points[(far, d)];
            }
            counts[c] = 1;
        }
        let mut next = vec![0usize; n];
        assign(points, &centers, &mut next);
        if next == assignments {
            break;
        }
        assignments = next;
    }
    let objective: f64 = (0..n).map(|i| sq_dist_row(points, i, &centers, assignments[i])).sum();
    KmeansResult { centers, assignments, objective }
}

/// Cluster the rows of `points` into `l` groups; best of `restarts`
/// k-means++ initializations, deterministic given the seed.
pub fn kmeans(
    points: &DMatrix<f64>,
    l: usize,
    seed: u64,
    restarts: usize,
    max_iters: usize,
) -> Result<KmeansResult> {
    let n = points.nrows();
    if l < 1 {
        return Err(Error::InvalidParameter("k-means needs L >= 1".into()));
    }
    if l > n {
        return Err(Error::InvalidParameter(format!(
            "k-means with L = {l} needs at least that many points (have {n})"
        )));
    }
    // all-identical points with L > 1: duplicate centers, warn
    let identical = (0..n).all(|i| (0..points.ncols()).all(|d| points[(i, d)] == points[(0, d)]));
    if identical && l > 1 {
        log::warn!("k-means: all points identical, returning duplicate centers");
        let mut centers = DMatrix::zeros(l, points.ncols());
        for c in 0..l {
            for d in 0..points.ncols() {
                centers[(c, d)] = points[(0, d)];
            }
        }
        return Ok(KmeansResult { centers, assignments: vec![0; n], objective: 0.0 });
    }
    let mut best: Option<KmeansResult> = None;
    for r in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, r as u64));
        let centers = kpp_seed(points, l, &mut rng);
        let result = lloyd(points, centers, max_iters);
        if best.as_ref().map(|b| result.objective < b.objective).unwrap_or(true) {
            best = Some(result);
        }
    }
    Ok(best.unwrap())
}
