//! SCORE and dynamic network embeddings.
//!
//! SCORE divides trailing eigenvector entries by the leading ones,
//! r_i(k) = xi_{k+1}(i) / xi_1(i), canceling degree heterogeneity. The
//! dynamic embedding projects every window's adjacency onto the eigenpairs
//! of a fixed reference window,
//! r_i^(t)(k) = [lambda_1 (e_i' A_t xi_{k+1})] / [lambda_{k+1} (e_i' A_t xi_1)],
//! which aligns coordinates across windows and reduces to SCORE at t = t0.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::eigen::EigenPairs;

/// Rows with |denominator| below this times the max are masked invalid.
const DENOM_FLOOR_REL: f64 = 1e-12;

/// Per-node (K-1)-dimensional coordinates with a validity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// n x (K-1); masked rows are all zeros.
    pub coords: DMatrix<f64>,
    pub valid: Vec<bool>,
    pub k: usize,
    /// Window index this embedding belongs to, when part of a sequence.
    pub window: Option<usize>,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.coords.nrows()
    }

    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.dim()).map(|c| self.coords[(i, c)]).collect()
    }
}

fn denom_floor(values: &[f64]) -> f64 {
    let max_abs = values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    DENOM_FLOOR_REL * max_abs
}

/// SCORE embedding from eigenpairs of one adjacency matrix.
pub fn score_embed(pairs: &EigenPairs) -> Result<Embedding> {
    let k = pairs.k();
    if k < 2 {
        return Err(Error::EmbeddingDimensionZero);
    }
    let n = pairs.n();
    let xi1: Vec<f64> = (0..n).map(|i| pairs.vectors[(i, 0)]).collect();
    let floor = denom_floor(&xi1);
    let mut coords = DMatrix::zeros(n, k - 1);
    let mut valid = vec![false; n];
    for i in 0..n {
        let d = xi1[i];
        if d == 0.0 || d.abs() < floor {
            continue;
        }
        valid[i] = true;
        for c in 1..k {
            coords[(i, c - 1)] = pairs.vectors[(i, c)] / d;
        }
    }
    Ok(Embedding { coords, valid, k, window: None })
}

/// Element-wise truncation: entries keep their sign, magnitudes cap at t.
pub fn truncate_embedding(e: &Embedding, t: f64) -> Result<Embedding> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("truncation threshold {t} must be > 0")));
    }
    let mut out = e.clone();
    for v in out.coords.iter_mut() {
        *v = v.signum() * v.abs().min(t);
    }
    Ok(out)
}

/// Dynamic network embedding of a window sequence against reference
/// eigenpairs. Rows with zero window degree are masked before the
/// denominator floor test.
pub fn dynamic_embed(reference: &EigenPairs, windows: &[Graph]) -> Result<Vec<Embedding>> {
    let k = reference.k();
    if k < 2 {
        return Err(Error::EmbeddingDimensionZero);
    }
    let n = reference.n();
    for (t, g) in windows.iter().enumerate() {
        if g.n() != n {
            return Err(Error::WindowNodeMismatch { expected: n, window: t + 1, actual: g.n() });
        }
    }
    for (c, &lam) in reference.values.iter().enumerate() {
        if lam == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "reference eigenvalue {} is zero",
                c + 1
            )));
        }
    }
    let lambda1 = reference.values[0];
    let mut out = Vec::with_capacity(windows.len());
    for (t, g) in windows.iter().enumerate() {
        // y_c = A_t xi_c
        let mut projections: Vec<Vec<f64>> = Vec::with_capacity(k);
        for c in 0..k {
            let xi: Vec<f64> = (0..n).map(|i| reference.vectors[(i, c)]).collect();
            let mut y = vec![0.0f64; n];
            g.matvec(&xi, &mut y);
            projections.push(y);
        }
        let floor = denom_floor(&projections[0]);
        let mut coords = DMatrix::zeros(n, k - 1);
        let mut valid = vec![false; n];
        for i in 0..n {
            if g.neighbors(i).is_empty() {
                continue;
            }
            let den_base = projections[0][i];
            if den_base == 0.0 || den_base.abs() < floor {
                continue;
            }
            valid[i] = true;
            for c in 1..k {
                coords[(i, c - 1)] =
                    (lambda1 * projections[c][i]) / (reference.values[c] * den_base);
            }
        }
        out.push(Embedding { coords, valid, k, window: Some(t + 1) });
    }
    Ok(out)
}
