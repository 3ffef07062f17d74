use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{softmax, LogRegModel};
use crate::encode::TfIdfModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimeConfig {
    pub num_samples: usize,
    /// Kernel width; `None` means 0.75·√(number of features).
    pub kernel_width: Option<f64>,
    pub ridge: f64,
    pub top_k: usize,
}

impl Default for LimeConfig {
    fn default() -> Self {
        LimeConfig { num_samples: 1000, kernel_width: None, ridge: 1.0, top_k: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub doc_id: String,
    pub class: String,
    /// Top features by |weight|, ties lexicographic.
    pub weights: Vec<(String, f64)>,
    pub intercept: f64,
    /// Weighted R² of the surrogate on the perturbation samples.
    pub fidelity: f64,
    pub num_features: usize,
    pub num_samples: usize,
    pub seed: u64,
}

impl Explanation {
    pub fn weight(&self, token: &str) -> Option<f64> {
        self.weights.iter().find(|(t, _)| t == token).map(|(_, w)| *w)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RidgeFit {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub r2: f64,
}

/// Minimize Σ ŵᵢ (yᵢ − b − xᵢ·β)² + α‖β‖² with ŵ the sample weights scaled to
/// sum to 1; the intercept is not penalized.
pub fn fit_weighted_ridge(rows: &[Vec<f64>], y: &[f64], weights: &[f64], alpha: f64) -> Result<RidgeFit> {
    let n = rows.len();
    if n == 0 || y.len() != n || weights.len() != n {
        return Err(Error::Validation("ridge fit needs matching, non-empty samples".into()));
    }
    let p = rows[0].len();
    if rows.iter().any(|r| r.len() != p) {
        return Err(Error::Validation("ragged design matrix".into()));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) || weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
        return Err(Error::Validation("sample weights must be non-negative with positive sum".into()));
    }
    let w: Vec<f64> = weights.iter().map(|v| v / total).collect();
    let x = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
    let yv = DVector::from_column_slice(y);
    let wv = DVector::from_vec(w);
    let x_mean = x.transpose() * &wv;
    let y_mean = yv.dot(&wv);
    let sw = wv.map(f64::sqrt);
    let mut xc = x.clone();
    for i in 0..n {
        for j in 0..p {
            xc[(i, j)] = (xc[(i, j)] - x_mean[j]) * sw[i];
        }
    }
    let yc = DVector::from_fn(n, |i, _| (yv[i] - y_mean) * sw[i]);
    let mut a = xc.transpose() * &xc;
    for j in 0..p {
        a[(j, j)] += alpha;
    }
    let b = xc.transpose() * &yc;
    let beta = match a.clone().cholesky() {
        Some(ch) => ch.solve(&b),
        None => a
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::Training("singular surrogate system; use a positive ridge penalty".into()))?,
    };
    let intercept = y_mean - x_mean.dot(&beta);
    let fitted = &x * &beta;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for i in 0..n {
        ss_res += wv[i] * (yv[i] - intercept - fitted[i]).powi(2);
        ss_tot += wv[i] * (yv[i] - y_mean).powi(2);
    }
    let r2 = if ss_tot > 1e-300 { 1.0 - ss_res / ss_tot } else if ss_res <= 1e-300 { 1.0 } else { 0.0 };
    Ok(RidgeFit { coefficients: beta.iter().copied().collect(), intercept, r2 })
}

/// Cosine distance between a binary mask with `kept` ones and the all-ones
/// vector of length `features`.
fn mask_distance(kept: usize, features: usize) -> f64 {
    if kept == 0 {
        1.0
    } else {
        1.0 - (kept as f64 / features as f64).sqrt()
    }
}

/// Local surrogate explanation of `model`'s probability for class `target`
/// on one document. Sample 0 is the unperturbed document; the others keep
/// each distinct in-vocabulary token with probability 1/2.
pub fn lime_explain(
    model: &LogRegModel,
    tfidf: &TfIdfModel,
    doc_id: &str,
    tokens: &[String],
    target: usize,
    config: &LimeConfig,
    seed: u64,
) -> Result<Explanation> {
    if target >= model.classes.len() {
        return Err(Error::Validation(format!("class index {target} out of range")));
    }
    if config.num_samples < 2 {
        return Err(Error::Validation("LIME needs at least 2 samples".into()));
    }
    let mut seen = HashSet::new();
    let features: Vec<&str> = tokens
        .iter()
        .map(String::as_str)
        .filter(|t| tfidf.index_of(t).is_some() && seen.insert(*t))
        .collect();
    if features.is_empty() {
        return Err(Error::Validation(format!("document {doc_id} has no in-vocabulary tokens")));
    }
    let f = features.len();
    // per feature: squared tf-idf mass and its contribution to each class score
    let mut mass = vec![0.0; f];
    let mut contrib = vec![vec![0.0; model.classes.len()]; f];
    for (k, feat) in features.iter().enumerate() {
        let col = tfidf.index_of(feat).expect("filtered");
        let count = tokens.iter().filter(|t| t == feat).count() as f64;
        let v = count * tfidf.idf_weights()[col];
        mass[k] = v * v;
        for (c, w) in model.weights.iter().enumerate() {
            contrib[k][c] = v * w.get(col).copied().unwrap_or(0.0);
        }
    }
    let probability = |mask: &[f64]| {
        let norm: f64 = mask.iter().zip(&mass).map(|(m, s)| m * s).sum::<f64>().sqrt();
        let scores: Vec<f64> = (0..model.classes.len())
            .map(|c| {
                let dot: f64 = mask.iter().zip(&contrib).map(|(m, a)| m * a[c]).sum();
                model.bias[c] + if norm > 0.0 { dot / norm } else { 0.0 }
            })
            .collect();
        softmax(&scores)[target]
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = config.kernel_width.unwrap_or(0.75 * (f as f64).sqrt());
    let mut rows = Vec::with_capacity(config.num_samples);
    let mut y = Vec::with_capacity(config.num_samples);
    let mut kernel = Vec::with_capacity(config.num_samples);
    for s in 0..config.num_samples {
        let mask: Vec<f64> = if s == 0 {
            vec![1.0; f]
        } else {
            (0..f).map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 }).collect()
        };
        let kept = mask.iter().filter(|m| **m > 0.0).count();
        let d = mask_distance(kept, f);
        kernel.push((-d * d / (width * width)).exp());
        y.push(probability(&mask));
        rows.push(mask);
    }
    let fit = fit_weighted_ridge(&rows, &y, &kernel, config.ridge / config.num_samples as f64)?;
    let mut weights: Vec<(String, f64)> =
        features.iter().zip(&fit.coefficients).map(|(t, w)| (t.to_string(), *w)).collect();
    weights.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()).then_with(|| a.0.cmp(&b.0)));
    weights.truncate(config.top_k);
    Ok(Explanation {
        doc_id: doc_id.to_string(),
        class: model.classes[target].clone(),
        weights,
        intercept: fit.intercept,
        fidelity: fit.r2,
        num_features: f,
        num_samples: config.num_samples,
        seed,
    })
}

/// Stable per-document seed derived from a run seed and a document id.
pub fn derive_seed(seed: u64, doc_id: &str) -> u64 {
    // FNV-1a over the id, then a splitmix64 finalizer
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in doc_id.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = h ^ seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
