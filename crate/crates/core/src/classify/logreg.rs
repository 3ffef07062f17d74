use std::path::Path;

use serde::{Deserialize, Serialize};

use super::dataset::LabeledDataset;
use crate::encode::SparseVector;
use crate::error::{Error, Result};

/// Hyperparameters of full-batch gradient descent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogRegConfig {
    /// Coefficient λ of the penalty (λ/2)·‖W‖².
    pub l2: f64,
    pub step: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig { l2: 1e-3, step: 0.5, max_iterations: 500, tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub iterations: usize,
    pub converged: bool,
    pub final_loss: f64,
    pub seed: u64,
    pub config: LogRegConfig,
}

/// Multinomial logistic regression, weights stored class-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub classes: Vec<String>,
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub metadata: TrainingMetadata,
}

/// Regularized mean cross-entropy and its gradient with respect to weights and bias.
#[derive(Debug, Clone, PartialEq)]
pub struct LossGradient {
    pub loss: f64,
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}

fn scores(weights: &[Vec<f64>], bias: &[f64], x: &SparseVector) -> Vec<f64> {
    weights.iter().zip(bias).map(|(w, b)| x.dot_dense(w) + b).collect()
}

pub fn loss_and_gradient(weights: &[Vec<f64>], bias: &[f64], data: &LabeledDataset, l2: f64) -> LossGradient {
    let classes = weights.len();
    let dim = weights.first().map_or(0, Vec::len);
    let n = data.len() as f64;
    let mut gw = vec![vec![0.0; dim]; classes];
    let mut gb = vec![0.0; classes];
    let mut loss = 0.0;
    for (x, &y) in data.vectors.iter().zip(&data.labels) {
        let s = scores(weights, bias, x);
        let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_z = max + s.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        loss += log_z - s[y];
        for c in 0..classes {
            let residual = (s[c] - log_z).exp() - if c == y { 1.0 } else { 0.0 };
            gb[c] += residual / n;
            for (j, v) in x.iter() {
                if j < dim {
                    gw[c][j] += residual * v / n;
                }
            }
        }
    }
    loss /= n;
    let mut penalty = 0.0;
    for (g, w) in gw.iter_mut().zip(weights) {
        for (gj, wj) in g.iter_mut().zip(w) {
            *gj += l2 * wj;
            penalty += wj * wj;
        }
    }
    LossGradient { loss: loss + 0.5 * l2 * penalty, weights: gw, bias: gb }
}

/// Train from zero weights. The procedure is deterministic; the seed is recorded only.
pub fn train_logreg(data: &LabeledDataset, config: &LogRegConfig, seed: u64) -> Result<LogRegModel> {
    if data.is_empty() {
        return Err(Error::Validation("cannot train on an empty dataset".into()));
    }
    let present = data.present_classes();
    if present < 2 {
        return Err(Error::Validation(format!("training needs at least 2 classes, found {present}")));
    }
    if !(config.step > 0.0 && config.l2 >= 0.0 && config.tolerance >= 0.0) {
        return Err(Error::Validation(format!("invalid optimizer settings {config:?}")));
    }
    let classes = data.classes.len();
    let dim = data.dimension();
    let mut weights = vec![vec![0.0; dim]; classes];
    let mut bias = vec![0.0; classes];
    let mut previous = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    let mut loss = f64::NAN;
    while iterations < config.max_iterations {
        let lg = loss_and_gradient(&weights, &bias, data, config.l2);
        if !lg.loss.is_finite() {
            return Err(Error::Training(format!("loss became non-finite at iteration {iterations}")));
        }
        loss = lg.loss;
        if (previous - loss).abs() < config.tolerance {
            converged = true;
            break;
        }
        previous = loss;
        for (w, g) in weights.iter_mut().zip(&lg.weights) {
            for (wj, gj) in w.iter_mut().zip(g) {
                *wj -= config.step * gj;
            }
        }
        for (b, g) in bias.iter_mut().zip(&lg.bias) {
            *b -= config.step * g;
        }
        iterations += 1;
    }
    if !converged {
        loss = loss_and_gradient(&weights, &bias, data, config.l2).loss;
    }
    log::debug!("logreg: {iterations} iterations, loss {loss:.6}, converged {converged}");
    Ok(LogRegModel {
        classes: data.classes.clone(),
        weights,
        bias,
        metadata: TrainingMetadata { iterations, converged, final_loss: loss, seed, config: *config },
    })
}

impl LogRegModel {
    pub fn dimension(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn scores(&self, x: &SparseVector) -> Vec<f64> {
        scores(&self.weights, &self.bias, x)
    }

    pub fn predict_proba(&self, x: &SparseVector) -> Vec<f64> {
        softmax(&self.scores(x))
    }

    /// Index of the highest score; ties go to the lower index.
    pub fn predict_index(&self, x: &SparseVector) -> usize {
        argmax(&self.scores(x))
    }

    pub fn predict(&self, x: &SparseVector) -> &str {
        &self.classes[self.predict_index(x)]
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == label)
    }

    pub fn weight_norm(&self) -> f64 {
        self.weights.iter().flatten().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, serde_json::to_string(self)?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

pub fn predict_proba(model: &LogRegModel, x: &SparseVector) -> Vec<f64> {
    model.predict_proba(x)
}

/// Fraction of instances whose argmax prediction equals the gold label.
pub fn evaluate_accuracy(model: &LogRegModel, data: &LabeledDataset) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Domain("accuracy of an empty dataset is undefined".into()));
    }
    let correct = data
        .vectors
        .iter()
        .zip(&data.labels)
        .filter(|(x, &y)| model.predict(x) == data.classes[y])
        .count();
    Ok(correct as f64 / data.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(u32, f64)]) -> SparseVector {
        SparseVector::from_pairs(pairs.to_vec())
    }

    fn toy() -> LabeledDataset {
        LabeledDataset::new(
            vec![
                sv(&[(0, 1.0), (1, 0.5)]),
                sv(&[(1, 1.0), (2, -0.3)]),
                sv(&[(2, 0.7), (3, 0.2)]),
                sv(&[(0, -0.4), (3, 1.0)]),
                sv(&[(0, 0.3), (1, 0.3), (2, 0.3), (3, 0.3)]),
            ],
            ["a", "b", "c", "a", "b"].iter().map(|s| s.to_string()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let data = toy();
        let w: Vec<Vec<f64>> = (0..3).map(|c| (0..4).map(|j| 0.1 * (c as f64) - 0.07 * j as f64 + 0.05).collect()).collect();
        let b = vec![0.1, -0.2, 0.05];
        let l2 = 0.1;
        let g = loss_and_gradient(&w, &b, &data, l2);
        let h = 1e-5;
        for c in 0..3 {
            for j in 0..4 {
                let mut wp = w.clone();
                let mut wm = w.clone();
                wp[c][j] += h;
                wm[c][j] -= h;
                let fd = (loss_and_gradient(&wp, &b, &data, l2).loss - loss_and_gradient(&wm, &b, &data, l2).loss) / (2.0 * h);
                let rel = (fd - g.weights[c][j]).abs() / fd.abs().max(g.weights[c][j].abs()).max(1e-8);
                assert!(rel <= 1e-5, "w[{c}][{j}] {fd} vs {}", g.weights[c][j]);
            }
            let mut bp = b.clone();
            let mut bm = b.clone();
            bp[c] += h;
            bm[c] -= h;
            let fd = (loss_and_gradient(&w, &bp, &data, l2).loss - loss_and_gradient(&w, &bm, &data, l2).loss) / (2.0 * h);
            assert!((fd - g.bias[c]).abs() <= 1e-5 * fd.abs().max(1e-8));
        }
    }

    #[test]
    fn uniform_probabilities_at_zero() {
        let model = LogRegModel {
            classes: vec!["a".into(), "b".into(), "c".into()],
            weights: vec![vec![0.0; 4]; 3],
            bias: vec![0.0; 3],
            metadata: TrainingMetadata { iterations: 0, converged: false, final_loss: 0.0, seed: 0, config: LogRegConfig::default() },
        };
        for p in model.predict_proba(&sv(&[(1, 3.0)])) {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_class_is_rejected() {
        let data = LabeledDataset::new(vec![sv(&[(0, 1.0)])], vec!["a".into()]).unwrap();
        assert!(matches!(train_logreg(&data, &LogRegConfig::default(), 1), Err(Error::Validation(_))));
    }

    #[test]
    fn deterministic_and_separable() {
        let data = toy();
        let a = train_logreg(&data, &LogRegConfig::default(), 3).unwrap();
        let b = train_logreg(&data, &LogRegConfig::default(), 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(evaluate_accuracy(&a, &data).unwrap(), 1.0);
    }

    #[test]
    fn penalty_shrinks_weights() {
        let data = toy();
        let free = train_logreg(&data, &LogRegConfig { l2: 0.0, ..Default::default() }, 0).unwrap();
        let penal = train_logreg(&data, &LogRegConfig { l2: 0.1, ..Default::default() }, 0).unwrap();
        assert!(penal.weight_norm() < free.weight_norm());
    }

    #[test]
    fn softmax_is_shift_invariant() {
        let p = softmax(&[1.0, 2.0, 3.0]);
        let q = softmax(&[101.0, 102.0, 103.0]);
        for (a, b) in p.iter().zip(&q) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
