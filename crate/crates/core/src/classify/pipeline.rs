use serde::{Deserialize, Serialize};

use super::dataset::LabeledDataset;
use super::logreg::{evaluate_accuracy, train_logreg, LogRegConfig, LogRegModel};
use crate::encode::{fit_tfidf, SparseVector, TfIdfModel, TokenStream};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// TF-IDF encoder and logistic regression trained together on token streams.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextClassifier {
    pub tfidf: TfIdfModel,
    pub model: LogRegModel,
}

impl TextClassifier {
    pub fn train(streams: &[TokenStream], labels: &[String], config: &LogRegConfig, seed: u64) -> Result<Self> {
        let tfidf = fit_tfidf(streams)?;
        let vectors = tfidf.transform_batch(streams, Execution::Sequential);
        let data = LabeledDataset::new(vectors, labels.to_vec())?;
        let model = train_logreg(&data, config, seed)?;
        Ok(TextClassifier { tfidf, model })
    }

    pub fn encode(&self, tokens: &[String]) -> SparseVector {
        self.tfidf.transform(tokens)
    }

    pub fn predict_proba(&self, tokens: &[String]) -> Vec<f64> {
        self.model.predict_proba(&self.encode(tokens))
    }

    pub fn predict(&self, tokens: &[String]) -> &str {
        self.model.predict(&self.encode(tokens))
    }

    /// Test-set accuracy. Labels unseen in training simply count as errors.
    pub fn accuracy(&self, streams: &[TokenStream], labels: &[String]) -> Result<f64> {
        if streams.is_empty() {
            return Err(Error::Domain("accuracy of an empty dataset is undefined".into()));
        }
        let mut classes = self.model.classes.clone();
        for l in labels {
            if !classes.contains(l) {
                classes.push(l.clone());
            }
        }
        let vectors = self.tfidf.transform_batch(streams, Execution::Sequential);
        let data = LabeledDataset::with_classes(vectors, labels.to_vec(), classes)?;
        evaluate_accuracy(&self.model, &data)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainTestAccuracy {
    pub train_instances: usize,
    pub test_instances: usize,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub iterations: usize,
}

/// Train on one side, score both.
pub fn train_and_evaluate(
    train: (&[TokenStream], &[String]),
    test: (&[TokenStream], &[String]),
    config: &LogRegConfig,
    seed: u64,
) -> Result<(TextClassifier, TrainTestAccuracy)> {
    let clf = TextClassifier::train(train.0, train.1, config, seed)?;
    let report = TrainTestAccuracy {
        train_instances: train.0.len(),
        test_instances: test.0.len(),
        train_accuracy: clf.accuracy(train.0, train.1)?,
        test_accuracy: clf.accuracy(test.0, test.1)?,
        iterations: clf.model.metadata.iterations,
    };
    Ok((clf, report))
}
