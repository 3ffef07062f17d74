//! Logistic regression over TF-IDF features and the label prediction experiments.

pub mod dataset;
pub mod experiment;
pub mod logreg;
pub mod pipeline;
pub mod split;

pub use dataset::{document_labels, expand_multilabel, Granularity, LabelAxis, LabelMode, LabeledDataset};
pub use experiment::{predict_categories, predict_label_map, CategoryReport, PredictionDirection};
pub use logreg::{
    evaluate_accuracy, loss_and_gradient, predict_proba, softmax, train_logreg, LogRegConfig, LogRegModel, LossGradient,
    TrainingMetadata,
};
pub use pipeline::{train_and_evaluate, TextClassifier, TrainTestAccuracy};
pub use split::{stratified_split, Split};
