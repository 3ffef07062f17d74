use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::entropy::{margin_uncertainty, shannon_entropy, CountDistribution};
use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// arXiv category (rows) by MSC code (columns) document counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CooccurrenceMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    /// Documents lacking labels on one axis.
    pub skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// One distribution per arXiv category over MSC codes.
    Rows,
    /// One distribution per MSC code over arXiv categories.
    Columns,
}

impl CooccurrenceMatrix {
    pub fn from_cells(cells: &BTreeMap<(String, String), u64>, skipped: usize) -> Self {
        let rows: Vec<String> = cells.keys().map(|(r, _)| r.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        let cols: Vec<String> = cells.keys().map(|(_, c)| c.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        let mut counts = vec![vec![0; cols.len()]; rows.len()];
        for ((r, c), &n) in cells {
            let i = rows.binary_search(r).expect("row present");
            let j = cols.binary_search(c).expect("col present");
            counts[i][j] = n;
        }
        CooccurrenceMatrix { rows, cols, counts, skipped }
    }

    pub fn get(&self, row: &str, col: &str) -> u64 {
        match (self.rows.iter().position(|r| r == row), self.cols.iter().position(|c| c == col)) {
            (Some(i), Some(j)) => self.counts[i][j],
            _ => 0,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Per-label distributions along the given direction.
    pub fn distributions(&self, direction: Direction) -> Vec<(String, CountDistribution)> {
        match direction {
            Direction::Rows => self
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| (r.clone(), self.cols.iter().cloned().zip(self.counts[i].iter().copied()).collect()))
                .collect(),
            Direction::Columns => self
                .cols
                .iter()
                .enumerate()
                .map(|(j, c)| (c.clone(), self.rows.iter().cloned().zip(self.counts.iter().map(|row| row[j])).collect()))
                .collect(),
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("arxiv");
        for c in &self.cols {
            out.push('\t');
            out.push_str(c);
        }
        out.push('\n');
        for (r, row) in self.rows.iter().zip(&self.counts) {
            out.push_str(r);
            for n in row {
                out.push('\t');
                out.push_str(&n.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Each document adds 1 to every (category, code) pair it carries.
pub fn build_cooccurrence(corpus: &Corpus) -> Result<CooccurrenceMatrix> {
    if corpus.is_empty() {
        return Err(Error::Validation("cannot build a co-occurrence matrix from an empty corpus".into()));
    }
    let mut cells: BTreeMap<(String, String), u64> = BTreeMap::new();
    let mut skipped = 0;
    for doc in &corpus.documents {
        if doc.arxiv.is_empty() || doc.msc.is_empty() {
            skipped += 1;
            continue;
        }
        let arxiv: BTreeSet<&String> = doc.arxiv.iter().collect();
        let msc: BTreeSet<&String> = doc.msc.iter().collect();
        for a in &arxiv {
            for m in &msc {
                *cells.entry(((*a).clone(), (*m).clone())).or_default() += 1;
            }
        }
    }
    if skipped > 0 {
        log::warn!("{skipped} documents lack arXiv or MSC labels and were skipped");
    }
    Ok(CooccurrenceMatrix::from_cells(&cells, skipped))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelUncertainty {
    pub label: String,
    pub total: u64,
    pub entropy: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub direction: Direction,
    pub labels: Vec<LabelUncertainty>,
    pub entropy_mean: f64,
    pub entropy_max: f64,
    pub margin_mean: f64,
    pub margin_max: f64,
}

impl UncertaintyReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("label\ttotal\tentropy\tmargin\n");
        for l in &self.labels {
            out.push_str(&format!("{}\t{}\t{:.6}\t{:.6}\n", l.label, l.total, l.entropy, l.margin));
        }
        out.push_str(&format!("#mean\t\t{:.6}\t{:.6}\n", self.entropy_mean, self.margin_mean));
        out.push_str(&format!("#max\t\t{:.6}\t{:.6}\n", self.entropy_max, self.margin_max));
        out
    }
}

pub fn uncertainty_report(matrix: &CooccurrenceMatrix, direction: Direction) -> Result<UncertaintyReport> {
    let mut labels = Vec::new();
    for (label, dist) in matrix.distributions(direction) {
        if dist.total() == 0 {
            continue;
        }
        labels.push(LabelUncertainty {
            total: dist.total(),
            entropy: shannon_entropy(&dist)?,
            margin: margin_uncertainty(&dist)?,
            label,
        });
    }
    if labels.is_empty() {
        return Err(Error::Domain("co-occurrence matrix has no nonzero cells".into()));
    }
    let n = labels.len() as f64;
    let max = |f: fn(&LabelUncertainty) -> f64| labels.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    Ok(UncertaintyReport {
        direction,
        entropy_mean: labels.iter().map(|l| l.entropy).sum::<f64>() / n,
        entropy_max: max(|l| l.entropy),
        margin_mean: labels.iter().map(|l| l.margin).sum::<f64>() / n,
        margin_max: max(|l| l.margin),
        labels,
    })
}

/// Most frequent target per source label; ties go to the lexicographically
/// smaller label. Zero-total labels are omitted.
pub fn argmax_predict(matrix: &CooccurrenceMatrix, direction: Direction) -> BTreeMap<String, String> {
    matrix
        .distributions(direction)
        .into_iter()
        .filter_map(|(label, dist)| {
            let (top, count) = dist.ranked().into_iter().next()?;
            (count > 0).then(|| (label, top.to_string()))
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionComparison {
    pub matches: usize,
    pub mismatches: usize,
    /// Source labels present in only one of the two prediction maps.
    pub unpaired: usize,
}

/// Count agreements between two source→target prediction maps.
pub fn compare_predictions(a: &BTreeMap<String, String>, b: &BTreeMap<String, String>) -> PredictionComparison {
    let mut cmp = PredictionComparison::default();
    for (label, target) in a {
        match b.get(label) {
            Some(t) if t == target => cmp.matches += 1,
            Some(_) => cmp.mismatches += 1,
            None => cmp.unpaired += 1,
        }
    }
    cmp.unpaired += b.keys().filter(|k| !a.contains_key(*k)).count();
    cmp
}
