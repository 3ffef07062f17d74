use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Label counts; `p_i = count_i / total`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CountDistribution(BTreeMap<String, u64>);

impl CountDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, label: impl Into<String>, count: u64) {
        *self.0.entry(label.into()).or_default() += count;
    }

    pub fn increment(&mut self, label: &str) {
        match self.0.get_mut(label) {
            Some(c) => *c += 1,
            None => {
                self.0.insert(label.to_string(), 1);
            }
        }
    }

    pub fn get(&self, label: &str) -> u64 {
        self.0.get(label).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nonzero_labels(&self) -> usize {
        self.0.values().filter(|&&c| c > 0).count()
    }

    /// Labels with counts, in lexicographic label order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Labels by descending count, ties lexicographic.
    pub fn ranked(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        v
    }

    pub fn merge(&mut self, other: &CountDistribution) {
        for (k, v) in other.iter() {
            self.add(k, v);
        }
    }

    /// Normalized frequencies in label order.
    pub fn probabilities(&self) -> Result<Vec<(&str, f64)>> {
        let total = self.checked_total()?;
        Ok(self.iter().map(|(k, c)| (k, c as f64 / total as f64)).collect())
    }

    fn checked_total(&self) -> Result<u64> {
        match self.total() {
            0 => Err(Error::Domain("distribution has zero total count".into())),
            t => Ok(t),
        }
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for CountDistribution {
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        let mut d = CountDistribution::new();
        for (k, v) in iter {
            d.add(k, v);
        }
        d
    }
}

/// Shannon entropy in bits, `-Σ p_i log2 p_i`, with `0 · log 0 = 0`.
pub fn shannon_entropy(dist: &CountDistribution) -> Result<f64> {
    let total = dist.checked_total()? as f64;
    let mut nonzero = dist.iter().map(|(_, c)| c).filter(|&c| c > 0);
    let first = nonzero.next().unwrap_or(0);
    let mut labels = 1usize;
    if nonzero.all(|c| {
        labels += 1;
        c == first
    }) {
        // uniform over the nonzero labels
        return Ok((labels as f64).log2());
    }
    let h = dist
        .iter()
        .filter(|&(_, c)| c > 0)
        .map(|(_, c)| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>();
    Ok(h.max(0.0))
}

/// Entropy of a distribution of non-negative real weights.
pub fn weighted_entropy(weights: &[f64]) -> Result<f64> {
    let total: f64 = weights.iter().filter(|w| **w > 0.0).sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Domain("weights have no positive mass".into()));
    }
    let nonzero = weights.iter().filter(|w| **w > 0.0).count();
    if nonzero == 1 {
        return Ok(0.0);
    }
    Ok(weights
        .iter()
        .filter(|w| **w > 0.0)
        .map(|w| {
            let p = w / total;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0))
}

/// `p_max - p_second`; the second probability is 0 for a single label.
pub fn margin_uncertainty(dist: &CountDistribution) -> Result<f64> {
    let total = dist.checked_total()?;
    let mut first = 0u64;
    let mut second = 0u64;
    for (_, c) in dist.iter() {
        if c > first {
            second = first;
            first = c;
        } else if c > second {
            second = c;
        }
    }
    Ok((first - second) as f64 / total as f64)
}
