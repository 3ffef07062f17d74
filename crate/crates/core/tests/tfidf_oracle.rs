use mathex::encode::{fit_tfidf, SparseVector, TokenStream};
use mathex::Execution;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense recomputation: count matrix, smoothed idf, raw tf, L2.
fn brute_force(train: &[Vec<String>], doc: &[String]) -> Vec<(String, f64)> {
    let mut vocab: Vec<String> = Vec::new();
    for d in train {
        for t in d {
            if !vocab.contains(t) {
                vocab.push(t.clone());
            }
        }
    }
    let n = train.len() as f64;
    let raw: Vec<f64> = vocab
        .iter()
        .map(|term| {
            let df = train.iter().filter(|d| d.contains(term)).count() as f64;
            let idf = ((1.0 + n) / (1.0 + df)).ln() + 1.0;
            doc.iter().filter(|t| *t == term).count() as f64 * idf
        })
        .collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    vocab
        .into_iter()
        .zip(raw)
        .filter(|(_, x)| *x != 0.0)
        .map(|(t, x)| (t, x / norm))
        .collect()
}

fn random_doc(rng: &mut ChaCha8Rng, vocab: usize) -> Vec<String> {
    let len = rng.gen_range(0..25);
    (0..len).map(|_| format!("w{}", rng.gen_range(0..vocab))).collect()
}

#[test]
fn transform_matches_brute_force_on_random_corpora() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let vocab = rng.gen_range(1..40);
        let mut train: Vec<Vec<String>> = (0..rng.gen_range(1..15)).map(|_| random_doc(&mut rng, vocab)).collect();
        if train.iter().all(|d| d.is_empty()) {
            train[0].push("w0".into());
        }
        let streams: Vec<TokenStream> = train.iter().map(|d| TokenStream::new("d", d.clone())).collect();
        let model = fit_tfidf(&streams).unwrap();
        // held-out documents may contain unseen words
        let probes: Vec<Vec<String>> = train.iter().cloned().chain((0..3).map(|_| random_doc(&mut rng, vocab + 5))).collect();
        for doc in &probes {
            let v = model.transform(doc);
            let expected = brute_force(&train, doc);
            assert_eq!(v.nnz(), expected.len());
            for (term, x) in expected {
                let got = v.get(model.index_of(&term).unwrap());
                assert!((got - x).abs() <= 1e-9, "{term}: {got} vs {x}");
            }
        }
    }
}

#[test]
fn batch_transform_is_execution_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let streams: Vec<TokenStream> = (0..300).map(|i| TokenStream::new(format!("d{i}"), random_doc(&mut rng, 60))).collect();
    let model = fit_tfidf(&streams).unwrap();
    let a = model.transform_batch(&streams, Execution::Sequential);
    let b = model.transform_batch(&streams, Execution::Parallel);
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn transformed_vectors_are_unit_or_zero(docs in prop::collection::vec(prop::collection::vec("[a-e]{1,2}", 0..12), 1..8)) {
        prop_assume!(docs.iter().any(|d| !d.is_empty()));
        let streams: Vec<TokenStream> = docs.iter().map(|d| TokenStream::new("d", d.clone())).collect();
        let model = fit_tfidf(&streams).unwrap();
        for d in &docs {
            let v: SparseVector = model.transform(d);
            prop_assert!(v.values().iter().all(|x| x.is_finite() && *x > 0.0));
            if d.is_empty() {
                prop_assert!(v.is_zero());
            } else {
                prop_assert!((v.norm() - 1.0).abs() <= 1e-9);
            }
        }
        prop_assert!(model.idf_weights().iter().all(|&w| w >= 1.0));
    }
}
