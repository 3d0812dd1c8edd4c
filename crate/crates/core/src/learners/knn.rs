//! k-nearest-neighbour classifier over Euclidean distance.

use crate::error::Result;
use crate::learners::{argmax, Prediction};

#[derive(Debug, Clone)]
pub(crate) struct KnnModel {
    k: usize,
    rows: Vec<Vec<f64>>,
    labels: Vec<usize>,
    n_classes: usize,
}

pub(crate) fn train_knn(
    config: &super::KnnConfig,
    data: &crate::data::LabeledDataset,
) -> Result<KnnModel> {
    let rows: Vec<Vec<f64>> = (0..data.n_samples())
        .map(|r| data.dataset.row(r))
        .collect::<Result<_>>()?;
    Ok(KnnModel {
        k: config.k.min(rows.len()),
        rows,
        labels: data.labels.clone(),
        n_classes: data.n_classes(),
    })
}

impl KnnModel {
    pub fn predict(&self, features: &[f64]) -> Result<Prediction> {
        // distance ties resolve by training index, vote ties by lowest class
        let mut order: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let sq: f64 = row
                    .iter()
                    .zip(features)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (sq, i)
            })
            .collect();
        order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

        let mut votes = vec![0.0f64; self.n_classes];
        for &(_, i) in order.iter().take(self.k) {
            votes[self.labels[i]] += 1.0;
        }
        let class = argmax(&votes);
        let scores = votes.iter().map(|v| v / self.k as f64).collect();
        Ok(Prediction { class, scores })
    }

    pub fn dump(&self) -> String {
        format!("k {}\nstored {} samples\n", self.k, self.rows.len())
    }
}
