use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Ordered finite set of distinct label vectors; the order breaks ties.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelSet {
    labels: Vec<Vec<f64>>,
}

impl LabelSet {
    pub fn new(labels: Vec<Vec<f64>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Invalid("empty label set".into()));
        }
        let dim = labels[0].len();
        if labels.iter().any(|z| z.len() != dim) {
            return Err(Error::Invalid("labels of different lengths".into()));
        }
        for i in 0..labels.len() {
            for j in 0..i {
                if labels[i] == labels[j] {
                    return Err(Error::Invalid(format!("labels {j} and {i} coincide")));
                }
            }
        }
        Ok(Self { labels })
    }

    /// The standard basis `e_1, …, e_n` of `R^n`.
    pub fn unit_vectors(n: usize) -> Self {
        Self { labels: (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect() }
    }

    /// Scalar labels.
    pub fn scalars(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| vec![v]).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Length of each label vector.
    pub fn dim(&self) -> usize {
        self.labels[0].len()
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.labels[i]
    }

    /// `z_i − z_j`.
    pub fn difference(&self, i: usize, j: usize) -> Vec<f64> {
        self.labels[i].iter().zip(&self.labels[j]).map(|(a, b)| a - b).collect()
    }

    /// `|z_i − z_j|`.
    pub fn jump(&self, i: usize, j: usize) -> f64 {
        self.difference(i, j).iter().map(|d| d * d).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_jumps() {
        let z = LabelSet::unit_vectors(3);
        assert_eq!(z.len(), 3);
        assert!((z.jump(0, 2) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(z.jump(1, 1), 0.0);
        assert!(LabelSet::new(vec![vec![1.0], vec![1.0]]).is_err());
        assert!(LabelSet::scalars(&[1.0, 2.0, 3.0]).unwrap().jump(0, 2) == 2.0);
    }
}
