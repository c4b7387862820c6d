use super::domain::Domain;
use super::labels::LabelSet;
use super::patch::{InterfacePatch, PatchDescriptor, Transformed};
use crate::error::{Error, Result};
use crate::geometry::{Isometry, Point};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Total map from points to phase indices.
pub trait Classifier<const D: usize>: Send + Sync {
    fn phase(&self, x: &Point<D>) -> usize;
}

impl<const D: usize, F> Classifier<D> for F
where
    F: Fn(&Point<D>) -> usize + Send + Sync,
{
    fn phase(&self, x: &Point<D>) -> usize {
        self(x)
    }
}

/// Piecewise-constant partition given by a classifier and the C1 patches
/// making up its jump set.
#[derive(Clone)]
pub struct AnalyticPartition<const D: usize> {
    labels: LabelSet,
    classifier: Arc<dyn Classifier<D>>,
    patches: Vec<InterfacePatch<D>>,
    domain: Option<Domain>,
    bounds: (Point<D>, Point<D>),
}

impl<const D: usize> fmt::Debug for AnalyticPartition<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticPartition")
            .field("labels", &self.labels)
            .field("patches", &self.patches)
            .field("domain", &self.domain)
            .field("bounds", &self.bounds)
            .finish()
    }
}

/// Serializable summary of an analytic partition (the classifier itself is code).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub labels: LabelSet,
    pub patches: Vec<PatchSummary>,
    pub domain: Option<Domain>,
    pub bounds: [Vec<f64>; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchSummary {
    pub geometry: PatchDescriptor,
    pub plus: usize,
    pub minus: usize,
}

impl<const D: usize> AnalyticPartition<D> {
    pub fn new(
        labels: LabelSet,
        classifier: Arc<dyn Classifier<D>>,
        patches: Vec<InterfacePatch<D>>,
        bounds: (Point<D>, Point<D>),
    ) -> Result<Self> {
        for (k, p) in patches.iter().enumerate() {
            if p.plus >= labels.len() || p.minus >= labels.len() {
                return Err(Error::Invalid(format!("patch {k} refers to a missing label")));
            }
            if p.plus == p.minus {
                return Err(Error::Invalid(format!("patch {k} has equal labels on both sides")));
            }
        }
        Ok(Self { labels, classifier, patches, domain: None, bounds })
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        assert_eq!(D, 2, "domains are planar");
        self.domain = Some(domain);
        self
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn patches(&self) -> &[InterfacePatch<D>] {
        &self.patches
    }

    pub fn domain(&self) -> Option<&Domain> {
        self.domain.as_ref()
    }

    pub fn bounds(&self) -> (Point<D>, Point<D>) {
        self.bounds
    }

    pub fn classifier(&self) -> Arc<dyn Classifier<D>> {
        self.classifier.clone()
    }

    pub fn phase(&self, x: &Point<D>) -> usize {
        self.classifier.phase(x)
    }

    /// `|Du|` of the whole jump set: Σ |z⁺ − z⁻| · H^{D-1}(patch).
    pub fn jump_mass(&self) -> f64 {
        self.patches.iter().map(|p| self.labels.jump(p.plus, p.minus) * p.geometry.measure()).sum()
    }

    /// Distance to the union of all patches.
    pub fn interface_distance(&self, x: &Point<D>) -> f64 {
        self.patches.iter().map(|p| p.geometry.distance(x)).fold(f64::INFINITY, f64::min)
    }

    pub fn summary(&self) -> PartitionSummary {
        PartitionSummary {
            labels: self.labels.clone(),
            patches: self
                .patches
                .iter()
                .map(|p| PatchSummary { geometry: p.geometry.descriptor(), plus: p.plus, minus: p.minus })
                .collect(),
            domain: self.domain.clone(),
            bounds: [self.bounds.0.iter().copied().collect(), self.bounds.1.iter().copied().collect()],
        }
    }

    /// The partition moved by an isometry.
    pub fn transformed(&self, iso: &Isometry<D>) -> Self {
        let inner = self.classifier.clone();
        let inv = iso.clone();
        let classifier: Arc<dyn Classifier<D>> = Arc::new(move |x: &Point<D>| inner.phase(&inv.apply_inverse(x)));
        let patches = self
            .patches
            .iter()
            .map(|p| InterfacePatch {
                geometry: Arc::new(Transformed { inner: p.geometry.clone(), iso: iso.clone() }),
                plus: p.plus,
                minus: p.minus,
            })
            .collect();
        let corners: Vec<Point<D>> = (0..1usize << D)
            .map(|bits| {
                let c = Point::<D>::from_fn(|i, _| if bits >> i & 1 == 1 { self.bounds.1[i] } else { self.bounds.0[i] });
                iso.apply(&c)
            })
            .collect();
        let lo = corners.iter().fold(corners[0], |a, c| a.inf(c));
        let hi = corners.iter().fold(corners[0], |a, c| a.sup(c));
        Self { labels: self.labels.clone(), classifier, patches, domain: None, bounds: (lo, hi) }
    }

    /// Sampled checks of the patch invariants: unit normals, labels on the
    /// two sides of each patch, and pairwise disjointness away from endpoints.
    pub fn validate(&self) -> Result<()> {
        let h = 1e-6;
        let params = self.probe_params();
        for (k, p) in self.patches.iter().enumerate() {
            for &t in &params {
                let x = p.geometry.point(t);
                let n = p.geometry.normal(t);
                if (n.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::Invalid(format!("patch {k}: normal not unit at {t:?}")));
                }
                let (up, down) = (self.phase(&(x + n * h)), self.phase(&(x - n * h)));
                if up != p.plus || down != p.minus {
                    return Err(Error::Invalid(format!(
                        "patch {k}: sides read ({up}, {down}), expected ({}, {}) at {t:?}",
                        p.plus, p.minus
                    )));
                }
            }
        }
        for (i, p) in self.patches.iter().enumerate() {
            for (j, q) in self.patches.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &t in &params {
                    let d = q.geometry.distance(&p.geometry.point(t));
                    if d <= 1e-9 {
                        return Err(Error::Invalid(format!("patches {i} and {j} meet away from endpoints")));
                    }
                }
            }
        }
        Ok(())
    }

    fn probe_params(&self) -> Vec<[f64; 2]> {
        let n = 17;
        let ts: Vec<f64> = (0..n).map(|i| 0.05 + 0.9 * i as f64 / (n - 1) as f64).collect();
        if D == 2 {
            ts.iter().map(|&t| [t, 0.0]).collect()
        } else {
            ts.iter().step_by(4).flat_map(|&s| ts.iter().step_by(4).map(move |&t| [s, t])).collect()
        }
    }
}
