use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Radial cutoff: 1 on `[0, (1−ε) r]`, a cubic smoothstep down to 0 on
/// `[(1−ε) r, r]`, and 0 beyond.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub eps: f64,
    pub radius: f64,
}

impl Cutoff {
    pub fn new(eps: f64, radius: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Invalid(format!("eps {eps} outside (0, 1)")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Invalid(format!("cutoff radius {radius}")));
        }
        Ok(Self { eps, radius })
    }

    pub fn inner_radius(&self) -> f64 {
        (1.0 - self.eps) * self.radius
    }

    fn width(&self) -> f64 {
        self.eps * self.radius
    }

    pub fn value(&self, s: f64) -> f64 {
        let a = self.inner_radius();
        if s <= a {
            1.0
        } else if s >= self.radius {
            0.0
        } else {
            let t = (s - a) / self.width();
            1.0 - t * t * (3.0 - 2.0 * t)
        }
    }

    /// `dψ/ds`.
    pub fn derivative(&self, s: f64) -> f64 {
        let a = self.inner_radius();
        if s <= a || s >= self.radius {
            0.0
        } else {
            let t = (s - a) / self.width();
            -6.0 * t * (1.0 - t) / self.width()
        }
    }

    /// `sup |ψ'| = 3 / (2 ε r)`.
    pub fn max_slope(&self) -> f64 {
        1.5 / self.width()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_values() {
        let c = Cutoff::new(0.5, 1.0).unwrap();
        assert_eq!(c.value(0.5), 1.0);
        assert_eq!(c.value(1.0), 0.0);
        assert!((c.value(0.75) - 0.5).abs() < 1e-15);
        assert_eq!(c.derivative(0.5), 0.0);
        assert_eq!(c.derivative(1.0), 0.0);
        assert!((c.max_slope() - 3.0).abs() < 1e-15);
        assert!(c.max_slope() <= 2.0 / (0.5 * 1.0));
        let peak = (0..=1000).map(|i| c.derivative(0.5 + 0.5 * i as f64 / 1000.0).abs()).fold(0.0, f64::max);
        assert!((peak - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Cutoff::new(1.0, 1.0).is_err());
        assert!(Cutoff::new(0.1, 0.0).is_err());
    }
}
