use super::{Matrix, Point, Vector, ORTHO_TOL};
use crate::error::{Error, Result};
use nalgebra::Rotation3;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Orientation-preserving affine isometry `x -> Q x + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry<const D: usize> {
    pub rotation: Matrix<D>,
    pub translation: Vector<D>,
}

impl<const D: usize> Isometry<D> {
    pub fn identity() -> Self {
        Self { rotation: Matrix::<D>::identity(), translation: Vector::<D>::zeros() }
    }

    /// Checked constructor: `rotation` must be orthogonal with determinant +1.
    pub fn new(rotation: Matrix<D>, translation: Vector<D>) -> Result<Self> {
        let err = (rotation.transpose() * rotation - Matrix::<D>::identity()).abs().max();
        if err > ORTHO_TOL || super::det(&rotation) < 0.0 {
            return Err(Error::Invalid(format!("rotation not special orthogonal (err {err:e})")));
        }
        Ok(Self { rotation, translation })
    }

    /// The isometry sending `origin` to 0 and the unit vector `normal` to `e_D`.
    pub fn aligning(normal: &Vector<D>, origin: &Point<D>) -> Self {
        let rotation = rotation_to_last_axis(normal);
        let translation = -(rotation * origin);
        Self { rotation, translation }
    }

    pub fn apply(&self, x: &Point<D>) -> Point<D> {
        self.rotation * x + self.translation
    }

    pub fn apply_inverse(&self, y: &Point<D>) -> Point<D> {
        self.rotation.tr_mul(&(y - self.translation))
    }

    pub fn apply_vector(&self, v: &Vector<D>) -> Vector<D> {
        self.rotation * v
    }

    pub fn apply_vector_inverse(&self, v: &Vector<D>) -> Vector<D> {
        self.rotation.tr_mul(v)
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self { translation: -(rt * self.translation), rotation: rt }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    /// Rotation angle(s): the angle in 2D, the axis-angle vector in 3D.
    pub fn angles(&self) -> Vec<f64> {
        let r = &self.rotation;
        match D {
            2 => vec![r[(1, 0)].atan2(r[(0, 0)])],
            3 => {
                let m = nalgebra::Matrix3::from_fn(|i, j| r[(i, j)]);
                let rot = Rotation3::from_matrix_unchecked(m);
                rot.scaled_axis().iter().copied().collect()
            }
            _ => Vec::new(),
        }
    }

    /// A uniformly random rotation with a translation drawn from `[-scale, scale]^D`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Self {
        let rotation = match D {
            2 => {
                let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                Matrix::<D>::from_fn(|i, j| match (i, j) {
                    (0, 0) | (1, 1) => a.cos(),
                    (1, 0) => a.sin(),
                    _ => -a.sin(),
                })
            }
            3 => {
                let q = nalgebra::UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(
                    gauss(rng),
                    gauss(rng),
                    gauss(rng),
                    gauss(rng),
                ));
                let m = q.to_rotation_matrix();
                Matrix::<D>::from_fn(|i, j| m[(i, j)])
            }
            _ => Matrix::<D>::identity(),
        };
        let translation = Vector::<D>::from_fn(|_, _| rng.gen_range(-scale..=scale));
        Self { rotation, translation }
    }
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

/// A rotation `Q` with `Q n = e_D` and `det Q = 1`.
pub fn rotation_to_last_axis<const D: usize>(n: &Vector<D>) -> Matrix<D> {
    let n = n.normalize();
    if D == 2 {
        // Rows: tangent (n_y, -n_x), then n.
        return Matrix::<D>::from_fn(|i, j| match (i, j) {
            (0, 0) => n[1],
            (0, 1) => -n[0],
            (1, 0) => n[0],
            _ => n[1],
        });
    }
    let mut e = Vector::<D>::zeros();
    e[D - 1] = 1.0;
    let w = n - e;
    let ww = w.norm_squared();
    if ww < 1e-300 {
        return Matrix::<D>::identity();
    }
    // Householder reflection n -> e_D followed by a flip of the first axis.
    let h = Matrix::<D>::identity() - w * w.transpose() * (2.0 / ww);
    let mut flip = Matrix::<D>::identity();
    flip[(0, 0)] = -1.0;
    flip * h
}
