//! The Galilei group: spacetime transformations `(t, r) ↦ (t + a, O·r + u·t + b)`
//! with time shift `a`, rotation `O`, boost velocity `u`, and translation `b`.

use crate::rng::Lcg;
use crate::{Error, Result};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub const IDENTITY_ROTATION: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn mat_vec(a: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = (0..3).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

fn transpose(a: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

fn vec_add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn vec_scale(s: f64, a: &Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

/// One Galilei transformation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GalileiElement {
    /// Time shift `a`.
    pub time_shift: f64,
    /// Spatial translation `b`.
    pub translation: Vec3,
    /// Rotation matrix `O` (orthogonal).
    pub rotation: Mat3,
    /// Boost velocity `u`.
    pub boost: Vec3,
}

impl GalileiElement {
    pub fn identity() -> Self {
        GalileiElement {
            time_shift: 0.0,
            translation: [0.0; 3],
            rotation: IDENTITY_ROTATION,
            boost: [0.0; 3],
        }
    }

    /// Action on a spacetime event: `(t, r) ↦ (t + a, O·r + u·t + b)`.
    pub fn act(&self, t: f64, r: &Vec3) -> (f64, Vec3) {
        let rr = vec_add(
            &vec_add(&mat_vec(&self.rotation, r), &vec_scale(t, &self.boost)),
            &self.translation,
        );
        (t + self.time_shift, rr)
    }

    /// Group product `self ∘ first` (apply `first`, then `self`):
    /// `a = a₁ + a₂`, `O = O₂O₁`, `u = O₂u₁ + u₂`, `b = O₂b₁ + u₂a₁ + b₂`.
    pub fn compose(&self, first: &GalileiElement) -> GalileiElement {
        GalileiElement {
            time_shift: first.time_shift + self.time_shift,
            rotation: mat_mul(&self.rotation, &first.rotation),
            boost: vec_add(&mat_vec(&self.rotation, &first.boost), &self.boost),
            translation: vec_add(
                &vec_add(
                    &mat_vec(&self.rotation, &first.translation),
                    &vec_scale(first.time_shift, &self.boost),
                ),
                &self.translation,
            ),
        }
    }

    /// Group inverse: `a⁻¹ = −a`, `O⁻¹ = Oᵀ`, `u⁻¹ = −Oᵀu`,
    /// `b⁻¹ = −Oᵀ(b − u·a)`.
    pub fn inverse(&self) -> GalileiElement {
        let ot = transpose(&self.rotation);
        let b_minus_ua = vec_add(&self.translation, &vec_scale(-self.time_shift, &self.boost));
        GalileiElement {
            time_shift: -self.time_shift,
            rotation: ot,
            boost: vec_scale(-1.0, &mat_vec(&ot, &self.boost)),
            translation: vec_scale(-1.0, &mat_vec(&ot, &b_minus_ua)),
        }
    }

    /// Maximum absolute entry of `OᵀO − I`.
    pub fn orthogonality_defect(&self) -> f64 {
        let g = mat_mul(&transpose(&self.rotation), &self.rotation);
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[i][j] - target).abs());
            }
        }
        worst
    }

    /// Rotation about a unit axis by `angle` (right-handed), as an element
    /// with no translation/boost/time shift.
    pub fn rotation_about(axis: &Vec3, angle: f64) -> Result<GalileiElement> {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if n == 0.0 {
            return Err(Error::InvalidArgument("rotation axis must be nonzero".into()));
        }
        let k = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = angle.sin_cos();
        let mut o = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let kk = k[i] * k[j];
                let eye = if i == j { 1.0 } else { 0.0 };
                o[i][j] = c * eye + (1.0 - c) * kk;
            }
        }
        // + sin(angle) * cross-product matrix of k
        o[0][1] -= s * k[2];
        o[0][2] += s * k[1];
        o[1][0] += s * k[2];
        o[1][2] -= s * k[0];
        o[2][0] -= s * k[1];
        o[2][1] += s * k[0];
        Ok(GalileiElement {
            rotation: o,
            ..GalileiElement::identity()
        })
    }

    /// Random element from a deterministic stream: rotation about a random
    /// axis, with all parameters order-one.
    pub fn random(rng: &mut Lcg) -> GalileiElement {
        let axis = [
            rng.uniform(-1.0, 1.0),
            rng.uniform(-1.0, 1.0),
            rng.uniform(-1.0, 1.0),
        ];
        let axis = if axis == [0.0, 0.0, 0.0] { [1.0, 0.0, 0.0] } else { axis };
        let angle = rng.uniform(-3.0, 3.0);
        let mut g = GalileiElement::rotation_about(&axis, angle).unwrap();
        g.time_shift = rng.uniform(-1.5, 1.5);
        for i in 0..3 {
            g.translation[i] = rng.uniform(-2.0, 2.0);
            g.boost[i] = rng.uniform(-1.0, 1.0);
        }
        g
    }

    /// Serialize as `a;b1,b2,b3;o11,o12,o13,o21,…,o33;u1,u2,u3`.
    pub fn serialize(&self) -> String {
        let o = &self.rotation;
        format!(
            "{:.17e};{:.17e},{:.17e},{:.17e};{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e};{:.17e},{:.17e},{:.17e}",
            self.time_shift,
            self.translation[0], self.translation[1], self.translation[2],
            o[0][0], o[0][1], o[0][2],
            o[1][0], o[1][1], o[1][2],
            o[2][0], o[2][1], o[2][2],
            self.boost[0], self.boost[1], self.boost[2],
        )
    }

    pub fn parse(s: &str) -> Result<GalileiElement> {
        let fields: Vec<&str> = s.trim().split(';').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 `;`-separated fields, found {}",
                fields.len()
            )));
        }
        let nums = |field: &str, n: usize| -> Result<Vec<f64>> {
            let vals: Vec<f64> = field
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("bad number in `{field}`: {e}")))?;
            if vals.len() != n {
                return Err(Error::Parse(format!(
                    "expected {n} numbers in `{field}`, found {}",
                    vals.len()
                )));
            }
            Ok(vals)
        };
        let a = nums(fields[0], 1)?[0];
        let b = nums(fields[1], 3)?;
        let o = nums(fields[2], 9)?;
        let u = nums(fields[3], 3)?;
        Ok(GalileiElement {
            time_shift: a,
            translation: [b[0], b[1], b[2]],
            rotation: [
                [o[0], o[1], o[2]],
                [o[3], o[4], o[5]],
                [o[6], o[7], o[8]],
            ],
            boost: [u[0], u[1], u[2]],
        })
    }
}
