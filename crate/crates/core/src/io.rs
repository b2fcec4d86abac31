//! JSON encodings. Complex numbers are always `[re, im]` pairs; matrices are
//! row-major arrays of rows.

use std::convert::TryFrom;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};

pub mod pair {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub mod pairs {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

pub mod nested_pairs {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Complex64>], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Complex64>>, D::Error> {
        let raw = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect())
    }
}

pub mod matrix {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect()
    }

    pub fn from_rows(rows: &[Vec<[f64; 2]>], ncols_if_empty: usize) -> std::result::Result<DMatrix<Complex64>, String> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(ncols_if_empty, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err("ragged matrix rows".into());
        }
        Ok(DMatrix::from_fn(nrows, ncols, |i, j| {
            let [re, im] = rows[i][j];
            Complex64::new(re, im)
        }))
    }

    pub fn serialize<S: Serializer>(m: &DMatrix<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<DMatrix<Complex64>, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        from_rows(&rows, 0).map_err(D::Error::custom)
    }
}

/// `{"zeros": [[re, im], ...], "u": [re, im]}`; `u` defaults to 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlaschkeJson {
    pub zeros: Vec<[f64; 2]>,
    #[serde(default = "unit_pair")]
    pub u: [f64; 2],
}

fn unit_pair() -> [f64; 2] {
    [1.0, 0.0]
}

impl TryFrom<BlaschkeJson> for BlaschkeProduct {
    type Error = Error;

    fn try_from(j: BlaschkeJson) -> Result<Self> {
        BlaschkeProduct::new(
            j.zeros.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
            Complex64::new(j.u[0], j.u[1]),
        )
    }
}

impl From<BlaschkeProduct> for BlaschkeJson {
    fn from(b: BlaschkeProduct) -> Self {
        let u = b.unimodular_constant();
        BlaschkeJson {
            zeros: b.zeros().iter().map(|z| [z.re, z.im]).collect(),
            u: [u.re, u.im],
        }
    }
}

/// A point on the unit circle given either as `[re, im]` or `{"angle": radians}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CirclePoint {
    Pair([f64; 2]),
    Angle { angle: f64 },
}

/// Points given as pairs may deviate from the circle by at most this much before
/// being renormalized.
pub const CIRCLE_INPUT_TOL: f64 = 1e-9;

impl CirclePoint {
    pub fn resolve(&self, index: usize) -> Result<Complex64> {
        let z = match *self {
            CirclePoint::Angle { angle } => {
                if !angle.is_finite() {
                    return Err(Error::NonFinite("angle"));
                }
                Complex64::new(angle.cos(), angle.sin())
            }
            CirclePoint::Pair([re, im]) => Complex64::new(re, im),
        };
        crate::blaschke::check_finite(z, "point")?;
        let modulus = z.norm();
        if (modulus - 1.0).abs() > CIRCLE_INPUT_TOL {
            return Err(Error::PointOffCircle { index, modulus });
        }
        Ok(z / modulus)
    }
}
