//! Serde adapter encoding a complex matrix as row-major nested arrays of
//! `[re, im]` pairs.

use nalgebra::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{lit, to_f64, CMatrix, Real};

pub fn to_rows<T: Real>(m: &CMatrix<T>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [to_f64(m[(i, j)].re), to_f64(m[(i, j)].im)])
                .collect()
        })
        .collect()
}

/// Builds a matrix from nested rows; `cols` fixes the width of an empty
/// row list.
pub fn from_rows<T: Real>(rows: &[Vec<[f64; 2]>], cols: Option<usize>) -> Result<CMatrix<T>, String> {
    let width = rows.first().map(|r| r.len()).or(cols).unwrap_or(0);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(format!("row {i} has {} entries, expected {width}", r.len()));
        }
    }
    Ok(CMatrix::from_fn(rows.len(), width, |i, j| {
        let [re, im] = rows[i][j];
        Complex::new(lit(re), lit(im))
    }))
}

pub fn serialize<T: Real, S: Serializer>(m: &CMatrix<T>, s: S) -> Result<S::Ok, S::Error> {
    to_rows(m).serialize(s)
}

pub fn deserialize<'de, T: Real, D: Deserializer<'de>>(d: D) -> Result<CMatrix<T>, D::Error> {
    let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
    from_rows(&rows, None).map_err(D::Error::custom)
}

/// Serde adapter for a list of complex numbers as `[re, im]` pairs.
pub mod complex_list {
    use nalgebra::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex<f64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex<f64>>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex::new(re, im)).collect())
    }
}
