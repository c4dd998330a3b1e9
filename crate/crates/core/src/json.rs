//! JSON encodings shared by every module: complex numbers are `[re, im]`
//! and matrices are row-major nested arrays of those.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

pub type CJson = [f64; 2];

pub fn to_cjson(z: Complex64) -> CJson {
    // -0.0 and 0.0 print differently; keep output canonical
    [z.re + 0.0, z.im + 0.0]
}

pub fn from_cjson(v: CJson) -> Complex64 {
    Complex64::new(v[0], v[1])
}

pub fn matrix_to_json(m: &CMatrix) -> Vec<Vec<CJson>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| to_cjson(m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<CJson>], what: &str) -> Result<CMatrix> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::InvalidInput(format!("{what}: ragged rows")));
    }
    Ok(CMatrix::from_fn(nr, nc, |i, j| from_cjson(rows[i][j])))
}

pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_cjson(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        CJson::deserialize(d).map(from_cjson)
    }
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable value")
}
