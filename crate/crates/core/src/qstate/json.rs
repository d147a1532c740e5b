//! JSON wire format for states:
//! `{"dims":[...], "kind":"pure", "vector":[[re,im],...]}` or
//! `{"dims":[...], "kind":"density", "matrix":[[[re,im],...],...]}`,
//! matrix rows listed in row-major order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{DimProfile, QuantumState};

#[derive(Serialize, Deserialize)]
struct Wire {
    dims: Vec<usize>,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

impl QuantumState {
    pub fn to_json(&self) -> String {
        let wire = match self.vector() {
            Some(v) => Wire {
                dims: self.profile().dims().to_vec(),
                kind: "pure".into(),
                vector: Some(v.iter().map(|z| [z.re, z.im]).collect()),
                matrix: None,
            },
            None => Wire {
                dims: self.profile().dims().to_vec(),
                kind: "density".into(),
                vector: None,
                matrix: Some(
                    (0..self.dim())
                        .map(|i| {
                            (0..self.dim())
                                .map(|j| {
                                    let z = self.matrix()[(i, j)];
                                    [z.re, z.im]
                                })
                                .collect()
                        })
                        .collect(),
                ),
            },
        };
        serde_json::to_string(&wire).expect("state serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<QuantumState> {
        let wire: Wire =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad state JSON: {e}")))?;
        let profile = DimProfile::new(wire.dims)?;
        let d = profile.total_dim();
        match (wire.kind.as_str(), wire.vector, wire.matrix) {
            ("pure", Some(amps), None) => {
                if amps.len() != d {
                    return Err(Error::Parse(format!(
                        "vector has {} amplitudes, expected {d}",
                        amps.len()
                    )));
                }
                let v = DVector::from_iterator(d, amps.iter().map(|a| Complex64::new(a[0], a[1])));
                QuantumState::from_vector(profile, v)
            }
            ("density", None, Some(rows)) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(Error::Parse(format!("matrix is not {d}x{d}")));
                }
                let m = DMatrix::from_fn(d, d, |i, j| {
                    Complex64::new(rows[i][j][0], rows[i][j][1])
                });
                QuantumState::from_density(profile, m)
            }
            (kind, _, _) => Err(Error::Parse(format!(
                "kind '{kind}' does not match the supplied fields"
            ))),
        }
    }
}
