//! File formats: JSON model files, the binary matrix dump with its JSON
//! sidecar, and CSV exports.
//!
//! Model file:
//!
//! ```json
//! {"kind": "polyatomic", "m": 1.0, "I": [0.0, 1.0], "phi": [1.0, 1.0],
//!  "sigma": {"variant": "PolyHardSphere", "C": 1.0}}
//! {"kind": "mixture", "m": [1.0, 2.0], "n": [1.0, 1.0],
//!  "sigma": {"variant": "MixBounded", "C": 1.0, "gamma": 0.5}}
//! ```
//!
//! `sigma` is optional and defaults to hard spheres with `C = 1`.
//!
//! Matrix file: the 4 bytes `PKLO`, a little-endian `u32` format version, a
//! little-endian `u32` row count, then `rows²` little-endian `f64` in
//! row-major order.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cross_sections::CrossSectionModel;
use crate::error::{Error, Result};
use crate::gas_models::{GasModel, MixtureSpec, PolyatomicGas};
use crate::verify::NuProfile;

/// Magic bytes of the matrix file.
pub const MATRIX_MAGIC: &[u8; 4] = b"PKLO";
/// Current matrix file version.
pub const MATRIX_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawModel {
    Polyatomic {
        m: f64,
        #[serde(rename = "I")]
        levels: Vec<f64>,
        phi: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<CrossSectionModel>,
    },
    Mixture {
        m: Vec<f64>,
        n: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<CrossSectionModel>,
    },
}

/// A gas model together with its cross section, as stored in a model file.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    /// Gas model.
    pub gas: GasModel,
    /// Cross section (validated against the gas family).
    pub sigma: CrossSectionModel,
}

impl ModelFile {
    /// Pairs a gas with a cross section, validating the combination.
    pub fn new(gas: GasModel, sigma: CrossSectionModel) -> Result<Self> {
        match &gas {
            GasModel::Polyatomic(_) => {
                sigma.poly()?;
            }
            GasModel::Mixture(m) => {
                sigma.mix(m.s())?;
            }
        }
        Ok(Self { gas, sigma })
    }

    /// Polyatomic gas with hard-sphere cross section `C = 1`.
    pub fn polyatomic(gas: PolyatomicGas) -> Self {
        Self { gas: GasModel::Polyatomic(gas), sigma: CrossSectionModel::default_poly() }
    }

    /// Mixture with hard-sphere cross sections `C_αβ = 1`.
    pub fn mixture(mix: MixtureSpec) -> Self {
        let s = mix.s();
        Self { gas: GasModel::Mixture(mix), sigma: CrossSectionModel::default_mix(s) }
    }

    /// Parses and validates a model from JSON text.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawModel = serde_json::from_str(text)?;
        match raw {
            RawModel::Polyatomic { m, levels, phi, sigma } => Self::new(
                GasModel::Polyatomic(PolyatomicGas::new(m, levels, phi)?),
                sigma.unwrap_or_else(CrossSectionModel::default_poly),
            ),
            RawModel::Mixture { m, n, sigma } => {
                let s = m.len();
                Self::new(
                    GasModel::Mixture(MixtureSpec::new(m, n)?),
                    sigma.unwrap_or_else(|| CrossSectionModel::default_mix(s)),
                )
            }
        }
    }

    /// Loads a model file.
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&fs::read_to_string(path)?)
    }

    fn raw(&self) -> RawModel {
        match &self.gas {
            GasModel::Polyatomic(g) => RawModel::Polyatomic {
                m: g.mass(),
                levels: g.levels().to_vec(),
                phi: g.weights().to_vec(),
                sigma: Some(self.sigma.clone()),
            },
            GasModel::Mixture(x) => RawModel::Mixture {
                m: x.masses().to_vec(),
                n: x.densities().to_vec(),
                sigma: Some(self.sigma.clone()),
            },
        }
    }

    /// Canonical JSON value (all fields explicit).
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.raw()).expect("model serializes")
    }

    /// Canonical compact JSON text.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("model serializes")
    }

    /// Lowercase hex SHA-256 of the canonical compact JSON.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Metadata written next to a matrix file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSidecar {
    /// Magic of the companion file.
    pub format: String,
    /// Binary format version.
    pub version: u32,
    /// Number of rows (= columns).
    pub rows: usize,
    /// What the matrix holds.
    pub content: String,
    /// Nodes per axis.
    pub grid_n: usize,
    /// Grid half-width.
    pub grid_r: f64,
    /// Number of components.
    pub components: usize,
    /// Model family.
    pub family: String,
    /// Model definition.
    pub model: serde_json::Value,
    /// SHA-256 of the canonical model JSON.
    pub model_hash: String,
    /// Sphere order of the kernel rules.
    pub sphere_order: usize,
    /// Radial nodes of the plane rule.
    pub plane_radial: usize,
    /// Angular nodes of the plane rule.
    pub plane_angular: usize,
    /// Plane-rule radius.
    pub plane_rmax: f64,
}

/// Path of the sidecar belonging to a matrix file (`<file>.json`).
pub fn sidecar_path(matrix: &Path) -> PathBuf {
    let mut s = matrix.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Serializes a square matrix into the binary format.
pub fn encode_matrix(m: &DMatrix<f64>) -> Result<Vec<u8>> {
    if m.nrows() != m.ncols() {
        return Err(Error::CorruptMatrix("matrix is not square".into()));
    }
    let rows = u32::try_from(m.nrows()).map_err(|_| Error::CorruptMatrix("too many rows".into()))?;
    let mut out = Vec::with_capacity(12 + 8 * m.len());
    out.extend_from_slice(MATRIX_MAGIC);
    out.extend_from_slice(&MATRIX_VERSION.to_le_bytes());
    out.extend_from_slice(&rows.to_le_bytes());
    for p in 0..m.nrows() {
        for q in 0..m.ncols() {
            out.extend_from_slice(&m[(p, q)].to_le_bytes());
        }
    }
    Ok(out)
}

/// Parses the binary format, validating magic, version and length.
pub fn decode_matrix(bytes: &[u8]) -> Result<DMatrix<f64>> {
    if bytes.len() < 12 {
        return Err(Error::CorruptMatrix("file shorter than the header".into()));
    }
    if &bytes[0..4] != MATRIX_MAGIC {
        return Err(Error::CorruptMatrix("bad magic".into()));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != MATRIX_VERSION {
        return Err(Error::CorruptMatrix(format!("unsupported version {version}")));
    }
    let rows = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
    let expected = rows.checked_mul(rows).and_then(|n| n.checked_mul(8)).and_then(|n| n.checked_add(12));
    if expected != Some(bytes.len()) {
        return Err(Error::CorruptMatrix(format!("length {} does not match {rows} rows", bytes.len())));
    }
    let data: Vec<f64> =
        bytes[12..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    Ok(DMatrix::from_row_slice(rows, rows, &data))
}

/// Writes a matrix file and its sidecar.
pub fn write_matrix(path: &Path, m: &DMatrix<f64>, sidecar: &MatrixSidecar) -> Result<()> {
    fs::write(path, encode_matrix(m)?)?;
    fs::write(sidecar_path(path), serde_json::to_string_pretty(sidecar)? + "\n")?;
    Ok(())
}

/// Reads a matrix file.
pub fn read_matrix(path: &Path) -> Result<DMatrix<f64>> {
    decode_matrix(&fs::read(path)?)
}

/// Reads the sidecar of a matrix file.
pub fn read_sidecar(matrix: &Path) -> Result<MatrixSidecar> {
    Ok(serde_json::from_str(&fs::read_to_string(sidecar_path(matrix))?)?)
}

/// Writes `index,eigenvalue` rows.
pub fn write_eigenvalues_csv<W: Write>(mut out: W, values: &[f64]) -> Result<()> {
    writeln!(out, "index,eigenvalue")?;
    for (k, v) in values.iter().enumerate() {
        writeln!(out, "{k},{v}")?;
    }
    Ok(())
}

/// Writes a collision-frequency profile as `xi_norm,nu,nu_over_1plus`.
pub fn write_nu_csv<W: Write>(mut out: W, profile: &NuProfile) -> Result<()> {
    writeln!(out, "xi_norm,nu,nu_over_1plus")?;
    for ((x, n), q) in profile.xi_norm.iter().zip(&profile.nu).zip(profile.nu_over_1plus()) {
        writeln!(out, "{x},{n},{q}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip_and_corruption() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let bytes = encode_matrix(&m).unwrap();
        assert_eq!(&bytes[..4], b"PKLO");
        assert_eq!(decode_matrix(&bytes).unwrap(), m);
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decode_matrix(&bad), Err(Error::CorruptMatrix(_))));
        let mut bad = bytes.clone();
        bad[4] = 9;
        assert!(matches!(decode_matrix(&bad), Err(Error::CorruptMatrix(_))));
        assert!(decode_matrix(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn model_file_round_trip() {
        let text = r#"{"kind":"polyatomic","m":1.0,"I":[0.0,1.0],"phi":[1.0,1.0],
                       "sigma":{"variant":"PolyBounded","C":2.0}}"#;
        let m = ModelFile::from_json_str(text).unwrap();
        assert_eq!(m.sigma, CrossSectionModel::PolyBounded { c: 2.0, gamma: 0.5 });
        let again = ModelFile::from_json_str(&m.to_json_string()).unwrap();
        assert_eq!(again, m);
        assert_eq!(again.hash(), m.hash());
        assert_eq!(m.hash().len(), 64);
    }

    #[test]
    fn family_mismatch_is_rejected() {
        let text = r#"{"kind":"mixture","m":[1.0,2.0],"n":[1.0,1.0],"sigma":{"variant":"PolyHardSphere","C":1.0}}"#;
        assert!(matches!(ModelFile::from_json_str(text), Err(Error::FamilyMismatch { .. })));
    }
}
