//! On-disk gate and certificate formats.
//!
//! Complex entries are `[re, im]` pairs, matrices are row-major
//! `[rows][cols][2]`, and basis labels are 0-based. Floats are written with
//! shortest round-trip formatting, so write-then-read is bit-exact.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use maxent_core::certify::{Certificate, FeasibilityOptions};
use maxent_core::linalg::{is_finite, unitarity_deviation};
use maxent_core::verify::EntanglementReport;
use maxent_core::{BipartiteGate, ComplexMatrix, Status, C64};
use serde::{Deserialize, Serialize};

/// Unitarity tolerance applied when loading a gate file.
pub const LOAD_UNITARY_TOL: f64 = 1e-8;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

/// Parses a square `n×n` matrix; errors name the first bad row.
pub fn matrix_from_json(rows: &JsonMatrix, n: usize, what: &str) -> anyhow::Result<ComplexMatrix> {
    if rows.len() != n {
        bail!("{what}: expected {n} rows, found {}", rows.len());
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            bail!("{what}: row {r} has {} entries, expected {n}", row.len());
        }
        for (c, [re, im]) in row.iter().enumerate() {
            m[(r, c)] = C64::new(*re, *im);
        }
    }
    if !is_finite(&m) {
        bail!("{what}: entries must be finite");
    }
    Ok(m)
}

/// Provenance of a designed gate.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DesignComment {
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateFile {
    #[serde(rename = "dA")]
    pub da: usize,
    #[serde(rename = "dB")]
    pub db: usize,
    pub unitary: JsonMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<DesignComment>,
}

impl GateFile {
    pub fn from_gate(gate: &BipartiteGate, comment: Option<DesignComment>) -> Self {
        GateFile {
            da: gate.da(),
            db: gate.db(),
            unitary: matrix_to_json(gate.matrix()),
            comment,
        }
    }

    /// Validates the file invariants in order and builds the gate.
    pub fn to_gate(&self) -> anyhow::Result<BipartiteGate> {
        if self.da < 2 {
            bail!("invalid gate file: dA must be >= 2 (got {})", self.da);
        }
        if self.db < self.da {
            bail!("invalid gate file: dA <= dB required (got dA={}, dB={})", self.da, self.db);
        }
        let n = self.da * self.db;
        let u = matrix_from_json(&self.unitary, n, "invalid gate file: unitary")?;
        let dev = unitarity_deviation(&u);
        if dev > LOAD_UNITARY_TOL {
            bail!("invalid gate file: matrix is not unitary (max |U†U - I| = {dev:.3e} > {LOAD_UNITARY_TOL:e})");
        }
        Ok(BipartiteGate::with_tolerance(self.da, self.db, u, LOAD_UNITARY_TOL)?)
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing gate file {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("gate file serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub e_in: f64,
    pub e_out: f64,
    pub delta: f64,
    pub bjk_gram_deviation: f64,
}

impl From<&EntanglementReport> for VerificationRecord {
    fn from(r: &EntanglementReport) -> Self {
        VerificationRecord {
            e_in: r.e_in,
            e_out: r.e_out,
            delta: r.delta,
            bjk_gram_deviation: r.bjk_gram_deviation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub status: String,
    #[serde(rename = "dA")]
    pub da: usize,
    #[serde(rename = "dB")]
    pub db: usize,
    #[serde(default)]
    pub adjoint: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<JsonMatrix>,
    pub affine_residual: f64,
    /// `null` when undefined (no candidate matrix).
    pub min_eigenvalue: Option<f64>,
    pub gram_deviation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub affine_tol: f64,
    pub psd_tol: f64,
    pub tool_version: String,
    pub rng_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationRecord>,
}

impl CertificateFile {
    pub fn new(
        cert: &Certificate,
        da: usize,
        db: usize,
        adjoint: bool,
        opts: &FeasibilityOptions,
        verification: Option<VerificationRecord>,
    ) -> Self {
        CertificateFile {
            status: cert.status.to_string(),
            da,
            db,
            adjoint,
            rho: cert.rho.as_ref().map(matrix_to_json),
            affine_residual: cert.affine_residual,
            min_eigenvalue: cert.min_eigenvalue.is_finite().then_some(cert.min_eigenvalue),
            gram_deviation: cert.gram_deviation,
            reason: cert.reason.clone(),
            affine_tol: opts.affine_tol,
            psd_tol: opts.psd_tol,
            tool_version: TOOL_VERSION.to_string(),
            rng_seed: opts.rng_seed,
            verification,
        }
    }

    pub fn status(&self) -> anyhow::Result<Status> {
        self.status
            .parse::<Status>()
            .map_err(|_| anyhow::anyhow!("invalid certificate file: unknown status {:?}", self.status))
    }

    pub fn to_certificate(&self) -> anyhow::Result<Certificate> {
        let status = self.status()?;
        let rho = self
            .rho
            .as_ref()
            .map(|r| matrix_from_json(r, self.db, "invalid certificate file: rho"))
            .transpose()?;
        Ok(Certificate {
            status,
            rho,
            affine_residual: self.affine_residual,
            min_eigenvalue: self.min_eigenvalue.unwrap_or(f64::NAN),
            gram_deviation: self.gram_deviation,
            reason: self.reason.clone(),
        })
    }

    pub fn options(&self) -> FeasibilityOptions {
        FeasibilityOptions {
            affine_tol: self.affine_tol,
            psd_tol: self.psd_tol,
            rng_seed: self.rng_seed,
            ..FeasibilityOptions::default()
        }
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing certificate file {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use maxent_core::synthesize::{haar_random_gate, swap_gate};

    #[test]
    fn gate_file_round_trip_is_bit_exact() {
        let gate = haar_random_gate(2, 3, 99).unwrap();
        let file = GateFile::from_gate(&gate, Some(DesignComment { construction: "haar".into(), seed: Some(99), alphas: None }));
        let back: GateFile = serde_json::from_str(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_gate().unwrap().matrix(), gate.matrix());
    }

    #[test]
    fn gate_file_rejections_name_the_invariant() {
        let mut file = GateFile::from_gate(&swap_gate(2).unwrap(), None);
        file.unitary[1][1] = [0.5, 0.0];
        let err = file.to_gate().unwrap_err().to_string();
        assert!(err.contains("not unitary"), "{err}");

        let mut file = GateFile::from_gate(&swap_gate(2).unwrap(), None);
        file.unitary.pop();
        assert!(file.to_gate().unwrap_err().to_string().contains("expected 4 rows"));

        let mut file = GateFile::from_gate(&swap_gate(2).unwrap(), None);
        file.db = 1;
        assert!(file.to_gate().unwrap_err().to_string().contains("dA <= dB"));

        let text = r#"{"dA": 2, "dB": 2, "unitary": [[[1, 0, 3]]]}"#;
        assert!(serde_json::from_str::<GateFile>(text).is_err());
    }

    #[test]
    fn certificate_file_round_trip() {
        let cert = Certificate {
            status: Status::Infeasible,
            rho: None,
            affine_residual: 0.25,
            min_eigenvalue: f64::NAN,
            gram_deviation: 0.1 + 0.2,
            reason: Some("inconsistent".into()),
        };
        let file = CertificateFile::new(&cert, 2, 2, false, &FeasibilityOptions::default(), None);
        let back: CertificateFile = serde_json::from_str(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let c = back.to_certificate().unwrap();
        assert_eq!(c.status, Status::Infeasible);
        assert!(c.min_eigenvalue.is_nan());
        assert_eq!(c.gram_deviation.to_bits(), (0.1f64 + 0.2).to_bits());
    }
}
