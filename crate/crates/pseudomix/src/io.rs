//! JSON files for states and decomposition reports.
//!
//! Complex numbers are stored as `[re, im]` pairs and matrices as row-major
//! nested lists over the composite index k = i·d2 + j. Serialization goes
//! through shortest round-trip float formatting and fixed field order, so
//! equal inputs and flags produce byte-identical files.

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::linalg::{BipartiteDims, HermitianState};
use crate::oracles::PptVerdict;
use crate::pipeline::{Decomposition, PipelineConfig, ProductTerm, Pseudomixture};
use crate::Result;

/// A bipartite state on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub d1: usize,
    pub d2: usize,
    /// D×D complex matrix as row-major `[re, im]` pairs, D = d1·d2.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_state(rho: &HermitianState) -> Self {
        let dims = rho.dims();
        let d = dims.dim();
        let m = rho.matrix();
        let matrix = (0..d)
            .map(|r| (0..d).map(|c| [m[[r, c]].re, m[[r, c]].im]).collect())
            .collect();
        Self {
            d1: dims.d1(),
            d2: dims.d2(),
            matrix,
        }
    }

    /// Parse into dims and a raw matrix, validating only the shape.
    pub fn to_matrix(&self) -> Result<(BipartiteDims, Array2<C64>)> {
        let dims = BipartiteDims::new(self.d1, self.d2)?;
        let d = dims.dim();
        if self.matrix.len() != d || self.matrix.iter().any(|row| row.len() != d) {
            return Err(crate::Error::InvalidInput(format!(
                "matrix must be {d}x{d} for dims {dims}"
            )));
        }
        let mat = Array2::from_shape_fn((d, d), |(r, c)| {
            C64::new(self.matrix[r][c][0], self.matrix[r][c][1])
        });
        Ok((dims, mat))
    }

    /// Parse and validate into a Hermitian state.
    pub fn to_state(&self) -> Result<HermitianState> {
        let (dims, mat) = self.to_matrix()?;
        HermitianState::new(dims, mat)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    /// SHA-256 over the dims and the row-major little-endian entry bytes,
    /// binding reports to the exact input values.
    pub fn matrix_sha256(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.d1 as u64).to_le_bytes());
        hasher.update((self.d2 as u64).to_le_bytes());
        for row in &self.matrix {
            for entry in row {
                hasher.update(entry[0].to_le_bytes());
                hasher.update(entry[1].to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Input echo embedded in a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub d1: usize,
    pub d2: usize,
    pub matrix_sha256: String,
}

/// One product term on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub weight: f64,
    pub vec1: Vec<[f64; 2]>,
    pub vec2: Vec<[f64; 2]>,
}

/// One extraction step on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub tr_a2: f64,
    pub tr_h2_before: f64,
    pub tr_h2_after: f64,
    pub objective: f64,
    pub residual_hs: f64,
    pub used_probe_fallback: bool,
}

/// PPT verdict on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptRecord {
    pub verdict: String,
    pub min_pt_eigenvalue: f64,
    pub decisive: bool,
}

/// Echo of every knob that shaped the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub tol_residual: f64,
    pub max_steps: usize,
    pub weight_prune: f64,
    pub coalesce: bool,
    pub restarts: usize,
    pub max_sweeps: usize,
    pub sweep_tol: f64,
    pub angle_grid: usize,
    pub stall_floor: f64,
    pub seed: u64,
}

/// A finished decomposition on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub input: InputEcho,
    pub a: f64,
    pub b: f64,
    pub converged: bool,
    pub steps: usize,
    pub residual_hs: f64,
    pub residual_op: f64,
    pub stats: Vec<StepRecord>,
    pub terms_plus: Vec<TermRecord>,
    pub terms_minus: Vec<TermRecord>,
    pub ppt: PptRecord,
    pub config: ConfigEcho,
}

fn vec_to_pairs(v: &Array1<C64>) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn pairs_to_vec(pairs: &[[f64; 2]]) -> Array1<C64> {
    Array1::from_iter(pairs.iter().map(|p| C64::new(p[0], p[1])))
}

fn term_to_record(t: &ProductTerm) -> TermRecord {
    TermRecord {
        weight: t.weight,
        vec1: vec_to_pairs(&t.vec1),
        vec2: vec_to_pairs(&t.vec2),
    }
}

impl ReportFile {
    pub fn build(
        input_hash: String,
        dims: BipartiteDims,
        dec: &Decomposition,
        pm: &Pseudomixture,
        ppt: &PptVerdict,
        cfg: &PipelineConfig,
    ) -> Self {
        Self {
            input: InputEcho {
                d1: dims.d1(),
                d2: dims.d2(),
                matrix_sha256: input_hash,
            },
            a: pm.a,
            b: pm.b,
            converged: dec.converged,
            steps: dec.steps(),
            residual_hs: dec.residual_hs(),
            residual_op: dec.residual_op(),
            stats: dec
                .stats
                .iter()
                .map(|s| StepRecord {
                    step: s.step,
                    tr_a2: s.tr_a2,
                    tr_h2_before: s.tr_h2_before,
                    tr_h2_after: s.tr_h2_after,
                    objective: s.objective,
                    residual_hs: s.residual_hs,
                    used_probe_fallback: s.used_probe_fallback,
                })
                .collect(),
            terms_plus: pm.plus_terms.iter().map(term_to_record).collect(),
            terms_minus: pm.minus_terms.iter().map(term_to_record).collect(),
            ppt: PptRecord {
                verdict: ppt.verdict.to_string(),
                min_pt_eigenvalue: ppt.min_pt_eigenvalue,
                decisive: ppt.decisive,
            },
            config: ConfigEcho {
                tol_residual: cfg.tol_residual,
                max_steps: cfg.max_steps,
                weight_prune: cfg.weight_prune,
                coalesce: cfg.coalesce,
                restarts: cfg.search.restarts,
                max_sweeps: cfg.search.max_sweeps,
                sweep_tol: cfg.search.sweep_tol,
                angle_grid: cfg.search.angle_grid,
                stall_floor: cfg.search.stall_floor,
                seed: cfg.search.seed,
            },
        }
    }

    /// Reassemble the stored terms into a pseudomixture for verification.
    /// Vectors are taken verbatim so tampering stays detectable.
    pub fn to_pseudomixture(&self) -> Result<Pseudomixture> {
        let to_terms = |records: &[TermRecord]| -> Result<Vec<ProductTerm>> {
            records
                .iter()
                .map(|r| {
                    if r.vec1.is_empty() || r.vec2.is_empty() {
                        return Err(crate::Error::InvalidInput(
                            "term vectors must be nonempty".into(),
                        ));
                    }
                    Ok(ProductTerm {
                        weight: r.weight,
                        vec1: pairs_to_vec(&r.vec1),
                        vec2: pairs_to_vec(&r.vec2),
                        step: 0,
                    })
                })
                .collect()
        };
        Ok(Pseudomixture {
            a: self.a,
            b: self.b,
            plus_terms: to_terms(&self.terms_plus)?,
            minus_terms: to_terms(&self.terms_minus)?,
            residual_hs: self.residual_hs,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_density, werner_state};
    use crate::oracles::ppt_check;
    use crate::pipeline::{assemble, decompose, AssembleOptions};
    use crate::search::SearchConfig;

    #[test]
    fn state_files_round_trip_exactly() {
        let rho = random_density(BipartiteDims::new(2, 3).unwrap(), 4, 8).unwrap();
        let sf = StateFile::from_state(&rho);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        sf.save(&path).unwrap();
        let loaded = StateFile::load(&path).unwrap();
        assert_eq!(sf, loaded);
        assert_eq!(loaded.to_state().unwrap().matrix(), rho.matrix());
    }

    #[test]
    fn state_file_shape_and_dims_are_validated() {
        let sf = StateFile {
            d1: 2,
            d2: 2,
            matrix: vec![vec![[1.0, 0.0]; 3]; 4],
        };
        assert!(sf.to_matrix().is_err());
        let sf = StateFile {
            d1: 0,
            d2: 2,
            matrix: vec![],
        };
        assert!(sf.to_matrix().is_err());
    }

    #[test]
    fn matrix_hash_is_stable_and_sensitive() {
        let rho = random_density(BipartiteDims::new(2, 2).unwrap(), 2, 3).unwrap();
        let sf = StateFile::from_state(&rho);
        let h1 = sf.matrix_sha256();
        assert_eq!(h1.len(), 64);
        assert_eq!(h1, sf.matrix_sha256());

        let mut other = sf.clone();
        other.matrix[0][0][0] += 1e-15;
        assert_ne!(h1, other.matrix_sha256());

        let mut swapped = sf.clone();
        swapped.d1 = 1;
        swapped.d2 = 4;
        assert_ne!(h1, swapped.matrix_sha256());
    }

    #[test]
    fn report_serialization_is_byte_identical_per_run() {
        let rho = werner_state(0.5).unwrap();
        let cfg = PipelineConfig {
            search: SearchConfig {
                restarts: 2,
                ..Default::default()
            },
            ..Default::default()
        };
        let build = || {
            let dec = decompose(&rho, &cfg).unwrap();
            let pm = assemble(&dec, &AssembleOptions::default()).unwrap();
            let ppt = ppt_check(&rho);
            let hash = StateFile::from_state(&rho).matrix_sha256();
            let report = ReportFile::build(hash, rho.dims(), &dec, &pm, &ppt, &cfg);
            serde_json::to_string_pretty(&report).unwrap()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn report_round_trips_through_disk() {
        let rho = werner_state(0.4).unwrap();
        let cfg = PipelineConfig {
            search: SearchConfig {
                restarts: 2,
                ..Default::default()
            },
            ..Default::default()
        };
        let dec = decompose(&rho, &cfg).unwrap();
        let pm = assemble(&dec, &AssembleOptions::default()).unwrap();
        let ppt = ppt_check(&rho);
        let hash = StateFile::from_state(&rho).matrix_sha256();
        let report = ReportFile::build(hash, rho.dims(), &dec, &pm, &ppt, &cfg);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        report.save(&path).unwrap();
        let loaded = ReportFile::load(&path).unwrap();
        assert_eq!(report, loaded);

        let back = loaded.to_pseudomixture().unwrap();
        assert_eq!(back.a, pm.a);
        assert_eq!(back.plus_terms.len(), pm.plus_terms.len());
    }
}
