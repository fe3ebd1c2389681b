//! Subcommand implementations behind the `pseudomix` binary.
//!
//! Each command returns a process exit code instead of exiting itself, so
//! the logic stays testable. Codes: 0 success, 2 step budget exhausted
//! (report still written), 3 invalid input, 4 stalled, 5 verification
//! failed.

use std::path::{Path, PathBuf};

use crate::io::{ReportFile, StateFile};
use crate::linalg::{random_density, BipartiteDims, HermitianState};
use crate::oracles::{ppt_check, validate_density, verify_report};
use crate::pipeline::{assemble, decompose, AssembleOptions, PipelineConfig};
use crate::search::SearchConfig;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNCONVERGED: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;
pub const EXIT_STALL: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

/// Above this per-factor size runs still work but get slow; warn instead of
/// refusing.
pub const DIM_SOFT_CAP: usize = 16;

const INPUT_TOL: f64 = 1e-10;

fn warn_large_dims(d1: usize, d2: usize) {
    if d1 > DIM_SOFT_CAP || d2 > DIM_SOFT_CAP {
        eprintln!(
            "warning: factor dimensions {d1}x{d2} exceed the tested range \
             (up to {DIM_SOFT_CAP}); expect long runtimes"
        );
    }
}

/// Arguments of the `decompose` subcommand.
#[derive(Clone, Debug)]
pub struct DecomposeArgs {
    pub input: PathBuf,
    pub out: PathBuf,
    pub tol_residual: f64,
    pub max_steps: usize,
    pub restarts: usize,
    pub seed: u64,
    pub coalesce: bool,
}

pub fn cmd_decompose(args: &DecomposeArgs) -> i32 {
    let sf = match StateFile::load(&args.input) {
        Ok(sf) => sf,
        Err(e) => {
            eprintln!("error: cannot read state file: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    warn_large_dims(sf.d1, sf.d2);
    let (dims, mat) = match sf.to_matrix() {
        Ok(parts) => parts,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let violations = validate_density(&mat, INPUT_TOL);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("error: {v}");
        }
        return EXIT_INVALID_INPUT;
    }
    let rho = match HermitianState::new(dims, mat) {
        Ok(rho) => rho,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let cfg = PipelineConfig {
        tol_residual: args.tol_residual,
        max_steps: args.max_steps,
        coalesce: args.coalesce,
        search: SearchConfig {
            restarts: args.restarts,
            seed: args.seed,
            ..Default::default()
        },
        ..Default::default()
    };
    let dec = match decompose(&rho, &cfg) {
        Ok(dec) => dec,
        Err(Error::PipelineStall { step, residual, .. }) => {
            eprintln!("error: stalled at step {step} with residual {residual:.3e}");
            return EXIT_STALL;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let pm = match assemble(
        &dec,
        &AssembleOptions {
            weight_prune: cfg.weight_prune,
            coalesce: cfg.coalesce,
        },
    ) {
        Ok(pm) => pm,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let ppt = ppt_check(&rho);
    let report = ReportFile::build(sf.matrix_sha256(), dims, &dec, &pm, &ppt, &cfg);
    if let Err(e) = report.save(&args.out) {
        eprintln!("error: cannot write report: {e}");
        return EXIT_INVALID_INPUT;
    }
    println!(
        "decomposed {dims}: steps {}, converged {}, residual {:.3e}",
        dec.steps(),
        dec.converged,
        dec.residual_hs()
    );
    println!(
        "pseudomixture: a {:.12}, b {:.12}, terms +{} -{}",
        pm.a,
        pm.b,
        pm.plus_terms.len(),
        pm.minus_terms.len()
    );
    println!(
        "ppt: {} (min eigenvalue {:.6e}, decisive {})",
        ppt.verdict, ppt.min_pt_eigenvalue, ppt.decisive
    );
    println!("report written to {}", args.out.display());
    if dec.converged {
        EXIT_OK
    } else {
        eprintln!(
            "warning: step budget {} exhausted before reaching {:.1e}",
            cfg.max_steps, cfg.tol_residual
        );
        EXIT_UNCONVERGED
    }
}

pub fn cmd_validate(input: &Path) -> i32 {
    let sf = match StateFile::load(input) {
        Ok(sf) => sf,
        Err(e) => {
            eprintln!("error: cannot read state file: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    warn_large_dims(sf.d1, sf.d2);
    let (dims, mat) = match sf.to_matrix() {
        Ok(parts) => parts,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let violations = validate_density(&mat, INPUT_TOL);
    if !violations.is_empty() {
        for v in &violations {
            println!("violation: {v}");
        }
        return EXIT_INVALID_INPUT;
    }
    println!("ok: {dims} density matrix");
    let rho = HermitianState::new(dims, mat).expect("validated matrix is Hermitian");
    let ppt = ppt_check(&rho);
    println!(
        "ppt: {} (min eigenvalue {:.6e}, decisive {})",
        ppt.verdict, ppt.min_pt_eigenvalue, ppt.decisive
    );
    EXIT_OK
}

pub fn cmd_random(d1: usize, d2: usize, rank: usize, seed: u64, out: &Path) -> i32 {
    let dims = match BipartiteDims::new(d1, d2) {
        Ok(dims) => dims,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    warn_large_dims(d1, d2);
    let rho = match random_density(dims, rank, seed) {
        Ok(rho) => rho,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    if let Err(e) = StateFile::from_state(&rho).save(out) {
        eprintln!("error: cannot write state: {e}");
        return EXIT_INVALID_INPUT;
    }
    println!(
        "wrote random {dims} density matrix (rank {rank}, seed {seed}) to {}",
        out.display()
    );
    EXIT_OK
}

pub fn cmd_verify(input: &Path, report: &Path) -> i32 {
    let sf = match StateFile::load(input) {
        Ok(sf) => sf,
        Err(e) => {
            eprintln!("error: cannot read state file: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let rf = match ReportFile::load(report) {
        Ok(rf) => rf,
        Err(e) => {
            eprintln!("error: cannot read report file: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    if rf.input.d1 != sf.d1 || rf.input.d2 != sf.d2 {
        println!(
            "binding: FAIL (report is for {}x{}, state is {}x{})",
            rf.input.d1, rf.input.d2, sf.d1, sf.d2
        );
        return EXIT_VERIFY_FAILED;
    }
    let hash = sf.matrix_sha256();
    if hash != rf.input.matrix_sha256 {
        println!("binding: FAIL (input hash does not match the report)");
        return EXIT_VERIFY_FAILED;
    }
    println!("binding: pass");
    let rho = match sf.to_state() {
        Ok(rho) => rho,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let pm = match rf.to_pseudomixture() {
        Ok(pm) => pm,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let summary = match verify_report(&rho, &pm) {
        Ok(summary) => summary,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    for c in &summary.checks {
        println!(
            "{}: {} (measured {:.6e}, bound {:.6e})",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.measured,
            c.bound
        );
    }
    if summary.passed() {
        println!("verification passed");
        EXIT_OK
    } else {
        println!("verification FAILED");
        EXIT_VERIFY_FAILED
    }
}
