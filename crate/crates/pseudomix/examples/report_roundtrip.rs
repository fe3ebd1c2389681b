//! Save a state, decompose it, write the report, reload and verify.
//!
//! Walks the on-disk workflow: a state file with its content hash, a
//! report bound to that hash, an exact reload of both, and the
//! verification pass run against the reloaded terms rather than the
//! in-memory decomposition.

use pseudomix::io::{ReportFile, StateFile};
use pseudomix::linalg::{random_density, BipartiteDims};
use pseudomix::oracles::{ppt_check, verify_report};
use pseudomix::pipeline::{assemble, decompose, AssembleOptions, PipelineConfig};

fn main() -> pseudomix::Result<()> {
    let dir = tempfile::tempdir()?;
    let state_path = dir.path().join("state.json");
    let report_path = dir.path().join("report.json");

    let dims = BipartiteDims::new(2, 2)?;
    let rho = random_density(dims, 2, 5)?;
    let state_file = StateFile::from_state(&rho);
    state_file.save(&state_path)?;
    let hash = state_file.matrix_sha256();
    println!("state written to {}", state_path.display());
    println!("matrix sha256: {hash}");

    let cfg = PipelineConfig::default();
    let dec = decompose(&rho, &cfg)?;
    let pm = assemble(&dec, &AssembleOptions::default())?;
    let ppt = ppt_check(&rho);
    let report = ReportFile::build(hash.clone(), dims, &dec, &pm, &ppt, &cfg);
    report.save(&report_path)?;
    println!("report written to {}", report_path.display());

    let state_back = StateFile::load(&state_path)?;
    let report_back = ReportFile::load(&report_path)?;
    println!();
    println!("state reloads exactly:  {}", state_back == state_file);
    println!("report reloads exactly: {}", report_back == report);
    println!(
        "hash binding holds:     {}",
        state_back.matrix_sha256() == report_back.input.matrix_sha256
    );

    let rho_back = state_back.to_state()?;
    let pm_back = report_back.to_pseudomixture()?;
    let summary = verify_report(&rho_back, &pm_back)?;
    println!();
    for check in &summary.checks {
        println!(
            "{}: {} (measured {:.3e}, bound {:.3e})",
            check.name,
            if check.passed { "pass" } else { "FAIL" },
            check.measured,
            check.bound
        );
    }
    println!(
        "verification {}",
        if summary.passed() { "passed" } else { "FAILED" }
    );
    Ok(())
}
