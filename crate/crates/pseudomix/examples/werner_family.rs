//! The Werner family across its separability threshold.
//!
//! ρ_p = p·|Φ⁺⟩⟨Φ⁺| + (1 − p)·I/4 is separable exactly for p ≤ 1/3. On
//! two qubits the partial transpose test is decisive, so the sign of its
//! smallest eigenvalue (1 − 3p)/4 locates the threshold. The negative
//! mass b of the pseudomixture tracks the same transition.

use pseudomix::linalg::werner_state;
use pseudomix::oracles::ppt_check;
use pseudomix::pipeline::{assemble, decompose, AssembleOptions, PipelineConfig};
use pseudomix::search::SearchConfig;

fn main() -> pseudomix::Result<()> {
    println!("p      min PT eigenvalue   (1-3p)/4     verdict");
    for i in 0..=10 {
        let p = f64::from(i) / 10.0;
        let rho = werner_state(p)?;
        let ppt = ppt_check(&rho);
        println!(
            "{:.1}    {:+.6}           {:+.6}    {}",
            p,
            ppt.min_pt_eigenvalue,
            (1.0 - 3.0 * p) / 4.0,
            ppt.verdict
        );
    }

    let cfg = PipelineConfig {
        tol_residual: 1e-6,
        max_steps: 400,
        search: SearchConfig {
            restarts: 4,
            ..Default::default()
        },
        ..Default::default()
    };

    println!();
    println!("p      steps  converged  b");
    for p in [0.2, 0.5, 0.9] {
        let rho = werner_state(p)?;
        let dec = decompose(&rho, &cfg)?;
        let pm = assemble(&dec, &AssembleOptions::default())?;
        println!(
            "{:.1}    {:>5}  {:<9}  {:.6}",
            p,
            dec.steps(),
            dec.converged,
            pm.b
        );
    }
    Ok(())
}
