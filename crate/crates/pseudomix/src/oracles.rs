//! Ground-truth checks: density validation, the partial-transpose
//! entanglement test, and verification of finished pseudomixtures.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::linalg::{hermiticity_defect, jacobi_hermitian, symmetrize, HermitianState};
use crate::pipeline::Pseudomixture;
use crate::{Error, Result};

/// Eigenvalues of the partial transpose below −NEGATIVITY_TOL count as
/// negative.
pub const NEGATIVITY_TOL: f64 = 1e-10;

/// Which tensor factor to transpose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    One,
    Two,
}

/// Transpose one tensor factor of a bipartite Hermitian operator.
///
/// For factor one the entry mapping is out[(i,j),(m,n)] = in[(m,j),(i,n)];
/// factor two swaps the roles of j and n instead. Both maps are involutive,
/// trace-preserving and send Hermitian to Hermitian.
pub fn partial_transpose(rho: &HermitianState, factor: Factor) -> HermitianState {
    let dims = rho.dims();
    let m = rho.matrix();
    let out = Array2::from_shape_fn((dims.dim(), dims.dim()), |(row, col)| {
        let (i, j) = dims.factors(row);
        let (k, l) = dims.factors(col);
        match factor {
            Factor::One => m[[dims.composite(k, j), dims.composite(i, l)]],
            Factor::Two => m[[dims.composite(i, l), dims.composite(k, j)]],
        }
    });
    HermitianState::from_hermitian_parts(dims, out)
}

/// Verdict of the positive-partial-transpose test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ppt,
    Npt,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Ppt => write!(f, "PPT"),
            Verdict::Npt => write!(f, "NPT"),
        }
    }
}

/// Result of [`ppt_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PptVerdict {
    pub min_pt_eigenvalue: f64,
    pub verdict: Verdict,
    /// True on 2x2, 2x3 and 3x2 spaces, where PPT is equivalent to
    /// separability; elsewhere NPT still proves entanglement but PPT proves
    /// nothing.
    pub decisive: bool,
}

/// Peres positivity test on the partial transpose of the second factor.
pub fn ppt_check(rho: &HermitianState) -> PptVerdict {
    let pt = partial_transpose(rho, Factor::Two);
    let (vals, _) = jacobi_hermitian(pt.matrix());
    let min_pt_eigenvalue = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let verdict = if min_pt_eigenvalue < -NEGATIVITY_TOL {
        Verdict::Npt
    } else {
        Verdict::Ppt
    };
    let dims = rho.dims();
    let (lo, hi) = if dims.d1() <= dims.d2() {
        (dims.d1(), dims.d2())
    } else {
        (dims.d2(), dims.d1())
    };
    PptVerdict {
        min_pt_eigenvalue,
        verdict,
        decisive: lo == 2 && hi <= 3,
    }
}

/// One way a matrix fails to be a density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Violation {
    Hermiticity { asymmetry: f64 },
    Trace { trace: f64 },
    Positivity { min_eigenvalue: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Hermiticity { asymmetry } => {
                write!(f, "hermiticity violated: asymmetry {asymmetry:.3e}")
            }
            Violation::Trace { trace } => write!(f, "trace violated: trace {trace:.17}"),
            Violation::Positivity { min_eigenvalue } => {
                write!(
                    f,
                    "positivity violated: min eigenvalue {min_eigenvalue:.3e}"
                )
            }
        }
    }
}

/// Check a raw square matrix against the density-matrix axioms, reporting
/// every violation instead of failing on the first.
pub fn validate_density(mat: &Array2<C64>, tol: f64) -> Vec<Violation> {
    let mut violations = Vec::new();
    if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        violations.push(Violation::Hermiticity {
            asymmetry: f64::INFINITY,
        });
        return violations;
    }
    let asymmetry = hermiticity_defect(mat);
    if asymmetry > tol {
        violations.push(Violation::Hermiticity { asymmetry });
    }
    let d = mat.nrows();
    let trace: f64 = (0..d).map(|k| mat[[k, k]].re).sum();
    if (trace - 1.0).abs() > tol {
        violations.push(Violation::Trace { trace });
    }
    let (vals, _) = jacobi_hermitian(&symmetrize(mat));
    let min_eigenvalue = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -tol {
        violations.push(Violation::Positivity { min_eigenvalue });
    }
    violations
}

/// One verified property of a pseudomixture.
#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
}

/// All checks run by [`verify_report`].
#[derive(Clone, Debug)]
pub struct VerificationSummary {
    pub checks: Vec<CheckRecord>,
}

impl VerificationSummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

const VERIFY_TOL: f64 = 1e-9;

/// Re-derive the headline claims of a pseudomixture against the state it
/// came from: a − b = 1, both sides are density matrices, the weighted
/// difference reproduces ρ up to the recorded residual, and an NPT verdict
/// on decisive dimensions forces b > 0.
pub fn verify_report(rho: &HermitianState, pm: &Pseudomixture) -> Result<VerificationSummary> {
    let mut checks = Vec::new();

    let norm_gap = (pm.a - pm.b - 1.0).abs();
    checks.push(CheckRecord {
        name: "normalization".into(),
        passed: norm_gap <= VERIFY_TOL,
        measured: norm_gap,
        bound: VERIFY_TOL,
    });

    let plus = pm.plus_state()?;
    if plus.dims() != rho.dims() {
        return Err(Error::DimMismatch(
            "plus part does not live on the input's factor dimensions".into(),
        ));
    }
    push_density_checks(&mut checks, "plus", &plus);
    if !pm.minus_terms.is_empty() {
        let minus = pm.minus_state()?;
        if minus.dims() != rho.dims() {
            return Err(Error::DimMismatch(
                "minus part does not live on the input's factor dimensions".into(),
            ));
        }
        push_density_checks(&mut checks, "minus", &minus);
    }

    let rebuilt = crate::pipeline::reconstruct(pm)?;
    let err = (rebuilt.matrix() - rho.matrix())
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let bound = pm.residual_hs + VERIFY_TOL;
    checks.push(CheckRecord {
        name: "reconstruction".into(),
        passed: err <= bound,
        measured: err,
        bound,
    });

    let ppt = ppt_check(rho);
    if ppt.decisive && ppt.verdict == Verdict::Npt {
        checks.push(CheckRecord {
            name: "entangled_needs_minus_mass".into(),
            passed: pm.b > 0.0,
            measured: pm.b,
            bound: 0.0,
        });
    }

    Ok(VerificationSummary { checks })
}

fn push_density_checks(checks: &mut Vec<CheckRecord>, side: &str, state: &HermitianState) {
    let trace_gap = (state.trace() - 1.0).abs();
    checks.push(CheckRecord {
        name: format!("{side}_trace"),
        passed: trace_gap <= VERIFY_TOL,
        measured: trace_gap,
        bound: VERIFY_TOL,
    });
    let (vals, _) = jacobi_hermitian(state.matrix());
    let min_eig = vals.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(CheckRecord {
        name: format!("{side}_min_eigenvalue"),
        passed: min_eig >= -VERIFY_TOL,
        measured: min_eig,
        bound: -VERIFY_TOL,
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bell_state, fro_norm, random_density, werner_state, BipartiteDims};
    use crate::pipeline::{assemble, decompose, AssembleOptions, PipelineConfig};
    use crate::search::SearchConfig;
    use approx::assert_abs_diff_eq;
    use ndarray::Array1;

    fn dims(d1: usize, d2: usize) -> BipartiteDims {
        BipartiteDims::new(d1, d2).unwrap()
    }

    #[test]
    fn partial_transpose_is_involutive_and_trace_preserving() {
        let rho = random_density(dims(2, 3), 4, 17).unwrap();
        for factor in [Factor::One, Factor::Two] {
            let pt = partial_transpose(&rho, factor);
            assert_eq!(pt.trace(), rho.trace());
            assert_eq!(hermiticity_defect(pt.matrix()), 0.0);
            let back = partial_transpose(&pt, factor);
            assert_eq!(back.matrix(), rho.matrix());
            assert_abs_diff_eq!(fro_norm(&pt), fro_norm(&rho), epsilon = 1e-14);
        }
    }

    #[test]
    fn bell_partial_transpose_has_eigenvalue_minus_half() {
        let ppt = ppt_check(&bell_state());
        assert_abs_diff_eq!(ppt.min_pt_eigenvalue, -0.5, epsilon = 1e-12);
        assert_eq!(ppt.verdict, Verdict::Npt);
        assert!(ppt.decisive);
    }

    #[test]
    fn werner_family_crosses_the_ppt_boundary_at_one_third() {
        // Partial transpose spectrum of p·Bell + (1−p)I/4 is
        // {(1+p)/4 three-fold, (1−3p)/4}.
        let low = ppt_check(&werner_state(0.2).unwrap());
        assert_eq!(low.verdict, Verdict::Ppt);
        assert_abs_diff_eq!(low.min_pt_eigenvalue, 0.1, epsilon = 1e-10);

        let high = ppt_check(&werner_state(0.5).unwrap());
        assert_eq!(high.verdict, Verdict::Npt);
        assert_abs_diff_eq!(high.min_pt_eigenvalue, -0.125, epsilon = 1e-10);
    }

    #[test]
    fn decisive_dimensions_are_two_by_two_and_two_by_three() {
        for (d1, d2, expect) in [
            (2, 2, true),
            (2, 3, true),
            (3, 2, true),
            (3, 3, false),
            (1, 2, false),
            (2, 4, false),
        ] {
            let rho = random_density(dims(d1, d2), 1, 3).unwrap();
            assert_eq!(ppt_check(&rho).decisive, expect, "{d1}x{d2}");
        }
    }

    #[test]
    fn validate_density_reports_each_violation() {
        let good = random_density(dims(2, 2), 4, 2).unwrap();
        assert!(validate_density(good.matrix(), 1e-10).is_empty());

        let negative = Array2::from_diag(&Array1::from(vec![
            C64::new(0.6, 0.0),
            C64::new(0.6, 0.0),
            C64::new(-0.1, 0.0),
            C64::new(-0.1, 0.0),
        ]));
        let vs = validate_density(&negative, 1e-10);
        assert_eq!(vs.len(), 1);
        assert!(matches!(
            vs[0],
            Violation::Positivity { min_eigenvalue } if (min_eigenvalue + 0.1).abs() < 1e-12
        ));

        let heavy = Array2::from_diag_elem(4, C64::new(0.3, 0.0));
        let vs = validate_density(&heavy, 1e-10);
        assert_eq!(vs.len(), 1);
        assert!(matches!(vs[0], Violation::Trace { trace } if (trace - 1.2).abs() < 1e-12));

        let mut skew = Array2::from_diag_elem(4, C64::new(0.25, 0.0));
        skew[[0, 1]] = C64::new(0.1, 0.0);
        let vs = validate_density(&skew, 1e-10);
        assert!(vs
            .iter()
            .any(|v| matches!(v, Violation::Hermiticity { .. })));

        let mut bad = Array2::from_diag_elem(4, C64::new(0.25, 0.0));
        bad[[0, 0]] = C64::new(f64::NAN, 0.0);
        let vs = validate_density(&bad, 1e-10);
        assert_eq!(vs.len(), 1);
        assert!(matches!(vs[0], Violation::Hermiticity { .. }));
    }

    #[test]
    fn verify_report_accepts_honest_results_and_catches_tampering() {
        let rho = bell_state();
        let cfg = PipelineConfig {
            search: SearchConfig {
                restarts: 4,
                ..Default::default()
            },
            ..Default::default()
        };
        let dec = decompose(&rho, &cfg).unwrap();
        let pm = assemble(&dec, &AssembleOptions::default()).unwrap();

        let summary = verify_report(&rho, &pm).unwrap();
        assert!(summary.passed(), "checks: {:?}", summary.checks);
        assert!(summary
            .checks
            .iter()
            .any(|c| c.name == "entangled_needs_minus_mass"));

        let mut tampered = pm.clone();
        tampered.a += 1e-6;
        let summary = verify_report(&rho, &tampered).unwrap();
        assert!(!summary.passed());

        let mut reweighted = pm.clone();
        reweighted.plus_terms[0].weight *= 1.5;
        let summary = verify_report(&rho, &reweighted).unwrap();
        assert!(!summary.passed());
    }
}
