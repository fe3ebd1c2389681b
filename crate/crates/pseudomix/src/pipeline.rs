//! The iterative decomposition loop and pseudomixture assembly.
//!
//! Starting from H(0) = ρ, each step searches for the product basis that
//! maximizes the extractable diagonal mass of the current remainder, banks
//! the diagonal as weighted product terms and recurses on what is left:
//!
//! ```text
//! H(n−1) = A(n) + H(n),    Tr H(n−1)² = Tr A(n)² + Tr H(n)²,
//! ```
//!
//! so the squared residual telescopes down monotonically. The banked terms
//! are subtracted from the working remainder one projector at a time, which
//! keeps `input = Σ terms + residual` an identity of the stored matrices
//! rather than an approximation; weights below the prune threshold stay in
//! the remainder instead of being silently dropped.
//!
//! Once the residual is small the terms regroup by sign into the
//! pseudomixture ρ = a·ρ⁺ − b·ρ⁻ with a − b = 1 and ρ± convex mixtures of
//! simple tensor projectors.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::linalg::{fro_norm, kron_vec, op_norm, outer, BipartiteDims, HermitianState};
use crate::oracles::validate_density;
use crate::search::{derive_seed, maximize, SearchConfig};
use crate::split::{diag_to_terms, split};
use crate::{Error, Result};

/// Knobs for [`decompose`].
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    /// Stop once the remainder's Frobenius norm falls to this level.
    pub tol_residual: f64,
    /// Hard cap on extraction steps.
    pub max_steps: usize,
    /// Diagonal weights with |w| at or below this stay in the remainder.
    pub weight_prune: f64,
    /// Merge near-identical product terms when assembling reports.
    pub coalesce: bool,
    /// Search settings; the per-step seed is derived from `search.seed`.
    pub search: SearchConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            tol_residual: 1e-8,
            max_steps: 2000,
            weight_prune: 1e-12,
            coalesce: false,
            search: SearchConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_residual > 0.0 && self.tol_residual.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tol_residual must be positive and finite, got {}",
                self.tol_residual
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidInput("max_steps must be positive".into()));
        }
        if !(self.weight_prune >= 0.0 && self.weight_prune.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "weight_prune must be nonnegative and finite, got {}",
                self.weight_prune
            )));
        }
        self.search.validate()
    }
}

/// One weighted projector onto a simple tensor product.
#[derive(Clone, Debug)]
pub struct ProductTerm {
    pub weight: f64,
    /// Unit vector on the first factor.
    pub vec1: Array1<C64>,
    /// Unit vector on the second factor.
    pub vec2: Array1<C64>,
    /// 1-based extraction step that produced the term; 0 if not yet stamped.
    pub step: usize,
}

impl ProductTerm {
    /// |vec1 ⊗ vec2⟩⟨vec1 ⊗ vec2|.
    pub fn projector(&self) -> Array2<C64> {
        outer(&kron_vec(&self.vec1, &self.vec2))
    }

    fn dims(&self) -> Result<BipartiteDims> {
        BipartiteDims::new(self.vec1.len(), self.vec2.len())
    }
}

/// Progress record for one extraction step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepStat {
    /// 1-based step index.
    pub step: usize,
    /// Σ w² over the terms banked this step.
    pub tr_a2: f64,
    /// Tr H² entering the step.
    pub tr_h2_before: f64,
    /// Tr H² after subtracting the banked terms.
    pub tr_h2_after: f64,
    /// Search objective in the winning basis.
    pub objective: f64,
    /// Frobenius norm of the remainder after the step.
    pub residual_hs: f64,
    /// True when the winning basis came from the probe family.
    pub used_probe_fallback: bool,
}

/// Everything [`decompose`] extracted, plus the unextracted residual.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub input: HermitianState,
    pub terms: Vec<ProductTerm>,
    pub residual: HermitianState,
    pub stats: Vec<StepStat>,
    pub converged: bool,
}

impl Decomposition {
    pub fn steps(&self) -> usize {
        self.stats.len()
    }

    pub fn residual_hs(&self) -> f64 {
        fro_norm(&self.residual)
    }

    pub fn residual_op(&self) -> f64 {
        op_norm(&self.residual)
    }

    /// ‖input − Σ w·P − residual‖_F, the banked-versus-stored discrepancy.
    pub fn bookkeeping_error(&self) -> f64 {
        let mut acc = self.input.matrix().clone();
        for t in &self.terms {
            let p = t.projector();
            acc.zip_mut_with(&p, |a, b| *a -= t.weight * b);
        }
        acc -= self.residual.matrix();
        acc.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Iteratively extract product-diagonal mass from ρ until the remainder is
/// negligible or the step budget runs out.
///
/// Fails with a pipeline stall (carrying the partial result) when a step
/// cannot bank any term above the prune threshold, and with invalid-input
/// when ρ is not a density matrix within 1e-10.
pub fn decompose(rho: &HermitianState, cfg: &PipelineConfig) -> Result<Decomposition> {
    cfg.validate()?;
    let violations = validate_density(rho.matrix(), 1e-10);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::InvalidInput(format!(
            "not a density matrix: {}",
            list.join("; ")
        )));
    }
    let dims = rho.dims();
    let mut remainder = rho.clone();
    let mut terms: Vec<ProductTerm> = Vec::new();
    let mut stats: Vec<StepStat> = Vec::new();
    let mut converged = false;
    let mut step = 0;
    loop {
        let residual = fro_norm(&remainder);
        if residual <= cfg.tol_residual {
            converged = true;
            break;
        }
        if step >= cfg.max_steps {
            break;
        }
        step += 1;
        let step_search = SearchConfig {
            seed: derive_seed(cfg.search.seed, step as u64),
            ..cfg.search.clone()
        };
        let found = match maximize(&remainder, &step_search) {
            Ok(found) => found,
            Err(Error::SearchStall { .. }) => {
                return Err(stall(step, residual, rho, terms, remainder, stats))
            }
            Err(e) => return Err(e),
        };
        let piece = split(&remainder, &found.basis)?;
        let mut banked = diag_to_terms(&piece, cfg.weight_prune);
        if banked.is_empty() {
            return Err(stall(step, residual, rho, terms, remainder, stats));
        }
        for t in &mut banked {
            t.step = step;
        }
        let mut next = remainder.matrix().clone();
        let mut banked_mass = 0.0;
        for t in &banked {
            banked_mass += t.weight * t.weight;
            let p = t.projector();
            next.zip_mut_with(&p, |a, b| *a -= t.weight * b);
        }
        let next = HermitianState::new(dims, next)?;
        let tr_h2_after = fro_norm(&next).powi(2);
        stats.push(StepStat {
            step,
            tr_a2: banked_mass,
            tr_h2_before: residual * residual,
            tr_h2_after,
            objective: found.objective,
            residual_hs: tr_h2_after.sqrt(),
            used_probe_fallback: found.used_probe_fallback,
        });
        terms.extend(banked);
        remainder = next;
    }
    Ok(Decomposition {
        input: rho.clone(),
        terms,
        residual: remainder,
        stats,
        converged,
    })
}

fn stall(
    step: usize,
    residual: f64,
    rho: &HermitianState,
    terms: Vec<ProductTerm>,
    remainder: HermitianState,
    stats: Vec<StepStat>,
) -> Error {
    Error::PipelineStall {
        step,
        residual,
        partial: Box::new(Decomposition {
            input: rho.clone(),
            terms,
            residual: remainder,
            stats,
            converged: false,
        }),
    }
}

/// The two separable sides of a finished decomposition.
///
/// ρ ≈ a·ρ⁺ − b·ρ⁻ with a − b = 1; the stored term weights of each side are
/// normalized to sum to one, so the sides are density matrices on their own.
#[derive(Clone, Debug)]
pub struct Pseudomixture {
    pub a: f64,
    pub b: f64,
    pub plus_terms: Vec<ProductTerm>,
    /// Terms of ρ⁻ with positive normalized weights; empty when b = 0.
    pub minus_terms: Vec<ProductTerm>,
    /// Frobenius norm of the unextracted residual at assembly time.
    pub residual_hs: f64,
}

impl Pseudomixture {
    pub fn plus_state(&self) -> Result<HermitianState> {
        mixture_state(&self.plus_terms)
    }

    pub fn minus_state(&self) -> Result<HermitianState> {
        mixture_state(&self.minus_terms)
    }
}

fn mixture_state(terms: &[ProductTerm]) -> Result<HermitianState> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidInput("mixture has no terms".into()))?;
    let dims = first.dims()?;
    let d = dims.dim();
    let mut acc = Array2::<C64>::zeros((d, d));
    for t in terms {
        if t.dims()? != dims {
            return Err(Error::DimMismatch(
                "mixture terms live on different factor dimensions".into(),
            ));
        }
        let p = t.projector();
        acc.zip_mut_with(&p, |a, b| *a += t.weight * b);
    }
    HermitianState::new(dims, acc)
}

/// Options for [`assemble`].
#[derive(Clone, Debug)]
pub struct AssembleOptions {
    /// Drop terms with |w| at or below this before grouping.
    pub weight_prune: f64,
    /// Merge terms whose product vectors agree up to a global phase.
    pub coalesce: bool,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        Self {
            weight_prune: 1e-12,
            coalesce: false,
        }
    }
}

/// Group a decomposition's terms by weight sign into ρ⁺ and ρ⁻ and fix the
/// scalars so that a − b = 1 holds exactly.
///
/// The raw sign masses S± satisfy S⁺ − S⁻ = 1 up to the residual trace, so
/// forcing the identity only moves the larger scalar by that much.
pub fn assemble(dec: &Decomposition, opts: &AssembleOptions) -> Result<Pseudomixture> {
    let mut terms: Vec<ProductTerm> = if opts.coalesce {
        coalesce_terms(&dec.terms)
    } else {
        dec.terms.clone()
    };
    terms.retain(|t| t.weight.abs() > opts.weight_prune);
    if terms.is_empty() {
        return Err(Error::InvalidInput(
            "decomposition has no terms above the prune threshold".into(),
        ));
    }
    let s_plus: f64 = terms
        .iter()
        .filter(|t| t.weight > 0.0)
        .map(|t| t.weight)
        .sum();
    let s_minus: f64 = terms
        .iter()
        .filter(|t| t.weight < 0.0)
        .map(|t| -t.weight)
        .sum();
    let (a, b) = if s_plus >= s_minus {
        (1.0 + s_minus, s_minus)
    } else {
        (s_plus, s_plus - 1.0)
    };
    if b < 0.0 {
        return Err(Error::InvalidInput(format!(
            "sign masses S+={s_plus:.6e}, S-={s_minus:.6e} do not admit a - b = 1 with a, b >= 0"
        )));
    }
    let mut plus_terms = Vec::new();
    let mut minus_terms = Vec::new();
    for t in terms {
        if t.weight > 0.0 {
            plus_terms.push(ProductTerm {
                weight: t.weight / s_plus,
                ..t
            });
        } else {
            minus_terms.push(ProductTerm {
                weight: -t.weight / s_minus,
                ..t
            });
        }
    }
    Ok(Pseudomixture {
        a,
        b,
        plus_terms,
        minus_terms,
        residual_hs: dec.residual_hs(),
    })
}

/// a·ρ⁺ − b·ρ⁻ as a matrix.
pub fn reconstruct(pm: &Pseudomixture) -> Result<HermitianState> {
    let plus = pm.plus_state()?;
    let dims = plus.dims();
    let mut acc = plus.matrix().mapv(|z| z * pm.a);
    if !pm.minus_terms.is_empty() {
        let minus = pm.minus_state()?;
        if minus.dims() != dims {
            return Err(Error::DimMismatch(
                "plus and minus parts live on different factor dimensions".into(),
            ));
        }
        acc.zip_mut_with(minus.matrix(), |x, y| *x -= pm.b * y);
    }
    HermitianState::new(dims, acc)
}

const MERGE_FIDELITY: f64 = 1.0 - 1e-10;

/// Merge terms whose product vectors agree up to global phase, summing
/// weights and keeping the vectors of the heavier member.
pub fn coalesce_terms(terms: &[ProductTerm]) -> Vec<ProductTerm> {
    let mut out: Vec<ProductTerm> = Vec::new();
    'next_term: for t in terms {
        for kept in out.iter_mut() {
            if kept.vec1.len() != t.vec1.len() || kept.vec2.len() != t.vec2.len() {
                continue;
            }
            let f1: C64 = kept
                .vec1
                .iter()
                .zip(t.vec1.iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let f2: C64 = kept
                .vec2
                .iter()
                .zip(t.vec2.iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            if f1.norm_sqr() * f2.norm_sqr() > MERGE_FIDELITY {
                if t.weight.abs() > kept.weight.abs() {
                    kept.vec1 = t.vec1.clone();
                    kept.vec2 = t.vec2.clone();
                    kept.step = t.step;
                }
                kept.weight += t.weight;
                continue 'next_term;
            }
        }
        out.push(t.clone());
    }
    out
}
