//! Split a Hermitian operator into a product-diagonal part and its
//! orthogonal remainder.
//!
//! Given a local basis change u ⊗ v, any Hermitian M decomposes as
//! M = A + H where A is the pinching of M onto the product-basis diagonal,
//!
//! ```text
//! A = Σ_kl w_kl · |u_k ⊗ v_l⟩⟨u_k ⊗ v_l|,    w_kl = ⟨u_k ⊗ v_l| M |u_k ⊗ v_l⟩,
//! ```
//!
//! and H = M − A carries no product-diagonal mass. The two parts are
//! orthogonal under the Hilbert-Schmidt inner product, H is traceless, and
//! ‖M‖²_F = Tr A² + Tr H². A is manifestly a real combination of simple
//! tensor projectors, which is what the decomposition pipeline banks.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::Rng;

use crate::linalg::{
    self, fro_norm, haar_unitary, kron, unitarity_defect, BipartiteDims, HermitianState,
};
use crate::pipeline::ProductTerm;
use crate::{Error, Result};

/// Largest admissible ‖x†x − I‖_F for each factor of a basis pair.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A pair of local unitaries (u, v) acting on the factors as u ⊗ v.
///
/// Both factors are validated against [`UNITARITY_TOL`] at construction, so
/// holding a `UnitaryPair` is proof of near-unitarity.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryPair {
    u: Array2<C64>,
    v: Array2<C64>,
}

impl UnitaryPair {
    pub fn new(u: Array2<C64>, v: Array2<C64>) -> Result<Self> {
        if u.nrows() != u.ncols() || v.nrows() != v.ncols() {
            return Err(Error::DimMismatch(format!(
                "basis factors must be square, got {}x{} and {}x{}",
                u.nrows(),
                u.ncols(),
                v.nrows(),
                v.ncols()
            )));
        }
        for m in [&u, &v] {
            let defect = unitarity_defect(m);
            if defect.is_nan() || defect > UNITARITY_TOL {
                return Err(Error::InvalidInput(format!(
                    "basis factor is not unitary: defect {defect:.3e} exceeds {UNITARITY_TOL:.1e}"
                )));
            }
        }
        Ok(Self { u, v })
    }

    /// Wrap factors already known to be unitary.
    pub(crate) fn from_unitary_parts(u: Array2<C64>, v: Array2<C64>) -> Self {
        debug_assert!(unitarity_defect(&u) <= 1e-6);
        debug_assert!(unitarity_defect(&v) <= 1e-6);
        Self { u, v }
    }

    pub fn identity(dims: BipartiteDims) -> Self {
        Self {
            u: Array2::eye(dims.d1()),
            v: Array2::eye(dims.d2()),
        }
    }

    pub fn haar<R: Rng + ?Sized>(dims: BipartiteDims, rng: &mut R) -> Self {
        Self {
            u: haar_unitary(dims.d1(), rng),
            v: haar_unitary(dims.d2(), rng),
        }
    }

    pub fn factor1(&self) -> &Array2<C64> {
        &self.u
    }

    pub fn factor2(&self) -> &Array2<C64> {
        &self.v
    }

    pub fn matches(&self, dims: BipartiteDims) -> bool {
        self.u.nrows() == dims.d1() && self.v.nrows() == dims.d2()
    }

    /// The composite basis change u ⊗ v.
    pub fn product(&self) -> Array2<C64> {
        kron(&self.u, &self.v)
    }

    /// Worst factor unitarity defect.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.u).max(unitarity_defect(&self.v))
    }
}

/// Outcome of one product-diagonal split.
#[derive(Clone, Debug)]
pub struct SplitResult {
    /// Basis the diagonal was read in.
    pub basis: UnitaryPair,
    /// Real diagonal weights, indexed by factor basis indices (k, l).
    pub diag_weights: Array2<f64>,
    /// H = M − A, expressed in the original basis.
    pub remainder: HermitianState,
    /// Tr A² = Σ w².
    pub tr_a2: f64,
    /// Tr H².
    pub tr_h2: f64,
}

impl SplitResult {
    /// Materialize the diagonal part A in the original basis.
    pub fn diag_matrix(&self) -> HermitianState {
        let dims = self.remainder.dims();
        let b = self.basis.product();
        HermitianState::from_hermitian_parts(dims, weighted_columns(&b, &self.diag_weights, dims))
    }

    /// The part of the remainder coupling basis vectors that differ in both
    /// factors, expressed in the original basis.
    ///
    /// Matrix elements |u_i ⊗ v_j⟩⟨u_k ⊗ v_l| with i = k or j = l are
    /// dropped. For two-qubit density matrices this component has operator
    /// norm at most 1/2 under any product basis; the full remainder does
    /// not (a pure product state read in an unaligned basis pushes it up to
    /// 3/4). The two coincide whenever single-factor coherences vanish, as
    /// for the Bell pair or any maximally entangled state in its Schmidt
    /// basis.
    pub fn cross_component(&self) -> HermitianState {
        let dims = self.remainder.dims();
        let b = self.basis.product();
        let bh = b.t().mapv(|z| z.conj());
        let rotated = bh.dot(self.remainder.matrix()).dot(&b);
        let d = dims.dim();
        let mut kept = Array2::<C64>::zeros((d, d));
        for row in 0..d {
            let (i, j) = dims.factors(row);
            for col in 0..d {
                let (k, l) = dims.factors(col);
                if i != k && j != l {
                    kept[[row, col]] = rotated[[row, col]];
                }
            }
        }
        let back = b.dot(&kept).dot(&bh);
        HermitianState::from_hermitian_parts(dims, linalg::symmetrize(&back))
    }
}

/// Σ_K w_K · b_K b_K† over composite columns, exactly Hermitian.
fn weighted_columns(b: &Array2<C64>, weights: &Array2<f64>, dims: BipartiteDims) -> Array2<C64> {
    let d = dims.dim();
    let mut a = Array2::<C64>::zeros((d, d));
    for k in 0..dims.d1() {
        for l in 0..dims.d2() {
            let w = weights[[k, l]];
            if w == 0.0 {
                continue;
            }
            let kk = dims.composite(k, l);
            for r in 0..d {
                for c in r..d {
                    let add = w * (b[[r, kk]] * b[[c, kk]].conj());
                    a[[r, c]] += add;
                    if c > r {
                        a[[c, r]] += add.conj();
                    }
                }
            }
        }
    }
    for r in 0..d {
        a[[r, r]] = C64::new(a[[r, r]].re, 0.0);
    }
    a
}

fn check_basis(m: &HermitianState, basis: &UnitaryPair) -> Result<()> {
    if !basis.matches(m.dims()) {
        return Err(Error::DimMismatch(format!(
            "basis factors are {}x{} and {}x{} but the state lives on {}",
            basis.u.nrows(),
            basis.u.ncols(),
            basis.v.nrows(),
            basis.v.ncols(),
            m.dims()
        )));
    }
    let defect = basis.unitarity_defect();
    if defect.is_nan() || defect > UNITARITY_TOL {
        return Err(Error::InvalidInput(format!(
            "basis drifted from unitarity: defect {defect:.3e}"
        )));
    }
    Ok(())
}

/// Split M into its product-diagonal part and the orthogonal remainder
/// under the given basis.
pub fn split(m: &HermitianState, basis: &UnitaryPair) -> Result<SplitResult> {
    check_basis(m, basis)?;
    let dims = m.dims();
    let b = basis.product();
    let bh = b.t().mapv(|z| z.conj());
    let rotated = bh.dot(m.matrix()).dot(&b);
    let mut diag_weights = Array2::<f64>::zeros((dims.d1(), dims.d2()));
    for k in 0..dims.d1() {
        for l in 0..dims.d2() {
            let kk = dims.composite(k, l);
            diag_weights[[k, l]] = rotated[[kk, kk]].re;
        }
    }
    let a = weighted_columns(&b, &diag_weights, dims);
    let remainder = HermitianState::new(dims, m.matrix() - &a)?;
    let tr_a2 = diag_weights.iter().map(|w| w * w).sum();
    let tr_h2 = fro_norm(&remainder).powi(2);
    Ok(SplitResult {
        basis: basis.clone(),
        diag_weights,
        remainder,
        tr_a2,
        tr_h2,
    })
}

/// Tr A² for the split of M under the basis, without materializing the
/// remainder.
pub fn objective(m: &HermitianState, basis: &UnitaryPair) -> Result<f64> {
    check_basis(m, basis)?;
    let b = basis.product();
    let p = m.matrix().dot(&b);
    let d = m.dims().dim();
    let mut sum = 0.0;
    for kk in 0..d {
        let w: C64 = (0..d).map(|r| b[[r, kk]].conj() * p[[r, kk]]).sum();
        sum += w.re * w.re;
    }
    Ok(sum)
}

/// Expand a split's diagonal into weighted product terms, dropping weights
/// with |w| ≤ prune. The step stamp is left at zero for the caller to set.
pub fn diag_to_terms(s: &SplitResult, prune: f64) -> Vec<ProductTerm> {
    let dims = s.remainder.dims();
    let mut terms = Vec::new();
    for k in 0..dims.d1() {
        for l in 0..dims.d2() {
            let w = s.diag_weights[[k, l]];
            if w.abs() > prune {
                terms.push(ProductTerm {
                    weight: w,
                    vec1: s.basis.u.column(k).to_owned(),
                    vec2: s.basis.v.column(l).to_owned(),
                    step: 0,
                });
            }
        }
    }
    terms
}

/// Simple tensor product of two factor vectors.
pub fn product_vector(vec1: &Array1<C64>, vec2: &Array1<C64>) -> Array1<C64> {
    linalg::kron_vec(vec1, vec2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        bell_state, hs_inner, max_entangled_state, op_norm, outer, random_density,
    };
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn dims(d1: usize, d2: usize) -> BipartiteDims {
        BipartiteDims::new(d1, d2).unwrap()
    }

    #[test]
    fn unitary_pair_rejects_bad_factors() {
        let mut u = Array2::<C64>::eye(2);
        u[[0, 0]] = C64::new(1.0 + 1e-6, 0.0);
        assert!(UnitaryPair::new(u, Array2::eye(2)).is_err());
        let rect = Array2::<C64>::zeros((2, 3));
        assert!(UnitaryPair::new(Array2::eye(2), rect).is_err());
        let nan = Array2::from_elem((2, 2), C64::new(f64::NAN, 0.0));
        assert!(UnitaryPair::new(nan, Array2::eye(2)).is_err());
    }

    #[test]
    fn identity_basis_extracts_the_diagonal() {
        let d = dims(1, 2);
        let m = HermitianState::new(
            d,
            Array2::from_shape_vec(
                (2, 2),
                vec![
                    C64::new(0.7, 0.0),
                    C64::new(0.1, 0.2),
                    C64::new(0.1, -0.2),
                    C64::new(0.3, 0.0),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let s = split(&m, &UnitaryPair::identity(d)).unwrap();
        assert_eq!(s.diag_weights[[0, 0]], 0.7);
        assert_eq!(s.diag_weights[[0, 1]], 0.3);
        assert_abs_diff_eq!(s.tr_a2, 0.49 + 0.09, epsilon = 1e-15);
        assert_eq!(s.remainder.matrix()[[0, 0]], C64::new(0.0, 0.0));
        assert_eq!(s.remainder.matrix()[[0, 1]], C64::new(0.1, 0.2));
    }

    #[test]
    fn split_invariants_hold_for_random_states_and_bases() {
        for (d1, d2) in [(2, 2), (2, 3), (3, 3)] {
            let d = dims(d1, d2);
            for seed in 0..10u64 {
                let m = random_density(d, d.dim(), seed).unwrap();
                let mut rng = ChaCha12Rng::seed_from_u64(1000 + seed);
                let basis = UnitaryPair::haar(d, &mut rng);
                let s = split(&m, &basis).unwrap();
                let fro2 = fro_norm(&m).powi(2);

                let ortho = hs_inner(&s.diag_matrix(), &s.remainder).unwrap();
                assert!(ortho.abs() <= 1e-12 * fro2, "orthogonality {ortho:.3e}");
                assert!(s.remainder.trace().abs() <= 1e-12);
                assert!(
                    (fro2 - s.tr_a2 - s.tr_h2).abs() <= 1e-10,
                    "pythagoras defect {:.3e}",
                    (fro2 - s.tr_a2 - s.tr_h2).abs()
                );
            }
        }
    }

    #[test]
    fn bell_split_under_identity_matches_known_values() {
        let bell = bell_state();
        let s = split(&bell, &UnitaryPair::identity(bell.dims())).unwrap();
        assert_abs_diff_eq!(s.diag_weights[[0, 0]], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.diag_weights[[1, 1]], 0.5, epsilon = 1e-15);
        assert_eq!(s.diag_weights[[0, 1]], 0.0);
        assert_abs_diff_eq!(s.tr_a2, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.tr_h2, 0.5, epsilon = 1e-14);
        // Remainder is the coherence block (|00⟩⟨11| + |11⟩⟨00|)/2.
        assert_abs_diff_eq!(s.remainder.matrix()[[0, 3]].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(op_norm(&s.remainder), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn two_by_two_cross_component_norm_stays_below_half() {
        let d = dims(2, 2);
        for seed in 0..50u64 {
            let rank = (seed as usize % 4) + 1;
            let m = random_density(d, rank, seed).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xabcd);
            let basis = UnitaryPair::haar(d, &mut rng);
            let s = split(&m, &basis).unwrap();
            assert!(op_norm(&s.cross_component()) <= 0.5 + 1e-9);
        }
    }

    #[test]
    fn product_state_in_unaligned_basis_separates_the_components() {
        let d = dims(2, 2);
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let plus = Array1::from_vec(vec![h, h]);
        let psi = product_vector(&plus, &plus);
        let rho = HermitianState::new(d, outer(&psi)).unwrap();
        let s = split(&rho, &UnitaryPair::identity(d)).unwrap();
        // Remainder ρ − I/4 has eigenvalues {3/4, −1/4 ×3}; only the part
        // moving both factor indices obeys the 1/2 bound.
        assert_abs_diff_eq!(op_norm(&s.remainder), 0.75, epsilon = 1e-12);
        let cross = s.cross_component();
        assert_abs_diff_eq!(op_norm(&cross), 0.25, epsilon = 1e-12);
        assert!(hs_inner(&s.diag_matrix(), &cross).unwrap().abs() <= 1e-12);
        assert!(cross.trace().abs() <= 1e-12);
        let single = HermitianState::new(d, s.remainder.matrix() - cross.matrix()).unwrap();
        assert!(hs_inner(&single, &cross).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn bell_cross_component_is_the_whole_remainder() {
        let bell = bell_state();
        let s = split(&bell, &UnitaryPair::identity(bell.dims())).unwrap();
        let cross = s.cross_component();
        let gap: f64 = (s.remainder.matrix() - cross.matrix())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(gap <= 1e-12);
        assert_abs_diff_eq!(op_norm(&cross), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn three_by_three_remainder_can_reach_two_thirds() {
        let me = max_entangled_state(3).unwrap();
        let s = split(&me, &UnitaryPair::identity(me.dims())).unwrap();
        assert_abs_diff_eq!(op_norm(&s.remainder), 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(op_norm(&s.cross_component()), 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn split_is_covariant_under_its_own_basis() {
        let d = dims(2, 3);
        let m = random_density(d, 5, 7).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        let basis = UnitaryPair::haar(d, &mut rng);
        let direct = split(&m, &basis).unwrap();

        let b = basis.product();
        let bh = b.t().mapv(|z| z.conj());
        let rotated = HermitianState::new(d, bh.dot(m.matrix()).dot(&b)).unwrap();
        let in_rotated = split(&rotated, &UnitaryPair::identity(d)).unwrap();
        let mapped_back = b.dot(in_rotated.diag_matrix().matrix()).dot(&bh);

        let dev = (&mapped_back - direct.diag_matrix().matrix())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(dev <= 1e-12, "covariance defect {dev:.3e}");
    }

    #[test]
    fn objective_agrees_with_split_diag_mass() {
        let d = dims(2, 3);
        let m = random_density(d, 6, 3).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        let basis = UnitaryPair::haar(d, &mut rng);
        let s = split(&m, &basis).unwrap();
        let obj = objective(&m, &basis).unwrap();
        assert_abs_diff_eq!(obj, s.tr_a2, epsilon = 1e-12);
    }

    #[test]
    fn diag_to_terms_prunes_and_rebuilds_the_diagonal() {
        let d = dims(2, 2);
        let m = random_density(d, 4, 9).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        let basis = UnitaryPair::haar(d, &mut rng);
        let s = split(&m, &basis).unwrap();

        let terms = diag_to_terms(&s, 0.0);
        let mut rebuilt = Array2::<C64>::zeros((4, 4));
        for t in &terms {
            let pv = product_vector(&t.vec1, &t.vec2);
            rebuilt = rebuilt + outer(&pv).mapv(|z| z * t.weight);
        }
        let dev = (&rebuilt - s.diag_matrix().matrix())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(dev <= 1e-12);

        let coarse = diag_to_terms(&s, 1.0);
        assert!(coarse.len() < terms.len() || terms.iter().all(|t| t.weight.abs() > 1.0));
    }

    #[test]
    fn split_rejects_mismatched_or_drifted_bases() {
        let m = random_density(dims(2, 2), 4, 1).unwrap();
        let wrong = UnitaryPair::identity(dims(2, 3));
        assert!(matches!(split(&m, &wrong), Err(Error::DimMismatch(_))));

        let mut u = Array2::<C64>::eye(2);
        u[[0, 0]] = C64::new(1.0 + 1e-9, 0.0);
        let drifted = UnitaryPair::from_unitary_parts(u, Array2::eye(2));
        assert!(matches!(
            objective(&m, &drifted),
            Err(Error::InvalidInput(_))
        ));
    }
}
