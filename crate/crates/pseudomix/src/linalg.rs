//! Dense Hermitian linear algebra on a bipartite index space.
//!
//! States live on C^d1 ⊗ C^d2 and are stored as D×D complex matrices with
//! D = d1·d2 and the row-major composite index k = i·d2 + j. Everything
//! downstream (splitting, searching, the decomposition loop) goes through
//! [`HermitianState`], which guarantees exact Hermitian storage, and
//! [`eigh`], a cyclic Jacobi eigensolver for complex Hermitian matrices.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Largest admissible deviation from Hermitian symmetry on input matrices.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Dimensions of the two tensor factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    d1: usize,
    d2: usize,
}

impl BipartiteDims {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidInput(format!(
                "factor dimensions must be positive, got {d1}x{d2}"
            )));
        }
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    /// Composite dimension D = d1·d2.
    pub fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    /// Composite index of the factor pair (i, j).
    pub fn composite(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.d1 && j < self.d2);
        i * self.d2 + j
    }

    /// Factor pair (i, j) of a composite index.
    pub fn factors(&self, k: usize) -> (usize, usize) {
        debug_assert!(k < self.dim());
        (k / self.d2, k % self.d2)
    }
}

impl std::fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.d1, self.d2)
    }
}

/// A dims-tagged complex matrix that is Hermitian by construction.
///
/// [`HermitianState::new`] rejects matrices whose asymmetry exceeds
/// [`HERMITICITY_TOL`] and symmetrizes the rest to (M + M†)/2, stored so
/// that `m[[r, c]] == m[[c, r]].conj()` holds exactly. Operations in this
/// crate rely on that exactness and never re-check.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianState {
    dims: BipartiteDims,
    mat: Array2<C64>,
}

impl HermitianState {
    pub fn new(dims: BipartiteDims, mat: Array2<C64>) -> Result<Self> {
        let d = dims.dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimMismatch(format!(
                "matrix is {}x{} but dims {} need {}x{}",
                mat.nrows(),
                mat.ncols(),
                dims,
                d,
                d
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput(
                "matrix contains non-finite entries".into(),
            ));
        }
        let asym = hermiticity_defect(&mat);
        if asym > HERMITICITY_TOL {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian: asymmetry {asym:.3e} exceeds {HERMITICITY_TOL:.1e}"
            )));
        }
        Ok(Self {
            dims,
            mat: symmetrize(&mat),
        })
    }

    /// Wrap a matrix that is already exactly Hermitian by construction.
    pub(crate) fn from_hermitian_parts(dims: BipartiteDims, mat: Array2<C64>) -> Self {
        debug_assert!(hermiticity_defect(&mat) == 0.0);
        Self { dims, mat }
    }

    pub fn zero(dims: BipartiteDims) -> Self {
        let d = dims.dim();
        Self {
            dims,
            mat: Array2::zeros((d, d)),
        }
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    /// Trace, real because the diagonal is real.
    pub fn trace(&self) -> f64 {
        (0..self.dims.dim()).map(|k| self.mat[[k, k]].re).sum()
    }
}

/// Maximum entrywise deviation |m[r,c] − conj(m[c,r])|.
pub fn hermiticity_defect(mat: &Array2<C64>) -> f64 {
    let d = mat.nrows();
    let mut worst = 0.0_f64;
    for r in 0..d {
        for c in r..d {
            let dev = (mat[[r, c]] - mat[[c, r]].conj()).norm();
            worst = worst.max(dev);
        }
    }
    worst
}

pub(crate) fn symmetrize(mat: &Array2<C64>) -> Array2<C64> {
    let d = mat.nrows();
    let mut sym = Array2::<C64>::zeros((d, d));
    for r in 0..d {
        sym[[r, r]] = C64::new(mat[[r, r]].re, 0.0);
        for c in (r + 1)..d {
            let avg = 0.5 * (mat[[r, c]] + mat[[c, r]].conj());
            sym[[r, c]] = avg;
            sym[[c, r]] = avg.conj();
        }
    }
    sym
}

/// Eigendecomposition of a Hermitian operator with eigenvalues descending.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    /// Real eigenvalues, largest first.
    pub eigenvalues: Vec<f64>,
    /// Matching orthonormal eigenvectors as columns.
    pub eigenvectors: Array2<C64>,
}

impl SpectralDecomposition {
    /// V Λ V†.
    pub fn reconstruct(&self) -> Array2<C64> {
        let d = self.eigenvalues.len();
        Array2::from_shape_fn((d, d), |(r, c)| {
            (0..d)
                .map(|k| {
                    self.eigenvectors[[r, k]]
                        * self.eigenvalues[k]
                        * self.eigenvectors[[c, k]].conj()
                })
                .sum()
        })
    }

    /// ‖V†V − I‖_F.
    pub fn orthonormality_defect(&self) -> f64 {
        unitarity_defect(&self.eigenvectors)
    }
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
///
/// Two-sided rotations J†AJ with J embedding a unitary 2x2 block chosen to
/// zero one off-diagonal pair; sweeps run until the off-diagonal Frobenius
/// mass reaches rounding level. Returns unsorted eigenvalues and the
/// accumulated eigenvector matrix.
pub(crate) fn jacobi_hermitian(input: &Array2<C64>) -> (Vec<f64>, Array2<C64>) {
    let n = input.nrows();
    let mut a = input.clone();
    let mut v = Array2::<C64>::eye(n);
    if n <= 1 {
        let vals = (0..n).map(|k| a[[k, k]].re).collect();
        return (vals, v);
    }
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let stop = scale * (n as f64) * 1e-16;
    let mut prev_off = f64::INFINITY;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[[p, q]].norm_sqr();
            }
        }
        let off = off.sqrt();
        if off <= stop || off >= prev_off {
            break;
        }
        prev_off = off;
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                // Unitary 2x2 block, columns (p', q'):
                //   p' = c·p + s·ph·q,   q' = −s·conj(ph)·p + c·q
                // with ph = conj(apq)/|apq| so the phases cancel and the
                // rotation angle can annihilate the (p, q) entry.
                let ph = (apq / abs).conj();
                let tau = (a[[q, q]].re - a[[p, p]].re) / (2.0 * abs);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate_cols(&mut a, p, q, c, s, ph);
                rotate_rows(&mut a, p, q, c, s, ph);
                rotate_cols(&mut v, p, q, c, s, ph);
                a[[p, q]] = C64::new(0.0, 0.0);
                a[[q, p]] = C64::new(0.0, 0.0);
                a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
                a[[q, q]] = C64::new(a[[q, q]].re, 0.0);
            }
        }
    }
    let vals = (0..n).map(|k| a[[k, k]].re).collect();
    (vals, v)
}

/// Right-multiply by the embedded block: mixes columns p and q.
pub(crate) fn rotate_cols(m: &mut Array2<C64>, p: usize, q: usize, c: f64, s: f64, ph: C64) {
    let n = m.nrows();
    for r in 0..n {
        let mp = m[[r, p]];
        let mq = m[[r, q]];
        m[[r, p]] = c * mp + s * ph * mq;
        m[[r, q]] = -s * ph.conj() * mp + c * mq;
    }
}

/// Left-multiply by the adjoint block: mixes rows p and q.
pub(crate) fn rotate_rows(m: &mut Array2<C64>, p: usize, q: usize, c: f64, s: f64, ph: C64) {
    let n = m.ncols();
    for col in 0..n {
        let mp = m[[p, col]];
        let mq = m[[q, col]];
        m[[p, col]] = c * mp + s * ph.conj() * mq;
        m[[q, col]] = -s * ph * mp + c * mq;
    }
}

/// Full eigendecomposition of a Hermitian state, eigenvalues descending.
pub fn eigh(m: &HermitianState) -> Result<SpectralDecomposition> {
    let (vals, vecs) = jacobi_hermitian(m.matrix());
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        vals[b]
            .partial_cmp(&vals[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&k| vals[k]).collect();
    let eigenvectors = Array2::from_shape_fn((n, n), |(r, c)| vecs[[r, order[c]]]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Hilbert-Schmidt inner product Tr(X†Y), real for Hermitian operands.
pub fn hs_inner(x: &HermitianState, y: &HermitianState) -> Result<f64> {
    if x.dims() != y.dims() {
        return Err(Error::DimMismatch(format!(
            "hs_inner operands live on {} and {}",
            x.dims(),
            y.dims()
        )));
    }
    let acc: C64 = x
        .matrix()
        .iter()
        .zip(y.matrix().iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(acc.re)
}

/// Frobenius norm ‖X‖_F = sqrt(Tr X²).
pub fn fro_norm(x: &HermitianState) -> f64 {
    x.matrix().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Operator norm, the largest eigenvalue magnitude.
pub fn op_norm(x: &HermitianState) -> f64 {
    let (vals, _) = jacobi_hermitian(x.matrix());
    vals.iter().fold(0.0_f64, |m, &v| m.max(v.abs()))
}

/// ‖M†M − I‖_F, zero exactly when the columns are orthonormal.
pub fn unitarity_defect(m: &Array2<C64>) -> f64 {
    let (rows, cols) = m.dim();
    let mut sum = 0.0;
    for a in 0..cols {
        for b in 0..cols {
            let g: C64 = (0..rows).map(|r| m[[r, a]].conj() * m[[r, b]]).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            sum += (g - C64::new(target, 0.0)).norm_sqr();
        }
    }
    sum.sqrt()
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Array2<C64> {
    let normal = StandardNormal;
    let mut g = Array2::<C64>::zeros((rows, cols));
    for r in 0..rows {
        for c in 0..cols {
            let re: f64 = normal.sample(rng);
            let im: f64 = normal.sample(rng);
            g[[r, c]] = C64::new(re, im);
        }
    }
    g
}

/// Gram-Schmidt in place, columns left to right.
pub(crate) fn orthonormalize(m: &mut Array2<C64>) {
    let d = m.nrows();
    for k in 0..d {
        for j in 0..k {
            let proj: C64 = (0..d).map(|r| m[[r, j]].conj() * m[[r, k]]).sum();
            for r in 0..d {
                let mj = m[[r, j]];
                m[[r, k]] -= proj * mj;
            }
        }
        let norm = (0..d).map(|r| m[[r, k]].norm_sqr()).sum::<f64>().sqrt();
        debug_assert!(norm > 1e-8);
        for r in 0..d {
            m[[r, k]] /= norm;
        }
    }
}

/// Haar-distributed random unitary, drawn by QR of a Ginibre matrix with the
/// positive-diagonal convention.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Array2<C64> {
    loop {
        let mut g = ginibre(d, d, rng);
        let mut ok = true;
        'qr: for k in 0..d {
            for j in 0..k {
                let proj: C64 = (0..d).map(|r| g[[r, j]].conj() * g[[r, k]]).sum();
                for r in 0..d {
                    let gj = g[[r, j]];
                    g[[r, k]] -= proj * gj;
                }
            }
            let norm = (0..d).map(|r| g[[r, k]].norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 * (d as f64).sqrt() {
                ok = false;
                break 'qr;
            }
            for r in 0..d {
                g[[r, k]] /= norm;
            }
        }
        if ok {
            return g;
        }
    }
}

/// Random density matrix G·G†/Tr(G·G†) with G a D×rank Ginibre draw.
///
/// The stream is seeded with ChaCha so equal seeds give bit-identical
/// matrices on every platform.
pub fn random_density(dims: BipartiteDims, rank: usize, seed: u64) -> Result<HermitianState> {
    let d = dims.dim();
    if rank == 0 || rank > d {
        return Err(Error::InvalidInput(format!(
            "rank must lie in 1..={d}, got {rank}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let g = ginibre(d, rank, &mut rng);
    let mut raw = Array2::<C64>::zeros((d, d));
    for r in 0..d {
        for c in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..rank {
                acc += g[[r, k]] * g[[c, k]].conj();
            }
            raw[[r, c]] = acc;
        }
    }
    let tr: f64 = (0..d).map(|k| raw[[k, k]].re).sum();
    raw.mapv_inplace(|z| z / tr);
    HermitianState::new(dims, raw)
}

/// Kronecker product of two matrices.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    Array2::from_shape_fn((ar * br, ac * bc), |(r, c)| {
        a[[r / br, c / bc]] * b[[r % br, c % bc]]
    })
}

/// Kronecker product of two vectors, composite index k = i·len(b) + j.
pub fn kron_vec(a: &Array1<C64>, b: &Array1<C64>) -> Array1<C64> {
    let (na, nb) = (a.len(), b.len());
    Array1::from_shape_fn(na * nb, |k| a[k / nb] * b[k % nb])
}

/// Rank-one projector |v⟩⟨v| (the argument is not normalized here).
pub fn outer(v: &Array1<C64>) -> Array2<C64> {
    let n = v.len();
    Array2::from_shape_fn((n, n), |(r, c)| v[r] * v[c].conj())
}

/// Projector onto the normalized amplitude vector.
pub fn pure_state(dims: BipartiteDims, amplitudes: &[C64]) -> Result<HermitianState> {
    let d = dims.dim();
    if amplitudes.len() != d {
        return Err(Error::DimMismatch(format!(
            "amplitude vector has length {} but dims {} need {}",
            amplitudes.len(),
            dims,
            d
        )));
    }
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-300 {
        return Err(Error::InvalidInput("amplitude vector is zero".into()));
    }
    let v = Array1::from_iter(amplitudes.iter().map(|z| z / norm));
    HermitianState::new(dims, outer(&v))
}

/// Maximally mixed state I/D.
pub fn maximally_mixed(dims: BipartiteDims) -> HermitianState {
    let d = dims.dim();
    let mat = Array2::from_diag_elem(d, C64::new(1.0 / d as f64, 0.0));
    HermitianState::from_hermitian_parts(dims, mat)
}

/// Bell pair (|00⟩ + |11⟩)/√2 on 2x2.
pub fn bell_state() -> HermitianState {
    let dims = BipartiteDims::new(2, 2).expect("2x2 dims");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = [
        C64::new(h, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(h, 0.0),
    ];
    pure_state(dims, &amps).expect("bell amplitudes are valid")
}

/// Werner family p·Bell + (1 − p)·I/4 on 2x2, p in [0, 1].
pub fn werner_state(p: f64) -> Result<HermitianState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "werner mixing parameter must lie in [0, 1], got {p}"
        )));
    }
    let bell = bell_state();
    let dims = bell.dims();
    let mut mat = bell.matrix().mapv(|z| z * p);
    let iso = (1.0 - p) / 4.0;
    for k in 0..4 {
        mat[[k, k]] += iso;
    }
    HermitianState::new(dims, mat)
}

/// Maximally entangled pure state Σ_i |ii⟩/√d on d×d.
pub fn max_entangled_state(d: usize) -> Result<HermitianState> {
    let dims = BipartiteDims::new(d, d)?;
    let amp = 1.0 / (d as f64).sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        amps[dims.composite(i, i)] = C64::new(amp, 0.0);
    }
    pure_state(dims, &amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn dims(d1: usize, d2: usize) -> BipartiteDims {
        BipartiteDims::new(d1, d2).unwrap()
    }

    /// Characteristic polynomial coefficients by the Faddeev-LeVerrier
    /// recursion: p(λ) = λ^n + c[0]·λ^(n−1) + ... + c[n−1].
    fn char_poly(a: &Array2<C64>) -> Vec<C64> {
        let n = a.nrows();
        let mut coeffs = Vec::with_capacity(n);
        let mut m = a.clone();
        for k in 1..=n {
            let tr: C64 = (0..n).map(|i| m[[i, i]]).sum();
            let c = -tr / k as f64;
            coeffs.push(c);
            if k < n {
                let mut shifted = m.clone();
                for i in 0..n {
                    shifted[[i, i]] += c;
                }
                m = a.dot(&shifted);
            }
        }
        coeffs
    }

    /// Durand-Kerner simultaneous root iteration for a monic polynomial.
    fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
        let n = coeffs.len();
        let eval = |z: C64| -> C64 {
            let mut p = C64::new(1.0, 0.0);
            for c in coeffs {
                p = p * z + c;
            }
            p
        };
        let base = C64::new(0.4, 0.9);
        let mut roots: Vec<C64> = (0..n).map(|k| base.powu(k as u32 + 1)).collect();
        for _ in 0..200 {
            let mut max_move = 0.0_f64;
            for i in 0..n {
                let mut denom = C64::new(1.0, 0.0);
                for j in 0..n {
                    if j != i {
                        denom *= roots[i] - roots[j];
                    }
                }
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
                max_move = max_move.max(step.norm());
            }
            if max_move < 1e-14 {
                break;
            }
        }
        roots
    }

    #[test]
    fn composite_index_is_row_major() {
        let d = dims(3, 4);
        assert_eq!(d.composite(0, 0), 0);
        assert_eq!(d.composite(0, 3), 3);
        assert_eq!(d.composite(1, 0), 4);
        assert_eq!(d.composite(2, 3), 11);
        assert_eq!(d.factors(7), (1, 3));
    }

    #[test]
    fn zero_factor_dimension_is_rejected() {
        assert!(BipartiteDims::new(0, 2).is_err());
        assert!(BipartiteDims::new(2, 0).is_err());
    }

    #[test]
    fn hermitian_state_rejects_asymmetry_above_tolerance() {
        let d = dims(1, 2);
        let mut m = Array2::<C64>::eye(2);
        m[[0, 1]] = C64::new(1e-9, 0.0);
        assert!(matches!(
            HermitianState::new(d, m),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn hermitian_state_symmetrizes_small_asymmetry_exactly() {
        let d = dims(1, 2);
        let mut m = Array2::<C64>::eye(2);
        m[[0, 1]] = C64::new(0.3, 1e-11);
        m[[1, 0]] = C64::new(0.3, 0.0);
        let h = HermitianState::new(d, m).unwrap();
        assert_eq!(hermiticity_defect(h.matrix()), 0.0);
        assert_eq!(h.matrix()[[0, 1]], h.matrix()[[1, 0]].conj());
    }

    #[test]
    fn hermitian_state_rejects_wrong_shape_and_nan() {
        let d = dims(2, 2);
        assert!(matches!(
            HermitianState::new(d, Array2::<C64>::eye(3)),
            Err(Error::DimMismatch(_))
        ));
        let mut m = Array2::<C64>::eye(4);
        m[[2, 2]] = C64::new(f64::NAN, 0.0);
        assert!(HermitianState::new(d, m).is_err());
    }

    #[test]
    fn eigh_sorts_descending_on_diagonal_input() {
        let d = dims(1, 3);
        let m = Array2::from_diag(&Array1::from(vec![
            C64::new(1.0, 0.0),
            C64::new(3.0, 0.0),
            C64::new(2.0, 0.0),
        ]));
        let s = eigh(&HermitianState::new(d, m).unwrap()).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 2.0, 1.0]);
        assert_abs_diff_eq!(s.eigenvectors[[1, 0]].norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigh_reconstructs_random_states() {
        for seed in 0..20 {
            let d = dims(2, 3);
            let rho = random_density(d, 4, seed).unwrap();
            let s = eigh(&rho).unwrap();
            let err = (&s.reconstruct() - rho.matrix())
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-10, "seed {seed}: reconstruction error {err:.3e}");
            assert!(s.orthonormality_defect() <= 1e-10);
            let sorted = s.eigenvalues.windows(2).all(|w| w[0] >= w[1]);
            assert!(sorted);
        }
    }

    #[test]
    fn eigh_matches_characteristic_polynomial_roots() {
        for seed in [7_u64, 19, 23] {
            let d = dims(2, 3);
            let rho = random_density(d, 6, seed).unwrap();
            let s = eigh(&rho).unwrap();
            let roots = poly_roots(&char_poly(rho.matrix()));
            let mut reals: Vec<f64> = roots
                .iter()
                .map(|z| {
                    assert!(z.im.abs() < 1e-8, "nonreal root {z}");
                    z.re
                })
                .collect();
            reals.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (lhs, rhs) in s.eigenvalues.iter().zip(reals.iter()) {
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn norms_and_inner_products_agree_on_known_values() {
        let d = dims(1, 2);
        let m = HermitianState::new(
            d,
            Array2::from_diag(&Array1::from(vec![C64::new(0.9, 0.0), C64::new(-1.2, 0.0)])),
        )
        .unwrap();
        assert_abs_diff_eq!(op_norm(&m), 1.2, epsilon = 1e-14);
        assert_abs_diff_eq!(fro_norm(&m), (0.81_f64 + 1.44).sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(
            hs_inner(&m, &m).unwrap(),
            fro_norm(&m).powi(2),
            epsilon = 1e-13
        );
        let other = maximally_mixed(dims(2, 2));
        assert!(matches!(hs_inner(&m, &other), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn random_density_is_a_density_matrix() {
        let d = dims(2, 3);
        let rho = random_density(d, 3, 42).unwrap();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
        let s = eigh(&rho).unwrap();
        assert!(*s.eigenvalues.last().unwrap() >= -1e-10);
        // D×rank factor with rank 3 leaves three null directions.
        assert!(s.eigenvalues[3..].iter().all(|v| v.abs() <= 1e-10));
    }

    #[test]
    fn random_density_is_reproducible_per_seed() {
        let d = dims(2, 2);
        let a = random_density(d, 2, 5).unwrap();
        let b = random_density(d, 2, 5).unwrap();
        let c = random_density(d, 2, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(random_density(d, 0, 1).is_err());
        assert!(random_density(d, 5, 1).is_err());
    }

    #[test]
    fn haar_unitary_is_unitary_and_seed_stable() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let u = haar_unitary(5, &mut rng);
        assert!(unitarity_defect(&u) <= 1e-12);
        let mut rng2 = ChaCha12Rng::seed_from_u64(11);
        assert_eq!(u, haar_unitary(5, &mut rng2));
    }

    #[test]
    fn kron_products_expand_row_major() {
        let a = Array2::from_shape_vec(
            (2, 2),
            vec![
                C64::new(1.0, 0.0),
                C64::new(2.0, 0.0),
                C64::new(3.0, 0.0),
                C64::new(4.0, 0.0),
            ],
        )
        .unwrap();
        let b = Array2::from_shape_vec(
            (2, 2),
            vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let k = kron(&a, &b);
        assert_eq!(k[[0, 1]], C64::new(1.0, 0.0));
        assert_eq!(k[[0, 3]], C64::new(2.0, 0.0));
        assert_eq!(k[[3, 0]], C64::new(3.0, 0.0));
        let va = Array1::from(vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)]);
        let vb = Array1::from(vec![C64::new(0.5, 0.0), C64::new(0.0, -1.0)]);
        let kv = kron_vec(&va, &vb);
        assert_eq!(kv[1], C64::new(0.0, -1.0));
        assert_eq!(kv[2], C64::new(0.0, 1.0));
    }

    #[test]
    fn named_states_have_expected_entries() {
        let bell = bell_state();
        assert_abs_diff_eq!(bell.matrix()[[0, 0]].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(bell.matrix()[[0, 3]].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(bell.trace(), 1.0, epsilon = 1e-15);

        let w0 = werner_state(0.0).unwrap();
        assert_eq!(w0.matrix(), maximally_mixed(dims(2, 2)).matrix());
        assert!(werner_state(1.5).is_err());

        let me = max_entangled_state(3).unwrap();
        assert_abs_diff_eq!(me.trace(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(me.matrix()[[0, 8]].re, 1.0 / 3.0, epsilon = 1e-15);

        let unnormalized = [C64::new(2.0, 0.0), C64::new(0.0, 0.0)];
        let p = pure_state(dims(1, 2), &unnormalized).unwrap();
        assert_abs_diff_eq!(p.trace(), 1.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn composite_and_factors_are_inverse(d1 in 1_usize..6, d2 in 1_usize..6, k in 0_usize..36) {
            let d = dims(d1, d2);
            let k = k % d.dim();
            let (i, j) = d.factors(k);
            prop_assert_eq!(d.composite(i, j), k);
        }

        #[test]
        fn symmetrize_is_idempotent(seed in 0_u64..50) {
            let d = dims(2, 2);
            let rho = random_density(d, 4, seed).unwrap();
            let once = rho.matrix().clone();
            let twice = HermitianState::new(d, once.clone()).unwrap();
            prop_assert_eq!(&once, twice.matrix());
        }
    }
}
