//! Dense complex matrix helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Builds a matrix from real row-major entries.
pub fn real(rows: usize, cols: usize, data: &[f64]) -> CMat {
    assert_eq!(data.len(), rows * cols);
    CMat::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
}

/// Frobenius norm.
pub fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frob_dist(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.iter().all(|z| *z == ZERO) {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// `‖W W* W − W‖_F`, zero exactly when `W` is a partial isometry.
pub fn partial_isometry_residual(w: &CMat) -> f64 {
    let wwsw = w * w.adjoint() * w;
    frob_dist(&wwsw, w)
}

pub fn unitary_residual(u: &CMat) -> f64 {
    frob_dist(&(u * u.adjoint()), &eye(u.nrows()))
}

/// Hilbert–Schmidt inner product `tr(a* b)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn block_diag(blocks: &[CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((off, off), (k, k)).copy_from(b);
        off += k;
    }
    out
}

/// Direct sum `a ⊕ b`.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    block_diag(&[a.clone(), b.clone()])
}

/// `k`-fold amplification `a ⊕ ⋯ ⊕ a`.
pub fn amplify(a: &CMat, k: usize) -> CMat {
    block_diag(&vec![a.clone(); k])
}

/// Complex Gaussian matrix with independent standard normal parts.
pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unitary from the QR factorisation of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal folded back into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = random_gaussian(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..5 {
            let u = random_unitary(n, &mut rng);
            assert!(unitary_residual(&u) < 1e-12);
        }
    }

    #[test]
    fn shift_is_partial_isometry() {
        let s = real(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(partial_isometry_residual(&s), 0.0);
        let not = real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!(partial_isometry_residual(&not) > 0.1);
    }

    #[test]
    fn op_norm_of_diagonal() {
        let d = real(2, 2, &[3.0, 0.0, 0.0, -5.0]);
        assert!((op_norm(&d) - 5.0).abs() < 1e-12);
        assert_eq!(op_norm(&zeros(3)), 0.0);
    }

    #[test]
    fn direct_sum_layout() {
        let a = real(1, 1, &[2.0]);
        let b = real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let s = direct_sum(&a, &b);
        assert_eq!(s.shape(), (3, 3));
        assert_eq!(s[(0, 0)], c(2.0, 0.0));
        assert_eq!(s[(2, 1)], c(3.0, 0.0));
        assert_eq!(s[(0, 1)], ZERO);
    }
}
