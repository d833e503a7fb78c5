use super::CstarError;
use crate::config::Config;
use crate::linalg::{frob, hs_inner, CMat};

/// A *-closed algebra of `d×d` matrices, stored as a Hilbert–Schmidt
/// orthonormal basis.
#[derive(Clone, Debug)]
pub struct MatrixAlgebraSpan {
    dim: usize,
    basis: Vec<CMat>,
}

impl MatrixAlgebraSpan {
    /// Ambient size `d`.
    pub fn ambient(&self) -> usize {
        self.dim
    }

    /// Linear dimension of the algebra.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    /// Distance from `m` to the span.
    pub fn residual(&self, m: &CMat) -> f64 {
        let mut v = m.clone();
        for _ in 0..2 {
            for q in &self.basis {
                let z = hs_inner(q, &v);
                v -= q * z;
            }
        }
        frob(&v)
    }

    pub fn contains(&self, m: &CMat, tol: f64) -> bool {
        m.shape() == (self.dim, self.dim) && self.residual(m) <= tol * frob(m).max(1.0)
    }

    /// Largest residual of `b_i b_j` and `b_i*` over all basis pairs; zero for
    /// an exactly closed algebra.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            worst = worst.max(self.residual(&a.adjoint()));
            for b in &self.basis {
                worst = worst.max(self.residual(&(a * b)));
            }
        }
        worst
    }
}

/// Orthogonalises `v` against `basis` (modified Gram–Schmidt, two passes) and
/// appends it if what is left exceeds the drop threshold.
fn push_orthogonal(basis: &mut Vec<CMat>, v: &CMat, drop_tol: f64) -> bool {
    let scale = frob(v).max(1.0);
    let mut w = v.clone();
    for _ in 0..2 {
        for q in basis.iter() {
            let z = hs_inner(q, &w);
            w -= q * z;
        }
    }
    let r = frob(&w);
    if r <= drop_tol * scale {
        return false;
    }
    basis.push(w / crate::linalg::c(r, 0.0));
    true
}

/// Orthonormal basis of the linear span of `mats`.
pub(crate) fn orthonormal_span(mats: &[CMat], drop_tol: f64) -> Vec<CMat> {
    let mut basis = Vec::new();
    for m in mats {
        push_orthogonal(&mut basis, m, drop_tol);
    }
    basis
}

/// The smallest *-closed, product-closed subspace of `M_d` containing the
/// generators.
///
/// The generators are first made *-closed; every word in them is then a left
/// multiple of a shorter word, so the span is grown by multiplying each newly
/// found basis vector by the generator basis until nothing new appears.
pub fn span_closure(generators: &[CMat], d: usize, cfg: &Config) -> Result<MatrixAlgebraSpan, CstarError> {
    for g in generators {
        if g.shape() != (d, d) {
            return Err(CstarError::DimensionMismatch { expected: d, found: g.nrows().max(g.ncols()) });
        }
    }
    let mut seed = Vec::with_capacity(2 * generators.len());
    for g in generators {
        seed.push(g.clone());
        seed.push(g.adjoint());
    }
    let gens = orthonormal_span(&seed, cfg.drop_tol);
    let mut basis = gens.clone();
    let mut next = 0;
    while next < basis.len() && basis.len() < d * d {
        let b = basis[next].clone();
        for g in &gens {
            push_orthogonal(&mut basis, &(g * &b), cfg.drop_tol);
        }
        next += 1;
    }
    Ok(MatrixAlgebraSpan { dim: d, basis })
}

/// Distance from `m` to the span, or `DimensionMismatch`.
pub fn span_residual(span: &MatrixAlgebraSpan, m: &CMat) -> Result<f64, CstarError> {
    if m.shape() != (span.dim, span.dim) {
        return Err(CstarError::DimensionMismatch { expected: span.dim, found: m.nrows() });
    }
    Ok(span.residual(m))
}

/// `s1 = s2` as subspaces: each orthonormal basis lies in the other span.
pub fn algebra_equal(s1: &MatrixAlgebraSpan, s2: &MatrixAlgebraSpan, tol: f64) -> Result<bool, CstarError> {
    if s1.dim != s2.dim {
        return Err(CstarError::DimensionMismatch { expected: s1.dim, found: s2.dim });
    }
    if s1.dimension() != s2.dimension() {
        return Ok(false);
    }
    Ok(s1.basis.iter().all(|b| s2.residual(b) <= tol) && s2.basis.iter().all(|b| s1.residual(b) <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, eye, random_gaussian, real};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn identity_spans_one_dimension() {
        let s = span_closure(&[eye(2)], 2, &cfg()).unwrap();
        assert_eq!(s.dimension(), 1);
        let s = span_closure(&[eye(2), eye(2) * c(0.0, 1.0)], 2, &cfg()).unwrap();
        assert_eq!(s.dimension(), 1);
    }

    #[test]
    fn one_projection() {
        let p = real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let s = span_closure(&[p], 2, &cfg()).unwrap();
        assert_eq!(s.dimension(), 1);
        assert!(!s.contains(&eye(2), 1e-9));
    }

    #[test]
    fn diagonals_and_shift_give_m2() {
        let p = real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let q = real(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let shift = real(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let s = span_closure(&[p, q, shift], 2, &cfg()).unwrap();
        assert_eq!(s.dimension(), 4);
        assert!(s.closure_residual() < 1e-12);
    }

    #[test]
    fn closure_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_gaussian(3, 3, &mut rng);
        let p = real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let a = &p * a * &p;
        let s = span_closure(&[a], 3, &cfg()).unwrap();
        assert_eq!(s.dimension(), 4);
        let again = span_closure(s.basis(), 3, &cfg()).unwrap();
        assert_eq!(again.dimension(), s.dimension());
        assert!(algebra_equal(&s, &again, 1e-9).unwrap());
    }

    #[test]
    fn equality_and_mismatch() {
        let s1 = span_closure(&[eye(2)], 2, &cfg()).unwrap();
        let s2 = span_closure(&[eye(2) * c(0.0, 3.0)], 2, &cfg()).unwrap();
        assert!(algebra_equal(&s1, &s2, 1e-9).unwrap());
        let s3 = span_closure(&[real(2, 2, &[1.0, 0.0, 0.0, 0.0])], 2, &cfg()).unwrap();
        assert!(!algebra_equal(&s1, &s3, 1e-9).unwrap());
        let s4 = span_closure(&[eye(3)], 3, &cfg()).unwrap();
        assert!(matches!(algebra_equal(&s1, &s4, 1e-9), Err(CstarError::DimensionMismatch { .. })));
        assert!(span_closure(&[eye(3)], 2, &cfg()).is_err());
    }

    #[test]
    fn empty_generators() {
        let s = span_closure(&[], 2, &cfg()).unwrap();
        assert_eq!(s.dimension(), 0);
        let s = span_closure(&[CMat::zeros(2, 2)], 2, &cfg()).unwrap();
        assert_eq!(s.dimension(), 0);
    }
}
