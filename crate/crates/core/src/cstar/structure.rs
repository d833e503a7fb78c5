use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::span::{orthonormal_span, MatrixAlgebraSpan};
use super::CstarError;
use crate::config::Config;
use crate::linalg::{c, commutator, frob, hs_inner, CMat, C64};

const MAX_ATTEMPTS: u32 = 8;

/// Wedderburn data ⊕ M_{n_k} of a finite-dimensional C*-algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub dimension: usize,
    /// Simple block sizes in increasing order.
    pub blocks: Vec<usize>,
    pub center_dim: usize,
    pub seed: u64,
    pub attempts: u32,
}

impl StructureReport {
    /// Same isomorphism class.
    pub fn same_structure(&self, other: &StructureReport) -> bool {
        self.dimension == other.dimension && self.blocks == other.blocks
    }
}

/// Coefficients of an orthonormal basis of `{Σ c_i b_i : [Σ c_i b_i, b_j] = 0 ∀j}`.
fn center_basis(basis: &[CMat], rank_tol: f64) -> Vec<CMat> {
    let k = basis.len();
    let d2 = basis[0].len();
    let mut m = DMatrix::<C64>::zeros(k * d2, k);
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let comm = commutator(bi, bj);
            for (r, z) in comm.iter().enumerate() {
                m[(j * d2 + r, i)] = *z;
            }
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = rank_tol * smax.max(1.0);
    let mut out = Vec::new();
    // rows of v_t beyond the number of singular values do not exist for tall
    // matrices, so every null direction comes with a small singular value
    for (idx, s) in svd.singular_values.iter().enumerate() {
        if *s <= cutoff {
            let coeffs: Vec<C64> = (0..k).map(|i| v_t[(idx, i)].conj()).collect();
            let mut z = CMat::zeros(basis[0].nrows(), basis[0].ncols());
            for (ci, bi) in coeffs.iter().zip(basis) {
                z += bi * *ci;
            }
            out.push(z);
        }
    }
    out
}

fn min_gap(vals: &[f64]) -> f64 {
    let mut v = vals.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// Numerical Wedderburn decomposition of a *-closed matrix algebra.
///
/// The center is the null space of the commutator map; a random self-adjoint
/// central element `h = Σ λ_k P_k` separates the minimal central projections
/// `P_k`, which are recovered as eigenvectors of `z ↦ hz` on the center. Each
/// `P_k A` is a full matrix algebra whose dimension is a perfect square.
pub fn structure_report(span: &MatrixAlgebraSpan, cfg: &Config) -> Result<StructureReport, CstarError> {
    let dimension = span.dimension();
    if dimension == 0 {
        return Ok(StructureReport { dimension, blocks: vec![], center_dim: 0, seed: cfg.seed, attempts: 0 });
    }
    let basis = span.basis();
    let center = orthonormal_span(&center_basis(basis, cfg.rank_tol), cfg.drop_tol);
    let m = center.len();
    if m == 0 {
        return Err(CstarError::IllConditioned("center has dimension zero".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut last = String::new();
    for attempt in 1..=MAX_ATTEMPTS {
        let mut h = CMat::zeros(span.ambient(), span.ambient());
        for z in &center {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let w = z * c(re, im);
            h += &w + w.adjoint();
        }
        let mut l = DMatrix::<C64>::zeros(m, m);
        for (j, zj) in center.iter().enumerate() {
            let hz = &h * zj;
            for (i, zi) in center.iter().enumerate() {
                l[(i, j)] = hs_inner(zi, &hz);
            }
        }
        let herm = (&l + l.adjoint()) * c(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        let vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let gap = min_gap(&vals);
        if m > 1 && gap < cfg.gap_tol * scale {
            last = format!("eigenvalue gap {gap:.3e}");
            continue;
        }
        let mut blocks = Vec::with_capacity(m);
        let mut ok = true;
        for k in 0..m {
            let mut q = CMat::zeros(span.ambient(), span.ambient());
            for (i, zi) in center.iter().enumerate() {
                q += zi * eig.eigenvectors[(i, k)];
            }
            let qq = &q * &q;
            let mu = hs_inner(&q, &qq) / hs_inner(&q, &q);
            if mu.norm() < 1e-12 {
                ok = false;
                last = "central eigenvector is not a multiple of a projection".into();
                break;
            }
            let p = q / mu;
            if frob(&(&p * &p - &p)) > cfg.tol.max(1e-8) * frob(&p).max(1.0) {
                ok = false;
                last = "central eigenvector is not a multiple of a projection".into();
                break;
            }
            let images: Vec<CMat> = basis.iter().map(|b| &p * b).collect();
            let r = orthonormal_span(&images, cfg.drop_tol).len();
            let n = (r as f64).sqrt().round() as usize;
            if n * n != r {
                ok = false;
                last = format!("block of dimension {r} is not a full matrix algebra");
                break;
            }
            blocks.push(n);
        }
        if !ok {
            continue;
        }
        blocks.sort_unstable();
        if blocks.iter().map(|n| n * n).sum::<usize>() != dimension {
            last = "block sizes do not account for the dimension".into();
            continue;
        }
        return Ok(StructureReport { dimension, blocks, center_dim: m, seed: cfg.seed, attempts: attempt });
    }
    Err(CstarError::IllConditioned(format!("{last} after {MAX_ATTEMPTS} attempts")))
}
