//! Covariant representations of partial actions and of inverse semigroup
//! actions, realised by complex matrices.

mod calculus;
mod fuzz;
mod pair;
mod saction;

pub use calculus::{check_product_calculus, rotation_counterexample, CalculusReport, RotationReport};
pub use fuzz::random_strict_covrep;
pub use pair::{pair_semigroup_action, restrict_action_covrep, PairElement, PairOracle, PairSemigroup};
pub use saction::{
    validate_semigroup_action, validate_semigroup_covrep, SemigroupAction, SemigroupActionCertificate, SemigroupCovRep,
};

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::config::Mode;
use crate::cstar::{BlockAlgebra, BlockSet, CstarError, Element, MatrixUnit};
use crate::linalg::{amplify, block_diag, eye, frob, frob_dist, partial_isometry_residual, zeros, CMat, C64};
use crate::partial_action::{PartialAction, PartialActionError};
use crate::semigroup::SemigroupError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CovError {
    #[error("representation and action use different algebras")]
    AlgebraMismatch,
    #[error("matrix of size {found} does not act on the {expected}-dimensional space")]
    SizeMismatch { expected: usize, found: usize },
    #[error("not a *-homomorphism: {0}")]
    NotStarHomomorphism(String),
    #[error("representation is degenerate: pi(1) is not the identity")]
    NotNondegenerate,
    #[error("u_{0} is not a partial isometry (residual {1:.3e})")]
    NotPartialIsometry(String, f64),
    #[error("covariance fails for {elem} at {unit} (residual {residual:.3e})")]
    CovarianceViolated { elem: String, unit: MatrixUnit, residual: f64 },
    #[error("initial or final space of {elem} is wrong (residual {residual:.3e})")]
    SpaceMismatch { elem: String, residual: f64 },
    #[error("u_(st) h = u_s u_t h fails for s = {0}, t = {1} (residual {2:.3e})")]
    CompositionViolated(i64, i64, f64),
    #[error("{check} fails for the word {word:?} (residual {residual:.3e})")]
    CalculusViolated { word: Vec<i64>, check: String, residual: f64 },
    #[error("angle {0} is outside (0, pi/2)")]
    AngleOutOfRange(f64),
    #[error("the semigroup has no unit")]
    MissingUnit,
    #[error("E_e is not the whole algebra")]
    UnitIdealNotFull,
    #[error("beta_{0} does not map E_s* onto E_s")]
    DomainMismatch(usize),
    #[error("beta_{0} beta_{1} differs from beta of the product")]
    HomomorphismViolated(usize, usize),
    #[error("beta_t(E_t* E_s) = E_ts fails for s = {0}, t = {1}")]
    TranslationViolated(usize, usize),
    #[error("beta_{0} is not the identity of E_f for the idempotent {0}")]
    IdempotentNotIdentity(usize),
    #[error("v_{0} v_{1} differs from v of the product (residual {2:.3e})")]
    NotHomomorphism(usize, usize, f64),
    #[error("family has {found} members but the semigroup has {expected} elements")]
    FamilySizeMismatch { expected: usize, found: usize },
    #[error("(alpha_{0}, u_{0}) is not an element of the pair semigroup")]
    PairNotInS(i64),
    #[error(transparent)]
    Cstar(#[from] CstarError),
    #[error(transparent)]
    PartialAction(#[from] PartialActionError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// A nondegenerate representation `π` of a block algebra on `ℂ^h`, stored as
/// the images of the matrix units.
#[derive(Clone, Debug)]
pub struct HilbertRep {
    algebra: BlockAlgebra,
    h_dim: usize,
    /// `units[b][j*n + k] = π(E^{(b)}_{jk})`.
    units: Vec<Vec<CMat>>,
}

impl HilbertRep {
    /// `π(a) = ⊕_b a_b ⊗ 1_{m_b}`, each block repeated `m_b` times in turn.
    pub fn with_multiplicity(algebra: &BlockAlgebra, mult: &[usize]) -> Result<Self, CovError> {
        if mult.len() != algebra.num_blocks() {
            return Err(CovError::NotStarHomomorphism(format!(
                "{} multiplicities for {} blocks",
                mult.len(),
                algebra.num_blocks()
            )));
        }
        let h_dim: usize = algebra.dims().iter().zip(mult).map(|(n, m)| n * m).sum();
        let mut units = Vec::with_capacity(algebra.num_blocks());
        let mut offset = 0;
        for (&n, &m) in algebra.dims().iter().zip(mult) {
            let mut block_units = Vec::with_capacity(n * n);
            for j in 0..n {
                for k in 0..n {
                    let mut e = zeros(n);
                    e[(j, k)] = C64::new(1.0, 0.0);
                    let mut full = zeros(h_dim);
                    full.view_mut((offset, offset), (n * m, n * m)).copy_from(&amplify(&e, m));
                    block_units.push(full);
                }
            }
            units.push(block_units);
            offset += n * m;
        }
        Ok(HilbertRep { algebra: algebra.clone(), h_dim, units })
    }

    /// `π(a) = π₁(a) ⊗ 1_k` with copies of the multiplicity-one
    /// representation laid out one after another: `a ↦ diag(a, …, a)`.
    pub fn copies(algebra: &BlockAlgebra, k: usize) -> Self {
        let one = Self::with_multiplicity(algebra, &vec![1; algebra.num_blocks()]).expect("lengths agree");
        let units = one
            .units
            .iter()
            .map(|bu| bu.iter().map(|u| amplify(u, k)).collect())
            .collect();
        HilbertRep { algebra: algebra.clone(), h_dim: one.h_dim * k, units }
    }

    /// Validates arbitrary images of the matrix units.
    pub fn from_unit_images(algebra: &BlockAlgebra, units: Vec<Vec<CMat>>, tol: f64) -> Result<Self, CovError> {
        if units.len() != algebra.num_blocks() {
            return Err(CovError::NotStarHomomorphism("wrong number of blocks".into()));
        }
        let h_dim = units.first().and_then(|b| b.first()).map(|m| m.nrows()).unwrap_or(0);
        for (b, bu) in units.iter().enumerate() {
            let n = algebra.block_dim(b);
            if bu.len() != n * n {
                return Err(CovError::NotStarHomomorphism(format!("block {b} needs {} unit images", n * n)));
            }
            for m in bu {
                if m.shape() != (h_dim, h_dim) {
                    return Err(CovError::SizeMismatch { expected: h_dim, found: m.nrows() });
                }
            }
        }
        let rep = HilbertRep { algebra: algebra.clone(), h_dim, units };
        rep.check(tol)?;
        Ok(rep)
    }

    /// `E_{jk} E_{lm} = δ_{kl} E_{jm}` within blocks, zero across blocks,
    /// `E_{jk}* = E_{kj}`, and `Σ E_{jj} = 1`.
    pub fn check(&self, tol: f64) -> Result<(), CovError> {
        let alg = &self.algebra;
        for b in 0..alg.num_blocks() {
            let n = alg.block_dim(b);
            for j in 0..n {
                for k in 0..n {
                    let e = &self.units[b][j * n + k];
                    if frob_dist(&e.adjoint(), &self.units[b][k * n + j]) > tol {
                        return Err(CovError::NotStarHomomorphism(format!("adjoint of E{b}[{j},{k}]")));
                    }
                    for c in 0..alg.num_blocks() {
                        let nc = alg.block_dim(c);
                        for l in 0..nc {
                            for m in 0..nc {
                                let prod = e * &self.units[c][l * nc + m];
                                let expected = if b == c && k == l { self.units[b][j * n + m].clone() } else { zeros(self.h_dim) };
                                if frob_dist(&prod, &expected) > tol {
                                    return Err(CovError::NotStarHomomorphism(format!(
                                        "E{b}[{j},{k}] E{c}[{l},{m}]"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        if frob_dist(&self.projection(alg.full()), &eye(self.h_dim)) > tol {
            return Err(CovError::NotNondegenerate);
        }
        Ok(())
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    pub fn unit_image(&self, u: MatrixUnit) -> &CMat {
        let n = self.algebra.block_dim(u.block);
        &self.units[u.block][u.row * n + u.col]
    }

    pub fn pi(&self, a: &Element) -> CMat {
        let mut out = zeros(self.h_dim);
        for (b, block) in a.blocks().iter().enumerate() {
            let n = block.nrows();
            for j in 0..n {
                for k in 0..n {
                    let z = block[(j, k)];
                    if z != C64::new(0.0, 0.0) {
                        out += &self.units[b][j * n + k] * z;
                    }
                }
            }
        }
        out
    }

    /// `π(p_D)`, the projection onto `π(D)H`.
    pub fn projection(&self, set: BlockSet) -> CMat {
        let mut out = zeros(self.h_dim);
        for b in set.iter().filter(|&b| b < self.algebra.num_blocks()) {
            let n = self.algebra.block_dim(b);
            for j in 0..n {
                out += &self.units[b][j * n + j];
            }
        }
        out
    }

    /// `a ↦ W π(a) W*` for a unitary `W`.
    pub fn conjugated(&self, w: &CMat) -> Self {
        let units = self
            .units
            .iter()
            .map(|bu| bu.iter().map(|u| w * u * w.adjoint()).collect())
            .collect();
        HilbertRep { algebra: self.algebra.clone(), h_dim: self.h_dim, units }
    }

    /// `π ⊕ ρ` on `H ⊕ K`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, CovError> {
        if self.algebra != other.algebra {
            return Err(CovError::AlgebraMismatch);
        }
        let units = self
            .units
            .iter()
            .zip(&other.units)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| block_diag(&[x.clone(), y.clone()])).collect())
            .collect();
        Ok(HilbertRep { algebra: self.algebra.clone(), h_dim: self.h_dim + other.h_dim, units })
    }

    /// `π ⊕ ⋯ ⊕ π` (`k` copies).
    pub fn amplified(&self, k: usize) -> Self {
        let units = self
            .units
            .iter()
            .map(|bu| bu.iter().map(|u| amplify(u, k)).collect())
            .collect();
        HilbertRep { algebra: self.algebra.clone(), h_dim: self.h_dim * k, units }
    }
}

/// `(π, u, H)` for a partial action: `u_g` is given on finitely many `g`;
/// missing `u_e` defaults to `1_H`, missing `u_{g⁻¹}` to `u_g*`, and all
/// other members are zero.
#[derive(Clone, Debug)]
pub struct CovariantRep {
    action: PartialAction,
    rep: HilbertRep,
    u: BTreeMap<i64, CMat>,
}

/// Largest residuals seen while validating a covariant representation.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CovCertificate {
    pub mode: Mode,
    pub elements_checked: usize,
    pub pairs_checked: usize,
    pub max_partial_isometry: f64,
    pub max_covariance: f64,
    pub max_space: f64,
    pub max_composition: f64,
}

impl CovariantRep {
    pub fn new(action: &PartialAction, rep: &HilbertRep, members: Vec<(i64, CMat)>) -> Result<Self, CovError> {
        if action.algebra() != rep.algebra() {
            return Err(CovError::AlgebraMismatch);
        }
        let g = action.group();
        let mut u = BTreeMap::new();
        for (x, m) in members {
            if !g.contains(x) {
                return Err(PartialActionError::NotInGroup(x).into());
            }
            if m.shape() != (rep.h_dim(), rep.h_dim()) {
                return Err(CovError::SizeMismatch { expected: rep.h_dim(), found: m.nrows() });
            }
            u.insert(x, m);
        }
        u.entry(g.identity()).or_insert_with(|| eye(rep.h_dim()));
        let keys: Vec<i64> = u.keys().copied().collect();
        for x in keys {
            let inv = g.inverse(x);
            if !u.contains_key(&inv) {
                let adj = u[&x].adjoint();
                u.insert(inv, adj);
            }
        }
        Ok(CovariantRep { action: action.clone(), rep: rep.clone(), u })
    }

    pub fn action(&self) -> &PartialAction {
        &self.action
    }

    pub fn rep(&self) -> &HilbertRep {
        &self.rep
    }

    pub fn u(&self, g: i64) -> CMat {
        self.u.get(&g).cloned().unwrap_or_else(|| zeros(self.rep.h_dim()))
    }

    /// Elements where either the action or the family is nonzero.
    pub fn active_elements(&self) -> Vec<i64> {
        let mut keys: Vec<i64> = self.action.support();
        for (&g, m) in &self.u {
            if frob(m) > 0.0 && !keys.contains(&g) {
                keys.push(g);
            }
        }
        keys.sort_unstable();
        keys
    }

    /// `(π ⊕ π', u ⊕ u')`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, CovError> {
        let rep = self.rep.direct_sum(&other.rep)?;
        let keys: Vec<i64> = self.active_elements().into_iter().chain(other.active_elements()).collect();
        let members = keys.into_iter().map(|g| (g, block_diag(&[self.u(g), other.u(g)]))).collect();
        Self::new(&self.action, &rep, members)
    }
}

/// Checks the partial-isometry, space, covariance and composition conditions.
///
/// In strict mode `u_g*u_g = π(p_{g⁻¹})` and `u_g u_g* = π(p_g)`; in lax mode
/// the initial and final spaces need only contain `π(D_{g⁻¹})H` and `π(D_g)H`.
pub fn validate_covrep_partial(cov: &CovariantRep, mode: Mode, tol: f64) -> Result<CovCertificate, CovError> {
    let pa = &cov.action;
    let rep = &cov.rep;
    let g = pa.group();
    let mut cert = CovCertificate { mode, ..Default::default() };
    let elems = cov.active_elements();
    for &x in &elems {
        let label = x.to_string();
        let u = cov.u(x);
        let r = partial_isometry_residual(&u);
        cert.max_partial_isometry = cert.max_partial_isometry.max(r);
        if r > tol {
            return Err(CovError::NotPartialIsometry(label, r));
        }
        let p_init = rep.projection(pa.domain(g.inverse(x)));
        let p_fin = rep.projection(pa.domain(x));
        let (ri, rf) = match mode {
            Mode::Strict => (frob_dist(&(u.adjoint() * &u), &p_init), frob_dist(&(&u * u.adjoint()), &p_fin)),
            Mode::Lax => (
                frob_dist(&(u.adjoint() * &u * &p_init), &p_init),
                frob_dist(&(&u * u.adjoint() * &p_fin), &p_fin),
            ),
        };
        let r = ri.max(rf);
        cert.max_space = cert.max_space.max(r);
        if r > tol {
            return Err(CovError::SpaceMismatch { elem: label, residual: r });
        }
        let alpha = pa.alpha(x);
        let u_inv = cov.u(g.inverse(x));
        for unit in pa.algebra().matrix_units(alpha.dom()) {
            let e = Element::matrix_unit(pa.algebra(), unit);
            let lhs = &u * rep.pi(&e) * &u_inv;
            let rhs = rep.pi(&alpha.apply_restricted(&e));
            let r = frob_dist(&lhs, &rhs);
            cert.max_covariance = cert.max_covariance.max(r);
            if r > tol {
                return Err(CovError::CovarianceViolated { elem: label, unit, residual: r });
            }
        }
        cert.elements_checked += 1;
    }
    let support = pa.support();
    for &s in &support {
        for &t in &support {
            let st = g.product(s, t);
            let ideal = pa.domain(g.inverse(t)).meet(pa.domain(g.inverse(st)));
            let p = rep.projection(ideal);
            let r = frob_dist(&(cov.u(st) * &p), &(cov.u(s) * cov.u(t) * &p));
            cert.max_composition = cert.max_composition.max(r);
            if r > tol {
                return Err(CovError::CompositionViolated(s, t, r));
            }
            cert.pairs_checked += 1;
        }
    }
    Ok(cert)
}

/// Square matrices under multiplication and adjoint, compared in Frobenius
/// norm.
#[derive(Clone, Copy, Debug)]
pub struct MatrixOracle {
    pub dim: usize,
    pub tol: f64,
}

impl crate::semigroup::InverseMonoidOracle for MatrixOracle {
    type Elem = CMat;

    fn unit(&self) -> CMat {
        eye(self.dim)
    }

    fn product(&self, a: &CMat, b: &CMat) -> CMat {
        a * b
    }

    fn star(&self, a: &CMat) -> CMat {
        a.adjoint()
    }

    fn same(&self, a: &CMat, b: &CMat) -> bool {
        frob_dist(a, b) <= self.tol
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cstar::PartialAutomorphism;
    use crate::linalg::{random_unitary, real};
    use crate::partial_action::Group;
    use rand::SeedableRng;

    const TOL: f64 = 1e-9;

    /// The shift action on ℂ² with multiplication operators and the shifts.
    pub(crate) fn shift_covrep() -> CovariantRep {
        let alg = BlockAlgebra::diagonal(2).unwrap();
        let a1 = PartialAutomorphism::from_block_map(&alg, &[(0, 1)]).unwrap();
        let pa = PartialAction::new(&alg, Group::Integers, vec![(1, a1)]).unwrap();
        let rep = HilbertRep::with_multiplicity(&alg, &[1, 1]).unwrap();
        let fwd = real(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        CovariantRep::new(&pa, &rep, vec![(1, fwd)]).unwrap()
    }

    /// ℂ³, ℤ₂, `α_1 = ι` on the first two blocks, two copies of `π`, and the
    /// flip of the copies.
    pub(crate) fn flip_covrep() -> CovariantRep {
        let alg = BlockAlgebra::diagonal(3).unwrap();
        let d1 = BlockSet::from_blocks([0, 1]);
        let pa = PartialAction::new(&alg, Group::cyclic(2), vec![(1, PartialAutomorphism::identity_on(&alg, d1))])
            .unwrap();
        let rep = HilbertRep::copies(&alg, 2);
        let mut flip = zeros(6);
        for i in 0..3 {
            flip[(i, i + 3)] = C64::new(1.0, 0.0);
            flip[(i + 3, i)] = C64::new(1.0, 0.0);
        }
        CovariantRep::new(&pa, &rep, vec![(1, flip)]).unwrap()
    }

    #[test]
    fn shift_is_strict() {
        let cov = shift_covrep();
        let cert = validate_covrep_partial(&cov, Mode::Strict, TOL).unwrap();
        assert_eq!(cert.elements_checked, 3);
        assert_eq!(cov.u(0), eye(2));
        assert_eq!(cov.u(5), zeros(2));
    }

    #[test]
    fn flip_is_lax_only() {
        let cov = flip_covrep();
        assert!(matches!(validate_covrep_partial(&cov, Mode::Strict, TOL), Err(CovError::SpaceMismatch { .. })));
        validate_covrep_partial(&cov, Mode::Lax, TOL).unwrap();
    }

    #[test]
    fn honest_unitary_action_is_strict() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let v = random_unitary(2, &mut rng);
        let mut sign = eye(2);
        sign[(1, 1)] = C64::new(-1.0, 0.0);
        let u1 = &v * sign * v.adjoint();
        let a1 = PartialAutomorphism::new(&alg, vec![(0, 0, u1.clone())], TOL).unwrap();
        let pa = PartialAction::new(&alg, Group::cyclic(2), vec![(1, a1)]).unwrap();
        let rep = HilbertRep::with_multiplicity(&alg, &[1]).unwrap();
        let cov = CovariantRep::new(&pa, &rep, vec![(1, u1)]).unwrap();
        validate_covrep_partial(&cov, Mode::Strict, TOL).unwrap();
    }

    #[test]
    fn wrong_unitary_breaks_covariance() {
        let cov = shift_covrep();
        let bad = real(2, 2, &[0.0, 0.0, -1.0, 0.0]);
        // −shift implements the same conjugation, so it still passes
        let cov2 = CovariantRep::new(cov.action(), cov.rep(), vec![(1, bad)]).unwrap();
        validate_covrep_partial(&cov2, Mode::Strict, TOL).unwrap();
        let back = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let cov3 = CovariantRep::new(cov.action(), cov.rep(), vec![(1, back)]).unwrap();
        assert!(validate_covrep_partial(&cov3, Mode::Strict, TOL).is_err());
    }

    #[test]
    fn nonzero_member_off_support_is_caught() {
        let cov = shift_covrep();
        let cov2 = CovariantRep::new(cov.action(), cov.rep(), vec![(1, cov.u(1)), (2, eye(2))]).unwrap();
        assert!(matches!(validate_covrep_partial(&cov2, Mode::Strict, TOL), Err(CovError::SpaceMismatch { .. })));
    }

    #[test]
    fn representations_are_homomorphisms() {
        let alg = BlockAlgebra::new(vec![1, 2]).unwrap();
        let rep = HilbertRep::with_multiplicity(&alg, &[2, 1]).unwrap();
        rep.check(TOL).unwrap();
        assert_eq!(rep.h_dim(), 4);
        let copies = HilbertRep::copies(&alg, 2);
        copies.check(TOL).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let w = random_unitary(4, &mut rng);
        rep.conjugated(&w).check(TOL).unwrap();
        rep.direct_sum(&copies).unwrap().check(TOL).unwrap();
        let degenerate = HilbertRep::from_unit_images(
            &BlockAlgebra::diagonal(1).unwrap(),
            vec![vec![real(2, 2, &[1.0, 0.0, 0.0, 0.0])]],
            TOL,
        );
        assert_eq!(degenerate.unwrap_err(), CovError::NotNondegenerate);
    }

    #[test]
    fn direct_sum_of_covreps() {
        let cov = shift_covrep();
        let double = cov.direct_sum(&cov).unwrap();
        validate_covrep_partial(&double, Mode::Strict, TOL).unwrap();
        assert_eq!(double.rep().h_dim(), 4);
    }
}
