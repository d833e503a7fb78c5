//! Partial actions `(A, G, α)` of discrete groups on block algebras.

mod group;
mod model;
mod theorems;

pub use group::Group;
pub use model::{random_bijection_action, BijectionAction, FuzzInstance};
pub use theorems::{
    check_translation_identities, composite_domain_range, generate_paut_semigroup, CompositeReport,
};

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::cstar::{BlockAlgebra, BlockSet, CstarError, PartialAutomorphism};
use crate::semigroup::SemigroupError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartialActionError {
    #[error("{0} is not an element of the group")]
    NotInGroup(i64),
    #[error("D_e is not the whole algebra")]
    UnitIdealNotFull,
    #[error("alpha_{0} does not map D_{0}^-1 onto D_{0}")]
    DomainMismatch(i64),
    #[error("alpha_{0}^-1 is not the adjoint of alpha_{0}")]
    InverseMismatch(i64),
    #[error("alpha_{{{0}{1}}} does not extend alpha_{0} alpha_{1}")]
    ExtensionViolated(i64, i64),
    #[error("alpha_{{{0}{1}}} restricted to D_{1}^-1 D_(st)^-1 is not alpha_{0} alpha_{1}")]
    ReformulationViolated(i64, i64),
    #[error("domain or range formula fails for the word {0:?}")]
    FormulaMismatch(Vec<i64>),
    #[error("translation identity fails for t = {t}, s = {s:?}: {lhs} vs {rhs}")]
    IdentityViolated { t: i64, s: Vec<i64>, lhs: BlockSet, rhs: BlockSet },
    #[error("partial automorphisms live on a different algebra")]
    AlgebraMismatch,
    #[error(transparent)]
    Cstar(#[from] CstarError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// A finitely supported family `g ↦ (α_g, D_{g⁻¹}, D_g)`; elements off the
/// support carry the zero ideal and the zero map.
#[derive(Clone, Debug)]
pub struct PartialAction {
    algebra: BlockAlgebra,
    group: Group,
    domains: BTreeMap<i64, BlockSet>,
    alphas: BTreeMap<i64, PartialAutomorphism>,
}

/// What was checked while validating a partial action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionCertificate {
    pub support: Vec<i64>,
    /// Pairs `(s,t)` from `P = support ∪ support²` that were examined.
    pub pairs_checked: usize,
    /// Pairs where `α_s α_t` has zero domain, so the condition is vacuous.
    pub vacuous_pairs: usize,
    pub alpha_e_is_identity: bool,
    pub inverses_are_adjoints: bool,
}

impl PartialAction {
    /// Assembles a candidate from the maps; `D_g` is read off as `cod α_g`.
    /// Missing `α_e` defaults to `ι`, and missing `α_{g⁻¹}` to `α_g*`.
    pub fn new(
        algebra: &BlockAlgebra,
        group: Group,
        alphas: Vec<(i64, PartialAutomorphism)>,
    ) -> Result<Self, PartialActionError> {
        let mut map = BTreeMap::new();
        for (g, a) in alphas {
            if !group.contains(g) {
                return Err(PartialActionError::NotInGroup(g));
            }
            if a.algebra() != algebra {
                return Err(PartialActionError::AlgebraMismatch);
            }
            map.insert(g, a);
        }
        map.entry(group.identity()).or_insert_with(|| PartialAutomorphism::identity(algebra));
        let keys: Vec<i64> = map.keys().copied().collect();
        for g in keys {
            let inv = group.inverse(g);
            if !map.contains_key(&inv) {
                let adj = map[&g].adjoint();
                map.insert(inv, adj);
            }
        }
        let domains = map.iter().map(|(&g, a)| (g, a.cod())).collect();
        Ok(PartialAction { algebra: algebra.clone(), group, domains, alphas: map })
    }

    /// Like [`new`](Self::new) but with the ideals stated separately, so that
    /// a mismatch between `D` and the maps can be detected.
    pub fn with_domains(
        algebra: &BlockAlgebra,
        group: Group,
        domains: Vec<(i64, BlockSet)>,
        alphas: Vec<(i64, PartialAutomorphism)>,
    ) -> Result<Self, PartialActionError> {
        let mut pa = Self::new(algebra, group, alphas)?;
        for (g, d) in domains {
            if !pa.group.contains(g) {
                return Err(PartialActionError::NotInGroup(g));
            }
            algebra.check_blocks(d)?;
            pa.domains.insert(g, d);
        }
        Ok(pa)
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Elements with a nonzero ideal or an explicitly given map, ascending.
    pub fn support(&self) -> Vec<i64> {
        let keys: BTreeSet<i64> = self
            .alphas
            .iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|(&g, _)| g)
            .chain(self.domains.iter().filter(|(_, d)| !d.is_empty()).map(|(&g, _)| g))
            .collect();
        keys.into_iter().collect()
    }

    pub fn domain(&self, g: i64) -> BlockSet {
        self.domains.get(&g).copied().unwrap_or(BlockSet::EMPTY)
    }

    pub fn alpha(&self, g: i64) -> PartialAutomorphism {
        self.alphas
            .get(&g)
            .cloned()
            .unwrap_or_else(|| PartialAutomorphism::zero(&self.algebra))
    }

    /// Replaces one map; used to build deliberately broken instances.
    pub fn set_alpha(&mut self, g: i64, a: PartialAutomorphism) {
        self.domains.insert(g, a.cod());
        self.alphas.insert(g, a);
    }

    /// `P = support ∪ {st : s, t ∈ support}`.
    fn pair_pool(&self) -> Vec<i64> {
        let support = self.support();
        let mut pool: BTreeSet<i64> = support.iter().copied().collect();
        for &s in &support {
            for &t in &support {
                pool.insert(self.group.product(s, t));
            }
        }
        pool.into_iter().collect()
    }

    fn check_common(&self, tol: f64) -> Result<(), PartialActionError> {
        if self.domain(self.group.identity()) != self.algebra.full() {
            return Err(PartialActionError::UnitIdealNotFull);
        }
        for g in self.support() {
            let a = self.alpha(g);
            let inv = self.group.inverse(g);
            if a.dom() != self.domain(inv) || a.cod() != self.domain(g) {
                return Err(PartialActionError::DomainMismatch(g));
            }
            if !self.alpha(inv).same_map(&a.adjoint(), tol) {
                return Err(PartialActionError::InverseMismatch(g));
            }
        }
        Ok(())
    }

    fn certificate(&self, pairs_checked: usize, vacuous_pairs: usize, tol: f64) -> ActionCertificate {
        let support = self.support();
        ActionCertificate {
            alpha_e_is_identity: self.alpha(self.group.identity()).is_identity_on(self.algebra.full(), tol),
            inverses_are_adjoints: support
                .iter()
                .all(|&g| self.alpha(self.group.inverse(g)).same_map(&self.alpha(g).adjoint(), tol)),
            support,
            pairs_checked,
            vacuous_pairs,
        }
    }
}

/// Checks `D_e = A`, the domains and inverses of every `α_g`, and that
/// `α_{st}` extends `α_s α_t` on all pairs from the support and its products.
pub fn validate_partial_action(pa: &PartialAction, tol: f64) -> Result<ActionCertificate, PartialActionError> {
    pa.check_common(tol)?;
    let pool = pa.pair_pool();
    let (mut checked, mut vacuous) = (0, 0);
    for &s in &pool {
        for &t in &pool {
            checked += 1;
            let comp = pa.alpha(s).compose(&pa.alpha(t))?;
            if comp.is_zero() {
                vacuous += 1;
                continue;
            }
            if !pa.alpha(pa.group.product(s, t)).extends(&comp, tol) {
                return Err(PartialActionError::ExtensionViolated(s, t));
            }
        }
    }
    let cert = pa.certificate(checked, vacuous, tol);
    debug_assert!(cert.alpha_e_is_identity && cert.inverses_are_adjoints);
    Ok(cert)
}

/// Same as [`validate_partial_action`] with the extension condition replaced
/// by: `α_{st}` restricted to `D_{t⁻¹} D_{t⁻¹s⁻¹}` equals `α_s α_t`.
pub fn validate_reformulated(pa: &PartialAction, tol: f64) -> Result<ActionCertificate, PartialActionError> {
    pa.check_common(tol)?;
    let g = &pa.group;
    let pool = pa.pair_pool();
    let (mut checked, mut vacuous) = (0, 0);
    for &s in &pool {
        for &t in &pool {
            checked += 1;
            let st = g.product(s, t);
            let comp = pa.alpha(s).compose(&pa.alpha(t))?;
            let ideal = pa.domain(g.inverse(t)).meet(pa.domain(g.inverse(st)));
            if comp.is_zero() && ideal.is_empty() {
                vacuous += 1;
                continue;
            }
            if !pa.alpha(st).restrict(ideal).same_map(&comp, tol) {
                return Err(PartialActionError::ReformulationViolated(s, t));
            }
        }
    }
    Ok(pa.certificate(checked, vacuous, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;
    use rand::SeedableRng;

    const TOL: f64 = 1e-9;

    /// ℂ² with the shift `α_1(a,0) = (0,a)` and support {−1, 0, 1}.
    pub(crate) fn shift_action() -> PartialAction {
        let alg = BlockAlgebra::diagonal(2).unwrap();
        let a1 = PartialAutomorphism::from_block_map(&alg, &[(0, 1)]).unwrap();
        PartialAction::new(&alg, Group::Integers, vec![(1, a1)]).unwrap()
    }

    #[test]
    fn shift_action_is_valid() {
        let pa = shift_action();
        let cert = validate_partial_action(&pa, TOL).unwrap();
        assert_eq!(cert.support, vec![-1, 0, 1]);
        assert!(cert.alpha_e_is_identity);
        assert!(cert.vacuous_pairs > 0);
        assert_eq!(pa.domain(-1), BlockSet::singleton(0));
        assert_eq!(pa.domain(2), BlockSet::EMPTY);
        validate_reformulated(&pa, TOL).unwrap();
    }

    #[test]
    fn proper_unit_ideal_is_rejected() {
        let alg = BlockAlgebra::diagonal(2).unwrap();
        let a1 = PartialAutomorphism::from_block_map(&alg, &[(0, 1)]).unwrap();
        let pa = PartialAction::with_domains(&alg, Group::Integers, vec![(0, BlockSet::singleton(0))], vec![(1, a1)])
            .unwrap();
        assert_eq!(validate_partial_action(&pa, TOL).unwrap_err(), PartialActionError::UnitIdealNotFull);
    }

    #[test]
    fn global_action_is_valid() {
        // Z3 acting on M_2 by conjugation with a unitary of order three
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let w = crate::linalg::c(-0.5, 3f64.sqrt() / 2.0);
        let u = crate::cstar::Element::identity(&alg).block(0).clone();
        let mut u1 = u.clone();
        u1[(1, 1)] = w;
        let a1 = PartialAutomorphism::new(&alg, vec![(0, 0, u1.clone())], TOL).unwrap();
        let a2 = PartialAutomorphism::new(&alg, vec![(0, 0, &u1 * &u1)], TOL).unwrap();
        let pa = PartialAction::new(&alg, Group::cyclic(3), vec![(1, a1), (2, a2)]).unwrap();
        validate_partial_action(&pa, TOL).unwrap();
        validate_reformulated(&pa, TOL).unwrap();
    }

    #[test]
    fn non_involutive_swap_is_rejected() {
        // a block swap of M_2 ⊕ M_2 that does not square to ι
        let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(2, &mut rng);
        let v = random_unitary(2, &mut rng);
        let a1 = PartialAutomorphism::new(&alg, vec![(0, 1, u), (1, 0, v)], TOL).unwrap();
        let pa = PartialAction::new(&alg, Group::cyclic(2), vec![(1, a1)]).unwrap();
        // α_1 is its own inverse only if uv is scalar; generically not
        assert!(matches!(
            validate_partial_action(&pa, TOL),
            Err(PartialActionError::InverseMismatch(1))
        ));
    }

    #[test]
    fn missing_square_is_reported() {
        // ℂ³ with α_1 = shift 0→1→2 but α_2 left at zero
        let alg = BlockAlgebra::diagonal(3).unwrap();
        let a1 = PartialAutomorphism::from_block_map(&alg, &[(0, 1), (1, 2)]).unwrap();
        let pa = PartialAction::new(&alg, Group::Integers, vec![(1, a1)]).unwrap();
        // the first pair reached is (−1, −1)
        assert_eq!(validate_partial_action(&pa, TOL).unwrap_err(), PartialActionError::ExtensionViolated(-1, -1));
        assert!(matches!(validate_reformulated(&pa, TOL), Err(PartialActionError::ReformulationViolated(..))));
    }

    #[test]
    fn empty_support_is_valid() {
        let alg = BlockAlgebra::new(vec![1, 2]).unwrap();
        let pa = PartialAction::new(&alg, Group::Integers, vec![]).unwrap();
        let cert = validate_partial_action(&pa, TOL).unwrap();
        assert_eq!(cert.support, vec![0]);
    }

    #[test]
    fn domain_mismatch() {
        let alg = BlockAlgebra::diagonal(2).unwrap();
        let a1 = PartialAutomorphism::from_block_map(&alg, &[(0, 1)]).unwrap();
        let pa = PartialAction::with_domains(&alg, Group::Integers, vec![(1, BlockSet::full(2))], vec![(1, a1)])
            .unwrap();
        assert!(matches!(validate_partial_action(&pa, TOL), Err(PartialActionError::DomainMismatch(_))));
    }
}
