use serde::Serialize;

use super::{PartialAction, PartialActionError};
use crate::config::Config;
use crate::cstar::{BlockSet, PartialAutomorphism, PautoOracle};
use crate::semigroup::{generate_closure, Closure};

/// Brute-force composite of a word next to the predicted ideals.
#[derive(Clone, Debug, Serialize)]
pub struct CompositeReport {
    pub word: Vec<i64>,
    /// `D_{s_n⁻¹} D_{s_n⁻¹s_{n−1}⁻¹} ⋯ D_{s_n⁻¹⋯s_1⁻¹}`.
    pub domain: BlockSet,
    /// `D_{s_1} D_{s_1s_2} ⋯ D_{s_1⋯s_n}`.
    pub range: BlockSet,
    #[serde(skip)]
    pub composite: PartialAutomorphism,
}

/// Composes `α_{s_1} ∘ ⋯ ∘ α_{s_n}` and compares its domain and range with
/// the intersections of the ideals along the prefixes of the word.
pub fn composite_domain_range(pa: &PartialAction, word: &[i64]) -> Result<CompositeReport, PartialActionError> {
    let g = pa.group();
    for &s in word {
        if !g.contains(s) {
            return Err(PartialActionError::NotInGroup(s));
        }
    }
    let mut composite = PartialAutomorphism::identity(pa.algebra());
    for &s in word.iter().rev() {
        composite = pa.alpha(s).compose(&composite)?;
    }

    let full = pa.algebra().full();
    let mut range = full;
    let mut prefix = g.identity();
    for &s in word {
        prefix = g.product(prefix, s);
        range = range.meet(pa.domain(prefix));
    }
    let mut domain = full;
    let mut suffix = g.identity();
    for &s in word.iter().rev() {
        suffix = g.product(suffix, g.inverse(s));
        domain = domain.meet(pa.domain(suffix));
    }

    if composite.dom() != domain || composite.cod() != range {
        return Err(PartialActionError::FormulaMismatch(word.to_vec()));
    }
    Ok(CompositeReport { word: word.to_vec(), domain, range, composite })
}

/// `α_t(D_{t⁻¹} D_{s_1} ⋯ D_{s_n}) = D_t D_{ts_1} ⋯ D_{ts_n}`, compared
/// blockwise. Returns the common ideal.
pub fn check_translation_identities(pa: &PartialAction, t: i64, s: &[i64]) -> Result<BlockSet, PartialActionError> {
    let g = pa.group();
    let at = pa.alpha(t);
    let inner = s.iter().fold(pa.domain(g.inverse(t)), |acc, &x| acc.meet(pa.domain(x)));
    let lhs = at.image(inner);
    let rhs = s.iter().fold(pa.domain(t), |acc, &x| acc.meet(pa.domain(g.product(t, x))));
    if lhs != rhs {
        return Err(PartialActionError::IdentityViolated { t, s: s.to_vec(), lhs, rhs });
    }
    Ok(lhs)
}

/// The unital inverse semigroup generated by `{α_g : g ∈ support}` inside the
/// partial automorphisms of `A`.
pub fn generate_paut_semigroup(
    pa: &PartialAction,
    cfg: &Config,
) -> Result<Closure<PartialAutomorphism>, PartialActionError> {
    let oracle = PautoOracle { algebra: pa.algebra().clone(), tol: cfg.tol };
    let gens: Vec<PartialAutomorphism> = pa.support().into_iter().map(|g| pa.alpha(g)).collect();
    Ok(generate_closure(&oracle, &gens, cfg.bound)?)
}

#[cfg(test)]
mod tests {
    use super::super::{validate_partial_action, Group};
    use super::*;
    use crate::cstar::BlockAlgebra;

    fn shift_action() -> PartialAction {
        let alg = BlockAlgebra::diagonal(2).unwrap();
        let a1 = PartialAutomorphism::from_block_map(&alg, &[(0, 1)]).unwrap();
        PartialAction::new(&alg, Group::Integers, vec![(1, a1)]).unwrap()
    }

    #[test]
    fn single_letter_gives_the_ideals() {
        let pa = shift_action();
        for s in -2..=2 {
            let r = composite_domain_range(&pa, &[s]).unwrap();
            assert_eq!(r.domain, pa.domain(-s));
            assert_eq!(r.range, pa.domain(s));
        }
    }

    #[test]
    fn shift_twice_has_zero_domain() {
        let r = composite_domain_range(&shift_action(), &[1, 1]).unwrap();
        assert_eq!(r.domain, BlockSet::EMPTY);
        assert!(r.composite.is_zero());
    }

    #[test]
    fn translation_identities_on_shift() {
        let pa = shift_action();
        assert_eq!(check_translation_identities(&pa, 0, &[1]).unwrap(), pa.domain(1));
        // α_1(D_{-1} D_{-1}) = D_1 D_0 = D_1
        assert_eq!(check_translation_identities(&pa, 1, &[-1]).unwrap(), BlockSet::singleton(1));
        for t in -2..=2 {
            for s in -2..=2 {
                check_translation_identities(&pa, t, &[s]).unwrap();
                check_translation_identities(&pa, t, &[s, -s, 1]).unwrap();
            }
        }
    }

    #[test]
    fn shift_generates_six_maps() {
        let pa = shift_action();
        let cl = generate_paut_semigroup(&pa, &Config::default()).unwrap();
        assert_eq!(cl.order(), 6);
        assert!(cl.zero().is_some());
        let idem = cl.semigroup.idempotents();
        assert_eq!(idem.len(), 4);
    }

    #[test]
    fn identity_partial_action_is_a_semilattice() {
        // ℂ³, Z2, α_1 = ι on the first two blocks
        let alg = BlockAlgebra::diagonal(3).unwrap();
        let d1 = BlockSet::from_blocks([0, 1]);
        let pa = PartialAction::new(&alg, Group::cyclic(2), vec![(1, PartialAutomorphism::identity_on(&alg, d1))])
            .unwrap();
        validate_partial_action(&pa, 1e-9).unwrap();
        let cl = generate_paut_semigroup(&pa, &Config::default()).unwrap();
        assert_eq!(cl.order(), 2);
        assert!(cl.semigroup.is_semilattice());
    }

    #[test]
    fn empty_support_generates_trivial_semigroup() {
        let alg = BlockAlgebra::diagonal(2).unwrap();
        let pa = PartialAction::new(&alg, Group::Integers, vec![]).unwrap();
        assert_eq!(generate_paut_semigroup(&pa, &Config::default()).unwrap().order(), 1);
    }
}
