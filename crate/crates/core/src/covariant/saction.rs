use serde::Serialize;

use super::{CovCertificate, CovError, HilbertRep};
use crate::config::Mode;
use crate::cstar::{BlockAlgebra, BlockSet, Element, PartialAutomorphism};
use crate::linalg::{eye, frob_dist, partial_isometry_residual, CMat};
use crate::semigroup::{Closure, FiniteInverseSemigroup};

/// `s ↦ (β_s, E_{s*}, E_s)` for a finite unital inverse semigroup given by
/// its table; `E_s` is the codomain of `β_s`.
#[derive(Clone, Debug)]
pub struct SemigroupAction {
    semigroup: FiniteInverseSemigroup,
    algebra: BlockAlgebra,
    ideals: Vec<BlockSet>,
    beta: Vec<PartialAutomorphism>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupActionCertificate {
    pub order: usize,
    pub pairs_checked: usize,
    pub idempotents: usize,
}

impl SemigroupAction {
    pub fn new(
        semigroup: &FiniteInverseSemigroup,
        algebra: &BlockAlgebra,
        beta: Vec<PartialAutomorphism>,
    ) -> Result<Self, CovError> {
        let ideals = beta.iter().map(|b| b.cod()).collect();
        Self::with_ideals(semigroup, algebra, ideals, beta)
    }

    /// With the ideals `E_s` stated separately.
    pub fn with_ideals(
        semigroup: &FiniteInverseSemigroup,
        algebra: &BlockAlgebra,
        ideals: Vec<BlockSet>,
        beta: Vec<PartialAutomorphism>,
    ) -> Result<Self, CovError> {
        let n = semigroup.order();
        if beta.len() != n || ideals.len() != n {
            return Err(CovError::FamilySizeMismatch { expected: n, found: beta.len().min(ideals.len()) });
        }
        if beta.iter().any(|b| b.algebra() != algebra) {
            return Err(CovError::AlgebraMismatch);
        }
        for e in &ideals {
            algebra.check_blocks(*e)?;
        }
        Ok(SemigroupAction { semigroup: semigroup.clone(), algebra: algebra.clone(), ideals, beta })
    }

    /// A closure of partial automorphisms acting on `A` by its own elements.
    pub fn tautological(closure: &Closure<PartialAutomorphism>) -> Result<Self, CovError> {
        let algebra = closure.elements[0].algebra().clone();
        Self::new(&closure.semigroup, &algebra, closure.elements.clone())
    }

    pub fn semigroup(&self) -> &FiniteInverseSemigroup {
        &self.semigroup
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    /// `E_s`.
    pub fn ideal(&self, s: usize) -> BlockSet {
        self.ideals[s]
    }

    pub fn beta(&self, s: usize) -> &PartialAutomorphism {
        &self.beta[s]
    }

    pub fn order(&self) -> usize {
        self.semigroup.order()
    }
}

/// Checks that `s ↦ β_s` is a homomorphism with `E_e = A`, that
/// `β_t(E_{t*}E_s) = E_{ts}`, and that idempotents act as identities.
pub fn validate_semigroup_action(act: &SemigroupAction, tol: f64) -> Result<SemigroupActionCertificate, CovError> {
    let s = &act.semigroup;
    let e = s.unit().ok_or(CovError::MissingUnit)?;
    if act.ideals[e] != act.algebra.full() {
        return Err(CovError::UnitIdealNotFull);
    }
    let n = s.order();
    for x in 0..n {
        let b = &act.beta[x];
        if b.dom() != act.ideals[s.star(x)] || b.cod() != act.ideals[x] {
            return Err(CovError::DomainMismatch(x));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let comp = act.beta[x].compose(&act.beta[y])?;
            if !comp.same_map(&act.beta[s.mul(x, y)], tol) {
                return Err(CovError::HomomorphismViolated(x, y));
            }
            // y plays t and x plays s
            let lhs = act.beta[y].image(act.ideals[s.star(y)].meet(act.ideals[x]));
            if lhs != act.ideals[s.mul(y, x)] {
                return Err(CovError::TranslationViolated(x, y));
            }
        }
    }
    let idem = s.idempotents();
    for &f in &idem {
        if !act.beta[f].is_identity_on(act.ideals[f], tol) {
            return Err(CovError::IdempotentNotIdentity(f));
        }
    }
    Ok(SemigroupActionCertificate { order: n, pairs_checked: n * n, idempotents: idem.len() })
}

/// `(π, v, H)` for a semigroup action; `v` is indexed like the semigroup.
#[derive(Clone, Debug)]
pub struct SemigroupCovRep {
    action: SemigroupAction,
    rep: HilbertRep,
    v: Vec<CMat>,
}

impl SemigroupCovRep {
    pub fn new(action: &SemigroupAction, rep: &HilbertRep, v: Vec<CMat>) -> Result<Self, CovError> {
        if action.algebra() != rep.algebra() {
            return Err(CovError::AlgebraMismatch);
        }
        if v.len() != action.order() {
            return Err(CovError::FamilySizeMismatch { expected: action.order(), found: v.len() });
        }
        if let Some(m) = v.iter().find(|m| m.shape() != (rep.h_dim(), rep.h_dim())) {
            return Err(CovError::SizeMismatch { expected: rep.h_dim(), found: m.nrows() });
        }
        Ok(SemigroupCovRep { action: action.clone(), rep: rep.clone(), v })
    }

    pub fn action(&self) -> &SemigroupAction {
        &self.action
    }

    pub fn rep(&self) -> &HilbertRep {
        &self.rep
    }

    pub fn v(&self, s: usize) -> &CMat {
        &self.v[s]
    }

    pub fn family(&self) -> &[CMat] {
        &self.v
    }

    /// `(π ⊕ ρ, v ⊕ z)`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, CovError> {
        let rep = self.rep.direct_sum(&other.rep)?;
        let v = self
            .v
            .iter()
            .zip(&other.v)
            .map(|(a, b)| crate::linalg::block_diag(&[a.clone(), b.clone()]))
            .collect();
        Self::new(&self.action, &rep, v)
    }

    /// `k` copies of `(π, v)`.
    pub fn amplified(&self, k: usize) -> Self {
        let v = self.v.iter().map(|a| crate::linalg::amplify(a, k)).collect();
        SemigroupCovRep { action: self.action.clone(), rep: self.rep.amplified(k), v }
    }
}

/// Checks that `v` is a homomorphism into partial isometries with
/// `v_s π(a) v_{s*} = π(β_s(a))` on `E_{s*}` and the stated spaces (exact in
/// strict mode, containment in lax mode). `v_e = 1` and `v_{s*} = v_s*` are
/// then re-checked as consequences.
pub fn validate_semigroup_covrep(cov: &SemigroupCovRep, mode: Mode, tol: f64) -> Result<CovCertificate, CovError> {
    let act = &cov.action;
    let s = act.semigroup();
    let rep = &cov.rep;
    let n = s.order();
    let mut cert = CovCertificate { mode, ..Default::default() };
    for x in 0..n {
        for y in 0..n {
            let r = frob_dist(&(&cov.v[x] * &cov.v[y]), &cov.v[s.mul(x, y)]);
            cert.max_composition = cert.max_composition.max(r);
            if r > tol {
                return Err(CovError::NotHomomorphism(x, y, r));
            }
        }
    }
    cert.pairs_checked = n * n;
    for x in 0..n {
        let v = &cov.v[x];
        let label = format!("v_{x}");
        let r = partial_isometry_residual(v);
        cert.max_partial_isometry = cert.max_partial_isometry.max(r);
        if r > tol {
            return Err(CovError::NotPartialIsometry(label, r));
        }
        let p_init = rep.projection(act.ideal(s.star(x)));
        let p_fin = rep.projection(act.ideal(x));
        let (ri, rf) = match mode {
            Mode::Strict => (frob_dist(&(v.adjoint() * v), &p_init), frob_dist(&(v * v.adjoint()), &p_fin)),
            Mode::Lax => (
                frob_dist(&(v.adjoint() * v * &p_init), &p_init),
                frob_dist(&(v * v.adjoint() * &p_fin), &p_fin),
            ),
        };
        let r = ri.max(rf);
        cert.max_space = cert.max_space.max(r);
        if r > tol {
            return Err(CovError::SpaceMismatch { elem: label, residual: r });
        }
        let beta = act.beta(x);
        let v_star = &cov.v[s.star(x)];
        for unit in act.algebra().matrix_units(beta.dom()) {
            let e = Element::matrix_unit(act.algebra(), unit);
            let lhs = v * rep.pi(&e) * v_star;
            let rhs = rep.pi(&beta.apply_restricted(&e));
            let r = frob_dist(&lhs, &rhs);
            cert.max_covariance = cert.max_covariance.max(r);
            if r > tol {
                return Err(CovError::CovarianceViolated { elem: label, unit, residual: r });
            }
        }
        let r = frob_dist(v_star, &v.adjoint());
        if r > tol {
            return Err(CovError::SpaceMismatch { elem: format!("v_{x}* vs v of the star"), residual: r });
        }
        cert.elements_checked += 1;
    }
    let e = s.unit().ok_or(CovError::MissingUnit)?;
    let r = frob_dist(&cov.v[e], &eye(rep.h_dim()));
    if r > tol {
        return Err(CovError::SpaceMismatch { elem: "v_e".into(), residual: r });
    }
    Ok(cert)
}
