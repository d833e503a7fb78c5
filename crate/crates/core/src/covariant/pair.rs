use std::collections::BTreeMap;

use super::{
    validate_covrep_partial, validate_semigroup_action, validate_semigroup_covrep, CovError, CovariantRep,
    SemigroupAction, SemigroupCovRep,
};
use crate::config::{Config, Mode};
use crate::cstar::{BlockAlgebra, BlockSet, PartialAutomorphism};
use crate::linalg::{eye, frob_dist, CMat};
use crate::partial_action::{Group, PartialAction};
use crate::semigroup::{generate_closure, Closure, InverseMonoidOracle};

/// `(α_{g_1}⋯α_{g_n}, u_{g_1}⋯u_{g_n})` together with one word producing it.
#[derive(Clone, Debug)]
pub struct PairElement {
    pub alpha: PartialAutomorphism,
    pub u: CMat,
    pub word: Vec<i64>,
}

/// Componentwise products; equality ignores the word.
#[derive(Clone, Debug)]
pub struct PairOracle {
    pub algebra: BlockAlgebra,
    pub group: Group,
    pub h_dim: usize,
    pub tol: f64,
}

impl InverseMonoidOracle for PairOracle {
    type Elem = PairElement;

    fn unit(&self) -> PairElement {
        PairElement { alpha: PartialAutomorphism::identity(&self.algebra), u: eye(self.h_dim), word: vec![] }
    }

    fn product(&self, a: &PairElement, b: &PairElement) -> PairElement {
        let alpha = a.alpha.compose(&b.alpha).expect("same algebra");
        let word = a.word.iter().chain(&b.word).copied().collect();
        PairElement { alpha, u: &a.u * &b.u, word }
    }

    fn star(&self, a: &PairElement) -> PairElement {
        let word = a.word.iter().rev().map(|&g| self.group.inverse(g)).collect();
        PairElement { alpha: a.alpha.adjoint(), u: a.u.adjoint(), word }
    }

    fn same(&self, a: &PairElement, b: &PairElement) -> bool {
        a.alpha.same_map(&b.alpha, self.tol) && frob_dist(&a.u, &b.u) <= self.tol
    }
}

/// The pair semigroup of a covariant representation with its action and the
/// second-coordinate representation.
#[derive(Clone, Debug)]
pub struct PairSemigroup {
    pub closure: Closure<PairElement>,
    pub oracle: PairOracle,
    /// Abstract index of `(α_g, u_g)` for each `g` in the support.
    pub generators: BTreeMap<i64, usize>,
    pub action: SemigroupAction,
    pub covrep: SemigroupCovRep,
}

impl PairSemigroup {
    pub fn order(&self) -> usize {
        self.closure.order()
    }

    /// Index of `(α_g, u_g)`.
    pub fn generator(&self, g: i64) -> Result<usize, CovError> {
        self.generators.get(&g).copied().ok_or(CovError::PairNotInS(g))
    }
}

/// `D_{s_1} D_{s_1s_2} ⋯ D_{s_1⋯s_n}`.
fn word_range(pa: &PartialAction, word: &[i64]) -> BlockSet {
    let g = pa.group();
    let mut prefix = g.identity();
    word.iter().fold(pa.algebra().full(), |acc, &s| {
        prefix = g.product(prefix, s);
        acc.meet(pa.domain(prefix))
    })
}

/// Closes `{(α_g, u_g) : g ∈ support}` under products and stars. `E_s` is
/// read off the word formula, `β_s` is the first coordinate and `v_s` the
/// second. Both the action and `(π, v)` are validated before returning,
/// the latter in `mode`.
pub fn pair_semigroup_action(cov: &CovariantRep, mode: Mode, cfg: &Config) -> Result<PairSemigroup, CovError> {
    let pa = cov.action();
    let oracle = PairOracle {
        algebra: pa.algebra().clone(),
        group: pa.group().clone(),
        h_dim: cov.rep().h_dim(),
        tol: cfg.tol,
    };
    let support = pa.support();
    let gens: Vec<PairElement> =
        support.iter().map(|&g| PairElement { alpha: pa.alpha(g), u: cov.u(g), word: vec![g] }).collect();
    let closure = generate_closure(&oracle, &gens, cfg.bound)?;
    let generators = support.iter().copied().zip(closure.generator_index.iter().copied()).collect();

    let ideals: Vec<BlockSet> = closure.elements.iter().map(|p| word_range(pa, &p.word)).collect();
    for (i, p) in closure.elements.iter().enumerate() {
        if p.alpha.cod() != ideals[i] {
            return Err(CovError::DomainMismatch(i));
        }
    }
    let beta = closure.elements.iter().map(|p| p.alpha.clone()).collect();
    let action = SemigroupAction::with_ideals(&closure.semigroup, pa.algebra(), ideals, beta)?;
    validate_semigroup_action(&action, cfg.tol)?;
    let v = closure.elements.iter().map(|p| p.u.clone()).collect();
    let covrep = SemigroupCovRep::new(&action, cov.rep(), v)?;
    validate_semigroup_covrep(&covrep, mode, cfg.tol)?;
    Ok(PairSemigroup { closure, oracle, generators, action, covrep })
}

/// `w_g = z_{(α_g, u_g)}` for `g` in the support, validated as a covariant
/// representation of the original partial action.
pub fn restrict_action_covrep(
    pa: &PartialAction,
    pair: &PairSemigroup,
    z: &SemigroupCovRep,
    mode: Mode,
    tol: f64,
) -> Result<CovariantRep, CovError> {
    if z.action().order() != pair.order() {
        return Err(CovError::FamilySizeMismatch { expected: pair.order(), found: z.action().order() });
    }
    let mut members = Vec::new();
    for g in pa.support() {
        members.push((g, z.v(pair.generator(g)?).clone()));
    }
    let w = CovariantRep::new(pa, z.rep(), members)?;
    validate_covrep_partial(&w, mode, tol)?;
    Ok(w)
}
