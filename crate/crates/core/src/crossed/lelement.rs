use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::CrossedError;
use crate::covariant::SemigroupAction;
use crate::cstar::Element;
use crate::linalg::{random_gaussian, zeros, C64};

/// A finitely supported `x : S → A` with `x(s) ∈ E_s`. Exactly zero
/// coefficients are pruned.
#[derive(Clone, Debug)]
pub struct LElement {
    parent: Arc<SemigroupAction>,
    terms: BTreeMap<usize, Element>,
}

impl LElement {
    pub fn zero(parent: &Arc<SemigroupAction>) -> Self {
        LElement { parent: parent.clone(), terms: BTreeMap::new() }
    }

    /// `a δ_s`.
    pub fn delta(parent: &Arc<SemigroupAction>, a: Element, s: usize) -> Result<Self, CrossedError> {
        Self::from_terms(parent, vec![(s, a)])
    }

    /// Sums the given terms; duplicates are added.
    pub fn from_terms(parent: &Arc<SemigroupAction>, terms: Vec<(usize, Element)>) -> Result<Self, CrossedError> {
        let mut x = Self::zero(parent);
        for (s, a) in terms {
            if s >= parent.order() {
                return Err(CrossedError::OutOfRange(s));
            }
            if a.dims() != parent.algebra().dims() {
                return Err(CrossedError::NotInIdeal { s });
            }
            if !a.support().is_subset(parent.ideal(s)) {
                return Err(CrossedError::NotInIdeal { s });
            }
            x.add_term(s, a);
        }
        Ok(x)
    }

    fn add_term(&mut self, s: usize, a: Element) {
        let sum = match self.terms.remove(&s) {
            Some(b) => &b + &a,
            None => a,
        };
        if !sum.is_exact_zero() {
            self.terms.insert(s, sum);
        }
    }

    pub fn parent(&self) -> &Arc<SemigroupAction> {
        &self.parent
    }

    pub fn terms(&self) -> &BTreeMap<usize, Element> {
        &self.terms
    }

    /// `x(s)`, zero off the support.
    pub fn coeff(&self, s: usize) -> Element {
        self.terms.get(&s).cloned().unwrap_or_else(|| Element::zero(self.parent.algebra()))
    }

    pub fn support(&self) -> Vec<usize> {
        self.terms.keys().copied().collect()
    }

    fn check_parent(&self, other: &Self) -> Result<(), CrossedError> {
        if Arc::ptr_eq(&self.parent, &other.parent) {
            Ok(())
        } else {
            Err(CrossedError::ParentMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CrossedError> {
        self.check_parent(other)?;
        let mut x = self.clone();
        for (&s, a) in &other.terms {
            x.add_term(s, a.clone());
        }
        Ok(x)
    }

    pub fn scale(&self, z: C64) -> Self {
        let mut x = Self::zero(&self.parent);
        for (&s, a) in &self.terms {
            x.add_term(s, a.scale(z));
        }
        x
    }

    /// `(x*y)(s) = Σ_{rt=s} β_r(β_{r*}(x(r)) y(t))`.
    pub fn multiply(&self, other: &Self) -> Result<Self, CrossedError> {
        self.check_parent(other)?;
        let act = &*self.parent;
        let sg = act.semigroup();
        let mut out = Self::zero(&self.parent);
        for (&r, a) in &self.terms {
            let back = act.beta(sg.star(r)).apply_restricted(a);
            for (&t, b) in &other.terms {
                let term = act.beta(r).apply_restricted(&(&back * b));
                out.add_term(sg.mul(r, t), term);
            }
        }
        Ok(out)
    }

    /// `x*(s) = β_s(x(s*)*)`.
    pub fn star(&self) -> Self {
        let act = &*self.parent;
        let sg = act.semigroup();
        let mut out = Self::zero(&self.parent);
        for (&r, a) in &self.terms {
            let s = sg.star(r);
            out.add_term(s, act.beta(s).apply_restricted(&a.adjoint()));
        }
        out
    }

    /// `Σ_s ‖x(s)‖`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(Element::norm).sum()
    }

    /// Largest Frobenius distance between coefficients.
    pub fn distance(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<usize> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.into_iter().map(|s| self.coeff(s).distance(&other.coeff(s))).fold(0.0, f64::max)
    }
}

/// A random element with up to `max_terms` Gaussian coefficients.
pub fn random_lelement<R: Rng + ?Sized>(parent: &Arc<SemigroupAction>, max_terms: usize, rng: &mut R) -> LElement {
    let alg = parent.algebra();
    let k = rng.random_range(1..=max_terms.max(1));
    let mut terms = Vec::with_capacity(k);
    for _ in 0..k {
        let s = rng.random_range(0..parent.order());
        let e = parent.ideal(s);
        let blocks = alg
            .dims()
            .iter()
            .enumerate()
            .map(|(b, &n)| if e.contains(b) { random_gaussian(n, n, rng) } else { zeros(n) })
            .collect();
        terms.push((s, Element::from_blocks(alg, blocks).expect("block sizes match")));
    }
    LElement::from_terms(parent, terms).expect("coefficients lie in the ideals")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Config, Mode};
    use crate::covariant::{pair_semigroup_action, HilbertRep, CovariantRep};
    use crate::cstar::{BlockAlgebra, BlockSet, MatrixUnit, PartialAutomorphism};
    use crate::linalg::real;
    use crate::partial_action::{Group, PartialAction};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shift_parent() -> Arc<SemigroupAction> {
        let alg = BlockAlgebra::diagonal(2).unwrap();
        let a1 = PartialAutomorphism::from_block_map(&alg, &[(0, 1)]).unwrap();
        let pa = PartialAction::new(&alg, Group::Integers, vec![(1, a1)]).unwrap();
        let rep = HilbertRep::with_multiplicity(&alg, &[1, 1]).unwrap();
        let cov = CovariantRep::new(&pa, &rep, vec![(1, real(2, 2, &[0.0, 0.0, 1.0, 0.0]))]).unwrap();
        Arc::new(pair_semigroup_action(&cov, Mode::Strict, &Config::default()).unwrap().action)
    }

    #[test]
    fn delta_products() {
        let p = shift_parent();
        let alg = p.algebra().clone();
        let sg = p.semigroup().clone();
        for s in 0..p.order() {
            for t in 0..p.order() {
                for ua in alg.matrix_units(p.ideal(s)) {
                    for ub in alg.matrix_units(p.ideal(t)) {
                        let a = Element::matrix_unit(&alg, ua);
                        let b = Element::matrix_unit(&alg, ub);
                        let x = LElement::delta(&p, a.clone(), s).unwrap();
                        let y = LElement::delta(&p, b.clone(), t).unwrap();
                        let xy = x.multiply(&y).unwrap();
                        let expect = p.beta(s).apply_restricted(&(&p.beta(sg.star(s)).apply_restricted(&a) * &b));
                        let want = LElement::from_terms(&p, vec![(sg.mul(s, t), expect)]).unwrap();
                        assert!(xy.distance(&want) <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn coefficient_outside_ideal_is_rejected() {
        let p = shift_parent();
        let s = (0..p.order()).find(|&s| p.ideal(s) == BlockSet::singleton(1)).unwrap();
        let a = Element::matrix_unit(p.algebra(), MatrixUnit { block: 0, row: 0, col: 0 });
        assert!(matches!(LElement::delta(&p, a, s), Err(CrossedError::NotInIdeal { .. })));
    }

    #[test]
    fn star_of_delta() {
        let p = shift_parent();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x = random_lelement(&p, 4, &mut rng);
            assert!(x.star().star().distance(&x) == 0.0);
            assert!((x.star().l1_norm() - x.l1_norm()).abs() <= 1e-12 * x.l1_norm().max(1.0));
        }
    }

    #[test]
    fn unit_law() {
        let p = shift_parent();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let one = LElement::delta(&p, Element::identity(p.algebra()), 0).unwrap();
        for _ in 0..20 {
            let x = random_lelement(&p, 3, &mut rng);
            assert!(one.multiply(&x).unwrap().distance(&x) <= 1e-12);
        }
    }

    #[test]
    fn different_parents() {
        let p = shift_parent();
        let q = shift_parent();
        let x = LElement::zero(&p);
        assert_eq!(x.multiply(&LElement::zero(&q)).unwrap_err(), CrossedError::ParentMismatch);
    }
}
