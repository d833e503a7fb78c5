use std::fmt;

use super::{BlockAlgebra, BlockSet, CstarError, Element};
use crate::linalg::{eye, frob_dist, unitary_residual, CMat, C64};
use crate::semigroup::{InverseMonoidOracle, PartialBijection};

/// A *-isomorphism between two ideals of a block algebra.
///
/// Every such map sends each domain block onto a codomain block of the same
/// size and acts there by conjugation `a ↦ U a U*`.
#[derive(Clone, PartialEq)]
pub struct PartialAutomorphism {
    algebra: BlockAlgebra,
    dom: BlockSet,
    cod: BlockSet,
    map: Vec<Option<usize>>,
    unitaries: Vec<Option<CMat>>,
}

impl PartialAutomorphism {
    /// Builds the map from `(source block, target block, unitary)` triples.
    pub fn new(algebra: &BlockAlgebra, pairs: Vec<(usize, usize, CMat)>, tol: f64) -> Result<Self, CstarError> {
        let k = algebra.num_blocks();
        let mut map = vec![None; k];
        let mut unitaries = vec![None; k];
        let mut dom = BlockSet::EMPTY;
        let mut cod = BlockSet::EMPTY;
        for (from, to, u) in pairs {
            if from >= k {
                return Err(CstarError::BlockOutOfRange(from));
            }
            if to >= k {
                return Err(CstarError::BlockOutOfRange(to));
            }
            if dom.contains(from) || cod.contains(to) {
                return Err(CstarError::NotBijection);
            }
            let (nf, nt) = (algebra.block_dim(from), algebra.block_dim(to));
            if nf != nt || u.shape() != (nf, nf) {
                return Err(CstarError::BlockDimensionMismatch { from, to, from_dim: nf, to_dim: nt });
            }
            let residual = unitary_residual(&u);
            if residual > tol {
                return Err(CstarError::NotUnitary { block: from, residual });
            }
            dom.insert(from);
            cod.insert(to);
            map[from] = Some(to);
            unitaries[from] = Some(u);
        }
        Ok(PartialAutomorphism { algebra: algebra.clone(), dom, cod, map, unitaries })
    }

    /// Like [`new`](Self::new), additionally requiring the stated ideals to be
    /// exactly the sources and targets of the block map.
    pub fn with_ideals(
        algebra: &BlockAlgebra,
        dom: BlockSet,
        cod: BlockSet,
        pairs: Vec<(usize, usize, CMat)>,
        tol: f64,
    ) -> Result<Self, CstarError> {
        algebra.check_blocks(dom)?;
        algebra.check_blocks(cod)?;
        let p = Self::new(algebra, pairs, tol)?;
        if p.dom != dom || p.cod != cod {
            return Err(CstarError::NotBijection);
        }
        Ok(p)
    }

    /// The identity map `ι` of `A`.
    pub fn identity(algebra: &BlockAlgebra) -> Self {
        Self::identity_on(algebra, algebra.full())
    }

    /// `ι` restricted to the ideal spanned by `set`.
    pub fn identity_on(algebra: &BlockAlgebra, set: BlockSet) -> Self {
        let k = algebra.num_blocks();
        let mut map = vec![None; k];
        let mut unitaries = vec![None; k];
        let set = set.meet(algebra.full());
        for b in set.iter() {
            map[b] = Some(b);
            unitaries[b] = Some(eye(algebra.block_dim(b)));
        }
        PartialAutomorphism { algebra: algebra.clone(), dom: set, cod: set, map, unitaries }
    }

    /// The partial automorphism with zero domain.
    pub fn zero(algebra: &BlockAlgebra) -> Self {
        Self::identity_on(algebra, BlockSet::EMPTY)
    }

    /// A block permutation with trivial unitaries; blocks must have equal size.
    pub fn from_block_map(algebra: &BlockAlgebra, pairs: &[(usize, usize)]) -> Result<Self, CstarError> {
        let triples = pairs
            .iter()
            .map(|&(f, t)| (f, t, eye(algebra.dims().get(f).copied().unwrap_or(0))))
            .collect();
        Self::new(algebra, triples, 1e-12)
    }

    /// The partial automorphism of `ℂ^m` induced by a partial bijection:
    /// the coordinate at `x` moves to `p(x)`.
    pub fn from_partial_bijection(p: &PartialBijection) -> Self {
        let alg = BlockAlgebra::diagonal(p.ground()).expect("ground set sizes are validated by callers");
        let pairs: Vec<(usize, usize)> = p.domain().into_iter().map(|x| (x, p.get(x).unwrap())).collect();
        Self::from_block_map(&alg, &pairs).expect("partial bijections are injective")
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn dom(&self) -> BlockSet {
        self.dom
    }

    pub fn cod(&self) -> BlockSet {
        self.cod
    }

    pub fn target(&self, b: usize) -> Option<usize> {
        self.map.get(b).copied().flatten()
    }

    pub fn unitary(&self, b: usize) -> Option<&CMat> {
        self.unitaries.get(b).and_then(|u| u.as_ref())
    }

    /// `(source, target)` pairs in increasing source order.
    pub fn block_map(&self) -> Vec<(usize, usize)> {
        self.dom.iter().map(|b| (b, self.map[b].unwrap())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dom.is_empty()
    }

    /// `self ∘ other` on the largest possible domain `other⁻¹(dom self)`.
    pub fn compose(&self, other: &Self) -> Result<Self, CstarError> {
        if self.algebra != other.algebra {
            return Err(CstarError::ParentMismatch);
        }
        Ok(self.compose_same(other))
    }

    fn compose_same(&self, other: &Self) -> Self {
        let k = self.algebra.num_blocks();
        let mut map = vec![None; k];
        let mut unitaries = vec![None; k];
        let mut dom = BlockSet::EMPTY;
        let mut cod = BlockSet::EMPTY;
        for b in other.dom.iter() {
            let mid = other.map[b].unwrap();
            if let Some(to) = self.map[mid] {
                let u = self.unitaries[mid].as_ref().unwrap() * other.unitaries[b].as_ref().unwrap();
                dom.insert(b);
                cod.insert(to);
                map[b] = Some(to);
                unitaries[b] = Some(u);
            }
        }
        PartialAutomorphism { algebra: self.algebra.clone(), dom, cod, map, unitaries }
    }

    /// The inverse map `J → I`.
    pub fn adjoint(&self) -> Self {
        let k = self.algebra.num_blocks();
        let mut map = vec![None; k];
        let mut unitaries = vec![None; k];
        for b in self.dom.iter() {
            let t = self.map[b].unwrap();
            map[t] = Some(b);
            unitaries[t] = Some(self.unitaries[b].as_ref().unwrap().adjoint());
        }
        PartialAutomorphism { algebra: self.algebra.clone(), dom: self.cod, cod: self.dom, map, unitaries }
    }

    /// Applies the map to an element supported in the domain.
    pub fn apply(&self, a: &Element, tol: f64) -> Result<Element, CstarError> {
        if a.dims() != self.algebra.dims() {
            return Err(CstarError::ShapeMismatch);
        }
        let mass = a.mass_outside(self.dom);
        if mass > tol {
            return Err(CstarError::OutsideDomain { mass });
        }
        Ok(self.apply_restricted(a))
    }

    /// Applies the map to the part of `a` lying in the domain.
    pub fn apply_restricted(&self, a: &Element) -> Element {
        let mut out = Element::zero(&self.algebra);
        for b in self.dom.iter() {
            let t = self.map[b].unwrap();
            let u = self.unitaries[b].as_ref().unwrap();
            *out.block_mut(t) = u * a.block(b) * u.adjoint();
        }
        out
    }

    /// Image of the ideal `set ∩ dom`.
    pub fn image(&self, set: BlockSet) -> BlockSet {
        BlockSet::from_blocks(set.meet(self.dom).iter().map(|b| self.map[b].unwrap()))
    }

    /// Domain blocks mapped into `set`.
    pub fn preimage(&self, set: BlockSet) -> BlockSet {
        BlockSet::from_blocks(self.dom.iter().filter(|&b| set.contains(self.map[b].unwrap())))
    }

    /// Restriction to the ideal `set ∩ dom`.
    pub fn restrict(&self, set: BlockSet) -> Self {
        self.compose_same(&Self::identity_on(&self.algebra, set))
    }

    /// Same domain, codomain, block map, and conjugation maps. Conjugation by
    /// `U` and by `λU` with `|λ| = 1` coincide, so unitaries are compared up
    /// to a phase.
    pub fn same_map(&self, other: &Self, tol: f64) -> bool {
        self.algebra == other.algebra
            && self.dom == other.dom
            && self.cod == other.cod
            && self.map == other.map
            && self.dom.iter().all(|b| {
                conjugation_distance(self.unitaries[b].as_ref().unwrap(), other.unitaries[b].as_ref().unwrap())
                    <= tol
            })
    }

    /// `self` agrees with `other` on the whole domain of `other`.
    pub fn extends(&self, other: &Self, tol: f64) -> bool {
        other.dom.is_subset(self.dom) && self.restrict(other.dom).same_map(other, tol)
    }

    /// Whether this is the identity map of the ideal `set`.
    pub fn is_identity_on(&self, set: BlockSet, tol: f64) -> bool {
        self.same_map(&Self::identity_on(&self.algebra, set), tol)
    }

    /// Largest conjugation distance to `other` over common blocks, or
    /// infinity if the block data differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.algebra != other.algebra || self.dom != other.dom || self.map != other.map {
            return f64::INFINITY;
        }
        self.dom
            .iter()
            .map(|b| conjugation_distance(self.unitaries[b].as_ref().unwrap(), other.unitaries[b].as_ref().unwrap()))
            .fold(0.0, f64::max)
    }
}

/// `‖U₂*U₁ − λ·1‖_F` for the best phase `λ`; zero iff both conjugations agree.
fn conjugation_distance(u1: &CMat, u2: &CMat) -> f64 {
    let m = u2.adjoint() * u1;
    let n = m.nrows();
    if n == 0 {
        return 0.0;
    }
    let lambda: C64 = m.trace() / n as f64;
    frob_dist(&m, &(eye(n) * lambda))
}

impl fmt::Debug for PartialAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PAut{{{} → {}, map: {:?}}}", self.dom, self.cod, self.block_map())
    }
}

/// `PAut(A)` as an ambient inverse monoid with tolerance-based equality.
#[derive(Clone, Debug)]
pub struct PautoOracle {
    pub algebra: BlockAlgebra,
    pub tol: f64,
}

impl InverseMonoidOracle for PautoOracle {
    type Elem = PartialAutomorphism;

    fn unit(&self) -> PartialAutomorphism {
        PartialAutomorphism::identity(&self.algebra)
    }

    fn product(&self, a: &PartialAutomorphism, b: &PartialAutomorphism) -> PartialAutomorphism {
        a.compose_same(b)
    }

    fn star(&self, a: &PartialAutomorphism) -> PartialAutomorphism {
        a.adjoint()
    }

    fn same(&self, a: &PartialAutomorphism, b: &PartialAutomorphism) -> bool {
        a.same_map(b, self.tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, random_gaussian, random_unitary};
    use crate::semigroup::{generate_closure, symmetric_inverse_monoid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    fn c2() -> BlockAlgebra {
        BlockAlgebra::diagonal(2).unwrap()
    }

    fn shift() -> PartialAutomorphism {
        PartialAutomorphism::from_block_map(&c2(), &[(0, 1)]).unwrap()
    }

    fn scalar_elem(alg: &BlockAlgebra, vals: &[f64]) -> Element {
        Element::from_blocks(alg, vals.iter().map(|&v| CMat::from_element(1, 1, c(v, 0.0))).collect()).unwrap()
    }

    /// A random partial automorphism of `M_2 ⊕ M_2 ⊕ M_1 ⊕ M_2`.
    fn random_pauto(rng: &mut ChaCha8Rng) -> PartialAutomorphism {
        let alg = BlockAlgebra::new(vec![2, 2, 1, 2]).unwrap();
        let same_size = [0usize, 1, 3];
        let mut targets = same_size.to_vec();
        // shuffle
        for i in (1..targets.len()).rev() {
            let j = rng.random_range(0..=i);
            targets.swap(i, j);
        }
        let mut pairs = Vec::new();
        for (i, &from) in same_size.iter().enumerate() {
            if rng.random_bool(0.7) {
                pairs.push((from, targets[i], random_unitary(2, rng)));
            }
        }
        if rng.random_bool(0.5) {
            pairs.push((2, 2, random_unitary(1, rng)));
        }
        PartialAutomorphism::new(&alg, pairs, TOL).unwrap()
    }

    fn random_element(alg: &BlockAlgebra, rng: &mut ChaCha8Rng) -> Element {
        Element::from_blocks(alg, alg.dims().iter().map(|&n| random_gaussian(n, n, rng)).collect()).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = random_pauto(&mut rng);
            let id = PartialAutomorphism::identity(a.algebra());
            assert!(id.compose(&a).unwrap().same_map(&a, TOL));
            assert!(a.compose(&id).unwrap().same_map(&a, TOL));
        }
        let id = PartialAutomorphism::identity(&c2());
        assert!(id.adjoint().same_map(&id, TOL));
    }

    #[test]
    fn shift_squares_to_zero() {
        let s = shift();
        let ss = s.compose(&s).unwrap();
        assert!(ss.is_zero());
        assert_eq!(ss.cod(), BlockSet::EMPTY);
    }

    #[test]
    fn shift_moves_coordinates() {
        let alg = c2();
        let out = shift().apply(&scalar_elem(&alg, &[3.0, 0.0]), TOL).unwrap();
        assert_eq!(out, scalar_elem(&alg, &[0.0, 3.0]));
        assert!(matches!(
            shift().apply(&scalar_elem(&alg, &[1.0, 1.0]), TOL),
            Err(CstarError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn alpha_alpha_star_is_identity_on_codomain() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = random_pauto(&mut rng);
            let e = a.compose(&a.adjoint()).unwrap();
            assert!(e.is_identity_on(a.cod(), TOL));
        }
        let swap = PartialAutomorphism::from_block_map(&c2(), &[(0, 1), (1, 0)]).unwrap();
        assert!(swap.adjoint().same_map(&swap, TOL));
    }

    #[test]
    fn double_adjoint_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_pauto(&mut rng);
            assert!(a.adjoint().adjoint().same_map(&a, TOL));
            // exact at block level
            assert_eq!(a.adjoint().adjoint().block_map(), a.block_map());
        }
    }

    #[test]
    fn homomorphism_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let a = random_pauto(&mut rng);
            let x = random_element(a.algebra(), &mut rng).restrict(a.dom());
            let y = random_element(a.algebra(), &mut rng).restrict(a.dom());
            let lhs = a.apply(&(&x * &y), TOL).unwrap();
            let rhs = &a.apply(&x, TOL).unwrap() * &a.apply(&y, TOL).unwrap();
            assert!(lhs.distance(&rhs) < 1e-9);
            let adj = a.apply(&x.adjoint(), TOL).unwrap();
            assert!(adj.distance(&a.apply(&x, TOL).unwrap().adjoint()) < 1e-9);
        }
    }

    #[test]
    fn compose_associative_and_inverse_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let (a, b, c) = (random_pauto(&mut rng), random_pauto(&mut rng), random_pauto(&mut rng));
            let l = a.compose(&b).unwrap().compose(&c).unwrap();
            let r = a.compose(&b.compose(&c).unwrap()).unwrap();
            assert_eq!(l.block_map(), r.block_map());
            assert!(l.distance(&r) <= 1e-9);
            let aaa = a.compose(&a.adjoint()).unwrap().compose(&a).unwrap();
            assert_eq!(aaa.block_map(), a.block_map());
            assert!(aaa.distance(&a) <= 1e-9);
        }
    }

    #[test]
    fn phase_does_not_change_the_map() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let u = random_unitary(2, &mut rng);
        let a = PartialAutomorphism::new(&alg, vec![(0, 0, u.clone())], TOL).unwrap();
        let b = PartialAutomorphism::new(&alg, vec![(0, 0, u * c(0.0, 1.0))], TOL).unwrap();
        assert!(a.same_map(&b, TOL));
        assert!(!a.same_map(&PartialAutomorphism::identity(&alg), TOL));
    }

    #[test]
    fn rejects_bad_data() {
        let alg = BlockAlgebra::new(vec![1, 2]).unwrap();
        assert!(matches!(
            PartialAutomorphism::from_block_map(&alg, &[(0, 1)]),
            Err(CstarError::BlockDimensionMismatch { .. })
        ));
        assert_eq!(
            PartialAutomorphism::from_block_map(&c2(), &[(0, 1), (1, 1)]).unwrap_err(),
            CstarError::NotBijection
        );
        let bad = CMat::from_element(1, 1, c(2.0, 0.0));
        assert!(matches!(
            PartialAutomorphism::new(&c2(), vec![(0, 0, bad)], TOL),
            Err(CstarError::NotUnitary { .. })
        ));
        let other = PartialAutomorphism::identity(&alg);
        assert_eq!(shift().compose(&other).unwrap_err(), CstarError::ParentMismatch);
    }

    #[test]
    fn closure_of_shift_has_six_elements() {
        let oracle = PautoOracle { algebra: c2(), tol: TOL };
        let s = shift();
        let gens = vec![s.clone(), s.adjoint(), PartialAutomorphism::identity(&c2()), PartialAutomorphism::zero(&c2())];
        let cl = generate_closure(&oracle, &gens, 512).unwrap();
        assert_eq!(cl.order(), 6);
        assert!(cl.zero().is_some());
    }

    #[test]
    fn commutative_embedding_commutes_with_operations() {
        let (s, elems) = symmetric_inverse_monoid(3).unwrap();
        let emb: Vec<PartialAutomorphism> = elems.iter().map(PartialAutomorphism::from_partial_bijection).collect();
        for a in 0..s.order() {
            assert!(emb[a].adjoint().same_map(&emb[s.star(a)], 0.0));
            for b in 0..s.order() {
                let prod = emb[a].compose(&emb[b]).unwrap();
                assert!(prod.same_map(&emb[s.mul(a, b)], 0.0));
            }
        }
    }
}
