//! The commutative model: partial actions by partial bijections of a finite
//! set, their embeddings into block algebras, and random instances.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use super::{Group, PartialAction, PartialActionError};
use crate::cstar::{BlockAlgebra, BlockSet, PartialAutomorphism};
use crate::linalg::CMat;
use crate::semigroup::PartialBijection;

/// `g ↦ θ_g`, a partial action of a group on `{0, …, ground−1}` by partial
/// bijections. Elements missing from `maps` act by the empty map.
#[derive(Clone, Debug)]
pub struct BijectionAction {
    pub ground: usize,
    pub group: Group,
    pub maps: BTreeMap<i64, PartialBijection>,
}

fn point_set(points: &[usize]) -> BlockSet {
    BlockSet::from_blocks(points.iter().copied())
}

impl BijectionAction {
    pub fn theta(&self, g: i64) -> PartialBijection {
        self.maps.get(&g).cloned().unwrap_or_else(|| PartialBijection::empty(self.ground))
    }

    /// `D_g`, the range of `θ_g`, as a point set.
    pub fn domain(&self, g: i64) -> BlockSet {
        point_set(&self.theta(g).range())
    }

    pub fn support(&self) -> Vec<i64> {
        self.maps.iter().filter(|(_, m)| !m.domain().is_empty()).map(|(&g, _)| g).collect()
    }

    /// Exact check of the partial action axioms.
    pub fn validate(&self) -> Result<(), PartialActionError> {
        let g = &self.group;
        let e = g.identity();
        if self.theta(e) != PartialBijection::identity(self.ground) {
            return Err(PartialActionError::UnitIdealNotFull);
        }
        let support = self.support();
        for &s in &support {
            let th = self.theta(s);
            if point_set(&th.domain()) != self.domain(g.inverse(s)) {
                return Err(PartialActionError::DomainMismatch(s));
            }
            if self.theta(g.inverse(s)) != th.inverse() {
                return Err(PartialActionError::InverseMismatch(s));
            }
        }
        let mut pool: BTreeSet<i64> = support.iter().copied().collect();
        for &s in &support {
            for &t in &support {
                pool.insert(g.product(s, t));
            }
        }
        for &s in &pool {
            for &t in &pool {
                let comp = self.theta(s).compose(&self.theta(t));
                if !self.theta(g.product(s, t)).extends(&comp) {
                    return Err(PartialActionError::ExtensionViolated(s, t));
                }
            }
        }
        Ok(())
    }

    /// `θ_{s_1} ∘ ⋯ ∘ θ_{s_n}`.
    pub fn composite(&self, word: &[i64]) -> PartialBijection {
        word.iter()
            .rev()
            .fold(PartialBijection::identity(self.ground), |acc, &s| self.theta(s).compose(&acc))
    }

    /// The induced partial action on `ℂ^ground`.
    pub fn embed(&self) -> PartialAction {
        let alg = BlockAlgebra::diagonal(self.ground).expect("ground set is nonempty");
        let alphas = self
            .maps
            .iter()
            .map(|(&g, m)| (g, PartialAutomorphism::from_partial_bijection(m)))
            .collect();
        PartialAction::new(&alg, self.group.clone(), alphas).expect("elements come from the group")
    }

    /// The induced partial action on `⊕_x M_n` where `α_g` carries block `x`
    /// to block `θ_g(x)` by conjugation with `V_{θ_g x} V_x*`.
    pub fn embed_with_frames(&self, frames: &[CMat]) -> PartialAction {
        assert_eq!(frames.len(), self.ground);
        let n = frames[0].nrows();
        let alg = BlockAlgebra::new(vec![n; self.ground]).expect("ground set is nonempty");
        let alphas = self
            .maps
            .iter()
            .map(|(&g, m)| {
                let pairs = m
                    .domain()
                    .into_iter()
                    .map(|x| {
                        let y = m.get(x).unwrap();
                        (x, y, &frames[y] * frames[x].adjoint())
                    })
                    .collect();
                (g, PartialAutomorphism::new(&alg, pairs, 1e-8).expect("frames are unitary"))
            })
            .collect();
        PartialAction::new(&alg, self.group.clone(), alphas).expect("elements come from the group")
    }

    /// Shrinks one `θ_g` (and `θ_{g⁻¹}` with it) to a random part of its
    /// domain. The result keeps `θ_e = id` and the inverse law, but usually
    /// breaks the extension condition.
    pub fn perturb<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let e = self.group.identity();
        let candidates: Vec<i64> = self.support().into_iter().filter(|&g| g != e).collect();
        let Some(&g) = candidates.choose(rng) else { return };
        let th = self.theta(g);
        let keep: Vec<usize> = th.domain().into_iter().filter(|_| rng.random_bool(0.5)).collect();
        let inv = self.group.inverse(g);
        let mut keep: BTreeSet<usize> = keep.into_iter().collect();
        if inv == g {
            keep = keep.iter().copied().filter(|&x| keep.contains(&th.get(x).unwrap())).collect();
        }
        let restricted: Vec<Option<usize>> =
            (0..self.ground).map(|x| if keep.contains(&x) { th.get(x) } else { None }).collect();
        let r = PartialBijection::from_map(restricted).unwrap();
        self.maps.insert(inv, r.inverse());
        self.maps.insert(g, r);
    }
}

/// A random partial action together with the letters used to form words.
#[derive(Clone, Debug)]
pub struct FuzzInstance {
    pub action: BijectionAction,
    pub alphabet: Vec<i64>,
    pub description: String,
}

/// Restricts a global action `act(g, x)` on `0..size` to a subset `Y`.
fn restrict_global(group: Group, size: usize, elems: &[i64], act: impl Fn(i64, usize) -> Option<usize>, y: &[usize]) -> BijectionAction {
    let pos: BTreeMap<usize, usize> = y.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut maps = BTreeMap::new();
    for &g in elems {
        let map: Vec<Option<usize>> = y
            .iter()
            .map(|&x| act(g, x).filter(|gx| *gx < size).and_then(|gx| pos.get(&gx).copied()))
            .collect();
        let m = PartialBijection::from_map(map).expect("restriction of a bijection");
        if !m.domain().is_empty() {
            maps.insert(g, m);
        }
    }
    BijectionAction { ground: y.len(), group, maps }
}

fn random_subset<R: Rng + ?Sized>(size: usize, max: usize, rng: &mut R) -> Vec<usize> {
    let k = rng.random_range(1..=max.min(size));
    let mut all: Vec<usize> = (0..size).collect();
    all.shuffle(rng);
    let mut y = all[..k].to_vec();
    y.sort_unstable();
    y
}

/// A random partial action on at most six points, obtained by restricting a
/// global action to a random subset: coset actions of `ℤ₂`, `ℤ₃` or `S₃`, or
/// `ℤ` translating the first coordinate of `{0,1,2} × {0,1}`.
pub fn random_bijection_action<R: Rng + ?Sized>(rng: &mut R) -> FuzzInstance {
    match rng.random_range(0..4) {
        3 => {
            // x = 2i + j with i the translated coordinate
            let y = random_subset(6, 6, rng);
            let act = |n: i64, x: usize| {
                let i = (x / 2) as i64 + n;
                (0..3).contains(&i).then(|| 2 * i as usize + x % 2)
            };
            let elems: Vec<i64> = (-2..=2).collect();
            let action = restrict_global(Group::Integers, 6, &elems, act, &y);
            FuzzInstance { action, alphabet: (-3..=3).collect(), description: format!("Z on {y:?}") }
        }
        k => {
            let group = [Group::cyclic(2), Group::cyclic(3), Group::s3()][k].clone();
            let elems = group.elements().unwrap();
            let subgroups = group.subgroups();
            let orbits = rng.random_range(1..=2);
            // points are (orbit, left coset) pairs, cosets named by a
            // representative's sorted coset
            let mut points: Vec<(usize, Vec<i64>)> = Vec::new();
            for o in 0..orbits {
                let h = subgroups.choose(rng).unwrap();
                let mut seen = BTreeSet::new();
                for &g in &elems {
                    let mut coset: Vec<i64> = h.iter().map(|&x| group.product(g, x)).collect();
                    coset.sort_unstable();
                    if seen.insert(coset.clone()) {
                        points.push((o, coset));
                    }
                }
            }
            let size = points.len();
            let act = |g: i64, x: usize| {
                let (o, coset) = &points[x];
                let mut img: Vec<i64> = coset.iter().map(|&c| group.product(g, c)).collect();
                img.sort_unstable();
                points.iter().position(|(o2, c2)| o2 == o && *c2 == img)
            };
            let y = random_subset(size, 6, rng);
            let action = restrict_global(group.clone(), size, &elems, act, &y);
            FuzzInstance {
                action,
                alphabet: elems,
                description: format!("{} on {} of {} coset points", group.name(), y.len(), size),
            }
        }
    }
}
