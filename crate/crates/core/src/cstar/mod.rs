//! Finite-dimensional C*-algebras `A = M_{n_1} ⊕ ⋯ ⊕ M_{n_k}`.
//!
//! Closed two-sided ideals of such an algebra are exactly the sums of a
//! subset of the blocks, so ideals are stored as block sets and all ideal
//! arithmetic is exact.

mod pauto;
mod span;
mod structure;

pub use pauto::{PartialAutomorphism, PautoOracle};
pub use span::{algebra_equal, span_closure, span_residual, MatrixAlgebraSpan};
pub use structure::{structure_report, StructureReport};

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{frob, frob_dist, op_norm, zeros, CMat, C64};

/// Blocks are limited to 64 so that a block set fits in one word.
pub const MAX_BLOCKS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CstarError {
    #[error("block algebra needs between 1 and {MAX_BLOCKS} blocks of positive size, got {0:?}")]
    InvalidAlgebra(Vec<usize>),
    #[error("operands belong to different algebras")]
    ParentMismatch,
    #[error("block {0} is out of range")]
    BlockOutOfRange(usize),
    #[error("block map is not a bijection from the domain blocks onto the codomain blocks")]
    NotBijection,
    #[error("block {from} of size {from_dim} cannot map to block {to} of size {to_dim}")]
    BlockDimensionMismatch { from: usize, to: usize, from_dim: usize, to_dim: usize },
    #[error("unitary for block {block} is not unitary (residual {residual:.3e})")]
    NotUnitary { block: usize, residual: f64 },
    #[error("element has mass {mass:.3e} outside the domain ideal")]
    OutsideDomain { mass: f64 },
    #[error("element shape does not match the algebra")]
    ShapeMismatch,
    #[error("matrices of size {found} do not match ambient dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("structure analysis ill-conditioned: {0}")]
    IllConditioned(String),
}

/// A set of block indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockSet(u64);

impl BlockSet {
    pub const EMPTY: BlockSet = BlockSet(0);

    pub fn full(k: usize) -> Self {
        if k >= 64 {
            BlockSet(u64::MAX)
        } else {
            BlockSet((1u64 << k) - 1)
        }
    }

    pub fn singleton(b: usize) -> Self {
        BlockSet(1u64 << b)
    }

    pub fn from_blocks<I: IntoIterator<Item = usize>>(blocks: I) -> Self {
        BlockSet(blocks.into_iter().fold(0u64, |acc, b| acc | (1u64 << b)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, b: usize) -> bool {
        b < 64 && self.0 & (1u64 << b) != 0
    }

    pub fn insert(&mut self, b: usize) {
        self.0 |= 1u64 << b;
    }

    pub fn meet(self, other: BlockSet) -> BlockSet {
        BlockSet(self.0 & other.0)
    }

    pub fn join(self, other: BlockSet) -> BlockSet {
        BlockSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: BlockSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn max_block(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&b| self.contains(b))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for BlockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BlockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|b| b.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `A = ⊕ M_{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockAlgebra {
    dims: Vec<usize>,
}

impl BlockAlgebra {
    pub fn new(dims: Vec<usize>) -> Result<Self, CstarError> {
        if dims.is_empty() || dims.len() > MAX_BLOCKS || dims.contains(&0) {
            return Err(CstarError::InvalidAlgebra(dims));
        }
        Ok(BlockAlgebra { dims })
    }

    /// `ℂ^m`: `m` blocks of size one.
    pub fn diagonal(m: usize) -> Result<Self, CstarError> {
        Self::new(vec![1; m])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    pub fn block_dim(&self, b: usize) -> usize {
        self.dims[b]
    }

    /// `Σ n_i²`.
    pub fn dimension(&self) -> usize {
        self.dims.iter().map(|n| n * n).sum()
    }

    pub fn full(&self) -> BlockSet {
        BlockSet::full(self.dims.len())
    }

    pub fn check_blocks(&self, set: BlockSet) -> Result<(), CstarError> {
        match set.max_block() {
            Some(b) if b >= self.dims.len() => Err(CstarError::BlockOutOfRange(b)),
            _ => Ok(()),
        }
    }

    pub fn ideal(&self, blocks: BlockSet) -> Result<Ideal, CstarError> {
        self.check_blocks(blocks)?;
        Ok(Ideal { algebra: self.clone(), blocks })
    }

    /// Matrix units `E^{(b)}_{jk}` of the blocks in `set`, block by block.
    pub fn matrix_units(&self, set: BlockSet) -> Vec<MatrixUnit> {
        let mut out = Vec::new();
        for b in set.iter().filter(|&b| b < self.dims.len()) {
            let n = self.dims[b];
            for j in 0..n {
                for k in 0..n {
                    out.push(MatrixUnit { block: b, row: j, col: k });
                }
            }
        }
        out
    }
}

/// Label of the matrix unit `E_{row,col}` in a given block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatrixUnit {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for MatrixUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}[{},{}]", self.block, self.row, self.col)
    }
}

/// A closed ideal: the sum of the listed blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub algebra: BlockAlgebra,
    pub blocks: BlockSet,
}

impl Ideal {
    pub fn zero(algebra: &BlockAlgebra) -> Self {
        Ideal { algebra: algebra.clone(), blocks: BlockSet::EMPTY }
    }

    pub fn whole(algebra: &BlockAlgebra) -> Self {
        Ideal { algebra: algebra.clone(), blocks: algebra.full() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The unit of the ideal, `p_I`.
    pub fn unit(&self) -> Element {
        Element::unit_of(&self.algebra, self.blocks)
    }
}

/// `I ∩ J`, which for closed ideals equals the product `IJ`.
pub fn ideal_meet(i: &Ideal, j: &Ideal) -> Result<Ideal, CstarError> {
    if i.algebra != j.algebra {
        return Err(CstarError::ParentMismatch);
    }
    Ok(Ideal { algebra: i.algebra.clone(), blocks: i.blocks.meet(j.blocks) })
}

/// An element of a block algebra, one square matrix per block.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    blocks: Vec<CMat>,
}

impl Element {
    pub fn zero(alg: &BlockAlgebra) -> Self {
        Element { blocks: alg.dims.iter().map(|&n| zeros(n)).collect() }
    }

    pub fn identity(alg: &BlockAlgebra) -> Self {
        Self::unit_of(alg, alg.full())
    }

    /// The unit of the ideal spanned by `set`.
    pub fn unit_of(alg: &BlockAlgebra, set: BlockSet) -> Self {
        let mut e = Self::zero(alg);
        for b in set.iter().filter(|&b| b < alg.num_blocks()) {
            e.blocks[b] = CMat::identity(alg.dims[b], alg.dims[b]);
        }
        e
    }

    pub fn matrix_unit(alg: &BlockAlgebra, u: MatrixUnit) -> Self {
        let mut e = Self::zero(alg);
        e.blocks[u.block][(u.row, u.col)] = C64::new(1.0, 0.0);
        e
    }

    pub fn from_blocks(alg: &BlockAlgebra, blocks: Vec<CMat>) -> Result<Self, CstarError> {
        if blocks.len() != alg.num_blocks()
            || blocks.iter().zip(alg.dims()).any(|(m, &n)| m.shape() != (n, n))
        {
            return Err(CstarError::ShapeMismatch);
        }
        Ok(Element { blocks })
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &CMat {
        &self.blocks[b]
    }

    pub fn block_mut(&mut self, b: usize) -> &mut CMat {
        &mut self.blocks[b]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|m| m.nrows()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Element { blocks: self.blocks.iter().map(|m| m.adjoint()).collect() }
    }

    pub fn scale(&self, z: C64) -> Self {
        Element { blocks: self.blocks.iter().map(|m| m * z).collect() }
    }

    /// C*-norm: the largest operator norm over the blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(op_norm).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.blocks.iter().map(|m| frob(m).powi(2)).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Element) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| frob_dist(a, b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius mass of the blocks outside `set`.
    pub fn mass_outside(&self, set: BlockSet) -> f64 {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(b, _)| !set.contains(*b))
            .map(|(_, m)| frob(m).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Blocks carrying any nonzero entry.
    pub fn support(&self) -> BlockSet {
        BlockSet::from_blocks(
            self.blocks
                .iter()
                .enumerate()
                .filter(|(_, m)| m.iter().any(|z| *z != C64::new(0.0, 0.0)))
                .map(|(b, _)| b),
        )
    }

    pub fn is_exact_zero(&self) -> bool {
        self.support().is_empty()
    }

    /// Zeroes every block outside `set`.
    pub fn restrict(&self, set: BlockSet) -> Self {
        Element {
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .map(|(b, m)| if set.contains(b) { m.clone() } else { zeros(m.nrows()) })
                .collect(),
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        Element { blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        Element { blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        Element { blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a * b).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real};

    #[test]
    fn meet_of_ideals() {
        let a = BlockAlgebra::new(vec![1, 2, 3]).unwrap();
        let i = a.ideal(BlockSet::from_blocks([0, 1])).unwrap();
        let j = a.ideal(BlockSet::from_blocks([1, 2])).unwrap();
        assert_eq!(ideal_meet(&i, &j).unwrap().blocks, BlockSet::singleton(1));
        assert_eq!(ideal_meet(&i, &Ideal::whole(&a)).unwrap(), i);
    }

    #[test]
    fn shifted_domains_are_disjoint() {
        let a = BlockAlgebra::diagonal(2).unwrap();
        let d_minus = a.ideal(BlockSet::singleton(0)).unwrap();
        let d_plus = a.ideal(BlockSet::singleton(1)).unwrap();
        assert!(ideal_meet(&d_minus, &d_plus).unwrap().is_zero());
    }

    #[test]
    fn meet_requires_same_parent() {
        let a = BlockAlgebra::diagonal(2).unwrap();
        let b = BlockAlgebra::new(vec![2]).unwrap();
        assert_eq!(
            ideal_meet(&Ideal::whole(&a), &Ideal::whole(&b)).unwrap_err(),
            CstarError::ParentMismatch
        );
    }

    #[test]
    fn invalid_algebras() {
        assert!(BlockAlgebra::new(vec![]).is_err());
        assert!(BlockAlgebra::new(vec![2, 0]).is_err());
        let a = BlockAlgebra::new(vec![2]).unwrap();
        assert_eq!(a.ideal(BlockSet::singleton(3)).unwrap_err(), CstarError::BlockOutOfRange(3));
    }

    #[test]
    fn element_arithmetic_is_blockwise() {
        let a = BlockAlgebra::new(vec![1, 2]).unwrap();
        let x = Element::from_blocks(&a, vec![real(1, 1, &[2.0]), real(2, 2, &[0.0, 1.0, 0.0, 0.0])]).unwrap();
        let y = x.adjoint();
        let xy = &x * &y;
        assert_eq!(xy.block(0)[(0, 0)], c(4.0, 0.0));
        assert_eq!(xy.block(1)[(0, 0)], c(1.0, 0.0));
        assert_eq!(xy.block(1)[(1, 1)], c(0.0, 0.0));
        assert!((x.norm() - 2.0).abs() < 1e-12);
        assert_eq!(x.support(), BlockSet::from_blocks([0, 1]));
        assert_eq!(x.restrict(BlockSet::singleton(1)).support(), BlockSet::singleton(1));
        assert!(Element::from_blocks(&a, vec![real(1, 1, &[1.0])]).is_err());
    }

    #[test]
    fn matrix_units_count() {
        let a = BlockAlgebra::new(vec![1, 2, 3]).unwrap();
        assert_eq!(a.matrix_units(a.full()).len(), a.dimension());
        assert_eq!(a.matrix_units(BlockSet::singleton(1)).len(), 4);
    }

    #[test]
    fn block_set_display() {
        assert_eq!(BlockSet::from_blocks([0, 2]).to_string(), "[0,2]");
        assert_eq!(BlockSet::EMPTY.to_string(), "[]");
        assert_eq!(BlockSet::full(3).len(), 3);
    }
}
