use std::collections::HashMap;
use std::fmt::Debug;

use super::{FiniteInverseSemigroup, SemigroupError};

/// An ambient inverse monoid in which closures are computed.
///
/// `same` is exact for combinatorial models and tolerance based for
/// matrices and partial automorphisms.
pub trait InverseMonoidOracle {
    type Elem: Clone + Debug;

    fn unit(&self) -> Self::Elem;
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn star(&self, a: &Self::Elem) -> Self::Elem;
    fn same(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
}

/// The inverse subsemigroup generated inside an ambient monoid, with the
/// ambient value of each abstract element.
#[derive(Clone, Debug)]
pub struct Closure<E> {
    pub semigroup: FiniteInverseSemigroup,
    pub elements: Vec<E>,
    /// Abstract index of each generator, in input order.
    pub generator_index: Vec<usize>,
}

impl<E: Clone + Debug> Closure<E> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of<O>(&self, oracle: &O, x: &E) -> Option<usize>
    where
        O: InverseMonoidOracle<Elem = E>,
    {
        self.elements.iter().position(|y| oracle.same(y, x))
    }

    /// Index of the zero element, when the closure has one.
    pub fn zero(&self) -> Option<usize> {
        self.semigroup.zero()
    }
}

fn lookup_or_push<O: InverseMonoidOracle>(
    oracle: &O,
    elements: &mut Vec<O::Elem>,
    x: O::Elem,
    bound: usize,
) -> Result<usize, SemigroupError> {
    if let Some(i) = elements.iter().position(|y| oracle.same(y, &x)) {
        return Ok(i);
    }
    if elements.len() >= bound {
        return Err(SemigroupError::BoundExceeded(bound));
    }
    elements.push(x);
    Ok(elements.len() - 1)
}

/// Closes `generators ∪ {unit}` under product and star.
///
/// Element 0 is always the unit; the rest are indexed in discovery order:
/// generators first, then products and stars as the queue is processed.
pub fn generate_closure<O: InverseMonoidOracle>(
    oracle: &O,
    generators: &[O::Elem],
    bound: usize,
) -> Result<Closure<O::Elem>, SemigroupError> {
    let mut elements = vec![oracle.unit()];
    let mut generator_index = Vec::with_capacity(generators.len());
    for g in generators {
        generator_index.push(lookup_or_push(oracle, &mut elements, g.clone(), bound)?);
    }

    let mut products: HashMap<(usize, usize), usize> = HashMap::new();
    let mut star: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let xi = elements[i].clone();
        star.push(lookup_or_push(oracle, &mut elements, oracle.star(&xi), bound)?);
        for j in 0..=i {
            let xj = elements[j].clone();
            let ij = lookup_or_push(oracle, &mut elements, oracle.product(&xi, &xj), bound)?;
            let ji = lookup_or_push(oracle, &mut elements, oracle.product(&xj, &xi), bound)?;
            products.insert((i, j), ij);
            products.insert((j, i), ji);
        }
        i += 1;
    }

    let n = elements.len();
    let mut table = vec![vec![0usize; n]; n];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            *entry = *products.get(&(a, b)).ok_or(SemigroupError::NotClosed(a))?;
        }
    }
    let semigroup = FiniteInverseSemigroup::verify(&table)?;
    for (a, &s) in star.iter().enumerate() {
        if s != semigroup.star(a) {
            return Err(SemigroupError::StarMismatch(a));
        }
    }
    Ok(Closure { semigroup, elements, generator_index })
}
