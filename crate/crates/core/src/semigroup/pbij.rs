use std::collections::HashMap;
use std::fmt;

use super::{FiniteInverseSemigroup, InverseMonoidOracle, SemigroupError};

/// An injective partial map on `{0, …, m−1}`.
///
/// Composition `self.compose(other)` applies `other` first and uses the
/// largest domain on which both maps are defined.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    map: Vec<Option<usize>>,
}

impl PartialBijection {
    /// Fails if the map is not injective or points outside the ground set.
    pub fn from_map(map: Vec<Option<usize>>) -> Option<Self> {
        let m = map.len();
        let mut seen = vec![false; m];
        for y in map.iter().flatten() {
            if *y >= m || seen[*y] {
                return None;
            }
            seen[*y] = true;
        }
        Some(PartialBijection { map })
    }

    pub fn identity(m: usize) -> Self {
        PartialBijection { map: (0..m).map(Some).collect() }
    }

    pub fn empty(m: usize) -> Self {
        PartialBijection { map: vec![None; m] }
    }

    /// Identity restricted to the given points.
    pub fn identity_on(m: usize, points: &[usize]) -> Self {
        let mut map = vec![None; m];
        for &p in points {
            map[p] = Some(p);
        }
        PartialBijection { map }
    }

    pub fn ground(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.map.get(x).copied().flatten()
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.ground()).filter(|&x| self.map[x].is_some()).collect()
    }

    pub fn range(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.map.iter().flatten().copied().collect();
        r.sort_unstable();
        r
    }

    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ground(), other.ground());
        PartialBijection {
            map: other.map.iter().map(|y| y.and_then(|y| self.map[y])).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut map = vec![None; self.ground()];
        for (x, y) in self.map.iter().enumerate() {
            if let Some(y) = y {
                map[*y] = Some(x);
            }
        }
        PartialBijection { map }
    }

    /// `other` agrees with `self` on the whole domain of `other`.
    pub fn extends(&self, other: &Self) -> bool {
        other
            .map
            .iter()
            .enumerate()
            .all(|(x, y)| y.is_none() || self.map[x] == *y)
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.map
    }
}

impl fmt::Display for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (x, y) in self.map.iter().enumerate() {
            if let Some(y) = y {
                if !first {
                    f.write_str(", ")?;
                }
                write!(f, "{x}→{y}")?;
                first = false;
            }
        }
        f.write_str("}")
    }
}

/// The symmetric inverse monoid on `ground` points as an exact oracle.
#[derive(Clone, Copy, Debug)]
pub struct PartialBijectionOracle {
    pub ground: usize,
}

impl InverseMonoidOracle for PartialBijectionOracle {
    type Elem = PartialBijection;

    fn unit(&self) -> PartialBijection {
        PartialBijection::identity(self.ground)
    }

    fn product(&self, a: &PartialBijection, b: &PartialBijection) -> PartialBijection {
        a.compose(b)
    }

    fn star(&self, a: &PartialBijection) -> PartialBijection {
        a.inverse()
    }

    fn same(&self, a: &PartialBijection, b: &PartialBijection) -> bool {
        a == b
    }
}

fn enumerate(m: usize) -> Vec<PartialBijection> {
    fn go(x: usize, m: usize, used: &mut Vec<bool>, cur: &mut Vec<Option<usize>>, out: &mut Vec<PartialBijection>) {
        if x == m {
            out.push(PartialBijection { map: cur.clone() });
            return;
        }
        cur.push(None);
        go(x + 1, m, used, cur, out);
        cur.pop();
        for y in 0..m {
            if !used[y] {
                used[y] = true;
                cur.push(Some(y));
                go(x + 1, m, used, cur, out);
                cur.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, m, &mut vec![false; m], &mut Vec::with_capacity(m), &mut out);
    out
}

/// All injective partial maps on `m ≤ 5` points, as a multiplication table.
///
/// The table is built from composition, so associativity and the inverse
/// property hold by construction and are not re-checked here.
pub fn symmetric_inverse_monoid(
    m: usize,
) -> Result<(FiniteInverseSemigroup, Vec<PartialBijection>), SemigroupError> {
    if m > 5 {
        return Err(SemigroupError::TooLarge(m));
    }
    let elems = enumerate(m);
    let index: HashMap<&PartialBijection, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let n = elems.len();
    let mut mul = Vec::with_capacity(n * n);
    for a in &elems {
        for b in &elems {
            mul.push(index[&a.compose(b)]);
        }
    }
    let star = elems.iter().map(|a| index[&a.inverse()]).collect();
    Ok((FiniteInverseSemigroup::from_parts(n, mul, star), elems))
}

#[cfg(test)]
mod tests {
    use super::super::verify_inverse_semigroup;
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    /// Σ_k C(m,k)² k!
    fn expected_order(m: usize) -> usize {
        (0..=m).map(|k| binomial(m, k).pow(2) * factorial(k)).sum()
    }

    #[test]
    fn orders_match_counting_formula() {
        assert_eq!(expected_order(1), 2);
        assert_eq!(expected_order(2), 7);
        assert_eq!(expected_order(3), 34);
        for m in 0..=4 {
            let (s, elems) = symmetric_inverse_monoid(m).unwrap();
            assert_eq!(s.order(), expected_order(m));
            assert_eq!(elems.len(), s.order());
        }
    }

    #[test]
    fn small_monoids_validate_exhaustively() {
        for m in 1..=3 {
            let (s, _) = symmetric_inverse_monoid(m).unwrap();
            let checked = verify_inverse_semigroup(&s.table()).unwrap();
            assert_eq!(checked, s);
        }
    }

    #[test]
    fn idempotents_are_partial_identities() {
        let (s, elems) = symmetric_inverse_monoid(2).unwrap();
        let idem = s.idempotents();
        assert_eq!(idem.len(), 4);
        for f in idem {
            let p = &elems[f];
            assert_eq!(p.domain(), p.range());
            assert!(PartialBijection::identity(2).extends(p));
        }
        // the natural order is restriction of maps
        for a in 0..s.order() {
            for b in 0..s.order() {
                let restr = elems[b].extends(&elems[a]);
                assert_eq!(s.leq(a, b), restr, "{} ≤ {}", elems[a], elems[b]);
            }
        }
    }

    #[test]
    fn too_large() {
        assert_eq!(symmetric_inverse_monoid(6).unwrap_err(), SemigroupError::TooLarge(6));
    }

    #[test]
    fn rejects_non_injective() {
        assert!(PartialBijection::from_map(vec![Some(0), Some(0)]).is_none());
        assert!(PartialBijection::from_map(vec![Some(2), None]).is_none());
    }

    #[test]
    fn compose_uses_largest_domain() {
        let shift = PartialBijection::from_map(vec![Some(1), None]).unwrap();
        assert_eq!(shift.compose(&shift), PartialBijection::empty(2));
        assert_eq!(shift.compose(&shift.inverse()), PartialBijection::identity_on(2, &[1]));
        assert_eq!(shift.to_string(), "{0→1}");
    }
}
