//! Finite inverse semigroups given by multiplication tables.
//!
//! Elements are dense indices `0..n`. The involution `s ↦ s*` is derived
//! from the table by exhaustive search and stored alongside it.

mod closure;
mod congruence;
mod pbij;

pub use closure::{generate_closure, Closure, InverseMonoidOracle};
pub use congruence::{min_group_congruence, CongruenceClasses};
pub use pbij::{symmetric_inverse_monoid, PartialBijection, PartialBijectionOracle};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("row {row} has length {len}, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry ({s},{t}) = {value} is out of range")]
    EntryOutOfRange { s: usize, t: usize, value: usize },
    #[error("not associative: ({0}·{1})·{2} ≠ {0}·({1}·{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {0} has no generalized inverse")]
    NoInverse(usize),
    #[error("element {0} has two generalized inverses {1} and {2}")]
    NonUniqueInverse(usize, usize, usize),
    #[error("σ-quotient is not a group")]
    QuotientNotGroup,
    #[error("relation is not a congruence: classes of {0} and {1} multiply inconsistently")]
    NotCongruence(usize, usize),
    #[error("closure did not stabilize within {0} elements")]
    BoundExceeded(usize),
    #[error("ambient oracle is not closed: product or star of element {0} was not found")]
    NotClosed(usize),
    #[error("ambient star of element {0} disagrees with the table involution")]
    StarMismatch(usize),
    #[error("symmetric inverse monoid on {0} points is too large (limit 5)")]
    TooLarge(usize),
}

/// A finite inverse semigroup with its derived involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInverseSemigroup {
    n: usize,
    mul: Vec<usize>,
    star: Vec<usize>,
    unit: Option<usize>,
}

/// Validates a multiplication table as an inverse semigroup.
pub fn verify_inverse_semigroup(table: &[Vec<usize>]) -> Result<FiniteInverseSemigroup, SemigroupError> {
    FiniteInverseSemigroup::verify(table)
}

impl FiniteInverseSemigroup {
    /// Checks associativity and the existence and uniqueness of
    /// generalized inverses, exhaustively.
    pub fn verify(table: &[Vec<usize>]) -> Result<Self, SemigroupError> {
        let n = table.len();
        if n == 0 {
            return Err(SemigroupError::Empty);
        }
        let mut mul = Vec::with_capacity(n * n);
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(SemigroupError::NotSquare { row, len: r.len(), n });
            }
            for (t, &v) in r.iter().enumerate() {
                if v >= n {
                    return Err(SemigroupError::EntryOutOfRange { s: row, t, value: v });
                }
                mul.push(v);
            }
        }
        let m = |a: usize, b: usize| mul[a * n + b];
        for s in 0..n {
            for t in 0..n {
                let st = m(s, t);
                for r in 0..n {
                    if m(st, r) != m(s, m(t, r)) {
                        return Err(SemigroupError::NotAssociative(s, t, r));
                    }
                }
            }
        }
        let mut star = Vec::with_capacity(n);
        for s in 0..n {
            let mut found: Option<usize> = None;
            for t in 0..n {
                if m(m(s, t), s) == s && m(m(t, s), t) == t {
                    if let Some(prev) = found {
                        return Err(SemigroupError::NonUniqueInverse(s, prev, t));
                    }
                    found = Some(t);
                }
            }
            star.push(found.ok_or(SemigroupError::NoInverse(s))?);
        }
        Ok(Self::from_parts(n, mul, star))
    }

    /// Assembles a semigroup whose axioms are known to hold by construction
    /// (for instance a table of composed partial maps).
    pub(crate) fn from_parts(n: usize, mul: Vec<usize>, star: Vec<usize>) -> Self {
        let unit = (0..n).find(|&e| (0..n).all(|s| mul[e * n + s] == s && mul[s * n + e] == s));
        FiniteInverseSemigroup { n, mul, star, unit }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.mul[s * self.n + t]
    }

    pub fn star(&self, s: usize) -> usize {
        self.star[s]
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.mul(s, s) == s
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.n).filter(|&s| self.is_idempotent(s)).collect()
    }

    /// Natural partial order: `s ≤ t` iff `s = f·t` for an idempotent `f`.
    pub fn leq(&self, s: usize, t: usize) -> bool {
        (0..self.n).any(|f| self.is_idempotent(f) && self.mul(f, t) == s)
    }

    /// Every element idempotent and the product commutative.
    pub fn is_semilattice(&self) -> bool {
        (0..self.n).all(|s| self.is_idempotent(s))
            && (0..self.n).all(|s| (0..self.n).all(|t| self.mul(s, t) == self.mul(t, s)))
    }

    /// An element `z` with `z·s = s·z = z` for all `s`.
    pub fn zero(&self) -> Option<usize> {
        (0..self.n).find(|&z| (0..self.n).all(|s| self.mul(z, s) == z && self.mul(s, z) == z))
    }

    pub fn is_group(&self) -> bool {
        match self.unit {
            Some(e) => (0..self.n).all(|s| self.mul(s, self.star(s)) == e && self.mul(self.star(s), s) == e),
            None => false,
        }
    }
}

/// Idempotents, the natural partial order and the semilattice flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderInfo {
    pub idempotents: Vec<usize>,
    /// `leq[s][t]` is `s ≤ t`.
    pub leq: Vec<Vec<bool>>,
    pub is_semilattice: bool,
}

pub fn idempotents_and_order(s: &FiniteInverseSemigroup) -> OrderInfo {
    let n = s.order();
    OrderInfo {
        idempotents: s.idempotents(),
        leq: (0..n).map(|a| (0..n).map(|b| s.leq(a, b)).collect()).collect(),
        is_semilattice: s.is_semilattice(),
    }
}

/// Brute-force isomorphism test by backtracking over bijections.
pub fn isomorphic(a: &FiniteInverseSemigroup, b: &FiniteInverseSemigroup) -> bool {
    if a.order() != b.order()
        || a.idempotents().len() != b.idempotents().len()
        || a.is_group() != b.is_group()
    {
        return false;
    }
    let n = a.order();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn consistent(a: &FiniteInverseSemigroup, b: &FiniteInverseSemigroup, map: &[usize], k: usize) -> bool {
        for i in 0..=k {
            for j in 0..=k {
                let p = a.mul(i, j);
                if p <= k && map[p] != b.mul(map[i], map[j]) {
                    return false;
                }
            }
        }
        true
    }

    fn go(
        a: &FiniteInverseSemigroup,
        b: &FiniteInverseSemigroup,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        k: usize,
    ) -> bool {
        let n = a.order();
        if k == n {
            return (0..n).all(|i| (0..n).all(|j| map[a.mul(i, j)] == b.mul(map[i], map[j])));
        }
        for cand in 0..n {
            if used[cand] || a.is_idempotent(k) != b.is_idempotent(cand) {
                continue;
            }
            map[k] = cand;
            used[cand] = true;
            if consistent(a, b, map, k) && go(a, b, map, used, k + 1) {
                return true;
            }
            used[cand] = false;
        }
        map[k] = usize::MAX;
        false
    }

    go(a, b, &mut map, &mut used, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ef() -> FiniteInverseSemigroup {
        // e = 0, f = 1
        verify_inverse_semigroup(&[vec![0, 1], vec![1, 1]]).unwrap()
    }

    fn cyclic(n: usize) -> FiniteInverseSemigroup {
        let t: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        verify_inverse_semigroup(&t).unwrap()
    }

    #[test]
    fn trivial_group() {
        let s = verify_inverse_semigroup(&[vec![0]]).unwrap();
        assert_eq!(s.star(0), 0);
        assert_eq!(s.unit(), Some(0));
        let info = idempotents_and_order(&s);
        assert_eq!(info.idempotents, vec![0]);
        assert_eq!(info.leq, vec![vec![true]]);
        assert!(s.is_group());
    }

    #[test]
    fn two_element_semilattice() {
        let s = ef();
        assert_eq!(s.idempotents(), vec![0, 1]);
        assert!(s.leq(1, 0));
        assert!(!s.leq(0, 1));
        assert!(s.is_semilattice());
        assert_eq!(s.zero(), Some(1));
        assert_eq!(s.unit(), Some(0));
    }

    #[test]
    fn rejects_non_associative() {
        // a "rock-paper-scissors" style table
        let t = vec![vec![0, 1, 0], vec![1, 1, 2], vec![0, 2, 2]];
        assert!(matches!(
            verify_inverse_semigroup(&t),
            Err(SemigroupError::NotAssociative(..))
        ));
    }

    #[test]
    fn rejects_non_unique_inverse() {
        // left-zero band: st = s; every t is an inverse of s
        let t = vec![vec![0, 0], vec![1, 1]];
        assert!(matches!(
            verify_inverse_semigroup(&t),
            Err(SemigroupError::NonUniqueInverse(0, 0, 1))
        ));
    }

    #[test]
    fn rejects_missing_inverse() {
        // ({0,1}, ·) with 1·1 = 0 and everything else 0 besides 0... null semigroup
        // on two elements with 1·1 = 0: element 1 has no inverse.
        let t = vec![vec![0, 0], vec![0, 0]];
        assert!(matches!(verify_inverse_semigroup(&t), Err(SemigroupError::NoInverse(1))));
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(verify_inverse_semigroup(&[]), Err(SemigroupError::Empty));
        assert!(matches!(
            verify_inverse_semigroup(&[vec![0, 1], vec![1]]),
            Err(SemigroupError::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            verify_inverse_semigroup(&[vec![0, 2], vec![1, 1]]),
            Err(SemigroupError::EntryOutOfRange { .. })
        ));
    }

    #[test]
    fn groups_are_groups() {
        let z3 = cyclic(3);
        assert!(z3.is_group());
        assert_eq!(z3.idempotents(), vec![0]);
        assert!(!z3.is_semilattice());
        assert!(!ef().is_group());
    }

    #[test]
    fn isomorphism_detects_relabelling() {
        let a = ef();
        let b = verify_inverse_semigroup(&[vec![0, 0], vec![0, 1]]).unwrap();
        assert!(isomorphic(&a, &b));
        assert!(!isomorphic(&a, &cyclic(2)));
        assert!(isomorphic(&cyclic(3), &cyclic(3)));
    }
}
