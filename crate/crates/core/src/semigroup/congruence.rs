use super::{FiniteInverseSemigroup, SemigroupError};

/// A partition of a semigroup by a congruence, with the quotient table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceClasses {
    /// `class_of[s]` is the quotient index of `s`.
    pub class_of: Vec<usize>,
    /// Members of each class, in increasing order; classes are numbered by
    /// their smallest member.
    pub classes: Vec<Vec<usize>>,
    pub quotient: FiniteInverseSemigroup,
}

impl CongruenceClasses {
    pub fn class(&self, s: usize) -> usize {
        self.class_of[s]
    }
}

/// The minimum group congruence: `s ∼ t` iff `f·s = f·t` for some
/// idempotent `f`. Its quotient is the maximal group homomorphic image.
pub fn min_group_congruence(s: &FiniteInverseSemigroup) -> Result<CongruenceClasses, SemigroupError> {
    let n = s.order();
    let idem = s.idempotents();
    let related = |a: usize, b: usize| idem.iter().any(|&f| s.mul(f, a) == s.mul(f, b));

    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if class_of[a] != usize::MAX {
            continue;
        }
        let k = classes.len();
        let members: Vec<usize> = (a..n).filter(|&b| class_of[b] == usize::MAX && related(a, b)).collect();
        for &b in &members {
            class_of[b] = k;
        }
        classes.push(members);
    }

    // σ is transitive on inverse semigroups; a failure here means the input
    // was not one.
    for a in 0..n {
        for b in 0..n {
            if (class_of[a] == class_of[b]) != related(a, b) {
                return Err(SemigroupError::NotCongruence(a, b));
            }
        }
    }

    let k = classes.len();
    let mut table = vec![vec![usize::MAX; k]; k];
    for a in 0..n {
        for b in 0..n {
            let c = class_of[s.mul(a, b)];
            let slot = &mut table[class_of[a]][class_of[b]];
            if *slot == usize::MAX {
                *slot = c;
            } else if *slot != c {
                return Err(SemigroupError::NotCongruence(a, b));
            }
        }
    }
    let quotient = FiniteInverseSemigroup::verify(&table).map_err(|_| SemigroupError::QuotientNotGroup)?;
    if !quotient.is_group() {
        return Err(SemigroupError::QuotientNotGroup);
    }
    Ok(CongruenceClasses { class_of, classes, quotient })
}
