use std::fmt;

/// A discrete group whose elements are encoded as integers: `ℤ` itself, or a
/// finite group on `0..n` given by a table with identity `0`.
#[derive(Clone, PartialEq, Eq)]
pub enum Group {
    Integers,
    Finite { name: String, table: Vec<Vec<usize>>, inverse: Vec<usize> },
}

impl Group {
    /// Checks the group axioms on a finite table.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<Self, String> {
        let n = table.len();
        if n == 0 {
            return Err("group table is empty".into());
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(format!("row {a} has length {} instead of {n}", row.len()));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(format!("entry {v} in row {a} is out of range"));
            }
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err("element 0 is not the identity".into());
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(format!("not associative at ({a},{b},{c})"));
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for (a, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&b| table[a][b] == 0 && table[b][a] == 0)
                .ok_or_else(|| format!("element {a} has no inverse"))?;
        }
        Ok(Group::Finite { name: name.to_string(), table, inverse })
    }

    /// `ℤ_n` under addition.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(&format!("Z{n}"), table).expect("cyclic tables are groups")
    }

    /// Permutations of three points, listed lexicographically.
    pub fn s3() -> Self {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index([p[q[0]], p[q[1]], p[q[2]]])).collect())
            .collect();
        Self::from_table("S3", table).expect("S3 table is a group")
    }

    /// `Z`, `Zn` for `n ≥ 1`, or `S3`.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "Z" => Some(Group::Integers),
            "S3" => Some(Self::s3()),
            _ => {
                let n: usize = name.strip_prefix('Z')?.parse().ok()?;
                (n >= 1).then(|| Self::cyclic(n))
            }
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Group::Integers => "Z",
            Group::Finite { name, .. } => name,
        }
    }

    pub fn identity(&self) -> i64 {
        0
    }

    pub fn contains(&self, g: i64) -> bool {
        match self {
            Group::Integers => true,
            Group::Finite { table, .. } => g >= 0 && (g as usize) < table.len(),
        }
    }

    pub fn product(&self, a: i64, b: i64) -> i64 {
        match self {
            Group::Integers => a + b,
            Group::Finite { table, .. } => table[a as usize][b as usize] as i64,
        }
    }

    pub fn inverse(&self, a: i64) -> i64 {
        match self {
            Group::Integers => -a,
            Group::Finite { inverse, .. } => inverse[a as usize] as i64,
        }
    }

    /// `g_1 g_2 ⋯ g_n`.
    pub fn word_product(&self, word: &[i64]) -> i64 {
        word.iter().fold(self.identity(), |acc, &g| self.product(acc, g))
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            Group::Integers => None,
            Group::Finite { table, .. } => Some(table.len()),
        }
    }

    /// All elements of a finite group.
    pub fn elements(&self) -> Option<Vec<i64>> {
        self.order().map(|n| (0..n as i64).collect())
    }

    /// Every subgroup of a finite group, by brute force over subsets.
    pub fn subgroups(&self) -> Vec<Vec<i64>> {
        let Some(n) = self.order() else { return vec![] };
        assert!(n <= 16, "subgroup enumeration is exponential");
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let members: Vec<i64> = (0..n as i64).filter(|g| mask & (1 << g) != 0).collect();
            let closed = members
                .iter()
                .all(|&a| members.iter().all(|&b| mask & (1 << self.product(a, b)) != 0));
            if closed {
                out.push(members);
            }
        }
        out
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_nonabelian_of_order_six() {
        let g = Group::s3();
        assert_eq!(g.order(), Some(6));
        let abelian = (0..6).all(|a| (0..6).all(|b| g.product(a, b) == g.product(b, a)));
        assert!(!abelian);
        for a in 0..6 {
            assert_eq!(g.product(a, g.inverse(a)), 0);
        }
        assert_eq!(g.subgroups().len(), 6);
    }

    #[test]
    fn names() {
        assert_eq!(Group::by_name("Z3").unwrap().order(), Some(3));
        assert_eq!(Group::by_name("Z"), Some(Group::Integers));
        assert!(Group::by_name("Q8").is_none());
        assert!(Group::by_name("Z0").is_none());
        assert_eq!(Group::Integers.word_product(&[1, -2, 3]), 2);
    }

    #[test]
    fn rejects_non_groups() {
        assert!(Group::from_table("x", vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(Group::from_table("x", vec![vec![0, 2], vec![1, 0]]).is_err());
        assert!(Group::from_table("x", vec![]).is_err());
    }
}
