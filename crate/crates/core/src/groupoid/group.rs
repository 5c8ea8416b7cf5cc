//! Finite groups given by multiplication tables.

use super::GroupoidError;

/// A finite group on elements `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, GroupoidError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupoidError::NotAGroup("empty table".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupoidError::NotAGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&b) = row.iter().find(|&&x| x >= n) {
                return Err(GroupoidError::NotAGroup(format!("row {a} mentions element {b} outside 0..{n}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupoidError::NonAssociative { a, b, c });
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| GroupoidError::NotAGroup("no two-sided identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| GroupoidError::NotAGroup(format!("element {a} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(GroupTable {
            order: n,
            mul: table.into_iter().flatten().collect(),
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(table).expect("cyclic table is a group")
    }

    pub fn klein() -> Self {
        Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))
    }

    /// The symmetric group on three letters, elements listed as permutations
    /// in lexicographic order of their images.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        Self::new(table).expect("S3 table is a group")
    }

    /// Elements `(a, b)` are numbered `a * |h| + b`.
    pub fn direct_product(g: &GroupTable, h: &GroupTable) -> Self {
        let n = g.order * h.order;
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (a1, b1) = (x / h.order, x % h.order);
                        let (a2, b2) = (y / h.order, y % h.order);
                        g.mul(a1, a2) * h.order + h.mul(b1, b2)
                    })
                    .collect()
            })
            .collect();
        Self::new(table).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// Checks that `elements` is a subgroup.
    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let set: std::collections::BTreeSet<usize> = elements.iter().copied().collect();
        set.contains(&self.identity)
            && set.iter().all(|&a| a < self.order && set.contains(&self.inv(a)))
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups() {
        assert_eq!(GroupTable::cyclic(4).order(), 4);
        assert_eq!(GroupTable::klein().order(), 4);
        let s3 = GroupTable::symmetric3();
        assert_eq!(s3.order(), 6);
        // non-abelian
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
        assert!(s3.is_subgroup(&[0, 3, 4]));
        assert!(!s3.is_subgroup(&[0, 1, 2]));
    }

    #[test]
    fn non_associative_rejected() {
        // a loop of order 3 that is not associative: identity 0, otherwise 1·1=1.
        let t = vec![vec![0, 1, 2], vec![1, 1, 0], vec![2, 0, 1]];
        assert!(matches!(GroupTable::new(t), Err(GroupoidError::NonAssociative { .. })));
    }
}
