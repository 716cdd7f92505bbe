//! Finite groups given by a full multiplication table.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite group. `table[a][b]` is the index of `a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

/// JSON schema `{elements: [names], table: [[index]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Invalid("a group has at least one element".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|x| *x >= n)) {
            return Err(Error::Invalid(format!("multiplication table must be {n}x{n} with entries < {n}")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::Invalid("no identity element".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::Invalid(format!("element {} has no inverse", names[a])))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::Invalid(format!(
                            "table is not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(Error::Invalid("element names must be distinct".into()));
        }
        Ok(FiniteGroup { names, table, identity, inverses })
    }

    pub fn from_json(j: &GroupJson) -> Result<Self> {
        Self::new(j.elements.clone(), j.table.clone())
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { elements: self.names.clone(), table: self.table.clone() }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `ℤ/n` with elements `e, g, g^2, …`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(names, table).expect("cyclic group table")
    }

    /// Closure of a set of permutations of `0..degree`. Element 0 is the identity;
    /// elements are ordered as in [`permutation_closure`].
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        let elems = permutation_closure(gens);
        let idx = |p: &Vec<usize>| elems.iter().position(|q| q == p).expect("closed");
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| idx(&b.iter().map(|&i| a[i]).collect())).collect())
            .collect();
        let names = elems
            .iter()
            .map(|p| {
                if p.iter().enumerate().all(|(i, x)| i == *x) {
                    "e".to_string()
                } else {
                    format!("({})", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
                }
            })
            .collect();
        Self::new(names, table)
    }

    /// Symmetric group on three letters.
    pub fn symmetric3() -> Self {
        Self::from_permutations(&S3_GENERATORS.map(|g| g.to_vec())).expect("S3")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (a.order(), b.order());
        let names = (0..n * m).map(|k| format!("({},{})", a.names[k / m], b.names[k % m])).collect();
        let table = (0..n * m)
            .map(|x| (0..n * m).map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m)).collect())
            .collect();
        Self::new(names, table).expect("product of groups")
    }

    pub fn klein_four() -> Self {
        Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements of the subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.mul(x, *g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = BTreeSet::from([self.identity]);
        for a in self.elements() {
            if !span.contains(&a) {
                gens.push(a);
                span = self.generated_subgroup(&gens);
            }
        }
        gens
    }

    /// Is `f: self -> other` (given on every element) a homomorphism?
    pub fn is_homomorphism(&self, other: &FiniteGroup, f: &[usize]) -> bool {
        f.len() == self.order()
            && self.elements().all(|a| self.elements().all(|b| f[self.mul(a, b)] == other.mul(f[a], f[b])))
    }

    /// An isomorphism `self -> other`, if one exists.
    pub fn isomorphism_to(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        if self.order() != other.order() || self.is_abelian() != other.is_abelian() {
            return None;
        }
        let gens = self.generators();
        // words for every element as products of generators, by BFS
        let mut word: Vec<Option<Vec<usize>>> = vec![None; self.order()];
        word[self.identity] = Some(vec![]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (k, g) in gens.iter().enumerate() {
                let y = self.mul(x, *g);
                if word[y].is_none() {
                    let mut w = word[x].clone().expect("visited");
                    w.push(k);
                    word[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|g| {
                let o = self.element_order(*g);
                other.elements().filter(|h| other.element_order(*h) == o).collect()
            })
            .collect();
        if candidates.iter().any(|c| c.is_empty()) {
            return None;
        }
        let mut choice = vec![0usize; gens.len()];
        let mut images = vec![0usize; gens.len()];
        loop {
            for (k, c) in choice.iter().enumerate() {
                images[k] = candidates[k][*c];
            }
            let f: Vec<usize> = word
                .iter()
                .map(|w| {
                    w.as_ref()
                        .expect("generated")
                        .iter()
                        .fold(other.identity, |acc, k| other.mul(acc, images[*k]))
                })
                .collect();
            let bijective = f.iter().collect::<BTreeSet<_>>().len() == f.len();
            if bijective && self.is_homomorphism(other, &f) {
                return Some(f);
            }
            // odometer
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return None;
                }
                choice[k] += 1;
                if choice[k] < candidates[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }
}

/// All products of the given permutations, in breadth-first order from the
/// identity. `(x·g)(i) = x(g(i))`.
pub fn permutation_closure(gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let degree = gens.first().map_or(0, |g| g.len());
    let id: Vec<usize> = (0..degree).collect();
    let mut elems = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<usize> = g.iter().map(|&i| x[i]).collect();
            if !elems.contains(&y) {
                elems.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    elems
}

/// Generators of the symmetric group on three letters used by [`FiniteGroup::symmetric3`].
pub const S3_GENERATORS: [[usize; 3]; 2] = [[1, 0, 2], [1, 2, 0]];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups() {
        assert_eq!(FiniteGroup::trivial().order(), 1);
        let z3 = FiniteGroup::cyclic(3);
        assert_eq!(z3.mul(2, 2), 1);
        assert_eq!(z3.inv(1), 2);
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(FiniteGroup::klein_four().elements().filter(|&a| FiniteGroup::klein_four().element_order(a) == 2).count(), 3);
    }

    #[test]
    fn rejects_bad_tables() {
        let names = vec!["e".into(), "a".into()];
        assert!(FiniteGroup::new(names.clone(), vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::new(names, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn isomorphisms() {
        let z4 = FiniteGroup::cyclic(4);
        let v4 = FiniteGroup::klein_four();
        assert!(z4.isomorphism_to(&v4).is_none());
        assert!(v4.isomorphism_to(&FiniteGroup::klein_four()).is_some());
        let z6 = FiniteGroup::cyclic(6);
        let z2z3 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        let f = z6.isomorphism_to(&z2z3).unwrap();
        assert!(z6.is_homomorphism(&z2z3, &f));
        assert!(FiniteGroup::symmetric3().isomorphism_to(&z6).is_none());
    }

    #[test]
    fn json_roundtrip() {
        let s3 = FiniteGroup::symmetric3();
        let back = FiniteGroup::from_json(&s3.to_json()).unwrap();
        assert_eq!(back, s3);
    }
}
