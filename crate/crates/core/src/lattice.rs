//! Finite complete lattices, stored as an element list plus the full order
//! relation. Binary joins and meets are tabulated once at construction.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupLattice {
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl SupLattice {
    /// Builds a lattice from a full order relation given as a predicate.
    pub fn from_order(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = names.len();
        let mut rel = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                rel[a * n + b] = leq(a, b);
            }
        }
        for a in 0..n {
            if !rel[a * n + a] {
                return Err(Error::NotALattice(format!("`{}` is not below itself", names[a])));
            }
            for b in 0..n {
                if a != b && rel[a * n + b] && rel[b * n + a] {
                    return Err(Error::NotALattice(format!(
                        "`{}` and `{}` are distinct but mutually below",
                        names[a], names[b]
                    )));
                }
                for c in 0..n {
                    if rel[a * n + b] && rel[b * n + c] && !rel[a * n + c] {
                        return Err(Error::NotALattice(format!(
                            "order not transitive at `{}` <= `{}` <= `{}`",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Self::finish(names, rel)
    }

    /// Builds a lattice from covering (or any generating) pairs `a <= b`,
    /// taking the reflexive-transitive closure.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut rel = vec![false; n * n];
        for a in 0..n {
            rel[a * n + a] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::Shape("cover pair out of range".into()));
            }
            rel[a * n + b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                if rel[a * n + k] {
                    for b in 0..n {
                        if rel[k * n + b] {
                            rel[a * n + b] = true;
                        }
                    }
                }
            }
        }
        Self::from_order(names, |a, b| rel[a * n + b])
    }

    /// A chain `names[0] < names[1] < ...`.
    pub fn chain(names: Vec<String>) -> Result<Self> {
        Self::from_order(names, |a, b| a <= b)
    }

    fn finish(names: Vec<String>, rel: Vec<bool>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::NotALattice("empty element set has no bottom".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Duplicate(name.clone()));
            }
        }
        let le = |a: usize, b: usize| rel[a * n + b];
        let bottom = (0..n)
            .find(|&a| (0..n).all(|b| le(a, b)))
            .ok_or_else(|| Error::NotALattice("no least element".into()))?;
        let top = (0..n)
            .find(|&a| (0..n).all(|b| le(b, a)))
            .ok_or_else(|| Error::NotALattice("no greatest element".into()))?;
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let ub: Vec<usize> = (0..n).filter(|&c| le(a, c) && le(b, c)).collect();
                let lub = ub.iter().copied().find(|&c| ub.iter().all(|&d| le(c, d)));
                let lb: Vec<usize> = (0..n).filter(|&c| le(c, a) && le(c, b)).collect();
                let glb = lb.iter().copied().find(|&c| lb.iter().all(|&d| le(d, c)));
                match (lub, glb) {
                    (Some(j), Some(m)) => {
                        join[a * n + b] = j;
                        meet[a * n + b] = m;
                    }
                    _ => {
                        return Err(Error::NotALattice(format!(
                            "`{}` and `{}` lack a join or meet",
                            names[a], names[b]
                        )))
                    }
                }
            }
        }
        Ok(Self { names, index, leq: rel, join, meet, bottom, top })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Never true: a lattice always has a bottom.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn id(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join2(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet2(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join2(acc, x))
    }

    pub fn meet(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet2(acc, x))
    }

    /// Join of a set of element names.
    pub fn join_named<'a>(&self, items: impl IntoIterator<Item = &'a str>) -> Result<usize> {
        let ids = items.into_iter().map(|s| self.id(s)).collect::<Result<Vec<_>>>()?;
        Ok(self.join(ids))
    }

    pub fn meet_named<'a>(&self, items: impl IntoIterator<Item = &'a str>) -> Result<usize> {
        let ids = items.into_iter().map(|s| self.id(s)).collect::<Result<Vec<_>>>()?;
        Ok(self.meet(ids))
    }

    pub fn leq_named(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.leq(self.id(a)?, self.id(b)?))
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let between = (0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn diamond_joins_and_meets() {
        // 0 < a, b < 1
        let l = SupLattice::from_covers(names(&["0", "a", "b", "1"]), &[(0, 1), (0, 2), (1, 3), (2, 3)])
            .unwrap();
        assert_eq!(l.join2(1, 2), 3);
        assert_eq!(l.meet2(1, 2), 0);
        assert_eq!(l.join(std::iter::empty()), 0);
        assert_eq!(l.meet(std::iter::empty()), 3);
        assert_eq!(l.covers().len(), 4);
    }

    #[test]
    fn rejects_non_lattices() {
        // two incomparable maximal elements
        let err = SupLattice::from_covers(names(&["0", "a", "b"]), &[(0, 1), (0, 2)]).unwrap_err();
        assert!(matches!(err, Error::NotALattice(_)));
        // a cycle is not antisymmetric
        let err = SupLattice::from_covers(names(&["a", "b"]), &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotALattice(_)));
        let err = SupLattice::chain(names(&["a", "a"])).unwrap_err();
        assert_eq!(err, Error::Duplicate("a".into()));
    }

    #[test]
    fn unknown_element_is_an_error() {
        let l = SupLattice::chain(names(&["0", "1"])).unwrap();
        assert_eq!(l.id("2"), Err(Error::UnknownElement("2".into())));
    }
}
