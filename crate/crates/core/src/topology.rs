//! Finite topological spaces given by their opens, with point sets stored as
//! bitmasks.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    points: Vec<String>,
    names: Vec<String>,
    masks: Vec<u32>,
    by_mask: HashMap<u32, usize>,
}

impl Topology {
    /// `opens` pairs a name with the indices of the points it contains.
    pub fn new(points: Vec<String>, opens: Vec<(String, Vec<usize>)>) -> Result<Self> {
        if points.len() > 16 {
            return Err(Error::NotATopology("at most 16 points are supported".into()));
        }
        let full: u32 = if points.is_empty() { 0 } else { (1u32 << points.len()) - 1 };
        let mut names = Vec::with_capacity(opens.len());
        let mut masks = Vec::with_capacity(opens.len());
        let mut by_mask = HashMap::new();
        for (name, pts) in opens {
            let mut m = 0u32;
            for p in pts {
                if p >= points.len() {
                    return Err(Error::NotATopology(format!("open `{name}` uses an unknown point")));
                }
                m |= 1 << p;
            }
            if by_mask.insert(m, names.len()).is_some() {
                return Err(Error::NotATopology(format!("open `{name}` is listed twice")));
            }
            if names.contains(&name) {
                return Err(Error::Duplicate(name));
            }
            names.push(name);
            masks.push(m);
        }
        if !by_mask.contains_key(&0) {
            return Err(Error::NotATopology("the empty set is not open".into()));
        }
        if !by_mask.contains_key(&full) {
            return Err(Error::NotATopology("the whole space is not open".into()));
        }
        for &a in &masks {
            for &b in &masks {
                if !by_mask.contains_key(&(a | b)) || !by_mask.contains_key(&(a & b)) {
                    return Err(Error::NotATopology("opens not closed under union and intersection".into()));
                }
            }
        }
        Ok(Self { points, names, masks, by_mask })
    }

    /// Topology on `n` points named `0..n` with the given open bitmasks.
    pub fn from_masks(n: usize, masks: &[u32]) -> Result<Self> {
        let points: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut sorted = masks.to_vec();
        sorted.sort_by_key(|m| (m.count_ones(), *m));
        sorted.dedup();
        let opens = sorted
            .iter()
            .map(|&m| {
                let pts: Vec<usize> = (0..n).filter(|&i| m & (1 << i) != 0).collect();
                (default_open_name(&points, &pts), pts)
            })
            .collect();
        Self::new(points, opens)
    }

    /// The Sierpinski space: points `0`, `1`; opens `∅ < U = {1} < X`.
    pub fn sierpinski() -> Self {
        Self::new(
            vec!["0".into(), "1".into()],
            vec![("∅".into(), vec![]), ("U".into(), vec![1]), ("X".into(), vec![0, 1])],
        )
        .expect("sierpinski space is a topology")
    }

    pub fn discrete(n: usize) -> Self {
        let masks: Vec<u32> = (0..(1u32 << n)).collect();
        Self::from_masks(n, &masks).expect("discrete topology")
    }

    /// Every topology on `n` points (`n <= 4`), in a fixed order.
    pub fn all_on(n: usize) -> Vec<Self> {
        assert!(n <= 4, "enumeration is only meant for tiny spaces");
        let full: u32 = if n == 0 { 0 } else { (1 << n) - 1 };
        let middle: Vec<u32> = (1..full).collect();
        let mut out = Vec::new();
        for choice in 0u64..(1u64 << middle.len()) {
            let mut masks = vec![0, full];
            masks.extend(
                middle.iter().enumerate().filter(|(i, _)| choice & (1 << i) != 0).map(|(_, &m)| m),
            );
            let closed = masks.iter().all(|&a| {
                masks.iter().all(|&b| masks.contains(&(a | b)) && masks.contains(&(a & b)))
            });
            if closed {
                out.push(Self::from_masks(n, &masks).expect("closed family"));
            }
        }
        out
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn num_opens(&self) -> usize {
        self.names.len()
    }

    pub fn open_name(&self, o: usize) -> &str {
        &self.names[o]
    }

    pub fn open_names(&self) -> &[String] {
        &self.names
    }

    pub fn mask(&self, o: usize) -> u32 {
        self.masks[o]
    }

    pub fn open_by_mask(&self, m: u32) -> Option<usize> {
        self.by_mask.get(&m).copied()
    }

    pub fn open_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn points_of(&self, o: usize) -> Vec<usize> {
        (0..self.points.len()).filter(|&p| self.masks[o] & (1 << p) != 0).collect()
    }

    pub fn subset(&self, a: usize, b: usize) -> bool {
        self.masks[a] & !self.masks[b] == 0
    }

    pub fn inter(&self, a: usize, b: usize) -> usize {
        self.by_mask[&(self.masks[a] & self.masks[b])]
    }

    pub fn union(&self, a: usize, b: usize) -> usize {
        self.by_mask[&(self.masks[a] | self.masks[b])]
    }

    pub fn empty(&self) -> usize {
        self.by_mask[&0]
    }

    /// Smallest open containing point `p`.
    pub fn minimal_nbhd(&self, p: usize) -> usize {
        let m = self
            .masks
            .iter()
            .filter(|&&m| m & (1 << p) != 0)
            .fold(u32::MAX, |acc, &m| acc & m);
        self.by_mask[&m]
    }
}

fn default_open_name(points: &[String], pts: &[usize]) -> String {
    if pts.is_empty() {
        return "∅".into();
    }
    let inner: Vec<&str> = pts.iter().map(|&p| points[p].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}
