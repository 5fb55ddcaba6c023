//! Map sites, presheaves of finite posets or sets over them, and oplax
//! transformations between such presheaves.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Report, Result};
use crate::quantaloid::{Cell, MapCell, Obj, Quantaloid};

/// The maps of a quantaloid (all of them, or only the symmetric ones),
/// closed under composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSite {
    q: Arc<Quantaloid>,
    symmetric: bool,
    cells: Vec<MapCell>,
    index: HashMap<Cell, usize>,
}

impl MapSite {
    pub fn new(q: Arc<Quantaloid>, symmetric: bool) -> Result<Self> {
        if symmetric && !q.has_involution() {
            return Err(Error::NoInvolution);
        }
        let cells = q.enumerate_maps(symmetric);
        let index = cells.iter().enumerate().map(|(i, m)| (m.forward, i)).collect();
        Ok(Self { q, symmetric, cells, index })
    }

    pub fn quantaloid(&self) -> &Arc<Quantaloid> {
        &self.q
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[MapCell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> MapCell {
        self.cells[i]
    }

    pub fn find(&self, forward: Cell) -> Option<usize> {
        self.index.get(&forward).copied()
    }

    pub fn identity(&self, x: Obj) -> usize {
        self.index[&self.q.identity(x)]
    }

    /// `g . f` as a site index. Panics if the ends do not match.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        let fw = self.q.compose(self.cells[g].forward, self.cells[f].forward);
        self.index[&fw]
    }

    pub fn between(&self, x: Obj, y: Obj) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells.len()).filter(move |&i| self.cells[i].src() == x && self.cells[i].dst() == y)
    }

    pub fn into_obj(&self, y: Obj) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells.len()).filter(move |&i| self.cells[i].dst() == y)
    }

    pub fn describe(&self, i: usize) -> String {
        self.q.describe(self.cells[i].forward)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiberKind {
    Poset,
    Set,
}

/// A finite fiber. Set fibers carry the discrete order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    names: Vec<String>,
    leq: Vec<bool>,
}

impl Fiber {
    pub fn discrete(names: Vec<String>) -> Self {
        let n = names.len();
        let leq = (0..n * n).map(|i| i / n == i % n).collect();
        Self { names, leq }
    }

    pub fn ordered(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Self {
        let n = names.len();
        let leq = (0..n * n).map(|i| leq(i / n, i % n)).collect();
        Self { names, leq }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.names.len() + b]
    }

    pub fn is_discrete(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| self.leq(a, b) == (a == b)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    site: Arc<MapSite>,
    kind: FiberKind,
    fibers: Vec<Fiber>,
    // per site cell `x -> y`: the action fiber(y) -> fiber(x)
    action: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Shape checks only; see [`Presheaf::validate`] for functoriality.
    pub fn new(site: Arc<MapSite>, kind: FiberKind, fibers: Vec<Fiber>, action: Vec<Vec<usize>>) -> Result<Self> {
        let q = site.quantaloid();
        if fibers.len() != q.num_objects() {
            return Err(Error::Shape("one fiber per object is required".into()));
        }
        if action.len() != site.len() {
            return Err(Error::Shape("one action per map is required".into()));
        }
        for (i, m) in site.cells().iter().enumerate() {
            let (src, dst) = (fibers[m.src().0].len(), fibers[m.dst().0].len());
            if action[i].len() != dst || action[i].iter().any(|&v| v >= src) {
                return Err(Error::Shape(format!("action along {} has the wrong shape", site.describe(i))));
            }
        }
        if kind == FiberKind::Set && fibers.iter().any(|f| !f.is_discrete()) {
            return Err(Error::Shape("set fibers must be discrete".into()));
        }
        for f in &fibers {
            let mut names = f.names.clone();
            names.sort();
            names.dedup();
            if names.len() != f.len() {
                return Err(Error::Shape("fiber element names must be distinct".into()));
            }
        }
        Ok(Self { site, kind, fibers, action })
    }

    /// One element over every object.
    pub fn terminal(site: Arc<MapSite>, kind: FiberKind) -> Self {
        let n = site.quantaloid().num_objects();
        let fibers = (0..n).map(|_| Fiber::discrete(vec!["*".into()])).collect();
        let action = vec![vec![0]; site.len()];
        Self::new(site, kind, fibers, action).expect("terminal presheaf is well shaped")
    }

    pub fn site(&self) -> &Arc<MapSite> {
        &self.site
    }

    pub fn quantaloid(&self) -> &Arc<Quantaloid> {
        self.site.quantaloid()
    }

    pub fn kind(&self) -> FiberKind {
        self.kind
    }

    pub fn fiber(&self, x: Obj) -> &Fiber {
        &self.fibers[x.0]
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    /// The action of site cell `gamma: x -> y` on `a` in fiber(y).
    pub fn act(&self, gamma: usize, a: usize) -> usize {
        self.action[gamma][a]
    }

    pub fn action(&self, gamma: usize) -> &[usize] {
        &self.action[gamma]
    }

    /// Start of each fiber in the disjoint union of all fibers.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        let mut out = Vec::with_capacity(self.fibers.len() + 1);
        for f in &self.fibers {
            out.push(acc);
            acc += f.len();
        }
        out.push(acc);
        out
    }

    pub fn total(&self) -> usize {
        self.fibers.iter().map(Fiber::len).sum()
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let site = &*self.site;
        let q = site.quantaloid();
        for x in q.objects() {
            let id = site.identity(x);
            if self.action[id].iter().enumerate().any(|(a, &b)| a != b) {
                report.push(format!("action along the identity of `{}` is not the identity", q.object_name(x)));
            }
        }
        for f in 0..site.len() {
            for g in 0..site.len() {
                if site.cell(f).dst() != site.cell(g).src() {
                    continue;
                }
                let gf = site.compose(g, f);
                for a in 0..self.fibers[site.cell(g).dst().0].len() {
                    if self.act(gf, a) != self.act(f, self.act(g, a)) {
                        report.push(format!(
                            "action is not functorial on {} after {} at `{}`",
                            site.describe(g),
                            site.describe(f),
                            self.fibers[site.cell(g).dst().0].name(a)
                        ));
                    }
                }
            }
        }
        if self.kind == FiberKind::Poset {
            for (x, fib) in self.fibers.iter().enumerate() {
                let n = fib.len();
                for a in 0..n {
                    if !fib.leq(a, a) {
                        report.push(format!("fiber over `{}` is not reflexive", q.object_name(Obj(x))));
                    }
                    for b in 0..n {
                        for c in 0..n {
                            if fib.leq(a, b) && fib.leq(b, c) && !fib.leq(a, c) {
                                report.push(format!("fiber over `{}` is not transitive", q.object_name(Obj(x))));
                            }
                        }
                    }
                }
            }
            for g in 0..site.len() {
                let (src, dst) = (site.cell(g).src().0, site.cell(g).dst().0);
                let n = self.fibers[dst].len();
                for a in 0..n {
                    for b in 0..n {
                        if self.fibers[dst].leq(a, b) && !self.fibers[src].leq(self.act(g, a), self.act(g, b)) {
                            report.push(format!("action along {} is not monotone", site.describe(g)));
                        }
                    }
                }
                for h in 0..site.len() {
                    let (c1, c2) = (site.cell(g), site.cell(h));
                    if g == h || c1.src() != c2.src() || c1.dst() != c2.dst() || !q.leq(c1.forward, c2.forward) {
                        continue;
                    }
                    for a in 0..n {
                        if !self.fibers[src].leq(self.act(h, a), self.act(g, a)) {
                            report.push(format!(
                                "2-cell {} <= {} is not reversed by the action",
                                site.describe(g),
                                site.describe(h)
                            ));
                        }
                    }
                }
            }
        }
        report
    }

    /// A natural bijection onto `other` (order isomorphism in the poset
    /// case), as one permutation per object.
    pub fn find_isomorphism(&self, other: &Presheaf) -> Option<Vec<Vec<usize>>> {
        if self.site.cells() != other.site.cells() || self.kind != other.kind {
            return None;
        }
        if self.fibers.iter().zip(&other.fibers).any(|(a, b)| a.len() != b.len()) {
            return None;
        }
        let n_obj = self.fibers.len();
        let mut vars: Vec<(usize, usize)> = Vec::new();
        for x in (0..n_obj).rev() {
            for a in 0..self.fibers[x].len() {
                vars.push((x, a));
            }
        }
        let mut phi: Vec<Vec<Option<usize>>> = self.fibers.iter().map(|f| vec![None; f.len()]).collect();
        let mut used: Vec<Vec<bool>> = other.fibers.iter().map(|f| vec![false; f.len()]).collect();
        if self.iso_search(other, &vars, 0, &mut phi, &mut used) {
            Some(phi.into_iter().map(|v| v.into_iter().map(Option::unwrap).collect()).collect())
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &Presheaf) -> bool {
        self.find_isomorphism(other).is_some()
    }

    fn iso_search(
        &self,
        other: &Presheaf,
        vars: &[(usize, usize)],
        k: usize,
        phi: &mut Vec<Vec<Option<usize>>>,
        used: &mut Vec<Vec<bool>>,
    ) -> bool {
        let Some(&(x, b)) = vars.get(k) else { return true };
        for v in 0..other.fibers[x].len() {
            if used[x][v] || !self.iso_consistent(other, phi, x, b, v) {
                continue;
            }
            phi[x][b] = Some(v);
            used[x][v] = true;
            if self.iso_search(other, vars, k + 1, phi, used) {
                return true;
            }
            phi[x][b] = None;
            used[x][v] = false;
        }
        false
    }

    fn iso_consistent(&self, other: &Presheaf, phi: &[Vec<Option<usize>>], x: usize, b: usize, v: usize) -> bool {
        let site = &*self.site;
        for (g, m) in site.cells().iter().enumerate() {
            // b on the source side: b = F(g)(a) for some assigned a over dst
            if m.src().0 == x {
                let y = m.dst().0;
                for (a, image) in phi[y].iter().enumerate() {
                    if self.act(g, a) == b {
                        if let &Some(pa) = image {
                            if other.act(g, pa) != v {
                                return false;
                            }
                        }
                    }
                }
            }
            // b on the target side
            if m.dst().0 == x {
                let w = m.src().0;
                if let Some(pb) = phi[w][self.act(g, b)] {
                    if pb != other.act(g, v) {
                        return false;
                    }
                }
            }
        }
        if self.kind == FiberKind::Poset {
            let (fx, gx) = (&self.fibers[x], &other.fibers[x]);
            for (c, pc) in phi[x].iter().enumerate() {
                if let Some(pc) = *pc {
                    if fx.leq(b, c) != gx.leq(v, pc) || fx.leq(c, b) != gx.leq(pc, v) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Components `fiber_F(x) -> fiber_G(x)` of an oplax transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OplaxTransform {
    pub components: Vec<Vec<usize>>,
}

impl OplaxTransform {
    pub fn identity(f: &Presheaf) -> Self {
        Self { components: f.fibers.iter().map(|fib| (0..fib.len()).collect()).collect() }
    }

    /// `self` after `first`.
    pub fn after(&self, first: &OplaxTransform) -> Self {
        let components = first
            .components
            .iter()
            .zip(&self.components)
            .map(|(a, b)| a.iter().map(|&v| b[v]).collect())
            .collect();
        Self { components }
    }

    /// Monotone components and one oplax square per map:
    /// `alpha_x(F(g)(a)) <= G(g)(alpha_y(a))`.
    pub fn validate(&self, from: &Presheaf, to: &Presheaf) -> Report {
        let mut report = Report::new();
        if from.site.cells() != to.site.cells() {
            report.push("presheaves live over different sites");
            return report;
        }
        if self.components.len() != from.fibers.len()
            || self.components.iter().enumerate().any(|(x, c)| {
                c.len() != from.fibers[x].len() || c.iter().any(|&v| v >= to.fibers[x].len())
            })
        {
            report.push("components have the wrong shape");
            return report;
        }
        let q = from.quantaloid();
        for (x, comp) in self.components.iter().enumerate() {
            let (fx, gx) = (&from.fibers[x], &to.fibers[x]);
            for a in 0..fx.len() {
                for b in 0..fx.len() {
                    if fx.leq(a, b) && !gx.leq(comp[a], comp[b]) {
                        report.push(format!("component over `{}` is not monotone", q.object_name(Obj(x))));
                    }
                }
            }
        }
        for (g, m) in from.site.cells().iter().enumerate() {
            let (x, y) = (m.src().0, m.dst().0);
            for a in 0..from.fibers[y].len() {
                let lhs = self.components[x][from.act(g, a)];
                let rhs = to.act(g, self.components[y][a]);
                if !to.fibers[x].leq(lhs, rhs) {
                    report.push(format!(
                        "oplax square along {} fails at `{}`",
                        from.site.describe(g),
                        from.fibers[y].name(a)
                    ));
                }
            }
        }
        report
    }
}
