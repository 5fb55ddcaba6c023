//! Q-categories and Q-functors.
//!
//! `M(a, b)` lives in `hom(typ b, typ a)`; composition reads
//! `M(a, b) . M(b, c) <= M(a, c)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Report, Result};
use crate::presheaf::{FiberKind, Presheaf};
use crate::quantaloid::{Cell, Obj, Quantaloid};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedSet {
    names: Vec<String>,
    types: Vec<Obj>,
}

impl TypedSet {
    pub fn new(names: Vec<String>, types: Vec<Obj>) -> Result<Self> {
        if names.len() != types.len() {
            return Err(Error::Shape("every element needs exactly one type".into()));
        }
        let mut seen = HashMap::new();
        for n in &names {
            if seen.insert(n.as_str(), ()).is_some() {
                return Err(Error::Duplicate(n.clone()));
            }
        }
        Ok(Self { names, types })
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

    pub fn types(&self) -> &[Obj] {
        &self.types
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QCategory {
    q: Arc<Quantaloid>,
    base: TypedSet,
    hom: Vec<Cell>,
}

impl QCategory {
    /// Checks shapes only (`M(a, b)` must be a cell `typ b -> typ a`).
    pub fn new(q: Arc<Quantaloid>, base: TypedSet, hom: Vec<Cell>) -> Result<Self> {
        let n = base.len();
        if hom.len() != n * n {
            return Err(Error::Shape(format!("expected a {n}x{n} matrix")));
        }
        if let Some(t) = base.types.iter().find(|t| t.0 >= q.num_objects()) {
            return Err(Error::UnknownObject(t.to_string()));
        }
        for a in 0..n {
            for b in 0..n {
                let c = hom[a * n + b];
                if c.src != base.types[b] || c.dst != base.types[a] || c.val >= q.hom(c.src, c.dst).len() {
                    return Err(Error::Shape(format!(
                        "entry ({}, {}) is not a cell {} -> {}",
                        base.names[a],
                        base.names[b],
                        q.object_name(base.types[b]),
                        q.object_name(base.types[a])
                    )));
                }
            }
        }
        Ok(Self { q, base, hom })
    }

    pub fn from_fn(q: Arc<Quantaloid>, base: TypedSet, m: impl Fn(usize, usize) -> Cell) -> Result<Self> {
        let n = base.len();
        let hom = (0..n * n).map(|i| m(i / n, i % n)).collect();
        Self::new(q, base, hom)
    }

    pub fn quantaloid(&self) -> &Arc<Quantaloid> {
        &self.q
    }

    pub fn base(&self) -> &TypedSet {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.base.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.base.names[a]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.base
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn ty(&self, a: usize) -> Obj {
        self.base.types[a]
    }

    pub fn elements_of_type(&self, x: Obj) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&a| self.ty(a) == x)
    }

    pub fn m(&self, a: usize, b: usize) -> Cell {
        self.hom[a * self.len() + b]
    }

    pub fn matrix(&self) -> &[Cell] {
        &self.hom
    }

    /// The representable column `M(-, x)`.
    pub fn column(&self, x: usize) -> Vec<Cell> {
        (0..self.len()).map(|a| self.m(a, x)).collect()
    }

    /// The row `M(x, -)`.
    pub fn row(&self, x: usize) -> Vec<Cell> {
        (0..self.len()).map(|b| self.m(x, b)).collect()
    }

    /// Reflexivity and idempotency of `M`.
    pub fn validate(&self) -> Report {
        let q = &*self.q;
        let n = self.len();
        let mut report = Report::new();
        for a in 0..n {
            if !q.leq(q.identity(self.ty(a)), self.m(a, a)) {
                report.push(format!("reflexivity fails at `{}`", self.name(a)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !q.leq(q.compose(self.m(a, b), self.m(b, c)), self.m(a, c)) {
                        report.push(format!(
                            "idempotency fails at (`{}`, `{}`, `{}`)",
                            self.name(a),
                            self.name(b),
                            self.name(c)
                        ));
                    }
                }
            }
        }
        report
    }

    pub fn is_symmetric(&self) -> Result<bool> {
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.m(a, b) != self.q.involute(self.m(b, a))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Pointwise `M(a, b) ∧ M(b, a)°`.
    pub fn symmetrize_meet(&self) -> Result<Self> {
        let n = self.len();
        let mut hom = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                hom.push(self.q.meet2(self.m(a, b), self.q.involute(self.m(b, a))?));
            }
        }
        Self::new(self.q.clone(), self.base.clone(), hom)
    }

    /// Least symmetric Q-category structure above `M` on the same elements.
    pub fn symmetrize_free(&self) -> Result<Self> {
        let q = &*self.q;
        let n = self.len();
        let mut cur = self.hom.clone();
        for a in 0..n {
            cur[a * n + a] = q.join2(cur[a * n + a], q.identity(self.ty(a)));
        }
        loop {
            let mut next = cur.clone();
            for a in 0..n {
                for b in 0..n {
                    let mut v = q.join2(next[a * n + b], q.involute(cur[b * n + a])?);
                    for c in 0..n {
                        v = q.join2(v, q.compose(cur[a * n + c], cur[c * n + b]));
                    }
                    next[a * n + b] = v;
                }
            }
            if next == cur {
                break;
            }
            cur = next;
        }
        Self::new(self.q.clone(), self.base.clone(), cur)
    }

    /// Distinct elements have distinct columns.
    pub fn is_skeletal(&self) -> bool {
        let mut seen: HashMap<Vec<Cell>, usize> = HashMap::new();
        (0..self.len()).all(|x| seen.insert(self.column(x), x).is_none())
    }

    /// `M <= other` entrywise, on the same typed set.
    pub fn leq_pointwise(&self, other: &QCategory) -> bool {
        self.base == other.base && self.hom.iter().zip(&other.hom).all(|(&a, &b)| self.q.leq(a, b))
    }

    /// A type-preserving bijection carrying `M` onto `other`'s matrix.
    pub fn find_isomorphism(&self, other: &QCategory) -> Option<Vec<usize>> {
        if self.len() != other.len() {
            return None;
        }
        let n = self.len();
        let mut phi = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(s: &QCategory, o: &QCategory, k: usize, phi: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            if k == s.len() {
                return true;
            }
            for v in 0..o.len() {
                if used[v] || o.ty(v) != s.ty(k) || o.m(v, v) != s.m(k, k) {
                    continue;
                }
                let ok = (0..k).all(|b| o.m(v, phi[b]) == s.m(k, b) && o.m(phi[b], v) == s.m(b, k));
                if !ok {
                    continue;
                }
                phi[k] = v;
                used[v] = true;
                if go(s, o, k + 1, phi, used) {
                    return true;
                }
                used[v] = false;
            }
            false
        }
        go(self, other, 0, &mut phi, &mut used).then_some(phi)
    }

    pub fn is_isomorphic(&self, other: &QCategory) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

/// The one-element category `(id_x, *)`.
pub fn unit_qcat(q: Arc<Quantaloid>, x: Obj) -> QCategory {
    let id = q.identity(x);
    let base = TypedSet::new(vec!["*".into()], vec![x]).expect("one element");
    QCategory::new(q, base, vec![id]).expect("identity matrix is well shaped")
}

/// All 1-cells, typed by their codomain, with `[g, f]` the right residual of
/// `g` along `f` when the domains agree and bottom otherwise.
pub fn arrows_qcat(q: Arc<Quantaloid>) -> QCategory {
    let mut cells = Vec::new();
    for x in q.objects() {
        for y in q.objects() {
            cells.extend(q.cells(x, y));
        }
    }
    let names = cells
        .iter()
        .map(|&c| format!("{}:{}->{}", q.cell_name(c), q.object_name(c.src), q.object_name(c.dst)))
        .collect();
    let types = cells.iter().map(|c| c.dst).collect();
    let base = TypedSet::new(names, types).expect("cell names are distinct");
    let m = |g: usize, f: usize| {
        let (g, f) = (cells[g], cells[f]);
        if g.src == f.src {
            q.residual_right(f, g).expect("common source")
        } else {
            q.bottom(f.dst, g.dst)
        }
    };
    QCategory::from_fn(q.clone(), base, m).expect("residuals are well shaped")
}

/// Names for the disjoint union of all fibers; names occurring in several
/// fibers get an `@object` suffix.
pub fn disjoint_union_names(f: &Presheaf) -> (Vec<String>, Vec<Obj>) {
    let q = f.quantaloid();
    let mut count: HashMap<&str, usize> = HashMap::new();
    for fib in f.fibers() {
        for n in fib.names() {
            *count.entry(n.as_str()).or_default() += 1;
        }
    }
    let mut names = Vec::new();
    let mut types = Vec::new();
    for x in q.objects() {
        for n in f.fiber(x).names() {
            if count[n.as_str()] > 1 {
                names.push(format!("{}@{}", n, q.object_name(x)));
            } else {
                names.push(n.clone());
            }
            types.push(x);
        }
    }
    (names, types)
}

/// Sections of a set-valued presheaf on the opens of a finite space, with
/// `M(f, g)` the join of the opens on which `f` and `g` restrict equally.
pub fn sections_qcat(f: &Presheaf) -> Result<QCategory> {
    let q = f.quantaloid().clone();
    let space = q.topology().ok_or(Error::NotTopological)?.clone();
    if f.kind() != FiberKind::Set {
        return Err(Error::Invalid("sections need a set-valued presheaf".into()));
    }
    let site = f.site();
    let (names, types) = disjoint_union_names(f);
    let offsets = f.offsets();
    let local = |i: usize| i - offsets[types[i].0];
    let restrict = |w: usize, a: Obj, s: usize| -> Result<usize> {
        let fw = q.cell_of_open(Obj(w), a, w)?.ok_or_else(|| Error::Invalid("open not below".into()))?;
        let g = site.find(fw).ok_or_else(|| Error::Invalid("restriction map missing from the site".into()))?;
        Ok(f.act(g, s))
    };
    let n = names.len();
    let mut hom = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (types[i], types[j]);
            let common = space.inter(a.0, b.0);
            let mut acc = q.bottom(b, a);
            for w in (0..space.num_opens()).filter(|&w| space.subset(w, common)) {
                if restrict(w, a, local(i))? == restrict(w, b, local(j))? {
                    let c = q.cell_of_open(b, a, w)?.expect("w is below both");
                    acc = q.join2(acc, c);
                }
            }
            hom.push(acc);
        }
    }
    QCategory::new(q, TypedSet::new(names, types)?, hom)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFunctor {
    pub dom: QCategory,
    pub cod: QCategory,
    pub map: Vec<usize>,
}

impl QFunctor {
    pub fn new(dom: QCategory, cod: QCategory, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.len() || map.iter().any(|&v| v >= cod.len()) {
            return Err(Error::Shape("functor map has the wrong shape".into()));
        }
        Ok(Self { dom, cod, map })
    }

    pub fn identity(a: &QCategory) -> Self {
        Self { dom: a.clone(), cod: a.clone(), map: (0..a.len()).collect() }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// Type preservation and `M(a, a') <= N(f a, f a')`.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let q = self.dom.quantaloid();
        if **q != **self.cod.quantaloid() {
            report.push("domain and codomain live over different quantaloids");
            return report;
        }
        for a in 0..self.dom.len() {
            if self.cod.ty(self.map[a]) != self.dom.ty(a) {
                report.push(format!("`{}` changes type", self.dom.name(a)));
            }
        }
        if !report.is_ok() {
            return report;
        }
        for a in 0..self.dom.len() {
            for b in 0..self.dom.len() {
                if !q.leq(self.dom.m(a, b), self.cod.m(self.map[a], self.map[b])) {
                    report.push(format!(
                        "hom inequality fails at (`{}`, `{}`)",
                        self.dom.name(a),
                        self.dom.name(b)
                    ));
                }
            }
        }
        report
    }

    /// `self . first`.
    pub fn after(&self, first: &QFunctor) -> Result<Self> {
        if first.cod != self.dom {
            return Err(Error::Shape("functors are not composable".into()));
        }
        let map = first.map.iter().map(|&a| self.map[a]).collect();
        Ok(Self { dom: first.dom.clone(), cod: self.cod.clone(), map })
    }
}
