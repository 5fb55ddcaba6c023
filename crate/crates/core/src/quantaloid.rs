//! Finite quantaloids: objects, hom lattices, sup-preserving composition,
//! identities and an optional involution.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Report, Result};
use crate::lattice::SupLattice;
use crate::topology::Topology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj(pub usize);

/// A 1-cell `src -> dst`, identified by its index in `hom(src, dst)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub src: Obj,
    pub dst: Obj,
    pub val: usize,
}

/// A 1-cell together with its right adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MapCell {
    pub forward: Cell,
    pub adjoint: Cell,
    pub symmetric: bool,
}

impl MapCell {
    pub fn src(&self) -> Obj {
        self.forward.src
    }

    pub fn dst(&self) -> Obj {
        self.forward.dst
    }
}

type ComposeFn<'a> = dyn Fn(Obj, Obj, Obj, usize, usize) -> Option<usize> + 'a;
type InvolutionFn<'a> = dyn Fn(Obj, Obj, usize) -> Option<usize> + 'a;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantaloid {
    objects: Vec<String>,
    homs: Vec<SupLattice>,
    // indexed by (x, y, z); entry `g * |hom(x,y)| + f` is `g . f`
    compose: Vec<Vec<usize>>,
    identity: Vec<usize>,
    involution: Option<Vec<Vec<usize>>>,
    topology: Option<TopologyLink>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct TopologyLink {
    space: Topology,
    // per hom: the open named by each element
    opens: Vec<Vec<usize>>,
}

impl Quantaloid {
    /// Assembles a quantaloid from tables. Only the shape is checked here;
    /// use [`Quantaloid::validate`] for the algebraic laws.
    ///
    /// `homs` is indexed row-major by `(src, dst)`.
    pub fn from_parts(
        objects: Vec<String>,
        homs: Vec<SupLattice>,
        compose: &ComposeFn<'_>,
        identity: Vec<usize>,
        involution: Option<&InvolutionFn<'_>>,
    ) -> Result<Self> {
        let n = objects.len();
        let mut seen = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if seen.insert(o.clone(), i).is_some() {
                return Err(Error::Duplicate(o.clone()));
            }
        }
        if homs.len() != n * n {
            return Err(Error::Shape(format!("expected {} hom lattices, got {}", n * n, homs.len())));
        }
        if identity.len() != n {
            return Err(Error::Shape("one identity per object is required".into()));
        }
        for (x, &id) in identity.iter().enumerate() {
            if id >= homs[x * n + x].len() {
                return Err(Error::Shape(format!("identity of `{}` out of range", objects[x])));
            }
        }
        let mut tables = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (fx, gy, hz) = (homs[x * n + y].len(), homs[y * n + z].len(), homs[x * n + z].len());
                    let mut t = Vec::with_capacity(fx * gy);
                    for g in 0..gy {
                        for f in 0..fx {
                            let v = compose(Obj(x), Obj(y), Obj(z), g, f).ok_or_else(|| {
                                Error::Shape(format!(
                                    "missing composite `{}` . `{}` for {} -> {} -> {}",
                                    homs[y * n + z].name(g),
                                    homs[x * n + y].name(f),
                                    objects[x],
                                    objects[y],
                                    objects[z]
                                ))
                            })?;
                            if v >= hz {
                                return Err(Error::Shape("composite out of range".into()));
                            }
                            t.push(v);
                        }
                    }
                    tables.push(t);
                }
            }
        }
        let involution = match involution {
            None => None,
            Some(inv) => {
                let mut per = Vec::with_capacity(n * n);
                for x in 0..n {
                    for y in 0..n {
                        let mut t = Vec::with_capacity(homs[x * n + y].len());
                        for a in 0..homs[x * n + y].len() {
                            let v = inv(Obj(x), Obj(y), a).ok_or_else(|| {
                                Error::Shape(format!(
                                    "missing involute of `{}` in hom({}, {})",
                                    homs[x * n + y].name(a),
                                    objects[x],
                                    objects[y]
                                ))
                            })?;
                            if v >= homs[y * n + x].len() {
                                return Err(Error::Shape("involute out of range".into()));
                            }
                            t.push(v);
                        }
                        per.push(t);
                    }
                }
                Some(per)
            }
        };
        Ok(Self { objects, homs, compose: tables, identity, involution, topology: None })
    }

    /// The quantaloid `R(X)` of a finite space: objects are opens, `hom(A, B)`
    /// holds the opens below `A ∩ B`, composition is intersection.
    pub fn from_topology(space: &Topology) -> Self {
        let k = space.num_opens();
        let mut homs = Vec::with_capacity(k * k);
        let mut opens = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                let meet = space.inter(a, b);
                let below: Vec<usize> = (0..k).filter(|&w| space.subset(w, meet)).collect();
                let names = below.iter().map(|&w| space.open_name(w).to_string()).collect();
                let lattice = SupLattice::from_order(names, |i, j| space.subset(below[i], below[j]))
                    .expect("opens below an open form a lattice");
                homs.push(lattice);
                opens.push(below);
            }
        }
        let index_in = |hom: usize, w: usize| opens[hom].iter().position(|&o| o == w);
        let compose = |x: Obj, y: Obj, z: Obj, g: usize, f: usize| {
            let w = space.inter(opens[y.0 * k + z.0][g], opens[x.0 * k + y.0][f]);
            index_in(x.0 * k + z.0, w)
        };
        let identity: Vec<usize> = (0..k).map(|a| index_in(a * k + a, a).unwrap()).collect();
        let involution = |x: Obj, y: Obj, a: usize| index_in(y.0 * k + x.0, opens[x.0 * k + y.0][a]);
        let mut q = Self::from_parts(
            space.open_names().to_vec(),
            homs,
            &compose,
            identity,
            Some(&involution),
        )
        .expect("R(X) tables are well shaped");
        q.topology = Some(TopologyLink { space: space.clone(), opens });
        q
    }

    /// One-object quantaloid from a quantale. Commutative quantales get the
    /// identity involution. Fails if the laws do not hold.
    pub fn from_quantale(
        elements: Vec<String>,
        covers: &[(usize, usize)],
        tensor: impl Fn(usize, usize) -> usize,
        unit: usize,
    ) -> Result<Self> {
        let lattice = SupLattice::from_covers(elements, covers)?;
        let m = lattice.len();
        let commutative = (0..m).all(|a| (0..m).all(|b| tensor(a, b) == tensor(b, a)));
        let compose = |_: Obj, _: Obj, _: Obj, g: usize, f: usize| Some(tensor(g, f));
        let ident = |_: Obj, _: Obj, a: usize| Some(a);
        let q = Self::from_parts(
            vec!["*".into()],
            vec![lattice],
            &compose,
            vec![unit],
            if commutative { Some(&ident) } else { None },
        )?;
        q.validate().into_result()?;
        Ok(q)
    }

    /// Distances `{0, step, 2 step, ..., cap, ∞}` ordered by reverse magnitude,
    /// composed by addition truncated to `∞` above `cap`.
    pub fn metric_quantale(step: u32, cap: u32) -> Result<Self> {
        if step == 0 {
            return Err(Error::Invalid("metric step must be positive".into()));
        }
        let finite: Vec<u32> = (0..=cap / step).map(|i| i * step).collect();
        let inf = finite.len();
        // list from ∞ (bottom) upwards to 0 (top)
        let mut names = vec!["∞".to_string()];
        names.extend(finite.iter().rev().map(|v| v.to_string()));
        let value = |i: usize| -> Option<u32> { (i != 0).then(|| finite[inf - i]) };
        let index_of = |v: Option<u32>| -> usize {
            match v {
                Some(d) if d <= cap => inf - (d / step) as usize,
                _ => 0,
            }
        };
        let covers: Vec<(usize, usize)> = (0..inf).map(|i| (i, i + 1)).collect();
        let tensor = |a: usize, b: usize| match (value(a), value(b)) {
            (Some(x), Some(y)) => index_of(Some(x + y)),
            _ => 0,
        };
        Self::from_quantale(names, &covers, tensor, inf)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> {
        (0..self.objects.len()).map(Obj)
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: Obj) -> &str {
        &self.objects[x.0]
    }

    pub fn object(&self, name: &str) -> Result<Obj> {
        self.objects
            .iter()
            .position(|o| o == name)
            .map(Obj)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &SupLattice {
        &self.homs[x.0 * self.objects.len() + y.0]
    }

    pub fn cells(&self, x: Obj, y: Obj) -> impl Iterator<Item = Cell> {
        (0..self.hom(x, y).len()).map(move |val| Cell { src: x, dst: y, val })
    }

    pub fn cell(&self, x: Obj, y: Obj, name: &str) -> Result<Cell> {
        Ok(Cell { src: x, dst: y, val: self.hom(x, y).id(name)? })
    }

    pub fn cell_name(&self, c: Cell) -> &str {
        self.hom(c.src, c.dst).name(c.val)
    }

    pub fn identity(&self, x: Obj) -> Cell {
        Cell { src: x, dst: x, val: self.identity[x.0] }
    }

    pub fn bottom(&self, x: Obj, y: Obj) -> Cell {
        Cell { src: x, dst: y, val: self.hom(x, y).bottom() }
    }

    pub fn top(&self, x: Obj, y: Obj) -> Cell {
        Cell { src: x, dst: y, val: self.hom(x, y).top() }
    }

    pub fn leq(&self, a: Cell, b: Cell) -> bool {
        debug_assert!(a.src == b.src && a.dst == b.dst, "comparing cells of different homs");
        self.hom(a.src, a.dst).leq(a.val, b.val)
    }

    pub fn join2(&self, a: Cell, b: Cell) -> Cell {
        debug_assert!(a.src == b.src && a.dst == b.dst);
        Cell { val: self.hom(a.src, a.dst).join2(a.val, b.val), ..a }
    }

    pub fn meet2(&self, a: Cell, b: Cell) -> Cell {
        debug_assert!(a.src == b.src && a.dst == b.dst);
        Cell { val: self.hom(a.src, a.dst).meet2(a.val, b.val), ..a }
    }

    pub fn join(&self, x: Obj, y: Obj, cells: impl IntoIterator<Item = Cell>) -> Cell {
        cells.into_iter().fold(self.bottom(x, y), |acc, c| self.join2(acc, c))
    }

    pub fn meet(&self, x: Obj, y: Obj, cells: impl IntoIterator<Item = Cell>) -> Cell {
        cells.into_iter().fold(self.top(x, y), |acc, c| self.meet2(acc, c))
    }

    /// `g . f` for `f: x -> y`, `g: y -> z`. Panics on mismatched ends.
    pub fn compose(&self, g: Cell, f: Cell) -> Cell {
        assert_eq!(f.dst, g.src, "composing cells with mismatched ends");
        let n = self.objects.len();
        let (x, y, z) = (f.src.0, f.dst.0, g.dst.0);
        let table = &self.compose[(x * n + y) * n + z];
        let val = table[g.val * self.homs[x * n + y].len() + f.val];
        Cell { src: f.src, dst: g.dst, val }
    }

    pub fn try_compose(&self, g: Cell, f: Cell) -> Result<Cell> {
        if f.dst != g.src {
            return Err(Error::Shape(format!(
                "cannot compose a cell out of `{}` after one into `{}`",
                self.object_name(g.src),
                self.object_name(f.dst)
            )));
        }
        Ok(self.compose(g, f))
    }

    /// `h . g . f`.
    pub fn compose3(&self, h: Cell, g: Cell, f: Cell) -> Cell {
        self.compose(h, self.compose(g, f))
    }

    pub fn has_involution(&self) -> bool {
        self.involution.is_some()
    }

    pub fn involute(&self, a: Cell) -> Result<Cell> {
        let inv = self.involution.as_ref().ok_or(Error::NoInvolution)?;
        let n = self.objects.len();
        Ok(Cell { src: a.dst, dst: a.src, val: inv[a.src.0 * n + a.dst.0][a.val] })
    }

    /// Largest `h: y -> z` with `h . f <= g`, for `f: x -> y`, `g: x -> z`.
    pub fn residual_right(&self, f: Cell, g: Cell) -> Result<Cell> {
        if f.src != g.src {
            return Err(Error::Shape("residual_right needs cells with a common source".into()));
        }
        let (y, z) = (f.dst, g.dst);
        Ok(self.join(y, z, self.cells(y, z).filter(|&h| self.leq(self.compose(h, f), g))))
    }

    /// Largest `h: x -> y` with `f . h <= g`, for `f: y -> z`, `g: x -> z`.
    pub fn residual_left(&self, f: Cell, g: Cell) -> Result<Cell> {
        if f.dst != g.dst {
            return Err(Error::Shape("residual_left needs cells with a common target".into()));
        }
        let (x, y) = (g.src, f.src);
        Ok(self.join(x, y, self.cells(x, y).filter(|&h| self.leq(self.compose(f, h), g))))
    }

    /// All 1-cells with a right adjoint, in (src, dst, forward) order.
    pub fn enumerate_maps(&self, symmetric_only: bool) -> Vec<MapCell> {
        let mut out = Vec::new();
        for x in self.objects() {
            for y in self.objects() {
                for f in self.cells(x, y) {
                    let mut adjoints = self.cells(y, x).filter(|&u| {
                        self.leq(self.identity(x), self.compose(u, f))
                            && self.leq(self.compose(f, u), self.identity(y))
                    });
                    let Some(adjoint) = adjoints.next() else { continue };
                    debug_assert!(adjoints.next().is_none(), "adjoints in a poset are unique");
                    let symmetric = self.involute(f).map(|i| i == adjoint).unwrap_or(false);
                    if symmetric_only && !symmetric {
                        continue;
                    }
                    out.push(MapCell { forward: f, adjoint, symmetric });
                }
            }
        }
        out
    }

    /// Every 1-cell is the join of the map forwards below it.
    pub fn is_map_dense(&self) -> bool {
        let maps = self.enumerate_maps(false);
        self.objects().all(|x| {
            self.objects().all(|y| {
                self.cells(x, y).all(|f| {
                    let below = maps
                        .iter()
                        .filter(|m| m.src() == x && m.dst() == y && self.leq(m.forward, f))
                        .map(|m| m.forward);
                    self.join(x, y, below) == f
                })
            })
        })
    }

    pub fn topology(&self) -> Option<&Topology> {
        self.topology.as_ref().map(|t| &t.space)
    }

    /// For `R(X)`: the open named by a cell.
    pub fn open_of(&self, c: Cell) -> Result<usize> {
        let t = self.topology.as_ref().ok_or(Error::NotTopological)?;
        Ok(t.opens[c.src.0 * self.objects.len() + c.dst.0][c.val])
    }

    /// For `R(X)`: the cell of `hom(x, y)` named by an open, if it lies below `x ∩ y`.
    pub fn cell_of_open(&self, x: Obj, y: Obj, open: usize) -> Result<Option<Cell>> {
        let t = self.topology.as_ref().ok_or(Error::NotTopological)?;
        let list = &t.opens[x.0 * self.objects.len() + y.0];
        Ok(list.iter().position(|&o| o == open).map(|val| Cell { src: x, dst: y, val }))
    }

    /// Checks unit and associativity laws, sup-preservation in each argument,
    /// and the involution laws.
    pub fn validate(&self) -> Report {
        const CAP: usize = 20;
        let mut report = Report::new();
        let push = |report: &mut Report, msg: String| {
            if report.violations.len() < CAP {
                report.push(msg);
            }
        };
        let objs: Vec<Obj> = self.objects().collect();
        for &x in &objs {
            for &y in &objs {
                for f in self.cells(x, y) {
                    if self.compose(self.identity(y), f) != f || self.compose(f, self.identity(x)) != f {
                        push(&mut report, format!("identity law fails at `{}`", self.describe(f)));
                    }
                }
            }
        }
        for &x in &objs {
            for &y in &objs {
                for &z in &objs {
                    for &w in &objs {
                        for f in self.cells(x, y) {
                            for g in self.cells(y, z) {
                                let gf = self.compose(g, f);
                                for h in self.cells(z, w) {
                                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                                        push(
                                            &mut report,
                                            format!(
                                                "associativity fails at {} . {} . {}",
                                                self.describe(h),
                                                self.describe(g),
                                                self.describe(f)
                                            ),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for &x in &objs {
            for &y in &objs {
                for &z in &objs {
                    for g in self.cells(y, z) {
                        if self.compose(g, self.bottom(x, y)) != self.bottom(x, z) {
                            push(&mut report, format!("{} . bottom is not bottom", self.describe(g)));
                        }
                        for f1 in self.cells(x, y) {
                            for f2 in self.cells(x, y) {
                                let lhs = self.compose(g, self.join2(f1, f2));
                                let rhs = self.join2(self.compose(g, f1), self.compose(g, f2));
                                if lhs != rhs {
                                    push(
                                        &mut report,
                                        format!(
                                            "postcomposition with {} does not preserve the join of {} and {}",
                                            self.describe(g),
                                            self.describe(f1),
                                            self.describe(f2)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                    for f in self.cells(x, y) {
                        if self.compose(self.bottom(y, z), f) != self.bottom(x, z) {
                            push(&mut report, format!("bottom . {} is not bottom", self.describe(f)));
                        }
                        for g1 in self.cells(y, z) {
                            for g2 in self.cells(y, z) {
                                let lhs = self.compose(self.join2(g1, g2), f);
                                let rhs = self.join2(self.compose(g1, f), self.compose(g2, f));
                                if lhs != rhs {
                                    push(
                                        &mut report,
                                        format!(
                                            "precomposition with {} does not preserve the join of {} and {}",
                                            self.describe(f),
                                            self.describe(g1),
                                            self.describe(g2)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        if self.has_involution() {
            let inv = |c: Cell| self.involute(c).expect("involution present");
            for &x in &objs {
                if inv(self.identity(x)) != self.identity(x) {
                    push(&mut report, format!("involution moves the identity of `{}`", self.object_name(x)));
                }
                for &y in &objs {
                    for a in self.cells(x, y) {
                        if inv(inv(a)) != a {
                            push(&mut report, format!("involution is not self-inverse at {}", self.describe(a)));
                        }
                        for b in self.cells(x, y) {
                            if self.leq(a, b) && !self.leq(inv(a), inv(b)) {
                                push(&mut report, format!("involution is not monotone at {}", self.describe(a)));
                            }
                        }
                        for &z in &objs {
                            for g in self.cells(y, z) {
                                if inv(self.compose(g, a)) != self.compose(inv(a), inv(g)) {
                                    push(
                                        &mut report,
                                        format!(
                                            "involution is not contravariant on {} . {}",
                                            self.describe(g),
                                            self.describe(a)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// `name: src -> dst`, for diagnostics.
    pub fn describe(&self, c: Cell) -> String {
        format!("`{}`: {} -> {}", self.cell_name(c), self.object_name(c.src), self.object_name(c.dst))
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
