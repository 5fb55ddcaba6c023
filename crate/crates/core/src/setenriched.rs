//! Finite ordinary categories seen as categories enriched over the
//! one-object delooping of `Set`: profunctors and their coend composition,
//! idempotent splitting, and a brute-force search for adjoint presheaves.
//!
//! Convention: `M(a, b) = Hom(a, b)`, so presingletons are presheaves and a
//! profunctor `A -> C` is a set `φ(c, a)` contravariant in `c`, covariant in `a`.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Report, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identity: Vec<usize>,
    // compose[g * n + f] = g . f when dst f = src g
    compose: Vec<Option<usize>>,
}

impl FinCategory {
    /// Shape checks only; see [`FinCategory::validate`] for the laws.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identity: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self> {
        let n = arrows.len();
        if identity.len() != objects.len() {
            return Err(Error::Shape("one identity per object is required".into()));
        }
        for (x, &i) in identity.iter().enumerate() {
            if i >= n || arrows[i].src != x || arrows[i].dst != x {
                return Err(Error::Shape(format!("identity of `{}` is not an endomorphism of it", objects[x])));
            }
        }
        check_distinct(objects.iter(), "object")?;
        check_distinct(arrows.iter().map(|a| &a.name), "arrow")?;
        if arrows.iter().any(|a| a.src >= objects.len() || a.dst >= objects.len()) {
            return Err(Error::Shape("arrow endpoint out of range".into()));
        }
        let mut table = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                if arrows[f].dst != arrows[g].src {
                    continue;
                }
                let h = compose(g, f).ok_or_else(|| {
                    Error::Shape(format!("missing composite {} . {}", arrows[g].name, arrows[f].name))
                })?;
                if h >= n || arrows[h].src != arrows[f].src || arrows[h].dst != arrows[g].dst {
                    return Err(Error::Shape(format!(
                        "composite {} . {} has the wrong ends",
                        arrows[g].name, arrows[f].name
                    )));
                }
                table[g * n + f] = Some(h);
            }
        }
        Ok(Self { objects, arrows, identity, compose: table })
    }

    /// The subcategory of `FinSet` generated by functions between sets of
    /// the given sizes; `generators` are `(src, dst, values)`.
    pub fn concrete(sizes: &[usize], generators: &[(usize, usize, Vec<usize>)]) -> Result<Self> {
        let mut funcs: Vec<(usize, usize, Vec<usize>)> =
            sizes.iter().enumerate().map(|(x, &s)| (x, x, (0..s).collect())).collect();
        let mut index: HashMap<(usize, usize, Vec<usize>), usize> =
            funcs.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        for (src, dst, values) in generators {
            if values.len() != sizes[*src] || values.iter().any(|&v| v >= sizes[*dst]) {
                return Err(Error::Shape("generator is not a function between the given sets".into()));
            }
            let key = (*src, *dst, values.clone());
            if !index.contains_key(&key) {
                index.insert(key.clone(), funcs.len());
                funcs.push(key);
            }
        }
        let mut k = 0;
        while k < funcs.len() {
            for j in 0..funcs.len() {
                for (f, g) in [(k, j), (j, k)] {
                    let (fs, fd, fv) = funcs[f].clone();
                    let (gs, gd, gv) = funcs[g].clone();
                    if fd != gs {
                        continue;
                    }
                    let key = (fs, gd, fv.iter().map(|&v| gv[v]).collect::<Vec<_>>());
                    if !index.contains_key(&key) {
                        index.insert(key.clone(), funcs.len());
                        funcs.push(key);
                    }
                }
            }
            k += 1;
        }
        let objects = (0..sizes.len()).map(|x| format!("S{x}")).collect();
        let arrows = funcs
            .iter()
            .enumerate()
            .map(|(i, (s, d, _))| Arrow { name: if i < sizes.len() { format!("id{i}") } else { format!("m{i}") }, src: *s, dst: *d })
            .collect();
        let identity = (0..sizes.len()).collect();
        Self::new(objects, arrows, identity, |g, f| {
            let (fs, _, fv) = &funcs[f];
            let (_, gd, gv) = &funcs[g];
            index.get(&(*fs, *gd, fv.iter().map(|&v| gv[v]).collect::<Vec<_>>())).copied()
        })
    }

    /// The category of a preorder given by its relation matrix.
    pub fn preorder(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || leq(a, b) {
                    index.insert((a, b), arrows.len());
                    arrows.push(Arrow { name: format!("r{a}_{b}"), src: a, dst: b });
                }
            }
        }
        let identity = (0..n).map(|a| index[&(a, a)]).collect();
        let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.src, a.dst)).collect();
        Self::new((0..n).map(|a| format!("P{a}")).collect(), arrows, identity, |g, f| {
            index.get(&(ends[f].0, ends[g].1)).copied()
        })
    }

    /// One object, arrows `{id, e}` with `e . e = e`.
    pub fn e_idem() -> Self {
        let arrows = vec![Arrow { name: "id".into(), src: 0, dst: 0 }, Arrow { name: "e".into(), src: 0, dst: 0 }];
        Self::new(vec!["*".into()], arrows, vec![0], |g, f| Some(if g == 0 && f == 0 { 0 } else { 1 }))
            .expect("well shaped")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, m: usize) -> &Arrow {
        &self.arrows[m]
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects.iter().position(|o| o == name).ok_or_else(|| Error::UnknownObject(name.into()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        self.arrows.iter().position(|a| a.name == name).ok_or_else(|| Error::UnknownElement(name.into()))
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    /// `g . f`. Panics if the ends do not match.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.compose[g * self.arrows.len() + f].expect("composable arrows")
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(g * self.arrows.len() + f).copied().flatten()
    }

    pub fn hom(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&m| self.arrows[m].src == x && self.arrows[m].dst == y)
    }

    pub fn hom_into(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&m| self.arrows[m].dst == y)
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let n = self.arrows.len();
        for f in 0..n {
            let a = &self.arrows[f];
            if self.compose(f, self.identity[a.src]) != f || self.compose(self.identity[a.dst], f) != f {
                report.push(format!("unit law fails at `{}`", a.name));
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(gf) = self.try_compose(g, f) else { continue };
                for h in 0..n {
                    let Some(hg) = self.try_compose(h, g) else { continue };
                    if self.compose(h, gf) != self.compose(hg, f) {
                        report.push(format!(
                            "associativity fails at ({}, {}, {})",
                            self.arrows[h].name, self.arrows[g].name, self.arrows[f].name
                        ));
                    }
                }
            }
        }
        report
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&e| self.arrows[e].src == self.arrows[e].dst && self.compose(e, e) == e)
            .collect()
    }

    /// `(f, g)` with `g . f = id` and `f . g = id`, if `x` and `y` are isomorphic.
    pub fn find_iso(&self, x: usize, y: usize) -> Option<(usize, usize)> {
        self.hom(x, y).find_map(|f| {
            self.hom(y, x)
                .find(|&g| self.compose(g, f) == self.identity[x] && self.compose(f, g) == self.identity[y])
                .map(|g| (f, g))
        })
    }

    /// An idempotent `e: x -> x` splits if `e = s . r` with `r . s = id_y`.
    pub fn splits(&self, e: usize) -> bool {
        let x = self.arrows[e].src;
        (0..self.objects.len()).any(|y| {
            self.hom(x, y).any(|r| self.hom(y, x).any(|s| self.compose(s, r) == e && self.compose(r, s) == self.identity[y]))
        })
    }
}

fn check_distinct<'a>(names: impl Iterator<Item = &'a String>, what: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Duplicate(format!("{what} `{n}`")));
        }
    }
    Ok(())
}

pub fn is_cauchy_complete(c: &FinCategory) -> bool {
    c.idempotents().into_iter().all(|e| c.splits(e))
}

/// The identity: a finite category already is its own underlying category.
pub fn underlying_category(c: &FinCategory) -> FinCategory {
    c.clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub dom: Arc<FinCategory>,
    pub cod: Arc<FinCategory>,
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

impl FinFunctor {
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let (c, d) = (&*self.dom, &*self.cod);
        if self.objects.len() != c.num_objects() || self.arrows.len() != c.num_arrows() {
            report.push("functor tables have the wrong shape");
            return report;
        }
        for (m, a) in c.arrows().iter().enumerate() {
            let fm = d.arrow(self.arrows[m]);
            if fm.src != self.objects[a.src] || fm.dst != self.objects[a.dst] {
                report.push(format!("`{}` is not sent between the images of its ends", a.name));
            }
        }
        if !report.is_ok() {
            return report;
        }
        for x in 0..c.num_objects() {
            if self.arrows[c.identity(x)] != d.identity(self.objects[x]) {
                report.push(format!("identity of `{}` is not preserved", c.objects()[x]));
            }
        }
        for g in 0..c.num_arrows() {
            for f in 0..c.num_arrows() {
                if let Some(gf) = c.try_compose(g, f) {
                    if self.arrows[gf] != d.compose(self.arrows[g], self.arrows[f]) {
                        report.push(format!("composite {} . {} is not preserved", c.arrow(g).name, c.arrow(f).name));
                    }
                }
            }
        }
        report
    }

    /// `self . first`.
    pub fn after(&self, first: &FinFunctor) -> FinFunctor {
        FinFunctor {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            objects: first.objects.iter().map(|&x| self.objects[x]).collect(),
            arrows: first.arrows.iter().map(|&m| self.arrows[m]).collect(),
        }
    }

    pub fn is_fully_faithful(&self) -> bool {
        let (c, d) = (&*self.dom, &*self.cod);
        (0..c.num_objects()).all(|x| {
            (0..c.num_objects()).all(|y| {
                let mut image: Vec<usize> = c.hom(x, y).map(|m| self.arrows[m]).collect();
                image.sort_unstable();
                image.dedup();
                image.len() == c.hom(x, y).count() && image.len() == d.hom(self.objects[x], self.objects[y]).count()
            })
        })
    }

    pub fn is_essentially_surjective(&self) -> bool {
        let d = &*self.cod;
        (0..d.num_objects()).all(|z| self.objects.iter().any(|&fx| d.find_iso(fx, z).is_some()))
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_fully_faithful() && self.is_essentially_surjective()
    }
}

/// Objects are the idempotents; `hom(e, f) = {m : f . m . e = m}`. Returns
/// the envelope and the embedding `x -> id_x`.
pub fn karoubi_envelope(c: &Arc<FinCategory>) -> Result<(Arc<FinCategory>, FinFunctor)> {
    let idem = c.idempotents();
    let mut arrows = Vec::new();
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut underlying = Vec::new();
    for (i, &e) in idem.iter().enumerate() {
        for (j, &f) in idem.iter().enumerate() {
            let (x, y) = (c.arrow(e).src, c.arrow(f).src);
            for m in c.hom(x, y) {
                if c.compose(f, c.compose(m, e)) == m {
                    index.insert((i, j, m), arrows.len());
                    underlying.push(m);
                    arrows.push(Arrow {
                        name: format!("{}[{},{}]", c.arrow(m).name, c.arrow(e).name, c.arrow(f).name),
                        src: i,
                        dst: j,
                    });
                }
            }
        }
    }
    let objects = idem.iter().map(|&e| c.arrow(e).name.clone()).collect();
    let identity = idem.iter().enumerate().map(|(i, &e)| index[&(i, i, e)]).collect();
    let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.src, a.dst)).collect();
    let kar = FinCategory::new(objects, arrows, identity, |g, f| {
        index.get(&(ends[f].0, ends[g].1, c.compose(underlying[g], underlying[f]))).copied()
    })?;
    let kar = Arc::new(kar);
    let position = |e: usize| idem.iter().position(|&i| i == e).expect("identities are idempotent");
    let objects: Vec<usize> = (0..c.num_objects()).map(|x| position(c.identity(x))).collect();
    let emb_arrows = (0..c.num_arrows())
        .map(|m| {
            let a = c.arrow(m);
            index[&(objects[a.src], objects[a.dst], m)]
        })
        .collect();
    let embedding = FinFunctor { dom: c.clone(), cod: kar.clone(), objects, arrows: emb_arrows };
    Ok((kar, embedding))
}

/// Every functor `dom -> cod`, by backtracking over object images and then
/// arrow images.
pub fn enumerate_functors(dom: &Arc<FinCategory>, cod: &Arc<FinCategory>) -> Vec<FinFunctor> {
    let (c, d) = (&**dom, &**cod);
    let mut out = Vec::new();
    let mut objects = Vec::with_capacity(c.num_objects());
    fn objects_go(
        c: &FinCategory,
        d: &FinCategory,
        objects: &mut Vec<usize>,
        found: &mut dyn FnMut(&[usize]),
    ) {
        if objects.len() == c.num_objects() {
            found(objects);
            return;
        }
        for z in 0..d.num_objects() {
            objects.push(z);
            objects_go(c, d, objects, found);
            objects.pop();
        }
    }
    let mut found = |objs: &[usize]| {
        let mut arrows = Vec::with_capacity(c.num_arrows());
        arrows_go(c, d, objs, &mut arrows, &mut |arr: &[usize]| {
            out.push(FinFunctor { dom: dom.clone(), cod: cod.clone(), objects: objs.to_vec(), arrows: arr.to_vec() });
        });
    };
    objects_go(c, d, &mut objects, &mut found);
    out
}

fn arrows_go(c: &FinCategory, d: &FinCategory, objs: &[usize], arrows: &mut Vec<usize>, found: &mut dyn FnMut(&[usize])) {
    let k = arrows.len();
    if k == c.num_arrows() {
        found(arrows);
        return;
    }
    let a = c.arrow(k);
    let candidates: Vec<usize> = if c.identity(a.src) == k {
        vec![d.identity(objs[a.src])]
    } else {
        d.hom(objs[a.src], objs[a.dst]).collect()
    };
    for v in candidates {
        arrows.push(v);
        let ok = (0..=k).all(|f| {
            (0..=k).all(|g| match c.try_compose(g, f) {
                Some(gf) if gf <= k && (f == k || g == k || gf == k) => arrows[gf] == d.compose(arrows[g], arrows[f]),
                _ => true,
            })
        });
        if ok {
            arrows_go(c, d, objs, arrows, found);
        }
        arrows.pop();
    }
}

/// Whether two parallel functors are naturally isomorphic.
pub fn naturally_isomorphic(f: &FinFunctor, g: &FinFunctor) -> bool {
    let (c, d) = (&*f.dom, &*f.cod);
    let n = c.num_objects();
    let mut comps: Vec<usize> = Vec::with_capacity(n);
    fn go(f: &FinFunctor, g: &FinFunctor, c: &FinCategory, d: &FinCategory, comps: &mut Vec<usize>) -> bool {
        let x = comps.len();
        if x == c.num_objects() {
            return true;
        }
        let (fx, gx) = (f.objects[x], g.objects[x]);
        let isos: Vec<usize> = d
            .hom(fx, gx)
            .filter(|&t| d.hom(gx, fx).any(|u| d.compose(u, t) == d.identity(fx) && d.compose(t, u) == d.identity(gx)))
            .collect();
        for t in isos {
            comps.push(t);
            let natural = c.arrows().iter().enumerate().all(|(m, a)| {
                if a.src > x || a.dst > x {
                    return true;
                }
                d.compose(comps[a.dst], f.arrows[m]) == d.compose(g.arrows[m], comps[a.src])
            });
            if natural && go(f, g, c, d, comps) {
                return true;
            }
            comps.pop();
        }
        false
    }
    go(f, g, c, d, &mut comps)
}

/// Counts from [`free_and_underlying_adjunction_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionCounts {
    pub functors_from_c: usize,
    pub functors_from_envelope: usize,
    pub iso_classes_from_envelope: usize,
    /// Every functor `C -> D` extends along the embedding.
    pub surjective: bool,
    /// Extensions of the same functor are naturally isomorphic.
    pub unique_up_to_iso: bool,
}

impl AdjunctionCounts {
    pub fn holds(&self) -> bool {
        self.surjective && self.unique_up_to_iso
    }
}

/// For Cauchy-complete `D`: restriction along `C -> Kar(C)` is onto the
/// functors `C -> D`, and its fibers are single isomorphism classes.
pub fn free_and_underlying_adjunction_check(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Result<AdjunctionCounts> {
    let (kar, embedding) = karoubi_envelope(c)?;
    let from_c = enumerate_functors(c, d);
    let from_kar = enumerate_functors(&kar, d);
    let mut by_restriction: HashMap<(Vec<usize>, Vec<usize>), Vec<usize>> = HashMap::new();
    for (i, g) in from_kar.iter().enumerate() {
        let r = g.after(&embedding);
        by_restriction.entry((r.objects, r.arrows)).or_default().push(i);
    }
    let surjective = from_c.iter().all(|f| by_restriction.contains_key(&(f.objects.clone(), f.arrows.clone())));
    let unique_up_to_iso = by_restriction
        .values()
        .all(|lifts| lifts.iter().all(|&i| naturally_isomorphic(&from_kar[lifts[0]], &from_kar[i])));
    let mut classes: Vec<usize> = Vec::new();
    for i in 0..from_kar.len() {
        if !classes.iter().any(|&j| naturally_isomorphic(&from_kar[j], &from_kar[i])) {
            classes.push(i);
        }
    }
    Ok(AdjunctionCounts {
        functors_from_c: from_c.len(),
        functors_from_envelope: from_kar.len(),
        iso_classes_from_envelope: classes.len(),
        surjective,
        unique_up_to_iso,
    })
}

/// A presheaf of finite sets: `act[m]` maps `P(dst m)` to `P(src m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPresheaf {
    pub sizes: Vec<usize>,
    pub act: Vec<Vec<usize>>,
}

impl SetPresheaf {
    /// `P_e(a) = {m: a -> x : e . m = m}` for an idempotent `e: x -> x`.
    pub fn of_idempotent(c: &FinCategory, e: usize) -> Self {
        let x = c.arrow(e).src;
        let elems: Vec<Vec<usize>> =
            (0..c.num_objects()).map(|a| c.hom(a, x).filter(|&m| c.compose(e, m) == m).collect()).collect();
        let act = c
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                elems[a.dst]
                    .iter()
                    .map(|&m| elems[a.src].iter().position(|&v| v == c.compose(m, k)).expect("closed under precomposition"))
                    .collect()
            })
            .collect();
        Self { sizes: elems.iter().map(Vec::len).collect(), act }
    }

    pub fn max_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn is_isomorphic(&self, other: &SetPresheaf, c: &FinCategory) -> bool {
        if self.sizes != other.sizes {
            return false;
        }
        let vars: Vec<(usize, usize)> =
            (0..self.sizes.len()).flat_map(|a| (0..self.sizes[a]).map(move |i| (a, i))).collect();
        let mut phi: Vec<Vec<Option<usize>>> = self.sizes.iter().map(|&s| vec![None; s]).collect();
        let mut used: Vec<Vec<bool>> = self.sizes.iter().map(|&s| vec![false; s]).collect();
        fn go(
            s: &SetPresheaf,
            o: &SetPresheaf,
            c: &FinCategory,
            vars: &[(usize, usize)],
            k: usize,
            phi: &mut Vec<Vec<Option<usize>>>,
            used: &mut Vec<Vec<bool>>,
        ) -> bool {
            let Some(&(a, i)) = vars.get(k) else { return true };
            for v in 0..o.sizes[a] {
                if used[a][v] {
                    continue;
                }
                phi[a][i] = Some(v);
                let ok = c.arrows().iter().enumerate().all(|(m, arr)| {
                    (0..s.sizes[arr.dst]).all(|y| match (phi[arr.dst][y], phi[arr.src][s.act[m][y]]) {
                        (Some(py), Some(pr)) => o.act[m][py] == pr,
                        _ => true,
                    })
                });
                if ok {
                    used[a][v] = true;
                    if go(s, o, c, vars, k + 1, phi, used) {
                        return true;
                    }
                    used[a][v] = false;
                }
                phi[a][i] = None;
            }
            false
        }
        go(self, other, c, &vars, 0, &mut phi, &mut used)
    }
}

/// An adjoint presheaf found by the oracle, with the idempotent `ν0(y0)` it
/// splits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSingleton {
    pub presheaf: SetPresheaf,
    pub idempotent: usize,
}

/// Presheaves with all value sets of size at most `bound` that are retracts
/// of representables, found by enumerating quotients of every `Hom(-, d)`
/// and searching for `ν0: P -> Hom(-, d')` and `y0 in P(d')` with
/// `P(ν0(x))(y0) = x`. Deduplicated up to isomorphism.
pub fn singleton_oracle(c: &FinCategory, bound: usize) -> Vec<OracleSingleton> {
    let mut out: Vec<OracleSingleton> = Vec::new();
    if bound == 0 {
        return out;
    }
    for d in 0..c.num_objects() {
        for (p, class_of) in cyclic_quotients(c, d, bound) {
            if out.iter().any(|s| s.presheaf.is_isomorphic(&p, c)) {
                continue;
            }
            if let Some(e) = splitting_idempotent(c, d, &p, &class_of) {
                out.push(OracleSingleton { presheaf: p, idempotent: e });
            }
        }
    }
    out
}

// class_of[m] for m in Hom(-, d): its element index in P(src m)
fn splitting_idempotent(c: &FinCategory, d: usize, p: &SetPresheaf, class_of: &[Option<usize>]) -> Option<usize> {
    // representatives: one arrow into d per element of P
    let reps: Vec<Vec<usize>> = (0..c.num_objects())
        .map(|a| {
            (0..p.sizes[a])
                .map(|i| c.hom(a, d).find(|&m| class_of[m] == Some(i)).expect("quotient is onto"))
                .collect()
        })
        .collect();
    for d2 in 0..c.num_objects() {
        for h in c.hom(d, d2) {
            // ν0([m]) = h . m must be well defined
            let well_defined = c.arrows().iter().enumerate().filter(|(_, a)| a.dst == d).all(|(m, a)| {
                let i = class_of[m].unwrap();
                c.compose(h, m) == c.compose(h, reps[a.src][i])
            });
            if !well_defined {
                continue;
            }
            let nu0 = |a: usize, i: usize| c.compose(h, reps[a][i]);
            for y0 in 0..p.sizes[d2] {
                let retract = (0..c.num_objects()).all(|a| (0..p.sizes[a]).all(|i| p.act[nu0(a, i)][y0] == i));
                if retract {
                    return Some(nu0(d2, y0));
                }
            }
        }
    }
    None
}

/// Quotients of `Hom(-, d)` by congruences with at most `bound` classes over
/// each object.
fn cyclic_quotients(c: &FinCategory, d: usize, bound: usize) -> Vec<(SetPresheaf, Vec<Option<usize>>)> {
    let into_d: Vec<usize> = (0..c.num_arrows()).filter(|&m| c.arrow(m).dst == d).collect();
    let mut out = Vec::new();
    let mut class_of: Vec<Option<usize>> = vec![None; c.num_arrows()];
    let mut counts = vec![0usize; c.num_objects()];
    fn go(
        c: &FinCategory,
        into_d: &[usize],
        k: usize,
        bound: usize,
        class_of: &mut Vec<Option<usize>>,
        counts: &mut Vec<usize>,
        out: &mut Vec<(SetPresheaf, Vec<Option<usize>>)>,
    ) {
        if k == into_d.len() {
            let act = c
                .arrows()
                .iter()
                .enumerate()
                .map(|(j, a)| {
                    let mut row = vec![0; counts[a.dst]];
                    for &m in into_d.iter().filter(|&&m| c.arrow(m).src == a.dst) {
                        row[class_of[m].unwrap()] = class_of[c.compose(m, j)].unwrap();
                    }
                    row
                })
                .collect();
            out.push((SetPresheaf { sizes: counts.clone(), act }, class_of.clone()));
            return;
        }
        let m = into_d[k];
        let a = c.arrow(m).src;
        let limit = (counts[a] + 1).min(bound);
        for cls in 0..limit {
            let fresh = cls == counts[a];
            class_of[m] = Some(cls);
            if fresh {
                counts[a] += 1;
            }
            if congruent(c, into_d, class_of) {
                go(c, into_d, k + 1, bound, class_of, counts, out);
            }
            if fresh {
                counts[a] -= 1;
            }
            class_of[m] = None;
        }
    }
    go(c, &into_d, 0, bound, &mut class_of, &mut counts, &mut out);
    out
}

// m ~ m' implies m . j ~ m' . j, on the assigned part
fn congruent(c: &FinCategory, into_d: &[usize], class_of: &[Option<usize>]) -> bool {
    for &m in into_d {
        for &m2 in into_d {
            if m >= m2 || c.arrow(m).src != c.arrow(m2).src || class_of[m].is_none() || class_of[m] != class_of[m2] {
                continue;
            }
            for j in c.hom_into(c.arrow(m).src) {
                let (x, y) = (class_of[c.compose(m, j)], class_of[c.compose(m2, j)]);
                if let (Some(x), Some(y)) = (x, y) {
                    if x != y {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A profunctor `dom -> cod`: elements over pairs `(c, a)`, acted on by
/// `cod` contravariantly and by `dom` covariantly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profunctor {
    pub dom: Arc<FinCategory>,
    pub cod: Arc<FinCategory>,
    names: Vec<String>,
    over: Vec<(usize, usize)>,
    // cod_act[m][x] for m: c' -> c and x over (c, a)
    cod_act: Vec<Vec<Option<usize>>>,
    // dom_act[n][x] for n: a -> a' and x over (c, a)
    dom_act: Vec<Vec<Option<usize>>>,
}

impl Profunctor {
    pub fn new(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        names: Vec<String>,
        over: Vec<(usize, usize)>,
        cod_action: impl Fn(usize, usize) -> Option<usize>,
        dom_action: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self> {
        if names.len() != over.len() {
            return Err(Error::Shape("one position per element is required".into()));
        }
        check_distinct(names.iter(), "element")?;
        let n = names.len();
        let mut cod_act = vec![vec![None; n]; cod.num_arrows()];
        for (m, arr) in cod.arrows().iter().enumerate() {
            for x in (0..n).filter(|&x| over[x].0 == arr.dst) {
                let y = cod_action(m, x).ok_or_else(|| Error::Shape(format!("`{}` . `{}` is missing", names[x], arr.name)))?;
                if y >= n || over[y] != (arr.src, over[x].1) {
                    return Err(Error::Shape(format!("`{}` . `{}` lands in the wrong set", names[x], arr.name)));
                }
                cod_act[m][x] = Some(y);
            }
        }
        let mut dom_act = vec![vec![None; n]; dom.num_arrows()];
        for (m, arr) in dom.arrows().iter().enumerate() {
            for x in (0..n).filter(|&x| over[x].1 == arr.src) {
                let y = dom_action(m, x).ok_or_else(|| Error::Shape(format!("`{}` . `{}` is missing", arr.name, names[x])))?;
                if y >= n || over[y] != (over[x].0, arr.dst) {
                    return Err(Error::Shape(format!("`{}` . `{}` lands in the wrong set", arr.name, names[x])));
                }
                dom_act[m][x] = Some(y);
            }
        }
        Ok(Self { dom, cod, names, over, cod_act, dom_act })
    }

    /// `Hom(c, a)` as a profunctor `C -> C`.
    pub fn hom(c: &Arc<FinCategory>) -> Self {
        let names = c.arrows().iter().map(|a| a.name.clone()).collect();
        let over = c.arrows().iter().map(|a| (a.src, a.dst)).collect();
        Self::new(c.clone(), c.clone(), names, over, |m, x| c.try_compose(x, m), |n, x| c.try_compose(n, x))
            .expect("hom is well shaped")
    }

    /// `φ(c, a) = {m: c -> x : e . m = m} × {n: y -> a : n . f = n}` for
    /// idempotents `e: x -> x` and `f: y -> y`.
    pub fn from_idempotents(c: &Arc<FinCategory>, e: usize, f: usize) -> Self {
        let (x, y) = (c.arrow(e).src, c.arrow(f).src);
        let mut names = Vec::new();
        let mut over = Vec::new();
        let mut parts = Vec::new();
        let mut index = HashMap::new();
        for m in c.arrows().iter().enumerate().filter(|(_, a)| a.dst == x).map(|(i, _)| i) {
            if c.compose(e, m) != m {
                continue;
            }
            for n in c.arrows().iter().enumerate().filter(|(_, a)| a.src == y).map(|(i, _)| i) {
                if c.compose(n, f) != n {
                    continue;
                }
                index.insert((m, n), names.len());
                names.push(format!("{}*{}", c.arrow(m).name, c.arrow(n).name));
                over.push((c.arrow(m).src, c.arrow(n).dst));
                parts.push((m, n));
            }
        }
        let cod_action = |k: usize, i: usize| {
            let (m, n) = parts[i];
            index.get(&(c.compose(m, k), n)).copied()
        };
        let dom_action = |l: usize, i: usize| {
            let (m, n) = parts[i];
            index.get(&(m, c.compose(l, n))).copied()
        };
        Self::new(c.clone(), c.clone(), names, over, cod_action, dom_action).expect("closed under the actions")
    }

    pub fn empty(dom: Arc<FinCategory>, cod: Arc<FinCategory>) -> Self {
        Self::new(dom, cod, Vec::new(), Vec::new(), |_, _| None, |_, _| None).expect("empty")
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

    pub fn over(&self, x: usize) -> (usize, usize) {
        self.over[x]
    }

    pub fn cardinality(&self, c: usize, a: usize) -> usize {
        self.over.iter().filter(|&&p| p == (c, a)).count()
    }

    pub fn cod_act(&self, m: usize, x: usize) -> usize {
        self.cod_act[m][x].expect("action defined")
    }

    pub fn dom_act(&self, n: usize, x: usize) -> usize {
        self.dom_act[n][x].expect("action defined")
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let (c, a) = (&*self.cod, &*self.dom);
        for x in 0..self.len() {
            let (cx, ax) = self.over[x];
            if self.cod_act(c.identity(cx), x) != x || self.dom_act(a.identity(ax), x) != x {
                report.push(format!("identities do not act trivially on `{}`", self.names[x]));
            }
            for m in c.hom_into(cx) {
                for m2 in c.hom_into(c.arrow(m).src) {
                    if self.cod_act(m2, self.cod_act(m, x)) != self.cod_act(c.compose(m, m2), x) {
                        report.push(format!("codomain action is not functorial at `{}`", self.names[x]));
                    }
                }
                for n in (0..a.num_arrows()).filter(|&n| a.arrow(n).src == ax) {
                    if self.dom_act(n, self.cod_act(m, x)) != self.cod_act(m, self.dom_act(n, x)) {
                        report.push(format!("actions do not commute at `{}`", self.names[x]));
                    }
                }
            }
            for n in (0..a.num_arrows()).filter(|&n| a.arrow(n).src == ax) {
                for n2 in (0..a.num_arrows()).filter(|&k| a.arrow(k).src == a.arrow(n).dst) {
                    if self.dom_act(n2, self.dom_act(n, x)) != self.dom_act(a.compose(n2, n), x) {
                        report.push(format!("domain action is not functorial at `{}`", self.names[x]));
                    }
                }
            }
        }
        report
    }
}

/// `(ψ φ)(d, a)`: pairs `(y, x)` with `y in ψ(d, c)`, `x in φ(c, a)`, glued
/// along `(m . y, x) ~ (y, x . m)`. Classes are named `[y|x]` after their
/// least member.
pub fn compose_profunctors(psi: &Profunctor, phi: &Profunctor) -> Result<Profunctor> {
    if *phi.cod != *psi.dom {
        return Err(Error::Shape("codomain of the first profunctor must be the domain of the second".into()));
    }
    let mid = &*phi.cod;
    // all pairs, in lexicographic order (y, x)
    let mut pairs = Vec::new();
    for y in 0..psi.len() {
        for x in 0..phi.len() {
            if psi.over[y].1 == phi.over[x].0 {
                pairs.push((y, x));
            }
        }
    }
    let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut uf = UnionFind::new(pairs.len());
    // generators: for y in ψ(d, c), m: c -> c', x' in φ(c', a):
    // (ψ_dom(m)(y), x') ~ (y, φ_cod(m)(x'))
    for y in 0..psi.len() {
        let c = psi.over[y].1;
        for m in (0..mid.num_arrows()).filter(|&m| mid.arrow(m).src == c) {
            let c2 = mid.arrow(m).dst;
            let my = psi.dom_act(m, y);
            for x2 in (0..phi.len()).filter(|&x| phi.over[x].0 == c2) {
                let xm = phi.cod_act(m, x2);
                uf.union(pos[&(my, x2)], pos[&(y, xm)]);
            }
        }
    }
    let mut class_index: HashMap<usize, usize> = HashMap::new();
    let mut names = Vec::new();
    let mut over = Vec::new();
    let mut member_of = vec![0; pairs.len()];
    for (i, &(y, x)) in pairs.iter().enumerate() {
        let root = uf.find(i);
        let k = *class_index.entry(root).or_insert_with(|| {
            names.push(format!("[{}|{}]", psi.names[y], phi.names[x]));
            over.push((psi.over[y].0, phi.over[x].1));
            names.len() - 1
        });
        member_of[i] = k;
    }
    let first_member: Vec<usize> = {
        let mut v = vec![usize::MAX; names.len()];
        for (i, &k) in member_of.iter().enumerate() {
            if v[k] == usize::MAX {
                v[k] = i;
            }
        }
        v
    };
    let cod_action = |m: usize, k: usize| {
        let (y, x) = pairs[first_member[k]];
        Some(member_of[pos[&(psi.cod_act(m, y), x)]])
    };
    let dom_action = |n: usize, k: usize| {
        let (y, x) = pairs[first_member[k]];
        Some(member_of[pos[&(y, phi.dom_act(n, x))]])
    };
    Profunctor::new(phi.dom.clone(), psi.cod.clone(), names, over, cod_action, dom_action)
}

/// Number of zigzag classes over each `(d, a)`, found by breadth-first search
/// on the generating relation; an independent check of [`compose_profunctors`].
pub fn zigzag_class_counts(psi: &Profunctor, phi: &Profunctor) -> HashMap<(usize, usize), usize> {
    let mid = &*phi.cod;
    let mut nodes = Vec::new();
    for y in 0..psi.len() {
        for x in 0..phi.len() {
            if psi.over[y].1 == phi.over[x].0 {
                nodes.push((y, x));
            }
        }
    }
    let mut adj: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for &(y, x) in &nodes {
        adj.entry((y, x)).or_default();
    }
    for &(y, x) in &nodes {
        let c = psi.over[y].1;
        for m in mid.hom_into(c) {
            // (y, x) is linked to (y0, x . m) whenever m . y0 = y
            let c0 = mid.arrow(m).src;
            for y0 in (0..psi.len()).filter(|&v| psi.over[v] == (psi.over[y].0, c0)) {
                if psi.dom_act(m, y0) == y {
                    let other = (y0, phi.cod_act(m, x));
                    adj.get_mut(&(y, x)).unwrap().push(other);
                    adj.get_mut(&other).unwrap().push((y, x));
                }
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut counts = HashMap::new();
    for &start in &nodes {
        if !seen.insert(start) {
            continue;
        }
        *counts.entry((psi.over[start.0].0, phi.over[start.1].1)).or_insert(0) += 1;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    counts
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // keeps the smaller index as root so classes are named after their least member
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}
