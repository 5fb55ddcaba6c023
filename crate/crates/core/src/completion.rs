//! Presingletons, singletons and Cauchy completion.
//!
//! A presingleton of type `x` on `A` assigns to every `a` a cell
//! `sigma(a): x -> typ a` with `M(a, b) . sigma(b) <= sigma(a)`. It is a
//! singleton when the largest family satisfying the counit also satisfies
//! the unit.

use std::collections::HashMap;

use crate::error::{Error, Report, Result};
use crate::qcat::{QCategory, QFunctor, TypedSet};
use crate::quantaloid::{Cell, Obj};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presingleton {
    pub ty: Obj,
    pub sigma: Vec<Cell>,
}

impl Presingleton {
    pub fn new(a: &QCategory, ty: Obj, sigma: Vec<Cell>) -> Result<Self> {
        if sigma.len() != a.len() {
            return Err(Error::Shape("one value per element is required".into()));
        }
        for (i, c) in sigma.iter().enumerate() {
            if c.src != ty || c.dst != a.ty(i) {
                return Err(Error::Shape(format!("value at `{}` has the wrong type", a.name(i))));
            }
        }
        Ok(Self { ty, sigma })
    }

    /// The column `M(-, x)`.
    pub fn representable(a: &QCategory, x: usize) -> Self {
        Self { ty: a.ty(x), sigma: a.column(x) }
    }

    pub fn validate(&self, a: &QCategory) -> Report {
        let q = a.quantaloid();
        let mut report = Report::new();
        for i in 0..a.len() {
            for j in 0..a.len() {
                if !q.leq(q.compose(a.m(i, j), self.sigma[j]), self.sigma[i]) {
                    report.push(format!("presingleton inequality fails at (`{}`, `{}`)", a.name(i), a.name(j)));
                }
            }
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Singleton {
    pub base: Presingleton,
    pub adjoint: Vec<Cell>,
}

impl Singleton {
    pub fn ty(&self) -> Obj {
        self.base.ty
    }

    pub fn sigma(&self) -> &[Cell] {
        &self.base.sigma
    }
}

/// `adjoint(b) = meet over a of the right lift of M(a, b) through sigma(a)`.
pub fn right_adjoint_candidate(a: &QCategory, s: &Presingleton) -> Vec<Cell> {
    let q = a.quantaloid();
    (0..a.len())
        .map(|b| {
            let lifts = (0..a.len()).map(|i| q.residual_left(s.sigma[i], a.m(i, b)).expect("types match"));
            q.meet(a.ty(b), s.ty, lifts)
        })
        .collect()
}

fn unit_holds(a: &QCategory, s: &Presingleton, adjoint: &[Cell]) -> bool {
    let q = a.quantaloid();
    let total = q.join(s.ty, s.ty, (0..a.len()).map(|i| q.compose(adjoint[i], s.sigma[i])));
    q.leq(q.identity(s.ty), total)
}

fn counit_holds(a: &QCategory, s: &Presingleton, adjoint: &[Cell]) -> bool {
    let q = a.quantaloid();
    (0..a.len()).all(|i| (0..a.len()).all(|j| q.leq(q.compose(s.sigma[i], adjoint[j]), a.m(i, j))))
}

/// The singleton structure on `s`, if it has one.
pub fn as_singleton(a: &QCategory, s: &Presingleton) -> Option<Singleton> {
    if !s.validate(a).is_ok() {
        return None;
    }
    let adjoint = right_adjoint_candidate(a, s);
    unit_holds(a, s, &adjoint).then(|| Singleton { base: s.clone(), adjoint })
}

pub fn is_singleton(a: &QCategory, s: &Presingleton) -> bool {
    as_singleton(a, s).is_some()
}

/// A singleton whose right adjoint is its pointwise involute.
pub fn is_symmetric_singleton(a: &QCategory, s: &Presingleton) -> Result<bool> {
    let q = a.quantaloid();
    let Some(single) = as_singleton(a, s) else { return Ok(false) };
    for (i, &c) in s.sigma.iter().enumerate() {
        if q.involute(c)? != single.adjoint[i] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All (symmetric) singletons of type `ty`, found by a backtracking search
/// that checks the presingleton inequality, and in the symmetric case the
/// counit, as soon as both ends are assigned.
pub fn enumerate_singletons(a: &QCategory, ty: Obj, symmetric_only: bool) -> Result<Vec<Singleton>> {
    let q = a.quantaloid();
    if symmetric_only && !q.has_involution() {
        return Err(Error::NoInvolution);
    }
    let n = a.len();
    // optimistic bound on the unit contribution of a[k..]
    let mut rest_bound = vec![q.bottom(ty, ty); n + 1];
    for k in (0..n).rev() {
        let top = q.top(ty, a.ty(k));
        let adj_top = q.top(a.ty(k), ty);
        rest_bound[k] = q.join2(rest_bound[k + 1], q.compose(adj_top, top));
    }
    let mut search = Search {
        a,
        ty,
        symmetric: symmetric_only,
        rest_bound,
        sigma: Vec::with_capacity(n),
        out: Vec::new(),
    };
    search.go(q.bottom(ty, ty));
    Ok(search.out)
}

struct Search<'a> {
    a: &'a QCategory,
    ty: Obj,
    symmetric: bool,
    rest_bound: Vec<Cell>,
    sigma: Vec<Cell>,
    out: Vec<Singleton>,
}

impl Search<'_> {
    fn go(&mut self, unit_so_far: Cell) {
        let a = self.a;
        let q = a.quantaloid();
        let k = self.sigma.len();
        if !q.leq(q.identity(self.ty), q.join2(unit_so_far, self.rest_bound[k])) {
            return;
        }
        if k == a.len() {
            let base = Presingleton { ty: self.ty, sigma: self.sigma.clone() };
            if self.symmetric {
                let adjoint: Vec<Cell> = base.sigma.iter().map(|&c| q.involute(c).unwrap()).collect();
                if unit_holds(a, &base, &adjoint) {
                    debug_assert_eq!(adjoint, right_adjoint_candidate(a, &base));
                    self.out.push(Singleton { base, adjoint });
                }
            } else if let Some(s) = as_singleton(a, &base) {
                self.out.push(s);
            }
            return;
        }
        let tk = a.ty(k);
        for v in q.cells(self.ty, tk) {
            if !self.consistent(k, v) {
                continue;
            }
            let contribution = if self.symmetric {
                q.compose(q.involute(v).unwrap(), v)
            } else {
                q.compose(q.top(tk, self.ty), v)
            };
            self.sigma.push(v);
            self.go(q.join2(unit_so_far, contribution));
            self.sigma.pop();
        }
    }

    fn consistent(&self, k: usize, v: Cell) -> bool {
        let a = self.a;
        let q = a.quantaloid();
        if !q.leq(q.compose(a.m(k, k), v), v) {
            return false;
        }
        let inv_v = if self.symmetric { Some(q.involute(v).unwrap()) } else { None };
        if let Some(iv) = inv_v {
            if !q.leq(q.compose(v, iv), a.m(k, k)) {
                return false;
            }
        }
        for (j, &w) in self.sigma.iter().enumerate() {
            if !q.leq(q.compose(a.m(k, j), w), v) || !q.leq(q.compose(a.m(j, k), v), w) {
                return false;
            }
            if let Some(iv) = inv_v {
                let iw = q.involute(w).unwrap();
                if !q.leq(q.compose(v, iw), a.m(k, j)) || !q.leq(q.compose(w, iv), a.m(j, k)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Every (symmetric) singleton of every type, in object order.
pub fn all_singletons(a: &QCategory, symmetric_only: bool) -> Result<Vec<Singleton>> {
    let mut out = Vec::new();
    for x in a.quantaloid().objects() {
        out.extend(enumerate_singletons(a, x, symmetric_only)?);
    }
    Ok(out)
}

/// For `A` over `R(X)`: `sigma(b) = V ∧ M(b, a)`, of type `V` (an open below `typ a`).
pub fn restriction_singleton(a: &QCategory, elem: usize, v: Obj) -> Result<Presingleton> {
    let q = a.quantaloid();
    let space = q.topology().ok_or(Error::NotTopological)?;
    if !space.subset(v.0, a.ty(elem).0) {
        return Err(Error::Invalid(format!(
            "`{}` is not below the type of `{}`",
            q.object_name(v),
            a.name(elem)
        )));
    }
    let sigma = (0..a.len())
        .map(|b| {
            let w = space.inter(v.0, q.open_of(a.m(b, elem))?);
            Ok(q.cell_of_open(v, a.ty(b), w)?.expect("below both"))
        })
        .collect::<Result<Vec<_>>>()?;
    Presingleton::new(a, v, sigma)
}

/// For `A` over `R(X)`: `sigma(b) = join over i of M(b, a_i)`, read as a
/// presingleton of type `ty`.
pub fn glueing_singleton(a: &QCategory, family: &[usize], ty: Obj) -> Result<Presingleton> {
    let q = a.quantaloid();
    let space = q.topology().ok_or(Error::NotTopological)?;
    let sigma = (0..a.len())
        .map(|b| {
            let mut w = space.empty();
            for &ai in family {
                w = space.union(w, q.open_of(a.m(b, ai))?);
            }
            q.cell_of_open(ty, a.ty(b), w)?.ok_or_else(|| {
                Error::Invalid(format!("glued value at `{}` does not fit the type", a.name(b)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Presingleton::new(a, ty, sigma)
}

/// Every element whose column equals `s`.
pub fn is_representable(a: &QCategory, s: &Presingleton) -> Vec<usize> {
    a.elements_of_type(s.ty).filter(|&x| a.column(x) == s.sigma).collect()
}

/// Outcome of a completeness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub complete: bool,
    /// True when `A` is empty, so the verdict rests on the empty-presingleton case alone.
    pub vacuous: bool,
    /// Objects whose identity is bottom: there the empty family satisfies the unit.
    pub degenerate_types: Vec<Obj>,
    pub witness: Option<Singleton>,
}

pub fn completeness_report(a: &QCategory, symmetric: bool) -> Result<CompletenessReport> {
    let q = a.quantaloid();
    let degenerate_types = q.objects().filter(|&x| q.identity(x) == q.bottom(x, x)).collect();
    let mut witness = None;
    'types: for x in q.objects() {
        for s in enumerate_singletons(a, x, symmetric)? {
            if is_representable(a, &s.base).is_empty() {
                witness = Some(s);
                break 'types;
            }
        }
    }
    Ok(CompletenessReport { complete: witness.is_none(), vacuous: a.is_empty(), degenerate_types, witness })
}

pub fn is_complete(a: &QCategory) -> bool {
    completeness_report(a, false).expect("no involution needed").complete
}

pub fn is_symmetrically_complete(a: &QCategory) -> Result<bool> {
    Ok(completeness_report(a, true)?.complete)
}

/// `S(sigma, tau) = join over a of sigma*(a) . tau(a)`, a cell `typ tau -> typ sigma`.
pub fn singleton_hom(a: &QCategory, sigma: &Singleton, tau: &Presingleton) -> Cell {
    let q = a.quantaloid();
    q.join(tau.ty, sigma.ty(), (0..a.len()).map(|i| q.compose(sigma.adjoint[i], tau.sigma[i])))
}

/// `P(sigma, tau) = join of f with sigma . f <= tau pointwise`.
pub fn presingleton_hom(a: &QCategory, sigma: &Presingleton, tau: &Presingleton) -> Cell {
    let q = a.quantaloid();
    q.meet(
        tau.ty,
        sigma.ty,
        (0..a.len()).map(|i| q.residual_left(sigma.sigma[i], tau.sigma[i]).expect("types match")),
    )
}

#[derive(Debug, Clone)]
pub struct Completion {
    pub category: QCategory,
    pub yoneda: QFunctor,
    /// The singleton behind each element of `category`.
    pub singletons: Vec<Singleton>,
}

/// The category of (symmetric) singletons, with the Yoneda embedding.
/// Representable singletons are named after their least representative.
pub fn complete(a: &QCategory, symmetric: bool) -> Result<Completion> {
    let q = a.quantaloid().clone();
    let singletons = all_singletons(a, symmetric)?;
    let mut names = Vec::with_capacity(singletons.len());
    let mut taken: HashMap<String, ()> = a.names().iter().map(|n| (n.clone(), ())).collect();
    let mut counter: HashMap<Obj, usize> = HashMap::new();
    for s in &singletons {
        match is_representable(a, &s.base).first() {
            Some(&x) => names.push(a.name(x).to_string()),
            None => loop {
                let k = counter.entry(s.ty()).or_default();
                let candidate = format!("~{}#{}", q.object_name(s.ty()), k);
                *k += 1;
                if taken.insert(candidate.clone(), ()).is_none() {
                    names.push(candidate);
                    break;
                }
            },
        }
    }
    let types = singletons.iter().map(Singleton::ty).collect();
    let base = TypedSet::new(names, types)?;
    let category = QCategory::from_fn(q, base, |i, j| singleton_hom(a, &singletons[i], &singletons[j].base))?;
    let index: HashMap<&[Cell], usize> =
        singletons.iter().enumerate().map(|(i, s)| (s.sigma(), i)).collect();
    let map = (0..a.len())
        .map(|x| {
            index.get(a.column(x).as_slice()).copied().ok_or_else(|| {
                Error::NotRepresentable(format!("the column of `{}` among the singletons", a.name(x)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let yoneda = QFunctor::new(a.clone(), category.clone(), map)?;
    Ok(Completion { category, yoneda, singletons })
}

/// All presingletons of every type with the hom `P`. Exponential; meant for
/// small fixtures.
pub fn presingleton_qcat(a: &QCategory) -> Result<(QCategory, Vec<Presingleton>)> {
    let q = a.quantaloid().clone();
    let mut all = Vec::new();
    for x in q.objects() {
        let mut partial = Vec::with_capacity(a.len());
        enumerate_presingletons(a, x, &mut partial, &mut all);
    }
    let names = (0..all.len()).map(|i| format!("~p#{i}")).collect();
    let types = all.iter().map(|s: &Presingleton| s.ty).collect();
    let base = TypedSet::new(names, types)?;
    let cat = QCategory::from_fn(q, base, |i, j| presingleton_hom(a, &all[i], &all[j]))?;
    Ok((cat, all))
}

fn enumerate_presingletons(a: &QCategory, ty: Obj, partial: &mut Vec<Cell>, out: &mut Vec<Presingleton>) {
    let q = a.quantaloid();
    let k = partial.len();
    if k == a.len() {
        out.push(Presingleton { ty, sigma: partial.clone() });
        return;
    }
    for v in q.cells(ty, a.ty(k)) {
        let ok = q.leq(q.compose(a.m(k, k), v), v)
            && partial
                .iter()
                .enumerate()
                .all(|(j, &w)| q.leq(q.compose(a.m(k, j), w), v) && q.leq(q.compose(a.m(j, k), v), w));
        if ok {
            partial.push(v);
            enumerate_presingletons(a, ty, partial, out);
            partial.pop();
        }
    }
}

/// The counit of the candidate adjoint holds by construction; exposed for
/// tests that check it independently.
pub fn counit_of_candidate_holds(a: &QCategory, s: &Presingleton) -> bool {
    counit_holds(a, s, &right_adjoint_candidate(a, s))
}
