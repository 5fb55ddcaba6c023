//! The Grothendieck construction on presheaves over maps, the fiber functor
//! on complete Q-categories, the hom-set bijection between them, fixed-point
//! criteria and a brute-force sheafification on finite spaces.

use std::collections::HashMap;
use std::sync::Arc;

use crate::completion::{complete, enumerate_singletons};
use crate::error::{Error, Report, Result};
use crate::presheaf::{Fiber, FiberKind, MapSite, OplaxTransform, Presheaf};
use crate::qcat::{disjoint_union_names, QCategory, QFunctor, TypedSet};
use crate::quantaloid::{Cell, MapCell, Obj, Quantaloid};

/// `N(a, b)` is the join of the maps `γ: typ b -> typ a` with `b <= F(γ)(a)`.
pub fn sigma_construct(f: &Presheaf) -> Result<QCategory> {
    f.validate().into_result()?;
    let q = f.quantaloid().clone();
    let site = f.site();
    let (names, types) = disjoint_union_names(f);
    let offsets = f.offsets();
    let local = |i: usize| i - offsets[types[i].0];
    let n = names.len();
    let mut hom = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (ta, tb) = (types[i], types[j]);
            let fiber_b = f.fiber(tb);
            let witnesses = site
                .between(tb, ta)
                .filter(|&g| fiber_b.leq(local(j), f.act(g, local(i))))
                .map(|g| site.cell(g).forward);
            hom.push(q.join(tb, ta, witnesses));
        }
    }
    QCategory::new(q, TypedSet::new(names, types)?, hom)
}

/// The functor `σF -> σG` induced by an oplax transformation.
pub fn sigma_on_morphism(alpha: &OplaxTransform, from: &Presheaf, to: &Presheaf) -> Result<QFunctor> {
    alpha.validate(from, to).into_result()?;
    let (dom, cod) = (sigma_construct(from)?, sigma_construct(to)?);
    let (off_f, off_g) = (from.offsets(), to.offsets());
    let map = (0..from.fibers().len())
        .flat_map(|x| alpha.components[x].iter().map(move |&v| (x, v)))
        .map(|(x, v)| off_g[x] + v)
        .collect();
    debug_assert_eq!(off_f[off_f.len() - 1], dom.len());
    QFunctor::new(dom, cod, map)
}

/// The fiber presheaf of a complete Q-category, with the bookkeeping that
/// relates its fiber elements to elements of the category.
#[derive(Debug, Clone)]
pub struct FiberView {
    pub presheaf: Presheaf,
    /// `reps[x][c]`: the least element of class `c` over `x`.
    pub reps: Vec<Vec<usize>>,
    /// Class of each element within the fiber over its type.
    pub class_of: Vec<usize>,
}

/// The representative of the singleton `M(-, a) . forward(γ)`.
pub fn action_element(a: &QCategory, elem: usize, gamma: MapCell) -> Result<usize> {
    let q = a.quantaloid();
    if gamma.dst() != a.ty(elem) {
        return Err(Error::Shape(format!("map does not land in the type of `{}`", a.name(elem))));
    }
    let column: Vec<Cell> = (0..a.len()).map(|b| q.compose(a.m(b, elem), gamma.forward)).collect();
    a.elements_of_type(gamma.src())
        .find(|&x| a.column(x) == column)
        .ok_or_else(|| {
            Error::NotRepresentable(format!("`{}` restricted along {}", a.name(elem), q.describe(gamma.forward)))
        })
}

/// Fibers of `a` over every object, quotiented by isomorphism, with the
/// action `a . γ`. The symmetric variant uses symmetric maps and set fibers.
pub fn fibers(a: &QCategory, symmetric: bool) -> Result<FiberView> {
    let q = a.quantaloid().clone();
    let site = Arc::new(MapSite::new(q.clone(), symmetric)?);
    let mut class_of = vec![usize::MAX; a.len()];
    let mut reps: Vec<Vec<usize>> = vec![Vec::new(); q.num_objects()];
    let mut by_column: HashMap<Vec<Cell>, usize> = HashMap::new();
    for (e, class) in class_of.iter_mut().enumerate() {
        let x = a.ty(e).0;
        let next = reps[x].len();
        let c = *by_column.entry(a.column(e)).or_insert(next);
        if c == next {
            reps[x].push(e);
        }
        *class = c;
    }
    let fibers = q
        .objects()
        .map(|x| {
            let r = &reps[x.0];
            let names = r.iter().map(|&e| a.name(e).to_string()).collect();
            if symmetric {
                Fiber::discrete(names)
            } else {
                Fiber::ordered(names, |i, j| q.leq(q.identity(x), a.m(r[j], r[i])))
            }
        })
        .collect();
    let action = site
        .cells()
        .iter()
        .map(|&m| {
            reps[m.dst().0]
                .iter()
                .map(|&e| action_element(a, e, m).map(|r| class_of[r]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let kind = if symmetric { FiberKind::Set } else { FiberKind::Poset };
    let presheaf = Presheaf::new(site, kind, fibers, action)?;
    Ok(FiberView { presheaf, reps, class_of })
}

/// The transformation `F -> fibers(A)` of a functor `σF -> A`.
pub fn phi(g: &QFunctor, f: &Presheaf, view: &FiberView) -> OplaxTransform {
    let offsets = f.offsets();
    let components = (0..f.fibers().len())
        .map(|x| (0..f.fibers()[x].len()).map(|a| view.class_of[g.apply(offsets[x] + a)]).collect())
        .collect();
    OplaxTransform { components }
}

/// The functor `σF -> A` of a transformation `F -> fibers(A)`.
pub fn gamma(alpha: &OplaxTransform, f: &Presheaf, a: &QCategory, view: &FiberView) -> Result<QFunctor> {
    let map = alpha
        .components
        .iter()
        .enumerate()
        .flat_map(|(x, comp)| comp.iter().map(move |&c| view.reps[x][c]))
        .collect();
    QFunctor::new(sigma_construct(f)?, a.clone(), map)
}

/// Every functor `dom -> cod`, by backtracking on the hom inequality.
pub fn enumerate_qfunctors(dom: &QCategory, cod: &QCategory) -> Vec<Vec<usize>> {
    fn go(dom: &QCategory, cod: &QCategory, map: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let q = dom.quantaloid();
        let k = map.len();
        if k == dom.len() {
            out.push(map.clone());
            return;
        }
        for v in cod.elements_of_type(dom.ty(k)) {
            let ok = q.leq(dom.m(k, k), cod.m(v, v))
                && map.iter().enumerate().all(|(j, &w)| {
                    q.leq(dom.m(k, j), cod.m(v, w)) && q.leq(dom.m(j, k), cod.m(w, v))
                });
            if ok {
                map.push(v);
                go(dom, cod, map, out);
                map.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(dom, cod, &mut Vec::with_capacity(dom.len()), &mut out);
    out
}

/// Every oplax transformation `from -> to`.
pub fn enumerate_oplax(from: &Presheaf, to: &Presheaf) -> Vec<OplaxTransform> {
    // variables are fiber elements of `from`; constraints are checked as soon
    // as every variable they mention is assigned
    let offsets = from.offsets();
    let var = |x: usize, a: usize| offsets[x] + a;
    let n = from.total();
    let mut obj_of = vec![0; n];
    for (x, fib) in from.fibers().iter().enumerate() {
        for a in 0..fib.len() {
            obj_of[var(x, a)] = x;
        }
    }
    enum Constraint {
        Monotone(usize, usize),
        // alpha(lhs) <= G(gamma)(alpha(rhs))
        Square { lhs: usize, rhs: usize, gamma: usize },
    }
    let mut constraints: Vec<Vec<Constraint>> = (0..n).map(|_| Vec::new()).collect();
    for (x, fib) in from.fibers().iter().enumerate() {
        for a in 0..fib.len() {
            for b in 0..fib.len() {
                if a != b && fib.leq(a, b) {
                    let last = var(x, a).max(var(x, b));
                    constraints[last].push(Constraint::Monotone(var(x, a), var(x, b)));
                }
            }
        }
    }
    for (g, m) in from.site().cells().iter().enumerate() {
        let (x, y) = (m.src().0, m.dst().0);
        for a in 0..from.fibers()[y].len() {
            let (lhs, rhs) = (var(x, from.act(g, a)), var(y, a));
            constraints[lhs.max(rhs)].push(Constraint::Square { lhs, rhs, gamma: g });
        }
    }
    let mut out = Vec::new();
    let mut assign = Vec::with_capacity(n);
    fn go(
        k: usize,
        assign: &mut Vec<usize>,
        obj_of: &[usize],
        constraints: &[Vec<Constraint>],
        to: &Presheaf,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if k == obj_of.len() {
            emit(assign);
            return;
        }
        let fib = to.fiber(Obj(obj_of[k]));
        for v in 0..fib.len() {
            assign.push(v);
            let ok = constraints[k].iter().all(|c| match *c {
                Constraint::Monotone(a, b) => to.fiber(Obj(obj_of[a])).leq(assign[a], assign[b]),
                Constraint::Square { lhs, rhs, gamma } => {
                    to.fiber(Obj(obj_of[lhs])).leq(assign[lhs], to.act(gamma, assign[rhs]))
                }
            });
            if ok {
                go(k + 1, assign, obj_of, constraints, to, emit);
            }
            assign.pop();
        }
    }
    let mut emit = |flat: &[usize]| {
        let components = (0..from.fibers().len())
            .map(|x| (0..from.fibers()[x].len()).map(|a| flat[var(x, a)]).collect())
            .collect();
        out.push(OplaxTransform { components });
    };
    go(0, &mut assign, &obj_of, &constraints, to, &mut emit);
    out
}

/// `id_q <= join of forward_i . adjoint_i`.
pub fn is_covering_family<'a>(q: &Quantaloid, target: Obj, family: impl IntoIterator<Item = &'a MapCell>) -> bool {
    let total = q.join(
        target,
        target,
        family.into_iter().map(|m| {
            debug_assert_eq!(m.dst(), target);
            q.compose(m.forward, m.adjoint)
        }),
    );
    q.leq(q.identity(target), total)
}

/// Verdict of [`check_fixed_presheaf`], with the first failing condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedReport {
    pub fixed: bool,
    pub witness: Option<String>,
}

/// Local representability of symmetric singletons of `symmetrize_free(σF)`,
/// and unique glueing of covering compatible families.
pub fn check_fixed_presheaf(f: &Presheaf) -> Result<FixedReport> {
    let q = f.quantaloid().clone();
    let site = f.site().clone();
    let s = sigma_construct(f)?.symmetrize_free()?;
    let offsets = f.offsets();
    let fail = |w: String| Ok(FixedReport { fixed: false, witness: Some(w) });

    for ty in q.objects() {
        for single in enumerate_singletons(&s, ty, true)? {
            let local: Vec<MapCell> = site
                .into_obj(ty)
                .map(|g| site.cell(g))
                .filter(|m| {
                    s.elements_of_type(m.src()).any(|x| {
                        (0..s.len()).all(|b| q.compose(single.sigma()[b], m.forward) == s.m(b, x))
                    })
                })
                .collect();
            if !is_covering_family(&q, ty, &local) {
                let values: Vec<String> =
                    (0..s.len()).map(|b| format!("{}={}", s.name(b), q.cell_name(single.sigma()[b]))).collect();
                return fail(format!(
                    "singleton of type `{}` [{}] is not locally representable",
                    q.object_name(ty),
                    values.join(" ")
                ));
            }
        }
    }

    for ty in q.objects() {
        let fib = f.fiber(ty);
        let into: Vec<usize> = site.into_obj(ty).collect();
        for x in 0..fib.len() {
            for y in x + 1..fib.len() {
                let agree: Vec<MapCell> = into
                    .iter()
                    .filter(|&&g| f.act(g, x) == f.act(g, y))
                    .map(|&g| site.cell(g))
                    .collect();
                if is_covering_family(&q, ty, &agree) {
                    return fail(format!(
                        "`{}` and `{}` over `{}` agree on a covering family",
                        fib.name(x),
                        fib.name(y),
                        q.object_name(ty)
                    ));
                }
            }
        }

        // vertices: (map into ty, element over its source)
        let vertices: Vec<(usize, usize)> = into
            .iter()
            .flat_map(|&g| (0..f.fiber(site.cell(g).src()).len()).map(move |a| (g, a)))
            .collect();
        let elem = |(g, a): (usize, usize)| offsets[site.cell(g).src().0] + a;
        let compatible = |u: (usize, usize), v: (usize, usize)| {
            let (mu, mv) = (site.cell(u.0), site.cell(v.0));
            q.leq(q.compose(mu.adjoint, mv.forward), s.m(elem(u), elem(v)))
        };
        let ok: Vec<usize> = (0..vertices.len()).filter(|&i| compatible(vertices[i], vertices[i])).collect();
        let adj: Vec<Vec<bool>> = (0..vertices.len())
            .map(|i| (0..vertices.len()).map(|j| compatible(vertices[i], vertices[j]) && compatible(vertices[j], vertices[i])).collect())
            .collect();
        let mut cliques = Vec::new();
        bron_kerbosch(&adj, Vec::new(), ok, Vec::new(), &mut cliques);
        for clique in cliques {
            let maps: Vec<MapCell> = clique.iter().map(|&i| site.cell(vertices[i].0)).collect();
            if !is_covering_family(&q, ty, &maps) {
                continue;
            }
            let glued = (0..fib.len()).any(|x| clique.iter().all(|&i| f.act(vertices[i].0, x) == vertices[i].1));
            if !glued {
                let parts: Vec<String> = clique
                    .iter()
                    .map(|&i| {
                        let (g, a) = vertices[i];
                        format!("{}@{}", f.fiber(site.cell(g).src()).name(a), q.object_name(site.cell(g).src()))
                    })
                    .collect();
                return fail(format!(
                    "covering compatible family [{}] over `{}` has no glueing",
                    parts.join(" "),
                    q.object_name(ty)
                ));
            }
        }
    }
    Ok(FixedReport { fixed: true, witness: None })
}

fn bron_kerbosch(adj: &[Vec<bool>], r: Vec<usize>, mut p: Vec<usize>, mut x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r);
        }
        return;
    }
    while let Some(v) = p.pop() {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&u| adj[v][u]).collect();
        let x2 = x.iter().copied().filter(|&u| adj[v][u]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        x.push(v);
    }
}

/// `M(a, b)` equals the join of `f . g` over elements `x` and maps with
/// `f <= M(a, x)` and `g <= M(x, b)`; in the symmetric reading, of `f . g°`
/// over symmetric maps with `f <= M(a, x)` and `g <= M(b, x)`.
pub fn check_fixed_category(a: &QCategory, symmetric: bool) -> Result<Report> {
    let q = a.quantaloid();
    let maps = q.enumerate_maps(symmetric);
    let below = |c: Cell| -> Vec<Cell> {
        maps.iter().filter(|m| m.src() == c.src && m.dst() == c.dst && q.leq(m.forward, c)).map(|m| m.forward).collect()
    };
    let mut report = Report::new();
    for i in 0..a.len() {
        for j in 0..a.len() {
            let mut acc = q.bottom(a.ty(j), a.ty(i));
            for x in 0..a.len() {
                let fs = below(a.m(i, x));
                let gs = if symmetric { below(a.m(j, x)) } else { below(a.m(x, j)) };
                for &f in &fs {
                    for &g in &gs {
                        let g = if symmetric { q.involute(g)? } else { g };
                        acc = q.join2(acc, q.compose(f, g));
                    }
                }
            }
            if acc != a.m(i, j) {
                report.push(format!(
                    "M(`{}`, `{}`) = {} but the join of maps gives {}",
                    a.name(i),
                    a.name(j),
                    q.cell_name(a.m(i, j)),
                    q.cell_name(acc)
                ));
            }
        }
    }
    Ok(report)
}

/// Whether `A` is isomorphic to the category rebuilt from its own fibers.
/// False when some restriction has no representative or when two elements
/// are isomorphic.
pub fn is_fixed_category_direct(a: &QCategory, symmetric: bool) -> Result<bool> {
    let view = match fibers(a, symmetric) {
        Ok(view) => view,
        Err(Error::NotRepresentable(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let mut rebuilt = sigma_construct(&view.presheaf)?;
    if symmetric {
        rebuilt = rebuilt.symmetrize_free()?;
    }
    let reps: Vec<usize> = view.reps.iter().flatten().copied().collect();
    if reps.len() != a.len() {
        return Ok(false);
    }
    Ok((0..reps.len()).all(|i| (0..reps.len()).all(|j| rebuilt.m(i, j) == a.m(reps[i], reps[j]))))
}

/// Sheafification of a set-valued presheaf on the symmetric maps of `R(X)`:
/// sections over `V` are families of germs `(s_x in F(U_x))`, `x in V`, with
/// `s_y` the restriction of `s_x` whenever `y` lies in `U_x`.
pub fn sheafify_oracle(f: &Presheaf) -> Result<Presheaf> {
    let q = f.quantaloid().clone();
    let space = q.topology().ok_or(Error::NotTopological)?.clone();
    if f.kind() != FiberKind::Set || !f.site().is_symmetric() {
        return Err(Error::Invalid("the oracle needs a set-valued presheaf on symmetric maps".into()));
    }
    let site = f.site().clone();
    let n_pts = space.points().len();
    let nbhd: Vec<Obj> = (0..n_pts).map(|p| Obj(space.minimal_nbhd(p))).collect();
    let restriction = |big: Obj, small: Obj| -> usize {
        let c = q.cell_of_open(small, big, small.0).unwrap().expect("small is below big");
        site.find(c).expect("inclusions are maps")
    };
    // sections[v]: tuples indexed like points_of(v)
    let mut sections: Vec<Vec<Vec<usize>>> = Vec::with_capacity(space.num_opens());
    for v in 0..space.num_opens() {
        let pts = space.points_of(v);
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        for &p in &pts {
            let size = f.fiber(nbhd[p]).len();
            acc = acc.into_iter().flat_map(|t| (0..size).map(move |s| [t.clone(), vec![s]].concat())).collect();
        }
        acc.retain(|t| {
            pts.iter().enumerate().all(|(i, &x)| {
                pts.iter().enumerate().all(|(j, &y)| {
                    !space.subset(nbhd[y].0, nbhd[x].0)
                        || f.act(restriction(nbhd[x], nbhd[y]), t[i]) == t[j]
                })
            })
        });
        sections.push(acc);
    }
    let fibers = (0..space.num_opens())
        .map(|v| {
            let pts = space.points_of(v);
            let names = sections[v]
                .iter()
                .map(|t| {
                    let parts: Vec<&str> = t.iter().zip(&pts).map(|(&s, &p)| f.fiber(nbhd[p]).name(s)).collect();
                    format!("({})", parts.join(","))
                })
                .collect();
            Fiber::discrete(names)
        })
        .collect();
    let action = site
        .cells()
        .iter()
        .map(|m| {
            let (small, big) = (m.src().0, m.dst().0);
            let (ps, pb) = (space.points_of(small), space.points_of(big));
            let pick: Vec<usize> = ps.iter().map(|p| pb.iter().position(|x| x == p).unwrap()).collect();
            let lookup: HashMap<&Vec<usize>, usize> = sections[small].iter().enumerate().map(|(i, t)| (t, i)).collect();
            sections[big]
                .iter()
                .map(|t| {
                    let r: Vec<usize> = pick.iter().map(|&i| t[i]).collect();
                    lookup[&r]
                })
                .collect()
        })
        .collect();
    Presheaf::new(site, FiberKind::Set, fibers, action)
}

/// `fibers(complete(symmetrize_free(σF)))`, the symmetric roundtrip.
pub fn roundtrip(f: &Presheaf) -> Result<Presheaf> {
    let s = sigma_construct(f)?.symmetrize_free()?;
    let completion = complete(&s, true)?;
    Ok(fibers(&completion.category, true)?.presheaf)
}
