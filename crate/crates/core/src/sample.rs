//! Deterministic random instances: presheaves on finite spaces, small
//! quantaloids, Q-categories, distributors, functors and metric spaces.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adjunction::sheafify_oracle;
use crate::distributor::Distributor;
use crate::error::{Error, Result};
use crate::fixtures::{f_bad, f_sheaf, presheaf_on_opens};
use crate::lattice::SupLattice;
use crate::presheaf::{Fiber, FiberKind, MapSite, Presheaf};
use crate::qcat::{QCategory, QFunctor, TypedSet};
use crate::quantaloid::{Cell, Obj, Quantaloid};
use crate::setenriched::FinCategory;
use crate::topology::Topology;

pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random set-valued presheaf on the symmetric maps of `R(X)` with fibers
/// of size at most `max_fiber`. Opens are filled in increasing order; each new
/// element picks a consistent family of restrictions to the maximal proper
/// subopens, and the fiber is truncated when no such family exists.
pub fn random_presheaf(q: Arc<Quantaloid>, max_fiber: usize, rng: &mut impl Rng) -> Result<Presheaf> {
    let space = q.topology().ok_or(Error::NotTopological)?.clone();
    let k = space.num_opens();
    let subs: Vec<Vec<usize>> = (0..k).map(|v| (0..k).filter(|&w| w != v && space.subset(w, v)).collect()).collect();
    let maximal: Vec<Vec<usize>> = (0..k)
        .map(|v| {
            subs[v]
                .iter()
                .copied()
                .filter(|&w| !subs[v].iter().any(|&z| z != w && space.subset(w, z)))
                .collect()
        })
        .collect();
    let mut sizes = vec![0usize; k];
    // restrict[v][w][a] for w strictly below v
    let mut restrict: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); k]; k];
    for v in 0..k {
        let wanted = if rng.gen_bool(0.1) { 0 } else { rng.gen_range(1..=max_fiber) };
        let tuples = consistent_tuples(&space, &maximal[v], &sizes, &restrict);
        let size = if tuples.is_empty() { 0 } else { wanted };
        sizes[v] = size;
        for _ in 0..size {
            let t = tuples.choose(rng).expect("nonempty");
            for &w in &subs[v] {
                let i = maximal[v].iter().position(|&m| space.subset(w, m)).unwrap();
                let e = t[i];
                let r = if w == maximal[v][i] { e } else { restrict[maximal[v][i]][w][e] };
                restrict[v][w].push(r);
            }
        }
    }
    let fibers = (0..k).map(|v| (0..sizes[v]).map(|a| format!("{}{}", letter(a), v)).collect()).collect();
    presheaf_on_opens(q, fibers, |big, small, a| if big == small { a } else { restrict[big.0][small.0][a] })
}

fn letter(a: usize) -> char {
    (b'a' + a as u8) as char
}

fn consistent_tuples(space: &Topology, maximal: &[usize], sizes: &[usize], restrict: &[Vec<Vec<usize>>]) -> Vec<Vec<usize>> {
    let down = |from: usize, to: usize, e: usize| if from == to { e } else { restrict[from][to][e] };
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for (i, &m) in maximal.iter().enumerate() {
        let mut next = Vec::new();
        for t in &acc {
            for e in 0..sizes[m] {
                let ok = (0..i).all(|j| {
                    let common = space.inter(maximal[j], m);
                    (0..space.num_opens())
                        .filter(|&z| space.subset(z, common))
                        .all(|z| down(maximal[j], z, t[j]) == down(m, z, e))
                });
                if ok {
                    let mut t2 = t.clone();
                    t2.push(e);
                    next.push(t2);
                }
            }
        }
        acc = next;
    }
    acc
}

#[derive(Debug, Clone)]
pub struct PoolEntry {
    pub label: String,
    pub presheaf: Presheaf,
}

/// Presheaves over every topology on at most three points: random samples,
/// sheafified copies of some of them, terminal presheaves and the two named
/// fixtures.
pub fn presheaf_pool(seed: u64, per_topology: usize) -> Result<Vec<PoolEntry>> {
    let mut rng = rng(seed);
    let mut out = vec![
        PoolEntry { label: "F_sheaf".into(), presheaf: f_sheaf() },
        PoolEntry { label: "F_bad".into(), presheaf: f_bad() },
    ];
    let spaces = (0..=3).flat_map(Topology::all_on);
    for (ti, space) in spaces.enumerate() {
        let q = Arc::new(Quantaloid::from_topology(&space));
        let site = Arc::new(MapSite::new(q.clone(), true)?);
        out.push(PoolEntry { label: format!("T{ti}/terminal"), presheaf: Presheaf::terminal(site, FiberKind::Set) });
        for k in 0..per_topology {
            let f = random_presheaf(q.clone(), 3, &mut rng)?;
            if k % 3 == 0 {
                out.push(PoolEntry { label: format!("T{ti}/sample{k}/sheafified"), presheaf: sheafify_oracle(&f)? });
            }
            out.push(PoolEntry { label: format!("T{ti}/sample{k}"), presheaf: f });
        }
    }
    Ok(out)
}

/// Relations between three sets of random sizes (1 or 2), with converse as
/// involution.
pub fn random_rel_quantaloid(rng: &mut impl Rng) -> Arc<Quantaloid> {
    let sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=2)).collect();
    rel_quantaloid(&sizes)
}

pub fn rel_quantaloid(sizes: &[usize]) -> Arc<Quantaloid> {
    let n = sizes.len();
    let bit = |p: usize, q: usize, i: usize, j: usize| {
        debug_assert!(i < p && j < q);
        1usize << (i * q + j)
    };
    let mut homs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let cells = 1usize << (sizes[x] * sizes[y]);
            let width = sizes[x] * sizes[y];
            let names = (0..cells).map(|m| format!("r{:0width$b}", m, width = width.max(1))).collect();
            homs.push(SupLattice::from_order(names, |a, b| a & b == a).expect("powerset"));
        }
    }
    let compose = |x: Obj, y: Obj, z: Obj, g: usize, f: usize| {
        let (p, q, r) = (sizes[x.0], sizes[y.0], sizes[z.0]);
        let mut out = 0;
        for i in 0..p {
            for k in 0..r {
                if (0..q).any(|j| f & bit(p, q, i, j) != 0 && g & bit(q, r, j, k) != 0) {
                    out |= bit(p, r, i, k);
                }
            }
        }
        Some(out)
    };
    let identity = sizes.iter().map(|&p| (0..p).map(|i| bit(p, p, i, i)).sum()).collect();
    let involution = |x: Obj, y: Obj, a: usize| {
        let (p, q) = (sizes[x.0], sizes[y.0]);
        let mut out = 0;
        for i in 0..p {
            for j in 0..q {
                if a & bit(p, q, i, j) != 0 {
                    out |= bit(q, p, j, i);
                }
            }
        }
        Some(out)
    };
    let names = (0..n).map(|i| format!("S{i}")).collect();
    Arc::new(Quantaloid::from_parts(names, homs, &compose, identity, Some(&involution)).expect("relation tables"))
}

/// Three objects under a random preorder; `hom(x, y)` is `{0, 1}` when
/// `x <= y` and `{0}` otherwise, composed by meet.
pub fn random_preorder_quantaloid(rng: &mut impl Rng) -> Arc<Quantaloid> {
    let n = 3;
    let mut rel = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            rel[a * n + b] = a == b || rng.gen_bool(0.4);
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if rel[a * n + k] && rel[k * n + b] {
                    rel[a * n + b] = true;
                }
            }
        }
    }
    let homs = (0..n * n)
        .map(|i| {
            let names = if rel[i] { vec!["0".into(), "1".into()] } else { vec!["0".into()] };
            SupLattice::chain(names).expect("chain")
        })
        .collect();
    let compose = |_: Obj, _: Obj, _: Obj, g: usize, f: usize| Some(g.min(f));
    let names = (0..n).map(|i| format!("P{i}")).collect();
    Arc::new(Quantaloid::from_parts(names, homs, &compose, vec![1; n], None).expect("preorder tables"))
}

fn random_cell(q: &Quantaloid, x: Obj, y: Obj, rng: &mut impl Rng) -> Cell {
    let len = q.hom(x, y).len();
    Cell { src: x, dst: y, val: rng.gen_range(0..len) }
}

fn random_cell_below(q: &Quantaloid, bound: Cell, rng: &mut impl Rng) -> Cell {
    let below: Vec<Cell> = q.cells(bound.src, bound.dst).filter(|&c| q.leq(c, bound)).collect();
    *below.choose(rng).expect("bottom is below")
}

/// Least Q-category structure above a matrix: identities joined on the
/// diagonal, then closed under composition.
pub fn closure(q: &Quantaloid, types: &[Obj], mut m: Vec<Cell>) -> Vec<Cell> {
    let n = types.len();
    for a in 0..n {
        m[a * n + a] = q.join2(m[a * n + a], q.identity(types[a]));
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = q.join2(m[a * n + c], q.compose(m[a * n + b], m[b * n + c]));
                    if v != m[a * n + c] {
                        m[a * n + c] = v;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return m;
        }
    }
}

fn element_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// `n` elements of random types, hom the closure of a random matrix.
pub fn random_qcategory(q: &Arc<Quantaloid>, prefix: &str, n: usize, rng: &mut impl Rng) -> QCategory {
    let types: Vec<Obj> = (0..n).map(|_| Obj(rng.gen_range(0..q.num_objects()))).collect();
    let raw = (0..n * n).map(|i| random_cell(q, types[i % n], types[i / n], rng)).collect();
    let hom = closure(q, &types, raw);
    let base = TypedSet::new(element_names(prefix, n), types).expect("distinct names");
    QCategory::new(q.clone(), base, hom).expect("closure is well shaped")
}

/// `N . r . M` for a random matrix `r`.
pub fn random_distributor(dom: &QCategory, cod: &QCategory, rng: &mut impl Rng) -> Distributor {
    let q = dom.quantaloid().clone();
    let (n, m) = (cod.len(), dom.len());
    let raw: Vec<Cell> = (0..n * m).map(|i| random_cell(&q, dom.ty(i % m), cod.ty(i / m), rng)).collect();
    Distributor::from_fn(dom.clone(), cod.clone(), |c, a| {
        let mut acc = q.bottom(dom.ty(a), cod.ty(c));
        for c2 in 0..n {
            for a2 in 0..m {
                acc = q.join2(acc, q.compose3(cod.m(c, c2), raw[c2 * m + a2], dom.m(a2, a)));
            }
        }
        acc
    })
    .expect("well shaped")
}

/// A random functor into `cod`: a random map of elements, with the domain
/// hom the closure of a random matrix below the pulled-back hom of `cod`.
pub fn random_functor_into(cod: &QCategory, prefix: &str, n: usize, rng: &mut impl Rng) -> Option<QFunctor> {
    if cod.is_empty() {
        return None;
    }
    let q = cod.quantaloid().clone();
    let map: Vec<usize> = (0..n).map(|_| rng.gen_range(0..cod.len())).collect();
    let types: Vec<Obj> = map.iter().map(|&b| cod.ty(b)).collect();
    let raw = (0..n * n).map(|i| random_cell_below(&q, cod.m(map[i / n], map[i % n]), rng)).collect();
    let hom = closure(&q, &types, raw);
    let base = TypedSet::new(element_names(prefix, n), types).expect("distinct names");
    let dom = QCategory::new(q, base, hom).expect("well shaped");
    QFunctor::new(dom, cod.clone(), map).ok()
}

/// A symmetric generalized metric space with at most `max_points` points
/// over `metric_quantale(1, cap)`: random distances (some infinite), closed
/// under the triangle inequality.
pub fn random_metric_space(q: &Arc<Quantaloid>, prefix: &str, max_points: usize, rng: &mut impl Rng) -> QCategory {
    let n = rng.gen_range(1..=max_points);
    let star = Obj(0);
    let len = q.hom(star, star).len();
    let mut raw = vec![q.bottom(star, star); n * n];
    for a in 0..n {
        for b in a + 1..n {
            let v = Cell { src: star, dst: star, val: rng.gen_range(0..len) };
            raw[a * n + b] = v;
            raw[b * n + a] = v;
        }
    }
    let types = vec![star; n];
    let hom = closure(q, &types, raw);
    let base = TypedSet::new(element_names(prefix, n), types).expect("distinct names");
    QCategory::new(q.clone(), base, hom).expect("well shaped")
}

/// A random poset on at most `max` elements, as a fiber.
pub fn random_poset(max: usize, rng: &mut impl Rng) -> Fiber {
    let n = rng.gen_range(1..=max);
    let mut rel = vec![false; n * n];
    for a in 0..n {
        rel[a * n + a] = true;
        for b in a + 1..n {
            rel[a * n + b] = rng.gen_bool(0.4);
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if rel[a * n + k] && rel[k * n + b] {
                    rel[a * n + b] = true;
                }
            }
        }
    }
    Fiber::ordered(element_names("u", n), |a, b| rel[a * n + b])
}

/// The same fiber over every object, every map acting as the identity.
/// Valid when the site has no two distinct parallel maps.
pub fn constant_presheaf(site: Arc<MapSite>, fiber: Fiber) -> Result<Presheaf> {
    let n = site.quantaloid().num_objects();
    let action = vec![(0..fiber.len()).collect::<Vec<_>>(); site.len()];
    let p = Presheaf::new(site, FiberKind::Poset, vec![fiber; n], action)?;
    p.validate().into_result()?;
    Ok(p)
}

/// A small finite category: mostly subcategories of `FinSet` generated by
/// random functions (at most four objects and twelve arrows), sometimes a
/// random preorder, sometimes the one-idempotent monoid.
pub fn random_fincategory(rng: &mut impl Rng) -> FinCategory {
    match rng.gen_range(0..10) {
        0 => FinCategory::e_idem(),
        1 | 2 => {
            let n = rng.gen_range(1..=4);
            let mut rel = vec![false; n * n];
            for a in 0..n {
                for b in 0..n {
                    rel[a * n + b] = a == b || rng.gen_bool(0.3);
                }
            }
            for k in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        if rel[a * n + k] && rel[k * n + b] {
                            rel[a * n + b] = true;
                        }
                    }
                }
            }
            FinCategory::preorder(n, |a, b| rel[a * n + b]).expect("transitive")
        }
        _ => loop {
            let n = rng.gen_range(1..=4);
            let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
            let gens: Vec<(usize, usize, Vec<usize>)> = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let (s, d) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    (s, d, (0..sizes[s]).map(|_| rng.gen_range(0..sizes[d])).collect())
                })
                .collect();
            let c = FinCategory::concrete(&sizes, &gens).expect("functions are well shaped");
            if c.num_arrows() <= 12 {
                return c;
            }
        },
    }
}
