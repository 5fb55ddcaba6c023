//! Distributors between Q-categories. In a posetal setting the coend defining
//! composition is a join and morphisms of distributors are pointwise order.

use crate::error::{Error, Report, Result};
use crate::qcat::{QCategory, QFunctor};
use crate::quantaloid::Cell;

/// `phi: dom -> cod` with `phi(c, a)` a cell `typ a -> typ c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distributor {
    pub dom: QCategory,
    pub cod: QCategory,
    phi: Vec<Cell>,
}

impl Distributor {
    pub fn new(dom: QCategory, cod: QCategory, phi: Vec<Cell>) -> Result<Self> {
        let (n, m) = (cod.len(), dom.len());
        if phi.len() != n * m {
            return Err(Error::Shape(format!("expected a {n}x{m} matrix")));
        }
        if **dom.quantaloid() != **cod.quantaloid() {
            return Err(Error::Shape("domain and codomain live over different quantaloids".into()));
        }
        for c in 0..n {
            for a in 0..m {
                let cell = phi[c * m + a];
                if cell.src != dom.ty(a) || cell.dst != cod.ty(c) {
                    return Err(Error::Shape(format!(
                        "entry (`{}`, `{}`) has the wrong type",
                        cod.name(c),
                        dom.name(a)
                    )));
                }
            }
        }
        Ok(Self { dom, cod, phi })
    }

    pub fn from_fn(dom: QCategory, cod: QCategory, f: impl Fn(usize, usize) -> Cell) -> Result<Self> {
        let m = dom.len();
        let phi = (0..cod.len() * m).map(|i| f(i / m, i % m)).collect();
        Self::new(dom, cod, phi)
    }

    /// The hom matrix of `a`, as a distributor `a -> a`.
    pub fn identity(a: &QCategory) -> Self {
        Self { dom: a.clone(), cod: a.clone(), phi: a.matrix().to_vec() }
    }

    pub fn get(&self, c: usize, a: usize) -> Cell {
        self.phi[c * self.dom.len() + a]
    }

    pub fn entries(&self) -> &[Cell] {
        &self.phi
    }

    /// `N(c, c') . phi(c', a') . M(a', a) <= phi(c, a)` for all quadruples.
    pub fn validate(&self) -> Report {
        let q = self.dom.quantaloid();
        let mut report = Report::new();
        let (n, m) = (self.cod.len(), self.dom.len());
        for c in 0..n {
            for a in 0..m {
                let target = self.get(c, a);
                'outer: for c2 in 0..n {
                    for a2 in 0..m {
                        let v = q.compose3(self.cod.m(c, c2), self.get(c2, a2), self.dom.m(a2, a));
                        if !q.leq(v, target) {
                            report.push(format!(
                                "action inequality fails at (`{}`, `{}`) via (`{}`, `{}`)",
                                self.cod.name(c),
                                self.dom.name(a),
                                self.cod.name(c2),
                                self.dom.name(a2)
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        report
    }

    /// `(psi . phi)(d, a) = join over c of psi(d, c) . phi(c, a)`.
    pub fn then(&self, psi: &Distributor) -> Result<Distributor> {
        compose_distributors(psi, self)
    }

    /// `phi°(a, c) = phi(c, a)°`, a distributor `cod -> dom`.
    pub fn involute(&self) -> Result<Distributor> {
        let q = self.dom.quantaloid();
        let (n, m) = (self.cod.len(), self.dom.len());
        let mut out = Vec::with_capacity(n * m);
        for a in 0..m {
            for c in 0..n {
                out.push(q.involute(self.get(c, a))?);
            }
        }
        Distributor::new(self.cod.clone(), self.dom.clone(), out)
    }

    /// Pointwise order between parallel distributors.
    pub fn leq(&self, other: &Distributor) -> Result<bool> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::Shape("distributors are not parallel".into()));
        }
        let q = self.dom.quantaloid();
        Ok(self.phi.iter().zip(&other.phi).all(|(&x, &y)| q.leq(x, y)))
    }
}

pub fn compose_distributors(psi: &Distributor, phi: &Distributor) -> Result<Distributor> {
    if phi.cod != psi.dom {
        return Err(Error::Shape("codomain of the first distributor must be the domain of the second".into()));
    }
    let q = phi.dom.quantaloid();
    let (dn, cn, an) = (psi.cod.len(), phi.cod.len(), phi.dom.len());
    let mut out = Vec::with_capacity(dn * an);
    for d in 0..dn {
        for a in 0..an {
            let (x, y) = (phi.dom.ty(a), psi.cod.ty(d));
            out.push(q.join(x, y, (0..cn).map(|c| q.compose(psi.get(d, c), phi.get(c, a)))));
        }
    }
    Distributor::new(phi.dom.clone(), psi.cod.clone(), out)
}

/// `f_!(c, a) = N(c, f a)`, a distributor `dom f -> cod f`.
pub fn representable_lower(f: &QFunctor) -> Distributor {
    Distributor::from_fn(f.dom.clone(), f.cod.clone(), |c, a| f.cod.m(c, f.apply(a)))
        .expect("representables are well shaped")
}

/// `f^!(a, c) = N(f a, c)`, a distributor `cod f -> dom f`.
pub fn representable_upper(f: &QFunctor) -> Distributor {
    Distributor::from_fn(f.cod.clone(), f.dom.clone(), |a, c| f.cod.m(f.apply(a), c))
        .expect("representables are well shaped")
}

/// `left: A -> B` and `right: B -> A` with `M <= right . left` and
/// `left . right <= N`.
pub fn is_adjoint_pair(left: &Distributor, right: &Distributor) -> Result<bool> {
    let unit = compose_distributors(right, left)?;
    let counit = compose_distributors(left, right)?;
    Ok(Distributor::identity(&left.dom).leq(&unit)? && counit.leq(&Distributor::identity(&left.cod))?)
}
