//! Small named instances used by tests, the CLI and the acceptance suite.

use std::sync::Arc;

use crate::error::Result;
use crate::lattice::SupLattice;
use crate::presheaf::{Fiber, FiberKind, MapSite, Presheaf};
use crate::quantaloid::{Obj, Quantaloid};
use crate::topology::Topology;

/// `R(S)` for the Sierpinski space, opens `∅ < U < X`.
pub fn rs() -> Arc<Quantaloid> {
    Arc::new(Quantaloid::from_topology(&Topology::sierpinski()))
}

/// Distances `{0, 1, 2, ∞}` under truncated addition.
pub fn q3() -> Arc<Quantaloid> {
    Arc::new(Quantaloid::metric_quantale(1, 2).expect("valid parameters"))
}

/// The two-element chain `0 < 1` with meet as tensor.
pub fn boolean() -> Arc<Quantaloid> {
    let q = Quantaloid::from_quantale(vec!["0".into(), "1".into()], &[(0, 1)], |a, b| a.min(b), 1)
        .expect("the Boolean quantale is valid");
    Arc::new(q)
}

/// `n` objects, every hom the chain `0 < 1`, composition by meet.
pub fn chaotic_boolean(n: usize) -> Arc<Quantaloid> {
    let names = (0..n).map(|i| format!("o{i}")).collect();
    let homs = (0..n * n).map(|_| SupLattice::chain(vec!["0".into(), "1".into()]).unwrap()).collect();
    let compose = |_: Obj, _: Obj, _: Obj, g: usize, f: usize| Some(g.min(f));
    let involution = |_: Obj, _: Obj, a: usize| Some(a);
    let q = Quantaloid::from_parts(names, homs, &compose, vec![1; n], Some(&involution))
        .expect("tables are well shaped");
    debug_assert!(q.validate().is_ok());
    Arc::new(q)
}

/// A presheaf on the symmetric maps of `R(X)`. `restrict(big, small, a)`
/// sends `a` over `big` to its restriction over `small`.
pub fn presheaf_on_opens(
    q: Arc<Quantaloid>,
    fibers: Vec<Vec<String>>,
    restrict: impl Fn(Obj, Obj, usize) -> usize,
) -> Result<Presheaf> {
    let site = Arc::new(MapSite::new(q, true)?);
    let action = site
        .cells()
        .iter()
        .map(|m| (0..fibers[m.dst().0].len()).map(|a| restrict(m.dst(), m.src(), a)).collect())
        .collect();
    let fibers = fibers.into_iter().map(Fiber::discrete).collect();
    Presheaf::new(site, FiberKind::Set, fibers, action)
}

fn two_over_one(bottom: &[&str]) -> Presheaf {
    let q = rs();
    let (empty, u, x) = (q.object("∅").unwrap(), q.object("U").unwrap(), q.object("X").unwrap());
    let mut fibers = vec![Vec::new(); 3];
    fibers[empty.0] = bottom.iter().map(|s| s.to_string()).collect();
    fibers[u.0] = vec!["p".into()];
    fibers[x.0] = vec!["s".into(), "t".into()];
    // everything restricts to the first element below it
    let restrict = |big: Obj, small: Obj, a: usize| if big == small { a } else { 0 };
    presheaf_on_opens(q, fibers, restrict).expect("fixture is well shaped")
}

/// `F(X) = {s, t}`, `F(U) = {p}`, `F(∅) = {⊥}`.
pub fn f_sheaf() -> Presheaf {
    two_over_one(&["⊥"])
}

/// As [`f_sheaf`] but with two elements `a, b` over `∅`.
pub fn f_bad() -> Presheaf {
    two_over_one(&["a", "b"])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        for q in [rs(), q3(), boolean(), chaotic_boolean(2)] {
            assert!(q.validate().is_ok());
        }
        assert!(f_sheaf().validate().is_ok());
        assert!(f_bad().validate().is_ok());
    }

    #[test]
    fn map_density() {
        assert!(boolean().is_map_dense());
        assert!(chaotic_boolean(2).is_map_dense());
        assert!(!q3().is_map_dense());
        // U: U -> X is not a join of maps in hom(X, X)
        assert!(!rs().is_map_dense());
    }
}
