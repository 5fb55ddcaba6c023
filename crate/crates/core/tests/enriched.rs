use qcat_core::completion::{
    as_singleton, complete, completeness_report, is_complete, is_representable, is_symmetrically_complete,
    presingleton_hom, presingleton_qcat, singleton_hom, Presingleton,
};
use qcat_core::fixtures::{f_bad, f_sheaf, q3, rs};
use qcat_core::qcat::{sections_qcat, unit_qcat};
use qcat_core::sample::{random_functor_into, random_qcategory, rng};
use qcat_core::{Cell, QCategory, QFunctor, Quantaloid};

fn named(q: &Quantaloid, x: &str, y: &str, name: &str) -> Cell {
    q.cell(q.object(x).unwrap(), q.object(y).unwrap(), name).unwrap()
}

#[test]
fn metric_residuals_and_joins() {
    let q = q3();
    let c = |n: &str| named(&q, "*", "*", n);
    // largest h with h + 1 >= 2 as distances
    assert_eq!(q.residual_right(c("1"), c("2")).unwrap(), c("1"));
    assert_eq!(q.residual_left(c("1"), c("2")).unwrap(), c("1"));
    assert_eq!(q.residual_right(c("0"), c("∞")).unwrap(), c("∞"));
    assert_eq!(q.residual_right(c("∞"), c("∞")).unwrap(), c("0"));
    assert_eq!(q.join2(c("1"), c("2")), c("1"));
    assert_eq!(q.meet2(c("1"), c("2")), c("2"));
    assert_eq!(q.compose(c("1"), c("2")), c("∞"));
    assert_eq!(q.compose(c("1"), c("1")), c("2"));
}

#[test]
fn maps_of_sierpinski_opens() {
    let q = rs();
    let maps = q.enumerate_maps(false);
    assert_eq!(maps.len(), 6);
    assert!(maps.iter().all(|m| m.symmetric && m.adjoint == q.involute(m.forward).unwrap()));
    // every map is an inclusion of its source
    assert!(maps.iter().all(|m| q.cell_name(m.forward) == q.object_name(m.src())));
    assert_eq!(q.enumerate_maps(true), maps);
    assert!(!q.is_map_dense());
}

#[test]
fn union_does_not_compose() {
    // joins in a fixed argument must keep the empty join
    let err = Quantaloid::from_quantale(vec!["0".into(), "1".into()], &[(0, 1)], |a, b| a.max(b), 0);
    assert!(err.is_err());
}

#[test]
fn skeletal_examples() {
    assert!(sections_qcat(&f_sheaf()).unwrap().is_skeletal());
    assert!(!sections_qcat(&f_bad()).unwrap().is_skeletal());
    let q = rs();
    assert!(unit_qcat(q.clone(), q.object("X").unwrap()).is_skeletal());
}

#[test]
fn unit_over_the_whole_space_is_not_complete() {
    let q = rs();
    let a = unit_qcat(q.clone(), q.object("X").unwrap());
    assert!(!is_complete(&a));
    assert!(!is_symmetrically_complete(&a).unwrap());
    let report = completeness_report(&a, true).unwrap();
    assert!(report.witness.is_some());
    let c = complete(&a, true).unwrap();
    assert_eq!(c.category.len(), 3);
    assert!(is_symmetrically_complete(&c.category).unwrap());
}

#[test]
fn empty_category_degenerate_types() {
    let q = rs();
    let empty = QCategory::from_fn(q.clone(), qcat_core::TypedSet::new(vec![], vec![]).unwrap(), |_, _| unreachable!())
        .unwrap();
    let report = completeness_report(&empty, false).unwrap();
    assert!(report.vacuous);
    assert_eq!(report.degenerate_types, vec![q.object("∅").unwrap()]);
    assert!(is_complete(&q3_empty()));
}

fn q3_empty() -> QCategory {
    QCategory::from_fn(q3(), qcat_core::TypedSet::new(vec![], vec![]).unwrap(), |_, _| unreachable!()).unwrap()
}

#[test]
fn presingletons_restrict_to_the_completion() {
    let mut r = rng(41);
    for n in 1..=3 {
        let a = random_qcategory(&q3(), "a", n, &mut r);
        let (p, pre) = presingleton_qcat(&a).unwrap();
        assert!(p.validate().is_ok());
        for (i, s) in pre.iter().enumerate() {
            for (j, t) in pre.iter().enumerate() {
                assert_eq!(p.m(i, j), presingleton_hom(&a, s, t));
                if let Some(single) = as_singleton(&a, s) {
                    assert_eq!(p.m(i, j), singleton_hom(&a, &single, t));
                }
            }
        }
        let singles: Vec<usize> = (0..pre.len()).filter(|&i| as_singleton(&a, &pre[i]).is_some()).collect();
        let c = complete(&a, false).unwrap().category;
        assert_eq!(singles.len(), c.len());
        let sub = QCategory::from_fn(
            a.quantaloid().clone(),
            qcat_core::TypedSet::new(
                singles.iter().map(|&i| p.name(i).to_string()).collect(),
                singles.iter().map(|&i| p.ty(i)).collect(),
            )
            .unwrap(),
            |i, j| p.m(singles[i], singles[j]),
        )
        .unwrap();
        assert!(sub.is_isomorphic(&c));
    }
}

/// `F: A -> B` into a complete `B` extends along Yoneda by sending a
/// singleton to the representative of its image.
#[test]
fn functors_into_complete_categories_factor_through_the_completion() {
    let mut r = rng(43);
    let mut checked = 0;
    for _ in 0..40 {
        let b = complete(&random_qcategory(&q3(), "b", 3, &mut r), false).unwrap().category;
        let Some(f) = random_functor_into(&b, "a", 3, &mut r) else { continue };
        let a = &f.dom;
        let q = a.quantaloid();
        let c = complete(a, false).unwrap();
        let image = |s: &qcat_core::Singleton| {
            let tau: Vec<Cell> = (0..b.len())
                .map(|y| q.join(s.ty(), b.ty(y), (0..a.len()).map(|x| q.compose(b.m(y, f.apply(x)), s.sigma()[x]))))
                .collect();
            let tau = Presingleton::new(&b, s.ty(), tau).unwrap();
            is_representable(&b, &tau)[0]
        };
        let ext = QFunctor::new(c.category.clone(), b.clone(), c.singletons.iter().map(image).collect()).unwrap();
        assert!(ext.validate().is_ok());
        for x in 0..a.len() {
            assert_eq!(ext.apply(c.yoneda.apply(x)), f.apply(x));
        }
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn sierpinski_cells_by_name() {
    let q = rs();
    let u = named(&q, "U", "X", "U");
    let x = named(&q, "X", "X", "X");
    assert_eq!(q.compose(x, u), u);
    assert_eq!(q.residual_right(u, u).unwrap(), named(&q, "X", "X", "X"));
    assert_eq!(q.describe(u), "`U`: U -> X");
}
