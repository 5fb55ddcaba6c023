use std::sync::Arc;

use qcat_core::setenriched::{
    compose_profunctors, free_and_underlying_adjunction_check, is_cauchy_complete, karoubi_envelope,
    singleton_oracle, underlying_category, zigzag_class_counts, FinCategory, Profunctor, SetPresheaf,
};

fn e_idem() -> Arc<FinCategory> {
    Arc::new(FinCategory::e_idem())
}

#[test]
fn karoubi_of_e_idem() {
    let c = e_idem();
    assert!(c.validate().is_ok());
    assert!(!is_cauchy_complete(&c));
    let (kar, emb) = karoubi_envelope(&c).unwrap();
    assert!(kar.validate().is_ok());
    assert!(emb.validate().is_ok());
    assert_eq!(kar.num_objects(), 2);
    assert_eq!(kar.num_arrows(), 5);
    let sizes: Vec<usize> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| kar.hom(i, j).count()).collect();
    assert_eq!(sizes, vec![2, 1, 1, 1]);
    assert!(is_cauchy_complete(&kar));

    let (kar2, emb2) = karoubi_envelope(&kar).unwrap();
    assert!(emb2.is_equivalence());
    assert_eq!(kar2.num_objects(), 3);
    assert!(emb.is_fully_faithful());
    assert!(!emb.is_essentially_surjective());
}

#[test]
fn discrete_and_group_like() {
    let disc = Arc::new(FinCategory::preorder(3, |a, b| a == b).unwrap());
    let (kar, emb) = karoubi_envelope(&disc).unwrap();
    assert_eq!(kar.num_arrows(), 3);
    assert!(emb.is_equivalence());
    // Z/2 acting on a two-element set
    let group = FinCategory::concrete(&[2], &[(0, 0, vec![1, 0])]).unwrap();
    assert_eq!(group.num_arrows(), 2);
    assert!(is_cauchy_complete(&group));
    assert_eq!(underlying_category(&group), group);
}

#[test]
fn oracle_on_e_idem() {
    let c = e_idem();
    let found = singleton_oracle(&c, 2);
    assert_eq!(found.len(), 2);
    let (kar, _) = karoubi_envelope(&c).unwrap();
    for s in &found {
        let p = SetPresheaf::of_idempotent(&c, s.idempotent);
        assert!(p.is_isomorphic(&s.presheaf, &c));
    }
    assert_eq!(kar.num_objects(), found.len());
    assert!(singleton_oracle(&c, 0).is_empty());
    let disc = FinCategory::preorder(2, |a, b| a == b).unwrap();
    let reps = singleton_oracle(&disc, 1);
    assert_eq!(reps.len(), 2);
    assert!(reps.iter().all(|s| disc.arrow(s.idempotent).src == disc.arrow(s.idempotent).dst));
}

#[test]
fn hom_is_a_unit_for_composition() {
    let c = e_idem();
    let hom = Profunctor::hom(&c);
    assert!(hom.validate().is_ok());
    let hh = compose_profunctors(&hom, &hom).unwrap();
    assert!(hh.validate().is_ok());
    assert_eq!(hh.cardinality(0, 0), hom.cardinality(0, 0));
    let counts = zigzag_class_counts(&hom, &hom);
    assert_eq!(counts[&(0, 0)], 2);
    let empty = Profunctor::empty(c.clone(), c.clone());
    assert!(compose_profunctors(&hom, &empty).unwrap().is_empty());
}

#[test]
fn adjunction_with_envelope() {
    let c = e_idem();
    let (kar, _) = karoubi_envelope(&c).unwrap();
    let counts = free_and_underlying_adjunction_check(&c, &kar).unwrap();
    assert!(counts.holds(), "{counts:?}");
    assert_eq!(counts.functors_from_c, 3);
    let empty = Arc::new(FinCategory::preorder(0, |_, _| false).unwrap());
    let counts = free_and_underlying_adjunction_check(&empty, &kar).unwrap();
    assert_eq!((counts.functors_from_c, counts.functors_from_envelope), (1, 1));
}
