use std::sync::Arc;

use proptest::prelude::*;
use qcat_core::adjunction::{roundtrip, sheafify_oracle};
use qcat_core::completion::{complete, is_complete};
use qcat_core::fixtures::{q3, rs};
use qcat_core::sample::{
    closure, random_fincategory, random_presheaf, random_qcategory, rel_quantaloid, rng,
};
use qcat_core::setenriched::{is_cauchy_complete, karoubi_envelope};
use qcat_core::{Obj, Quantaloid, Topology};
use rand::Rng;

fn quantaloids() -> Vec<Arc<Quantaloid>> {
    vec![rs(), q3(), rel_quantaloid(&[1, 2]), Arc::new(Quantaloid::from_topology(&Topology::discrete(2)))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn joins_split_over_unions(which in 0usize..4, s in any::<u32>(), t in any::<u32>()) {
        let q = &quantaloids()[which];
        for x in q.objects() {
            for y in q.objects() {
                let hom = q.hom(x, y);
                let pick = |mask: u32| (0..hom.len()).filter(move |&i| mask & (1 << (i % 32)) != 0);
                let both = hom.join(pick(s).chain(pick(t)));
                prop_assert_eq!(both, hom.join([hom.join(pick(s)), hom.join(pick(t))]));
                // monotone in the argument set
                prop_assert!(hom.leq(hom.join(pick(s & t)), hom.join(pick(s))));
                prop_assert!(hom.leq(hom.meet(pick(s)), hom.meet(pick(s & t))));
            }
        }
    }

    #[test]
    fn residuals_are_adjoint_to_composition(which in 0usize..4, seed in any::<u64>()) {
        let q = &quantaloids()[which];
        let mut r = rng(seed);
        let objs: Vec<Obj> = q.objects().collect();
        let any = |r: &mut rand_chacha::ChaCha8Rng| objs[r.gen_range(0..objs.len())];
        let (x, y, z) = (any(&mut r), any(&mut r), any(&mut r));
        for f in q.cells(x, y) {
            for g in q.cells(x, z) {
                let right = q.residual_right(f, g).unwrap();
                for h in q.cells(y, z) {
                    prop_assert_eq!(q.leq(h, right), q.leq(q.compose(h, f), g));
                }
            }
        }
        for f in q.cells(y, z) {
            for g in q.cells(x, z) {
                let left = q.residual_left(f, g).unwrap();
                for h in q.cells(x, y) {
                    prop_assert_eq!(q.leq(h, left), q.leq(q.compose(f, h), g));
                }
            }
        }
    }

    #[test]
    fn closure_gives_a_category(which in 0usize..4, seed in any::<u64>(), n in 1usize..5) {
        let q = &quantaloids()[which];
        let a = random_qcategory(q, "a", n, &mut rng(seed));
        prop_assert!(a.validate().is_ok());
        // closing again changes nothing
        let types: Vec<Obj> = (0..a.len()).map(|x| a.ty(x)).collect();
        prop_assert_eq!(closure(q, &types, a.matrix().to_vec()), a.matrix().to_vec());
    }

    #[test]
    fn completion_is_complete(seed in any::<u64>(), n in 1usize..4) {
        let a = random_qcategory(&q3(), "a", n, &mut rng(seed));
        let c = complete(&a, false).unwrap();
        prop_assert!(is_complete(&c.category));
        prop_assert!(c.yoneda.validate().is_ok());
    }

    #[test]
    fn roundtrip_is_idempotent(seed in any::<u64>(), points in 1usize..3) {
        let mut r = rng(seed);
        let spaces = Topology::all_on(points);
        let space = &spaces[r.gen_range(0..spaces.len())];
        let f = random_presheaf(Arc::new(Quantaloid::from_topology(space)), 2, &mut r).unwrap();
        let once = roundtrip(&f).unwrap();
        prop_assert!(roundtrip(&once).unwrap().is_isomorphic(&once));
        prop_assert!(sheafify_oracle(&once).unwrap().is_isomorphic(&once));
    }

    #[test]
    fn envelopes_split_idempotents(seed in any::<u64>()) {
        let c = Arc::new(random_fincategory(&mut rng(seed)));
        let (kar, emb) = karoubi_envelope(&c).unwrap();
        prop_assert!(is_cauchy_complete(&kar));
        prop_assert!(emb.is_fully_faithful());
        prop_assert_eq!(emb.is_equivalence(), is_cauchy_complete(&c));
    }
}
