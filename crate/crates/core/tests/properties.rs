use std::sync::Arc;

use proptest::prelude::*;
use rand::RngExt;
use rand_chacha::ChaCha8Rng;

use reflekt::amalgam::{pushout_bounded, AllowableSequence, AmalgamResult, Entry, Leg};
use reflekt::catcore::{find_adjoint, functor_predicates, slice, AdjointSide, Bound, FinCategory, SliceSide};
use reflekt::field::PrimeField;
use reflekt::glue::free_oriented_gluing;
use reflekt::homotopy::{
    clock_invariant, clock_normal_form, cone_fiber, connect, homology, reflect_at, ChainMap, ConeOrFiber,
    Orientation, ReflectionData,
};
use reflekt::linrep::{hom_space, kan_extension, restrict, KanSide};
use reflekt::random::{
    instance_rng, random_category, random_complex, random_discrete_span, random_functor, random_objects, random_rep,
    QuiverSpec,
};
use reflekt::suites::slice_colimit_dim;

const SMALL: QuiverSpec = QuiverSpec { min_objects: 1, max_objects: 4, max_arrows: 4, thin_percent: 30 };

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn small_category(rng: &mut ChaCha8Rng) -> Arc<FinCategory> {
    loop {
        let c = random_category(SMALL, rng);
        if c.num_morphisms() <= 12 {
            return c;
        }
    }
}

fn amalgam(rng: &mut ChaCha8Rng) -> AmalgamResult {
    loop {
        let x = small_category(rng);
        let y = small_category(rng);
        let span = random_discrete_span(&x, &y, 3, rng).unwrap();
        if let Ok(r) = pushout_bounded(&span, Bound { per_hom: 64, total: 2048 }) {
            return r;
        }
    }
}

fn leg_cat(r: &AmalgamResult, leg: Leg) -> &Arc<FinCategory> {
    match leg {
        Leg::X => r.span().x(),
        Leg::Y => r.span().y(),
    }
}

fn zsrc(r: &AmalgamResult, e: Entry) -> usize {
    r.class_of(e.leg, leg_cat(r, e.leg).src(e.mor))
}

fn ztgt(r: &AmalgamResult, e: Entry) -> usize {
    r.class_of(e.leg, leg_cat(r, e.leg).tgt(e.mor))
}

/// A composable word of up to `len` entries in the pushout.
fn random_word(r: &AmalgamResult, len: usize, rng: &mut ChaCha8Rng) -> Vec<Entry> {
    let all: Vec<Entry> = [Leg::X, Leg::Y]
        .into_iter()
        .flat_map(|leg| (0..leg_cat(r, leg).num_morphisms()).map(move |mor| Entry { leg, mor }))
        .collect();
    let mut w = vec![all[rng.random_range(0..all.len())]];
    while w.len() < len {
        let end = ztgt(r, *w.last().unwrap());
        let next: Vec<Entry> = all.iter().copied().filter(|&e| zsrc(r, e) == end).collect();
        w.push(next[rng.random_range(0..next.len())]);
    }
    w
}

/// Normal form over a discrete amalgamating category: drop identities and
/// compose neighbours from the same leg.
fn naive_normal_form(r: &AmalgamResult, w: &[Entry]) -> Vec<Entry> {
    let mut out: Vec<Entry> = Vec::new();
    for &e in w {
        let c = leg_cat(r, e.leg);
        if c.is_identity(e.mor) {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.leg == e.leg => {
                let m = c.compose(e.mor, last.mor).unwrap();
                if c.is_identity(m) {
                    out.pop();
                } else {
                    last.mor = m;
                }
            }
            _ => out.push(e),
        }
    }
    out
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn category_laws(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let c = small_category(&mut rng);
        prop_assert!(c.check_laws().is_ok());
    }

    #[test]
    fn slices_are_categories(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 1);
        let b = small_category(&mut rng);
        let u = random_functor(&b, 3, 3, &mut rng);
        for o in 0..b.num_objects() {
            for side in [SliceSide::Under, SliceSide::Over] {
                let s = slice(&u, o, side).unwrap();
                prop_assert!(s.check_structure(&u));
            }
        }
    }

    #[test]
    fn fully_faithful_functors_have_3for2(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 2);
        let b = small_category(&mut rng);
        let u = random_functor(&b, 3, 3, &mut rng);
        if functor_predicates(&u).fully_faithful {
            prop_assert!(u.has_3for2());
        }
        let objs = random_objects(&b, 1, b.num_objects(), &mut rng);
        let mut objs: Vec<usize> = objs;
        objs.sort_unstable();
        objs.dedup();
        let full = reflekt::catcore::full_subcategory(&b, &objs).unwrap();
        prop_assert!(functor_predicates(&full).fully_faithful);
        prop_assert!(full.has_3for2());
    }

    #[test]
    fn found_adjoints_satisfy_triangles(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 3);
        let b = small_category(&mut rng);
        let u = random_functor(&b, 3, 3, &mut rng);
        for side in [AdjointSide::Left, AdjointSide::Right] {
            if let Some(adj) = find_adjoint(&u, side) {
                prop_assert!(adj.verify().is_ok());
            }
        }
    }

    #[test]
    fn normal_forms_match_naive_reduction(seed in any::<u64>(), len in 1usize..6) {
        let mut rng = instance_rng(seed, 4);
        let r = amalgam(&mut rng);
        let w = random_word(&r, len, &mut rng);
        let forms = r.all_normal_forms(&AllowableSequence(w.clone()));
        prop_assert_eq!(forms.len(), 1);
        let nf = forms.into_iter().next().unwrap();
        let naive = naive_normal_form(&r, &w);
        if naive.is_empty() {
            prop_assert_eq!(nf.len(), 1);
            prop_assert!(leg_cat(&r, nf[0].leg).is_identity(nf[0].mor));
        } else {
            prop_assert_eq!(nf, naive);
        }
    }

    #[test]
    fn words_compose_in_the_pushout(seed in any::<u64>(), a in 1usize..4, b in 1usize..4) {
        let mut rng = instance_rng(seed, 5);
        let r = amalgam(&mut rng);
        let w = random_word(&r, a + b, &mut rng);
        let z = r.z();
        let first = r.morphism_of(&AllowableSequence(w[..a].to_vec())).unwrap();
        let second = r.morphism_of(&AllowableSequence(w[a..].to_vec())).unwrap();
        let whole = r.morphism_of(&AllowableSequence(w.clone())).unwrap();
        prop_assert_eq!(z.compose(second, first), Some(whole));
        for e in &w {
            let single = r.morphism_of(&AllowableSequence(vec![*e])).unwrap();
            let via = match e.leg { Leg::X => r.gx().on_mor(e.mor), Leg::Y => r.gy().on_mor(e.mor) };
            prop_assert_eq!(single, via);
        }
    }

    #[test]
    fn gluings_verify(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 6);
        let a1 = small_category(&mut rng);
        let a2 = small_category(&mut rng);
        let n = rng.random_range(0..=3);
        let s: Vec<usize> = (0..n).map(|_| rng.random_range(0..a1.num_objects())).collect();
        let t: Vec<usize> = (0..n).map(|_| rng.random_range(0..a2.num_objects())).collect();
        let g = free_oriented_gluing(&a1, &a2, &s, &t).unwrap();
        prop_assert!(g.verify().is_ok());
        prop_assert!(functor_predicates(&g.i1).fully_faithful);
        prop_assert!(functor_predicates(&g.i2).fully_faithful);
    }
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn kan_extensions_are_adjoint_and_pointwise(seed in any::<u64>()) {
        let f = PrimeField::new(5).unwrap();
        let mut rng = instance_rng(seed, 7);
        let b = small_category(&mut rng);
        let u = random_functor(&b, 3, 3, &mut rng);
        let x = random_rep(u.dom(), &f, 2, &mut rng);
        let y = random_rep(&b, &f, 2, &mut rng);
        let uy = restrict(&u, &y).unwrap();
        for side in [KanSide::Left, KanSide::Right] {
            let k = kan_extension(&u, &x, side).unwrap();
            for o in 0..b.num_objects() {
                prop_assert_eq!(k.value.dim(o), slice_colimit_dim(&u, &x, o, side));
            }
            let (lhs, rhs) = match side {
                KanSide::Left => (hom_space(&k.value, &y).unwrap().len(), hom_space(&x, &uy).unwrap().len()),
                KanSide::Right => (hom_space(&y, &k.value).unwrap().len(), hom_space(&uy, &x).unwrap().len()),
            };
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cones_and_fibres_of_identities(seed in any::<u64>()) {
        let f = PrimeField::new(5).unwrap();
        let mut rng = instance_rng(seed, 8);
        let b = small_category(&mut rng);
        let x = random_complex(&b, &f, -1, 1, 2, &mut rng).unwrap();
        let id = ChainMap::identity(&x);
        for which in [ConeOrFiber::Cone, ConeOrFiber::Fiber] {
            let cf = cone_fiber(&id, which).unwrap();
            prop_assert!(cf.homotopy.witnesses_null(&cf.composite));
            prop_assert!(homology(&cf.object).unwrap().is_zero());
        }
    }

    #[test]
    fn reflections_round_trip(seed in any::<u64>()) {
        let f = PrimeField::new(5).unwrap();
        let mut rng = instance_rng(seed, 9);
        let c = small_category(&mut rng);
        let ys = random_objects(&c, 1, 2, &mut rng);
        let rd = ReflectionData::new(&c, &ys).unwrap();
        let x = random_complex(&rd.minus.cat, &f, -1, 1, 2, &mut rng).unwrap();
        let y = random_complex(&rd.plus.cat, &f, -1, 1, 2, &mut rng).unwrap();
        prop_assert!(rd.roundtrip_compare(&x).unwrap().quasi_iso);
        prop_assert!(rd.dual_compare(&y).unwrap().quasi_iso);
    }

    #[test]
    fn clock_classes_are_connected(bits in proptest::collection::vec(any::<bool>(), 2..8), seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 10);
        let mut q: Orientation = bits.clone();
        for _ in 0..6 {
            let i = rng.random_range(0..q.len());
            if let Some(next) = reflect_at(&q, i) {
                prop_assert_eq!(clock_invariant(&next), clock_invariant(&q));
                q = next;
            }
        }
        let (p, k) = clock_invariant(&bits);
        prop_assert!(connect(&bits, &q).is_some());
        prop_assert!(connect(&bits, &clock_normal_form(p, k)).is_some());
    }
}
