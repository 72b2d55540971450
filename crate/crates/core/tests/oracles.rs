//! Fixed examples checked against independent enumerations.

use std::collections::BTreeSet;
use std::sync::Arc;

use reflekt::amalgam::{pushout, AllowableSequence, Entry, Equality, Leg, Span};
use reflekt::catcore::{
    check_functor, find_adjoint, functor_predicates, product, slice, AdjointSide, Bound, FinCategory, FunctorMap, ObjId,
    Quiver, SliceSide,
};
use reflekt::field::PrimeField;
use reflekt::glue::{
    attach_cone, cone_shape, free_oriented_gluing, r_category, reflection_chain_shapes, separate_source_sink,
    separating_shape, Direction,
};
use reflekt::linrep::{restrict, Representation};

fn free(objs: &[&str], arrows: &[(&str, &str, &str)]) -> Arc<FinCategory> {
    Arc::new(FinCategory::free(&Quiver::new(objs, arrows).unwrap(), Bound::default()).unwrap())
}

fn point(name: &str) -> Arc<FinCategory> {
    Arc::new(FinCategory::discrete(&[name]))
}

/// Paths of an acyclic quiver, counted by depth-first search.
fn count_paths(c: &FinCategory) -> usize {
    fn from(c: &FinCategory, o: ObjId) -> usize {
        1 + c.gens().iter().filter(|a| a.src == o).map(|a| from(c, a.tgt)).sum::<usize>()
    }
    (0..c.num_objects()).map(|o| from(c, o)).sum()
}

#[test]
fn separating_quiver_for_two() {
    let z = separating_shape(2, Direction::Sink);
    assert_eq!(z.num_objects(), 5);
    assert_eq!(z.num_gens(), 4);
    assert_eq!(count_paths(&z), 9);
    assert_eq!(z.num_morphisms(), 9);
    let zm = separating_shape(2, Direction::Source);
    assert_eq!(zm.num_morphisms(), count_paths(&zm));
}

#[test]
fn product_of_r_with_itself() {
    let r = r_category().unwrap();
    let rr = product(&r, &r).unwrap();
    assert_eq!(rr.num_objects(), 9);
    let k = r.num_objects();
    for a in 0..rr.num_objects() {
        for b in 0..rr.num_objects() {
            let expected = r.hom(a / k, b / k).len() * r.hom(a % k, b % k).len();
            assert_eq!(rr.hom(a, b).len(), expected);
        }
    }
    let one = k + 1;
    assert_eq!(rr.hom(one, one).len(), 4);
    rr.check_laws().unwrap();
}

#[test]
fn collapse_onto_sink_cone_is_a_functor() {
    let n = 3;
    let z = separating_shape(n, Direction::Sink);
    let cone = cone_shape(n, Direction::Sink);
    let mut objects = Vec::new();
    let mut arrows = Vec::new();
    let names: Vec<(String, String, String, String)> =
        (1..=n).map(|i| (format!("x{i}"), format!("y{i}"), format!("e{i}"), format!("b{i}"))).collect();
    let idn: Vec<String> = (1..=n).map(|i| format!("id_{i}")).collect();
    let nums: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    for (i, (x, y, e, b)) in names.iter().enumerate() {
        objects.push((x.as_str(), nums[i].as_str()));
        objects.push((y.as_str(), nums[i].as_str()));
        arrows.push((e.as_str(), idn[i].as_str()));
        arrows.push((b.as_str(), b.as_str()));
    }
    objects.push(("v", "w"));
    let q = FunctorMap::from_names(z.clone(), cone.clone(), &objects, &arrows).unwrap();
    assert!(check_functor(&z, &cone, q.obj_map(), q.gen_map()).valid);
    let p = functor_predicates(&q);
    assert!(p.faithful && !p.injective_on_objects);
}

/// Objects of `(u/b)` counted straight from hom-sets of the codomain.
fn slice_size(u: &FunctorMap, b: ObjId) -> usize {
    (0..u.dom().num_objects()).map(|a| u.cod().hom(u.obj(a), b).len()).sum()
}

#[test]
fn slice_of_the_plus_separation() {
    let c = free(&["a", "y"], &[("f", "a", "y")]);
    let y = c.object("y").unwrap();
    let sep = separate_source_sink(&c, &[y], Direction::Sink).unwrap();
    let sl = slice(&sep.u, sep.cone.apex, SliceSide::Under).unwrap();
    assert_eq!(sl.objects.len(), slice_size(&sep.u, sep.cone.apex));
    // one object each of classes (i), (ii), (iii) and (iv), none of (v)
    assert_eq!(sl.objects.len(), 4);
    assert!(sl.check_structure(&sep.u));
}

#[test]
fn gluing_slice_counts_standard_factorizations() {
    let a1 = free(&["p", "q"], &[("f", "p", "q")]);
    let a2 = free(&["r", "s", "t"], &[("g", "r", "s"), ("h", "r", "t")]);
    let (s, t) = (vec![1, 0], vec![0, 0]);
    let g = free_oriented_gluing(&a1, &a2, &s, &t).unwrap();
    for a in 0..a2.num_objects() {
        let expected: usize = (0..a1.num_objects())
            .map(|x| (0..s.len()).map(|k| a1.hom(x, s[k]).len() * a2.hom(t[k], a).len()).sum::<usize>())
            .sum();
        let sl = slice(&g.i1, g.i2.obj(a), SliceSide::Under).unwrap();
        assert_eq!(sl.objects.len(), expected);
    }
}

#[test]
fn separation_predicates() {
    for (c, ys) in [(point("y"), vec![0, 0]), (free(&["1", "2"], &[("h", "1", "2")]), vec![0, 1])] {
        for dir in [Direction::Source, Direction::Sink] {
            let sep = separate_source_sink(&c, &ys, dir).unwrap();
            let p = functor_predicates(&sep.u);
            assert!(p.essentially_surjective && !p.fully_faithful);
            assert!(functor_predicates(&sep.cone.inclusion).fully_faithful);
            assert!(functor_predicates(&sep.u.after(&sep.j).unwrap()).fully_faithful);
        }
        let minus = separate_source_sink(&c, &ys, Direction::Source).unwrap();
        let adj = find_adjoint(&minus.u, AdjointSide::Right).unwrap();
        adj.verify().unwrap();
        assert!(functor_predicates(&adj.right).fully_faithful);
        assert_eq!(adj.right.obj(minus.cone.apex), minus.apex);
    }
}

#[test]
fn three_for_two_examples() {
    let x = Arc::new(FinCategory::poset(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]).unwrap());
    let sub = reflekt::catcore::full_subcategory(&x, &[0, 2]).unwrap();
    assert!(sub.has_3for2());
    let w = point("p");
    let disc = FunctorMap::new(w, x.clone(), vec![1], vec![]).unwrap();
    assert!(disc.has_3for2());
    let v = free(&["a", "b", "c"], &[("f", "a", "b"), ("h", "a", "c")]);
    let gf = x.parse_mor("g.f").unwrap();
    let bad = FunctorMap::new(v, x.clone(), vec![0, 1, 2], vec![x.gen_mor(0), gf]).unwrap();
    assert!(bad.is_faithful() && bad.is_injective_on_objects());
    assert!(!bad.has_3for2());
}

fn arrow_cat() -> Arc<FinCategory> {
    Arc::new(FinCategory::poset(&["0", "1"], &[("u", "0", "1")]).unwrap())
}

#[test]
fn gluing_two_arrows_along_endpoints() {
    let w = Arc::new(FinCategory::discrete(&["p", "q"]));
    let (x, y) = (arrow_cat(), arrow_cat());
    let span = Span::new(
        FunctorMap::new(w.clone(), x.clone(), vec![0, 1], vec![]).unwrap(),
        FunctorMap::new(w, y.clone(), vec![0, 1], vec![]).unwrap(),
    )
    .unwrap();
    let r = pushout(&span).unwrap();
    assert_eq!(r.z().num_objects(), 2);
    assert_eq!(r.z().num_morphisms(), 4);
    assert_eq!(r.z().hom(0, 1).len(), 2);
    let wx = AllowableSequence(vec![Entry { leg: Leg::X, mor: x.gen_mor(0) }]);
    let wy = AllowableSequence(vec![Entry { leg: Leg::Y, mor: y.gen_mor(0) }]);
    assert_ne!(r.reduce_word(&wx).unwrap(), r.reduce_word(&wy).unwrap());
    assert_eq!(r.decide_equal(&wx, &wy, 6).unwrap(), Equality::Distinct);
    assert!(r.verify_amalgamation().passed());
}

#[test]
fn words_through_a_shared_arrow_agree() {
    let w = arrow_cat();
    let x = Arc::new(FinCategory::poset(&["0", "1", "2"], &[("s", "0", "1"), ("t", "1", "2")]).unwrap());
    let y = Arc::new(FinCategory::poset(&["a", "b", "c"], &[("m", "c", "a"), ("n", "a", "b")]).unwrap());
    let fx = FunctorMap::new(w.clone(), x.clone(), vec![0, 1], vec![x.gen_mor(0)]).unwrap();
    let fy = FunctorMap::new(w, y.clone(), vec![0, 1], vec![y.gen_mor(1)]).unwrap();
    let r = pushout(&Span::new(fx, fy).unwrap()).unwrap();
    let ex = AllowableSequence(vec![Entry { leg: Leg::X, mor: x.gen_mor(0) }]);
    let ey = AllowableSequence(vec![Entry { leg: Leg::Y, mor: y.gen_mor(1) }]);
    assert_eq!(r.decide_equal(&ex, &ey, 1).unwrap(), Equality::Equal);
    let long_x = AllowableSequence(vec![Entry { leg: Leg::Y, mor: y.gen_mor(0) }, Entry { leg: Leg::X, mor: x.gen_mor(0) }]);
    let long_y = AllowableSequence(vec![Entry { leg: Leg::Y, mor: y.parse_mor("n.m").unwrap() }]);
    assert_eq!(r.decide_equal(&long_x, &long_y, 2).unwrap(), Equality::Equal);
    assert!(r.verify_amalgamation().passed());
}

#[test]
fn free_source_on_two_copies_of_a_point() {
    let sep = separate_source_sink(&point("y"), &[0, 0], Direction::Source).unwrap();
    let d = &sep.d;
    assert_eq!(d.num_objects(), 4);
    let non_identity = d.num_morphisms() - d.num_objects();
    assert_eq!(non_identity, 6);
    assert_eq!(d.hom(sep.apex, d.object("y").unwrap()).len(), 2);
}

#[test]
fn cone_morphisms_are_unique_composites() {
    let corpus = [
        (point("y"), vec![0, 0]),
        (free(&["1", "2"], &[("h", "1", "2")]), vec![0, 1]),
        (free(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")]), vec![2, 1, 2]),
        (Arc::new(FinCategory::poset(&["1", "2"], &[("h", "1", "2")]).unwrap()), vec![1]),
        (r_category().unwrap(), vec![1, 2]),
    ];
    for (c, ys) in corpus {
        let plus = attach_cone(&c, &ys, Direction::Sink).unwrap();
        let into: usize = ys.iter().map(|&y| c.hom_to(y).len()).sum();
        assert_eq!(plus.cat.num_morphisms(), c.num_morphisms() + 1 + into);
        let minus = attach_cone(&c, &ys, Direction::Source).unwrap();
        let out: usize = ys.iter().map(|&y| c.hom_from(y).len()).sum();
        assert_eq!(minus.cat.num_morphisms(), c.num_morphisms() + 1 + out);
    }
}

#[test]
fn plus_separation_of_a_point() {
    let sep = separate_source_sink(&point("y"), &[0], Direction::Sink).unwrap();
    let d = &sep.d;
    let expected = free(&["y1", "x1", "v"], &[("e1", "x1", "y1"), ("b1", "x1", "v")]);
    assert!(reflekt::catcore::find_isomorphism(d, &expected).is_some());
    let e = sep.e[0];
    assert!(sep.u.cod().is_identity(sep.u.on_mor(e)));
}

#[test]
fn chain_square_commutes() {
    let sh = reflection_chain_shapes(&point("y"), &[0, 0]).unwrap();
    let around = sh.r.after(&sh.l_cube).unwrap();
    let other = sh.j_rn.after(&sh.q).unwrap();
    assert_eq!(around.obj_map(), other.obj_map());
    for g in 0..sh.l_cube.dom().num_gens() {
        assert_eq!(around.on_gen(g), other.on_gen(g));
    }
    assert!(sh.l_square.is_injective_on_objects() && sh.m.is_injective_on_objects());
}

#[test]
fn evaluation_is_restriction_to_a_point() {
    let f = PrimeField::new(7).unwrap();
    let b = free(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]);
    let x = Representation::projective(b.clone(), f, 0);
    for o in 0..b.num_objects() {
        let at = FunctorMap::new(point("*"), b.clone(), vec![o], vec![]).unwrap();
        assert_eq!(restrict(&at, &x).unwrap().dims(), &[x.dim(o)]);
    }
    let classes: BTreeSet<usize> = (0..3).map(|o| x.dim(o)).collect();
    assert_eq!(classes, BTreeSet::from([1]));
}
