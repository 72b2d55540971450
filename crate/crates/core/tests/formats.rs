use std::sync::Arc;

use proptest::prelude::*;

use reflekt::catcore::{saturate, FinCategory, PresentedCategory, Quiver, SaturationOutcome};
use reflekt::cli::{load_category, parse_cat, parse_crep, parse_rep, parse_span, write_cat, write_crep, write_rep, write_span};
use reflekt::field::{PrimeField, Rationals};
use reflekt::random::{instance_rng, random_category, random_complex, random_discrete_span, random_rep, QuiverSpec};

const SPEC: QuiverSpec = QuiverSpec { min_objects: 1, max_objects: 4, max_arrows: 5, thin_percent: 40 };

fn category(seed: u64) -> Arc<FinCategory> {
    let mut rng = instance_rng(seed, 0);
    loop {
        let c = random_category(SPEC, &mut rng);
        if c.num_morphisms() <= 20 {
            return c;
        }
    }
}

/// The presentation of `c` with every generator and object renamed.
fn renamed(c: &FinCategory, names: &[String]) -> PresentedCategory {
    let p = c.presentation();
    let q = p.quiver();
    let label = |i: usize| format!("{}{i}", names[i % names.len()]);
    let verts: Vec<String> = (0..q.vertices().len()).map(label).collect();
    let arrows: Vec<(String, String, String)> = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| (label(k + 17), verts[a.src].clone(), verts[a.tgt].clone()))
        .collect();
    PresentedCategory::new(Quiver::new(&verts, &arrows).unwrap(), p.relations().to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn categories_round_trip(seed in any::<u64>(), names in proptest::collection::vec("[a-z_ .:#=>\\-id]{0,5}", 1..4)) {
        let c = category(seed);
        let p = renamed(&c, &names);
        let text = write_cat(&p);
        let back = parse_cat(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &p);
        match (saturate(&back, 64), saturate(&p, 64)) {
            (SaturationOutcome::Finite(a), SaturationOutcome::Finite(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "saturation failed"),
        }
        let again = load_category(&reflekt::cli::category_text(&c), 64).unwrap();
        prop_assert_eq!(&*again, &*c);
    }

    #[test]
    fn representations_round_trip(seed in any::<u64>()) {
        let c = category(seed);
        let mut rng = instance_rng(seed, 1);
        let f5 = PrimeField::new(5).unwrap();
        let x = random_rep(&c, &f5, 3, &mut rng);
        prop_assert_eq!(parse_rep(&write_rep(&x), &c, &f5).unwrap(), x);
        let q = random_rep(&c, &Rationals, 2, &mut rng);
        prop_assert_eq!(parse_rep(&write_rep(&q), &c, &Rationals).unwrap(), q);
    }

    #[test]
    fn complexes_round_trip(seed in any::<u64>()) {
        let c = category(seed);
        let mut rng = instance_rng(seed, 2);
        let f = PrimeField::new(7).unwrap();
        let x = random_complex(&c, &f, -1, 2, 2, &mut rng).unwrap();
        prop_assert_eq!(parse_crep(&write_crep(&x), &c, &f).unwrap(), x);
    }

    #[test]
    fn spans_round_trip(seed in any::<u64>()) {
        let x = category(seed);
        let y = category(seed ^ 0xA5A5);
        let mut rng = instance_rng(seed, 3);
        let s = random_discrete_span(&x, &y, 3, &mut rng).unwrap();
        let text = write_span(&s);
        let back = parse_span(&text, 64).unwrap();
        prop_assert_eq!(back.fx().obj_map(), s.fx().obj_map());
        prop_assert_eq!(back.fy().obj_map(), s.fy().obj_map());
        prop_assert_eq!(&**back.x(), &**s.x());
        prop_assert_eq!(write_span(&back), text);
    }
}

fn located(src: &str) -> (usize, usize) {
    let e = parse_cat(src).unwrap_err();
    (e.line, e.column)
}

#[test]
fn category_errors_are_located() {
    assert_eq!(located("objects: a b\narrows:\n  f: a => b\n").0, 3);
    assert_eq!(located("objects: a a\n").0, 1);
    assert_eq!(located("objects: a b\narrows:\n  f: a -> b\nrelations:\n  f = g\n").0, 5);
    assert_eq!(located("objects: a\n# note\nbogus:\n"), (3, 6));
    assert_eq!(located("# header\nstray\n"), (2, 1));
}

#[test]
fn comments_and_quoted_names() {
    let c = load_category("objects: `x y` `id_z` # two objects\narrows:\n  `f.g`: `x y` -> `id_z`\n", 16).unwrap();
    assert_eq!(c.num_objects(), 2);
    assert_eq!(c.num_morphisms(), 3);
    assert!(c.object("x y").is_ok());
}

#[test]
fn rep_errors_are_located() {
    let c = load_category("objects: a b\narrows:\n  f: a -> b\n", 16).unwrap();
    let f = PrimeField::new(3).unwrap();
    let e = parse_rep("field F3\ndim a = 1\ndim b = 1\nmatrix f = [[1, 2]]\n", &c, &f).unwrap_err().to_string();
    assert!(e.starts_with("line 4, column"), "{e}");
    assert!(e.contains("expected a 1x1 matrix, got 1x2"), "{e}");
    let e = parse_rep("field F3\ndim c = 1\n", &c, &f).unwrap_err().to_string();
    assert!(e.starts_with("line 2"), "{e}");
    let e = parse_rep("field F3\ndim a = 1\ndim b = 1\nmatrix f = [[x]]\n", &c, &f).unwrap_err().to_string();
    assert!(e.starts_with("line 4"), "{e}");
}

#[test]
fn complex_differentials_must_square_to_zero() {
    let c = load_category("objects: a\n", 4).unwrap();
    let f = PrimeField::new(2).unwrap();
    let good = "field F2\ndegrees 0..1\ndegree 0\n  dim a = 1\ndegree 1\n  dim a = 1\ndifferential 1\n  d a = [[1]]\n";
    let x = parse_crep(good, &c, &f).unwrap();
    assert_eq!(x.dim(0, 1), 1);
    assert_eq!(write_crep(&x), good);
}
