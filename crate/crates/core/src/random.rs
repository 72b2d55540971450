//! Seeded generators for categories, functors, representations and complexes.
//!
//! Every instance of a suite draws from its own ChaCha stream, so instance
//! `i` of seed `s` is reproducible in isolation.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amalgam::{AmalgamResult, Leg, Span};
use crate::catcore::{Bound, FinCategory, FunctorMap, GenId, ObjId, Quiver};
use crate::error::{AmalgamError, CategoryError, RepError};
use crate::field::Field;
use crate::homotopy::ComplexRep;
use crate::linalg::Matrix;
use crate::linrep::{combine, hom_space, kan_extension, random_matrix, KanSide, Representation};

/// The stream for instance `index` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Shape of a random acyclic quiver.
#[derive(Clone, Copy, Debug)]
pub struct QuiverSpec {
    pub min_objects: usize,
    pub max_objects: usize,
    pub max_arrows: usize,
    /// Chance, in percent, of identifying all parallel paths.
    pub thin_percent: u32,
}

/// A quiver on `o1..on` with arrows `f1..fk` running from lower to higher index.
pub fn random_quiver(spec: QuiverSpec, rng: &mut ChaCha8Rng) -> Quiver {
    let n = rng.random_range(spec.min_objects..=spec.max_objects);
    let names: Vec<String> = (1..=n).map(|i| format!("o{i}")).collect();
    let mut q = Quiver::new(&names, &[]).expect("fresh vertices");
    if n < 2 {
        return q;
    }
    let k = rng.random_range(0..=spec.max_arrows);
    for a in 1..=k {
        let s = rng.random_range(0..n - 1);
        let t = rng.random_range(s + 1..n);
        q.add_arrow(&format!("f{a}"), &names[s], &names[t]).expect("fresh arrow");
    }
    q
}

/// Free or thin category on a random acyclic quiver.
pub fn random_category(spec: QuiverSpec, rng: &mut ChaCha8Rng) -> Arc<FinCategory> {
    let q = random_quiver(spec, rng);
    let thin = rng.random_range(0..100) < spec.thin_percent;
    Arc::new(if thin {
        let arrows: Vec<(String, String, String)> = q
            .arrows()
            .iter()
            .map(|a| (a.name.clone(), q.vertices()[a.src].clone(), q.vertices()[a.tgt].clone()))
            .collect();
        FinCategory::poset(q.vertices(), &arrows).expect("acyclic poset")
    } else {
        FinCategory::free(&q, Bound::default()).expect("acyclic quiver")
    })
}

/// A random category with at most `max_morphisms` morphisms, identities included.
pub fn random_small_category(spec: QuiverSpec, max_morphisms: usize, rng: &mut ChaCha8Rng) -> Arc<FinCategory> {
    loop {
        let c = random_category(spec, rng);
        if c.num_morphisms() <= max_morphisms {
            return c;
        }
    }
}

/// Random objects of `c`, repetitions allowed.
pub fn random_objects(c: &FinCategory, min: usize, max: usize, rng: &mut ChaCha8Rng) -> Vec<ObjId> {
    let n = rng.random_range(min..=max);
    (0..n).map(|_| rng.random_range(0..c.num_objects())).collect()
}

/// Span `X ← W → Y` with `W` discrete and both legs injective on objects.
pub fn random_discrete_span(
    x: &Arc<FinCategory>,
    y: &Arc<FinCategory>,
    max_w: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Span, AmalgamError> {
    let k = rng.random_range(0..=max_w.min(x.num_objects()).min(y.num_objects()));
    let names: Vec<String> = (1..=k).map(|i| format!("p{i}")).collect();
    let w = Arc::new(FinCategory::discrete(&names));
    let ox = sample(rng, x.num_objects(), k).into_vec();
    let oy = sample(rng, y.num_objects(), k).into_vec();
    let fx = FunctorMap::new(w.clone(), x.clone(), ox, Vec::new())?;
    let fy = FunctorMap::new(w, y.clone(), oy, Vec::new())?;
    Span::new(fx, fy)
}

/// A functor from a fresh free acyclic category into `b`: objects land
/// anywhere and each arrow picks a morphism between the chosen images.
pub fn random_functor(b: &Arc<FinCategory>, max_objects: usize, max_arrows: usize, rng: &mut ChaCha8Rng) -> FunctorMap {
    let n = rng.random_range(1..=max_objects);
    let obj: Vec<ObjId> = (0..n).map(|_| rng.random_range(0..b.num_objects())).collect();
    let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let mut q = Quiver::new(&names, &[]).expect("fresh vertices");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (s + 1..n).map(move |t| (s, t)))
        .filter(|&(s, t)| !b.hom(obj[s], obj[t]).is_empty())
        .collect();
    let mut gens = Vec::new();
    if !pairs.is_empty() {
        for a in 1..=rng.random_range(0..=max_arrows) {
            let (s, t) = pairs[rng.random_range(0..pairs.len())];
            q.add_arrow(&format!("g{a}"), &names[s], &names[t]).expect("fresh arrow");
            let homs = b.hom(obj[s], obj[t]);
            gens.push(homs[rng.random_range(0..homs.len())]);
        }
    }
    let a = Arc::new(FinCategory::free(&q, Bound::default()).expect("acyclic quiver"));
    FunctorMap::new(a, b.clone(), obj, gens).expect("endpoints chosen from hom-sets")
}

fn quotient_from_free(base: &Arc<FinCategory>) -> Result<FunctorMap, CategoryError> {
    let free = Arc::new(FinCategory::free(&base.quiver(), Bound::hom(256))?);
    let gens = (0..base.num_gens()).map(|g| base.gen_mor(g)).collect();
    FunctorMap::new(free, base.clone(), (0..base.num_objects()).collect(), gens)
}

/// A random representation with every dimension at most `max_dim`.
///
/// Unconstrained matrices are tried first; for bases with relations the
/// left Kan extension along the quotient from the free category supplies
/// representations that satisfy them.
pub fn random_rep<F: Field>(base: &Arc<FinCategory>, field: &F, max_dim: usize, rng: &mut ChaCha8Rng) -> Representation<F> {
    for _ in 0..4 {
        let dims: Vec<usize> = (0..base.num_objects()).map(|_| rng.random_range(0..=max_dim)).collect();
        let gens = base
            .gens()
            .iter()
            .map(|a| random_matrix(field, dims[a.tgt], dims[a.src], rng))
            .collect();
        if let Ok(r) = Representation::new(base.clone(), field.clone(), dims, gens) {
            return r;
        }
    }
    if let Ok(q) = quotient_from_free(base) {
        for _ in 0..32 {
            let free = random_rep(q.dom(), field, max_dim, rng);
            if let Ok(ext) = kan_extension(&q, &free, KanSide::Left) {
                if ext.value.dims().iter().all(|&d| d <= max_dim) {
                    return ext.value;
                }
            }
        }
    }
    Representation::zero(base.clone(), field.clone())
}

/// A random square invertible matrix.
pub fn random_invertible<F: Field>(field: &F, n: usize, rng: &mut ChaCha8Rng) -> Matrix<F> {
    loop {
        let m = random_matrix(field, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A representation of the pushout `Z` of a discrete span that restricts to
/// `base` along the first leg. Generators of the second leg listed in
/// `invertible` receive invertible matrices.
pub fn random_glued_rep<F: Field>(
    r: &AmalgamResult,
    base: &Representation<F>,
    max_dim: usize,
    invertible: &[GenId],
    rng: &mut ChaCha8Rng,
) -> Result<Representation<F>, RepError> {
    let z = r.z();
    let y = r.span().y();
    let field = base.field();
    let mut dims: Vec<Option<usize>> = vec![None; z.num_objects()];
    for co in 0..r.span().x().num_objects() {
        dims[r.gx().obj(co)] = Some(base.dim(co));
    }
    for &g in invertible {
        let a = &y.gens()[g];
        let (s, t) = (r.gy().obj(a.src), r.gy().obj(a.tgt));
        match (dims[s], dims[t]) {
            (Some(d), None) => dims[t] = Some(d),
            (None, Some(d)) => dims[s] = Some(d),
            (None, None) => {
                let d = rng.random_range(0..=max_dim);
                dims[s] = Some(d);
                dims[t] = Some(d);
            }
            _ => {}
        }
    }
    let dims: Vec<usize> = dims.into_iter().map(|d| d.unwrap_or_else(|| rng.random_range(0..=max_dim))).collect();
    let gens = (0..z.num_gens())
        .map(|g| {
            let en = r.gen_entry(g);
            let a = &z.gens()[g];
            match en.leg {
                Leg::X => base.matrix(en.mor).clone(),
                Leg::Y => {
                    let yg = y.mor(en.mor).word[0];
                    if invertible.contains(&yg) {
                        random_invertible(field, dims[a.tgt], rng)
                    } else {
                        random_matrix(field, dims[a.tgt], dims[a.src], rng)
                    }
                }
            }
        })
        .collect();
    Representation::new(z.clone(), field.clone(), dims, gens)
}

/// A random bounded complex over `base` in degrees `lo..=hi`.
///
/// Degrees are random representations; each differential is a random
/// natural transformation killed by the one below it.
pub fn random_complex<F: Field>(
    base: &Arc<FinCategory>,
    field: &F,
    lo: i32,
    hi: i32,
    max_dim: usize,
    rng: &mut ChaCha8Rng,
) -> Result<ComplexRep<F>, RepError> {
    let degrees: Vec<Representation<F>> = (lo..=hi).map(|_| random_rep(base, field, max_dim, rng)).collect();
    let mut d: Vec<Vec<Matrix<F>>> = Vec::new();
    for k in 0..degrees.len().saturating_sub(1) {
        let (src, tgt) = (&degrees[k + 1], &degrees[k]);
        let basis = hom_space(src, tgt)?;
        let allowed: Vec<Vec<F::Elem>> = match d.last() {
            None => (0..basis.len())
                .map(|i| (0..basis.len()).map(|j| if i == j { field.one() } else { field.zero() }).collect())
                .collect(),
            Some(below) => {
                let cols: Vec<Vec<F::Elem>> = basis
                    .iter()
                    .map(|t| {
                        (0..base.num_objects())
                            .flat_map(|o| below[o].mul(t.component(o)).to_rows().into_iter().flatten())
                            .collect()
                    })
                    .collect();
                let rows = cols.first().map_or(0, |c| c.len());
                let mut m = Matrix::zeros(field, rows, basis.len());
                for (j, col) in cols.iter().enumerate() {
                    for (i, v) in col.iter().enumerate() {
                        m.set(i, j, v.clone());
                    }
                }
                let ker = m.kernel();
                (0..ker.cols()).map(|c| (0..ker.rows()).map(|r| ker.get(r, c).clone()).collect()).collect()
            }
        };
        let mut coeffs = vec![field.zero(); basis.len()];
        for v in &allowed {
            let s = field.from_i64(rng.random_range(-2..=2));
            for (c, x) in coeffs.iter_mut().zip(v) {
                *c = field.add(c, &field.mul(&s, x));
            }
        }
        let t = combine(src, tgt, &basis, &coeffs)?;
        d.push(t.components().to_vec());
    }
    ComplexRep::new(lo, degrees, d)
}
