use std::sync::Arc;

use serde::Serialize;

use super::{close, Arrow, Bound, FinCategory, FunctorMap, MorId, ObjId};
use crate::error::CategoryError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceSide {
    /// `(u/b)`: pairs `(a, f: u(a) → b)`.
    Under,
    /// `(b/u)`: pairs `(a, f: b → u(a))`.
    Over,
}

#[derive(Clone, Debug)]
pub struct SliceCategory {
    pub cat: Arc<FinCategory>,
    pub side: SliceSide,
    pub base: ObjId,
    /// `(a, f)` for every object, in the order of `cat`.
    pub objects: Vec<(ObjId, MorId)>,
    /// The forgetful functor to the domain of `u`.
    pub projection: FunctorMap,
}

impl SliceCategory {
    /// Structure morphisms assemble into a transformation between `u∘p` and
    /// the constant functor at the base object.
    pub fn check_structure(&self, u: &FunctorMap) -> bool {
        let b = u.cod();
        self.cat.morphisms().iter().enumerate().all(|(m, mm)| {
            let h = u.on_mor(self.projection.on_mor(m));
            let (_, fs) = self.objects[mm.src];
            let (_, ft) = self.objects[mm.tgt];
            match self.side {
                SliceSide::Under => b.compose(ft, h) == Some(fs),
                SliceSide::Over => b.compose(h, fs) == Some(ft),
            }
        })
    }
}

pub fn slice(u: &FunctorMap, b: ObjId, side: SliceSide) -> Result<SliceCategory, CategoryError> {
    let a = u.dom().clone();
    let bc = u.cod().clone();
    if b >= bc.num_objects() {
        return Err(CategoryError::UnknownObject(format!("#{b}")));
    }
    let mut objects = Vec::new();
    let mut names = Vec::new();
    for x in 0..a.num_objects() {
        let homs = match side {
            SliceSide::Under => bc.hom(u.obj(x), b),
            SliceSide::Over => bc.hom(b, u.obj(x)),
        };
        for &f in homs {
            objects.push((x, f));
            names.push(format!("{}|{}", a.object_name(x), bc.mor_name(f)));
        }
    }
    let index = |x: ObjId, f: MorId| objects.iter().position(|&p| p == (x, f)).expect("slice object");
    let mut gens = Vec::new();
    let mut lifts = Vec::new();
    for (g, arr) in a.gens().iter().enumerate() {
        let ug = u.on_gen(g);
        match side {
            SliceSide::Under => {
                for &f in bc.hom(u.obj(arr.tgt), b) {
                    let fs = bc.compose(f, ug).expect("composable");
                    gens.push(Arrow {
                        name: format!("{}|{}", arr.name, bc.mor_name(f)),
                        src: index(arr.src, fs),
                        tgt: index(arr.tgt, f),
                    });
                    lifts.push(g);
                }
            }
            SliceSide::Over => {
                for &f in bc.hom(b, u.obj(arr.src)) {
                    let ft = bc.compose(ug, f).expect("composable");
                    gens.push(Arrow {
                        name: format!("{}|{}", arr.name, bc.mor_name(f)),
                        src: index(arr.src, f),
                        tgt: index(arr.tgt, ft),
                    });
                    lifts.push(g);
                }
            }
        }
    }
    let gen_tgts: Vec<ObjId> = gens.iter().map(|g| g.tgt).collect();
    let (cat, _) = close(
        names,
        gens,
        |o| (a.identity(objects[o].0), o, o),
        |&(h, s, _), gi| {
            let h2 = a.act(h, lifts[gi]).expect("lift composable");
            Ok::<_, CategoryError>((h2, s, gen_tgts[gi]))
        },
        Bound::default(),
    )?;
    let cat = Arc::new(cat);
    let obj = objects.iter().map(|&(x, _)| x).collect();
    let pg = lifts.iter().map(|&g| a.gen_mor(g)).collect();
    let projection = FunctorMap::new(cat.clone(), a, obj, pg)?;
    Ok(SliceCategory {
        cat,
        side,
        base: b,
        objects,
        projection,
    })
}

pub fn product(c1: &FinCategory, c2: &FinCategory) -> Result<FinCategory, CategoryError> {
    let (n1, n2) = (c1.num_objects(), c2.num_objects());
    let mut names = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            names.push(format!("{}*{}", c1.object_name(i), c2.object_name(j)));
        }
    }
    let mut gens = Vec::new();
    let mut kinds = Vec::new();
    for (g, arr) in c1.gens().iter().enumerate() {
        for j in 0..n2 {
            gens.push(Arrow {
                name: format!("{}*{}", arr.name, c2.object_name(j)),
                src: arr.src * n2 + j,
                tgt: arr.tgt * n2 + j,
            });
            kinds.push((0u8, g));
        }
    }
    for i in 0..n1 {
        for (g, arr) in c2.gens().iter().enumerate() {
            gens.push(Arrow {
                name: format!("{}*{}", c1.object_name(i), arr.name),
                src: i * n2 + arr.src,
                tgt: i * n2 + arr.tgt,
            });
            kinds.push((1u8, g));
        }
    }
    let (cat, _) = close(
        names,
        gens,
        |o| (c1.identity(o / n2), c2.identity(o % n2)),
        |&(m1, m2), gi| {
            let (side, g) = kinds[gi];
            Ok::<_, CategoryError>(if side == 0 {
                (c1.act(m1, g).expect("composable"), m2)
            } else {
                (m1, c2.act(m2, g).expect("composable"))
            })
        },
        Bound::default(),
    )?;
    Ok(cat)
}

pub fn opposite(c: &FinCategory) -> FinCategory {
    let gens: Vec<Arrow> = c
        .gens()
        .iter()
        .map(|a| Arrow {
            name: format!("{}^op", a.name),
            src: a.tgt,
            tgt: a.src,
        })
        .collect();
    let (cat, _) = close(
        c.objects().to_vec(),
        gens,
        |o| c.identity(o),
        |&m, g| Ok::<_, CategoryError>(c.compose(m, c.gen_mor(g)).expect("composable")),
        Bound {
            per_hom: usize::MAX,
            total: usize::MAX,
        },
    )
    .expect("opposite has the same size");
    cat
}

/// Binary product, or the opposite category when `c2` is absent.
pub fn product_and_opposite(c1: &FinCategory, c2: Option<&FinCategory>) -> Result<FinCategory, CategoryError> {
    match c2 {
        Some(c2) => product(c1, c2),
        None => Ok(opposite(c1)),
    }
}

/// Morphism `(m1, m2)` of `product(c1, c2)`.
pub fn product_mor(p: &FinCategory, c1: &FinCategory, c2: &FinCategory, m1: MorId, m2: MorId) -> MorId {
    let n2 = c2.num_objects();
    let g1 = c1.num_gens();
    let (s1, t2) = (c1.src(m1), c2.tgt(m2));
    let mut word: Vec<usize> = c2.mor(m2).word.iter().map(|&g| g1 * n2 + s1 * c2.num_gens() + g).collect();
    word.extend(c1.mor(m1).word.iter().map(|&g| g * n2 + t2));
    p.path_mor(s1 * n2 + c2.src(m2), &word).expect("product path")
}

/// Functor `f1 × f2` between product categories.
pub fn product_functor(
    f1: &FunctorMap,
    f2: &FunctorMap,
    dom: Arc<FinCategory>,
    cod: Arc<FinCategory>,
) -> Result<FunctorMap, CategoryError> {
    let (a1, a2) = (f1.dom(), f2.dom());
    let (b1, b2) = (f1.cod(), f2.cod());
    let (n2, m2) = (a2.num_objects(), b2.num_objects());
    let obj = (0..a1.num_objects() * n2)
        .map(|o| f1.obj(o / n2) * m2 + f2.obj(o % n2))
        .collect();
    let mut gens = Vec::new();
    for g in 0..a1.num_gens() {
        for j in 0..n2 {
            gens.push(product_mor(&cod, b1, b2, f1.on_gen(g), b2.identity(f2.obj(j))));
        }
    }
    for i in 0..a1.num_objects() {
        for g in 0..a2.num_gens() {
            gens.push(product_mor(&cod, b1, b2, b1.identity(f1.obj(i)), f2.on_gen(g)));
        }
    }
    FunctorMap::new(dom, cod, obj, gens)
}

/// Disjoint union of categories together with the inclusions.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub cat: Arc<FinCategory>,
    pub injections: Vec<FunctorMap>,
    /// Part and morphism behind each morphism of the union.
    pub origin: Vec<(usize, MorId)>,
}

pub fn coproduct(parts: &[Arc<FinCategory>]) -> Result<Coproduct, CategoryError> {
    let mut taken = std::collections::HashSet::new();
    let fresh = |taken: &mut std::collections::HashSet<String>, base: &str| {
        let mut name = base.to_string();
        while !taken.insert(name.clone()) {
            name.push('\'');
        }
        name
    };
    let mut names = Vec::new();
    let mut obj_part = Vec::new();
    let mut offsets = Vec::new();
    for (p, c) in parts.iter().enumerate() {
        offsets.push(names.len());
        for (o, n) in c.objects().iter().enumerate() {
            names.push(fresh(&mut taken, n));
            obj_part.push((p, o));
        }
    }
    let mut gen_taken = std::collections::HashSet::new();
    let mut gens = Vec::new();
    let mut gen_part = Vec::new();
    for (p, c) in parts.iter().enumerate() {
        for (g, a) in c.gens().iter().enumerate() {
            gens.push(Arrow {
                name: fresh(&mut gen_taken, &a.name),
                src: offsets[p] + a.src,
                tgt: offsets[p] + a.tgt,
            });
            gen_part.push(g);
        }
    }
    let gen_owner: Vec<usize> = gens.iter().map(|a| obj_part[a.src].0).collect();
    let (cat, keys) = close(
        names,
        gens,
        |o| (obj_part[o].0, parts[obj_part[o].0].identity(obj_part[o].1)),
        |&(p, m), g| Ok::<_, CategoryError>((p, parts[gen_owner[g]].act(m, gen_part[g]).expect("composable"))),
        Bound {
            per_hom: usize::MAX,
            total: usize::MAX,
        },
    )?;
    let cat = Arc::new(cat);
    let mut injections = Vec::new();
    let mut gstart = 0;
    for (p, c) in parts.iter().enumerate() {
        let obj = (0..c.num_objects()).map(|o| offsets[p] + o).collect();
        let g = (0..c.num_gens()).map(|g| cat.gen_mor(gstart + g)).collect();
        gstart += c.num_gens();
        injections.push(FunctorMap::new(c.clone(), cat.clone(), obj, g)?);
    }
    Ok(Coproduct {
        cat,
        injections,
        origin: keys,
    })
}

/// Full subcategory on the listed objects with its inclusion. Generators are
/// the morphisms that do not factor through two non-identity morphisms of
/// the subcategory, plus whatever else is needed to generate it.
pub fn full_subcategory(c: &Arc<FinCategory>, objs: &[ObjId]) -> Result<FunctorMap, CategoryError> {
    let pos = |o: ObjId| objs.iter().position(|&x| x == o);
    let mut inside: Vec<MorId> = Vec::new();
    for &a in objs {
        for &b in objs {
            inside.extend(c.hom(a, b).iter().copied().filter(|&m| !c.is_identity(m)));
        }
    }
    let decomposable = |m: MorId| {
        inside.iter().any(|&f| {
            c.src(f) == c.src(m)
                && inside
                    .iter()
                    .any(|&g| c.src(g) == c.tgt(f) && c.compose(g, f) == Some(m))
        })
    };
    let mut chosen: Vec<MorId> = inside.iter().copied().filter(|&m| !decomposable(m)).collect();
    let names: Vec<String> = objs.iter().map(|&o| c.object_name(o).to_string()).collect();
    loop {
        let gens: Vec<Arrow> = chosen
            .iter()
            .map(|&m| Arrow {
                name: if c.mor(m).word.len() == 1 {
                    c.gens()[c.mor(m).word[0]].name.clone()
                } else {
                    format!("m{m}")
                },
                src: pos(c.src(m)).expect("inside"),
                tgt: pos(c.tgt(m)).expect("inside"),
            })
            .collect();
        let (sub, keys) = close(
            names.clone(),
            gens,
            |o| c.identity(objs[o]),
            |&m, g| Ok::<_, CategoryError>(c.compose(chosen[g], m).expect("composable")),
            Bound {
                per_hom: usize::MAX,
                total: usize::MAX,
            },
        )?;
        if let Some(&missing) = inside.iter().find(|m| !keys.contains(m)) {
            chosen.push(missing);
            continue;
        }
        let sub = Arc::new(sub);
        let gm = chosen.clone();
        return FunctorMap::new(sub, c.clone(), objs.to_vec(), gm);
    }
}
