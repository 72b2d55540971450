//! Named constructions built from pushouts: free oriented gluings, attached
//! sources and sinks, cube shapes, the invertible square `R` and the chain of
//! shapes used by the reflection.

use std::sync::Arc;

use serde::Serialize;

use crate::amalgam::{pushout, AmalgamResult, Leg, Span};
use crate::catcore::{
    coproduct, find_isomorphism, full_subcategory, product, product_functor, saturate, Bound, Coproduct,
    FinCategory, FunctorMap, MorId, ObjId, Path, PresentedCategory, Quiver,
};
use crate::error::{CategoryError, GlueError};

fn arc(c: FinCategory) -> Arc<FinCategory> {
    Arc::new(c)
}

fn point(name: &str) -> Arc<FinCategory> {
    arc(FinCategory::discrete(&[name]))
}

fn check(cond: bool, what: impl Into<String>) -> Result<(), GlueError> {
    if cond {
        Ok(())
    } else {
        Err(GlueError::Check(what.into()))
    }
}

fn verified(r: AmalgamResult) -> Result<AmalgamResult, GlueError> {
    let rep = r.verify_amalgamation();
    if rep.passed() {
        Ok(r)
    } else {
        Err(GlueError::Check(format!("not an amalgamation: {}", rep.failures.join(", "))))
    }
}

/// Functor into a thin category determined by its object map.
pub fn thin_functor(dom: &Arc<FinCategory>, cod: &Arc<FinCategory>, obj: Vec<ObjId>) -> Result<FunctorMap, CategoryError> {
    let mut gens = Vec::new();
    for a in dom.gens() {
        let hom = cod.hom(obj[a.src], obj[a.tgt]);
        if hom.len() != 1 {
            return Err(CategoryError::InvalidFunctor(format!("no unique image for `{}`", a.name)));
        }
        gens.push(hom[0]);
    }
    FunctorMap::new(dom.clone(), cod.clone(), obj, gens)
}

/// Functor out of a discrete category.
fn objects_functor(dom: &Arc<FinCategory>, cod: &Arc<FinCategory>, obj: Vec<ObjId>) -> Result<FunctorMap, CategoryError> {
    FunctorMap::new(dom.clone(), cod.clone(), obj, Vec::new())
}

/// `n` disjoint copies of `[1]` with arrows named by `names`.
fn arrows_category(names: &[String]) -> Arc<FinCategory> {
    let objs: Vec<String> = (0..names.len()).flat_map(|k| [format!("s{k}"), format!("t{k}")]).collect();
    let arrows: Vec<(String, String, String)> = names
        .iter()
        .enumerate()
        .map(|(k, n)| (n.clone(), format!("s{k}"), format!("t{k}")))
        .collect();
    arc(FinCategory::poset(&objs, &arrows).expect("disjoint arrows"))
}

#[derive(Clone, Debug)]
pub struct GluingResult {
    pub a1: Arc<FinCategory>,
    pub a2: Arc<FinCategory>,
    pub s: Vec<ObjId>,
    pub t: Vec<ObjId>,
    pub a: Arc<FinCategory>,
    pub i1: FunctorMap,
    pub i2: FunctorMap,
    /// `β_k : i1(s_k) → i2(t_k)`.
    pub beta: Vec<MorId>,
    pub pushout: AmalgamResult,
    parts: Coproduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StandardFactorization {
    /// Zero-based type.
    pub k: usize,
    pub f1: MorId,
    pub f2: MorId,
}

pub fn free_oriented_gluing(
    a1: &Arc<FinCategory>,
    a2: &Arc<FinCategory>,
    s: &[ObjId],
    t: &[ObjId],
) -> Result<GluingResult, GlueError> {
    let names: Vec<String> = (1..=s.len()).map(|k| format!("beta{k}")).collect();
    free_oriented_gluing_named(a1, a2, s, t, &names)
}

/// Gluing whose new arrows carry the given names.
pub fn free_oriented_gluing_named(
    a1: &Arc<FinCategory>,
    a2: &Arc<FinCategory>,
    s: &[ObjId],
    t: &[ObjId],
    names: &[String],
) -> Result<GluingResult, GlueError> {
    if s.len() != t.len() || names.len() != s.len() {
        return Err(GlueError::LengthMismatch(s.len(), t.len()));
    }
    if let Some(&o) = s.iter().find(|&&o| o >= a1.num_objects()) {
        return Err(GlueError::Range(format!("source object #{o}")));
    }
    if let Some(&o) = t.iter().find(|&&o| o >= a2.num_objects()) {
        return Err(GlueError::Range(format!("target object #{o}")));
    }
    let n = s.len();
    let parts = coproduct(&[a1.clone(), a2.clone()])?;
    let wnames: Vec<String> = (0..n).flat_map(|k| [format!("s{k}"), format!("t{k}")]).collect();
    let w = arc(FinCategory::discrete(&wnames));
    let ox: Vec<ObjId> = (0..n)
        .flat_map(|k| [parts.injections[0].obj(s[k]), parts.injections[1].obj(t[k])])
        .collect();
    let ys = arrows_category(names);
    let fx = objects_functor(&w, &parts.cat, ox)?;
    let fy = objects_functor(&w, &ys, (0..2 * n).collect())?;
    let r = pushout(&Span::new(fx, fy)?)?;
    let a = r.z().clone();
    let i1 = r.gx().after(&parts.injections[0])?;
    let i2 = r.gx().after(&parts.injections[1])?;
    let beta = (0..n).map(|k| r.gy().on_gen(k)).collect();
    Ok(GluingResult {
        a1: a1.clone(),
        a2: a2.clone(),
        s: s.to_vec(),
        t: t.to_vec(),
        a,
        i1,
        i2,
        beta,
        pushout: r,
        parts,
    })
}

impl GluingResult {
    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// The functor between gluings induced by `u1 : A1 → A1'` and
    /// `u2 : A2 → A2'` compatible with the attaching objects.
    pub fn induced(&self, target: &GluingResult, u1: &FunctorMap, u2: &FunctorMap) -> Result<FunctorMap, GlueError> {
        check(self.n() == target.n(), "gluings have different numbers of arrows")?;
        for k in 0..self.n() {
            check(u1.obj(self.s[k]) == target.s[k], "first functor does not preserve sources")?;
            check(u2.obj(self.t[k]) == target.t[k], "second functor does not preserve targets")?;
        }
        let (p, q) = (&self.parts, &target.parts);
        let mut obj = Vec::new();
        for o in 0..p.cat.num_objects() {
            let (part, m) = p.origin[p.cat.identity(o)];
            let (u, inj) = if part == 0 { (u1, &q.injections[0]) } else { (u2, &q.injections[1]) };
            obj.push(inj.obj(u.obj(self.parts_cat(part).src(m))));
        }
        let mut gens = Vec::new();
        for g in 0..p.cat.num_gens() {
            let (part, m) = p.origin[p.cat.gen_mor(g)];
            let (u, inj) = if part == 0 { (u1, &q.injections[0]) } else { (u2, &q.injections[1]) };
            gens.push(inj.on_mor(u.on_mor(m)));
        }
        let h = FunctorMap::new(p.cat.clone(), q.cat.clone(), obj, gens)?;
        let (sy, ty) = (self.pushout.gy().dom(), target.pushout.gy().dom());
        let same = FunctorMap::new(
            sy.clone(),
            ty.clone(),
            (0..sy.num_objects()).collect(),
            (0..sy.num_gens()).map(|g| ty.gen_mor(g)).collect(),
        )?;
        Ok(self.pushout.induced(&target.pushout, &h, &same)?)
    }

    fn parts_cat(&self, part: usize) -> &Arc<FinCategory> {
        if part == 0 {
            &self.a1
        } else {
            &self.a2
        }
    }

    /// Part (0 or 1) and object of that part behind an object of `A`.
    fn side_of(&self, o: ObjId) -> (usize, ObjId) {
        self.in_first(o)
            .map(|x| (0, x))
            .or_else(|| self.in_second(o).map(|x| (1, x)))
            .expect("jointly surjective")
    }

    fn in_first(&self, o: ObjId) -> Option<ObjId> {
        (0..self.a1.num_objects()).find(|&x| self.i1.obj(x) == o)
    }

    fn in_second(&self, o: ObjId) -> Option<ObjId> {
        (0..self.a2.num_objects()).find(|&x| self.i2.obj(x) == o)
    }

    fn parse_parts(&self, m: MorId) -> (usize, MorId) {
        self.parts.origin[m]
    }

    /// The unique `(k, f', f'')` with `f = i2(f'') ∘ β_k ∘ i1(f')`, read off
    /// the normal word of `f`.
    pub fn standard_factorization(&self, f: MorId) -> Result<StandardFactorization, GlueError> {
        let a = &self.a;
        let (ps, x) = self.side_of(a.src(f));
        let (pt, y) = self.side_of(a.tgt(f));
        if ps != 0 || pt != 1 {
            return Err(GlueError::NotCrossing(a.mor_name(f)));
        }
        let word = &self.pushout.word(f).0;
        let k_pos = word
            .iter()
            .position(|e| e.leg == Leg::Y)
            .ok_or_else(|| GlueError::Check(format!("no glued arrow in `{}`", a.mor_name(f))))?;
        let ycat = self.pushout.gy().dom();
        let k = (0..self.n())
            .find(|&k| ycat.gen_mor(k) == word[k_pos].mor)
            .ok_or_else(|| GlueError::Check("unexpected entry".into()))?;
        let f1 = match k_pos {
            0 => self.a1.identity(x),
            _ => {
                let (part, m) = self.parse_parts(word[k_pos - 1].mor);
                check(part == 0, "entry before the glued arrow lies in the second part")?;
                m
            }
        };
        let f2 = match word.get(k_pos + 1) {
            None => self.a2.identity(y),
            Some(e) => {
                let (part, m) = self.parse_parts(e.mor);
                check(part == 1, "entry after the glued arrow lies in the first part")?;
                m
            }
        };
        check(word.len() <= k_pos + 2, "word too long for a cross morphism")?;
        Ok(StandardFactorization { k, f1, f2 })
    }

    /// Every triple composing to `f`, by exhaustive search.
    pub fn factorizations_by_scan(&self, f: MorId) -> Vec<StandardFactorization> {
        let a = &self.a;
        let mut out = Vec::new();
        let (Some(x), Some(y)) = (self.in_first(a.src(f)), self.in_second(a.tgt(f))) else {
            return out;
        };
        for k in 0..self.n() {
            for &f1 in self.a1.hom(x, self.s[k]) {
                for &f2 in self.a2.hom(self.t[k], y) {
                    let c = a
                        .compose(self.beta[k], self.i1.on_mor(f1))
                        .and_then(|m| a.compose(self.i2.on_mor(f2), m));
                    if c == Some(f) {
                        out.push(StandardFactorization { k, f1, f2 });
                    }
                }
            }
        }
        out
    }

    /// Exhaustive check of the structure of a gluing.
    pub fn verify(&self) -> Result<(), GlueError> {
        let a = &self.a;
        for (name, i) in [("i1", &self.i1), ("i2", &self.i2)] {
            check(i.is_injective_on_objects(), format!("{name} not injective on objects"))?;
            check(i.is_faithful() && i.is_full(), format!("{name} not fully faithful"))?;
        }
        for o in 0..a.num_objects() {
            let (f, s) = (self.in_first(o).is_some(), self.in_second(o).is_some());
            check(f != s, format!("object `{}` not in exactly one image", a.object_name(o)))?;
        }
        for y in 0..self.a2.num_objects() {
            for x in 0..self.a1.num_objects() {
                check(
                    a.hom(self.i2.obj(y), self.i1.obj(x)).is_empty(),
                    format!("morphism from `{}` back to `{}`", a.object_name(self.i2.obj(y)), a.object_name(self.i1.obj(x))),
                )?;
                for &f in a.hom(self.i1.obj(x), self.i2.obj(y)) {
                    let scans = self.factorizations_by_scan(f);
                    check(scans.len() == 1, format!("`{}` has {} factorizations", a.mor_name(f), scans.len()))?;
                    check(self.standard_factorization(f)? == scans[0], "normal word disagrees with scan")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Source,
    Sink,
}

/// `C⁻` or `C⁺` with the inclusion of `C` and the new arrows.
#[derive(Clone, Debug)]
pub struct Cone {
    pub base: Arc<FinCategory>,
    pub ys: Vec<ObjId>,
    pub direction: Direction,
    pub cat: Arc<FinCategory>,
    pub inclusion: FunctorMap,
    pub apex: ObjId,
    /// `a_i : v → y_i` or `b_i : y_i → w`.
    pub legs: Vec<MorId>,
    pub pushout: AmalgamResult,
}

fn star(n: usize, dir: Direction) -> Arc<FinCategory> {
    let apex = if dir == Direction::Source { "v" } else { "w" };
    let mut objs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    objs.push(apex.to_string());
    let arrows: Vec<(String, String, String)> = (1..=n)
        .map(|i| match dir {
            Direction::Source => (format!("a{i}"), apex.to_string(), i.to_string()),
            Direction::Sink => (format!("b{i}"), i.to_string(), apex.to_string()),
        })
        .collect();
    arc(FinCategory::poset(&objs, &arrows).expect("star"))
}

/// Source or sink cone of valence `n`.
pub fn cone_shape(n: usize, dir: Direction) -> Arc<FinCategory> {
    star(n, dir)
}

fn discrete_n(n: usize) -> Arc<FinCategory> {
    let names: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    arc(FinCategory::discrete(&names))
}

pub fn attach_cone(c: &Arc<FinCategory>, ys: &[ObjId], dir: Direction) -> Result<Cone, GlueError> {
    if let Some(&o) = ys.iter().find(|&&o| o >= c.num_objects()) {
        return Err(GlueError::Range(format!("object #{o}")));
    }
    let n = ys.len();
    let w = discrete_n(n);
    let st = star(n, dir);
    let fx = objects_functor(&w, c, ys.to_vec())?;
    let fy = objects_functor(&w, &st, (0..n).collect())?;
    let r = pushout(&Span::new(fx, fy)?)?;
    let apex = r.gy().obj(n);
    let legs = (0..n).map(|i| r.gy().on_gen(i)).collect();
    Ok(Cone {
        base: c.clone(),
        ys: ys.to_vec(),
        direction: dir,
        cat: r.z().clone(),
        inclusion: r.gx().clone(),
        apex,
        legs,
        pushout: r,
    })
}

/// `D⁻ → C⁻` or `D⁺ → C⁺` separating the new arrows from `C`.
#[derive(Clone, Debug)]
pub struct Separated {
    pub cone: Cone,
    pub d: Arc<FinCategory>,
    pub j: FunctorMap,
    pub u: FunctorMap,
    pub apex: ObjId,
    pub x: Vec<ObjId>,
    /// `x_i → y_i`.
    pub e: Vec<MorId>,
    /// `v → x_i` or `x_i → v`.
    pub legs: Vec<MorId>,
    pub pushout: AmalgamResult,
}

/// `(n·[1])^◁` for the source case, `Z_n` for the sink case.
pub fn separating_shape(n: usize, dir: Direction) -> Arc<FinCategory> {
    let mut objs: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    objs.extend((1..=n).map(|i| format!("x{i}")));
    objs.push("v".into());
    let mut arrows: Vec<(String, String, String)> = (1..=n).map(|i| (format!("e{i}"), format!("x{i}"), format!("y{i}"))).collect();
    for i in 1..=n {
        arrows.push(match dir {
            Direction::Source => (format!("a{i}"), "v".into(), format!("x{i}")),
            Direction::Sink => (format!("b{i}"), format!("x{i}"), "v".into()),
        });
    }
    arc(FinCategory::poset(&objs, &arrows).expect("separating shape"))
}

pub fn separate_source_sink(c: &Arc<FinCategory>, ys: &[ObjId], dir: Direction) -> Result<Separated, GlueError> {
    let cone = attach_cone(c, ys, dir)?;
    let n = ys.len();
    let w = discrete_n(n);
    let shape = separating_shape(n, dir);
    let fx = objects_functor(&w, c, ys.to_vec())?;
    let fy = objects_functor(&w, &shape, (0..n).collect())?;
    let r = verified(pushout(&Span::new(fx, fy)?)?)?;
    let d = r.z().clone();
    let gy = r.gy();
    let x: Vec<ObjId> = (0..n).map(|i| gy.obj(n + i)).collect();
    let apex = gy.obj(2 * n);
    let e: Vec<MorId> = (0..n).map(|i| gy.on_gen(i)).collect();
    let legs: Vec<MorId> = (0..n).map(|i| gy.on_gen(n + i)).collect();
    let cc = &cone.cat;
    let mut shape_gens = Vec::new();
    for i in 0..n {
        shape_gens.push(cc.identity(cone.inclusion.obj(ys[i])));
    }
    shape_gens.extend(cone.legs.iter().copied());
    let mut shape_obj: Vec<ObjId> = ys.iter().map(|&y| cone.inclusion.obj(y)).collect();
    shape_obj.extend(ys.iter().map(|&y| cone.inclusion.obj(y)));
    shape_obj.push(cone.apex);
    let collapse = FunctorMap::new(shape.clone(), cc.clone(), shape_obj, shape_gens)?;
    let obj = (0..d.num_objects())
        .map(|o| {
            if let Some(i) = x.iter().position(|&xo| xo == o) {
                cone.inclusion.obj(ys[i])
            } else if o == apex {
                cone.apex
            } else {
                let co = (0..c.num_objects()).find(|&co| r.gx().obj(co) == o).expect("object of C");
                cone.inclusion.obj(co)
            }
        })
        .collect();
    let gens = (0..d.num_gens())
        .map(|g| {
            let en = r.gen_entry(g);
            match en.leg {
                Leg::X => cone.inclusion.on_mor(en.mor),
                Leg::Y => collapse.on_mor(en.mor),
            }
        })
        .collect();
    let u = FunctorMap::new(d.clone(), cc.clone(), obj, gens)?;
    Ok(Separated {
        cone,
        j: r.gx().clone(),
        d,
        u,
        apex,
        x,
        e,
        legs,
        pushout: r,
    })
}

impl Separated {
    /// `r : C⁻ → D⁻`, the identity on `C` and `v ↦ v`, sending `a_i` to `e_i ∘ a_i`.
    pub fn section(&self) -> Result<FunctorMap, GlueError> {
        check(self.cone.direction == Direction::Source, "section exists for the source case")?;
        let cone = &self.cone;
        let cc = &cone.cat;
        let d = &self.d;
        let obj = (0..cc.num_objects())
            .map(|o| {
                if o == cone.apex {
                    self.apex
                } else {
                    let co = (0..cone.base.num_objects()).find(|&co| cone.inclusion.obj(co) == o).expect("object of C");
                    self.j.obj(co)
                }
            })
            .collect();
        let gens = (0..cc.num_gens())
            .map(|g| {
                let en = cone.pushout.gen_entry(g);
                match en.leg {
                    Leg::X => self.j.on_mor(en.mor),
                    Leg::Y => {
                        let i = (0..self.legs.len()).find(|&i| cone.legs[i] == cc.gen_mor(g)).expect("leg");
                        d.compose(self.e[i], self.legs[i]).expect("composable")
                    }
                }
            })
            .collect();
        Ok(FunctorMap::new(cc.clone(), d.clone(), obj, gens)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CubeSpec {
    /// `[1]ⁿ`.
    Full,
    /// `[2]ⁿ`.
    Double,
    /// Vertices with at least `k` coordinates equal to one.
    AtLeast { k: usize },
    /// Vertices with exactly `k` coordinates equal to one.
    Exactly { k: usize },
    /// `[1,2]ⁿ` together with the corners inside `[2]ⁿ`.
    CornerI,
}

/// Poset `[m]`.
pub fn chain(m: usize) -> Arc<FinCategory> {
    let objs: Vec<String> = (0..=m).map(|i| i.to_string()).collect();
    let names = ["u", "a", "b", "c", "d"];
    let arrows: Vec<(String, String, String)> = (0..m)
        .map(|i| {
            let n = if m == 1 { "u".to_string() } else { names[(i + 1).min(4)].to_string() };
            (n, i.to_string(), (i + 1).to_string())
        })
        .collect();
    arc(FinCategory::poset(&objs, &arrows).expect("chain"))
}

/// `n`-fold product of a category with itself, objects indexed lexicographically.
pub fn power(c: &Arc<FinCategory>, n: usize) -> Result<Arc<FinCategory>, CategoryError> {
    let mut p = c.clone();
    for _ in 1..n {
        p = arc(product(&p, c)?);
    }
    Ok(p)
}

/// `n`-fold product of a functor with itself.
pub fn power_functor(f: &FunctorMap, n: usize, dom: &Arc<FinCategory>, cod: &Arc<FinCategory>) -> Result<FunctorMap, CategoryError> {
    if n == 1 {
        return FunctorMap::new(dom.clone(), cod.clone(), f.obj_map().to_vec(), f.gen_map().to_vec());
    }
    let mut cur = f.clone();
    let (mut d, mut c) = (f.dom().clone(), f.cod().clone());
    for i in 1..n {
        let (nd, nc) = if i + 1 == n {
            (dom.clone(), cod.clone())
        } else {
            (arc(product(&d, f.dom())?), arc(product(&c, f.cod())?))
        };
        cur = product_functor(&cur, f, nd.clone(), nc.clone())?;
        d = nd;
        c = nc;
    }
    Ok(cur)
}

pub fn tuple_index(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * base + x)
}

pub fn index_tuple(mut i: usize, base: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for k in (0..n).rev() {
        t[k] = i % base;
        i /= base;
    }
    t
}

#[derive(Clone, Debug)]
pub struct CubeShape {
    pub cat: Arc<FinCategory>,
    /// Inclusion into `[1]ⁿ` or `[2]ⁿ` for the proper subshapes.
    pub inclusion: Option<FunctorMap>,
    /// Coordinates of each object.
    pub coords: Vec<Vec<usize>>,
}

fn check_n(n: usize) -> Result<(), GlueError> {
    if (1..=4).contains(&n) {
        Ok(())
    } else {
        Err(GlueError::Range(format!("n = {n} (expected 1..=4)")))
    }
}

pub fn cube_shapes(n: usize, spec: CubeSpec) -> Result<CubeShape, GlueError> {
    check_n(n)?;
    let base = if matches!(spec, CubeSpec::Double | CubeSpec::CornerI) { 3 } else { 2 };
    let ambient = power(&chain(base - 1), n)?;
    let all: Vec<Vec<usize>> = (0..ambient.num_objects()).map(|i| index_tuple(i, base, n)).collect();
    let ones = |t: &Vec<usize>| t.iter().filter(|&&x| x == 1).count();
    let keep: Option<Vec<ObjId>> = match spec {
        CubeSpec::Full | CubeSpec::Double => None,
        CubeSpec::AtLeast { k } => Some((0..all.len()).filter(|&i| ones(&all[i]) >= k).collect()),
        CubeSpec::Exactly { k } => Some((0..all.len()).filter(|&i| ones(&all[i]) == k).collect()),
        CubeSpec::CornerI => Some(
            (0..all.len())
                .filter(|&i| {
                    let t = &all[i];
                    t.iter().all(|&x| x >= 1) || (t.iter().filter(|&&x| x == 0).count() == 1 && t.iter().all(|&x| x != 1))
                })
                .collect(),
        ),
    };
    if let CubeSpec::AtLeast { k } | CubeSpec::Exactly { k } = spec {
        if k > n {
            return Err(GlueError::Range(format!("k = {k} exceeds n = {n}")));
        }
    }
    Ok(match keep {
        None => CubeShape {
            cat: ambient,
            inclusion: None,
            coords: all,
        },
        Some(objs) => {
            let inc = full_subcategory(&ambient, &objs)?;
            CubeShape {
                cat: inc.dom().clone(),
                coords: objs.iter().map(|&o| all[o].clone()).collect(),
                inclusion: Some(inc),
            }
        }
    })
}

/// The inclusions `[1]ⁿ_{=n−1} → [1]ⁿ_{≥n−1} → [1]ⁿ → I → [2]ⁿ`.
pub fn biproduct_chain(n: usize) -> Result<Vec<FunctorMap>, GlueError> {
    let eq = cube_shapes(n, CubeSpec::Exactly { k: n - 1 })?;
    let ge = cube_shapes(n, CubeSpec::AtLeast { k: n - 1 })?;
    let full = cube_shapes(n, CubeSpec::Full)?;
    let ci = cube_shapes(n, CubeSpec::CornerI)?;
    let dbl = cube_shapes(n, CubeSpec::Double)?;
    let find = |s: &CubeShape, t: &Vec<usize>| s.coords.iter().position(|c| c == t).expect("coordinate");
    let i1 = thin_functor(&eq.cat, &ge.cat, eq.coords.iter().map(|t| find(&ge, t)).collect())?;
    let i2 = thin_functor(&ge.cat, &full.cat, ge.coords.iter().map(|t| find(&full, t)).collect())?;
    let shift = |t: &Vec<usize>| t.iter().map(|&x| x + 1).collect::<Vec<_>>();
    let i3 = thin_functor(&full.cat, &ci.cat, full.coords.iter().map(|t| find(&ci, &shift(t))).collect())?;
    let i4 = thin_functor(&ci.cat, &dbl.cat, ci.coords.iter().map(|t| find(&dbl, t)).collect())?;
    Ok(vec![i1, i2, i3, i4])
}

/// Presentation of the localization of `[2]` at `0 → 2`.
pub fn r_presentation() -> PresentedCategory {
    let q = Quiver::new(&["0", "1", "2"], &[("alpha", "0", "1"), ("beta", "1", "2"), ("g", "2", "0")]).expect("quiver");
    let rels = vec![
        (q.parse_path("g.beta.alpha").expect("path"), Path::identity(0)),
        (q.parse_path("beta.alpha.g").expect("path"), Path::identity(2)),
    ];
    PresentedCategory::new(q, rels).expect("presentation")
}

/// Morphisms of `R` as `(source, target)` in breadth-first order, and the
/// postcomposition action of `alpha`, `beta`, `g`.
const R_MORPHISMS: [(usize, usize); 10] = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0), (0, 2), (1, 0), (2, 1), (1, 1)];
const NO: usize = usize::MAX;
const R_ACT: [[usize; 3]; 10] = [
    [3, NO, NO],
    [NO, 4, NO],
    [NO, NO, 5],
    [NO, 6, NO],
    [NO, NO, 7],
    [8, NO, NO],
    [NO, NO, 0],
    [9, NO, NO],
    [NO, 2, NO],
    [NO, 4, NO],
];

/// `R` rebuilt from the frozen table.
pub fn frozen_r() -> FinCategory {
    let q = r_presentation();
    let table = crate::catcore::close(
        q.quiver().vertices().to_vec(),
        q.quiver().arrows().to_vec(),
        |o| o,
        |&m: &usize, g| {
            let t = R_ACT[m][g];
            if t == NO {
                Err(CategoryError::NotComposable(format!("#{m} then #{g}")))
            } else {
                Ok(t)
            }
        },
        Bound::default(),
    );
    let (cat, keys) = table.expect("frozen table is closed");
    debug_assert!(keys.iter().enumerate().all(|(i, &k)| i == k && R_MORPHISMS[k] == (cat.src(i), cat.tgt(i))));
    cat
}

#[derive(Clone, Debug)]
pub struct InvertibleShapes {
    pub r: Arc<FinCategory>,
    pub rn: Arc<FinCategory>,
    pub two_n: Arc<FinCategory>,
    /// `[2]ⁿ → Rⁿ`.
    pub q: FunctorMap,
}

/// `R` from its presentation, checked against the frozen table.
pub fn r_category() -> Result<Arc<FinCategory>, GlueError> {
    let oracle = saturate(&r_presentation(), 64).finite()?;
    check(oracle == frozen_r(), "saturated R differs from the frozen table")?;
    Ok(arc(oracle))
}

pub fn invertible_shapes(n: usize) -> Result<InvertibleShapes, GlueError> {
    if !(1..=3).contains(&n) {
        return Err(GlueError::Range(format!("n = {n} (expected 1..=3)")));
    }
    let r = r_category()?;
    let two = chain(2);
    let p = FunctorMap::from_names(two.clone(), r.clone(), &[("0", "0"), ("1", "1"), ("2", "2")], &[("a", "alpha"), ("b", "beta")])?;
    let rn = power(&r, n)?;
    let two_n = power(&two, n)?;
    let q = power_functor(&p, n, &two_n, &rn)?;
    Ok(InvertibleShapes { r, rn, two_n, q })
}

/// Cone `P^◁` on a thin category: a new initial object `v`.
fn thin_cocone(p: &Arc<FinCategory>, apex: &str) -> Result<(Arc<FinCategory>, FunctorMap), CategoryError> {
    let mut objs: Vec<String> = p.objects().to_vec();
    objs.push(apex.to_string());
    let mut arrows: Vec<(String, String, String)> = p
        .gens()
        .iter()
        .map(|a| (a.name.clone(), p.object_name(a.src).to_string(), p.object_name(a.tgt).to_string()))
        .collect();
    for o in 0..p.num_objects() {
        if p.hom_to(o).len() == 1 {
            arrows.push((format!("{apex}_{}", p.object_name(o)), apex.to_string(), p.object_name(o).to_string()));
        }
    }
    let c = arc(FinCategory::poset(&objs, &arrows)?);
    let inc = thin_functor(p, &c, (0..p.num_objects()).collect())?;
    Ok((c, inc))
}

/// Every shape of the reflection chain together with its connecting functors.
#[derive(Clone, Debug)]
pub struct ReflectionShapes {
    pub d_minus: Arc<FinCategory>,
    pub d_plus: Arc<FinCategory>,
    pub e1_minus: Arc<FinCategory>,
    pub e2_minus: Arc<FinCategory>,
    pub e1_plus: Arc<FinCategory>,
    pub e2_plus: Arc<FinCategory>,
    pub f: Arc<FinCategory>,
    pub f_plus: Arc<FinCategory>,
    /// `D⁻ → A₁ → A₂ → A₃ → E₁⁻` along the cube chain.
    pub j_chain: Vec<FunctorMap>,
    /// `E₁⁻ → E₂⁻`.
    pub r: FunctorMap,
    /// `E₂⁻ → F₁ → F`.
    pub j_cofiber: Vec<FunctorMap>,
    /// `[2]ⁿ → E₁⁻`.
    pub l_cube: FunctorMap,
    /// `Rⁿ → E₂⁻`.
    pub j_rn: FunctorMap,
    /// `□ → F`.
    pub l_square: FunctorMap,
    /// `Rⁿ → F`.
    pub m: FunctorMap,
    pub q: FunctorMap,
    /// Isomorphism between the two constructions of `F`, if one exists.
    pub f_iso: Option<FunctorMap>,
    /// Every pushout built on the way, by name.
    pub pushouts: Vec<(String, AmalgamResult)>,
}

fn square() -> Arc<FinCategory> {
    arc(FinCategory::poset(
        &["v", "c", "o", "w"],
        &[("h0", "v", "c"), ("k0", "v", "o"), ("k1", "c", "w"), ("h1", "o", "w")],
    )
    .expect("square"))
}

/// Pushout of `X ← W → Y` along fully faithful legs, recorded by name.
fn glue_along(
    log: &mut Vec<(String, AmalgamResult)>,
    name: &str,
    fx: FunctorMap,
    fy: FunctorMap,
) -> Result<AmalgamResult, GlueError> {
    let r = verified(pushout(&Span::new(fx, fy)?)?)?;
    log.push((name.to_string(), r.clone()));
    Ok(r)
}

fn glue_log(
    log: &mut Vec<(String, AmalgamResult)>,
    name: &str,
    a1: &Arc<FinCategory>,
    a2: &Arc<FinCategory>,
    s: &[ObjId],
    t: &[ObjId],
) -> Result<GluingResult, GlueError> {
    let g = free_oriented_gluing(a1, a2, s, t)?;
    let r = verified(g.pushout.clone())?;
    log.push((name.to_string(), r));
    Ok(g)
}

pub fn reflection_chain_shapes(c: &Arc<FinCategory>, ys: &[ObjId]) -> Result<ReflectionShapes, GlueError> {
    let n = ys.len();
    if !(1..=3).contains(&n) {
        return Err(GlueError::Range(format!("n = {n} (expected 1..=3)")));
    }
    let mut log = Vec::new();
    let inv = invertible_shapes(n)?;
    let chain_inc = biproduct_chain(n)?;
    let (eq, ge, full, dbl) = (
        chain_inc[0].dom().clone(),
        chain_inc[1].dom().clone(),
        chain_inc[2].dom().clone(),
        chain_inc[3].cod().clone(),
    );
    let s_eq: Vec<ObjId> = (0..n).collect();

    let (k0, _) = thin_cocone(&eq, "v")?;
    let (k1, _) = thin_cocone(&ge, "v")?;
    let (k2, k2_in) = thin_cocone(&full, "v")?;
    let lift = |f: &FunctorMap, dom: &Arc<FinCategory>, cod: &Arc<FinCategory>| -> Result<FunctorMap, CategoryError> {
        let mut obj = f.obj_map().to_vec();
        obj.push(cod.num_objects() - 1);
        thin_functor(dom, cod, obj)
    };
    let c01 = lift(&chain_inc[0], &k0, &k1)?;
    let c12 = lift(&chain_inc[1], &k1, &k2)?;
    let i1_push = glue_along(&mut log, "I1", chain_inc[2].clone(), k2_in.clone())?;
    let i1 = i1_push.z().clone();
    let c23 = i1_push.gy().clone();
    let i2_push = glue_along(&mut log, "I2", chain_inc[3].clone(), i1_push.gx().clone())?;
    let c34 = i2_push.gy().clone();
    let i2cat = i2_push.z().clone();

    let s0: Vec<ObjId> = s_eq.clone();
    let s1: Vec<ObjId> = s0.iter().map(|&o| c01.obj(o)).collect();
    let s2: Vec<ObjId> = s1.iter().map(|&o| c12.obj(o)).collect();
    let s3: Vec<ObjId> = s2.iter().map(|&o| c23.obj(o)).collect();
    let s4: Vec<ObjId> = s3.iter().map(|&o| c34.obj(o)).collect();
    let g0 = glue_log(&mut log, "D-", &k0, c, &s0, ys)?;
    let g1 = glue_log(&mut log, "A1", &k1, c, &s1, ys)?;
    let g2 = glue_log(&mut log, "A2", &k2, c, &s2, ys)?;
    let g3 = glue_log(&mut log, "A3", &i1, c, &s3, ys)?;
    let g4 = glue_log(&mut log, "E1-", &i2cat, c, &s4, ys)?;
    let idc = FunctorMap::identity(c.clone());
    let j_chain = vec![
        g0.induced(&g1, &c01, &idc)?,
        g1.induced(&g2, &c12, &idc)?,
        g2.induced(&g3, &c23, &idc)?,
        g3.induced(&g4, &c34, &idc)?,
    ];

    let center2 = tuple_index(&vec![1; n], 3);
    let s_dbl: Vec<ObjId> = (0..n).map(|k| chain_inc[3].obj(chain_inc[2].obj(chain_inc[1].obj(chain_inc[0].obj(k))))).collect();
    let e1 = glue_log(&mut log, "E1", &dbl, c, &s_dbl, ys)?;
    let v = point("v");
    let e1m = glue_log(&mut log, "E1-/two-step", &v, &e1.a, &[0], &[e1.i1.obj(center2)])?;
    check(find_isomorphism(&e1m.a, &g4.a).is_some(), "two constructions of E1- disagree")?;
    let rn = inv.rn.clone();
    let s_rn: Vec<ObjId> = s_dbl.iter().map(|&o| inv.q.obj(o)).collect();
    let e2 = glue_log(&mut log, "E2", &rn, c, &s_rn, ys)?;
    let e2m = glue_log(&mut log, "E2-", &v, &e2.a, &[0], &[e2.i1.obj(inv.q.obj(center2))])?;
    let r_e = e1.induced(&e2, &inv.q, &idc)?;
    let idv = FunctorMap::identity(v.clone());
    let r = e1m.induced(&e2m, &idv, &r_e)?;
    let l_cube = e1m.i2.after(&e1.i1)?;
    let j_rn = e2m.i2.after(&e2.i1)?;
    let rl = r.after(&l_cube)?;
    let jq = j_rn.after(&inv.q)?;
    check(
        rl.obj_map() == jq.obj_map() && rl.gen_map() == jq.gen_map(),
        "r restricted to the cube differs from q",
    )?;

    let sq = square();
    let corner = full_subcategory(&sq, &[0, 1, 2])?;
    let top = full_subcategory(&sq, &[0, 1])?;
    let top_in_corner = thin_functor(top.dom(), corner.dom(), vec![0, 1])?;
    let b1 = glue_log(&mut log, "B1", &v, &rn, &[0], &[inv.q.obj(center2)])?;
    let arrow_in_b1 = FunctorMap::new(top.dom().clone(), b1.a.clone(), vec![b1.i1.obj(0), b1.i2.obj(inv.q.obj(center2))], vec![b1.beta[0]])?;
    let b2 = glue_along(&mut log, "B2", arrow_in_b1, top_in_corner)?;
    let b = glue_along(&mut log, "B", b2.gy().clone(), corner.clone())?;
    let b1_to_b2 = b2.gx().clone();
    let b2_to_b = b.gx().clone();
    let s_b1: Vec<ObjId> = s_rn.iter().map(|&o| b1.i2.obj(o)).collect();
    let s_b2: Vec<ObjId> = s_b1.iter().map(|&o| b1_to_b2.obj(o)).collect();
    let s_b: Vec<ObjId> = s_b2.iter().map(|&o| b2_to_b.obj(o)).collect();
    let e2_alt = glue_log(&mut log, "E2-/cofiber", &b1.a, c, &s_b1, ys)?;
    check(find_isomorphism(&e2_alt.a, &e2m.a).is_some(), "two constructions of E2- disagree")?;
    let f1 = glue_log(&mut log, "F1", b2.z(), c, &s_b2, ys)?;
    let f = glue_log(&mut log, "F", b.z(), c, &s_b, ys)?;
    let j_cofiber = vec![e2_alt.induced(&f1, &b1_to_b2, &idc)?, f1.induced(&f, &b2_to_b, &idc)?];
    let sq_in_b = b.gy().clone();
    let l_square = f.i1.after(&sq_in_b)?;
    let rn_in_b = b2_to_b.after(&b1_to_b2)?.after(&b1.i2)?;
    let m = f.i1.after(&rn_in_b)?;

    let w = point("w");
    let s_dbl_plus: Vec<ObjId> = (0..n)
        .map(|k| {
            let mut t = vec![0; n];
            t[k] = 1;
            tuple_index(&t, 3)
        })
        .collect();
    let s_rn_plus: Vec<ObjId> = s_dbl_plus.iter().map(|&o| inv.q.obj(o)).collect();
    let e1_plus_base = glue_log(&mut log, "E1/plus", &dbl, c, &s_dbl_plus, ys)?;
    let e2_plus_base = glue_log(&mut log, "E2/plus", &rn, c, &s_rn_plus, ys)?;
    let e1p = glue_log(&mut log, "E1+", &e1_plus_base.a, &w, &[e1_plus_base.i1.obj(center2)], &[0])?;
    let e2p = glue_log(&mut log, "E2+", &e2_plus_base.a, &w, &[e2_plus_base.i1.obj(inv.q.obj(center2))], &[0])?;
    let b1p = glue_log(&mut log, "B1+", &rn, &w, &[inv.q.obj(center2)], &[0])?;
    let right = full_subcategory(&sq, &[1, 3])?;
    let lower = full_subcategory(&sq, &[1, 2, 3])?;
    let right_in_lower = thin_functor(right.dom(), lower.dom(), vec![0, 2])?;
    let arrow_in_b1p = FunctorMap::new(right.dom().clone(), b1p.a.clone(), vec![b1p.i1.obj(inv.q.obj(center2)), b1p.i2.obj(0)], vec![b1p.beta[0]])?;
    let b2p = glue_along(&mut log, "B2+", arrow_in_b1p, right_in_lower)?;
    let bp = glue_along(&mut log, "B+", b2p.gy().clone(), lower)?;
    let s_bp: Vec<ObjId> = s_rn_plus.iter().map(|&o| bp.gx().obj(b2p.gx().obj(b1p.i1.obj(o)))).collect();
    let fp = glue_log(&mut log, "F+", bp.z(), c, &s_bp, ys)?;
    let f_iso = find_isomorphism(&f.a, &fp.a);
    let dp = separate_source_sink(c, ys, Direction::Sink)?;

    Ok(ReflectionShapes {
        d_minus: g0.a.clone(),
        d_plus: dp.d.clone(),
        e1_minus: e1m.a.clone(),
        e2_minus: e2m.a.clone(),
        e1_plus: e1p.a.clone(),
        e2_plus: e2p.a.clone(),
        f: f.a.clone(),
        f_plus: fp.a.clone(),
        j_chain,
        r,
        j_cofiber,
        l_cube,
        j_rn,
        l_square,
        m,
        q: inv.q.clone(),
        f_iso,
        pushouts: log,
    })
}

/// `C~`, the choice of fresh objects and the collapse `p : C~ → C`.
#[derive(Clone, Debug)]
pub struct SeparatedObjects {
    pub cat: Arc<FinCategory>,
    pub ys: Vec<ObjId>,
    pub p: FunctorMap,
    /// Inclusion of `C`.
    pub inclusion: FunctorMap,
}

pub fn separate_objects(c: &Arc<FinCategory>, ys: &[ObjId]) -> Result<SeparatedObjects, GlueError> {
    if let Some(&o) = ys.iter().find(|&&o| o >= c.num_objects()) {
        return Err(GlueError::Range(format!("object #{o}")));
    }
    let pres = c.presentation();
    let mut q = pres.quiver().clone();
    let mut rels = pres.relations().to_vec();
    let mut fresh = Vec::new();
    for (i, &y) in ys.iter().enumerate() {
        let base = format!("{}~{}", c.object_name(y), i + 1);
        let mut name = base.clone();
        while q.vertex(&name).is_ok() {
            name.push('\'');
        }
        let yo = q.add_vertex(&name)?;
        let yn = c.object_name(y).to_string();
        let into = q.add_arrow(&format!("s~{}", i + 1), &name, &yn)?;
        let back = q.add_arrow(&format!("t~{}", i + 1), &yn, &name)?;
        rels.push((Path { src: yo, arrows: vec![into, back] }, Path::identity(yo)));
        rels.push((Path { src: y, arrows: vec![back, into] }, Path::identity(y)));
        fresh.push(yo);
    }
    let bound = ys.len().max(1) * c.num_morphisms().max(1) * (ys.len() + 1) * 4 + 64;
    let ct = arc(saturate(&PresentedCategory::new(q, rels)?, bound).finite()?);
    let mut obj: Vec<ObjId> = (0..c.num_objects()).collect();
    obj.extend(ys.iter().copied());
    let mut gens: Vec<MorId> = (0..c.num_gens()).map(|g| c.gen_mor(g)).collect();
    for &y in ys {
        gens.push(c.identity(y));
        gens.push(c.identity(y));
    }
    let p = FunctorMap::new(ct.clone(), c.clone(), obj, gens)?;
    let inc_gens = (0..c.num_gens()).map(|g| ct.gen_mor(g)).collect();
    let inclusion = FunctorMap::new(c.clone(), ct.clone(), (0..c.num_objects()).collect(), inc_gens)?;
    check(p.is_faithful() && p.is_full() && p.is_essentially_surjective(), "collapse is not an equivalence")?;
    Ok(SeparatedObjects {
        cat: ct,
        ys: fresh,
        p,
        inclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_table_matches_oracle() {
        let r = r_category().unwrap();
        assert_eq!(r.num_objects(), 3);
        assert_eq!(r.hom(1, 1).len(), 2);
        assert_eq!(r.hom(0, 1).len(), 1);
        let e = r.parse_mor("alpha.g.beta").unwrap();
        assert!(!r.is_identity(e));
        assert_eq!(r.compose(e, e), Some(e));
        assert!(r.is_iso(r.parse_mor("beta.alpha").unwrap()));
    }

    fn c_a2() -> Arc<FinCategory> {
        arc(FinCategory::poset(&["y1", "y2"], &[("h", "y1", "y2")]).unwrap())
    }

    #[test]
    fn gluing_points_gives_arrow() {
        let g = free_oriented_gluing(&point("p"), &point("q"), &[0], &[0]).unwrap();
        assert_eq!(g.a.num_morphisms(), 3);
        g.verify().unwrap();
        assert_eq!(g.standard_factorization(g.beta[0]).unwrap(), StandardFactorization { k: 0, f1: 0, f2: 0 });
    }

    #[test]
    fn repeated_targets_stay_distinct() {
        let g = free_oriented_gluing(&cone_shape(2, Direction::Source), &point("y"), &[0, 1], &[0, 0]).unwrap();
        g.verify().unwrap();
        assert_eq!(g.a.num_objects(), 4);
        assert_eq!(g.a.num_morphisms(), 4 + 6);
    }

    #[test]
    fn cones_and_separation() {
        let c = c_a2();
        let plus = attach_cone(&c, &[0, 1], Direction::Sink).unwrap();
        assert_eq!(plus.cat.num_objects(), 3);
        assert_eq!(plus.cat.num_morphisms(), 3 + 1 + 2 + 1);
        let minus = attach_cone(&point("y"), &[0, 0], Direction::Source).unwrap();
        assert_eq!(minus.cat.hom(minus.apex, 0).len(), 2);
        let sep = separate_source_sink(&c, &[0, 1], Direction::Source).unwrap();
        let r = sep.section().unwrap();
        let adj = crate::catcore::find_adjoint(&sep.u, crate::catcore::AdjointSide::Right).unwrap();
        assert_eq!(adj.right.obj_map(), r.obj_map());
        let one = separate_source_sink(&point("y"), &[0], Direction::Sink).unwrap();
        assert_eq!(one.d.num_objects(), 3);
        assert_eq!(one.d.num_morphisms(), 5);
    }

    #[test]
    fn cube_shape_sizes() {
        assert_eq!(cube_shapes(2, CubeSpec::Full).unwrap().cat.num_morphisms(), 9);
        assert!(cube_shapes(3, CubeSpec::Exactly { k: 2 }).unwrap().cat.is_discrete());
        assert_eq!(cube_shapes(2, CubeSpec::CornerI).unwrap().cat.num_objects(), 6);
        assert_eq!(biproduct_chain(3).unwrap().len(), 4);
        assert!(cube_shapes(5, CubeSpec::Full).is_err());
    }

    #[test]
    fn separated_objects() {
        let s = separate_objects(&point("y"), &[0, 0]).unwrap();
        assert_eq!(s.cat.num_objects(), 3);
        assert_eq!(s.cat.num_morphisms(), 9);
    }

    #[test]
    fn chain_for_point() {
        let sh = reflection_chain_shapes(&point("y"), &[0, 0]).unwrap();
        assert!(sh.l_cube.is_injective_on_objects());
        assert!(sh.m.is_injective_on_objects() && sh.l_square.is_injective_on_objects());
        assert!(sh.f_iso.is_some());
    }
}
