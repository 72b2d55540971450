use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{FinCategory, GenId, MorId, ObjId};
use crate::error::CategoryError;

/// A functor between materialized categories, given on objects and on
/// generating arrows. The action on all morphisms is derived.
#[derive(Clone, Debug)]
pub struct FunctorMap {
    dom: Arc<FinCategory>,
    cod: Arc<FinCategory>,
    obj: Vec<ObjId>,
    gens: Vec<MorId>,
    mors: Vec<MorId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ObjectCount { expected: usize, found: usize },
    ObjectOutOfRange { object: String },
    GeneratorCount { expected: usize, found: usize },
    GeneratorEndpoints { arrow: String, expected: String, found: String },
    Relation { morphism: String, arrow: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ObjectCount { expected, found } => {
                write!(f, "object map has {found} entries, expected {expected}")
            }
            Violation::ObjectOutOfRange { object } => write!(f, "object `{object}` maps outside the codomain"),
            Violation::GeneratorCount { expected, found } => {
                write!(f, "arrow map has {found} entries, expected {expected}")
            }
            Violation::GeneratorEndpoints { arrow, expected, found } => {
                write!(f, "arrow `{arrow}` must map to {expected}, got {found}")
            }
            Violation::Relation { morphism, arrow } => {
                write!(f, "relation broken when composing `{arrow}` after `{morphism}`")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorReport {
    pub valid: bool,
    pub violation: Option<Violation>,
}

fn derive_mors(
    dom: &FinCategory,
    cod: &FinCategory,
    obj: &[ObjId],
    gens: &[MorId],
) -> Result<Vec<MorId>, Violation> {
    if obj.len() != dom.num_objects() {
        return Err(Violation::ObjectCount {
            expected: dom.num_objects(),
            found: obj.len(),
        });
    }
    if gens.len() != dom.num_gens() {
        return Err(Violation::GeneratorCount {
            expected: dom.num_gens(),
            found: gens.len(),
        });
    }
    for (o, &t) in obj.iter().enumerate() {
        if t >= cod.num_objects() {
            return Err(Violation::ObjectOutOfRange {
                object: dom.object_name(o).to_string(),
            });
        }
    }
    for (g, a) in dom.gens().iter().enumerate() {
        let m = gens[g];
        let ok = m < cod.num_morphisms() && cod.src(m) == obj[a.src] && cod.tgt(m) == obj[a.tgt];
        if !ok {
            let found = if m < cod.num_morphisms() {
                format!("{} -> {}", cod.object_name(cod.src(m)), cod.object_name(cod.tgt(m)))
            } else {
                "a missing morphism".to_string()
            };
            return Err(Violation::GeneratorEndpoints {
                arrow: a.name.clone(),
                expected: format!(
                    "{} -> {}",
                    cod.object_name(obj[a.src]),
                    cod.object_name(obj[a.tgt])
                ),
                found,
            });
        }
    }
    let mut mors = vec![0; dom.num_morphisms()];
    for (m, mm) in dom.morphisms().iter().enumerate() {
        mors[m] = match mm.parent {
            None => cod.identity(obj[mm.src]),
            Some((p, g)) => cod.compose(gens[g], mors[p]).expect("endpoints checked"),
        };
    }
    for m in 0..dom.num_morphisms() {
        for g in 0..dom.num_gens() {
            if let Some(t) = dom.act(m, g) {
                if cod.compose(gens[g], mors[m]) != Some(mors[t]) {
                    return Err(Violation::Relation {
                        morphism: dom.mor_name(m),
                        arrow: dom.gens()[g].name.clone(),
                    });
                }
            }
        }
    }
    Ok(mors)
}

/// Validate an object map and generator map as a functor.
pub fn check_functor(dom: &FinCategory, cod: &FinCategory, obj: &[ObjId], gens: &[MorId]) -> FunctorReport {
    match derive_mors(dom, cod, obj, gens) {
        Ok(_) => FunctorReport {
            valid: true,
            violation: None,
        },
        Err(v) => FunctorReport {
            valid: false,
            violation: Some(v),
        },
    }
}

impl FunctorMap {
    pub fn new(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        obj: Vec<ObjId>,
        gens: Vec<MorId>,
    ) -> Result<Self, CategoryError> {
        let mors = derive_mors(&dom, &cod, &obj, &gens).map_err(|v| CategoryError::InvalidFunctor(v.to_string()))?;
        Ok(FunctorMap {
            dom,
            cod,
            obj,
            gens,
            mors,
        })
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let obj = (0..c.num_objects()).collect();
        let gens = (0..c.num_gens()).map(|g| c.gen_mor(g)).collect();
        let mors = (0..c.num_morphisms()).collect();
        FunctorMap {
            dom: c.clone(),
            cod: c,
            obj,
            gens,
            mors,
        }
    }

    /// Functor from name tables: objects `a ↦ b` and arrows `f ↦ text`.
    pub fn from_names(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        objects: &[(&str, &str)],
        arrows: &[(&str, &str)],
    ) -> Result<Self, CategoryError> {
        let mut obj = vec![usize::MAX; dom.num_objects()];
        for (a, b) in objects {
            obj[dom.object(a)?] = cod.object(b)?;
        }
        if let Some(o) = obj.iter().position(|&x| x == usize::MAX) {
            return Err(CategoryError::InvalidFunctor(format!(
                "object `{}` is not mapped",
                dom.object_name(o)
            )));
        }
        let mut gens = vec![usize::MAX; dom.num_gens()];
        for (f, t) in arrows {
            let g = dom.gen(f)?;
            let text = t.trim();
            gens[g] = match text.strip_prefix("id_") {
                Some(o) if cod.gen(text).is_err() && cod.object(o).is_ok() => cod.identity(cod.object(o)?),
                _ => cod.parse_mor(text)?,
            };
        }
        if let Some(g) = gens.iter().position(|&x| x == usize::MAX) {
            return Err(CategoryError::InvalidFunctor(format!(
                "arrow `{}` is not mapped",
                dom.gens()[g].name
            )));
        }
        Self::new(dom, cod, obj, gens)
    }

    pub fn dom(&self) -> &Arc<FinCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCategory> {
        &self.cod
    }

    pub fn obj(&self, o: ObjId) -> ObjId {
        self.obj[o]
    }

    pub fn obj_map(&self) -> &[ObjId] {
        &self.obj
    }

    pub fn on_gen(&self, g: GenId) -> MorId {
        self.gens[g]
    }

    pub fn gen_map(&self) -> &[MorId] {
        &self.gens
    }

    pub fn on_mor(&self, m: MorId) -> MorId {
        self.mors[m]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FunctorMap) -> Result<FunctorMap, CategoryError> {
        if !Arc::ptr_eq(first.cod(), &self.dom) && **first.cod() != *self.dom {
            return Err(CategoryError::InvalidFunctor("composite of non-matching functors".into()));
        }
        let obj = first.obj.iter().map(|&o| self.obj[o]).collect();
        let gens = first.gens.iter().map(|&m| self.mors[m]).collect();
        FunctorMap::new(first.dom.clone(), self.cod.clone(), obj, gens)
    }

    /// Flags over the codomain morphisms hit by this functor.
    pub fn image(&self) -> Vec<bool> {
        let mut hit = vec![false; self.cod.num_morphisms()];
        for &m in &self.mors {
            hit[m] = true;
        }
        hit
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let set: HashSet<_> = self.obj.iter().collect();
        set.len() == self.obj.len()
    }

    pub fn is_faithful(&self) -> bool {
        let d = &self.dom;
        (0..d.num_objects()).all(|a| {
            (0..d.num_objects()).all(|b| {
                let imgs: HashSet<MorId> = d.hom(a, b).iter().map(|&m| self.mors[m]).collect();
                imgs.len() == d.hom(a, b).len()
            })
        })
    }

    pub fn is_full(&self) -> bool {
        let d = &self.dom;
        (0..d.num_objects()).all(|a| {
            (0..d.num_objects()).all(|b| {
                let imgs: HashSet<MorId> = d.hom(a, b).iter().map(|&m| self.mors[m]).collect();
                imgs.len() == self.cod.hom(self.obj[a], self.obj[b]).len()
            })
        })
    }

    pub fn is_essentially_surjective(&self) -> bool {
        let c = &self.cod;
        let image: HashSet<ObjId> = self.obj.iter().copied().collect();
        (0..c.num_objects())
            .all(|b| image.contains(&b) || image.iter().any(|&a| c.hom(a, b).iter().any(|&m| c.is_iso(m))))
    }

    /// Morphisms `b → F(a)` only start in the image.
    pub fn is_sieve(&self) -> bool {
        self.is_full()
            && self.is_faithful()
            && self.is_injective_on_objects()
            && self.closed_in_direction(true)
    }

    /// Morphisms `F(a) → b` only end in the image.
    pub fn is_cosieve(&self) -> bool {
        self.is_full()
            && self.is_faithful()
            && self.is_injective_on_objects()
            && self.closed_in_direction(false)
    }

    fn closed_in_direction(&self, into: bool) -> bool {
        let c = &self.cod;
        let image: HashSet<ObjId> = self.obj.iter().copied().collect();
        c.morphisms().iter().all(|m| {
            let (near, far) = if into { (m.tgt, m.src) } else { (m.src, m.tgt) };
            !image.contains(&near) || image.contains(&far)
        })
    }

    /// Among composable α, β, βα in the codomain, two in the image force the third.
    pub fn has_3for2(&self) -> bool {
        let hit = self.image();
        let c = &self.cod;
        for a in 0..c.num_morphisms() {
            for &b in c.hom_from(c.tgt(a)) {
                let ba = c.compose(b, a).expect("composable");
                let count = hit[a] as u8 + hit[b] as u8 + hit[ba] as u8;
                if count == 2 {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub fully_faithful: bool,
    pub faithful: bool,
    pub injective_on_objects: bool,
    pub sieve: bool,
    pub cosieve: bool,
    pub essentially_surjective: bool,
}

pub fn functor_predicates(f: &FunctorMap) -> Predicates {
    let faithful = f.is_faithful();
    Predicates {
        fully_faithful: faithful && f.is_full(),
        faithful,
        injective_on_objects: f.is_injective_on_objects(),
        sieve: f.is_sieve(),
        cosieve: f.is_cosieve(),
        essentially_surjective: f.is_essentially_surjective(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdjointSide {
    Left,
    Right,
}

/// `left ⊣ right` with unit `id → right∘left` and counit `left∘right → id`.
#[derive(Clone, Debug)]
pub struct Adjunction {
    pub left: FunctorMap,
    pub right: FunctorMap,
    pub unit: Vec<MorId>,
    pub counit: Vec<MorId>,
}

impl Adjunction {
    /// Naturality of unit and counit and both triangle identities.
    pub fn verify(&self) -> Result<(), String> {
        let (l, r) = (&self.left, &self.right);
        let a = l.dom();
        let b = l.cod();
        let rl = r.after(l).map_err(|e| e.to_string())?;
        let lr = l.after(r).map_err(|e| e.to_string())?;
        for (g, arr) in a.gens().iter().enumerate() {
            let m = a.gen_mor(g);
            if a.compose(rl.on_mor(m), self.unit[arr.src]) != a.compose(self.unit[arr.tgt], m) {
                return Err(format!("unit not natural at `{}`", arr.name));
            }
        }
        for (g, arr) in b.gens().iter().enumerate() {
            let m = b.gen_mor(g);
            if b.compose(self.counit[arr.tgt], lr.on_mor(m)) != b.compose(m, self.counit[arr.src]) {
                return Err(format!("counit not natural at `{}`", arr.name));
            }
        }
        for x in 0..a.num_objects() {
            let lx = l.obj(x);
            if b.compose(self.counit[lx], l.on_mor(self.unit[x])) != Some(b.identity(lx)) {
                return Err(format!("triangle identity fails at `{}`", a.object_name(x)));
            }
        }
        for y in 0..b.num_objects() {
            let ry = r.obj(y);
            if a.compose(r.on_mor(self.counit[y]), self.unit[ry]) != Some(a.identity(ry)) {
                return Err(format!("triangle identity fails at `{}`", b.object_name(y)));
            }
        }
        Ok(())
    }
}

fn unique_where(cands: &[MorId], mut pred: impl FnMut(MorId) -> bool) -> Option<MorId> {
    let mut found = None;
    for &h in cands {
        if pred(h) {
            if found.is_some() {
                return None;
            }
            found = Some(h);
        }
    }
    found
}

/// Search for an adjoint of `f` on the requested side. The result is
/// returned only after its triangle identities have been verified.
pub fn find_adjoint(f: &FunctorMap, side: AdjointSide) -> Option<Adjunction> {
    let a = f.dom().clone();
    let b = f.cod().clone();
    let na = a.num_objects();
    let mut target = Vec::with_capacity(b.num_objects());
    let mut arrows = Vec::with_capacity(b.num_objects());
    for y in 0..b.num_objects() {
        let mut found = None;
        'search: for a0 in 0..na {
            let cands: Vec<MorId> = match side {
                AdjointSide::Right => b.hom(f.obj(a0), y).to_vec(),
                AdjointSide::Left => b.hom(y, f.obj(a0)).to_vec(),
            };
            for e in cands {
                let universal = (0..na).all(|x| {
                    let (from, to): (&[MorId], &[MorId]) = match side {
                        AdjointSide::Right => (a.hom(x, a0), b.hom(f.obj(x), y)),
                        AdjointSide::Left => (a.hom(a0, x), b.hom(y, f.obj(x))),
                    };
                    if from.len() != to.len() {
                        return false;
                    }
                    let imgs: HashSet<MorId> = from
                        .iter()
                        .map(|&h| match side {
                            AdjointSide::Right => b.compose(e, f.on_mor(h)).expect("composable"),
                            AdjointSide::Left => b.compose(f.on_mor(h), e).expect("composable"),
                        })
                        .collect();
                    imgs.len() == to.len()
                });
                if universal {
                    found = Some((a0, e));
                    break 'search;
                }
            }
        }
        let (a0, e) = found?;
        target.push(a0);
        arrows.push(e);
    }
    let mut gen_imgs = Vec::with_capacity(b.num_gens());
    for (g, arr) in b.gens().iter().enumerate() {
        let beta = b.gen_mor(g);
        let h = match side {
            AdjointSide::Right => unique_where(a.hom(target[arr.src], target[arr.tgt]), |h| {
                b.compose(arrows[arr.tgt], f.on_mor(h)) == b.compose(beta, arrows[arr.src])
            }),
            AdjointSide::Left => unique_where(a.hom(target[arr.src], target[arr.tgt]), |h| {
                b.compose(f.on_mor(h), arrows[arr.src]) == b.compose(arrows[arr.tgt], beta)
            }),
        }?;
        gen_imgs.push(h);
    }
    let g = FunctorMap::new(b.clone(), a.clone(), target.clone(), gen_imgs).ok()?;
    let adj = match side {
        AdjointSide::Right => {
            let mut unit = Vec::with_capacity(na);
            for x in 0..na {
                let fx = f.obj(x);
                let h = unique_where(a.hom(x, target[fx]), |h| {
                    b.compose(arrows[fx], f.on_mor(h)) == Some(b.identity(fx))
                })?;
                unit.push(h);
            }
            Adjunction {
                left: f.clone(),
                right: g,
                unit,
                counit: arrows,
            }
        }
        AdjointSide::Left => {
            let mut counit = Vec::with_capacity(na);
            for x in 0..na {
                let fx = f.obj(x);
                let h = unique_where(a.hom(target[fx], x), |h| {
                    b.compose(f.on_mor(h), arrows[fx]) == Some(b.identity(fx))
                })?;
                counit.push(h);
            }
            Adjunction {
                left: g,
                right: f.clone(),
                unit: arrows,
                counit,
            }
        }
    };
    adj.verify().ok()?;
    Some(adj)
}

/// Backtracking search for an isomorphism of categories `c → d`.
pub fn find_isomorphism(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Option<FunctorMap> {
    if c.num_objects() != d.num_objects() || c.num_morphisms() != d.num_morphisms() {
        return None;
    }
    let n = c.num_objects();
    let sig = |k: &FinCategory, o: ObjId| (k.hom(o, o).len(), k.hom_from(o).len(), k.hom_to(o).len());
    let mut obj = vec![usize::MAX; n];
    let mut used = vec![false; n];
    find_objects(c, d, 0, &mut obj, &mut used, &sig)
}

type Signature = (usize, usize, usize);

fn find_objects(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    i: usize,
    obj: &mut Vec<ObjId>,
    used: &mut Vec<bool>,
    sig: &dyn Fn(&FinCategory, ObjId) -> Signature,
) -> Option<FunctorMap> {
    let n = c.num_objects();
    if i == n {
        let mut gens = vec![0; c.num_gens()];
        return find_gens(c, d, 0, obj, &mut gens);
    }
    for t in 0..n {
        if used[t] || sig(c, i) != sig(d, t) {
            continue;
        }
        let consistent = (0..i).all(|j| {
            c.hom(i, j).len() == d.hom(t, obj[j]).len() && c.hom(j, i).len() == d.hom(obj[j], t).len()
        });
        if !consistent {
            continue;
        }
        obj[i] = t;
        used[t] = true;
        if let Some(f) = find_objects(c, d, i + 1, obj, used, sig) {
            return Some(f);
        }
        used[t] = false;
    }
    None
}

fn find_gens(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    g: usize,
    obj: &[ObjId],
    gens: &mut Vec<MorId>,
) -> Option<FunctorMap> {
    if g == c.num_gens() {
        let f = FunctorMap::new(c.clone(), d.clone(), obj.to_vec(), gens.clone()).ok()?;
        let bijective = f.image().iter().all(|&b| b);
        return bijective.then_some(f);
    }
    let arr = &c.gens()[g];
    let cands: Vec<MorId> = d.hom(obj[arr.src], obj[arr.tgt]).to_vec();
    for m in cands {
        if d.is_identity(m) && !c.is_identity(c.gen_mor(g)) {
            continue;
        }
        gens[g] = m;
        if let Some(f) = find_gens(c, d, g + 1, obj, gens) {
            return Some(f);
        }
    }
    None
}
