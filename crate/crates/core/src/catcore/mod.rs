//! Quivers, presented categories and fully materialized finite categories.
//!
//! A [`FinCategory`] stores every morphism as its shortlex-least word in the
//! generating arrows together with the action of each generator by
//! postcomposition. Composition walks that action table.
//!
//! Paths are stored in application order: `[f, g]` is `g ∘ f`. In text the
//! same morphism is written `g.f`.

mod functor;
mod rewrite;
mod slice;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use crate::error::CategoryError;

pub use functor::{
    check_functor, find_adjoint, find_isomorphism, functor_predicates, Adjunction, AdjointSide,
    FunctorMap, FunctorReport, Predicates, Violation,
};
pub use rewrite::{saturate, RewriteSystem, SaturationOutcome, NonFiniteReport};
pub use slice::{
    coproduct, full_subcategory, opposite, product, product_and_opposite, product_functor, product_mor, slice, Coproduct,
    SliceCategory, SliceSide,
};

pub type ObjId = usize;
pub type GenId = usize;
pub type MorId = usize;

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arrow {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// A finite directed multigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vindex: HashMap<String, ObjId>,
}

impl Quiver {
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self, CategoryError> {
        let mut q = Quiver {
            vertices: Vec::new(),
            arrows: Vec::new(),
            vindex: HashMap::new(),
        };
        for v in vertices {
            q.add_vertex(v.as_ref())?;
        }
        for (name, s, t) in arrows {
            q.add_arrow(name.as_ref(), s.as_ref(), t.as_ref())?;
        }
        Ok(q)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<ObjId, CategoryError> {
        if self.vindex.contains_key(name) {
            return Err(CategoryError::DuplicateObject(name.to_string()));
        }
        self.vertices.push(name.to_string());
        self.vindex.insert(name.to_string(), self.vertices.len() - 1);
        Ok(self.vertices.len() - 1)
    }

    pub fn add_arrow(&mut self, name: &str, src: &str, tgt: &str) -> Result<GenId, CategoryError> {
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(CategoryError::DuplicateArrow(name.to_string()));
        }
        let src = self.vertex(src)?;
        let tgt = self.vertex(tgt)?;
        self.arrows.push(Arrow {
            name: name.to_string(),
            src,
            tgt,
        });
        Ok(self.arrows.len() - 1)
    }

    pub fn vertex(&self, name: &str) -> Result<ObjId, CategoryError> {
        self.vindex
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::UnknownObject(name.to_string()))
    }

    pub fn arrow(&self, name: &str) -> Result<GenId, CategoryError> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| CategoryError::UnknownArrow(name.to_string()))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Path from text: `g.f` is `f` then `g`; `id_a` is the empty path at `a`.
    pub fn parse_path(&self, text: &str) -> Result<Path, CategoryError> {
        let text = text.trim();
        if self.arrow(text).is_err() {
            if let Some(obj) = text.strip_prefix("id_") {
                if let Ok(o) = self.vertex(obj) {
                    return Ok(Path::identity(o));
                }
            }
        }
        let mut arrows = Vec::new();
        for part in text.split('.').rev() {
            arrows.push(self.arrow(part.trim())?);
        }
        let path = Path {
            src: self.arrows[arrows[0]].src,
            arrows,
        };
        if !self.is_path(&path) {
            return Err(CategoryError::NotComposable(text.to_string()));
        }
        Ok(path)
    }

    pub fn is_path(&self, p: &Path) -> bool {
        let mut at = p.src;
        for &a in &p.arrows {
            match self.arrows.get(a) {
                Some(arr) if arr.src == at => at = arr.tgt,
                _ => return false,
            }
        }
        p.src < self.vertices.len()
    }

    pub fn path_target(&self, p: &Path) -> ObjId {
        p.arrows.last().map_or(p.src, |&a| self.arrows[a].tgt)
    }

    pub fn format_path(&self, p: &Path) -> String {
        format_word(&self.vertices, &self.arrows, p.src, &p.arrows)
    }
}

pub(crate) fn format_word(objects: &[String], gens: &[Arrow], src: ObjId, word: &[GenId]) -> String {
    if word.is_empty() {
        return format!("id_{}", objects[src]);
    }
    let names: Vec<&str> = word.iter().rev().map(|&g| gens[g].name.as_str()).collect();
    names.join(".")
}

/// A composable path of generating arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub src: ObjId,
    pub arrows: Vec<GenId>,
}

impl Path {
    pub fn identity(src: ObjId) -> Self {
        Path {
            src,
            arrows: Vec::new(),
        }
    }
}

/// A quiver with relations between parallel paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedCategory {
    quiver: Quiver,
    relations: Vec<(Path, Path)>,
}

impl PresentedCategory {
    pub fn new(quiver: Quiver, relations: Vec<(Path, Path)>) -> Result<Self, CategoryError> {
        for (l, r) in &relations {
            let bad = || CategoryError::RelationEndpoints {
                lhs: quiver.format_path(l),
                rhs: quiver.format_path(r),
            };
            if !quiver.is_path(l) || !quiver.is_path(r) {
                return Err(CategoryError::NotComposable(format!("{l:?} = {r:?}")));
            }
            if l.src != r.src || quiver.path_target(l) != quiver.path_target(r) {
                return Err(bad());
            }
        }
        Ok(PresentedCategory { quiver, relations })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[(Path, Path)] {
        &self.relations
    }
}

pub fn free_category(q: &Quiver) -> PresentedCategory {
    PresentedCategory {
        quiver: q.clone(),
        relations: Vec::new(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub src: ObjId,
    pub tgt: ObjId,
    /// Shortlex-least generator word, application order.
    pub word: Vec<GenId>,
    /// The morphism obtained by dropping the last generator of `word`.
    pub parent: Option<(MorId, GenId)>,
}

/// A finite category with every morphism enumerated.
#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: Vec<String>,
    obj_index: HashMap<String, ObjId>,
    gens: Vec<Arrow>,
    mors: Vec<Morphism>,
    identities: Vec<MorId>,
    gen_mor: Vec<MorId>,
    act: Vec<u32>,
    hom: Vec<Vec<MorId>>,
    out: Vec<Vec<MorId>>,
    inc: Vec<Vec<MorId>>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.gens == other.gens && self.mors == other.mors && self.act == other.act
    }
}

/// Size limits applied while enumerating morphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub per_hom: usize,
    pub total: usize,
}

impl Bound {
    pub fn hom(per_hom: usize) -> Self {
        Bound {
            per_hom,
            total: usize::MAX,
        }
    }
}

impl Default for Bound {
    fn default() -> Self {
        Bound {
            per_hom: 4096,
            total: 200_000,
        }
    }
}

/// Breadth-first closure of the identities under postcomposition with
/// generators. `extend(key, g)` must return the key of `g ∘ key`; two words
/// denote the same morphism exactly when their keys agree.
pub(crate) fn close<K, E>(
    objects: Vec<String>,
    gens: Vec<Arrow>,
    ident: impl Fn(ObjId) -> K,
    mut extend: impl FnMut(&K, GenId) -> Result<K, E>,
    bound: Bound,
) -> Result<(FinCategory, Vec<K>), E>
where
    K: Clone + Eq + Hash,
    E: From<CategoryError>,
{
    let n = objects.len();
    let g = gens.len();
    let mut by_src: Vec<Vec<GenId>> = vec![Vec::new(); n];
    for (i, a) in gens.iter().enumerate() {
        by_src[a.src].push(i);
    }
    let mut keys: Vec<K> = Vec::new();
    let mut index: HashMap<K, MorId> = HashMap::new();
    let mut mors: Vec<Morphism> = Vec::new();
    let mut hom_count: HashMap<(ObjId, ObjId), usize> = HashMap::new();
    for o in 0..n {
        let k = ident(o);
        index.insert(k.clone(), mors.len());
        keys.push(k);
        mors.push(Morphism {
            src: o,
            tgt: o,
            word: Vec::new(),
            parent: None,
        });
        hom_count.insert((o, o), 1);
    }
    let mut act = vec![NONE; n * g];
    let mut head = 0;
    while head < mors.len() {
        let m = head;
        head += 1;
        let tgt = mors[m].tgt;
        for &gi in &by_src[tgt] {
            let k = extend(&keys[m], gi)?;
            let id = match index.get(&k) {
                Some(&id) => id,
                None => {
                    let id = mors.len();
                    let src = mors[m].src;
                    let t = gens[gi].tgt;
                    let c = hom_count.entry((src, t)).or_insert(0);
                    *c += 1;
                    if *c > bound.per_hom || id >= bound.total {
                        return Err(CategoryError::NonFinite {
                            src: objects[src].clone(),
                            tgt: objects[t].clone(),
                            bound: bound.per_hom.min(bound.total),
                        }
                        .into());
                    }
                    let mut word = mors[m].word.clone();
                    word.push(gi);
                    mors.push(Morphism {
                        src,
                        tgt: t,
                        word,
                        parent: Some((m, gi)),
                    });
                    act.extend(std::iter::repeat_n(NONE, g));
                    index.insert(k.clone(), id);
                    keys.push(k);
                    id
                }
            };
            act[m * g + gi] = id as u32;
        }
    }
    let cat = FinCategory::assemble(objects, gens, mors, act);
    Ok((cat, keys))
}

impl FinCategory {
    fn assemble(objects: Vec<String>, gens: Vec<Arrow>, mors: Vec<Morphism>, act: Vec<u32>) -> Self {
        let n = objects.len();
        let obj_index = objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let identities = (0..n).collect();
        let mut hom = vec![Vec::new(); n * n];
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, m) in mors.iter().enumerate() {
            hom[m.src * n + m.tgt].push(i);
            out[m.src].push(i);
            inc[m.tgt].push(i);
        }
        let g = gens.len();
        let gen_mor = (0..g)
            .map(|gi| act[gens[gi].src * g + gi] as usize)
            .collect();
        FinCategory {
            objects,
            obj_index,
            gens,
            mors,
            identities,
            gen_mor,
            act,
            hom,
            out,
            inc,
        }
    }

    /// The discrete category on the given objects.
    pub fn discrete<S: AsRef<str>>(objects: &[S]) -> Self {
        let objects: Vec<String> = objects.iter().map(|s| s.as_ref().to_string()).collect();
        let mors = (0..objects.len())
            .map(|o| Morphism {
                src: o,
                tgt: o,
                word: Vec::new(),
                parent: None,
            })
            .collect();
        Self::assemble(objects, Vec::new(), mors, Vec::new())
    }

    /// Thin category generated by the given covering arrows. Any two parallel
    /// paths are identified; the caller ensures the relation is acyclic.
    pub fn poset<S: AsRef<str>>(objects: &[S], arrows: &[(S, S, S)]) -> Result<Self, CategoryError> {
        let q = Quiver::new(objects, arrows)?;
        let gens = q.arrows().to_vec();
        let names = q.vertices().to_vec();
        let (cat, _) = close(
            names,
            gens.clone(),
            |o| (o, o),
            |&(s, _), g| Ok::<_, CategoryError>((s, gens[g].tgt)),
            Bound::default(),
        )?;
        Ok(cat)
    }

    /// Free category on a quiver, failing if it is infinite under `bound`.
    pub fn free(q: &Quiver, bound: Bound) -> Result<Self, CategoryError> {
        let (cat, _) = close(
            q.vertices().to_vec(),
            q.arrows().to_vec(),
            Path::identity,
            |p, g| {
                let mut p = p.clone();
                p.arrows.push(g);
                Ok::<_, CategoryError>(p)
            },
            bound,
        )?;
        Ok(cat)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.mors.len()
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn object(&self, name: &str) -> Result<ObjId, CategoryError> {
        self.obj_index
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::UnknownObject(name.to_string()))
    }

    pub fn gens(&self) -> &[Arrow] {
        &self.gens
    }

    pub fn gen(&self, name: &str) -> Result<GenId, CategoryError> {
        self.gens
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| CategoryError::UnknownArrow(name.to_string()))
    }

    pub fn gen_mor(&self, g: GenId) -> MorId {
        self.gen_mor[g]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.mors
    }

    pub fn mor(&self, m: MorId) -> &Morphism {
        &self.mors[m]
    }

    pub fn src(&self, m: MorId) -> ObjId {
        self.mors[m].src
    }

    pub fn tgt(&self, m: MorId) -> ObjId {
        self.mors[m].tgt
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.mors[m].word.is_empty()
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a * self.objects.len() + b]
    }

    /// `g ∘ m` for a generator `g`.
    pub fn act(&self, m: MorId, g: GenId) -> Option<MorId> {
        let v = self.act[m * self.gens.len() + g];
        (v != NONE).then_some(v as usize)
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.mors[f].tgt != self.mors[g].src {
            return None;
        }
        let mut m = f;
        for &gi in &self.mors[g].word {
            m = self.act(m, gi).expect("composable word");
        }
        Some(m)
    }

    /// Morphism denoted by a path of generators.
    pub fn path_mor(&self, src: ObjId, word: &[GenId]) -> Option<MorId> {
        let mut m = self.identity(src);
        for &g in word {
            m = self.act(m, g)?;
        }
        Some(m)
    }

    pub fn mor_name(&self, m: MorId) -> String {
        let mm = &self.mors[m];
        format_word(&self.objects, &self.gens, mm.src, &mm.word)
    }

    /// Morphism from text such as `g.f` or `id_a`.
    pub fn parse_mor(&self, text: &str) -> Result<MorId, CategoryError> {
        let text = text.trim();
        if self.gen(text).is_err() {
            if let Some(o) = text.strip_prefix("id_") {
                if let Ok(o) = self.object(o) {
                    return Ok(self.identity(o));
                }
            }
        }
        let mut word = Vec::new();
        for part in text.split('.').rev() {
            word.push(self.gen(part.trim())?);
        }
        let src = self.gens[word[0]].src;
        self.path_mor(src, &word)
            .ok_or_else(|| CategoryError::NotComposable(text.to_string()))
    }

    /// Inverse of `m`, if `m` is an isomorphism.
    pub fn inverse(&self, m: MorId) -> Option<MorId> {
        let (a, b) = (self.src(m), self.tgt(m));
        self.hom(b, a).iter().copied().find(|&n| {
            self.compose(n, m) == Some(self.identity(a)) && self.compose(m, n) == Some(self.identity(b))
        })
    }

    pub fn is_iso(&self, m: MorId) -> bool {
        self.inverse(m).is_some()
    }

    pub fn is_discrete(&self) -> bool {
        self.mors.len() == self.objects.len()
    }

    /// Quiver of the generating arrows.
    pub fn quiver(&self) -> Quiver {
        let arrows: Vec<(String, String, String)> = self
            .gens
            .iter()
            .map(|a| (a.name.clone(), self.objects[a.src].clone(), self.objects[a.tgt].clone()))
            .collect();
        let arrows_ref: Vec<(&str, &str, &str)> =
            arrows.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
        let objs: Vec<&str> = self.objects.iter().map(|s| s.as_str()).collect();
        Quiver::new(&objs, &arrows_ref).expect("names are unique")
    }

    /// Complete presentation: `w_m · g = w_{g∘m}` whenever the left side is
    /// not itself the canonical word.
    pub fn cayley_relations(&self) -> Vec<(Path, Path)> {
        let mut rels = Vec::new();
        for (m, mm) in self.mors.iter().enumerate() {
            for g in 0..self.gens.len() {
                if let Some(t) = self.act(m, g) {
                    let mut w = mm.word.clone();
                    w.push(g);
                    if w != self.mors[t].word {
                        rels.push((
                            Path { src: mm.src, arrows: w },
                            Path {
                                src: mm.src,
                                arrows: self.mors[t].word.clone(),
                            },
                        ));
                    }
                }
            }
        }
        rels
    }

    pub fn presentation(&self) -> PresentedCategory {
        PresentedCategory {
            quiver: self.quiver(),
            relations: self.cayley_relations(),
        }
    }

    /// Exhaustive check of unit and associativity laws and of the
    /// consistency of the stored words.
    pub fn check_laws(&self) -> Result<(), String> {
        for (m, mm) in self.mors.iter().enumerate() {
            if self.path_mor(mm.src, &mm.word) != Some(m) {
                return Err(format!("word of {} does not evaluate to itself", self.mor_name(m)));
            }
            if self.compose(self.identity(mm.tgt), m) != Some(m) || self.compose(m, self.identity(mm.src)) != Some(m)
            {
                return Err(format!("unit law fails at {}", self.mor_name(m)));
            }
        }
        for f in 0..self.mors.len() {
            for &g in self.hom_from(self.tgt(f)) {
                let gf = self.compose(g, f).ok_or("composable pair rejected")?;
                for &h in self.hom_from(self.tgt(g)) {
                    let lhs = self.compose(h, gf);
                    let rhs = self.compose(h, g).and_then(|hg| self.compose(hg, f));
                    if lhs != rhs || lhs.is_none() {
                        return Err(format!(
                            "associativity fails for ({}, {}, {})",
                            self.mor_name(h),
                            self.mor_name(g),
                            self.mor_name(f)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// All morphisms with the given source.
    pub fn hom_from(&self, a: ObjId) -> &[MorId] {
        &self.out[a]
    }

    /// All morphisms with the given target.
    pub fn hom_to(&self, b: ObjId) -> &[MorId] {
        &self.inc[b]
    }
}

impl fmt::Display for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "category with {} objects, {} generators, {} morphisms",
            self.objects.len(),
            self.gens.len(),
            self.mors.len()
        )
    }
}
