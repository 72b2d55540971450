//! Pushouts of categories along faithful inclusions.
//!
//! A morphism of the pushout `Z = X ⊔_W Y` is an equivalence class of
//! allowable sequences of morphisms of `X` and `Y`. Sequences are stored in
//! application order, so `[e1, e2]` denotes `e2 ∘ e1`. Over a discrete `W`
//! the fully reduced sequences are unique representatives. Otherwise the
//! representative is the least reduced sequence reachable by sliding
//! morphisms of `W` across the boundaries between entries.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::catcore::{close, Arrow, Bound, FinCategory, FunctorMap, GenId, MorId, ObjId, Path, PresentedCategory, Quiver};
use crate::error::{AmalgamError, CategoryError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Leg {
    X,
    Y,
}

impl Leg {
    fn other(self) -> Leg {
        match self {
            Leg::X => Leg::Y,
            Leg::Y => Leg::X,
        }
    }
}

impl fmt::Display for Leg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leg::X => write!(f, "X"),
            Leg::Y => write!(f, "Y"),
        }
    }
}

/// One entry of an allowable sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub leg: Leg,
    pub mor: MorId,
}

/// A span `X ← W → Y` of functors.
#[derive(Clone, Debug)]
pub struct Span {
    fx: FunctorMap,
    fy: FunctorMap,
}

impl Span {
    /// Legs over a non-discrete `W` must be injective on objects, faithful
    /// and have the 3-for-2 property.
    pub fn new(fx: FunctorMap, fy: FunctorMap) -> Result<Self, AmalgamError> {
        if !Arc::ptr_eq(fx.dom(), fy.dom()) && **fx.dom() != **fy.dom() {
            return Err(AmalgamError::DomainMismatch);
        }
        let span = Span { fx, fy };
        if !span.w().is_discrete() {
            for (leg, f) in [(Leg::X, &span.fx), (Leg::Y, &span.fy)] {
                let reason = if !f.is_injective_on_objects() {
                    Some("not injective on objects")
                } else if !f.is_faithful() {
                    Some("not faithful")
                } else if !f.has_3for2() {
                    Some("lacks the 3-for-2 property")
                } else {
                    None
                };
                if let Some(r) = reason {
                    return Err(AmalgamError::BadLeg {
                        leg: leg.to_string(),
                        reason: r.to_string(),
                    });
                }
            }
        }
        Ok(span)
    }

    pub fn w(&self) -> &Arc<FinCategory> {
        self.fx.dom()
    }
    pub fn x(&self) -> &Arc<FinCategory> {
        self.fx.cod()
    }
    pub fn y(&self) -> &Arc<FinCategory> {
        self.fy.cod()
    }
    pub fn fx(&self) -> &FunctorMap {
        &self.fx
    }
    pub fn fy(&self) -> &FunctorMap {
        &self.fy
    }

    fn leg(&self, l: Leg) -> &Arc<FinCategory> {
        match l {
            Leg::X => self.x(),
            Leg::Y => self.y(),
        }
    }

    fn leg_map(&self, l: Leg) -> &FunctorMap {
        match l {
            Leg::X => &self.fx,
            Leg::Y => &self.fy,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    NormalFormComplete,
    BoundedSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "verdict", content = "depth")]
pub enum Equality {
    Equal,
    Distinct,
    Unknown(usize),
}

/// A reduced sequence, stored in application order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalWord(pub Vec<Entry>);

/// An allowable sequence, stored in application order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AllowableSequence(pub Vec<Entry>);

#[derive(Debug)]
struct Inner {
    span: Span,
    completeness: Completeness,
    /// Pushout object of each X object, then of each Y object.
    class: [Vec<ObjId>; 2],
    /// Canonical identity entry of each pushout object.
    ident: Vec<Entry>,
    /// For each leg morphism in the image of W, the matching morphism of the other leg.
    twin: [Vec<Option<MorId>>; 2],
    /// Factorizations `m = w ∘ e` with `w` a non-identity image of W.
    post: [Vec<Vec<(MorId, MorId)>>; 2],
    /// Factorizations `m = e ∘ w` with `w` a non-identity image of W.
    pre: [Vec<Vec<(MorId, MorId)>>; 2],
}

#[derive(Clone, Debug)]
pub struct AmalgamResult {
    inner: Arc<Inner>,
    z: Arc<FinCategory>,
    words: Vec<NormalWord>,
    index: HashMap<NormalWord, MorId>,
    gx: FunctorMap,
    gy: FunctorMap,
    gen_entry: Vec<Entry>,
}

fn li(l: Leg) -> usize {
    match l {
        Leg::X => 0,
        Leg::Y => 1,
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.0[i] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi] = lo;
        }
    }
}

fn unique_name(taken: &mut HashSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

impl Inner {
    fn cat(&self, l: Leg) -> &FinCategory {
        self.span.leg(l)
    }

    fn zsrc(&self, e: Entry) -> ObjId {
        self.class[li(e.leg)][self.cat(e.leg).src(e.mor)]
    }

    fn ztgt(&self, e: Entry) -> ObjId {
        self.class[li(e.leg)][self.cat(e.leg).tgt(e.mor)]
    }

    fn is_ident(&self, e: Entry) -> bool {
        self.cat(e.leg).is_identity(e.mor)
    }

    fn canon(&self, e: Entry) -> Entry {
        if self.is_ident(e) {
            return self.ident[self.zsrc(e)];
        }
        if e.leg == Leg::Y {
            if let Some(t) = self.twin[1][e.mor] {
                return Entry { leg: Leg::X, mor: t };
            }
        }
        e
    }

    /// `e` viewed in leg `l`, if it lives there.
    fn in_leg(&self, e: Entry, l: Leg, at_src: Option<ObjId>) -> Option<MorId> {
        if e.leg == l {
            return Some(e.mor);
        }
        if self.is_ident(e) {
            let c = self.cat(l);
            let z = self.zsrc(e);
            return (0..c.num_objects())
                .filter(|&o| self.class[li(l)][o] == z)
                .find(|&o| at_src.is_none_or(|s| s == o))
                .map(|o| c.identity(o));
        }
        self.twin[li(e.leg)][e.mor]
    }

    /// Composite `b ∘ a` computed inside one leg, if possible.
    fn merge(&self, a: Entry, b: Entry) -> Option<Entry> {
        for l in [a.leg, b.leg, a.leg.other()] {
            let c = self.cat(l);
            let Some(am) = self.in_leg(a, l, None) else { continue };
            let Some(bm) = self.in_leg(b, l, Some(c.tgt(am))) else { continue };
            if let Some(m) = c.compose(bm, am) {
                return Some(self.canon(Entry { leg: l, mor: m }));
            }
        }
        None
    }

    fn allowable(&self, w: &[Entry]) -> bool {
        !w.is_empty()
            && w.iter().all(|e| e.mor < self.cat(e.leg).num_morphisms())
            && w.windows(2).all(|p| self.ztgt(p[0]) == self.zsrc(p[1]))
    }

    /// Leftmost-first reduction to a word admitting no elementary reduction.
    fn reduce(&self, w: &[Entry]) -> Vec<Entry> {
        let mut w: Vec<Entry> = w.iter().map(|&e| self.canon(e)).collect();
        let start = self.zsrc(w[0]);
        loop {
            if w.len() > 1 {
                if let Some(i) = w.iter().position(|&e| self.is_ident(e)) {
                    w.remove(i);
                    continue;
                }
            }
            let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| self.merge(w[i], w[i + 1]).is_some()) else {
                break;
            };
            let m = self.merge(w[i], w[i + 1]).expect("checked");
            w.splice(i..i + 2, [m]);
        }
        if w.is_empty() {
            w.push(self.ident[start]);
        }
        w
    }

    /// Every reduced word reachable from `w` by sliding images of W across entries.
    fn slide_class(&self, w: &[Entry]) -> BTreeSet<Vec<Entry>> {
        let mut seen = BTreeSet::new();
        seen.insert(w.to_vec());
        if self.completeness == Completeness::NormalFormComplete || w.len() < 2 {
            return seen;
        }
        let mut queue = VecDeque::from([w.to_vec()]);
        while let Some(cur) = queue.pop_front() {
            for i in 0..cur.len() - 1 {
                let (a, b) = (cur[i], cur[i + 1]);
                let (la, lb) = (a.leg, b.leg);
                for &(wm, rest) in &self.post[li(la)][a.mor] {
                    let Some(wb) = self.twin[li(la)][wm] else { continue };
                    let wb = if lb == la { wm } else { wb };
                    let Some(nb) = self.cat(lb).compose(b.mor, wb) else { continue };
                    let mut next = cur.clone();
                    next[i] = self.canon(Entry { leg: la, mor: rest });
                    next[i + 1] = self.canon(Entry { leg: lb, mor: nb });
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
                for &(rest, wm) in &self.pre[li(lb)][b.mor] {
                    let Some(wa) = self.twin[li(lb)][wm] else { continue };
                    let wa = if la == lb { wm } else { wa };
                    let Some(na) = self.cat(la).compose(wa, a.mor) else { continue };
                    let mut next = cur.clone();
                    next[i] = self.canon(Entry { leg: la, mor: na });
                    next[i + 1] = self.canon(Entry { leg: lb, mor: rest });
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        seen
    }

    fn normalize(&self, w: &[Entry]) -> NormalWord {
        let r = self.reduce(w);
        let class = self.slide_class(&r);
        NormalWord(class.into_iter().next().expect("class contains the word"))
    }

    /// All results of single elementary reductions of `w`.
    fn one_step(&self, w: &[Entry]) -> Vec<Vec<Entry>> {
        let mut out = Vec::new();
        for i in 0..w.len().saturating_sub(1) {
            if let Some(m) = self.merge(w[i], w[i + 1]) {
                let mut next = w.to_vec();
                next.splice(i..i + 2, [m]);
                if next.len() > 1 {
                    next.retain(|&e| !self.is_ident(e));
                    if next.is_empty() {
                        next.push(m);
                    }
                }
                out.push(next);
            }
        }
        out
    }

    /// Inverses of elementary reductions: split one entry inside its leg.
    fn expansions(&self, w: &[Entry]) -> Vec<Vec<Entry>> {
        let mut out = Vec::new();
        for i in 0..w.len() {
            let e = w[i];
            let mut legs = vec![e.leg];
            if self.in_leg(e, e.leg.other(), None).is_some() {
                legs.push(e.leg.other());
            }
            for l in legs {
                let c = self.cat(l);
                let Some(m) = self.in_leg(e, l, None) else { continue };
                let (s, t) = (c.src(m), c.tgt(m));
                for mid in 0..c.num_objects() {
                    for &a in c.hom(s, mid) {
                        if c.is_identity(a) {
                            continue;
                        }
                        for &b in c.hom(mid, t) {
                            if !c.is_identity(b) && c.compose(b, a) == Some(m) {
                                let mut next = w.to_vec();
                                next.splice(
                                    i..i + 1,
                                    [self.canon(Entry { leg: l, mor: a }), self.canon(Entry { leg: l, mor: b })],
                                );
                                out.push(next);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Pushout of a span with the default size bound.
pub fn pushout(span: &Span) -> Result<AmalgamResult, AmalgamError> {
    pushout_bounded(span, Bound::default())
}

pub fn pushout_bounded(span: &Span, bound: Bound) -> Result<AmalgamResult, AmalgamError> {
    let (x, y, w) = (span.x().clone(), span.y().clone(), span.w().clone());
    let (nx, ny) = (x.num_objects(), y.num_objects());
    let mut uf = UnionFind((0..nx + ny).collect());
    for o in 0..w.num_objects() {
        uf.union(span.fx.obj(o), nx + span.fy.obj(o));
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut class = [vec![0; nx], vec![0; ny]];
    for i in 0..nx + ny {
        let r = uf.find(i);
        let z = match roots.iter().position(|&q| q == r) {
            Some(z) => z,
            None => {
                roots.push(r);
                roots.len() - 1
            }
        };
        if i < nx {
            class[0][i] = z;
        } else {
            class[1][i - nx] = z;
        }
    }
    let mut taken = HashSet::new();
    let mut names = Vec::new();
    let mut ident = Vec::new();
    for &r in &roots {
        let (leg, o) = if r < nx { (Leg::X, r) } else { (Leg::Y, r - nx) };
        let base = match leg {
            Leg::X => x.object_name(o),
            Leg::Y => y.object_name(o),
        };
        names.push(unique_name(&mut taken, base));
        let c = if leg == Leg::X { &x } else { &y };
        ident.push(Entry {
            leg,
            mor: c.identity(o),
        });
    }
    let mut twin = [vec![None; x.num_morphisms()], vec![None; y.num_morphisms()]];
    for m in 0..w.num_morphisms() {
        if w.is_identity(m) {
            continue;
        }
        let (a, b) = (span.fx.on_mor(m), span.fy.on_mor(m));
        twin[0][a] = Some(b);
        twin[1][b] = Some(a);
    }
    let discrete = w.is_discrete();
    let mut post = [vec![Vec::new(); x.num_morphisms()], vec![Vec::new(); y.num_morphisms()]];
    let mut pre = [vec![Vec::new(); x.num_morphisms()], vec![Vec::new(); y.num_morphisms()]];
    if !discrete {
        for l in [Leg::X, Leg::Y] {
            let c = span.leg(l);
            for wm in 0..c.num_morphisms() {
                if twin[li(l)][wm].is_none() {
                    continue;
                }
                for &e in c.hom_to(c.src(wm)) {
                    if c.is_identity(e) {
                        continue;
                    }
                    let m = c.compose(wm, e).expect("composable");
                    post[li(l)][m].push((wm, e));
                }
                for &e in c.hom_from(c.tgt(wm)) {
                    if c.is_identity(e) {
                        continue;
                    }
                    let m = c.compose(e, wm).expect("composable");
                    pre[li(l)][m].push((e, wm));
                }
            }
        }
    }
    let inner = Arc::new(Inner {
        span: span.clone(),
        completeness: if discrete {
            Completeness::NormalFormComplete
        } else {
            Completeness::BoundedSearch
        },
        class,
        ident,
        twin,
        post,
        pre,
    });

    let mut gens = Vec::new();
    let mut gen_entry = Vec::new();
    let mut gen_taken = HashSet::new();
    for (l, c) in [(Leg::X, &x), (Leg::Y, &y)] {
        for (g, arr) in c.gens().iter().enumerate() {
            let m = c.gen_mor(g);
            if l == Leg::Y && inner.twin[1][m].is_some() {
                continue;
            }
            gens.push(Arrow {
                name: unique_name(&mut gen_taken, &arr.name),
                src: inner.class[li(l)][arr.src],
                tgt: inner.class[li(l)][arr.tgt],
            });
            gen_entry.push(Entry { leg: l, mor: m });
        }
    }
    let inner2 = inner.clone();
    let entries = gen_entry.clone();
    let (z, keys) = close(
        names,
        gens,
        |o| NormalWord(vec![inner2.ident[o]]),
        |k: &NormalWord, g: GenId| {
            let mut wv = k.0.clone();
            wv.push(entries[g]);
            Ok::<_, CategoryError>(inner2.normalize(&wv))
        },
        bound,
    )?;
    let z = Arc::new(z);
    let index: HashMap<NormalWord, MorId> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let lift = |l: Leg, c: &FinCategory| -> Result<(Vec<ObjId>, Vec<MorId>), AmalgamError> {
        let obj = inner.class[li(l)].clone();
        let mut gm = Vec::new();
        for g in 0..c.num_gens() {
            let nw = inner.normalize(&[Entry {
                leg: l,
                mor: c.gen_mor(g),
            }]);
            gm.push(*index.get(&nw).ok_or_else(|| {
                AmalgamError::Category(CategoryError::Unresolved("generator image missing".into()))
            })?);
        }
        Ok((obj, gm))
    };
    let (ox, gxm) = lift(Leg::X, &x)?;
    let (oy, gym) = lift(Leg::Y, &y)?;
    let gx = FunctorMap::new(x.clone(), z.clone(), ox, gxm)?;
    let gy = FunctorMap::new(y.clone(), z.clone(), oy, gym)?;
    Ok(AmalgamResult {
        inner,
        z,
        words: keys,
        index,
        gx,
        gy,
        gen_entry,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AmalgamReport {
    pub gx_injective_on_objects: bool,
    pub gy_injective_on_objects: bool,
    pub gx_faithful: bool,
    pub gy_faithful: bool,
    pub gx_3for2: bool,
    pub gy_3for2: bool,
    /// `Some` when a leg is fully faithful and the other faithful with 3-for-2.
    pub gx_fully_faithful: Option<bool>,
    pub gy_fully_faithful: Option<bool>,
    pub laws: bool,
    pub failures: Vec<String>,
}

impl AmalgamReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl AmalgamResult {
    pub fn z(&self) -> &Arc<FinCategory> {
        &self.z
    }
    pub fn gx(&self) -> &FunctorMap {
        &self.gx
    }
    pub fn gy(&self) -> &FunctorMap {
        &self.gy
    }
    pub fn span(&self) -> &Span {
        &self.inner.span
    }
    pub fn completeness(&self) -> Completeness {
        self.inner.completeness
    }

    /// The leg entry each generator of `Z` comes from.
    pub fn gen_entry(&self, g: GenId) -> Entry {
        self.gen_entry[g]
    }

    /// Pushout object containing an object of one leg.
    pub fn class_of(&self, leg: Leg, o: ObjId) -> ObjId {
        self.inner.class[li(leg)][o]
    }

    /// Functor `Z → Z'` induced by functors `X → X'` and `Y → Y'` that are
    /// compatible with both spans.
    pub fn induced(&self, target: &AmalgamResult, hx: &FunctorMap, hy: &FunctorMap) -> Result<FunctorMap, AmalgamError> {
        let through = |leg: Leg| -> (&FunctorMap, &FunctorMap) {
            match leg {
                Leg::X => (hx, target.gx()),
                Leg::Y => (hy, target.gy()),
            }
        };
        let obj = self
            .inner
            .ident
            .iter()
            .map(|e| {
                let (h, g) = through(e.leg);
                g.obj(h.obj(self.inner.cat(e.leg).src(e.mor)))
            })
            .collect();
        let gens = self
            .gen_entry
            .iter()
            .map(|e| {
                let (h, g) = through(e.leg);
                g.on_mor(h.on_mor(e.mor))
            })
            .collect();
        Ok(FunctorMap::new(self.z.clone(), target.z().clone(), obj, gens)?)
    }

    /// Representative word of a morphism of `Z`.
    pub fn word(&self, m: MorId) -> &NormalWord {
        &self.words[m]
    }

    pub fn morphism_of(&self, w: &AllowableSequence) -> Result<MorId, AmalgamError> {
        let nw = self.reduce_word(w)?;
        let nw = self.inner.normalize(&nw.0);
        self.index
            .get(&nw)
            .copied()
            .ok_or_else(|| AmalgamError::NotAllowable(self.format_word(&w.0)))
    }

    pub fn check_allowable(&self, w: &AllowableSequence) -> Result<(), AmalgamError> {
        if self.inner.allowable(&w.0) {
            Ok(())
        } else {
            Err(AmalgamError::NotAllowable(self.format_word(&w.0)))
        }
    }

    /// Apply elementary reductions until none applies.
    pub fn reduce_word(&self, w: &AllowableSequence) -> Result<NormalWord, AmalgamError> {
        self.check_allowable(w)?;
        Ok(NormalWord(self.inner.reduce(&w.0)))
    }

    /// Results of single elementary reductions.
    pub fn reductions(&self, w: &[Entry]) -> Vec<Vec<Entry>> {
        self.inner.one_step(w)
    }

    /// All irreducible words reachable by maximal reduction chains.
    pub fn all_normal_forms(&self, w: &AllowableSequence) -> BTreeSet<Vec<Entry>> {
        let mut memo = HashMap::new();
        self.nf_set(&w.0.iter().map(|&e| self.inner.canon(e)).collect::<Vec<_>>(), &mut memo)
    }

    fn nf_set(&self, w: &[Entry], memo: &mut HashMap<Vec<Entry>, BTreeSet<Vec<Entry>>>) -> BTreeSet<Vec<Entry>> {
        if let Some(s) = memo.get(w) {
            return s.clone();
        }
        let next = self.inner.one_step(w);
        let mut out = BTreeSet::new();
        if next.is_empty() {
            out.insert(w.to_vec());
        } else {
            for n in next {
                out.extend(self.nf_set(&n, memo));
            }
        }
        memo.insert(w.to_vec(), out.clone());
        out
    }

    /// Exhaustively check that every allowable word up to `max_len` entries
    /// has a single normal form over all maximal reduction chains. Returns the
    /// number of words checked or the first word with two normal forms.
    pub fn confluence_exhaustive(&self, max_len: usize) -> Result<usize, Vec<Entry>> {
        let inner = &self.inner;
        let x = inner.span.x();
        let y = inner.span.y();
        let mut elems: Vec<Entry> = Vec::new();
        let mut seen = HashSet::new();
        for (l, c) in [(Leg::X, x), (Leg::Y, y)] {
            for m in 0..c.num_morphisms() {
                let e = inner.canon(Entry { leg: l, mor: m });
                if seen.insert(e) {
                    elems.push(e);
                }
            }
        }
        let mut from: HashMap<ObjId, Vec<Entry>> = HashMap::new();
        for &e in &elems {
            from.entry(inner.zsrc(e)).or_default().push(e);
        }
        let mut nf: HashMap<Vec<Entry>, Vec<Entry>> = HashMap::new();
        let mut layer: Vec<Vec<Entry>> = elems.iter().map(|&e| vec![e]).collect();
        let mut count = 0;
        for len in 1..=max_len {
            for w in &layer {
                count += 1;
                let steps = inner.one_step(w);
                let result = if steps.is_empty() {
                    w.clone()
                } else {
                    let mut forms = steps.iter().map(|s| nf.get(s).cloned().expect("shorter word known"));
                    let first = forms.next().expect("nonempty");
                    if forms.any(|f| f != first) {
                        return Err(w.clone());
                    }
                    first
                };
                nf.insert(w.clone(), result);
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for w in &layer {
                let end = inner.ztgt(*w.last().expect("nonempty"));
                for &e in from.get(&end).map(|v| v.as_slice()).unwrap_or(&[]) {
                    let mut n = w.clone();
                    n.push(e);
                    next.push(n);
                }
            }
            layer = next;
        }
        Ok(count)
    }

    /// Decide equality of two parallel words.
    pub fn decide_equal(
        &self,
        w1: &AllowableSequence,
        w2: &AllowableSequence,
        depth: usize,
    ) -> Result<Equality, AmalgamError> {
        self.check_allowable(w1)?;
        self.check_allowable(w2)?;
        let inner = &self.inner;
        let ends = |w: &AllowableSequence| (inner.zsrc(w.0[0]), inner.ztgt(*w.0.last().expect("nonempty")));
        if ends(w1) != ends(w2) {
            return Err(AmalgamError::NotAllowable("words are not parallel".into()));
        }
        if self.completeness() == Completeness::NormalFormComplete {
            let same = inner.reduce(&w1.0) == inner.reduce(&w2.0);
            return Ok(if same { Equality::Equal } else { Equality::Distinct });
        }
        let canon = |w: &AllowableSequence| -> Vec<Entry> { w.0.iter().map(|&e| inner.canon(e)).collect() };
        let (a, b) = (canon(w1), canon(w2));
        if a == b {
            return Ok(Equality::Equal);
        }
        let mut seen = [HashSet::from([a.clone()]), HashSet::from([b.clone()])];
        let mut frontier = [vec![a], vec![b]];
        let mut truncated = false;
        loop {
            if frontier[0].is_empty() && frontier[1].is_empty() {
                return Ok(if truncated {
                    Equality::Unknown(depth)
                } else {
                    Equality::Distinct
                });
            }
            let side = if frontier[1].is_empty() || (!frontier[0].is_empty() && frontier[0].len() <= frontier[1].len()) {
                0
            } else {
                1
            };
            let current = std::mem::take(&mut frontier[side]);
            let mut next = Vec::new();
            for w in current {
                let mut moves = inner.one_step(&w);
                for e in inner.expansions(&w) {
                    if e.len() <= depth {
                        moves.push(e);
                    } else {
                        truncated = true;
                    }
                }
                for m in moves {
                    if seen[1 - side].contains(&m) {
                        return Ok(Equality::Equal);
                    }
                    if seen[side].insert(m.clone()) {
                        next.push(m);
                    }
                }
            }
            frontier[side] = next;
        }
    }

    /// Check the amalgamation properties of the pushout square.
    pub fn verify_amalgamation(&self) -> AmalgamReport {
        let span = &self.inner.span;
        let mut r = AmalgamReport {
            gx_injective_on_objects: self.gx.is_injective_on_objects(),
            gy_injective_on_objects: self.gy.is_injective_on_objects(),
            gx_faithful: self.gx.is_faithful(),
            gy_faithful: self.gy.is_faithful(),
            gx_3for2: self.gx.has_3for2(),
            gy_3for2: self.gy.has_3for2(),
            laws: self.z.check_laws().is_ok(),
            ..Default::default()
        };
        let (fx, fy) = (span.fx(), span.fy());
        let req = |cond: bool, ok: bool, what: &str, failures: &mut Vec<String>| {
            if cond && !ok {
                failures.push(what.to_string());
            }
        };
        let mut failures = Vec::new();
        req(true, r.laws, "composition laws", &mut failures);
        req(fx.is_injective_on_objects(), r.gy_injective_on_objects, "g_Y injective on objects", &mut failures);
        req(fy.is_injective_on_objects(), r.gx_injective_on_objects, "g_X injective on objects", &mut failures);
        req(true, r.gx_faithful, "g_X faithful", &mut failures);
        req(true, r.gy_faithful, "g_Y faithful", &mut failures);
        let legs_3for2 = fx.has_3for2() && fy.has_3for2();
        req(legs_3for2, r.gx_3for2, "g_X has 3-for-2", &mut failures);
        req(legs_3for2, r.gy_3for2, "g_Y has 3-for-2", &mut failures);
        let ff = |f: &FunctorMap| f.is_faithful() && f.is_full();
        if ff(fx) && fy.is_faithful() && fy.has_3for2() {
            let v = ff(&self.gy);
            r.gy_fully_faithful = Some(v);
            req(true, v, "g_Y fully faithful", &mut failures);
        }
        if ff(fy) && fx.is_faithful() && fx.has_3for2() {
            let v = ff(&self.gx);
            r.gx_fully_faithful = Some(v);
            req(true, v, "g_X fully faithful", &mut failures);
        }
        r.failures = failures;
        r
    }

    /// Presentation by all morphisms of both legs, their composition tables
    /// and the identifications along W.
    pub fn presentation(&self) -> PresentedCategory {
        let span = &self.inner.span;
        let mut q = Quiver::new::<&str>(&[], &[]).expect("empty quiver");
        for n in self.z.objects() {
            q.add_vertex(n).expect("distinct");
        }
        let mut gen_of: [HashMap<MorId, GenId>; 2] = [HashMap::new(), HashMap::new()];
        for l in [Leg::X, Leg::Y] {
            let c = span.leg(l);
            for m in 0..c.num_morphisms() {
                if c.is_identity(m) {
                    continue;
                }
                let name = format!("{}:{}", l, c.mor_name(m));
                let e = Entry { leg: l, mor: m };
                let g = q
                    .add_arrow(
                        &name,
                        &self.z.objects()[self.inner.zsrc(e)],
                        &self.z.objects()[self.inner.ztgt(e)],
                    )
                    .expect("distinct names");
                gen_of[li(l)].insert(m, g);
            }
        }
        let mut rels = Vec::new();
        for l in [Leg::X, Leg::Y] {
            let c = span.leg(l);
            let path_of = |m: MorId| -> Path {
                let src = self.inner.class[li(l)][c.src(m)];
                if c.is_identity(m) {
                    Path::identity(src)
                } else {
                    Path {
                        src,
                        arrows: vec![gen_of[li(l)][&m]],
                    }
                }
            };
            for f in 0..c.num_morphisms() {
                if c.is_identity(f) {
                    continue;
                }
                for &g in c.hom_from(c.tgt(f)) {
                    if c.is_identity(g) {
                        continue;
                    }
                    let gf = c.compose(g, f).expect("composable");
                    let lhs = Path {
                        src: self.inner.class[li(l)][c.src(f)],
                        arrows: vec![gen_of[li(l)][&f], gen_of[li(l)][&g]],
                    };
                    rels.push((lhs, path_of(gf)));
                }
            }
        }
        let w = span.w();
        for m in 0..w.num_morphisms() {
            if w.is_identity(m) {
                continue;
            }
            let (a, b) = (span.fx().on_mor(m), span.fy().on_mor(m));
            let src = self.inner.class[0][span.x().src(a)];
            rels.push((
                Path {
                    src,
                    arrows: vec![gen_of[0][&a]],
                },
                Path {
                    src,
                    arrows: vec![gen_of[1][&b]],
                },
            ));
        }
        PresentedCategory::new(q, rels).expect("relations are parallel")
    }

    pub fn format_word(&self, w: &[Entry]) -> String {
        let parts: Vec<String> = w
            .iter()
            .map(|e| format!("{}:{}", e.leg, self.inner.cat(e.leg).mor_name(e.mor)))
            .collect();
        format!("({})", parts.join(", "))
    }

    pub fn word_json(&self, w: &[Entry]) -> Value {
        Value::Array(
            w.iter()
                .map(|e| json!({"leg": e.leg.to_string(), "mor": self.inner.cat(e.leg).mor_name(e.mor)}))
                .collect(),
        )
    }

    pub fn to_json(&self) -> Value {
        let z = &self.z;
        let mors: Vec<Value> = (0..z.num_morphisms())
            .map(|m| {
                json!({
                    "name": z.mor_name(m),
                    "src": z.object_name(z.src(m)),
                    "tgt": z.object_name(z.tgt(m)),
                    "word": self.word_json(&self.words[m].0),
                })
            })
            .collect();
        json!({
            "objects": z.objects(),
            "completeness": self.completeness(),
            "morphisms": mors,
        })
    }
}

/// Entry for a morphism given by name in one leg.
pub fn entry(span: &Span, leg: Leg, text: &str) -> Result<Entry, AmalgamError> {
    let c = span.leg(leg);
    Ok(Entry {
        leg,
        mor: c.parse_mor(text)?,
    })
}

/// Leg functor viewed through the span.
pub fn leg_functor(span: &Span, leg: Leg) -> &FunctorMap {
    span.leg_map(leg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catcore::{find_isomorphism, saturate};

    fn arrow() -> Arc<FinCategory> {
        Arc::new(FinCategory::poset(&["0", "1"], &[("f", "0", "1")]).unwrap())
    }

    fn span(w: Arc<FinCategory>, x: Arc<FinCategory>, y: Arc<FinCategory>, ox: &[usize], oy: &[usize]) -> Span {
        let fx = FunctorMap::new(w.clone(), x, ox.to_vec(), vec![]).unwrap();
        let fy = FunctorMap::new(w, y, oy.to_vec(), vec![]).unwrap();
        Span::new(fx, fy).unwrap()
    }

    #[test]
    fn parallel_arrows() {
        let w = Arc::new(FinCategory::discrete(&["p", "q"]));
        let r = pushout(&span(w, arrow(), arrow(), &[0, 1], &[0, 1])).unwrap();
        assert_eq!(r.z().num_objects(), 2);
        assert_eq!(r.z().num_morphisms(), 4);
        assert_eq!(r.completeness(), Completeness::NormalFormComplete);
        assert!(r.verify_amalgamation().passed());
        let x = AllowableSequence(vec![entry(r.span(), Leg::X, "f").unwrap()]);
        let y = AllowableSequence(vec![entry(r.span(), Leg::Y, "f").unwrap()]);
        assert_eq!(r.decide_equal(&x, &y, 4).unwrap(), Equality::Distinct);
    }

    #[test]
    fn composable_arrows() {
        let w = Arc::new(FinCategory::discrete(&["p"]));
        let r = pushout(&span(w, arrow(), arrow(), &[1], &[0])).unwrap();
        assert_eq!(r.z().num_morphisms(), 6);
        assert!(r.confluence_exhaustive(6).is_ok());
        let oracle = saturate(&r.presentation(), 100).finite().unwrap();
        assert_eq!(oracle.num_morphisms(), 6);
    }

    #[test]
    fn identity_span() {
        let w = Arc::new(FinCategory::poset(&["0", "1", "2"], &[("a", "0", "1"), ("b", "1", "2")]).unwrap());
        let id = FunctorMap::identity(w.clone());
        let r = pushout(&Span::new(id.clone(), id).unwrap()).unwrap();
        assert_eq!(r.completeness(), Completeness::BoundedSearch);
        assert!(find_isomorphism(r.z(), &w).is_some());
        assert!(r.verify_amalgamation().passed());
    }

    #[test]
    fn shared_arrow_identifies_words() {
        let w = arrow();
        let x = Arc::new(FinCategory::poset(&["0", "1", "2"], &[("f", "0", "1"), ("g", "1", "2")]).unwrap());
        let y = Arc::new(FinCategory::poset(&["m", "0", "1"], &[("h", "m", "0"), ("f", "0", "1")]).unwrap());
        let fx = FunctorMap::from_names(w.clone(), x, &[("0", "0"), ("1", "1")], &[("f", "f")]).unwrap();
        let fy = FunctorMap::from_names(w, y, &[("0", "0"), ("1", "1")], &[("f", "f")]).unwrap();
        let s = Span::new(fx, fy).unwrap();
        let r = pushout(&s).unwrap();
        let oracle = saturate(&r.presentation(), 100).finite().unwrap();
        assert_eq!(r.z().num_morphisms(), oracle.num_morphisms());
        assert_eq!(r.z().num_morphisms(), 10);
        let e = |l, t| entry(&s, l, t).unwrap();
        let w1 = AllowableSequence(vec![e(Leg::Y, "h"), e(Leg::Y, "f"), e(Leg::X, "g")]);
        let w2 = AllowableSequence(vec![e(Leg::Y, "h"), e(Leg::X, "f"), e(Leg::X, "g")]);
        assert_eq!(r.decide_equal(&w1, &w2, 3).unwrap(), Equality::Equal);
        assert_eq!(r.morphism_of(&w1).unwrap(), r.morphism_of(&w2).unwrap());
        assert!(r.verify_amalgamation().passed());
    }
}
