//! Representations of finite categories in finite-dimensional vector spaces.
//!
//! A representation stores one matrix per generating arrow and caches the
//! matrix of every morphism. Colimits and limits are computed from the
//! generating arrows only; Kan extensions are computed pointwise over slice
//! categories, with mediating maps solved exactly.

use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catcore::{product, slice, FinCategory, FunctorMap, MorId, ObjId, SliceSide};
use crate::error::RepError;
use crate::field::Field;
use crate::linalg::Matrix;

#[derive(Clone, Debug)]
pub struct Representation<F: Field> {
    base: Arc<FinCategory>,
    field: F,
    dims: Vec<usize>,
    gens: Vec<Matrix<F>>,
    mors: Vec<Matrix<F>>,
}

impl<F: Field> PartialEq for Representation<F> {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base) && self.dims == other.dims && self.gens == other.gens
    }
}

pub(crate) fn same_base(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b)
        || (a.objects() == b.objects()
            && a.num_morphisms() == b.num_morphisms()
            && a.gens().iter().zip(b.gens()).all(|(x, y)| x.src == y.src && x.tgt == y.tgt)
            && a.num_gens() == b.num_gens())
}

impl<F: Field> Representation<F> {
    /// Validates matrix shapes and every relation of the base.
    pub fn new(base: Arc<FinCategory>, field: F, dims: Vec<usize>, gens: Vec<Matrix<F>>) -> Result<Self, RepError> {
        if dims.len() != base.num_objects() || gens.len() != base.num_gens() {
            return Err(RepError::BaseMismatch);
        }
        for (g, arr) in base.gens().iter().enumerate() {
            let (r, c) = gens[g].shape();
            if (r, c) != (dims[arr.tgt], dims[arr.src]) {
                return Err(RepError::Shape {
                    arrow: arr.name.clone(),
                    rows: dims[arr.tgt],
                    cols: dims[arr.src],
                    got_rows: r,
                    got_cols: c,
                });
            }
        }
        let mut mors: Vec<Matrix<F>> = Vec::with_capacity(base.num_morphisms());
        for m in base.morphisms() {
            let mat = match m.parent {
                None => Matrix::identity(&field, dims[m.src]),
                Some((p, g)) => gens[g].mul(&mors[p]),
            };
            mors.push(mat);
        }
        for m in 0..base.num_morphisms() {
            for g in 0..base.num_gens() {
                if let Some(n) = base.act(m, g) {
                    if gens[g].mul(&mors[m]) != mors[n] {
                        return Err(RepError::Relation(format!(
                            "{}.{} = {}",
                            base.gens()[g].name,
                            base.mor_name(m),
                            base.mor_name(n)
                        )));
                    }
                }
            }
        }
        Ok(Representation { base, field, dims, gens, mors })
    }

    pub fn zero(base: Arc<FinCategory>, field: F) -> Self {
        let dims = vec![0; base.num_objects()];
        Self::constant(base, field, dims)
    }

    fn constant(base: Arc<FinCategory>, field: F, dims: Vec<usize>) -> Self {
        let gens = base
            .gens()
            .iter()
            .map(|a| Matrix::zeros(&field, dims[a.tgt], dims[a.src]))
            .collect();
        Self::new(base, field, dims, gens).expect("zero maps satisfy every relation")
    }

    /// The representation `k[Hom(a, -)]`.
    pub fn projective(base: Arc<FinCategory>, field: F, a: ObjId) -> Self {
        let dims: Vec<usize> = (0..base.num_objects()).map(|b| base.hom(a, b).len()).collect();
        let gens = base
            .gens()
            .iter()
            .enumerate()
            .map(|(g, arr)| {
                let mut m = Matrix::zeros(&field, dims[arr.tgt], dims[arr.src]);
                for (j, &h) in base.hom(a, arr.src).iter().enumerate() {
                    let gh = base.act(h, g).expect("composable");
                    let i = base.hom(a, arr.tgt).iter().position(|&x| x == gh).expect("hom member");
                    m.set(i, j, field.one());
                }
                m
            })
            .collect();
        Self::new(base, field, dims, gens).expect("representable functor")
    }

    /// `k` at `a` and zero elsewhere, with every arrow acting by zero.
    pub fn simple(base: Arc<FinCategory>, field: F, a: ObjId) -> Result<Self, RepError> {
        let mut dims = vec![0; base.num_objects()];
        dims[a] = 1;
        let gens = base
            .gens()
            .iter()
            .map(|arr| Matrix::zeros(&field, dims[arr.tgt], dims[arr.src]))
            .collect();
        Self::new(base, field, dims, gens)
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self, o: ObjId) -> usize {
        self.dims[o]
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn gen_matrix(&self, g: usize) -> &Matrix<F> {
        &self.gens[g]
    }
    pub fn gen_matrices(&self) -> &[Matrix<F>] {
        &self.gens
    }
    /// Matrix of an arbitrary morphism.
    pub fn matrix(&self, m: MorId) -> &Matrix<F> {
        &self.mors[m]
    }

    /// Direct sum with its canonical injections and projections.
    pub fn direct_sum(parts: &[Self]) -> Result<Biproduct<F>, RepError> {
        let first = parts.first().ok_or(RepError::BaseMismatch)?;
        if parts.iter().any(|p| !same_base(&p.base, &first.base)) {
            return Err(RepError::BaseMismatch);
        }
        let base = first.base.clone();
        let field = first.field.clone();
        let n = base.num_objects();
        let dims: Vec<usize> = (0..n).map(|o| parts.iter().map(|p| p.dims[o]).sum()).collect();
        let gens = (0..base.num_gens())
            .map(|g| Matrix::block_diag(&parts.iter().map(|p| &p.gens[g]).collect::<Vec<_>>(), &field))
            .collect();
        let sum = Self::new(base, field.clone(), dims.clone(), gens)?;
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        let mut offset = vec![0; n];
        for p in parts {
            let mut ic = Vec::new();
            let mut pc = Vec::new();
            for o in 0..n {
                let mut i = Matrix::zeros(&field, dims[o], p.dims[o]);
                i.put(offset[o], 0, &Matrix::identity(&field, p.dims[o]));
                pc.push(i.transpose());
                ic.push(i);
                offset[o] += p.dims[o];
            }
            inj.push(NatTransform::new(p.clone(), sum.clone(), ic)?);
            proj.push(NatTransform::new(sum.clone(), p.clone(), pc)?);
        }
        Ok(Biproduct { sum, inj, proj })
    }

    /// Random representation of a free or thin base; relations are enforced by
    /// rejection.
    pub fn random(base: Arc<FinCategory>, field: F, max_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        for _ in 0..64 {
            let dims: Vec<usize> = (0..base.num_objects()).map(|_| rng.random_range(0..=max_dim)).collect();
            let gens: Vec<Matrix<F>> = base
                .gens()
                .iter()
                .map(|a| random_matrix(&field, dims[a.tgt], dims[a.src], rng))
                .collect();
            if let Ok(r) = Self::new(base.clone(), field.clone(), dims, gens) {
                return r;
            }
        }
        let dims: Vec<usize> = (0..base.num_objects()).map(|_| rng.random_range(0..=max_dim)).collect();
        Self::constant(base, field, dims)
    }
}

pub fn random_matrix<F: Field>(field: &F, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix<F> {
    let entries: Vec<i64> = (0..rows * cols).map(|_| rng.random_range(-2..=2)).collect();
    Matrix::from_i64(field, rows, cols, &entries)
}

#[derive(Clone, Debug)]
pub struct Biproduct<F: Field> {
    pub sum: Representation<F>,
    pub inj: Vec<NatTransform<F>>,
    pub proj: Vec<NatTransform<F>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NatTransform<F: Field> {
    src: Representation<F>,
    tgt: Representation<F>,
    comps: Vec<Matrix<F>>,
}

impl<F: Field> NatTransform<F> {
    pub fn new(src: Representation<F>, tgt: Representation<F>, comps: Vec<Matrix<F>>) -> Result<Self, RepError> {
        if !same_base(&src.base, &tgt.base) || comps.len() != src.dims.len() {
            return Err(RepError::BaseMismatch);
        }
        for (o, c) in comps.iter().enumerate() {
            if c.shape() != (tgt.dims[o], src.dims[o]) {
                return Err(RepError::Shape {
                    arrow: format!("component at {}", src.base.object_name(o)),
                    rows: tgt.dims[o],
                    cols: src.dims[o],
                    got_rows: c.rows(),
                    got_cols: c.cols(),
                });
            }
        }
        for (g, arr) in src.base.gens().iter().enumerate() {
            if tgt.gens[g].mul(&comps[arr.src]) != comps[arr.tgt].mul(&src.gens[g]) {
                return Err(RepError::NotNatural(arr.name.clone()));
            }
        }
        Ok(NatTransform { src, tgt, comps })
    }

    pub fn identity(x: &Representation<F>) -> Self {
        let comps = x.dims.iter().map(|&d| Matrix::identity(&x.field, d)).collect();
        NatTransform { src: x.clone(), tgt: x.clone(), comps }
    }

    pub fn zero(x: &Representation<F>, y: &Representation<F>) -> Result<Self, RepError> {
        let comps = (0..x.dims.len()).map(|o| Matrix::zeros(&x.field, y.dims[o], x.dims[o])).collect();
        Self::new(x.clone(), y.clone(), comps)
    }

    pub fn src(&self) -> &Representation<F> {
        &self.src
    }
    pub fn tgt(&self) -> &Representation<F> {
        &self.tgt
    }
    pub fn component(&self, o: ObjId) -> &Matrix<F> {
        &self.comps[o]
    }
    pub fn components(&self) -> &[Matrix<F>] {
        &self.comps
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &NatTransform<F>) -> Result<Self, RepError> {
        if first.tgt != self.src {
            return Err(RepError::BaseMismatch);
        }
        let comps = self.comps.iter().zip(&first.comps).map(|(a, b)| a.mul(b)).collect();
        Ok(NatTransform {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            comps,
        })
    }

    pub fn add(&self, other: &NatTransform<F>) -> Result<Self, RepError> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(RepError::BaseMismatch);
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect();
        Ok(NatTransform {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            comps,
        })
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        NatTransform {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && self.comps.iter().all(|c| c.is_identity())
    }

    pub fn is_natural_iso(&self) -> bool {
        is_natural_iso(self)
    }

    pub fn inverse(&self) -> Option<Self> {
        let comps: Option<Vec<Matrix<F>>> = self.comps.iter().map(|c| c.inverse()).collect();
        Some(NatTransform {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            comps: comps?,
        })
    }

    /// Restriction along `u`.
    pub fn restrict(&self, u: &FunctorMap) -> Result<Self, RepError> {
        let src = restrict(u, &self.src)?;
        let tgt = restrict(u, &self.tgt)?;
        let comps = (0..u.dom().num_objects()).map(|o| self.comps[u.obj(o)].clone()).collect();
        Ok(NatTransform { src, tgt, comps })
    }
}

/// Every component is an invertible matrix.
pub fn is_natural_iso<F: Field>(t: &NatTransform<F>) -> bool {
    t.comps.iter().all(|c| c.is_invertible())
}

/// `u*X = X ∘ u`.
pub fn restrict<F: Field>(u: &FunctorMap, x: &Representation<F>) -> Result<Representation<F>, RepError> {
    if !same_base(u.cod(), &x.base) {
        return Err(RepError::BaseMismatch);
    }
    let d = u.dom().clone();
    let dims = (0..d.num_objects()).map(|o| x.dims[u.obj(o)]).collect();
    let gens = (0..d.num_gens()).map(|g| x.mors[u.on_gen(g)].clone()).collect();
    Representation::new(d, x.field.clone(), dims, gens)
}

fn offsets(dims: impl Iterator<Item = usize>) -> (Vec<usize>, usize) {
    let mut off = Vec::new();
    let mut total = 0;
    for d in dims {
        off.push(total);
        total += d;
    }
    (off, total)
}

/// A basis of the space of natural transformations `X → Y`.
pub fn hom_space<F: Field>(x: &Representation<F>, y: &Representation<F>) -> Result<Vec<NatTransform<F>>, RepError> {
    if !same_base(&x.base, &y.base) {
        return Err(RepError::BaseMismatch);
    }
    let f = &x.field;
    let c = &x.base;
    let (off, unknowns) = offsets((0..c.num_objects()).map(|o| y.dims[o] * x.dims[o]));
    let var = |o: ObjId, i: usize, j: usize| off[o] + i * x.dims[o] + j;
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (g, arr) in c.gens().iter().enumerate() {
        let (a, b) = (arr.src, arr.tgt);
        let (yg, xg) = (&y.gens[g], &x.gens[g]);
        for i in 0..y.dims[b] {
            for j in 0..x.dims[a] {
                let mut row = vec![f.zero(); unknowns];
                for k in 0..y.dims[a] {
                    let v = var(a, k, j);
                    row[v] = f.add(&row[v], yg.get(i, k));
                }
                for k in 0..x.dims[b] {
                    let v = var(b, i, k);
                    row[v] = f.sub(&row[v], xg.get(k, j));
                }
                rows.push(row);
            }
        }
    }
    let n_rows = rows.len();
    let system = Matrix::from_rows(f, n_rows, unknowns, rows).expect("rectangular system");
    let kernel = system.kernel();
    let mut basis = Vec::new();
    for col in 0..kernel.cols() {
        let comps = (0..c.num_objects())
            .map(|o| {
                let mut m = Matrix::zeros(f, y.dims[o], x.dims[o]);
                for i in 0..y.dims[o] {
                    for j in 0..x.dims[o] {
                        m.set(i, j, kernel.get(var(o, i, j), col).clone());
                    }
                }
                m
            })
            .collect();
        basis.push(NatTransform::new(x.clone(), y.clone(), comps)?);
    }
    Ok(basis)
}

/// Combination `Σ cᵢ tᵢ` of hom-space elements.
pub fn combine<F: Field>(
    x: &Representation<F>,
    y: &Representation<F>,
    basis: &[NatTransform<F>],
    coeffs: &[F::Elem],
) -> Result<NatTransform<F>, RepError> {
    let mut acc = NatTransform::zero(x, y)?;
    for (t, c) in basis.iter().zip(coeffs) {
        acc = acc.add(&t.scale(c))?;
    }
    Ok(acc)
}

/// A verified isomorphism `X → Y` found among random elements of the hom-space.
pub fn find_rep_isomorphism<F: Field>(
    x: &Representation<F>,
    y: &Representation<F>,
    seed: u64,
) -> Result<Option<NatTransform<F>>, RepError> {
    if x.dims != y.dims {
        return Ok(None);
    }
    let basis = hom_space(x, y)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let coeffs: Vec<F::Elem> = basis.iter().map(|_| x.field.from_i64(rng.random_range(-40..=40))).collect();
        let t = combine(x, y, &basis, &coeffs)?;
        if t.is_natural_iso() {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    Colimit,
    Limit,
}

/// Apex with its cocone injections or cone projections.
#[derive(Clone, Debug)]
pub struct CoconeData<F: Field> {
    pub kind: ConeKind,
    pub apex: usize,
    /// `X_a → apex` for a colimit, `apex → X_a` for a limit.
    pub maps: Vec<Matrix<F>>,
    diagram: Representation<F>,
    /// Colimit: surjection `⊕X_a → apex`. Limit: injection `apex → ΠX_a`.
    packed: Matrix<F>,
    /// A one-sided inverse of `packed`.
    section: Matrix<F>,
}

fn relation_matrix<F: Field>(x: &Representation<F>) -> Matrix<F> {
    let f = &x.field;
    let c = &x.base;
    let (obj_off, total) = offsets(x.dims.iter().copied());
    let (gen_off, gen_total) = offsets(c.gens().iter().map(|a| x.dims[a.src]));
    let mut m = Matrix::zeros(f, total, gen_total);
    for (g, arr) in c.gens().iter().enumerate() {
        m.put(obj_off[arr.tgt], gen_off[g], &x.gens[g]);
        let mut block = m.block(obj_off[arr.src], gen_off[g], x.dims[arr.src], x.dims[arr.src]);
        block = block.sub(&Matrix::identity(f, x.dims[arr.src]));
        m.put(obj_off[arr.src], gen_off[g], &block);
    }
    m
}

/// Rows `X(g)·x_src − x_tgt` per generator; the limit is its kernel.
fn constraint_matrix<F: Field>(x: &Representation<F>) -> Matrix<F> {
    let f = &x.field;
    let c = &x.base;
    let (obj_off, total) = offsets(x.dims.iter().copied());
    let (gen_off, gen_total) = offsets(c.gens().iter().map(|a| x.dims[a.tgt]));
    let mut m = Matrix::zeros(f, gen_total, total);
    for (g, arr) in c.gens().iter().enumerate() {
        m.put(gen_off[g], obj_off[arr.src], &x.gens[g]);
        let mut block = m.block(gen_off[g], obj_off[arr.tgt], x.dims[arr.tgt], x.dims[arr.tgt]);
        block = block.sub(&Matrix::identity(f, x.dims[arr.tgt]));
        m.put(gen_off[g], obj_off[arr.tgt], &block);
    }
    m
}

pub fn colimit<F: Field>(x: &Representation<F>) -> CoconeData<F> {
    let (obj_off, _) = offsets(x.dims.iter().copied());
    let (proj, section) = relation_matrix(x).cokernel();
    let maps = (0..x.dims.len())
        .map(|o| proj.block(0, obj_off[o], proj.rows(), x.dims[o]))
        .collect();
    CoconeData {
        kind: ConeKind::Colimit,
        apex: proj.rows(),
        maps,
        diagram: x.clone(),
        packed: proj,
        section,
    }
}

pub fn limit<F: Field>(x: &Representation<F>) -> CoconeData<F> {
    let (obj_off, _) = offsets(x.dims.iter().copied());
    let k = constraint_matrix(x).kernel();
    let maps = (0..x.dims.len())
        .map(|o| k.block(obj_off[o], 0, x.dims[o], k.cols()))
        .collect();
    let pivots = k.transpose().echelon().pivots;
    let mut section = Matrix::zeros(&x.field, k.cols(), k.rows());
    let square = k.transpose().column_basis().transpose();
    let inv = square.inverse().expect("pivot rows of a kernel basis");
    for (j, &p) in pivots.iter().enumerate() {
        for r in 0..k.cols() {
            section.set(r, p, inv.get(r, j).clone());
        }
    }
    CoconeData {
        kind: ConeKind::Limit,
        apex: k.cols(),
        maps,
        diagram: x.clone(),
        packed: k,
        section,
    }
}

impl<F: Field> CoconeData<F> {
    /// Exact check of the universal property: the (co)cone commutes and the
    /// packed map is a (co)kernel of the relation matrix.
    pub fn certify(&self) -> Result<(), RepError> {
        let x = &self.diagram;
        for (g, arr) in x.base.gens().iter().enumerate() {
            let ok = match self.kind {
                ConeKind::Colimit => self.maps[arr.tgt].mul(&x.gens[g]) == self.maps[arr.src],
                ConeKind::Limit => x.gens[g].mul(&self.maps[arr.src]) == self.maps[arr.tgt],
            };
            if !ok {
                return Err(RepError::Certificate(format!("not commutative at `{}`", arr.name)));
            }
        }
        let total = x.total_dim();
        match self.kind {
            ConeKind::Colimit => {
                let rel = relation_matrix(x);
                if !self.packed.mul(&rel).is_zero() || self.packed.rank() != self.apex || rel.rank() + self.apex != total {
                    return Err(RepError::Certificate("cokernel".into()));
                }
                if !self.packed.mul(&self.section).is_identity() {
                    return Err(RepError::Certificate("section".into()));
                }
            }
            ConeKind::Limit => {
                let rel = constraint_matrix(x);
                if !rel.mul(&self.packed).is_zero()
                    || self.packed.rank() != self.apex
                    || rel.rank() + self.apex != total
                {
                    return Err(RepError::Certificate("kernel".into()));
                }
                if !self.section.mul(&self.packed).is_identity() {
                    return Err(RepError::Certificate("retraction".into()));
                }
            }
        }
        Ok(())
    }

    /// The unique map out of the colimit (into the limit) restricting to the
    /// given compatible family.
    pub fn mediate(&self, family: &[Matrix<F>], other: usize) -> Result<Matrix<F>, RepError> {
        let x = &self.diagram;
        let f = &x.field;
        match self.kind {
            ConeKind::Colimit => {
                let parts: Vec<&Matrix<F>> = family.iter().collect();
                let packed = Matrix::hstack(&parts, f, other);
                let m = packed.mul(&self.section);
                if m.mul(&self.packed) != packed {
                    return Err(RepError::Certificate("family is not a cocone".into()));
                }
                Ok(m)
            }
            ConeKind::Limit => {
                let parts: Vec<&Matrix<F>> = family.iter().collect();
                let packed = Matrix::vstack(&parts, f, other);
                let m = self.section.mul(&packed);
                if self.packed.mul(&m) != packed {
                    return Err(RepError::Certificate("family is not a cone".into()));
                }
                Ok(m)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KanSide {
    Left,
    Right,
}

/// `u_!X` or `u_*X` with the slice data used to compute it.
#[derive(Clone, Debug)]
pub struct KanExtension<F: Field> {
    pub side: KanSide,
    pub u: FunctorMap,
    pub source: Representation<F>,
    pub value: Representation<F>,
    /// Left: the unit `X → u*u_!X`. Right: the counit `u*u_*X → X`.
    pub adjunction_map: NatTransform<F>,
    /// Per object of the codomain: slice objects and their (co)limit.
    pub pointwise: Vec<(Vec<(ObjId, MorId)>, CoconeData<F>)>,
}

pub fn kan_extension<F: Field>(u: &FunctorMap, x: &Representation<F>, side: KanSide) -> Result<KanExtension<F>, RepError> {
    if !same_base(u.dom(), &x.base) {
        return Err(RepError::BaseMismatch);
    }
    let b = u.cod().clone();
    let f = x.field.clone();
    let mut pointwise = Vec::new();
    for o in 0..b.num_objects() {
        let sl = match side {
            KanSide::Left => slice(u, o, SliceSide::Under)?,
            KanSide::Right => slice(u, o, SliceSide::Over)?,
        };
        let px = restrict(&sl.projection, x)?;
        let cd = match side {
            KanSide::Left => colimit(&px),
            KanSide::Right => limit(&px),
        };
        cd.certify()?;
        pointwise.push((sl.objects.clone(), cd));
    }
    let index = |o: ObjId, key: (ObjId, MorId)| pointwise[o].0.iter().position(|&p| p == key).expect("slice object");
    let dims: Vec<usize> = pointwise.iter().map(|(_, cd)| cd.apex).collect();
    let mut gens = Vec::new();
    for (g, arr) in b.gens().iter().enumerate() {
        let beta = b.gen_mor(g);
        let (s, t) = (arr.src, arr.tgt);
        let m = match side {
            KanSide::Left => {
                let family: Vec<Matrix<F>> = pointwise[s]
                    .0
                    .iter()
                    .map(|&(a, h)| {
                        let bh = b.compose(beta, h).expect("composable");
                        pointwise[t].1.maps[index(t, (a, bh))].clone()
                    })
                    .collect();
                pointwise[s].1.mediate(&family, dims[t])?
            }
            KanSide::Right => {
                let family: Vec<Matrix<F>> = pointwise[t]
                    .0
                    .iter()
                    .map(|&(a, h)| {
                        let hb = b.compose(h, beta).expect("composable");
                        pointwise[s].1.maps[index(s, (a, hb))].clone()
                    })
                    .collect();
                pointwise[t].1.mediate(&family, dims[s])?
            }
        };
        gens.push(m);
    }
    let value = Representation::new(b.clone(), f.clone(), dims, gens)?;
    let uv = restrict(u, &value)?;
    let comps = (0..x.base.num_objects())
        .map(|a| {
            let ua = u.obj(a);
            pointwise[ua].1.maps[index(ua, (a, b.identity(ua)))].clone()
        })
        .collect();
    let adjunction_map = match side {
        KanSide::Left => NatTransform::new(x.clone(), uv, comps)?,
        KanSide::Right => NatTransform::new(uv, x.clone(), comps)?,
    };
    Ok(KanExtension {
        side,
        u: u.clone(),
        source: x.clone(),
        value,
        adjunction_map,
        pointwise,
    })
}

impl<F: Field> KanExtension<F> {
    /// The value of the extension on a natural transformation out of (left)
    /// or into (right) the source, given the extension of the other end.
    pub fn extend_map(&self, other: &KanExtension<F>, t: &NatTransform<F>) -> Result<NatTransform<F>, RepError> {
        let b = self.u.cod();
        let (from, to) = match self.side {
            KanSide::Left => (self, other),
            KanSide::Right => (other, self),
        };
        if t.src != from.source || t.tgt != to.source {
            return Err(RepError::BaseMismatch);
        }
        let mut comps = Vec::new();
        for o in 0..b.num_objects() {
            let (keys, cd_from) = &from.pointwise[o];
            let (keys_to, cd_to) = &to.pointwise[o];
            let m = match self.side {
                KanSide::Left => {
                    let family: Vec<Matrix<F>> = keys
                        .iter()
                        .enumerate()
                        .map(|(i, &(a, _))| {
                            debug_assert_eq!(keys_to[i], keys[i]);
                            cd_to.maps[i].mul(&t.comps[a])
                        })
                        .collect();
                    cd_from.mediate(&family, cd_to.apex)?
                }
                KanSide::Right => {
                    let family: Vec<Matrix<F>> = keys_to
                        .iter()
                        .enumerate()
                        .map(|(i, &(a, _))| t.comps[a].mul(&cd_from.maps[i]))
                        .collect();
                    cd_to.mediate(&family, cd_from.apex)?
                }
            };
            comps.push(m);
        }
        NatTransform::new(from.value.clone(), to.value.clone(), comps)
    }
}

/// Left: the counit `u_!u*Y → Y`. Right: the unit `Y → u_*u*Y`.
pub fn adjunction_dual_map<F: Field>(
    u: &FunctorMap,
    y: &Representation<F>,
    side: KanSide,
) -> Result<(KanExtension<F>, NatTransform<F>), RepError> {
    let uy = restrict(u, y)?;
    let ext = kan_extension(u, &uy, side)?;
    let b = u.cod();
    let mut comps = Vec::new();
    for o in 0..b.num_objects() {
        let (keys, cd) = &ext.pointwise[o];
        let family: Vec<Matrix<F>> = keys.iter().map(|&(_, h)| y.matrix(h).clone()).collect();
        comps.push(cd.mediate(&family, y.dim(o))?);
    }
    let t = match side {
        KanSide::Left => NatTransform::new(ext.value.clone(), y.clone(), comps)?,
        KanSide::Right => NatTransform::new(y.clone(), ext.value.clone(), comps)?,
    };
    Ok((ext, t))
}

/// Outcome of the exact triangle identity checks for `X` over the domain and
/// `Y` over the codomain.
#[derive(Clone, Debug, Serialize)]
pub struct TriangleReport {
    pub first: bool,
    pub second: bool,
    pub hom_dims: (usize, usize),
}

impl TriangleReport {
    pub fn passed(&self) -> bool {
        self.first && self.second && self.hom_dims.0 == self.hom_dims.1
    }
}

pub fn check_triangles<F: Field>(
    u: &FunctorMap,
    x: &Representation<F>,
    y: &Representation<F>,
    side: KanSide,
) -> Result<TriangleReport, RepError> {
    let ext = kan_extension(u, x, side)?;
    let uy = restrict(u, y)?;
    match side {
        KanSide::Left => {
            // ε_{u_!X} ∘ u_!(η_X) = id
            let (ext2, eps) = adjunction_dual_map(u, &ext.value, side)?;
            let shifted = ext.extend_map(&ext2, &ext.adjunction_map)?;
            let first = eps.after(&shifted)?.is_identity();
            // u*(ε_Y) ∘ η_{u*Y} = id
            let (ext_y, eps_y) = adjunction_dual_map(u, y, side)?;
            let second = eps_y.restrict(u)?.after(&ext_y.adjunction_map)?.is_identity();
            let hom_dims = (hom_space(&ext.value, y)?.len(), hom_space(x, &uy)?.len());
            Ok(TriangleReport { first, second, hom_dims })
        }
        KanSide::Right => {
            // ε_{u*Y} ∘ u*(η_Y) = id
            let (ext_y, eta_y) = adjunction_dual_map(u, y, side)?;
            let first = ext_y.adjunction_map.after(&eta_y.restrict(u)?)?.is_identity();
            // u_*(ε_X) ∘ η_{u_*X} = id
            let (ext2, eta) = adjunction_dual_map(u, &ext.value, side)?;
            let pushed = ext.extend_map(&ext2, &ext.adjunction_map)?;
            let second = pushed.after(&eta)?.is_identity();
            let hom_dims = (hom_space(y, &ext.value)?.len(), hom_space(&uy, x)?.len());
            Ok(TriangleReport { first, second, hom_dims })
        }
    }
}

/// A `Representation` of `B × A` read as an `A`-shaped diagram of
/// `B`-representations.
#[derive(Clone, Debug)]
pub struct Diagram<F: Field> {
    pub shape: Arc<FinCategory>,
    pub values: Vec<Representation<F>>,
    pub maps: Vec<NatTransform<F>>,
}

pub fn curry<F: Field>(
    x: &Representation<F>,
    b: &Arc<FinCategory>,
    a: &Arc<FinCategory>,
) -> Result<Diagram<F>, RepError> {
    let (nb, na) = (b.num_objects(), a.num_objects());
    let (gb, ga) = (b.num_gens(), a.num_gens());
    if x.dims.len() != nb * na || x.gens.len() != gb * na + nb * ga {
        return Err(RepError::BaseMismatch);
    }
    let f = &x.field;
    let mut values = Vec::new();
    for j in 0..na {
        let dims = (0..nb).map(|i| x.dims[i * na + j]).collect();
        let gens = (0..gb).map(|g| x.gens[g * na + j].clone()).collect();
        values.push(Representation::new(b.clone(), f.clone(), dims, gens)?);
    }
    let mut maps = Vec::new();
    for (h, arr) in a.gens().iter().enumerate() {
        let comps = (0..nb).map(|i| x.gens[gb * na + i * ga + h].clone()).collect();
        maps.push(NatTransform::new(values[arr.src].clone(), values[arr.tgt].clone(), comps)?);
    }
    Ok(Diagram {
        shape: a.clone(),
        values,
        maps,
    })
}

pub fn uncurry<F: Field>(d: &Diagram<F>, b: &Arc<FinCategory>, field: &F) -> Result<Representation<F>, RepError> {
    let a = &d.shape;
    let p = Arc::new(product(b, a)?);
    let (nb, na) = (b.num_objects(), a.num_objects());
    let mut dims = vec![0; nb * na];
    for i in 0..nb {
        for j in 0..na {
            dims[i * na + j] = d.values[j].dims[i];
        }
    }
    let mut gens = Vec::new();
    for g in 0..b.num_gens() {
        for j in 0..na {
            gens.push(d.values[j].gens[g].clone());
        }
    }
    for i in 0..nb {
        for h in 0..a.num_gens() {
            gens.push(d.maps[h].comps[i].clone());
        }
    }
    Representation::new(p, field.clone(), dims, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catcore::{full_subcategory, Quiver};
    use crate::field::PrimeField;

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    fn k() -> PrimeField {
        PrimeField::default()
    }

    fn arrow() -> Arc<FinCategory> {
        arc(FinCategory::poset(&["0", "1"], &[("u", "0", "1")]).unwrap())
    }

    fn rep(c: &Arc<FinCategory>, dims: &[usize], mats: &[&[i64]]) -> Representation<PrimeField> {
        let f = k();
        let gens = c
            .gens()
            .iter()
            .zip(mats)
            .map(|(a, m)| Matrix::from_i64(&f, dims[a.tgt], dims[a.src], m))
            .collect();
        Representation::new(c.clone(), f, dims.to_vec(), gens).unwrap()
    }

    #[test]
    fn hom_over_point_is_all_matrices() {
        let p = arc(FinCategory::discrete(&["*"]));
        let x = rep(&p, &[2], &[]);
        let y = rep(&p, &[3], &[]);
        assert_eq!(hom_space(&x, &y).unwrap().len(), 6);
        assert_eq!(hom_space(&x, &x).unwrap().len(), 4);
    }

    #[test]
    fn hom_between_opposite_simples_vanishes() {
        let c = arrow();
        let x = rep(&c, &[1, 0], &[&[]]);
        let y = rep(&c, &[0, 1], &[&[]]);
        assert_eq!(hom_space(&x, &y).unwrap().len(), 0);
        assert_eq!(hom_space(&y, &x).unwrap().len(), 0);
    }

    #[test]
    fn relation_violation_is_rejected() {
        let q = Quiver::new(&["a", "b"], &[("f", "a", "b"), ("g", "a", "b")]).unwrap();
        let pres = crate::catcore::PresentedCategory::new(
            q.clone(),
            vec![(q.parse_path("f").unwrap(), q.parse_path("g").unwrap())],
        )
        .unwrap();
        let c = arc(crate::catcore::saturate(&pres, 8).finite().unwrap());
        let f = k();
        let gens = vec![Matrix::from_i64(&f, 1, 1, &[1]), Matrix::from_i64(&f, 1, 1, &[2])];
        let err = Representation::new(c.clone(), f.clone(), vec![1, 1], gens);
        assert!(matches!(err, Err(RepError::Relation(_))), "{err:?}");
        let wrong = Representation::new(c, f.clone(), vec![1, 1], vec![Matrix::zeros(&f, 2, 1), Matrix::zeros(&f, 1, 1)]);
        assert!(matches!(wrong, Err(RepError::Shape { .. })));
    }

    #[test]
    fn span_colimit_is_one_dimensional() {
        let c = arc(FinCategory::poset(&["v", "c", "o"], &[("h", "v", "c"), ("k", "v", "o")]).unwrap());
        let x = rep(&c, &[1, 1, 1], &[&[1], &[1]]);
        let cd = colimit(&x);
        cd.certify().unwrap();
        assert_eq!(cd.apex, 1);
        let lim = limit(&x);
        lim.certify().unwrap();
        assert_eq!(lim.apex, 1);
    }

    #[test]
    fn discrete_colimit_and_limit_are_sums() {
        let c = arc(FinCategory::discrete(&["a", "b"]));
        let x = rep(&c, &[2, 3], &[]);
        assert_eq!(colimit(&x).apex, 5);
        assert_eq!(limit(&x).apex, 5);
    }

    #[test]
    fn terminal_object_computes_colimit() {
        let c = arc(FinCategory::poset(&["a", "b", "t"], &[("f", "a", "t"), ("g", "b", "t")]).unwrap());
        let x = rep(&c, &[2, 1, 2], &[&[1, 0, 0, 1], &[1, 1]]);
        let cd = colimit(&x);
        cd.certify().unwrap();
        assert_eq!(cd.apex, 2);
        assert!(cd.maps[2].is_invertible());
    }

    #[test]
    fn limit_over_initial_object_is_its_value() {
        let c = arrow();
        let x = rep(&c, &[3, 2], &[&[0, 1, -1, -1, 2, -1]]);
        let l = limit(&x);
        l.certify().unwrap();
        assert_eq!(l.apex, 3);
        assert!(l.maps[0].is_invertible());
        assert_eq!(l.maps[1], x.gen_matrix(0).mul(&l.maps[0]));
    }

    #[test]
    fn left_kan_along_fold_is_sum() {
        let two = arc(FinCategory::discrete(&["a", "b"]));
        let one = arc(FinCategory::discrete(&["*"]));
        let u = FunctorMap::new(two.clone(), one, vec![0, 0], vec![]).unwrap();
        let x = rep(&two, &[1, 2], &[]);
        let ext = kan_extension(&u, &x, KanSide::Left).unwrap();
        assert_eq!(ext.value.dim(0), 3);
        let y = {
            let c = u.cod();
            rep(c, &[2], &[])
        };
        assert!(check_triangles(&u, &x, &y, KanSide::Left).unwrap().passed());
        assert!(check_triangles(&u, &x, &y, KanSide::Right).unwrap().passed());
    }

    #[test]
    fn fully_faithful_unit_is_iso_and_sieve_extends_by_zero() {
        let c = arrow();
        let inc = full_subcategory(&c, &[0]).unwrap();
        let x = rep(inc.dom(), &[2], &[]);
        let left = kan_extension(&inc, &x, KanSide::Left).unwrap();
        assert!(left.adjunction_map.is_natural_iso());
        assert_eq!(left.value.dims(), &[2, 2]);
        assert!(inc.is_sieve());
        let right = kan_extension(&inc, &x, KanSide::Right).unwrap();
        assert_eq!(right.value.dims(), &[2, 0]);
        assert!(right.adjunction_map.is_natural_iso());
    }

    #[test]
    fn triangles_on_arrow_inclusion() {
        let c = arrow();
        let inc = full_subcategory(&c, &[1]).unwrap();
        let x = rep(inc.dom(), &[2], &[]);
        let y = rep(&c, &[1, 2], &[&[1, 1]]);
        for side in [KanSide::Left, KanSide::Right] {
            let r = check_triangles(&inc, &x, &y, side).unwrap();
            assert!(r.passed(), "{side:?} {r:?}");
        }
    }

    #[test]
    fn biproduct_identities() {
        let c = arrow();
        let x = rep(&c, &[1, 1], &[&[1]]);
        let y = rep(&c, &[2, 1], &[&[1, 3]]);
        let b = Representation::direct_sum(&[x, y]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let comp = b.proj[i].after(&b.inj[j]).unwrap();
                assert_eq!(comp.is_identity(), i == j);
            }
        }
    }

    #[test]
    fn curry_round_trip() {
        let b = arrow();
        let a = arc(FinCategory::discrete(&["p", "q"]));
        let p = arc(product(&b, &a).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = Representation::random(p, k(), 2, &mut rng);
        let d = curry(&x, &b, &a).unwrap();
        let back = uncurry(&d, &b, &k()).unwrap();
        assert_eq!(back, x);
    }
}
