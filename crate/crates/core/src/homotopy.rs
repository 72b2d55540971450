//! Bounded chain complexes of representations and the reflection functors.
//!
//! Indexing is homological: the differential lowers degree by one. The cone
//! of `f : A → B` is `A[n-1] ⊕ B[n]` with `d(a, b) = (-da, f(a) + db)` and the
//! fiber of `g : B → C` is `B[n] ⊕ C[n+1]` with `d(b, c) = (db, g(b) - dc)`.
//! Every cone and fiber ships its null-homotopy.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::amalgam::Leg;
use crate::catcore::{FinCategory, FunctorMap, GenId, MorId, ObjId};
use crate::error::{GlueError, RepError};
use crate::field::Field;
use crate::glue::{attach_cone, Cone, Direction};
use crate::linalg::Matrix;
use crate::linrep::{restrict, same_base, NatTransform, Representation};

/// A diagram of bounded complexes, stored as one representation per degree
/// of the window `lo..=hi` and the differentials between them.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexRep<F: Field> {
    lo: i32,
    degrees: Vec<Representation<F>>,
    /// `d[k][o] : X_{lo+k+1} → X_{lo+k}` at object `o`.
    d: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> ComplexRep<F> {
    pub fn new(lo: i32, degrees: Vec<Representation<F>>, d: Vec<Vec<Matrix<F>>>) -> Result<Self, RepError> {
        let first = degrees.first().ok_or(RepError::WindowMismatch)?;
        if d.len() + 1 != degrees.len() {
            return Err(RepError::WindowMismatch);
        }
        let base = first.base().clone();
        if degrees.iter().any(|r| !same_base(r.base(), &base)) {
            return Err(RepError::BaseMismatch);
        }
        for (k, dk) in d.iter().enumerate() {
            let deg = lo + k as i32 + 1;
            match NatTransform::new(degrees[k + 1].clone(), degrees[k].clone(), dk.clone()) {
                Ok(_) => {}
                Err(RepError::NotNatural(arrow)) => {
                    return Err(RepError::NotChainMap { object: arrow, degree: deg });
                }
                Err(e) => return Err(e),
            }
            if k > 0 {
                for o in 0..base.num_objects() {
                    if !d[k - 1][o].mul(&dk[o]).is_zero() {
                        return Err(RepError::NotComplex {
                            object: base.object_name(o).to_string(),
                            degree: deg,
                        });
                    }
                }
            }
        }
        Ok(ComplexRep { lo, degrees, d })
    }

    /// A representation placed in a single degree.
    pub fn concentrated(x: Representation<F>, degree: i32) -> Self {
        ComplexRep {
            lo: degree,
            degrees: vec![x],
            d: Vec::new(),
        }
    }

    pub fn zero(base: Arc<FinCategory>, field: F, lo: i32, hi: i32) -> Self {
        let z = Representation::zero(base, field);
        Self::concentrated(z, lo).widen(lo, hi)
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        self.degrees[0].base()
    }
    pub fn field(&self) -> &F {
        self.degrees[0].field()
    }
    pub fn window(&self) -> (i32, i32) {
        (self.lo, self.lo + self.degrees.len() as i32 - 1)
    }
    fn index(&self, n: i32) -> Option<usize> {
        let (lo, hi) = self.window();
        (lo..=hi).contains(&n).then(|| (n - lo) as usize)
    }
    /// The representation in degree `n`, if `n` lies in the window.
    pub fn degree(&self, n: i32) -> Option<&Representation<F>> {
        self.index(n).map(|k| &self.degrees[k])
    }
    pub fn dim(&self, o: ObjId, n: i32) -> usize {
        self.degree(n).map_or(0, |r| r.dim(o))
    }
    /// `d : X_n → X_{n-1}` at `o`, zero outside the window.
    pub fn differential(&self, o: ObjId, n: i32) -> Matrix<F> {
        match (self.index(n), self.index(n - 1)) {
            (Some(k), Some(_)) => self.d[k - 1][o].clone(),
            _ => Matrix::zeros(self.field(), self.dim(o, n - 1), self.dim(o, n)),
        }
    }
    /// Matrix of a morphism of the base in degree `n`.
    pub fn arrow(&self, m: MorId, n: i32) -> Matrix<F> {
        let b = self.base();
        match self.degree(n) {
            Some(r) => r.matrix(m).clone(),
            None => Matrix::zeros(self.field(), 0, self.dim(b.src(m), n)),
        }
    }

    /// The same complex on a window containing the current one.
    pub fn widen(&self, lo: i32, hi: i32) -> Self {
        let (l0, h0) = self.window();
        let (lo, hi) = (lo.min(l0), hi.max(h0));
        let base = self.base().clone();
        let field = self.field().clone();
        let degrees = (lo..=hi)
            .map(|n| match self.degree(n) {
                Some(r) => r.clone(),
                None => Representation::zero(base.clone(), field.clone()),
            })
            .collect();
        let d = (lo + 1..=hi)
            .map(|n| (0..base.num_objects()).map(|o| self.differential(o, n)).collect())
            .collect();
        ComplexRep { lo, degrees, d }
    }

    /// Degreewise restriction along `u : A → B` of a complex over `B`.
    pub fn restrict(&self, u: &FunctorMap) -> Result<Self, RepError> {
        let degrees = self.degrees.iter().map(|r| restrict(u, r)).collect::<Result<Vec<_>, _>>()?;
        let d = self
            .d
            .iter()
            .map(|dk| (0..u.dom().num_objects()).map(|a| dk[u.obj(a)].clone()).collect())
            .collect();
        ComplexRep::new(self.lo, degrees, d)
    }

    pub fn euler_characteristic(&self, o: ObjId) -> i64 {
        let (lo, hi) = self.window();
        (lo..=hi)
            .map(|n| {
                let d = self.dim(o, n) as i64;
                if n.rem_euclid(2) == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }

    /// Graded dimensions per object, one row per object over the window.
    pub fn dim_table(&self) -> Vec<Vec<usize>> {
        let (lo, hi) = self.window();
        (0..self.base().num_objects())
            .map(|o| (lo..=hi).map(|n| self.dim(o, n)).collect())
            .collect()
    }
}

/// Build a complex from functions giving dimensions, differentials and arrow
/// matrices on a window.
fn assemble<F: Field>(
    base: &Arc<FinCategory>,
    field: &F,
    lo: i32,
    hi: i32,
    dim: impl Fn(ObjId, i32) -> usize,
    diff: impl Fn(ObjId, i32) -> Matrix<F>,
    gen: impl Fn(GenId, i32) -> Matrix<F>,
) -> Result<ComplexRep<F>, RepError> {
    let mut degrees = Vec::new();
    for n in lo..=hi {
        let dims = (0..base.num_objects()).map(|o| dim(o, n)).collect();
        let gens = (0..base.num_gens()).map(|g| gen(g, n)).collect();
        degrees.push(Representation::new(base.clone(), field.clone(), dims, gens)?);
    }
    let d = (lo + 1..=hi)
        .map(|n| (0..base.num_objects()).map(|o| diff(o, n)).collect())
        .collect();
    ComplexRep::new(lo, degrees, d)
}

/// Componentwise morphism of complexes over a common window.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap<F: Field> {
    src: ComplexRep<F>,
    tgt: ComplexRep<F>,
    /// `comps[k][o]` in degree `lo + k`.
    comps: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> ChainMap<F> {
    pub fn new(src: ComplexRep<F>, tgt: ComplexRep<F>, comps: Vec<Vec<Matrix<F>>>) -> Result<Self, RepError> {
        if src.window() != tgt.window() || comps.len() != src.degrees.len() {
            return Err(RepError::WindowMismatch);
        }
        let (lo, _) = src.window();
        let base = src.base().clone();
        for (k, ck) in comps.iter().enumerate() {
            let n = lo + k as i32;
            match NatTransform::new(src.degrees[k].clone(), tgt.degrees[k].clone(), ck.clone()) {
                Ok(_) => {}
                Err(RepError::NotNatural(arrow)) => return Err(RepError::NotChainMap { object: arrow, degree: n }),
                Err(e) => return Err(e),
            }
            if k > 0 {
                for o in 0..base.num_objects() {
                    if tgt.differential(o, n).mul(&ck[o]) != comps[k - 1][o].mul(&src.differential(o, n)) {
                        return Err(RepError::NotChainMap {
                            object: base.object_name(o).to_string(),
                            degree: n,
                        });
                    }
                }
            }
        }
        Ok(ChainMap { src, tgt, comps })
    }

    pub fn identity(x: &ComplexRep<F>) -> Self {
        let comps = x
            .degrees
            .iter()
            .map(|r| r.dims().iter().map(|&d| Matrix::identity(x.field(), d)).collect())
            .collect();
        ChainMap {
            src: x.clone(),
            tgt: x.clone(),
            comps,
        }
    }

    pub fn src(&self) -> &ComplexRep<F> {
        &self.src
    }
    pub fn tgt(&self) -> &ComplexRep<F> {
        &self.tgt
    }
    /// Component at `o` in degree `n`, zero outside the window.
    pub fn component(&self, o: ObjId, n: i32) -> Matrix<F> {
        match self.src.index(n) {
            Some(k) => self.comps[k][o].clone(),
            None => Matrix::zeros(self.src.field(), self.tgt.dim(o, n), self.src.dim(o, n)),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ChainMap<F>) -> Result<Self, RepError> {
        if first.tgt != self.src {
            return Err(RepError::WindowMismatch);
        }
        let comps = self
            .comps
            .iter()
            .zip(&first.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.mul(y)).collect())
            .collect();
        Ok(ChainMap {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            comps,
        })
    }

    /// The same map between widened complexes.
    pub fn widen(&self, lo: i32, hi: i32) -> Self {
        let src = self.src.widen(lo, hi);
        let tgt = self.tgt.widen(lo, hi);
        let (l, h) = src.window();
        let comps = (l..=h)
            .map(|n| (0..src.base().num_objects()).map(|o| self.component(o, n)).collect())
            .collect();
        ChainMap { src, tgt, comps }
    }

    pub fn is_quasi_iso(&self) -> bool {
        is_quasi_iso(self)
    }
}

/// Cycles modulo boundaries at one object and degree.
#[derive(Clone, Debug)]
struct HomologyBasis<F: Field> {
    /// Columns span the cycles.
    cycles: Matrix<F>,
    /// Cycle coordinates to homology coordinates.
    quotient: Matrix<F>,
    /// Homology coordinates to cycle coordinates.
    section: Matrix<F>,
}

impl<F: Field> HomologyBasis<F> {
    fn new(x: &ComplexRep<F>, o: ObjId, n: i32) -> Self {
        let cycles = x.differential(o, n).kernel();
        let boundaries = x.differential(o, n + 1).column_basis();
        let coords = cycles.solve(&boundaries).expect("boundaries are cycles");
        let (quotient, section) = coords.cokernel();
        HomologyBasis {
            cycles,
            quotient,
            section,
        }
    }

    fn dim(&self) -> usize {
        self.quotient.rows()
    }

    /// Matrix of the map induced on homology by `m : X → Y`.
    fn induced(&self, target: &HomologyBasis<F>, m: &Matrix<F>) -> Matrix<F> {
        let images = m.mul(&self.cycles).mul(&self.section);
        let coords = target.cycles.solve(&images).expect("cycles map to cycles");
        target.quotient.mul(&coords)
    }
}

/// Homology in each degree of the window, as representations of the base.
#[derive(Clone, Debug)]
pub struct Homology<F: Field> {
    pub lo: i32,
    pub degrees: Vec<Representation<F>>,
}

impl<F: Field> Homology<F> {
    pub fn degree(&self, n: i32) -> Option<&Representation<F>> {
        let k = n - self.lo;
        (k >= 0).then(|| self.degrees.get(k as usize)).flatten()
    }

    /// Dimensions as `dims[o][k]` for degree `lo + k`.
    pub fn dim_table(&self) -> Vec<Vec<usize>> {
        let n = self.degrees.first().map_or(0, |r| r.dims().len());
        (0..n).map(|o| self.degrees.iter().map(|r| r.dim(o)).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(|r| r.total_dim() == 0)
    }
}

pub fn homology<F: Field>(x: &ComplexRep<F>) -> Result<Homology<F>, RepError> {
    let (lo, hi) = x.window();
    let base = x.base();
    let mut degrees = Vec::new();
    for n in lo..=hi {
        let hb: Vec<HomologyBasis<F>> = (0..base.num_objects()).map(|o| HomologyBasis::new(x, o, n)).collect();
        let dims = hb.iter().map(|h| h.dim()).collect();
        let gens = base
            .gens()
            .iter()
            .enumerate()
            .map(|(g, a)| hb[a.src].induced(&hb[a.tgt], &x.arrow(base.gen_mor(g), n)))
            .collect();
        degrees.push(Representation::new(base.clone(), x.field().clone(), dims, gens)?);
    }
    Ok(Homology { lo, degrees })
}

/// Induced maps on homology are invertible at every object and degree.
pub fn is_quasi_iso<F: Field>(f: &ChainMap<F>) -> bool {
    let (lo, hi) = f.src.window();
    (0..f.src.base().num_objects()).all(|o| {
        (lo..=hi).all(|n| {
            let hs = HomologyBasis::new(&f.src, o, n);
            let ht = HomologyBasis::new(&f.tgt, o, n);
            hs.dim() == ht.dim() && hs.induced(&ht, &f.component(o, n)).is_invertible()
        })
    })
}

/// A degree `+1` map `h_n : X_n → Y_{n+1}` per object.
#[derive(Clone, Debug)]
pub struct Homotopy<F: Field> {
    pub lo: i32,
    /// `maps[k][o]` in degree `lo + k`.
    pub maps: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> Homotopy<F> {
    fn at(&self, src: &ComplexRep<F>, tgt: &ComplexRep<F>, o: ObjId, n: i32) -> Matrix<F> {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize][o].clone()
        } else {
            Matrix::zeros(src.field(), tgt.dim(o, n + 1), src.dim(o, n))
        }
    }

    /// `f = d h + h d` in every degree, with `h` compatible with the arrows.
    pub fn witnesses_null(&self, f: &ChainMap<F>) -> bool {
        let (src, tgt) = (&f.src, &f.tgt);
        let base = src.base();
        let (lo, hi) = src.window();
        (lo - 1..=hi + 1).all(|n| {
            (0..base.num_objects()).all(|o| {
                let dh = tgt.differential(o, n + 1).mul(&self.at(src, tgt, o, n));
                let hd = self.at(src, tgt, o, n - 1).mul(&src.differential(o, n));
                f.component(o, n) == dh.add(&hd)
            }) && base.gens().iter().enumerate().all(|(g, a)| {
                let m = base.gen_mor(g);
                tgt.arrow(m, n + 1).mul(&self.at(src, tgt, a.src, n))
                    == self.at(src, tgt, a.tgt, n).mul(&src.arrow(m, n))
            })
        })
    }
}

/// The cone or fiber of a chain map with its canonical maps.
#[derive(Clone, Debug)]
pub struct ConeFiber<F: Field> {
    pub which: ConeOrFiber,
    pub object: ComplexRep<F>,
    /// Cone: `B → cone(f)`. Fiber: `fiber(g) → B`.
    pub canonical: ChainMap<F>,
    /// Cone: the composite `A → B → cone(f)`. Fiber: `fiber(g) → B → C`.
    pub composite: ChainMap<F>,
    pub homotopy: Homotopy<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeOrFiber {
    Cone,
    Fiber,
}

fn stack_rows<F: Field>(field: &F, blocks: &[Matrix<F>], cols: usize) -> Matrix<F> {
    let parts: Vec<&Matrix<F>> = blocks.iter().collect();
    Matrix::vstack(&parts, field, cols)
}

fn stack_cols<F: Field>(field: &F, blocks: &[Matrix<F>], rows: usize) -> Matrix<F> {
    let parts: Vec<&Matrix<F>> = blocks.iter().collect();
    Matrix::hstack(&parts, field, rows)
}

fn two_by_two<F: Field>(field: &F, a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>, d: &Matrix<F>) -> Matrix<F> {
    let top = stack_cols(field, &[a.clone(), b.clone()], a.rows());
    let bottom = stack_cols(field, &[c.clone(), d.clone()], c.rows());
    stack_rows(field, &[top, bottom], a.cols() + b.cols())
}

pub fn cone_fiber<F: Field>(f: &ChainMap<F>, which: ConeOrFiber) -> Result<ConeFiber<F>, RepError> {
    let (lo, hi) = f.src.window();
    let (a, b) = (&f.src, &f.tgt);
    let base = a.base().clone();
    let field = a.field().clone();
    let fm = |o: ObjId, n: i32| f.component(o, n);
    match which {
        ConeOrFiber::Cone => {
            let (clo, chi) = (lo, hi + 1);
            let cone = assemble(
                &base,
                &field,
                clo,
                chi,
                |o, n| a.dim(o, n - 1) + b.dim(o, n),
                |o, n| {
                    let zero = Matrix::zeros(&field, a.dim(o, n - 2), b.dim(o, n));
                    two_by_two(&field, &a.differential(o, n - 1).neg(), &zero, &fm(o, n - 1), &b.differential(o, n))
                },
                |g, n| {
                    let m = base.gen_mor(g);
                    Matrix::block_diag(&[&a.arrow(m, n - 1), &b.arrow(m, n)], &field)
                },
            )?;
            let bw = b.widen(clo, chi);
            let incl = (clo..=chi)
                .map(|n| {
                    (0..base.num_objects())
                        .map(|o| {
                            stack_rows(&field, &[Matrix::zeros(&field, a.dim(o, n - 1), b.dim(o, n)), Matrix::identity(&field, b.dim(o, n))], b.dim(o, n))
                        })
                        .collect()
                })
                .collect();
            let canonical = ChainMap::new(bw, cone.clone(), incl)?;
            let composite = canonical.after(&f.widen(clo, chi))?;
            let homotopy = Homotopy {
                lo: clo,
                maps: (clo..=chi)
                    .map(|n| {
                        (0..base.num_objects())
                            .map(|o| {
                                stack_rows(&field, &[Matrix::identity(&field, a.dim(o, n)), Matrix::zeros(&field, b.dim(o, n + 1), a.dim(o, n))], a.dim(o, n))
                            })
                            .collect()
                    })
                    .collect(),
            };
            Ok(ConeFiber {
                which,
                object: cone,
                canonical,
                composite,
                homotopy,
            })
        }
        ConeOrFiber::Fiber => {
            let (blo, bhi) = (lo - 1, hi);
            let (bb, c) = (a, b);
            let fib = assemble(
                &base,
                &field,
                blo,
                bhi,
                |o, n| bb.dim(o, n) + c.dim(o, n + 1),
                |o, n| {
                    let zero = Matrix::zeros(&field, bb.dim(o, n - 1), c.dim(o, n + 1));
                    two_by_two(&field, &bb.differential(o, n), &zero, &fm(o, n), &c.differential(o, n + 1).neg())
                },
                |g, n| {
                    let m = base.gen_mor(g);
                    Matrix::block_diag(&[&bb.arrow(m, n), &c.arrow(m, n + 1)], &field)
                },
            )?;
            let bw = bb.widen(blo, bhi);
            let proj = (blo..=bhi)
                .map(|n| {
                    (0..base.num_objects())
                        .map(|o| {
                            stack_cols(&field, &[Matrix::identity(&field, bb.dim(o, n)), Matrix::zeros(&field, bb.dim(o, n), c.dim(o, n + 1))], bb.dim(o, n))
                        })
                        .collect()
                })
                .collect();
            let canonical = ChainMap::new(fib.clone(), bw, proj)?;
            let composite = f.widen(blo, bhi).after(&canonical)?;
            let homotopy = Homotopy {
                lo: blo,
                maps: (blo..=bhi)
                    .map(|n| {
                        (0..base.num_objects())
                            .map(|o| {
                                stack_cols(&field, &[Matrix::zeros(&field, c.dim(o, n + 1), bb.dim(o, n)), Matrix::identity(&field, c.dim(o, n + 1))], c.dim(o, n + 1))
                            })
                            .collect()
                    })
                    .collect(),
            };
            Ok(ConeFiber {
                which,
                object: fib,
                canonical,
                composite,
                homotopy,
            })
        }
    }
}

/// Degreewise biproduct of complexes on one window.
#[derive(Clone, Debug)]
pub struct ComplexSum<F: Field> {
    pub sum: ComplexRep<F>,
    pub inj: Vec<ChainMap<F>>,
    pub proj: Vec<ChainMap<F>>,
}

pub fn direct_sum<F: Field>(xs: &[ComplexRep<F>]) -> Result<ComplexSum<F>, RepError> {
    let first = xs.first().ok_or(RepError::WindowMismatch)?;
    if xs.iter().any(|x| x.window() != first.window()) {
        return Err(RepError::WindowMismatch);
    }
    let (lo, hi) = first.window();
    let base = first.base().clone();
    let field = first.field().clone();
    let sum = assemble(
        &base,
        &field,
        lo,
        hi,
        |o, n| xs.iter().map(|x| x.dim(o, n)).sum(),
        |o, n| Matrix::block_diag(&xs.iter().map(|x| x.differential(o, n)).collect::<Vec<_>>().iter().collect::<Vec<_>>(), &field),
        |g, n| {
            let m = base.gen_mor(g);
            Matrix::block_diag(&xs.iter().map(|x| x.arrow(m, n)).collect::<Vec<_>>().iter().collect::<Vec<_>>(), &field)
        },
    )?;
    let mut inj = Vec::new();
    let mut proj = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        let embed = |o: ObjId, n: i32| {
            let before: usize = xs[..i].iter().map(|y| y.dim(o, n)).sum();
            let mut m = Matrix::zeros(&field, sum.dim(o, n), x.dim(o, n));
            m.put(before, 0, &Matrix::identity(&field, x.dim(o, n)));
            m
        };
        let ic = (lo..=hi).map(|n| (0..base.num_objects()).map(|o| embed(o, n)).collect()).collect();
        let pc = (lo..=hi)
            .map(|n| (0..base.num_objects()).map(|o| embed(o, n).transpose()).collect())
            .collect();
        inj.push(ChainMap::new(x.clone(), sum.clone(), ic)?);
        proj.push(ChainMap::new(sum.clone(), x.clone(), pc)?);
    }
    Ok(ComplexSum { sum, inj, proj })
}

#[derive(Debug, thiserror::Error)]
pub enum ReflectError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Glue(#[from] GlueError),
}

/// Both cones over `C` for a list of objects.
#[derive(Clone, Debug)]
pub struct ReflectionData {
    pub minus: Cone,
    pub plus: Cone,
}

impl ReflectionData {
    pub fn new(c: &Arc<FinCategory>, ys: &[ObjId]) -> Result<Self, GlueError> {
        Ok(ReflectionData {
            minus: attach_cone(c, ys, Direction::Source)?,
            plus: attach_cone(c, ys, Direction::Sink)?,
        })
    }

    /// Object of `C` for every non-apex object of a cone.
    fn base_object(cone: &Cone, o: ObjId) -> Option<ObjId> {
        (0..cone.base.num_objects()).find(|&co| cone.inclusion.obj(co) == o)
    }

    /// Leg index of a generator from the star, or the `C`-morphism it comes from.
    fn classify(cone: &Cone, g: GenId) -> Result<usize, MorId> {
        let en = cone.pushout.gen_entry(g);
        match en.leg {
            Leg::X => Err(en.mor),
            Leg::Y => Ok(cone.pushout.span().y().mor(en.mor).word[0]),
        }
    }

    fn check_base<F: Field>(cone: &Cone, x: &ComplexRep<F>) -> Result<(), RepError> {
        if same_base(&cone.cat, x.base()) {
            Ok(())
        } else {
            Err(RepError::BaseMismatch)
        }
    }

    /// Dimension of `⊕_i X_{y_i}` in degree `n` with the offsets of the summands.
    fn sum_layout<F: Field>(&self, cone: &Cone, x: &ComplexRep<F>, n: i32) -> (usize, Vec<usize>) {
        let mut off = Vec::new();
        let mut total = 0;
        for &y in &cone.ys {
            off.push(total);
            total += x.dim(cone.inclusion.obj(y), n);
        }
        (total, off)
    }

    /// `s⁻X` over the sink cone.
    pub fn reflect_minus<F: Field>(&self, x: &ComplexRep<F>) -> Result<ComplexRep<F>, RepError> {
        let (cm, cp) = (&self.minus, &self.plus);
        Self::check_base(cm, x)?;
        let field = x.field().clone();
        let (lo, hi) = x.window();
        let v = cm.apex;
        let ys: Vec<ObjId> = cm.ys.iter().map(|&y| cm.inclusion.obj(y)).collect();
        let phi = |n: i32| -> Matrix<F> {
            let blocks: Vec<Matrix<F>> = cm.legs.iter().map(|&a| x.arrow(a, n)).collect();
            stack_rows(&field, &blocks, x.dim(v, n))
        };
        let sum_dim = |n: i32| self.sum_layout(cm, x, n);
        let sum_d = |n: i32| {
            let blocks: Vec<Matrix<F>> = ys.iter().map(|&y| x.differential(y, n)).collect();
            Matrix::block_diag(&blocks.iter().collect::<Vec<_>>(), &field)
        };
        let at = |o: ObjId| Self::base_object(cp, o).map(|co| cm.inclusion.obj(co));
        assemble(
            &cp.cat,
            &field,
            lo,
            hi + 1,
            |o, n| match at(o) {
                Some(xo) => x.dim(xo, n),
                None => x.dim(v, n - 1) + sum_dim(n).0,
            },
            |o, n| match at(o) {
                Some(xo) => x.differential(xo, n),
                None => {
                    let zero = Matrix::zeros(&field, x.dim(v, n - 2), sum_dim(n).0);
                    two_by_two(&field, &x.differential(v, n - 1).neg(), &zero, &phi(n - 1), &sum_d(n))
                }
            },
            |g, n| match Self::classify(cp, g) {
                Err(m) => x.arrow(cm.inclusion.on_mor(m), n),
                Ok(i) => {
                    let (total, off) = sum_dim(n);
                    let d = x.dim(ys[i], n);
                    let mut m = Matrix::zeros(&field, x.dim(v, n - 1) + total, d);
                    m.put(x.dim(v, n - 1) + off[i], 0, &Matrix::identity(&field, d));
                    m
                }
            },
        )
    }

    /// `s⁺Y` over the source cone.
    pub fn reflect_plus<F: Field>(&self, y: &ComplexRep<F>) -> Result<ComplexRep<F>, RepError> {
        let (cm, cp) = (&self.minus, &self.plus);
        Self::check_base(cp, y)?;
        let field = y.field().clone();
        let (lo, hi) = y.window();
        let w = cp.apex;
        let ys: Vec<ObjId> = cp.ys.iter().map(|&o| cp.inclusion.obj(o)).collect();
        let sum_dim = |n: i32| self.sum_layout(cp, y, n);
        let psi = |n: i32| -> Matrix<F> {
            let blocks: Vec<Matrix<F>> = cp.legs.iter().map(|&b| y.arrow(b, n)).collect();
            stack_cols(&field, &blocks, y.dim(w, n))
        };
        let sum_d = |n: i32| {
            let blocks: Vec<Matrix<F>> = ys.iter().map(|&o| y.differential(o, n)).collect();
            Matrix::block_diag(&blocks.iter().collect::<Vec<_>>(), &field)
        };
        let at = |o: ObjId| Self::base_object(cm, o).map(|co| cp.inclusion.obj(co));
        assemble(
            &cm.cat,
            &field,
            lo - 1,
            hi,
            |o, n| match at(o) {
                Some(yo) => y.dim(yo, n),
                None => sum_dim(n).0 + y.dim(w, n + 1),
            },
            |o, n| match at(o) {
                Some(yo) => y.differential(yo, n),
                None => {
                    let zero = Matrix::zeros(&field, sum_dim(n - 1).0, y.dim(w, n + 1));
                    two_by_two(&field, &sum_d(n), &zero, &psi(n), &y.differential(w, n + 1).neg())
                }
            },
            |g, n| match Self::classify(cm, g) {
                Err(m) => y.arrow(cp.inclusion.on_mor(m), n),
                Ok(i) => {
                    let (total, off) = sum_dim(n);
                    let d = y.dim(ys[i], n);
                    let mut m = Matrix::zeros(&field, d, total + y.dim(w, n + 1));
                    m.put(0, off[i], &Matrix::identity(&field, d));
                    m
                }
            },
        )
    }

    /// The comparison `X → s⁺s⁻X`.
    pub fn roundtrip_compare<F: Field>(&self, x: &ComplexRep<F>) -> Result<Comparison<F>, RepError> {
        let reflected = self.reflect_minus(x)?;
        let back = self.reflect_plus(&reflected)?;
        let (lo, hi) = back.window();
        let xw = x.widen(lo, hi);
        let cm = &self.minus;
        let field = x.field().clone();
        let v = cm.apex;
        let comps = (lo..=hi)
            .map(|n| {
                (0..cm.cat.num_objects())
                    .map(|o| {
                        if o != v {
                            return Matrix::identity(&field, x.dim(o, n));
                        }
                        let blocks: Vec<Matrix<F>> = cm.legs.iter().map(|&a| x.arrow(a, n)).collect();
                        let phi = stack_rows(&field, &blocks, x.dim(v, n));
                        let (total, _) = self.sum_layout(cm, x, n + 1);
                        stack_rows(
                            &field,
                            &[phi, Matrix::identity(&field, x.dim(v, n)), Matrix::zeros(&field, total, x.dim(v, n))],
                            x.dim(v, n),
                        )
                    })
                    .collect()
            })
            .collect();
        let map = ChainMap::new(xw, back.clone(), comps)?;
        let quasi_iso = map.is_quasi_iso();
        Ok(Comparison {
            reflected,
            back,
            map,
            quasi_iso,
        })
    }

    /// The comparison `s⁻s⁺Y → Y`.
    pub fn dual_compare<F: Field>(&self, y: &ComplexRep<F>) -> Result<Comparison<F>, RepError> {
        let reflected = self.reflect_plus(y)?;
        let back = self.reflect_minus(&reflected)?;
        let (lo, hi) = back.window();
        let yw = y.widen(lo, hi);
        let cp = &self.plus;
        let field = y.field().clone();
        let w = cp.apex;
        let comps = (lo..=hi)
            .map(|n| {
                (0..cp.cat.num_objects())
                    .map(|o| {
                        if o != w {
                            return Matrix::identity(&field, y.dim(o, n));
                        }
                        let blocks: Vec<Matrix<F>> = cp.legs.iter().map(|&b| y.arrow(b, n)).collect();
                        let psi = stack_cols(&field, &blocks, y.dim(w, n));
                        let (before, _) = self.sum_layout(cp, y, n - 1);
                        stack_cols(
                            &field,
                            &[Matrix::zeros(&field, y.dim(w, n), before), Matrix::identity(&field, y.dim(w, n)), psi],
                            y.dim(w, n),
                        )
                    })
                    .collect()
            })
            .collect();
        let map = ChainMap::new(back.clone(), yw, comps)?;
        let quasi_iso = map.is_quasi_iso();
        Ok(Comparison {
            reflected,
            back,
            map,
            quasi_iso,
        })
    }

    /// `χ(s⁻X)_w = Σ χ(X)_{y_i} − χ(X)_v` and agreement on `C`.
    pub fn k0_reflect_check<F: Field>(&self, x: &ComplexRep<F>) -> Result<bool, RepError> {
        let y = self.reflect_minus(x)?;
        let (cm, cp) = (&self.minus, &self.plus);
        let kx = k0_class(x);
        let ky = k0_class(&y);
        let on_c = (0..cm.base.num_objects()).all(|co| kx.0[cm.inclusion.obj(co)] == ky.0[cp.inclusion.obj(co)]);
        let expected: i64 = cm.ys.iter().map(|&o| kx.0[cm.inclusion.obj(o)]).sum::<i64>() - kx.0[cm.apex];
        Ok(on_c && ky.0[cp.apex] == expected)
    }
}

/// A reflected complex, its reflection back and the canonical comparison.
#[derive(Clone, Debug)]
pub struct Comparison<F: Field> {
    pub reflected: ComplexRep<F>,
    pub back: ComplexRep<F>,
    pub map: ChainMap<F>,
    pub quasi_iso: bool,
}

pub fn reflect_minus<F: Field>(c: &Arc<FinCategory>, ys: &[ObjId], x: &ComplexRep<F>) -> Result<ComplexRep<F>, ReflectError> {
    Ok(ReflectionData::new(c, ys)?.reflect_minus(x)?)
}

pub fn reflect_plus<F: Field>(c: &Arc<FinCategory>, ys: &[ObjId], y: &ComplexRep<F>) -> Result<ComplexRep<F>, ReflectError> {
    Ok(ReflectionData::new(c, ys)?.reflect_plus(y)?)
}

pub fn roundtrip_compare<F: Field>(c: &Arc<FinCategory>, ys: &[ObjId], x: &ComplexRep<F>) -> Result<Comparison<F>, ReflectError> {
    Ok(ReflectionData::new(c, ys)?.roundtrip_compare(x)?)
}

pub fn dual_compare<F: Field>(c: &Arc<FinCategory>, ys: &[ObjId], y: &ComplexRep<F>) -> Result<Comparison<F>, ReflectError> {
    Ok(ReflectionData::new(c, ys)?.dual_compare(y)?)
}

/// Euler characteristic per object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Class(pub Vec<i64>);

pub fn k0_class<F: Field>(x: &ComplexRep<F>) -> K0Class {
    K0Class((0..x.base().num_objects()).map(|o| x.euler_characteristic(o)).collect())
}

pub fn k0_reflect_check<F: Field>(c: &Arc<FinCategory>, ys: &[ObjId], x: &ComplexRep<F>) -> Result<bool, ReflectError> {
    Ok(ReflectionData::new(c, ys)?.k0_reflect_check(x)?)
}

/// Orientation of an `n`-cycle: entry `i` is true when the edge between
/// `i` and `i+1 mod n` points from `i` to `i+1`.
pub type Orientation = Vec<bool>;

/// Clockwise and anticlockwise arrow counts.
pub fn clock_counts(q: &[bool]) -> (usize, usize) {
    let cw = q.iter().filter(|&&b| b).count();
    (cw, q.len() - cw)
}

/// The unordered pair `c(Q)`, smaller count first.
pub fn clock_invariant(q: &[bool]) -> (usize, usize) {
    let (a, b) = clock_counts(q);
    (a.min(b), a.max(b))
}

fn edges_at(n: usize, i: usize) -> (usize, usize) {
    ((i + n - 1) % n, i)
}

pub fn is_source(q: &[bool], i: usize) -> bool {
    let (l, r) = edges_at(q.len(), i);
    !q[l] && q[r]
}

pub fn is_sink(q: &[bool], i: usize) -> bool {
    let (l, r) = edges_at(q.len(), i);
    q[l] && !q[r]
}

/// Reverse both arrows at a source or a sink.
pub fn reflect_at(q: &[bool], i: usize) -> Option<Orientation> {
    if q.len() < 2 || !(is_source(q, i) || is_sink(q, i)) {
        return None;
    }
    let (l, r) = edges_at(q.len(), i);
    let mut out = q.to_vec();
    out[l] = !out[l];
    out[r] = !out[r];
    Some(out)
}

/// The orientation of `Ã_{p,q}`: `p` clockwise arrows from vertex `0`, then
/// `q` anticlockwise ones.
pub fn clock_normal_form(p: usize, q: usize) -> Orientation {
    let mut o = vec![true; p];
    o.extend(std::iter::repeat_n(false, q));
    o
}

/// Relabel vertices by `j ↦ -j mod n`, exchanging the two counts.
pub fn mirror(q: &[bool]) -> Orientation {
    let n = q.len();
    (0..n).map(|i| !q[n - 1 - i]).collect()
}

/// Shortest reflection sequence from `from` to `to`.
pub fn reflection_path(from: &[bool], to: &[bool]) -> Option<Vec<usize>> {
    let mut prev: HashMap<Orientation, (Orientation, usize)> = HashMap::new();
    let mut queue = VecDeque::from([from.to_vec()]);
    let mut seen = HashSet::from([from.to_vec()]);
    while let Some(cur) = queue.pop_front() {
        if cur == to {
            let mut path = Vec::new();
            let mut at = cur;
            while let Some((p, i)) = prev.get(&at) {
                path.push(*i);
                at = p.clone();
            }
            path.reverse();
            return Some(path);
        }
        for i in 0..cur.len() {
            if let Some(next) = reflect_at(&cur, i) {
                if seen.insert(next.clone()) {
                    prev.insert(next.clone(), (cur.clone(), i));
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

/// A reflection sequence between two orientations with equal clock
/// invariant, routed through the normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClockConnection {
    /// The second orientation was mirrored first.
    pub mirrored: bool,
    pub steps: Vec<usize>,
}

pub fn connect(q1: &[bool], q2: &[bool]) -> Option<ClockConnection> {
    if q1.len() != q2.len() || clock_invariant(q1) != clock_invariant(q2) {
        return None;
    }
    let mirrored = clock_counts(q1) != clock_counts(q2);
    let q2 = if mirrored { mirror(q2) } else { q2.to_vec() };
    let (p, q) = clock_counts(q1);
    let nf = clock_normal_form(p, q);
    let mut steps = reflection_path(q1, &nf)?;
    let mut back = reflection_path(&q2, &nf)?;
    back.reverse();
    steps.extend(back);
    Some(ClockConnection { mirrored, steps })
}

/// Apply a sequence of reflections, failing at a vertex that is neither a
/// source nor a sink.
pub fn apply_reflections(q: &[bool], steps: &[usize]) -> Option<Orientation> {
    let mut cur = q.to_vec();
    for &i in steps {
        cur = reflect_at(&cur, i)?;
    }
    Some(cur)
}

pub fn all_orientations(n: usize) -> Vec<Orientation> {
    (0..1u32 << n).map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn point() -> Arc<FinCategory> {
        Arc::new(FinCategory::discrete(&["y"]))
    }

    fn single<F: Field>(field: &F, base: &Arc<FinCategory>, dims: &[usize], mats: &[&[i64]]) -> Representation<F> {
        let gens = base
            .gens()
            .iter()
            .zip(mats)
            .map(|(a, m)| Matrix::from_i64(field, dims[a.tgt], dims[a.src], m))
            .collect();
        Representation::new(base.clone(), field.clone(), dims.to_vec(), gens).unwrap()
    }

    fn two_term<F: Field>(field: &F, d1: usize, d0: usize, d: &[i64]) -> ComplexRep<F> {
        let p = point();
        let x1 = single(field, &p, &[d1], &[]);
        let x0 = single(field, &p, &[d0], &[]);
        ComplexRep::new(0, vec![x0, x1], vec![vec![Matrix::from_i64(field, d0, d1, d)]]).unwrap()
    }

    #[test]
    fn homology_examples() {
        let f = PrimeField::default();
        assert!(homology(&two_term(&f, 1, 1, &[1])).unwrap().is_zero());
        let h = homology(&two_term(&f, 2, 1, &[1, 1])).unwrap();
        assert_eq!(h.dim_table(), vec![vec![0, 1]]);
        let c = ComplexRep::concentrated(single(&f, &point(), &[2], &[]), 0);
        assert_eq!(homology(&c).unwrap().dim_table(), vec![vec![2]]);
    }

    #[test]
    fn d_squared_is_checked() {
        let f = PrimeField::default();
        let p = point();
        let one = single(&f, &p, &[1], &[]);
        let d = vec![vec![Matrix::from_i64(&f, 1, 1, &[1])], vec![Matrix::from_i64(&f, 1, 1, &[1])]];
        let err = ComplexRep::new(0, vec![one.clone(), one.clone(), one], d);
        assert!(matches!(err, Err(RepError::NotComplex { degree: 2, .. })), "{err:?}");
    }

    #[test]
    fn cone_of_identity_is_acyclic_and_homotopies_hold() {
        let f = Rationals;
        let x = two_term(&f, 2, 1, &[1, 2]);
        let id = ChainMap::identity(&x);
        let cone = cone_fiber(&id, ConeOrFiber::Cone).unwrap();
        assert!(homology(&cone.object).unwrap().is_zero());
        assert!(cone.homotopy.witnesses_null(&cone.composite));
        let fib = cone_fiber(&id, ConeOrFiber::Fiber).unwrap();
        assert!(homology(&fib.object).unwrap().is_zero());
        assert!(fib.homotopy.witnesses_null(&fib.composite));
    }

    #[test]
    fn cone_of_zero_source_is_target() {
        let f = PrimeField::default();
        let b = two_term(&f, 1, 2, &[1, 0]);
        let a = ComplexRep::zero(point(), f, 0, 1);
        let zero = ChainMap::new(a, b.clone(), vec![vec![Matrix::zeros(&f, 2, 0)], vec![Matrix::zeros(&f, 1, 0)]]).unwrap();
        let cone = cone_fiber(&zero, ConeOrFiber::Cone).unwrap();
        assert!(cone.canonical.is_quasi_iso());
        assert_eq!(homology(&cone.object).unwrap().dim_table(), vec![vec![1, 0, 0]]);
    }

    #[test]
    fn fiber_of_cone_inclusion_recovers_source() {
        let f = PrimeField::default();
        let a = two_term(&f, 1, 1, &[0]);
        let b = two_term(&f, 2, 1, &[1, 0]);
        let comps = vec![vec![Matrix::from_i64(&f, 1, 1, &[1])], vec![Matrix::from_i64(&f, 2, 1, &[0, 1])]];
        let m = ChainMap::new(a.clone(), b, comps).unwrap();
        let cone = cone_fiber(&m, ConeOrFiber::Cone).unwrap();
        let fib = cone_fiber(&cone.canonical, ConeOrFiber::Fiber).unwrap();
        assert_eq!(
            homology(&fib.object).unwrap().dim_table()[0][1..3].to_vec(),
            homology(&a).unwrap().dim_table()[0]
        );
    }

    #[test]
    fn biproduct_laws() {
        let f = PrimeField::default();
        let xs = vec![two_term(&f, 1, 1, &[1]), two_term(&f, 2, 1, &[0, 1])];
        let s = direct_sum(&xs).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let c = s.proj[i].after(&s.inj[j]).unwrap();
                assert_eq!(c == ChainMap::identity(&xs[j]), i == j);
            }
        }
        let chi: i64 = xs.iter().map(|x| x.euler_characteristic(0)).sum();
        assert_eq!(s.sum.euler_characteristic(0), chi);
    }

    #[test]
    fn clock_counts_survive_reflections() {
        for n in 2..=6 {
            for q in all_orientations(n) {
                for i in 0..n {
                    if let Some(r) = reflect_at(&q, i) {
                        assert_eq!(clock_counts(&r), clock_counts(&q));
                    }
                }
            }
        }
    }

    #[test]
    fn clock_connections() {
        let q1 = vec![true, false, true, false];
        let q2 = vec![false, false, true, true];
        let c = connect(&q1, &q2).unwrap();
        assert!(!c.mirrored);
        assert_eq!(apply_reflections(&q1, &c.steps).unwrap(), q2);
        let q3 = vec![true, true, true, false];
        let q4 = vec![false, false, false, true];
        let c = connect(&q3, &q4).unwrap();
        assert!(c.mirrored);
        assert_eq!(apply_reflections(&q3, &c.steps).unwrap(), mirror(&q4));
    }

    fn a2() -> ReflectionData {
        ReflectionData::new(&point(), &[0]).unwrap()
    }

    fn homology_iso<F: Field>(x: &ComplexRep<F>, degree: i32, expected: &Representation<F>) -> bool {
        let h = homology(x).unwrap();
        let total: usize = h.degrees.iter().map(|r| r.total_dim()).sum();
        let here = h.degree(degree).unwrap();
        total == expected.total_dim() && crate::linrep::find_rep_isomorphism(here, expected, 1).unwrap().is_some()
    }

    #[test]
    fn reflecting_the_three_indecomposables() {
        let f = PrimeField::new(5).unwrap();
        let r = a2();
        let (cm, cp) = (r.minus.cat.clone(), r.plus.cat.clone());
        let (v, y_minus) = (r.minus.apex, r.minus.inclusion.obj(0));
        let (w, y_plus) = (r.plus.apex, r.plus.inclusion.obj(0));
        let pv = ComplexRep::concentrated(Representation::projective(cm.clone(), f, v), 0);
        let sv = ComplexRep::concentrated(Representation::simple(cm.clone(), f, v).unwrap(), 0);
        let sy = ComplexRep::concentrated(Representation::simple(cm.clone(), f, y_minus).unwrap(), 0);
        let simple_y = Representation::simple(cp.clone(), f, y_plus).unwrap();
        let simple_w = Representation::simple(cp.clone(), f, w).unwrap();
        let proj_inj = Representation::projective(cp.clone(), f, y_plus);
        assert_eq!(proj_inj.dims()[w], 1);
        let out = r.reflect_minus(&pv).unwrap();
        assert!(homology_iso(&out, 0, &simple_y));
        let out = r.reflect_minus(&sv).unwrap();
        assert!(homology_iso(&out, 1, &simple_w));
        let out = r.reflect_minus(&sy).unwrap();
        assert!(homology_iso(&out, 0, &proj_inj));
        for x in [&pv, &sv, &sy] {
            assert!(r.roundtrip_compare(x).unwrap().quasi_iso);
            assert!(r.k0_reflect_check(x).unwrap());
        }
        let py = ComplexRep::concentrated(proj_inj, 0);
        let back = r.reflect_plus(&py).unwrap();
        assert!(homology_iso(&back, 0, &Representation::simple(cm.clone(), f, y_minus).unwrap()));
        let sw = ComplexRep::concentrated(simple_w, 0);
        assert!(homology_iso(&r.reflect_plus(&sw).unwrap(), -1, &Representation::simple(cm.clone(), f, v).unwrap()));
        let syp = ComplexRep::concentrated(simple_y, 0);
        assert!(homology_iso(&r.reflect_plus(&syp).unwrap(), 0, &Representation::projective(cm, f, v)));
        for y in [&py, &sw, &syp] {
            assert!(r.dual_compare(y).unwrap().quasi_iso);
        }
    }

    #[test]
    fn zero_complex_round_trips() {
        let f = Rationals;
        let r = ReflectionData::new(&point(), &[0, 0]).unwrap();
        let z = ComplexRep::zero(r.minus.cat.clone(), f, -1, 1);
        let c = r.roundtrip_compare(&z).unwrap();
        assert!(c.quasi_iso);
        assert_eq!(c.back.window(), (-2, 2));
    }
}
