//! Shortlex path rewriting and saturation of presentations.
//!
//! Relations are oriented from the larger to the smaller side in the
//! shortlex order (shorter first, then lexicographic on arrow names) and
//! completed by resolving critical pairs until no new rule appears or a rule
//! budget is spent.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::cmp::Ordering;
use std::fmt;

use super::{close, Bound, FinCategory, GenId, ObjId, Path, PresentedCategory};
use crate::error::CategoryError;

const MAX_RULES: usize = 20_000;
const MAX_STEPS: usize = 2_000_000;

/// A terminating string rewriting system on generator paths.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    rank: Vec<usize>,
    rules: HashMap<Vec<GenId>, Vec<GenId>>,
    lens: BTreeSet<usize>,
    complete: bool,
}

impl RewriteSystem {
    fn empty(names: &[&str]) -> Self {
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&a, &b| names[a].cmp(names[b]).then(a.cmp(&b)));
        let mut rank = vec![0; names.len()];
        for (r, &g) in order.iter().enumerate() {
            rank[g] = r;
        }
        RewriteSystem {
            rank,
            rules: HashMap::new(),
            lens: BTreeSet::new(),
            complete: false,
        }
    }

    pub fn compare(&self, a: &[GenId], b: &[GenId]) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().zip(b) {
                match self.rank[*x].cmp(&self.rank[*y]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> impl Iterator<Item = (&Vec<GenId>, &Vec<GenId>)> {
        self.rules.iter()
    }

    fn find(&self, w: &[GenId]) -> Option<(usize, usize)> {
        for i in 0..w.len() {
            for &l in &self.lens {
                if i + l > w.len() {
                    break;
                }
                if self.rules.contains_key(&w[i..i + l]) {
                    return Some((i, l));
                }
            }
        }
        None
    }

    pub fn normal_form(&self, w: &[GenId]) -> Vec<GenId> {
        let mut w = w.to_vec();
        while let Some((i, l)) = self.find(&w) {
            let rhs = &self.rules[&w[i..i + l]];
            let mut next = Vec::with_capacity(w.len() - l + rhs.len());
            next.extend_from_slice(&w[..i]);
            next.extend_from_slice(rhs);
            next.extend_from_slice(&w[i + l..]);
            w = next;
        }
        w
    }

    fn insert(&mut self, l: Vec<GenId>, r: Vec<GenId>) {
        self.lens.insert(l.len());
        self.rules.insert(l, r);
    }

    fn remove(&mut self, l: &[GenId]) -> Option<Vec<GenId>> {
        let r = self.rules.remove(l)?;
        if !self.rules.keys().any(|k| k.len() == l.len()) {
            self.lens.remove(&l.len());
        }
        Some(r)
    }

    /// Complete the relations of `c` into a confluent system.
    pub fn complete(c: &PresentedCategory) -> Self {
        let names: Vec<&str> = c.quiver().arrows().iter().map(|a| a.name.as_str()).collect();
        let mut sys = Self::empty(&names);
        let mut eqs: VecDeque<(Vec<GenId>, Vec<GenId>)> = c
            .relations()
            .iter()
            .map(|(l, r)| (l.arrows.clone(), r.arrows.clone()))
            .collect();
        let mut fresh: VecDeque<Vec<GenId>> = VecDeque::new();
        let mut steps = 0usize;
        loop {
            while let Some((a, b)) = eqs.pop_front() {
                steps += 1;
                if steps > MAX_STEPS {
                    return sys;
                }
                let a = sys.normal_form(&a);
                let b = sys.normal_form(&b);
                let (l, r) = match sys.compare(&a, &b) {
                    Ordering::Equal => continue,
                    Ordering::Greater => (a, b),
                    Ordering::Less => (b, a),
                };
                let reducible: Vec<Vec<GenId>> = sys
                    .rules
                    .keys()
                    .filter(|k| k.len() >= l.len() && k.windows(l.len()).any(|w| w == l.as_slice()))
                    .cloned()
                    .collect();
                for k in reducible {
                    if let Some(v) = sys.remove(&k) {
                        eqs.push_back((k, v));
                    }
                }
                sys.insert(l.clone(), r);
                fresh.push_back(l);
                if sys.rules.len() > MAX_RULES {
                    return sys;
                }
            }
            let keys: Vec<Vec<GenId>> = sys.rules.keys().cloned().collect();
            for k in keys {
                if let Some(r) = sys.rules.get(&k).cloned() {
                    let nr = sys.normal_form(&r);
                    sys.rules.insert(k, nr);
                }
            }
            let Some(l1) = fresh.pop_front() else {
                sys.complete = true;
                return sys;
            };
            let Some(r1) = sys.rules.get(&l1).cloned() else {
                continue;
            };
            let others: Vec<(Vec<GenId>, Vec<GenId>)> =
                sys.rules.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            for (l2, r2) in &others {
                critical_pairs(&l1, &r1, l2, r2, &mut eqs);
                if l2 != &l1 {
                    critical_pairs(l2, r2, &l1, &r1, &mut eqs);
                }
            }
        }
    }
}

fn critical_pairs(
    l1: &[GenId],
    r1: &[GenId],
    l2: &[GenId],
    r2: &[GenId],
    eqs: &mut VecDeque<(Vec<GenId>, Vec<GenId>)>,
) {
    let max = l1.len().min(l2.len());
    for k in 1..=max {
        if k == l1.len() && k == l2.len() {
            continue;
        }
        if l1[l1.len() - k..] != l2[..k] {
            continue;
        }
        let mut a = r1.to_vec();
        a.extend_from_slice(&l2[k..]);
        let mut b = l1[..l1.len() - k].to_vec();
        b.extend_from_slice(r2);
        eqs.push_back((a, b));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonFiniteReport {
    pub src: String,
    pub tgt: String,
    pub bound: usize,
}

impl fmt::Display for NonFiniteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hom-set {} -> {} has more than {} elements", self.src, self.tgt, self.bound)
    }
}

#[derive(Clone, Debug)]
pub enum SaturationOutcome {
    Finite(FinCategory),
    NonFinite(NonFiniteReport),
    /// Completion ran out of budget before becoming confluent.
    Unresolved(String),
}

impl SaturationOutcome {
    pub fn finite(self) -> Result<FinCategory, CategoryError> {
        match self {
            SaturationOutcome::Finite(c) => Ok(c),
            SaturationOutcome::NonFinite(r) => Err(CategoryError::NonFinite {
                src: r.src,
                tgt: r.tgt,
                bound: r.bound,
            }),
            SaturationOutcome::Unresolved(s) => Err(CategoryError::Unresolved(s)),
        }
    }
}

/// Close the generators of `c` under composition modulo its relations.
pub fn saturate(c: &PresentedCategory, bound: usize) -> SaturationOutcome {
    let sys = RewriteSystem::complete(c);
    if !sys.is_complete() {
        return SaturationOutcome::Unresolved(format!(
            "completion stopped after {} rules without reaching confluence",
            sys.num_rules()
        ));
    }
    let q = c.quiver();
    let result = close(
        q.vertices().to_vec(),
        q.arrows().to_vec(),
        |o: ObjId| Path::identity(o),
        |p: &Path, g| {
            let mut w = p.arrows.clone();
            w.push(g);
            Ok::<_, CategoryError>(Path {
                src: p.src,
                arrows: sys.normal_form(&w),
            })
        },
        Bound::hom(bound),
    );
    match result {
        Ok((cat, _)) => SaturationOutcome::Finite(cat),
        Err(CategoryError::NonFinite { src, tgt, bound }) => {
            SaturationOutcome::NonFinite(NonFiniteReport { src, tgt, bound })
        }
        Err(e) => SaturationOutcome::Unresolved(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catcore::{free_category, Quiver};

    fn r_presentation() -> PresentedCategory {
        let q = Quiver::new(
            &["0", "1", "2"],
            &[("alpha", "0", "1"), ("beta", "1", "2"), ("g", "2", "0")],
        )
        .unwrap();
        let rels = vec![
            (q.parse_path("g.beta.alpha").unwrap(), Path::identity(0)),
            (q.parse_path("beta.alpha.g").unwrap(), Path::identity(2)),
        ];
        PresentedCategory::new(q, rels).unwrap()
    }

    #[test]
    fn a2_path_category() {
        let q = Quiver::new(&["0", "1", "2"], &[("a", "0", "1"), ("b", "1", "2")]).unwrap();
        let c = saturate(&free_category(&q), 10).finite().unwrap();
        assert_eq!(c.num_morphisms(), 6);
        c.check_laws().unwrap();
    }

    #[test]
    fn loop_is_not_finite() {
        let q = Quiver::new(&["v"], &[("a", "v", "v")]).unwrap();
        for bound in [4, 10] {
            assert!(matches!(saturate(&free_category(&q), bound), SaturationOutcome::NonFinite(_)));
        }
    }

    #[test]
    fn idempotent_loop() {
        let q = Quiver::new(&["v"], &[("e", "v", "v")]).unwrap();
        let rel = (q.parse_path("e.e").unwrap(), q.parse_path("e").unwrap());
        let c = saturate(&PresentedCategory::new(q, vec![rel]).unwrap(), 10).finite().unwrap();
        assert_eq!(c.num_morphisms(), 2);
    }

    #[test]
    fn r_saturates() {
        let c = saturate(&r_presentation(), 50).finite().unwrap();
        assert_eq!(c.num_objects(), 3);
        assert_eq!(c.hom(1, 1).len(), 2);
        c.check_laws().unwrap();
    }

    #[test]
    fn cayley_presentation_resaturates() {
        let c = saturate(&r_presentation(), 50).finite().unwrap();
        let again = saturate(&c.presentation(), 50).finite().unwrap();
        assert_eq!(again.num_morphisms(), c.num_morphisms());
    }
}
