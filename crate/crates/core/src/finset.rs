//! Skeletal finite sets, total functions between them, and the chosen finite
//! colimits used everywhere else: the empty set, block coproducts and
//! pushouts.
//!
//! A finite set of size `n` is always `{0, .., n-1}`. Coproducts lay the left
//! block first. Pushout classes are numbered in order of their smallest member
//! in `N + N'`, so every colimit here is a deterministic function of its inputs.

use std::fmt;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinSetError {
    #[error("codomain mismatch: expected a set of size {expected}, found size {found}")]
    CodomainMismatch { expected: usize, found: usize },
    #[error("domain mismatch: expected a set of size {expected}, found size {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("table entry {index} maps to {value}, outside a codomain of size {cod}")]
    OutOfRange {
        index: usize,
        value: usize,
        cod: usize,
    },
    #[error("maps do not form a cocone: they disagree on shared element {0}")]
    NotACocone(usize),
    #[error("function is not a bijection")]
    NotBijective,
    #[error("apex element {0} is not reached by either leg; the induced map is undetermined")]
    Undetermined(usize),
}

pub type Result<T, E = FinSetError> = std::result::Result<T, E>;

/// A canonical finite set `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinSet(usize);

impl FinSet {
    /// The initial object.
    pub const EMPTY: FinSet = FinSet(0);

    pub const fn new(size: usize) -> Self {
        FinSet(size)
    }

    pub const fn size(self) -> usize {
        self.0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn elements(self) -> std::ops::Range<usize> {
        0..self.0
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// A total function between canonical finite sets, stored as its table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinFunction {
    cod: FinSet,
    table: Vec<usize>,
}

impl FinFunction {
    /// Builds a function `table.len() -> cod`, rejecting out-of-range entries.
    pub fn new(cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v >= cod.size()) {
            return Err(FinSetError::OutOfRange {
                index,
                value,
                cod: cod.size(),
            });
        }
        Ok(FinFunction { cod, table })
    }

    pub(crate) fn from_table_unchecked(cod: FinSet, table: Vec<usize>) -> Self {
        debug_assert!(table.iter().all(|&v| v < cod.size()));
        FinFunction { cod, table }
    }

    pub fn identity(set: FinSet) -> Self {
        FinFunction {
            cod: set,
            table: set.elements().collect(),
        }
    }

    /// The unique map out of the empty set.
    pub fn initial(cod: FinSet) -> Self {
        FinFunction {
            cod,
            table: Vec::new(),
        }
    }

    pub fn dom(&self) -> FinSet {
        FinSet(self.table.len())
    }

    pub fn cod(&self) -> FinSet {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, k: usize) -> usize {
        self.table[k]
    }

    pub fn is_identity(&self) -> bool {
        self.dom() == self.cod && self.table.iter().enumerate().all(|(k, &v)| k == v)
    }

    /// Diagrammatic composite: first `self`, then `g`.
    pub fn then(&self, g: &FinFunction) -> Result<FinFunction> {
        if self.cod != g.dom() {
            return Err(FinSetError::CodomainMismatch {
                expected: g.dom().size(),
                found: self.cod.size(),
            });
        }
        Ok(FinFunction {
            cod: g.cod,
            table: self.table.iter().map(|&k| g.table[k]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.size()];
        for &v in &self.table {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijection(&self) -> bool {
        self.dom() == self.cod && self.is_surjective()
    }

    pub fn inverse(&self) -> Result<FinFunction> {
        if !self.is_bijection() {
            return Err(FinSetError::NotBijective);
        }
        let mut table = vec![0; self.table.len()];
        for (k, &v) in self.table.iter().enumerate() {
            table[v] = k;
        }
        Ok(FinFunction {
            cod: self.dom(),
            table,
        })
    }

    /// The block sum `f + g : A + B -> C + D`.
    pub fn sum(&self, other: &FinFunction) -> FinFunction {
        let shift = self.cod.size();
        let table = self
            .table
            .iter()
            .copied()
            .chain(other.table.iter().map(|&v| v + shift))
            .collect();
        FinFunction {
            cod: FinSet(self.cod.size() + other.cod.size()),
            table,
        }
    }

    /// Image as a sorted, deduplicated list.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.table.clone();
        img.sort_unstable();
        img.dedup();
        img
    }
}

impl fmt::Display for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {} -> {}", self.table, self.dom(), self.cod)
    }
}

/// Diagrammatic composition `g ∘ f`, i.e. `table[k] = g[f[k]]`.
pub fn compose(f: &FinFunction, g: &FinFunction) -> Result<FinFunction> {
    f.then(g)
}

/// The chosen coproduct `A + B` with its two injections.
pub fn coproduct(a: FinSet, b: FinSet) -> (FinSet, FinFunction, FinFunction) {
    let sum = FinSet(a.size() + b.size());
    let inj_left = FinFunction {
        cod: sum,
        table: a.elements().collect(),
    };
    let inj_right = FinFunction {
        cod: sum,
        table: b.elements().map(|k| a.size() + k).collect(),
    };
    (sum, inj_left, inj_right)
}

/// The copairing `[u, v] : A + B -> Q`.
pub fn copair(u: &FinFunction, v: &FinFunction) -> Result<FinFunction> {
    if u.cod != v.cod {
        return Err(FinSetError::CodomainMismatch {
            expected: u.cod.size(),
            found: v.cod.size(),
        });
    }
    let table = u.table.iter().chain(v.table.iter()).copied().collect();
    Ok(FinFunction { cod: u.cod, table })
}

/// Chosen pushout of a span `N <-f- Y -g-> N'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushoutResult {
    pub apex: FinSet,
    pub left_leg: FinFunction,
    pub right_leg: FinFunction,
    /// The quotient map `N + N' -> apex`.
    pub from_coproduct: FinFunction,
    span_left: FinFunction,
    span_right: FinFunction,
}

pub fn pushout(f: &FinFunction, g: &FinFunction) -> Result<PushoutResult> {
    if f.dom() != g.dom() {
        return Err(FinSetError::DomainMismatch {
            expected: f.dom().size(),
            found: g.dom().size(),
        });
    }
    let offset = f.cod.size();
    let total = offset + g.cod.size();
    let mut classes = UnionFind::<usize>::new(total);
    for (&a, &b) in f.table.iter().zip(&g.table) {
        classes.union(a, offset + b);
    }

    let (apex, quotient) = if hooks::normalization_enabled() {
        // number classes by their smallest member
        let mut class_id = vec![usize::MAX; total];
        let mut quotient = Vec::with_capacity(total);
        let mut next = 0;
        for k in 0..total {
            let root = classes.find_mut(k);
            if class_id[root] == usize::MAX {
                class_id[root] = next;
                next += 1;
            }
            quotient.push(class_id[root]);
        }
        (FinSet(next), quotient)
    } else {
        (
            FinSet(total),
            (0..total).map(|k| classes.find_mut(k)).collect(),
        )
    };

    let from_coproduct = FinFunction {
        cod: apex,
        table: quotient,
    };
    let left_leg = FinFunction {
        cod: apex,
        table: from_coproduct.table[..offset].to_vec(),
    };
    let right_leg = FinFunction {
        cod: apex,
        table: from_coproduct.table[offset..].to_vec(),
    };
    Ok(PushoutResult {
        apex,
        left_leg,
        right_leg,
        from_coproduct,
        span_left: f.clone(),
        span_right: g.clone(),
    })
}

impl PushoutResult {
    /// The span `(f, g)` this pushout was computed from.
    pub fn span(&self) -> (&FinFunction, &FinFunction) {
        (&self.span_left, &self.span_right)
    }

    /// The unique `w: apex -> Q` with `w ∘ left_leg = u` and `w ∘ right_leg = v`.
    pub fn universal(&self, u: &FinFunction, v: &FinFunction) -> Result<FinFunction> {
        if u.dom() != self.span_left.cod {
            return Err(FinSetError::DomainMismatch {
                expected: self.span_left.cod.size(),
                found: u.dom().size(),
            });
        }
        if v.dom() != self.span_right.cod {
            return Err(FinSetError::DomainMismatch {
                expected: self.span_right.cod.size(),
                found: v.dom().size(),
            });
        }
        if u.cod != v.cod {
            return Err(FinSetError::CodomainMismatch {
                expected: u.cod.size(),
                found: v.cod.size(),
            });
        }
        for (y, (&a, &b)) in self
            .span_left
            .table
            .iter()
            .zip(&self.span_right.table)
            .enumerate()
        {
            if u.table[a] != v.table[b] {
                return Err(FinSetError::NotACocone(y));
            }
        }
        let mut induced: Vec<Option<usize>> = vec![None; self.apex.size()];
        let legs = self.left_leg.table.iter().zip(&u.table);
        for (&class, &value) in legs.chain(self.right_leg.table.iter().zip(&v.table)) {
            match induced[class] {
                None => induced[class] = Some(value),
                Some(existing) if existing != value => return Err(FinSetError::NotACocone(class)),
                Some(_) => {}
            }
        }
        let table = induced
            .into_iter()
            .enumerate()
            .map(|(class, value)| value.ok_or(FinSetError::Undetermined(class)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FinFunction { cod: u.cod, table })
    }
}

/// Free-function form of [`PushoutResult::universal`].
pub fn pushout_universal(
    p: &PushoutResult,
    u: &FinFunction,
    v: &FinFunction,
) -> Result<FinFunction> {
    p.universal(u, v)
}

/// Fault injection for checking that the law suites are not vacuous.
#[doc(hidden)]
pub mod hooks {
    use std::cell::Cell;

    thread_local! {
        static NORMALIZE: Cell<bool> = const { Cell::new(true) };
    }

    pub(crate) fn normalization_enabled() -> bool {
        NORMALIZE.with(Cell::get)
    }

    /// Runs `body` on the current thread with pushout class renumbering
    /// switched off: apexes keep one slot per element of `N + N'`.
    pub fn without_normalization<R>(body: impl FnOnce() -> R) -> R {
        struct Restore(bool);
        impl Drop for Restore {
            fn drop(&mut self) {
                NORMALIZE.with(|n| n.set(self.0));
            }
        }
        let _restore = Restore(NORMALIZE.with(|n| n.replace(false)));
        body()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fun(cod: usize, table: &[usize]) -> FinFunction {
        FinFunction::new(FinSet::new(cod), table.to_vec()).unwrap()
    }

    #[test]
    fn identity_tables() {
        assert!(FinFunction::identity(FinSet::EMPTY).table().is_empty());
        assert_eq!(FinFunction::identity(FinSet::new(3)).table(), &[0, 1, 2]);
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(
            FinFunction::new(FinSet::new(2), vec![0, 2]),
            Err(FinSetError::OutOfRange {
                index: 1,
                value: 2,
                cod: 2
            })
        );
    }

    #[test]
    fn compose_examples() {
        let swap = fun(2, &[1, 0]);
        assert_eq!(compose(&swap, &swap).unwrap().table(), &[0, 1]);
        let collapse = fun(1, &[0, 0]);
        let pick = fun(3, &[2]);
        assert_eq!(compose(&collapse, &pick).unwrap(), fun(3, &[2, 2]));
        assert!(matches!(
            compose(&pick, &swap),
            Err(FinSetError::CodomainMismatch { .. })
        ));
    }

    #[test]
    fn coproduct_layout() {
        let (sum, l, r) = coproduct(FinSet::EMPTY, FinSet::new(2));
        assert_eq!(sum.size(), 2);
        assert!(l.table().is_empty());
        assert!(r.is_identity());

        let (sum, l, r) = coproduct(FinSet::new(1), FinSet::new(2));
        assert_eq!(sum.size(), 3);
        assert_eq!(l.table(), &[0]);
        assert_eq!(r.table(), &[1, 2]);
        assert!(copair(&l, &r).unwrap().is_identity());
    }

    #[test]
    fn copair_examples() {
        assert_eq!(
            copair(&fun(3, &[0]), &fun(3, &[1, 2])).unwrap().table(),
            &[0, 1, 2]
        );
        assert_eq!(
            copair(&fun(1, &[0, 0]), &fun(1, &[0])).unwrap().table(),
            &[0, 0, 0]
        );
        assert!(copair(&fun(1, &[0]), &fun(2, &[0])).is_err());
    }

    #[test]
    fn pushout_over_empty_is_coproduct() {
        let p = pushout(
            &FinFunction::initial(FinSet::new(2)),
            &FinFunction::initial(FinSet::new(3)),
        )
        .unwrap();
        let (sum, l, r) = coproduct(FinSet::new(2), FinSet::new(3));
        assert_eq!(p.apex, sum);
        assert_eq!(p.left_leg, l);
        assert_eq!(p.right_leg, r);
        assert!(p.from_coproduct.is_identity());
    }

    #[test]
    fn circuit_gluing_pushout() {
        // both outputs sit on node B of the first circuit; the second circuit
        // takes them in at A' and C'
        let f = fun(3, &[1, 1]);
        let g = fun(3, &[0, 2]);
        let p = pushout(&f, &g).unwrap();
        assert_eq!(p.apex.size(), 4);
        assert_eq!(p.left_leg.table(), &[0, 1, 2]);
        assert_eq!(p.right_leg.table(), &[1, 3, 1]);
    }

    #[test]
    fn pushout_domain_mismatch() {
        assert!(matches!(
            pushout(&fun(1, &[0]), &fun(1, &[0, 0])),
            Err(FinSetError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn universal_of_own_legs_is_identity() {
        let p = pushout(&fun(3, &[1, 1]), &fun(3, &[0, 2])).unwrap();
        assert!(p
            .universal(&p.left_leg, &p.right_leg)
            .unwrap()
            .is_identity());
    }

    #[test]
    fn universal_over_empty_is_copair() {
        let p = pushout(
            &FinFunction::initial(FinSet::new(1)),
            &FinFunction::initial(FinSet::new(2)),
        )
        .unwrap();
        let u = fun(2, &[1]);
        let v = fun(2, &[0, 0]);
        assert_eq!(p.universal(&u, &v).unwrap(), copair(&u, &v).unwrap());
    }

    #[test]
    fn universal_rejects_non_cocone() {
        let p = pushout(&fun(2, &[0]), &fun(2, &[1])).unwrap();
        assert_eq!(
            p.universal(&fun(2, &[0, 1]), &fun(2, &[1, 1])),
            Err(FinSetError::NotACocone(0))
        );
    }

    #[test]
    fn bijections() {
        let swap = fun(2, &[1, 0]);
        assert!(swap.is_bijection());
        assert_eq!(swap.inverse().unwrap(), swap);
        assert!(!fun(1, &[0, 0]).is_bijection());
        assert_eq!(fun(2, &[0, 0]).inverse(), Err(FinSetError::NotBijective));
    }

    #[test]
    fn skipping_normalization_leaves_junk_in_apex() {
        let f = fun(1, &[0]);
        let p = hooks::without_normalization(|| pushout(&f, &f).unwrap());
        assert_eq!(p.apex.size(), 2);
        assert!(!p.from_coproduct.is_surjective());
        assert_eq!(pushout(&f, &f).unwrap().apex.size(), 1);
    }

    fn arb_function(max_dom: usize, cod: usize) -> impl Strategy<Value = FinFunction> {
        let entries = if cod == 0 {
            Just(Vec::new()).boxed()
        } else {
            prop::collection::vec(0..cod, 0..=max_dom).boxed()
        };
        entries.prop_map(move |table| FinFunction::new(FinSet::new(cod), table).unwrap())
    }

    fn arb_span() -> impl Strategy<Value = (FinFunction, FinFunction)> {
        (1usize..5, 1usize..5, 0usize..5).prop_flat_map(|(n, m, y)| {
            (
                prop::collection::vec(0..n, y)
                    .prop_map(move |t| FinFunction::new(FinSet::new(n), t).unwrap()),
                prop::collection::vec(0..m, y)
                    .prop_map(move |t| FinFunction::new(FinSet::new(m), t).unwrap()),
            )
        })
    }

    fn arb_bijection(max: usize) -> impl Strategy<Value = FinFunction> {
        (0..=max)
            .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|t| FinFunction::new(FinSet::new(t.len()), t).unwrap())
    }

    proptest! {
        #[test]
        fn compose_is_associative(
            f in arb_function(5, 3),
            g in prop::collection::vec(0usize..4, 3),
            h in prop::collection::vec(0usize..2, 4),
        ) {
            let g = FinFunction::new(FinSet::new(4), g).unwrap();
            let h = FinFunction::new(FinSet::new(2), h).unwrap();
            prop_assert_eq!(f.then(&g).unwrap().then(&h).unwrap(), f.then(&g.then(&h).unwrap()).unwrap());
            prop_assert_eq!(FinFunction::identity(f.dom()).then(&f).unwrap(), f.clone());
            prop_assert_eq!(f.then(&FinFunction::identity(f.cod())).unwrap(), f);
        }

        #[test]
        fn pushout_coequalizes((f, g) in arb_span()) {
            let p = pushout(&f, &g).unwrap();
            prop_assert_eq!(f.then(&p.left_leg).unwrap(), g.then(&p.right_leg).unwrap());
            let (_, l, r) = coproduct(f.cod(), g.cod());
            prop_assert_eq!(l.then(&p.from_coproduct).unwrap(), p.left_leg.clone());
            prop_assert_eq!(r.then(&p.from_coproduct).unwrap(), p.right_leg.clone());
            prop_assert!(p.from_coproduct.is_surjective());
            prop_assert_eq!(pushout(&f, &g).unwrap(), p);
        }

        #[test]
        fn universal_reproduces_cocone((f, g) in arb_span(), q in 1usize..4, seed in any::<u64>()) {
            // any map out of the apex yields a cocone; the induced map must recover it
            let p = pushout(&f, &g).unwrap();
            let w = FinFunction::new(
                FinSet::new(q),
                (0..p.apex.size()).map(|k| ((seed >> (k % 60)) as usize + k) % q).collect(),
            ).unwrap();
            let u = p.left_leg.then(&w).unwrap();
            let v = p.right_leg.then(&w).unwrap();
            let induced = p.universal(&u, &v).unwrap();
            prop_assert_eq!(p.left_leg.then(&induced).unwrap(), u);
            prop_assert_eq!(p.right_leg.then(&induced).unwrap(), v);
            prop_assert_eq!(induced, w);
        }

        #[test]
        fn inverse_is_involutive(f in arb_bijection(6)) {
            let inv = f.inverse().unwrap();
            prop_assert!(f.then(&inv).unwrap().is_identity());
            prop_assert!(inv.then(&f).unwrap().is_identity());
            prop_assert_eq!(inv.inverse().unwrap(), f);
        }
    }
}
