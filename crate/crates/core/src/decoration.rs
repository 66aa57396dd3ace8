//! Decorations on the apex of a cospan, and the decorated cospan layer built
//! on top of [`crate::cospan`].
//!
//! A [`Decoration`] backend plays the role of a symmetric lax monoidal functor
//! from finite sets to sets: `transport` is its action on functions, `combine`
//! merges decorations on disjoint sets into one on their coproduct, and `unit`
//! decorates the empty set. Composition of decorated cospans combines the two
//! decorations and pushes the result along the quotient map `N + N' -> N +_Y N'`.

use std::fmt;

use thiserror::Error;

use crate::cospan::{
    self, associator, companion, composite, conjoint, identity_cospan, interchanger, left_unitor,
    right_unitor, tensor, Cospan, CospanError, GlobularIso, MapDefect, Square,
};
use crate::finset::{FinFunction, FinSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecorationError {
    #[error("decoration lives on a set of size {found}, expected size {expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("invalid decoration: {0}")]
    Invalid(String),
}

/// A decoration backend.
///
/// Implementations must be pure, and must satisfy the laws checked by
/// [`crate::laws::check_decoration_functor`]: functoriality of `transport`,
/// naturality, associativity, unitality and symmetry of `combine`.
pub trait Decoration {
    type Value: Clone + fmt::Debug + PartialEq;

    /// Short tag used in documents and reports.
    fn name(&self) -> &'static str;

    /// The finite set `d` decorates.
    fn carrier(&self, d: &Self::Value) -> FinSet;

    /// The action of the functor on `f: A -> B`, for `d` decorating `A`.
    fn transport(&self, f: &FinFunction, d: &Self::Value) -> Result<Self::Value, DecorationError>;

    /// Decoration on `A + B` from decorations on `A` and on `B`.
    fn combine(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    /// The decoration of the empty set.
    fn unit(&self) -> Self::Value;

    fn equals(&self, a: &Self::Value, b: &Self::Value) -> bool {
        a == b
    }

    /// Canonical JSON form of a decoration payload.
    fn to_json(&self, d: &Self::Value) -> serde_json::Value;

    /// Parses a payload decorating `carrier`.
    #[allow(clippy::wrong_self_convention)]
    fn from_json(
        &self,
        v: &serde_json::Value,
        carrier: FinSet,
    ) -> Result<Self::Value, DecorationError>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecoratedError {
    #[error(transparent)]
    Cospan(#[from] CospanError),
    #[error(transparent)]
    Decoration(#[from] DecorationError),
    #[error("{what}: transported decoration differs from the expected one")]
    DecorationMismatch { what: &'static str },
}

pub type Result<T, E = DecoratedError> = std::result::Result<T, E>;

/// A cospan with a decoration on its apex.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedCospan<V> {
    cospan: Cospan,
    decoration: V,
}

impl<V: Clone + fmt::Debug + PartialEq> DecoratedCospan<V> {
    pub fn new<D: Decoration<Value = V>>(
        backend: &D,
        cospan: Cospan,
        decoration: V,
    ) -> Result<Self> {
        let carrier = backend.carrier(&decoration);
        if carrier != cospan.apex() {
            return Err(DecorationError::DomainMismatch {
                expected: cospan.apex().size(),
                found: carrier.size(),
            }
            .into());
        }
        Ok(DecoratedCospan { cospan, decoration })
    }

    pub fn cospan(&self) -> &Cospan {
        &self.cospan
    }

    pub fn decoration(&self) -> &V {
        &self.decoration
    }

    pub fn into_parts(self) -> (Cospan, V) {
        (self.cospan, self.decoration)
    }

    /// Pushes legs and decoration forward along `h: apex -> N'`; the result is
    /// the target of the globular 2-morphism `h`.
    pub fn relabel<D: Decoration<Value = V>>(&self, backend: &D, h: &FinFunction) -> Result<Self> {
        Ok(DecoratedCospan {
            cospan: self.cospan.relabel(h)?,
            decoration: backend.transport(h, &self.decoration)?,
        })
    }
}

/// Composition: pushout of cospans, combined decoration pushed to the new apex.
pub fn dcompose<D: Decoration>(
    backend: &D,
    m: &DecoratedCospan<D::Value>,
    n: &DecoratedCospan<D::Value>,
) -> Result<DecoratedCospan<D::Value>> {
    let c = composite(&m.cospan, &n.cospan)?;
    let combined = backend.combine(&m.decoration, &n.decoration);
    let decoration = backend.transport(&c.pushout.from_coproduct, &combined)?;
    Ok(DecoratedCospan {
        cospan: c.cospan,
        decoration,
    })
}

pub fn dtensor<D: Decoration>(
    backend: &D,
    m: &DecoratedCospan<D::Value>,
    n: &DecoratedCospan<D::Value>,
) -> DecoratedCospan<D::Value> {
    DecoratedCospan {
        cospan: tensor(&m.cospan, &n.cospan),
        decoration: backend.combine(&m.decoration, &n.decoration),
    }
}

/// The unit decoration pushed along the unique map `0 -> A`.
pub fn trivial_decoration<D: Decoration>(backend: &D, a: FinSet) -> D::Value {
    backend
        .transport(&FinFunction::initial(a), &backend.unit())
        .expect("the unit decorates the empty set")
}

pub fn didentity<D: Decoration>(backend: &D, a: FinSet) -> DecoratedCospan<D::Value> {
    DecoratedCospan {
        cospan: identity_cospan(a),
        decoration: trivial_decoration(backend, a),
    }
}

pub fn dcompanion<D: Decoration>(backend: &D, f: &FinFunction) -> DecoratedCospan<D::Value> {
    DecoratedCospan {
        cospan: companion(f),
        decoration: trivial_decoration(backend, f.cod()),
    }
}

pub fn dconjoint<D: Decoration>(backend: &D, f: &FinFunction) -> DecoratedCospan<D::Value> {
    DecoratedCospan {
        cospan: conjoint(f),
        decoration: trivial_decoration(backend, f.cod()),
    }
}

/// A globular 2-morphism of decorated cospans, given by its apex map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecoratedMap {
    pub apex_map: FinFunction,
}

impl From<&GlobularIso> for DecoratedMap {
    fn from(iso: &GlobularIso) -> Self {
        DecoratedMap {
            apex_map: iso.apex_bijection().clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecoratedMapDefect {
    FeetDiffer,
    Cospan(MapDefect),
    /// The map is fine on cospans, but does not carry one decoration to the other.
    DecorationNotPreserved,
}

impl fmt::Display for DecoratedMapDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoratedMapDefect::FeetDiffer => f.write_str("source and target feet differ"),
            DecoratedMapDefect::Cospan(d) => d.fmt(f),
            DecoratedMapDefect::DecorationNotPreserved => f.write_str("decoration not preserved"),
        }
    }
}

pub fn diagnose_decorated_map<D: Decoration>(
    backend: &D,
    h: &DecoratedMap,
    src: &DecoratedCospan<D::Value>,
    tgt: &DecoratedCospan<D::Value>,
) -> std::result::Result<(), DecoratedMapDefect> {
    let (s, t) = (&src.cospan, &tgt.cospan);
    if s.left_foot() != t.left_foot() || s.right_foot() != t.right_foot() {
        return Err(DecoratedMapDefect::FeetDiffer);
    }
    let map = cospan::CospanMap::new(
        FinFunction::identity(s.left_foot()),
        h.apex_map.clone(),
        FinFunction::identity(s.right_foot()),
    );
    map.diagnose(s, t).map_err(DecoratedMapDefect::Cospan)?;
    match backend.transport(&h.apex_map, &src.decoration) {
        Ok(moved) if backend.equals(&moved, &tgt.decoration) => Ok(()),
        _ => Err(DecoratedMapDefect::DecorationNotPreserved),
    }
}

pub fn check_decorated_map<D: Decoration>(
    backend: &D,
    h: &DecoratedMap,
    src: &DecoratedCospan<D::Value>,
    tgt: &DecoratedCospan<D::Value>,
) -> bool {
    diagnose_decorated_map(backend, h, src, tgt).is_ok()
}

/// A general (not necessarily globular) decorated 2-morphism: the square must
/// be valid on cospans and its apex map must carry `src` to `tgt`.
pub fn check_decorated_square<D: Decoration>(
    backend: &D,
    sq: &Square,
    src: &D::Value,
    tgt: &D::Value,
) -> bool {
    backend
        .transport(&sq.map().apex_map, src)
        .map(|moved| backend.equals(&moved, tgt))
        .unwrap_or(false)
}

fn certify_transport<D: Decoration>(
    backend: &D,
    what: &'static str,
    iso: &GlobularIso,
    src: &D::Value,
    tgt: &D::Value,
) -> Result<DecoratedMap> {
    let moved = backend.transport(iso.apex_bijection(), src)?;
    if !backend.equals(&moved, tgt) {
        return Err(DecoratedError::DecorationMismatch { what });
    }
    Ok(DecoratedMap::from(iso))
}

/// The interchanger on underlying cospans, certified to carry the decoration of
/// `(m1 ⊗ n1) ⊙ (m2 ⊗ n2)` to that of `(m1 ⊙ m2) ⊗ (n1 ⊙ n2)`.
pub fn dinterchanger<D: Decoration>(
    backend: &D,
    m1: &DecoratedCospan<D::Value>,
    n1: &DecoratedCospan<D::Value>,
    m2: &DecoratedCospan<D::Value>,
    n2: &DecoratedCospan<D::Value>,
) -> Result<DecoratedMap> {
    let iso = interchanger(&m1.cospan, &n1.cospan, &m2.cospan, &n2.cospan)?;
    let mixed = dcompose(
        backend,
        &dtensor(backend, m1, n1),
        &dtensor(backend, m2, n2),
    )?;
    let split = dtensor(
        backend,
        &dcompose(backend, m1, m2)?,
        &dcompose(backend, n1, n2)?,
    );
    certify_transport(
        backend,
        "interchanger",
        &iso,
        &mixed.decoration,
        &split.decoration,
    )
}

/// The associator, certified on decorations.
pub fn dassociator<D: Decoration>(
    backend: &D,
    m1: &DecoratedCospan<D::Value>,
    m2: &DecoratedCospan<D::Value>,
    m3: &DecoratedCospan<D::Value>,
) -> Result<DecoratedMap> {
    let iso = associator(&m1.cospan, &m2.cospan, &m3.cospan)?;
    let left = dcompose(backend, &dcompose(backend, m1, m2)?, m3)?;
    let right = dcompose(backend, m1, &dcompose(backend, m2, m3)?)?;
    certify_transport(
        backend,
        "associator",
        &iso,
        &left.decoration,
        &right.decoration,
    )
}

/// `λ : U ⊙ m => m`, certified on decorations.
pub fn dleft_unitor<D: Decoration>(
    backend: &D,
    m: &DecoratedCospan<D::Value>,
) -> Result<DecoratedMap> {
    let iso = left_unitor(&m.cospan)?;
    let padded = dcompose(backend, &didentity(backend, m.cospan.left_foot()), m)?;
    certify_transport(
        backend,
        "left unitor",
        &iso,
        &padded.decoration,
        &m.decoration,
    )
}

/// `ρ : m ⊙ U => m`, certified on decorations.
pub fn dright_unitor<D: Decoration>(
    backend: &D,
    m: &DecoratedCospan<D::Value>,
) -> Result<DecoratedMap> {
    let iso = right_unitor(&m.cospan)?;
    let padded = dcompose(backend, m, &didentity(backend, m.cospan.right_foot()))?;
    certify_transport(
        backend,
        "right unitor",
        &iso,
        &padded.decoration,
        &m.decoration,
    )
}

/// Relabels the apex into a canonical order: nodes in order of first
/// appearance along the input leg, then the output leg, then the remaining
/// nodes in their existing relative order.
pub fn normalize<D: Decoration>(
    backend: &D,
    m: &DecoratedCospan<D::Value>,
) -> Result<DecoratedCospan<D::Value>> {
    let apex = m.cospan.apex();
    let mut order = Vec::with_capacity(apex.size());
    let mut seen = vec![false; apex.size()];
    let legs = m
        .cospan
        .in_leg()
        .table()
        .iter()
        .chain(m.cospan.out_leg().table());
    for &k in legs.chain(&apex.elements().collect::<Vec<_>>()) {
        if !seen[k] {
            seen[k] = true;
            order.push(k);
        }
    }
    let mut relabel = vec![0; apex.size()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let h = FinFunction::new(apex, relabel).expect("a permutation of the apex");
    m.relabel(backend, &h)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimal backend: a decoration is a per-element weight, summed along
    /// transport. Just enough to test the layer independently of real backends.
    struct Weights;

    impl Decoration for Weights {
        type Value = Vec<u32>;

        fn name(&self) -> &'static str {
            "weights"
        }

        fn carrier(&self, d: &Vec<u32>) -> FinSet {
            FinSet::new(d.len())
        }

        fn transport(&self, f: &FinFunction, d: &Vec<u32>) -> Result<Vec<u32>, DecorationError> {
            if f.dom().size() != d.len() {
                return Err(DecorationError::DomainMismatch {
                    expected: f.dom().size(),
                    found: d.len(),
                });
            }
            let mut out = vec![0; f.cod().size()];
            for (k, w) in d.iter().enumerate() {
                out[f.apply(k)] += w;
            }
            Ok(out)
        }

        fn combine(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
            a.iter().chain(b).copied().collect()
        }

        fn unit(&self) -> Vec<u32> {
            Vec::new()
        }

        fn to_json(&self, d: &Vec<u32>) -> serde_json::Value {
            serde_json::json!(d)
        }

        fn from_json(&self, v: &serde_json::Value, _: FinSet) -> Result<Vec<u32>, DecorationError> {
            serde_json::from_value(v.clone()).map_err(|e| DecorationError::Invalid(e.to_string()))
        }
    }

    fn weighted(apex: usize, i: &[usize], o: &[usize], w: &[u32]) -> DecoratedCospan<Vec<u32>> {
        DecoratedCospan::new(
            &Weights,
            Cospan::from_tables(apex, i, o).unwrap(),
            w.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn carrier_must_match_apex() {
        let c = Cospan::from_tables(2, &[0], &[1]).unwrap();
        assert!(DecoratedCospan::new(&Weights, c, vec![1]).is_err());
    }

    #[test]
    fn compose_sums_merged_weights() {
        let m = weighted(3, &[0], &[1, 1], &[1, 2, 3]);
        let n = weighted(3, &[0, 2], &[1, 2], &[10, 20, 30]);
        let c = dcompose(&Weights, &m, &n).unwrap();
        assert_eq!(c.cospan().apex().size(), 4);
        // B, A' and C' merge into one node
        assert_eq!(c.decoration(), &vec![1, 2 + 10 + 30, 3, 20]);
    }

    #[test]
    fn identities_and_trivial_decorations() {
        assert_eq!(trivial_decoration(&Weights, FinSet::new(3)), vec![0, 0, 0]);
        assert_eq!(
            didentity(&Weights, FinSet::EMPTY).decoration(),
            &Weights.unit()
        );
        let f = FinFunction::identity(FinSet::new(2));
        assert_eq!(
            dcompanion(&Weights, &f),
            didentity(&Weights, FinSet::new(2))
        );
        assert_eq!(dconjoint(&Weights, &f), didentity(&Weights, FinSet::new(2)));

        let m = weighted(3, &[0], &[1, 1], &[1, 2, 3]);
        let padded = dcompose(&Weights, &m, &didentity(&Weights, FinSet::new(2))).unwrap();
        let rho = dright_unitor(&Weights, &m).unwrap();
        assert!(check_decorated_map(&Weights, &rho, &padded, &m));
        let lam = dleft_unitor(&Weights, &m).unwrap();
        let padded = dcompose(&Weights, &didentity(&Weights, FinSet::new(1)), &m).unwrap();
        assert!(check_decorated_map(&Weights, &lam, &padded, &m));
    }

    #[test]
    fn tensor_with_empty_is_identity() {
        let m = weighted(3, &[0], &[1, 1], &[1, 2, 3]);
        let e = didentity(&Weights, FinSet::EMPTY);
        assert_eq!(dtensor(&Weights, &m, &e), m);
        assert_eq!(dtensor(&Weights, &e, &m), m);
    }

    #[test]
    fn decorated_map_checks() {
        let m = weighted(3, &[0], &[1, 1], &[1, 2, 3]);
        let id = DecoratedMap {
            apex_map: FinFunction::identity(m.cospan().apex()),
        };
        assert!(check_decorated_map(&Weights, &id, &m, &m));

        let h = FinFunction::new(FinSet::new(2), vec![0, 1, 0]).unwrap();
        let tgt = m.relabel(&Weights, &h).unwrap();
        let map = DecoratedMap { apex_map: h };
        assert!(check_decorated_map(&Weights, &map, &m, &tgt));

        let altered = DecoratedCospan::new(&Weights, tgt.cospan().clone(), vec![4, 3]).unwrap();
        assert_eq!(
            diagnose_decorated_map(&Weights, &map, &m, &altered),
            Err(DecoratedMapDefect::DecorationNotPreserved)
        );
    }

    #[test]
    fn interchanger_and_associator_transport() {
        let m = weighted(3, &[0], &[1, 1], &[1, 2, 3]);
        let n = weighted(3, &[0, 2], &[1, 2], &[10, 20, 30]);
        let p = weighted(1, &[0, 0], &[], &[7]);
        dassociator(&Weights, &m, &n, &p).unwrap();
        let a = weighted(2, &[1], &[0, 0], &[5, 6]);
        dinterchanger(&Weights, &m, &a, &n, &p).unwrap();
    }

    #[test]
    fn broken_backend_is_caught() {
        // forgets weights of merged nodes instead of summing them
        struct Lossy;
        impl Decoration for Lossy {
            type Value = Vec<u32>;
            fn name(&self) -> &'static str {
                "lossy"
            }
            fn carrier(&self, d: &Vec<u32>) -> FinSet {
                FinSet::new(d.len())
            }
            fn transport(
                &self,
                f: &FinFunction,
                d: &Vec<u32>,
            ) -> Result<Vec<u32>, DecorationError> {
                let mut out = vec![0; f.cod().size()];
                for (k, w) in d.iter().enumerate() {
                    out[f.apply(k)] = *w;
                }
                Ok(out)
            }
            fn combine(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
                b.iter().chain(a).copied().collect()
            }
            fn unit(&self) -> Vec<u32> {
                Vec::new()
            }
            fn to_json(&self, d: &Vec<u32>) -> serde_json::Value {
                serde_json::json!(d)
            }
            fn from_json(
                &self,
                _: &serde_json::Value,
                _: FinSet,
            ) -> Result<Vec<u32>, DecorationError> {
                unimplemented!()
            }
        }
        let m = DecoratedCospan::new(
            &Lossy,
            Cospan::from_tables(2, &[0], &[1]).unwrap(),
            vec![1, 2],
        )
        .unwrap();
        let n = DecoratedCospan::new(&Lossy, Cospan::from_tables(1, &[0], &[0]).unwrap(), vec![3])
            .unwrap();
        let err = dinterchanger(&Lossy, &m, &n, &n, &n).unwrap_err();
        assert_eq!(
            err,
            DecoratedError::DecorationMismatch {
                what: "interchanger"
            }
        );
    }

    #[test]
    fn normalize_equates_unitor_related_cospans() {
        let m = weighted(3, &[2], &[0, 0], &[1, 2, 3]);
        let padded = dcompose(&Weights, &didentity(&Weights, FinSet::new(1)), &m).unwrap();
        assert_ne!(padded, m);
        assert_eq!(
            normalize(&Weights, &padded).unwrap(),
            normalize(&Weights, &m).unwrap()
        );
    }
}
