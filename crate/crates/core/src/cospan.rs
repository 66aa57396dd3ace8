//! Cospans of finite sets as a symmetric monoidal pseudo double category.
//!
//! Objects are finite sets, vertical morphisms are functions, horizontal
//! 1-cells are cospans `X -> N <- Y` and 2-morphisms are triples of maps
//! making two squares commute. Horizontal composition is written in
//! diagrammatic order: `hcompose(m, n)` glues the right foot of `m` to the
//! left foot of `n`.
//!
//! Coherence isomorphisms (associator, unitors, interchanger) are produced as
//! explicit bijection tables and certified when they are built: a
//! [`GlobularIso`] only exists if its table is bijective and both of its
//! squares commute.

use std::fmt;

use thiserror::Error;

use crate::finset::{copair, coproduct, pushout, FinFunction, FinSet, FinSetError, PushoutResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CospanError {
    #[error("feet do not match: right foot {left} cannot be glued to left foot {right}")]
    FootMismatch { left: FinSet, right: FinSet },
    #[error("legs must share an apex: {0} vs {1}")]
    ApexMismatch(FinSet, FinSet),
    #[error("2-morphism boundaries do not line up: {0}")]
    BoundaryMismatch(String),
    #[error("not a valid 2-morphism: {0}")]
    InvalidMap(MapDefect),
    #[error("{what} could not be certified: {reason}")]
    NotCertified { what: &'static str, reason: String },
    #[error(transparent)]
    FinSet(#[from] FinSetError),
}

pub type Result<T, E = CospanError> = std::result::Result<T, E>;

/// A horizontal 1-cell `X -i-> N <-o- Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cospan {
    in_leg: FinFunction,
    out_leg: FinFunction,
}

impl Cospan {
    pub fn new(in_leg: FinFunction, out_leg: FinFunction) -> Result<Self> {
        if in_leg.cod() != out_leg.cod() {
            return Err(CospanError::ApexMismatch(in_leg.cod(), out_leg.cod()));
        }
        Ok(Cospan { in_leg, out_leg })
    }

    /// Convenience constructor from raw tables.
    pub fn from_tables(apex: usize, in_leg: &[usize], out_leg: &[usize]) -> Result<Self> {
        let apex = FinSet::new(apex);
        Cospan::new(
            FinFunction::new(apex, in_leg.to_vec())?,
            FinFunction::new(apex, out_leg.to_vec())?,
        )
    }

    /// The unit cospan `0 -> 0 <- 0`.
    pub fn empty() -> Self {
        identity_cospan(FinSet::EMPTY)
    }

    pub fn left_foot(&self) -> FinSet {
        self.in_leg.dom()
    }

    pub fn right_foot(&self) -> FinSet {
        self.out_leg.dom()
    }

    pub fn apex(&self) -> FinSet {
        self.in_leg.cod()
    }

    pub fn in_leg(&self) -> &FinFunction {
        &self.in_leg
    }

    pub fn out_leg(&self) -> &FinFunction {
        &self.out_leg
    }

    /// Post-composes both legs with `f: apex -> N'`.
    pub fn relabel(&self, f: &FinFunction) -> Result<Cospan> {
        Cospan::new(self.in_leg.then(f)?, self.out_leg.then(f)?)
    }
}

impl fmt::Display for Cospan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -{:?}-> {} <-{:?}- {}",
            self.left_foot(),
            self.in_leg.table(),
            self.apex(),
            self.out_leg.table(),
            self.right_foot()
        )
    }
}

/// A horizontal composite together with the pushout that produced it.
#[derive(Debug, Clone)]
pub struct Composite {
    pub cospan: Cospan,
    pub pushout: PushoutResult,
}

pub fn composite(m: &Cospan, n: &Cospan) -> Result<Composite> {
    if m.right_foot() != n.left_foot() {
        return Err(CospanError::FootMismatch {
            left: m.right_foot(),
            right: n.left_foot(),
        });
    }
    let p = pushout(&m.out_leg, &n.in_leg)?;
    let cospan = Cospan::new(m.in_leg.then(&p.left_leg)?, n.out_leg.then(&p.right_leg)?)?;
    Ok(Composite { cospan, pushout: p })
}

/// Horizontal composition by pushout over the shared foot.
pub fn hcompose(m: &Cospan, n: &Cospan) -> Result<Cospan> {
    composite(m, n).map(|c| c.cospan)
}

/// `U_A = A -id-> A <-id- A`.
pub fn identity_cospan(a: FinSet) -> Cospan {
    Cospan {
        in_leg: FinFunction::identity(a),
        out_leg: FinFunction::identity(a),
    }
}

/// Side-by-side placement; feet and apex are chosen coproducts.
pub fn tensor(m: &Cospan, n: &Cospan) -> Cospan {
    Cospan {
        in_leg: m.in_leg.sum(&n.in_leg),
        out_leg: m.out_leg.sum(&n.out_leg),
    }
}

/// The companion `A -f-> B <-id- B`.
pub fn companion(f: &FinFunction) -> Cospan {
    Cospan {
        in_leg: f.clone(),
        out_leg: FinFunction::identity(f.cod()),
    }
}

/// The conjoint `B -id-> B <-f- A`.
pub fn conjoint(f: &FinFunction) -> Cospan {
    Cospan {
        in_leg: FinFunction::identity(f.cod()),
        out_leg: f.clone(),
    }
}

/// Which condition a candidate 2-morphism violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapDefect {
    LeftFootMap,
    RightFootMap,
    ApexMap,
    InputSquare,
    OutputSquare,
}

impl fmt::Display for MapDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapDefect::LeftFootMap => "left foot map has the wrong domain or codomain",
            MapDefect::RightFootMap => "right foot map has the wrong domain or codomain",
            MapDefect::ApexMap => "apex map has the wrong domain or codomain",
            MapDefect::InputSquare => "input square does not commute",
            MapDefect::OutputSquare => "output square does not commute",
        })
    }
}

/// The bare data `(a, h, c)` of a 2-morphism between cospans.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CospanMap {
    pub foot_map_left: FinFunction,
    pub apex_map: FinFunction,
    pub foot_map_right: FinFunction,
}

impl CospanMap {
    pub fn new(left: FinFunction, apex: FinFunction, right: FinFunction) -> Self {
        CospanMap {
            foot_map_left: left,
            apex_map: apex,
            foot_map_right: right,
        }
    }

    pub fn identity(m: &Cospan) -> Self {
        CospanMap {
            foot_map_left: FinFunction::identity(m.left_foot()),
            apex_map: FinFunction::identity(m.apex()),
            foot_map_right: FinFunction::identity(m.right_foot()),
        }
    }

    pub fn is_globular(&self) -> bool {
        self.foot_map_left.is_identity() && self.foot_map_right.is_identity()
    }

    /// Reports the first failing condition, if any.
    pub fn diagnose(&self, src: &Cospan, tgt: &Cospan) -> std::result::Result<(), MapDefect> {
        let boundary = |f: &FinFunction, dom: FinSet, cod: FinSet| f.dom() == dom && f.cod() == cod;
        if !boundary(&self.foot_map_left, src.left_foot(), tgt.left_foot()) {
            return Err(MapDefect::LeftFootMap);
        }
        if !boundary(&self.foot_map_right, src.right_foot(), tgt.right_foot()) {
            return Err(MapDefect::RightFootMap);
        }
        if !boundary(&self.apex_map, src.apex(), tgt.apex()) {
            return Err(MapDefect::ApexMap);
        }
        let commutes = |leg: &FinFunction, foot: &FinFunction, leg_t: &FinFunction| {
            leg.then(&self.apex_map).ok() == foot.then(leg_t).ok()
        };
        if !commutes(&src.in_leg, &self.foot_map_left, &tgt.in_leg) {
            return Err(MapDefect::InputSquare);
        }
        if !commutes(&src.out_leg, &self.foot_map_right, &tgt.out_leg) {
            return Err(MapDefect::OutputSquare);
        }
        Ok(())
    }

    pub fn check(&self, src: &Cospan, tgt: &Cospan) -> bool {
        self.diagnose(src, tgt).is_ok()
    }

    /// Componentwise composite, `self` first.
    pub fn vcompose(&self, other: &CospanMap) -> Result<CospanMap> {
        Ok(CospanMap {
            foot_map_left: self.foot_map_left.then(&other.foot_map_left)?,
            apex_map: self.apex_map.then(&other.apex_map)?,
            foot_map_right: self.foot_map_right.then(&other.foot_map_right)?,
        })
    }
}

pub fn check_cospan_map(cm: &CospanMap, src: &Cospan, tgt: &Cospan) -> bool {
    cm.check(src, tgt)
}

/// A 2-morphism together with its source and target cospans; always valid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Square {
    source: Cospan,
    target: Cospan,
    map: CospanMap,
}

impl Square {
    pub fn new(source: Cospan, target: Cospan, map: CospanMap) -> Result<Self> {
        map.diagnose(&source, &target)
            .map_err(CospanError::InvalidMap)?;
        Ok(Square {
            source,
            target,
            map,
        })
    }

    pub fn identity(m: &Cospan) -> Self {
        Square {
            source: m.clone(),
            target: m.clone(),
            map: CospanMap::identity(m),
        }
    }

    /// `U_f : U_A => U_B`, all three components equal to `f`.
    pub fn unit(f: &FinFunction) -> Self {
        Square {
            source: identity_cospan(f.dom()),
            target: identity_cospan(f.cod()),
            map: CospanMap::new(f.clone(), f.clone(), f.clone()),
        }
    }

    pub fn source(&self) -> &Cospan {
        &self.source
    }

    pub fn target(&self) -> &Cospan {
        &self.target
    }

    pub fn map(&self) -> &CospanMap {
        &self.map
    }

    pub fn is_globular(&self) -> bool {
        self.map.is_globular()
    }

    /// Vertical composite: `self` then `other`.
    pub fn vcompose(&self, other: &Square) -> Result<Square> {
        if self.target != other.source {
            return Err(CospanError::BoundaryMismatch(format!(
                "target {} is not source {}",
                self.target, other.source
            )));
        }
        Ok(Square {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.vcompose(&other.map)?,
        })
    }

    /// Horizontal composite: `self` on the left, `other` on the right. The apex
    /// component is induced by the universal property of the source pushout.
    pub fn hcompose(&self, other: &Square) -> Result<Square> {
        if self.map.foot_map_right != other.map.foot_map_left {
            return Err(CospanError::BoundaryMismatch(
                "middle foot maps of horizontally adjacent squares differ".into(),
            ));
        }
        let src = composite(&self.source, &other.source)?;
        let tgt = composite(&self.target, &other.target)?;
        let u = self.map.apex_map.then(&tgt.pushout.left_leg)?;
        let v = other.map.apex_map.then(&tgt.pushout.right_leg)?;
        let apex_map = src.pushout.universal(&u, &v)?;
        Square::new(
            src.cospan,
            tgt.cospan,
            CospanMap::new(
                self.map.foot_map_left.clone(),
                apex_map,
                other.map.foot_map_right.clone(),
            ),
        )
    }

    /// Side-by-side; every component is a block sum.
    pub fn tensor(&self, other: &Square) -> Square {
        Square {
            source: tensor(&self.source, &other.source),
            target: tensor(&self.target, &other.target),
            map: CospanMap::new(
                self.map.foot_map_left.sum(&other.map.foot_map_left),
                self.map.apex_map.sum(&other.map.apex_map),
                self.map.foot_map_right.sum(&other.map.foot_map_right),
            ),
        }
    }
}

/// `vcompose` on 2-morphisms with boundaries.
pub fn vcompose(a: &Square, b: &Square) -> Result<Square> {
    a.vcompose(b)
}

/// `hcompose_map` on 2-morphisms with boundaries.
pub fn hcompose_map(a: &Square, b: &Square) -> Result<Square> {
    a.hcompose(b)
}

/// A certified invertible globular 2-morphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GlobularIso {
    source: Cospan,
    target: Cospan,
    apex_bijection: FinFunction,
}

impl GlobularIso {
    /// Checks feet, bijectivity and both squares.
    pub fn certify(
        what: &'static str,
        source: Cospan,
        target: Cospan,
        apex_bijection: FinFunction,
    ) -> Result<Self> {
        let fail = |reason: String| CospanError::NotCertified { what, reason };
        if source.left_foot() != target.left_foot() || source.right_foot() != target.right_foot() {
            return Err(fail(format!("feet differ: {source} vs {target}")));
        }
        if !apex_bijection.is_bijection() {
            return Err(fail(format!(
                "apex map {apex_bijection} is not a bijection"
            )));
        }
        let map = CospanMap::new(
            FinFunction::identity(source.left_foot()),
            apex_bijection.clone(),
            FinFunction::identity(source.right_foot()),
        );
        map.diagnose(&source, &target)
            .map_err(|d| fail(d.to_string()))?;
        Ok(GlobularIso {
            source,
            target,
            apex_bijection,
        })
    }

    /// Certifies a pair of candidate maps as mutually inverse isomorphisms.
    fn certify_pair(
        what: &'static str,
        source: Cospan,
        target: Cospan,
        forward: FinFunction,
        backward: &FinFunction,
    ) -> Result<Self> {
        let round_trip = forward
            .then(backward)
            .map(|f| f.is_identity())
            .unwrap_or(false)
            && backward
                .then(&forward)
                .map(|f| f.is_identity())
                .unwrap_or(false);
        if !round_trip {
            return Err(CospanError::NotCertified {
                what,
                reason: format!("induced maps {forward} and {backward} are not mutually inverse"),
            });
        }
        GlobularIso::certify(what, source, target, forward)
    }

    pub fn identity(m: &Cospan) -> Self {
        GlobularIso {
            source: m.clone(),
            target: m.clone(),
            apex_bijection: FinFunction::identity(m.apex()),
        }
    }

    pub fn source(&self) -> &Cospan {
        &self.source
    }

    pub fn target(&self) -> &Cospan {
        &self.target
    }

    pub fn apex_bijection(&self) -> &FinFunction {
        &self.apex_bijection
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.apex_bijection.is_identity()
    }

    pub fn inverse(&self) -> GlobularIso {
        GlobularIso {
            source: self.target.clone(),
            target: self.source.clone(),
            apex_bijection: self.apex_bijection.inverse().expect("certified bijection"),
        }
    }

    /// Vertical composite, `self` first.
    pub fn then(&self, other: &GlobularIso) -> Result<GlobularIso> {
        if self.target != other.source {
            return Err(CospanError::BoundaryMismatch(format!(
                "target {} is not source {}",
                self.target, other.source
            )));
        }
        Ok(GlobularIso {
            source: self.source.clone(),
            target: other.target.clone(),
            apex_bijection: self.apex_bijection.then(&other.apex_bijection)?,
        })
    }

    pub fn tensor(&self, other: &GlobularIso) -> GlobularIso {
        GlobularIso {
            source: tensor(&self.source, &other.source),
            target: tensor(&self.target, &other.target),
            apex_bijection: self.apex_bijection.sum(&other.apex_bijection),
        }
    }

    /// Horizontal composite with another iso (whiskering when one is an identity).
    pub fn hcompose(&self, other: &GlobularIso) -> Result<GlobularIso> {
        let sq = self.to_square().hcompose(&other.to_square())?;
        GlobularIso::certify(
            "horizontal composite",
            sq.source,
            sq.target,
            sq.map.apex_map,
        )
    }

    pub fn to_square(&self) -> Square {
        Square {
            source: self.source.clone(),
            target: self.target.clone(),
            map: CospanMap::new(
                FinFunction::identity(self.source.left_foot()),
                self.apex_bijection.clone(),
                FinFunction::identity(self.source.right_foot()),
            ),
        }
    }
}

/// `α : (m1 ⊙ m2) ⊙ m3 => m1 ⊙ (m2 ⊙ m3)`.
pub fn associator(m1: &Cospan, m2: &Cospan, m3: &Cospan) -> Result<GlobularIso> {
    let c12 = composite(m1, m2)?;
    let left = composite(&c12.cospan, m3)?;
    let c23 = composite(m2, m3)?;
    let right = composite(m1, &c23.cospan)?;

    // (N1 +_Y1 N2) +_Y2 N3  ->  N1 +_Y1 (N2 +_Y2 N3)
    let n2_to_right = c23.pushout.left_leg.then(&right.pushout.right_leg)?;
    let n12_to_right = c12
        .pushout
        .universal(&right.pushout.left_leg, &n2_to_right)?;
    let n3_to_right = c23.pushout.right_leg.then(&right.pushout.right_leg)?;
    let forward = left.pushout.universal(&n12_to_right, &n3_to_right)?;

    let n2_to_left = c12.pushout.right_leg.then(&left.pushout.left_leg)?;
    let n23_to_left = c23
        .pushout
        .universal(&n2_to_left, &left.pushout.right_leg)?;
    let n1_to_left = c12.pushout.left_leg.then(&left.pushout.left_leg)?;
    let backward = right.pushout.universal(&n1_to_left, &n23_to_left)?;

    GlobularIso::certify_pair("associator", left.cospan, right.cospan, forward, &backward)
}

/// `λ : U_X ⊙ m => m`, with `X` the left foot of `m`.
pub fn left_unitor(m: &Cospan) -> Result<GlobularIso> {
    let c = composite(&identity_cospan(m.left_foot()), m)?;
    let forward = c
        .pushout
        .universal(&m.in_leg, &FinFunction::identity(m.apex()))?;
    let backward = c.pushout.right_leg.clone();
    GlobularIso::certify_pair("left unitor", c.cospan, m.clone(), forward, &backward)
}

/// `ρ : m ⊙ U_Y => m`, with `Y` the right foot of `m`.
pub fn right_unitor(m: &Cospan) -> Result<GlobularIso> {
    let c = composite(m, &identity_cospan(m.right_foot()))?;
    let forward = c
        .pushout
        .universal(&FinFunction::identity(m.apex()), &m.out_leg)?;
    let backward = c.pushout.left_leg.clone();
    GlobularIso::certify_pair("right unitor", c.cospan, m.clone(), forward, &backward)
}

/// `𝔵 : (m1 ⊗ n1) ⊙ (m2 ⊗ n2) => (m1 ⊙ m2) ⊗ (n1 ⊙ n2)`.
pub fn interchanger(m1: &Cospan, n1: &Cospan, m2: &Cospan, n2: &Cospan) -> Result<GlobularIso> {
    let cm = composite(m1, m2)?;
    let cn = composite(n1, n2)?;
    let mixed = composite(&tensor(m1, n1), &tensor(m2, n2))?;
    let target = tensor(&cm.cospan, &cn.cospan);

    let forward = mixed.pushout.universal(
        &cm.pushout.left_leg.sum(&cn.pushout.left_leg),
        &cm.pushout.right_leg.sum(&cn.pushout.right_leg),
    )?;

    let (_, m1_in, n1_in) = coproduct(m1.apex(), n1.apex());
    let (_, m2_in, n2_in) = coproduct(m2.apex(), n2.apex());
    let from_m = cm.pushout.universal(
        &m1_in.then(&mixed.pushout.left_leg)?,
        &m2_in.then(&mixed.pushout.right_leg)?,
    )?;
    let from_n = cn.pushout.universal(
        &n1_in.then(&mixed.pushout.left_leg)?,
        &n2_in.then(&mixed.pushout.right_leg)?,
    )?;
    let backward = copair(&from_m, &from_n)?;

    GlobularIso::certify_pair("interchanger", mixed.cospan, target, forward, &backward)
}

/// `𝔲 : U_{A+B} => U_A ⊗ U_B`; the identity, since both sides coincide.
pub fn unit_interchanger(a: FinSet, b: FinSet) -> Result<GlobularIso> {
    let (sum, _, _) = coproduct(a, b);
    let source = identity_cospan(sum);
    let target = tensor(&identity_cospan(a), &identity_cospan(b));
    GlobularIso::certify(
        "unit interchanger",
        source,
        target,
        FinFunction::identity(sum),
    )
}

/// The block swap `A + B -> B + A`.
pub fn braiding_object(a: FinSet, b: FinSet) -> FinFunction {
    let table = (0..a.size())
        .map(|k| b.size() + k)
        .chain(0..b.size())
        .collect();
    FinFunction::from_table_unchecked(FinSet::new(a.size() + b.size()), table)
}

/// The braiding 2-morphism `m ⊗ n => n ⊗ m`.
pub fn braiding_cell(m: &Cospan, n: &Cospan) -> Square {
    Square {
        source: tensor(m, n),
        target: tensor(n, m),
        map: CospanMap::new(
            braiding_object(m.left_foot(), n.left_foot()),
            braiding_object(m.apex(), n.apex()),
            braiding_object(m.right_foot(), n.right_foot()),
        ),
    }
}

/// The two structure 2-morphisms of the companion of `f: A -> B`:
/// `(companion => U_B)` with vertical sides `(f, id)`, and
/// `(U_A => companion)` with vertical sides `(id, f)`.
pub fn companion_cells(f: &FinFunction) -> (Square, Square) {
    let (a, b) = (f.dom(), f.cod());
    let hat = companion(f);
    let to_unit = Square {
        source: hat.clone(),
        target: identity_cospan(b),
        map: CospanMap::new(
            f.clone(),
            FinFunction::identity(b),
            FinFunction::identity(b),
        ),
    };
    let from_unit = Square {
        source: identity_cospan(a),
        target: hat,
        map: CospanMap::new(FinFunction::identity(a), f.clone(), f.clone()),
    };
    (to_unit, from_unit)
}

/// The conjoint counterparts: `(conjoint => U_B)` with vertical sides
/// `(id, f)`, and `(U_A => conjoint)` with vertical sides `(f, id)`.
pub fn conjoint_cells(f: &FinFunction) -> (Square, Square) {
    let (a, b) = (f.dom(), f.cod());
    let check = conjoint(f);
    let to_unit = Square {
        source: check.clone(),
        target: identity_cospan(b),
        map: CospanMap::new(
            FinFunction::identity(b),
            FinFunction::identity(b),
            f.clone(),
        ),
    };
    let from_unit = Square {
        source: identity_cospan(a),
        target: check,
        map: CospanMap::new(f.clone(), f.clone(), FinFunction::identity(a)),
    };
    (to_unit, from_unit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fun(cod: usize, table: &[usize]) -> FinFunction {
        FinFunction::new(FinSet::new(cod), table.to_vec()).unwrap()
    }

    /// One input on A, both outputs on B.
    fn first_circuit() -> Cospan {
        Cospan::from_tables(3, &[0], &[1, 1]).unwrap()
    }

    /// The second: inputs on A' and C', outputs on B' and C'.
    fn second_circuit() -> Cospan {
        Cospan::from_tables(3, &[0, 2], &[1, 2]).unwrap()
    }

    #[test]
    fn circuit_gluing() {
        let c = hcompose(&first_circuit(), &second_circuit()).unwrap();
        assert_eq!(c.apex().size(), 4);
        assert_eq!(c.in_leg().table(), &[0]);
        assert_eq!(c.out_leg().table(), &[3, 1]);
    }

    #[test]
    fn foot_mismatch() {
        let err = hcompose(&second_circuit(), &first_circuit()).unwrap_err();
        assert_eq!(
            err,
            CospanError::FootMismatch {
                left: FinSet::new(2),
                right: FinSet::new(1)
            }
        );
    }

    #[test]
    fn identity_cospans() {
        let u0 = identity_cospan(FinSet::EMPTY);
        assert_eq!(u0, Cospan::empty());
        assert_eq!(u0.apex(), FinSet::EMPTY);
        let u2 = identity_cospan(FinSet::new(2));
        assert_eq!(u2.in_leg().table(), &[0, 1]);
        assert_eq!(u2.out_leg().table(), &[0, 1]);
        let uu = left_unitor(&u2).unwrap();
        assert_eq!(uu.source(), &hcompose(&u2, &u2).unwrap());
        assert_eq!(uu.target(), &u2);
    }

    #[test]
    fn identity_is_unit_up_to_unitor() {
        let n = second_circuit();
        let lam = left_unitor(&n).unwrap();
        assert_eq!(
            lam.source(),
            &hcompose(&identity_cospan(FinSet::new(2)), &n).unwrap()
        );
        assert_eq!(lam.target(), &n);
    }

    #[test]
    fn unitors_agree_on_identities() {
        for size in 0..4 {
            let u = identity_cospan(FinSet::new(size));
            assert_eq!(left_unitor(&u).unwrap(), right_unitor(&u).unwrap());
        }
    }

    #[test]
    fn tensor_examples() {
        let first = Cospan::from_tables(3, &[0], &[1]).unwrap();
        let t = tensor(&first, &second_circuit());
        assert_eq!(
            (t.left_foot().size(), t.right_foot().size(), t.apex().size()),
            (3, 3, 6)
        );
        assert_eq!(t.in_leg().table(), &[0, 3, 5]);
        assert_eq!(tensor(&Cospan::empty(), &first), first);
        assert_eq!(tensor(&first, &Cospan::empty()), first);
    }

    #[test]
    fn unit_interchanger_is_identity() {
        let u = unit_interchanger(FinSet::new(1), FinSet::new(2)).unwrap();
        assert_eq!(u.apex_bijection().table(), &[0, 1, 2]);
        assert!(unit_interchanger(FinSet::EMPTY, FinSet::EMPTY)
            .unwrap()
            .is_identity());
    }

    #[test]
    fn interchanger_on_identities() {
        let a = identity_cospan(FinSet::new(2));
        let b = identity_cospan(FinSet::new(1));
        assert!(interchanger(&a, &b, &a, &b)
            .unwrap()
            .apex_bijection()
            .is_identity());
        let m = first_circuit();
        let n = second_circuit();
        let e = Cospan::empty();
        assert!(interchanger(&m, &e, &n, &e).unwrap().is_identity());
    }

    #[test]
    fn braiding() {
        assert_eq!(
            braiding_object(FinSet::new(1), FinSet::new(2)).table(),
            &[2, 0, 1]
        );
        let swap = braiding_object(FinSet::new(2), FinSet::new(3));
        let back = braiding_object(FinSet::new(3), FinSet::new(2));
        assert!(swap.then(&back).unwrap().is_identity());

        let m = first_circuit();
        let cell = braiding_cell(&m, &Cospan::empty());
        assert!(cell.map().foot_map_left.is_identity());
        assert!(cell.map().apex_map.is_identity());
        assert!(cell.map().foot_map_right.is_identity());
        let cell = braiding_cell(&m, &m);
        assert_eq!(cell.map().apex_map, braiding_object(m.apex(), m.apex()));
        assert!(cell.map().check(cell.source(), cell.target()));
    }

    #[test]
    fn companions() {
        let id = FinFunction::identity(FinSet::new(2));
        assert_eq!(companion(&id), identity_cospan(FinSet::new(2)));
        assert_eq!(conjoint(&id), identity_cospan(FinSet::new(2)));
        let f = fun(1, &[0, 0]);
        let c = companion(&f);
        assert_eq!(
            (c.in_leg().table(), c.out_leg().table()),
            (&[0, 0][..], &[0][..])
        );
        let (a, b) = companion_cells(&f);
        assert!(a.map().check(a.source(), a.target()));
        assert!(b.map().check(b.source(), b.target()));
        let (a, b) = conjoint_cells(&f);
        assert!(a.map().check(a.source(), a.target()));
        assert!(b.map().check(b.source(), b.target()));
    }

    #[test]
    fn relabeling_two_morphism() {
        let m = first_circuit();
        let h = fun(4, &[2, 0, 3]);
        let tgt = m.relabel(&h).unwrap();
        let map = CospanMap::new(
            FinFunction::identity(m.left_foot()),
            h.clone(),
            FinFunction::identity(m.right_foot()),
        );
        assert!(check_cospan_map(&map, &m, &tgt));
        assert!(check_cospan_map(&CospanMap::identity(&m), &m, &m));

        let mut bad = h.table().to_vec();
        bad[1] = 1;
        let broken = CospanMap::new(
            map.foot_map_left.clone(),
            fun(4, &bad),
            map.foot_map_right.clone(),
        );
        assert_eq!(broken.diagnose(&m, &tgt), Err(MapDefect::OutputSquare));
        bad[0] = 1;
        let broken = CospanMap::new(
            map.foot_map_left.clone(),
            fun(4, &bad),
            map.foot_map_right.clone(),
        );
        assert_eq!(broken.diagnose(&m, &tgt), Err(MapDefect::InputSquare));
    }

    #[test]
    fn identity_squares() {
        let m = first_circuit();
        let n = second_circuit();
        let id = Square::identity(&m);
        let h = fun(4, &[2, 0, 3]);
        let sq = Square::new(
            m.clone(),
            m.relabel(&h).unwrap(),
            CospanMap::new(
                FinFunction::identity(m.left_foot()),
                h,
                FinFunction::identity(m.right_foot()),
            ),
        )
        .unwrap();
        assert_eq!(id.vcompose(&sq).unwrap(), sq);
        assert_eq!(sq.vcompose(&Square::identity(sq.target())).unwrap(), sq);

        let both = Square::identity(&m)
            .hcompose(&Square::identity(&n))
            .unwrap();
        assert_eq!(both, Square::identity(&hcompose(&m, &n).unwrap()));
    }

    #[test]
    fn associator_on_circuits() {
        let m = first_circuit();
        let n = second_circuit();
        let back = Cospan::from_tables(2, &[0, 1], &[1]).unwrap();
        let a = associator(&m, &n, &back).unwrap();
        assert!(a.to_square().is_globular());
        assert_eq!(
            a.target(),
            &hcompose(&m, &hcompose(&n, &back).unwrap()).unwrap()
        );
    }

    #[test]
    fn certify_rejects_non_commuting_tables() {
        let m = first_circuit();
        let bad = GlobularIso::certify("test", m.clone(), m.clone(), fun(3, &[1, 0, 2]));
        assert!(matches!(bad, Err(CospanError::NotCertified { .. })));
    }
}
