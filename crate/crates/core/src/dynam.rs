//! Polynomial vector fields as decorations: open dynamical systems.
//!
//! A [`PolyVectorField`] on a finite set `S` assigns to each `σ ∈ S` a
//! polynomial in the variables `x_τ, τ ∈ S` with exact rational coefficients.
//! Transport along `f: S -> S'` pulls the variables back along `f` and pushes
//! components forward by summing over fibres:
//!
//! ```text
//! (f·v)_σ' = Σ_{σ : f(σ) = σ'} v_σ[x_τ := x_f(τ)]
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decoration::{DecoratedCospan, Decoration, DecorationError};
use crate::finset::{coproduct, FinFunction, FinSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamError {
    #[error("index mismatch: polynomial has {found} variables, expected {expected}")]
    IndexMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("step size must be positive")]
    NonPositiveStep,
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

impl From<DynamError> for DecorationError {
    fn from(e: DynamError) -> Self {
        match e {
            DynamError::IndexMismatch { expected, found }
            | DynamError::DimensionMismatch { expected, found } => {
                DecorationError::DomainMismatch { expected, found }
            }
            other => DecorationError::Invalid(other.to_string()),
        }
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over `Q` in `nvars` variables. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The coordinate `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(
            i < nvars,
            "variable x{i} out of range for {nvars} variables"
        );
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial(exps), BigRational::one());
        p
    }

    /// Builds from `(coefficient, exponents)` pairs; like terms are merged.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (BigRational, Vec<u32>)>,
    ) -> Result<Self, DynamError> {
        let mut p = Polynomial::zero(nvars);
        for (c, exps) in terms {
            if exps.len() != nvars {
                return Err(DynamError::IndexMismatch {
                    expected: nvars,
                    found: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Renames `x_τ` to `x_f(τ)`, giving a polynomial in `f.cod()` variables.
    pub fn substitute(&self, f: &FinFunction) -> Result<Polynomial, DynamError> {
        if f.dom().size() != self.nvars {
            return Err(DynamError::IndexMismatch {
                expected: f.dom().size(),
                found: self.nvars,
            });
        }
        let mut out = Polynomial::zero(f.cod().size());
        for (m, c) in &self.terms {
            let mut exps = vec![0; f.cod().size()];
            for (tau, &e) in m.0.iter().enumerate() {
                exps[f.apply(tau)] += e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, DynamError> {
        if point.len() != self.nvars {
            return Err(DynamError::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    fn check_same_ring(&self, other: &Polynomial) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials live in different rings"
        );
    }

    /// Parses the text form, e.g. `x0^2 - 1/2*x0*x1 + 3`, in `nvars` variables.
    pub fn parse(input: &str, nvars: usize) -> Result<Polynomial, DynamError> {
        Parser {
            input,
            chars: input.char_indices().peekable(),
            nvars,
        }
        .polynomial()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_same_ring(rhs);
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

fn write_monomial(out: &mut String, m: &Monomial) {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        let _ = write!(out, "x{i}");
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
}

impl fmt::Display for Polynomial {
    /// Terms in descending graded-lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let magnitude = c.abs();
            match (k, c.is_negative()) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if m.is_one() {
                let _ = write!(out, "{magnitude}");
            } else {
                if !magnitude.is_one() {
                    let _ = write!(out, "{magnitude}*");
                }
                write_monomial(&mut out, m);
            }
        }
        f.write_str(&out)
    }
}

struct Parser<'a> {
    input: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, reason: impl Into<String>) -> DynamError {
        DynamError::Parse {
            input: self.input.to_owned(),
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some((_, c)) = self.chars.next_if(|(_, c)| c.is_ascii_digit()) {
            s.push(c);
        }
        s
    }

    fn number(&mut self) -> Result<BigRational, DynamError> {
        let int = self.digits();
        let mut frac = String::new();
        if self.chars.next_if(|(_, c)| *c == '.').is_some() {
            frac = self.digits();
            if frac.is_empty() {
                return Err(self.error("expected digits after '.'"));
            }
        }
        if int.is_empty() {
            return Err(self.error("expected a number"));
        }
        let mantissa: BigInt = format!("{int}{frac}")
            .parse()
            .map_err(|_| self.error("bad number"))?;
        Ok(BigRational::new(
            mantissa,
            BigInt::from(10u32).pow(frac.len() as u32),
        ))
    }

    fn factor(&mut self) -> Result<Polynomial, DynamError> {
        self.skip_ws();
        match self.chars.peek().map(|&(_, c)| c) {
            Some('x') => {
                self.chars.next();
                let idx = self.digits();
                let i: usize = idx
                    .parse()
                    .map_err(|_| self.error("expected a variable index after 'x'"))?;
                if i >= self.nvars {
                    return Err(self.error(format!(
                        "variable x{i} out of range for {} variables",
                        self.nvars
                    )));
                }
                self.skip_ws();
                let mut exp = 1u32;
                if self.chars.next_if(|(_, c)| *c == '^').is_some() {
                    self.skip_ws();
                    exp = self
                        .digits()
                        .parse()
                        .map_err(|_| self.error("expected an exponent"))?;
                }
                let mut exps = vec![0; self.nvars];
                exps[i] = exp;
                let mut p = Polynomial::zero(self.nvars);
                p.add_term(Monomial(exps), BigRational::one());
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut q = self.number()?;
                self.skip_ws();
                if self.chars.next_if(|(_, c)| *c == '/').is_some() {
                    self.skip_ws();
                    let den = self.number()?;
                    if den.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    q /= den;
                }
                Ok(Polynomial::constant(self.nvars, q))
            }
            Some(c) => Err(self.error(format!("unexpected character {c:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn term(&mut self) -> Result<Polynomial, DynamError> {
        let mut p = self.factor()?;
        loop {
            self.skip_ws();
            if self.chars.next_if(|(_, c)| *c == '*').is_none() {
                return Ok(p);
            }
            p = &p * &self.factor()?;
        }
    }

    fn polynomial(mut self) -> Result<Polynomial, DynamError> {
        self.skip_ws();
        let negate = self.chars.next_if(|(_, c)| *c == '-').is_some();
        let first = self.term()?;
        let mut p = if negate { -&first } else { first };
        loop {
            self.skip_ws();
            match self.chars.next() {
                None => return Ok(p),
                Some((_, '+')) => p = &p + &self.term()?,
                Some((_, '-')) => p = &p + &-&self.term()?,
                Some((pos, c)) => return Err(self.error(format!("unexpected {c:?} at byte {pos}"))),
            }
        }
    }
}

/// A polynomial vector field on `R^S`: one component per element of `S`, each
/// a polynomial in `|S|` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyVectorField {
    components: Vec<Polynomial>,
}

impl PolyVectorField {
    pub fn new(components: Vec<Polynomial>) -> Result<Self, DynamError> {
        let n = components.len();
        if let Some(p) = components.iter().find(|p| p.nvars != n) {
            return Err(DynamError::IndexMismatch {
                expected: n,
                found: p.nvars,
            });
        }
        Ok(PolyVectorField { components })
    }

    pub fn zero(space: FinSet) -> Self {
        PolyVectorField {
            components: vec![Polynomial::zero(space.size()); space.size()],
        }
    }

    /// Parses one text polynomial per component.
    pub fn parse<S: AsRef<str>>(components: &[S]) -> Result<Self, DynamError> {
        let n = components.len();
        let parsed = components
            .iter()
            .map(|s| Polynomial::parse(s.as_ref(), n))
            .collect::<Result<Vec<_>, _>>()?;
        PolyVectorField::new(parsed)
    }

    pub fn space(&self) -> FinSet {
        FinSet::new(self.components.len())
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }
}

impl Add for &PolyVectorField {
    type Output = PolyVectorField;

    fn add(self, rhs: &PolyVectorField) -> PolyVectorField {
        assert_eq!(
            self.space(),
            rhs.space(),
            "vector fields on different spaces"
        );
        PolyVectorField {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl fmt::Display for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, p) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for PolyVectorField {
    type Err = DynamError;

    /// Components separated by `;`, e.g. `x1; -x0`. The empty string is the
    /// field on the empty set.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Ok(vf_unit());
        }
        let parts: Vec<&str> = s.split(';').collect();
        PolyVectorField::parse(&parts)
    }
}

/// Pushforward of `v` along `f`, conjugated by pullback of coordinates.
pub fn vf_transport(f: &FinFunction, v: &PolyVectorField) -> Result<PolyVectorField, DynamError> {
    if f.dom() != v.space() {
        return Err(DynamError::IndexMismatch {
            expected: f.dom().size(),
            found: v.space().size(),
        });
    }
    let mut out = PolyVectorField::zero(f.cod());
    for (sigma, component) in v.components.iter().enumerate() {
        let moved = component.substitute(f)?;
        let slot = &mut out.components[f.apply(sigma)];
        *slot = &*slot + &moved;
    }
    Ok(out)
}

/// The field on `S + S'` acting as `v` on the first block and `w` on the second.
pub fn vf_combine(v: &PolyVectorField, w: &PolyVectorField) -> PolyVectorField {
    let (_, left, right) = coproduct(v.space(), w.space());
    let moved = |p: &Polynomial, inj: &FinFunction| p.substitute(inj).expect("injection matches");
    let components = v
        .components
        .iter()
        .map(|p| moved(p, &left))
        .chain(w.components.iter().map(|p| moved(p, &right)))
        .collect();
    PolyVectorField { components }
}

/// The field on the empty set.
pub fn vf_unit() -> PolyVectorField {
    PolyVectorField {
        components: Vec::new(),
    }
}

pub fn evaluate(
    v: &PolyVectorField,
    point: &[BigRational],
) -> Result<Vec<BigRational>, DynamError> {
    if point.len() != v.space().size() {
        return Err(DynamError::DimensionMismatch {
            expected: v.space().size(),
            found: point.len(),
        });
    }
    v.components.iter().map(|p| p.evaluate(point)).collect()
}

/// Explicit Euler steps `x_{k+1} = x_k + step * v(x_k)` in exact arithmetic.
/// Returns `n + 1` points including the start.
pub fn euler_integrate(
    v: &PolyVectorField,
    start: &[BigRational],
    step: &BigRational,
    n: usize,
) -> Result<Vec<Vec<BigRational>>, DynamError> {
    if !step.is_positive() {
        return Err(DynamError::NonPositiveStep);
    }
    let mut trajectory = Vec::with_capacity(n + 1);
    let mut x = start.to_vec();
    evaluate(v, &x)?;
    for _ in 0..n {
        let dx = evaluate(v, &x)?;
        let next = x.iter().zip(&dx).map(|(xi, di)| xi + step * di).collect();
        trajectory.push(std::mem::replace(&mut x, next));
    }
    trajectory.push(x);
    Ok(trajectory)
}

/// Trajectory as CSV with header `step,x0,..`. Values are exact rationals,
/// or `f64` approximations when `as_float` is set.
pub fn trajectory_csv(trajectory: &[Vec<BigRational>], as_float: bool) -> String {
    let dim = trajectory.first().map_or(0, Vec::len);
    let mut out = String::from("step");
    for i in 0..dim {
        let _ = write!(out, ",x{i}");
    }
    out.push('\n');
    for (k, point) in trajectory.iter().enumerate() {
        let _ = write!(out, "{k}");
        for x in point {
            if as_float {
                let approx = num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN);
                let _ = write!(out, ",{approx}");
            } else {
                let _ = write!(out, ",{x}");
            }
        }
        out.push('\n');
    }
    out
}

/// Parses a rational written as a decimal (`0.25`) or fraction (`1/4`).
pub fn parse_rational(s: &str) -> Result<BigRational, DynamError> {
    let p = Polynomial::parse(s.trim().trim_start_matches('-'), 0)?;
    let value = p
        .terms()
        .next()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(BigRational::zero);
    Ok(if s.trim().starts_with('-') {
        -value
    } else {
        value
    })
}

/// The vector field decoration backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct VectorFields;

#[derive(Serialize, Deserialize)]
struct FieldPayload {
    components: Vec<String>,
}

impl Decoration for VectorFields {
    type Value = PolyVectorField;

    fn name(&self) -> &'static str {
        "vectfield"
    }

    fn carrier(&self, d: &PolyVectorField) -> FinSet {
        d.space()
    }

    fn transport(
        &self,
        f: &FinFunction,
        d: &PolyVectorField,
    ) -> Result<PolyVectorField, DecorationError> {
        Ok(vf_transport(f, d)?)
    }

    fn combine(&self, a: &PolyVectorField, b: &PolyVectorField) -> PolyVectorField {
        vf_combine(a, b)
    }

    fn unit(&self) -> PolyVectorField {
        vf_unit()
    }

    fn to_json(&self, d: &PolyVectorField) -> serde_json::Value {
        let components = d.components.iter().map(ToString::to_string).collect();
        serde_json::to_value(FieldPayload { components }).expect("plain data")
    }

    fn from_json(
        &self,
        v: &serde_json::Value,
        carrier: FinSet,
    ) -> Result<PolyVectorField, DecorationError> {
        let payload: FieldPayload = serde_json::from_value(v.clone())
            .map_err(|e| DecorationError::Invalid(e.to_string()))?;
        if payload.components.len() != carrier.size() {
            return Err(DecorationError::DomainMismatch {
                expected: carrier.size(),
                found: payload.components.len(),
            });
        }
        Ok(PolyVectorField::parse(&payload.components)?)
    }
}

pub type OpenSystem = DecoratedCospan<PolyVectorField>;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn field(parts: &[&str]) -> PolyVectorField {
        PolyVectorField::parse(parts).unwrap()
    }

    fn fun(cod: usize, table: &[usize]) -> FinFunction {
        FinFunction::new(FinSet::new(cod), table.to_vec()).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let p = Polynomial::parse("3 + x0*x1 - 1/2*x0^2 + 0.25*x1", 2).unwrap();
        assert_eq!(p.to_string(), "-1/2*x0^2 + x0*x1 + 1/4*x1 + 3");
        assert_eq!(Polynomial::parse(&p.to_string(), 2).unwrap(), p);
        assert_eq!(Polynomial::parse("x0 - x0", 1).unwrap().to_string(), "0");
        assert_eq!(Polynomial::parse("-x0", 1).unwrap().to_string(), "-x0");
        assert_eq!(Polynomial::parse("2*x0*3", 1).unwrap().to_string(), "6*x0");
        assert!(Polynomial::parse("x2", 2).is_err());
        assert!(Polynomial::parse("x0 +", 1).is_err());
        assert!(Polynomial::parse("1/0", 0).is_err());
        assert!(Polynomial::parse("y0", 1).is_err());
    }

    #[test]
    fn graded_lex_order() {
        let p = Polynomial::parse("x1 + x0 + x1^2 + x0*x1 + x0^2 + 1", 2).unwrap();
        assert_eq!(p.to_string(), "x0^2 + x0*x1 + x1^2 + x0 + x1 + 1");
    }

    #[test]
    fn substitution_examples() {
        let p = Polynomial::parse("x0*x1", 2).unwrap();
        assert_eq!(
            p.substitute(&FinFunction::identity(FinSet::new(2)))
                .unwrap(),
            p
        );
        assert_eq!(
            p.substitute(&fun(1, &[0, 0])).unwrap(),
            Polynomial::parse("x0^2", 1).unwrap()
        );
        assert!(p.substitute(&fun(1, &[0])).is_err());
    }

    #[test]
    fn transport_collapse() {
        let v = field(&["x1", "x0"]);
        let moved = vf_transport(&fun(1, &[0, 0]), &v).unwrap();
        assert_eq!(moved, field(&["2*x0"]));
        assert_eq!(
            vf_transport(&FinFunction::identity(v.space()), &v).unwrap(),
            v
        );
        assert!(vf_transport(&fun(1, &[0]), &v).is_err());
    }

    #[test]
    fn transport_collapse_numeric_oracle() {
        // evaluate both sides at sampled rational points c over the target set
        let v = field(&["x1", "x0"]);
        let f = fun(1, &[0, 0]);
        let moved = vf_transport(&f, &v).unwrap();
        for c in [q(0, 1), q(3, 7), q(-5, 2), q(11, 1)] {
            let pulled = vec![c.clone(), c.clone()];
            let vals = evaluate(&v, &pulled).unwrap();
            let pushed = &vals[0] + &vals[1];
            assert_eq!(evaluate(&moved, &[c]).unwrap(), vec![pushed]);
        }
    }

    #[test]
    fn combine_examples() {
        let a = field(&["x0^2"]);
        let b = field(&["3*x0"]);
        assert_eq!(vf_combine(&a, &b), field(&["x0^2", "3*x1"]));
        assert_eq!(vf_combine(&a, &vf_unit()), a);
        assert_eq!(vf_combine(&vf_unit(), &a), a);
        assert_eq!(vf_unit().space(), FinSet::EMPTY);
        assert_eq!(
            vf_transport(&FinFunction::initial(FinSet::new(2)), &vf_unit()).unwrap(),
            PolyVectorField::zero(FinSet::new(2))
        );
    }

    #[test]
    fn evaluation() {
        let v = field(&["x1", "x0"]);
        assert_eq!(
            evaluate(&v, &[q(2, 1), q(5, 1)]).unwrap(),
            vec![q(5, 1), q(2, 1)]
        );
        let z = PolyVectorField::zero(FinSet::new(3));
        assert_eq!(
            evaluate(&z, &[q(1, 2), q(2, 1), q(-3, 1)]).unwrap(),
            vec![q(0, 1); 3]
        );
        assert_eq!(
            evaluate(&v, &[q(1, 1)]),
            Err(DynamError::DimensionMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn euler_steps() {
        let zero = PolyVectorField::zero(FinSet::new(2));
        let traj = euler_integrate(&zero, &[q(1, 1), q(2, 1)], &q(1, 10), 3).unwrap();
        assert!(traj.iter().all(|p| p == &vec![q(1, 1), q(2, 1)]));

        let constant = field(&["1"]);
        let traj = euler_integrate(&constant, &[q(0, 1)], &q(1, 2), 4).unwrap();
        let xs: Vec<_> = traj.into_iter().map(|p| p[0].clone()).collect();
        assert_eq!(xs, vec![q(0, 1), q(1, 2), q(1, 1), q(3, 2), q(2, 1)]);

        // Euler on x' = x is (1 + h)^k
        let growth = field(&["x0"]);
        let h = q(1, 3);
        let traj = euler_integrate(&growth, &[q(1, 1)], &h, 6).unwrap();
        for (k, p) in traj.iter().enumerate() {
            assert_eq!(p[0], num_traits::pow(q(4, 3), k));
        }

        assert_eq!(
            euler_integrate(&growth, &[q(1, 1)], &q(0, 1), 1),
            Err(DynamError::NonPositiveStep)
        );
        assert!(euler_integrate(&growth, &[], &h, 1).is_err());
    }

    #[test]
    fn csv_output() {
        let traj = euler_integrate(&field(&["1"]), &[q(0, 1)], &q(1, 2), 2).unwrap();
        assert_eq!(trajectory_csv(&traj, false), "step,x0\n0,0\n1,1/2\n2,1\n");
        assert_eq!(trajectory_csv(&traj, true), "step,x0\n0,0\n1,0.5\n2,1\n");
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/4").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert!(parse_rational("x").is_err());
    }

    fn arb_poly(nvars: usize, max_degree: u32) -> impl Strategy<Value = Polynomial> {
        let term = (
            -5i64..=5,
            1i64..=3,
            prop::collection::vec(0..=max_degree, nvars),
        );
        prop::collection::vec(term, 0..4).prop_map(move |terms| {
            let terms = terms.into_iter().map(|(n, d, mut exps)| {
                // trim to the degree bound
                while exps.iter().sum::<u32>() > max_degree {
                    let i = exps.iter().position(|&e| e > 0).unwrap();
                    exps[i] -= 1;
                }
                (q(n, d), exps)
            });
            Polynomial::from_terms(nvars, terms).unwrap()
        })
    }

    fn arb_field(n: usize) -> impl Strategy<Value = PolyVectorField> {
        prop::collection::vec(arb_poly(n, 3), n).prop_map(|c| PolyVectorField::new(c).unwrap())
    }

    fn arb_map(dom: usize, cod: usize) -> impl Strategy<Value = FinFunction> {
        prop::collection::vec(0..cod, dom)
            .prop_map(move |t| FinFunction::new(FinSet::new(cod), t).unwrap())
    }

    proptest! {
        #[test]
        fn text_round_trip(p in arb_poly(3, 3)) {
            prop_assert_eq!(Polynomial::parse(&p.to_string(), 3).unwrap(), p);
        }

        #[test]
        fn transport_is_linear_and_degree_bounded(
            (v, w, f) in (1usize..4, 1usize..4).prop_flat_map(|(n, m)| (arb_field(n), arb_field(n), arb_map(n, m)))
        ) {
            let sum = vf_transport(&f, &(&v + &w)).unwrap();
            let parts = &vf_transport(&f, &v).unwrap() + &vf_transport(&f, &w).unwrap();
            prop_assert_eq!(sum, parts);
            prop_assert!(vf_transport(&f, &v).unwrap().degree() <= v.degree());
        }

        #[test]
        fn combine_evaluates_blockwise(
            (v, w) in (0usize..3, 0usize..3).prop_flat_map(|(n, m)| (arb_field(n), arb_field(m))),
            seed in prop::collection::vec(-4i64..=4, 6),
        ) {
            let n = v.space().size();
            let m = w.space().size();
            let point: Vec<_> = seed.iter().take(n + m).map(|&k| q(k, 2)).collect();
            prop_assume!(point.len() == n + m);
            let mut expected = evaluate(&v, &point[..n]).unwrap();
            expected.extend(evaluate(&w, &point[n..]).unwrap());
            prop_assert_eq!(evaluate(&vf_combine(&v, &w), &point).unwrap(), expected);
        }
    }
}
