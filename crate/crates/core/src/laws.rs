//! Executable law catalog.
//!
//! Every structural claim about cospans and decorated cospans is checked here
//! on concrete instances: randomly generated from a seed, or enumerated
//! exhaustively where the state space is small. Each case draws from its own
//! random stream (seed, case index), so any failure can be replayed alone with
//! [`replay`].

use std::fmt::{self, Debug, Display, Write as _};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuits::{Circuits, Edge, LGraph};
use crate::cospan::{
    associator, braiding_cell, braiding_object, companion_cells, conjoint_cells, hcompose,
    identity_cospan, interchanger, left_unitor, right_unitor, tensor, unit_interchanger, Cospan,
    CospanMap, GlobularIso, Square,
};
use crate::decoration::{
    check_decorated_square, dassociator, dcompanion, dcompose, dconjoint, didentity, dinterchanger,
    dleft_unitor, dright_unitor, dtensor, trivial_decoration, DecoratedCospan, Decoration,
};
use crate::dynam::{evaluate, vf_transport, DynamError, PolyVectorField, Polynomial, VectorFields};
use crate::finset::{copair, coproduct, pushout, FinFunction, FinSet};

/// Parameters of a randomized law run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseGenerator {
    pub seed: u64,
    pub max_set_size: usize,
    pub max_edges: usize,
    pub max_degree: u32,
    pub case_count: usize,
}

impl Default for CaseGenerator {
    fn default() -> Self {
        CaseGenerator {
            seed: 0x5EED_CAFE,
            max_set_size: 4,
            max_edges: 5,
            max_degree: 3,
            case_count: 1000,
        }
    }
}

impl CaseGenerator {
    pub fn new(seed: u64) -> Self {
        CaseGenerator {
            seed,
            ..Default::default()
        }
    }

    pub fn with_cases(mut self, n: usize) -> Self {
        self.case_count = n;
        self
    }

    pub fn with_max_set_size(mut self, n: usize) -> Self {
        self.max_set_size = n;
        self
    }

    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }

    /// The sampler for case `index`; independent of every other case.
    pub fn sampler(&self, index: usize) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        Sampler {
            rng,
            max_set: self.max_set_size,
            max_edges: self.max_edges,
            max_degree: self.max_degree,
        }
    }
}

/// Random finite-set data for one case.
pub struct Sampler {
    rng: ChaCha8Rng,
    max_set: usize,
    max_edges: usize,
    max_degree: u32,
}

impl Sampler {
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn set(&mut self) -> FinSet {
        FinSet::new(self.rng.gen_range(0..=self.max_set))
    }

    /// A set that can receive maps from `from`: nonempty whenever `from` is.
    fn set_receiving(&mut self, from: &[FinSet]) -> FinSet {
        let lo = usize::from(from.iter().any(|s| !s.is_empty()));
        FinSet::new(self.rng.gen_range(lo..=self.max_set.max(lo)))
    }

    /// Uniform random function; `cod` must be nonempty unless `dom` is empty.
    pub fn function(&mut self, dom: FinSet, cod: FinSet) -> FinFunction {
        let table = dom
            .elements()
            .map(|_| self.rng.gen_range(0..cod.size()))
            .collect();
        FinFunction::new(cod, table).expect("entries drawn in range")
    }

    pub fn cospan(&mut self, left: FinSet, right: FinSet) -> Cospan {
        let apex = self.set_receiving(&[left, right]);
        let i = self.function(left, apex);
        let o = self.function(right, apex);
        Cospan::new(i, o).expect("shared apex")
    }

    /// `len` horizontally composable cospans.
    pub fn chain(&mut self, len: usize) -> Vec<Cospan> {
        let mut foot = self.set();
        (0..len)
            .map(|_| {
                let next = self.set();
                let c = self.cospan(foot, next);
                foot = next;
                c
            })
            .collect()
    }

    /// A random 2-morphism out of `src`. When `left_map` is given it becomes the
    /// left foot component, so the result can sit to the right of a square
    /// whose right foot component is `left_map`.
    pub fn square_from(&mut self, src: &Cospan, left_map: Option<&FinFunction>) -> Square {
        let a = match left_map {
            Some(a) => a.clone(),
            None => {
                let foot = self.set_receiving(&[src.left_foot()]);
                self.function(src.left_foot(), foot)
            }
        };
        let foot = self.set_receiving(&[src.right_foot()]);
        let c = self.function(src.right_foot(), foot);
        self.square_with_feet(src, a, c)
    }

    pub fn globular_from(&mut self, src: &Cospan) -> Square {
        let a = FinFunction::identity(src.left_foot());
        let c = FinFunction::identity(src.right_foot());
        self.square_with_feet(src, a, c)
    }

    fn square_with_feet(&mut self, src: &Cospan, a: FinFunction, c: FinFunction) -> Square {
        // freest target over (a, c): glue the new feet onto the old apex
        let legs = copair(src.in_leg(), src.out_leg()).expect("shared apex");
        let p = pushout(&legs, &a.sum(&c)).expect("shared domain");
        let (_, inj_x, inj_y) = coproduct(a.cod(), c.cod());
        let in_leg = inj_x.then(&p.right_leg).expect("composable");
        let out_leg = inj_y.then(&p.right_leg).expect("composable");
        let mut h = p.left_leg.clone();
        let (mut in_leg, mut out_leg) = (in_leg, out_leg);
        if self.rng.gen_bool(0.5) {
            // then an arbitrary further map out of the apex
            let apex = self.set_receiving(&[p.apex]);
            let q = self.function(p.apex, apex);
            h = h.then(&q).expect("composable");
            in_leg = in_leg.then(&q).expect("composable");
            out_leg = out_leg.then(&q).expect("composable");
        }
        let target = Cospan::new(in_leg, out_leg).expect("shared apex");
        Square::new(src.clone(), target, CospanMap::new(a, h, c)).expect("commutes by construction")
    }
}

/// Backends that can produce random decorations for law checking.
pub trait Sample: Decoration {
    fn sample(&self, s: &mut Sampler, on: FinSet) -> Self::Value;

    fn decorated(&self, s: &mut Sampler, cospan: Cospan) -> DecoratedCospan<Self::Value>
    where
        Self: Sized,
    {
        let d = self.sample(s, cospan.apex());
        DecoratedCospan::new(self, cospan, d).expect("sampled on the apex")
    }
}

const LABELS: [&str; 8] = ["0.2", "0.3", "0.8", "1.3", "1.7", "2.0", "a", "b"];

impl Sample for Circuits {
    fn sample(&self, s: &mut Sampler, on: FinSet) -> LGraph {
        if on.is_empty() {
            return LGraph::discrete(on);
        }
        let count = s.rng.gen_range(0..=s.max_edges);
        let edges = (0..count)
            .map(|_| {
                let src = s.rng.gen_range(0..on.size());
                let tgt = s.rng.gen_range(0..on.size());
                Edge::new(src, tgt, LABELS[s.rng.gen_range(0..LABELS.len())])
            })
            .collect();
        LGraph::new(on, edges).expect("endpoints in range")
    }
}

impl Sample for VectorFields {
    fn sample(&self, s: &mut Sampler, on: FinSet) -> PolyVectorField {
        let n = on.size();
        let components = (0..n)
            .map(|_| {
                let terms = (0..s.rng.gen_range(0..=3))
                    .map(|_| {
                        let coeff = BigRational::new(
                            s.rng.gen_range(-3i64..=3).into(),
                            s.rng.gen_range(1i64..=3).into(),
                        );
                        let mut exps = vec![0u32; n];
                        for _ in 0..s.rng.gen_range(0..=s.max_degree) {
                            exps[s.rng.gen_range(0..n)] += 1;
                        }
                        (coeff, exps)
                    })
                    .collect::<Vec<_>>();
                Polynomial::from_terms(n, terms).expect("exponent vectors sized to n")
            })
            .collect();
        PolyVectorField::new(components).expect("components over the same space")
    }
}

/// One failed check, with enough data to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case_index: usize,
    pub check: String,
    pub detail: String,
    pub inputs: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub law: String,
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<28} {:>6} cases {:>8} checks {:>5} failures {:>9.1} ms",
            self.law,
            self.cases,
            self.checks,
            self.failures.len(),
            self.elapsed.as_secs_f64() * 1e3
        )?;
        for failure in self.failures.iter().take(5) {
            write!(
                f,
                "\n    case {} [{}]: {}",
                failure.case_index, failure.check, failure.detail
            )?;
            for input in &failure.inputs {
                write!(f, "\n        {input}")?;
            }
        }
        if self.failures.len() > 5 {
            write!(f, "\n    ... and {} more", self.failures.len() - 5)?;
        }
        Ok(())
    }
}

/// Accumulates check outcomes for one case.
#[derive(Default)]
pub struct Checks {
    inputs: Vec<String>,
    failures: Vec<(String, String)>,
    count: usize,
}

impl Checks {
    pub fn input(&mut self, name: &str, value: &impl Debug) {
        self.inputs.push(format!("{name} = {value:?}"));
    }

    pub fn ensure(&mut self, check: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push((check.to_owned(), detail()));
        }
    }

    /// Records an error as a failure and yields the value otherwise.
    pub fn ok<T, E: Display>(&mut self, check: &str, r: Result<T, E>) -> Option<T> {
        self.count += 1;
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures.push((check.to_owned(), e.to_string()));
                None
            }
        }
    }

    /// Equality of two computed values, failing if either side errored.
    pub fn same<T: PartialEq + Debug, E: Display>(
        &mut self,
        check: &str,
        a: Result<T, E>,
        b: Result<T, E>,
    ) {
        match (a, b) {
            (Ok(a), Ok(b)) => self.ensure(check, a == b, || format!("{a:?}\n    != {b:?}")),
            (a, b) => {
                self.count += 1;
                let reason = [a.err(), b.err()]
                    .into_iter()
                    .flatten()
                    .map(|e| e.to_string());
                self.failures
                    .push((check.to_owned(), reason.collect::<Vec<_>>().join("; ")));
            }
        }
    }
}

/// Which law suite to run; used for replay and for the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    PseudoDoubleCategory,
    MonoidalStructure,
    Symmetry,
    Fibrancy,
    CircuitDecorations,
    VectorFieldDecorations,
    VectorFieldFunctoriality,
    PushoutOracle,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::PseudoDoubleCategory => "pseudo-double-category",
            Law::MonoidalStructure => "monoidal-structure",
            Law::Symmetry => "symmetry",
            Law::Fibrancy => "fibrancy",
            Law::CircuitDecorations => "decoration-functor/circuit",
            Law::VectorFieldDecorations => "decoration-functor/vectfield",
            Law::VectorFieldFunctoriality => "vector-field-functoriality",
            Law::PushoutOracle => "pushout-oracle",
        }
    }
}

fn run(
    law: &str,
    gen: &CaseGenerator,
    cases: usize,
    mut case: impl FnMut(usize, &mut Checks),
) -> LawReport {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checks = 0;
    for index in 0..cases {
        let mut c = Checks::default();
        case(index, &mut c);
        checks += c.count;
        for (check, detail) in c.failures {
            failures.push(Failure {
                case_index: index,
                check,
                detail,
                inputs: c.inputs.clone(),
            });
        }
    }
    LawReport {
        law: law.to_owned(),
        seed: gen.seed,
        cases,
        checks,
        failures,
        elapsed: start.elapsed(),
    }
}

fn id(m: &Cospan) -> GlobularIso {
    GlobularIso::identity(m)
}

fn pseudo_double_case(s: &mut Sampler, c: &mut Checks) {
    let ms = s.chain(4);
    for (k, m) in ms.iter().enumerate() {
        c.input(&format!("m{}", k + 1), &format!("{m}"));
    }
    let [m1, m2, m3, m4] = [&ms[0], &ms[1], &ms[2], &ms[3]];

    // coherence isos exist, are bijective and globular
    let Some(alpha) = c.ok("associator", associator(m1, m2, m3)) else {
        return;
    };
    let Some(lam) = c.ok("left unitor", left_unitor(m1)) else {
        return;
    };
    let Some(rho) = c.ok("right unitor", right_unitor(m1)) else {
        return;
    };
    for (name, iso) in [
        ("associator", &alpha),
        ("left unitor", &lam),
        ("right unitor", &rho),
    ] {
        c.ensure("globularity", iso.to_square().is_globular(), || {
            format!("{name} is not globular")
        });
        c.ensure(
            "S and T of coherence isos",
            {
                iso.source().left_foot() == iso.target().left_foot()
                    && iso.source().right_foot() == iso.target().right_foot()
            },
            || format!("{name} moves a foot"),
        );
        c.ensure("bijectivity", iso.apex_bijection().is_bijection(), || {
            name.to_owned()
        });
    }
    c.ensure(
        "S and T of composites",
        {
            hcompose(m1, m2)
                .is_ok_and(|m| m.left_foot() == m1.left_foot() && m.right_foot() == m2.right_foot())
        },
        || "composite has wrong feet".into(),
    );

    // pentagon: ((m1 m2) m3) m4 => m1 (m2 (m3 m4))
    let m12 = hcompose(m1, m2);
    let m23 = hcompose(m2, m3);
    let m34 = hcompose(m3, m4);
    let (Some(m12), Some(m23), Some(m34)) = (
        c.ok("compose", m12),
        c.ok("compose", m23),
        c.ok("compose", m34),
    ) else {
        return;
    };
    let two_step = associator(&m12, m3, m4).and_then(|a| a.then(&associator(m1, m2, &m34)?));
    let three_step = associator(m1, m2, m3)
        .and_then(|a| a.hcompose(&id(m4)))
        .and_then(|a| a.then(&associator(m1, &m23, m4)?))
        .and_then(|a| a.then(&id(m1).hcompose(&associator(m2, m3, m4)?)?));
    c.same("pentagon", two_step, three_step);

    // triangle: (m1 U) m2 => m1 m2
    let u = identity_cospan(m1.right_foot());
    let direct = right_unitor(m1).and_then(|r| r.hcompose(&id(m2)));
    let via_alpha =
        associator(m1, &u, m2).and_then(|a| a.then(&id(m1).hcompose(&left_unitor(m2)?)?));
    c.same("triangle", direct, via_alpha);

    // vertical composition is strictly associative and unital
    let s1 = s.square_from(m1, None);
    let s2 = s.square_from(s1.target(), None);
    let s3 = s.square_from(s2.target(), None);
    c.same(
        "vertical associativity",
        s1.vcompose(&s2).and_then(|x| x.vcompose(&s3)),
        s2.vcompose(&s3).and_then(|x| s1.vcompose(&x)),
    );
    c.same(
        "vertical units",
        Square::identity(m1).vcompose(&s1),
        Ok(s1.clone()),
    );
    c.same(
        "vertical units",
        s1.vcompose(&Square::identity(s1.target())),
        Ok(s1.clone()),
    );
    c.same(
        "horizontal identity squares",
        Square::identity(m1).hcompose(&Square::identity(m2)),
        Ok(Square::identity(&m12)),
    );

    // interchange of vertical and horizontal composition on a 2x2 grid
    let a = s.square_from(m1, None);
    let b = s.square_from(m2, Some(&a.map().foot_map_right));
    let g = s.square_from(a.target(), None);
    let d = s.square_from(b.target(), Some(&g.map().foot_map_right));
    let rows_first = a.hcompose(&b).and_then(|ab| ab.vcompose(&g.hcompose(&d)?));
    let columns_first = a.vcompose(&g).and_then(|ag| ag.hcompose(&b.vcompose(&d)?));
    c.same("horizontal/vertical interchange", rows_first, columns_first);

    // naturality of the associator and unitors in 2-morphisms
    let x1 = s.square_from(m1, None);
    let x2 = s.square_from(m2, Some(&x1.map().foot_map_right));
    let x3 = s.square_from(m3, Some(&x2.map().foot_map_right));
    let (t1, t2, t3) = (x1.target(), x2.target(), x3.target());
    let lhs = x1
        .hcompose(&x2)
        .and_then(|x| x.hcompose(&x3))
        .and_then(|x| x.vcompose(&associator(t1, t2, t3)?.to_square()));
    let rhs = associator(m1, m2, m3)
        .and_then(|a| a.to_square().vcompose(&x1.hcompose(&x2.hcompose(&x3)?)?));
    c.same("associator naturality", lhs, rhs);

    let unit_f = Square::unit(&x1.map().foot_map_left);
    let lhs = unit_f
        .hcompose(&x1)
        .and_then(|x| x.vcompose(&left_unitor(t1)?.to_square()));
    let rhs = left_unitor(m1).and_then(|l| l.to_square().vcompose(&x1));
    c.same("left unitor naturality", lhs, rhs);
    let unit_g = Square::unit(&x1.map().foot_map_right);
    let lhs = x1
        .hcompose(&unit_g)
        .and_then(|x| x.vcompose(&right_unitor(t1)?.to_square()));
    let rhs = right_unitor(m1).and_then(|r| r.to_square().vcompose(&x1));
    c.same("right unitor naturality", lhs, rhs);
}

pub fn check_pseudo_double_category(gen: &CaseGenerator) -> LawReport {
    run(
        Law::PseudoDoubleCategory.name(),
        gen,
        gen.case_count,
        |i, c| pseudo_double_case(&mut gen.sampler(i), c),
    )
}

fn monoidal_case(s: &mut Sampler, c: &mut Checks) {
    let ms = s.chain(3);
    let ns = s.chain(3);
    let ps = s.chain(2);
    for (k, m) in ms.iter().chain(&ns).chain(&ps).enumerate() {
        c.input(&format!("cospan{k}"), &format!("{m}"));
    }
    let [m1, m2, m3] = [&ms[0], &ms[1], &ms[2]];
    let [n1, n2, n3] = [&ns[0], &ns[1], &ns[2]];
    let [p1, p2] = [&ps[0], &ps[1]];

    // S and T are strict monoidal
    let t = tensor(m1, n1);
    c.ensure(
        "S, T strict monoidal",
        {
            t.left_foot() == coproduct(m1.left_foot(), n1.left_foot()).0
                && t.right_foot() == coproduct(m1.right_foot(), n1.right_foot()).0
        },
        || format!("{t}"),
    );

    // the interchanger exists and is certified
    let Some(x) = c.ok("interchanger", interchanger(m1, n1, m2, n2)) else {
        return;
    };
    c.ensure("interchanger globular", x.to_square().is_globular(), || {
        format!("{x:?}")
    });

    // associativity hexagon for the interchanger
    let mn1 = tensor(m1, n1);
    let mn2 = tensor(m2, n2);
    let mn3 = tensor(m3, n3);
    let path_a = associator(&mn1, &mn2, &mn3)
        .and_then(|a| a.then(&id(&mn1).hcompose(&interchanger(m2, n2, m3, n3)?)?))
        .and_then(|a| {
            a.then(&interchanger(
                m1,
                n1,
                &hcompose(m2, m3)?,
                &hcompose(n2, n3)?,
            )?)
        });
    let path_b = interchanger(m1, n1, m2, n2)
        .and_then(|x| x.hcompose(&id(&mn3)))
        .and_then(|x| {
            x.then(&interchanger(
                &hcompose(m1, m2)?,
                &hcompose(n1, n2)?,
                m3,
                n3,
            )?)
        })
        .and_then(|x| x.then(&associator(m1, m2, m3)?.tensor(&associator(n1, n2, n3)?)));
    c.same("interchanger/associator hexagon", path_a, path_b);

    // unit squares: M: A -> C, N: B -> D
    let (a, b) = (m1.left_foot(), n1.left_foot());
    let (cc, d) = (m1.right_foot(), n1.right_foot());
    let rho = right_unitor(&mn1);
    let via_x = unit_interchanger(cc, d)
        .and_then(|u| id(&mn1).hcompose(&u))
        .and_then(|u| {
            u.then(&interchanger(
                m1,
                n1,
                &identity_cospan(cc),
                &identity_cospan(d),
            )?)
        })
        .and_then(|u| u.then(&right_unitor(m1)?.tensor(&right_unitor(n1)?)));
    c.same("right unitor / interchanger", rho, via_x);
    let lam = left_unitor(&mn1);
    let via_x = unit_interchanger(a, b)
        .and_then(|u| u.hcompose(&id(&mn1)))
        .and_then(|u| {
            u.then(&interchanger(
                &identity_cospan(a),
                &identity_cospan(b),
                m1,
                n1,
            )?)
        })
        .and_then(|u| u.then(&left_unitor(m1)?.tensor(&left_unitor(n1)?)));
    c.same("left unitor / interchanger", lam, via_x);

    // the tensor associator is the identity, so both bracketings of the
    // interchanger for three tensor factors agree on the nose
    let split_last = interchanger(&tensor(m1, n1), p1, &tensor(m2, n2), p2)
        .and_then(|x| x.then(&interchanger(m1, n1, m2, n2)?.tensor(&id(&hcompose(p1, p2)?))));
    let split_first = interchanger(m1, &tensor(n1, p1), m2, &tensor(n2, p2))
        .and_then(|x| x.then(&id(&hcompose(m1, m2)?).tensor(&interchanger(n1, p1, n2, p2)?)));
    c.same(
        "tensor associativity transformation",
        split_last,
        split_first,
    );

    let (sa, sb, sc) = (s.set(), s.set(), s.set());
    let ab = coproduct(sa, sb).0;
    let bc = coproduct(sb, sc).0;
    let left = unit_interchanger(ab, sc)
        .and_then(|u| u.then(&unit_interchanger(sa, sb)?.tensor(&id(&identity_cospan(sc)))));
    let right = unit_interchanger(sa, bc)
        .and_then(|u| u.then(&id(&identity_cospan(sa)).tensor(&unit_interchanger(sb, sc)?)));
    c.same("unit interchanger associativity", left, right);

    // the tensor unit is strict: interchanging with U_0 is the identity
    let u0 = Cospan::empty();
    let with_unit = interchanger(m1, &u0, m2, &u0);
    c.ensure(
        "right tensor unit",
        with_unit.as_ref().is_ok_and(GlobularIso::is_identity),
        || format!("{with_unit:?}"),
    );
    let with_unit = interchanger(&u0, m1, &u0, m2);
    c.ensure(
        "left tensor unit",
        with_unit.as_ref().is_ok_and(GlobularIso::is_identity),
        || format!("{with_unit:?}"),
    );
    let unit_empty = unit_interchanger(sa, FinSet::EMPTY);
    c.ensure(
        "unit interchanger with I",
        unit_empty.as_ref().is_ok_and(GlobularIso::is_identity),
        || format!("{unit_empty:?}"),
    );
    let unit_empty = unit_interchanger(FinSet::EMPTY, sa);
    c.ensure(
        "unit interchanger with I",
        unit_empty.as_ref().is_ok_and(GlobularIso::is_identity),
        || format!("{unit_empty:?}"),
    );

    // naturality of the interchanger in 2-morphisms
    let a1 = s.square_from(m1, None);
    let b1 = s.square_from(n1, None);
    let a2 = s.square_from(m2, Some(&a1.map().foot_map_right));
    let b2 = s.square_from(n2, Some(&b1.map().foot_map_right));
    let lhs = a1.tensor(&b1).hcompose(&a2.tensor(&b2)).and_then(|sq| {
        sq.vcompose(&interchanger(a1.target(), b1.target(), a2.target(), b2.target())?.to_square())
    });
    let rhs = interchanger(m1, n1, m2, n2).and_then(|x| {
        x.to_square()
            .vcompose(&a1.hcompose(&a2)?.tensor(&b1.hcompose(&b2)?))
    });
    c.same("interchanger naturality", lhs, rhs);
}

pub fn check_monoidal_structure(gen: &CaseGenerator) -> LawReport {
    run(
        Law::MonoidalStructure.name(),
        gen,
        gen.case_count,
        |i, c| monoidal_case(&mut gen.sampler(i), c),
    )
}

fn symmetry_case(s: &mut Sampler, c: &mut Checks) {
    let ms = s.chain(2);
    let ns = s.chain(2);
    for (k, m) in ms.iter().chain(&ns).enumerate() {
        c.input(&format!("cospan{k}"), &format!("{m}"));
    }
    let [m1, m2] = [&ms[0], &ms[1]];
    let [n1, n2] = [&ns[0], &ns[1]];

    let swap = braiding_cell(m1, n1);
    c.ensure(
        "braiding is a 2-morphism",
        swap.map().check(swap.source(), swap.target()),
        || format!("{swap:?}"),
    );
    c.ensure(
        "S, T preserve the braiding",
        {
            swap.map().foot_map_left == braiding_object(m1.left_foot(), n1.left_foot())
                && swap.map().foot_map_right == braiding_object(m1.right_foot(), n1.right_foot())
        },
        || format!("{swap:?}"),
    );
    c.same(
        "symmetry",
        swap.vcompose(&braiding_cell(n1, m1)),
        Ok(Square::identity(&tensor(m1, n1))),
    );

    // braiding commutes with the interchanger
    let lhs = interchanger(m1, n1, m2, n2).and_then(|x| {
        x.to_square()
            .vcompose(&braiding_cell(&hcompose(m1, m2)?, &hcompose(n1, n2)?))
    });
    let rhs = braiding_cell(m1, n1)
        .hcompose(&braiding_cell(m2, n2))
        .and_then(|sq| sq.vcompose(&interchanger(n1, m1, n2, m2)?.to_square()));
    c.same("braiding/interchanger square", lhs, rhs);

    // ... and with the unit interchanger
    let (a, b) = (s.set(), s.set());
    let lhs = unit_interchanger(a, b)
        .and_then(|u| {
            u.to_square()
                .vcompose(&braiding_cell(&identity_cospan(a), &identity_cospan(b)))
        })
        .and_then(|sq| sq.vcompose(&unit_interchanger(b, a)?.inverse().to_square()));
    c.same(
        "braiding/unit square",
        lhs,
        Ok(Square::unit(&braiding_object(a, b))),
    );

    // naturality in 2-morphisms
    let x = s.square_from(m1, None);
    let y = s.square_from(n1, None);
    let lhs = x
        .tensor(&y)
        .vcompose(&braiding_cell(x.target(), y.target()));
    let rhs = braiding_cell(m1, n1).vcompose(&y.tensor(&x));
    c.same("braiding naturality", lhs, rhs);
}

pub fn check_symmetry(gen: &CaseGenerator) -> LawReport {
    run(Law::Symmetry.name(), gen, gen.case_count, |i, c| {
        symmetry_case(&mut gen.sampler(i), c)
    })
}

/// Every function `A -> B` with `|A|, |B| <= max`.
pub fn all_functions(max: usize) -> Vec<FinFunction> {
    let mut out = Vec::new();
    for a in 0..=max {
        for b in 0..=max {
            if a > 0 && b == 0 {
                continue;
            }
            let count = b.pow(a as u32);
            for mut code in 0..count {
                let table = (0..a)
                    .map(|_| {
                        let digit = code % b;
                        code /= b;
                        digit
                    })
                    .collect();
                out.push(FinFunction::new(FinSet::new(b), table).expect("digits below b"));
            }
        }
    }
    out
}

fn companion_equations(c: &mut Checks, f: &FinFunction) {
    let hat = crate::cospan::companion(f);
    let (to_unit, from_unit) = companion_cells(f);
    c.ensure(
        "companion cells valid",
        {
            to_unit.map().check(to_unit.source(), to_unit.target())
                && from_unit
                    .map()
                    .check(from_unit.source(), from_unit.target())
        },
        || format!("{to_unit:?} / {from_unit:?}"),
    );
    c.same(
        "companion: vertical equation",
        from_unit.vcompose(&to_unit),
        Ok(Square::unit(f)),
    );
    let collapsed = left_unitor(&hat).and_then(|l| {
        l.inverse()
            .to_square()
            .vcompose(&from_unit.hcompose(&to_unit)?)?
            .vcompose(&right_unitor(&hat)?.to_square())
    });
    c.same(
        "companion: horizontal equation",
        collapsed,
        Ok(Square::identity(&hat)),
    );

    let check = crate::cospan::conjoint(f);
    let (to_unit, from_unit) = conjoint_cells(f);
    c.ensure(
        "conjoint cells valid",
        {
            to_unit.map().check(to_unit.source(), to_unit.target())
                && from_unit
                    .map()
                    .check(from_unit.source(), from_unit.target())
        },
        || format!("{to_unit:?} / {from_unit:?}"),
    );
    c.same(
        "conjoint: vertical equation",
        from_unit.vcompose(&to_unit),
        Ok(Square::unit(f)),
    );
    let collapsed = right_unitor(&check).and_then(|r| {
        r.inverse()
            .to_square()
            .vcompose(&to_unit.hcompose(&from_unit)?)?
            .vcompose(&left_unitor(&check)?.to_square())
    });
    c.same(
        "conjoint: horizontal equation",
        collapsed,
        Ok(Square::identity(&check)),
    );
}

/// The same equations with trivially decorated cells: every structure cell and
/// every composite must also carry the trivial decorations to each other.
fn decorated_companion_equations<D: Decoration>(backend: &D, c: &mut Checks, f: &FinFunction) {
    let name = backend.name();
    let (a, b) = (f.dom(), f.cod());
    let hat = dcompanion(backend, f);
    let check = dconjoint(backend, f);
    c.ensure(
        "trivial decorations",
        {
            hat.decoration() == &trivial_decoration(backend, b)
                && check.decoration() == &trivial_decoration(backend, b)
        },
        || format!("{name}: {hat:?}"),
    );

    let (ua, ub) = (didentity(backend, a), didentity(backend, b));
    let cells = [companion_cells(f), conjoint_cells(f)];
    for (k, (to_unit, from_unit)) in cells.iter().enumerate() {
        let decorated = if k == 0 { &hat } else { &check };
        c.ensure(
            "decorated structure cells",
            {
                check_decorated_square(backend, to_unit, decorated.decoration(), ub.decoration())
                    && check_decorated_square(
                        backend,
                        from_unit,
                        ua.decoration(),
                        decorated.decoration(),
                    )
            },
            || format!("{name}: structure cell does not preserve trivial decorations"),
        );
    }

    // horizontal composites of the cells, against composite decorations
    let (to_unit, from_unit) = companion_cells(f);
    let sq = from_unit.hcompose(&to_unit);
    let src = dcompose(backend, &ua, &hat);
    let tgt = dcompose(backend, &hat, &ub);
    if let (Some(sq), Some(src), Some(tgt)) = (
        c.ok("compose", sq),
        c.ok("compose", src),
        c.ok("compose", tgt),
    ) {
        c.ensure(
            "decorated companion: horizontal equation",
            check_decorated_square(backend, &sq, src.decoration(), tgt.decoration()),
            || format!("{name}: composite cell does not preserve decorations"),
        );
        c.ok("decorated unitors", dleft_unitor(backend, &hat));
        c.ok("decorated unitors", dright_unitor(backend, &hat));
    }
    let (to_unit, from_unit) = conjoint_cells(f);
    let sq = to_unit.hcompose(&from_unit);
    let src = dcompose(backend, &check, &ua);
    let tgt = dcompose(backend, &ub, &check);
    if let (Some(sq), Some(src), Some(tgt)) = (
        c.ok("compose", sq),
        c.ok("compose", src),
        c.ok("compose", tgt),
    ) {
        c.ensure(
            "decorated conjoint: horizontal equation",
            check_decorated_square(backend, &sq, src.decoration(), tgt.decoration()),
            || format!("{name}: composite cell does not preserve decorations"),
        );
        c.ok("decorated unitors", dleft_unitor(backend, &check));
        c.ok("decorated unitors", dright_unitor(backend, &check));
    }
}

/// Companion and conjoint equations for every `f: A -> B` with
/// `|A|, |B| <= gen.max_set_size`, undecorated and trivially decorated.
pub fn check_fibrancy(gen: &CaseGenerator) -> LawReport {
    let functions = all_functions(gen.max_set_size);
    run(Law::Fibrancy.name(), gen, functions.len(), |i, c| {
        fibrancy_case(&functions[i], c)
    })
}

fn fibrancy_case(f: &FinFunction, c: &mut Checks) {
    c.input("f", &format!("{f}"));
    companion_equations(c, f);
    decorated_companion_equations(&Circuits, c, f);
    decorated_companion_equations(&VectorFields, c, f);
}

fn decoration_case<D: Sample>(backend: &D, s: &mut Sampler, c: &mut Checks) {
    let name = backend.name();
    let (a, b, cc) = (s.set(), s.set(), s.set());
    let (da, db, dc) = (
        backend.sample(s, a),
        backend.sample(s, b),
        backend.sample(s, cc),
    );
    c.input("dA", &da);
    c.input("dB", &db);
    c.input("dC", &dc);

    // functoriality
    c.same(
        "transport identity",
        backend.transport(&FinFunction::identity(a), &da),
        Ok(da.clone()),
    );
    let fa = s.set_receiving(&[a]);
    let f = s.function(a, fa);
    let ga = s.set_receiving(&[fa]);
    let g = s.function(fa, ga);
    let gf = f.then(&g).expect("composable");
    c.same(
        "transport composition",
        backend.transport(&gf, &da),
        backend
            .transport(&f, &da)
            .and_then(|d| backend.transport(&g, &d)),
    );

    // naturality of combine
    let fb = s.set_receiving(&[b]);
    let h = s.function(b, fb);
    c.same(
        "combine naturality",
        backend.transport(&f.sum(&h), &backend.combine(&da, &db)),
        backend
            .transport(&f, &da)
            .and_then(|x| Ok(backend.combine(&x, &backend.transport(&h, &db)?))),
    );

    // associativity, units, symmetry
    c.same::<_, String>(
        "combine associativity",
        Ok(backend.combine(&backend.combine(&da, &db), &dc)),
        Ok(backend.combine(&da, &backend.combine(&db, &dc))),
    );
    c.ensure(
        "combine units",
        {
            backend.equals(&backend.combine(&da, &backend.unit()), &da)
                && backend.equals(&backend.combine(&backend.unit(), &da), &da)
        },
        || format!("{name}: unit is not neutral"),
    );
    c.same(
        "combine symmetry",
        backend.transport(&braiding_object(a, b), &backend.combine(&da, &db)),
        Ok(backend.combine(&db, &da)),
    );

    // the decorated cospan layer
    let chain = s.chain(3);
    let ds: Vec<_> = chain.into_iter().map(|m| backend.decorated(s, m)).collect();
    for (k, d) in ds.iter().enumerate() {
        c.input(&format!("m{}", k + 1), d);
    }
    let [m1, m2, m3] = [&ds[0], &ds[1], &ds[2]];
    c.ok(
        "associator transports decorations",
        dassociator(backend, m1, m2, m3),
    );
    c.ok(
        "left unitor transports decorations",
        dleft_unitor(backend, m1),
    );
    c.ok(
        "right unitor transports decorations",
        dright_unitor(backend, m1),
    );

    let n_chain = s.chain(2);
    let n1 = backend.decorated(s, n_chain[0].clone());
    let n2 = backend.decorated(s, n_chain[1].clone());
    c.input("n1", &n1);
    c.input("n2", &n2);
    c.ok(
        "interchanger transports decorations",
        dinterchanger(backend, m1, &n1, m2, &n2),
    );

    let swapped = backend.transport(
        &braiding_object(m1.cospan().apex(), n1.cospan().apex()),
        dtensor(backend, m1, &n1).decoration(),
    );
    c.same(
        "braiding transports decorations",
        swapped,
        Ok(dtensor(backend, &n1, m1).decoration().clone()),
    );

    let composite = dcompose(backend, m1, m2).map(|d| d.cospan().clone());
    c.same(
        "composition forgets to cospans",
        composite,
        hcompose(m1.cospan(), m2.cospan()).map_err(Into::into),
    );
    c.ensure(
        "tensor forgets to cospans",
        dtensor(backend, m1, &n1).cospan() == &tensor(m1.cospan(), n1.cospan()),
        || "dtensor changed the underlying cospan".into(),
    );
}

/// The decoration laws for `backend`, then the decorated-cospan coherence layer.
pub fn check_decoration_functor<D: Sample>(backend: &D, gen: &CaseGenerator) -> LawReport {
    let law = format!("decoration-functor/{}", backend.name());
    run(&law, gen, gen.case_count, |i, c| {
        decoration_case(backend, &mut gen.sampler(i), c)
    })
}

fn random_point(s: &mut Sampler, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| {
            BigRational::new(
                s.rng.gen_range(-5i64..=5).into(),
                s.rng.gen_range(1i64..=4).into(),
            )
        })
        .collect()
}

/// Transported field evaluated directly from `v`: pull the point back along
/// `f`, evaluate, then sum each velocity into its image coordinate.
fn pushforward_at(
    f: &FinFunction,
    v: &PolyVectorField,
    y: &[BigRational],
) -> Result<Vec<BigRational>, DynamError> {
    let x: Vec<_> = f.table().iter().map(|&j| y[j].clone()).collect();
    let mut out = vec![BigRational::zero(); f.cod().size()];
    for (i, dx) in evaluate(v, &x)?.into_iter().enumerate() {
        out[f.apply(i)] += dx;
    }
    Ok(out)
}

fn vector_field_case(s: &mut Sampler, points: usize, c: &mut Checks) {
    let a = s.set();
    let b = s.set_receiving(&[a]);
    let cc = s.set_receiving(&[b]);
    let f = s.function(a, b);
    let g = s.function(b, cc);
    let v = VectorFields.sample(s, a);
    c.input("f", &format!("{f}"));
    c.input("g", &format!("{g}"));
    c.input("v", &format!("{v}"));
    let gf = f.then(&g).expect("composable");
    let moved = vf_transport(&f, &v);
    c.same(
        "transport composition",
        vf_transport(&gf, &v),
        moved.clone().and_then(|w| vf_transport(&g, &w)),
    );
    c.same(
        "transport identity",
        vf_transport(&FinFunction::identity(a), &v),
        Ok(v.clone()),
    );
    let Some(moved) = c.ok("transport", moved) else {
        return;
    };
    for _ in 0..points {
        let y = random_point(s, b.size());
        c.same(
            "pointwise pushforward",
            evaluate(&moved, &y),
            pushforward_at(&f, &v, &y),
        );
        let z = random_point(s, cc.size());
        let composite = vf_transport(&gf, &v).and_then(|w| evaluate(&w, &z));
        c.same(
            "pointwise pushforward of composite",
            composite,
            pushforward_at(&gf, &v, &z),
        );
    }
}

/// Exact functoriality of vector-field transport, plus agreement of the
/// transported field with pushforward of pulled-back evaluation at
/// `points` random rational points per case.
pub fn check_vector_field_functoriality(gen: &CaseGenerator, points: usize) -> LawReport {
    run(
        Law::VectorFieldFunctoriality.name(),
        gen,
        gen.case_count,
        |i, c| vector_field_case(&mut gen.sampler(i), points, c),
    )
}

/// Quotient of `N + N'` by the equivalence generated by `f(y) ~ g(y)`,
/// computed by transitive closure of a relation matrix. Classes are numbered
/// by smallest member. Returns the class of every element.
pub fn closure_quotient(f: &FinFunction, g: &FinFunction) -> Vec<usize> {
    let offset = f.cod().size();
    let n = offset + g.cod().size();
    let mut related = vec![vec![false; n]; n];
    for (k, row) in related.iter_mut().enumerate() {
        row[k] = true;
    }
    for (&a, &b) in f.table().iter().zip(g.table()) {
        related[a][offset + b] = true;
        related[offset + b][a] = true;
    }
    for k in 0..n {
        let through = related[k].clone();
        for row in related.iter_mut().filter(|row| row[k]) {
            for (cell, &reach) in row.iter_mut().zip(&through) {
                *cell |= reach;
            }
        }
    }
    let mut class = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if class[i] == usize::MAX {
            for j in i..n {
                if related[i][j] {
                    class[j] = next;
                }
            }
            next += 1;
        }
    }
    class
}

fn oracle_case(f: &FinFunction, g: &FinFunction, c: &mut Checks) {
    c.input("f", &format!("{f}"));
    c.input("g", &format!("{g}"));
    let expected = closure_quotient(f, g);
    let classes = expected.iter().max().map_or(0, |m| m + 1);
    let Some(p) = c.ok("pushout", pushout(f, g)) else {
        return;
    };
    c.ensure("apex size", p.apex.size() == classes, || {
        format!("{} != {classes}", p.apex.size())
    });
    c.ensure(
        "quotient map",
        p.from_coproduct.table() == expected.as_slice(),
        || format!("{:?} != {expected:?}", p.from_coproduct.table()),
    );
}

/// Every span `N <- Y -> N'` with all three sizes at most `max`.
pub fn all_spans(max: usize) -> Vec<(FinFunction, FinFunction)> {
    let functions = all_functions(max);
    let mut spans = Vec::new();
    for f in &functions {
        for g in functions.iter().filter(|g| g.dom() == f.dom()) {
            spans.push((f.clone(), g.clone()));
        }
    }
    spans
}

/// Exhaustive comparison of [`pushout`] against [`closure_quotient`].
pub fn pushout_oracle(max: usize) -> LawReport {
    let spans = all_spans(max);
    let gen = CaseGenerator {
        seed: 0,
        ..Default::default()
    };
    run(Law::PushoutOracle.name(), &gen, spans.len(), |i, c| {
        oracle_case(&spans[i].0, &spans[i].1, c)
    })
}

/// Seeded random spans with sizes up to `gen.max_set_size`.
pub fn pushout_spot_checks(gen: &CaseGenerator) -> LawReport {
    run("pushout-spot-checks", gen, gen.case_count, |i, c| {
        let mut s = gen.sampler(i);
        let y = s.set();
        let n = s.set_receiving(&[y]);
        let n2 = s.set_receiving(&[y]);
        let f = s.function(y, n);
        let g = s.function(y, n2);
        oracle_case(&f, &g, c)
    })
}

/// Runs case `index` of `law` alone and returns its failures.
pub fn replay(law: Law, gen: &CaseGenerator, index: usize) -> Vec<Failure> {
    let single = |case: &mut dyn FnMut(&mut Checks)| {
        let mut c = Checks::default();
        case(&mut c);
        c.failures
            .into_iter()
            .map(|(check, detail)| Failure {
                case_index: index,
                check,
                detail,
                inputs: c.inputs.clone(),
            })
            .collect()
    };
    match law {
        Law::PseudoDoubleCategory => {
            single(&mut |c| pseudo_double_case(&mut gen.sampler(index), c))
        }
        Law::MonoidalStructure => single(&mut |c| monoidal_case(&mut gen.sampler(index), c)),
        Law::Symmetry => single(&mut |c| symmetry_case(&mut gen.sampler(index), c)),
        Law::Fibrancy => {
            let f = all_functions(gen.max_set_size).swap_remove(index);
            single(&mut |c| fibrancy_case(&f, c))
        }
        Law::CircuitDecorations => {
            single(&mut |c| decoration_case(&Circuits, &mut gen.sampler(index), c))
        }
        Law::VectorFieldDecorations => {
            single(&mut |c| decoration_case(&VectorFields, &mut gen.sampler(index), c))
        }
        Law::VectorFieldFunctoriality => {
            single(&mut |c| vector_field_case(&mut gen.sampler(index), 10, c))
        }
        Law::PushoutOracle => {
            let (f, g) = all_spans(gen.max_set_size).swap_remove(index);
            single(&mut |c| oracle_case(&f, &g, c))
        }
    }
}

/// Which backends a suite run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backends {
    Circuit,
    VectField,
    All,
}

/// The full catalog. Vector-field cases are capped at sizes 3 and the
/// generator's degree bound; pushouts are exhaustive up to size 3.
pub fn run_suite(gen: &CaseGenerator, backends: Backends) -> Vec<LawReport> {
    let small = gen.clone().with_max_set_size(gen.max_set_size.min(3));
    let mut reports = vec![
        pushout_oracle(3),
        check_pseudo_double_category(gen),
        check_monoidal_structure(gen),
        check_symmetry(gen),
        check_fibrancy(&small),
    ];
    if matches!(backends, Backends::Circuit | Backends::All) {
        reports.push(check_decoration_functor(&Circuits, gen));
    }
    if matches!(backends, Backends::VectField | Backends::All) {
        reports.push(check_decoration_functor(&VectorFields, &small));
        reports.push(check_vector_field_functoriality(&small, 10));
    }
    reports
}

/// Plain-text summary, one block per law.
pub fn render_text(reports: &[LawReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(out, "{} laws, {} failed", reports.len(), failed);
    out
}
