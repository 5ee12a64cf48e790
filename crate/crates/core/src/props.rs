//! Atomic propositions over markings and invisibility classification.
//!
//! A proposition is linear (`Σ k_p·p ⋈ k`), polynomial (`f(p…) ⋈ k`) or
//! arbitrary (a truth table over finitely many markings plus a default).
//! A transition is invisible for a proposition when every pair of markings
//! in its relation agrees on the proposition; [`InvisibilityFlags`] selects
//! which relation and which notion of agreement.

use std::cell::OnceCell;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::petri::{marking_map, Marking, PetriNet, PlaceId, TransitionId};
use crate::poly::{Monomial, MultiPoly, PolyError};
use crate::verdict::{Bound, Verdict};

/// Largest number of box points enumerated for a polynomial truth check.
pub const BOX_POINT_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum PropError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("proposition `{prop}` has no value at {marking} (outside its table, no default)")]
    OutsideTable { prop: String, marking: Marking },
    #[error("unknown place `{0}` in a proposition")]
    UnknownPlace(String),
    #[error("unknown comparison `{0}`")]
    BadCmp(String),
    #[error("unknown invisibility flag `{0}`")]
    BadFlag(String),
    #[error("marking has {got} places, net has {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("more than {0} reachable markings; reach-restricted invisibility needs a finite reachable set")]
    StateCapExceeded(usize),
    #[error("invalid proposition document: {0}")]
    Json(#[from] serde_json::Error),
}

/// Comparison operator of a linear or polynomial proposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Cmp {
    pub fn holds(self, lhs: &BigInt, k: &BigInt) -> bool {
        match self {
            Cmp::Lt => lhs < k,
            Cmp::Le => lhs <= k,
            Cmp::Gt => lhs > k,
            Cmp::Ge => lhs >= k,
            Cmp::Eq => lhs == k,
            Cmp::Ne => lhs != k,
        }
    }
}

impl FromStr for Cmp {
    type Err = PropError;
    fn from_str(s: &str) -> Result<Self, PropError> {
        Ok(match s {
            "<" => Cmp::Lt,
            "<=" | "≤" => Cmp::Le,
            ">" => Cmp::Gt,
            ">=" | "≥" => Cmp::Ge,
            "=" | "==" => Cmp::Eq,
            "!=" | "≠" => Cmp::Ne,
            _ => return Err(PropError::BadCmp(s.to_string())),
        })
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropBody {
    /// `Σ coeffs[p]·m(p) cmp k`; no constant term.
    Linear { coeffs: BTreeMap<PlaceId, i64>, cmp: Cmp, k: i64 },
    Polynomial { poly: MultiPoly, cmp: Cmp, k: BigInt },
    Arbitrary { table: BTreeMap<Marking, bool>, default: Option<bool> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicProp {
    pub id: String,
    pub body: PropBody,
}

impl AtomicProp {
    pub fn linear(id: impl Into<String>, coeffs: &[(PlaceId, i64)], cmp: Cmp, k: i64) -> Self {
        let coeffs = coeffs.iter().copied().filter(|(_, c)| *c != 0).collect();
        Self { id: id.into(), body: PropBody::Linear { coeffs, cmp, k } }
    }

    pub fn polynomial(id: impl Into<String>, poly: MultiPoly, cmp: Cmp, k: impl Into<BigInt>) -> Self {
        Self { id: id.into(), body: PropBody::Polynomial { poly, cmp, k: k.into() } }
    }

    pub fn arbitrary(id: impl Into<String>, rows: impl IntoIterator<Item = (Marking, bool)>, default: Option<bool>) -> Self {
        Self {
            id: id.into(),
            body: PropBody::Arbitrary { table: rows.into_iter().collect(), default },
        }
    }

    /// The value polynomial `f` of a linear or polynomial proposition.
    pub fn value_poly(&self) -> Option<MultiPoly> {
        match &self.body {
            PropBody::Linear { coeffs, .. } => Some(MultiPoly::from_terms(
                coeffs.iter().map(|(&p, &c)| (BigInt::from(c), Monomial::var(p))),
            )),
            PropBody::Polynomial { poly, .. } => Some(poly.clone()),
            PropBody::Arbitrary { .. } => None,
        }
    }

    fn threshold(&self) -> Option<(Cmp, BigInt)> {
        match &self.body {
            PropBody::Linear { cmp, k, .. } => Some((*cmp, BigInt::from(*k))),
            PropBody::Polynomial { cmp, k, .. } => Some((*cmp, k.clone())),
            PropBody::Arbitrary { .. } => None,
        }
    }

    /// Places the proposition depends on; `None` for arbitrary tables.
    pub fn support(&self) -> Option<BTreeSet<PlaceId>> {
        self.value_poly().map(|f| f.vars())
    }

    /// `f(m)` for linear and polynomial propositions.
    pub fn value(&self, m: &Marking) -> Result<Option<BigInt>, PropError> {
        match self.value_poly() {
            Some(f) => Ok(Some(f.eval(&m.to_point())?)),
            None => Ok(None),
        }
    }

    pub fn eval(&self, m: &Marking) -> Result<bool, PropError> {
        match &self.body {
            PropBody::Arbitrary { table, default } => table
                .get(m)
                .copied()
                .or(*default)
                .ok_or_else(|| PropError::OutsideTable { prop: self.id.clone(), marking: m.clone() }),
            _ => {
                let (cmp, k) = self.threshold().expect("non-arbitrary body");
                let v = self.value(m)?.expect("non-arbitrary body");
                Ok(cmp.holds(&v, &k))
            }
        }
    }

    pub fn describe(&self, net: &PetriNet) -> String {
        let name = |p: usize| net.place_name(p).to_string();
        match &self.body {
            PropBody::Linear { cmp, k, .. } => {
                format!("{} {cmp} {k}", self.value_poly().unwrap().format_with(&name))
            }
            PropBody::Polynomial { poly, cmp, k } => format!("{} {cmp} {k}", poly.format_with(&name)),
            PropBody::Arbitrary { table, default } => format!(
                "table of {} markings, default {}",
                table.len(),
                default.map_or("none".to_string(), |d| d.to_string())
            ),
        }
    }
}

/// Truth of `prop` at `m`.
pub fn eval_prop(prop: &AtomicProp, m: &Marking) -> Result<bool, PropError> {
    prop.eval(m)
}

/// `f(point)` as an exact integer.
pub fn poly_eval(poly: &MultiPoly, m: &Marking) -> Result<BigInt, PolyError> {
    poly.eval(&m.to_point())
}

/// `g(x) = f(x + c) − f(x)`.
pub fn shift_difference(f: &MultiPoly, c: &[i64]) -> MultiPoly {
    f.shift_difference(c)
}

/// The polynomial proposition `∏_p ∏_{i<W(p,t)} (p − i) ≥ 1`, true exactly
/// at the markings enabling `t`.
pub fn encode_fireable(net: &PetriNet, t: TransitionId) -> AtomicProp {
    let mut f = MultiPoly::constant(1);
    for p in 0..net.num_places() {
        for i in 0..net.pre(t, p) {
            let factor = &MultiPoly::var(p) - &MultiPoly::constant(i64::from(i));
            f = &f * &factor;
        }
    }
    AtomicProp::polynomial(format!("fireable_{}", net.transition_name(t)), f, Cmp::Ge, 1)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MarkingDoc {
    Vector(Vec<u32>),
    Named(BTreeMap<String, u32>),
}

#[derive(Serialize, Deserialize)]
struct MonomialDoc {
    coef: i64,
    #[serde(default)]
    vars: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum PropDoc {
    Linear {
        id: String,
        coeffs: BTreeMap<String, i64>,
        cmp: String,
        k: i64,
    },
    Polynomial {
        id: String,
        monomials: Vec<MonomialDoc>,
        cmp: String,
        k: i64,
    },
    Arbitrary {
        id: String,
        rows: Vec<(MarkingDoc, bool)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<bool>,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PropsFile {
    List(Vec<PropDoc>),
    Wrapped { props: Vec<PropDoc> },
}

fn place_of(net: &PetriNet, name: &str) -> Result<PlaceId, PropError> {
    net.place(name).map_err(|_| PropError::UnknownPlace(name.to_string()))
}

impl MarkingDoc {
    fn resolve(self, net: &PetriNet) -> Result<Marking, PropError> {
        match self {
            MarkingDoc::Vector(v) => {
                if v.len() != net.num_places() {
                    return Err(PropError::WrongLength { got: v.len(), expected: net.num_places() });
                }
                Ok(Marking::new(v))
            }
            MarkingDoc::Named(map) => {
                let mut m = Marking::zeros(net.num_places());
                for (name, k) in map {
                    m.set(place_of(net, &name)?, k);
                }
                Ok(m)
            }
        }
    }
}

impl PropDoc {
    fn resolve(self, net: &PetriNet) -> Result<AtomicProp, PropError> {
        Ok(match self {
            PropDoc::Linear { id, coeffs, cmp, k } => {
                let coeffs: Vec<(PlaceId, i64)> = coeffs
                    .into_iter()
                    .map(|(n, c)| Ok((place_of(net, &n)?, c)))
                    .collect::<Result<_, PropError>>()?;
                AtomicProp::linear(id, &coeffs, cmp.parse()?, k)
            }
            PropDoc::Polynomial { id, monomials, cmp, k } => {
                let mut terms = Vec::new();
                for mono in monomials {
                    let powers = mono
                        .vars
                        .into_iter()
                        .map(|(n, e)| Ok((place_of(net, &n)?, e)))
                        .collect::<Result<Vec<_>, PropError>>()?;
                    terms.push((BigInt::from(mono.coef), Monomial::from_powers(powers)));
                }
                AtomicProp::polynomial(id, MultiPoly::from_terms(terms), cmp.parse()?, k)
            }
            PropDoc::Arbitrary { id, rows, default } => {
                let rows = rows
                    .into_iter()
                    .map(|(m, b)| Ok((m.resolve(net)?, b)))
                    .collect::<Result<Vec<_>, PropError>>()?;
                AtomicProp::arbitrary(id, rows, default)
            }
        })
    }

    fn from_prop(q: &AtomicProp, net: &PetriNet) -> PropDoc {
        let name = |p: PlaceId| net.place_name(p).to_string();
        match &q.body {
            PropBody::Linear { coeffs, cmp, k } => PropDoc::Linear {
                id: q.id.clone(),
                coeffs: coeffs.iter().map(|(&p, &c)| (name(p), c)).collect(),
                cmp: cmp.to_string(),
                k: *k,
            },
            PropBody::Polynomial { poly, cmp, k } => PropDoc::Polynomial {
                id: q.id.clone(),
                monomials: poly
                    .terms()
                    .map(|(m, c)| MonomialDoc {
                        coef: i64::try_from(c).expect("coefficient fits in i64"),
                        vars: m.powers().iter().map(|&(p, e)| (name(p), e)).collect(),
                    })
                    .collect(),
                cmp: cmp.to_string(),
                k: i64::try_from(k).expect("threshold fits in i64"),
            },
            PropBody::Arbitrary { table, default } => PropDoc::Arbitrary {
                id: q.id.clone(),
                rows: table
                    .iter()
                    .map(|(m, b)| (MarkingDoc::Named(marking_map(net, m)), *b))
                    .collect(),
                default: *default,
            },
        }
    }
}

/// Parses a proposition list (a JSON array, or an object with a `props`
/// array), resolving place names against `net`.
pub fn props_from_json_str(text: &str, net: &PetriNet) -> Result<Vec<AtomicProp>, PropError> {
    let file: PropsFile = serde_json::from_str(text)?;
    let docs = match file {
        PropsFile::List(v) | PropsFile::Wrapped { props: v } => v,
    };
    docs.into_iter().map(|d| d.resolve(net)).collect()
}

pub fn props_to_json_value(props: &[AtomicProp], net: &PetriNet) -> serde_json::Value {
    let docs: Vec<PropDoc> = props.iter().map(|q| PropDoc::from_prop(q, net)).collect();
    serde_json::to_value(docs).expect("proposition documents serialize")
}

// ---------------------------------------------------------------------------
// Invisibility

/// Selects one of the eight invisibility notions.
///
/// * `reach`: only pairs of reachable markings count.
/// * `strong`: the relation is every `(m, m + d_t)` with both markings
///   nonnegative, enabled or not.
/// * `value`: the proposition's value `f` must be preserved, not just its
///   truth (arbitrary propositions fall back to truth).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvisibilityFlags {
    pub reach: bool,
    pub strong: bool,
    pub value: bool,
}

impl InvisibilityFlags {
    pub const PLAIN: InvisibilityFlags = InvisibilityFlags { reach: false, strong: false, value: false };

    pub fn new(reach: bool, strong: bool, value: bool) -> Self {
        Self { reach, strong, value }
    }

    pub fn all() -> Vec<InvisibilityFlags> {
        let mut out = Vec::new();
        for bits in 0..8u8 {
            out.push(Self::new(bits & 1 != 0, bits & 2 != 0, bits & 4 != 0));
        }
        out
    }

    /// One-step weakenings: restrict to reachable pairs, drop strong, drop
    /// value. Invisibility under `self` implies invisibility under each.
    pub fn weaker_neighbours(self) -> Vec<InvisibilityFlags> {
        let mut out = Vec::new();
        if !self.reach {
            out.push(Self { reach: true, ..self });
        }
        if self.strong {
            out.push(Self { strong: false, ..self });
        }
        if self.value {
            out.push(Self { value: false, ..self });
        }
        out
    }
}

impl FromStr for InvisibilityFlags {
    type Err = PropError;
    fn from_str(s: &str) -> Result<Self, PropError> {
        let mut f = InvisibilityFlags::PLAIN;
        for part in s.split([',', '+']).map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "plain" | "ordinary" => {}
                "reach" => f.reach = true,
                "strong" => f.strong = true,
                "value" => f.value = true,
                other => return Err(PropError::BadFlag(other.to_string())),
            }
        }
        Ok(f)
    }
}

impl fmt::Display for InvisibilityFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.reach {
            parts.push("reach");
        }
        if self.strong {
            parts.push("strong");
        }
        if self.value {
            parts.push("value");
        }
        if parts.is_empty() {
            f.write_str("plain")
        } else {
            f.write_str(&parts.join(","))
        }
    }
}

/// A pair of markings in the transition's relation that disagree on the
/// proposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvisibilityWitness {
    pub from: Marking,
    pub to: Marking,
}

impl fmt::Display for InvisibilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

/// Invisibility classifier for one net; caches the reachable set.
pub struct Classifier<'a> {
    net: &'a PetriNet,
    box_bound: u32,
    state_cap: usize,
    reachable: OnceCell<Option<Vec<Marking>>>,
}

impl<'a> Classifier<'a> {
    pub fn new(net: &'a PetriNet, box_bound: u32, state_cap: usize) -> Self {
        Self { net, box_bound, state_cap, reachable: OnceCell::new() }
    }

    /// A classifier that reuses an already explored reachable set.
    pub fn with_reachable(net: &'a PetriNet, box_bound: u32, reachable: Vec<Marking>) -> Self {
        let cell = OnceCell::new();
        let cap = reachable.len();
        let _ = cell.set(Some(reachable));
        Self { net, box_bound, state_cap: cap, reachable: cell }
    }

    /// Reachable markings in BFS order, or `None` past the state cap.
    pub fn reachable(&self) -> Option<&[Marking]> {
        self.reachable
            .get_or_init(|| self.net.reachable_markings(self.state_cap).ok())
            .as_deref()
    }

    /// The partner of `m` under the transition's relation, if any.
    fn related(&self, m: &Marking, t: TransitionId, delta: &[i64], strong: bool) -> Option<Marking> {
        if strong {
            m.add_delta(delta)
        } else if self.net.is_enabled(m, t) {
            Some(self.net.fire_unchecked(m, t))
        } else {
            None
        }
    }

    fn differ(&self, prop: &AtomicProp, by_value: bool, a: &Marking, b: &Marking) -> Result<bool, PropError> {
        if by_value {
            if let Some(f) = prop.value_poly() {
                return Ok(f.eval(&a.to_point())? != f.eval(&b.to_point())?);
            }
        }
        Ok(prop.eval(a)? != prop.eval(b)?)
    }

    pub fn classify(
        &self,
        prop: &AtomicProp,
        t: TransitionId,
        flags: InvisibilityFlags,
    ) -> Result<Verdict<InvisibilityWitness>, PropError> {
        let delta = self.net.delta(t);
        let by_value = flags.value && prop.value_poly().is_some();

        if flags.reach {
            let reach = self.reachable().ok_or(PropError::StateCapExceeded(self.state_cap))?;
            let set: HashSet<&Marking> = reach.iter().collect();
            for m in reach {
                if let Some(m2) = self.related(m, t, &delta, flags.strong) {
                    if set.contains(&m2) && self.differ(prop, by_value, m, &m2)? {
                        return Ok(Verdict::fails(InvisibilityWitness { from: m.clone(), to: m2 }));
                    }
                }
            }
            return Ok(Verdict::Holds);
        }

        // Witnesses among reachable pairs come first when the reachable set
        // is small enough to know.
        let reach_witness = |classifier: &Self| -> Result<Option<InvisibilityWitness>, PropError> {
            if let Some(reach) = classifier.reachable() {
                for m in reach {
                    if let Some(m2) = classifier.related(m, t, &delta, flags.strong) {
                        if classifier.differ(prop, by_value, m, &m2)? {
                            return Ok(Some(InvisibilityWitness { from: m.clone(), to: m2 }));
                        }
                    }
                }
            }
            Ok(None)
        };

        let Some(f) = prop.value_poly() else {
            return self.classify_table(prop, t, &delta, flags.strong, reach_witness(self)?);
        };

        let apex = self.apex(t, &delta, flags.strong);
        let g = f.shift_difference(&delta);
        let g_on_cone = g.translate(&apex.to_point());
        if g_on_cone.is_zero() {
            return Ok(Verdict::Holds);
        }
        if let Some(w) = reach_witness(self)? {
            return Ok(Verdict::fails(w));
        }
        if by_value {
            return Ok(Verdict::fails(self.value_witness(&f, &g_on_cone, &apex, &delta)?));
        }
        self.bounded_truth_check(prop, &f, t, &delta, &apex, flags.strong)
    }

    /// Least marking of the relation's domain: `W(·,t)` for firing,
    /// `max(0, −d_t)` for the shift relation.
    fn apex(&self, t: TransitionId, delta: &[i64], strong: bool) -> Marking {
        if strong {
            Marking::new(delta.iter().map(|&d| if d < 0 { (-d) as u32 } else { 0 }).collect())
        } else {
            Marking::new(self.net.pre_vector(t).to_vec())
        }
    }

    /// Some point `apex + y` with `y ∈ {0..deg}^vars(g)` where `g` is nonzero.
    fn value_witness(
        &self,
        f: &MultiPoly,
        g_on_cone: &MultiPoly,
        apex: &Marking,
        delta: &[i64],
    ) -> Result<InvisibilityWitness, PropError> {
        let vars: Vec<usize> = g_on_cone.vars().into_iter().collect();
        let degs: Vec<u32> = vars.iter().map(|&v| g_on_cone.degree_in(v)).collect();
        let mut y = vec![0u32; vars.len()];
        loop {
            let mut m = apex.clone();
            for (i, &v) in vars.iter().enumerate() {
                m.set(v, apex.tokens(v) + y[i]);
            }
            let m2 = m.add_delta(delta).expect("cone points stay nonnegative after the shift");
            if f.eval(&m.to_point())? != f.eval(&m2.to_point())? {
                return Ok(InvisibilityWitness { from: m, to: m2 });
            }
            if !odometer(&mut y, &degs) {
                unreachable!("a nonzero polynomial has a nonzero point on its degree grid");
            }
        }
    }

    /// Truth comparison for a linear or polynomial proposition whose value
    /// changes along the transition, over a box of markings.
    fn bounded_truth_check(
        &self,
        prop: &AtomicProp,
        f: &MultiPoly,
        t: TransitionId,
        delta: &[i64],
        apex: &Marking,
        strong: bool,
    ) -> Result<Verdict<InvisibilityWitness>, PropError> {
        let support = f.vars();
        let relevant: Vec<PlaceId> = (0..self.net.num_places())
            .filter(|&p| support.contains(&p) || self.net.pre(t, p) > 0 || delta[p] != 0)
            .collect();
        let lows: Vec<u32> = relevant.iter().map(|&p| apex.tokens(p)).collect();
        let mut bound = self.box_bound;
        if let PropBody::Linear { coeffs, cmp, k } = &prop.body {
            if let Some(w) = linear_box_witness(coeffs, *cmp, *k, &relevant, &lows, bound, apex, delta) {
                return Ok(Verdict::fails(w));
            }
        } else {
            while bound > 0 && box_size(&lows, bound) > BOX_POINT_LIMIT {
                bound -= 1;
            }
            let ranges: Vec<u32> = lows.iter().map(|&lo| bound.saturating_sub(lo)).collect();
            if lows.iter().all(|&lo| lo <= bound) {
                let mut y = vec![0u32; relevant.len()];
                loop {
                    let mut m = apex.clone();
                    for (i, &p) in relevant.iter().enumerate() {
                        m.set(p, lows[i] + y[i]);
                    }
                    if let Some(m2) = self.related(&m, t, delta, strong) {
                        if self.differ(prop, false, &m, &m2)? {
                            return Ok(Verdict::fails(InvisibilityWitness { from: m, to: m2 }));
                        }
                    }
                    if !odometer(&mut y, &ranges) {
                        break;
                    }
                }
            }
        }
        Ok(Verdict::bounded(Bound::MarkingBox {
            max_tokens: bound,
            places: relevant.iter().map(|&p| self.net.place_name(p).to_string()).collect(),
            reachable_included: self.reachable().is_some(),
        }))
    }

    /// Exact check for a tabulated proposition: two markings can disagree
    /// only if one of them is in the table.
    fn classify_table(
        &self,
        prop: &AtomicProp,
        t: TransitionId,
        delta: &[i64],
        strong: bool,
        reach_witness: Option<InvisibilityWitness>,
    ) -> Result<Verdict<InvisibilityWitness>, PropError> {
        if let Some(w) = reach_witness {
            return Ok(Verdict::fails(w));
        }
        let PropBody::Arbitrary { table, .. } = &prop.body else {
            unreachable!("only tables lack a value polynomial");
        };
        let back: Vec<i64> = delta.iter().map(|d| -d).collect();
        for x in table.keys() {
            if let Some(x2) = self.related(x, t, delta, strong) {
                if self.differ(prop, false, x, &x2)? {
                    return Ok(Verdict::fails(InvisibilityWitness { from: x.clone(), to: x2 }));
                }
            }
            if let Some(y) = x.add_delta(&back) {
                if self.related(&y, t, delta, strong).as_ref() == Some(x) && self.differ(prop, false, &y, x)? {
                    return Ok(Verdict::fails(InvisibilityWitness { from: y, to: x.clone() }));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// Replays a witness: the pair is in the relation selected by `flags`
    /// and disagrees on the proposition.
    pub fn verify_witness(
        &self,
        prop: &AtomicProp,
        t: TransitionId,
        flags: InvisibilityFlags,
        w: &InvisibilityWitness,
    ) -> Result<bool, PropError> {
        let delta = self.net.delta(t);
        if self.related(&w.from, t, &delta, flags.strong).as_ref() != Some(&w.to) {
            return Ok(false);
        }
        if flags.reach {
            let Some(reach) = self.reachable() else {
                return Err(PropError::StateCapExceeded(self.state_cap));
            };
            if !reach.contains(&w.from) || !reach.contains(&w.to) {
                return Ok(false);
            }
        }
        self.differ(prop, flags.value && prop.value_poly().is_some(), &w.from, &w.to)
    }
}

/// Number of box points for the given lower bounds.
fn box_size(lows: &[u32], bound: u32) -> u64 {
    lows.iter()
        .map(|&lo| u64::from(bound.saturating_sub(lo)) + 1)
        .fold(1u64, |acc, n| acc.saturating_mul(n))
}

/// Advances `y` in lexicographic order with `y[i] ≤ max[i]`; false when done.
fn odometer(y: &mut [u32], max: &[u32]) -> bool {
    for i in (0..y.len()).rev() {
        if y[i] < max[i] {
            y[i] += 1;
            for z in y.iter_mut().skip(i + 1) {
                *z = 0;
            }
            return true;
        }
    }
    false
}

/// For a linear proposition the truth at `m` and `m + d_t` depends only on
/// `v = f(m)` and the constant `f(d_t)`; enumerate the values `f` takes on
/// the box with a subset-sum table, then rebuild a marking for a bad value.
#[allow(clippy::too_many_arguments)]
fn linear_box_witness(
    coeffs: &BTreeMap<PlaceId, i64>,
    cmp: Cmp,
    k: i64,
    relevant: &[PlaceId],
    lows: &[u32],
    bound: u32,
    apex: &Marking,
    delta: &[i64],
) -> Option<InvisibilityWitness> {
    if lows.iter().any(|&lo| lo > bound) {
        return None;
    }
    let shift: i64 = coeffs.iter().map(|(&p, &c)| c * delta[p]).sum();
    // value -> (previous value, tokens chosen for this place), one map per stage
    let mut stages: Vec<BTreeMap<i64, (i64, u32)>> = Vec::new();
    let mut current: BTreeMap<i64, (i64, u32)> = BTreeMap::from([(0, (0, 0))]);
    for (i, &p) in relevant.iter().enumerate() {
        let c = coeffs.get(&p).copied().unwrap_or(0);
        let mut next = BTreeMap::new();
        for &v in current.keys() {
            let range: Vec<u32> = if c == 0 { vec![lows[i]] } else { (lows[i]..=bound).collect() };
            for x in range {
                next.entry(v + c * i64::from(x)).or_insert((v, x));
            }
        }
        stages.push(next.clone());
        current = next;
    }
    let k = BigInt::from(k);
    let bad = current.keys().copied().find(|&v| {
        cmp.holds(&BigInt::from(v), &k) != cmp.holds(&BigInt::from(v + shift), &k)
    })?;
    let mut m = apex.clone();
    let mut v = bad;
    for (i, &p) in relevant.iter().enumerate().rev() {
        let (prev, x) = stages[i][&v];
        m.set(p, x);
        v = prev;
    }
    let m2 = m.add_delta(delta)?;
    Some(InvisibilityWitness { from: m, to: m2 })
}

/// One-shot classification; see [`Classifier::classify`].
pub fn classify_invisibility(
    net: &PetriNet,
    prop: &AtomicProp,
    t: TransitionId,
    flags: InvisibilityFlags,
    box_bound: u32,
    state_cap: usize,
) -> Result<Verdict<InvisibilityWitness>, PropError> {
    Classifier::new(net, box_bound, state_cap).classify(prop, t, flags)
}

/// Whether the witness is in the relation selected by `flags` and
/// disagrees on the proposition.
pub fn verify_invisibility_witness(
    net: &PetriNet,
    prop: &AtomicProp,
    t: TransitionId,
    flags: InvisibilityFlags,
    w: &InvisibilityWitness,
    state_cap: usize,
) -> Result<bool, PropError> {
    Classifier::new(net, 0, state_cap).verify_witness(prop, t, flags, w)
}
