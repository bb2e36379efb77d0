//! Twists on pointed nodal curves: the Laplacian system for the per-vertex
//! coefficients, half-edge twists, polarity, the per-component linear
//! equivalence check, and smoothability verdicts.
//!
//! Convention: for an edge between `i` and `k`, the twist on the `i` side is
//! `s = b_i - b_k - 1`. Both sides of an edge then sum to `-2`, and on each
//! vertex `Σ m z + Σ s q ~ K`, with `K` the dualizing class of the component.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::curve::{CurveType, StableCurve};
use crate::divisor::{is_harmonic, ComponentModel, DivisorClass, DivisorError, Truth};
use crate::lattice::{solve_integral, IntMatrix, LatticeError, SolutionSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwistError {
    #[error("no integral twist: the deficit vector is not in the image of the Laplacian")]
    NoIntegralTwist,
    #[error("dual graph is disconnected")]
    Disconnected,
    #[error("tail `{vertex}` has twist -1 at node `{edge}`")]
    TailMinusOne { vertex: String, edge: String },
    #[error("curve is not of pseudocompact type")]
    NotPseudocompact,
    #[error("model for `{vertex}` does not fit the component: {reason}")]
    ModelMismatch { vertex: String, reason: String },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid genus {0} for a dimension bound")]
    InvalidGenus(i64),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistAssignment {
    /// Normalized so the minimum is zero.
    pub b: Vec<BigInt>,
    /// Right-hand side `M_i - (2g_i - 2 + h_i)` of the Laplacian system.
    pub rhs: Vec<BigInt>,
    /// Twists on the two sides of each edge, ordered as `Edge::ends`; `None` on loops.
    pub s: Vec<Option<[BigInt; 2]>>,
    pub m: Vec<BigInt>,
}

impl TwistAssignment {
    /// Twist on the `v` side of edge `e`.
    pub fn s_at(&self, curve: &StableCurve, e: usize, v: usize) -> Option<&BigInt> {
        let pair = self.s[e].as_ref()?;
        let ends = curve.edges()[e].ends;
        if ends[0] == v {
            Some(&pair[0])
        } else if ends[1] == v {
            Some(&pair[1])
        } else {
            None
        }
    }

    pub fn twist_sum(&self, curve: &StableCurve, v: usize) -> BigInt {
        curve
            .non_loop_edges_at(v)
            .into_iter()
            .filter_map(|e| self.s_at(curve, e, v).cloned())
            .sum()
    }

    /// `M_i / 2` when every `M_i` is even.
    pub fn half_aggregates(&self) -> Option<Vec<BigInt>> {
        let two = BigInt::from(2);
        self.m.iter().map(|m| (m % &two).is_zero().then(|| m / &two)).collect()
    }
}

/// Solves `L·b = rhs` and derives the half-edge twists.
pub fn solve_twist(curve: &StableCurve) -> Result<TwistAssignment, TwistError> {
    let n = curve.vertices().len();
    if n == 0 {
        return Err(TwistError::InvalidCurve("no vertices".into()));
    }
    let mut rhs = Vec::with_capacity(n);
    let mut m = Vec::with_capacity(n);
    for (i, v) in curve.vertices().iter().enumerate() {
        let mi = curve.leg_order_sum(i);
        let half_edges = curve.valence(i) as i64;
        rhs.push(&mi - BigInt::from(2 * v.genus - 2 + half_edges));
        m.push(mi);
    }
    let lap = curve.laplacian();
    let b = match solve_integral(&lap, &rhs)? {
        SolutionSet::NoSolution => return Err(TwistError::NoIntegralTwist),
        SolutionSet::Solvable { particular, kernel } => {
            if kernel.len() != 1 {
                return Err(TwistError::Disconnected);
            }
            normalize(particular)
        }
    };
    let s = curve
        .edges()
        .iter()
        .map(|e| {
            (!e.is_loop()).then(|| {
                let [i, k] = e.ends;
                [&b[i] - &b[k] - 1, &b[k] - &b[i] - 1]
            })
        })
        .collect();
    Ok(TwistAssignment { b, rhs, s, m })
}

fn normalize(b: Vec<BigInt>) -> Vec<BigInt> {
    let min = b.iter().min().cloned().unwrap_or_default();
    b.into_iter().map(|x| x - &min).collect()
}

/// The matrix the solver inverts, for reports.
pub fn twist_matrix(curve: &StableCurve) -> IntMatrix {
    curve.laplacian()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Holomorphic,
    Polar,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Holomorphic => "holomorphic",
            Polarity::Polar => "polar",
        }
    }
}

/// Polar iff some twist or leg order is negative. Rejects a tail twisted by -1.
pub fn classify_polarity(curve: &StableCurve, twist: &TwistAssignment) -> Result<Vec<Polarity>, TwistError> {
    let mut out = Vec::with_capacity(curve.vertices().len());
    for (v, vert) in curve.vertices().iter().enumerate() {
        let edges = curve.non_loop_edges_at(v);
        if edges.len() == 1 {
            let e = edges[0];
            if twist.s_at(curve, e, v) == Some(&BigInt::from(-1)) {
                return Err(TwistError::TailMinusOne {
                    vertex: vert.label.clone(),
                    edge: curve.edges()[e].label.clone(),
                });
            }
        }
        let polar = edges
            .iter()
            .any(|&e| twist.s_at(curve, e, v).is_some_and(|s| s.is_negative()))
            || curve.legs_at(v).any(|l| l.order.is_negative());
        out.push(if polar { Polarity::Polar } else { Polarity::Holomorphic });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwistStatus {
    TwistedCanonical,
    NotTwistedCanonical,
    Undecided,
}

impl TwistStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TwistStatus::TwistedCanonical => "twisted-canonical",
            TwistStatus::NotTwistedCanonical => "not-twisted-canonical",
            TwistStatus::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCheck {
    pub vertex: String,
    pub lhs: DivisorClass,
    pub rhs: DivisorClass,
    pub holds: Truth,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistCheck {
    pub twist: TwistAssignment,
    pub polarity: Vec<Polarity>,
    pub vertices: Vec<VertexCheck>,
    pub status: TwistStatus,
}

/// Per-vertex models keyed by vertex label.
pub type Models = BTreeMap<String, ComponentModel>;

/// How a model sits on a vertex with self-nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Fit {
    Plain,
    Normalization,
}

pub(crate) fn fit_model(curve: &StableCurve, v: usize, model: &ComponentModel) -> Result<Fit, TwistError> {
    let vert = &curve.vertices()[v];
    let loops = curve.loop_count(v);
    let mismatch = |reason: String| TwistError::ModelMismatch {
        vertex: vert.label.clone(),
        reason,
    };
    if model.component() != vert.label {
        return Err(mismatch(format!("model is for `{}`", model.component())));
    }
    if model.is_normalization() {
        if model.branches().len() != loops {
            return Err(mismatch(format!(
                "{} branch pairs for {} self-nodes",
                model.branches().len(),
                loops
            )));
        }
        if model.genus() != vert.genus {
            return Err(mismatch(format!(
                "normalization genus {} but vertex genus {}",
                model.genus(),
                vert.genus
            )));
        }
        Ok(Fit::Normalization)
    } else if model.genus() == curve.component_arithmetic_genus(v) {
        Ok(Fit::Plain)
    } else {
        Err(mismatch(format!(
            "model genus {} but component arithmetic genus {}",
            model.genus(),
            curve.component_arithmetic_genus(v)
        )))
    }
}

/// Names of the points on vertex `v` coming from its non-loop edges.
pub fn node_point(curve: &StableCurve, e: usize) -> &str {
    &curve.edges()[e].origin
}

/// Checks `Σ m z + Σ s q ~ K` on every vertex of a pseudocompact curve.
/// Exceptional vertices are rational and hold by degree.
pub fn check_twisted_canonical(curve: &StableCurve, models: &Models) -> Result<TwistCheck, TwistError> {
    if !curve.classify_type().kind.is_pseudocompact() {
        return Err(TwistError::NotPseudocompact);
    }
    let twist = solve_twist(curve)?;
    let polarity = classify_polarity(curve, &twist)?;
    let mut vertices = Vec::new();
    for (v, vert) in curve.vertices().iter().enumerate() {
        let label = &vert.label;
        let mut lhs = DivisorClass::zero(label);
        for leg in curve.legs_at(v) {
            lhs = lhs.with(&leg.label, leg.order.clone());
        }
        for e in curve.non_loop_edges_at(v) {
            let s = twist.s_at(curve, e, v).expect("non-loop edge").clone();
            lhs = lhs.with(node_point(curve, e), s);
        }
        let mut rhs = DivisorClass::canonical(label);
        let (holds, note) = if vert.exceptional {
            (Truth::True, Some("exceptional component".to_string()))
        } else {
            let implicit;
            let model = match models.get(label) {
                Some(m) => m,
                None if curve.component_arithmetic_genus(v) == 0 => {
                    let mut pts: Vec<String> = lhs.points().cloned().collect();
                    pts.sort();
                    implicit = ComponentModel::new(
                        label,
                        0,
                        pts,
                        crate::divisor::ModelKind::Rational {
                            coordinates: BTreeMap::new(),
                        },
                        vec![],
                    )?;
                    &implicit
                }
                None => {
                    vertices.push(VertexCheck {
                        vertex: label.clone(),
                        lhs,
                        rhs,
                        holds: Truth::Unknown,
                        note: Some("no model declared".into()),
                    });
                    continue;
                }
            };
            if fit_model(curve, v, model)? == Fit::Normalization {
                for (a, b) in model.branches() {
                    rhs = rhs.with(a, 1).with(b, 1);
                }
            }
            (model.linear_equiv(&lhs, &rhs)?, None)
        };
        vertices.push(VertexCheck {
            vertex: label.clone(),
            lhs,
            rhs,
            holds,
            note,
        });
    }
    let status = match Truth::all(vertices.iter().map(|c| c.holds)) {
        Truth::True => TwistStatus::TwistedCanonical,
        Truth::False => TwistStatus::NotTwistedCanonical,
        Truth::Unknown => TwistStatus::Undecided,
    };
    Ok(TwistCheck {
        twist,
        polarity,
        vertices,
        status,
    })
}

/// `B_dim - g`, or `B_dim - (g - 1)` when refined.
pub fn dimension_bound(b_dim: i64, g: i64, refined: bool) -> Result<i64, TwistError> {
    if g < 0 || (refined && g < 1) {
        return Err(TwistError::InvalidGenus(g));
    }
    Ok(if refined { b_dim - (g - 1) } else { b_dim - g })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// The per-component relation is necessary.
    Necessity,
    /// One separating node, holomorphic signature.
    OneNode,
    /// One separating node, both sides polar.
    OneNodePolar,
    SingleHolomorphicComponent,
    AllPolar,
    /// Two elliptic tails on a rational bridge in genus two.
    RationalBridgeGenusTwo,
    Genus3Catalog,
}

impl Criterion {
    pub fn tag(self) -> &'static str {
        match self {
            Criterion::Necessity => "necessity",
            Criterion::OneNode => "one-node-iff",
            Criterion::OneNodePolar => "one-node-polar-iff",
            Criterion::SingleHolomorphicComponent => "single-holomorphic-component",
            Criterion::AllPolar => "all-polar",
            Criterion::RationalBridgeGenusTwo => "rational-bridge-genus-two",
            Criterion::Genus3Catalog => "genus3-catalog",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothability {
    Yes(Criterion),
    No(Criterion),
    Inconclusive,
}

impl Smoothability {
    pub fn as_str(self) -> &'static str {
        match self {
            Smoothability::Yes(_) => "yes",
            Smoothability::No(_) => "no",
            Smoothability::Inconclusive => "inconclusive",
        }
    }

    pub fn criterion(self) -> Option<Criterion> {
        match self {
            Smoothability::Yes(c) | Smoothability::No(c) => Some(c),
            Smoothability::Inconclusive => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: TwistStatus,
    pub smoothable: Smoothability,
    /// Failed or undecided conditions, each prefixed by its criterion tag.
    pub reasons: Vec<String>,
    pub check: Option<TwistCheck>,
}

impl Verdict {
    fn new(status: TwistStatus, smoothable: Smoothability, reasons: Vec<String>, check: Option<TwistCheck>) -> Self {
        Self {
            status,
            smoothable,
            reasons,
            check,
        }
    }
}

/// Decision tree over the stated criteria; anything outside them is `Inconclusive`.
pub fn smoothability_verdict(curve: &StableCurve, models: &Models) -> Result<Verdict, TwistError> {
    let report = curve.validate();
    if !report.is_ok() {
        return Err(TwistError::InvalidCurve(format!("{:?}", report.violations)));
    }
    let info = curve.classify_type();
    if info.kind == CurveType::NonPseudocompact {
        return non_pseudocompact_verdict(curve, models);
    }
    let check = check_twisted_canonical(curve, models)?;
    let holomorphic_mu = curve.legs().iter().all(|l| !l.order.is_negative());
    let failing: Vec<String> = check
        .vertices
        .iter()
        .filter(|c| c.holds == Truth::False)
        .map(|c| format!("necessity: {} ~ {} fails on {}", c.lhs, c.rhs, c.vertex))
        .collect();
    let unknown: Vec<String> = check
        .vertices
        .iter()
        .filter(|c| c.holds == Truth::Unknown)
        .map(|c| {
            let why = c.note.clone().unwrap_or_else(|| "not derivable from the model".into());
            format!("undecided: {} ~ {} on {} ({why})", c.lhs, c.rhs, c.vertex)
        })
        .collect();
    let status = check.status;
    if status == TwistStatus::NotTwistedCanonical {
        return Ok(Verdict::new(
            status,
            Smoothability::No(Criterion::Necessity),
            failing,
            Some(check),
        ));
    }
    let decided = status == TwistStatus::TwistedCanonical;
    let conclude = |crit: Criterion, check: TwistCheck| {
        if decided {
            Verdict::new(status, Smoothability::Yes(crit), vec![], Some(check))
        } else {
            Verdict::new(status, Smoothability::Inconclusive, unknown.clone(), Some(check))
        }
    };
    let polar_count = check.polarity.iter().filter(|p| **p == Polarity::Polar).count();
    let holo_count = check.polarity.len() - polar_count;

    if info.bridges.len() == 1 {
        let sides = bridge_side_polarity(curve, &check, info.bridges[0]);
        if holomorphic_mu {
            return Ok(conclude(Criterion::OneNode, check));
        }
        if sides == [Polarity::Polar, Polarity::Polar] {
            return Ok(conclude(Criterion::OneNodePolar, check));
        }
    }
    if let Some(v) = rational_bridge_verdict(curve, models, &check) {
        let mut v = v;
        if !decided && matches!(v.smoothable, Smoothability::Yes(_)) {
            v.smoothable = Smoothability::Inconclusive;
            v.reasons.extend(unknown.clone());
        }
        return Ok(v);
    }
    if holomorphic_mu && holo_count == 1 {
        return Ok(conclude(Criterion::SingleHolomorphicComponent, check));
    }
    if !holomorphic_mu && holo_count == 0 {
        return Ok(conclude(Criterion::AllPolar, check));
    }
    let mut reasons = unknown;
    reasons.push(format!(
        "no stated criterion applies ({holo_count} holomorphic, {polar_count} polar components)"
    ));
    Ok(Verdict::new(status, Smoothability::Inconclusive, reasons, Some(check)))
}

/// Polarity of the two sides of a bridge, as the union of vertex polarities on each side.
fn bridge_side_polarity(curve: &StableCurve, check: &TwistCheck, bridge: usize) -> [Polarity; 2] {
    let ends = curve.edges()[bridge].ends;
    let mut out = [Polarity::Holomorphic; 2];
    for (side, &start) in ends.iter().enumerate() {
        let mut seen = vec![false; curve.vertices().len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            if check.polarity[v] == Polarity::Polar {
                out[side] = Polarity::Polar;
            }
            for (i, e) in curve.edges().iter().enumerate() {
                if i != bridge && e.ends.contains(&v) {
                    let w = e.other(v);
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
    }
    out
}

/// Genus-two chain `E1 - R - E2` with all marked points on the rational bridge.
fn rational_bridge_verdict(curve: &StableCurve, models: &Models, check: &TwistCheck) -> Option<Verdict> {
    let verts = curve.vertices();
    if verts.len() != 3 || curve.edges().len() != 2 || curve.arithmetic_genus() != 2 {
        return None;
    }
    let r = (0..3).find(|&v| verts[v].genus == 0 && curve.non_loop_edges_at(v).len() == 2)?;
    if (0..3).any(|v| v != r && verts[v].genus != 1) {
        return None;
    }
    if curve.legs().iter().any(|l| l.vertex != r) {
        return None;
    }
    let orders: Vec<BigInt> = curve.legs().iter().map(|l| l.order.clone()).collect();
    let status = check.status;
    let crit = Criterion::RationalBridgeGenusTwo;
    if orders == [BigInt::from(2)] {
        return Some(Verdict::new(
            status,
            Smoothability::No(crit),
            vec![format!(
                "{crit}: a double cover of the bridge cannot ramify at both nodes and the double zero"
            )],
            Some(check.clone()),
        ));
    }
    if orders != [BigInt::one(), BigInt::one()] {
        return None;
    }
    let z1 = &curve.legs()[0].label;
    let z2 = &curve.legs()[1].label;
    let edges = curve.non_loop_edges_at(r);
    let q1 = node_point(curve, edges[0]);
    let q2 = node_point(curve, edges[1]);
    let model = models.get(&verts[r].label);
    let conjugate = model.map_or(Truth::Unknown, |m| {
        if m.declares_conjugate(z1, z2) {
            return Truth::True;
        }
        match (m.coordinate(z1), m.coordinate(z2), m.coordinate(q1), m.coordinate(q2)) {
            (Some(a), Some(b), Some(c), Some(d)) => Truth::from_bool(is_harmonic(a, b, c, d)),
            _ => Truth::Unknown,
        }
    });
    let pencil = format!("the pencil of the double cover branched at {q1}, {q2}");
    Some(match conjugate {
        Truth::True => Verdict::new(status, Smoothability::Yes(crit), vec![], Some(check.clone())),
        Truth::False => Verdict::new(
            status,
            Smoothability::No(crit),
            vec![format!("{crit}: {z1} + {z2} is not in {pencil}")],
            Some(check.clone()),
        ),
        Truth::Unknown => Verdict::new(
            status,
            Smoothability::Inconclusive,
            vec![format!(
                "undecided: {crit}: whether {z1} + {z2} is in {pencil} (no coordinates or conjugacy declared)"
            )],
            Some(check.clone()),
        ),
    })
}

fn non_pseudocompact_verdict(curve: &StableCurve, models: &Models) -> Result<Verdict, TwistError> {
    let mut reasons = vec!["curve is not of pseudocompact type".to_string()];
    let four = curve.arithmetic_genus() == 3
        && curve.legs().len() == 1
        && curve.legs()[0].order == BigInt::from(4)
        && curve.edges().len() <= 2;
    if four {
        match crate::catalog::classify(curve, models) {
            Ok(cv) => {
                let either = cv.in_hyp.or(cv.in_odd);
                let crit = Criterion::Genus3Catalog;
                let smoothable = match either {
                    Truth::True => Smoothability::Yes(crit),
                    Truth::False => Smoothability::No(crit),
                    Truth::Unknown => Smoothability::Inconclusive,
                };
                reasons = cv.conditions.iter().map(|c| format!("{crit}: {c}")).collect();
                return Ok(Verdict::new(TwistStatus::Undecided, smoothable, reasons, None));
            }
            Err(e) => reasons.push(format!("{}: {e}", Criterion::Genus3Catalog)),
        }
    }
    Ok(Verdict::new(
        TwistStatus::Undecided,
        Smoothability::Inconclusive,
        reasons,
        None,
    ))
}
