//! Genus-three curves with at most two nodes and one marked point of order
//! four: which of the hyperelliptic and odd-spin components of the minimal
//! stratum contain them in their closure.
//!
//! Each topological type carries its own list of linear-equivalence
//! conditions, evaluated through the component models. Branch points of a
//! self-node labelled `q` are named `q'` and `q''` on the normalization.

use std::fmt;

use num_bigint::BigInt;

use crate::curve::StableCurve;
use crate::divisor::{ComponentModel, DivisorClass, DivisorError, ModelKind, Truth};
use crate::twist::{fit_model, Fit, Models, TwistError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),
    #[error("arithmetic genus {0}, expected 3")]
    WrongGenus(i64),
    #[error("expected a single marked point of order 4")]
    WrongSignature,
    #[error("model for `{vertex}`: {reason}")]
    ModelKind { vertex: String, reason: String },
    #[error("models for case {0} make both components contain the curve, which only case XII allows")]
    ContradictoryModels(CaseLabel),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}

impl From<TwistError> for CatalogError {
    fn from(e: TwistError) -> Self {
        match e {
            TwistError::ModelMismatch { vertex, reason } => CatalogError::ModelKind { vertex, reason },
            TwistError::Divisor(d) => CatalogError::Divisor(d),
            other => CatalogError::UnsupportedTopology(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
    XI,
    XII,
    XIII,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 13] = [
        CaseLabel::I,
        CaseLabel::II,
        CaseLabel::III,
        CaseLabel::IV,
        CaseLabel::V,
        CaseLabel::VI,
        CaseLabel::VII,
        CaseLabel::VIII,
        CaseLabel::IX,
        CaseLabel::X,
        CaseLabel::XI,
        CaseLabel::XII,
        CaseLabel::XIII,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::I => "I",
            CaseLabel::II => "II",
            CaseLabel::III => "III",
            CaseLabel::IV => "IV",
            CaseLabel::V => "V",
            CaseLabel::VI => "VI",
            CaseLabel::VII => "VII",
            CaseLabel::VIII => "VIII",
            CaseLabel::IX => "IX",
            CaseLabel::X => "X",
            CaseLabel::XI => "XI",
            CaseLabel::XII => "XII",
            CaseLabel::XIII => "XIII",
        }
    }

    pub fn node_count(self) -> usize {
        match self {
            CaseLabel::I | CaseLabel::II | CaseLabel::III => 1,
            _ => 2,
        }
    }

    /// Every node separating or a self-node.
    pub fn is_pseudocompact(self) -> bool {
        !matches!(self, CaseLabel::XI | CaseLabel::XII)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A case label with the curve's vertices and edges in the order the case
/// names them: components `C1, C2, ...` (the rational middle `C0` of case IV
/// first), nodes `q` or `q1, q2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRoles {
    pub case: CaseLabel,
    pub z: String,
    pub components: Vec<usize>,
    pub nodes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogVerdict {
    pub case: CaseLabel,
    pub in_hyp: Truth,
    pub in_odd: Truth,
    /// Each evaluated condition with its value.
    pub conditions: Vec<String>,
}

pub fn identify_case(curve: &StableCurve) -> Result<CaseRoles, CatalogError> {
    let g = curve.arithmetic_genus();
    if g != 3 {
        return Err(CatalogError::WrongGenus(g));
    }
    let legs = curve.legs();
    if legs.len() != 1 || legs[0].order != BigInt::from(4) {
        return Err(CatalogError::WrongSignature);
    }
    if curve.edges().len() > 2 {
        return Err(CatalogError::UnsupportedTopology(format!(
            "{} nodes; only curves with at most two nodes are catalogued",
            curve.edges().len()
        )));
    }
    let report = curve.validate();
    if !report.is_ok() {
        return Err(CatalogError::UnsupportedTopology(format!("{:?}", report.violations)));
    }
    if curve.vertices().iter().any(|v| v.exceptional) {
        return Err(CatalogError::UnsupportedTopology(
            "semistable model with exceptional components".into(),
        ));
    }
    let z = legs[0].label.clone();
    let zv = legs[0].vertex;
    let genus = |v: usize| curve.vertices()[v].genus;
    let edges = curve.edges();
    let nv = curve.vertices().len();
    let roles = |case, components, nodes| CaseRoles {
        case,
        z: z.clone(),
        components,
        nodes,
    };
    let unsupported = || CatalogError::UnsupportedTopology("no matching configuration".into());
    match (nv, edges.len()) {
        (2, 1) => {
            let other = 1 - zv;
            match (genus(zv), genus(other)) {
                (1, 2) => Ok(roles(CaseLabel::I, vec![zv, other], vec![0])),
                (2, 1) => Ok(roles(CaseLabel::II, vec![other, zv], vec![0])),
                _ => Err(unsupported()),
            }
        }
        (1, 1) if genus(0) == 2 => Ok(roles(CaseLabel::III, vec![0], vec![0])),
        (1, 2) if genus(0) == 1 => Ok(roles(CaseLabel::XIII, vec![0], vec![0, 1])),
        (3, 2) => {
            let mid = (0..3).find(|&v| curve.valence(v) == 2).ok_or_else(unsupported)?;
            let ends: Vec<usize> = (0..3).filter(|&v| v != mid).collect();
            let edge_to = |v: usize| (0..2).find(|&e| edges[e].ends.contains(&v)).expect("chain");
            match genus(mid) {
                0 if zv == mid => {
                    let (c1, c2) = if genus(ends[0]) == 1 {
                        (ends[0], ends[1])
                    } else {
                        (ends[1], ends[0])
                    };
                    if genus(c1) != 1 || genus(c2) != 2 {
                        return Err(unsupported());
                    }
                    Ok(roles(CaseLabel::IV, vec![mid, c1, c2], vec![edge_to(c1), edge_to(c2)]))
                }
                1 if ends.iter().all(|&v| genus(v) == 1) => {
                    if zv == mid {
                        Ok(roles(
                            CaseLabel::VI,
                            vec![ends[0], mid, ends[1]],
                            vec![edge_to(ends[0]), edge_to(ends[1])],
                        ))
                    } else {
                        let c3 = if ends[0] == zv { ends[1] } else { ends[0] };
                        Ok(roles(CaseLabel::V, vec![zv, mid, c3], vec![edge_to(zv), edge_to(c3)]))
                    }
                }
                _ => Err(unsupported()),
            }
        }
        (2, 2) => {
            let loop_e = (0..2).find(|&e| edges[e].is_loop());
            match loop_e {
                Some(le) => {
                    let bridge = 1 - le;
                    let c1 = edges[le].ends[0];
                    let c2 = 1 - c1;
                    let nodes = vec![le, bridge];
                    match (genus(c1), genus(c2), zv == c1) {
                        (1, 1, true) => Ok(roles(CaseLabel::VII, vec![c1, c2], nodes)),
                        (1, 1, false) => Ok(roles(CaseLabel::VIII, vec![c1, c2], nodes)),
                        (0, 2, true) => Ok(roles(CaseLabel::IX, vec![c1, c2], nodes)),
                        (0, 2, false) => Ok(roles(CaseLabel::X, vec![c1, c2], nodes)),
                        _ => Err(unsupported()),
                    }
                }
                None => {
                    let other = 1 - zv;
                    match (genus(zv), genus(other)) {
                        (1, 1) => Ok(roles(CaseLabel::XI, vec![zv, other], vec![0, 1])),
                        (0, 2) => Ok(roles(CaseLabel::XII, vec![zv, other], vec![0, 1])),
                        _ => Err(unsupported()),
                    }
                }
            }
        }
        _ => Err(unsupported()),
    }
}

/// Evaluates conditions on one component, recording each in the verdict log.
struct Ctx<'a> {
    curve: &'a StableCurve,
    models: &'a Models,
    log: Vec<String>,
}

impl Ctx<'_> {
    fn model(&self, v: usize, want: Fit) -> Result<Option<&ComponentModel>, CatalogError> {
        let label = &self.curve.vertices()[v].label;
        let Some(m) = self.models.get(label) else {
            return Ok(None);
        };
        let fit = fit_model(self.curve, v, m)?;
        if fit != want {
            let reason = match want {
                Fit::Normalization => "expects a normalization model with branch points",
                Fit::Plain => "expects a model of the nodal component itself",
            };
            return Err(CatalogError::ModelKind {
                vertex: label.clone(),
                reason: reason.into(),
            });
        }
        if fit == Fit::Normalization {
            for e in self.curve.loops_at(v) {
                let (a, b) = branch_names(self.curve, e);
                let found = m
                    .branches()
                    .iter()
                    .any(|(x, y)| (x == &a && y == &b) || (x == &b && y == &a));
                if !found {
                    return Err(CatalogError::ModelKind {
                        vertex: label.clone(),
                        reason: format!("missing branch pair {a}, {b}"),
                    });
                }
            }
        }
        if self.curve.vertices()[v].genus == 1 && !matches!(m.kind(), ModelKind::Elliptic { .. }) {
            return Err(CatalogError::ModelKind {
                vertex: label.clone(),
                reason: "expects a group model".into(),
            });
        }
        Ok(Some(m))
    }

    /// `lhs ~ rhs` on component `v`; terms are (point, coefficient), `"K"` for the canonical class.
    fn equiv(&mut self, v: usize, want: Fit, lhs: &[(&str, i64)], rhs: &[(&str, i64)]) -> Result<Truth, CatalogError> {
        let label = self.curve.vertices()[v].label.clone();
        let build = |terms: &[(&str, i64)]| {
            terms.iter().fold(DivisorClass::zero(&label), |d, (p, k)| {
                if *p == "K" {
                    d.with_canonical(*k)
                } else {
                    d.with(p, *k)
                }
            })
        };
        let (l, r) = (build(lhs), build(rhs));
        let value = match self.model(v, want)? {
            Some(m) => m.linear_equiv(&l, &r)?,
            None if self.curve.component_arithmetic_genus(v) == 0 => Truth::from_bool(l.degree(0) == r.degree(0)),
            None => Truth::Unknown,
        };
        self.log.push(format!("{label}: {l} ~ {r} is {value}"));
        Ok(value)
    }

    fn residue_sum_zero(&mut self, v: usize, a: &str, b: &str) -> Result<Truth, CatalogError> {
        let label = self.curve.vertices()[v].label.clone();
        let value = match self.model(v, Fit::Normalization)? {
            Some(m) if m.has_residue_sum_zero(a, b) => Truth::True,
            _ => Truth::Unknown,
        };
        self.log
            .push(format!("{label}: residues at {a}, {b} sum to zero is {value}"));
        Ok(value)
    }
}

fn branch_names(curve: &StableCurve, e: usize) -> (String, String) {
    let o = &curve.edges()[e].origin;
    (format!("{o}'"), format!("{o}''"))
}

pub fn classify(curve: &StableCurve, models: &Models) -> Result<CatalogVerdict, CatalogError> {
    use Fit::{Normalization as N, Plain as P};
    let roles = identify_case(curve)?;
    let mut cx = Ctx {
        curve,
        models,
        log: Vec::new(),
    };
    let z = roles.z.as_str();
    let c = &roles.components;
    let node = |i: usize| curve.edges()[roles.nodes[i]].origin.clone();
    let (in_hyp, in_odd) = match roles.case {
        CaseLabel::I => {
            let q = node(0);
            let tors2 = cx.equiv(c[0], P, &[(z, 2)], &[(&q, 2)])?;
            let tors4 = cx.equiv(c[0], P, &[(z, 4)], &[(&q, 4)])?;
            let weier = cx.equiv(c[1], P, &[(&q, 2)], &[("K", 1)])?;
            (tors2.and(weier), tors4.and(!tors2).and(weier))
        }
        CaseLabel::II => {
            let q = node(0);
            let zz = cx.equiv(c[1], P, &[(z, 2)], &[(&q, 2)])?;
            let qk = cx.equiv(c[1], P, &[(&q, 2)], &[("K", 1)])?;
            let four = cx.equiv(c[1], P, &[(z, 4)], &[(&q, 2), ("K", 1)])?;
            let zk = cx.equiv(c[1], P, &[(z, 2)], &[("K", 1)])?;
            (zz.and(qk), four.and(!zk))
        }
        CaseLabel::III => {
            let (a, b) = branch_names(curve, roles.nodes[0]);
            let br = cx.equiv(c[0], N, &[(&a, 1), (&b, 1)], &[(z, 2)])?;
            let zk = cx.equiv(c[0], N, &[(z, 2)], &[("K", 1)])?;
            let four = cx.equiv(c[0], N, &[(z, 4)], &[("K", 1), (&a, 1), (&b, 1)])?;
            (br.and(zk), four.and(!zk))
        }
        CaseLabel::IV => {
            cx.log
                .push("a double cover of the rational middle component would ramify at three points".into());
            (Truth::False, Truth::False)
        }
        CaseLabel::V => {
            let (q1, q2) = (node(0), node(1));
            let t2 = cx.equiv(c[0], P, &[(z, 2)], &[(&q1, 2)])?;
            let t4 = cx.equiv(c[0], P, &[(z, 4)], &[(&q1, 4)])?;
            let mid = cx.equiv(c[1], P, &[(&q1, 2)], &[(&q2, 2)])?;
            (t2.and(mid), mid.and(t4).and(!t2))
        }
        CaseLabel::VI => {
            let (q1, q2) = (node(0), node(1));
            let a = cx.equiv(c[1], P, &[(z, 2)], &[(&q1, 2)])?;
            let b = cx.equiv(c[1], P, &[(z, 2)], &[(&q2, 2)])?;
            let four = cx.equiv(c[1], P, &[(z, 4)], &[(&q1, 2), (&q2, 2)])?;
            let sum = cx.equiv(c[1], P, &[(z, 2)], &[(&q1, 1), (&q2, 1)])?;
            (a.and(b), four.and(sum))
        }
        CaseLabel::VII => {
            let (a, b) = branch_names(curve, roles.nodes[0]);
            let q2 = node(1);
            let zq = cx.equiv(c[0], N, &[(z, 2)], &[(&q2, 2)])?;
            let qb = cx.equiv(c[0], N, &[(&q2, 2)], &[(&a, 1), (&b, 1)])?;
            let four = cx.equiv(c[0], N, &[(z, 4)], &[(&q2, 2), (&a, 1), (&b, 1)])?;
            (zq.and(qb), four.and(!zq))
        }
        CaseLabel::VIII => {
            let (a, b) = branch_names(curve, roles.nodes[0]);
            let q2 = node(1);
            let qb = cx.equiv(c[0], N, &[(&q2, 2)], &[(&a, 1), (&b, 1)])?;
            let t2 = cx.equiv(c[1], P, &[(z, 2)], &[(&q2, 2)])?;
            let t4 = cx.equiv(c[1], P, &[(z, 4)], &[(&q2, 4)])?;
            (qb.and(t2), qb.and(t4).and(!t2))
        }
        CaseLabel::IX => {
            // C1 is the nodal rational curve itself, with its group of degree-zero classes
            let q2 = node(1);
            let weier = cx.equiv(c[1], P, &[(&q2, 2)], &[("K", 1)])?;
            let t2 = cx.equiv(c[0], P, &[(z, 2)], &[(&q2, 2)])?;
            let t4 = cx.equiv(c[0], P, &[(z, 4)], &[(&q2, 4)])?;
            (weier.and(t2), weier.and(t4).and(!t2))
        }
        CaseLabel::X => {
            let q2 = node(1);
            let zq = cx.equiv(c[1], P, &[(z, 2)], &[(&q2, 2)])?;
            let four = cx.equiv(c[1], P, &[(z, 4)], &[(&q2, 2), ("K", 1)])?;
            let zk = cx.equiv(c[1], P, &[(z, 2)], &[("K", 1)])?;
            (zq, four.and(!zk))
        }
        CaseLabel::XI => {
            let (q1, q2) = (node(0), node(1));
            let sum = cx.equiv(c[0], P, &[(z, 2)], &[(&q1, 1), (&q2, 1)])?;
            let four = cx.equiv(c[0], P, &[(z, 4)], &[(&q1, 2), (&q2, 2)])?;
            (sum, four.and(!sum))
        }
        CaseLabel::XII => {
            let (q1, q2) = (node(0), node(1));
            let hyp = cx.equiv(c[1], P, &[(&q1, 1), (&q2, 1)], &[("K", 1)])?;
            let w1 = cx.equiv(c[1], P, &[(&q1, 2)], &[("K", 1)])?;
            let w2 = cx.equiv(c[1], P, &[(&q2, 2)], &[("K", 1)])?;
            (hyp, Truth::any([hyp, w1, w2]))
        }
        CaseLabel::XIII => {
            let (a1, b1) = branch_names(curve, roles.nodes[0]);
            let (a2, b2) = branch_names(curve, roles.nodes[1]);
            let s1 = cx.equiv(c[0], N, &[(&a1, 1), (&b1, 1)], &[(z, 2)])?;
            let s2 = cx.equiv(c[0], N, &[(&a2, 1), (&b2, 1)], &[(z, 2)])?;
            let four = cx.equiv(c[0], N, &[(z, 4)], &[(&a1, 1), (&b1, 1), (&a2, 1), (&b2, 1)])?;
            let r1 = cx.residue_sum_zero(c[0], &a1, &b1)?;
            let r2 = cx.residue_sum_zero(c[0], &a2, &b2)?;
            (s1.and(s2), Truth::all([four, r1, r2, !s1, !s2]))
        }
    };
    if in_hyp == Truth::True && in_odd == Truth::True && roles.case != CaseLabel::XII {
        return Err(CatalogError::ContradictoryModels(roles.case));
    }
    Ok(CatalogVerdict {
        case: roles.case,
        in_hyp,
        in_odd,
        conditions: cx.log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::Axiom;

    fn models(ms: Vec<ComponentModel>) -> Models {
        ms.into_iter().map(|m| (m.component().to_string(), m)).collect()
    }

    fn d(c: &str, s: &str) -> DivisorClass {
        DivisorClass::parse(c, s).unwrap()
    }

    fn one_node_i() -> StableCurve {
        StableCurve::builder()
            .vertex("C1", 1)
            .vertex("C2", 2)
            .edge("q", "C1", "C2")
            .leg("z", "C1", 4)
            .build()
            .unwrap()
    }

    #[test]
    fn identifies_cases() {
        assert_eq!(identify_case(&one_node_i()).unwrap().case, CaseLabel::I);
        let three = StableCurve::builder()
            .vertex("A", 1)
            .vertex("B", 1)
            .vertex("C", 1)
            .edge("e1", "A", "B")
            .edge("e2", "B", "C")
            .edge("e3", "C", "A")
            .leg("z", "A", 4)
            .build()
            .unwrap();
        assert!(matches!(
            identify_case(&three),
            Err(CatalogError::WrongGenus(_)) | Err(CatalogError::UnsupportedTopology(_))
        ));
        let xii = StableCurve::builder()
            .vertex("C1", 0)
            .vertex("C2", 2)
            .edge("q1", "C1", "C2")
            .edge("q2", "C2", "C1")
            .leg("z", "C1", 4)
            .build()
            .unwrap();
        assert_eq!(identify_case(&xii).unwrap().case, CaseLabel::XII);
    }

    #[test]
    fn case_i_split() {
        let c2 = ComponentModel::axiomatic("C2", 2, &["q"], vec![Axiom::WeierstrassPoint("q".into())]).unwrap();
        let hyp = models(vec![
            ComponentModel::cyclic("C1", 2, &[("q", 0), ("z", 1)]).unwrap(),
            c2.clone(),
        ]);
        let v = classify(&one_node_i(), &hyp).unwrap();
        assert_eq!((v.in_hyp, v.in_odd), (Truth::True, Truth::False));
        let odd = models(vec![
            ComponentModel::cyclic("C1", 4, &[("q", 0), ("z", 1)]).unwrap(),
            c2,
        ]);
        let v = classify(&one_node_i(), &odd).unwrap();
        assert_eq!((v.in_hyp, v.in_odd), (Truth::False, Truth::True));
    }

    #[test]
    fn double_conic_lies_in_both() {
        let c = StableCurve::builder()
            .vertex("X", 2)
            .vertex("R", 0)
            .edge("q1", "R", "X")
            .edge("q2", "X", "R")
            .leg("z", "R", 4)
            .build()
            .unwrap();
        let x = ComponentModel::axiomatic(
            "X",
            2,
            &["q1", "q2"],
            vec![Axiom::HyperellipticConjugate("q1".into(), "q2".into())],
        )
        .unwrap();
        let v = classify(&c, &models(vec![x])).unwrap();
        assert_eq!(v.case, CaseLabel::XII);
        assert_eq!((v.in_hyp, v.in_odd), (Truth::True, Truth::True));
    }

    #[test]
    fn case_iv_never() {
        let c = StableCurve::builder()
            .vertex("C0", 0)
            .vertex("C1", 1)
            .vertex("C2", 2)
            .edge("q1", "C0", "C1")
            .edge("q2", "C0", "C2")
            .leg("z", "C0", 4)
            .build()
            .unwrap();
        let v = classify(&c, &Models::new()).unwrap();
        assert_eq!(
            (v.case, v.in_hyp, v.in_odd),
            (CaseLabel::IV, Truth::False, Truth::False)
        );
    }

    #[test]
    fn normalization_required_on_self_node() {
        let c = StableCurve::builder()
            .vertex("C", 2)
            .edge("q", "C", "C")
            .leg("z", "C", 4)
            .build()
            .unwrap();
        let nodal = ComponentModel::axiomatic("C", 3, &["z"], vec![]).unwrap();
        assert!(matches!(
            classify(&c, &models(vec![nodal])),
            Err(CatalogError::ModelKind { .. })
        ));
        let norm = ComponentModel::axiomatic(
            "C",
            2,
            &["z", "q'", "q''"],
            vec![
                Axiom::WeierstrassPoint("z".into()),
                Axiom::LinearEquivalence(d("C", "q' + q''"), d("C", "2z")),
            ],
        )
        .unwrap()
        .with_branches(vec![("q'".into(), "q''".into())])
        .unwrap();
        let v = classify(&c, &models(vec![norm])).unwrap();
        assert_eq!(
            (v.case, v.in_hyp, v.in_odd),
            (CaseLabel::III, Truth::True, Truth::False)
        );
    }
}
