//! Limit spin structures on curves with an even signature, and their parity.
//!
//! Separating nodes are blown up by one exceptional rational component,
//! which carries `O(1)`. On each original component the square root is
//! `Σ (k/2) z + Σ (b_i - b_j) q`, where `b` solves the Laplacian system that
//! fixes every degree to `g_i - 1` (and `1` on exceptional components).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::curve::StableCurve;
use crate::divisor::{ComponentModel, DivisorClass, DivisorError, ModelKind, H0};
use crate::lattice::{solve_integral, LatticeError, SolutionSet};
use crate::twist::{fit_model, Fit, Models, TwistError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpinError {
    #[error("leg `{leg}` has odd order {order}")]
    OddEntry { leg: String, order: BigInt },
    #[error("curve is not of pseudocompact type")]
    NotPseudocompact,
    #[error("no integral square root: the half-twist system has no integer solution")]
    NoIntegralSolution,
    #[error("dual graph is disconnected")]
    Disconnected,
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinStructure {
    /// The semistable model the structure lives on.
    pub blown_up: StableCurve,
    /// Labels of the nodes that were subdivided.
    pub subdivided: Vec<String>,
    /// Normalized half-twists on `blown_up`.
    pub b: Vec<BigInt>,
    /// `None` on exceptional components, which carry `O(1)`.
    pub eta: Vec<Option<DivisorClass>>,
}

impl SpinStructure {
    /// Degrees per vertex of the blown-up curve, `O(1)` counted as 1.
    pub fn degrees(&self) -> Vec<BigInt> {
        self.eta
            .iter()
            .map(|e| match e {
                Some(d) => d.degree(1),
                None => BigInt::one(),
            })
            .collect()
    }
}

/// Blows up every separating node. Rejects curves with non-separating,
/// non-loop nodes.
pub fn limit_spin(curve: &StableCurve) -> Result<SpinStructure, SpinError> {
    let info = curve.classify_type();
    if !info.kind.is_pseudocompact() {
        return Err(SpinError::NotPseudocompact);
    }
    build(curve, &info.bridges)
}

/// Blows up every non-loop node, separating or not. On curves with
/// non-separating nodes this follows the same recipe but may have no
/// integral solution.
pub fn limit_spin_all_nodes(curve: &StableCurve) -> Result<SpinStructure, SpinError> {
    let edges: Vec<usize> = (0..curve.edges().len())
        .filter(|&e| !curve.edges()[e].is_loop())
        .collect();
    build(curve, &edges)
}

fn build(curve: &StableCurve, subdivide: &[usize]) -> Result<SpinStructure, SpinError> {
    for leg in curve.legs() {
        if leg.order.is_odd() {
            return Err(SpinError::OddEntry {
                leg: leg.label.clone(),
                order: leg.order.clone(),
            });
        }
    }
    let labels: Vec<String> = subdivide.iter().map(|&e| curve.edges()[e].label.clone()).collect();
    let mut blown = curve.clone();
    for l in &labels {
        blown = blown
            .insert_rational_chain(l, 1)
            .map_err(|e| TwistError::InvalidCurve(e.to_string()))?;
    }
    let n = blown.vertices().len();
    let two = BigInt::from(2);
    let half = |v: usize| -> BigInt { blown.leg_order_sum(v) / &two };
    let rhs: Vec<BigInt> = (0..n)
        .map(|v| {
            if blown.vertices()[v].exceptional {
                BigInt::from(-1)
            } else {
                half(v) - BigInt::from(blown.component_arithmetic_genus(v) - 1)
            }
        })
        .collect();
    let b = match solve_integral(&blown.laplacian(), &rhs)? {
        SolutionSet::NoSolution => return Err(SpinError::NoIntegralSolution),
        SolutionSet::Solvable { particular, kernel } => {
            if kernel.len() != 1 {
                return Err(SpinError::Disconnected);
            }
            let min = particular.iter().min().cloned().unwrap_or_default();
            particular.into_iter().map(|x| x - &min).collect::<Vec<_>>()
        }
    };
    let eta = (0..n)
        .map(|v| {
            let vert = &blown.vertices()[v];
            if vert.exceptional {
                return None;
            }
            let mut d = DivisorClass::zero(&vert.label);
            for leg in blown.legs_at(v) {
                d = d.with(&leg.label, &leg.order / &two);
            }
            for e in blown.non_loop_edges_at(v) {
                let w = blown.edges()[e].other(v);
                d = d.with(&blown.edges()[e].origin, &b[v] - &b[w]);
            }
            Some(d)
        })
        .collect();
    Ok(SpinStructure {
        blown_up: blown,
        subdivided: labels,
        b,
        eta,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Undecided(Vec<String>),
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Undecided(_) => "undecided",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-vertex `h⁰(η_i)` on original components, `None` where undecided.
pub fn vertex_h0(spin: &SpinStructure, models: &Models) -> Result<BTreeMap<String, Option<BigInt>>, SpinError> {
    let curve = &spin.blown_up;
    let mut out = BTreeMap::new();
    for (v, eta) in spin.eta.iter().enumerate() {
        let Some(eta) = eta else { continue };
        let label = &curve.vertices()[v].label;
        let implicit;
        let model = match models.get(label) {
            Some(m) => {
                if fit_model(curve, v, m)? == Fit::Normalization {
                    out.insert(label.clone(), None);
                    continue;
                }
                m
            }
            None if curve.component_arithmetic_genus(v) == 0 => {
                implicit = ComponentModel::new(
                    label,
                    0,
                    eta.points().cloned().collect(),
                    ModelKind::Rational {
                        coordinates: BTreeMap::new(),
                    },
                    vec![],
                )?;
                &implicit
            }
            None => {
                out.insert(label.clone(), None);
                continue;
            }
        };
        let h = match model.h0(eta)? {
            H0::Known(k) => Some(k),
            H0::Unknown => None,
        };
        out.insert(label.clone(), h);
    }
    Ok(out)
}

/// Sum of `h⁰` over original components, mod 2.
pub fn parity(spin: &SpinStructure, models: &Models) -> Result<Parity, SpinError> {
    let h = vertex_h0(spin, models)?;
    let mut total = BigInt::zero();
    let mut missing = Vec::new();
    for (label, value) in &h {
        match value {
            Some(k) => total += k,
            None => {
                let eta = spin
                    .eta
                    .iter()
                    .flatten()
                    .find(|d| &d.component == label)
                    .map(|d| d.to_string())
                    .unwrap_or_default();
                missing.push(format!("h0({eta}) on {label} is not determined by its model"));
            }
        }
    }
    if !missing.is_empty() {
        return Ok(Parity::Undecided(missing));
    }
    Ok(if total.is_even() { Parity::Even } else { Parity::Odd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::Axiom;

    fn d(c: &str, s: &str) -> DivisorClass {
        DivisorClass::parse(c, s).unwrap()
    }

    fn models(ms: Vec<ComponentModel>) -> Models {
        ms.into_iter().map(|m| (m.component().to_string(), m)).collect()
    }

    fn case_i() -> StableCurve {
        StableCurve::builder()
            .vertex("C1", 1)
            .vertex("C2", 2)
            .edge("q", "C1", "C2")
            .leg("z", "C1", 4)
            .build()
            .unwrap()
    }

    #[test]
    fn case_i_structure() {
        let s = limit_spin(&case_i()).unwrap();
        assert_eq!(s.eta[0], Some(d("C1", "2z - 2q")));
        assert_eq!(s.eta[1], Some(d("C2", "q")));
        assert_eq!(s.eta[2], None);
        let total: BigInt = s.degrees().iter().sum();
        assert_eq!(total, BigInt::from(2));
    }

    #[test]
    fn case_i_parity() {
        let s = limit_spin(&case_i()).unwrap();
        let c2 = ComponentModel::axiomatic("C2", 2, &["q"], vec![Axiom::WeierstrassPoint("q".into())]).unwrap();
        let even = models(vec![
            ComponentModel::cyclic("C1", 2, &[("q", 0), ("z", 1)]).unwrap(),
            c2.clone(),
        ]);
        assert_eq!(parity(&s, &even).unwrap(), Parity::Even);
        let odd = models(vec![
            ComponentModel::cyclic("C1", 4, &[("q", 0), ("z", 1)]).unwrap(),
            c2,
        ]);
        assert_eq!(parity(&s, &odd).unwrap(), Parity::Odd);
    }

    #[test]
    fn case_xi_structure() {
        let c = StableCurve::builder()
            .vertex("C1", 1)
            .vertex("C2", 1)
            .edge("q1", "C1", "C2")
            .edge("q2", "C1", "C2")
            .leg("z", "C1", 4)
            .build()
            .unwrap();
        assert_eq!(limit_spin(&c), Err(SpinError::NotPseudocompact));
        let s = limit_spin_all_nodes(&c).unwrap();
        assert_eq!(s.eta[0], Some(d("C1", "2z - q1 - q2")));
        assert_eq!(s.eta[1], Some(d("C2", "0")));
        assert_eq!(s.eta[2..], [None, None]);
        let odd = models(vec![
            ComponentModel::cyclic("C1", 8, &[("z", 1), ("q1", 0), ("q2", 4)]).unwrap(),
            ComponentModel::cyclic("C2", 3, &[("q1", 0), ("q2", 1)]).unwrap(),
        ]);
        // 2z - q1 - q2 = 2 - 4 ≠ 0 mod 8
        assert_eq!(parity(&s, &odd).unwrap(), Parity::Odd);
    }

    #[test]
    fn double_conic_has_no_integral_root() {
        let c = StableCurve::builder()
            .vertex("X", 2)
            .vertex("R", 0)
            .edge("q1", "R", "X")
            .edge("q2", "X", "R")
            .leg("z", "R", 4)
            .build()
            .unwrap();
        assert_eq!(limit_spin_all_nodes(&c), Err(SpinError::NoIntegralSolution));
    }

    #[test]
    fn odd_entry_rejected() {
        let c = StableCurve::builder()
            .vertex("C", 2)
            .leg("z1", "C", 1)
            .leg("z2", "C", 1)
            .build()
            .unwrap();
        assert!(matches!(limit_spin(&c), Err(SpinError::OddEntry { .. })));
    }

    #[test]
    fn genus_two_without_axioms_is_undecided() {
        let c = StableCurve::builder()
            .vertex("C1", 1)
            .vertex("C2", 2)
            .edge("q", "C1", "C2")
            .leg("z", "C2", 4)
            .build()
            .unwrap();
        let s = limit_spin(&c).unwrap();
        assert_eq!(s.eta[1], Some(d("C2", "2z - q")));
        let bare = models(vec![
            ComponentModel::cyclic("C1", 1, &[("q", 0)]).unwrap(),
            ComponentModel::axiomatic("C2", 2, &["q", "z"], vec![]).unwrap(),
        ]);
        assert!(matches!(parity(&s, &bare).unwrap(), Parity::Undecided(_)));
        let weier = models(vec![
            ComponentModel::cyclic("C1", 1, &[("q", 0)]).unwrap(),
            ComponentModel::axiomatic("C2", 2, &["q", "z"], vec![Axiom::WeierstrassPoint("z".into())]).unwrap(),
        ]);
        assert_eq!(parity(&s, &weier).unwrap(), Parity::Even);
    }

    #[test]
    fn one_node_general_shape() {
        // η_i = Σ (k/2) z + (g_i - 1 - N_i) q
        let c = StableCurve::builder()
            .vertex("A", 2)
            .vertex("B", 3)
            .edge("q", "A", "B")
            .leg("z1", "A", 2)
            .leg("z2", "B", 6)
            .build()
            .unwrap();
        let s = limit_spin(&c).unwrap();
        assert_eq!(s.eta[0], Some(d("A", "z1 + 0q")));
        assert_eq!(s.eta[1], Some(d("B", "3z2 - q")));
    }
}
