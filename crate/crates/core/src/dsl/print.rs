//! Canonical text for documents; `parse` reads it back to an equal document.

use std::fmt;

use super::{Document, EdgeName, Item, ModelMode};
use crate::divisor::{Axiom, ProjPoint};
use crate::weierstrass::torsion_text;

impl fmt::Display for EdgeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.polygon, self.index)
    }
}

fn proj(x: &ProjPoint) -> String {
    match x {
        ProjPoint::Finite(q) => q.to_string(),
        ProjPoint::Infinity => "inf".into(),
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Signature(v) => {
                let s: Vec<String> = v.iter().map(|k| k.to_string()).collect();
                write!(f, "signature {}", s.join(" "))
            }
            Item::Vertex { label, genus } => write!(f, "vertex {label} genus {genus}"),
            Item::Edge { label, ends } => write!(f, "edge {label}: {} {}", ends[0], ends[1]),
            Item::Leg { label, vertex, order } => write!(f, "leg {label}: {vertex} order {order}"),
            Item::Subdivide { edge, length } => write!(f, "subdivide {edge} {length}"),
            Item::Model { vertex, mode } => {
                let m = match mode {
                    ModelMode::Plain => "plain",
                    ModelMode::Normalization => "normalization",
                };
                write!(f, "model {vertex}: {m}")
            }
            Item::Torsion { vertex, a, b, order } => {
                write!(f, "torsion {vertex}: {a} - {b} order {}", torsion_text(order))
            }
            Item::Axiom { vertex, axiom } => {
                write!(f, "axiom {vertex}: ")?;
                match axiom {
                    Axiom::WeierstrassPoint(p) => write!(f, "weierstrass {p}"),
                    Axiom::HyperellipticConjugate(p, q) => write!(f, "conjugate {p} {q}"),
                    Axiom::ResidueSumZero(p, q) => write!(f, "residue-sum-zero {p} {q}"),
                    Axiom::Effective(d) => write!(f, "effective {d}"),
                    Axiom::NotEffective(d) => write!(f, "not-effective {d}"),
                    Axiom::LinearEquivalence(a, b) => write!(f, "equiv {a} ~ {b}"),
                }
            }
            Item::Coord { vertex, values } => {
                let s: Vec<String> = values.iter().map(|(p, x)| format!("{p} = {}", proj(x))).collect();
                write!(f, "coord {vertex}: {}", s.join(", "))
            }
            Item::BoundaryDimension(d) => write!(f, "boundary-dimension {d}"),
            Item::Polygon { name, vertices } => {
                let s: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
                write!(f, "polygon {name}: {}", s.join(", "))
            }
            Item::Pair([a, b]) => write!(f, "pair {a} {b}"),
            Item::Boundary { name, edges } => {
                let s: Vec<String> = edges.iter().map(|e| e.to_string()).collect();
                write!(f, "boundary {name}: {}", s.join(" "))
            }
            Item::Slit(s) => write!(f, "slit {}: {} -> {}", s.polygon, s.from, s.to),
            Item::Plumb {
                alpha,
                beta,
                height,
                twist,
            } => write!(f, "plumb {alpha} {beta} height {height} twist {twist}"),
            Item::Chain { g, torsion } => {
                write!(f, "chain g={g}")?;
                for (i, t) in torsion.iter().enumerate() {
                    write!(f, " t{}={}", i + 2, torsion_text(t))?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}
