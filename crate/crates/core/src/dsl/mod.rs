//! A line-oriented description language for curves, component models,
//! translation surfaces and elliptic chains, and the command runner behind
//! the `twistcalc` binary.
//!
//! Every non-blank line is one declaration introduced by a keyword; `#`
//! starts a comment. See [`parse`] for the grammar and [`run`] for commands.

mod parse;
mod print;
mod run;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::curve::StableCurve;
use crate::divisor::{Axiom, ComponentModel, EllipticBuilder, ModelKind, ProjPoint};
use crate::flat::{Boundary, EdgeRef, Polygon, Slit, TranslationSurface, Vec2, Q};
use crate::strata::Signature;
use crate::twist::Models;
use crate::weierstrass::ChainInput;

pub use parse::parse;
pub use run::{run, Command, CommandError, Options, Report, SurfaceOp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct ParseErrors(pub Vec<ParseError>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelMode {
    Plain,
    Normalization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeName {
    pub polygon: String,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Signature(Vec<BigInt>),
    Vertex {
        label: String,
        genus: i64,
    },
    Edge {
        label: String,
        ends: [String; 2],
    },
    Leg {
        label: String,
        vertex: String,
        order: BigInt,
    },
    /// Replace a node by a chain of this many rational components.
    Subdivide {
        edge: String,
        length: usize,
    },
    Model {
        vertex: String,
        mode: ModelMode,
    },
    Torsion {
        vertex: String,
        a: String,
        b: String,
        order: Option<BigInt>,
    },
    Axiom {
        vertex: String,
        axiom: Axiom,
    },
    Coord {
        vertex: String,
        values: Vec<(String, ProjPoint)>,
    },
    BoundaryDimension(i64),
    Polygon {
        name: String,
        vertices: Vec<Vec2>,
    },
    Pair([EdgeName; 2]),
    Boundary {
        name: String,
        edges: Vec<EdgeName>,
    },
    Slit(Slit),
    Plumb {
        alpha: String,
        beta: String,
        height: Q,
        twist: Q,
    },
    Chain {
        g: usize,
        torsion: Vec<Option<BigInt>>,
    },
}

/// A parsed document: its declarations in order, plus the objects they build.
#[derive(Clone, Debug)]
pub struct Document {
    items: Vec<Item>,
    curve: Option<StableCurve>,
    models: Models,
    signature: Option<Signature>,
    surface: Option<TranslationSurface>,
    chain: Option<ChainInput>,
    boundary_dimension: Option<i64>,
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl Eq for Document {}

impl Document {
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn curve(&self) -> Option<&StableCurve> {
        self.curve.as_ref()
    }

    pub fn models(&self) -> &Models {
        &self.models
    }

    /// The declared signature, or the leg orders when none is declared.
    pub fn signature(&self) -> Option<&Signature> {
        self.signature.as_ref()
    }

    pub fn surface(&self) -> Option<&TranslationSurface> {
        self.surface.as_ref()
    }

    pub fn chain(&self) -> Option<&ChainInput> {
        self.chain.as_ref()
    }

    pub fn boundary_dimension(&self) -> Option<i64> {
        self.boundary_dimension
    }

    pub fn slits(&self) -> impl Iterator<Item = &Slit> {
        self.items.iter().filter_map(|i| match i {
            Item::Slit(s) => Some(s),
            _ => None,
        })
    }

    pub fn plumbs(&self) -> impl Iterator<Item = (&str, &str, &Q, &Q)> {
        self.items.iter().filter_map(|i| match i {
            Item::Plumb {
                alpha,
                beta,
                height,
                twist,
            } => Some((alpha.as_str(), beta.as_str(), height, twist)),
            _ => None,
        })
    }

    /// Builds the derived objects; `lines[i]` is the source line of `items[i]`.
    fn build(items: Vec<Item>, lines: &[usize], texts: &[&str]) -> Result<Self, Vec<ParseError>> {
        let mut b = Builder {
            lines,
            texts,
            errors: Vec::new(),
        };
        let curve = b.curve(&items);
        let models = curve.as_ref().map(|c| b.models(&items, c)).unwrap_or_default();
        let signature = b.signature(&items, curve.as_ref());
        let surface = b.surface(&items);
        let chain = b.chain(&items);
        let boundary_dimension = b.single(&items, "boundary-dimension", |i| match i {
            Item::BoundaryDimension(d) => Some(*d),
            _ => None,
        });
        if !b.errors.is_empty() {
            return Err(b.errors);
        }
        Ok(Self {
            items,
            curve,
            models,
            signature,
            surface,
            chain,
            boundary_dimension,
        })
    }
}

struct Builder<'a> {
    lines: &'a [usize],
    texts: &'a [&'a str],
    errors: Vec<ParseError>,
}

impl Builder<'_> {
    /// Records an error at item `k`, pointing at `needle` when it occurs on the line.
    fn err(&mut self, k: usize, needle: &str, message: String) {
        let line = self.lines[k];
        let text = self.texts[line - 1];
        let col = find_word(text, needle).map_or(1, |c| c + 1);
        self.errors.push(ParseError { line, col, message });
    }

    fn single<T>(&mut self, items: &[Item], what: &str, pick: impl Fn(&Item) -> Option<T>) -> Option<T> {
        let mut found = None;
        for (k, it) in items.iter().enumerate() {
            if let Some(v) = pick(it) {
                if found.is_some() {
                    self.err(k, what, format!("`{what}` declared more than once"));
                } else {
                    found = Some(v);
                }
            }
        }
        found
    }

    fn curve(&mut self, items: &[Item]) -> Option<StableCurve> {
        let mut vertices: BTreeMap<&str, usize> = BTreeMap::new();
        let mut nodes: BTreeMap<&str, usize> = BTreeMap::new();
        let mut builder = StableCurve::builder();
        let mut any = false;
        let mut ok = true;
        for (k, it) in items.iter().enumerate() {
            match it {
                Item::Vertex { label, genus } => {
                    any = true;
                    if vertices.insert(label, k).is_some() {
                        self.err(k, label, format!("duplicate vertex `{label}`"));
                        ok = false;
                    }
                    if *genus < 0 {
                        self.err(k, "genus", format!("negative genus for `{label}`"));
                        ok = false;
                    }
                    builder = builder.vertex(label, *genus);
                }
                Item::Edge { label, ends } => {
                    any = true;
                    if nodes.insert(label, k).is_some() {
                        self.err(k, label, format!("duplicate edge or leg label `{label}`"));
                        ok = false;
                    }
                    for v in ends {
                        if !vertices.contains_key(v.as_str()) {
                            self.err(k, v, format!("unknown vertex `{v}`"));
                            ok = false;
                        }
                    }
                    builder = builder.edge(label, &ends[0], &ends[1]);
                }
                Item::Leg { label, vertex, order } => {
                    any = true;
                    if nodes.insert(label, k).is_some() {
                        self.err(k, label, format!("duplicate edge or leg label `{label}`"));
                        ok = false;
                    }
                    if !vertices.contains_key(vertex.as_str()) {
                        self.err(k, vertex, format!("unknown vertex `{vertex}`"));
                        ok = false;
                    }
                    builder = builder.leg(label, vertex, order.clone());
                }
                _ => {}
            }
        }
        if !any {
            for (k, it) in items.iter().enumerate() {
                if let Item::Subdivide { edge, .. } = it {
                    self.err(k, edge, format!("unknown edge `{edge}`"));
                }
            }
            return None;
        }
        if !ok {
            return None;
        }
        let mut curve = match builder.build() {
            Ok(c) => c,
            Err(e) => {
                self.err(0, "", e.to_string());
                return None;
            }
        };
        for (k, it) in items.iter().enumerate() {
            if let Item::Subdivide { edge, length } = it {
                match curve.insert_rational_chain(edge, *length) {
                    Ok(c) => curve = c,
                    Err(e) => {
                        self.err(k, edge, e.to_string());
                        return None;
                    }
                }
            }
        }
        Some(curve)
    }

    fn signature(&mut self, items: &[Item], curve: Option<&StableCurve>) -> Option<Signature> {
        let declared = self.single(items, "signature", |i| match i {
            Item::Signature(s) => Some(s.clone()),
            _ => None,
        });
        let legs = curve.map(|c| c.legs().iter().map(|l| l.order.clone()).collect::<Vec<_>>());
        match (declared, legs) {
            (Some(d), Some(l)) if !l.is_empty() && d != l => {
                let k = items
                    .iter()
                    .position(|i| matches!(i, Item::Signature(_)))
                    .expect("declared");
                self.err(k, "signature", "signature does not match the leg orders".into());
                None
            }
            (Some(d), _) => Some(Signature::new(d)),
            (None, Some(l)) if !l.is_empty() => Some(Signature::new(l)),
            _ => None,
        }
    }

    fn models(&mut self, items: &[Item], curve: &StableCurve) -> Models {
        let mut out = Models::new();
        let mut per_vertex: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (k, it) in items.iter().enumerate() {
            let v = match it {
                Item::Model { vertex, .. }
                | Item::Torsion { vertex, .. }
                | Item::Axiom { vertex, .. }
                | Item::Coord { vertex, .. } => vertex,
                _ => continue,
            };
            if curve.vertex_index(v).is_none() {
                self.err(k, v, format!("unknown vertex `{v}`"));
                continue;
            }
            per_vertex.entry(v.clone()).or_default().push(k);
        }
        for (v, ks) in per_vertex {
            match self.model(items, curve, &v, &ks) {
                Ok(m) => {
                    out.insert(v, m);
                }
                Err((k, msg)) => self.err(k, &v, msg),
            }
        }
        out
    }

    fn model(
        &mut self,
        items: &[Item],
        curve: &StableCurve,
        v: &str,
        ks: &[usize],
    ) -> Result<ComponentModel, (usize, String)> {
        let vi = curve.vertex_index(v).expect("checked");
        let first = ks[0];
        let mut mode = None;
        for &k in ks {
            if let Item::Model { mode: m, .. } = &items[k] {
                if mode.is_some() {
                    return Err((k, format!("model for `{v}` declared more than once")));
                }
                mode = Some(*m);
            }
        }
        let normalization = mode == Some(ModelMode::Normalization);
        let mut points: Vec<String> = Vec::new();
        for e in curve.non_loop_edges_at(vi) {
            points.push(crate::twist::node_point(curve, e).to_string());
        }
        points.extend(curve.legs_at(vi).map(|l| l.label.clone()));
        let mut branches = Vec::new();
        if normalization {
            for e in curve.loops_at(vi) {
                let o = &curve.edges()[e].origin;
                branches.push((format!("{o}'"), format!("{o}''")));
            }
            for (a, b) in &branches {
                points.push(a.clone());
                points.push(b.clone());
            }
        }
        let genus = if normalization {
            curve.vertices()[vi].genus
        } else {
            curve.component_arithmetic_genus(vi)
        };
        let at = |k: usize| move |e: crate::divisor::DivisorError| (k, e.to_string());
        let mut axioms = Vec::new();
        let mut torsions = Vec::new();
        let mut coords = BTreeMap::new();
        for &k in ks {
            match &items[k] {
                Item::Axiom { axiom, .. } => axioms.push((k, axiom.clone())),
                Item::Torsion { a, b, order, .. } => torsions.push((k, a, b, order)),
                Item::Coord { values, .. } => {
                    if genus != 0 {
                        return Err((k, format!("coordinates need a rational model, `{v}` has genus {genus}")));
                    }
                    for (p, x) in values {
                        if coords.insert(p.clone(), x.clone()).is_some() {
                            return Err((k, format!("coordinate of `{p}` given twice")));
                        }
                    }
                }
                _ => {}
            }
        }
        let model = match genus {
            0 => {
                if let Some((k, ..)) = torsions.first() {
                    return Err((*k, "torsion needs a genus-one model".into()));
                }
                ComponentModel::new(
                    v,
                    0,
                    points,
                    ModelKind::Rational { coordinates: coords },
                    axioms.into_iter().map(|(_, a)| a).collect(),
                )
                .map_err(at(first))?
            }
            1 => {
                let mut eb = EllipticBuilder::new(v, &points);
                for (_, a, b, order) in torsions {
                    eb = eb.torsion(a, b, order.clone());
                }
                for (_, ax) in axioms {
                    eb = match ax {
                        Axiom::LinearEquivalence(x, y) => eb.relation(x.minus(&y)),
                        other => eb.axiom(other),
                    };
                }
                eb.build().map_err(at(first))?
            }
            _ => {
                if let Some((k, ..)) = torsions.first() {
                    return Err((*k, "torsion needs a genus-one model".into()));
                }
                ComponentModel::new(
                    v,
                    genus,
                    points,
                    ModelKind::Axiomatic,
                    axioms.into_iter().map(|(_, a)| a).collect(),
                )
                .map_err(at(first))?
            }
        };
        if normalization {
            model.with_branches(branches).map_err(at(first))
        } else {
            Ok(model)
        }
    }

    fn surface(&mut self, items: &[Item]) -> Option<TranslationSurface> {
        let mut polygons: Vec<Polygon> = Vec::new();
        let mut first = None;
        for (k, it) in items.iter().enumerate() {
            if let Item::Polygon { name, vertices } = it {
                first.get_or_insert(k);
                if polygons.iter().any(|p| p.name == *name) {
                    self.err(k, name, format!("duplicate polygon `{name}`"));
                    return None;
                }
                polygons.push(Polygon::new(name.clone(), vertices.clone()));
            }
        }
        let first = first?;
        let mut ok = true;
        let resolve = |b: &mut Self, k: usize, e: &EdgeName| -> Option<EdgeRef> {
            let p = polygons.iter().position(|p| p.name == e.polygon);
            match p {
                Some(p) if e.index < polygons[p].vertices.len() => Some(EdgeRef::new(p, e.index)),
                Some(_) => {
                    b.err(
                        k,
                        &e.polygon,
                        format!("polygon `{}` has no edge {}", e.polygon, e.index),
                    );
                    None
                }
                None => {
                    b.err(k, &e.polygon, format!("unknown polygon `{}`", e.polygon));
                    None
                }
            }
        };
        let mut pairs = Vec::new();
        let mut boundaries = Vec::new();
        for (k, it) in items.iter().enumerate() {
            match it {
                Item::Pair([a, b]) => match (resolve(self, k, a), resolve(self, k, b)) {
                    (Some(x), Some(y)) => pairs.push((x, y)),
                    _ => ok = false,
                },
                Item::Boundary { name, edges } => {
                    let refs: Vec<Option<EdgeRef>> = edges.iter().map(|e| resolve(self, k, e)).collect();
                    if refs.iter().any(Option::is_none) {
                        ok = false;
                    } else {
                        boundaries.push(Boundary {
                            name: name.clone(),
                            edges: refs.into_iter().flatten().collect(),
                        });
                    }
                }
                Item::Slit(s) if !polygons.iter().any(|p| p.name == s.polygon) => {
                    self.err(k, &s.polygon, format!("unknown polygon `{}`", s.polygon));
                    ok = false;
                }
                _ => {}
            }
        }
        if !ok {
            return None;
        }
        match TranslationSurface::new(polygons, pairs, boundaries) {
            Ok(s) => Some(s),
            Err(e) => {
                self.err(first, "", e.to_string());
                None
            }
        }
    }

    fn chain(&mut self, items: &[Item]) -> Option<ChainInput> {
        let (g, t) = self.single(items, "chain", |i| match i {
            Item::Chain { g, torsion } => Some((*g, torsion.clone())),
            _ => None,
        })?;
        match ChainInput::new(g, t) {
            Ok(c) => Some(c),
            Err(e) => {
                let k = items
                    .iter()
                    .position(|i| matches!(i, Item::Chain { .. }))
                    .expect("present");
                self.err(k, "chain", e.to_string());
                None
            }
        }
    }
}

/// Byte offset of `needle` as a whole word in `text`.
fn find_word(text: &str, needle: &str) -> Option<usize> {
    if needle.is_empty() {
        return None;
    }
    let word_char = |c: char| c.is_alphanumeric() || c == '_' || c == '\'';
    let mut from = 0;
    while let Some(i) = text[from..].find(needle) {
        let s = from + i;
        let e = s + needle.len();
        let before = text[..s].chars().next_back().is_none_or(|c| !word_char(c));
        let after = text[e..].chars().next().is_none_or(|c| !word_char(c));
        if before && after {
            return Some(s);
        }
        from = s + 1;
    }
    None
}
