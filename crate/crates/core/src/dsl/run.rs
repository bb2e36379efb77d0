//! Commands over parsed documents. Reports are JSON values with sorted keys;
//! integers are rendered as strings.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::Document;
use crate::catalog::{classify, CatalogError};
use crate::curve::StableCurve;
use crate::flat::{plumb_self, slit_smoothing, FlatError, SurfaceData, TranslationSurface};
use crate::spin::{limit_spin, limit_spin_all_nodes, parity, Parity, SpinError};
use crate::strata::{component_labels, genus_of, stratum_dimension, StrataError};
use crate::twist::{
    classify_polarity, dimension_bound, smoothability_verdict, solve_twist, Smoothability, TwistAssignment, TwistError,
};
use crate::weierstrass::{chain_is_limit_weierstrass, divisibility_witness, torsion_text};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceOp {
    Singularities,
    Slit,
    Plumb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Twist,
    Spin,
    Dim,
    Genus3,
    Chain,
    Surface(SurfaceOp),
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Check,
        Command::Twist,
        Command::Spin,
        Command::Dim,
        Command::Genus3,
        Command::Chain,
        Command::Surface(SurfaceOp::Singularities),
        Command::Surface(SurfaceOp::Slit),
        Command::Surface(SurfaceOp::Plumb),
    ];

    /// Inverse of [`Command::name`].
    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Twist => "twist",
            Command::Spin => "spin",
            Command::Dim => "dim",
            Command::Genus3 => "genus3",
            Command::Chain => "chain",
            Command::Surface(SurfaceOp::Singularities) => "surface singularities",
            Command::Surface(SurfaceOp::Slit) => "surface slit",
            Command::Surface(SurfaceOp::Plumb) => "surface plumb",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Use the sharper dimension bound.
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CommandError {
    #[error("document has no {0}")]
    Missing(&'static str),
    #[error("`surface slit` needs exactly two slit lines, found {0}")]
    SlitCount(usize),
    #[error("curve is not stable: {0}")]
    Unstable(String),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Flat(#[from] FlatError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    /// False when the answer is undecided or inconclusive.
    pub decided: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.value).expect("values serialize")
    }

    /// One `path = value` line per leaf, in key order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        flatten(&self.value, "", &mut out);
        out
    }

    pub fn exit_code(&self) -> i32 {
        if self.decided {
            0
        } else {
            2
        }
    }
}

fn flatten(v: &Value, prefix: &str, out: &mut String) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(x, &key(k), out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(x, &key(&i.to_string()), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix} = {s}\n")),
        Value::Object(_) => out.push_str(&format!("{prefix} = {{}}\n")),
        Value::Array(_) => out.push_str(&format!("{prefix} = []\n")),
        other => out.push_str(&format!("{prefix} = {other}\n")),
    }
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(s).collect())
}

pub fn run(doc: &Document, cmd: Command, opts: Options) -> Result<Report, CommandError> {
    let (mut body, decided) = match cmd {
        Command::Check => check(doc)?,
        Command::Twist => twist(doc)?,
        Command::Spin => spin(doc)?,
        Command::Dim => dim(doc, opts)?,
        Command::Genus3 => genus3(doc)?,
        Command::Chain => chain(doc)?,
        Command::Surface(op) => surface(doc, op)?,
    };
    body.insert("command".into(), s(cmd.name()));
    body.insert("decided".into(), Value::Bool(decided));
    Ok(Report {
        value: Value::Object(body),
        decided,
    })
}

fn curve(doc: &Document) -> Result<&StableCurve, CommandError> {
    let c = doc.curve().ok_or(CommandError::Missing("curve"))?;
    let v = c.validate();
    if !v.is_ok() {
        return Err(CommandError::Unstable(format!("{:?}", v.violations)));
    }
    Ok(c)
}

fn twist_json(c: &StableCurve, t: &TwistAssignment) -> Map<String, Value> {
    let mut m = Map::new();
    let per_vertex = |xs: &[num_bigint::BigInt]| {
        Value::Object(
            c.vertices()
                .iter()
                .zip(xs)
                .map(|(v, x)| (v.label.clone(), s(x)))
                .collect(),
        )
    };
    m.insert("b".into(), per_vertex(&t.b));
    m.insert("rhs".into(), per_vertex(&t.rhs));
    let mut sides = Map::new();
    for (e, edge) in c.edges().iter().enumerate() {
        if let Some([a, b]) = &t.s[e] {
            let mut x = Map::new();
            x.insert(c.vertices()[edge.ends[0]].label.clone(), s(a));
            x.insert(c.vertices()[edge.ends[1]].label.clone(), s(b));
            sides.insert(edge.label.clone(), Value::Object(x));
        }
    }
    m.insert("s".into(), Value::Object(sides));
    m
}

fn check(doc: &Document) -> Result<(Map<String, Value>, bool), CommandError> {
    let c = curve(doc)?;
    let v = smoothability_verdict(c, doc.models())?;
    let mut m = Map::new();
    m.insert("status".into(), s(v.status.as_str()));
    m.insert("smoothable".into(), s(v.smoothable.as_str()));
    if let Some(cr) = v.smoothable.criterion() {
        m.insert("criterion".into(), s(cr.tag()));
    }
    m.insert("reasons".into(), strings(&v.reasons));
    if let Some(chk) = &v.check {
        let mut verts = Map::new();
        for (vc, pol) in chk.vertices.iter().zip(&chk.polarity) {
            let mut x = Map::new();
            x.insert("lhs".into(), s(&vc.lhs));
            x.insert("rhs".into(), s(&vc.rhs));
            x.insert("holds".into(), s(vc.holds));
            x.insert("polarity".into(), s(pol.as_str()));
            if let Some(n) = &vc.note {
                x.insert("note".into(), s(n));
            }
            verts.insert(vc.vertex.clone(), Value::Object(x));
        }
        m.insert("vertices".into(), Value::Object(verts));
        m.insert("twist".into(), Value::Object(twist_json(c, &chk.twist)));
    }
    Ok((m, v.smoothable != Smoothability::Inconclusive))
}

fn twist(doc: &Document) -> Result<(Map<String, Value>, bool), CommandError> {
    let c = curve(doc)?;
    let t = solve_twist(c)?;
    let mut m = twist_json(c, &t);
    let pol = classify_polarity(c, &t)?;
    m.insert(
        "polarity".into(),
        Value::Object(
            c.vertices()
                .iter()
                .zip(pol)
                .map(|(v, p)| (v.label.clone(), s(p.as_str())))
                .collect(),
        ),
    );
    m.insert("type".into(), s(format!("{:?}", c.classify_type().kind)));
    Ok((m, true))
}

fn spin(doc: &Document) -> Result<(Map<String, Value>, bool), CommandError> {
    let c = curve(doc)?;
    let (structure, blowup) = match limit_spin(c) {
        Err(SpinError::NotPseudocompact) => (limit_spin_all_nodes(c)?, "all-nodes"),
        other => (other?, "separating-nodes"),
    };
    let p = parity(&structure, doc.models())?;
    let mut m = Map::new();
    m.insert("blowup".into(), s(blowup));
    m.insert("subdivided".into(), strings(&structure.subdivided));
    let bc = &structure.blown_up;
    let mut eta = Map::new();
    let mut b = Map::new();
    for (i, v) in bc.vertices().iter().enumerate() {
        let text = structure.eta[i]
            .as_ref()
            .map_or_else(|| "O(1)".to_string(), |d| d.to_string());
        eta.insert(v.label.clone(), s(text));
        b.insert(v.label.clone(), s(&structure.b[i]));
    }
    m.insert("eta".into(), Value::Object(eta));
    m.insert("b".into(), Value::Object(b));
    let total: num_bigint::BigInt = structure.degrees().iter().sum();
    m.insert("degree".into(), s(total));
    m.insert("parity".into(), s(p.as_str()));
    let decided = match &p {
        Parity::Undecided(why) => {
            m.insert("undecided".into(), strings(why));
            false
        }
        _ => true,
    };
    Ok((m, decided))
}

fn dim(doc: &Document, opts: Options) -> Result<(Map<String, Value>, bool), CommandError> {
    let mu = doc.signature().ok_or(CommandError::Missing("signature"))?;
    let g = genus_of(mu)?;
    let mut m = Map::new();
    m.insert("signature".into(), s(mu));
    m.insert("genus".into(), s(g));
    m.insert("dim".into(), s(stratum_dimension(mu, false)?));
    m.insert("dim_projective".into(), s(stratum_dimension(mu, true)?));
    m.insert(
        "components".into(),
        strings(component_labels(mu)?.iter().map(|l| l.as_str())),
    );
    if let Some(bd) = doc.boundary_dimension() {
        m.insert("bound".into(), s(dimension_bound(bd, g, opts.refined)?));
        m.insert("refined".into(), Value::Bool(opts.refined));
    }
    Ok((m, true))
}

fn genus3(doc: &Document) -> Result<(Map<String, Value>, bool), CommandError> {
    let c = curve(doc)?;
    let v = classify(c, doc.models())?;
    let mut m = Map::new();
    m.insert("case".into(), s(v.case.as_str()));
    m.insert("in_hyp".into(), s(v.in_hyp));
    m.insert("in_odd".into(), s(v.in_odd));
    m.insert("citation".into(), s("genus3-catalog"));
    m.insert("conditions".into(), strings(&v.conditions));
    let decided = v.in_hyp != crate::divisor::Truth::Unknown && v.in_odd != crate::divisor::Truth::Unknown;
    Ok((m, decided))
}

fn chain(doc: &Document) -> Result<(Map<String, Value>, bool), CommandError> {
    let input = doc.chain().ok_or(CommandError::Missing("chain"))?;
    let a = chain_is_limit_weierstrass(input);
    let mut m = Map::new();
    m.insert("g".into(), s(input.g));
    m.insert("torsion".into(), strings(input.torsion.iter().map(torsion_text)));
    m.insert("weierstrass".into(), Value::Bool(a.is_weierstrass));
    if let Some(w) = &a.witness {
        m.insert("witness".into(), strings(w));
    }
    if let Some(w) = divisibility_witness(input) {
        m.insert("divisibility_witness".into(), strings(&w));
    }
    Ok((m, true))
}

fn surface_json(surf: &TranslationSurface, d: &SurfaceData) -> Value {
    let comps: Vec<Value> = d
        .components
        .iter()
        .map(|c| {
            json!({
                "genus": s(c.genus),
                "polygons": strings(c.polygons.iter().map(|p| &surf.polygons()[*p].name)),
                "boundaries": strings(c.boundaries.iter().map(|b| &surf.boundaries()[*b].name)),
                "signature": strings(c.signature()),
                "gauss_bonnet": c.gauss_bonnet_holds(),
            })
        })
        .collect();
    let verts: Vec<Value> = d
        .vertices
        .iter()
        .map(|v| {
            let (p, i) = v.corners[0];
            let mut x = Map::new();
            x.insert("corner".into(), s(format!("{}.{}", surf.polygons()[p].name, i)));
            x.insert("angle_pi".into(), s(v.angle_pi));
            x.insert("corners".into(), s(v.corners.len()));
            match v.order {
                Some(o) => x.insert("order".into(), s(o)),
                None => x.insert("boundary".into(), Value::Bool(true)),
            };
            Value::Object(x)
        })
        .collect();
    json!({
        "genus": s(d.genus()),
        "orders": strings(d.orders()),
        "area": s(surf.area()),
        "components": comps,
        "vertices": verts,
    })
}

fn surface(doc: &Document, op: SurfaceOp) -> Result<(Map<String, Value>, bool), CommandError> {
    let surf = doc.surface().ok_or(CommandError::Missing("surface"))?;
    let before = surf.flat_data()?;
    let mut m = Map::new();
    match op {
        SurfaceOp::Singularities => {
            m.insert("surface".into(), surface_json(surf, &before));
        }
        SurfaceOp::Slit => {
            let slits: Vec<_> = doc.slits().collect();
            if slits.len() != 2 {
                return Err(CommandError::SlitCount(slits.len()));
            }
            let mut start = BTreeMap::new();
            for (k, sl) in slits.iter().enumerate() {
                start.insert(
                    k,
                    (
                        surf.order_at(&sl.polygon, &sl.from)?,
                        surf.order_at(&sl.polygon, &sl.to)?,
                    ),
                );
            }
            let r = slit_smoothing(surf, slits[0], slits[1])?;
            let after = r.surface.flat_data()?;
            let [p, q] = r.endpoint_orders()?;
            m.insert("before".into(), surface_json(surf, &before));
            m.insert("after".into(), surface_json(&r.surface, &after));
            m.insert(
                "endpoints".into(),
                json!({
                    "start": {"orders": strings([start[&0].0, start[&1].0]), "merged": s(p)},
                    "end": {"orders": strings([start[&0].1, start[&1].1]), "merged": s(q)},
                }),
            );
        }
        SurfaceOp::Plumb => {
            let mut cur = surf.clone();
            let mut steps = Vec::new();
            let plumbs: Vec<_> = doc.plumbs().collect();
            if plumbs.is_empty() {
                return Err(CommandError::Missing("plumb line"));
            }
            for (alpha, beta, height, twist) in plumbs {
                let r = plumb_self(&cur, alpha, beta, height, twist)?;
                let added = r.surface.area() - cur.area();
                steps.push(json!({
                    "alpha": s(alpha),
                    "beta": s(beta),
                    "cylinder": s(&r.cylinder),
                    "added_area": s(added),
                }));
                cur = r.surface;
            }
            let after = cur.flat_data()?;
            m.insert("before".into(), surface_json(surf, &before));
            m.insert("after".into(), surface_json(&cur, &after));
            m.insert("steps".into(), Value::Array(steps));
        }
    }
    Ok((m, true))
}
