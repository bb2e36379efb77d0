//! Translation surfaces built from rational polygons glued by translations,
//! with cone-angle bookkeeping and two surgeries: cross-gluing a pair of
//! parallel slits, and plumbing a finite cylinder between boundary circles.
//!
//! A boundary circle stands in for a simple pole: it is a cycle of unpaired,
//! positively parallel edges with the surface on their left, and every vertex
//! on it has angle π. Gauss–Bonnet then reads `Σ orders − #circles = 2g − 2`
//! on each connected component.

mod geometry;
mod surgery;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

pub use geometry::{rational_sqrt, Location, Vec2, Q};
pub use surgery::{plumb_cylinder, plumb_self, slit_smoothing, PlumbResult, Seam, Slit, SlitResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlatError {
    #[error("polygon {polygon}: {reason}")]
    InvalidPolygon { polygon: String, reason: String },
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("boundary {name}: {reason}")]
    InvalidBoundary { name: String, reason: String },
    #[error("surface has boundary circles")]
    OpenSurface,
    #[error("unknown polygon {0}")]
    UnknownPolygon(String),
    #[error("unknown boundary {0}")]
    UnknownBoundary(String),
    #[error("slits must have equal nonzero vectors")]
    UnequalVectors,
    #[error("slits overlap or share an endpoint")]
    OverlappingSlits,
    #[error("slit endpoints are the same point of the surface")]
    ClosedSlit,
    #[error("slit in {polygon} does not lie inside the polygon")]
    SlitOutside { polygon: String },
    #[error("point lies on a boundary circle")]
    OnBoundary,
    #[error("point lies outside polygon {0}")]
    PointOutside(String),
    #[error("boundary widths differ: |{alpha}|² = {alpha_width2}, |{beta}|² = {beta_width2}")]
    WidthMismatch {
        alpha: String,
        beta: String,
        alpha_width2: Box<Q>,
        beta_width2: Box<Q>,
    },
    #[error("boundary holonomies of {alpha} and {beta} are not opposite")]
    HolonomyMismatch { alpha: String, beta: String },
    #[error("circumference of {0} is irrational")]
    IrrationalCircumference(String),
    #[error("cylinder height must be positive")]
    NonPositiveHeight,
    #[error("surface is inconsistent: {0}")]
    Inconsistent(String),
}

/// Corners `(polygon, vertex)` around one point, its angle in units of π,
/// and whether it lies on a boundary circle.
type CornerCycle = (Vec<(usize, usize)>, i64, bool);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub name: String,
    pub vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn new(name: impl Into<String>, vertices: Vec<Vec2>) -> Self {
        Self {
            name: name.into(),
            vertices,
        }
    }

    pub fn edge_vector(&self, i: usize) -> Vec2 {
        let n = self.vertices.len();
        self.vertices[(i + 1) % n].minus(&self.vertices[i])
    }
}

/// Edge `edge` of polygon `polygon`, from vertex `edge` to vertex `edge + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(polygon: usize, edge: usize) -> Self {
        Self { polygon, edge }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub name: String,
    pub edges: Vec<EdgeRef>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationSurface {
    polygons: Vec<Polygon>,
    pairs: Vec<(EdgeRef, EdgeRef)>,
    boundaries: Vec<Boundary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Paired(EdgeRef),
    Boundary(usize),
}

/// Identified polygon corners and their total angle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityDatum {
    /// `(polygon, vertex)` in walking order.
    pub corners: Vec<(usize, usize)>,
    /// Total angle in units of π.
    pub angle_pi: i64,
    /// `angle / 2π − 1`; only set for interior points.
    pub order: Option<i64>,
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentData {
    pub polygons: Vec<usize>,
    pub genus: i64,
    pub boundaries: Vec<usize>,
    /// Nonzero orders of interior vertex classes, descending.
    pub orders: Vec<i64>,
}

impl ComponentData {
    /// Orders with `−1` appended for each boundary circle.
    pub fn signature(&self) -> Vec<i64> {
        let mut s = self.orders.clone();
        s.extend(std::iter::repeat_n(-1, self.boundaries.len()));
        s
    }

    pub fn gauss_bonnet_holds(&self) -> bool {
        self.signature().iter().sum::<i64>() == 2 * self.genus - 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceData {
    pub vertices: Vec<SingularityDatum>,
    pub components: Vec<ComponentData>,
}

impl SurfaceData {
    pub fn genus(&self) -> i64 {
        self.components.iter().map(|c| c.genus).sum()
    }

    /// Nonzero orders over the whole surface, descending.
    pub fn orders(&self) -> Vec<i64> {
        let mut o: Vec<i64> = self.components.iter().flat_map(|c| c.orders.clone()).collect();
        o.sort_unstable_by(|a, b| b.cmp(a));
        o
    }

    pub fn singularities(&self) -> impl Iterator<Item = &SingularityDatum> {
        self.vertices.iter().filter(|v| v.order.is_some_and(|o| o != 0))
    }

    pub fn gauss_bonnet_holds(&self) -> bool {
        self.components.iter().all(ComponentData::gauss_bonnet_holds)
    }
}

impl TranslationSurface {
    pub fn new(
        polygons: Vec<Polygon>,
        pairs: Vec<(EdgeRef, EdgeRef)>,
        boundaries: Vec<Boundary>,
    ) -> Result<Self, FlatError> {
        let mut names = BTreeSet::new();
        for p in &polygons {
            if !names.insert(p.name.as_str()) {
                return Err(FlatError::InvalidPolygon {
                    polygon: p.name.clone(),
                    reason: "duplicate name".into(),
                });
            }
            if let Some(reason) = geometry::polygon_problem(&p.vertices) {
                return Err(FlatError::InvalidPolygon {
                    polygon: p.name.clone(),
                    reason: reason.into(),
                });
            }
        }
        let mut pairs: Vec<(EdgeRef, EdgeRef)> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort();
        let surface = Self {
            polygons,
            pairs,
            boundaries,
        };
        surface.validate()?;
        Ok(surface)
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn pairs(&self) -> &[(EdgeRef, EdgeRef)] {
        &self.pairs
    }

    pub fn boundaries(&self) -> &[Boundary] {
        &self.boundaries
    }

    pub fn is_closed(&self) -> bool {
        self.boundaries.is_empty()
    }

    pub fn polygon_index(&self, name: &str) -> Result<usize, FlatError> {
        self.polygons
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| FlatError::UnknownPolygon(name.to_string()))
    }

    pub fn boundary_index(&self, name: &str) -> Result<usize, FlatError> {
        self.boundaries
            .iter()
            .position(|b| b.name == name)
            .ok_or_else(|| FlatError::UnknownBoundary(name.to_string()))
    }

    pub fn edge_label(&self, e: EdgeRef) -> String {
        format!("{}.{}", self.polygons[e.polygon].name, e.edge)
    }

    pub fn edge_vector(&self, e: EdgeRef) -> Vec2 {
        self.polygons[e.polygon].edge_vector(e.edge)
    }

    pub fn area(&self) -> Q {
        let two = Q::from_integer(2.into());
        self.polygons
            .iter()
            .map(|p| geometry::signed_area2(&p.vertices) / &two)
            .fold(Q::zero(), |a, b| a + b)
    }

    /// Sum of the edge vectors of a boundary circle.
    pub fn holonomy(&self, boundary: usize) -> Vec2 {
        self.boundaries[boundary]
            .edges
            .iter()
            .fold(Vec2::zero(), |acc, e| acc.plus(&self.edge_vector(*e)))
    }

    fn sides(&self) -> BTreeMap<EdgeRef, Side> {
        let mut m = BTreeMap::new();
        for (a, b) in &self.pairs {
            m.insert(*a, Side::Paired(*b));
            m.insert(*b, Side::Paired(*a));
        }
        for (k, b) in self.boundaries.iter().enumerate() {
            for e in &b.edges {
                m.insert(*e, Side::Boundary(k));
            }
        }
        m
    }

    fn validate(&self) -> Result<(), FlatError> {
        let valid = |e: &EdgeRef| e.polygon < self.polygons.len() && e.edge < self.polygons[e.polygon].vertices.len();
        let mut seen = BTreeSet::new();
        for (a, b) in &self.pairs {
            for e in [a, b] {
                if !valid(e) {
                    return Err(FlatError::InvalidPairing(format!("no edge {}.{}", e.polygon, e.edge)));
                }
                if !seen.insert(*e) {
                    return Err(FlatError::InvalidPairing(format!("{} used twice", self.edge_label(*e))));
                }
            }
            if a == b {
                return Err(FlatError::InvalidPairing(format!(
                    "{} paired with itself",
                    self.edge_label(*a)
                )));
            }
            if self.edge_vector(*a) != self.edge_vector(*b).neg() {
                return Err(FlatError::InvalidPairing(format!(
                    "{} and {} are not opposite translates",
                    self.edge_label(*a),
                    self.edge_label(*b)
                )));
            }
        }
        let mut bnames = BTreeSet::new();
        for b in &self.boundaries {
            let fail = |reason: &str| FlatError::InvalidBoundary {
                name: b.name.clone(),
                reason: reason.to_string(),
            };
            if !bnames.insert(b.name.as_str()) {
                return Err(fail("duplicate name"));
            }
            if b.edges.is_empty() {
                return Err(fail("no edges"));
            }
            for e in &b.edges {
                if !valid(e) {
                    return Err(fail("unknown edge"));
                }
                if !seen.insert(*e) {
                    return Err(fail(&format!("{} used twice", self.edge_label(*e))));
                }
            }
            let first = self.edge_vector(b.edges[0]);
            for e in &b.edges[1..] {
                let v = self.edge_vector(*e);
                if !v.cross(&first).is_zero() || !v.dot(&first).is_positive() {
                    return Err(fail("edges are not parallel"));
                }
            }
        }
        for (p, poly) in self.polygons.iter().enumerate() {
            for i in 0..poly.vertices.len() {
                if !seen.contains(&EdgeRef::new(p, i)) {
                    return Err(FlatError::InvalidPairing(format!("{}.{} is unpaired", poly.name, i)));
                }
            }
        }
        self.walk().map(|_| ())
    }

    /// Groups corners into points of the surface, computing exact angles.
    fn walk(&self) -> Result<Vec<CornerCycle>, FlatError> {
        let sides = self.sides();
        let n = |p: usize| self.polygons[p].vertices.len();
        let incoming = |(p, i): (usize, usize)| EdgeRef::new(p, (i + n(p) - 1) % n(p));
        let sweep = |(p, i): (usize, usize)| {
            let v = &self.polygons[p].vertices;
            let m = v.len();
            (v[(i + 1) % m].minus(&v[i]), v[(i + m - 1) % m].minus(&v[i]))
        };
        let mut visited = BTreeSet::new();
        let mut out = Vec::new();
        let mut corners: Vec<(usize, usize)> = Vec::new();
        for p in 0..self.polygons.len() {
            for i in 0..n(p) {
                corners.push((p, i));
            }
        }
        let boundary_starts: Vec<(usize, usize)> = corners
            .iter()
            .copied()
            .filter(|&(p, i)| matches!(sides[&EdgeRef::new(p, i)], Side::Boundary(_)))
            .collect();
        for start in boundary_starts {
            let d0 = sweep(start).0;
            let back = d0.neg();
            let mut chain = Vec::new();
            let mut half = 0i64;
            let mut c = start;
            loop {
                if !visited.insert(c) {
                    return Err(FlatError::Inconsistent("corner reached twice".into()));
                }
                chain.push(c);
                let (a, b) = sweep(c);
                half += i64::from(geometry::sweep_hits(&a, &b, &d0)) + i64::from(geometry::sweep_hits(&a, &b, &back));
                match sides[&incoming(c)] {
                    Side::Boundary(k) => {
                        let inc = incoming(c);
                        let out_edge = EdgeRef::new(start.0, start.1);
                        let edges = &self.boundaries[k].edges;
                        let pos = edges.iter().position(|e| *e == inc).expect("edge in its boundary");
                        if edges[(pos + 1) % edges.len()] != out_edge {
                            return Err(FlatError::InvalidBoundary {
                                name: self.boundaries[k].name.clone(),
                                reason: "edges are not listed in cyclic order".into(),
                            });
                        }
                        if half != 1 {
                            return Err(FlatError::InvalidBoundary {
                                name: self.boundaries[k].name.clone(),
                                reason: format!("vertex angle is {half}π, expected π"),
                            });
                        }
                        break;
                    }
                    Side::Paired(e) => c = (e.polygon, e.edge),
                }
            }
            out.push((chain, half, true));
        }
        for &start in &corners {
            if visited.contains(&start) {
                continue;
            }
            let d0 = sweep(start).0;
            let mut chain = Vec::new();
            let mut turns = 0i64;
            let mut c = start;
            loop {
                if !visited.insert(c) {
                    return Err(FlatError::Inconsistent("vertex cycle does not close".into()));
                }
                chain.push(c);
                let (a, b) = sweep(c);
                turns += i64::from(geometry::sweep_hits(&a, &b, &d0));
                match sides[&incoming(c)] {
                    Side::Paired(e) => c = (e.polygon, e.edge),
                    Side::Boundary(_) => return Err(FlatError::Inconsistent("interior walk met a boundary".into())),
                }
                if c == start {
                    break;
                }
            }
            out.push((chain, 2 * turns, false));
        }
        out.sort_by_key(|(chain, _, _)| *chain.iter().min().expect("nonempty"));
        Ok(out)
    }

    /// Connected component index of each polygon.
    fn component_of(&self) -> Vec<usize> {
        let k = self.polygons.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for (a, b) in &self.pairs {
            let (ra, rb) = (find(&mut parent, a.polygon), find(&mut parent, b.polygon));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let roots: Vec<usize> = (0..k).map(|x| find(&mut parent, x)).collect();
        let distinct: Vec<usize> = roots.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        roots
            .iter()
            .map(|r| distinct.iter().position(|d| d == r).expect("root listed"))
            .collect()
    }

    /// Angles, orders and genus, allowing boundary circles.
    pub fn flat_data(&self) -> Result<SurfaceData, FlatError> {
        let comp = self.component_of();
        let ncomp = comp.iter().max().map_or(0, |m| m + 1);
        let mut vertices = Vec::new();
        let mut v_count = vec![0i64; ncomp];
        for (chain, angle_pi, boundary) in self.walk()? {
            let component = comp[chain[0].0];
            v_count[component] += 1;
            vertices.push(SingularityDatum {
                corners: chain,
                angle_pi,
                order: (!boundary).then_some(angle_pi / 2 - 1),
                component,
            });
        }
        let mut components = Vec::new();
        for (c, &vertex_count) in v_count.iter().enumerate() {
            let polygons: Vec<usize> = (0..self.polygons.len()).filter(|&p| comp[p] == c).collect();
            let faces = polygons.len() as i64;
            let edge_total: i64 = polygons.iter().map(|&p| self.polygons[p].vertices.len() as i64).sum();
            let boundary_edges: i64 = self
                .boundaries
                .iter()
                .flat_map(|b| &b.edges)
                .filter(|e| comp[e.polygon] == c)
                .count() as i64;
            let edges = (edge_total - boundary_edges) / 2 + boundary_edges;
            let boundaries: Vec<usize> = (0..self.boundaries.len())
                .filter(|&k| comp[self.boundaries[k].edges[0].polygon] == c)
                .collect();
            let chi = vertex_count - edges + faces;
            let twice_genus = 2 - boundaries.len() as i64 - chi;
            if twice_genus < 0 || twice_genus % 2 != 0 {
                return Err(FlatError::Inconsistent(format!("Euler characteristic {chi}")));
            }
            let mut orders: Vec<i64> = vertices
                .iter()
                .filter(|v| v.component == c)
                .filter_map(|v| v.order)
                .filter(|o| *o != 0)
                .collect();
            orders.sort_unstable_by(|a, b| b.cmp(a));
            components.push(ComponentData {
                polygons,
                genus: twice_genus / 2,
                boundaries,
                orders,
            });
        }
        Ok(SurfaceData { vertices, components })
    }

    /// As [`flat_data`](Self::flat_data), for closed surfaces only.
    pub fn singularity_data(&self) -> Result<SurfaceData, FlatError> {
        if !self.is_closed() {
            return Err(FlatError::OpenSurface);
        }
        self.flat_data()
    }

    /// Order of the zero at a point given in a polygon's coordinates.
    pub fn order_at(&self, polygon: &str, point: &Vec2) -> Result<i64, FlatError> {
        let p = self.polygon_index(polygon)?;
        let sides = self.sides();
        match geometry::locate(&self.polygons[p].vertices, point) {
            Location::Outside => Err(FlatError::PointOutside(polygon.to_string())),
            Location::Inside => Ok(0),
            Location::Edge(i) => match sides[&EdgeRef::new(p, i)] {
                Side::Boundary(_) => Err(FlatError::OnBoundary),
                Side::Paired(_) => Ok(0),
            },
            Location::Vertex(i) => {
                let data = self.flat_data()?;
                let v = data
                    .vertices
                    .iter()
                    .find(|v| v.corners.contains(&(p, i)))
                    .expect("every corner is classified");
                v.order.ok_or(FlatError::OnBoundary)
            }
        }
    }

    /// Order of the zero at the start of an edge.
    pub fn order_at_edge_start(&self, e: EdgeRef) -> Result<i64, FlatError> {
        let data = self.flat_data()?;
        data.vertices
            .iter()
            .find(|v| v.corners.contains(&(e.polygon, e.edge)))
            .and_then(|v| v.order)
            .ok_or(FlatError::OnBoundary)
    }

    /// Places `other` beside `self`, renaming clashing polygons and
    /// boundaries; returns the new names of `other`'s boundaries.
    pub fn disjoint_union(&self, other: &TranslationSurface) -> (TranslationSurface, Vec<String>) {
        let mut polygons = self.polygons.clone();
        let offset = polygons.len();
        for p in &other.polygons {
            let name = fresh_name(&p.name, |n| polygons.iter().any(|q| q.name == n));
            polygons.push(Polygon::new(name, p.vertices.clone()));
        }
        let shift = |e: &EdgeRef| EdgeRef::new(e.polygon + offset, e.edge);
        let mut pairs = self.pairs.clone();
        pairs.extend(other.pairs.iter().map(|(a, b)| (shift(a), shift(b))));
        let mut boundaries = self.boundaries.clone();
        let mut renamed = Vec::new();
        for b in &other.boundaries {
            let name = fresh_name(&b.name, |n| boundaries.iter().any(|c| c.name == n));
            renamed.push(name.clone());
            boundaries.push(Boundary {
                name,
                edges: b.edges.iter().map(shift).collect(),
            });
        }
        let surface = TranslationSurface::new(polygons, pairs, boundaries).expect("union of valid surfaces is valid");
        (surface, renamed)
    }
}

pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|n| !taken(n))
        .expect("unbounded supply of names")
}

impl fmt::Display for SingularityDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            Some(o) => write!(f, "angle {}pi, order {}", self.angle_pi, o),
            None => write!(f, "angle {}pi, boundary", self.angle_pi),
        }
    }
}

/// Small fixtures shared by tests.
pub mod examples {
    use super::*;

    fn rect(name: &str, w: &Q, h: &Q) -> Polygon {
        let z = Q::zero();
        Polygon::new(
            name,
            vec![
                Vec2::new(z.clone(), z.clone()),
                Vec2::new(w.clone(), z.clone()),
                Vec2::new(w.clone(), h.clone()),
                Vec2::new(z, h.clone()),
            ],
        )
    }

    /// `w × h` rectangle with opposite sides glued.
    pub fn torus(name: &str, w: Q, h: Q) -> TranslationSurface {
        let e = |i| EdgeRef::new(0, i);
        TranslationSurface::new(vec![rect(name, &w, &h)], vec![(e(0), e(2)), (e(1), e(3))], vec![])
            .expect("rectangle torus is valid")
    }

    pub fn unit_torus() -> TranslationSurface {
        torus("T", Q::from_integer(1.into()), Q::from_integer(1.into()))
    }

    /// `w × h` rectangle with the vertical sides glued; bottom and top are
    /// boundary circles.
    pub fn cylinder(name: &str, w: Q, h: Q) -> TranslationSurface {
        let e = |i| EdgeRef::new(0, i);
        TranslationSurface::new(
            vec![rect(name, &w, &h)],
            vec![(e(1), e(3))],
            vec![
                Boundary {
                    name: format!("{name}_bot"),
                    edges: vec![e(0)],
                },
                Boundary {
                    name: format!("{name}_top"),
                    edges: vec![e(2)],
                },
            ],
        )
        .expect("rectangle cylinder is valid")
    }

    /// Three unit squares in an L, opposite sides glued.
    pub fn l_shape() -> TranslationSurface {
        let v = |x, y| Vec2::from_i64(x, y);
        let poly = Polygon::new(
            "L",
            vec![v(0, 0), v(1, 0), v(2, 0), v(2, 1), v(1, 1), v(1, 2), v(0, 2), v(0, 1)],
        );
        let e = |i| EdgeRef::new(0, i);
        // bottom 0,1 ; right 2 ; step 3 ; upper right 4 ; top 5 ; left 6,7
        TranslationSurface::new(
            vec![poly],
            vec![(e(0), e(5)), (e(1), e(3)), (e(2), e(7)), (e(4), e(6))],
            vec![],
        )
        .expect("L is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn torus_is_flat() {
        let d = unit_torus().singularity_data().unwrap();
        assert_eq!(d.genus(), 1);
        assert!(d.orders().is_empty());
        assert_eq!(d.vertices.len(), 1);
        assert_eq!(d.vertices[0].angle_pi, 2);
    }

    #[test]
    fn l_shape_has_one_double_zero() {
        let d = l_shape().singularity_data().unwrap();
        assert_eq!(d.genus(), 2);
        assert_eq!(d.orders(), vec![2]);
        assert!(d.gauss_bonnet_holds());
        assert_eq!(l_shape().area(), Q::from_integer(3.into()));
    }

    #[test]
    fn cylinder_has_two_poles() {
        let c = cylinder("C", Q::from_integer(2.into()), Q::from_integer(1.into()));
        assert_eq!(c.singularity_data(), Err(FlatError::OpenSurface));
        let d = c.flat_data().unwrap();
        assert_eq!(d.genus(), 0);
        assert_eq!(d.components[0].signature(), vec![-1, -1]);
        assert!(d.gauss_bonnet_holds());
    }

    #[test]
    fn rejects_bad_pairing() {
        let t = unit_torus();
        let e = |i| EdgeRef::new(0, i);
        let bad = TranslationSurface::new(t.polygons().to_vec(), vec![(e(0), e(1)), (e(2), e(3))], vec![]);
        assert!(matches!(bad, Err(FlatError::InvalidPairing(_))));
        let missing = TranslationSurface::new(t.polygons().to_vec(), vec![(e(0), e(2))], vec![]);
        assert!(matches!(missing, Err(FlatError::InvalidPairing(_))));
    }

    #[test]
    fn order_at_points() {
        let l = l_shape();
        assert_eq!(l.order_at("L", &Vec2::from_i64(0, 0)), Ok(2));
        assert_eq!(l.order_at("L", &Vec2::frac(1, 2, 1, 2)), Ok(0));
        assert!(matches!(
            l.order_at("L", &Vec2::from_i64(3, 3)),
            Err(FlatError::PointOutside(_))
        ));
    }
}
