//! Slit cross-gluing and cylinder plumbing.

use num_traits::{Signed, Zero};

use super::geometry::{self, Location, Vec2, Q};
use super::{fresh_name, Boundary, EdgeRef, FlatError, Polygon, TranslationSurface};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Link {
    Pair(usize),
    Boundary(usize),
    Open,
}

/// Editable copy of a surface where edges carry stable ids.
struct Work {
    names: Vec<String>,
    origin: Vec<usize>,
    verts: Vec<Vec<Vec2>>,
    gids: Vec<Vec<usize>>,
    link: Vec<Link>,
    bnames: Vec<String>,
    bedges: Vec<Vec<usize>>,
}

impl Work {
    fn from_surface(s: &TranslationSurface) -> Self {
        let mut gids = Vec::new();
        let mut next = 0;
        for p in s.polygons() {
            gids.push((next..next + p.vertices.len()).collect::<Vec<_>>());
            next += p.vertices.len();
        }
        let gid = |e: &EdgeRef| gids[e.polygon][e.edge];
        let mut link = vec![Link::Open; next];
        for (a, b) in s.pairs() {
            link[gid(a)] = Link::Pair(gid(b));
            link[gid(b)] = Link::Pair(gid(a));
        }
        let mut bedges = Vec::new();
        for (k, b) in s.boundaries().iter().enumerate() {
            for e in &b.edges {
                link[gid(e)] = Link::Boundary(k);
            }
            bedges.push(b.edges.iter().map(gid).collect());
        }
        Self {
            names: s.polygons().iter().map(|p| p.name.clone()).collect(),
            origin: (0..s.polygons().len()).collect(),
            verts: s.polygons().iter().map(|p| p.vertices.clone()).collect(),
            gids,
            link,
            bnames: s.boundaries().iter().map(|b| b.name.clone()).collect(),
            bedges,
        }
    }

    fn new_gid(&mut self) -> usize {
        self.link.push(Link::Open);
        self.link.len() - 1
    }

    fn locate(&self, gid: usize) -> (usize, usize) {
        for (p, g) in self.gids.iter().enumerate() {
            if let Some(i) = g.iter().position(|x| *x == gid) {
                return (p, i);
            }
        }
        panic!("edge id {gid} not present")
    }

    fn ends(&self, gid: usize) -> (Vec2, Vec2) {
        let (p, i) = self.locate(gid);
        let v = &self.verts[p];
        (v[i].clone(), v[(i + 1) % v.len()].clone())
    }

    /// Inserts `x` after the start of edge `gid`; returns the id of the second half.
    fn insert_after(&mut self, gid: usize, x: Vec2) -> usize {
        let (p, i) = self.locate(gid);
        let new = self.new_gid();
        self.verts[p].insert(i + 1, x);
        self.gids[p].insert(i + 1, new);
        new
    }

    /// Splits edge `gid` at interior point `x`, and its partner at the
    /// corresponding point.
    fn split(&mut self, gid: usize, x: Vec2) -> Result<(), FlatError> {
        let (_, end) = self.ends(gid);
        match self.link[gid] {
            Link::Pair(o) => {
                let (o_start, _) = self.ends(o);
                let x_partner = x.plus(&o_start.minus(&end));
                let a2 = self.insert_after(gid, x);
                let o2 = self.insert_after(o, x_partner);
                self.link[gid] = Link::Pair(o2);
                self.link[o2] = Link::Pair(gid);
                self.link[a2] = Link::Pair(o);
                self.link[o] = Link::Pair(a2);
            }
            Link::Boundary(k) => {
                let a2 = self.insert_after(gid, x);
                self.link[a2] = Link::Boundary(k);
                let pos = self.bedges[k].iter().position(|e| *e == gid).expect("listed");
                self.bedges[k].insert(pos + 1, a2);
            }
            Link::Open => return Err(FlatError::Inconsistent("split of an unglued edge".into())),
        }
        Ok(())
    }

    /// Makes `x`, a boundary point of polygon `p`, a vertex.
    fn ensure_vertex(&mut self, p: usize, x: &Vec2) -> Result<(), FlatError> {
        match geometry::locate(&self.verts[p], x) {
            Location::Vertex(_) => Ok(()),
            Location::Edge(i) => {
                let g = self.gids[p][i];
                self.split(g, x.clone())
            }
            _ => Err(FlatError::Inconsistent(
                "chord end is not on the polygon boundary".into(),
            )),
        }
    }

    fn into_surface(self) -> Result<TranslationSurface, FlatError> {
        let mut where_ = vec![EdgeRef::new(0, 0); self.link.len()];
        let mut live = vec![false; self.link.len()];
        for (p, g) in self.gids.iter().enumerate() {
            for (i, id) in g.iter().enumerate() {
                where_[*id] = EdgeRef::new(p, i);
                live[*id] = true;
            }
        }
        let mut pairs = Vec::new();
        for (id, l) in self.link.iter().enumerate() {
            if !live[id] {
                continue;
            }
            match l {
                Link::Pair(o) if id < *o => pairs.push((where_[id], where_[*o])),
                Link::Open => return Err(FlatError::Inconsistent("edge left unglued".into())),
                _ => {}
            }
        }
        let polygons = self
            .names
            .into_iter()
            .zip(self.verts)
            .map(|(n, v)| Polygon::new(n, v))
            .collect();
        let boundaries = self
            .bnames
            .into_iter()
            .zip(self.bedges)
            .map(|(name, e)| Boundary {
                name,
                edges: e.iter().map(|g| where_[*g]).collect(),
            })
            .collect();
        TranslationSurface::new(polygons, pairs, boundaries)
    }

    fn edge_ref(&self, gid: usize) -> EdgeRef {
        let (p, i) = self.locate(gid);
        EdgeRef::new(p, i)
    }
}

/// A straight segment from `from` to `to` in the named polygon's coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slit {
    pub polygon: String,
    pub from: Vec2,
    pub to: Vec2,
}

impl Slit {
    pub fn new(polygon: impl Into<String>, from: Vec2, to: Vec2) -> Self {
        Self {
            polygon: polygon.into(),
            from,
            to,
        }
    }

    pub fn vector(&self) -> Vec2 {
        self.to.minus(&self.from)
    }
}

/// The two sides of a cut slit: `left` runs from start to end with the
/// surface on its left, `right` runs back.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seam {
    pub left: EdgeRef,
    pub right: EdgeRef,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlitResult {
    pub surface: TranslationSurface,
    /// The left side of each seam is glued to the right side of the other.
    pub seams: [Seam; 2],
}

impl SlitResult {
    /// Orders at the merged start points and the merged end points.
    pub fn endpoint_orders(&self) -> Result<[i64; 2], FlatError> {
        let s = &self.surface;
        let left = self.seams[0].left;
        let n = s.polygons()[left.polygon].vertices.len();
        let end = EdgeRef::new(left.polygon, (left.edge + 1) % n);
        Ok([s.order_at_edge_start(left)?, s.order_at_edge_start(end)?])
    }

    /// Undoes the cross-gluing: each slit closes up on itself again.
    pub fn redegenerate(&self) -> Result<TranslationSurface, FlatError> {
        let s = &self.surface;
        let [a, b] = self.seams;
        let mut pairs: Vec<(EdgeRef, EdgeRef)> = s
            .pairs()
            .iter()
            .copied()
            .filter(|(x, y)| {
                let crossed = |u: EdgeRef, v: EdgeRef| (u == a.left && v == b.right) || (u == b.left && v == a.right);
                !(crossed(*x, *y) || crossed(*y, *x))
            })
            .collect();
        pairs.push((a.left, a.right));
        pairs.push((b.left, b.right));
        TranslationSurface::new(s.polygons().to_vec(), pairs, s.boundaries().to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum PointId {
    Vertex(usize),
    Edge(EdgeRef, Q),
}

/// Cuts both slits open and glues each one's left side to the other's right side.
pub fn slit_smoothing(s: &TranslationSurface, s1: &Slit, s2: &Slit) -> Result<SlitResult, FlatError> {
    let d = s1.vector();
    if d.is_zero() || d != s2.vector() {
        return Err(FlatError::UnequalVectors);
    }
    let slits = [s1, s2];
    let mut origin = [0usize; 2];
    for (k, sl) in slits.iter().enumerate() {
        origin[k] = s.polygon_index(&sl.polygon)?;
        if !geometry::segment_inside(&s.polygons()[origin[k]].vertices, &sl.from, &sl.to) {
            return Err(FlatError::SlitOutside {
                polygon: sl.polygon.clone(),
            });
        }
    }
    if origin[0] == origin[1] && geometry::segments_intersect(&s1.from, &s1.to, &s2.from, &s2.to) {
        return Err(FlatError::OverlappingSlits);
    }
    let ids = [
        point_id(s, origin[0], &s1.from)?,
        point_id(s, origin[0], &s1.to)?,
        point_id(s, origin[1], &s2.from)?,
        point_id(s, origin[1], &s2.to)?,
    ];
    let same = |i: usize, j: usize| ids[i].is_some() && ids[i] == ids[j];
    if same(0, 1) || same(2, 3) {
        return Err(FlatError::ClosedSlit);
    }
    if same(0, 2) || same(0, 3) || same(1, 2) || same(1, 3) {
        return Err(FlatError::OverlappingSlits);
    }

    let mut w = Work::from_surface(s);
    let mut seams: [Option<(usize, usize)>; 2] = [None, None];
    for k in 0..2 {
        if seams[k].is_some() {
            continue;
        }
        let sl = slits[k];
        let q = (0..w.verts.len())
            .find(|&q| w.origin[q] == origin[k] && geometry::segment_inside(&w.verts[q], &sl.from, &sl.to))
            .ok_or_else(|| FlatError::Inconsistent("slit not inside any piece".into()))?;
        let a = geometry::first_hit(&w.verts[q], &sl.from, &d.neg()).expect("ray leaves polygon");
        let b = geometry::first_hit(&w.verts[q], &sl.to, &d).expect("ray leaves polygon");
        let mut group = vec![k];
        let other = 1 - k;
        if seams[other].is_none()
            && origin[other] == origin[k]
            && geometry::on_segment(&slits[other].from, &a, &b)
            && geometry::on_segment(&slits[other].to, &a, &b)
        {
            group.push(other);
        }
        w.ensure_vertex(q, &a)?;
        w.ensure_vertex(q, &b)?;
        let cut = cut_chord(&mut w, q, &a, &b, &group.iter().map(|&j| slits[j]).collect::<Vec<_>>())?;
        for (j, seam) in group.into_iter().zip(cut) {
            seams[j] = Some(seam);
        }
    }
    let [(l0, r0), (l1, r1)] = seams.map(|x| x.expect("both slits cut"));
    w.link[l0] = Link::Pair(r1);
    w.link[r1] = Link::Pair(l0);
    w.link[l1] = Link::Pair(r0);
    w.link[r0] = Link::Pair(l1);
    let refs = [l0, r0, l1, r1].map(|g| w.edge_ref(g));
    let surface = w.into_surface()?;
    Ok(SlitResult {
        surface,
        seams: [
            Seam {
                left: refs[0],
                right: refs[1],
            },
            Seam {
                left: refs[2],
                right: refs[3],
            },
        ],
    })
}

/// `None` for interior points, which are never shared.
fn point_id(s: &TranslationSurface, p: usize, x: &Vec2) -> Result<Option<PointId>, FlatError> {
    let poly = &s.polygons()[p];
    match geometry::locate(&poly.vertices, x) {
        Location::Inside => Ok(None),
        Location::Outside => Err(FlatError::PointOutside(poly.name.clone())),
        Location::Vertex(i) => {
            let data = s.flat_data()?;
            let (k, v) = data
                .vertices
                .iter()
                .enumerate()
                .find(|(_, v)| v.corners.contains(&(p, i)))
                .expect("corner classified");
            if v.order.is_none() {
                return Err(FlatError::OnBoundary);
            }
            Ok(Some(PointId::Vertex(k)))
        }
        Location::Edge(i) => {
            let e = EdgeRef::new(p, i);
            let partner = s
                .pairs()
                .iter()
                .find_map(|(a, b)| {
                    if *a == e {
                        Some(*b)
                    } else if *b == e {
                        Some(*a)
                    } else {
                        None
                    }
                })
                .ok_or(FlatError::OnBoundary)?;
            // identify the point by its distance from the start of the lower-indexed edge
            let start = &poly.vertices[i];
            let t = x.minus(start).dot(&poly.edge_vector(i)) / poly.edge_vector(i).norm2();
            let (edge, param) = if e < partner {
                (e, t)
            } else {
                (partner, Q::from_integer(1.into()) - t)
            };
            Ok(Some(PointId::Edge(edge, param)))
        }
    }
}

/// Splits polygon `q` along the chord `a → b` (both already vertices),
/// leaving the slits on it open. Returns `(left, right)` edge ids per slit.
fn cut_chord(w: &mut Work, q: usize, a: &Vec2, b: &Vec2, slits: &[&Slit]) -> Result<Vec<(usize, usize)>, FlatError> {
    let d = b.minus(a);
    let key = |x: &Vec2| x.minus(a).dot(&d);
    let mut points: Vec<Vec2> = vec![a.clone(), b.clone()];
    for sl in slits {
        points.push(sl.from.clone());
        points.push(sl.to.clone());
    }
    points.sort_by_key(key);
    points.dedup();
    let verts = w.verts[q].clone();
    let gids = w.gids[q].clone();
    let n = verts.len();
    let ia = verts.iter().position(|v| v == a).expect("a is a vertex");
    let ib = verts.iter().position(|v| v == b).expect("b is a vertex");
    let segs = points.len() - 1;
    let left_ids: Vec<usize> = (0..segs).map(|_| w.new_gid()).collect();
    let right_ids: Vec<usize> = (0..segs).map(|_| w.new_gid()).collect();

    let arc = |from: usize, to: usize| {
        let mut vs = Vec::new();
        let mut es = Vec::new();
        let mut i = from;
        loop {
            vs.push(verts[i].clone());
            if i == to {
                break;
            }
            es.push(gids[i]);
            i = (i + 1) % n;
        }
        (vs, es)
    };
    let inner = &points[1..points.len() - 1];
    let (mut lv, mut le) = arc(ib, ia);
    lv.extend(inner.iter().cloned());
    le.extend(left_ids.iter().copied());
    let (mut rv, mut re) = arc(ia, ib);
    rv.extend(inner.iter().rev().cloned());
    re.extend(right_ids.iter().rev().copied());

    let mut result = Vec::new();
    for sl in slits {
        let j = points.iter().position(|p| *p == sl.from).expect("slit start on chord");
        if points[j + 1] != sl.to {
            return Err(FlatError::OverlappingSlits);
        }
        result.push((left_ids[j], right_ids[j]));
    }
    for j in 0..segs {
        if !result.iter().any(|(l, _)| *l == left_ids[j]) {
            w.link[left_ids[j]] = Link::Pair(right_ids[j]);
            w.link[right_ids[j]] = Link::Pair(left_ids[j]);
        }
    }
    let name = fresh_name(&w.names[q], |c| w.names.iter().any(|x| x == c));
    let orig = w.origin[q];
    w.verts[q] = lv;
    w.gids[q] = le;
    w.names.push(name);
    w.origin.push(orig);
    w.verts.push(rv);
    w.gids.push(re);
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbResult {
    pub surface: TranslationSurface,
    /// Name of the inserted cylinder polygon.
    pub cylinder: String,
}

/// Glues boundary `alpha` of `a` to boundary `beta` of `b` through a cylinder.
pub fn plumb_cylinder(
    a: &TranslationSurface,
    alpha: &str,
    b: &TranslationSurface,
    beta: &str,
    height: &Q,
    twist: &Q,
) -> Result<PlumbResult, FlatError> {
    a.boundary_index(alpha)?;
    let bi = b.boundary_index(beta)?;
    let (u, renamed) = a.disjoint_union(b);
    plumb_self(&u, alpha, &renamed[bi], height, twist)
}

/// Inserts a cylinder of the given height between two boundary circles of
/// one surface. The top of the cylinder is sheared by `twist` along the circle.
pub fn plumb_self(
    s: &TranslationSurface,
    alpha: &str,
    beta: &str,
    height: &Q,
    twist: &Q,
) -> Result<PlumbResult, FlatError> {
    let ia = s.boundary_index(alpha)?;
    let ib = s.boundary_index(beta)?;
    if ia == ib {
        return Err(FlatError::InvalidBoundary {
            name: alpha.to_string(),
            reason: "cannot plumb a circle to itself".into(),
        });
    }
    if !height.is_positive() {
        return Err(FlatError::NonPositiveHeight);
    }
    let wa = s.holonomy(ia);
    let wb = s.holonomy(ib);
    if wa.norm2() != wb.norm2() {
        return Err(FlatError::WidthMismatch {
            alpha: alpha.to_string(),
            beta: beta.to_string(),
            alpha_width2: Box::new(wa.norm2()),
            beta_width2: Box::new(wb.norm2()),
        });
    }
    if wb != wa.neg() {
        return Err(FlatError::HolonomyMismatch {
            alpha: alpha.to_string(),
            beta: beta.to_string(),
        });
    }
    let width = rational_width(&wa).ok_or_else(|| FlatError::IrrationalCircumference(alpha.to_string()))?;
    let w = wa.neg();
    let unit = w.scaled(&(Q::from_integer(1.into()) / &width));
    let h = unit.scaled(twist).plus(&unit.perp().scaled(height));
    let ww = w.norm2();

    let mut work = Work::from_surface(s);
    let alpha_edges = work.bedges[ia].clone();
    let beta_edges = work.bedges[ib].clone();
    let frac = |work: &Work, g: usize| {
        let (x, y) = work.ends(g);
        (y.minus(&x).dot(&w) / &ww).abs()
    };

    let mut verts = vec![Vec2::zero()];
    let mut gids = Vec::new();
    let mut glue = Vec::new();
    let mut acc = Q::zero();
    for g in alpha_edges.iter().rev() {
        acc += frac(&work, *g);
        let id = work.new_gid();
        gids.push(id);
        glue.push((id, *g));
        verts.push(w.scaled(&acc));
    }
    verts.pop();
    verts.push(w.clone());
    let right = work.new_gid();
    gids.push(right);
    verts.push(w.plus(&h));
    let mut acc = Q::from_integer(1.into());
    for g in beta_edges.iter().rev() {
        acc -= frac(&work, *g);
        let id = work.new_gid();
        gids.push(id);
        glue.push((id, *g));
        verts.push(h.plus(&w.scaled(&acc)));
    }
    verts.pop();
    verts.push(h.clone());
    let left = work.new_gid();
    gids.push(left);
    for (x, y) in glue.into_iter().chain([(right, left)]) {
        work.link[x] = Link::Pair(y);
        work.link[y] = Link::Pair(x);
    }
    let cylinder = fresh_name("cyl", |c| work.names.iter().any(|x| x == c));
    work.names.push(cylinder.clone());
    work.origin.push(usize::MAX);
    work.verts.push(verts);
    work.gids.push(gids);
    for k in [ia.max(ib), ia.min(ib)] {
        work.bnames.remove(k);
        work.bedges.remove(k);
    }
    for l in work.link.iter_mut() {
        if let Link::Boundary(k) = l {
            let shift = usize::from(*k > ia) + usize::from(*k > ib);
            *k -= shift;
        }
    }
    Ok(PlumbResult {
        surface: work.into_surface()?,
        cylinder,
    })
}

fn rational_width(w: &Vec2) -> Option<Q> {
    geometry::rational_sqrt(&w.norm2())
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn two_tori_make_genus_two() {
        let (u, _) = unit_torus().disjoint_union(&unit_torus());
        let names: Vec<String> = u.polygons().iter().map(|p| p.name.clone()).collect();
        let s1 = Slit::new(&names[0], Vec2::frac(1, 4, 1, 2), Vec2::frac(3, 4, 1, 2));
        let s2 = Slit::new(&names[1], Vec2::frac(1, 4, 1, 2), Vec2::frac(3, 4, 1, 2));
        let r = slit_smoothing(&u, &s1, &s2).unwrap();
        let d = r.surface.singularity_data().unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.genus(), 2);
        assert_eq!(d.orders(), vec![1, 1]);
        assert_eq!(r.endpoint_orders().unwrap(), [1, 1]);
        assert_eq!(r.surface.area(), u.area());
        let back = r.redegenerate().unwrap().singularity_data().unwrap();
        assert_eq!(back.genus(), 2);
        assert_eq!(back.components.len(), 2);
        assert!(back.orders().is_empty());
    }

    #[test]
    fn one_torus_two_slits() {
        let t = unit_torus();
        let s1 = Slit::new("T", Vec2::frac(1, 4, 1, 4), Vec2::frac(3, 4, 1, 4));
        let s2 = Slit::new("T", Vec2::frac(1, 4, 3, 4), Vec2::frac(3, 4, 3, 4));
        let r = slit_smoothing(&t, &s1, &s2).unwrap();
        let d = r.surface.singularity_data().unwrap();
        assert_eq!(d.genus(), 2);
        assert_eq!(d.orders(), vec![1, 1]);
    }

    #[test]
    fn collinear_slits_share_a_chord() {
        let t = unit_torus();
        let s1 = Slit::new("T", Vec2::frac(1, 8, 1, 2), Vec2::frac(3, 8, 1, 2));
        let s2 = Slit::new("T", Vec2::frac(5, 8, 1, 2), Vec2::frac(7, 8, 1, 2));
        let d = slit_smoothing(&t, &s1, &s2)
            .unwrap()
            .surface
            .singularity_data()
            .unwrap();
        assert_eq!(d.genus(), 2);
        assert_eq!(d.orders(), vec![1, 1]);
    }

    #[test]
    fn slit_from_a_singular_vertex() {
        let l = l_shape();
        let (u, _) = l.disjoint_union(&unit_torus());
        let s1 = Slit::new("L", Vec2::from_i64(0, 0), Vec2::frac(1, 2, 1, 2));
        let s2 = Slit::new("T", Vec2::frac(1, 4, 1, 4), Vec2::frac(3, 4, 3, 4));
        let r = slit_smoothing(&u, &s1, &s2).unwrap();
        let d = r.surface.singularity_data().unwrap();
        assert_eq!(d.genus(), 3);
        assert_eq!(r.endpoint_orders().unwrap(), [3, 1]);
        assert_eq!(d.orders(), vec![3, 1]);
        assert!(d.gauss_bonnet_holds());
    }

    #[test]
    fn slit_errors() {
        let t = unit_torus();
        let s1 = Slit::new("T", Vec2::frac(1, 4, 1, 4), Vec2::frac(3, 4, 1, 4));
        let s2 = Slit::new("T", Vec2::frac(1, 4, 3, 4), Vec2::frac(1, 2, 3, 4));
        assert_eq!(slit_smoothing(&t, &s1, &s2), Err(FlatError::UnequalVectors));
        let z = Slit::new("T", Vec2::frac(1, 4, 1, 4), Vec2::frac(1, 4, 1, 4));
        assert_eq!(slit_smoothing(&t, &z, &z), Err(FlatError::UnequalVectors));
        let s3 = Slit::new("T", Vec2::frac(1, 2, 1, 4), Vec2::frac(1, 1, 1, 4));
        assert_eq!(slit_smoothing(&t, &s1, &s3), Err(FlatError::OverlappingSlits));
        let diag = Slit::new("T", Vec2::from_i64(0, 0), Vec2::from_i64(1, 1));
        let other = Slit::new("T", Vec2::frac(1, 2, 0, 1), Vec2::frac(3, 2, 1, 1));
        assert!(slit_smoothing(&t, &diag, &other).is_err());
    }

    #[test]
    fn plumbing_two_cylinders_and_closing_up() {
        let a = cylinder("A", q(2, 1), q(1, 1));
        let b = cylinder("B", q(2, 1), q(1, 2));
        let r = plumb_cylinder(&a, "A_top", &b, "B_bot", &q(3, 1), &q(1, 3)).unwrap();
        let d = r.surface.flat_data().unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.genus(), 0);
        assert_eq!(r.surface.area(), a.area() + b.area() + q(6, 1));
        let t = plumb_self(&r.surface, "A_bot", "B_top", &q(1, 1), &q(0, 1)).unwrap();
        let d = t.surface.singularity_data().unwrap();
        assert_eq!(d.genus(), 1);
        assert!(d.orders().is_empty());
    }

    #[test]
    fn plumbing_errors() {
        let a = cylinder("A", q(2, 1), q(1, 1));
        let b = cylinder("B", q(1, 1), q(1, 1));
        assert!(matches!(
            plumb_cylinder(&a, "A_top", &b, "B_bot", &q(1, 1), &q(0, 1)),
            Err(FlatError::WidthMismatch { .. })
        ));
        assert!(matches!(
            plumb_cylinder(&a, "A_top", &a, "A_top", &q(1, 1), &q(0, 1)),
            Err(FlatError::HolonomyMismatch { .. })
        ));
        assert_eq!(
            plumb_self(&a, "A_top", "A_bot", &q(0, 1), &q(0, 1)).unwrap_err(),
            FlatError::NonPositiveHeight
        );
    }

    #[test]
    fn twice_holed_tori_plumb_to_genus_three() {
        let c = cylinder("C", q(1, 1), q(1, 1));
        let s1 = Slit::new("C", Vec2::frac(1, 4, 1, 4), Vec2::frac(3, 4, 1, 4));
        let s2 = Slit::new("C", Vec2::frac(1, 4, 3, 4), Vec2::frac(3, 4, 3, 4));
        let holed = slit_smoothing(&c, &s1, &s2).unwrap().surface;
        let hd = holed.flat_data().unwrap();
        assert_eq!(hd.genus(), 1);
        assert_eq!(hd.components[0].signature(), vec![1, 1, -1, -1]);
        let one = plumb_cylinder(&holed, "C_top", &holed, "C_bot", &q(1, 1), &q(1, 2)).unwrap();
        let names: Vec<String> = one.surface.boundaries().iter().map(|b| b.name.clone()).collect();
        assert_eq!(names.len(), 2);
        let two = plumb_self(&one.surface, &names[0], &names[1], &q(2, 1), &q(0, 1)).unwrap();
        let d = two.surface.singularity_data().unwrap();
        assert_eq!(d.genus(), 3);
        assert_eq!(d.orders(), vec![1, 1, 1, 1]);
        assert!(d.gauss_bonnet_holds());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rat(lo: i64, hi: i64, den: i64) -> impl Strategy<Value = Q> {
            (lo..=hi).prop_map(move |n| q(n, den))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn slit_pair_on_one_torus(w in rat(4, 12, 4), h in rat(4, 12, 4), dx in rat(1, 3, 8), dy in rat(-2, 2, 16), y1 in rat(1, 3, 8), gap in rat(1, 4, 8)) {
                let t = torus("T", w, h.clone());
                let y2 = &y1 + &gap + Q::from_integer(1.into()) / Q::from_integer(8.into());
                prop_assume!(&y2 + &dy.abs() < h && y1 > dy.abs());
                let x0 = q(1, 8);
                let p1 = Vec2::new(x0.clone(), y1.clone());
                let p2 = Vec2::new(x0, y2);
                let d = Vec2::new(dx, dy);
                let r = slit_smoothing(&t, &Slit::new("T", p1.clone(), p1.plus(&d)), &Slit::new("T", p2.clone(), p2.plus(&d))).unwrap();
                let data = r.surface.singularity_data().unwrap();
                prop_assert_eq!(data.genus(), 2);
                prop_assert_eq!(data.orders(), vec![1, 1]);
                prop_assert!(data.gauss_bonnet_holds());
                prop_assert_eq!(r.surface.area(), t.area());
                let back = r.redegenerate().unwrap().singularity_data().unwrap();
                prop_assert_eq!(back.genus(), 1);
                prop_assert!(back.orders().is_empty());
            }

            #[test]
            fn plumbing_adds_cylinder_area(w in rat(1, 8, 2), h1 in rat(1, 6, 3), h2 in rat(1, 6, 3), height in rat(1, 9, 5), twist in rat(-9, 9, 7)) {
                let a = cylinder("A", w.clone(), h1);
                let b = cylinder("B", w.clone(), h2);
                let r = plumb_cylinder(&a, "A_top", &b, "B_bot", &height, &twist).unwrap();
                prop_assert_eq!(r.surface.area(), a.area() + b.area() + &w * &height);
                let d = r.surface.flat_data().unwrap();
                prop_assert_eq!(d.components.len(), 1);
                prop_assert!(d.gauss_bonnet_holds());
                prop_assert_eq!(d.components[0].signature(), vec![-1, -1]);
            }
        }
    }
}
