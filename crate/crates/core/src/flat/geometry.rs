//! Exact planar geometry over the rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2 {
    pub x: Q,
    pub y: Q,
}

impl Vec2 {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Self::new(Q::from_integer(x.into()), Q::from_integer(y.into()))
    }

    /// `(xn/xd, yn/yd)`.
    pub fn frac(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self::new(Q::new(xn.into(), xd.into()), Q::new(yn.into(), yd.into()))
    }

    pub fn zero() -> Self {
        Self::new(Q::zero(), Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn plus(&self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn minus(&self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }

    pub fn scaled(&self, c: &Q) -> Vec2 {
        Vec2::new(&self.x * c, &self.y * c)
    }

    pub fn cross(&self, o: &Vec2) -> Q {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vec2) -> Q {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn norm2(&self) -> Q {
        self.dot(self)
    }

    /// Quarter turn counterclockwise.
    pub fn perp(&self) -> Vec2 {
        Vec2::new(-&self.y, self.x.clone())
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

pub fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> Ordering {
    b.minus(a).cross(&c.minus(a)).cmp(&Q::zero())
}

/// `p` on the closed segment `[a, b]`.
pub fn on_segment(p: &Vec2, a: &Vec2, b: &Vec2) -> bool {
    orient(a, b, p) == Ordering::Equal && p.minus(a).dot(&p.minus(b)) <= Q::zero()
}

/// Closed segments `[a, b]` and `[c, d]` share a point.
pub fn segments_intersect(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2
        && o3 != o4
        && o1 != Ordering::Equal
        && o2 != Ordering::Equal
        && o3 != Ordering::Equal
        && o4 != Ordering::Equal
    {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Monotone rational stand-in for the argument of `v`, in `[0, 4)`.
pub fn diamond(v: &Vec2) -> Q {
    let (x, y) = (&v.x, &v.y);
    let zero = Q::zero();
    if *y >= zero && !(y.is_zero() && *x < zero) {
        if *x >= zero {
            y / (x + y)
        } else {
            Q::one() - x / (-x + y)
        }
    } else if *x <= zero {
        Q::from_integer(2.into()) - y / (-x - y)
    } else {
        Q::from_integer(3.into()) + x / (x - y)
    }
}

/// Counterclockwise position of `v` relative to `a`, as a value in `[0, 4)`.
pub fn ccw_rel(a: &Vec2, v: &Vec2) -> Q {
    let four = Q::from_integer(4.into());
    let r = diamond(v) - diamond(a);
    if r < Q::zero() {
        r + four
    } else {
        r
    }
}

/// Whether direction `d` is met by the counterclockwise sweep from `a`
/// (exclusive) to `b` (inclusive).
pub fn sweep_hits(a: &Vec2, b: &Vec2, d: &Vec2) -> bool {
    let rd = ccw_rel(a, d);
    rd.is_positive() && rd <= ccw_rel(a, b)
}

pub fn rational_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Q::new(root(q.numer())?, root(q.denom())?))
}

/// Twice the signed area.
pub fn signed_area2(poly: &[Vec2]) -> Q {
    let n = poly.len();
    (0..n).fold(Q::zero(), |acc, i| acc + poly[i].cross(&poly[(i + 1) % n]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Vertex(usize),
    Edge(usize),
    Inside,
    Outside,
}

pub fn locate(poly: &[Vec2], p: &Vec2) -> Location {
    let n = poly.len();
    if let Some(i) = poly.iter().position(|v| v == p) {
        return Location::Vertex(i);
    }
    if let Some(i) = (0..n).find(|&i| on_segment(p, &poly[i], &poly[(i + 1) % n])) {
        return Location::Edge(i);
    }
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = &a.x + (&p.y - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// The open segment `(p, q)` lies in the interior of the polygon.
pub fn segment_inside(poly: &[Vec2], p: &Vec2, q: &Vec2) -> bool {
    if p == q || locate(poly, p) == Location::Outside || locate(poly, q) == Location::Outside {
        return false;
    }
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        for v in [a, b] {
            if v != p && v != q && on_segment(v, p, q) {
                return false;
            }
        }
        let (o1, o2) = (orient(p, q, a), orient(p, q, b));
        let (o3, o4) = (orient(a, b, p), orient(a, b, q));
        if o1 != Ordering::Equal
            && o2 != Ordering::Equal
            && o1 != o2
            && o3 != Ordering::Equal
            && o4 != Ordering::Equal
            && o3 != o4
        {
            return false;
        }
    }
    let two = Q::from_integer(2.into());
    let mid = Vec2::new((&p.x + &q.x) / &two, (&p.y + &q.y) / &two);
    locate(poly, &mid) == Location::Inside
}

/// Smallest `t ≥ 0` with `o + t·dir` on the polygon boundary.
pub fn first_hit(poly: &[Vec2], o: &Vec2, dir: &Vec2) -> Option<Vec2> {
    let n = poly.len();
    let mut best: Option<Q> = None;
    let mut consider = |t: Q| {
        if !t.is_negative() && best.as_ref().is_none_or(|b| t < *b) {
            best = Some(t);
        }
    };
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        let e = b.minus(a);
        let denom = dir.cross(&e);
        let ao = a.minus(o);
        if denom.is_zero() {
            if ao.cross(dir).is_zero() {
                let dd = dir.norm2();
                consider(ao.dot(dir) / &dd);
                consider(b.minus(o).dot(dir) / &dd);
            }
            continue;
        }
        let t = ao.cross(&e) / &denom;
        let u = ao.cross(dir) / &denom;
        if !u.is_negative() && u <= Q::one() {
            consider(t);
        }
    }
    best.map(|t| o.plus(&dir.scaled(&t)))
}

/// Simple, counterclockwise, no zero-length or folded edges.
pub fn polygon_problem(poly: &[Vec2]) -> Option<&'static str> {
    let n = poly.len();
    if n < 3 {
        return Some("fewer than three vertices");
    }
    for i in 0..n {
        let (a, b, c) = (&poly[i], &poly[(i + 1) % n], &poly[(i + 2) % n]);
        if a == b {
            return Some("repeated vertex");
        }
        if orient(a, b, c) == Ordering::Equal && b.minus(a).dot(&c.minus(b)) <= Q::zero() {
            return Some("edge folds back");
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(&poly[i], &poly[(i + 1) % n], &poly[j], &poly[(j + 1) % n]) {
                return Some("self-intersecting");
            }
        }
    }
    if poly.iter().collect::<std::collections::BTreeSet<_>>().len() != n {
        return Some("repeated vertex");
    }
    if !signed_area2(poly).is_positive() {
        return Some("not counterclockwise");
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn diamond_orders_axes() {
        let dirs = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
        let vals: Vec<Q> = dirs.iter().map(|&(x, y)| diamond(&Vec2::from_i64(x, y))).collect();
        for w in vals.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(vals[0], Q::zero());
        assert_eq!(vals[4], Q::from_integer(2.into()));
    }

    #[test]
    fn sqrt_and_hits() {
        assert_eq!(
            rational_sqrt(&Q::new(9.into(), 4.into())),
            Some(Q::new(3.into(), 2.into()))
        );
        assert_eq!(rational_sqrt(&Q::from_integer(2.into())), None);
        let sq = [
            Vec2::from_i64(0, 0),
            Vec2::from_i64(2, 0),
            Vec2::from_i64(2, 2),
            Vec2::from_i64(0, 2),
        ];
        let hit = first_hit(&sq, &Vec2::from_i64(1, 1), &Vec2::from_i64(1, 0)).unwrap();
        assert_eq!(hit, Vec2::from_i64(2, 1));
        assert!(segment_inside(&sq, &Vec2::from_i64(0, 0), &Vec2::from_i64(1, 1)));
        assert!(!segment_inside(&sq, &Vec2::from_i64(0, 0), &Vec2::from_i64(2, 0)));
        assert_eq!(locate(&sq, &Vec2::from_i64(1, 0)), Location::Edge(0));
        assert!(polygon_problem(&sq).is_none());
        let cw: Vec<Vec2> = sq.iter().rev().cloned().collect();
        assert_eq!(polygon_problem(&cw), Some("not counterclockwise"));
    }

    fn dir() -> impl Strategy<Value = Vec2> {
        (-6i64..=6, -6i64..=6)
            .prop_filter("nonzero", |(x, y)| *x != 0 || *y != 0)
            .prop_map(|(x, y)| Vec2::from_i64(x, y))
    }

    proptest! {
        #[test]
        fn diamond_agrees_with_float_argument(u in dir(), v in dir()) {
            let arg = |w: &Vec2| {
                let (x, y) = (num_traits::ToPrimitive::to_f64(&w.x).unwrap(), num_traits::ToPrimitive::to_f64(&w.y).unwrap());
                let a = y.atan2(x);
                if a < 0.0 { a + std::f64::consts::TAU } else { a }
            };
            let (au, av) = (arg(&u), arg(&v));
            if (au - av).abs() > 1e-9 {
                prop_assert_eq!(diamond(&u) < diamond(&v), au < av);
            }
        }
    }
}
