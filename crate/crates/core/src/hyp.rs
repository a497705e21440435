//! PSL(2,R) kernel: isometries of the upper half-plane, their axes on the
//! boundary circle, linking of geodesics and collar widths.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyperbolicity margin: |trace| must exceed 2 by at least this much.
pub const EPS_ELL: f64 = 1e-10;
/// Boundary points closer than this (chordal metric) are treated as equal.
pub const EPS_SEP: f64 = 1e-9;

/// A signed 2x2 real matrix. Used where the SL(2,R) lift matters (trace
/// signs during construction); everything else goes through [`Isometry`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Sl2 { a, b, c, d }
    }

    /// Translation by `len` along the imaginary axis, towards infinity.
    pub fn diagonal(len: f64) -> Self {
        let h = 0.5 * len;
        Sl2::new(h.exp(), 0.0, 0.0, (-h).exp())
    }

    /// Translation by `len` along the geodesic from -1 to 1 (through i).
    pub fn unit_circle_translation(len: f64) -> Self {
        let h = 0.5 * len;
        Sl2::new(h.cosh(), h.sinh(), h.sinh(), h.cosh())
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Inverse, assuming determinant one.
    pub fn inverse(&self) -> Self {
        Sl2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn neg(&self) -> Self {
        Sl2::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// Rescale to determinant one (determinant must be positive).
    pub fn renormalized(&self) -> Self {
        let s = self.det().sqrt().recip();
        Sl2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn conjugate_by(&self, g: &Sl2) -> Self {
        *g * *self * g.inverse()
    }

    /// The class in PSL(2,R) of a matrix already of determinant 1. No
    /// rescaling: for products with large entries `ad - bc` is dominated by
    /// cancellation and dividing by it would only add error.
    pub fn to_isometry(&self) -> Isometry {
        Isometry::with_sign_fixed(*self)
    }

    /// Max-entry distance to the identity, allowing either sign.
    pub fn distance_to_pm_identity(&self) -> f64 {
        let plus = (self.a - 1.0).abs().max(self.b.abs()).max(self.c.abs()).max((self.d - 1.0).abs());
        let minus = (self.a + 1.0).abs().max(self.b.abs()).max(self.c.abs()).max((self.d + 1.0).abs());
        plus.min(minus)
    }
}

impl Mul for Sl2 {
    type Output = Sl2;

    fn mul(self, o: Sl2) -> Sl2 {
        Sl2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// An orientation-preserving isometry of the upper half-plane, stored as the
/// determinant-one representative with nonnegative trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: Sl2,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { m: Sl2::IDENTITY };

    /// Builds an isometry from any matrix of positive determinant.
    pub fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Sl2::new(a, b, c, d);
        let det = m.det();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::ConstructionFailure(format!("matrix determinant {det} is not positive")));
        }
        Ok(Isometry::with_sign_fixed(m.renormalized()))
    }

    fn with_sign_fixed(m: Sl2) -> Self {
        let tr = m.trace();
        let flip = if tr != 0.0 {
            tr < 0.0
        } else {
            // trace zero: make the first nonzero entry positive
            [m.a, m.b, m.c].into_iter().find(|v| *v != 0.0).unwrap_or(1.0) < 0.0
        };
        Isometry { m: if flip { m.neg() } else { m } }
    }

    pub fn matrix(&self) -> Sl2 {
        self.m
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.m.a, self.m.b, self.m.c, self.m.d]
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn det(&self) -> f64 {
        self.m.det()
    }

    pub fn inverse(&self) -> Self {
        Isometry { m: self.m.inverse() }
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        compose(self, other)
    }

    pub fn conjugate_by(&self, g: &Isometry) -> Isometry {
        g.compose(self).compose(&g.inverse())
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0 + EPS_ELL
    }

    pub fn translation_length(&self) -> Result<f64> {
        translation_length(self)
    }

    pub fn axis(&self) -> Result<AxisEndpoints> {
        axis(self)
    }

    pub fn apply(&self, z: Point) -> Point {
        mobius_point(&self.m, z)
    }

    pub fn apply_boundary(&self, x: BoundaryPoint) -> BoundaryPoint {
        mobius_boundary(&self.m, x)
    }
}

impl Mul for Isometry {
    type Output = Isometry;

    fn mul(self, o: Isometry) -> Isometry {
        compose(&self, &o)
    }
}

/// Matrix product, sign-normalized to nonnegative trace.
pub fn compose(f: &Isometry, g: &Isometry) -> Isometry {
    Isometry::with_sign_fixed(f.m * g.m)
}

/// Length of the closed geodesic whose holonomy is `f`: 2 arccosh(|tr|/2).
pub fn translation_length(f: &Isometry) -> Result<f64> {
    let tr = f.trace().abs();
    if tr <= 2.0 + EPS_ELL {
        return Err(Error::NotHyperbolic { trace: tr });
    }
    Ok(2.0 * (0.5 * tr).acosh())
}

/// Width of the embedded collar around a simple closed geodesic of length `len`.
pub fn collar_width(len: f64) -> Result<f64> {
    if !(len > 0.0) {
        return Err(Error::NonPositiveLength(len));
    }
    Ok((1.0 / (0.5 * len).sinh()).asinh())
}

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const I: Point = Point { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let arg = 1.0 + (dx * dx + dy * dy) / (2.0 * self.y * other.y);
        arg.max(1.0).acosh()
    }
}

pub(crate) fn mobius_point(m: &Sl2, z: Point) -> Point {
    // (a z + b) / (c z + d) with z = x + iy
    let nr = m.a * z.x + m.b;
    let ni = m.a * z.y;
    let dr = m.c * z.x + m.d;
    let di = m.c * z.y;
    let den = dr * dr + di * di;
    let det = m.det();
    Point::new((nr * dr + ni * di) / den, det * z.y / den)
}

/// A point of the boundary circle R ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(self) -> Option<f64> {
        match self {
            BoundaryPoint::Finite(x) => Some(x),
            BoundaryPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    /// Chordal distance after mapping R ∪ {∞} onto the unit circle.
    pub fn chordal_distance(self, other: BoundaryPoint) -> f64 {
        use BoundaryPoint::*;
        match (self, other) {
            (Infinity, Infinity) => 0.0,
            (Finite(x), Infinity) | (Infinity, Finite(x)) => 2.0 / (1.0 + x * x).sqrt(),
            (Finite(x), Finite(y)) => 2.0 * (x - y).abs() / ((1.0 + x * x).sqrt() * (1.0 + y * y).sqrt()),
        }
    }

    /// Position on the circle cut open at ∞ (∞ is the largest element).
    fn circle_key(self) -> (u8, f64) {
        match self {
            BoundaryPoint::Finite(x) => (0, x),
            BoundaryPoint::Infinity => (1, 0.0),
        }
    }

    fn strictly_between(self, lo: BoundaryPoint, hi: BoundaryPoint) -> bool {
        let k = self.circle_key();
        lt(lo.circle_key(), k) && lt(k, hi.circle_key())
    }
}

fn lt(p: (u8, f64), q: (u8, f64)) -> bool {
    p.0 < q.0 || (p.0 == q.0 && p.1 < q.1)
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(x) => write!(f, "{x}"),
            BoundaryPoint::Infinity => write!(f, "inf"),
        }
    }
}

fn mobius_boundary(m: &Sl2, x: BoundaryPoint) -> BoundaryPoint {
    match x {
        BoundaryPoint::Infinity => {
            if m.c == 0.0 {
                BoundaryPoint::Infinity
            } else {
                BoundaryPoint::Finite(m.a / m.c)
            }
        }
        BoundaryPoint::Finite(x) => {
            let den = m.c * x + m.d;
            if den == 0.0 {
                BoundaryPoint::Infinity
            } else {
                BoundaryPoint::Finite((m.a * x + m.b) / den)
            }
        }
    }
}

/// Fixed points of a hyperbolic isometry: the ends of its axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisEndpoints {
    pub attracting: BoundaryPoint,
    pub repelling: BoundaryPoint,
}

impl AxisEndpoints {
    pub fn new(attracting: BoundaryPoint, repelling: BoundaryPoint) -> Self {
        AxisEndpoints { attracting, repelling }
    }

    /// The imaginary axis, directed towards ∞.
    pub fn imaginary() -> Self {
        AxisEndpoints::new(BoundaryPoint::Infinity, BoundaryPoint::Finite(0.0))
    }

    pub fn reversed(&self) -> Self {
        AxisEndpoints::new(self.repelling, self.attracting)
    }

    pub fn mapped(&self, g: &Isometry) -> Self {
        AxisEndpoints::new(g.apply_boundary(self.attracting), g.apply_boundary(self.repelling))
    }

    pub fn mapped_sl2(&self, g: &Sl2) -> Self {
        AxisEndpoints::new(mobius_boundary(g, self.attracting), mobius_boundary(g, self.repelling))
    }

    pub fn points(&self) -> [BoundaryPoint; 2] {
        [self.attracting, self.repelling]
    }
}

/// Axis of a hyperbolic isometry, ordered (attracting, repelling).
pub fn axis(f: &Isometry) -> Result<AxisEndpoints> {
    let tr = f.trace();
    if tr.abs() <= 2.0 + EPS_ELL {
        return Err(Error::NotHyperbolic { trace: tr.abs() });
    }
    let Sl2 { a, b, c, d } = f.m;
    if c == 0.0 {
        // z -> (a z + b)/d fixes ∞ and b/(d - a)
        let other = BoundaryPoint::Finite(b / (d - a));
        return Ok(if a.abs() > d.abs() {
            AxisEndpoints::new(BoundaryPoint::Infinity, other)
        } else {
            AxisEndpoints::new(other, BoundaryPoint::Infinity)
        });
    }
    // c x^2 + (d - a) x - b = 0, solved stably
    let p = d - a;
    let disc = (tr * tr - 4.0).sqrt();
    let q = -0.5 * (p + p.signum_or_one() * disc);
    let r1 = q / c;
    let r2 = -b / q;
    // attracting fixed point x has |c x + d| > 1
    let (att, rep) = if (c * r1 + d).abs() > (c * r2 + d).abs() { (r1, r2) } else { (r2, r1) };
    Ok(AxisEndpoints::new(BoundaryPoint::Finite(att), BoundaryPoint::Finite(rep)))
}

trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Whether two geodesics cross transversely: their endpoint pairs alternate
/// on the boundary circle.
pub fn axes_link(a: &AxisEndpoints, b: &AxisEndpoints) -> Result<bool> {
    let pts = [a.attracting, a.repelling, b.attracting, b.repelling];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pts[i].chordal_distance(pts[j]) <= EPS_SEP {
                return Err(Error::DegenerateConfiguration { tolerance: EPS_SEP });
            }
        }
    }
    let (lo, hi) = if lt(a.attracting.circle_key(), a.repelling.circle_key()) {
        (a.attracting, a.repelling)
    } else {
        (a.repelling, a.attracting)
    };
    let inside = |p: BoundaryPoint| p.strictly_between(lo, hi);
    Ok(inside(b.attracting) != inside(b.repelling))
}

/// Orientation-preserving map sending the imaginary axis (directed upward) to
/// `axis` (directed repelling -> attracting) and `i` to `marker`, which must
/// lie on `axis`.
pub fn directed_frame(axis: &AxisEndpoints, marker: Point) -> Sl2 {
    use BoundaryPoint::*;
    match (axis.attracting, axis.repelling) {
        (Infinity, Finite(r)) => {
            // z -> k z + r
            let k = marker.y;
            Sl2::new(k, r, 0.0, 1.0).renormalized()
        }
        (Finite(a), Infinity) => {
            // z -> a - 1/(k z)
            let k = 1.0 / marker.y;
            Sl2::new(a * k, -1.0, k, 0.0).renormalized()
        }
        (Finite(a), Finite(r)) => {
            // z -> (a k z + r)/(k z + 1), sign(k) = sign(a - r)
            let s = if a > r { 1.0 } else { -1.0 };
            let base = Sl2::new(a * s, r, s, 1.0).renormalized();
            let t = mobius_point(&base.inverse(), marker).y;
            let k = s * t;
            Sl2::new(a * k, r, k, 1.0).renormalized()
        }
        (Infinity, Infinity) => Sl2::IDENTITY,
    }
}

/// Projection of a point onto a geodesic.
pub fn project_to_axis(axis: &AxisEndpoints, z: Point) -> Point {
    let frame = directed_frame(axis, some_point_on(axis));
    let w = mobius_point(&frame.inverse(), z);
    let r = (w.x * w.x + w.y * w.y).sqrt();
    mobius_point(&frame, Point::new(0.0, r))
}

/// Foot on `from` of the common perpendicular to the disjoint geodesic `to`.
pub fn perpendicular_foot(from: &AxisEndpoints, to: &AxisEndpoints) -> Point {
    let frame = directed_frame(from, some_point_on(from));
    let inv = frame.inverse();
    let img = to.mapped_sl2(&inv);
    let (p, q) = match (img.attracting, img.repelling) {
        (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => (p, q),
        // `to` shares an endpoint with `from`; no perpendicular
        _ => return mobius_point(&frame, Point::I),
    };
    let h = (p * q).abs().sqrt();
    mobius_point(&frame, Point::new(0.0, h))
}

fn some_point_on(axis: &AxisEndpoints) -> Point {
    use BoundaryPoint::*;
    match (axis.attracting, axis.repelling) {
        (Infinity, Finite(r)) | (Finite(r), Infinity) => Point::new(r, 1.0),
        (Finite(a), Finite(r)) => Point::new(0.5 * (a + r), 0.5 * (a - r).abs()),
        (Infinity, Infinity) => Point::I,
    }
}

/// Translation by signed distance `dist` along a directed geodesic.
pub fn translation_along(axis: &AxisEndpoints, dist: f64) -> Sl2 {
    let frame = directed_frame(axis, some_point_on(axis));
    Sl2::diagonal(dist).conjugate_by(&frame)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(t: f64) -> Isometry {
        Isometry::from_entries(t.exp(), 0.0, 0.0, (-t).exp()).unwrap()
    }

    #[test]
    fn compose_identities() {
        let g = Isometry::from_entries(2.0, 1.0, 3.0, 2.0).unwrap();
        assert_eq!(compose(&Isometry::IDENTITY, &g), g);
        let id = compose(&g, &g.inverse());
        assert!(id.matrix().distance_to_pm_identity() < 1e-14);
        let sq = compose(&diag(1.0), &diag(1.0));
        let e = sq.entries();
        assert!((e[0] - 2f64.exp()).abs() < 1e-12 && (e[3] - (-2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn normalization_keeps_det_and_trace_sign() {
        let g = Isometry::from_entries(-3.0, 1.0, -2.0, -1.5).unwrap();
        assert!((g.det() - 1.0).abs() < 1e-12);
        assert!(g.trace() >= 0.0);
        assert!(Isometry::from_entries(1.0, 2.0, 3.0, 4.0).is_err());
    }

    #[test]
    fn translation_lengths() {
        assert!((translation_length(&diag(0.5)).unwrap() - 1.0).abs() < 1e-14);
        assert!((translation_length(&diag(1.0)).unwrap() - 2.0).abs() < 1e-14);
        assert!(matches!(translation_length(&Isometry::IDENTITY), Err(Error::NotHyperbolic { .. })));
        // a non-diagonal matrix with trace 2 cosh(3.7)
        let tr = 2.0 * 3.7f64.cosh();
        let a = 1.3;
        let d = tr - a;
        let b = 0.7;
        let c = (a * d - 1.0) / b;
        let g = Isometry::from_entries(a, b, c, d).unwrap();
        assert!((translation_length(&g).unwrap() - 7.4).abs() < 1e-12);
    }

    #[test]
    fn axis_examples() {
        let ax = axis(&diag(0.5)).unwrap();
        assert_eq!(ax.attracting, BoundaryPoint::Infinity);
        assert_eq!(ax.repelling, BoundaryPoint::Finite(0.0));

        let shift = Isometry::from_entries(1.0, 1.0, 0.0, 1.0).unwrap();
        let g = diag(0.5).conjugate_by(&shift);
        let ax = axis(&g).unwrap();
        assert_eq!(ax.attracting, BoundaryPoint::Infinity);
        assert!((ax.repelling.finite().unwrap() - 1.0).abs() < 1e-12);

        let g = Isometry::from_entries(0.5, 0.0, 0.0, 2.0).unwrap();
        let ax = axis(&g).unwrap();
        assert_eq!(ax.attracting.finite(), Some(0.0));
        assert!(ax.repelling.is_infinite());
    }

    #[test]
    fn axis_endpoints_are_fixed_and_ordered() {
        let g = Isometry::from_entries(2.0, 1.0, 3.0, 2.0).unwrap();
        let ax = axis(&g).unwrap();
        for p in ax.points() {
            let x = p.finite().unwrap();
            let gx = g.apply_boundary(p).finite().unwrap();
            assert!((gx - x).abs() < 1e-9);
        }
        // iterating pushes a generic point towards the attracting end
        let mut z = Point::new(0.3, 0.2);
        for _ in 0..40 {
            z = g.apply(z);
        }
        let att = ax.attracting.finite().unwrap();
        assert!((z.x - att).abs() < 1e-6 && z.y < 1e-6);
    }

    #[test]
    fn linking_examples() {
        use BoundaryPoint::*;
        let ax = |p, q| AxisEndpoints::new(p, q);
        assert!(axes_link(&ax(Finite(0.0), Infinity), &ax(Finite(-1.0), Finite(1.0))).unwrap());
        assert!(!axes_link(&ax(Finite(0.0), Finite(1.0)), &ax(Finite(2.0), Finite(3.0))).unwrap());
        assert!(axes_link(&ax(Finite(0.0), Finite(2.0)), &ax(Finite(1.0), Finite(3.0))).unwrap());
        assert!(!axes_link(&ax(Infinity, Finite(0.0)), &ax(Finite(1.0), Finite(3.0))).unwrap());
        assert!(matches!(
            axes_link(&ax(Infinity, Finite(0.0)), &ax(Finite(0.0), Finite(3.0))),
            Err(Error::DegenerateConfiguration { .. })
        ));
    }

    #[test]
    fn collar_examples() {
        let fixed = 2.0 * 1f64.asinh();
        assert!((collar_width(fixed).unwrap() - 1f64.asinh()).abs() < 1e-15);
        assert!(collar_width(1e-12).unwrap() > 25.0);
        assert!(matches!(collar_width(0.0), Err(Error::NonPositiveLength(_))));
        assert!(collar_width(-1.0).is_err());
    }

    #[test]
    fn frames_place_axes() {
        use BoundaryPoint::*;
        let ax = AxisEndpoints::new(Finite(-2.0), Finite(3.0));
        let m = project_to_axis(&ax, Point::new(0.0, 1.0));
        let f = directed_frame(&ax, m);
        let img = AxisEndpoints::imaginary().mapped_sl2(&f);
        assert!(img.attracting.chordal_distance(ax.attracting) < 1e-12);
        assert!(img.repelling.chordal_distance(ax.repelling) < 1e-12);
        let fi = mobius_point(&f, Point::I);
        assert!(fi.distance(&m) < 1e-12);

        let t = translation_along(&ax, 1.5).to_isometry();
        assert!((translation_length(&t).unwrap() - 1.5).abs() < 1e-12);
        let tax = axis(&t).unwrap();
        assert!(tax.attracting.chordal_distance(ax.attracting) < 1e-9);
    }

    #[test]
    fn perpendicular_foot_is_on_both_perpendicular() {
        use BoundaryPoint::*;
        let a = AxisEndpoints::new(Infinity, Finite(0.0));
        let b = AxisEndpoints::new(Finite(2.0), Finite(8.0));
        let f = perpendicular_foot(&a, &b);
        assert!(f.x.abs() < 1e-14 && (f.y - 4.0).abs() < 1e-12);
    }
}
