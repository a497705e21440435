//! Double-double 2x2 matrices for building and evaluating representations.
//!
//! Generator matrices of a marked surface can have entries of size
//! e^{L/2} and long products cancel down to traces of moderate size, so
//! plain f64 loses every digit well inside the valid coordinate range.

use std::ops::Mul;

use twofloat::TwoFloat;

use crate::hyp::{Point, Sl2};

pub(crate) type Dd = TwoFloat;

fn dd(x: f64) -> Dd {
    Dd::from(x)
}

/// Reciprocal to double-double accuracy. The library's division forms
/// `1 - b·(1/b)` without a fused multiply-add and is only f64-accurate, so
/// refine the f64 reciprocal by one Newton step with exact products.
pub(crate) fn recip(x: Dd) -> Dd {
    let r = dd(x.hi().recip());
    r + r * (dd(1.0) - x * r)
}

pub(crate) fn div(a: Dd, b: Dd) -> Dd {
    a * recip(b)
}

/// A signed length with its hyperbolic functions, all derived from the single
/// value q = e^{len/4} so that identities among them (cosh² - sinh² =
/// 1, cosh(len/2) = 2 cosh²(len/4) - 1, ...) hold to double-double precision.
/// The double-double library's own transcendentals are only f64-accurate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Length {
    q: Dd,
}

impl Length {
    pub fn new(len: f64) -> Self {
        // 1 + expm1 keeps the relative precision of short lengths
        Length { q: dd(1.0) + dd((0.25 * len).exp_m1()) }
    }

    pub fn neg(&self) -> Self {
        Length { q: recip(self.q) }
    }

    pub fn exp_half(&self) -> Dd {
        self.q * self.q
    }

    pub fn cosh_half(&self) -> Dd {
        let e = self.exp_half();
        (e + recip(e)) / 2.0
    }

    pub fn sinh_half(&self) -> Dd {
        let e = self.exp_half();
        (e - recip(e)) / 2.0
    }

    pub fn cosh_quarter(&self) -> Dd {
        (self.q + recip(self.q)) / 2.0
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct M2 {
    pub a: Dd,
    pub b: Dd,
    pub c: Dd,
    pub d: Dd,
}

impl M2 {
    pub fn new(a: Dd, b: Dd, c: Dd, d: Dd) -> Self {
        M2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        M2::new(dd(1.0), dd(0.0), dd(0.0), dd(1.0))
    }

    pub fn from_sl2(m: &Sl2) -> Self {
        M2::new(dd(m.a), dd(m.b), dd(m.c), dd(m.d))
    }

    /// Rounded to f64.
    pub fn to_sl2(self) -> Sl2 {
        Sl2::new(self.a.hi(), self.b.hi(), self.c.hi(), self.d.hi())
    }

    /// Translation by `len` along the imaginary axis, towards infinity.
    pub fn diagonal(len: &Length) -> Self {
        let e = len.exp_half();
        M2::new(e, dd(0.0), dd(0.0), recip(e))
    }

    /// Translation along the geodesic from -1 to 1 by the length whose half
    /// has hyperbolic sine `sinh_half`.
    pub fn unit_circle_translation(sinh_half: Dd) -> Self {
        let ch = (sinh_half * sinh_half + 1.0).sqrt();
        M2::new(ch, sinh_half, sinh_half, ch)
    }

    /// Scaling z -> s z.
    pub fn scaling(s: Dd) -> Self {
        let r = s.sqrt();
        M2::new(r, dd(0.0), dd(0.0), recip(r))
    }

    pub fn det(&self) -> Dd {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Dd {
        self.a + self.d
    }

    /// Inverse, assuming determinant one.
    pub fn inverse(&self) -> Self {
        M2::new(self.d, -self.b, -self.c, self.a)
    }

    /// Inverse of a matrix of any nonzero determinant.
    pub fn general_inverse(&self) -> Self {
        let k = recip(self.det());
        M2::new(self.d * k, -self.b * k, -self.c * k, self.a * k)
    }

    pub fn neg(&self) -> Self {
        M2::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// `g * self * g^{-1}`.
    pub fn conjugate_by(&self, g: &M2) -> Self {
        *g * *self * g.general_inverse()
    }

    pub fn renormalized(&self) -> Self {
        let s = recip(self.det().sqrt());
        M2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn max_abs(&self) -> f64 {
        [self.a, self.b, self.c, self.d].iter().map(|v| v.hi().abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, o: &M2) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d].iter().map(|v| v.hi().abs()).fold(0.0, f64::max)
    }

    /// Max-entry distance to ±I.
    pub fn distance_to_pm_identity(&self) -> f64 {
        let one = dd(1.0);
        let plus = M2::new(self.a - one, self.b, self.c, self.d - one).max_abs();
        let minus = M2::new(self.a + one, self.b, self.c, self.d + one).max_abs();
        plus.min(minus)
    }

    /// Image of a point of the upper half-plane, assuming determinant one.
    pub fn apply(&self, z: Point) -> Point {
        let (x, y) = (dd(z.x), dd(z.y));
        let (nr, ni) = (self.a * x + self.b, self.a * y);
        let (dr, di) = (self.c * x + self.d, self.c * y);
        let den = dr * dr + di * di;
        let k = recip(den);
        Point::new(((nr * dr + ni * di) * k).hi(), (y * k).hi())
    }

    /// Image of ∞ and of 0, `None` for ∞.
    pub fn ends(&self) -> (Option<f64>, Option<f64>) {
        let ratio = |p: Dd, q: Dd| (q.hi() != 0.0).then(|| div(p, q).hi());
        (ratio(self.a, self.c), ratio(self.b, self.d))
    }

    /// Fixed points as homogeneous vectors (attracting, repelling), or `None`
    /// if not hyperbolic.
    pub fn fixed_vectors(&self) -> Option<([Dd; 2], [Dd; 2])> {
        let tr = self.trace();
        let disc2 = tr * tr - 4.0;
        if !(disc2.hi() > 0.0) {
            return None;
        }
        let disc = disc2.sqrt();
        // eigenvalues with |big| > 1, computed without cancellation
        let big = if tr.hi() >= 0.0 { (tr + disc) / 2.0 } else { (tr - disc) / 2.0 };
        let small = recip(big);
        Some((self.eigenvector(big), self.eigenvector(small)))
    }

    fn eigenvector(&self, lambda: Dd) -> [Dd; 2] {
        // (M - λ) v = 0: v = (b, λ - a) or (λ - d, c); take the larger one
        let v1 = [self.b, lambda - self.a];
        let v2 = [lambda - self.d, self.c];
        let n1 = v1[0].hi().abs() + v1[1].hi().abs();
        let n2 = v2[0].hi().abs() + v2[1].hi().abs();
        if n1 >= n2 {
            v1
        } else {
            v2
        }
    }
}

impl Mul for M2 {
    type Output = M2;

    fn mul(self, o: M2) -> M2 {
        M2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// Some map sending the imaginary axis (directed upward) onto the axis of
/// `m` (directed repelling to attracting).
pub(crate) fn axis_frame(m: &M2) -> Option<M2> {
    let (att, rep) = m.fixed_vectors()?;
    // columns: ∞ -> attracting, 0 -> repelling
    let mut f = M2::new(att[0], rep[0], att[1], rep[1]);
    let det = f.det();
    if det.hi() < 0.0 {
        f = M2::new(f.a, -f.b, f.c, -f.d);
    }
    Some(f.renormalized())
}

/// Map sending the imaginary axis (directed upward) onto the axis of `m`
/// (directed repelling to attracting) and `i` onto the foot of the common
/// perpendicular to the axis of `reference`.
pub(crate) fn directed_frame(m: &M2, reference: &M2) -> Option<M2> {
    let f = axis_frame(m)?;
    let (p, q) = reference.fixed_vectors()?;
    let inv = f.inverse();
    let image = |v: [Dd; 2]| [inv.a * v[0] + inv.b * v[1], inv.c * v[0] + inv.d * v[1]];
    let (p, q) = (image(p), image(q));
    // in the frame the reference ends at x = p0/p1 and q0/q1
    let num = (p[0] * q[0]).abs();
    let den = (p[1] * q[1]).abs();
    if den.hi() == 0.0 || num.hi() == 0.0 {
        return Some(f);
    }
    Some(f * M2::scaling(div(num, den).sqrt()))
}
