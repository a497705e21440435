//! Independent crossing count by tracing geodesics through a Dirichlet
//! domain.
//!
//! Works in the Klein model, where geodesics are straight chords and the
//! Dirichlet domain centred at `i` is a convex Euclidean polygon. Each closed
//! geodesic is cut into the chords it leaves in the domain; crossings are
//! then plain segment intersections inside one copy of the domain.

use std::f64::consts::PI;

use super::{orbit, Elem};
use crate::dd::{axis_frame, Dd, M2};
use crate::error::{Error, Result};
use crate::group::{canonical_class, is_primitive, reduce, Word};
use crate::holonomy::Representation;
use crate::hyp::{Isometry, Point};

type K = [f64; 2];

/// Crossings closer than this to the domain boundary are not decided.
const BOUNDARY_MARGIN: f64 = 1e-6;

fn klein_point(z: Point) -> K {
    let r2 = z.x * z.x + z.y * z.y;
    [2.0 * z.x / (1.0 + r2), (r2 - 1.0) / (1.0 + r2)]
}

fn klein_to_upper(k: K) -> Point {
    // back through the hyperboloid: y = 1/(X0 - X2), x = X1 y
    let s = (1.0 - k[0] * k[0] - k[1] * k[1]).sqrt();
    let (x0, x1, x2) = (1.0 / s, k[0] / s, k[1] / s);
    let y = 1.0 / (x0 - x2);
    Point::new(x1 * y, y)
}

fn klein_distance(p: K, q: K) -> f64 {
    let num = 1.0 - p[0] * q[0] - p[1] * q[1];
    let den = ((1.0 - p[0] * p[0] - p[1] * p[1]) * (1.0 - q[0] * q[0] - q[1] * q[1])).sqrt();
    (num / den).max(1.0).acosh()
}

fn cross(a: K, b: K) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: K, b: K) -> K {
    [a[0] - b[0], a[1] - b[1]]
}

fn lerp(a: K, b: K, s: f64) -> K {
    [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
}

/// The half-plane `n·k ≤ c` of points at least as close to `i` as to `g·i`.
#[derive(Debug, Clone)]
struct Side {
    n: K,
    c: f64,
    g: Option<Isometry>,
    elem: Option<Elem>,
}

impl Side {
    fn towards(e: &Elem) -> Side {
        let g = e.m.to_sl2().to_isometry();
        let z = g.apply(Point::I);
        let r2 = z.x * z.x + z.y * z.y;
        let (g0, g1, g2) = ((1.0 + r2) / (2.0 * z.y), z.x / z.y, (r2 - 1.0) / (2.0 * z.y));
        Side { n: [g1, g2], c: g0 - 1.0, g: Some(g), elem: Some(e.clone()) }
    }

    fn excess(&self, k: K) -> f64 {
        self.n[0] * k[0] + self.n[1] * k[1] - self.c
    }

    /// Euclidean distance from `k` to the side's line.
    fn gap(&self, k: K) -> f64 {
        self.excess(k).abs() / self.n[0].hypot(self.n[1])
    }
}

struct Domain {
    sides: Vec<Side>,
    vertices: Vec<K>,
}

impl Domain {
    fn build(r: &Representation) -> Result<Domain> {
        let genus = r.presentation().genus();
        let target = 4.0 * PI * (genus as f64 - 1.0);
        let mut last = f64::NAN;
        let mut reach = 4.0;
        // a side of the domain comes from an orbit point within twice the
        // domain's radius
        while reach < 16.0 {
            let Some(d) = Domain::clip(&orbit(r, reach)?) else {
                reach += 2.0;
                continue;
            };
            last = d.area();
            let radius = d.radius();
            if 2.0 * radius + 1e-9 < reach && (last - target).abs() < 1e-6 && d.paired() {
                return Ok(d);
            }
            reach = (2.0 * radius + 0.5).max(reach + 1.0);
        }
        Err(Error::OracleInconclusive(format!("fundamental domain incomplete (area {last}, expected {target})")))
    }

    fn clip(elements: &[(f64, Elem)]) -> Option<Domain> {
        let square = |n: K| Side { n, c: 1.0, g: None, elem: None };
        // side i runs from vertex i to vertex i+1
        let mut vertices = vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]];
        let mut sides = vec![square([0.0, 1.0]), square([-1.0, 0.0]), square([0.0, -1.0]), square([1.0, 0.0])];
        for (_, e) in elements {
            let h = Side::towards(e);
            if vertices.iter().all(|&v| h.excess(v) <= 0.0) {
                continue;
            }
            let n = vertices.len();
            let mut nv = Vec::with_capacity(n + 1);
            let mut ns = Vec::with_capacity(n + 1);
            for i in 0..n {
                let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                let (ep, eq) = (h.excess(p), h.excess(q));
                if ep <= 0.0 {
                    nv.push(p);
                    ns.push(sides[i].clone());
                }
                if (ep <= 0.0) != (eq <= 0.0) {
                    nv.push(lerp(p, q, ep / (ep - eq)));
                    ns.push(if ep <= 0.0 { h.clone() } else { sides[i].clone() });
                }
            }
            vertices = nv;
            sides = ns;
            if vertices.len() < 3 {
                return None;
            }
        }
        let d = Domain { sides, vertices };
        let compact =
            d.sides.iter().all(|s| s.g.is_some()) && d.vertices.iter().all(|v| v[0] * v[0] + v[1] * v[1] < 1.0 - 1e-12);
        compact.then_some(d)
    }

    /// Hyperbolic area from the interior angles (Gauss-Bonnet).
    fn area(&self) -> f64 {
        let n = self.sides.len();
        let mink = |a: &Side, b: &Side| -a.c * b.c + a.n[0] * b.n[0] + a.n[1] * b.n[1];
        let mut angles = 0.0;
        for i in 0..n {
            let (a, b) = (&self.sides[i], &self.sides[(i + 1) % n]);
            let cos = -mink(a, b) / (mink(a, a) * mink(b, b)).sqrt();
            angles += cos.clamp(-1.0, 1.0).acos();
        }
        (n as f64 - 2.0) * PI - angles
    }

    /// Every side towards g has a partner side towards g⁻¹.
    fn paired(&self) -> bool {
        self.sides.iter().all(|s| {
            let g = s.g.unwrap().inverse();
            let target = klein_point(g.apply(Point::I));
            self.sides.iter().any(|t| {
                let p = klein_point(t.g.unwrap().apply(Point::I));
                (p[0] - target[0]).abs() < 1e-9 && (p[1] - target[1]).abs() < 1e-9
            })
        })
    }

    /// Moves `z` into the domain; returns the element applied.
    fn reduce_point(&self, mut z: Point) -> Result<M2> {
        let mut h = M2::identity();
        for _ in 0..10_000 {
            let k = klein_point(z);
            let worst = self.sides.iter().map(|s| (s.excess(k), s)).max_by(|a, b| a.0.total_cmp(&b.0)).unwrap();
            if worst.0 <= 0.0 {
                return Ok(h);
            }
            let back = worst.1.elem.as_ref().unwrap().m.inverse();
            z = back.apply(z);
            h = back * h;
        }
        Err(Error::OracleInconclusive("point reduction did not terminate".into()))
    }

    /// Entry and exit parameters of the chord from `a` to `b`, and the side
    /// it leaves through.
    fn chord(&self, a: K, b: K) -> Result<(f64, f64, usize)> {
        let d = sub(b, a);
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut exits: Vec<(f64, usize)> = Vec::new();
        for (i, s) in self.sides.iter().enumerate() {
            let den = s.n[0] * d[0] + s.n[1] * d[1];
            let room = -s.excess(a);
            if den > 0.0 {
                let t = room / den;
                exits.push((t, i));
                hi = hi.min(t);
            } else if den < 0.0 {
                lo = lo.max(room / den);
            } else if room < 0.0 {
                return Err(Error::OracleInconclusive("chord misses the domain".into()));
            }
        }
        if lo >= hi {
            return Err(Error::OracleInconclusive("chord misses the domain".into()));
        }
        exits.sort_by(|x, y| x.0.total_cmp(&y.0));
        let scale = d[0].hypot(d[1]);
        if exits.len() > 1 && (exits[1].0 - exits[0].0) * scale < BOUNDARY_MARGIN {
            return Err(Error::OracleInconclusive("geodesic passes through a vertex".into()));
        }
        Ok((lo, hi, exits[0].1))
    }

    fn near_boundary(&self, k: K) -> bool {
        self.sides.iter().any(|s| s.gap(k) < BOUNDARY_MARGIN)
    }

    /// Largest distance from `i` to a point of the domain.
    fn radius(&self) -> f64 {
        self.vertices.iter().map(|&v| klein_distance(v, [0.0, 0.0])).fold(0.0, f64::max)
    }
}

/// Covering radius of the orbit of `i` and the side pairings of its
/// Dirichlet domain.
pub(super) fn dirichlet(r: &Representation) -> Result<(f64, Vec<Elem>)> {
    let d = Domain::build(r)?;
    Ok((d.radius(), d.sides.iter().filter_map(|s| s.elem.clone()).collect()))
}

fn klein_end(x: Option<f64>) -> K {
    match x {
        None => [0.0, 1.0],
        Some(x) => [2.0 * x / (1.0 + x * x), (x * x - 1.0) / (1.0 + x * x)],
    }
}

fn same_end(x: Option<f64>, y: Option<f64>) -> bool {
    let k = (klein_end(x), klein_end(y));
    (k.0[0] - k.1[0]).hypot(k.0[1] - k.1[1]) < 1e-6
}

/// The chords cut by the closed geodesic of `w` in the domain. The current
/// lift is carried as a frame re-anchored at each exit point, so rounding
/// grows with the number of chords rather than exponentially in length.
fn chords(d: &Domain, r: &Representation, w: &Word) -> Result<Vec<(K, K)>> {
    let length = r.geodesic_length(w)?;
    let frame = axis_frame(&r.product(w)).ok_or(Error::NotHyperbolic { trace: 2.0 })?;
    let foot = {
        let z = frame.inverse().apply(Point::I);
        frame * M2::scaling(Dd::from(z.x.hypot(z.y)))
    };
    let h = d.reduce_point(foot.apply(Point::I))?;
    let start = h * foot;
    let start_ends = start.ends();
    let mut lift = start;
    let mut out = Vec::new();
    let mut total = 0.0;
    loop {
        let (att, rep) = lift.ends();
        let (a, b) = (klein_end(rep), klein_end(att));
        let (lo, hi, exit) = d.chord(a, b)?;
        let (p, q) = (lerp(a, b, lo), lerp(a, b, hi));
        total += klein_distance(p, q);
        out.push((p, q));
        // slide the frame's marker to the exit point, then cross over
        let z = lift.inverse().apply(klein_to_upper(q));
        lift = lift * M2::scaling(Dd::from(z.y));
        lift = d.sides[exit].elem.as_ref().unwrap().m.inverse() * lift;
        let ends = lift.ends();
        let closes = (total - length).abs() < 1e-6 * length.max(1.0);
        if closes && same_end(ends.0, start_ends.0) && same_end(ends.1, start_ends.1) {
            break;
        }
        if total > 2.0 * length + 10.0 {
            return Err(Error::OracleInconclusive(format!("tracing {w} did not close")));
        }
    }
    Ok(out)
}

fn segment_crossing(d: &Domain, s: (K, K), t: (K, K)) -> Result<bool> {
    let (r, v) = (sub(s.1, s.0), sub(t.1, t.0));
    let den = cross(r, v);
    if den.abs() < 1e-14 {
        return Ok(false);
    }
    let q = sub(t.0, s.0);
    let a = cross(q, v) / den;
    let b = cross(q, r) / den;
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Ok(false);
    }
    if d.near_boundary(lerp(s.0, s.1, a)) {
        return Err(Error::OracleInconclusive("crossing on the domain boundary".into()));
    }
    Ok(true)
}

/// A Dirichlet domain of one representation, reusable across word pairs.
pub struct Tracer<'a> {
    r: &'a Representation,
    domain: Domain,
}

impl<'a> Tracer<'a> {
    pub fn new(r: &'a Representation) -> Result<Self> {
        Ok(Tracer { r, domain: Domain::build(r)? })
    }

    /// See [`trace_crossings`].
    pub fn count(&self, u: &Word, v: &Word) -> Result<usize> {
        let (u, v) = (reduce(&u.clone().as_cyclic()), reduce(&v.clone().as_cyclic()));
        for w in [&u, &v] {
            if w.len() > 8 {
                return Err(Error::InvalidConfig(format!("{w} is too long for the oracle")));
            }
            if w.is_empty() {
                return Err(Error::EmptyWord);
            }
            if !is_primitive(w) {
                return Err(Error::InvalidConfig(format!("{w} is not primitive")));
            }
        }
        let d = &self.domain;
        let cu = chords(d, self.r, &u)?;
        let mut count = 0;
        if canonical_class(&u)? == canonical_class(&v)? {
            for i in 0..cu.len() {
                for j in i + 1..cu.len() {
                    count += segment_crossing(d, cu[i], cu[j])? as usize;
                }
            }
            return Ok(count);
        }
        let cv = chords(d, self.r, &v)?;
        for s in &cu {
            for t in &cv {
                count += segment_crossing(d, *s, *t)? as usize;
            }
        }
        Ok(count)
    }
}

/// Counts transverse crossings of the closed geodesics of `u` and `v` (double
/// points, when they are the same class) by tracing both through a Dirichlet
/// domain of `r`. Fails with `OracleInconclusive` when a crossing or a
/// chord end lies within 1e-6 of a domain vertex or side; perturb the
/// geometry and retry.
pub fn trace_crossings(r: &Representation, u: &Word, v: &Word) -> Result<usize> {
    Tracer::new(r)?.count(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SurfacePresentation;
    use crate::holonomy::{build_representation, FnCoordinates};

    fn rep(genus: usize, flat: &[f64]) -> Representation {
        let p = SurfacePresentation::new(genus).unwrap();
        build_representation(&p, &FnCoordinates::from_flat(flat).unwrap()).unwrap()
    }

    #[test]
    fn klein_round_trip() {
        for z in [Point::I, Point::new(0.3, 2.0), Point::new(-4.0, 0.1)] {
            let back = klein_to_upper(klein_point(z));
            assert!((back.x - z.x).abs() < 1e-12 && (back.y - z.y).abs() < 1e-12);
        }
    }

    #[test]
    fn domain_has_the_right_area() {
        for (g, flat) in [(2, vec![1.3, 1.1, 0.9, 0.2, -0.3, 0.1]), (3, vec![1.5; 12])] {
            let r = rep(g, &flat);
            let d = Domain::build(&r).unwrap();
            assert!((d.area() - 4.0 * PI * (g as f64 - 1.0)).abs() < 1e-6);
        }
    }

    #[test]
    fn traced_length_matches_trace() {
        let r = rep(2, &[1.3, 1.1, 0.9, 0.2, -0.3, 0.1]);
        let d = Domain::build(&r).unwrap();
        for s in ["a1", "b1", "a1b1A2", "a1a1b2B1"] {
            chords(&d, &r, &Word::parse(s).unwrap()).unwrap();
        }
    }

    #[test]
    fn handle_curves() {
        let r = rep(2, &[1.3, 1.1, 0.9, 0.2, -0.3, 0.1]);
        let w = |s: &str| Word::parse(s).unwrap();
        assert_eq!(trace_crossings(&r, &w("a1"), &w("b1")).unwrap(), 1);
        assert_eq!(trace_crossings(&r, &w("a1"), &w("a2")).unwrap(), 0);
        assert_eq!(trace_crossings(&r, &w("a1"), &w("a1")).unwrap(), 0);
        assert_eq!(trace_crossings(&r, &w("a1a1b1b1"), &w("a1a1b1b1")).unwrap(), 1);
    }
}
