//! Geometric intersection numbers of closed geodesics.
//!
//! Counts are taken in the frame of one axis, `u`, stretched along the
//! imaginary axis. A lift of `v` that crosses axis(u) is a double coset
//! ⟨u⟩ g ⟨v⟩; sliding by powers of `u` puts its crossing height into one
//! period `[1, e^ℓ(u))` of the axis, and two conjugators give the same double
//! coset exactly when they give the same lift. Conjugators are found by a
//! breadth-first walk over short elements (read off a Dirichlet domain),
//! pruned to a tube around that period.

mod oracle;

use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use crate::dd::{axis_frame, Dd, Length, M2};
use crate::error::{Error, Result};
use crate::group::SurfacePresentation;
use crate::group::{canonical_class, is_primitive, reduce, Letter, Word};
use crate::holonomy::{build_representation, FnCoordinates, Representation};
use crate::hyp::{mobius_point, Point, Sl2, EPS_SEP};

pub use oracle::{trace_crossings, Tracer};

/// Largest radius [`Intersector`] escalates to before giving up.
pub const MAX_RADIUS: usize = 64;

/// Two lifts whose endpoints agree this closely (in log scale) are one lift.
const SAME_LIFT: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct IntersectionConfig {
    /// Word-length cutoff for the conjugator walk.
    pub ball_radius: usize,
    /// Geometry used to realize the axes. Counts do not depend on it.
    pub representation: Representation,
}

impl IntersectionConfig {
    pub fn new(representation: Representation, ball_radius: usize) -> Self {
        IntersectionConfig { ball_radius, representation }
    }

    /// The smallest admissible radius for `words`: twice the longest.
    pub fn for_words(representation: Representation, words: &[&Word]) -> Self {
        let longest = words.iter().map(|w| w.len()).max().unwrap_or(1);
        IntersectionConfig::new(representation, 2 * longest.max(1))
    }
}

/// A transverse crossing of the geodesics of `u` and `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Arc-length position along `u`, in `[0, ℓ(u))`, from the foot of the
    /// perpendicular from `i`.
    pub along_u: f64,
    /// The same along `v`.
    pub along_v: f64,
    /// +1 when (direction of u, direction of v) is positively oriented.
    pub sign: i8,
    /// Counterclockwise angle from the direction of u to that of v, in
    /// (-π, π); its sign is `sign`.
    pub angle: f64,
}

/// A closed geodesic realized in one representation.
struct Curve {
    word: Word,
    length: f64,
    /// Sends the imaginary axis onto the axis, `i` onto the foot from `i`.
    frame: M2,
}

impl Curve {
    fn new(r: &Representation, w: &Word) -> Result<Curve> {
        let word = reduce(&w.clone().as_cyclic());
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        if !is_primitive(&word) {
            return Err(Error::InvalidConfig(format!("{w} is not primitive")));
        }
        let length = r.geodesic_length(&word)?;
        let frame =
            axis_frame(&r.product(&word)).ok_or(Error::NotHyperbolic { trace: r.product(&word).trace().hi().abs() })?;
        let w0 = frame.inverse().apply(Point::I);
        let frame = frame * M2::scaling(Dd::from(w0.x.hypot(w0.y)));
        Ok(Curve { word, length, frame })
    }
}

/// Crossings of the closed geodesic of `v` with that of `u`, one per double
/// coset. When `u` and `v` are the same class each double point appears
/// twice, once from each branch.
pub fn crossings(cfg: &IntersectionConfig, u: &Word, v: &Word) -> Result<Vec<Crossing>> {
    let cu = Curve::new(&cfg.representation, u)?;
    let cv = Curve::new(&cfg.representation, v)?;
    let cover = Cover::new(&cfg.representation)?;
    within_radius(lift_crossings(&cover, &cu, &cv)?, cfg.ball_radius)
}

/// i(u, v): the number of double cosets ⟨u⟩ g ⟨v⟩ whose axes link. On the
/// diagonal (u and v the same class) this is [`self_intersection`].
pub fn intersection_number(cfg: &IntersectionConfig, u: &Word, v: &Word) -> Result<usize> {
    if canonical_class(u)? == canonical_class(v)? {
        return self_intersection(cfg, u);
    }
    Ok(crossings(cfg, u, v)?.len())
}

/// Number of double points of the closed geodesic of `u`, each counted once.
pub fn self_intersection(cfg: &IntersectionConfig, u: &Word) -> Result<usize> {
    let found = crossings(cfg, u, u)?;
    Ok(pair_branches(&found, cfg.ball_radius)?.len())
}

/// Matches each self-crossing with its mirror (the same point seen from the
/// other branch). Returns one `(along first branch, along second branch)`
/// per double point; an unmatched crossing means the walk was incomplete.
pub(crate) fn pair_branches(found: &[Crossing], radius: usize) -> Result<Vec<Crossing>> {
    let mut used = vec![false; found.len()];
    let mut pairs = Vec::with_capacity(found.len() / 2);
    for i in 0..found.len() {
        if used[i] {
            continue;
        }
        let c = found[i];
        let mate = (0..found.len()).find(|&j| {
            !used[j]
                && j != i
                && (found[j].along_u - c.along_v).abs() < 1e-6
                && (found[j].along_v - c.along_u).abs() < 1e-6
        });
        match mate {
            Some(j) => {
                used[i] = true;
                used[j] = true;
                pairs.push(c);
            }
            None => {
                let unmatched = used.iter().filter(|x| !**x).count();
                return Err(Error::CutoffUnstable {
                    radius,
                    low: pairs.len(),
                    high: pairs.len() + unmatched.div_ceil(2),
                });
            }
        }
    }
    Ok(pairs)
}

struct Lift {
    along_u: f64,
    /// ln|endpoint| and sign, attracting then repelling, in the u-frame.
    ends: [(f64, bool); 2],
    along_v: f64,
    sign: i8,
    angle: f64,
    depth: usize,
}

impl Lift {
    fn same_as(&self, other: &Lift, period: f64) -> bool {
        [-1.0, 0.0, 1.0].iter().any(|k| {
            let shift = k * period;
            self.ends.iter().zip(&other.ends).all(|(a, b)| a.1 == b.1 && (a.0 + shift - b.0).abs() < SAME_LIFT)
        })
    }
}

/// Distance from `z` to the segment of the imaginary axis between heights 1
/// and `top`.
fn distance_to_period(z: Point, top: f64) -> f64 {
    let r = z.x.hypot(z.y);
    if (1.0..=top).contains(&r) {
        (z.x.abs() / z.y).asinh()
    } else {
        z.distance(&Point::new(0.0, r.clamp(1.0, top)))
    }
}

fn quantize(z: Point) -> (i64, i64) {
    let s = 1e7;
    ((z.y.ln() * s).round() as i64, ((z.x / z.y) * s).round() as i64)
}

/// A group element and a word for it.
#[derive(Debug, Clone)]
struct Elem {
    m: M2,
    /// `m` rounded, for cheap screening.
    f: Sl2,
    word: Vec<Letter>,
}

impl Elem {
    fn new(m: M2, word: Vec<Letter>) -> Elem {
        Elem { m, f: m.to_sl2(), word }
    }

    fn identity() -> Elem {
        Elem::new(M2::identity(), Vec::new())
    }

    fn then(&self, s: &Elem) -> Elem {
        let mut word = self.word.clone();
        word.extend_from_slice(&s.word);
        Elem::new(self.m * s.m, word)
    }
}

fn word_length(parts: &[&[Letter]]) -> usize {
    reduce(&Word::new(parts.concat(), false)).len()
}

/// Elements moving `i` by at most `reach` (but not fixing it), nearest
/// first, with their distances. Found by a walk over the Cayley graph that
/// may step up to one generator length beyond `reach`; only used to seed
/// the Dirichlet domain, which is then checked on its own terms.
/// Orbit searches larger than this mean the structure is too thin to handle.
const MAX_ORBIT: usize = 1_500_000;

fn orbit(r: &Representation, reach: f64) -> Result<Vec<(f64, Elem)>> {
    let gens: Vec<Elem> = (0..2 * r.images().len())
        .map(|code| {
            let l = Letter::new(code / 2, code % 2 == 1);
            let g = r.precise_image(l.generator());
            Elem::new(if l.is_inverse() { g.inverse() } else { g }, vec![l])
        })
        .collect();
    let step = gens.iter().map(|g| Point::I.distance(&g.m.apply(Point::I))).fold(0.0, f64::max);
    let mut seen = HashSet::new();
    seen.insert(quantize(Point::I));
    let mut layer = vec![Elem::identity()];
    let mut out = Vec::new();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for g in &layer {
            for s in &gens {
                if g.word.last().is_some_and(|&x| x == s.word[0].inverse()) {
                    continue;
                }
                let h = g.then(s);
                let z = h.m.apply(Point::I);
                let d = Point::I.distance(&z);
                if d > reach + step || d < 1e-6 || !seen.insert(quantize(z)) {
                    continue;
                }
                if d <= reach {
                    out.push((d, h.clone()));
                }
                next.push(h);
            }
        }
        if seen.len() > MAX_ORBIT {
            return Err(Error::OracleInconclusive(format!(
                "orbit of i within {reach:.2} exceeds {MAX_ORBIT} points; the structure is too thin"
            )));
        }
        layer = next;
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// The orbit of `i` seen through its Dirichlet domain: every point lies
/// within `radius` of an orbit point, and `short` holds every element moving
/// `i` by at most `2·radius + STEP_MARGIN`.
#[derive(Debug)]
struct Cover {
    radius: f64,
    /// With the image of `i`.
    short: Vec<(Elem, Point)>,
}

const STEP_MARGIN: f64 = 0.25;

impl Cover {
    fn new(r: &Representation) -> Result<Cover> {
        let (radius, sides) = oracle::dirichlet(r)?;
        let radius = radius + 1e-6;
        let reach = 2.0 * radius + STEP_MARGIN;
        // translates of the domain meeting the ball of radius `reach` are
        // connected through shared sides, and their centres lie within
        // reach + radius
        let mut seen = HashSet::new();
        seen.insert(quantize(Point::I));
        let mut layer = vec![Elem::identity()];
        let mut short = Vec::new();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for g in &layer {
                for s in &sides {
                    let h = g.then(s);
                    let z = h.m.apply(Point::I);
                    let d = Point::I.distance(&z);
                    if d > reach + radius || !seen.insert(quantize(z)) {
                        continue;
                    }
                    if d <= reach {
                        let word = reduce(&Word::new(h.word.clone(), false)).letters().to_vec();
                        short.push((Elem::new(h.m, word), z));
                    }
                    next.push(h);
                }
            }
            layer = next;
        }
        Ok(Cover { radius, short })
    }

    /// An element taking `z` to within `radius` of `i`.
    fn pull(&self, z: Point) -> Result<Elem> {
        let mut h = Elem::identity();
        let mut at = z;
        let mut d = Point::I.distance(&at);
        // outside the domain some side pairing brings the point closer
        for _ in 0..100_000 {
            let best = self
                .short
                .iter()
                .map(|(s, _)| (Point::I.distance(&mobius_point(&s.f, at)), s))
                .min_by(|a, b| a.0.total_cmp(&b.0));
            match best {
                Some((e, s)) if e < d - 1e-12 => {
                    h = s.then(&h);
                    at = h.m.apply(z);
                    d = Point::I.distance(&at);
                }
                _ => break,
            }
        }
        if d > self.radius + 1e-6 {
            return Err(Error::InvalidConfig(format!("could not bring a point within {} of i", self.radius)));
        }
        Ok(h)
    }
}

/// Lengths of the pieces `v` is cut into; each piece is matched separately
/// so the search tube does not grow with ℓ(v).
const PIECE: f64 = 1.0;

/// Every lift of `v` crossing one period of axis(u), each double coset once,
/// with the word length of a conjugator realizing it.
///
/// Both markers are first moved next to `i`. A lift crossing the period at
/// `x` meets some piece of `v` within half a piece of `x`, and that piece's
/// marker sits within `radius` of `g·i` for its conjugator `g`; so only
/// conjugators with `g·i` near the period matter, and they are reached
/// through short elements without leaving a slightly larger tube.
fn lift_crossings(cover: &Cover, u: &Curve, v: &Curve) -> Result<Vec<Lift>> {
    let rho = cover.radius;
    let hu = cover.pull(u.frame.apply(Point::I))?;
    let to_frame = (hu.m * u.frame).inverse();
    let hu_inv: Vec<Letter> = hu.word.iter().rev().map(|l| l.inverse()).collect();
    let top = u.length.exp();

    let pieces = (v.length / PIECE).ceil().max(1.0) as usize;
    let half = 0.5 * v.length / pieces as f64;
    let mut windows = Vec::with_capacity(pieces);
    for j in 0..pieces {
        let centre = -0.5 * v.length + (2 * j + 1) as f64 * half;
        let frame = v.frame * M2::diagonal(&Length::new(centre));
        let h = cover.pull(frame.apply(Point::I))?;
        let marker = (h.m * frame).apply(Point::I);
        windows.push((centre, h.m * frame, h.word, marker));
    }

    let tube = half + 2.0 * rho + 1e-6;
    let mut seen = HashSet::new();
    seen.insert(quantize(to_frame.apply(Point::I)));
    let mut layer = vec![Elem::new(to_frame, Vec::new())];
    let mut lifts: Vec<Lift> = Vec::new();
    let mut by_bucket: HashMap<i64, Vec<usize>> = HashMap::new();
    let bucket = |t: f64| (t / 1e-5).floor() as i64;
    let top_bucket = bucket(u.length);

    while !layer.is_empty() {
        for g in &layer {
            for (centre, w, hw, marker) in &windows {
                // a crossing lies within half a piece of the piece's marker
                if distance_to_period(mobius_point(&g.f, *marker), top) > half + 1e-2 {
                    continue;
                }
                let Some(mut lift) = lift_of(&(g.m * *w), u.length, v.length, half, *centre)? else {
                    continue;
                };
                lift.depth = word_length(&[&hu_inv, &g.word, hw]);
                let b = bucket(lift.along_u);
                let mut twin = None;
                for k in [b - 1, b, b + 1, b - top_bucket, b + top_bucket, b - top_bucket - 1, b + top_bucket + 1] {
                    if let Some(ids) = by_bucket.get(&k) {
                        twin = twin.or(ids.iter().copied().find(|&i| lifts[i].same_as(&lift, u.length)));
                    }
                }
                match twin {
                    Some(i) => lifts[i].depth = lifts[i].depth.min(lift.depth),
                    None => {
                        by_bucket.entry(b).or_default().push(lifts.len());
                        lifts.push(lift);
                    }
                }
            }
        }
        let mut next = Vec::new();
        for g in &layer {
            for (s, si) in &cover.short {
                let p = mobius_point(&g.f, *si);
                if distance_to_period(p, top) > tube || !seen.insert(quantize(p)) {
                    continue;
                }
                next.push(g.then(s));
            }
        }
        layer = next;
    }
    Ok(lifts)
}

/// The lifts realized within word length `radius`, or `CutoffUnstable` if
/// some lift needs a longer conjugator.
fn within_radius(lifts: Vec<Lift>, radius: usize) -> Result<Vec<Crossing>> {
    let low = lifts.iter().filter(|l| l.depth <= radius).count();
    if low != lifts.len() {
        return Err(Error::CutoffUnstable { radius, low, high: lifts.len() });
    }
    let mut out: Vec<Crossing> = lifts
        .into_iter()
        .map(|l| Crossing { along_u: l.along_u, along_v: l.along_v, sign: l.sign, angle: l.angle })
        .collect();
    out.sort_by(|a, b| a.along_u.total_cmp(&b.along_u));
    Ok(out)
}

/// The lift `m`(imaginary axis) in the u-frame, if it crosses the imaginary
/// axis within one period, and within `half` of the marker of the piece of
/// `v` centred at `centre`.
fn lift_of(m: &M2, period: f64, v_length: f64, half: f64, centre: f64) -> Result<Option<Lift>> {
    let (p, q) = match m.ends() {
        (Some(p), Some(q)) => (p, q),
        // shares the endpoint ∞ with axis(u): the same axis or degenerate
        (Some(x), None) | (None, Some(x)) if x.abs() <= EPS_SEP => return Ok(None),
        _ => return Err(Error::DegenerateConfiguration { tolerance: EPS_SEP }),
    };
    if (p < 0.0) == (q < 0.0) {
        return Ok(None);
    }
    // sine of the crossing angle; zero for the axis of u itself
    let sin = 2.0 * (-p * q).sqrt() / (p.abs() + q.abs());
    if sin <= 1e-12 {
        return Ok(None);
    }
    if sin <= EPS_SEP {
        return Err(Error::DegenerateConfiguration { tolerance: EPS_SEP });
    }
    let height = (-p * q).sqrt();
    let t = height.ln();
    // only lifts crossing the period itself: other members of the double
    // coset differ by powers of u, which amplify rounding by e^{ℓ(u)}
    if t < -1e-3 || t > period + 1e-3 {
        return Ok(None);
    }
    let k = (t / period).floor();
    let along_u = t - k * period;
    let shift = k * period;
    let ends = [(p.abs().ln() - shift, p > 0.0), (q.abs().ln() - shift, q > 0.0)];
    // pull the crossing point back onto axis(v) and read it in v's frame
    let crossing = Point::new(0.0, height);
    let raw = m.inverse().apply(crossing).y.ln();
    // another conjugator of the same double coset sees the crossing nearer
    // its marker, and pushes less rounding through powers of v
    if raw.abs() > half + 1e-3 {
        return Ok(None);
    }
    let along_v = (raw + centre).rem_euclid(v_length);
    let sign = if p < 0.0 { 1 } else { -1 };
    // v runs from q to p along the circle over (p + q) / 2
    let angle = (-2.0 * height / (p - q)).atan2((p + q) / (p - q));
    Ok(Some(Lift { along_u, ends, along_v, sign, angle, depth: 0 }))
}

/// Crossings of a word pair and the radius they stabilized at.
type Counted = (Vec<Crossing>, usize);

/// Intersection counts with a cache keyed by word pair. Counts are
/// topological, so one fixed geometry serves all callers.
#[derive(Debug)]
pub struct Intersector {
    representation: Representation,
    max_radius: usize,
    cover: OnceLock<Cover>,
    cache: Mutex<HashMap<(Word, Word), Counted>>,
}

impl Intersector {
    pub fn new(representation: Representation) -> Self {
        Intersector::with_max_radius(representation, MAX_RADIUS)
    }

    /// Counts realized at a fixed thick structure without symmetries, where
    /// the walk is cheapest.
    pub fn reference(p: &SurfacePresentation) -> Result<Self> {
        let n = p.pants_count();
        let lengths = (0..n).map(|k| 3.0 + 0.07 * k as f64).collect();
        let twists = (0..n).map(|k| 0.3 - 0.11 * k as f64).collect();
        Ok(Intersector::new(build_representation(p, &FnCoordinates::new(lengths, twists))?))
    }

    /// An intersector with the geometry and cutoff of `cfg`.
    pub fn from_config(cfg: &IntersectionConfig) -> Self {
        Intersector::with_max_radius(cfg.representation.clone(), cfg.ball_radius)
    }

    pub fn with_max_radius(representation: Representation, max_radius: usize) -> Self {
        Intersector { representation, max_radius, cover: OnceLock::new(), cache: Mutex::new(HashMap::new()) }
    }

    pub fn representation(&self) -> &Representation {
        &self.representation
    }

    pub fn max_radius(&self) -> usize {
        self.max_radius
    }

    fn cover(&self) -> Result<&Cover> {
        if let Some(c) = self.cover.get() {
            return Ok(c);
        }
        let c = Cover::new(&self.representation)?;
        Ok(self.cover.get_or_init(|| c))
    }

    /// Crossings of `v` with `u`, and the smallest admissible radius (at
    /// least `2·max(|u|, |v|)`) at which all of them are realized.
    pub fn crossings_with_radius(&self, u: &Word, v: &Word) -> Result<(Vec<Crossing>, usize)> {
        let key = (reduce(&u.clone().as_cyclic()), reduce(&v.clone().as_cyclic()));
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let cu = Curve::new(&self.representation, &key.0)?;
        let cv = Curve::new(&self.representation, &key.1)?;
        let lifts = lift_crossings(self.cover()?, &cu, &cv)?;
        let needed = lifts.iter().map(|l| l.depth).max().unwrap_or(0);
        let radius = needed.max(2 * cu.word.len().max(cv.word.len()));
        if radius > self.max_radius {
            let low = lifts.iter().filter(|l| l.depth <= self.max_radius).count();
            return Err(Error::CutoffUnstable { radius: self.max_radius, low, high: lifts.len() });
        }
        let found = within_radius(lifts, radius)?;
        if canonical_class(&cu.word)? == canonical_class(&cv.word)? {
            pair_branches(&found, radius)?;
        }
        self.cache.lock().unwrap().insert(key, (found.clone(), radius));
        Ok((found, radius))
    }

    pub fn crossings(&self, u: &Word, v: &Word) -> Result<Vec<Crossing>> {
        Ok(self.crossings_with_radius(u, v)?.0)
    }

    pub fn intersection_number(&self, u: &Word, v: &Word) -> Result<usize> {
        if canonical_class(u)? == canonical_class(v)? {
            return self.self_intersection(u);
        }
        Ok(self.crossings(u, v)?.len())
    }

    pub fn self_intersection(&self, u: &Word) -> Result<usize> {
        let found = self.crossings(u, u)?;
        Ok(pair_branches(&found, 0)?.len())
    }
}
