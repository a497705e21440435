//! Fuchsian representations of the surface group built from Fenchel–Nielsen
//! coordinates, word evaluation and geodesic lengths.
//!
//! Construction: every handle k is a one-holed torus ⟨A_k, B_k⟩ in standard
//! position (A_k translating along the imaginary axis, B_k along a geodesic
//! orthogonal to it, shifted by the a_k twist). For g ≥ 3 the handle
//! boundaries T_k = [A_k, B_k] are assembled by a chain of pairs of pants
//! with boundaries (c_{k-1}, T_k, c_k), c_k = T_1⋯T_k. Each gluing is a
//! conjugation matching the directed axes and a marker point (the foot of a
//! seam), followed by translation along the glued axis by the twist. Pieces
//! are placed outward from the middle of the chain and the result is
//! conjugated so the generators move `i` as little as possible, which keeps
//! matrix entries small.
//! Advancing a twist by the length of its curve conjugates the glued pieces by
//! the holonomy of that curve, which is the Dehn twist table of
//! [`SurfacePresentation`].

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dd::{directed_frame, div, Dd, Length, M2};
use crate::error::{Error, Result};
use crate::group::{PantsCurveKind, SurfacePresentation, Word};
use crate::hyp::{Isometry, Sl2, EPS_ELL};

/// Valid open range for pants curve lengths.
pub const MIN_LENGTH: f64 = 1e-4;
pub const MAX_LENGTH: f64 = 50.0;

/// Post-construction tolerances.
pub const RELATOR_TOL: f64 = 1e-8;
pub const LENGTH_TOL: f64 = 1e-8;

/// Fenchel–Nielsen coordinates: one length and one twist per pants curve.
/// Serialized as the flat array `[l1..l_n, t1..t_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FnCoordinates {
    pub lengths: Vec<f64>,
    pub twists: Vec<f64>,
}

impl FnCoordinates {
    pub fn new(lengths: Vec<f64>, twists: Vec<f64>) -> Self {
        FnCoordinates { lengths, twists }
    }

    /// All lengths 1, all twists 0.
    pub fn standard(p: &SurfacePresentation) -> Self {
        let n = p.pants_count();
        FnCoordinates::new(vec![1.0; n], vec![0.0; n])
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) || flat.is_empty() {
            return Err(Error::OutOfRange(format!("flat coordinate array has odd or zero length {}", flat.len())));
        }
        let n = flat.len() / 2;
        Ok(FnCoordinates::new(flat[..n].to_vec(), flat[n..].to_vec()))
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.lengths.iter().chain(self.twists.iter()).copied().collect()
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn validate(&self, p: &SurfacePresentation) -> Result<()> {
        let n = p.pants_count();
        if self.lengths.len() != n || self.twists.len() != n {
            return Err(Error::OutOfRange(format!(
                "expected {n} lengths and {n} twists, got {} and {}",
                self.lengths.len(),
                self.twists.len()
            )));
        }
        for (i, &l) in self.lengths.iter().enumerate() {
            if !(l > MIN_LENGTH && l < MAX_LENGTH) {
                return Err(Error::OutOfRange(format!("length {i} = {l} outside ({MIN_LENGTH}, {MAX_LENGTH})")));
            }
        }
        if let Some(t) = self.twists.iter().find(|t| !t.is_finite()) {
            return Err(Error::OutOfRange(format!("twist {t} is not finite")));
        }
        Ok(())
    }

    /// The coordinates after a full Dehn twist (`times` full turns) along
    /// pants curve `index`.
    pub fn full_twist(&self, index: usize, times: f64) -> Self {
        let mut out = self.clone();
        out.twists[index] += times * self.lengths[index];
        out
    }

    pub fn max_abs_diff(&self, other: &FnCoordinates) -> f64 {
        self.to_flat().iter().zip(other.to_flat()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl Serialize for FnCoordinates {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_flat().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FnCoordinates {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let flat = Vec::<f64>::deserialize(d)?;
        FnCoordinates::from_flat(&flat).map_err(serde::de::Error::custom)
    }
}

/// A representation π1(S) → PSL(2,R), one isometry per generator.
///
/// Generator images are kept in double-double precision; word evaluation and
/// lengths use them, the f64 [`Isometry`] images are for geometry.
#[derive(Debug, Clone)]
pub struct Representation {
    images: Vec<Isometry>,
    precise: Vec<M2>,
    presentation: SurfacePresentation,
    source: FnCoordinates,
}

impl Representation {
    pub fn images(&self) -> &[Isometry] {
        &self.images
    }

    pub fn presentation(&self) -> &SurfacePresentation {
        &self.presentation
    }

    pub fn source(&self) -> &FnCoordinates {
        &self.source
    }

    pub fn evaluate(&self, w: &Word) -> Isometry {
        evaluate(self, w)
    }

    pub fn geodesic_length(&self, w: &Word) -> Result<f64> {
        geodesic_length(self, w)
    }

    /// Max-entry distance of the relator image from ±I.
    pub fn relator_error(&self) -> f64 {
        self.product(&self.presentation.relator()).distance_to_pm_identity()
    }

    pub(crate) fn precise_image(&self, generator: usize) -> M2 {
        self.precise[generator]
    }

    pub(crate) fn product(&self, w: &Word) -> M2 {
        let mut m = M2::identity();
        for l in w.letters() {
            let g = &self.precise[l.generator()];
            m = m * if l.is_inverse() { g.inverse() } else { *g };
        }
        m
    }
}

/// Product of generator images along the word.
pub fn evaluate(r: &Representation, w: &Word) -> Isometry {
    r.product(w).to_sl2().to_isometry()
}

/// Length of the closed geodesic in the class of `w`.
pub fn geodesic_length(r: &Representation, w: &Word) -> Result<f64> {
    let tr = r.product(w).trace().abs();
    // ℓ = 2 acosh(1 + δ) with δ = |tr|/2 - 1 taken before rounding, so short
    // curves keep full relative precision
    let delta = (tr / 2.0 - 1.0).hi();
    if tr.hi() <= 2.0 + EPS_ELL {
        return Err(Error::NotHyperbolic { trace: tr.hi() });
    }
    Ok(2.0 * (delta + (delta * (2.0 + delta)).sqrt()).ln_1p())
}

/// A boundary element of a piece in its local position, with the frame that
/// sends the imaginary axis onto its directed axis and `i` onto its marker.
#[derive(Clone, Copy)]
struct Port {
    element: M2,
    frame: M2,
}

impl Port {
    fn new(element: M2, reference: &M2) -> Result<Self> {
        let frame = directed_frame(&element, reference)
            .ok_or_else(|| Error::ConstructionFailure("port element not hyperbolic".into()))?;
        Ok(Port { element, frame })
    }

    /// The same curve with the opposite direction.
    fn reversed(&self) -> Self {
        // z -> -1/z reverses the imaginary axis and fixes i
        let half_turn = M2::new(dd(0.0), dd(1.0), dd(-1.0), dd(0.0));
        Port { element: self.element.inverse(), frame: self.frame * half_turn }
    }

    fn placed(&self, h: &M2) -> Self {
        Port { element: self.element.conjugate_by(h), frame: *h * self.frame }
    }
}

fn dd(x: f64) -> Dd {
    Dd::from(x)
}

/// One-holed torus with core length `core`, boundary length `boundary` and
/// core twist `twist`; the boundary [A, B] has trace -2 cosh(boundary/2).
struct Torus {
    a: M2,
    b: M2,
    boundary: Port,
}

impl Torus {
    fn standard(core: f64, boundary: f64, twist: f64) -> Result<Self> {
        let core = Length::new(core);
        let a = M2::diagonal(&core);
        // tr [A, U] = 2 - 4 sinh²(core/2) sinh²(m/2) = -2 cosh(boundary/2)
        let u = M2::unit_circle_translation(div(Length::new(boundary).cosh_quarter(), core.sinh_half()));
        let b = u * M2::diagonal(&Length::new(twist));
        // [A, U D] = [A, U] since D commutes with A
        let boundary = Port::new(a * u * a.inverse() * u.inverse(), &a)?;
        Ok(Torus { a, b, boundary })
    }
}

/// Pair of pants ⟨X, Y⟩ whose boundaries X, Y, XY have traces
/// -2 cosh(l1/2), -2 cosh(l2/2), -2 cosh(l3/2).
struct Pants {
    x: Port,
    y: Port,
    xy: Port,
}

impl Pants {
    fn standard(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        let (l1, l2, l3) = (Length::new(l1), Length::new(l2), Length::new(l3));
        let (c1, c2, c3) = (l1.cosh_half(), l2.cosh_half(), l3.cosh_half());
        let (s1, s2) = (l1.sinh_half(), l2.sinh_half());
        // cosh(seam) between the axes of X and Y
        let cosh_seam = div(c3 + c1 * c2, s1 * s2);
        let sinh_half_seam = ((cosh_seam - 1.0) / 2.0).sqrt();
        let x = M2::diagonal(&l1).neg();
        let y = M2::diagonal(&l2.neg()).conjugate_by(&M2::unit_circle_translation(sinh_half_seam)).neg();
        Ok(Pants { x: Port::new(x, &y)?, y: Port::new(y, &x)?, xy: Port::new(x * y, &y)? })
    }
}

/// Placement sending the piece's port onto the target port, twisted by
/// `twist` along the target's directed axis.
fn glue(piece: &Port, target: &Port, twist: f64) -> Result<M2> {
    let h = target.frame * M2::diagonal(&Length::new(twist)) * piece.frame.inverse();
    let moved = piece.element.conjugate_by(&h);
    let err = moved.max_abs_diff(&target.element);
    if !(err <= 1e-12 * target.element.max_abs().max(1.0)) {
        return Err(Error::ConstructionFailure(format!("gluing mismatch {err:e}")));
    }
    Ok(h)
}

/// Sum of squared Frobenius norms, i.e. 2 Σ cosh d(i, s·i).
fn spread(gens: &[Sl2]) -> f64 {
    gens.iter().map(|m| m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d).sum()
}

/// Conjugator moving the base point `i` to where the generators displace it
/// least (pattern search over the upper half-plane).
fn recentering(gens: &[Sl2]) -> Sl2 {
    let to_base = |u: f64, s: f64| (Sl2::new(1.0, u, 0.0, 1.0) * Sl2::diagonal(s)).inverse();
    let cost = |u: f64, s: f64| {
        let h = to_base(u, s);
        spread(&gens.iter().map(|m| m.conjugate_by(&h)).collect::<Vec<_>>())
    };
    let (mut u, mut s) = (0.0f64, 0.0f64);
    let mut best = cost(u, s);
    let mut step = 1.0;
    while step > 1e-4 {
        let scale = s.exp();
        let probe = [(step * scale, 0.0), (-step * scale, 0.0), (0.0, step), (0.0, -step)]
            .into_iter()
            .map(|(du, ds)| (u + du, s + ds))
            .map(|(nu, ns)| (cost(nu, ns), nu, ns))
            .filter(|(c, _, _)| *c < best)
            .min_by(|a, b| a.0.total_cmp(&b.0));
        match probe {
            Some((c, nu, ns)) => {
                best = c;
                u = nu;
                s = ns;
            }
            None => step *= 0.5,
        }
    }
    to_base(u, s)
}

#[derive(Clone, Copy)]
enum Piece {
    Torus(usize),
    Pants(usize),
}

/// `child` port is identified with `parent` port (reversed if `reverse`),
/// the child shifted by `twist` along the common axis.
struct Seam {
    child: (usize, usize),
    parent: (usize, usize),
    reverse: bool,
    twist: f64,
}

/// Builds the representation for coordinates `x`.
pub fn build_representation(p: &SurfacePresentation, x: &FnCoordinates) -> Result<Representation> {
    x.validate(p)?;
    let g = p.genus();
    let idx = |kind: PantsCurveKind| -> usize {
        // in genus 2 both handles share the boundary curve [a1,b1]
        let kind = match kind {
            PantsCurveKind::HandleBoundary(_) if g == 2 => PantsCurveKind::HandleBoundary(1),
            k => k,
        };
        (0..p.pants_count()).find(|&i| p.pants_kind(i) == kind).expect("pants curve kind")
    };
    let len = |kind| x.lengths[idx(kind)];
    let tw = |kind| x.twists[idx(kind)];
    use PantsCurveKind::*;

    // pieces: tori 1..=g at indices 0..g, then pants 2..g-1
    let mut pieces: Vec<Piece> = (1..=g).map(Piece::Torus).collect();
    pieces.extend((2..g).map(Piece::Pants));
    let pants_slot = |k: usize| g + k - 2;
    let mut tori: Vec<Torus> = Vec::with_capacity(g);
    let mut ports: Vec<Vec<Port>> = Vec::with_capacity(pieces.len());
    for piece in &pieces {
        match *piece {
            Piece::Torus(k) => {
                let t = Torus::standard(len(HandleCore(k)), len(HandleBoundary(k)), tw(HandleCore(k)))?;
                ports.push(vec![t.boundary]);
                tori.push(t);
            }
            Piece::Pants(k) => {
                let l_prev = if k == 2 { len(HandleBoundary(1)) } else { len(Separating(k - 1)) };
                let l_next = if k == g - 1 { len(HandleBoundary(g)) } else { len(Separating(k)) };
                let pants = Pants::standard(l_prev, len(HandleBoundary(k)), l_next)?;
                ports.push(vec![pants.x, pants.y, pants.xy]);
            }
        }
    }

    const BOUNDARY: usize = 0;
    const X: usize = 0;
    const Y: usize = 1;
    const XY: usize = 2;
    let mut seams = Vec::new();
    if g == 2 {
        seams.push(Seam { child: (1, BOUNDARY), parent: (0, BOUNDARY), reverse: true, twist: tw(HandleBoundary(1)) });
    } else {
        seams.push(Seam {
            child: (pants_slot(2), X),
            parent: (0, BOUNDARY),
            reverse: false,
            twist: tw(HandleBoundary(1)),
        });
        for k in 3..g {
            seams.push(Seam {
                child: (pants_slot(k), X),
                parent: (pants_slot(k - 1), XY),
                reverse: false,
                twist: tw(Separating(k - 1)),
            });
        }
        for k in 2..g {
            seams.push(Seam {
                child: (k - 1, BOUNDARY),
                parent: (pants_slot(k), Y),
                reverse: false,
                twist: tw(HandleBoundary(k)),
            });
        }
        seams.push(Seam {
            child: (g - 1, BOUNDARY),
            parent: (pants_slot(g - 1), XY),
            reverse: true,
            twist: tw(HandleBoundary(g)),
        });
    }

    // place pieces outward from the middle of the chain
    let root = if g == 2 { 0 } else { pants_slot(g.div_ceil(2)) };
    let mut placement: Vec<Option<M2>> = vec![None; pieces.len()];
    placement[root] = Some(M2::identity());
    let mut remaining: Vec<&Seam> = seams.iter().collect();
    while !remaining.is_empty() {
        let before = remaining.len();
        let mut next = Vec::new();
        for seam in remaining {
            let child_port = ports[seam.child.0][seam.child.1];
            let parent_port = ports[seam.parent.0][seam.parent.1];
            let parent_port = if seam.reverse { parent_port.reversed() } else { parent_port };
            match (placement[seam.child.0], placement[seam.parent.0]) {
                (None, Some(hp)) => {
                    let h = glue(&child_port, &parent_port.placed(&hp), seam.twist)?;
                    placement[seam.child.0] = Some(h);
                }
                (Some(hc), None) => {
                    let h = glue(&parent_port, &child_port.placed(&hc), -seam.twist)?;
                    placement[seam.parent.0] = Some(h);
                }
                _ => next.push(seam),
            }
        }
        if next.len() == before {
            return Err(Error::ConstructionFailure("disconnected gluing graph".into()));
        }
        remaining = next;
    }

    let mut precise: Vec<M2> = Vec::with_capacity(2 * g);
    for (k, t) in tori.iter().enumerate() {
        let h = placement[k].expect("every torus is placed");
        precise.push(t.a.conjugate_by(&h));
        precise.push(t.b.conjugate_by(&h));
    }
    let rounded: Vec<Sl2> = precise.iter().map(|m| m.to_sl2()).collect();
    let h = M2::from_sl2(&recentering(&rounded));
    let precise: Vec<M2> = precise.iter().map(|m| m.conjugate_by(&h)).collect();
    let images = precise.iter().map(|m| m.to_sl2().renormalized().to_isometry()).collect();
    let rep = Representation { images, precise, presentation: p.clone(), source: x.clone() };

    let err = rep.relator_error();
    if !(err <= RELATOR_TOL) {
        return Err(Error::ConstructionFailure(format!("relator error {err:e}")));
    }
    for (i, c) in p.pants_curves().iter().enumerate() {
        let l = geodesic_length(&rep, c).map_err(|e| Error::ConstructionFailure(format!("pants curve {i}: {e}")))?;
        if (l - x.lengths[i]).abs() > LENGTH_TOL * x.lengths[i].max(1.0) {
            return Err(Error::ConstructionFailure(format!(
                "pants curve {i} has length {l}, expected {}",
                x.lengths[i]
            )));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{dehn_twist_word, enumerate_classes, reduce};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn genus2() -> SurfacePresentation {
        SurfacePresentation::new(2).unwrap()
    }

    fn random_point(p: &SurfacePresentation, rng: &mut ChaCha8Rng) -> FnCoordinates {
        let n = p.pants_count();
        FnCoordinates::new(
            (0..n).map(|_| rng.gen_range(0.2f64.ln()..5f64.ln()).exp()).collect(),
            (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect(),
        )
    }

    #[test]
    fn pants_lengths_round_trip() {
        let p = genus2();
        let x = FnCoordinates::new(vec![1.0, 2.0, 3.0], vec![0.0; 3]);
        let r = build_representation(&p, &x).unwrap();
        for (c, want) in p.pants_curves().iter().zip([1.0, 2.0, 3.0]) {
            assert!((r.geodesic_length(c).unwrap() - want).abs() < 1e-8);
        }
    }

    #[test]
    fn relator_is_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in 2..=4 {
            let p = SurfacePresentation::new(g).unwrap();
            for _ in 0..10 {
                let r = build_representation(&p, &random_point(&p, &mut rng)).unwrap();
                assert!(r.relator_error() < 1e-8);
            }
        }
    }

    #[test]
    fn short_and_long_curves_build() {
        let p = genus2();
        for x in [[0.01, 1.0, 1.0, 0.5, 0.0, 0.0], [1.0, 0.002, 1.0, 0.0, 0.1, 0.0], [20.0, 1.0, 15.0, 1.0, 2.0, -3.0]]
        {
            let x = FnCoordinates::from_flat(&x).unwrap();
            let r = build_representation(&p, &x).unwrap();
            for (c, want) in p.pants_curves().iter().zip(&x.lengths) {
                assert!((r.geodesic_length(c).unwrap() - want).abs() < 1e-8 * want.max(1.0));
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let p = genus2();
        for flat in
            [[0.0, 1.0, 1.0, 0.0, 0.0, 0.0], [1.0, 50.0, 1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 1.0, f64::NAN, 0.0, 0.0]]
        {
            let x = FnCoordinates::from_flat(&flat).unwrap();
            assert!(matches!(build_representation(&p, &x), Err(Error::OutOfRange(_))));
        }
        let short = FnCoordinates::new(vec![1.0; 2], vec![0.0; 2]);
        assert!(matches!(build_representation(&p, &short), Err(Error::OutOfRange(_))));
        assert!(FnCoordinates::from_flat(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn flat_json_round_trip() {
        let x = FnCoordinates::new(vec![1.0, 2.5, 0.5], vec![0.25, -1.0, 0.0]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[1.0,2.5,0.5,0.25,-1.0,0.0]");
        assert_eq!(serde_json::from_str::<FnCoordinates>(&s).unwrap(), x);
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let p = genus2();
        let r = build_representation(&p, &FnCoordinates::standard(&p)).unwrap();
        let id = r.evaluate(&Word::empty());
        assert_eq!(id.entries(), [1.0, 0.0, 0.0, 1.0]);
        let (u, v) = (w("a1b2A1"), w("b1a2"));
        let lhs = r.evaluate(&u.concat(&v));
        let rhs = r.evaluate(&u) * r.evaluate(&v);
        for (x, y) in lhs.entries().iter().zip(rhs.entries()) {
            assert!((x - y).abs() < 1e-12 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn length_is_a_class_function() {
        let p = genus2();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = build_representation(&p, &random_point(&p, &mut rng)).unwrap();
        for s in ["a1b1", "a1b2A2", "b1b1a2B1"] {
            let base = r.geodesic_length(&w(s)).unwrap();
            for g in ["a1", "B2a1", "b1b1A2"] {
                let conj = reduce(&w(s).conjugate(&w(g)));
                assert!((r.geodesic_length(&conj).unwrap() - base).abs() < 1e-9);
            }
        }
        assert!(matches!(r.geodesic_length(&Word::empty()), Err(Error::NotHyperbolic { .. })));
    }

    #[test]
    fn full_twist_acts_as_dehn_twist() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in [2, 3] {
            let p = SurfacePresentation::new(g).unwrap();
            let x = random_point(&p, &mut rng);
            let r = build_representation(&p, &x).unwrap();
            let pool: Vec<Word> = enumerate_classes(&p, 3).into_iter().step_by(7).take(50).collect();
            for i in 0..p.pants_count() {
                let shifted = build_representation(&p, &x.full_twist(i, 1.0)).unwrap();
                for c in &pool {
                    let twisted = dehn_twist_word(&p, i, c, 1).unwrap();
                    let (a, b) = (shifted.geodesic_length(c).unwrap(), r.geodesic_length(&twisted).unwrap());
                    assert!((a - b).abs() < 1e-7, "g={g} curve {i} word {c}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn length_is_smooth_in_coordinates() {
        let p = genus2();
        let x = FnCoordinates::new(vec![0.9, 1.3, 0.7], vec![0.2, -0.4, 0.5]);
        let f = |y: &FnCoordinates, c: &Word| build_representation(&p, y).unwrap().geodesic_length(c).unwrap();
        let mut checked = 0;
        for c in [w("b1"), w("a1b2"), w("b1B2a2")] {
            for k in 0..6 {
                let fd = |h: f64| {
                    let mut plus = x.to_flat();
                    let mut minus = x.to_flat();
                    plus[k] += h;
                    minus[k] -= h;
                    let (plus, minus) =
                        (FnCoordinates::from_flat(&plus).unwrap(), FnCoordinates::from_flat(&minus).unwrap());
                    (f(&plus, &c) - f(&minus, &c)) / (2.0 * h)
                };
                // Richardson: the h and h/2 errors against a fine reference
                let reference = fd(1e-4);
                let (e1, e2) = ((fd(0.1) - reference).abs(), (fd(0.05) - reference).abs());
                if e1 > 1e-7 {
                    let ratio = e1 / e2;
                    assert!((ratio - 4.0).abs() < 0.3, "{c} coord {k}: ratio {ratio}");
                    checked += 1;
                }
            }
        }
        assert!(checked >= 12, "only {checked} nontrivial derivatives");
    }

    /// Independent value of ℓ(a1 b1) at lengths 1 and zero twist from the
    /// Fricke identity x² + y² + z² - xyz - 2 = tr[A,B] in 50-digit arithmetic.
    /// Zero twist means tr AB = tr AB⁻¹, i.e. z = xy/2.
    #[test]
    fn a1b1_length_matches_high_precision_trace() {
        use astro_float::{ctx::Context, expr, Consts, RoundingMode};
        let mut ctx = Context::new(192, RoundingMode::ToEven, Consts::new().unwrap(), -10000, 10000);
        let len = expr!(
            2 * acosh(
                (2 * cosh(1 / 2)) / 4
                    * sqrt((-2 * cosh(1 / 2) + 2 - 4 * cosh(1 / 2) * cosh(1 / 2)) / (1 - cosh(1 / 2) * cosh(1 / 2)))
            ),
            &mut ctx
        );
        let s = format!("{len}");
        assert!(s.starts_with("3."), "{s}");
        let oracle: f64 = s.parse().unwrap();
        let p = genus2();
        let r = build_representation(&p, &FnCoordinates::standard(&p)).unwrap();
        let got = r.geodesic_length(&w("a1b1")).unwrap();
        assert!((got - oracle).abs() < 1e-13, "{got} vs {oracle}");
    }
}
