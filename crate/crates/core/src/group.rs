//! The surface group ⟨a1, b1, …, ag, bg | [a1,b1]⋯[ag,bg]⟩: words, reduction,
//! unoriented conjugacy-class keys, class enumeration and the Dehn twists
//! along the fixed pants decomposition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator or its inverse. The code is `2 * generator + inverse`, with
/// generators numbered a1, b1, a2, b2, …, so letters sort as a1 < A1 < b1 < B1 < a2 ….
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u16);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((2 * generator + inverse as usize) as u16)
    }

    /// Handle letter: `a_k` (`is_b = false`) or `b_k`, 1-based handle index.
    pub fn handle(k: usize, is_b: bool, inverse: bool) -> Self {
        Letter::new(2 * (k - 1) + is_b as usize, inverse)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// 1-based handle this letter belongs to.
    pub fn handle_index(self) -> usize {
        self.generator() / 2 + 1
    }

    pub fn code(self) -> u16 {
        self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.generator();
        let c = match (g % 2 == 1, self.is_inverse()) {
            (false, false) => 'a',
            (false, true) => 'A',
            (true, false) => 'b',
            (true, true) => 'B',
        };
        write!(f, "{}{}", c, g / 2 + 1)
    }
}

/// A word in the generators. `cyclic` marks words standing for conjugacy
/// classes (closed curves) rather than group elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
    cyclic: bool,
}

impl Word {
    pub fn new(letters: Vec<Letter>, cyclic: bool) -> Self {
        Word { letters, cyclic }
    }

    pub fn empty() -> Self {
        Word::new(Vec::new(), false)
    }

    /// Parses strings such as `"a1b1A1B1"`; capitals are inverses.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::ParseWord { input: s.to_string(), reason: reason.to_string() };
        let mut letters = Vec::new();
        let mut chars = s.trim().chars().peekable();
        while let Some(c) = chars.next() {
            let (is_b, inverse) = match c {
                'a' => (false, false),
                'A' => (false, true),
                'b' => (true, false),
                'B' => (true, true),
                _ => return Err(bad(&format!("unexpected character {c:?}"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let k: usize = digits.parse().map_err(|_| bad("missing handle index"))?;
            if k == 0 {
                return Err(bad("handle indices start at 1"));
            }
            letters.push(Letter::handle(k, is_b, inverse));
        }
        Ok(Word::new(letters, false))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn as_cyclic(mut self) -> Self {
        self.cyclic = true;
        self
    }

    pub fn inverse(&self) -> Word {
        Word::new(self.letters.iter().rev().map(|l| l.inverse()).collect(), self.cyclic)
    }

    /// Concatenation (not reduced).
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(letters, self.cyclic && other.cyclic)
    }

    pub fn conjugate(&self, by: &Word) -> Word {
        by.concat(self).concat(&by.inverse())
    }

    /// Largest handle index used.
    pub fn max_handle(&self) -> usize {
        self.letters.iter().map(|l| l.handle_index()).max().unwrap_or(0)
    }

    fn rotated(&self, k: usize) -> Vec<Letter> {
        let n = self.letters.len();
        (0..n).map(|i| self.letters[(i + k) % n]).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Free reduction, plus cyclic reduction for cyclic words.
pub fn reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    if w.cyclic {
        let mut lo = 0;
        let mut hi = out.len();
        while hi - lo >= 2 && out[lo] == out[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        out = out[lo..hi].to_vec();
    }
    Word::new(out, w.cyclic)
}

fn least_rotation(w: &Word) -> Vec<Letter> {
    let n = w.len();
    let mut best = 0;
    for k in 1..n {
        let better = (0..n)
            .map(|i| (w.letters[(k + i) % n], w.letters[(best + i) % n]))
            .find(|(x, y)| x != y)
            .is_some_and(|(x, y)| x < y);
        if better {
            best = k;
        }
    }
    w.rotated(best)
}

/// Key for an unoriented conjugacy class: the least cyclic rotation of the
/// cyclically reduced word or of its inverse.
pub fn canonical_class(w: &Word) -> Result<Word> {
    let r = reduce(&w.clone().as_cyclic());
    if r.is_empty() {
        return Err(Error::EmptyWord);
    }
    let fwd = least_rotation(&r);
    let bwd = least_rotation(&r.inverse());
    Ok(Word::new(fwd.min(bwd), true))
}

/// False iff the cyclic word is a proper power v^k, k ≥ 2.
pub fn is_primitive(w: &Word) -> bool {
    let r = reduce(&w.clone().as_cyclic());
    let n = r.len();
    if n == 0 {
        return false;
    }
    (1..n).filter(|d| n.is_multiple_of(*d)).all(|d| r.rotated(d) != r.letters)
}

/// A closed genus-g surface with its standard presentation and a fixed pants
/// decomposition.
///
/// Pants curves, in index order: for g = 2, `[a1, [a1,b1], a2]`; for g ≥ 3,
/// `a_k, [a_k,b_k]` for each handle k followed by the separating curves
/// `[a1,b1]⋯[a_k,b_k]` for k = 2..g-2.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePresentation {
    genus: usize,
    pants_curves: Vec<Word>,
    twists: Vec<TwistRule>,
}

/// How the positive Dehn twist along one pants curve acts on generators.
#[derive(Debug, Clone, PartialEq)]
enum TwistRule {
    /// b_k ↦ b_k a_k.
    Handle(usize),
    /// Every generator of the listed handles is conjugated by `by`.
    Conjugate { handles: Vec<usize>, by: Word },
}

/// Which kind of curve a pants curve is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PantsCurveKind {
    /// The curve a_k inside handle k.
    HandleCore(usize),
    /// The boundary [a_k, b_k] of handle k.
    HandleBoundary(usize),
    /// The separating curve [a1,b1]⋯[a_k,b_k].
    Separating(usize),
}

impl SurfacePresentation {
    pub fn new(genus: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::UnsupportedGenus(genus));
        }
        let kinds = pants_kinds(genus);
        let pants_curves = kinds.iter().map(|k| kind_word(*k)).collect();
        let twists = kinds.iter().map(|k| twist_rule(genus, *k)).collect();
        Ok(SurfacePresentation { genus, pants_curves, twists })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    pub fn pants_count(&self) -> usize {
        3 * self.genus - 3
    }

    pub fn pants_curves(&self) -> &[Word] {
        &self.pants_curves
    }

    pub fn pants_kind(&self, index: usize) -> PantsCurveKind {
        pants_kinds(self.genus)[index]
    }

    /// The relator [a1,b1]⋯[ag,bg].
    pub fn relator(&self) -> Word {
        separating_word(self.genus)
    }

    /// Whether every letter of `w` is a generator of this surface.
    pub fn contains(&self, w: &Word) -> bool {
        w.max_handle() <= self.genus
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.pants_count() {
            return Err(Error::BadIndex { index, count: self.pants_count() });
        }
        Ok(())
    }

    /// Image of each generator under the Dehn twist along pants curve `index`
    /// (`direction` +1 or -1).
    pub fn twist_images(&self, index: usize, direction: i32) -> Result<Vec<Word>> {
        self.check_index(index)?;
        let mut images: Vec<Word> =
            (0..self.generator_count()).map(|g| Word::new(vec![Letter::new(g, false)], false)).collect();
        match &self.twists[index] {
            TwistRule::Handle(k) => {
                let a = Letter::handle(*k, false, direction < 0);
                let b = Letter::handle(*k, true, false);
                images[b.generator()] = Word::new(vec![b, a], false);
            }
            TwistRule::Conjugate { handles, by } => {
                let by = if direction < 0 { by.inverse() } else { by.clone() };
                for &k in handles {
                    for is_b in [false, true] {
                        let g = Letter::handle(k, is_b, false);
                        images[g.generator()] = Word::new(vec![g], false).conjugate(&by);
                    }
                }
            }
        }
        Ok(images)
    }

    /// Applies the automorphism given by generator images to a word.
    pub fn substitute(images: &[Word], w: &Word) -> Word {
        let mut letters = Vec::new();
        for l in w.letters() {
            let img = &images[l.generator()];
            if l.is_inverse() {
                letters.extend(img.inverse().letters().iter().copied());
            } else {
                letters.extend(img.letters().iter().copied());
            }
        }
        reduce(&Word::new(letters, w.is_cyclic()))
    }

    /// Cyclic shift of handle labels k ↦ k + shift (mod g); an automorphism
    /// because it cyclically permutes the relator. For g = 2 with shift 1 this
    /// swaps the two handles.
    pub fn rotate_handles(&self, w: &Word, shift: usize) -> Word {
        let g = self.genus;
        let letters = w
            .letters()
            .iter()
            .map(|l| {
                let k = (l.handle_index() - 1 + shift) % g + 1;
                Letter::handle(k, l.generator() % 2 == 1, l.is_inverse())
            })
            .collect();
        Word::new(letters, w.is_cyclic())
    }
}

fn pants_kinds(genus: usize) -> Vec<PantsCurveKind> {
    use PantsCurveKind::*;
    if genus == 2 {
        return vec![HandleCore(1), HandleBoundary(1), HandleCore(2)];
    }
    let mut kinds = Vec::with_capacity(3 * genus - 3);
    for k in 1..=genus {
        kinds.push(HandleCore(k));
        kinds.push(HandleBoundary(k));
    }
    for k in 2..=genus - 2 {
        kinds.push(Separating(k));
    }
    kinds
}

fn commutator_word(k: usize) -> Word {
    Word::new(
        vec![
            Letter::handle(k, false, false),
            Letter::handle(k, true, false),
            Letter::handle(k, false, true),
            Letter::handle(k, true, true),
        ],
        false,
    )
}

fn separating_word(k: usize) -> Word {
    (1..=k).fold(Word::empty(), |acc, j| acc.concat(&commutator_word(j)))
}

fn kind_word(kind: PantsCurveKind) -> Word {
    match kind {
        PantsCurveKind::HandleCore(k) => Word::new(vec![Letter::handle(k, false, false)], false),
        PantsCurveKind::HandleBoundary(k) => commutator_word(k),
        PantsCurveKind::Separating(k) => separating_word(k),
    }
}

// Twist directions match the holonomy twist parameters: advancing twist i by
// the length of pants curve i equals precomposing the holonomy with these maps.
fn twist_rule(genus: usize, kind: PantsCurveKind) -> TwistRule {
    match kind {
        PantsCurveKind::HandleCore(k) => TwistRule::Handle(k),
        PantsCurveKind::HandleBoundary(k) => {
            if genus == 2 {
                TwistRule::Conjugate { handles: vec![2], by: commutator_word(1).inverse() }
            } else if k == 1 {
                TwistRule::Conjugate { handles: (2..=genus).collect(), by: commutator_word(1) }
            } else {
                TwistRule::Conjugate { handles: vec![k], by: commutator_word(k) }
            }
        }
        PantsCurveKind::Separating(k) => {
            TwistRule::Conjugate { handles: (k + 1..=genus).collect(), by: separating_word(k) }
        }
    }
}

/// An automorphism of the surface group, as generator images, carried with
/// its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    images: Vec<Word>,
    inverse: Vec<Word>,
}

impl Automorphism {
    pub fn identity(p: &SurfacePresentation) -> Self {
        let images: Vec<Word> =
            (0..p.generator_count()).map(|g| Word::new(vec![Letter::new(g, false)], false)).collect();
        Automorphism { inverse: images.clone(), images }
    }

    /// Changes the images of a few generators; the rest stay fixed.
    fn moving(p: &SurfacePresentation, forward: &[(Letter, &[Letter])], backward: &[(Letter, &[Letter])]) -> Self {
        let mut out = Automorphism::identity(p);
        for (g, img) in forward {
            out.images[g.generator()] = Word::new(img.to_vec(), false);
        }
        for (g, img) in backward {
            out.inverse[g.generator()] = Word::new(img.to_vec(), false);
        }
        out
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { images: self.inverse.clone(), inverse: self.images.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(g, w)| w.letters() == [Letter::new(g, false)])
    }

    pub fn apply(&self, w: &Word) -> Word {
        SurfacePresentation::substitute(&self.images, w)
    }

    /// The image of the unoriented class of `w`.
    pub fn apply_class(&self, w: &Word) -> Result<Word> {
        canonical_class(&self.apply(&w.clone().as_cyclic()))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Automorphism) -> Automorphism {
        Automorphism {
            images: self.images.iter().map(|w| SurfacePresentation::substitute(&next.images, w)).collect(),
            inverse: next.inverse.iter().map(|w| SurfacePresentation::substitute(&self.inverse, w)).collect(),
        }
    }
}

impl SurfacePresentation {
    /// Twists along every a_k and b_k, and for each pair of consecutive
    /// handles the move a_k ↦ A_{k+1} b_k a_k, b_{k+1} ↦ A_{k+1} b_k b_{k+1};
    /// each with its inverse.
    pub fn elementary_automorphisms(&self) -> Vec<Automorphism> {
        let l = |k, is_b, inv| Letter::handle(k, is_b, inv);
        let mut out = Vec::new();
        for k in 1..=self.genus {
            let (a, b, ai, bi) = (l(k, false, false), l(k, true, false), l(k, false, true), l(k, true, true));
            out.push(Automorphism::moving(self, &[(b, &[b, a])], &[(b, &[b, ai])]));
            out.push(Automorphism::moving(self, &[(a, &[a, b])], &[(a, &[a, bi])]));
        }
        for k in 1..self.genus {
            let (a, b, bi) = (l(k, false, false), l(k, true, false), l(k, true, true));
            let (c, d, ci) = (l(k + 1, false, false), l(k + 1, true, false), l(k + 1, false, true));
            let mut m = Automorphism::moving(
                self,
                &[(a, &[ci, b, a]), (d, &[ci, b, d])],
                &[(a, &[bi, c, a]), (d, &[bi, c, d])],
            );
            // the relator goes to its conjugate by x = A_{k+1} b_k, so the
            // other handles are conjugated along
            let x = Word::new(vec![ci, b], false);
            for j in (1..=self.genus).filter(|&j| j != k && j != k + 1) {
                for is_b in [false, true] {
                    let g = l(j, is_b, false);
                    let alone = Word::new(vec![g], false);
                    m.images[g.generator()] = alone.conjugate(&x);
                    m.inverse[g.generator()] = alone.conjugate(&x.inverse());
                }
            }
            out.push(m);
        }
        let inverses: Vec<Automorphism> = out.iter().map(Automorphism::inverse).collect();
        out.extend(inverses);
        out
    }
}

/// Image of the class of `w` under the Dehn twist along pants curve `index`.
pub fn dehn_twist_word(p: &SurfacePresentation, index: usize, w: &Word, direction: i32) -> Result<Word> {
    let images = p.twist_images(index, direction)?;
    canonical_class(&SurfacePresentation::substitute(&images, &w.clone().as_cyclic()))
}

/// All canonical primitive classes of word length ≤ `max_len`, sorted by
/// (length, lexicographic).
pub fn enumerate_classes(p: &SurfacePresentation, max_len: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = (0..2 * p.generator_count()).map(|c| Letter(c as u16)).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Letter> = Vec::with_capacity(max_len);
    fn walk(alphabet: &[Letter], stack: &mut Vec<Letter>, max_len: usize, out: &mut Vec<Word>) {
        if !stack.is_empty() && stack[0] != stack[stack.len() - 1].inverse() {
            let w = Word::new(stack.clone(), true);
            if is_primitive(&w) {
                if let Ok(c) = canonical_class(&w) {
                    if c.letters == w.letters {
                        out.push(c);
                    }
                }
            }
        }
        if stack.len() == max_len {
            return;
        }
        for &l in alphabet {
            if let Some(&last) = stack.last() {
                if l == last.inverse() {
                    continue;
                }
            }
            // canonical words start with their least letter
            if let Some(&first) = stack.first() {
                if l < first {
                    continue;
                }
            }
            stack.push(l);
            walk(alphabet, stack, max_len, out);
            stack.pop();
        }
    }
    walk(&alphabet, &mut stack, max_len, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.letters.cmp(&b.letters)));
    out
}
