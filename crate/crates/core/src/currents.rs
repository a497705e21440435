//! Weighted multicurves as finite geodesic currents.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{canonical_class, dehn_twist_word, enumerate_classes, is_primitive, SurfacePresentation, Word};
use crate::holonomy::{build_representation, FnCoordinates, Representation};
use crate::intersection::{pair_branches, Intersector};

/// Crossings closer than this along a curve are one concurrent point.
pub const CROSSING_SEPARATION: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub word: Word,
    pub weight: f64,
}

/// Σ cᵢ γᵢ over distinct primitive classes with positive weights, kept
/// sorted by canonical word so that equal currents compare equal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurrent", into = "RawCurrent")]
pub struct MulticurveCurrent {
    components: Vec<Component>,
}

#[derive(Serialize, Deserialize)]
struct RawCurrent {
    components: Vec<Component>,
}

impl TryFrom<RawCurrent> for MulticurveCurrent {
    type Error = Error;

    fn try_from(raw: RawCurrent) -> Result<Self> {
        MulticurveCurrent::new(raw.components.into_iter().map(|c| (c.word, c.weight)))
    }
}

impl From<MulticurveCurrent> for RawCurrent {
    fn from(m: MulticurveCurrent) -> Self {
        RawCurrent { components: m.components }
    }
}

impl MulticurveCurrent {
    /// Canonicalizes each class and merges repeats. A proper power γᵏ is
    /// rejected: use weight k on γ.
    pub fn new(parts: impl IntoIterator<Item = (Word, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<Word, f64> = BTreeMap::new();
        for (w, c) in parts {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidCurrent(format!("weight {c} on {w} is not positive")));
            }
            let class = canonical_class(&w).map_err(|_| Error::InvalidCurrent(format!("{w} is trivial")))?;
            if !is_primitive(&class) {
                return Err(Error::InvalidCurrent(format!("{w} is a proper power; put the exponent in the weight")));
            }
            *merged.entry(class).or_insert(0.0) += c;
        }
        if merged.is_empty() {
            return Err(Error::InvalidCurrent("no components".into()));
        }
        Ok(MulticurveCurrent {
            components: merged.into_iter().map(|(word, weight)| Component { word, weight }).collect(),
        })
    }

    pub fn single(w: &Word) -> Result<Self> {
        MulticurveCurrent::new([(w.clone(), 1.0)])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn classes(&self) -> Vec<Word> {
        self.components.iter().map(|c| c.word.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        MulticurveCurrent::new(self.components.iter().map(|c| (c.word.clone(), t * c.weight)))
    }

    pub fn plus(&self, other: &MulticurveCurrent) -> Result<Self> {
        MulticurveCurrent::new(self.components.iter().chain(&other.components).map(|c| (c.word.clone(), c.weight)))
    }

    /// Image under a map on classes; classes that collide are merged.
    pub fn map_classes(&self, f: impl Fn(&Word) -> Result<Word>) -> Result<Self> {
        let parts = self.components.iter().map(|c| Ok((f(&c.word)?, c.weight))).collect::<Result<Vec<_>>>()?;
        MulticurveCurrent::new(parts)
    }

    /// Image under the Dehn twist along pants curve `index`.
    pub fn dehn_twist(&self, p: &SurfacePresentation, index: usize, direction: i32) -> Result<Self> {
        self.map_classes(|w| dehn_twist_word(p, index, w, direction))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("currents serialize")
    }
}

impl fmt::Display for MulticurveCurrent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·{}", c.weight, c.word)?;
        }
        Ok(())
    }
}

/// i(u, v) for every pair, in parallel; the diagonal holds self-intersections.
pub fn intersection_matrix(ix: &Intersector, words: &[Word]) -> Result<Vec<Vec<usize>>> {
    let n = words.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let counts =
        pairs.par_iter().map(|&(i, j)| ix.intersection_number(&words[i], &words[j])).collect::<Result<Vec<_>>>()?;
    let mut m = vec![vec![0; n]; n];
    for (&(i, j), c) in pairs.iter().zip(counts) {
        m[i][j] = c;
        m[j][i] = c;
    }
    Ok(m)
}

/// i(μ, ν) = Σ cᵢ dⱼ i(γᵢ, δⱼ).
pub fn pair(ix: &Intersector, mu: &MulticurveCurrent, nu: &MulticurveCurrent) -> Result<f64> {
    let terms: Vec<(&Component, &Component)> =
        mu.components.iter().flat_map(|a| nu.components.iter().map(move |b| (a, b))).collect();
    let values = terms
        .par_iter()
        .map(|(a, b)| Ok(a.weight * b.weight * ix.intersection_number(&a.word, &b.word)? as f64))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.iter().sum())
}

/// i(μ, μ) = Σ cᵢ² i(γᵢ, γᵢ) + 2 Σ_{i<j} cᵢ cⱼ i(γᵢ, γⱼ).
pub fn self_pair(ix: &Intersector, mu: &MulticurveCurrent) -> Result<f64> {
    let m = intersection_matrix(ix, &mu.classes())?;
    let c: Vec<f64> = mu.components.iter().map(|x| x.weight).collect();
    let mut total = 0.0;
    for i in 0..c.len() {
        total += c[i] * c[i] * m[i][i] as f64;
        for j in i + 1..c.len() {
            total += 2.0 * c[i] * c[j] * m[i][j] as f64;
        }
    }
    Ok(total)
}

/// ℓ_X(μ) = Σ cᵢ ℓ_X(γᵢ).
pub fn current_length(r: &Representation, mu: &MulticurveCurrent) -> Result<f64> {
    mu.components.iter().map(|c| Ok(c.weight * r.geodesic_length(&c.word)?)).sum()
}

/// min over the pool of i(μ, α), with the first minimizing class. An upper
/// bound on the systole.
pub fn systole_estimate(ix: &Intersector, mu: &MulticurveCurrent, pool: &[Word]) -> Result<(f64, Word)> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let values = pool
        .par_iter()
        .map(|alpha| {
            mu.components
                .iter()
                .map(|c| Ok(c.weight * ix.intersection_number(&c.word, alpha)? as f64))
                .sum::<Result<f64>>()
        })
        .collect::<Result<Vec<f64>>>()?;
    let (k, v) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("pool is not empty");
    Ok((*v, pool[k].clone()))
}

/// Simple classes of word length ≤ `max_len`, one word per class.
///
/// Distinct canonical words can name the same class through the relator;
/// they are merged when their lengths agree at two unrelated structures,
/// keeping the shortest word. On genus 2 the hyperelliptic involution makes
/// some distinct non-simple classes isometric at every structure, but it
/// fixes every simple class, so the simple pool is unaffected.
pub fn simple_pool(ix: &Intersector, max_len: usize) -> Result<Vec<Word>> {
    let p = ix.representation().presentation().clone();
    let n = p.pants_count();
    let other = build_representation(
        &p,
        &FnCoordinates::new(
            (0..n).map(|k| 1.7 - 0.13 * k as f64).collect(),
            (0..n).map(|k| -0.45 + 0.21 * k as f64).collect(),
        ),
    )?;
    let mut seen: HashMap<(i64, i64), ()> = HashMap::new();
    let mut unique = Vec::new();
    for w in enumerate_classes(&p, max_len) {
        let key = |r: &Representation| -> Result<i64> { Ok((r.geodesic_length(&w)? * 1e8).round() as i64) };
        if seen.insert((key(ix.representation())?, key(&other)?), ()).is_none() {
            unique.push(w);
        }
    }
    let simple = unique.par_iter().map(|w| ix.self_intersection(w).map(|k| k == 0)).collect::<Result<Vec<bool>>>()?;
    Ok(unique.into_iter().zip(simple).filter(|(_, s)| *s).map(|(w, _)| w).collect())
}

/// The 4-valent graph formed by the union of the component geodesics,
/// embedded with the rotation system read off the crossing signs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingGraph {
    pub vertices: usize,
    pub edges: usize,
    /// Boundary cycles of the ribbon graph.
    pub faces: usize,
    pub connected: bool,
    /// A component crossing nothing, if any.
    pub isolated: Option<Word>,
}

impl CrossingGraph {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }

    /// The complement is a union of disks.
    pub fn is_cellular(&self, genus: usize) -> bool {
        self.connected && self.isolated.is_none() && self.euler_characteristic() == 2 - 2 * genus as i64
    }
}

/// A branch through a crossing: the curve, the position along it, and
/// which pair of slots (0/2 or 1/3) it occupies. Occurrences come in pairs
/// `2k`, `2k + 1` sharing vertex `k`.
struct Occurrence {
    curve: usize,
    at: f64,
    vertex: usize,
    forward_slot: usize,
    /// Angle from this branch to the other one.
    angle: f64,
    /// The passage of the curve through the (possibly concurrent) point.
    strand: usize,
}

/// Splits the occurrences along one curve, sorted by position, into runs
/// closer than `CROSSING_SEPARATION`, in cyclic order.
fn concurrent_runs(along: &[usize], occ: &[Occurrence], length: f64) -> Vec<Vec<usize>> {
    let n = along.len();
    let gap = |m: usize| {
        let (a, b) = (occ[along[m]].at, occ[along[(m + 1) % n]].at);
        if m + 1 == n {
            b + length - a
        } else {
            b - a
        }
    };
    let Some(cut) = (0..n).find(|&m| gap(m) >= CROSSING_SEPARATION) else {
        return vec![along.to_vec()];
    };
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    for step in 1..=n {
        let m = (cut + step) % n;
        current.push(along[m]);
        if gap(m) >= CROSSING_SEPARATION {
            runs.push(std::mem::take(&mut current));
        }
    }
    runs
}

/// Two lines through the origin pushed left by `own` and `other`, the second
/// at `angle` from the first: where they cross, along the first.
fn pushed_crossing(own: f64, other: f64, angle: f64) -> f64 {
    (own * angle.cos() - other) / angle.sin()
}

/// Orders the crossings at one concurrent point as they occur once every
/// strand is pushed to its left by its own small offset. Every pair still
/// crosses once with the same sign, so the resolution adds a small disk and
/// keeps the topology of the complement.
fn resolve_run(run: &mut [usize], occ: &[Occurrence]) {
    if run.len() < 2 {
        return;
    }
    let offset = |strand: usize| 0.1 + ((strand as f64 + 1.0) * 0.618_033_988_749_895).fract();
    let along = |k: usize| {
        let (o, other) = (&occ[k], &occ[k ^ 1]);
        pushed_crossing(offset(o.strand), offset(other.strand), o.angle)
    };
    run.sort_by(|&a, &b| along(a).total_cmp(&along(b)));
}

pub fn crossing_graph(ix: &Intersector, mu: &MulticurveCurrent) -> Result<CrossingGraph> {
    let words = mu.classes();
    let n = words.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let found = pairs.par_iter().map(|&(i, j)| ix.crossings(&words[i], &words[j])).collect::<Result<Vec<_>>>()?;

    // slots around a vertex, counterclockwise: first branch forward, second
    // branch forward (or backward when the crossing is negative), first
    // backward, second backward (or forward)
    let mut occ: Vec<Occurrence> = Vec::new();
    for (&(i, j), list) in pairs.iter().zip(&found) {
        let points = if i == j { pair_branches(list, 0)? } else { list.clone() };
        for c in points {
            let vertex = occ.len() / 2;
            let second = if c.sign > 0 { 1 } else { 3 };
            occ.push(Occurrence { curve: i, at: c.along_u, vertex, forward_slot: 0, angle: c.angle, strand: 0 });
            occ.push(Occurrence { curve: j, at: c.along_v, vertex, forward_slot: second, angle: -c.angle, strand: 0 });
        }
    }
    let vertices = occ.len() / 2;

    let mut isolated = None;
    let mut runs_by_curve = Vec::with_capacity(n);
    let mut strands = 0;
    for (k, w) in words.iter().enumerate() {
        let mut along: Vec<usize> = (0..occ.len()).filter(|&o| occ[o].curve == k).collect();
        if along.is_empty() {
            isolated.get_or_insert_with(|| w.clone());
            runs_by_curve.push(Vec::new());
            continue;
        }
        along.sort_by(|&a, &b| occ[a].at.total_cmp(&occ[b].at));
        let length = ix.representation().geodesic_length(w)?;
        let runs = concurrent_runs(&along, &occ, length);
        for run in &runs {
            for &o in run {
                occ[o].strand = strands;
            }
            strands += 1;
        }
        runs_by_curve.push(runs);
    }

    // half-edge (vertex, slot) -> the half-edge at the other end of its edge
    let mut partner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn root(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for runs in &mut runs_by_curve {
        for run in runs.iter_mut() {
            resolve_run(run, &occ);
        }
        let order: Vec<&Occurrence> = runs.iter().flatten().map(|&o| &occ[o]).collect();
        for m in 0..order.len() {
            let (a, b) = (order[m], order[(m + 1) % order.len()]);
            let out = (a.vertex, a.forward_slot);
            let back = (b.vertex, (b.forward_slot + 2) % 4);
            partner.insert(out, back);
            partner.insert(back, out);
            let (ra, rb) = (root(&mut parent, a.vertex), root(&mut parent, b.vertex));
            parent[ra] = rb;
        }
    }
    let roots: std::collections::HashSet<usize> = (0..vertices).map(|v| root(&mut parent, v)).collect();

    // faces are the orbits of "cross the edge, then turn to the next slot"
    let mut visited: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    let mut faces = 0;
    for v in 0..vertices {
        for s in 0..4 {
            if visited.contains(&(v, s)) {
                continue;
            }
            faces += 1;
            let mut h = (v, s);
            while visited.insert(h) {
                let (w, t) = partner[&h];
                h = (w, (t + 1) % 4);
            }
        }
    }
    Ok(CrossingGraph { vertices, edges: 2 * vertices, faces, connected: roots.len() <= 1, isolated })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FillingWitness {
    /// Smallest i(μ, α) over the pool, with the minimizing class.
    PoolSystole { value: f64, argmin: Word },
    /// A simple class meeting no component.
    DisjointClass { class: Word },
    /// The complement of the union is not a union of disks.
    NonCellular { euler_characteristic: i64, expected: i64, connected: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FillingVerdict {
    pub filling: bool,
    pub witness: FillingWitness,
}

/// Exact test: μ fills iff the union of its geodesics cuts the surface into
/// disks. The pool supplies the systole (when filling) or a disjoint class
/// (when one exists) as the witness.
pub fn filling_check(ix: &Intersector, mu: &MulticurveCurrent, pool: &[Word]) -> Result<FillingVerdict> {
    let genus = ix.representation().presentation().genus();
    let g = crossing_graph(ix, mu)?;
    if let Some(class) = g.isolated.clone() {
        return Ok(FillingVerdict { filling: false, witness: FillingWitness::DisjointClass { class } });
    }
    if g.is_cellular(genus) {
        let (value, argmin) = systole_estimate(ix, mu, pool)?;
        if value <= 0.0 {
            return Err(Error::DegenerateCrossing(format!("cellular complement but {argmin} misses every component")));
        }
        return Ok(FillingVerdict { filling: true, witness: FillingWitness::PoolSystole { value, argmin } });
    }
    if !pool.is_empty() {
        let (value, argmin) = systole_estimate(ix, mu, pool)?;
        if value == 0.0 {
            return Ok(FillingVerdict { filling: false, witness: FillingWitness::DisjointClass { class: argmin } });
        }
    }
    Ok(FillingVerdict {
        filling: false,
        witness: FillingWitness::NonCellular {
            euler_characteristic: g.euler_characteristic(),
            expected: 2 - 2 * genus as i64,
            connected: g.connected,
        },
    })
}

/// Whether μ fills, without a pool witness.
pub fn fills(ix: &Intersector, mu: &MulticurveCurrent) -> Result<bool> {
    let genus = ix.representation().presentation().genus();
    Ok(crossing_graph(ix, mu)?.is_cellular(genus))
}
