//! The length-minimizing point π(μ) in Teichmüller space.
//!
//! F(X) = ℓ_X(μ) is minimized over Fenchel–Nielsen coordinates with the
//! lengths taken in log scale, by BFGS on central-difference gradients with
//! a backtracking line search. A trial point where the representation
//! cannot be built is treated as a rejected step.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::currents::{current_length, fills, MulticurveCurrent};
use crate::error::{Error, Result};
use crate::group::{canonical_class, Automorphism, SurfacePresentation, Word};
use crate::holonomy::{build_representation, FnCoordinates, Representation};
use crate::intersection::Intersector;

/// Sufficient decrease constant of the line search.
const ARMIJO: f64 = 1e-4;
/// Longest step in any coordinate (log-lengths and twists alike).
const MAX_STEP: f64 = 2.0;
/// Per-coordinate agreement demanded of equivariant minimizers.
pub const EQUIVARIANCE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub tol_g: f64,
    /// Relative finite-difference step.
    pub h_fd: f64,
    pub max_iter: usize,
    pub eps_degenerate: f64,
    pub restarts: usize,
    /// Seed for restart points.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { tol_g: 1e-8, h_fd: 1e-5, max_iter: 2000, eps_degenerate: 1e-3, restarts: 3, seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.tol_g > 0.0 && self.h_fd > 0.0 && self.max_iter > 0 && self.eps_degenerate > 0.0;
        if !ok {
            return Err(Error::InvalidConfig(format!("optimizer settings must be positive: {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    NoMinimizer,
    IterationCap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub iteration: usize,
    pub length: f64,
    pub gradient_norm: f64,
    pub coordinates: FnCoordinates,
}

/// A simple class that became shorter than `eps_degenerate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Degeneration {
    pub class: Word,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartRecord {
    pub start: FnCoordinates,
    pub status: Status,
    pub minimizer: Option<FnCoordinates>,
    pub min_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionResult {
    pub status: Status,
    pub minimizer: Option<FnCoordinates>,
    pub min_length: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub trajectory: Vec<TrajectoryPoint>,
    pub degeneration: Option<Degeneration>,
    /// One row per start, the primary start first.
    pub restarts: Vec<RestartRecord>,
    /// Largest coordinate difference between converged restarts.
    pub dispersion: f64,
    /// Generator images of the marking the coordinates refer to, when it is
    /// not the standard one.
    pub chart: Option<Vec<Word>>,
}

impl ProjectionResult {
    /// Trajectory rows `iter,F,grad_norm,coords...`.
    pub fn trajectory_csv(&self) -> String {
        let mut out = String::from("iter,F,grad_norm,fn_coords\n");
        for t in &self.trajectory {
            let coords: Vec<String> = t.coordinates.to_flat().iter().map(|x| format!("{x:.17e}")).collect();
            out.push_str(&format!("{},{:.17e},{:.6e},{}\n", t.iteration, t.length, t.gradient_norm, coords.join(",")));
        }
        out
    }
}

struct Objective<'a> {
    p: &'a SurfacePresentation,
    mu: &'a MulticurveCurrent,
    n: usize,
}

impl Objective<'_> {
    fn coordinates(&self, y: &[f64]) -> FnCoordinates {
        FnCoordinates::new(y[..self.n].iter().map(|v| v.exp()).collect(), y[self.n..].to_vec())
    }

    fn unknowns(x: &FnCoordinates) -> Vec<f64> {
        x.lengths.iter().map(|l| l.ln()).chain(x.twists.iter().copied()).collect()
    }

    fn build(&self, y: &[f64]) -> Option<Representation> {
        if y.iter().any(|v| !v.is_finite()) {
            return None;
        }
        build_representation(self.p, &self.coordinates(y)).ok()
    }

    fn value(&self, y: &[f64]) -> Option<f64> {
        current_length(&self.build(y)?, self.mu).ok()
    }

    /// Fourth-order central differences; the plain central or one-sided
    /// quotient where a probe cannot be built.
    fn gradient(&self, y: &[f64], f: f64, h: f64) -> Option<Vec<f64>> {
        (0..y.len())
            .into_par_iter()
            .map(|i| {
                let step = h * y[i].abs().max(1.0);
                let probe = |k: f64| {
                    let mut z = y.to_vec();
                    z[i] += k * step;
                    self.value(&z)
                };
                let (p1, m1) = (probe(1.0), probe(-1.0));
                match (p1, m1) {
                    (Some(a), Some(b)) => match (probe(2.0), probe(-2.0)) {
                        (Some(a2), Some(b2)) => Some((8.0 * (a - b) - (a2 - b2)) / (12.0 * step)),
                        _ => Some((a - b) / (2.0 * step)),
                    },
                    (Some(a), None) => Some((a - f) / step),
                    (None, Some(b)) => Some((f - b) / step),
                    (None, None) => None,
                }
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// Inverse-Hessian BFGS update.
fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64]) {
    let sy = dot(s, y);
    if !(sy > 1e-14 * norm(s) * norm(y)) {
        return;
    }
    let n = s.len();
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i], y)).collect();
    let yhy = dot(y, &hy);
    let r = 1.0 / sy;
    for i in 0..n {
        for j in 0..n {
            h[i][j] += (1.0 + yhy * r) * r * s[i] * s[j] - r * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}

/// Shortest watched class at `r`: every pants curve, then `watch`.
fn shortest(p: &SurfacePresentation, r: &Representation, watch: &[Word]) -> Option<Degeneration> {
    let coords = r.source();
    let mut best: Option<Degeneration> = None;
    let mut consider = |class: &Word, length: f64| {
        if best.as_ref().is_none_or(|b| length < b.length) {
            best = Some(Degeneration { class: class.clone(), length });
        }
    };
    for (w, &l) in p.pants_curves().iter().zip(&coords.lengths) {
        consider(w, l);
    }
    for w in watch {
        if let Ok(l) = r.geodesic_length(w) {
            consider(w, l);
        }
    }
    best
}

/// Near the minimum F is flat to rounding and the sufficient-decrease test
/// cannot see progress; a step that keeps F from rising and shrinks the
/// gradient is taken instead.
fn polish(
    obj: &Objective,
    y: &[f64],
    f: f64,
    g: &[f64],
    d: &[f64],
    h: f64,
) -> Option<(Vec<f64>, f64, Option<Vec<f64>>)> {
    let mut t = 1.0;
    for _ in 0..12 {
        let trial: Vec<f64> = y.iter().zip(d).map(|(a, b)| a + t * b).collect();
        if let Some(ft) = obj.value(&trial) {
            if ft <= f {
                if let Some(gt) = obj.gradient(&trial, ft, h) {
                    if norm(&gt) < norm(g) {
                        return Some((trial, ft, Some(gt)));
                    }
                }
            }
        }
        t *= 0.5;
    }
    None
}

/// One descent from `start`. Stops with `NoMinimizer` as soon as a watched
/// simple class (every pants curve, plus `watch`) is shorter than
/// `eps_degenerate` while the objective has decreased at every step.
pub fn descend(
    p: &SurfacePresentation,
    mu: &MulticurveCurrent,
    cfg: &OptimizerConfig,
    start: &FnCoordinates,
    watch: &[Word],
) -> Result<ProjectionResult> {
    cfg.validate()?;
    start.validate(p)?;
    let obj = Objective { p, mu, n: p.pants_count() };
    let mut y = Objective::unknowns(start);
    let mut f =
        obj.value(&y).ok_or_else(|| Error::ConstructionFailure(format!("objective undefined at start {start:?}")))?;
    let mut g = obj
        .gradient(&y, f, cfg.h_fd)
        .ok_or_else(|| Error::ConstructionFailure("gradient undefined at start".into()))?;
    let mut h = identity(y.len());
    let mut trajectory =
        vec![TrajectoryPoint { iteration: 0, length: f, gradient_norm: norm(&g), coordinates: obj.coordinates(&y) }];
    let mut status = Status::IterationCap;
    let mut degeneration = None;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        if norm(&g) <= cfg.tol_g * (1.0 + f) {
            status = Status::Converged;
            break;
        }
        let n = y.len();
        let mut d: Vec<f64> = (0..n).map(|i| -dot(&h[i], &g)).collect();
        if dot(&d, &g) >= 0.0 {
            h = identity(n);
            d = g.iter().map(|v| -v).collect();
        }
        let longest = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if longest > MAX_STEP {
            d.iter_mut().for_each(|v| *v *= MAX_STEP / longest);
        }
        let slope = dot(&d, &g);
        let mut accepted = None;
        let mut t = 1.0;
        for _ in 0..60 {
            let trial: Vec<f64> = y.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            if let Some(ft) = obj.value(&trial) {
                if ft < f && ft <= f + ARMIJO * t * slope {
                    accepted = Some((trial, ft, None));
                    break;
                }
            }
            t *= 0.5;
        }
        if accepted.is_none() {
            accepted = polish(&obj, &y, f, &g, &d, cfg.h_fd);
        }
        let Some((y_new, f_new, g_new)) = accepted else {
            if h != identity(n) {
                // the curvature model went stale; retry along the gradient
                h = identity(n);
                continue;
            }
            // no progress along the gradient either: inconclusive start
            break;
        };
        let Some(g_new) = g_new.or_else(|| obj.gradient(&y_new, f_new, cfg.h_fd)) else {
            break;
        };
        let s: Vec<f64> = y_new.iter().zip(&y).map(|(a, b)| a - b).collect();
        let dg: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        bfgs_update(&mut h, &s, &dg);
        y = y_new;
        f = f_new;
        g = g_new;
        iterations += 1;
        trajectory.push(TrajectoryPoint {
            iteration: iterations,
            length: f,
            gradient_norm: norm(&g),
            coordinates: obj.coordinates(&y),
        });

        // a short class witnesses divergence only while F strictly falls
        let falling = trajectory.windows(2).all(|w| w[1].length < w[0].length);
        if let Some(r) = obj.build(&y).filter(|_| falling) {
            if let Some(short) = shortest(p, &r, watch) {
                if short.length < cfg.eps_degenerate {
                    degeneration = Some(short);
                    status = Status::NoMinimizer;
                    break;
                }
            }
        }
    }
    let gradient_norm = norm(&g);
    let minimizer = (status == Status::Converged).then(|| obj.coordinates(&y));
    let record = RestartRecord { start: start.clone(), status, minimizer: minimizer.clone(), min_length: f };
    Ok(ProjectionResult {
        status,
        minimizer,
        min_length: f,
        gradient_norm,
        iterations,
        trajectory,
        degeneration,
        restarts: vec![record],
        dispersion: 0.0,
        chart: None,
    })
}

/// Restart points: log-uniform lengths in [0.3, 3], twists in [-2, 2].
pub fn restart_points(p: &SurfacePresentation, count: usize, seed: u64) -> Vec<FnCoordinates> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.pants_count();
    (0..count)
        .map(|_| {
            let lengths = (0..n).map(|_| rng.gen_range(0.3f64.ln()..3.0f64.ln()).exp()).collect();
            let twists = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            FnCoordinates::new(lengths, twists)
        })
        .collect()
}

/// Descends from `start` and from `cfg.restarts` seeded points without
/// checking that μ fills. Returns the lowest converged run, with every run
/// in `restarts`.
pub fn project_unchecked(
    p: &SurfacePresentation,
    mu: &MulticurveCurrent,
    cfg: &OptimizerConfig,
    start: &FnCoordinates,
    watch: &[Word],
) -> Result<ProjectionResult> {
    let mut starts = vec![start.clone()];
    starts.extend(restart_points(p, cfg.restarts, cfg.seed));
    let runs = starts.par_iter().map(|s| descend(p, mu, cfg, s, watch)).collect::<Result<Vec<_>>>()?;
    let records: Vec<RestartRecord> = runs.iter().map(|r| r.restarts[0].clone()).collect();
    let best = runs
        .iter()
        .enumerate()
        .filter(|(_, r)| r.status == Status::Converged)
        .min_by(|a, b| a.1.min_length.total_cmp(&b.1.min_length))
        .map(|(k, _)| k);
    let mut out = match best {
        Some(k) => runs[k].clone(),
        None => runs.iter().find(|r| r.status == Status::NoMinimizer).unwrap_or(&runs[0]).clone(),
    };
    out.chart = None;
    out.dispersion = match &out.minimizer {
        Some(x) => records.iter().filter_map(|r| r.minimizer.as_ref()).map(|m| m.max_abs_diff(x)).fold(0.0, f64::max),
        None => 0.0,
    };
    out.restarts = records;
    Ok(out)
}

/// π(μ) for a filling μ; `NonFillingInput` otherwise.
pub fn project(
    ix: &Intersector,
    mu: &MulticurveCurrent,
    cfg: &OptimizerConfig,
    start: &FnCoordinates,
) -> Result<ProjectionResult> {
    if !fills(ix, mu)? {
        return Err(Error::NonFillingInput);
    }
    project_unchecked(ix.representation().presentation(), mu, cfg, start, &[])
}

/// States explored when looking for an adapted marking.
const CHART_BUDGET: usize = 20_000;

/// A change of marking under which as many of `classes` as possible are
/// pants curves, shortest images first.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub automorphism: Automorphism,
    /// How many classes land on pants curves.
    pub on_pants: usize,
}

pub fn adapted_chart(p: &SurfacePresentation, classes: &[Word]) -> Result<Chart> {
    let pants: HashSet<Word> = p.pants_curves().iter().map(canonical_class).collect::<Result<_>>()?;
    let moves = p.elementary_automorphisms();
    let score = |images: &[Word]| images.iter().filter(|w| pants.contains(*w)).count();
    let start = Automorphism::identity(p);
    let images: Vec<Word> = classes.iter().map(canonical_class).collect::<Result<_>>()?;
    let weight = |images: &[Word]| images.iter().map(Word::len).sum::<usize>();
    let mut best = (score(&images), Reverse(weight(&images)), 0usize);
    let mut seen: HashSet<Vec<Word>> = HashSet::new();
    let mut queue = BinaryHeap::new();
    let mut key = images.clone();
    key.sort();
    seen.insert(key);
    queue.push(Reverse((weight(&images), 0usize)));
    let mut states = vec![(start, images)];
    while let Some(Reverse((_, at))) = queue.pop() {
        if best.0 == classes.len() || states.len() > CHART_BUDGET {
            break;
        }
        for m in &moves {
            let next = states[at].0.then(m);
            let images: Vec<Word> = states[at].1.iter().map(|w| m.apply_class(w)).collect::<Result<_>>()?;
            let mut key = images.clone();
            key.sort();
            if !seen.insert(key) {
                continue;
            }
            let rank = (score(&images), Reverse(weight(&images)), states.len());
            if (rank.0, rank.1) > (best.0, best.1) {
                best = rank;
            }
            queue.push(Reverse((weight(&images), states.len())));
            states.push((next, images));
        }
    }
    let automorphism = states[best.2].0.clone();
    Ok(Chart { automorphism, on_pants: best.0 })
}

/// The descent for a non-filling μ from the standard start, watching the
/// pants curves and `pool` for a class pinched below `eps_degenerate`.
///
/// Coordinates are taken in a marking where the components of μ are pants
/// curves when one is found, since pinching any other curve drives the
/// standard coordinates to infinity. Lengths and the witness class are
/// reported in the marking of μ.
pub fn detect_no_minimizer(
    p: &SurfacePresentation,
    mu: &MulticurveCurrent,
    cfg: &OptimizerConfig,
    pool: &[Word],
) -> Result<ProjectionResult> {
    let chart = adapted_chart(p, &mu.classes())?;
    if chart.automorphism.is_identity() {
        return descend(p, mu, cfg, &FnCoordinates::standard(p), pool);
    }
    let phi = &chart.automorphism;
    let moved = mu.map_classes(|w| phi.apply_class(w))?;
    let watch: Vec<Word> = pool.iter().map(|w| phi.apply_class(w)).collect::<Result<_>>()?;
    let mut out = descend(p, &moved, cfg, &FnCoordinates::standard(p), &watch)?;
    if let Some(d) = out.degeneration.as_mut() {
        d.class = phi.inverse().apply_class(&d.class)?;
    }
    out.chart = Some(phi.images().to_vec());
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivarianceReport {
    pub index: usize,
    pub times: i32,
    pub base: FnCoordinates,
    pub twisted: FnCoordinates,
    pub expected: FnCoordinates,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Compares π(Tᵢᵏ μ) with π(μ) shifted by k full twists along pants curve
/// `index`. Tᵢ is the twist whose action on curves moves π forward: raising
/// twist i by ℓᵢ is the same as applying the opposite twist to the marking.
pub fn twist_equivariance_check(
    ix: &Intersector,
    mu: &MulticurveCurrent,
    index: usize,
    times: i32,
    cfg: &OptimizerConfig,
) -> Result<EquivarianceReport> {
    let p = ix.representation().presentation();
    let start = FnCoordinates::standard(p);
    let base = project(ix, mu, cfg, &start)?;
    let base =
        base.minimizer.ok_or_else(|| Error::InvalidConfig(format!("no minimizer for {mu} ({:?})", base.status)))?;
    let mut moved = mu.clone();
    for _ in 0..times.unsigned_abs() {
        moved = moved.dehn_twist(p, index, -times.signum())?;
    }
    let twisted = project(ix, &moved, cfg, &start)?;
    let twisted = twisted
        .minimizer
        .ok_or_else(|| Error::InvalidConfig(format!("no minimizer for the twisted current ({:?})", twisted.status)))?;
    let expected = base.full_twist(index, times as f64);
    let max_deviation = twisted.max_abs_diff(&expected);
    Ok(EquivarianceReport {
        index,
        times,
        base,
        twisted,
        expected,
        max_deviation,
        passed: max_deviation <= EQUIVARIANCE_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn filling() -> MulticurveCurrent {
        MulticurveCurrent::new(["a1", "a1b1A1B1", "a2", "b1", "b2", "b1b2"].iter().map(|s| (w(s), 1.0))).unwrap()
    }

    #[test]
    fn bfgs_update_satisfies_secant() {
        let mut h = identity(2);
        let (s, y) = ([0.3, -0.1], [0.9, 0.2]);
        bfgs_update(&mut h, &s, &y);
        let hy: Vec<f64> = (0..2).map(|i| dot(&h[i], &y)).collect();
        assert!((hy[0] - s[0]).abs() < 1e-12 && (hy[1] - s[1]).abs() < 1e-12);
    }

    #[test]
    fn gradient_of_pants_lengths_is_exact() {
        let p = SurfacePresentation::new(2).unwrap();
        let mu = MulticurveCurrent::new([(w("a1"), 2.0), (w("a2"), 3.0)]).unwrap();
        let obj = Objective { p: &p, mu: &mu, n: 3 };
        let y = Objective::unknowns(&FnCoordinates::new(vec![0.7, 1.9, 2.6], vec![0.4, -1.1, 0.3]));
        let g = obj.gradient(&y, obj.value(&y).unwrap(), 1e-3).unwrap();
        let exact = [2.0 * 0.7, 0.0, 3.0 * 2.6, 0.0, 0.0, 0.0];
        for (a, b) in g.iter().zip(exact) {
            assert!((a - b).abs() < 1e-9, "{g:?}");
        }
    }

    #[test]
    fn gradient_error_decays_at_fourth_order() {
        let p = SurfacePresentation::new(2).unwrap();
        let mu = filling();
        let obj = Objective { p: &p, mu: &mu, n: 3 };
        let y = Objective::unknowns(&FnCoordinates::new(vec![1.3, 0.8, 2.1], vec![0.4, -0.9, 0.25]));
        let f = obj.value(&y).unwrap();
        let g: Vec<Vec<f64>> = [0.04, 0.02, 0.01].iter().map(|&h| obj.gradient(&y, f, h).unwrap()).collect();
        let gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        // Successive differences shrink by 2^4 for a fourth-order stencil, 2^2
        // for a second-order one.
        let ratio = gap(&g[0], &g[1]) / gap(&g[1], &g[2]);
        assert!(ratio > 10.0 && ratio < 24.0, "ratio {ratio}");
    }

    #[test]
    fn restart_points_are_seeded() {
        let p = SurfacePresentation::new(2).unwrap();
        assert_eq!(restart_points(&p, 3, 5), restart_points(&p, 3, 5));
        assert_ne!(restart_points(&p, 3, 5), restart_points(&p, 3, 6));
        for x in restart_points(&p, 20, 1) {
            assert!(x.lengths.iter().all(|l| (0.3..=3.0).contains(l)));
            assert!(x.twists.iter().all(|t| (-2.0..=2.0).contains(t)));
        }
    }

    #[test]
    fn filling_current_converges_from_every_start() {
        let p = SurfacePresentation::new(2).unwrap();
        let cfg = OptimizerConfig::default();
        let r = project_unchecked(&p, &filling(), &cfg, &FnCoordinates::standard(&p), &[]).unwrap();
        assert_eq!(r.status, Status::Converged, "{:?}", r.restarts);
        assert!(r.restarts.iter().all(|x| x.status == Status::Converged), "{:?}", r.restarts);
        assert!(r.dispersion < 1e-4, "{}", r.dispersion);
        assert!(r.gradient_norm <= cfg.tol_g * (1.0 + r.min_length));
        // accepted steps never increase F
        assert!(r.trajectory.windows(2).all(|t| t[1].length <= t[0].length));
    }

    #[test]
    fn pants_curve_pinches() {
        let p = SurfacePresentation::new(2).unwrap();
        let mu = MulticurveCurrent::single(&w("a1")).unwrap();
        let r = detect_no_minimizer(&p, &mu, &OptimizerConfig::default(), &[]).unwrap();
        assert_eq!(r.status, Status::NoMinimizer);
        assert_eq!(r.degeneration.unwrap().class, w("a1"));
    }

    #[test]
    fn rejects_non_filling_input() {
        let p = SurfacePresentation::new(2).unwrap();
        let ix = Intersector::reference(&p).unwrap();
        let mu = MulticurveCurrent::single(&w("a1")).unwrap();
        let r = project(&ix, &mu, &OptimizerConfig::default(), &FnCoordinates::standard(&p));
        assert_eq!(r, Err(Error::NonFillingInput));
    }
}
