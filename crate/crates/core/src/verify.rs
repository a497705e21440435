//! Seeded experiment runs: sampled filling currents pushed through the
//! inequality suites, with every violation kept as a witness.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::currents::{current_length, fills, self_pair, simple_pool, systole_estimate, MulticurveCurrent};
use crate::error::{Error, Result};
use crate::group::{SurfacePresentation, Word};
use crate::holonomy::{build_representation, FnCoordinates, Representation};
use crate::intersection::{Intersector, MAX_RADIUS};
use crate::projection::{
    descend, detect_no_minimizer, project_unchecked, twist_equivariance_check, OptimizerConfig, ProjectionResult,
    RestartRecord, Status,
};

/// Rejections allowed per sample before giving up.
pub const MAX_REJECTIONS: usize = 10_000;
pub const SCALES: [f64; 3] = [0.1, 3.0, 10.0];
/// Systole floor of the thick part used by the ratio report.
pub const THICK: f64 = 0.1;
const COLLAR_SLACK: f64 = 1e-9;
const BOUND_SLACK: f64 = 1e-6;
const MEDIANT_SLACK: f64 = 1e-12;
const MINIMIZER_TOL: f64 = 1e-4;
const SCALE_TOL: f64 = 1e-8;
const OPTIMALITY_SLACK: f64 = 1e-9;
const GRID_STEP: f64 = 1e-3;
const BOX: f64 = 0.05;
const BOX_SAMPLES: usize = 100;
/// Violations kept per suite.
const KEPT: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentSpec {
    pub genus: usize,
    pub seed: u64,
    pub pool_max_len: usize,
    pub sample_count: usize,
    pub optimizer: OptimizerConfig,
    pub ball_radius: usize,
    pub output_path: PathBuf,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            genus: 2,
            seed: 7,
            pool_max_len: 6,
            sample_count: 50,
            optimizer: OptimizerConfig::default(),
            ball_radius: MAX_RADIUS,
            output_path: PathBuf::from("report"),
        }
    }
}

impl ExperimentSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_str(s)?;
        spec.optimizer.validate()?;
        if spec.pool_max_len == 0 || spec.ball_radius == 0 {
            return Err(Error::InvalidConfig("pool_max_len and ball_radius must be positive".into()));
        }
        Ok(spec)
    }
}

/// A fixed surface with its reference intersector and simple pool.
pub struct Workbench {
    pub ix: Intersector,
    pub pool: Vec<Word>,
}

impl Workbench {
    pub fn new(genus: usize, pool_max_len: usize, ball_radius: usize) -> Result<Self> {
        let p = SurfacePresentation::new(genus)?;
        let reference = Intersector::reference(&p)?;
        let ix = Intersector::with_max_radius(reference.representation().clone(), ball_radius);
        let pool = simple_pool(&ix, pool_max_len)?;
        Ok(Workbench { ix, pool })
    }

    pub fn presentation(&self) -> &SurfacePresentation {
        self.ix.representation().presentation()
    }

    /// i(μ, α) for every pool class α.
    pub fn pool_pairings(&self, mu: &MulticurveCurrent) -> Result<Vec<f64>> {
        self.pool
            .par_iter()
            .map(|a| {
                mu.components()
                    .iter()
                    .map(|c| Ok(c.weight * self.ix.intersection_number(&c.word, a)? as f64))
                    .sum::<Result<f64>>()
            })
            .collect()
    }
}

/// Pants curves, every bᵢ and every bᵢbᵢ₊₁, with unit weights.
pub fn benchmark_current(p: &SurfacePresentation) -> Result<MulticurveCurrent> {
    let g = p.genus();
    let mut words: Vec<Word> = p.pants_curves().to_vec();
    for k in 1..=g {
        words.push(Word::parse(&format!("b{k}"))?);
    }
    for k in 1..g {
        words.push(Word::parse(&format!("b{k}b{}", k + 1))?);
    }
    MulticurveCurrent::new(words.into_iter().map(|w| (w, 1.0)))
}

/// Independent stream `tag` of sample `id`.
fn stream(seed: u64, id: usize, tag: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64 * 16 + tag);
    rng
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Lengths log-uniform in [0.3, 3], twists uniform in [-2, 2].
pub fn random_structure(p: &SurfacePresentation, rng: &mut ChaCha8Rng) -> FnCoordinates {
    let n = p.pants_count();
    let lengths = (0..n).map(|_| log_uniform(rng, 0.3, 3.0)).collect();
    let twists = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    FnCoordinates::new(lengths, twists)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub id: usize,
    pub current: MulticurveCurrent,
    pub rejections: usize,
}

fn draw_multicurve(rng: &mut ChaCha8Rng, pool: &[Word], count: usize) -> Result<MulticurveCurrent> {
    let mut picked: Vec<usize> = Vec::with_capacity(count);
    while picked.len() < count {
        let k = rng.gen_range(0..pool.len());
        if !picked.contains(&k) {
            picked.push(k);
        }
    }
    MulticurveCurrent::new(picked.into_iter().map(|k| (pool[k].clone(), log_uniform(rng, 0.5, 2.0))))
}

/// `count` filling currents: 3 to 6 distinct pool classes with weights
/// log-uniform in [0.5, 2], redrawn until they fill.
pub fn sample_filling(bench: &Workbench, count: usize, seed: u64) -> Result<Vec<Sample>> {
    if bench.pool.len() < 6 {
        return Err(Error::EmptyPool);
    }
    (0..count)
        .into_par_iter()
        .map(|id| {
            let mut rng = stream(seed, id, 0);
            for rejections in 0..=MAX_REJECTIONS {
                let size = rng.gen_range(3..=6);
                let current = draw_multicurve(&mut rng, &bench.pool, size)?;
                if fills(&bench.ix, &current)? {
                    return Ok(Sample { id, current, rejections });
                }
            }
            Err(Error::SamplingStarvation(MAX_REJECTIONS))
        })
        .collect()
}

/// `count` multicurves of 1 to 3 pairwise disjoint pool classes, each
/// drawn among the classes missing the ones already drawn.
pub fn sample_non_filling(bench: &Workbench, count: usize, seed: u64) -> Result<Vec<Sample>> {
    if bench.pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    (0..count)
        .into_par_iter()
        .map(|id| {
            let mut rng = stream(seed, id, 1);
            let size = rng.gen_range(1..=3);
            let mut picked = vec![bench.pool[rng.gen_range(0..bench.pool.len())].clone()];
            while picked.len() < size {
                let mut free = Vec::new();
                for w in &bench.pool {
                    let mut disjoint = !picked.contains(w);
                    for x in &picked {
                        disjoint = disjoint && bench.ix.intersection_number(w, x)? == 0;
                    }
                    if disjoint {
                        free.push(w);
                    }
                }
                if free.is_empty() {
                    break;
                }
                picked.push(free[rng.gen_range(0..free.len())].clone());
            }
            let current = MulticurveCurrent::new(picked.into_iter().map(|w| (w, log_uniform(&mut rng, 0.5, 2.0))))?;
            if fills(&bench.ix, &current)? {
                return Err(Error::InvalidCurrent(format!("disjoint simple classes {current} fill")));
            }
            Ok(Sample { id, current, rejections: 0 })
        })
        .collect()
}

/// One suite's tally. `worst_margin` is the smallest slack seen; it is
/// negative exactly when some check failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub witnesses: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult { name: name.into(), checks: 0, violations: 0, worst_margin: f64::INFINITY, witnesses: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn merge(mut self, other: SuiteResult) -> Self {
        self.checks += other.checks;
        self.violations += other.violations;
        self.worst_margin = self.worst_margin.min(other.worst_margin);
        self.witnesses.extend(other.witnesses);
        self.witnesses.truncate(KEPT);
        self
    }
}

/// Records inequalities; `negated` flips every verdict so a harness that
/// cannot fail is caught.
#[derive(Debug, Clone, Copy, Default)]
pub struct Checker {
    pub negated: bool,
}

impl Checker {
    /// Records `margin >= 0` (NaN fails).
    fn check(&self, suite: &mut SuiteResult, margin: f64, witness: impl FnOnce() -> String) {
        suite.checks += 1;
        let holds = (margin >= 0.0) != self.negated;
        let margin = if self.negated { -margin } else { margin };
        suite.worst_margin = suite.worst_margin.min(if margin.is_nan() { f64::NEG_INFINITY } else { margin });
        if !holds {
            suite.violations += 1;
            if suite.witnesses.len() < KEPT {
                suite.witnesses.push(witness());
            }
        }
    }
}

fn fold_suites(name: &str, parts: Vec<SuiteResult>) -> SuiteResult {
    parts.into_iter().fold(SuiteResult::new(name), SuiteResult::merge)
}

fn representation(p: &SurfacePresentation, x: &FnCoordinates) -> Result<Representation> {
    build_representation(p, x)
}

/// ℓ_X(μ) ≥ w(α)·i(μ, α) for every pool class α, where w(α) is the collar
/// half-width arcsinh(1/sinh(ℓ_X(α)/2)), at one random X per sample.
pub fn collar_suite(bench: &Workbench, samples: &[Sample], seed: u64, checker: Checker) -> Result<SuiteResult> {
    let p = bench.presentation();
    let parts = samples
        .par_iter()
        .map(|s| {
            let x = random_structure(p, &mut stream(seed, s.id, 2));
            let r = representation(p, &x)?;
            let total = current_length(&r, &s.current)?;
            let pairings = bench.pool_pairings(&s.current)?;
            let mut suite = SuiteResult::new("collar");
            for (alpha, &i) in bench.pool.iter().zip(&pairings) {
                let la = r.geodesic_length(alpha)?;
                let bound = (1.0 / (la / 2.0).sinh()).asinh() * i;
                checker.check(&mut suite, total - bound * (1.0 - COLLAR_SLACK), || {
                    format!("sample {} at {:?}: l(mu) = {total} < {bound} across {alpha}", s.id, x.to_flat())
                });
            }
            Ok(suite)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_suites("collar", parts))
}

/// ℓ_Y(μ)/ℓ_X(μ) ≤ max over components γ of ℓ_Y(γ)/ℓ_X(γ).
pub fn mediant_suite(bench: &Workbench, samples: &[Sample], seed: u64, checker: Checker) -> Result<SuiteResult> {
    let p = bench.presentation();
    let parts = samples
        .par_iter()
        .map(|s| {
            let mut rng = stream(seed, s.id, 3);
            let (x, y) = (random_structure(p, &mut rng), random_structure(p, &mut rng));
            let (rx, ry) = (representation(p, &x)?, representation(p, &y)?);
            let ratio = current_length(&ry, &s.current)? / current_length(&rx, &s.current)?;
            let mut worst: f64 = 0.0;
            for c in s.current.components() {
                worst = worst.max(ry.geodesic_length(&c.word)? / rx.geodesic_length(&c.word)?);
            }
            let mut suite = SuiteResult::new("mediant_lipschitz");
            checker.check(&mut suite, worst * (1.0 + MEDIANT_SLACK) - ratio, || {
                format!("sample {}: length ratio {ratio} above component ratio {worst}", s.id)
            });
            Ok(suite)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_suites("mediant_lipschitz", parts))
}

/// π(μ) of every sample, from the standard start with seeded restarts.
pub fn project_samples(bench: &Workbench, samples: &[Sample], cfg: &OptimizerConfig) -> Result<Vec<ProjectionResult>> {
    let p = bench.presentation();
    let start = FnCoordinates::standard(p);
    samples
        .par_iter()
        .map(|s| {
            let cfg = OptimizerConfig { seed: cfg.seed.wrapping_add(s.id as u64), ..cfg.clone() };
            project_unchecked(p, &s.current, &cfg, &start, &[])
        })
        .collect()
}

fn status_margin(r: &ProjectionResult) -> f64 {
    if r.status == Status::Converged {
        0.0
    } else {
        -1.0
    }
}

/// ℓ_{π(μ)}(μ) ≤ 4√(2|χ|)·√i(μ, μ).
pub fn length_bound_suite(
    bench: &Workbench,
    samples: &[Sample],
    projected: &[ProjectionResult],
    checker: Checker,
) -> Result<SuiteResult> {
    let chi = bench.presentation().euler_characteristic().unsigned_abs() as f64;
    let constant = 4.0 * (2.0 * chi).sqrt();
    let mut suite = SuiteResult::new("minimal_length_bound");
    for (s, r) in samples.iter().zip(projected) {
        let bound = constant * self_pair(&bench.ix, &s.current)?.sqrt() + BOUND_SLACK;
        let margin = if r.status == Status::Converged { bound - r.min_length } else { -1.0 };
        checker.check(&mut suite, margin, || {
            format!("sample {}: min length {} against bound {bound} ({:?})", s.id, r.min_length, r.status)
        });
    }
    Ok(suite)
}

/// Every start converges, and the minimizers agree per coordinate.
pub fn restart_suite(samples: &[Sample], projected: &[ProjectionResult], checker: Checker) -> SuiteResult {
    let mut suite = SuiteResult::new("restart_uniqueness");
    for (s, r) in samples.iter().zip(projected) {
        let all = r.restarts.iter().all(|x| x.status == Status::Converged);
        let margin = if all { MINIMIZER_TOL - r.dispersion } else { -1.0 };
        checker.check(&mut suite, margin, || {
            let statuses: Vec<Status> = r.restarts.iter().map(|x| x.status).collect();
            format!("sample {}: dispersion {} with statuses {statuses:?}", s.id, r.dispersion)
        });
    }
    suite
}

/// π(tμ) = π(μ) and ℓ_{π(tμ)}(tμ) = t·ℓ_{π(μ)}(μ).
pub fn scale_suite(
    bench: &Workbench,
    samples: &[Sample],
    projected: &[ProjectionResult],
    cfg: &OptimizerConfig,
    checker: Checker,
) -> Result<SuiteResult> {
    let p = bench.presentation();
    let start = FnCoordinates::standard(p);
    let parts = samples
        .par_iter()
        .zip(projected)
        .map(|(s, base)| {
            let mut suite = SuiteResult::new("scale_invariance");
            for t in SCALES {
                let scaled = project_unchecked(p, &s.current.scaled(t)?, cfg, &start, &[])?;
                let (moved, rel) = match (&base.minimizer, &scaled.minimizer) {
                    (Some(a), Some(b)) => (a.max_abs_diff(b), (scaled.min_length / (t * base.min_length) - 1.0).abs()),
                    _ => (f64::INFINITY, f64::INFINITY),
                };
                checker.check(&mut suite, (MINIMIZER_TOL - moved).min(SCALE_TOL - rel), || {
                    format!("sample {} at t = {t}: minimizer moved {moved}, length off by {rel}", s.id)
                });
            }
            Ok(suite)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_suites("scale_invariance", parts))
}

/// No point of the grid of step 1e-3 around π(μ), nor of 100 random points
/// in a box of half-width 0.05, is lower than the minimum.
pub fn optimality_suite(
    bench: &Workbench,
    samples: &[Sample],
    projected: &[ProjectionResult],
    seed: u64,
    checker: Checker,
) -> Result<SuiteResult> {
    let p = bench.presentation();
    let parts = samples
        .par_iter()
        .zip(projected)
        .map(|(s, r)| {
            let mut suite = SuiteResult::new("optimality");
            let Some(x) = &r.minimizer else {
                checker.check(&mut suite, status_margin(r), || format!("sample {}: {:?}", s.id, r.status));
                return Ok(suite);
            };
            let centre = x.to_flat();
            let dim = centre.len();
            let mut probes: Vec<Vec<f64>> = Vec::new();
            if dim <= 8 {
                for code in 0..3usize.pow(dim as u32) {
                    let mut c = code;
                    probes.push(
                        centre
                            .iter()
                            .map(|v| {
                                let d = (c % 3) as f64 - 1.0;
                                c /= 3;
                                v + d * GRID_STEP
                            })
                            .collect(),
                    );
                }
            } else {
                for k in 0..dim {
                    for d in [-GRID_STEP, GRID_STEP] {
                        let mut y = centre.clone();
                        y[k] += d;
                        probes.push(y);
                    }
                }
            }
            let mut rng = stream(seed, s.id, 4);
            for _ in 0..BOX_SAMPLES {
                probes.push(centre.iter().map(|v| v + rng.gen_range(-BOX..BOX)).collect());
            }
            for y in probes {
                let y = FnCoordinates::from_flat(&y)?;
                if y.validate(p).is_err() {
                    continue;
                }
                let value = current_length(&representation(p, &y)?, &s.current)?;
                checker.check(&mut suite, value - r.min_length + OPTIMALITY_SLACK, || {
                    format!("sample {}: {value} at {:?} below {}", s.id, y.to_flat(), r.min_length)
                });
            }
            Ok(suite)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_suites("optimality", parts))
}

/// Non-filling samples must pinch a watched class below `eps_degenerate`
/// with F strictly decreasing; filling controls started at random points
/// must never report `NoMinimizer`.
pub fn divergence_suite(
    bench: &Workbench,
    non_filling: &[Sample],
    controls: &[Sample],
    cfg: &OptimizerConfig,
    seed: u64,
    checker: Checker,
) -> Result<SuiteResult> {
    let p = bench.presentation();
    let pinched = non_filling
        .par_iter()
        .map(|s| {
            let r = detect_no_minimizer(p, &s.current, cfg, &bench.pool)?;
            let decreasing = r.trajectory.windows(2).all(|w| w[1].length < w[0].length);
            let witness = r.degeneration.as_ref().map_or(f64::INFINITY, |d| d.length);
            let ok = r.status == Status::NoMinimizer && decreasing && witness < cfg.eps_degenerate;
            let mut suite = SuiteResult::new("divergence");
            checker.check(&mut suite, if ok { cfg.eps_degenerate - witness } else { -1.0 }, || {
                format!("sample {} ({}): {:?}, witness {witness}, decreasing {decreasing}", s.id, s.current, r.status)
            });
            Ok(suite)
        })
        .collect::<Result<Vec<_>>>()?;
    let control = controls
        .par_iter()
        .map(|s| {
            let start = random_structure(p, &mut stream(seed, s.id, 5));
            let r = descend(p, &s.current, cfg, &start, &bench.pool)?;
            let mut suite = SuiteResult::new("divergence");
            checker.check(&mut suite, if r.status == Status::NoMinimizer { -1.0 } else { 0.0 }, || {
                format!("control {} ({}) reported {:?}", s.id, s.current, r.degeneration)
            });
            Ok(suite)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_suites("divergence", pinched.into_iter().chain(control).collect()))
}

/// π(Tᵢᵏμ) against π(μ) shifted by k full twists, for every pants curve and
/// k ∈ {1, 2}.
pub fn twist_suite(
    bench: &Workbench,
    mu: &MulticurveCurrent,
    cfg: &OptimizerConfig,
    checker: Checker,
) -> Result<SuiteResult> {
    let cases: Vec<(usize, i32)> = (0..bench.presentation().pants_count()).flat_map(|i| [(i, 1), (i, 2)]).collect();
    let parts = cases
        .par_iter()
        .map(|&(i, k)| {
            let report = twist_equivariance_check(&bench.ix, mu, i, k, cfg)?;
            let mut suite = SuiteResult::new("twist_equivariance");
            checker.check(&mut suite, MINIMIZER_TOL - report.max_deviation, || {
                format!("twist index {i}, {k} times: deviation {}", report.max_deviation)
            });
            Ok(suite)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_suites("twist_equivariance", parts))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub id: usize,
    pub current: String,
    pub status: Status,
    pub sys_estimate: f64,
    pub sys_argmin: String,
    pub sqrt_self_pair: f64,
    pub min_length: f64,
    pub sys_ratio: f64,
    pub length_ratio: f64,
    /// Shortest pants or pool curve at π(μ).
    pub pi_systole: f64,
    pub pi_systole_class: String,
    pub thick: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    pub restarts: Vec<Vec<RestartRecord>>,
    /// Smallest and largest ratio over thick rows.
    pub c1: Option<f64>,
    pub c2: Option<f64>,
}

impl RatioReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// sys(μ)/√i(μ, μ) and ℓ_{π(μ)}(μ)/√i(μ, μ) per sample; rows whose π(μ)
/// is `THICK`-thick bound the summary.
pub fn ratio_report(bench: &Workbench, samples: &[Sample], projected: &[ProjectionResult]) -> Result<RatioReport> {
    let p = bench.presentation();
    let rows = samples
        .par_iter()
        .zip(projected)
        .map(|(s, r)| {
            let (sys, argmin) = systole_estimate(&bench.ix, &s.current, &bench.pool)?;
            let root = self_pair(&bench.ix, &s.current)?.sqrt();
            let (pi_systole, pi_class) = match &r.minimizer {
                Some(x) => {
                    let rep = representation(p, x)?;
                    let mut best = (f64::INFINITY, String::new());
                    for w in p.pants_curves().iter().chain(&bench.pool) {
                        let l = rep.geodesic_length(w)?;
                        if l < best.0 {
                            best = (l, w.to_string());
                        }
                    }
                    best
                }
                None => (f64::NAN, String::new()),
            };
            Ok(RatioRow {
                id: s.id,
                current: s.current.to_string(),
                status: r.status,
                sys_estimate: sys,
                sys_argmin: argmin.to_string(),
                sqrt_self_pair: root,
                min_length: r.min_length,
                sys_ratio: sys / root,
                length_ratio: r.min_length / root,
                pi_systole,
                pi_systole_class: pi_class,
                thick: r.status == Status::Converged && pi_systole >= THICK,
            })
        })
        .collect::<Result<Vec<RatioRow>>>()?;
    let thick: Vec<f64> = rows.iter().filter(|r| r.thick).flat_map(|r| [r.sys_ratio, r.length_ratio]).collect();
    let c1 = thick.iter().copied().reduce(f64::min);
    let c2 = thick.iter().copied().reduce(f64::max);
    Ok(RatioReport { rows, restarts: projected.iter().map(|r| r.restarts.clone()).collect(), c1, c2 })
}

/// Thick rows must have finite ratios bounded away from zero.
pub fn ratio_suite(report: &RatioReport, checker: Checker) -> SuiteResult {
    let mut suite = SuiteResult::new("ratio_bounds");
    for row in report.rows.iter().filter(|r| r.thick) {
        let low = row.sys_ratio.min(row.length_ratio);
        let margin = if row.sys_ratio.is_finite() && row.length_ratio.is_finite() { low } else { -1.0 };
        checker.check(&mut suite, margin, || {
            format!("sample {}: ratios {} and {}", row.id, row.sys_ratio, row.length_ratio)
        });
    }
    suite
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub spec: ExperimentSpec,
    pub negated: bool,
    pub samples: Vec<Sample>,
    pub suites: Vec<SuiteResult>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub passed: bool,
    #[serde(skip)]
    pub ratio: RatioReport,
}

/// Samples `spec.sample_count` filling currents and runs the collar,
/// minimal-length, mediant, scale, restart and ratio suites over them.
pub fn run_verify(spec: &ExperimentSpec, checker: Checker) -> Result<VerifyReport> {
    spec.optimizer.validate()?;
    let bench = Workbench::new(spec.genus, spec.pool_max_len, spec.ball_radius)?;
    let samples =
        if spec.sample_count == 0 { Vec::new() } else { sample_filling(&bench, spec.sample_count, spec.seed)? };
    let projected = project_samples(&bench, &samples, &spec.optimizer)?;
    let ratio = ratio_report(&bench, &samples, &projected)?;
    let suites = vec![
        collar_suite(&bench, &samples, spec.seed, checker)?,
        length_bound_suite(&bench, &samples, &projected, checker)?,
        mediant_suite(&bench, &samples, spec.seed, checker)?,
        scale_suite(&bench, &samples, &projected, &spec.optimizer, checker)?,
        restart_suite(&samples, &projected, checker),
        ratio_suite(&ratio, checker),
    ];
    let passed = suites.iter().all(SuiteResult::passed);
    Ok(VerifyReport {
        spec: spec.clone(),
        negated: checker.negated,
        samples,
        suites,
        c1: ratio.c1,
        c2: ratio.c2,
        passed,
        ratio,
    })
}

/// Writes `ratios.csv`, `restarts.json` and `report.json` under `dir`.
pub fn write_reports(report: &VerifyReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let files = [
        (dir.join("ratios.csv"), report.ratio.to_csv()?),
        (dir.join("restarts.json"), serde_json::to_string_pretty(&report.ratio.restarts)? + "\n"),
        (dir.join("report.json"), serde_json::to_string_pretty(report)? + "\n"),
    ];
    for (path, body) in &files {
        std::fs::write(path, body)?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}
