//! Random host sampling and seeded Monte Carlo estimation of the
//! list-canonical-Ramsey probability across a probability grid.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::density::threshold_scale;
use crate::error::{Error, Guards, Result};
use crate::graph::{cycle_graph, path_graph, KGraph, ListAssignment, VertexOrdering};
use crate::solver::{decide_canarrow_lists, find_avoiding_colouring, AvoidanceInstance};

/// Pattern selection: a conventional name ("K4", "C5", "P4") or explicit edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternSpec {
    Named(String),
    Explicit {
        vertices: usize,
        edges: Vec<Vec<usize>>,
    },
}

impl PatternSpec {
    /// Resolve to a graph of uniformity `k`.
    pub fn resolve(&self, k: usize) -> Result<KGraph> {
        match self {
            PatternSpec::Explicit { vertices, edges } => KGraph::new(k, *vertices, edges.clone()),
            PatternSpec::Named(name) => {
                let (family, rest) = name.split_at(1);
                let m: usize = rest.parse().map_err(|_| {
                    Error::ParameterOutOfRange(format!("unrecognised pattern name {name:?}"))
                })?;
                match family {
                    "K" => KGraph::complete(m, k),
                    "C" if k == 2 => cycle_graph(m),
                    "P" if k == 2 => path_graph(m),
                    _ => Err(Error::ParameterOutOfRange(format!(
                        "unrecognised pattern name {name:?} for uniformity {k}"
                    ))),
                }
            }
        }
    }
}

/// List generator: the same tuple everywhere, or per-edge uniform draws from a
/// colour universe.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ListSpec {
    Constant { colours: Vec<u64> },
    Random { r: usize, universe: u64 },
}

impl ListSpec {
    pub fn r(&self) -> usize {
        match self {
            ListSpec::Constant { colours } => colours.len(),
            ListSpec::Random { r, .. } => *r,
        }
    }

    /// Lists on every edge of the full host, drawn from `seed` for the random
    /// variant.
    fn generate(&self, full: &KGraph, seed: u64) -> Result<ListAssignment> {
        match self {
            ListSpec::Constant { colours } => ListAssignment::constant(full, colours),
            ListSpec::Random { r, universe } => {
                if *r == 0 || *universe == 0 {
                    return Err(Error::ParameterOutOfRange(
                        "random lists need r >= 1 and a nonempty universe".into(),
                    ));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let lists = (0..full.edge_count())
                    .map(|_| (0..*r).map(|_| rng.random_range(1..=*universe)).collect())
                    .collect();
                ListAssignment::new(*r, lists)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SigmaPolicy {
    /// Quantify over all orderings of the pattern (up to automorphism).
    #[default]
    AllOrderings,
    /// A single fixed ordering, given as seq[pos] = vertex.
    Fixed { sequence: Vec<usize> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub pattern: PatternSpec,
    pub lists: ListSpec,
    pub p_grid: Vec<f64>,
    pub trials: u64,
    /// Required before running; kept optional so config files may defer to
    /// the command line.
    pub seed: Option<u64>,
    #[serde(default)]
    pub sigma: SigmaPolicy,
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<KGraph> {
        if self.p_grid.is_empty() {
            return Err(Error::ParameterOutOfRange("empty probability grid".into()));
        }
        if self.p_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::ParameterOutOfRange(
                "grid probabilities must lie in [0, 1]".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::ParameterOutOfRange("trials must be >= 1".into()));
        }
        let h = self.pattern.resolve(self.k)?;
        if let SigmaPolicy::Fixed { sequence } = &self.sigma {
            if sequence.len() != h.vertex_count() {
                return Err(Error::ParameterOutOfRange(
                    "fixed ordering length must equal the pattern's vertex count".into(),
                ));
            }
            VertexOrdering::from_sequence(sequence)?;
        }
        Ok(h)
    }

    pub fn seed_required(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::ParameterOutOfRange("a seed is required".into()))
    }
}

/// G(n, p) for k = 2, and its hypergraph analogue for k > 2: each of the
/// C(n, k) edges kept independently with probability p, in lexicographic
/// edge order so the output is a pure function of (n, k, p, seed).
pub fn sample_gnp(n: usize, k: usize, p: f64, seed: u64) -> Result<KGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterOutOfRange(format!("p = {p} outside [0, 1]")));
    }
    let full = KGraph::complete(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = full
        .edges()
        .filter(|_| rng.random::<f64>() < p)
        .map(|e| e.to_vec())
        .collect();
    KGraph::new(k, n, edges)
}

/// splitmix64-style stream splitter for per-trial substreams.
fn substream(seed: u64, point: u64, trial: u64) -> u64 {
    let mut z = seed
        ^ point.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ trial.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GRAPH_STREAM: u64 = 0x67;
const LIST_STREAM: u64 = 0x6C;

/// 95% Clopper–Pearson interval for `successes` out of `trials`.
pub fn clopper_pearson(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let x = successes as f64;
    let n = trials as f64;
    let alpha = 0.05;
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(x, n - x + 1.0)
            .expect("valid shape parameters")
            .inverse_cdf(alpha / 2.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        Beta::new(x + 1.0, n - x)
            .expect("valid shape parameters")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

#[derive(Debug, Clone, Serialize)]
pub struct PointEstimate {
    pub p: f64,
    pub ratio_to_scale: f64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials: u64,
    pub successes: u64,
    pub guard_exceeded: u64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdCurve {
    pub scale: f64,
    pub points: Vec<PointEstimate>,
    /// More than 5% of trials at some point hit a solver guard.
    pub unreliable: bool,
}

impl ThresholdCurve {
    /// CSV rendering; the timing column can be dropped to compare runs.
    pub fn to_csv(&self, include_timings: bool) -> String {
        let mut out = String::from("p,ratio_to_scale,estimate,ci_lo,ci_hi,trials,guard_exceeded");
        if include_timings {
            out.push_str(",seconds");
        }
        out.push('\n');
        for pt in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}",
                pt.p, pt.ratio_to_scale, pt.estimate, pt.ci_lo, pt.ci_hi, pt.trials,
                pt.guard_exceeded
            ));
            if include_timings {
                out.push_str(&format!(",{}", pt.seconds));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TrialOutcome {
    Success,
    Failure,
    GuardExceeded,
}

fn run_trial(
    cfg: &ExperimentConfig,
    h: &KGraph,
    p: f64,
    point_idx: u64,
    trial_idx: u64,
    guards: &Guards,
) -> Result<TrialOutcome> {
    let base = substream(cfg.seed_required()?, point_idx, trial_idx);
    let sample = sample_gnp(cfg.n, cfg.k, p, substream(base, GRAPH_STREAM, 0))?;
    // lists live on the full host and are then restricted to the sample
    let full = KGraph::complete(cfg.n, cfg.k)?;
    let full_lists = cfg.lists.generate(&full, substream(base, LIST_STREAM, 0))?;
    let lists = full_lists.restrict(&full, &sample)?;
    let decision = match &cfg.sigma {
        SigmaPolicy::AllOrderings => decide_canarrow_lists(&sample, h, &lists, guards),
        SigmaPolicy::Fixed { sequence } => {
            let inst = AvoidanceInstance {
                host: sample,
                pattern: h.clone(),
                sigma: VertexOrdering::from_sequence(sequence)?,
                lists,
            };
            find_avoiding_colouring(&inst, guards).map(|res| res.found().is_none())
        }
    };
    match decision {
        Ok(true) => Ok(TrialOutcome::Success),
        Ok(false) => Ok(TrialOutcome::Failure),
        Err(e) if e.is_guard() => Ok(TrialOutcome::GuardExceeded),
        Err(e) => Err(e),
    }
}

fn estimate_point(
    cfg: &ExperimentConfig,
    h: &KGraph,
    scale: f64,
    p: f64,
    point_idx: u64,
    guards: &Guards,
) -> Result<PointEstimate> {
    let start = Instant::now();
    let outcomes: Vec<Result<TrialOutcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, h, p, point_idx, t, guards))
        .collect();
    // commutative merge: only counts survive
    let mut successes = 0u64;
    let mut guard_exceeded = 0u64;
    for o in outcomes {
        match o? {
            TrialOutcome::Success => successes += 1,
            TrialOutcome::Failure => {}
            TrialOutcome::GuardExceeded => guard_exceeded += 1,
        }
    }
    let decided = cfg.trials - guard_exceeded;
    let estimate = if decided == 0 {
        0.0
    } else {
        successes as f64 / decided as f64
    };
    let (ci_lo, ci_hi) = clopper_pearson(successes, decided);
    Ok(PointEstimate {
        p,
        ratio_to_scale: p / scale,
        estimate,
        ci_lo,
        ci_hi,
        trials: cfg.trials,
        successes,
        guard_exceeded,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match workers {
        None => f(),
        Some(w) => {
            if w == 0 {
                return Err(Error::ParameterOutOfRange("workers must be >= 1".into()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::ParameterOutOfRange(format!("thread pool: {e}")))?
                .install(f)
        }
    }
}

/// Fraction of trials at a single p whose sample has the list-canonical-Ramsey
/// property, with an exact 95% interval.  Guarded-out trials form a third
/// category and are excluded from the estimate's denominator.
pub fn estimate_canram_probability(
    cfg: &ExperimentConfig,
    p: f64,
    guards: &Guards,
) -> Result<PointEstimate> {
    let h = cfg.validate()?;
    cfg.seed_required()?;
    let scale = threshold_scale(&h, cfg.n)?.value;
    with_workers(cfg.workers, || estimate_point(cfg, &h, scale, p, 0, guards))
}

/// One estimate per grid point, annotated with p / n^{-1/m_k(H)}.
pub fn threshold_sweep(cfg: &ExperimentConfig, guards: &Guards) -> Result<ThresholdCurve> {
    let h = cfg.validate()?;
    cfg.seed_required()?;
    let scale = threshold_scale(&h, cfg.n)?.value;
    let points = with_workers(cfg.workers, || {
        cfg.p_grid
            .iter()
            .enumerate()
            .map(|(i, &p)| estimate_point(cfg, &h, scale, p, i as u64, guards))
            .collect::<Result<Vec<_>>>()
    })?;
    let unreliable = points
        .iter()
        .any(|pt| pt.guard_exceeded as f64 > 0.05 * pt.trials as f64);
    Ok(ThresholdCurve {
        scale,
        points,
        unreliable,
    })
}

/// The grid [lo, hi]·scale with `len` evenly spaced multipliers.
pub fn scaled_grid(scale: f64, lo: f64, hi: f64, len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![(lo + hi) / 2.0 * scale];
    }
    (0..len)
        .map(|i| {
            let t = i as f64 / (len - 1) as f64;
            ((lo + t * (hi - lo)) * scale).min(1.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_cfg(p_grid: Vec<f64>, trials: u64, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            n: 3,
            k: 2,
            pattern: PatternSpec::Named("K3".into()),
            lists: ListSpec::Constant {
                colours: vec![1, 2],
            },
            p_grid,
            trials,
            seed: Some(seed),
            sigma: SigmaPolicy::AllOrderings,
            workers: Some(1),
        }
    }

    #[test]
    fn gnp_extremes() {
        let empty = sample_gnp(10, 2, 0.0, 1).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = sample_gnp(10, 2, 1.0, 1).unwrap();
        assert_eq!(full.edge_count(), 45);
        let full3 = sample_gnp(6, 3, 1.0, 1).unwrap();
        assert_eq!(full3.edge_count(), 20);
    }

    #[test]
    fn gnp_deterministic_in_seed() {
        let a = sample_gnp(20, 2, 0.4, 99).unwrap();
        let b = sample_gnp(20, 2, 0.4, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_gnp(20, 2, 0.4, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn gnp_edge_count_concentrated() {
        // E = 0.3 * C(100,2) = 1485, sd = sqrt(4950 * 0.3 * 0.7) ≈ 32.2
        let mut within = 0;
        let seeds = 200;
        for s in 0..seeds {
            let g = sample_gnp(100, 2, 0.3, s).unwrap();
            let dev = (g.edge_count() as f64 - 1485.0).abs();
            if dev <= 4.0 * 32.24 {
                within += 1;
            }
        }
        assert!(within * 100 >= seeds * 99, "{within}/{seeds}");
    }

    #[test]
    fn clopper_pearson_reference_values() {
        assert_eq!(clopper_pearson(0, 10).0, 0.0);
        assert_eq!(clopper_pearson(10, 10).1, 1.0);
        let (lo, hi) = clopper_pearson(5, 10);
        assert!((lo - 0.1871).abs() < 1e-3, "{lo}");
        assert!((hi - 0.8129).abs() < 1e-3, "{hi}");
        let (lo, _) = clopper_pearson(0, 10);
        assert_eq!(lo, 0.0);
    }

    #[test]
    fn estimate_extreme_ps() {
        let cfg = triangle_cfg(vec![0.0, 1.0], 20, 7);
        let guards = Guards::default();
        // p = 0: empty host, trivially avoidable
        let e0 = estimate_canram_probability(&cfg, 0.0, &guards).unwrap();
        assert_eq!(e0.estimate, 0.0);
        // p = 1: K3 arrows K3 with two-colour lists
        let e1 = estimate_canram_probability(&cfg, 1.0, &guards).unwrap();
        assert_eq!(e1.estimate, 1.0);
    }

    #[test]
    fn sweep_deterministic_and_worker_independent() {
        let mut cfg = triangle_cfg(vec![0.3, 0.9], 30, 41);
        let guards = Guards::default();
        let a = threshold_sweep(&cfg, &guards).unwrap();
        let b = threshold_sweep(&cfg, &guards).unwrap();
        assert_eq!(a.to_csv(false), b.to_csv(false));
        cfg.workers = Some(4);
        let c = threshold_sweep(&cfg, &guards).unwrap();
        assert_eq!(a.to_csv(false), c.to_csv(false));
        assert!(!a.unreliable);
    }

    #[test]
    fn csv_shape() {
        let cfg = triangle_cfg(vec![0.5], 5, 3);
        let curve = threshold_sweep(&cfg, &Guards::default()).unwrap();
        let csv = curve.to_csv(true);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "p,ratio_to_scale,estimate,ci_lo,ci_hi,trials,guard_exceeded,seconds"
        );
        assert_eq!(lines.count(), 1);
        let no_t = curve.to_csv(false);
        assert!(!no_t.contains("seconds"));
    }

    #[test]
    fn scaled_grid_endpoints() {
        let g = scaled_grid(0.1, 0.3, 3.0, 8);
        assert_eq!(g.len(), 8);
        assert!((g[0] - 0.03).abs() < 1e-12);
        assert!((g[7] - 0.3).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn missing_seed_rejected() {
        let mut cfg = triangle_cfg(vec![0.5], 5, 3);
        cfg.seed = None;
        assert!(threshold_sweep(&cfg, &Guards::default()).is_err());
    }

    #[test]
    fn config_json_roundtrip() {
        let cfg = triangle_cfg(vec![0.25, 0.5], 10, 9);
        let json = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back.n, 3);
        assert_eq!(back.trials, 10);
        assert_eq!(back.seed, Some(9));
    }

    #[test]
    fn random_lists_deterministic() {
        let full = KGraph::complete(6, 2).unwrap();
        let spec = ListSpec::Random { r: 2, universe: 5 };
        let a = spec.generate(&full, 5).unwrap();
        let b = spec.generate(&full, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.lists_iter().all(|l| l.iter().all(|&c| (1..=5).contains(&c))));
    }

    #[test]
    fn threshold_scale_annotation() {
        let cfg = triangle_cfg(vec![0.5], 3, 11);
        let curve = threshold_sweep(&cfg, &Guards::default()).unwrap();
        // m2(K3) = 2, scale = 3^{-1/2}
        assert!((curve.scale - (3f64).powf(-0.5)).abs() < 1e-12);
        assert!((curve.points[0].ratio_to_scale - 0.5 / curve.scale).abs() < 1e-12);
    }
}
