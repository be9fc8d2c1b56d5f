//! Hopfield autoassociative memory: Hebbian weight construction, information
//! flow during incremental learning, and complexity capacity over the
//! stationary polytope of the deterministic dynamics.
//!
//! Complexity capacity maximizes p -> IF(p, P) over the convex hull of the
//! attractor vertices. IF is concave in p, and stationary distributions form
//! a convex set, so the restriction stays concave and a Frank-Wolfe sweep
//! over the vertex simplex finds the global maximum.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::dynamics::{stationary_distribution, BoltzmannMachine, WeightMatrix};
use crate::error::{Error, Result};
use crate::measures::total_information_flow;
use crate::statespace::{JointDist, ProbVector, StochMatrix, SystemShape};

const LN_2: f64 = std::f64::consts::LN_2;

/// Stored binary patterns, one ±1 vector per pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSet {
    shape: SystemShape,
    patterns: Vec<Vec<i8>>,
}

impl PatternSet {
    pub fn new(shape: SystemShape, patterns: Vec<Vec<i8>>) -> Result<Self> {
        for (idx, p) in patterns.iter().enumerate() {
            if p.len() != shape.num_nodes() {
                return Err(Error::InvalidState(format!(
                    "pattern {idx} has {} entries, expected {}",
                    p.len(),
                    shape.num_nodes()
                )));
            }
            if let Some(&bad) = p.iter().find(|&&s| s != 1 && s != -1) {
                return Err(Error::InvalidState(format!(
                    "pattern {idx} contains {bad}; entries must be +1 or -1"
                )));
            }
        }
        Ok(PatternSet { shape, patterns })
    }

    pub fn empty(shape: SystemShape) -> Self {
        PatternSet {
            shape,
            patterns: Vec::new(),
        }
    }

    /// Draw `count` i.i.d. uniform ±1 patterns (duplicates allowed).
    pub fn random(shape: SystemShape, count: usize, rng: &mut impl Rng) -> Self {
        let patterns = (0..count)
            .map(|_| draw_pattern(shape, rng))
            .collect();
        PatternSet { shape, patterns }
    }

    pub fn push(&mut self, pattern: Vec<i8>) -> Result<()> {
        let mut extended = PatternSet::new(self.shape, vec![pattern])?;
        self.patterns.append(&mut extended.patterns);
        Ok(())
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[Vec<i8>] {
        &self.patterns
    }

    /// Hebb's rule: w_ij = (1/T) Σ_μ ξ_i ξ_j over the stored patterns.
    /// Symmetric, with unit diagonal (ξ_i² = 1); pass the result through
    /// [`WeightMatrix::zero_diagonal`] for the no-self-coupling variant.
    pub fn hebb_weights(&self) -> Result<WeightMatrix> {
        if self.patterns.is_empty() {
            return Err(Error::InvalidArgument(
                "Hebb weights need at least one stored pattern".into(),
            ));
        }
        let n = self.shape.num_nodes();
        let mut w = vec![0.0; n * n];
        for pattern in &self.patterns {
            for i in 0..n {
                let xi = pattern[i] as f64;
                for j in 0..n {
                    w[i * n + j] += xi * pattern[j] as f64;
                }
            }
        }
        let inv = 1.0 / self.patterns.len() as f64;
        for v in &mut w {
            *v *= inv;
        }
        WeightMatrix::new(self.shape, w)
    }

    /// CSV text: `# shape N=<n>` then one ±1 row per pattern.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# shape N={}", self.shape.num_nodes());
        for p in &self.patterns {
            let row: Vec<String> = p.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut shape: Option<SystemShape> = None;
        let mut patterns = Vec::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(n) = rest.trim().strip_prefix("shape N=") {
                    let n: usize = n.trim().parse().map_err(|_| Error::Parse {
                        line: line_no + 1,
                        message: "bad shape header".into(),
                    })?;
                    shape = Some(SystemShape::new(n)?);
                }
                continue;
            }
            let row: Result<Vec<i8>> = line
                .split(',')
                .map(|c| {
                    c.trim().parse::<i8>().map_err(|_| Error::Parse {
                        line: line_no + 1,
                        message: format!("bad entry {:?}", c.trim()),
                    })
                })
                .collect();
            patterns.push(row?);
        }
        let shape = match (shape, patterns.first()) {
            (Some(s), _) => s,
            (None, Some(first)) => SystemShape::new(first.len())?,
            (None, None) => {
                return Err(Error::Parse {
                    line: 1,
                    message: "empty pattern file".into(),
                })
            }
        };
        PatternSet::new(shape, patterns)
    }
}

fn draw_pattern(shape: SystemShape, rng: &mut impl Rng) -> Vec<i8> {
    (0..shape.num_nodes())
        .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
        .collect()
}

/// Outcome of a capacity maximization: the maximal IF in bits, the simplex
/// coordinates over the attractor vertices attaining it, and the number of
/// Frank-Wolfe iterations spent.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    pub capacity_bits: f64,
    pub vertex_weights: Vec<f64>,
    pub iterations: usize,
}

/// IF(p, P) restricted to p = Σ_k λ_k v_k is a function of a handful of
/// affine statistics: the per-node pair tables and the (affine) whole-system
/// conditional entropy. Precomputing each vertex's contribution makes both
/// the objective and its gradient O(K·N) per evaluation.
struct VertexTables {
    num_nodes: usize,
    /// coefficient of H(X'|X) in nats, one per vertex
    affine: Vec<f64>,
    /// per (vertex, node) 2x2 joint tables of (x_v, x'_v)
    tables: Vec<[[f64; 2]; 2]>,
}

impl VertexTables {
    fn build(kernel: &StochMatrix, vertices: &[ProbVector]) -> Self {
        let shape = kernel.shape();
        let states = shape.num_states();
        let n = shape.num_nodes();
        // per-state, per-node probability of updating to +1
        let mut plus = vec![0.0; states * n];
        let mut row_entropy = vec![0.0; states];
        for x in 0..states {
            let row = kernel.row(x);
            let mut h = 0.0;
            for (y, &k) in row.iter().enumerate() {
                if k > 0.0 {
                    h -= k * k.ln();
                    for v in 0..n {
                        if (y >> v) & 1 == 1 {
                            plus[x * n + v] += k;
                        }
                    }
                }
            }
            row_entropy[x] = h;
        }
        let mut affine = Vec::with_capacity(vertices.len());
        let mut tables = vec![[[0.0; 2]; 2]; vertices.len() * n];
        for (k, vertex) in vertices.iter().enumerate() {
            let mut c = 0.0;
            for (x, &mass) in vertex.probs().iter().enumerate() {
                if mass == 0.0 {
                    continue;
                }
                c += mass * row_entropy[x];
                for v in 0..n {
                    let a = (x >> v) & 1;
                    let pb = plus[x * n + v];
                    tables[k * n + v][a][1] += mass * pb;
                    tables[k * n + v][a][0] += mass * (1.0 - pb);
                }
            }
            affine.push(c);
        }
        VertexTables {
            num_nodes: n,
            affine,
            tables,
        }
    }

    fn mixed_table(&self, weights: &[f64], v: usize) -> [[f64; 2]; 2] {
        let n = self.num_nodes;
        let mut m = [[0.0; 2]; 2];
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let t = &self.tables[k * n + v];
            for a in 0..2 {
                for b in 0..2 {
                    m[a][b] += w * t[a][b];
                }
            }
        }
        m
    }

    /// IF at the mix, in nats.
    fn objective(&self, weights: &[f64]) -> f64 {
        let mut total = 0.0;
        for v in 0..self.num_nodes {
            let m = self.mixed_table(weights, v);
            for a in 0..2 {
                let mu = m[a][0] + m[a][1];
                if mu > 0.0 {
                    for b in 0..2 {
                        if m[a][b] > 0.0 {
                            total -= m[a][b] * (m[a][b] / mu).ln();
                        }
                    }
                }
            }
        }
        for (k, &w) in weights.iter().enumerate() {
            total -= w * self.affine[k];
        }
        total
    }

    /// d objective / d λ_k at the mix, in nats.
    fn gradient(&self, weights: &[f64], out: &mut [f64]) {
        let n = self.num_nodes;
        out.copy_from_slice(&self.affine);
        for g in out.iter_mut() {
            *g = -*g;
        }
        for v in 0..n {
            let m = self.mixed_table(weights, v);
            let mut log_cond = [[0.0; 2]; 2];
            for a in 0..2 {
                let mu = m[a][0] + m[a][1];
                for b in 0..2 {
                    log_cond[a][b] = if m[a][b] > 0.0 && mu > 0.0 {
                        (m[a][b] / mu).ln()
                    } else {
                        0.0
                    };
                }
            }
            for (k, g) in out.iter_mut().enumerate() {
                let t = &self.tables[k * n + v];
                for a in 0..2 {
                    for b in 0..2 {
                        if t[a][b] > 0.0 {
                            *g -= t[a][b] * log_cond[a][b];
                        }
                    }
                }
            }
        }
    }
}

/// Maximize p -> IF(p, P) over the simplex spanned by the given stationary
/// vertices (Frank-Wolfe with the 2/(t+2) step, line search by halving to
/// keep the iterates monotone, stop when the duality gap drops below `tol`
/// bits).
///
/// Every vertex must be stationary for `kernel` (residual at most 1e-9).
/// Concavity of IF makes the reached value the global maximum over the
/// whole stationary polytope.
pub fn complexity_capacity(
    kernel: &StochMatrix,
    vertices: &[ProbVector],
    tol: f64,
    max_iter: usize,
) -> Result<CapacityResult> {
    if vertices.is_empty() {
        return Err(Error::InvalidArgument(
            "capacity needs at least one stationary vertex".into(),
        ));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let states = kernel.shape().num_states();
    for (idx, v) in vertices.iter().enumerate() {
        if v.shape() != kernel.shape() {
            return Err(Error::InvalidArgument(format!(
                "vertex {idx} has mismatched shape"
            )));
        }
        let mut image = vec![0.0; states];
        for (x, &mass) in v.probs().iter().enumerate() {
            if mass != 0.0 {
                for (acc, &k) in image.iter_mut().zip(kernel.row(x)) {
                    *acc += mass * k;
                }
            }
        }
        let residual = image
            .iter()
            .zip(v.probs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residual > 1e-9 {
            return Err(Error::Precondition(format!(
                "vertex {idx} is not stationary (residual {residual:.3e})"
            )));
        }
    }

    let tables = VertexTables::build(kernel, vertices);
    let count = vertices.len();
    if count == 1 {
        return Ok(CapacityResult {
            capacity_bits: tables.objective(&[1.0]) / LN_2,
            vertex_weights: vec![1.0],
            iterations: 0,
        });
    }

    let mut weights = vec![1.0 / count as f64; count];
    let mut value = tables.objective(&weights);
    let mut grad = vec![0.0; count];
    let tol_nats = tol * LN_2;
    for t in 1..=max_iter {
        tables.gradient(&weights, &mut grad);
        let (best, best_grad) = grad
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        let average: f64 = weights.iter().zip(&grad).map(|(w, g)| w * g).sum();
        let gap = best_grad - average;
        if gap < tol_nats {
            return Ok(CapacityResult {
                capacity_bits: value / LN_2,
                vertex_weights: weights,
                iterations: t - 1,
            });
        }
        let mut gamma = 2.0 / (t as f64 + 2.0);
        loop {
            let candidate: Vec<f64> = weights
                .iter()
                .enumerate()
                .map(|(k, &w)| {
                    let target = if k == best { 1.0 } else { 0.0 };
                    (1.0 - gamma) * w + gamma * target
                })
                .collect();
            let candidate_value = tables.objective(&candidate);
            if candidate_value >= value - 1e-15 {
                weights = candidate;
                value = value.max(candidate_value);
                break;
            }
            gamma *= 0.5;
            if gamma < 1e-16 {
                // float floor: the positive gap is no longer expressible in
                // the objective; nothing further to gain
                return Ok(CapacityResult {
                    capacity_bits: value / LN_2,
                    vertex_weights: weights,
                    iterations: t,
                });
            }
        }
    }
    tables.gradient(&weights, &mut grad);
    let best_grad = grad.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let average: f64 = weights.iter().zip(&grad).map(|(w, g)| w * g).sum();
    Err(Error::Convergence {
        iterations: max_iter,
        residual: (best_grad - average) / LN_2,
    })
}

/// One measured point of the stochastic learning experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningPoint {
    pub trial: usize,
    pub patterns_stored: usize,
    pub if_bits: f64,
}

/// Settings for [`learning_curve`].
#[derive(Debug, Clone)]
pub struct LearningCurveConfig {
    pub shape: SystemShape,
    pub max_patterns: usize,
    pub beta: f64,
    pub trials: usize,
    pub seed: u64,
    pub stationary_tol: f64,
    pub stationary_max_iter: usize,
    pub zero_diagonal: bool,
}

impl LearningCurveConfig {
    pub fn new(shape: SystemShape, max_patterns: usize, beta: f64, trials: usize, seed: u64) -> Self {
        LearningCurveConfig {
            shape,
            max_patterns,
            beta,
            trials,
            seed,
            stationary_tol: 1e-12,
            stationary_max_iter: 1_000_000,
            zero_diagonal: false,
        }
    }
}

/// Incremental Hebbian learning at finite β: per trial, store one random
/// pattern at a time; after each storage rebuild the weights, build the
/// synchronous kernel, solve the unique stationary distribution and record
/// IF. Trials use independent RNG substreams keyed by (seed, trial), so the
/// table is identical however the trials are scheduled.
pub fn learning_curve(config: &LearningCurveConfig) -> Result<Vec<LearningPoint>> {
    if !(config.beta.is_finite() && config.beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "learning curve needs finite beta > 0, got {}",
            config.beta
        )));
    }
    if config.trials == 0 || config.max_patterns == 0 {
        return Err(Error::InvalidArgument(
            "trials and max_patterns must be at least 1".into(),
        ));
    }
    let per_trial: Result<Vec<Vec<LearningPoint>>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let mut stored = PatternSet::empty(config.shape);
            let mut points = Vec::with_capacity(config.max_patterns);
            for t in 1..=config.max_patterns {
                stored.push(draw_pattern(config.shape, &mut rng))?;
                let mut weights = stored.hebb_weights()?;
                if config.zero_diagonal {
                    weights.zero_diagonal();
                }
                let machine = BoltzmannMachine::new(weights, config.beta)?;
                let kernel = machine.transition_matrix();
                let p = stationary_distribution(
                    &kernel,
                    config.stationary_tol,
                    config.stationary_max_iter,
                )?;
                let flow = total_information_flow(&JointDist::from_pair(&p, &kernel));
                points.push(LearningPoint {
                    trial,
                    patterns_stored: t,
                    if_bits: flow,
                });
            }
            Ok(points)
        })
        .collect();
    Ok(per_trial?.into_iter().flatten().collect())
}

/// One measured point of the deterministic capacity experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityPoint {
    pub trial: usize,
    pub patterns_stored: usize,
    pub capacity_bits: f64,
}

/// Settings for [`capacity_curve`].
#[derive(Debug, Clone)]
pub struct CapacityCurveConfig {
    pub shape: SystemShape,
    pub max_patterns: usize,
    pub trials: usize,
    pub seed: u64,
    pub gap_tol: f64,
    pub max_iter: usize,
    pub zero_diagonal: bool,
}

impl CapacityCurveConfig {
    pub fn new(shape: SystemShape, max_patterns: usize, trials: usize, seed: u64) -> Self {
        CapacityCurveConfig {
            shape,
            max_patterns,
            trials,
            seed,
            gap_tol: 1e-4,
            max_iter: 5_000_000,
            zero_diagonal: false,
        }
    }
}

/// Incremental Hebbian learning in the deterministic (infinite-β) regime:
/// per trial and stored-pattern count, enumerate the attractors of the step
/// dynamics and maximize IF over their stationary polytope.
pub fn capacity_curve(config: &CapacityCurveConfig) -> Result<Vec<CapacityPoint>> {
    if config.trials == 0 || config.max_patterns == 0 {
        return Err(Error::InvalidArgument(
            "trials and max_patterns must be at least 1".into(),
        ));
    }
    let per_trial: Result<Vec<Vec<CapacityPoint>>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let mut stored = PatternSet::empty(config.shape);
            let mut points = Vec::with_capacity(config.max_patterns);
            for t in 1..=config.max_patterns {
                stored.push(draw_pattern(config.shape, &mut rng))?;
                let mut weights = stored.hebb_weights()?;
                if config.zero_diagonal {
                    weights.zero_diagonal();
                }
                let map = weights.deterministic_map();
                let kernel = map.to_stoch_matrix();
                let vertices = map.attractors().stationary_vertices();
                let capacity =
                    complexity_capacity(&kernel, &vertices, config.gap_tol, config.max_iter)?;
                points.push(CapacityPoint {
                    trial,
                    patterns_stored: t,
                    capacity_bits: capacity.capacity_bits,
                });
            }
            Ok(points)
        })
        .collect();
    Ok(per_trial?.into_iter().flatten().collect())
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::DeterministicMap;

    fn shape(n: usize) -> SystemShape {
        SystemShape::new(n).unwrap()
    }

    #[test]
    fn hebb_single_pattern_is_outer_product() {
        let s = shape(3);
        let ps = PatternSet::new(s, vec![vec![1, -1, 1]]).unwrap();
        let w = ps.hebb_weights().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if (i == 1) ^ (j == 1) { -1.0 } else { 1.0 };
                assert_eq!(w.get(i, j), expect);
            }
            assert_eq!(w.get(i, i), 1.0);
        }
        assert!(w.is_symmetric());
    }

    #[test]
    fn hebb_two_pattern_average() {
        let s = shape(3);
        let ps = PatternSet::new(s, vec![vec![1, 1, 1], vec![1, -1, 1]]).unwrap();
        let w = ps.hebb_weights().unwrap();
        assert_eq!(w.get(0, 1), 0.0);
        assert_eq!(w.get(0, 2), 1.0);
        assert!(w.is_symmetric());
    }

    #[test]
    fn hebb_incremental_identity() {
        // weights after T+1 patterns = (T W_T + outer(new)) / (T+1)
        let s = shape(4);
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        let mut ps = PatternSet::random(s, 5, &mut rng);
        let w5 = ps.hebb_weights().unwrap();
        let extra = draw_pattern(s, &mut rng);
        ps.push(extra.clone()).unwrap();
        let w6 = ps.hebb_weights().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let outer = extra[i] as f64 * extra[j] as f64;
                let expect = (5.0 * w5.get(i, j) + outer) / 6.0;
                assert!((w6.get(i, j) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hebb_rejects_empty_set() {
        let ps = PatternSet::empty(shape(3));
        assert!(matches!(
            ps.hebb_weights(),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn pattern_csv_roundtrip() {
        let s = shape(3);
        let ps = PatternSet::new(s, vec![vec![1, -1, 1], vec![-1, -1, 1]]).unwrap();
        let back = PatternSet::from_csv_str(&ps.to_csv_string()).unwrap();
        assert_eq!(ps, back);
    }

    #[test]
    fn capacity_of_identity_map_is_zero() {
        let s = shape(2);
        let map = DeterministicMap::new(s, vec![0, 1, 2, 3]).unwrap();
        let kernel = map.to_stoch_matrix();
        let vertices = map.attractors().stationary_vertices();
        assert_eq!(vertices.len(), 4);
        let r = complexity_capacity(&kernel, &vertices, 1e-8, 1_000_000).unwrap();
        assert!(r.capacity_bits.abs() < 1e-9);
    }

    #[test]
    fn capacity_with_single_vertex_is_if_at_vertex() {
        // one global 4-cycle
        let s = shape(2);
        let map = DeterministicMap::new(s, vec![1, 3, 0, 2]).unwrap();
        let kernel = map.to_stoch_matrix();
        let vertices = map.attractors().stationary_vertices();
        assert_eq!(vertices.len(), 1);
        let r = complexity_capacity(&kernel, &vertices, 1e-8, 10).unwrap();
        let expect = total_information_flow(&JointDist::from_pair(&vertices[0], &kernel));
        assert!((r.capacity_bits - expect).abs() < 1e-12);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn capacity_rejects_non_stationary_vertex() {
        let s = shape(2);
        let map = DeterministicMap::new(s, vec![1, 0, 3, 2]).unwrap();
        let kernel = map.to_stoch_matrix();
        let bad = ProbVector::dirac(s, 0);
        assert!(matches!(
            complexity_capacity(&kernel, &[bad], 1e-8, 100),
            Err(Error::Precondition(_))
        ));
    }

    /// Exhaustive simplex grid oracle at the given resolution.
    fn capacity_grid_oracle(
        kernel: &StochMatrix,
        vertices: &[ProbVector],
        steps: usize,
    ) -> f64 {
        fn recurse(
            kernel: &StochMatrix,
            vertices: &[ProbVector],
            weights: &mut Vec<f64>,
            remaining: usize,
            steps: usize,
            best: &mut f64,
        ) {
            if weights.len() == vertices.len() - 1 {
                let used: usize = weights.iter().map(|w| (w * steps as f64).round() as usize).sum();
                let _ = used;
                let sum: f64 = weights.iter().sum();
                weights.push(1.0 - sum);
                let p = ProbVector::mix(vertices, weights).unwrap();
                let value = total_information_flow(&JointDist::from_pair(&p, kernel));
                if value > *best {
                    *best = value;
                }
                weights.pop();
                return;
            }
            for k in 0..=remaining {
                weights.push(k as f64 / steps as f64);
                recurse(kernel, vertices, weights, remaining - k, steps, best);
                weights.pop();
            }
        }
        let mut best = f64::NEG_INFINITY;
        if vertices.len() == 1 {
            let p = &vertices[0];
            return total_information_flow(&JointDist::from_pair(p, kernel));
        }
        recurse(kernel, vertices, &mut Vec::new(), steps, steps, &mut best);
        best
    }

    #[test]
    fn capacity_matches_grid_search_on_small_maps() {
        // a swap pair plus two fixed points: three vertices
        let s = shape(2);
        let map = DeterministicMap::new(s, vec![0, 2, 1, 3]).unwrap();
        let kernel = map.to_stoch_matrix();
        let vertices = map.attractors().stationary_vertices();
        assert_eq!(vertices.len(), 3);
        let r = complexity_capacity(&kernel, &vertices, 1e-9, 2_000_000).unwrap();
        let grid = capacity_grid_oracle(&kernel, &vertices, 1000);
        assert!(
            (r.capacity_bits - grid).abs() < 1e-4,
            "frank-wolfe {} vs grid {grid}",
            r.capacity_bits
        );
        let mass: f64 = r.vertex_weights.iter().sum();
        assert!((mass - 1.0).abs() < 1e-10);
        assert!(r.vertex_weights.iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn capacity_never_decreases_with_more_vertices() {
        let s = shape(3);
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        for _ in 0..5 {
            let w: Vec<f64> = (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let weights = WeightMatrix::new(s, w).unwrap();
            let map = weights.deterministic_map();
            let kernel = map.to_stoch_matrix();
            let vertices = map.attractors().stationary_vertices();
            if vertices.len() < 2 {
                continue;
            }
            let partial =
                complexity_capacity(&kernel, &vertices[..vertices.len() - 1], 1e-9, 2_000_000)
                    .unwrap();
            let full = complexity_capacity(&kernel, &vertices, 1e-9, 2_000_000).unwrap();
            assert!(full.capacity_bits >= partial.capacity_bits - 1e-6);
        }
    }

    #[test]
    fn objective_gradient_matches_if_gradient() {
        let s = shape(2);
        let map = DeterministicMap::new(s, vec![0, 2, 1, 3]).unwrap();
        let kernel = map.to_stoch_matrix();
        let vertices = map.attractors().stationary_vertices();
        let tables = VertexTables::build(&kernel, &vertices);
        let weights = vec![0.5, 0.3, 0.2];
        let mut grad = vec![0.0; 3];
        tables.gradient(&weights, &mut grad);
        let p = ProbVector::mix(&vertices, &weights).unwrap();
        let full = crate::measures::if_gradient(&p, &kernel);
        for (k, vertex) in vertices.iter().enumerate() {
            let expect: f64 = vertex
                .probs()
                .iter()
                .zip(&full)
                .filter(|(&m, _)| m > 0.0)
                .map(|(&m, &g)| m * g)
                .sum();
            assert!(
                (grad[k] / LN_2 - expect).abs() < 1e-9,
                "vertex {k}: table gradient {} vs state gradient {expect}",
                grad[k] / LN_2
            );
        }
        // central finite differences along vertex directions
        let h = 1e-6;
        for k in 0..3 {
            let mut up = weights.clone();
            let mut dn = weights.clone();
            for (i, (u, d)) in up.iter_mut().zip(dn.iter_mut()).enumerate() {
                let e = if i == k { 1.0 } else { 0.0 };
                *u = (1.0 - h) * weights[i] + h * e;
                *d = (1.0 + h) * weights[i] - h * e;
            }
            let fd = (tables.objective(&up) - tables.objective(&dn)) / (2.0 * h);
            let directional: f64 = grad[k]
                - weights
                    .iter()
                    .zip(&grad)
                    .map(|(w, g)| w * g)
                    .sum::<f64>();
            assert!(
                (fd - directional).abs() < 1e-5,
                "direction {k}: fd {fd} vs analytic {directional}"
            );
        }
    }

    #[test]
    fn learning_curve_is_reproducible_and_schedule_independent() {
        let cfg = LearningCurveConfig::new(shape(4), 5, 1.0, 4, 99);
        let a = learning_curve(&cfg).unwrap();
        let b = learning_curve(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        // same computation on a single thread: identical bits
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = pool.install(|| learning_curve(&cfg).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn learning_curve_rejects_bad_beta() {
        let cfg = LearningCurveConfig::new(shape(3), 3, 0.0, 2, 1);
        assert!(learning_curve(&cfg).is_err());
    }

    #[test]
    fn learning_curve_vanishes_toward_infinite_temperature() {
        // near beta = 0 the kernel is near uniform, so IF collapses
        let cfg = LearningCurveConfig::new(shape(3), 1, 1e-6, 2, 8);
        for point in learning_curve(&cfg).unwrap() {
            assert!(point.if_bits.abs() < 1e-9);
        }
    }

    #[test]
    fn capacity_curve_is_reproducible_and_bounded() {
        let cfg = CapacityCurveConfig::new(shape(4), 6, 3, 123);
        let a = capacity_curve(&cfg).unwrap();
        let b = capacity_curve(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 18);
        for point in &a {
            assert!(point.capacity_bits >= -1e-9);
            assert!(point.capacity_bits <= 4.0 + 1e-9);
        }
    }
}
