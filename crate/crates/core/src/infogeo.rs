//! KL projection of a transition pair (p, P) onto split kernel families by
//! cyclic iterative scaling, and the geometric integrated information
//! computed from the richest of those families.
//!
//! A split family constrains the kernel Q to a log-linear form per row:
//!
//! * node-wise:         Q(x,x') = exp( Σ_v f_v(x_v, x'_v) ) / Z(x)
//! * output-marginal:   Q(x,x') = exp( f(x') ) / Z(x)
//! * both:              Q(x,x') = exp( Σ_v f_v(x_v, x'_v) + f(x') ) / Z(x)
//!
//! The projection minimizes D^p(P || Q) over the family. Working on the
//! joint q(x,x') = p(x) Q(x,x'), the minimizer is the member whose
//! constrained feature marginals match those of the target joint
//! p(x) P(x,x'), and cyclic multiplicative marginal matching converges to
//! it. One cycle updates each feature family in turn: multiply q by
//! target-marginal / current-marginal on the family's cells, then restore
//! the fixed input marginal by rescaling each row back to mass p(x).
//! Divergence is non-increasing along the way (each step is itself a KL
//! projection onto one constraint set).
//!
//! Rows with p(x) = 0 carry no divergence; the returned kernel is uniform
//! there so it is total. Deterministic targets are allowed: zero target
//! marginals zero out the matching cells and 0/0 scaling factors count as 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::statespace::{ProbVector, StochMatrix};

const LN_2: f64 = std::f64::consts::LN_2;

/// Which split family to project onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitManifold {
    /// Per-node temporal factorization: features (x_v, x'_v) for every node.
    NodeWise,
    /// Input-independent output: the single feature x'.
    Output,
    /// Log-linear union of the two; the family behind the geometric
    /// integrated information.
    NodeWiseOutput,
}

impl SplitManifold {
    fn uses_nodes(self) -> bool {
        matches!(self, SplitManifold::NodeWise | SplitManifold::NodeWiseOutput)
    }

    fn uses_output(self) -> bool {
        matches!(self, SplitManifold::Output | SplitManifold::NodeWiseOutput)
    }
}

/// Outcome of a projection: the projected kernel, the divergence to it in
/// bits, the number of full scaling cycles, and the final max-abs mismatch
/// of the constrained feature marginals.
#[derive(Debug, Clone)]
pub struct ProjectionResult {
    pub q: StochMatrix,
    pub divergence_bits: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// 0/0 counts as 1, target 0 zeroes the cell.
#[inline]
fn scale_factor(target: f64, current: f64) -> f64 {
    if target == 0.0 {
        0.0
    } else if current == 0.0 {
        1.0
    } else {
        target / current
    }
}

struct Scaler<'a> {
    states: usize,
    num_nodes: usize,
    p: &'a [f64],
    target: &'a [f64],
    node_targets: Vec<[[f64; 2]; 2]>,
    output_target: Vec<f64>,
    q: Vec<f64>,
}

impl<'a> Scaler<'a> {
    fn new(p: &'a [f64], target: &'a [f64], states: usize, num_nodes: usize) -> Self {
        let node_targets = (0..num_nodes)
            .map(|v| node_marginal(target, states, v))
            .collect();
        let output_target = output_marginal(target, states);
        // start inside the family closure: p(x) times the uniform row
        let u = 1.0 / states as f64;
        let mut q = vec![0.0; states * states];
        for x in 0..states {
            if p[x] > 0.0 {
                q[x * states..(x + 1) * states].fill(p[x] * u);
            }
        }
        Scaler {
            states,
            num_nodes,
            p,
            target,
            node_targets,
            output_target,
            q,
        }
    }

    fn restore_rows(&mut self) {
        for x in 0..self.states {
            let row = &mut self.q[x * self.states..(x + 1) * self.states];
            let px = self.p[x];
            if px == 0.0 {
                row.fill(0.0);
                continue;
            }
            let mass: f64 = row.iter().sum();
            if mass > 0.0 {
                let f = px / mass;
                for v in row {
                    *v *= f;
                }
            } else {
                // unreachable for valid targets; recover with a fresh row
                row.fill(px / self.states as f64);
            }
        }
    }

    fn scale_node_family(&mut self, v: usize) {
        let current = node_marginal(&self.q, self.states, v);
        let mut factor = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                factor[a][b] = scale_factor(self.node_targets[v][a][b], current[a][b]);
            }
        }
        for x in 0..self.states {
            let a = (x >> v) & 1;
            let row = &mut self.q[x * self.states..(x + 1) * self.states];
            for (y, cell) in row.iter_mut().enumerate() {
                *cell *= factor[a][(y >> v) & 1];
            }
        }
        self.restore_rows();
    }

    fn scale_output_family(&mut self) {
        let current = output_marginal(&self.q, self.states);
        let factor: Vec<f64> = current
            .iter()
            .zip(&self.output_target)
            .map(|(&c, &t)| scale_factor(t, c))
            .collect();
        for x in 0..self.states {
            let row = &mut self.q[x * self.states..(x + 1) * self.states];
            for (cell, &f) in row.iter_mut().zip(&factor) {
                *cell *= f;
            }
        }
        self.restore_rows();
    }

    /// Max-abs mismatch of the constrained marginals against the target.
    fn residual(&self, manifold: SplitManifold) -> f64 {
        let mut worst: f64 = 0.0;
        if manifold.uses_nodes() {
            for v in 0..self.num_nodes {
                let current = node_marginal(&self.q, self.states, v);
                for a in 0..2 {
                    for b in 0..2 {
                        worst = worst.max((current[a][b] - self.node_targets[v][a][b]).abs());
                    }
                }
            }
        }
        if manifold.uses_output() {
            let current = output_marginal(&self.q, self.states);
            for (c, t) in current.iter().zip(&self.output_target) {
                worst = worst.max((c - t).abs());
            }
        }
        worst
    }

    /// D(target || q) in bits over the support of the target.
    fn divergence(&self) -> f64 {
        let mut total = 0.0;
        for (&t, &q) in self.target.iter().zip(&self.q) {
            if t > 0.0 {
                total += t * (t / q).ln();
            }
        }
        total / LN_2
    }

    fn into_kernel(self, shape: crate::statespace::SystemShape) -> StochMatrix {
        let states = self.states;
        let mut rows = self.q;
        for x in 0..states {
            let row = &mut rows[x * states..(x + 1) * states];
            if self.p[x] > 0.0 {
                let inv = 1.0 / self.p[x];
                for v in row.iter_mut() {
                    *v *= inv;
                }
            } else {
                row.fill(1.0 / states as f64);
            }
        }
        StochMatrix::from_rows(shape, rows).expect("scaled rows carry mass p(x)")
    }
}

fn node_marginal(joint: &[f64], states: usize, v: usize) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for x in 0..states {
        let a = (x >> v) & 1;
        let row = &joint[x * states..(x + 1) * states];
        let mut plus = 0.0;
        let mut minus = 0.0;
        for (y, &cell) in row.iter().enumerate() {
            if (y >> v) & 1 == 1 {
                plus += cell;
            } else {
                minus += cell;
            }
        }
        out[a][0] += minus;
        out[a][1] += plus;
    }
    out
}

fn output_marginal(joint: &[f64], states: usize) -> Vec<f64> {
    let mut out = vec![0.0; states];
    for x in 0..states {
        for (acc, &cell) in out.iter_mut().zip(&joint[x * states..(x + 1) * states]) {
            *acc += cell;
        }
    }
    out
}

/// KL projection of (p, P) onto a split family by cyclic iterative scaling.
///
/// Converged when every constrained feature marginal of the running joint
/// matches the target within `tol`; a divergence change below 1e-12 across
/// a cycle ends the run early once the mismatch is at least close (within
/// 1000 tol), since past that point the iteration only churns float noise.
pub fn project(
    p: &ProbVector,
    kernel: &StochMatrix,
    manifold: SplitManifold,
    tol: f64,
    max_iter: usize,
) -> Result<ProjectionResult> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    assert_eq!(p.shape(), kernel.shape(), "shape mismatch");
    let shape = p.shape();
    let states = shape.num_states();
    let num_nodes = shape.num_nodes();

    let mut target = vec![0.0; states * states];
    for x in 0..states {
        let px = p.get(x);
        if px > 0.0 {
            for (cell, &k) in target[x * states..(x + 1) * states]
                .iter_mut()
                .zip(kernel.row(x))
            {
                *cell = px * k;
            }
        }
    }

    let mut scaler = Scaler::new(p.probs(), &target, states, num_nodes);
    let mut prev_divergence = scaler.divergence();
    let mut residual = scaler.residual(manifold);
    let mut iterations = 0;
    if residual >= tol {
        loop {
            if manifold.uses_nodes() {
                for v in 0..num_nodes {
                    scaler.scale_node_family(v);
                }
            }
            if manifold.uses_output() {
                scaler.scale_output_family();
            }
            iterations += 1;
            residual = scaler.residual(manifold);
            let divergence = scaler.divergence();
            debug_assert!(
                divergence <= prev_divergence + 1e-9,
                "divergence rose across a cycle: {prev_divergence} -> {divergence}"
            );
            let stalled = (prev_divergence - divergence).abs() < 1e-12;
            prev_divergence = divergence;
            if residual < tol || (stalled && residual < tol * 1e3) {
                break;
            }
            if iterations >= max_iter {
                return Err(Error::Convergence {
                    iterations,
                    residual,
                });
            }
        }
    }
    let divergence_bits = scaler.divergence();
    Ok(ProjectionResult {
        q: scaler.into_kernel(shape),
        divergence_bits,
        iterations,
        residual,
    })
}

/// Geometric integrated information: the divergence from (p, P) to the
/// combined node-wise + output family. Satisfies
/// 0 <= value <= min(IF, I) up to the projection tolerance, since that
/// family contains both smaller ones.
pub fn phi_g(p: &ProbVector, kernel: &StochMatrix, tol: f64, max_iter: usize) -> Result<f64> {
    project(p, kernel, SplitManifold::NodeWiseOutput, tol, max_iter)
        .map(|r| r.divergence_bits)
}

/// Settings for [`phi_g_oracle`]: restart count, per-restart iteration cap,
/// and the seed for the random restarts.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            restarts: 20,
            max_iters: 20_000,
            seed: 7,
        }
    }
}

/// Brute-force reference for [`phi_g`]: minimizes the divergence directly
/// over the family's log-parameters (one 2x2 table per node plus one value
/// per output state) by gradient descent with step halving and random
/// restarts. Best effort; intended for tiny systems where the exhaustive
/// parameter count stays small.
pub fn phi_g_oracle(p: &ProbVector, kernel: &StochMatrix, config: &OracleConfig) -> f64 {
    assert_eq!(p.shape(), kernel.shape(), "shape mismatch");
    let shape = p.shape();
    let states = shape.num_states();
    let num_nodes = shape.num_nodes();
    let dim = 4 * num_nodes + states;

    // objective and gradient in nats at the given log-parameters
    let eval = |theta: &[f64], grad: Option<&mut [f64]>| -> f64 {
        let (node_params, output_params) = theta.split_at(4 * num_nodes);
        let mut objective = 0.0;
        let mut grad = grad;
        if let Some(g) = grad.as_deref_mut() {
            g.fill(0.0);
        }
        let mut row_q = vec![0.0; states];
        for x in 0..states {
            let px = p.get(x);
            if px == 0.0 {
                continue;
            }
            let mut z = 0.0;
            for (y, q) in row_q.iter_mut().enumerate() {
                let mut logit = output_params[y];
                for v in 0..num_nodes {
                    let a = (x >> v) & 1;
                    let b = (y >> v) & 1;
                    logit += node_params[4 * v + 2 * a + b];
                }
                *q = logit.exp();
                z += *q;
            }
            for q in row_q.iter_mut() {
                *q /= z;
            }
            let prow = kernel.row(x);
            for y in 0..states {
                let pv = prow[y];
                if pv > 0.0 {
                    objective += px * pv * (pv / row_q[y]).ln();
                }
            }
            if let Some(g) = grad.as_deref_mut() {
                for y in 0..states {
                    let diff = px * (row_q[y] - prow[y]);
                    g[4 * num_nodes + y] += diff;
                    for v in 0..num_nodes {
                        let a = (x >> v) & 1;
                        let b = (y >> v) & 1;
                        g[4 * v + 2 * a + b] += diff;
                    }
                }
            }
        }
        objective
    };

    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let mut best = f64::INFINITY;
    for restart in 0..config.restarts.max(1) {
        let mut theta: Vec<f64> = if restart == 0 {
            vec![0.0; dim]
        } else {
            (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        let mut grad = vec![0.0; dim];
        let mut value = eval(&theta, Some(&mut grad));
        let mut step = 0.5;
        for _ in 0..config.max_iters {
            let grad_norm = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
            if grad_norm < 1e-11 {
                break;
            }
            let candidate: Vec<f64> = theta
                .iter()
                .zip(&grad)
                .map(|(t, g)| t - step * g)
                .collect();
            let candidate_value = eval(&candidate, None);
            if candidate_value <= value {
                theta = candidate;
                value = eval(&theta, Some(&mut grad));
                step = (step * 1.2).min(8.0);
            } else {
                step *= 0.5;
                if step < 1e-18 {
                    break;
                }
            }
        }
        if value < best {
            best = value;
        }
    }
    best / LN_2
}
