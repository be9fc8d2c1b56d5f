//! Closed-form complexity measures of one transition (p, P): multi-
//! information, mutual information, synergistic information, and total
//! information flow. All values in bits.
//!
//! The operations accept an arbitrary input distribution, not only a
//! stationary one, so concavity checks and capacity maximization can reuse
//! them; the command-line flows pass the stationary p.

use crate::statespace::{entropy_of, JointDist, ProbVector, StochMatrix};

const LN_2: f64 = std::f64::consts::LN_2;

/// All measures of one transition, in bits. `phi_g` is present when a
/// projection was run (it has no closed form).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub mi: f64,
    pub si: f64,
    pub if_flow: f64,
    pub phi_g: Option<f64>,
    pub mutual_info: f64,
}

impl MeasureReport {
    /// Evaluate every closed-form measure of (p, P); `phi_g` is attached
    /// as given.
    pub fn compute(p: &ProbVector, kernel: &StochMatrix, phi_g: Option<f64>) -> Self {
        let joint = JointDist::from_pair(p, kernel);
        MeasureReport {
            mi: multi_information(p),
            si: synergistic_information(&joint),
            if_flow: total_information_flow(&joint),
            phi_g,
            mutual_info: mutual_information(&joint),
        }
    }
}

/// Multi-information Σ_v H(X_v) - H(X): the total same-time dependence among
/// the node marginals. Zero exactly when the nodes are independent.
pub fn multi_information(p: &ProbVector) -> f64 {
    let n = p.shape().num_nodes();
    let mut node_sum = 0.0;
    for v in 0..n {
        let m = p.marginal_onto(&[v]).expect("single node is valid");
        node_sum += entropy_of(&m);
    }
    node_sum - p.entropy()
}

/// Mutual information I(X; X') = H(X) + H(X') - H(X, X').
pub fn mutual_information(joint: &JointDist) -> f64 {
    joint.input_marginal().entropy() + joint.output_marginal().entropy() - joint.entropy()
}

/// Synergistic information I(X; X') - Σ_v I(X_v; X'_v): whole-system
/// one-step predictive information minus the per-node time-lagged pieces.
/// May be negative.
pub fn synergistic_information(joint: &JointDist) -> f64 {
    let n = joint.shape().num_nodes();
    let mut node_sum = 0.0;
    for v in 0..n {
        let pair = joint.marginal(&[v], &[v]).expect("single node is valid");
        node_sum += entropy_of(&pair.input_sums()) + entropy_of(&pair.output_sums())
            - pair.entropy();
    }
    mutual_information(joint) - node_sum
}

/// Total information flow (stochastic interaction)
/// Σ_v H(X'_v | X_v) - H(X' | X). Nonnegative: it is the KL distance from
/// the kernel to the family of node-wise factorized kernels. Finite for all
/// valid joints, deterministic kernels included.
pub fn total_information_flow(joint: &JointDist) -> f64 {
    let n = joint.shape().num_nodes();
    let input_entropy = joint.input_marginal().entropy();
    let mut node_sum = 0.0;
    for v in 0..n {
        let pair = joint.marginal(&[v], &[v]).expect("single node is valid");
        node_sum += pair.entropy() - entropy_of(&pair.input_sums());
    }
    let whole_conditional = joint.entropy() - input_entropy;
    node_sum - whole_conditional
}

/// Gradient of p -> IF(p, P) at fixed kernel, one entry per state, in bits
/// per unit mass. Meaningful at input distributions whose per-node pair
/// marginals dominate the kernel's (always true for strictly positive p);
/// entries at undominated states come out infinite, reflecting the one-sided
/// derivative there.
pub fn if_gradient(p: &ProbVector, kernel: &StochMatrix) -> Vec<f64> {
    let shape = p.shape();
    let states = shape.num_states();
    let n = shape.num_nodes();

    // per-state, per-node probability that the node updates to +1
    let mut plus = vec![0.0; states * n];
    for x in 0..states {
        let row = kernel.row(x);
        for (y, &k) in row.iter().enumerate() {
            if k != 0.0 {
                for v in 0..n {
                    if (y >> v) & 1 == 1 {
                        plus[x * n + v] += k;
                    }
                }
            }
        }
    }

    // per-node joint tables m_v(a, b), a/b in {0 = -1, 1 = +1}
    let mut tables = vec![[[0.0f64; 2]; 2]; n];
    for x in 0..states {
        let px = p.get(x);
        if px == 0.0 {
            continue;
        }
        for v in 0..n {
            let a = (x >> v) & 1;
            let pb = plus[x * n + v];
            tables[v][a][1] += px * pb;
            tables[v][a][0] += px * (1.0 - pb);
        }
    }

    let mut grad = vec![0.0; states];
    for x in 0..states {
        let mut g = 0.0;
        for v in 0..n {
            let a = (x >> v) & 1;
            let mu = tables[v][a][0] + tables[v][a][1];
            let pb = plus[x * n + v];
            for (b, weight) in [(0usize, 1.0 - pb), (1usize, pb)] {
                if weight > 0.0 {
                    g -= weight * (tables[v][a][b] / mu).ln();
                }
            }
        }
        for &k in kernel.row(x) {
            if k > 0.0 {
                g += k * k.ln();
            }
        }
        grad[x] = g / LN_2;
    }
    grad
}
