//! Transition kernels of synchronous Boltzmann-machine dynamics, stationary
//! distributions, and the deterministic (infinite-β) limit as a functional
//! graph with attractor cycles.
//!
//! The nodal update is the positive-argument sigmoid rule
//!
//!   Pr(X'_i = +1 | X) = 1 / (1 + exp(-2 β Σ_j x_j w_ji)),
//!
//! applied synchronously and independently per node, so each kernel row is a
//! product of per-node Bernoulli factors. Infinite β is a separate type
//! ([`DeterministicMap`]) rather than a float limit: its structural zeros and
//! non-unique stationary distributions need different algorithms.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::statespace::{ProbVector, StochMatrix, SystemShape};

/// Directed connection weights; `get(j, i)` is the weight from node j to
/// node i (row j, column i in the CSV form).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    shape: SystemShape,
    w: Vec<f64>,
}

impl WeightMatrix {
    pub fn new(shape: SystemShape, w: Vec<f64>) -> Result<Self> {
        let n = shape.num_nodes();
        if w.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {}x{} weights, got {} entries",
                n,
                n,
                w.len()
            )));
        }
        if let Some(bad) = w.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite weight {bad}")));
        }
        Ok(WeightMatrix { shape, w })
    }

    pub fn zeros(shape: SystemShape) -> Self {
        let n = shape.num_nodes();
        WeightMatrix {
            shape,
            w: vec![0.0; n * n],
        }
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    #[inline]
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.w[from * self.shape.num_nodes() + to]
    }

    pub fn set(&mut self, from: usize, to: usize, value: f64) {
        self.w[from * self.shape.num_nodes() + to] = value;
    }

    pub fn entries(&self) -> &[f64] {
        &self.w
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.shape.num_nodes();
        (0..n).all(|i| (i + 1..n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Zero the self-couplings in place.
    pub fn zero_diagonal(&mut self) {
        for i in 0..self.shape.num_nodes() {
            self.set(i, i, 0.0);
        }
    }

    /// Local field h_i(x) = Σ_j x_j w_ji at every node, for one input state.
    pub fn local_fields(&self, state: usize) -> Vec<f64> {
        let n = self.shape.num_nodes();
        let mut h = vec![0.0; n];
        for j in 0..n {
            let xj = self.shape.spin(state, j) as f64;
            let row = &self.w[j * n..(j + 1) * n];
            for (hi, &wji) in h.iter_mut().zip(row) {
                *hi += xj * wji;
            }
        }
        h
    }

    /// Hopfield energy E(x) = -1/2 Σ_ij w_ij x_i x_j.
    pub fn energy(&self, state: usize) -> f64 {
        let n = self.shape.num_nodes();
        let mut total = 0.0;
        for i in 0..n {
            let xi = self.shape.spin(state, i) as f64;
            for j in 0..n {
                total += self.get(i, j) * xi * self.shape.spin(state, j) as f64;
            }
        }
        -0.5 * total
    }

    /// Step-function dynamics of the infinite-β limit. Zero local field
    /// resolves to +1 (fixed tie rule, for reproducibility).
    pub fn deterministic_map(&self) -> DeterministicMap {
        let states = self.shape.num_states();
        let mut next = Vec::with_capacity(states);
        for x in 0..states {
            let mut y = 0usize;
            for (i, &hi) in self.local_fields(x).iter().enumerate() {
                if hi >= 0.0 {
                    y |= 1 << i;
                }
            }
            next.push(y);
        }
        DeterministicMap {
            shape: self.shape,
            next,
        }
    }

    /// CSV text: `# shape N=<n>` then N rows of N weights, w_ji at row j
    /// column i.
    pub fn to_csv_string(&self) -> String {
        let n = self.shape.num_nodes();
        let mut out = String::new();
        let _ = writeln!(out, "# shape N={n}");
        for j in 0..n {
            let row: Vec<String> = (0..n).map(|i| self.get(j, i).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    /// Parses N rows of N comma-separated weights. `#` comment lines are
    /// skipped; the `# shape N=<n>` header is optional (the row count fixes N).
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cells: Result<Vec<f64>> = line
                .split(',')
                .map(|c| {
                    c.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line: line_no + 1,
                        message: format!("bad number {:?}", c.trim()),
                    })
                })
                .collect();
            rows.push((line_no + 1, cells?));
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                line: 1,
                message: "empty weight matrix".into(),
            });
        }
        let n = rows.len();
        for (line, row) in &rows {
            if row.len() != n {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("expected {n} columns, found {}", row.len()),
                });
            }
        }
        let shape = SystemShape::new(n)?;
        WeightMatrix::new(shape, rows.into_iter().flat_map(|(_, r)| r).collect())
    }
}

/// A synchronous stochastic binary network: weights plus a finite inverse
/// temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct BoltzmannMachine {
    weights: WeightMatrix,
    beta: f64,
}

impl BoltzmannMachine {
    pub fn new(weights: WeightMatrix, beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "beta must be finite and >= 0, got {beta}"
            )));
        }
        Ok(BoltzmannMachine { weights, beta })
    }

    pub fn shape(&self) -> SystemShape {
        self.weights.shape()
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Per-node probability of updating to +1 from the given input state.
    pub fn update_probabilities(&self, state: usize) -> Vec<f64> {
        self.weights
            .local_fields(state)
            .into_iter()
            .map(|h| sigmoid(2.0 * self.beta * h))
            .collect()
    }

    /// The full synchronous kernel, P(x, x') = Π_v Pr(X'_v = x'_v | X = x).
    /// Every entry is strictly positive at finite β (up to f64 underflow at
    /// extreme β; the default experiment ranges stay far from it).
    pub fn transition_matrix(&self) -> StochMatrix {
        let shape = self.shape();
        let states = shape.num_states();
        let n = shape.num_nodes();
        let mut data = vec![0.0; states * states];
        for x in 0..states {
            let plus = self.update_probabilities(x);
            let row = &mut data[x * states..(x + 1) * states];
            row[0] = 1.0;
            // peel one node at a time: states with bit v set get the +1
            // factor, the rest get the complement
            for v in 0..n {
                let bit = 1usize << v;
                let (pv, qv) = (plus[v], 1.0 - plus[v]);
                for y in (0..states).rev() {
                    if y & bit == 0 {
                        let base = row[y];
                        row[y | bit] = base * pv;
                        row[y] = base * qv;
                    }
                }
            }
        }
        StochMatrix::from_rows(shape, data).expect("rows are products of Bernoulli factors")
    }
}

#[inline]
fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Unique stationary distribution of a strictly positive kernel: the p with
/// p P = p.
///
/// Backed by Grassmann–Taksar–Heyman state reduction (subtraction-free, so
/// entrywise accurate even for nearly reducible chains, where the spectral
/// gap makes plain power iteration useless). The result is verified against
/// the contract `max_x' |(pP)(x') - p(x')| < tol`; power iteration from the
/// GTH output runs as a fallback refinement if verification fails.
pub fn stationary_distribution(
    kernel: &StochMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<ProbVector> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !kernel.is_strictly_positive() {
        return Err(Error::Precondition(
            "stationary_distribution needs a strictly positive kernel; \
             use the attractor machinery for deterministic dynamics"
                .into(),
        ));
    }
    let shape = kernel.shape();
    let mut p = gth_stationary(kernel);
    let mut residual = stationarity_residual(&p, kernel);
    if residual >= tol {
        // refinement: plain power iteration from the GTH output
        let states = shape.num_states();
        let mut next = vec![0.0; states];
        for iterations in 0..max_iter {
            next.iter_mut().for_each(|v| *v = 0.0);
            for (x, &px) in p.iter().enumerate() {
                for (acc, &k) in next.iter_mut().zip(kernel.row(x)) {
                    *acc += px * k;
                }
            }
            let mass: f64 = next.iter().sum();
            next.iter_mut().for_each(|v| *v /= mass);
            std::mem::swap(&mut p, &mut next);
            residual = stationarity_residual(&p, kernel);
            if residual < tol {
                break;
            }
            if iterations + 1 == max_iter {
                return Err(Error::Convergence {
                    iterations: max_iter,
                    residual,
                });
            }
        }
    }
    // one kernel application keeps the result strictly positive even if
    // underflow produced exact zeros
    if p.iter().any(|&v| v <= 0.0) {
        let states = shape.num_states();
        let mut next = vec![0.0; states];
        for (x, &px) in p.iter().enumerate() {
            if px > 0.0 {
                for (acc, &k) in next.iter_mut().zip(kernel.row(x)) {
                    *acc += px * k;
                }
            }
        }
        let mass: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= mass);
        if stationarity_residual(&next, kernel) < tol {
            p = next;
        }
    }
    ProbVector::new(shape, p)
}

fn stationarity_residual(p: &[f64], kernel: &StochMatrix) -> f64 {
    let states = kernel.shape().num_states();
    let mut image = vec![0.0; states];
    for (x, &px) in p.iter().enumerate() {
        if px != 0.0 {
            for (acc, &k) in image.iter_mut().zip(kernel.row(x)) {
                *acc += px * k;
            }
        }
    }
    image
        .iter()
        .zip(p)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// GTH state reduction. Censors states one at a time from the top; all
/// arithmetic is on nonnegative numbers (no cancellation).
fn gth_stationary(kernel: &StochMatrix) -> Vec<f64> {
    let n = kernel.shape().num_states();
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for x in 0..n {
        a.extend_from_slice(kernel.row(x));
    }
    let mut leave = vec![0.0; n];
    for k in (1..n).rev() {
        let s: f64 = a[k * n..k * n + k].iter().sum();
        leave[k] = s;
        for j in 0..k {
            a[k * n + j] /= s;
        }
        for i in 0..k {
            let f = a[i * n + k];
            if f != 0.0 {
                for j in 0..k {
                    a[i * n + j] += f * a[k * n + j];
                }
            }
        }
    }
    let mut mu = vec![0.0; n];
    mu[0] = 1.0;
    for k in 1..n {
        let acc: f64 = (0..k).map(|i| mu[i] * a[i * n + k]).sum();
        mu[k] = acc / leave[k];
    }
    let total: f64 = mu.iter().sum();
    mu.iter_mut().for_each(|v| *v /= total);
    mu
}

/// The functional graph of the infinite-β dynamics: every state has exactly
/// one successor.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicMap {
    shape: SystemShape,
    next: Vec<usize>,
}

impl DeterministicMap {
    pub fn new(shape: SystemShape, next: Vec<usize>) -> Result<Self> {
        if next.len() != shape.num_states() {
            return Err(Error::InvalidArgument(format!(
                "expected {} successors, got {}",
                shape.num_states(),
                next.len()
            )));
        }
        if let Some(&bad) = next.iter().find(|&&y| y >= shape.num_states()) {
            return Err(Error::InvalidArgument(format!(
                "successor {bad} out of range"
            )));
        }
        Ok(DeterministicMap { shape, next })
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    #[inline]
    pub fn next(&self, state: usize) -> usize {
        self.next[state]
    }

    pub fn successors(&self) -> &[usize] {
        &self.next
    }

    /// The map as a 0/1 stochastic matrix.
    pub fn to_stoch_matrix(&self) -> StochMatrix {
        let n = self.shape.num_states();
        let mut data = vec![0.0; n * n];
        for (x, &y) in self.next.iter().enumerate() {
            data[x * n + y] = 1.0;
        }
        StochMatrix::from_rows(self.shape, data).expect("rows are unit vectors")
    }

    /// All periodic orbits of the map, with basin sizes. Every state's
    /// forward orbit lands in exactly one cycle, so the basins partition the
    /// state space.
    pub fn attractors(&self) -> AttractorSet {
        let n = self.shape.num_states();
        // 0 = unvisited, 1 = on current path, 2 = resolved
        let mut color = vec![0u8; n];
        let mut cycle_of = vec![usize::MAX; n];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut path = Vec::new();
        for start in 0..n {
            if color[start] != 0 {
                continue;
            }
            path.clear();
            let mut s = start;
            while color[s] == 0 {
                color[s] = 1;
                path.push(s);
                s = self.next[s];
            }
            let id = if color[s] == 1 {
                // new cycle: path suffix from the first occurrence of s
                let pos = path.iter().position(|&t| t == s).unwrap();
                let cycle: Vec<usize> = path[pos..].to_vec();
                let id = cycles.len();
                for &t in &cycle {
                    cycle_of[t] = id;
                }
                cycles.push(cycle);
                id
            } else {
                cycle_of[s]
            };
            for &t in &path {
                color[t] = 2;
                if cycle_of[t] == usize::MAX {
                    cycle_of[t] = id;
                }
            }
        }
        // canonical order: rotate each cycle to start at its smallest state,
        // sort cycles by that state
        for cycle in &mut cycles {
            let (pos, _) = cycle.iter().enumerate().min_by_key(|&(_, &s)| s).unwrap();
            cycle.rotate_left(pos);
        }
        let mut order: Vec<usize> = (0..cycles.len()).collect();
        order.sort_by_key(|&i| cycles[i][0]);
        let rank: Vec<usize> = {
            let mut r = vec![0; cycles.len()];
            for (new_id, &old_id) in order.iter().enumerate() {
                r[old_id] = new_id;
            }
            r
        };
        let mut sorted = vec![Vec::new(); cycles.len()];
        for (old_id, cycle) in cycles.into_iter().enumerate() {
            sorted[rank[old_id]] = cycle;
        }
        let mut basin_sizes = vec![0usize; sorted.len()];
        for &id in &cycle_of {
            basin_sizes[rank[id]] += 1;
        }
        AttractorSet {
            shape: self.shape,
            cycles: sorted,
            basin_sizes,
        }
    }
}

/// The periodic orbits of a [`DeterministicMap`] and the size of each basin
/// of attraction.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractorSet {
    shape: SystemShape,
    cycles: Vec<Vec<usize>>,
    basin_sizes: Vec<usize>,
}

impl AttractorSet {
    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn basin_sizes(&self) -> &[usize] {
        &self.basin_sizes
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    /// The vertices of the stationary polytope: one uniform distribution per
    /// cycle. Every stationary distribution of the map is a convex
    /// combination of these.
    pub fn stationary_vertices(&self) -> Vec<ProbVector> {
        self.cycles
            .iter()
            .map(|cycle| {
                let mut probs = vec![0.0; self.shape.num_states()];
                let mass = 1.0 / cycle.len() as f64;
                for &s in cycle {
                    probs[s] = mass;
                }
                ProbVector::new(self.shape, probs).expect("uniform cycle measure")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: usize) -> SystemShape {
        SystemShape::new(n).unwrap()
    }

    fn machine(n: usize, w: Vec<f64>, beta: f64) -> BoltzmannMachine {
        BoltzmannMachine::new(WeightMatrix::new(shape(n), w).unwrap(), beta).unwrap()
    }

    #[test]
    fn beta_zero_kernel_is_uniform() {
        let m = machine(3, vec![0.3; 9], 0.0);
        let k = m.transition_matrix();
        for x in 0..8 {
            for y in 0..8 {
                assert!((k.get(x, y) - 0.125).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn single_node_sigmoid_value() {
        // w00 = 1, beta = 1, x = +1: Pr(X' = +1) = 1/(1 + e^-2)
        let m = machine(1, vec![1.0], 1.0);
        let k = m.transition_matrix();
        let expect = 1.0 / (1.0 + (-2.0f64).exp());
        assert!((expect - 0.880797077977882).abs() < 1e-12);
        assert!((k.get(1, 1) - expect).abs() < 1e-15);
        assert!((k.get(1, 0) - (1.0 - expect)).abs() < 1e-15);
    }

    #[test]
    fn rows_sum_to_one_and_stay_positive() {
        let m = machine(3, vec![0.7, -0.2, 0.5, 0.1, -0.9, 0.3, 0.4, 0.0, -0.6], 2.0);
        let k = m.transition_matrix();
        assert!(k.is_strictly_positive());
        for x in 0..8 {
            let s: f64 = k.row(x).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn large_beta_approaches_deterministic_map() {
        // identity weights, beta = 50: row mass concentrates on the map image
        let w = WeightMatrix::new(shape(2), vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let m = BoltzmannMachine::new(w.clone(), 50.0).unwrap();
        let k = m.transition_matrix();
        let d = w.deterministic_map();
        for x in 0..4 {
            let argmax = k
                .row(x)
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            assert_eq!(argmax, d.next(x));
            assert!(k.get(x, d.next(x)) > 1.0 - 1e-12);
        }
    }

    #[test]
    fn stationary_of_uniform_kernel_is_uniform() {
        let s = shape(2);
        let p = stationary_distribution(&StochMatrix::uniform(s), 1e-13, 1_000_000).unwrap();
        for x in 0..4 {
            assert!((p.get(x) - 0.25).abs() < 1e-13);
        }
    }

    #[test]
    fn stationary_two_state_hand_solution() {
        // p P = p for P = ((0.9,0.1),(0.5,0.5)) has p = (5/6, 1/6)
        let s = shape(1);
        let k = StochMatrix::from_rows(s, vec![0.9, 0.1, 0.5, 0.5]).unwrap();
        let p = stationary_distribution(&k, 1e-13, 1_000_000).unwrap();
        assert!((p.get(0) - 5.0 / 6.0).abs() < 1e-12);
        assert!((p.get(1) - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn stationary_residual_meets_contract() {
        let m = machine(3, vec![0.9, -0.4, 0.2, 0.5, 0.8, -0.7, -0.1, 0.3, 0.6], 1.5);
        let k = m.transition_matrix();
        let p = stationary_distribution(&k, 1e-13, 1_000_000).unwrap();
        assert!(stationarity_residual(p.probs(), &k) < 1e-13);
        assert!(p.probs().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn stationary_rejects_non_positive_kernel() {
        let s = shape(1);
        let k = StochMatrix::identity(s);
        assert!(matches!(
            stationary_distribution(&k, 1e-13, 100),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn stationary_agrees_with_power_iteration() {
        // independent route: plain power iteration from a non-uniform start
        let m = machine(2, vec![0.6, -0.3, 0.2, 0.5], 0.8);
        let k = m.transition_matrix();
        let p = stationary_distribution(&k, 1e-13, 1_000_000).unwrap();
        let mut q = vec![0.7, 0.1, 0.1, 0.1];
        for _ in 0..10_000 {
            let mut next = vec![0.0; 4];
            for (x, &qx) in q.iter().enumerate() {
                for (acc, &kv) in next.iter_mut().zip(k.row(x)) {
                    *acc += qx * kv;
                }
            }
            q = next;
        }
        for x in 0..4 {
            assert!((p.get(x) - q[x]).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_map_tie_rule() {
        // all-zero weights: every local field is 0, ties resolve to +1
        let w = WeightMatrix::zeros(shape(3));
        let d = w.deterministic_map();
        for x in 0..8 {
            assert_eq!(d.next(x), 7);
        }
    }

    #[test]
    fn deterministic_map_fixes_stored_pattern() {
        // single Hebb pattern xi: h_i(xi) = N xi_i, so xi and -xi are fixed
        let s = shape(3);
        let xi = [1i8, -1, 1];
        let mut w = WeightMatrix::zeros(s);
        for i in 0..3 {
            for j in 0..3 {
                w.set(i, j, xi[i] as f64 * xi[j] as f64);
            }
        }
        let d = w.deterministic_map();
        let xi_idx = s.encode_state(&xi).unwrap();
        let neg_idx = s.encode_state(&[-1, 1, -1]).unwrap();
        assert_eq!(d.next(xi_idx), xi_idx);
        assert_eq!(d.next(neg_idx), neg_idx);
    }

    /// Brute-force orbit oracle: repeatedly apply the map and collect the
    /// set of states that recur.
    fn recurrent_states_oracle(d: &DeterministicMap) -> Vec<usize> {
        let n = d.shape().num_states();
        let mut recurrent = vec![false; n];
        for start in 0..n {
            let mut s = start;
            // n steps always reach a cycle; n more traverse it
            for _ in 0..n {
                s = d.next(s);
            }
            let anchor = s;
            loop {
                recurrent[s] = true;
                s = d.next(s);
                if s == anchor {
                    break;
                }
            }
        }
        (0..n).filter(|&s| recurrent[s]).collect()
    }

    #[test]
    fn antisymmetric_two_node_orbit() {
        // w01 = 1, w10 = -1: h = (-x1, x0), a single 4-cycle
        let mut w = WeightMatrix::zeros(shape(2));
        w.set(0, 1, 1.0);
        w.set(1, 0, -1.0);
        let d = w.deterministic_map();
        let a = d.attractors();
        assert_eq!(a.num_cycles(), 1);
        assert_eq!(a.cycles()[0].len(), 4);
        assert_eq!(a.basin_sizes(), &[4]);
        let oracle = recurrent_states_oracle(&d);
        let mut found: Vec<usize> = a.cycles()[0].clone();
        found.sort_unstable();
        assert_eq!(found, oracle);
    }

    #[test]
    fn identity_map_attractors() {
        let s = shape(3);
        let d = DeterministicMap::new(s, (0..8).collect()).unwrap();
        let a = d.attractors();
        assert_eq!(a.num_cycles(), 8);
        assert!(a.cycles().iter().all(|c| c.len() == 1));
        assert!(a.basin_sizes().iter().all(|&b| b == 1));
        // the stationary polytope of the identity has every point mass
        let vertices = a.stationary_vertices();
        for (x, v) in vertices.iter().enumerate() {
            assert_eq!(v.probs(), ProbVector::dirac(s, x).probs());
        }
    }

    #[test]
    fn two_state_swap_map_single_cycle() {
        let s = shape(1);
        let d = DeterministicMap::new(s, vec![1, 0]).unwrap();
        let a = d.attractors();
        assert_eq!(a.num_cycles(), 1);
        assert_eq!(a.cycles()[0], vec![0, 1]);
    }

    #[test]
    fn hebb_pattern_attractors_contain_both_fixed_points() {
        let s = shape(3);
        let xi = [1i8, 1, -1];
        let mut w = WeightMatrix::zeros(s);
        for i in 0..3 {
            for j in 0..3 {
                w.set(i, j, xi[i] as f64 * xi[j] as f64);
            }
        }
        let a = w.deterministic_map().attractors();
        let xi_idx = s.encode_state(&xi).unwrap();
        let neg_idx = s.encode_state(&[-1, -1, 1]).unwrap();
        let fixed: Vec<usize> = a
            .cycles()
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| c[0])
            .collect();
        assert!(fixed.contains(&xi_idx));
        assert!(fixed.contains(&neg_idx));
        assert_eq!(a.basin_sizes().iter().sum::<usize>(), 8);
    }

    #[test]
    fn stationary_vertices_are_stationary_and_mix() {
        let mut w = WeightMatrix::zeros(shape(2));
        w.set(0, 1, 1.0);
        w.set(1, 0, -1.0);
        w.set(0, 0, 2.0); // make node 0 sticky so several cycles can appear
        let d = w.deterministic_map();
        let a = d.attractors();
        let kernel = d.to_stoch_matrix();
        let vertices = a.stationary_vertices();
        assert_eq!(vertices.len(), a.num_cycles());
        for v in &vertices {
            assert!(stationarity_residual(v.probs(), &kernel) < 1e-15);
        }
        if vertices.len() > 1 {
            let weights = vec![1.0 / vertices.len() as f64; vertices.len()];
            let mixed = ProbVector::mix(&vertices, &weights).unwrap();
            assert!(stationarity_residual(mixed.probs(), &kernel) < 1e-15);
        }
    }

    #[test]
    fn single_cycle_vertex_mass() {
        let s = shape(1);
        let d = DeterministicMap::new(s, vec![1, 0]).unwrap();
        let v = d.attractors().stationary_vertices();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].probs(), &[0.5, 0.5]);
    }

    #[test]
    fn energy_examples() {
        let s = shape(3);
        let zero = WeightMatrix::zeros(s);
        assert_eq!(zero.energy(0), 0.0);

        // single Hebb pattern evaluated at the pattern: -N^2/2
        let xi = [1i8, -1, 1];
        let mut w = WeightMatrix::zeros(s);
        for i in 0..3 {
            for j in 0..3 {
                w.set(i, j, xi[i] as f64 * xi[j] as f64);
            }
        }
        let e = w.energy(s.encode_state(&xi).unwrap());
        assert!((e - (-4.5)).abs() < 1e-12);

        // spin-flip symmetry of the quadratic form
        for x in 0..8 {
            assert!((w.energy(x) - w.energy(7 - x)).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_descends_under_single_flip_updates() {
        // symmetric weights: aligning one node with its interaction field
        // (self-coupling excluded; it is constant in x_i^2) never raises E
        use rand::SeedableRng;
        let s = shape(4);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(51);
        for _ in 0..20 {
            let mut w = WeightMatrix::zeros(s);
            for i in 0..4 {
                for j in 0..=i {
                    let v = rand::Rng::gen_range(&mut rng, -1.0..1.0);
                    w.set(i, j, v);
                    w.set(j, i, v);
                }
            }
            for x in 0..16usize {
                for node in 0..4 {
                    let mut field = 0.0;
                    for j in 0..4 {
                        if j != node {
                            field += s.spin(x, j) as f64 * w.get(j, node);
                        }
                    }
                    let aligned = if field >= 0.0 {
                        x | (1 << node)
                    } else {
                        x & !(1 << node)
                    };
                    assert!(w.energy(aligned) <= w.energy(x) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn weight_csv_roundtrip_and_errors() {
        let w = WeightMatrix::new(shape(2), vec![0.25, -1.5, 0.0, 3.0]).unwrap();
        let text = w.to_csv_string();
        let back = WeightMatrix::from_csv_str(&text).unwrap();
        assert_eq!(w, back);

        match WeightMatrix::from_csv_str("0.1,0.2\n0.3,oops\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match WeightMatrix::from_csv_str("0.1,0.2\n0.3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
